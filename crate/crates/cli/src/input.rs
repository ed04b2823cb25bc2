//! Loading presentations, parameter assignments and lifting data from the
//! command line.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use nichols_core::deform::{admissible_set, LiftingDatum, ParamAssignment, Realization};
use nichols_core::freealg::{letter_name, GenOrder, Letter};
use nichols_core::presdsl::{catalog, parse, parse_scalar, Presentation};
use nichols_core::scalars::FieldElem;

/// A catalog name, or a path to a file in the presentation language. Paths
/// win when both exist.
pub fn load(spec: &str) -> Result<Presentation> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {spec}"))?;
        return parse(&text).with_context(|| spec.to_string());
    }
    Ok(catalog(spec)?)
}

/// `NAME=SCALAR` pairs in command-line order, still unparsed.
pub fn split_lams(raw: &[String]) -> Result<Vec<(String, String)>> {
    raw.iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| anyhow!("--lam expects NAME=SCALAR, got `{s}`"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// Resolves `--lam` pairs against `p`. `all=v` sets every admissible
/// parameter to `v`, skipping the second member of each exclusion pair;
/// named parameters override it wherever they appear.
pub fn lambda(p: &Presentation, pairs: &[(String, String)]) -> Result<ParamAssignment> {
    let scalar = |name: &str, text: &str| -> Result<FieldElem> {
        parse_scalar(text, &p.field, Some(&p.matrix)).with_context(|| format!("--lam {name}={text}"))
    };
    for (k, _) in pairs.iter().filter(|(k, _)| k != "all") {
        if !p.relations.iter().any(|r| r.deformable && r.name == *k) {
            bail!("no deformable relation named `{k}`");
        }
    }
    let mut out = ParamAssignment::new();
    if let Some((_, v)) = pairs.iter().rev().find(|(k, _)| k == "all") {
        let v = scalar("all", v)?;
        let adm = admissible_set(p, None)?;
        for name in &adm.admissible {
            let blocked = adm
                .exclusions
                .iter()
                .any(|(a, b)| b == name && out.contains_key(a) || a == name && out.contains_key(b));
            if !blocked {
                out.insert(name.clone(), v.clone());
            }
        }
    }
    for (k, v) in pairs.iter().filter(|(k, _)| k != "all") {
        out.insert(k.clone(), scalar(k, v)?);
    }
    Ok(out)
}

/// `y2 < y1 < g1 ...`, listing every letter once from smallest to largest.
pub fn order(p: &Presentation, text: &str) -> Result<GenOrder> {
    let theta = p.theta();
    let names: Vec<String> = (0..p.letters()).map(|l| letter_name(l as Letter, theta)).collect();
    let asc = text
        .split('<')
        .map(|t| {
            let t = t.trim();
            names
                .iter()
                .position(|n| n == t)
                .map(|l| l as Letter)
                .ok_or_else(|| anyhow!("--order: unknown letter `{t}`"))
        })
        .collect::<Result<Vec<_>>>()?;
    if asc.len() != names.len() {
        bail!("--order must list all {} letters", names.len());
    }
    GenOrder::from_ascending(&asc).ok_or_else(|| anyhow!("--order repeats a letter"))
}

pub fn group(p: &Presentation, orders: &[u32]) -> Result<Realization> {
    Ok(Realization::new(&p.matrix, orders.to_vec())?)
}

/// A lifting datum file:
///
/// ```text
/// # comment
/// presentation linking-A1xA1
/// group 2 2
/// lam lnk1_2 = 1
/// ```
///
/// `presentation` takes a catalog name or a path relative to the file.
pub fn datum(path: &Path) -> Result<LiftingDatum> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let here = path.parent().unwrap_or(Path::new("."));
    let mut presentation = None;
    let mut orders = None;
    let mut lams = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let at = || format!("{}:{}", path.display(), n + 1);
        let line = line.split('#').next().unwrap_or("").trim();
        let Some((key, rest)) = line.split_once(char::is_whitespace) else {
            if line.is_empty() {
                continue;
            }
            bail!("{}: expected `presentation`, `group` or `lam`", at());
        };
        let rest = rest.trim();
        match key {
            "presentation" => {
                let local: PathBuf = here.join(rest);
                let spec = if local.is_file() { local.to_string_lossy().into_owned() } else { rest.to_string() };
                presentation = Some(load(&spec).with_context(at)?);
            }
            "group" => {
                let m = rest
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<Vec<u32>, _>>()
                    .with_context(at)?;
                orders = Some(m);
            }
            "lam" => {
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| anyhow!("{}: expected `lam NAME = SCALAR`", at()))?;
                lams.push((k.trim().to_string(), v.trim().to_string()));
            }
            other => bail!("{}: unknown key `{other}`", at()),
        }
    }
    let presentation = presentation.ok_or_else(|| anyhow!("{}: no `presentation` line", path.display()))?;
    let realization = orders.map(|m| group(&presentation, &m)).transpose()?;
    let lambda = lambda(&presentation, &lams)?;
    Ok(LiftingDatum {
        presentation,
        realization,
        lambda,
    })
}
