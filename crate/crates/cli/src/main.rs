thread_local! {
    static OUT: std::cell::RefCell<String> = const { std::cell::RefCell::new(String::new()) };
}

/// Stdout is collected and written once at exit, so that a closed pipe
/// ends the output quietly instead of failing mid-report.
macro_rules! out {
    ($($t:tt)*) => {
{
        let s = format!($($t)*);
        OUT.with(|o| o.borrow_mut().push_str(&s));
    }
    };
}

macro_rules! outln {
    ($($t:tt)*) => {{
        out!($($t)*);
        out!("\n");
    }};
}

mod input;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use nichols_core::braiding::diagram;
use nichols_core::deform::{self, admissible_set, build_ideal, lifting_presentation, LiftingDatum, Rejection, VerifyOptions};
use nichols_core::freealg::{Poly, Word};
use nichols_core::groebner::{complete_with, dimension, default_degree_bound, GbConfig, ReductionSystem, Status, Verdict};
use nichols_core::isom::isom_linking;
use nichols_core::presdsl::{catalog, catalog_names, catalog_source, expand_relation, print, DslError, Presentation};
use nichols_core::scalars::FieldElem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use report::{exit, Verification, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "nichols", version, about = "Nichols algebras of diagonal type and their deformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the bundled presentations or print one.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Decide whether the deformation is zero and whether it is flat.
    Verify {
        input: String,
        #[command(flatten)]
        run: RunArgs,
        /// Refuse inadmissible parameters instead of warning.
        #[arg(long)]
        strict: bool,
    },
    /// Classify the deformable relations.
    Admissible {
        input: String,
        /// Orders of the group-likes of a finite realization.
        #[arg(long, value_delimiter = ',')]
        group: Vec<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Dimension of the (deformed) algebra.
    Dim {
        input: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Decide whether two lifting data are isomorphic.
    Isom {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the presentation of the lifting over a finite group.
    Lift {
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        group: Vec<u32>,
        #[arg(long = "lam", value_name = "NAME=SCALAR")]
        lam: Vec<String>,
    },
    /// Print the completed rewriting system.
    Dump {
        input: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the generalized Dynkin diagram.
    Diagram { input: String },
    /// Parse, complete and spot-check a presentation.
    Check {
        input: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random polynomial pairs for the confluence check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        degree_bound: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Verify every catalog entry.
    Batch {
        /// Only `all=SCALAR` is meaningful across entries.
        #[arg(long = "lam", value_name = "all=SCALAR")]
        lam: Vec<String>,
        #[arg(long)]
        degree_bound: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Args)]
struct RunArgs {
    /// Parameter value; repeatable, `all=v` sets every admissible parameter.
    #[arg(long = "lam", value_name = "NAME=SCALAR")]
    lam: Vec<String>,
    #[arg(long)]
    degree_bound: Option<usize>,
    /// Letters from smallest to largest, e.g. `y2 < y1`.
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    json: bool,
    /// Fill in `elapsed_ms`; off by default so reports are reproducible.
    #[arg(long)]
    timings: bool,
}

impl RunArgs {
    fn options(&self, p: &Presentation) -> Result<VerifyOptions> {
        if self.degree_bound == Some(0) {
            bail!("--degree-bound must be at least 1");
        }
        Ok(VerifyOptions {
            degree_bound: self.degree_bound,
            order: self.order.as_deref().map(|o| input::order(p, o)).transpose()?,
            strict: false,
        })
    }
}

fn main() -> ExitCode {
    // clap's own usage errors exit 2, which is taken by unknown entries
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::ERROR as u8 } else { exit::OK as u8 });
        }
    };
    let result = run(cli.command);
    let text = OUT.with(|o| o.take());
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(exit::ERROR as u8);
        }
    }
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| matches!(c.downcast_ref(), Some(DslError::UnknownCatalogEntry(_)))) {
                exit::UNKNOWN_ENTRY
            } else {
                exit::ERROR
            }
        }
    };
    ExitCode::from(code as u8)
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Catalog { action } => cmd_catalog(action),
        Command::Verify { input, run, strict } => cmd_verify(&input, &run, strict),
        Command::Admissible { input, group, json } => cmd_admissible(&input, &group, json),
        Command::Dim { input, run } => cmd_dim(&input, &run),
        Command::Isom { a, b, json } => cmd_isom(&a, &b, json),
        Command::Lift { input, group, lam } => cmd_lift(&input, &group, &lam),
        Command::Dump { input, run } => cmd_dump(&input, &run),
        Command::Diagram { input } => {
            out!("{}", diagram(&input::load(&input)?.matrix));
            Ok(exit::OK)
        }
        Command::Check {
            input,
            seed,
            samples,
            degree_bound,
            json,
        } => cmd_check(&input, seed, samples, degree_bound, json),
        Command::Batch {
            lam,
            degree_bound,
            jobs,
            json,
            timings,
        } => cmd_batch(&lam, degree_bound, jobs, json, timings),
    }
}

fn emit<T: Serialize>(v: &T) -> Result<()> {
    outln!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn warn(ws: &[String]) {
    for w in ws {
        eprintln!("warning: {w}");
    }
}

fn cmd_catalog(action: CatalogAction) -> Result<i32> {
    match action {
        CatalogAction::List => {
            for name in catalog_names() {
                let p = catalog(name)?;
                let note = p.notes.first().map_or("", String::as_str);
                outln!("{name:<24} {note}");
            }
        }
        CatalogAction::Show { name } => out!("{}", catalog_source(&name)?),
    }
    Ok(exit::OK)
}

fn verification(input: &str, run: &RunArgs, strict: bool) -> Result<Verification> {
    let p = input::load(input)?;
    let lambda = input::lambda(&p, &input::split_lams(&run.lam)?)?;
    let opts = VerifyOptions {
        strict,
        ..run.options(&p)?
    };
    let start = Instant::now();
    let r = deform::verify(&p, &lambda, &opts)?;
    let ms = run.timings.then(|| start.elapsed().as_millis() as u64);
    warn(&r.warnings);
    Ok(Verification::new(&p.name, p.theta(), &r, ms))
}

fn cmd_verify(input: &str, run: &RunArgs, strict: bool) -> Result<i32> {
    let v = verification(input, run, strict)?;
    if run.json {
        emit(&v)?;
    } else {
        out!("{}", v.text());
    }
    Ok(v.exit_code())
}

fn cmd_admissible(input: &str, group: &[u32], json: bool) -> Result<i32> {
    let p = input::load(input)?;
    let real = (!group.is_empty()).then(|| input::group(&p, group)).transpose()?;
    let set = admissible_set(&p, real.as_ref())?;
    let reason = |r: &Rejection| match r {
        Rejection::Character => "character",
        Rejection::TrivialGroupLike => "trivial group-like",
    };
    if json {
        let rejected: Vec<_> = set
            .rejected
            .iter()
            .map(|(n, r)| json!({"name": n, "reason": reason(r)}))
            .collect();
        emit(&json!({
            "schema_version": SCHEMA_VERSION,
            "entry": p.name,
            "admissible": set.admissible,
            "rejected": rejected,
            "exclusions": set.exclusions,
        }))?;
    } else {
        for n in &set.admissible {
            outln!("{n:<12} admissible");
        }
        for (n, r) in &set.rejected {
            outln!("{n:<12} rejected ({})", reason(r));
        }
        for (a, b) in &set.exclusions {
            outln!("{a} and {b} are mutually exclusive");
        }
    }
    Ok(exit::OK)
}

/// Completes the deformed ideal alone, without the undeformed comparison.
fn completed(p: &Presentation, run: &RunArgs) -> Result<(ReductionSystem, usize)> {
    let lambda = input::lambda(p, &input::split_lams(&run.lam)?)?;
    let opts = run.options(p)?;
    let ideal = build_ideal(p, &lambda)?;
    warn(&ideal.warnings);
    let d = opts.degree_bound.unwrap_or_else(|| default_degree_bound(&ideal.gens));
    let cfg = GbConfig {
        order: opts.order.or_else(|| p.gen_order()),
        ..GbConfig::new(d)
    };
    Ok((complete_with(&ideal.gens, &cfg)?, d))
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Zero => exit::ZERO,
        Verdict::Inconclusive { .. } => exit::INCONCLUSIVE,
        Verdict::Finite { .. } | Verdict::Infinite { .. } => exit::OK,
    }
}

fn cmd_dim(input: &str, run: &RunArgs) -> Result<i32> {
    let p = input::load(input)?;
    let start = Instant::now();
    let (s, d) = completed(&p, run)?;
    let r = dimension(&s, d);
    let ms = run.timings.then(|| start.elapsed().as_millis() as u64);
    let (dim, hilbert) = match &r.verdict {
        Verdict::Finite { dim, counts } => (Some(*dim), counts.clone()),
        Verdict::Zero => (Some(0), Vec::new()),
        Verdict::Infinite { counts } => (None, counts.clone()),
        Verdict::Inconclusive { .. } => (None, Vec::new()),
    };
    let status = match &r.verdict {
        Verdict::Zero => "zero",
        Verdict::Inconclusive { .. } => "inconclusive",
        Verdict::Finite { .. } => "finite",
        Verdict::Infinite { .. } => "infinite",
    };
    if run.json {
        emit(&json!({
            "schema_version": SCHEMA_VERSION,
            "entry": p.name,
            "status": status,
            "dim": dim,
            "hilbert": hilbert,
            "gb_rules": r.rules,
            "degree_bound": r.degree_bound,
            "elapsed_ms": ms,
        }))?;
    } else {
        match dim {
            Some(d) => outln!("{d}"),
            None => outln!("{status}"),
        }
        if matches!(r.verdict, Verdict::Infinite { .. }) {
            let h: Vec<String> = hilbert.iter().map(u64::to_string).collect();
            outln!("hilbert {}", h.join(" "));
        }
    }
    Ok(verdict_code(&r.verdict))
}

fn cmd_dump(input: &str, run: &RunArgs) -> Result<i32> {
    let p = input::load(input)?;
    let (s, d) = completed(&p, run)?;
    out!("{}", s.dump(p.theta()));
    Ok(verdict_code(&dimension(&s, d).verdict))
}

fn cmd_isom(a: &std::path::Path, b: &std::path::Path, json: bool) -> Result<i32> {
    let (da, db) = (input::datum(a)?, input::datum(b)?);
    let w = isom_linking(&da, &db)?;
    if json {
        let witness = w.as_ref().map(|w| {
            json!({
                "sigma": w.sigma.to_string(),
                "s": w.s.iter().map(FieldElem::to_string).collect::<Vec<_>>(),
            })
        });
        emit(&json!({
            "schema_version": SCHEMA_VERSION,
            "isomorphic": w.is_some(),
            "witness": witness,
        }))?;
    } else {
        match w {
            Some(w) => {
                let s: Vec<String> = w.s.iter().map(FieldElem::to_string).collect();
                outln!("isomorphic: sigma = {}, s = diag({})", w.sigma, s.join(", "));
            }
            None => outln!("not isomorphic"),
        }
    }
    Ok(exit::OK)
}

fn cmd_lift(input: &str, group: &[u32], lam: &[String]) -> Result<i32> {
    let p = input::load(input)?;
    let realization = Some(input::group(&p, group)?);
    let lambda = input::lambda(&p, &input::split_lams(lam)?)?;
    let d = LiftingDatum {
        presentation: p,
        realization,
        lambda,
    };
    out!("{}", print(&lifting_presentation(&d)?));
    Ok(exit::OK)
}

#[derive(Serialize)]
struct CheckReport {
    schema_version: u32,
    entry: String,
    seed: u64,
    samples: usize,
    relations: usize,
    status: &'static str,
    gb_rules: usize,
    degree_bound: usize,
    failures: Vec<String>,
}

fn random_poly(rng: &mut ChaCha8Rng, p: &Presentation) -> Poly {
    let mut out = Poly::zero(&p.field);
    for _ in 0..rng.random_range(1..=4) {
        let len = rng.random_range(0..=4);
        let w = Word((0..len).map(|_| rng.random_range(0..p.letters()) as _).collect());
        out.add_term(w, FieldElem::from_int(&p.field, rng.random_range(-3..=3)));
    }
    out
}

fn cmd_check(input: &str, seed: u64, samples: usize, degree_bound: Option<usize>, json: bool) -> Result<i32> {
    let p = input::load(input)?;
    let mut failures = Vec::new();
    for r in &p.relations {
        let (lhs, _) = expand_relation(r, &p.matrix)?;
        if lhs.degree_of(p.theta()).is_none() {
            failures.push(format!("{}: not homogeneous", r.name));
        }
    }
    let run = RunArgs {
        lam: Vec::new(),
        degree_bound,
        order: None,
        json,
        timings: false,
    };
    let (s, d) = completed(&p, &run)?;
    let state = match s.status() {
        Status::Complete => "complete",
        Status::Truncated(_) => "truncated",
        Status::ContainsOne(_) => "zero",
    };
    if s.is_complete() {
        if let Err((a, b, k)) = s.recheck_overlaps() {
            failures.push(format!("overlap of rules {a} and {b} at {k} does not resolve"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in 0..samples {
            let (a, b) = (random_poly(&mut rng, &p), random_poly(&mut rng, &p));
            let (na, nb) = (s.normal_form(&a), s.normal_form(&b));
            if s.normal_form(&(&a * &b)) != s.normal_form(&(&na * &nb)) {
                failures.push(format!("sample {n}: normal form is not multiplicative"));
            }
        }
    }
    let report = CheckReport {
        schema_version: SCHEMA_VERSION,
        entry: p.name.clone(),
        seed,
        samples,
        relations: p.relations.len(),
        status: state,
        gb_rules: s.len(),
        degree_bound: d,
        failures,
    };
    if json {
        emit(&report)?;
    } else {
        outln!("{}: {} relations, completion {state} with {} rules at degree bound {d}", p.name, report.relations, report.gb_rules);
        if s.is_complete() {
            outln!("{samples} confluence samples with seed {seed}");
        }
        for f in &report.failures {
            outln!("FAILED {f}");
        }
    }
    Ok(if !report.failures.is_empty() {
        exit::ERROR
    } else {
        match s.status() {
            Status::Complete => exit::OK,
            Status::Truncated(_) => exit::INCONCLUSIVE,
            Status::ContainsOne(_) => exit::ZERO,
        }
    })
}

fn cmd_batch(lam: &[String], degree_bound: Option<usize>, jobs: usize, json: bool, timings: bool) -> Result<i32> {
    let pairs = input::split_lams(lam)?;
    if let Some((k, _)) = pairs.iter().find(|(k, _)| k != "all") {
        bail!("batch accepts only --lam all=SCALAR, got `{k}`");
    }
    let run = RunArgs {
        lam: lam.to_vec(),
        degree_bound,
        order: None,
        json,
        timings,
    };
    let names: Vec<&str> = catalog_names().collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<(String, Result<Verification, String>)> = pool.install(|| {
        names
            .par_iter()
            .map(|&n| (n.to_string(), verification(n, &run, false).map_err(|e| format!("{e:#}"))))
            .collect()
    });
    let mut code = exit::OK;
    for (_, r) in &results {
        code = code.max(match r {
            Ok(v) => v.exit_code(),
            Err(_) => exit::ERROR,
        });
    }
    if results.iter().any(|(_, r)| r.is_err()) {
        code = exit::ERROR;
    }
    if json {
        let reports: Vec<&Verification> = results.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
        let errors: Vec<_> = results
            .iter()
            .filter_map(|(n, r)| r.as_ref().err().map(|e| json!({"entry": n, "error": e})))
            .collect();
        emit(&json!({"schema_version": SCHEMA_VERSION, "reports": reports, "errors": errors}))?;
    } else {
        for (n, r) in &results {
            match r {
                Ok(v) => {
                    let dim = v.dim.map_or_else(
                        || if v.finite == Some(false) { "infinite".into() } else { "-".into() },
                        |d| d.to_string(),
                    );
                    let flat = match v.flat {
                        Some(true) => "flat",
                        Some(false) => "not flat",
                        None => "-",
                    };
                    outln!("{n:<24} {:<13} {dim:<8} {flat}", v.status);
                }
                Err(e) => outln!("{n:<24} error: {e}"),
            }
        }
    }
    Ok(code)
}
