//! Diagram symmetries and isomorphisms between lifting data that differ
//! only in their linking parameters.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::braiding::{diagram, BraidingMatrix};
use crate::deform::LiftingDatum;
use crate::presdsl::RelExpr;
use crate::scalars::FieldElem;

pub const MAX_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsomError {
    #[error("rank {0} is above the brute-force limit {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("parameter `{0}` is not a linking parameter")]
    UnsupportedParameters(String),
    #[error("lifting data have ranks {0} and {1}")]
    RankMismatch(usize, usize),
}

/// Linking parameters keyed by zero-based pairs `(i, j)`, `i < j`.
pub type Linking = BTreeMap<(usize, usize), FieldElem>;

/// `sigma[i] = σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramSymmetry(pub Vec<usize>);

impl DiagramSymmetry {
    pub fn identity(n: usize) -> Self {
        DiagramSymmetry((0..n).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &s) in self.0.iter().enumerate() {
            inv[s] = i;
        }
        DiagramSymmetry(inv)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &DiagramSymmetry) -> Self {
        DiagramSymmetry(inner.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &s)| i == s)
    }
}

/// Cycle notation with one-based points, `()` for the identity.
impl fmt::Display for DiagramSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// All `σ` with `q_ij = q_σ(i)σ(j)`, identity first.
pub fn symmetries(q: &BraidingMatrix) -> Result<Vec<DiagramSymmetry>, IsomError> {
    let n = q.theta();
    if n > MAX_RANK {
        return Err(IsomError::RankTooLarge(n));
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    // lexicographic enumeration starts at the identity
    loop {
        let ok = (0..n).all(|i| (0..n).all(|j| q.get(i, j) == q.get(perm[i], perm[j])));
        if ok {
            out.push(DiagramSymmetry(perm.clone()));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `I(i) = {j : q_kj = q_ki and q_jk = q_ik for all k}`.
pub fn pair_classes(q: &BraidingMatrix) -> Vec<BTreeSet<usize>> {
    let n = q.theta();
    let d = diagram(q);
    (0..n)
        .map(|i| {
            let class: BTreeSet<usize> = (0..n)
                .filter(|&j| (0..n).all(|k| q.get(k, j) == q.get(k, i) && q.get(j, k) == q.get(i, k)))
                .collect();
            for &j in &class {
                if !d.connected(i, j) {
                    let m1 = -FieldElem::one(q.field());
                    debug_assert!(
                        [q.get(i, i), q.get(i, j), q.get(j, i), q.get(j, j)].iter().all(|&e| *e == m1),
                        "unlinked pair in one class must be a -1 cluster"
                    );
                }
            }
            class
        })
        .collect()
}

/// `λ'_ij = (s_i s_j)^{-1} λ_{σ^{-1}(i) σ^{-1}(j)}` for diagonal `s`.
pub fn act_linking(sigma: &DiagramSymmetry, s: &[FieldElem], lambda: &Linking) -> Linking {
    let inv = sigma.inverse();
    let n = sigma.0.len();
    let mut out = Linking::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (inv.0[i], inv.0[j]);
            let Some(v) = lambda.get(&(a.min(b), a.max(b))) else {
                continue;
            };
            let scale = (&s[i] * &s[j]).inv().expect("scaling entries are nonzero");
            let w = &scale * v;
            if !w.is_zero() {
                out.insert((i, j), w);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub sigma: DiagramSymmetry,
    pub s: Vec<FieldElem>,
}

impl Witness {
    pub fn identity(q: &BraidingMatrix) -> Self {
        Witness {
            sigma: DiagramSymmetry::identity(q.theta()),
            s: vec![FieldElem::one(q.field()); q.theta()],
        }
    }

    pub fn apply(&self, lambda: &Linking) -> Linking {
        act_linking(&self.sigma, &self.s, lambda)
    }

    /// Acting by `inner` and then by `self`.
    pub fn compose(&self, inner: &Witness) -> Witness {
        let inv = self.sigma.inverse();
        let s = (0..self.s.len()).map(|i| &self.s[i] * &inner.s[inv.0[i]]).collect();
        Witness {
            sigma: self.sigma.compose(&inner.sigma),
            s,
        }
    }

    pub fn inverse(&self) -> Witness {
        let s = (0..self.s.len())
            .map(|i| self.s[self.sigma.0[i]].inv().expect("scaling entries are nonzero"))
            .collect();
        Witness {
            sigma: self.sigma.inverse(),
            s,
        }
    }
}

fn nonzero_part(l: &Linking) -> Linking {
    l.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect()
}

/// A square root of `v` of the form `z^k` times a rational.
fn sqrt(v: &FieldElem) -> Option<FieldElem> {
    let f = v.field();
    for k in 0..f.order() as i64 {
        let t = FieldElem::root(f, k);
        let Some(r) = (v / &(&t * &t)).as_rational() else {
            continue;
        };
        if r <= num_rational::BigRational::from_integer(0.into()) {
            continue;
        }
        let (p, q) = (r.numer().sqrt(), r.denom().sqrt());
        if &(&p * &p) == r.numer() && &(&q * &q) == r.denom() {
            let root = FieldElem::from_rational(f, &num_rational::BigRational::new(p, q));
            return Some(&t * &root);
        }
    }
    None
}

/// Solves `s_i s_j = c_ij` on each connected piece of the support graph.
fn solve_scaling(n: usize, c: &BTreeMap<(usize, usize), FieldElem>, one: &FieldElem) -> Option<Vec<FieldElem>> {
    let mut adj: Vec<Vec<(usize, &FieldElem)>> = vec![Vec::new(); n];
    for (&(i, j), v) in c {
        adj[i].push((j, v));
        adj[j].push((i, v));
    }
    let mut s: Vec<Option<FieldElem>> = vec![None; n];
    // the highest vertex of each piece keeps s = 1 when the piece is bipartite
    for root in (0..n).rev() {
        if s[root].is_some() {
            continue;
        }
        // s_v = t^{parity} * m_v with t = s_root
        let mut form: BTreeMap<usize, (bool, FieldElem)> = BTreeMap::new();
        form.insert(root, (true, one.clone()));
        let mut stack = vec![root];
        let mut square: Option<FieldElem> = None;
        while let Some(u) = stack.pop() {
            let (pu, mu) = form[&u].clone();
            for &(w, cv) in &adj[u] {
                let cand = (!pu, cv / &mu);
                match form.get(&w) {
                    None => {
                        form.insert(w, cand);
                        stack.push(w);
                    }
                    Some((pw, mw)) if *pw == cand.0 => {
                        if *mw != cand.1 {
                            return None;
                        }
                    }
                    // odd cycle: t^2 = ratio
                    Some((pw, mw)) => {
                        let t2 = if *pw { &cand.1 / mw } else { mw / &cand.1 };
                        match &square {
                            Some(x) if *x != t2 => return None,
                            _ => square = Some(t2),
                        }
                    }
                }
            }
        }
        let t = match square {
            Some(x) => sqrt(&x)?,
            None => one.clone(),
        };
        for (v, (p, m)) in form {
            s[v] = Some(if p { &t * &m } else { &m / &t });
        }
    }
    s.into_iter().collect()
}

/// A pair `(σ, s)` with `act_linking(σ, s, λ) = λ'`, if one exists with `s`
/// diagonal over the ambient field.
pub fn find_witness(q: &BraidingMatrix, lambda: &Linking, target: &Linking) -> Result<Option<Witness>, IsomError> {
    let n = q.theta();
    let (lambda, target) = (nonzero_part(lambda), nonzero_part(target));
    let one = FieldElem::one(q.field());
    for sigma in symmetries(q)? {
        let moved = act_linking(&sigma, &vec![one.clone(); n], &lambda);
        if moved.keys().ne(target.keys()) {
            continue;
        }
        let c: BTreeMap<(usize, usize), FieldElem> = moved.iter().map(|(k, v)| (*k, v / &target[k])).collect();
        if let Some(s) = solve_scaling(n, &c, &one) {
            let w = Witness { sigma, s };
            if w.apply(&lambda) == target {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// The linking parameters of a datum: relations `ad(i, j)` joining
/// different components.
pub fn linking_params(d: &LiftingDatum) -> Result<Linking, IsomError> {
    let p = &d.presentation;
    let dia = diagram(&p.matrix);
    let mut out = Linking::new();
    for (name, v) in &d.lambda {
        if v.is_zero() {
            continue;
        }
        let pair = p.relation(name).and_then(|r| match &r.lhs {
            RelExpr::IteratedAd(ix) if ix.len() == 2 => {
                let (i, j) = (ix[0] as usize, ix[1] as usize);
                (i < j && !dia.connected(i, j)).then_some((i, j))
            }
            _ => None,
        });
        match pair {
            Some(k) => {
                out.insert(k, v.clone());
            }
            None => return Err(IsomError::UnsupportedParameters(name.clone())),
        }
    }
    Ok(out)
}

/// Decides whether two lifting data over the same matrix are related by a
/// diagram symmetry and a diagonal rescaling of the generators.
pub fn isom_linking(d: &LiftingDatum, e: &LiftingDatum) -> Result<Option<Witness>, IsomError> {
    let (p, p2) = (&d.presentation, &e.presentation);
    if p.theta() != p2.theta() {
        return Err(IsomError::RankMismatch(p.theta(), p2.theta()));
    }
    let (a, b) = (linking_params(d)?, linking_params(e)?);
    if p.matrix != p2.matrix {
        return Ok(None);
    }
    find_witness(&p.matrix, &a, &b)
}
