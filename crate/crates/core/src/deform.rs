//! Deformed presentations: admissibility of parameters, the verification
//! workflow (Gröbner basis of the deformed ideal against the undeformed
//! one), cut/project reductions, assembly of disconnected diagrams and
//! lifted presentations over a finite abelian group.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::braiding::{diagram, is_admissible, linkable_pairs, BraidingError, BraidingMatrix};
use crate::freealg::{letter_name, GenOrder, Letter, MultiDegree, Poly};
use crate::groebner::{
    complete_with, default_degree_bound, dimension, trace_replay, GbConfig, GbReport, GroebnerError, Trace,
    Verdict,
};
use crate::presdsl::{expand_relation, expr_text, parse, print, ExpandError, Presentation, RelExpr, Relation};
use crate::scalars::{make_field, FieldElem, ScalarError};

/// `λ_r` by relation name; absent names are zero.
pub type ParamAssignment = BTreeMap<String, FieldElem>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeformError {
    #[error("no deformable relation named `{0}`")]
    UnknownParameter(String),
    #[error("parameter `{0}` is not admissible")]
    InadmissibleParameter(String),
    #[error("q({i},{j}) is not an {m}-th root of unity")]
    NotRealizable { i: usize, j: usize, m: u32 },
    #[error("realization has {found} group orders, expected {expected}")]
    RealizationRank { found: usize, expected: usize },
    #[error("vertices {0} and {1} are not joined by an edge")]
    NotAnEdge(usize, usize),
    #[error("cannot cut: relation `{0}` between the two vertices is deformed")]
    IllegalCut(String),
    #[error("cannot project: deformed relation `{0}` involves the vertex")]
    IllegalProjection(String),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("pair ({0},{1}) is not linkable")]
    NotLinkable(usize, usize),
    #[error("a lifting needs a realization")]
    NeedsRealization,
    #[error("relation `{0}` is deformed but not primitive in its stratum")]
    NonPrimitiveStratumDeformed(String),
    #[error("operation is not defined on lifted presentations")]
    Lifted,
    #[error("relation `{name}`: {source}")]
    Expand { name: String, source: ExpandError },
    #[error(transparent)]
    Braiding(#[from] BraidingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Orders `M_i` of the group-likes `g_i` in `Z_{M_1} x ... x Z_{M_θ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    orders: Vec<u32>,
}

impl Realization {
    /// Checks that `χ_i(g_j) = q_ji` defines characters, i.e. `q_ji^{M_j} = 1`.
    pub fn new(q: &BraidingMatrix, orders: Vec<u32>) -> Result<Self, DeformError> {
        if orders.len() != q.theta() {
            return Err(DeformError::RealizationRank {
                found: orders.len(),
                expected: q.theta(),
            });
        }
        for (j, &m) in orders.iter().enumerate() {
            for i in 0..q.theta() {
                if m == 0 || !q.power(j, i, m as i64).is_one() {
                    return Err(DeformError::NotRealizable { i, j, m });
                }
            }
        }
        Ok(Realization { orders })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn group_order(&self) -> u64 {
        self.orders.iter().map(|&m| m as u64).product()
    }

    /// Exponents of `g_α` reduced mod `M`.
    pub fn reduce(&self, alpha: &MultiDegree) -> Vec<u32> {
        alpha.0.iter().zip(&self.orders).map(|(a, m)| a % m).collect()
    }

    pub fn is_trivial(&self, alpha: &MultiDegree) -> bool {
        self.reduce(alpha).iter().all(|&e| e == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingDatum {
    pub presentation: Presentation,
    pub realization: Option<Realization>,
    pub lambda: ParamAssignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// `χ_r ≠ ε`.
    Character,
    /// `g_r = 1` in the finite group.
    TrivialGroupLike,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSet {
    pub admissible: Vec<String>,
    pub rejected: Vec<(String, Rejection)>,
    pub exclusions: Vec<(String, String)>,
}

impl AdmissibleSet {
    pub fn contains(&self, name: &str) -> bool {
        self.admissible.iter().any(|n| n == name)
    }

    /// Subsets of the admissible names allowed by the exclusion pairs.
    pub fn samples(&self) -> Vec<Vec<String>> {
        let n = self.admissible.len();
        assert!(n < 24, "too many parameters to enumerate");
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let pick: Vec<String> = (0..n)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| self.admissible[k].clone())
                .collect();
            let excluded = self
                .exclusions
                .iter()
                .any(|(a, b)| pick.contains(a) && pick.contains(b));
            if !excluded {
                out.push(pick);
            }
        }
        out
    }
}

fn expanded(r: &Relation, q: &BraidingMatrix) -> Result<(Poly, crate::presdsl::LamPoly), DeformError> {
    expand_relation(r, q).map_err(|source| DeformError::Expand {
        name: r.name.clone(),
        source,
    })
}

fn lhs_degree(r: &Relation, q: &BraidingMatrix) -> Result<MultiDegree, DeformError> {
    let (lhs, _) = expanded(r, q)?;
    lhs.degree_of(q.theta()).ok_or_else(|| DeformError::Expand {
        name: r.name.clone(),
        source: ExpandError::NotHomogeneous,
    })
}

/// The realization implied by the `group` header of a lifted presentation.
fn own_realization(p: &Presentation) -> Result<Option<Realization>, DeformError> {
    match &p.group {
        Some(g) => Realization::new(&p.matrix, g.clone()).map(Some),
        None => Ok(None),
    }
}

/// Deformable relations whose parameter may be nonzero.
pub fn admissible_set(p: &Presentation, realization: Option<&Realization>) -> Result<AdmissibleSet, DeformError> {
    let own = own_realization(p)?;
    let real = realization.or(own.as_ref());
    let mut admissible = Vec::new();
    let mut rejected = Vec::new();
    for r in p.relations.iter().filter(|r| r.deformable) {
        let alpha = lhs_degree(r, &p.matrix)?;
        if !is_admissible(&p.matrix, &alpha)? {
            rejected.push((r.name.clone(), Rejection::Character));
        } else if real.is_some_and(|m| m.is_trivial(&alpha)) {
            rejected.push((r.name.clone(), Rejection::TrivialGroupLike));
        } else {
            admissible.push(r.name.clone());
        }
    }
    Ok(AdmissibleSet {
        admissible,
        rejected,
        exclusions: p.exclusions.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    pub gens: Vec<Poly>,
    /// Nonzero parameters outside the admissible set, and violated exclusions.
    pub warnings: Vec<String>,
}

fn check_params(p: &Presentation, lambda: &ParamAssignment) -> Result<Vec<String>, DeformError> {
    for name in lambda.keys() {
        if !p.relations.iter().any(|r| r.deformable && &r.name == name) {
            return Err(DeformError::UnknownParameter(name.clone()));
        }
    }
    let adm = admissible_set(p, None)?;
    let nonzero = |n: &str| lambda.get(n).is_some_and(|v| !v.is_zero());
    let mut warnings = Vec::new();
    for (name, why) in &adm.rejected {
        if nonzero(name) {
            let reason = match why {
                Rejection::Character => "character is not trivial",
                Rejection::TrivialGroupLike => "group-like is trivial",
            };
            warnings.push(format!("lam({name}) is not admissible: {reason}"));
        }
    }
    for (a, b) in &adm.exclusions {
        if nonzero(a) && nonzero(b) {
            warnings.push(format!("lam({a}) and lam({b}) are excluded together"));
        }
    }
    Ok(warnings)
}

/// Generators `lhs - rhs(λ)` of the deformed ideal. Inadmissible parameters
/// are accepted and reported in `warnings`.
pub fn build_ideal(p: &Presentation, lambda: &ParamAssignment) -> Result<Ideal, DeformError> {
    let warnings = check_params(p, lambda)?;
    let mut gens = Vec::with_capacity(p.relations.len());
    for r in &p.relations {
        let (lhs, rhs) = expanded(r, &p.matrix)?;
        gens.push(&lhs - &rhs.evaluate(lambda));
    }
    Ok(Ideal { gens, warnings })
}

/// Like [`build_ideal`] but rejects inadmissible parameters.
pub fn build_ideal_strict(p: &Presentation, lambda: &ParamAssignment) -> Result<Ideal, DeformError> {
    let adm = admissible_set(p, None)?;
    for (name, v) in lambda {
        if !v.is_zero() && !adm.contains(name) && p.relations.iter().any(|r| r.deformable && &r.name == name) {
            return Err(DeformError::InadmissibleParameter(name.clone()));
        }
    }
    build_ideal(p, lambda)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// `None` picks [`default_degree_bound`] of the ideal.
    pub degree_bound: Option<usize>,
    /// Overrides the presentation's `order` line.
    pub order: Option<GenOrder>,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Nonzero,
    Zero,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub lambda: ParamAssignment,
    pub outcome: Outcome,
    pub report: GbReport,
    pub undeformed: GbReport,
    /// Same dimension (finite) or same Hilbert counts up to the bound
    /// (infinite); `None` when either side is zero or inconclusive.
    pub flat: Option<bool>,
    pub ideal: Vec<Poly>,
    pub trace: Option<Trace>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn dim(&self) -> Option<u64> {
        match self.report.verdict {
            Verdict::Finite { dim, .. } => Some(dim),
            Verdict::Zero => Some(0),
            _ => None,
        }
    }
}

fn outcome(v: &Verdict) -> Outcome {
    match v {
        Verdict::Zero => Outcome::Zero,
        Verdict::Finite { .. } | Verdict::Infinite { .. } => Outcome::Nonzero,
        Verdict::Inconclusive { .. } => Outcome::Inconclusive,
    }
}

pub fn is_flat(deformed: &Verdict, undeformed: &Verdict) -> Option<bool> {
    match (deformed, undeformed) {
        (Verdict::Finite { dim: a, .. }, Verdict::Finite { dim: b, .. }) => Some(a == b),
        (Verdict::Infinite { counts: a }, Verdict::Infinite { counts: b }) => Some(a == b),
        (Verdict::Finite { .. }, Verdict::Infinite { .. }) | (Verdict::Infinite { .. }, Verdict::Finite { .. }) => {
            Some(false)
        }
        _ => None,
    }
}

fn run_gb(gens: &[Poly], order: &Option<GenOrder>, d: usize) -> Result<(GbReport, Option<Trace>), DeformError> {
    let mut cfg = GbConfig::new(d);
    cfg.order = order.clone();
    let sys = complete_with(gens, &cfg)?;
    let trace = match sys.is_zero_algebra() {
        Some(t) => {
            let c = trace_replay(t, gens)?;
            if c.as_constant().is_none_or(|c| c.is_zero()) {
                return Err(GroebnerError::CorruptTrace.into());
            }
            Some(t.clone())
        }
        None => None,
    };
    Ok((dimension(&sys, d), trace))
}

/// Gröbner basis of the deformed ideal, its dimension and the flatness
/// comparison with the undeformed ideal.
pub fn verify(p: &Presentation, lambda: &ParamAssignment, opts: &VerifyOptions) -> Result<VerifyReport, DeformError> {
    let ideal = if opts.strict {
        build_ideal_strict(p, lambda)?
    } else {
        build_ideal(p, lambda)?
    };
    let base = build_ideal(p, &ParamAssignment::new())?;
    let d = opts.degree_bound.unwrap_or_else(|| default_degree_bound(&ideal.gens));
    let order = opts.order.clone().or_else(|| p.gen_order());
    let (report, trace) = run_gb(&ideal.gens, &order, d)?;
    let undeformed = if base.gens == ideal.gens {
        report.clone()
    } else {
        run_gb(&base.gens, &order, d)?.0
    };
    let flat = is_flat(&report.verdict, &undeformed.verdict);
    Ok(VerifyReport {
        lambda: lambda.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k.clone(), v.clone())).collect(),
        outcome: outcome(&report.verdict),
        report,
        undeformed,
        flat,
        ideal: ideal.gens,
        trace,
        warnings: ideal.warnings,
    })
}

/// Verifies each nonzero parameter on its own, the others set to zero.
pub fn one_at_a_time(
    p: &Presentation,
    lambda: &ParamAssignment,
    opts: &VerifyOptions,
) -> Result<Vec<(String, VerifyReport)>, DeformError> {
    let mut out = Vec::new();
    for (name, v) in lambda.iter().filter(|(_, v)| !v.is_zero()) {
        let single: ParamAssignment = [(name.clone(), v.clone())].into_iter().collect();
        out.push((name.clone(), verify(p, &single, opts)?));
    }
    Ok(out)
}

/// Reparses the printed form so that rebuilt trees are in canonical shape.
fn canonical(p: &Presentation) -> Presentation {
    let text = print(p);
    match parse(&text) {
        Ok(c) => c,
        Err(e) => panic!("rebuilt presentation does not reparse: {e}\n{text}"),
    }
}

fn nonzero(lambda: &ParamAssignment, name: &str) -> bool {
    lambda.get(name).is_some_and(|v| !v.is_zero())
}

fn mentions(r: &Relation, i: Letter) -> bool {
    let mut g = Vec::new();
    r.lhs.generators(&mut g);
    if let Some(t) = &r.tail {
        t.generators(&mut g);
    }
    g.contains(&i)
}

/// Renumbers strata so that they are contiguous from zero.
fn compact_strata(rels: &mut [Relation]) {
    let used: BTreeSet<u32> = rels.iter().map(|r| r.stratum).collect();
    let rank: BTreeMap<u32, u32> = used.into_iter().zip(0..).collect();
    for r in rels {
        r.stratum = rank[&r.stratum];
    }
}

fn rebuild(
    p: &Presentation,
    matrix: BraidingMatrix,
    map: &[Letter],
    keep: impl Fn(&Relation) -> bool,
) -> Result<Presentation, DeformError> {
    let field = matrix.field().clone();
    let dropped: Vec<String> = p.relations.iter().filter(|r| !keep(r)).map(|r| r.name.clone()).collect();
    let mut relations = Vec::new();
    for r in p.relations.iter().filter(|r| keep(r)) {
        relations.push(Relation {
            lhs: r.lhs.relabel(map, &field, &dropped)?,
            tail: r.tail.as_ref().map(|t| t.relabel(map, &field, &dropped)).transpose()?,
            ..r.clone()
        });
    }
    compact_strata(&mut relations);
    Ok(Presentation {
        name: p.name.clone(),
        field,
        matrix,
        order: None,
        roots: None,
        group: None,
        notes: p.notes.clone(),
        exclusions: p
            .exclusions
            .iter()
            .filter(|(a, b)| !dropped.contains(a) && !dropped.contains(b))
            .cloned()
            .collect(),
        flags: p.flags.clone(),
        relations,
    })
}

/// Disconnects the edge `i - j` (zero-based): `q_ji` becomes `q_ij^{-1}`,
/// the relations living on `{i, j}` are dropped and `x_ij = 0` is added.
pub fn cut(p: &Presentation, i: usize, j: usize, lambda: &ParamAssignment) -> Result<Presentation, DeformError> {
    let theta = p.theta();
    if p.group.is_some() {
        return Err(DeformError::Lifted);
    }
    for v in [i, j] {
        if v >= theta {
            return Err(DeformError::VertexOutOfRange(v));
        }
    }
    if i == j || !diagram(&p.matrix).is_edge(i, j) {
        return Err(DeformError::NotAnEdge(i, j));
    }
    let (a, b) = (i as Letter, j as Letter);
    let between = |r: &Relation| {
        let mut g = Vec::new();
        r.lhs.generators(&mut g);
        g.contains(&a) && g.contains(&b) && g.iter().all(|&l| l == a || l == b)
    };
    if let Some(r) = p.relations.iter().find(|r| between(r) && nonzero(lambda, &r.name)) {
        return Err(DeformError::IllegalCut(r.name.clone()));
    }
    let mut matrix = p.matrix.clone();
    matrix.set(j, i, p.matrix.get(i, j).inv()?);
    let map: Vec<Letter> = (0..theta as Letter).collect();
    let mut out = rebuild(p, matrix, &map, |r| !between(r))?;
    let new = Relation {
        name: format!("cut{}_{}", i + 1, j + 1),
        stratum: 0,
        lhs: RelExpr::IteratedAd(alloc::vec![a, b]),
        tail: None,
        deformable: false,
        primitive: false,
    };
    let at = out.relations.iter().take_while(|r| r.stratum == 0).count();
    out.relations.insert(at, new);
    out.name = format!("{}-cut{}{}", p.name, i + 1, j + 1);
    Ok(canonical(&out))
}

/// Quotient by `y_i` (zero-based): the minor on the other vertices with the
/// relations not involving `i`.
pub fn project(p: &Presentation, i: usize, lambda: &ParamAssignment) -> Result<Presentation, DeformError> {
    let theta = p.theta();
    if p.group.is_some() {
        return Err(DeformError::Lifted);
    }
    if i >= theta {
        return Err(DeformError::VertexOutOfRange(i));
    }
    let v = i as Letter;
    if let Some(r) = p.relations.iter().find(|r| mentions(r, v) && nonzero(lambda, &r.name)) {
        return Err(DeformError::IllegalProjection(r.name.clone()));
    }
    let keep: Vec<usize> = (0..theta).filter(|&k| k != i).collect();
    let map: Vec<Letter> = (0..theta as Letter).map(|k| if k > v { k - 1 } else { k }).collect();
    let mut out = rebuild(p, p.matrix.minor(&keep), &map, |r| !mentions(r, v))?;
    out.roots = p.roots.as_ref().map(|rs| {
        rs.iter()
            .filter(|d| d.0[i] == 0)
            .map(|d| MultiDegree(keep.iter().map(|&k| d.0[k]).collect()))
            .collect()
    });
    out.name = format!("{}-proj{}", p.name, i + 1);
    Ok(canonical(&out))
}

/// Block-diagonal union of `components`, joined by the relations
/// `lnk{i}_{j} = ad(i, j)` for every pair of vertices in different blocks.
///
/// `cross` fixes `q_ij` (zero-based global indices, `i < j`) across blocks;
/// unset entries are `-1` for pairs with a nonzero link and `1` otherwise,
/// and `q_ji = q_ij^{-1}` in all cases. Component relation `r` of block `k`
/// is renamed `b{k}_r`. Returns the presentation and the linking
/// parameters keyed by relation name.
pub fn assemble(
    components: &[Presentation],
    links: &BTreeMap<(usize, usize), FieldElem>,
    cross: &BTreeMap<(usize, usize), FieldElem>,
) -> Result<(Presentation, ParamAssignment), DeformError> {
    use num_integer::Integer;
    if components.iter().any(|c| c.group.is_some()) {
        return Err(DeformError::Lifted);
    }
    let l = components.iter().fold(1u32, |acc, c| acc.lcm(&c.field.order()));
    let field = make_field(l);
    let mut offsets = Vec::new();
    let mut theta = 0;
    for c in components {
        offsets.push(theta);
        theta += c.theta();
    }
    let block = |v: usize| offsets.iter().rposition(|&o| o <= v).expect("offsets start at zero");
    let mut rows = alloc::vec![alloc::vec![FieldElem::one(&field); theta]; theta];
    for (c, &o) in components.iter().zip(&offsets) {
        for a in 0..c.theta() {
            for b in 0..c.theta() {
                rows[o + a][o + b] = c.matrix.get(a, b).embed(&field)?;
            }
        }
    }
    let linked = |i: usize, j: usize| links.get(&(i, j)).is_some_and(|v| !v.is_zero());
    for i in 0..theta {
        for j in i + 1..theta {
            if block(i) == block(j) {
                continue;
            }
            let qij = match cross.get(&(i, j)) {
                Some(v) => v.embed(&field)?,
                None if linked(i, j) => -FieldElem::one(&field),
                None => FieldElem::one(&field),
            };
            rows[j][i] = qij.inv()?;
            rows[i][j] = qij;
        }
    }
    let matrix = BraidingMatrix::new(&field, rows)?;
    let linkable = linkable_pairs(&matrix);
    for (&(i, j), v) in links {
        if i >= j || j >= theta || block(i) == block(j) || (!v.is_zero() && !linkable.contains(&(i, j))) {
            return Err(DeformError::NotLinkable(i, j));
        }
    }

    let mut relations = Vec::new();
    let mut exclusions = Vec::new();
    let mut notes = Vec::new();
    for (k, (c, &o)) in components.iter().zip(&offsets).enumerate() {
        let rename = |n: &str| format!("b{}_{}", k + 1, n);
        let map: Vec<Letter> = (0..c.theta()).map(|a| (o + a) as Letter).collect();
        for r in &c.relations {
            let tail = match &r.tail {
                Some(t) => Some(rename_lams(&t.relabel(&map, &field, &[])?, &rename)),
                None if r.deformable => Some(RelExpr::Lam(rename(&r.name))),
                None => None,
            };
            relations.push(Relation {
                name: rename(&r.name),
                lhs: r.lhs.relabel(&map, &field, &[])?,
                tail,
                ..r.clone()
            });
        }
        exclusions.extend(c.exclusions.iter().map(|(a, b)| (rename(a), rename(b))));
        notes.push(format!("block {}: {}", k + 1, c.name));
    }
    let mut params = ParamAssignment::new();
    for i in 0..theta {
        for j in i + 1..theta {
            if block(i) == block(j) {
                continue;
            }
            let name = format!("lnk{}_{}", i + 1, j + 1);
            if let Some(v) = links.get(&(i, j)) {
                params.insert(name.clone(), v.embed(&field)?);
            }
            relations.push(Relation {
                name,
                stratum: 0,
                lhs: RelExpr::IteratedAd(alloc::vec![i as Letter, j as Letter]),
                tail: None,
                deformable: true,
                primitive: true,
            });
        }
    }
    relations.sort_by_key(|r| r.stratum);
    let roots = components
        .iter()
        .zip(&offsets)
        .map(|(c, &o)| {
            c.roots.as_ref().map(|rs| {
                rs.iter()
                    .map(|d| {
                        let mut v = alloc::vec![0u32; theta];
                        v[o..o + c.theta()].copy_from_slice(&d.0);
                        MultiDegree(v)
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect::<Option<Vec<_>>>()
        .map(|v| v.concat());
    let name = components.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join("+");
    let p = Presentation {
        name,
        field,
        matrix,
        order: None,
        roots,
        group: None,
        notes,
        exclusions,
        flags: Vec::new(),
        relations,
    };
    Ok((canonical(&p), params))
}

fn rename_lams(e: &RelExpr, rename: &impl Fn(&str) -> String) -> RelExpr {
    use alloc::boxed::Box;
    let go = |x: &RelExpr| rename_lams(x, rename);
    match e {
        RelExpr::Lam(n) => RelExpr::Lam(rename(n)),
        RelExpr::Bracket(a, b) => RelExpr::Bracket(Box::new(go(a)), Box::new(go(b))),
        RelExpr::Power(a, n) => RelExpr::Power(Box::new(go(a)), *n),
        RelExpr::Scaled(c, a) => RelExpr::Scaled(c.clone(), Box::new(go(a))),
        RelExpr::Product(v) => RelExpr::Product(v.iter().map(go).collect()),
        RelExpr::Sum(v) => RelExpr::Sum(v.iter().map(go).collect()),
        other => other.clone(),
    }
}

/// Presentation of `u(λ)` over the letters `y_1..y_θ, g_1..g_θ`, with the
/// group-likes ordered below the `y`'s. Deformed relations become
/// `r - λ_r (1 - g_r)` with `λ_r` kept symbolic, so the result verifies
/// against the same parameter names; the datum's `λ` only selects which
/// relations must be primitive.
pub fn lifting_presentation(d: &LiftingDatum) -> Result<Presentation, DeformError> {
    let p = &d.presentation;
    if p.group.is_some() {
        return Err(DeformError::Lifted);
    }
    let real = d.realization.as_ref().ok_or(DeformError::NeedsRealization)?;
    Realization::new(&p.matrix, real.orders.clone())?;
    check_params(p, &d.lambda)?;
    let theta = p.theta();
    let g = |i: usize| letter_name((theta + i) as Letter, theta);
    let y = |i: usize| letter_name(i as Letter, theta);

    let mut text = String::new();
    let line = |t: &mut String, s: String| {
        t.push_str(&s);
        t.push('\n');
    };
    line(&mut text, format!("presentation {}-lift", p.name));
    line(&mut text, format!("field {}", p.field.order()));
    line(&mut text, format!("theta {theta}"));
    let header = print(p);
    let matrix_line = header.lines().find(|l| l.starts_with("matrix ")).expect("printer emits the matrix");
    line(&mut text, matrix_line.to_string());
    let orders: Vec<String> = real.orders.iter().map(u32::to_string).collect();
    line(&mut text, format!("group {}", orders.join(" ")));
    let mut asc: Vec<String> = (0..theta).map(g).collect();
    match p.gen_order() {
        Some(o) => asc.extend(o.ascending().iter().map(|&l| y(l as usize))),
        None => asc.extend((0..theta).map(y)),
    }
    line(&mut text, format!("order {}", asc.join(" < ")));
    for n in &p.notes {
        line(&mut text, format!("note {n}"));
    }
    for (a, b) in &p.exclusions {
        line(&mut text, format!("exclude {a} {b}"));
    }
    for f in &p.flags {
        line(&mut text, format!("flag {f}"));
    }
    for i in 0..theta {
        line(&mut text, format!("rel go{} s0 {}^{} - 1", i + 1, g(i), real.orders[i]));
        for j in i + 1..theta {
            line(&mut text, format!("rel gc{}_{} s0 {}*{} - {}*{}", i + 1, j + 1, g(j), g(i), g(i), g(j)));
        }
    }
    for j in 0..theta {
        for i in 0..theta {
            let c = p.matrix.get(j, i);
            line(&mut text, format!("rel gy{}_{} s0 {}*{} - ({c})*{}*{}", j + 1, i + 1, g(j), y(i), y(i), g(j)));
        }
    }
    for r in &p.relations {
        let lhs = expr_text(&r.lhs);
        let s = r.stratum;
        let name = &r.name;
        let deformed = nonzero(&d.lambda, name);
        if deformed && !r.is_primitive() {
            return Err(DeformError::NonPrimitiveStratumDeformed(name.clone()));
        }
        if r.deformable && r.is_primitive() && r.tail.is_none() {
            let exps = real.reduce(&lhs_degree(r, &p.matrix)?);
            let word: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { g(i) } else { format!("{}^{e}", g(i)) })
                .collect();
            let tail = if word.is_empty() {
                format!("lam({name})*(1 - 1)")
            } else {
                format!("lam({name})*(1 - {})", word.join("*"))
            };
            let prim = if r.primitive { " primitive" } else { "" };
            line(&mut text, format!("rel {name} s{s} {lhs}{prim} deform tail {tail}"));
        } else if deformed {
            return Err(DeformError::NonPrimitiveStratumDeformed(name.clone()));
        } else {
            let prim = if r.primitive { " primitive" } else { "" };
            line(&mut text, format!("rel {name} s{s} {lhs}{prim}"));
        }
    }
    match parse(&text) {
        Ok(out) => Ok(out),
        Err(e) => panic!("lifted presentation does not parse: {e}\n{text}"),
    }
}
