//! A line-oriented text format for stratified presentations, and the bundled
//! catalog written in it.
//!
//! ```text
//! presentation cartan-A2-N3
//! field 3
//! theta 2
//! matrix [z, z; z, z]
//! roots deg(1,0) deg(0,1) deg(1,1)
//! rel r112 s0 ad(1,1,2) deform
//! rel p1 s1 y1^3 deform
//! ```
//!
//! Generators are `y1..y_theta`; lifted presentations add group-likes
//! `g1..` after a `group M1 M2 ...` header. `z` is the primitive root of the
//! declared field. Indices in text are one-based, in memory zero-based.

mod catalog;
mod parse;
mod print;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::braiding::BraidingMatrix;
use crate::freealg::{braided_commutator, GenOrder, Letter, MultiDegree, Poly};
use crate::scalars::{FieldElem, FieldRef};

pub use catalog::{catalog, catalog_names, catalog_source};
pub use parse::{parse, parse_scalar};
pub use print::{expr_text, print};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("line {line}, column {col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, col: usize, name: String },
    #[error("line {line}, column {col}: bracket argument is not homogeneous")]
    NonHomogeneousBracket { line: usize, col: usize },
    #[error("line {line}: relation name `{name}` already used")]
    DuplicateRelationName { line: usize, name: String },
    #[error("no catalog entry named `{0}`")]
    UnknownCatalogEntry(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpandError {
    #[error("bracket argument is not homogeneous")]
    NotHomogeneous,
    #[error("parameter `{0}` occurs inside a bracket or power")]
    SymbolicFactor(String),
    #[error("parameter `{0}` occurs in a left-hand side")]
    LambdaInLhs(String),
}

/// Relation syntax tree. Scalar subexpressions are folded at parse time, so
/// the tree never contains a product or sum of pure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelExpr {
    Gen(Letter),
    /// Group-like `g_{i+1}`.
    Group(Letter),
    Bracket(alloc::boxed::Box<RelExpr>, alloc::boxed::Box<RelExpr>),
    /// `ad(i1, ..., ik) = [y_i1, ad(i2, ..., ik)]_c`.
    IteratedAd(Vec<Letter>),
    /// `x_{i, i+1, ..., j}` (descending when `i > j`).
    Chain(Letter, Letter),
    Power(alloc::boxed::Box<RelExpr>, u32),
    Product(Vec<RelExpr>),
    Scaled(FieldElem, alloc::boxed::Box<RelExpr>),
    Sum(Vec<RelExpr>),
    Const(FieldElem),
    Lam(String),
}

impl RelExpr {
    pub fn chain_indices(i: Letter, j: Letter) -> Vec<Letter> {
        if i <= j {
            (i..=j).collect()
        } else {
            (j..=i).rev().collect()
        }
    }

    /// Names of all `lam(..)` symbols, in order of appearance.
    pub fn lambdas(&self, out: &mut Vec<String>) {
        match self {
            RelExpr::Lam(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            RelExpr::Bracket(a, b) => {
                a.lambdas(out);
                b.lambdas(out);
            }
            RelExpr::Power(a, _) | RelExpr::Scaled(_, a) => a.lambdas(out),
            RelExpr::Product(v) | RelExpr::Sum(v) => v.iter().for_each(|e| e.lambdas(out)),
            _ => {}
        }
    }

    /// Generator indices mentioned anywhere in the tree.
    pub fn generators(&self, out: &mut Vec<Letter>) {
        let mut add = |l: Letter| {
            if !out.contains(&l) {
                out.push(l);
            }
        };
        match self {
            RelExpr::Gen(i) => add(*i),
            RelExpr::IteratedAd(v) => v.iter().for_each(|&l| add(l)),
            RelExpr::Chain(i, j) => RelExpr::chain_indices(*i, *j).into_iter().for_each(add),
            RelExpr::Bracket(a, b) => {
                a.generators(out);
                b.generators(out);
            }
            RelExpr::Power(a, _) | RelExpr::Scaled(_, a) => a.generators(out),
            RelExpr::Product(v) | RelExpr::Sum(v) => v.iter().for_each(|e| e.generators(out)),
            _ => {}
        }
    }

    /// Renames generators through `map`, moves scalars into `field` and
    /// replaces the listed `lam` symbols by zero. Group letters are kept.
    pub fn relabel(
        &self,
        map: &[Letter],
        field: &FieldRef,
        dropped: &[String],
    ) -> Result<RelExpr, crate::scalars::ScalarError> {
        use alloc::boxed::Box;
        let go = |e: &RelExpr| e.relabel(map, field, dropped);
        let all = |v: &[RelExpr]| v.iter().map(go).collect::<Result<Vec<_>, _>>();
        Ok(match self {
            RelExpr::Gen(i) => RelExpr::Gen(map[*i as usize]),
            RelExpr::Group(i) => RelExpr::Group(*i),
            RelExpr::Bracket(a, b) => RelExpr::Bracket(Box::new(go(a)?), Box::new(go(b)?)),
            RelExpr::IteratedAd(v) => RelExpr::IteratedAd(v.iter().map(|&l| map[l as usize]).collect()),
            RelExpr::Chain(i, j) => RelExpr::Chain(map[*i as usize], map[*j as usize]),
            RelExpr::Power(a, n) => RelExpr::Power(Box::new(go(a)?), *n),
            RelExpr::Product(v) => RelExpr::Product(all(v)?),
            RelExpr::Scaled(c, a) => RelExpr::Scaled(c.embed(field)?, Box::new(go(a)?)),
            RelExpr::Sum(v) => RelExpr::Sum(all(v)?),
            RelExpr::Const(c) => RelExpr::Const(c.embed(field)?),
            RelExpr::Lam(n) if dropped.contains(n) => RelExpr::Const(FieldElem::zero(field)),
            RelExpr::Lam(n) => RelExpr::Lam(n.clone()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub stratum: u32,
    pub lhs: RelExpr,
    /// Explicit right-hand side; `None` means `lam(name)` when deformable
    /// and zero otherwise.
    pub tail: Option<RelExpr>,
    pub deformable: bool,
    /// Set by the `primitive` keyword; stratum-0 relations are primitive
    /// regardless.
    pub primitive: bool,
}

impl Relation {
    pub fn is_primitive(&self) -> bool {
        self.primitive || self.stratum == 0
    }

    pub fn rhs(&self, field: &FieldRef) -> RelExpr {
        match &self.tail {
            Some(t) => t.clone(),
            None if self.deformable => RelExpr::Lam(self.name.clone()),
            None => RelExpr::Const(FieldElem::zero(field)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub field: FieldRef,
    pub matrix: BraidingMatrix,
    /// Letters in ascending position, when not the natural order.
    pub order: Option<Vec<Letter>>,
    pub roots: Option<Vec<MultiDegree>>,
    /// Orders of the group-like letters of a lifted presentation.
    pub group: Option<Vec<u32>>,
    pub notes: Vec<String>,
    pub exclusions: Vec<(String, String)>,
    pub flags: Vec<String>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn theta(&self) -> usize {
        self.matrix.theta()
    }

    /// Alphabet size including group-likes.
    pub fn letters(&self) -> usize {
        self.theta() + self.group.as_ref().map_or(0, Vec::len)
    }

    pub fn gen_order(&self) -> Option<GenOrder> {
        self.order.as_ref().and_then(|o| GenOrder::from_ascending(o))
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn max_stratum(&self) -> Option<u32> {
        self.relations.iter().map(|r| r.stratum).max()
    }

    pub fn strata(&self) -> BTreeMap<u32, Vec<&Relation>> {
        let mut m: BTreeMap<u32, Vec<&Relation>> = BTreeMap::new();
        for r in &self.relations {
            m.entry(r.stratum).or_default().push(r);
        }
        m
    }
}

/// Polynomial whose coefficients are monomials in the `lam` symbols; the key
/// is the sorted list of symbol names (empty for the constant part).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LamPoly {
    field: FieldRef,
    pub terms: BTreeMap<Vec<String>, Poly>,
}

impl LamPoly {
    pub fn zero(field: &FieldRef) -> Self {
        LamPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn plain(p: Poly) -> Self {
        let mut l = Self::zero(p.field());
        l.insert(Vec::new(), p);
        l
    }

    fn insert(&mut self, key: Vec<String>, p: Poly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(q) => &q + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The part free of symbols, or `None` if symbols occur.
    pub fn as_plain(&self) -> Result<Poly, String> {
        for k in self.terms.keys() {
            if let Some(n) = k.first() {
                return Err(n.clone());
            }
        }
        Ok(self
            .terms
            .get(&Vec::new())
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.field)))
    }

    fn add(&self, o: &LamPoly) -> LamPoly {
        let mut out = self.clone();
        for (k, p) in &o.terms {
            out.insert(k.clone(), p.clone());
        }
        out
    }

    fn mul(&self, o: &LamPoly) -> LamPoly {
        let mut out = LamPoly::zero(&self.field);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &o.terms {
                let mut k = ka.clone();
                k.extend(kb.iter().cloned());
                k.sort();
                out.insert(k, pa * pb);
            }
        }
        out
    }

    fn scale(&self, c: &FieldElem) -> LamPoly {
        let mut out = LamPoly::zero(&self.field);
        for (k, p) in &self.terms {
            out.insert(k.clone(), p.scale(c));
        }
        out
    }

    /// Substitutes values for the symbols; absent names count as zero.
    pub fn evaluate(&self, values: &BTreeMap<String, FieldElem>) -> Poly {
        let mut acc = Poly::zero(&self.field);
        'terms: for (k, p) in &self.terms {
            let mut c = FieldElem::one(&self.field);
            for n in k {
                match values.get(n) {
                    Some(v) => c = &c * v,
                    None => continue 'terms,
                }
            }
            acc = &acc + &p.scale(&c);
        }
        acc
    }
}

/// Expands a tree to a polynomial, keeping `lam` symbols formal.
pub fn expand(e: &RelExpr, q: &BraidingMatrix) -> Result<LamPoly, ExpandError> {
    let f = q.field();
    let theta = q.theta() as Letter;
    let plain = |x: LamPoly| x.as_plain().map_err(ExpandError::SymbolicFactor);
    Ok(match e {
        RelExpr::Gen(i) => LamPoly::plain(Poly::gen(f, *i)),
        RelExpr::Group(i) => LamPoly::plain(Poly::gen(f, theta + *i)),
        RelExpr::Const(c) => LamPoly::plain(Poly::constant(c.clone())),
        RelExpr::Lam(n) => {
            let mut l = LamPoly::zero(f);
            l.insert(alloc::vec![n.clone()], Poly::one(f));
            l
        }
        RelExpr::Bracket(a, b) => {
            let a = plain(expand(a, q)?)?;
            let b = plain(expand(b, q)?)?;
            LamPoly::plain(braided_commutator(&a, &b, q).map_err(|_| ExpandError::NotHomogeneous)?)
        }
        RelExpr::IteratedAd(ix) => LamPoly::plain(iterated_ad(ix, q)),
        RelExpr::Chain(i, j) => LamPoly::plain(iterated_ad(&RelExpr::chain_indices(*i, *j), q)),
        RelExpr::Power(a, n) => {
            let a = plain(expand(a, q)?)?;
            LamPoly::plain(a.pow(*n))
        }
        RelExpr::Product(v) => {
            let mut acc = LamPoly::plain(Poly::one(f));
            for x in v {
                acc = acc.mul(&expand(x, q)?);
            }
            acc
        }
        RelExpr::Scaled(c, a) => expand(a, q)?.scale(c),
        RelExpr::Sum(v) => {
            let mut acc = LamPoly::zero(f);
            for x in v {
                acc = acc.add(&expand(x, q)?);
            }
            acc
        }
    })
}

/// `x_{i1 ... ik}`, right-nested.
pub fn iterated_ad(ix: &[Letter], q: &BraidingMatrix) -> Poly {
    let f = q.field();
    let mut acc = Poly::gen(f, *ix.last().expect("nonempty index list"));
    for &i in ix[..ix.len() - 1].iter().rev() {
        acc = braided_commutator(&Poly::gen(f, i), &acc, q).expect("ad of generators is homogeneous");
    }
    acc
}

/// Expanded left side and the symbolic right side of a relation.
pub fn expand_relation(
    r: &Relation,
    q: &BraidingMatrix,
) -> Result<(Poly, LamPoly), ExpandError> {
    let lhs = expand(&r.lhs, q)?.as_plain().map_err(ExpandError::LambdaInLhs)?;
    let rhs = expand(&r.rhs(q.field()), q)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Word;
    use crate::scalars::make_field;

    #[test]
    fn ad_112_matches_hand_expansion() {
        let f = make_field(12);
        let q = BraidingMatrix::from_exponents(&f, &[alloc::vec![1, 5], alloc::vec![7, 4]]).unwrap();
        let p = iterated_ad(&[0, 0, 1], &q);
        let (q11, q12) = (q.get(0, 0).clone(), q.get(0, 1).clone());
        let one = FieldElem::one(&f);
        let mut expect = Poly::word(&f, Word(alloc::vec![0, 0, 1]));
        expect.add_term(Word(alloc::vec![0, 1, 0]), -&(&q12 * &(&one + &q11)));
        expect.add_term(Word(alloc::vec![1, 0, 0]), &q11 * &(&q12 * &q12));
        assert_eq!(p, expect);
    }

    #[test]
    fn chain_of_one_index_is_the_generator() {
        let f = make_field(3);
        let q = BraidingMatrix::from_exponents(&f, &[alloc::vec![1, 1], alloc::vec![1, 1]]).unwrap();
        let r = expand(&RelExpr::Chain(0, 0), &q).unwrap();
        assert_eq!(r.as_plain().unwrap(), Poly::gen(&f, 0));
    }
}
