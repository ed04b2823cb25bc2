//! Words and polynomials in the free algebra `k<y_1, ..., y_theta>`.
//!
//! Letters are zero-based internally; `y1` in text is letter `0`. A presentation
//! may append group-like letters `g_i` after the braided ones (see
//! [`crate::deform::lifting_presentation`]); those carry degree zero.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::braiding::BraidingMatrix;
use crate::scalars::{FieldElem, FieldRef, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("braided commutator argument is not Z^theta-homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub type Letter = u8;

/// A monomial of the free algebra. `Ord` is deglex with the natural letter
/// order `y1 < y2 < ...`: shorter words first, then lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: Letter) -> Self {
        Word(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Letter-count vector over the first `theta` letters.
    pub fn multidegree(&self, theta: usize) -> MultiDegree {
        let mut d = vec![0u32; theta];
        for &l in &self.0 {
            if (l as usize) < theta {
                d[l as usize] += 1;
            }
        }
        MultiDegree(d)
    }

    /// Position of the first occurrence of `pat` as a factor.
    pub fn find(&self, pat: &[Letter]) -> Option<usize> {
        if pat.is_empty() {
            return Some(0);
        }
        self.0.windows(pat.len()).position(|w| w == pat)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", WordText(self, usize::MAX))
    }
}

/// Word rendered with `y`/`g` letter names; letters at index `>= theta` are
/// group-likes.
pub struct WordText<'a>(pub &'a Word, pub usize);

impl fmt::Display for WordText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &l) in self.0 .0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            f.write_str(&letter_name(l, self.1))?;
        }
        Ok(())
    }
}

pub fn letter_name(l: Letter, theta: usize) -> String {
    if (l as usize) < theta {
        alloc::format!("y{}", l as usize + 1)
    } else {
        alloc::format!("g{}", l as usize - theta + 1)
    }
}

/// A total order on generators, given by each letter's rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOrder {
    rank: Vec<Letter>,
}

impl GenOrder {
    pub fn natural(n: usize) -> Self {
        GenOrder {
            rank: (0..n as Letter).collect(),
        }
    }

    pub fn reversed(n: usize) -> Self {
        GenOrder {
            rank: (0..n as Letter).rev().collect(),
        }
    }

    /// Order from the list of letters in ascending position. Returns `None`
    /// unless `ascending` is a permutation of `0..n`.
    pub fn from_ascending(ascending: &[Letter]) -> Option<Self> {
        let n = ascending.len();
        let mut rank = vec![Letter::MAX; n];
        for (pos, &l) in ascending.iter().enumerate() {
            if (l as usize) >= n || rank[l as usize] != Letter::MAX {
                return None;
            }
            rank[l as usize] = pos as Letter;
        }
        Some(GenOrder { rank })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn is_natural(&self) -> bool {
        self.rank.iter().enumerate().all(|(i, &r)| i == r as usize)
    }

    pub fn rank(&self, l: Letter) -> Letter {
        self.rank[l as usize]
    }

    /// Letters in ascending order.
    pub fn ascending(&self) -> Vec<Letter> {
        let mut v = vec![0; self.rank.len()];
        for (l, &r) in self.rank.iter().enumerate() {
            v[r as usize] = l as Letter;
        }
        v
    }

    /// Relabels a word so that natural deglex on the image is this order.
    pub fn encode(&self, w: &Word) -> Word {
        Word(w.0.iter().map(|&l| self.rank[l as usize]).collect())
    }

    pub fn decode(&self, w: &Word) -> Word {
        let asc = self.ascending();
        Word(w.0.iter().map(|&r| asc[r as usize]).collect())
    }
}

/// Deglex comparison of two words under a generator order.
pub fn deglex_compare(u: &Word, v: &Word, order: &GenOrder) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| {
        u.0.iter()
            .map(|&l| order.rank(l))
            .cmp(v.0.iter().map(|&l| order.rank(l)))
    })
}

/// A `Z^theta` degree `(a_1, ..., a_theta)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn zero(theta: usize) -> Self {
        MultiDegree(vec![0; theta])
    }

    pub fn unit(theta: usize, i: usize) -> Self {
        let mut d = vec![0; theta];
        d[i] = 1;
        MultiDegree(d)
    }

    pub fn theta(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// `prod_{i,j} q_ij^(alpha_i * beta_j)`.
pub fn bicharacter(q: &BraidingMatrix, alpha: &MultiDegree, beta: &MultiDegree) -> FieldElem {
    let theta = q.theta();
    let mut acc = FieldElem::one(q.field());
    for i in 0..theta {
        for j in 0..theta {
            let e = alpha.0[i] as i64 * beta.0[j] as i64;
            if e != 0 {
                acc = &acc * &q.power(i, j, e);
            }
        }
    }
    acc
}

/// A finitely supported combination of words, zero coefficients never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldRef,
    terms: BTreeMap<Word, FieldElem>,
}

impl Poly {
    pub fn zero(field: &FieldRef) -> Self {
        Poly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElem) -> Self {
        let mut p = Self::zero(c.field());
        p.add_term(Word::empty(), c);
        p
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::constant(FieldElem::one(field))
    }

    pub fn monomial(w: Word, c: FieldElem) -> Self {
        let mut p = Self::zero(c.field());
        p.add_term(w, c);
        p
    }

    pub fn word(field: &FieldRef, w: Word) -> Self {
        Self::monomial(w, FieldElem::one(field))
    }

    pub fn gen(field: &FieldRef, i: Letter) -> Self {
        Self::word(field, Word::letter(i))
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending deglex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &FieldElem)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, FieldElem> {
        self.terms
    }

    pub fn from_terms(field: &FieldRef, terms: BTreeMap<Word, FieldElem>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Poly {
            field: field.clone(),
            terms,
        }
    }

    pub fn coeff(&self, w: &Word) -> Option<&FieldElem> {
        self.terms.get(w)
    }

    /// Largest word under natural deglex, with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &FieldElem)> {
        self.terms.iter().next_back()
    }

    /// The constant when the polynomial has no word of positive length.
    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(FieldElem::zero(&self.field)),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn max_len(&self) -> usize {
        self.leading().map_or(0, |(w, _)| w.len())
    }

    pub fn add_term(&mut self, w: Word, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * left * other * right`.
    pub fn add_scaled_product(&mut self, c: &FieldElem, left: &[Letter], other: &Poly, right: &[Letter]) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            let mut v = Vec::with_capacity(left.len() + w.len() + right.len());
            v.extend_from_slice(left);
            v.extend_from_slice(&w.0);
            v.extend_from_slice(right);
            self.add_term(Word(v), c * d);
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, ScalarError> {
        check_fields(&self.field, &other.field)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, ScalarError> {
        check_fields(&self.field, &other.field)?;
        let mut out = Poly::zero(&self.field);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The common multidegree of a homogeneous polynomial; `None` for zero or
    /// mixed-degree input.
    pub fn degree_of(&self, theta: usize) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(|w| w.multidegree(theta));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> Poly {
        let mut out = Poly::zero(&self.field);
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }

    /// Text in the presentation grammar, largest term first.
    pub fn text(&self, theta: usize) -> PolyText<'_> {
        PolyText(self, theta)
    }
}

fn check_fields(a: &FieldRef, b: &FieldRef) -> Result<(), ScalarError> {
    if a.order() == b.order() {
        Ok(())
    } else {
        Err(ScalarError::FieldMismatch {
            left: a.order(),
            right: b.order(),
        })
    }
}

pub struct PolyText<'a>(&'a Poly, usize);

impl fmt::Display for PolyText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.0.terms.iter().rev().enumerate() {
            let (neg, mag) = split_sign(c);
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() {
                write!(f, "{}", scalar_factor(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", WordText(w, self.1))?;
            } else {
                write!(f, "{}*{}", scalar_factor(&mag), WordText(w, self.1))?;
            }
        }
        Ok(())
    }
}

/// Splits off a leading minus sign when the canonical text of `c` has one.
pub(crate) fn split_sign(c: &FieldElem) -> (bool, FieldElem) {
    let s = alloc::format!("{c}");
    if s.starts_with('-') && !s[1..].contains([' ']) {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

/// Scalar text, parenthesized when it is a sum.
pub(crate) fn scalar_factor(c: &FieldElem) -> String {
    let s = alloc::format!("{c}");
    if s.contains(' ') || s.starts_with('-') {
        alloc::format!("({s})")
    } else {
        s
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text(usize::MAX))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomials over different fields")
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_add(&-rhs).expect("polynomials over different fields")
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomials over different fields")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

/// `[u, v]_c = uv - chi(deg u, deg v) vu` for homogeneous `u`, `v`.
///
/// The bracket is bilinear, so a zero argument yields zero.
pub fn braided_commutator(u: &Poly, v: &Poly, q: &BraidingMatrix) -> Result<Poly, AlgebraError> {
    if u.is_zero() || v.is_zero() {
        return Ok(Poly::zero(u.field()));
    }
    let theta = q.theta();
    let du = u.degree_of(theta).ok_or(AlgebraError::NotHomogeneous)?;
    let dv = v.degree_of(theta).ok_or(AlgebraError::NotHomogeneous)?;
    let chi = bicharacter(q, &du, &dv);
    let uv = u.try_mul(v)?;
    let vu = v.try_mul(u)?;
    Ok(uv.try_add(&-&vu.scale(&chi))?)
}
