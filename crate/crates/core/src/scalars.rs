//! Exact arithmetic in cyclotomic fields `Q(z_L)`.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(L)-1)` as an
//! integer numerator vector over a single positive denominator, always in
//! lowest terms. Every other module takes its coefficients from here.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: Q(z_{left}) vs Q(z_{right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("Q(z_{from}) does not embed into Q(z_{to})")]
    NotASubfieldChain { from: u32, to: u32 },
}

/// The cyclotomic field `Q(z_L)` presented as `Q[x]/(Phi_L)`.
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    /// Coefficients of `Phi_L`, lowest degree first; monic.
    modulus: Vec<BigInt>,
}

pub type FieldRef = Arc<CycloField>;

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}
impl Eq for CycloField {}

/// Builds `Q(z_L)`. `L = 1` gives the rationals.
///
/// # Panics
/// If `order` is zero.
pub fn make_field(order: u32) -> FieldRef {
    assert!(order >= 1, "cyclotomic order must be positive");
    Arc::new(CycloField {
        order,
        modulus: cyclotomic_polynomial(order),
    })
}

impl CycloField {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(L)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Bit bound on `2 * |minor|` over all minors of the matrix of
    /// multiplication by `x`.
    fn hadamard_bits(&self, x: &[BigInt]) -> u64 {
        let small = x
            .iter()
            .map(|c| c.to_i64().map(i128::from))
            .collect::<Option<Vec<i128>>>()
            .and_then(|col| {
                let mut col = col;
                let mut bits = 2u64;
                for _ in 0..col.len() {
                    let mut sq = 0i128;
                    for v in &col {
                        sq = sq.checked_add(v.checked_mul(*v)?)?;
                    }
                    bits += (128 - sq.leading_zeros() as u64) / 2 + 1;
                    let top = col.pop().expect("nonempty");
                    col.insert(0, 0);
                    if top != 0 {
                        for (j, m) in self.modulus[..col.len()].iter().enumerate() {
                            let m = i128::from(m.to_i64()?);
                            col[j] = col[j].checked_sub(top.checked_mul(m)?)?;
                        }
                    }
                }
                Some(bits)
            });
        if let Some(b) = small {
            return b;
        }
        let mut col = x.to_vec();
        let mut bits = 2u64;
        for _ in 0..col.len() {
            let sq: BigInt = col.iter().map(|v| v * v).sum();
            bits += sq.bits() / 2 + 1;
            col.insert(0, BigInt::zero());
            self.reduce(&mut col);
        }
        bits
    }

    fn mul_big(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut prod = vec![BigInt::zero(); 2 * x.len() - 1];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        self.reduce(&mut prod);
        prod
    }

    /// `x * y mod Phi_L` in `i128`, or `None` on overflow.
    fn mul_small(&self, x: &[BigInt], y: &[BigInt]) -> Option<Vec<BigInt>> {
        let small = |v: &[BigInt]| v.iter().map(|c| c.to_i64().map(i128::from)).collect::<Option<Vec<i128>>>();
        let (x, y) = (small(x)?, small(y)?);
        let phi = self.degree();
        let mut prod = vec![0i128; 2 * phi - 1];
        for (i, a) in x.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                prod[i + j] = prod[i + j].checked_add(a * b)?;
            }
        }
        while prod.len() > phi {
            let top = prod.pop().expect("nonempty");
            if top == 0 {
                continue;
            }
            let shift = prod.len() - phi;
            for (j, m) in self.modulus[..phi].iter().enumerate() {
                if !m.is_zero() {
                    let m = i128::from(m.to_i64()?);
                    prod[shift + j] = prod[shift + j].checked_sub(top.checked_mul(m)?)?;
                }
            }
        }
        Some(prod.into_iter().map(BigInt::from).collect())
    }

    /// Reduces an integer polynomial modulo `Phi_L` in place.
    fn reduce(&self, v: &mut Vec<BigInt>) {
        let phi = self.degree();
        while v.len() > phi {
            let top = v.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = v.len() - phi;
            for (j, m) in self.modulus[..phi].iter().enumerate() {
                if !m.is_zero() {
                    v[shift + j] -= &top * m;
                }
            }
        }
        v.resize(phi, BigInt::zero());
    }
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest first.
///
/// Computed as `(x^n - 1) / prod_{d | n, d < n} Phi_d` by exact long division.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let mut memo = BTreeMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u32, memo: &mut BTreeMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_memo(d, memo);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    memo.insert(n, num.clone());
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// An element of `Q(z_L)` in canonical form.
#[derive(Clone)]
pub struct FieldElem {
    field: FieldRef,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElem {
    pub fn zero(field: &FieldRef) -> Self {
        FieldElem {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &FieldRef, n: i64) -> Self {
        let mut e = Self::zero(field);
        e.num[0] = BigInt::from(n);
        e
    }

    pub fn from_rational(field: &FieldRef, r: &BigRational) -> Self {
        let mut e = Self::zero(field);
        e.num[0] = r.numer().clone();
        e.den = r.denom().clone();
        e.normalize();
        e
    }

    /// Element with the given power-basis coordinates; longer inputs are
    /// reduced modulo `Phi_L`.
    pub fn from_coords(field: &FieldRef, coords: &[BigRational]) -> Self {
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: Vec<BigInt> = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        field.reduce(&mut num);
        let mut e = FieldElem {
            field: field.clone(),
            num,
            den,
        };
        e.normalize();
        e
    }

    /// `z_L^k`, with `k` taken modulo `L`.
    pub fn root(field: &FieldRef, k: i64) -> Self {
        let l = field.order as i64;
        let k = k.rem_euclid(l) as usize;
        let mut num = vec![BigInt::zero(); k + 1];
        num[k] = BigInt::one();
        field.reduce(&mut num);
        FieldElem {
            field: field.clone(),
            num,
            den: BigInt::one(),
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for n in &mut self.num {
                *n = &*n / &g;
            }
            self.den = &self.den / &g;
        }
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch {
                left: self.field.order,
                right: other.field.order,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let mut out = if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            FieldElem {
                field: self.field.clone(),
                num,
                den: self.den.clone(),
            }
        } else {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a * &other.den + b * &self.den)
                .collect();
            FieldElem {
                field: self.field.clone(),
                num,
                den: &self.den * &other.den,
            }
        };
        out.normalize();
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let n = self.num.len();
        // rationals: skip the convolution
        if n == 1 {
            let mut out = FieldElem {
                field: self.field.clone(),
                num: vec![&self.num[0] * &other.num[0]],
                den: &self.den * &other.den,
            };
            out.normalize();
            return Ok(out);
        }
        let prod = match self.field.mul_small(&self.num, &other.num) {
            Some(p) => p,
            None => self.field.mul_big(&self.num, &other.num),
        };
        let mut out = FieldElem {
            field: self.field.clone(),
            num: prod,
            den: &self.den * &other.den,
        };
        out.normalize();
        Ok(out)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> Self {
        FieldElem {
            field: self.field.clone(),
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, &r.recip()));
        }
        if let Some(x) = self.inv_modular() {
            return Ok(x);
        }
        Ok(self.inv_bareiss())
    }

    /// Reconstructs `N(a) * a^{-1}` and `N(a)` from their images modulo word
    /// sized primes. `None` if the cofactor bound needs more primes than
    /// the table holds.
    fn inv_modular(&self) -> Option<Self> {
        let bits = self.field.hadamard_bits(&self.num);
        let mut residues: Vec<(u64, Vec<u64>)> = Vec::new();
        let mut have = 0u64;
        for &p in PRIMES {
            if have > bits {
                break;
            }
            let m: Vec<u64> = self.field.modulus.iter().map(|c| mod_p(c, p)).collect();
            let a: Vec<u64> = self.num.iter().map(|c| mod_p(c, p)).collect();
            // a prime dividing the norm is skipped
            let Some((norm, inv)) = poly_inv_p(&m, &a, p) else {
                continue;
            };
            let mut v: Vec<u64> = inv.iter().map(|&c| mul_p(c, norm, p)).collect();
            v.resize(self.num.len(), 0);
            v.push(norm);
            residues.push((p, v));
            have += 61;
        }
        if have <= bits {
            return None;
        }
        let mut modulus = BigInt::one();
        let mut acc = vec![BigInt::zero(); self.num.len() + 1];
        for (p, v) in &residues {
            let pb = BigInt::from(*p);
            let m_inv = inv_p(mod_p(&modulus, *p), *p);
            for (x, &r) in acc.iter_mut().zip(v) {
                let t = mul_p((r + p - mod_p(x, *p)) % p, m_inv, *p);
                *x += &modulus * BigInt::from(t);
            }
            modulus *= pb;
        }
        let half = &modulus >> 1;
        for x in &mut acc {
            if *x > half {
                *x -= &modulus;
            }
        }
        let det = acc.pop().expect("norm slot");
        let mut out = FieldElem {
            field: self.field.clone(),
            num: acc.iter().map(|x| x * &self.den).collect(),
            den: det,
        };
        out.normalize();
        Some(out)
    }

    /// Solves `a * x = 1` against the matrix of multiplication by `a` with
    /// fraction-free Gauss-Jordan elimination.
    fn inv_bareiss(&self) -> Self {
        let n = self.num.len();
        // rows of [M | e_0] where column c of M is num * x^c mod Phi_L
        let mut m = vec![vec![BigInt::zero(); n + 1]; n];
        let mut col = self.num.clone();
        for c in 0..n {
            for (r, v) in col.iter().enumerate() {
                m[r][c] = v.clone();
            }
            col.insert(0, BigInt::zero());
            self.field.reduce(&mut col);
        }
        m[0][n] = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            // M is invertible since Phi_L is irreducible
            let p = (k..n).find(|&r| !m[r][k].is_zero()).expect("singular multiplication matrix");
            m.swap(k, p);
            let pivot = m[k].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let f = row[k].clone();
                for j in 0..=n {
                    if j == k {
                        continue;
                    }
                    let v = &pivot[k] * &row[j] - &f * &pivot[j];
                    row[j] = if prev.is_one() { v } else { v / &prev };
                }
                row[k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        // every diagonal entry now equals det M, and column n holds det M * x
        let num = m.iter().map(|row| &row[n] * &self.den).collect();
        let mut out = FieldElem {
            field: self.field.clone(),
            num,
            den: prev,
        };
        out.normalize();
        out
    }

    /// `self^e`; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Image under `z_N -> z_L^(L/N)`.
    pub fn embed(&self, target: &FieldRef) -> Result<Self, ScalarError> {
        let (n, l) = (self.field.order, target.order);
        if l % n != 0 {
            return Err(ScalarError::NotASubfieldChain { from: n, to: l });
        }
        if n == l {
            let mut e = self.clone();
            e.field = target.clone();
            return Ok(e);
        }
        let step = (l / n) as usize;
        let mut num = vec![BigInt::zero(); (self.num.len() - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            num[i * step] = c.clone();
        }
        target.reduce(&mut num);
        let mut e = FieldElem {
            field: target.clone(),
            num,
            den: self.den.clone(),
        };
        e.normalize();
        Ok(e)
    }

    /// Least `n >= 1` with `self^n = 1`, or `None` when `self` is not a root
    /// of unity. Every root of unity of `Q(z_L)` has order dividing `lcm(2, L)`.
    pub fn multiplicative_order(&self) -> Result<Option<u32>, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let m = (self.field.order as u64).lcm(&2) as i64;
        if !self.pow(m)?.is_one() {
            return Ok(None);
        }
        for d in 1..=m {
            if m % d == 0 && self.pow(d)?.is_one() {
                return Ok(Some(d as u32));
            }
        }
        unreachable!("self^m = 1")
    }

    /// `k` in `0..L` with `self = z^k`, if any.
    pub fn root_exponent(&self) -> Option<u32> {
        if !self.den.is_one() {
            return None;
        }
        (0..self.field.order).find(|&k| *self == Self::root(&self.field, k as i64))
    }
}

const PRIMES: &[u64] = &[
    4611686018427387847, 4611686018427387817, 4611686018427387787, 4611686018427387761,
    4611686018427387751, 4611686018427387737, 4611686018427387733, 4611686018427387709,
    4611686018427387701, 4611686018427387631, 4611686018427387617, 4611686018427387587,
    4611686018427387461, 4611686018427387421, 4611686018427387409, 4611686018427387329,
    4611686018427387323, 4611686018427387301, 4611686018427387271, 4611686018427387241,
    4611686018427387139, 4611686018427387131, 4611686018427387127, 4611686018427387113,
    4611686018427387091, 4611686018427387073, 4611686018427386981, 4611686018427386923,
    4611686018427386911, 4611686018427386903, 4611686018427386897, 4611686018427386887,
    4611686018427386707, 4611686018427386663, 4611686018427386611, 4611686018427386551,
    4611686018427386471, 4611686018427386389, 4611686018427386351, 4611686018427386329,
    4611686018427386323, 4611686018427386309, 4611686018427386287, 4611686018427386231,
    4611686018427386207, 4611686018427386203, 4611686018427386201, 4611686018427386081,
];

fn mod_p(x: &BigInt, p: u64) -> u64 {
    if let Some(v) = x.to_i64() {
        return (v as i128).rem_euclid(p as i128) as u64;
    }
    let r = x.mod_floor(&BigInt::from(p));
    r.iter_u64_digits().next().unwrap_or(0)
}

fn mul_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `a^{-1} mod p` for `a != 0`.
fn inv_p(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

fn pow_p(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_p(acc, b, p);
        }
        b = mul_p(b, b, p);
        e >>= 1;
    }
    acc
}

fn trim_p(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `(quotient, remainder)` of `a / b` over `F_p`; `b` is trimmed and nonzero.
fn divrem_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim_p(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_p(b[db], p);
    let mut q = vec![0; r.len().saturating_sub(db)];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = mul_p(r[r.len() - 1], lead_inv, p);
        for (j, &bj) in b.iter().enumerate() {
            let t = mul_p(c, bj, p);
            r[shift + j] = add_p(r[shift + j], p - t, p);
        }
        q[shift] = c;
        trim_p(&mut r);
    }
    (q, r)
}

fn add_p(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

/// `(Res(m, a), a^{-1} mod m)` over `F_p`, read off one remainder sequence.
/// `None` when `a` is not a unit modulo `(m, p)`.
fn poly_inv_p(m: &[u64], a: &[u64], p: u64) -> Option<(u64, Vec<u64>)> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim_p(&mut r0);
    trim_p(&mut r1);
    let (mut s0, mut s1) = (Vec::new(), vec![1u64]);
    let mut res = 1u64;
    loop {
        if r1.is_empty() {
            return None;
        }
        let (d0, d1) = (r0.len() - 1, r1.len() - 1);
        if d1 == 0 {
            res = mul_p(res, pow_p(r1[0], d0 as u64, p), p);
            let c = inv_p(r1[0], p);
            return Some((res, s1.iter().map(|&x| mul_p(x, c, p)).collect()));
        }
        let (q, r) = divrem_p(&r0, &r1, p);
        if d0 % 2 == 1 && d1 % 2 == 1 {
            res = (p - res) % p;
        }
        let dr = r.len().saturating_sub(1);
        res = mul_p(res, pow_p(r1[d1], (d0 - dr) as u64, p), p);
        let mut s2 = vec![0u64; s0.len().max(q.len() + s1.len())];
        for (i, x) in s0.iter().enumerate() {
            s2[i] = *x;
        }
        for (i, &x) in q.iter().enumerate() {
            for (j, &y) in s1.iter().enumerate() {
                s2[i + j] = add_p(s2[i + j], p - mul_p(x, y, p), p);
            }
        }
        trim_p(&mut s2);
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}
impl Eq for FieldElem {}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            /// # Panics
            /// On operands from different fields, or division by zero; use the
            /// `try_` form to recover.
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$try(rhs).expect("scalar operands from different fields, or zero divisor")
            }
        }
        impl $trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}
impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (in Q(z_{}))", self, self.field.order)
    }
}

/// Canonical text in the scalar grammar: `z^k` or `-z^k` for (signed) roots
/// of unity, otherwise the power-basis expansion such as `1 - 3/2*z^2`.
impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if let Some(k) = self.root_exponent() {
            return f.write_str(&root_text(k));
        }
        if let Some(k) = self.neg_ref().root_exponent() {
            return write!(f, "-{}", root_text(k));
        }
        let mut first = true;
        for (i, c) in self.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = rational_text(&a);
            match (i, a.is_one()) {
                (0, _) => f.write_str(&mag)?,
                (_, true) => f.write_str(&root_text(i as u32))?,
                (_, false) => write!(f, "{}*{}", mag, root_text(i as u32))?,
            }
        }
        Ok(())
    }
}

fn root_text(k: u32) -> String {
    match k {
        0 => String::from("1"),
        1 => String::from("z"),
        _ => alloc::format!("z^{k}"),
    }
}

fn rational_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        alloc::format!("{}", r.numer())
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn inversion_paths_agree() {
        for l in [5u32, 12, 23] {
            let f = make_field(l);
            let coords: Vec<BigRational> = (0..f.degree() as i64)
                .map(|i| BigRational::new(BigInt::from(i * i - 7), BigInt::from(i % 3 + 1)))
                .collect();
            let a = FieldElem::from_coords(&f, &coords);
            let x = a.inv_modular().unwrap();
            assert_eq!(x, a.inv_bareiss());
            assert!((&a * &x).is_one());
        }
        // huge coefficients exhaust the prime table
        let f = make_field(7);
        let big = BigInt::from(3).pow(4000u32);
        let a = FieldElem::from_coords(&f, &[BigRational::from_integer(big), BigRational::one()]);
        assert!(a.inv_modular().is_none());
        assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn cyclotomic_moduli() {
        assert_eq!(make_field(1).modulus(), &ints(&[-1, 1])[..]);
        assert_eq!(make_field(6).modulus(), &ints(&[1, -1, 1])[..]);
        assert_eq!(make_field(5).modulus(), &ints(&[1, 1, 1, 1, 1])[..]);
        assert_eq!(make_field(12).degree(), 4);
        assert_eq!(make_field(24).degree(), 8);
    }

    #[test]
    fn roots_reduce() {
        let f4 = make_field(4);
        assert_eq!(FieldElem::root(&f4, 2), FieldElem::from_int(&f4, -1));
        let f3 = make_field(3);
        assert!(FieldElem::root(&f3, 3).is_one());
        let z2 = FieldElem::root(&f3, 2);
        let expect = -(FieldElem::one(&f3) + FieldElem::root(&f3, 1));
        assert_eq!(z2, expect);
        assert_eq!(FieldElem::root(&f3, -1), z2);
    }

    #[test]
    fn inverse_and_products() {
        let f3 = make_field(3);
        let z = FieldElem::root(&f3, 1);
        let one = FieldElem::one(&f3);
        assert_eq!((&one + &z) * (-&z), one);
        let m1 = FieldElem::from_int(&f3, -1);
        assert_eq!(m1.inv().unwrap(), m1);
        let a = &one + &(&z * &FieldElem::from_int(&f3, 3));
        assert!((&a * &a.inv().unwrap()).is_one());
        assert_eq!(
            FieldElem::zero(&f3).inv().unwrap_err(),
            ScalarError::DivisionByZero
        );
    }

    #[test]
    fn fifth_roots_sum_to_zero() {
        let f5 = make_field(5);
        let s = (0..5).fold(FieldElem::zero(&f5), |acc, k| acc + FieldElem::root(&f5, k));
        assert!(s.is_zero());
    }

    #[test]
    fn embedding() {
        let f2 = make_field(2);
        let f4 = make_field(4);
        let m1 = FieldElem::from_int(&f2, -1);
        assert_eq!(m1.embed(&f4).unwrap(), FieldElem::root(&f4, 2));
        let f3 = make_field(3);
        let f6 = make_field(6);
        assert_eq!(
            FieldElem::root(&f3, 1).embed(&f6).unwrap(),
            FieldElem::root(&f6, 2)
        );
        assert!(FieldElem::one(&f3).embed(&f6).unwrap().is_one());
        assert_eq!(
            FieldElem::one(&f3).embed(&f4).unwrap_err(),
            ScalarError::NotASubfieldChain { from: 3, to: 4 }
        );
    }

    #[test]
    fn orders() {
        let f12 = make_field(12);
        assert_eq!(
            FieldElem::root(&f12, 4).multiplicative_order().unwrap(),
            Some(3)
        );
        let f3 = make_field(3);
        assert_eq!(
            (-FieldElem::root(&f3, 1)).multiplicative_order().unwrap(),
            Some(6)
        );
        let f1 = make_field(1);
        assert_eq!(FieldElem::from_int(&f1, 2).multiplicative_order().unwrap(), None);
        assert!(FieldElem::zero(&f1).multiplicative_order().is_err());
    }

    #[test]
    fn mismatch_is_reported() {
        let a = FieldElem::one(&make_field(3));
        let b = FieldElem::one(&make_field(5));
        assert_eq!(
            a.try_add(&b).unwrap_err(),
            ScalarError::FieldMismatch { left: 3, right: 5 }
        );
    }

    #[test]
    fn display_forms() {
        let f8 = make_field(8);
        assert_eq!(alloc::format!("{}", FieldElem::root(&f8, 5)), "z^5");
        let f3 = make_field(3);
        assert_eq!(alloc::format!("{}", -FieldElem::root(&f3, 1)), "-z");
        let half = FieldElem::from_rational(&f3, &BigRational::new(1.into(), 2.into()));
        let e = &half + &FieldElem::root(&f3, 1);
        assert_eq!(alloc::format!("{}", e), "1/2 + z");
    }
}
