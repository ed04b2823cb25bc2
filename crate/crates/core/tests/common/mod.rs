//! Independent oracles: plain linear algebra and naive products, sharing no
//! code with the reduction engine.
#![allow(dead_code)]

pub mod near_miss;

use std::collections::BTreeMap;

use nichols_core::braiding::BraidingMatrix;
use nichols_core::freealg::{Poly, Word};
use nichols_core::scalars::FieldElem;

fn words(letters: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| (0..letters as u8).map(move |l| w.concat(&Word::letter(l))))
            .collect();
    }
    out
}

/// Row-echelon basis keyed by the largest word of each row.
struct Echelon {
    rows: BTreeMap<Word, Poly>,
}

impl Echelon {
    fn insert(&mut self, mut v: Poly) {
        while let Some((w, c)) = v.leading().map(|(w, c)| (w.clone(), c.clone())) {
            match self.rows.get(&w) {
                Some(row) => v = &v - &row.scale(&c),
                None => {
                    let inv = c.inv().unwrap();
                    self.rows.insert(w, v.scale(&inv));
                    return;
                }
            }
        }
    }
}

/// `dim A_n` for `n = 0..=max_deg`, where `A = k<x> / (gens)` and every
/// generator is homogeneous in total degree. Computed as `letters^n` minus
/// the rank of `{u r v}` in degree `n`.
pub fn graded_dims(gens: &[Poly], letters: usize, max_deg: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for n in 0..=max_deg {
        let mut e = Echelon { rows: BTreeMap::new() };
        for g in gens {
            let d = g.max_len();
            assert!(g.terms().all(|(w, _)| w.len() == d), "oracle needs homogeneous generators");
            if d > n {
                continue;
            }
            for a in 0..=n - d {
                for u in words(letters, a) {
                    for v in words(letters, n - d - a) {
                        let mut p = Poly::zero(g.field());
                        p.add_scaled_product(&FieldElem::one(g.field()), u.letters(), g, v.letters());
                        e.insert(p);
                    }
                }
            }
        }
        out.push((letters as u64).pow(n as u32) - e.rows.len() as u64);
    }
    out
}

/// `χ_α(g_j) = 1` for all `j`, by repeated multiplication.
pub fn admissible_naive(q: &BraidingMatrix, alpha: &[u32]) -> bool {
    (0..q.theta()).all(|j| {
        let mut acc = FieldElem::one(q.field());
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                acc = &acc * q.get(j, i);
            }
        }
        acc.is_one()
    })
}

/// Least `n >= 1` with `e^n = 1`, trying every `n` up to `bound`.
pub fn order_naive(e: &FieldElem, bound: u32) -> Option<u32> {
    let mut acc = e.clone();
    for n in 1..=bound {
        if acc.is_one() {
            return Some(n);
        }
        acc = &acc * e;
    }
    None
}
