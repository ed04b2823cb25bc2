mod common;

use nichols_core::braiding::{chi_eval, is_admissible, BraidingMatrix};
use nichols_core::freealg::{Poly, Word};
use nichols_core::presdsl::*;
use nichols_core::scalars::{make_field, FieldElem};
use proptest::prelude::*;

fn entries() -> Vec<(&'static str, Presentation)> {
    catalog_names().map(|n| (n, catalog(n).unwrap())).collect()
}

#[test]
fn parse_print_round_trip() {
    for (name, p) in entries() {
        let text = print(&p);
        let again = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        assert_eq!(again, p, "{name}");
        assert_eq!(print(&again), text, "{name}");
    }
}

#[test]
fn catalog_relations_are_homogeneous() {
    let mut all_one = std::collections::BTreeMap::new();
    for (name, p) in entries() {
        for r in &p.relations {
            let (lhs, rhs) = expand_relation(r, &p.matrix).unwrap();
            let deg = lhs
                .degree_of(p.theta())
                .unwrap_or_else(|| panic!("{name}/{}: lhs not homogeneous", r.name));
            for l in r.lhs.lambdas_vec().iter().chain(rhs.terms.keys().flatten()) {
                all_one.insert(l.clone(), FieldElem::one(&p.field));
            }
            // tail words are constants or carry the character of the lead
            // side; the group grading is all a deformation has to respect
            for (w, _) in rhs.evaluate(&all_one).terms() {
                let wd = w.multidegree(p.theta());
                assert!(
                    w.is_empty() || (0..p.theta()).all(|j| chi_eval(&p.matrix, &wd, j) == chi_eval(&p.matrix, &deg, j)),
                    "{name}/{}: tail word of the wrong degree",
                    r.name
                );
            }
        }
    }
}

trait Lambdas {
    fn lambdas_vec(&self) -> Vec<String>;
}

impl Lambdas for RelExpr {
    fn lambdas_vec(&self) -> Vec<String> {
        let mut v = Vec::new();
        self.lambdas(&mut v);
        v
    }
}

#[test]
fn deformable_relations_are_admissible_or_annotated() {
    let mut bad = Vec::new();
    for (name, p) in entries() {
        for r in p.relations.iter().filter(|r| r.deformable) {
            let (lhs, _) = expand_relation(r, &p.matrix).unwrap();
            let deg = lhs.degree_of(p.theta()).unwrap();
            let excluded = p.exclusions.iter().any(|(a, b)| *a == r.name || *b == r.name);
            if !(is_admissible(&p.matrix, &deg).unwrap() || excluded || !p.flags.is_empty()) {
                bad.push(format!("{name}/{}", r.name));
            }
        }
    }
    assert!(bad.is_empty(), "unannotated inadmissible relations: {bad:?}");
}

fn x112_by_hand(q: &BraidingMatrix) -> Poly {
    let f = q.field();
    let (q11, q12) = (q.get(0, 0).clone(), q.get(0, 1).clone());
    let one = FieldElem::one(f);
    let mut p = Poly::word(f, Word(vec![0, 0, 1]));
    p.add_term(Word(vec![0, 1, 0]), -&(&q12 * &(&one + &q11)));
    p.add_term(Word(vec![1, 0, 0]), &q11 * &(&q12 * &q12));
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn x112_three_terms(l in 2u32..=24, e in prop::collection::vec(0i64..24, 4)) {
        let f = make_field(l);
        let q = BraidingMatrix::from_exponents(&f, &[vec![e[0], e[1]], vec![e[2], e[3]]]).unwrap();
        let lam = expand(&RelExpr::IteratedAd(vec![0, 0, 1]), &q).unwrap();
        prop_assert_eq!(lam.as_plain().unwrap(), x112_by_hand(&q));
    }
}

#[test]
fn near_misses_are_rejected_with_positions() {
    common::near_miss::run(1000).unwrap();
}

#[test]
fn unknown_entries() {
    assert_eq!(catalog("missing").unwrap_err(), DslError::UnknownCatalogEntry("missing".into()));
    assert!(catalog_source("missing").is_err());
}
