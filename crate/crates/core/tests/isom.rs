use std::collections::BTreeSet;

use nichols_core::braiding::BraidingMatrix;
use nichols_core::deform::LiftingDatum;
use nichols_core::isom::*;
use nichols_core::presdsl::{catalog, parse, Presentation};
use nichols_core::scalars::{make_field, FieldElem, FieldRef};
use proptest::prelude::*;

fn all_minus_one(theta: usize, field: &FieldRef) -> BraidingMatrix {
    let m1 = -FieldElem::one(field);
    BraidingMatrix::new(field, vec![vec![m1; theta]; theta]).unwrap()
}

fn datum(p: &Presentation, pairs: &[(&str, FieldElem)]) -> LiftingDatum {
    LiftingDatum {
        presentation: p.clone(),
        realization: None,
        lambda: pairs.iter().map(|(n, v)| (n.to_string(), v.clone())).collect(),
    }
}

#[test]
fn symmetry_groups() {
    let a2 = catalog("cartan-A2-N3").unwrap();
    let s = symmetries(&a2.matrix).unwrap();
    assert_eq!(s, [DiagramSymmetry(vec![0, 1]), DiagramSymmetry(vec![1, 0])]);
    assert_eq!(s[1].to_string(), "(1 2)");
    assert_eq!(s[0].to_string(), "()");

    let f = make_field(12);
    let q = BraidingMatrix::from_exponents(&f, &[vec![1, 5], vec![7, 4]]).unwrap();
    assert_eq!(symmetries(&q).unwrap(), [DiagramSymmetry::identity(2)]);

    let link = catalog("linking-A1xA1").unwrap();
    assert_eq!(symmetries(&link.matrix).unwrap().len(), 2);

    let big = all_minus_one(9, &make_field(2));
    assert_eq!(symmetries(&big).unwrap_err(), IsomError::RankTooLarge(9));
}

#[test]
fn classes() {
    let link = catalog("linking-A1xA1").unwrap();
    let c = pair_classes(&link.matrix);
    assert_eq!(c[0], BTreeSet::from([0, 1]));

    let a2 = catalog("cartan-A2-N5").unwrap();
    assert_eq!(pair_classes(&a2.matrix), [BTreeSet::from([0]), BTreeSet::from([1])]);
    // all four entries equal: the matrix cannot separate the vertices
    let a2 = catalog("cartan-A2-N3").unwrap();
    assert_eq!(pair_classes(&a2.matrix)[0], BTreeSet::from([0, 1]));

    let a1 = catalog("cartan-A1").unwrap();
    assert_eq!(pair_classes(&a1.matrix), [BTreeSet::from([0])]);
}

#[test]
fn action_examples() {
    let f = make_field(6);
    let one = FieldElem::one(&f);
    let c = FieldElem::root(&f, 1);
    let lam: Linking = [((0, 1), FieldElem::from_int(&f, 3))].into();
    let id = DiagramSymmetry::identity(2);
    assert_eq!(act_linking(&id, &[one.clone(), one.clone()], &lam), lam);
    let out = act_linking(&id, &[c.clone(), one.clone()], &lam);
    assert_eq!(out[&(0, 1)], &c.inv().unwrap() * &lam[&(0, 1)]);
    let swap = DiagramSymmetry(vec![1, 0]);
    let out = act_linking(&swap, &[c.clone(), c.clone()], &lam);
    assert_eq!(out[&(0, 1)], &(&c * &c).inv().unwrap() * &lam[&(0, 1)]);
}

fn linked_pair() -> Presentation {
    parse(
        "presentation pair\nfield 6\ntheta 2\nmatrix [-1, -1; -1, -1]\n\
         rel m1 s0 y1^2\nrel m2 s0 y2^2\nrel lnk1_2 s0 ad(1,2) primitive deform\n",
    )
    .unwrap()
}

#[test]
fn isomorphism_examples() {
    let p = linked_pair();
    let f = p.field.clone();
    let one = FieldElem::one(&f);
    let z3 = FieldElem::root(&f, 2);
    let a = datum(&p, &[("lnk1_2", one.clone())]);
    let b = datum(&p, &[("lnk1_2", z3.clone())]);
    let w = isom_linking(&a, &b).unwrap().unwrap();
    assert!(w.sigma.is_identity());
    assert_eq!(w.s, [z3.inv().unwrap(), one.clone()]);

    let zero = datum(&p, &[("lnk1_2", FieldElem::zero(&f))]);
    assert_eq!(isom_linking(&a, &zero).unwrap(), None);
    let w = isom_linking(&zero, &zero).unwrap().unwrap();
    assert_eq!(w, Witness::identity(&p.matrix));

    let bad = datum(&p, &[("m1", one)]);
    assert_eq!(
        isom_linking(&bad, &a).unwrap_err(),
        IsomError::UnsupportedParameters("m1".into())
    );
}

#[test]
fn odd_cycles_need_square_roots() {
    // three pairwise linked -1 vertices: s_i s_j = c_ij has a solution iff
    // the product of the ratios is a square
    let f = make_field(4);
    let q = all_minus_one(3, &f);
    let one = FieldElem::one(&f);
    let lam: Linking = [((0, 1), one.clone()), ((0, 2), one.clone()), ((1, 2), one.clone())].into();
    let four = FieldElem::from_int(&f, 4);
    let target: Linking = lam.iter().map(|(k, v)| (*k, &four.inv().unwrap() * v)).collect();
    let w = find_witness(&q, &lam, &target).unwrap().unwrap();
    assert_eq!(w.apply(&lam), target);

    let two = FieldElem::from_int(&f, 2);
    let target: Linking = lam.iter().map(|(k, v)| (*k, &two * v)).collect();
    assert_eq!(find_witness(&q, &lam, &target).unwrap(), None);
}

const L: u32 = 12;

fn arb_witness(theta: usize) -> impl Strategy<Value = Witness> {
    let f = make_field(L);
    (
        Just((0..theta).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec(0..L as i64, theta),
    )
        .prop_map(move |(sigma, ks)| Witness {
            sigma: DiagramSymmetry(sigma),
            s: ks.iter().map(|&k| FieldElem::root(&f, k)).collect(),
        })
}

fn arb_linking(theta: usize) -> impl Strategy<Value = Linking> {
    let f = make_field(L);
    let pairs: Vec<(usize, usize)> = (0..theta).flat_map(|i| (i + 1..theta).map(move |j| (i, j))).collect();
    prop::collection::vec(prop::option::of(0..L as i64), pairs.len()).prop_map(move |vals| {
        pairs
            .iter()
            .zip(vals)
            .filter_map(|(k, v)| v.map(|e| (*k, FieldElem::root(&f, e))))
            .collect()
    })
}

fn instance() -> impl Strategy<Value = (usize, Witness, Witness, Linking)> {
    (2usize..=4).prop_flat_map(|t| (Just(t), arb_witness(t), arb_witness(t), arb_linking(t)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn action_is_a_group_action((_t, outer, inner, lam) in instance()) {
        let two_steps = outer.apply(&inner.apply(&lam));
        prop_assert_eq!(outer.compose(&inner).apply(&lam), two_steps);
        prop_assert_eq!(outer.inverse().apply(&outer.apply(&lam)), lam);
    }

    #[test]
    fn isom_is_an_equivalence((t, w1, w2, lam) in instance()) {
        let q = all_minus_one(t, &make_field(L));
        let mid = w1.apply(&lam);
        let end = w2.apply(&mid);
        let there = find_witness(&q, &lam, &mid).unwrap();
        prop_assert!(there.is_some());
        prop_assert!(find_witness(&q, &lam, &lam).unwrap().is_some());
        let back = find_witness(&q, &mid, &lam).unwrap().unwrap();
        prop_assert_eq!(back.apply(&mid), lam.clone());
        prop_assert_eq!(there.unwrap().inverse().apply(&mid), lam.clone());
        prop_assert!(find_witness(&q, &lam, &end).unwrap().is_some());
    }

    #[test]
    fn support_pattern_is_invariant((t, w, _w2, lam) in instance(), other in arb_linking(4)) {
        let q = all_minus_one(t, &make_field(L));
        let other: Linking = other.into_iter().filter(|((_, j), _)| *j < t).collect();
        let orbit: BTreeSet<Vec<(usize, usize)>> = symmetries(&q)
            .unwrap()
            .iter()
            .map(|s| act_linking(s, &vec![FieldElem::one(q.field()); t], &lam).into_keys().collect())
            .collect();
        let found = find_witness(&q, &lam, &other).unwrap();
        if !orbit.contains(&other.keys().copied().collect::<Vec<_>>()) {
            prop_assert!(found.is_none());
        }
        let moved = w.apply(&lam);
        prop_assert!(orbit.contains(&moved.keys().copied().collect::<Vec<_>>()));
    }
}

#[test]
fn blockwise_decisions_agree() {
    // two disjoint linked pairs; data are isomorphic iff a common symmetry
    // matches each block
    let f = make_field(L);
    let q = all_minus_one(4, &f);
    let z = |k| FieldElem::root(&f, k);
    let a: Linking = [((0, 1), z(1)), ((2, 3), z(2))].into();
    let b: Linking = [((0, 1), z(5)), ((2, 3), z(0))].into();
    let blocks_ok = find_witness(&all_minus_one(2, &f), &[((0, 1), z(1))].into(), &[((0, 1), z(5))].into())
        .unwrap()
        .is_some()
        && find_witness(&all_minus_one(2, &f), &[((0, 1), z(2))].into(), &[((0, 1), z(0))].into())
            .unwrap()
            .is_some();
    assert_eq!(find_witness(&q, &a, &b).unwrap().is_some(), blocks_ok);

    let c: Linking = [((0, 1), z(1)), ((1, 2), z(2))].into();
    assert!(find_witness(&q, &a, &c).unwrap().is_none());
}
