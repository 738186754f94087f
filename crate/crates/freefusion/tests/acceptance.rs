//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Everything here is exact integer arithmetic; there are no tolerances.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use freefusion::catalog;
use freefusion::cocenter;
use freefusion::datum::FusionDatum;
use freefusion::grading::{bounded_chain_oracle, chain_group_of, ChainGroup};
use freefusion::normality::{bounded_simplicity_check, ClosureOptions};
use freefusion::ring::{
    free_product_consistency, ConsistencyReport, RingElement, RingHandle, Simple,
};
use freefusion::semiring::{self, SemiringElement};
use freefusion::word::Word;

fn simple_el(d: &std::sync::Arc<FusionDatum>, ids: &[i64]) -> SemiringElement {
    SemiringElement::simple(d.clone(), d.word(ids.iter().copied()).unwrap()).unwrap()
}

fn sum(d: &std::sync::Arc<FusionDatum>, words: &[&[i64]]) -> SemiringElement {
    let mut out = SemiringElement::zero(d.clone());
    for ids in words {
        out = out.add(&simple_el(d, ids)).unwrap();
    }
    out
}

#[test]
fn criterion_1_exact_fusion_products() {
    let au = catalog::au();
    let a_times_dual = semiring::product(&simple_el(&au, &[0]), &simple_el(&au, &[1])).unwrap();
    assert_eq!(a_times_dual, sum(&au, &[&[], &[0, 1]]));
    let adj = simple_el(&au, &[0, 1]);
    let adj_sq = semiring::product(&adj, &adj).unwrap();
    assert_eq!(adj_sq, sum(&au, &[&[], &[0, 1], &[0, 1, 0, 1]]));

    let aaut = catalog::aaut();
    let r = simple_el(&aaut, &[0]);
    assert_eq!(semiring::product(&r, &r).unwrap(), sum(&aaut, &[&[], &[0], &[0, 0]]));

    for s in [2u64, 3, 5] {
        let d = FusionDatum::cyclic(s).unwrap();
        for x in 0..s as i64 {
            let minus_x = (-x).rem_euclid(s as i64);
            let got =
                semiring::product(&simple_el(&d, &[x]), &simple_el(&d, &[minus_x])).unwrap();
            assert_eq!(got, sum(&d, &[&[], &[0], &[x, minus_x]]), "s={s} x={x}");
        }
    }
    println!("[criterion 1] PASS: exact fusion products match across all four rule families");
}

#[test]
fn criterion_2_su2_tensor_oracle() {
    let bu = catalog::bu();
    let power = |m: usize| simple_el(&bu, &vec![0; m]);
    for m in 0..=5usize {
        for n in 0..=5usize {
            let got = semiring::product(&power(m), &power(n)).unwrap();
            // independent Clebsch-Gordan expectation
            let mut expect = SemiringElement::zero(bu.clone());
            for k in 0..=m.min(n) {
                expect = expect.add(&power(m + n - 2 * k)).unwrap();
            }
            assert_eq!(got, expect, "m={m} n={n}");
        }
    }
    let dims: BTreeMap<_, _> = [(bu.letter(0).unwrap(), 2u64)].into_iter().collect();
    let mut oracle = semiring::DimensionOracle::new(&bu, &dims).unwrap();
    for m in 0..=5usize {
        // 2j+1 with spin j = m/2
        let expect = BigUint::from(m as u64 + 1);
        let w = bu.word(std::iter::repeat(0).take(m)).unwrap();
        assert_eq!(oracle.word_dimension(&w).unwrap(), expect, "m={m}");
    }
    println!("[criterion 2] PASS: tensor powers follow the Clebsch-Gordan pattern, dims 1..=6");
}

fn acceptance_rings() -> Vec<(&'static str, RingHandle)> {
    catalog::catalog_rings()
}

#[test]
fn criterion_3_associativity_and_involution() {
    for (name, ring) in acceptance_rings() {
        let simples = ring.enumerate_simples(3, None).unwrap();
        let elements: Vec<RingElement> = simples
            .iter()
            .map(|s| RingElement::simple(ring.clone(), s.clone()).unwrap())
            .collect();
        for (i, x) in simples.iter().enumerate() {
            for (j, y) in simples.iter().enumerate() {
                let xy = ring.product(x, y).unwrap();
                let dual_prod = xy.dual().unwrap();
                let rhs = ring
                    .product(&ring.dual_simple(y).unwrap(), &ring.dual_simple(x).unwrap())
                    .unwrap();
                assert_eq!(dual_prod, rhs, "{name}: dual of {i}*{j}");
                for (k, z) in elements.iter().enumerate() {
                    let left = xy.mul(z).unwrap();
                    let right = elements[i].mul(&ring.product(y, &simples[k]).unwrap()).unwrap();
                    assert_eq!(left, right, "{name}: ({i}·{j})·{k}");
                }
            }
        }
    }
    println!("[criterion 3] PASS: associativity and dual anti-multiplicativity at length <= 3");
}

#[test]
fn criterion_4_domination() {
    for d in [catalog::au(), FusionDatum::cyclic(3).unwrap()] {
        let words = d.words_up_to(3, None).unwrap();
        for xp in &words {
            for yp in &words {
                let small = semiring::product(
                    &SemiringElement::simple(d.clone(), xp.clone()).unwrap(),
                    &SemiringElement::simple(d.clone(), yp.clone()).unwrap(),
                )
                .unwrap();
                for t in &words {
                    let x = xp.concat(t);
                    let y = d.word_dual(t).concat(yp);
                    let big = semiring::product(
                        &SemiringElement::simple(d.clone(), x).unwrap(),
                        &SemiringElement::simple(d.clone(), y).unwrap(),
                    )
                    .unwrap();
                    assert!(
                        semiring::leq(&small, &big).unwrap().is_some(),
                        "domination failed at {xp} {yp} {t}"
                    );
                }
            }
        }
    }
    println!("[criterion 4] PASS: extended products dominate at length <= 3");
}

#[test]
fn criterion_5_free_product_consistency() {
    let pairs = [
        (catalog::bu(), catalog::bu()),
        (catalog::au(), FusionDatum::cyclic(2).unwrap()),
        (catalog::bu(), catalog::aaut()),
    ];
    for (a, b) in pairs {
        match free_product_consistency(&[a, b], 3).unwrap() {
            ConsistencyReport::Agree { pairs_checked } => assert!(pairs_checked > 0),
            ConsistencyReport::Mismatch(m) => {
                panic!("constructions disagree on {} · {}: {m:?}", m.x, m.y)
            }
        }
    }
    println!("[criterion 5] PASS: both free-product constructions agree at length <= 3");
}

#[test]
fn criterion_6_chain_groups_and_oracle() {
    let expectations = [
        ("au", "Z"),
        ("refl:2", "Z/2"),
        ("refl:3", "Z/3"),
        ("refl:inf", "Z"),
        ("bu", "Z/2"),
        ("aaut", "trivial"),
        ("freeprod:bu,bu", "Z/2 * Z/2"),
        ("freeprod:au,refl:2", "Z * Z/2"),
    ];
    for (spec, expect) in expectations {
        let ring = catalog::ring_from_spec(spec).unwrap();
        let exact = chain_group_of(&ring).unwrap();
        assert_eq!(exact.describe(), expect, "{spec}");
    }
    // the union-find oracle induces the same partition as the exact degree
    // map on every catalog ring at length 4
    for (spec, ring) in acceptance_rings() {
        let exact = chain_group_of(&ring).unwrap();
        let ChainGroup::Oracle(oracle) = bounded_chain_oracle(&ring, 4, None).unwrap() else {
            panic!("oracle expected");
        };
        let simples = oracle.simples().to_vec();
        let degrees: Vec<_> = simples.iter().map(|s| exact.degree(s).unwrap()).collect();
        let classes: Vec<_> = simples.iter().map(|s| oracle.class_of(s).unwrap()).collect();
        for i in 0..simples.len() {
            for j in 0..simples.len() {
                assert_eq!(
                    classes[i] == classes[j],
                    degrees[i] == degrees[j],
                    "{spec}: partition mismatch between {:?} and {:?}",
                    simples[i],
                    simples[j]
                );
            }
        }
    }
    println!("[criterion 6] PASS: exact chain groups and the length-4 oracle partition agree");
}

#[test]
fn criterion_7_cocenter_characterizations() {
    for spec in ["au", "refl:3", "freeprod:bu,bu"] {
        let ring = catalog::ring_from_spec(spec).unwrap();
        let report = cocenter::crosscheck_alt_descr(&ring, 4, 2, None).unwrap();
        assert!(report.ok, "{spec}: witnesses {:?}", report.witnesses);
        for w in &report.witnesses {
            assert!(w.bound_sensitive, "{spec}: refutation witness {w:?}");
        }
    }
    // where the factor bound does not pinch, the three sets coincide exactly
    let au = catalog::ring_from_spec("au").unwrap();
    assert!(cocenter::crosscheck_alt_descr(&au, 4, 2, None).unwrap().fully_equal);
    let refl3 = catalog::ring_from_spec("refl:3").unwrap();
    assert!(cocenter::crosscheck_alt_descr(&refl3, 3, 2, None).unwrap().fully_equal);

    // the unitary kernel is precisely the balanced words
    let au = catalog::ring_from_spec("au").unwrap();
    let slice = cocenter::cocenter_simples(&au, 4, None).unwrap();
    let kernel: BTreeSet<Simple> = slice.simples.into_iter().collect();
    let d = au.as_free_datum().unwrap();
    for w in d.words_up_to(4, None).unwrap() {
        let balance: i64 = w.letters().iter().map(|l| if l.id() == 0 { 1 } else { -1 }).sum();
        assert_eq!(kernel.contains(&Simple::Word(w.clone())), balance == 0, "{w}");
    }

    // the reflection kernel is precisely the zero-sum words
    let refl3 = catalog::ring_from_spec("refl:3").unwrap();
    let slice = cocenter::cocenter_simples(&refl3, 4, None).unwrap();
    let kernel: BTreeSet<Simple> = slice.simples.into_iter().collect();
    let d = refl3.as_free_datum().unwrap();
    for w in d.words_up_to(4, None).unwrap() {
        let total: i64 = w.letters().iter().map(|l| l.id()).sum();
        assert_eq!(kernel.contains(&Simple::Word(w.clone())), total % 3 == 0, "{w}");
    }
    println!("[criterion 7] PASS: degree kernel = majorization characterizations at (4, 2)");
}

#[test]
fn criterion_8_bounded_simplicity() {
    for spec in ["au", "refl:2", "refl:3", "aaut", "bu", "freeprod:bu,bu", "freeprod:au,refl:2"] {
        let ring = catalog::ring_from_spec(spec).unwrap();
        let report = bounded_simplicity_check(&ring, 2, 6, &ClosureOptions::new(6)).unwrap();
        for v in &report.verdicts {
            assert_eq!(
                v.verdict,
                freefusion::normality::Verdict::Saturates,
                "{spec}: generator {} got STUCK (closure size {}, rounds {}) — \
                 this contradicts the expected saturation",
                v.generator,
                v.closure_size,
                v.rounds
            );
        }
        assert!(report.all_saturate(), "{spec}");
    }
    println!("[criterion 8] PASS: every cocenter generator saturates at (inner 2, outer 6)");
}

#[test]
fn criterion_9_no_nontrivial_invertibles() {
    for spec in ["au", "bu", "aaut", "refl:2", "refl:3"] {
        let ring = catalog::ring_from_spec(spec).unwrap();
        let d = ring.as_free_datum().unwrap();
        for w in d.words_up_to(4, None).unwrap() {
            if w.is_empty() {
                continue;
            }
            let a = SemiringElement::simple(d.clone(), w.clone()).unwrap();
            let p = semiring::product(&a, &a.dual()).unwrap();
            assert!(p.support_len() >= 2, "{spec}: {w} looks invertible");
            assert!(p.coefficient(&Word::empty()).is_one(), "{spec}: {w}");
        }
    }
    println!("[criterion 9] PASS: no nonempty word is invertible at length <= 4");
}
