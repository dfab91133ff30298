use std::collections::BTreeSet;

use gsp4h::ext_ledger::*;
use gsp4h::hecke::*;
use gsp4h::linalg::Subspace;
use gsp4h::phi_module::nondegeneracy_poly;
use gsp4h::scalar::{int, rat, Field, Rational};
use gsp4h::weyl::WeylElement;
use proptest::prelude::*;

#[test]
fn hom_space_dimensions() {
    let dims: Vec<usize> = HomKind::ALL.iter().map(|k| hom_space(*k).dim()).collect();
    assert_eq!(dims, [6, 3, 4, 5, 5, 6, 3, 4, 5, 5]);
    for k in HomKind::ALL {
        let expected_ambient = if k.is_lie() { 8 } else { 6 };
        assert_eq!(hom_space(k).ambient(), expected_ambient);
    }
    // Levi-central parts meet the smooth part in the two smooth central directions
    let sm = hom_space(HomKind::SmoothLie);
    for k in [HomKind::SiegelLie, HomKind::KlingenLie] {
        assert_eq!(hom_space(k).intersect(&sm).dim(), 3);
        assert!(hom_space(k).contains_space(&hom_space(HomKind::CentralLie)));
    }
}

#[test]
fn reparametrisation_maps_hom_spaces() {
    let pairs = [
        (HomKind::FullLie, HomKind::FullTorus),
        (HomKind::SmoothLie, HomKind::SmoothTorus),
        (HomKind::CentralLie, HomKind::CentralTorus),
        (HomKind::SiegelLie, HomKind::KlingenTorus),
        (HomKind::KlingenLie, HomKind::SiegelTorus),
    ];
    for (src, dst) in pairs {
        assert_eq!(ell_image(&hom_space(src)).unwrap(), hom_space(dst), "{src:?}");
    }
}

#[test]
fn reparametrisation_examples() {
    let log_log = [0, 1, 0, 1, 0, 0, 0, 0].map(int);
    assert_eq!(ell_map(&log_log).unwrap(), [0, 1, 0, 0, 0, 0].map(int).to_vec());
    let bad = [0, 1, 0, 0, 0, 0, 0, 0].map(int);
    assert!(ell_map(&bad).is_err());
    let val_only = [1, 0, 3, 0, 2, 0, 4, 0].map(int);
    let img = ell_map(&val_only).unwrap();
    assert!(hom_space(HomKind::SmoothTorus).contains(&img));
}

fn lie_char() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(-20i64..20, 6).prop_map(|v| {
        // (val, log) for coordinates 1..3, coordinate 4 forced by the constraint
        let val4 = v[2] + v[4] - v[0];
        let log4 = v[3] + v[5] - v[1];
        v.into_iter().chain([val4, log4]).map(int).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reparametrisation_is_equivariant(psi in lie_char(), wi in 0usize..8) {
        let w = WeylElement::all()[wi];
        let lhs = ell_map(&act_lie(&w, &psi)).unwrap();
        let rhs = act_torus(&w.check(), &ell_map(&psi).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn constituent_labels() {
    let all = all_constituents();
    assert_eq!(all.len(), 8);
    assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 8);
    let mut excluded = Vec::new();
    for mask in 1u8..16 {
        let set: Vec<u8> = (1..=4).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        if set.len() > 2 {
            assert!(constituent(&set).is_err());
            continue;
        }
        if constituent(&set).is_err() {
            excluded.push(set);
        }
    }
    excluded.sort();
    assert_eq!(excluded, vec![vec![1, 4], vec![2, 3]]);
    assert_eq!(constituent_of(&WeylElement::s1(), 2).to_string(), "C({1,2},s2)");
    assert!(matches!(constituent(&[1, 1]), Err(LedgerError::InvalidIndexSet(_))));
}

#[test]
fn every_label_arises_from_the_weyl_group() {
    let mut seen = BTreeSet::new();
    for w in WeylElement::all() {
        for i in 1..=2 {
            seen.insert(constituent_of(&w, i));
        }
    }
    assert_eq!(seen.len(), 8);
}

#[test]
fn weyl_criterion_matches_labels() {
    for w in WeylElement::all() {
        for w2 in WeylElement::all() {
            for i in 1..=2u8 {
                for i2 in 1..=2u8 {
                    let by_labels = i == i2 && constituent_of(&w, i) == constituent_of(&w2, i2);
                    assert_eq!(same_constituent_by_weyl(&w, i, &w2, i2), by_labels, "{w} {i} {w2} {i2}");
                }
            }
        }
    }
}

#[test]
fn parabolic_label_sets_have_three_elements() {
    for c in constituents(2) {
        let set: Vec<u8> = c.set.iter().copied().collect();
        let labels = parabolic_labels(Parabolic::Siegel, &set).unwrap();
        assert_eq!(labels.len(), 3);
        assert!(labels.iter().all(|l| l.set.is_subset(&c.set)));
        assert!(parabolic_labels(Parabolic::Klingen, &set).is_err());
    }
    for c in constituents(1) {
        let set: Vec<u8> = c.set.iter().copied().collect();
        let labels = parabolic_labels(Parabolic::Klingen, &set).unwrap();
        assert_eq!(labels.len(), 3);
        assert!(labels.iter().all(|l| l.set.is_superset(&c.set)));
        assert!(parabolic_labels(Parabolic::Siegel, &set).is_err());
    }
    let p = parabolic_labels(Parabolic::Siegel, &[1, 2]).unwrap();
    let names: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    assert_eq!(names, ["C({1},s1)", "C({2},s1)", "C({1,2},s2)"]);
}

#[test]
fn socle_layers() {
    let ps = socle_diagram(&SocleKind::Ps1 { w: WeylElement::identity() });
    assert_eq!(ps.layers, vec![vec![ALGEBRAIC.to_string()], vec!["C({1},s1)".into(), "C({1,2},s2)".into()]]);
    let pi1 = socle_diagram(&SocleKind::Pi1);
    assert_eq!(pi1.layers.len(), 2);
    assert_eq!(pi1.layers[1].len(), 8);
    let pimin = socle_diagram(&SocleKind::Pimin);
    assert_eq!(pimin.layers.len(), 3);
    assert_eq!(pimin.layers[0], vec![ALGEBRAIC.to_string()]);
    assert_eq!(pimin.layers[1], pi1.layers[1]);
    assert_eq!(pimin.layers[2], vec![ALGEBRAIC.to_string(); 2]);
    let dot = pimin.to_dot();
    assert!(dot.starts_with("digraph"));
    assert!(dot.matches("n2_").count() >= 2);
    for w in WeylElement::all() {
        let d = socle_diagram(&SocleKind::Ps1 { w });
        assert_eq!(d.layers[1], vec![constituent_of(&w, 1).to_string(), constituent_of(&w, 2).to_string()]);
    }
}

#[test]
fn ledger_is_consistent() {
    let report = check_ledger().unwrap();
    assert!(report.checks.iter().all(|c| c.ok));
    for (name, dim) in EXPECTED_DIMS {
        assert_eq!(report.dim(name), Some(dim), "{name}");
    }
    assert!(report.entries.iter().all(|e| e.dim >= 0 && !e.source.is_empty()));
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["entries"][0]["name"], "Ext^G");
    assert_eq!(json["entries"][0]["dim"], 12);
}

#[test]
fn l_invariant_plane_at_sample_points() {
    let mut seen = Vec::new();
    for (a, b) in [(int(2), int(3)), (rat(1, 2), int(5)), (int(-3), rat(2, 7)), (int(2), int(5))] {
        let plane = l_invariant_plane(&a, &b).unwrap();
        assert_eq!(plane.basis.dim(), 2);
        assert!(plane.complements_glue);
        assert_eq!((plane.recovered_a.clone(), plane.recovered_b.clone()), (a, b));
        assert!(!seen.contains(&plane.basis));
        seen.push(plane.basis);
    }
}

fn hecke_input() -> impl Strategy<Value = HeckeData> {
    let primes = prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]);
    let q = || (-30i64..30, 1i64..8).prop_map(|(n, d)| rat(n, d));
    (primes, q().prop_filter("invertible", |c| *c != int(0)), q(), q())
        .prop_map(|(l, c0, c1, c2)| HeckeData { l, c0, c1, c2 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hecke_round_trip(d in hecke_input()) {
        let f = hecke_charpoly(&d).unwrap();
        prop_assert_eq!(&f.coeffs[0], &int(1));
        prop_assert_eq!(&f.coeffs[4], &(&f.sim * &f.sim));
        prop_assert_eq!(&f.coeffs[3], &(-(&f.sim * &d.c1)));
        let back = ideal_generators(&f, d.l).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(hecke_charpoly(&back).unwrap(), f);
    }
}

#[test]
fn hecke_example_and_inconsistencies() {
    let d = HeckeData { l: 2, c0: int(1), c1: int(0), c2: int(0) };
    let f = hecke_charpoly(&d).unwrap();
    assert_eq!(f.to_string(), "T^4 + 10*T^2 + 64");
    assert_eq!(f.sim, int(8));

    let mut bad = f.clone();
    bad.coeffs[4] = int(63);
    assert!(matches!(ideal_generators(&bad, 2), Err(HeckeError::InconsistentData(_))));
    let mut bad = f.clone();
    bad.sim = int(-9);
    assert!(matches!(ideal_generators(&bad, 2), Err(HeckeError::InconsistentData(_))));
    let mut bad = f.clone();
    bad.coeffs[0] = int(2);
    assert!(matches!(ideal_generators(&bad, 2), Err(HeckeError::InconsistentData(_))));
    let d1 = HeckeData { l: 2, c0: int(1), c1: int(3), c2: int(0) };
    let mut bad = hecke_charpoly(&d1).unwrap();
    bad.coeffs[3] = int(0);
    assert!(matches!(ideal_generators(&bad, 2), Err(HeckeError::InconsistentData(_))));

    assert!(matches!(hecke_charpoly(&HeckeData { l: 4, ..d.clone() }), Err(HeckeError::InvalidData(_))));
    assert!(matches!(hecke_charpoly(&HeckeData { c0: int(0), ..d }), Err(HeckeError::InvalidData(_))));
}

fn classify_input(gap: i64, shift: i64) -> ClassifyJson {
    let p = |k: i64| format!("p^{k}");
    ClassifyJson {
        alphas: [p(-3 * gap + shift), format!("2*{}", p(-2 * gap + shift)), p(-gap + shift), format!("2*{}", p(shift))],
        weights: [3 * gap, 2 * gap, gap, 0],
        p: 3,
        c: "1".into(),
    }
}

#[test]
fn very_classical_above_the_gap_bound() {
    let threshold = GAP_SLOPE + GAP_OFFSET;
    let r = classify_input(threshold + 1, 0).run().unwrap();
    assert!(r.bound_ok && r.gap_ok && r.admissible_total);
    assert_eq!(r.w_set, ["id"]);
    assert!(r.very_classical);
    assert_eq!(r.gap_threshold, format!("{threshold}/1"));

    let at = classify_input(threshold, 0).run().unwrap();
    assert!(!at.gap_ok);
    assert!(at.gaps.iter().all(|&g| g == threshold));
}

#[test]
fn nonzero_total_empties_the_refinement_set() {
    let r = classify_input(5, 1).run().unwrap();
    assert!(!r.admissible_total);
    assert!(r.w_set.is_empty());
    assert!(!r.very_classical);
    assert!(r.refinements.iter().all(|x| !x.admissible));
}

#[test]
fn bound_readings_are_both_reported() {
    // val(alpha_1) = -3 against h = (3,2,1,0): per-index sums all 0, first-alpha sums reach -3
    let input = ClassifyJson {
        alphas: ["p^-3".into(), "p^-2".into(), "p^-1".into(), "1".into()],
        weights: [3, 2, 1, 0],
        p: 5,
        c: "1".into(),
    };
    let r = input.run().unwrap();
    assert!(r.bound_ok);
    assert!(!r.bound_ok_first_alpha);
    assert!(r.readings_differ);
}

#[test]
fn classify_rejects_structural_violations() {
    let mut x = classify_input(5, 0);
    x.p = 9;
    assert!(matches!(x.run(), Err(HeckeError::InvalidData(_))));
    let mut x = classify_input(5, 0);
    x.c = "0".into();
    assert!(matches!(x.run(), Err(HeckeError::InvalidData(_))));
    let mut x = classify_input(5, 0);
    x.weights = [15, 10, 6, 0];
    assert!(matches!(x.run(), Err(HeckeError::InvalidData(_))));
    let mut x = classify_input(5, 0);
    x.alphas[0] = "p^-14".into();
    assert!(matches!(x.run(), Err(HeckeError::InvalidData(_))));
}

fn vals_and_weights() -> impl Strategy<Value = ([i64; 4], [i64; 4])> {
    let vals = (-8i64..8, -8i64..8, -8i64..8).prop_map(|(x, y, z)| [x, y, z, y + z - x]);
    let weights = (1i64..5, 1i64..5, -6i64..6).prop_map(|(g1, g2, h4)| {
        // h1 - h2 = h3 - h4 forced by h1 + h4 = h2 + h3
        [h4 + g1 + g2 + g1, h4 + g1 + g2, h4 + g1, h4]
    });
    (vals, weights)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn refinement_shortcut_matches_subspace_scan((vals, weights) in vals_and_weights()) {
        for w in WeylElement::all() {
            prop_assert_eq!(refinement_admissible(&vals, &weights, &w), refinement_admissible_brute(&vals, &weights, &w));
        }
    }

    #[test]
    fn classify_w_set_matches_brute_force((vals, weights) in vals_and_weights()) {
        let alphas = vals.map(|v| PadicNumber::new(&int(1), v, 7).unwrap());
        let r = classicality_classify(&alphas, &weights, 7, &int(3)).unwrap();
        let brute: Vec<String> = WeylElement::all()
            .iter()
            .filter(|w| refinement_admissible_brute(&vals, &weights, w))
            .map(|w| w.word_string())
            .collect();
        prop_assert_eq!(&r.w_set, &brute);
        prop_assert_eq!(r.very_classical, brute == ["id"]);
    }
}

#[test]
fn padic_parsing() {
    let x = PadicNumber::parse("18*p^2", 3).unwrap();
    assert_eq!((x.unit.clone(), x.val()), (int(2), 4));
    let y = PadicNumber::parse("1/9", 3).unwrap();
    assert_eq!(y.val(), -2);
    assert!(PadicNumber::parse("0", 3).is_err());
    assert!(PadicNumber::parse("p^x", 3).is_err());
    assert_eq!(x.mul(&y).val(), 2);
}

#[test]
fn ledger_and_kernel_agree_on_plane_dimension() {
    let report = check_ledger().unwrap();
    let (a, b) = (rat(3, 5), int(-7));
    assert!(!nondegeneracy_poly(&a, &b).is_zero());
    let plane = l_invariant_plane(&a, &b).unwrap();
    assert_eq!(report.dim("L(D)"), Some(plane.basis.dim() as i64));
    let _: &Subspace<Rational> = &plane.basis;
}
