mod common;

use lagcd::cluster::{cluster, cluster_roots_dnc, Clustering};
use lagcd::lagpoly::Root;
use lagcd::{ClusterParams, Complex64, MergeRule, RootList, Strategy as Method};
use proptest::prelude::*;

fn arb_roots(max: usize) -> impl Strategy<Value = RootList> {
    prop::collection::vec(((-1.0..1.0f64, -1.0..1.0f64), 1u32..4), 0..max).prop_map(|v| {
        RootList::new(v.into_iter().map(|((a, b), m)| Root::new(Complex64::new(a, b), m)).collect()).unwrap()
    })
}

fn arb_params() -> impl Strategy<Value = ClusterParams> {
    (0.0..0.6f64, any::<bool>(), any::<bool>(), any::<bool>(), 2u32..5).prop_map(|(sigma, heur, mid, fix, mm)| {
        ClusterParams {
            sigma,
            max_multiplicity: mm,
            strategy: if heur { Method::SymmetryHeuristic } else { Method::DivideAndConquer },
            merge_rule: if mid { MergeRule::Midpoint } else { MergeRule::Weighted },
            fixpoint: fix,
            ..ClusterParams::default()
        }
    })
}

fn check_provenance(input: &RootList, out: &Clustering) -> Result<(), TestCaseError> {
    prop_assert_eq!(out.roots.total_multiplicity(), input.total_multiplicity());
    prop_assert_eq!(out.members.len(), out.roots.len());
    let mut seen = vec![0u32; input.len()];
    for (k, r) in out.roots.iter().enumerate() {
        let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &i in &out.members[k] {
            let z = input.entries()[i].value;
            lo_re = lo_re.min(z.re);
            hi_re = hi_re.max(z.re);
            lo_im = lo_im.min(z.im);
            hi_im = hi_im.max(z.im);
        }
        let slack = 1e-12;
        prop_assert!(r.value.re >= lo_re - slack && r.value.re <= hi_re + slack);
        prop_assert!(r.value.im >= lo_im - slack && r.value.im <= hi_im + slack);
        for &i in &out.members[k] {
            seen[i] += 1;
        }
    }
    // each input entry is absorbed somewhere; the heuristic may split a
    // multiple entry across outputs
    prop_assert!(seen.iter().all(|&s| s >= 1));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn conservation_containment_determinism(roots in arb_roots(16), params in arb_params()) {
        let a = cluster(&roots, &params).unwrap();
        let b = cluster(&roots, &params).unwrap();
        prop_assert_eq!(&a, &b);
        check_provenance(&roots, &a)?;
        if params.strategy == Method::DivideAndConquer {
            let mut all: Vec<usize> = a.members.iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..roots.len()).collect::<Vec<_>>());
            for (k, r) in a.roots.iter().enumerate() {
                let absorbed: u32 = a.members[k].iter().map(|&i| roots.entries()[i].multiplicity).sum();
                prop_assert_eq!(absorbed, r.multiplicity);
            }
        }
    }

    #[test]
    fn dnc_never_merges_far_pairs(roots in arb_roots(16), sigma in 0.0..0.3f64) {
        // a single pass only merges pairs within sigma, so every output of
        // two inputs spans at most sigma
        let out = cluster(&roots, &ClusterParams::dnc(sigma)).unwrap();
        for m in &out.members {
            if m.len() == 2 {
                let d = (roots.entries()[m[0]].value - roots.entries()[m[1]].value).norm();
                prop_assert!(d <= sigma);
            }
        }
    }

    #[test]
    fn zero_sigma_keeps_distinct_points(roots in arb_roots(16)) {
        prop_assume!(roots.iter().enumerate().all(|(i, a)| roots.entries()[..i].iter().all(|b| a.value != b.value)));
        for params in [ClusterParams::dnc(0.0), ClusterParams::heuristic(0.0)] {
            prop_assert_eq!(&cluster(&roots, &params).unwrap().roots, &roots);
        }
    }
}

#[test]
fn small_chain_example() {
    let q = RootList::from_real_pairs(&[(1.0, 1), (1.5, 1), (2.0, 1)]).unwrap();
    let out = cluster_roots_dnc(&q, 0.5);
    assert_eq!(out, RootList::from_real_pairs(&[(1.25, 2), (2.0, 1)]).unwrap());
}

#[test]
fn midpoint_rule_reproduces_reference_centres() {
    let p = RootList::from_real_pairs(&[(1.0, 1), (1.7, 1), (1.75, 1), (1.85, 1), (1.9, 1), (2.6, 1), (2.8, 1)]).unwrap();
    let q = RootList::from_real_pairs(&[(1.31, 1), (1.33, 1), (1.45, 1), (1.50, 1), (2.8, 1), (3.0, 1)]).unwrap();
    let params = ClusterParams {
        merge_rule: MergeRule::Midpoint,
        ..ClusterParams::dnc(0.5)
    };
    let close = |got: &RootList, want: &[(f64, u32)]| {
        got.len() == want.len()
            && got.iter().zip(want).all(|(r, &(x, m))| (r.value.re - x).abs() < 1e-12 && r.multiplicity == m)
    };
    let cp = cluster(&p, &params).unwrap().roots;
    let cq = cluster(&q, &params).unwrap().roots;
    assert!(close(&cp, &[(1.0, 1), (1.825, 4), (2.7, 2)]), "{cp:?}");
    assert!(close(&cq, &[(1.4425, 4), (2.9, 2)]), "{cq:?}");

    // the multiplicity-weighted centroid of the same input differs
    let weighted = cluster(&p, &ClusterParams::dnc(0.5)).unwrap().roots;
    assert!((weighted.entries()[1].value.re - 1.8).abs() < 1e-12);
}

#[test]
fn heuristic_on_seeded_unit_square() {
    let n = 20;
    let pts = lagcd::cli::unit_square_points(n, lagcd::cli::seed_from_env());
    let roots = RootList::from_simple(pts).unwrap();
    let params = ClusterParams::heuristic(1.0 / (n * n) as f64);
    let a = cluster(&roots, &params).unwrap();
    assert_eq!(a, cluster(&roots, &params).unwrap());
    assert_eq!(a.roots.total_multiplicity(), n);
    assert!(a.roots.iter().all(|r| (0.0..=1.0).contains(&r.value.re) && (0.0..=1.0).contains(&r.value.im)));
}

#[test]
fn heuristic_recovers_perturbed_triple_and_pair() {
    // split a triple at 0.5+0.5i and a pair at -0.3 the way a perturbation
    // of size s would: radii s^(1/3), s^(1/2)
    let s: f64 = 1e-9;
    let mut pts = Vec::new();
    for k in 0..3 {
        let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        pts.push(Complex64::new(0.5, 0.5) + Complex64::from_polar(s.powf(1.0 / 3.0), t));
    }
    for k in 0..2 {
        let t = 1.1 + std::f64::consts::PI * k as f64;
        pts.push(Complex64::new(-0.3, 0.0) + Complex64::from_polar(s.sqrt(), t));
    }
    pts.push(Complex64::new(0.9, -0.2));
    let roots = RootList::from_simple(pts).unwrap();
    let out = cluster(&roots, &ClusterParams::heuristic(1e-8)).unwrap().roots;
    let profile: Vec<u32> = out.multiplicities();
    assert_eq!(profile, vec![2, 3, 1]);
    assert!((out.entries()[0].value - Complex64::new(-0.3, 0.0)).norm() < 1e-12);
    assert!((out.entries()[1].value - Complex64::new(0.5, 0.5)).norm() < 1e-12);
}
