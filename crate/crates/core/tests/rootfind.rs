mod common;

use common::{c, random_complex, random_sampled};
use lagcd::lagpoly::{chebyshev_nodes, from_roots_monic};
use lagcd::metric::{root_pseudometric, Rho};
use lagcd::rootfind::{build_pencil, roots, roots_pair};
use lagcd::{Complex64, Error, LagrangePoly, RootList, RootVector};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn worked_example_pencil_and_roots() {
    let (p, q) = common::worked_example();
    let pencil = build_pencil(&p).unwrap();
    assert_eq!(pencil.dimension(), 9);
    let rp = roots(&p).unwrap();
    let rq = roots(&q).unwrap();
    assert_eq!(rp.actual_degree(), 7);
    assert_eq!(rq.actual_degree(), 6);
    assert_eq!(rp.pencil_dimension(), 9);
    // 60-digit interpolation oracle
    let want_p = [0.900_009_691_957_34, 1.699_059_896_198_6, 1.751_437_441_416_2, 1.850_349_209_588_8, 1.899_188_175_459_7, 2.599_983_759_021_8, 2.800_009_609_238_6];
    let want_q = [1.312_208_496_359, 1.334_167_481_062_8, 1.455_487_689_319_4, 1.498_209_200_717, 2.799_998_140_337_8, 2.999_994_387_667_6];
    for (got, want) in rp.roots.iter().zip(want_p).chain(rq.roots.iter().zip(want_q)) {
        assert!((got - c(want)).norm() < 1e-9, "{got} vs {want}");
    }
}

#[test]
fn errors_for_degenerate_input() {
    let constant = LagrangePoly::from_real(&[2.0], &[5.0]).unwrap();
    assert_eq!(roots(&constant).map(|_| ()), Err(Error::ConstantPolynomial));
    let zero = LagrangePoly::from_real(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0]).unwrap();
    assert_eq!(roots(&zero).map(|_| ()), Err(Error::ZeroPolynomial));
    let flat = LagrangePoly::from_real(&[0.0, 1.0, 2.0], &[3.0, 3.0, 3.0]).unwrap();
    let report = roots(&flat).unwrap();
    assert_eq!(report.actual_degree(), 0);
}

#[test]
fn linear_input_gives_one_root() {
    let p = LagrangePoly::from_real(&[0.0, 1.0], &[-2.0, 1.0]).unwrap();
    let report = roots(&p).unwrap();
    assert_eq!(report.roots.len(), 1);
    assert!((report.roots[0] - c(2.0 / 3.0)).norm() < 1e-14);
}

#[test]
fn determinant_identity_random() {
    let mut rng = common::rng("rootfind-det");
    for _ in 0..50 {
        let degree = rng.gen_range(1..=12);
        let (_, p) = random_sampled(&mut rng, degree, 0);
        let pencil = build_pencil(&p).unwrap();
        for _ in 0..5 {
            let z = random_complex(&mut rng, 1.5);
            let want = p.evaluate(z);
            let got = pencil.determinant_at(z);
            assert!((got - want).norm() / want.norm().max(1.0) <= 1e-6, "deg {degree}: {got} vs {want}");
        }
    }
}

#[test]
fn separated_roots_are_recovered() {
    let mut rng = common::rng("rootfind-recover");
    for _ in 0..40 {
        let degree = rng.gen_range(1..=10);
        let extra = rng.gen_range(0..3);
        let (truth, p) = random_sampled(&mut rng, degree, extra);
        let sep = truth
            .iter()
            .enumerate()
            .flat_map(|(i, a)| truth[..i].iter().map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min);
        let report = roots(&p).unwrap();
        assert_eq!(report.actual_degree(), degree);
        let d = root_pseudometric(&RootVector::new(truth), &RootVector::new(report.roots.clone()), Rho::Max).unwrap();
        // simple roots move by about eps / separation^(n-1)
        assert!(d <= 1e-10 / sep.min(1.0).powi(degree as i32 - 1).max(1e-6), "degree {degree}, sep {sep:e}, d {d:e}");
    }
}

#[test]
fn residuals_are_reported_and_small() {
    let mut rng = common::rng("rootfind-residuals");
    let (_, p) = random_sampled(&mut rng, 8, 0);
    let report = roots(&p).unwrap();
    for (r, res) in report.roots.iter().zip(&report.residuals) {
        assert_eq!(*res, p.evaluate(*r).norm());
    }
    assert!(report.conditioning.max_relative_residual < 1e-10);
}

#[test]
fn surplus_nodes_reveal_actual_degree() {
    let roots_true = RootList::from_real_pairs(&[(-0.5, 1), (0.25, 1), (0.75, 1)]).unwrap();
    let p = from_roots_monic(&roots_true, chebyshev_nodes(9, -1.0, 1.0)).unwrap();
    let report = roots(&p).unwrap();
    assert_eq!(report.actual_degree(), 3);
    assert_eq!(report.pencil_dimension(), 10);
}

#[test]
fn pair_runs_both_sides() {
    let (p, q) = common::worked_example();
    let (a, b) = roots_pair(&p, &q);
    assert_eq!(a.unwrap(), roots(&p).unwrap());
    assert_eq!(b.unwrap(), roots(&q).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_covariance(
        raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..7),
        shift in (-2.0..2.0f64, -2.0..2.0f64),
    ) {
        let pts: Vec<Complex64> = raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        prop_assume!(pts.iter().enumerate().all(|(i, a)| pts[..i].iter().all(|b| (a - b).norm() > 0.2)));
        let shift = Complex64::new(shift.0, shift.1);
        let p = from_roots_monic(&RootList::from_simple(pts.clone()).unwrap(), chebyshev_nodes(pts.len() + 1, -1.0, 1.0)).unwrap();
        let moved = p.translated(shift).unwrap();
        let a: Vec<Complex64> = roots(&p).unwrap().roots.iter().map(|r| r + shift).collect();
        let b = roots(&moved).unwrap().roots;
        let d = root_pseudometric(&RootVector::new(a), &RootVector::new(b), Rho::Max).unwrap();
        prop_assert!(d <= 1e-8, "d = {:e}", d);
    }

    #[test]
    fn determinant_identity(
        raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..13),
        z in (-1.5..1.5f64, -1.5..1.5f64),
    ) {
        let pts: Vec<Complex64> = raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let p = from_roots_monic(&RootList::from_simple(pts.clone()).unwrap(), chebyshev_nodes(pts.len() + 1, -1.0, 1.0)).unwrap();
        let z = Complex64::new(z.0, z.1);
        let want = p.evaluate(z);
        let got = build_pencil(&p).unwrap().determinant_at(z);
        prop_assert!((got - want).norm() / want.norm().max(1.0) <= 1e-6);
    }
}
