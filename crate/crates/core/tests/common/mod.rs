#![allow(dead_code)]

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::path::PathBuf;

use lagcd::lagpoly::{chebyshev_nodes, from_roots};
use lagcd::{Complex64, LagrangePoly, RootList};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator seeded from `LAGCD_SEED` and a per-test label, so tests do not
/// share streams.
pub fn rng(label: &str) -> ChaCha8Rng {
    let mut h = DefaultHasher::new();
    label.hash(&mut h);
    ChaCha8Rng::seed_from_u64(lagcd::cli::seed_from_env() ^ h.finish())
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn random_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Nodes and values of the worked example's `P` and `Q`.
pub fn worked_example() -> (LagrangePoly, LagrangePoly) {
    let problem = lagcd::cli::read_problem(&data_path("worked_example.json")).unwrap();
    (problem.p().unwrap(), problem.q().unwrap())
}

/// Monomial coefficients (lowest first) of `lead * prod (x - r)`.
pub fn monomial_from_roots(roots: &[Complex64], lead: Complex64) -> Vec<Complex64> {
    let mut coeffs = vec![lead];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &a) in coeffs.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        coeffs = next;
    }
    coeffs
}

pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Random polynomial of the given degree sampled at `degree + 1` Chebyshev
/// points of `[-1, 1]` (plus `extra` surplus nodes).
pub fn random_sampled(rng: &mut impl Rng, degree: usize, extra: usize) -> (Vec<Complex64>, LagrangePoly) {
    let roots: Vec<Complex64> = (0..degree).map(|_| random_complex(rng, 1.0)).collect();
    let list = RootList::from_simple(roots.clone()).unwrap();
    let lead = random_complex(rng, 2.0) + c(3.0);
    let p = from_roots(&list, lead, chebyshev_nodes(degree + 1 + extra, -1.0, 1.0)).unwrap();
    (roots, p)
}

/// `P = G0 A`, `Q = G0 B` with distinct integer roots in `[-5, 5]`, `G0`
/// roots of multiplicity 1 or 2, and `deg P, deg Q <= 10`. Returns
/// `(P, Q, G0)`.
pub fn synthetic_pair(rng: &mut impl Rng) -> (LagrangePoly, LagrangePoly, RootList) {
    use rand::seq::SliceRandom;
    let mut pool: Vec<i32> = (-5..=5).collect();
    pool.shuffle(rng);
    let g_count = rng.gen_range(1..=3);
    let g0: Vec<(f64, u32)> = pool[..g_count].iter().map(|&r| (r as f64, rng.gen_range(1..=2))).collect();
    let g_deg: usize = g0.iter().map(|&(_, m)| m as usize).sum();
    let rest = &pool[g_count..];
    let a_count = rng.gen_range(0..=(10 - g_deg).min(4));
    let b_count = rng.gen_range(0..=(10 - g_deg).min(4));
    let a: Vec<(f64, u32)> = rest[..a_count].iter().map(|&r| (r as f64, 1)).collect();
    let b: Vec<(f64, u32)> = rest[a_count..a_count + b_count].iter().map(|&r| (r as f64, 1)).collect();
    let side = |extra: &[(f64, u32)]| {
        let mut all = g0.clone();
        all.extend_from_slice(extra);
        let roots = RootList::from_real_pairs(&all).unwrap();
        let n = roots.total_multiplicity();
        from_roots(&roots, c(1.0), chebyshev_nodes(n + 1, -6.0, 6.0)).unwrap()
    };
    (side(&a), side(&b), RootList::from_real_pairs(&g0).unwrap())
}

/// Whether `got` has the same multiplicity profile as `want` with every
/// root within `tol`.
pub fn roots_close(got: &RootList, want: &RootList, tol: f64) -> bool {
    got.len() == want.len()
        && got
            .iter()
            .zip(want.iter())
            .all(|(a, b)| a.multiplicity == b.multiplicity && (a.value - b.value).norm() <= tol)
}
