//! Roots of a polynomial given by values at nodes, via the Lagrange-basis
//! companion pencil.
//!
//! For samples `p_0..p_n` at nodes `x_0..x_n` with barycentric weights
//! `w_k`, the pencil `(C0, C1)` of dimension `n + 2` is
//!
//! ```text
//!        [ 0   -p_0 ... -p_n ]
//!   C0 = [ w_0  x_0          ]        C1 = diag(0, 1, ..., 1)
//!        [ ...       ...     ]
//!        [ w_n          x_n  ]
//! ```
//!
//! and `det(z C1 - C0) = P(z)`. The pencil has two eigenvalues at infinity
//! (more when the data has lower degree than `n`). Instead of a generalized
//! eigensolver we remove them by structured elimination: the first row says
//! `p^T w = 0` for the trailing block `w` of an eigenvector, the remaining
//! rows say `(D - z) w = -w_vec * v0`. A Householder reflector aligned with
//! `conj(p)` parametrises the constraint, and `v0` is eliminated through the
//! last row of the rotated system, leaving a standard `n x n` eigenproblem.
//! When the coefficient needed for that elimination vanishes (the leading
//! coefficient is zero) the same step is repeated on the smaller system, one
//! infinite eigenvalue at a time.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lagpoly::{cmp_complex, LagrangePoly};
use crate::linalg::{self, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative size below which the elimination coefficient is treated as zero
/// and one more infinite eigenvalue is deflated.
pub const DEFLATION_TOLERANCE: f64 = 1e-10;

/// Eigenvalues farther than this many node spreads from the nodes are
/// treated as infinite.
pub const FAR_ROOT_FACTOR: f64 = 1e6;

/// Relative residual `|P(r)| / max |p_i|` above which a conditioning note is
/// attached to the report.
pub const RESIDUAL_WARNING: f64 = 1e-8;

/// The generalized companion matrix pair of a [`LagrangePoly`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionPencil {
    pub c0: CMatrix,
    pub c1: CMatrix,
    pub source_degree: usize,
}

impl CompanionPencil {
    pub fn dimension(&self) -> usize {
        self.c0.rows()
    }

    /// `z C1 - C0`.
    pub fn matrix_at(&self, z: Complex64) -> CMatrix {
        self.c1.combine(z, &self.c0, Complex64::new(-1.0, 0.0))
    }

    /// `det(z C1 - C0)` by LU with partial pivoting.
    pub fn determinant_at(&self, z: Complex64) -> Complex64 {
        linalg::determinant(&self.matrix_at(z))
    }
}

pub fn build_pencil(p: &LagrangePoly) -> Result<CompanionPencil> {
    let n = p.nominal_degree();
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let dim = n + 2;
    let mut c0 = CMatrix::zeros(dim, dim);
    for k in 0..=n {
        c0[(0, k + 1)] = -p.values()[k];
        c0[(k + 1, 0)] = p.weights()[k];
        c0[(k + 1, k + 1)] = p.nodes()[k];
    }
    let mut c1 = CMatrix::identity(dim);
    c1[(0, 0)] = ZERO;
    Ok(CompanionPencil {
        c0,
        c1,
        source_degree: n,
    })
}

/// Diagnostics attached to a rootfinding run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Conditioning {
    /// `|leading coefficient|` relative to the sample and weight norms.
    pub lead_ratio: f64,
    /// Infinite eigenvalues removed by elimination (at least 2).
    pub deflated_infinite: usize,
    /// Finite but implausibly far eigenvalues dropped.
    pub dropped_far: usize,
    /// QR sweeps spent.
    pub iterations: usize,
    pub max_relative_residual: f64,
    pub ill_conditioned_nodes: bool,
    pub notes: Vec<String>,
}

/// Roots of one polynomial with per-root residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct RootfindReport {
    /// Finite roots, sorted by (real, imaginary) part.
    pub roots: Vec<Complex64>,
    /// Eigenvalues of the `n + 2` pencil not returned as roots.
    pub discarded_count: usize,
    /// `|P(r)|` for every returned root, same order.
    pub residuals: Vec<f64>,
    pub conditioning: Conditioning,
}

impl RootfindReport {
    /// Number of roots retained; lower than the nominal degree when the
    /// samples come from a lower-degree polynomial.
    pub fn actual_degree(&self) -> usize {
        self.roots.len()
    }

    pub fn pencil_dimension(&self) -> usize {
        self.roots.len() + self.discarded_count
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Householder vector `v` and `beta` with `(I - beta v v^H) u = alpha e_last`
/// where `u = conj(c) / |c|`.
fn reflector_onto_last(c: &[Complex64]) -> (Vec<Complex64>, f64) {
    let norm = norm2(c);
    let mut v: Vec<Complex64> = c.iter().map(|z| z.conj() / norm).collect();
    let last = v.len() - 1;
    let u_last = v[last];
    let phase = if u_last == ZERO {
        Complex64::new(1.0, 0.0)
    } else {
        u_last / u_last.norm()
    };
    // alpha = -phase, v = u - alpha e_last
    v[last] = u_last + phase;
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (v, 2.0 / vv)
}

/// `H A H` for `H = I - beta v v^H`.
fn reflect_both_sides(a: &mut CMatrix, v: &[Complex64], beta: f64) {
    let n = a.rows();
    // H A
    for j in 0..n {
        let dot: Complex64 = (0..n).map(|i| v[i].conj() * a[(i, j)]).sum();
        let t = dot * beta;
        for i in 0..n {
            a[(i, j)] -= v[i] * t;
        }
    }
    // (H A) H
    for i in 0..n {
        let dot: Complex64 = (0..n).map(|j| a[(i, j)] * v[j]).sum();
        let t = dot * beta;
        for j in 0..n {
            a[(i, j)] -= t * v[j].conj();
        }
    }
}

fn reflect_vector(b: &mut [Complex64], v: &[Complex64], beta: f64) {
    let dot: Complex64 = v.iter().zip(b.iter()).map(|(vi, bi)| vi.conj() * bi).sum();
    let t = dot * beta;
    for (bi, vi) in b.iter_mut().zip(v) {
        *bi -= vi * t;
    }
}

struct Reduced {
    matrix: CMatrix,
    deflated: usize,
    lead_ratio: f64,
}

/// Reduces `(A - z) w = -b v0, c^T w = 0` to a standard eigenproblem whose
/// eigenvalues are the finite eigenvalues of the constrained system.
fn eliminate_infinite(mut a: CMatrix, mut b: Vec<Complex64>, mut c: Vec<Complex64>) -> Reduced {
    let mut deflated = 1;
    let mut first_ratio = None;
    loop {
        let dim = a.rows();
        if dim <= 1 || norm2(&c) == 0.0 {
            // nothing left or the constraint has vanished
            let keep = dim.saturating_sub(1);
            let matrix = CMatrix::from_fn(keep, keep, |i, j| a[(i, j)]);
            return Reduced {
                matrix,
                deflated: deflated + 1,
                lead_ratio: first_ratio.unwrap_or(0.0),
            };
        }
        let (v, beta) = reflector_onto_last(&c);
        reflect_both_sides(&mut a, &v, beta);
        reflect_vector(&mut b, &v, beta);
        let last = dim - 1;
        let b_norm = norm2(&b);
        let ratio = if b_norm == 0.0 { 0.0 } else { b[last].norm() / b_norm };
        first_ratio.get_or_insert(ratio);
        if ratio > DEFLATION_TOLERANCE {
            let pivot = b[last];
            let matrix = CMatrix::from_fn(last, last, |i, j| a[(i, j)] - b[i] * a[(last, j)] / pivot);
            return Reduced {
                matrix,
                deflated: deflated + 1,
                lead_ratio: first_ratio.unwrap_or(ratio),
            };
        }
        // The last row is now a constraint on the leading block.
        deflated += 1;
        c = (0..last).map(|j| a[(last, j)]).collect();
        b.truncate(last);
        a = CMatrix::from_fn(last, last, |i, j| a[(i, j)]);
    }
}

/// Finite roots of `p`, one per unit of multiplicity.
pub fn roots(p: &LagrangePoly) -> Result<RootfindReport> {
    let n = p.nominal_degree();
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = CMatrix::from_fn(n + 1, n + 1, |i, j| if i == j { p.nodes()[i] } else { ZERO });
    let reduced = eliminate_infinite(d, p.weights().to_vec(), p.values().to_vec());
    let outcome = linalg::eigenvalues(&reduced.matrix)?;

    let spread = p.node_spread();
    let reach = p.nodes().iter().map(|x| x.norm()).fold(0.0, f64::max) + FAR_ROOT_FACTOR * spread;
    let mut found: Vec<Complex64> = Vec::with_capacity(outcome.values.len());
    let mut dropped_far = 0;
    for z in outcome.values {
        if z.norm() > reach || !(z.re.is_finite() && z.im.is_finite()) {
            dropped_far += 1;
        } else {
            found.push(z);
        }
    }
    found.sort_by(cmp_complex);

    let scale = p.max_abs_value();
    let residuals: Vec<f64> = found.iter().map(|&r| p.evaluate(r).norm()).collect();
    let max_relative_residual = residuals.iter().fold(0.0_f64, |m, r| m.max(r / scale));

    let mut notes = Vec::new();
    if reduced.deflated > 2 {
        notes.push(format!(
            "samples have numerical degree {} below nominal degree {n}",
            n + 2 - reduced.deflated,
            n = n
        ));
    }
    if dropped_far > 0 {
        notes.push(format!("{dropped_far} eigenvalue(s) beyond {reach:e} treated as infinite"));
    }
    if max_relative_residual > RESIDUAL_WARNING {
        notes.push(format!("largest relative residual {max_relative_residual:e}"));
    }
    if p.is_ill_conditioned() {
        notes.push("nearly coincident nodes".to_string());
    }

    Ok(RootfindReport {
        discarded_count: reduced.deflated + dropped_far,
        residuals,
        roots: found,
        conditioning: Conditioning {
            lead_ratio: reduced.lead_ratio,
            deflated_infinite: reduced.deflated,
            dropped_far,
            iterations: outcome.iterations,
            max_relative_residual,
            ill_conditioned_nodes: p.is_ill_conditioned(),
            notes,
        },
    })
}

/// Roots of two polynomials, computed on separate threads.
pub fn roots_pair(p: &LagrangePoly, q: &LagrangePoly) -> (Result<RootfindReport>, Result<RootfindReport>) {
    std::thread::scope(|s| {
        let handle = s.spawn(|| roots(q));
        let rp = roots(p);
        let rq = handle.join().expect("rootfinding thread panicked");
        (rp, rq)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagpoly::{chebyshev_nodes, from_roots_monic, RootList};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pencil_for_linear_polynomial() {
        let p = LagrangePoly::from_real(&[0.0, 1.0], &[-1.0, 0.0]).unwrap();
        let pencil = build_pencil(&p).unwrap();
        let want_c0 = [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [1.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(pencil.c0[(i, j)], c(want_c0[i][j]));
                let id = if i == j && i > 0 { 1.0 } else { 0.0 };
                assert_eq!(pencil.c1[(i, j)], c(id));
            }
        }
        assert!((pencil.determinant_at(c(5.0)) - c(4.0)).norm() < 1e-14);
    }

    #[test]
    fn constant_and_zero_inputs_are_rejected() {
        let k = LagrangePoly::from_real(&[1.0], &[2.0]).unwrap();
        assert_eq!(build_pencil(&k), Err(Error::ConstantPolynomial));
        assert_eq!(roots(&k), Err(Error::ConstantPolynomial));
        let z = LagrangePoly::from_real(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(roots(&z), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn quadratic_roots() {
        let p = LagrangePoly::from_real(&[0.0, 1.0, 3.0], &[2.0, 0.0, 2.0]).unwrap();
        let report = roots(&p).unwrap();
        assert_eq!(report.roots.len(), 2);
        assert!((report.roots[0] - c(1.0)).norm() < 1e-9);
        assert!((report.roots[1] - c(2.0)).norm() < 1e-9);
        assert_eq!(report.discarded_count, 2);
        assert_eq!(report.pencil_dimension(), 4);
    }

    #[test]
    fn complex_roots_of_real_polynomial() {
        // x^2 + 1 sampled at 0, 1, 2
        let p = LagrangePoly::from_real(&[0.0, 1.0, 2.0], &[1.0, 2.0, 5.0]).unwrap();
        let report = roots(&p).unwrap();
        assert!((report.roots[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((report.roots[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn lower_degree_data_reports_actual_degree() {
        // (x-1)(x-2) sampled at five nodes: nominal degree 4, actual 2
        let roots_in = RootList::from_real_pairs(&[(1.0, 1), (2.0, 1)]).unwrap();
        let p = from_roots_monic(&roots_in, chebyshev_nodes(5, -1.0, 4.0)).unwrap();
        let report = roots(&p).unwrap();
        assert_eq!(report.actual_degree(), 2, "{report:?}");
        assert_eq!(report.pencil_dimension(), 6);
        assert!((report.roots[0] - c(1.0)).norm() < 1e-9);
        assert!((report.roots[1] - c(2.0)).norm() < 1e-9);
        assert!(!report.conditioning.notes.is_empty());
    }

    #[test]
    fn residuals_are_recorded_for_each_root() {
        let r = RootList::from_real_pairs(&[(-1.5, 1), (0.25, 1), (2.0, 1), (3.5, 1)]).unwrap();
        let p = from_roots_monic(&r, chebyshev_nodes(5, -2.0, 4.0)).unwrap();
        let report = roots(&p).unwrap();
        assert_eq!(report.residuals.len(), report.roots.len());
        for (got, want) in report.roots.iter().zip(r.expand()) {
            assert!((got - want).norm() < 1e-10);
        }
        assert!(report.conditioning.max_relative_residual < 1e-12);
    }

    #[test]
    fn pair_matches_individual_calls() {
        let p = LagrangePoly::from_real(&[0.0, 1.0, 3.0], &[2.0, 0.0, 2.0]).unwrap();
        let q = LagrangePoly::from_real(&[0.0, 2.0], &[-1.0, 1.0]).unwrap();
        let (rp, rq) = roots_pair(&p, &q);
        assert_eq!(rp.unwrap(), roots(&p).unwrap());
        assert_eq!(rq.unwrap(), roots(&q).unwrap());
    }
}
