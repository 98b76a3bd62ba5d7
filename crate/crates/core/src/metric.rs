//! Root pseudometric between polynomials of equal degree.
//!
//! `d_n(f, g) = (1/n) min_tau rho(tau(R_f), R_g)` where `R_f`, `R_g` are the
//! root tuples (multiplicities expanded) and `tau` ranges over permutations.
//! With `rho` the sum of coordinate moduli the minimum is a linear
//! assignment problem; with `rho` the largest coordinate modulus it is a
//! bottleneck assignment. `d_n(c f, f) = 0` for any nonzero `c`, so this is
//! a pseudometric, not a metric.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::assignment::{bottleneck_assignment, min_cost_assignment};
use crate::error::{Error, Result};
use crate::lagpoly::{LagrangePoly, RootList};
use crate::rootfind;

/// Base metric on root tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Rho {
    /// `sum_i |a_i - b_i|`
    #[default]
    Sum,
    /// `max_i |a_i - b_i|`
    Max,
}

/// Roots with multiplicities expanded.
#[derive(Debug, Clone, PartialEq)]
pub struct RootVector {
    pub coords: Vec<Complex64>,
}

impl RootVector {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Self { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl From<&RootList> for RootVector {
    fn from(list: &RootList) -> Self {
        Self::new(list.expand())
    }
}

impl From<Vec<Complex64>> for RootVector {
    fn from(coords: Vec<Complex64>) -> Self {
        Self::new(coords)
    }
}

/// Pairwise distances of an optimal pairing, summed in ascending order so
/// the result does not depend on which side is the reference.
fn canonical_sum(mut parts: Vec<f64>) -> f64 {
    parts.sort_by(f64::total_cmp);
    parts.into_iter().sum()
}

/// Optimal pairing `f[i] <-> g[perm[i]]` for `rho`.
pub fn optimal_pairing(f: &RootVector, g: &RootVector, rho: Rho) -> Result<Vec<usize>> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    let costs: Vec<Vec<f64>> = f
        .coords
        .iter()
        .map(|a| g.coords.iter().map(|b| (a - b).norm()).collect())
        .collect();
    Ok(match rho {
        Rho::Sum => min_cost_assignment(&costs),
        Rho::Max => bottleneck_assignment(&costs),
    })
}

/// `(1/n) min_tau rho(tau(f), g)`.
pub fn root_pseudometric(f: &RootVector, g: &RootVector, rho: Rho) -> Result<f64> {
    let perm = optimal_pairing(f, g, rho)?;
    let n = f.len();
    if n == 0 {
        return Ok(0.0);
    }
    let parts: Vec<f64> = perm
        .iter()
        .enumerate()
        .map(|(i, &j)| (f.coords[i] - g.coords[j]).norm())
        .collect();
    let total = match rho {
        Rho::Sum => canonical_sum(parts),
        Rho::Max => parts.into_iter().fold(0.0, f64::max),
    };
    Ok(total / n as f64)
}

/// Where the reference roots come from.
#[derive(Debug, Clone, Copy)]
pub enum RootSource<'a> {
    /// Sampled polynomial; its roots are computed.
    Samples(&'a LagrangePoly),
    Roots(&'a RootList),
}

impl RootSource<'_> {
    fn vector(&self) -> Result<RootVector> {
        match self {
            RootSource::Samples(p) => Ok(RootVector::new(rootfind::roots(p)?.roots)),
            RootSource::Roots(r) => Ok(RootVector::from(*r)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub distance: f64,
    pub within: bool,
}

/// Distance from `reference` to `candidate` and whether it is within `sigma`.
pub fn certify_distance(reference: RootSource<'_>, candidate: &RootList, sigma: f64, rho: Rho) -> Result<Certificate> {
    let distance = root_pseudometric(&reference.vector()?, &RootVector::from(candidate), rho)?;
    Ok(Certificate {
        distance,
        within: distance <= sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagpoly::{chebyshev_nodes, from_roots};

    fn rv(xs: &[f64]) -> RootVector {
        RootVector::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[test]
    fn identical_and_permuted_vectors() {
        let f = rv(&[0.0, 1.0]);
        let g = rv(&[1.0, 0.0]);
        assert_eq!(root_pseudometric(&f, &f, Rho::Sum).unwrap(), 0.0);
        assert_eq!(root_pseudometric(&f, &g, Rho::Sum).unwrap(), 0.0);
        assert_eq!(root_pseudometric(&f, &g, Rho::Max).unwrap(), 0.0);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            root_pseudometric(&rv(&[0.0]), &rv(&[0.0, 1.0]), Rho::Sum),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn single_shift_sum_and_max() {
        let sigma = 0.1;
        let n = 4;
        let base = [0.0, 1.0, 2.0, 3.0];
        let mut moved = base;
        moved[2] += 2.0 * sigma * n as f64;
        let p = RootList::from_simple(rv(&base).coords).unwrap();
        let pt = RootList::from_simple(rv(&moved).coords).unwrap();
        let cert = certify_distance(RootSource::Roots(&p), &pt, sigma, Rho::Sum).unwrap();
        assert!((cert.distance - 2.0 * sigma).abs() < 1e-15);
        assert!(!cert.within);
        let d_max = root_pseudometric(&RootVector::from(&p), &RootVector::from(&pt), Rho::Max).unwrap();
        assert!((d_max - 2.0 * sigma).abs() < 1e-15);
    }

    #[test]
    fn scaling_a_polynomial_leaves_distance_zero() {
        let roots = RootList::from_real_pairs(&[(0.5, 1), (1.5, 1), (2.5, 1)]).unwrap();
        let p = from_roots(&roots, Complex64::new(1.0, 0.0), chebyshev_nodes(4, 0.0, 3.0)).unwrap();
        let scaled = p.scaled(Complex64::new(-7.5, 2.0));
        let computed = RootList::from_simple(rootfind::roots(&scaled).unwrap().roots).unwrap();
        let cert = certify_distance(RootSource::Samples(&p), &computed, 0.0, Rho::Sum).unwrap();
        assert!(cert.distance < 1e-12);
    }

    #[test]
    fn multiplicities_are_expanded() {
        let a = RootList::from_real_pairs(&[(1.0, 2), (3.0, 1)]).unwrap();
        let b = RootList::from_real_pairs(&[(1.0, 1), (3.0, 2)]).unwrap();
        let d = root_pseudometric(&RootVector::from(&a), &RootVector::from(&b), Rho::Sum).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
    }
}
