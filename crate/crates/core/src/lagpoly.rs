//! Polynomials represented by their values at distinct nodes, and root
//! lists with multiplicities.
//!
//! A [`LagrangePoly`] stores nodes `x_0..x_n`, values `p_0..p_n` and the
//! barycentric weights `w_k = 1 / prod_{j != k} (x_k - x_j)`. Evaluation uses
//! the second (true) barycentric formula; nothing here ever converts to
//! monomial coefficients.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds on the minimum pairwise node gap, relative to the node spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePolicy {
    /// Gaps below `reject_below * spread` are an error.
    pub reject_below: f64,
    /// Gaps below `warn_below * spread` are logged and flagged.
    pub warn_below: f64,
}

impl Default for NodePolicy {
    fn default() -> Self {
        Self {
            reject_below: 1e-12,
            warn_below: 1e-8,
        }
    }
}

/// Pairwise geometry of a node set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeGeometry {
    pub min_gap: f64,
    pub spread: f64,
    /// Indices of the closest pair.
    pub closest: (usize, usize),
}

fn node_geometry(nodes: &[Complex64]) -> NodeGeometry {
    let mut geometry = NodeGeometry {
        min_gap: f64::INFINITY,
        spread: 0.0,
        closest: (0, 0),
    };
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let gap = (nodes[i] - nodes[j]).norm();
            if gap < geometry.min_gap {
                geometry.min_gap = gap;
                geometry.closest = (i, j);
            }
            geometry.spread = geometry.spread.max(gap);
        }
    }
    geometry
}

/// Validates a node set. Returns `true` when the set is accepted but poorly
/// separated (a warning has been logged).
fn check_nodes(nodes: &[Complex64], policy: &NodePolicy) -> Result<bool> {
    if nodes.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(k) = nodes.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite(k));
    }
    if nodes.len() == 1 {
        return Ok(false);
    }
    let g = node_geometry(nodes);
    let (first, second) = g.closest;
    if g.min_gap == 0.0 {
        return Err(Error::DuplicateNodes { first, second });
    }
    let reject = policy.reject_below * g.spread;
    if g.min_gap < reject {
        return Err(Error::NearDuplicateNodes {
            first,
            second,
            gap: g.min_gap,
            threshold: reject,
        });
    }
    if g.min_gap < policy.warn_below * g.spread {
        log::warn!(
            "nodes {first} and {second} are {:e} apart (spread {:e}); interpolation is ill-conditioned",
            g.min_gap,
            g.spread
        );
        return Ok(true);
    }
    Ok(false)
}

fn unchecked_weights(nodes: &[Complex64]) -> Vec<Complex64> {
    nodes
        .iter()
        .enumerate()
        .map(|(k, &xk)| {
            let prod = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, &xj)| acc * (xk - xj));
            prod.inv()
        })
        .collect()
}

/// Barycentric weights `w_k = 1 / prod_{j != k} (x_k - x_j)` with the default
/// node policy.
pub fn barycentric_weights(nodes: &[Complex64]) -> Result<Vec<Complex64>> {
    barycentric_weights_with(nodes, &NodePolicy::default())
}

pub fn barycentric_weights_with(nodes: &[Complex64], policy: &NodePolicy) -> Result<Vec<Complex64>> {
    check_nodes(nodes, policy)?;
    Ok(unchecked_weights(nodes))
}

/// A polynomial given by its values at pairwise distinct nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangePoly {
    nodes: Vec<Complex64>,
    values: Vec<Complex64>,
    weights: Vec<Complex64>,
    ill_conditioned: bool,
}

impl LagrangePoly {
    pub fn new(nodes: Vec<Complex64>, values: Vec<Complex64>) -> Result<Self> {
        Self::with_policy(nodes, values, &NodePolicy::default())
    }

    pub fn with_policy(nodes: Vec<Complex64>, values: Vec<Complex64>, policy: &NodePolicy) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::ShapeMismatch {
                nodes: nodes.len(),
                values: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(k));
        }
        let ill_conditioned = check_nodes(&nodes, policy)?;
        let weights = unchecked_weights(&nodes);
        Ok(Self {
            nodes,
            values,
            weights,
            ill_conditioned,
        })
    }

    /// Real nodes and values, promoted to complex.
    pub fn from_real(nodes: &[f64], values: &[f64]) -> Result<Self> {
        Self::new(
            nodes.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            values.iter().map(|&y| Complex64::new(y, 0.0)).collect(),
        )
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// Number of nodes minus one.
    pub fn nominal_degree(&self) -> usize {
        self.nodes.len() - 1
    }

    /// True when the node set passed validation but has a gap below the
    /// warning threshold.
    pub fn is_ill_conditioned(&self) -> bool {
        self.ill_conditioned
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    /// Largest distance between two nodes.
    pub fn node_spread(&self) -> f64 {
        node_geometry(&self.nodes).spread
    }

    /// Same values on nodes translated by `shift`.
    pub fn translated(&self, shift: Complex64) -> Result<Self> {
        Self::new(self.nodes.iter().map(|x| x + shift).collect(), self.values.clone())
    }

    /// Same nodes, values multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
            weights: self.weights.clone(),
            ill_conditioned: self.ill_conditioned,
        }
    }

    /// Value of the interpolant at `z`. Returns the stored value exactly when
    /// `z` is one of the nodes.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        if let Some(k) = self.nodes.iter().position(|&x| x == z) {
            return self.values[k];
        }
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for ((x, p), w) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let t = w / (z - x);
            num += t * p;
            den += t;
        }
        num / den
    }

    /// Leading coefficient of the degree-n interpolant, `sum_k w_k p_k`.
    pub fn leading_coefficient(&self) -> Complex64 {
        self.weights.iter().zip(&self.values).map(|(w, p)| w * p).sum()
    }
}

/// A root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: u32,
}

impl Root {
    pub fn new(value: Complex64, multiplicity: u32) -> Self {
        Self { value, multiplicity }
    }

    pub fn simple(value: Complex64) -> Self {
        Self::new(value, 1)
    }
}

/// Ordering by real part, then imaginary part.
pub fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Multiset of roots, kept sorted by (real, imaginary) part.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RootList {
    entries: Vec<Root>,
}

impl RootList {
    pub fn new(mut entries: Vec<Root>) -> Result<Self> {
        if entries.iter().any(|r| r.multiplicity == 0) {
            return Err(Error::InvalidParameter("root multiplicity must be at least 1".into()));
        }
        if let Some(k) = entries
            .iter()
            .position(|r| !(r.value.re.is_finite() && r.value.im.is_finite()))
        {
            return Err(Error::NonFinite(k));
        }
        entries.sort_by(|a, b| cmp_complex(&a.value, &b.value).then(a.multiplicity.cmp(&b.multiplicity)));
        Ok(Self { entries })
    }

    /// Each value becomes a simple root.
    pub fn from_simple(values: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        Self::new(values.into_iter().map(Root::simple).collect())
    }

    /// Convenience for real roots given as `(root, multiplicity)` pairs.
    pub fn from_real_pairs(pairs: &[(f64, u32)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(r, m)| Root::new(Complex64::new(r, 0.0), m))
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[Root] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Root> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|r| r.multiplicity as usize).sum()
    }

    /// Roots repeated according to multiplicity, in list order.
    pub fn expand(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|r| std::iter::repeat(r.value).take(r.multiplicity as usize))
            .collect()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.entries.iter().map(|r| r.multiplicity).collect()
    }
}

impl<'a> IntoIterator for &'a RootList {
    type Item = &'a Root;
    type IntoIter = std::slice::Iter<'a, Root>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// `lead * prod (x_k - r)^m` at every node. Per node, factors are multiplied
/// in order of increasing `|x_k - r|`.
pub fn from_roots(roots: &RootList, lead: Complex64, nodes: Vec<Complex64>) -> Result<LagrangePoly> {
    check_nodes(&nodes, &NodePolicy::default())?;
    let degree = roots.total_multiplicity();
    if nodes.len() < degree + 1 {
        return Err(Error::InsufficientNodes {
            degree,
            needed: degree + 1,
            got: nodes.len(),
        });
    }
    let mut factors: Vec<(f64, Complex64, u32)> = Vec::with_capacity(roots.len());
    let values = nodes
        .iter()
        .map(|&x| {
            factors.clear();
            factors.extend(roots.iter().map(|r| {
                let d = x - r.value;
                (d.norm(), d, r.multiplicity)
            }));
            factors.sort_by(|a, b| a.0.total_cmp(&b.0));
            let prod = factors
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, &(_, d, m)| acc * d.powu(m));
            lead * prod
        })
        .collect();
    LagrangePoly::new(nodes, values)
}

/// Monic [`from_roots`].
pub fn from_roots_monic(roots: &RootList, nodes: Vec<Complex64>) -> Result<LagrangePoly> {
    from_roots(roots, Complex64::new(1.0, 0.0), nodes)
}

/// `count` Chebyshev points of the second kind on the real interval `[a, b]`.
pub fn chebyshev_nodes(count: usize, a: f64, b: f64) -> Vec<Complex64> {
    if count == 1 {
        return vec![Complex64::new(0.5 * (a + b), 0.0)];
    }
    (0..count)
        .map(|k| {
            let t = (std::f64::consts::PI * k as f64 / (count - 1) as f64).cos();
            Complex64::new(0.5 * (a + b) + 0.5 * (b - a) * t, 0.0)
        })
        .collect()
}
