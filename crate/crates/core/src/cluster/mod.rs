//! Collapsing numerically split multiple roots into single roots with
//! multiplicities.
//!
//! Two strategies are available: a divide-and-conquer merge over the
//! real-sorted roots ([`dnc`]) and a distance/symmetry heuristic that looks
//! for near-regular polygons of computed roots, highest multiplicity first
//! ([`heuristic`]).

pub mod dnc;
pub mod heuristic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lagpoly::{cmp_complex, Root, RootList};

pub use dnc::{cluster_roots_dnc, cluster_roots_dnc_detailed};
pub use heuristic::{cluster_roots_heuristic, cluster_roots_heuristic_detailed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Strategy {
    #[default]
    #[serde(rename = "dnc")]
    DivideAndConquer,
    #[serde(rename = "heuristic")]
    SymmetryHeuristic,
}

/// How the divide-and-conquer clusterer combines a close pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MergeRule {
    /// `(d_u u + d_v v) / (d_u + d_v)`.
    #[default]
    Weighted,
    /// `(u + v) / 2` regardless of multiplicities. Reproduces the reference
    /// centres of the worked example; not a centroid of the
    /// absorbed points in general.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterParams {
    /// Merge tolerance in root coordinates.
    pub sigma: f64,
    /// Largest multiplicity the heuristic will form.
    pub max_multiplicity: u32,
    /// Multiplier on the heuristic radius `sigma^(1/m)`.
    pub fuzz_factor: f64,
    pub strategy: Strategy,
    pub merge_rule: MergeRule,
    /// Re-run the divide-and-conquer pass until nothing merges.
    pub fixpoint: bool,
}

impl Default for ClusterParams {
    fn default() -> Self {
        Self {
            sigma: 0.0,
            max_multiplicity: 3,
            fuzz_factor: 1.0,
            strategy: Strategy::DivideAndConquer,
            merge_rule: MergeRule::Weighted,
            fixpoint: false,
        }
    }
}

impl ClusterParams {
    pub fn dnc(sigma: f64) -> Self {
        Self {
            sigma,
            ..Self::default()
        }
    }

    pub fn heuristic(sigma: f64) -> Self {
        Self {
            sigma,
            strategy: Strategy::SymmetryHeuristic,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be finite and >= 0, got {}", self.sigma)));
        }
        if self.max_multiplicity == 0 {
            return Err(Error::InvalidParameter("max multiplicity must be at least 1".into()));
        }
        if !(self.fuzz_factor > 0.0 && self.fuzz_factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "fuzz factor must be positive, got {}",
                self.fuzz_factor
            )));
        }
        Ok(())
    }
}

/// Clustered roots plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub roots: RootList,
    /// For each output entry, the indices of the input entries it absorbed.
    pub members: Vec<Vec<usize>>,
    /// Point comparisons spent (divide-and-conquer only; heuristic counts
    /// candidate evaluations).
    pub comparisons: u64,
}

impl Clustering {
    /// Output entries that absorbed more than one input entry.
    pub fn was_merged(&self, k: usize) -> bool {
        self.members[k].len() > 1
    }

    pub(crate) fn from_groups(mut groups: Vec<(Root, Vec<usize>)>, comparisons: u64) -> Self {
        for (_, m) in groups.iter_mut() {
            m.sort_unstable();
        }
        groups.sort_by(|a, b| {
            cmp_complex(&a.0.value, &b.0.value)
                .then(a.0.multiplicity.cmp(&b.0.multiplicity))
                .then(a.1.cmp(&b.1))
        });
        let roots = RootList::new(groups.iter().map(|g| g.0).collect()).expect("clustered roots are valid");
        Self {
            roots,
            members: groups.into_iter().map(|g| g.1).collect(),
            comparisons,
        }
    }
}

/// Clusters `roots` with the configured strategy.
pub fn cluster(roots: &RootList, params: &ClusterParams) -> Result<Clustering> {
    params.validate()?;
    Ok(match params.strategy {
        Strategy::DivideAndConquer => cluster_roots_dnc_detailed(roots, params.sigma, params.merge_rule, params.fixpoint),
        Strategy::SymmetryHeuristic => cluster_roots_heuristic_detailed(roots, params),
    })
}
