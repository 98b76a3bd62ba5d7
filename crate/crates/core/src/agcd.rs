//! The approximate-GCD pipeline: roots, clustering, matching, assembly of
//! `G`, reconstruction of the nearby pair `P~`, `Q~`, and certification of
//! their root distance to the inputs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cluster::{self, ClusterParams, Clustering, MergeRule, Strategy};
use crate::error::{Error, Result};
use crate::lagpoly::{chebyshev_nodes, from_roots_monic, LagrangePoly, Root, RootList};
use crate::matching::{build_graph, exact_mwm, greedy_mwm, MatchGraph, Matching};
use crate::metric::{root_pseudometric, Rho, RootVector};
use crate::rootfind::{self, RootfindReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Matcher {
    #[default]
    Greedy,
    Exact,
}

/// Pipeline configuration. One `sigma` serves as clustering tolerance, edge
/// threshold and distance budget unless overridden per stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgcdParams {
    pub sigma: f64,
    pub sigma_cluster: Option<f64>,
    pub sigma_edge: Option<f64>,
    pub sigma_cert: Option<f64>,
    pub strategy: Strategy,
    pub max_multiplicity: u32,
    pub fuzz_factor: f64,
    pub merge_rule: MergeRule,
    pub fixpoint: bool,
    pub matcher: Matcher,
    pub rho: Rho,
}

impl AgcdParams {
    pub fn new(sigma: f64) -> Self {
        let defaults = ClusterParams::default();
        Self {
            sigma,
            sigma_cluster: None,
            sigma_edge: None,
            sigma_cert: None,
            strategy: defaults.strategy,
            max_multiplicity: defaults.max_multiplicity,
            fuzz_factor: defaults.fuzz_factor,
            merge_rule: defaults.merge_rule,
            fixpoint: defaults.fixpoint,
            matcher: Matcher::Greedy,
            rho: Rho::Sum,
        }
    }

    pub fn sigmas(&self) -> StageSigmas {
        StageSigmas {
            cluster: self.sigma_cluster.unwrap_or(self.sigma),
            edge: self.sigma_edge.unwrap_or(self.sigma),
            cert: self.sigma_cert.unwrap_or(self.sigma),
        }
    }

    pub fn cluster_params(&self) -> ClusterParams {
        ClusterParams {
            sigma: self.sigmas().cluster,
            max_multiplicity: self.max_multiplicity,
            fuzz_factor: self.fuzz_factor,
            strategy: self.strategy,
            merge_rule: self.merge_rule,
            fixpoint: self.fixpoint,
        }
    }

    fn validate(&self) -> Result<()> {
        let s = self.sigmas();
        for (name, v) in [("sigma-edge", s.edge), ("sigma-cert", s.cert)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        self.cluster_params().validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageSigmas {
    pub cluster: f64,
    pub edge: f64,
    pub cert: f64,
}

/// A root list together with its samples on a node set.
#[derive(Debug, Clone, PartialEq)]
pub struct Materialized {
    pub roots: RootList,
    pub samples: LagrangePoly,
}

impl Materialized {
    pub fn degree(&self) -> usize {
        self.roots.total_multiplicity()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgcdResult {
    pub gcd: Materialized,
    pub p_tilde: Materialized,
    pub q_tilde: Materialized,
    /// `P~ / G` and `Q~ / G` in root form.
    pub p_cofactor: RootList,
    pub q_cofactor: RootList,
    pub graph: MatchGraph,
    pub matching: Matching,
    pub dist_p: f64,
    pub dist_q: f64,
    pub cert_p: bool,
    pub cert_q: bool,
    pub sigmas: StageSigmas,
    pub rho: Rho,
    pub p_report: RootfindReport,
    pub q_report: RootfindReport,
    pub p_clusters: Clustering,
    pub q_clusters: Clustering,
    pub warnings: Vec<String>,
}

impl AgcdResult {
    pub fn degree(&self) -> usize {
        self.gcd.degree()
    }

    /// Degree bookkeeping that must hold on every run.
    pub fn check_bookkeeping(&self) -> std::result::Result<(), String> {
        let deg_p = self.p_report.actual_degree();
        let deg_q = self.q_report.actual_degree();
        if self.p_tilde.degree() != deg_p {
            return Err(format!("deg P~ = {} but deg P = {deg_p}", self.p_tilde.degree()));
        }
        if self.q_tilde.degree() != deg_q {
            return Err(format!("deg Q~ = {} but deg Q = {deg_q}", self.q_tilde.degree()));
        }
        if self.gcd.degree() as u64 != self.matching.total_weight {
            return Err(format!(
                "deg G = {} but matching weight = {}",
                self.gcd.degree(),
                self.matching.total_weight
            ));
        }
        if self.p_clusters.roots.total_multiplicity() != deg_p || self.q_clusters.roots.total_multiplicity() != deg_q {
            return Err("clustering changed the total multiplicity".into());
        }
        for (name, tilde) in [("P~", &self.p_tilde.roots), ("Q~", &self.q_tilde.roots)] {
            if !is_sub_multiset(&self.gcd.roots, tilde) {
                return Err(format!("G is not a factor of {name}"));
            }
        }
        if !self.matching.is_valid() {
            return Err("matching shares a vertex".into());
        }
        Ok(())
    }
}

/// Every root of `small` appears in `big` with at least its multiplicity.
pub fn is_sub_multiset(small: &RootList, big: &RootList) -> bool {
    small.iter().all(|r| {
        let available: u32 = big.iter().filter(|s| s.value == r.value).map(|s| s.multiplicity).sum();
        let needed: u32 = small.iter().filter(|s| s.value == r.value).map(|s| s.multiplicity).sum();
        available >= needed
    })
}

/// One root per matched edge, at the multiplicity-weighted average of its
/// endpoints, with the edge weight as multiplicity. An empty matching gives
/// the constant 1.
pub fn assemble_gcd(m: &Matching, g: &MatchGraph) -> RootList {
    let roots = m
        .edges
        .iter()
        .map(|e| {
            let a = g.left.entries()[e.left];
            let b = g.right.entries()[e.right];
            let (da, db) = (a.multiplicity as f64, b.multiplicity as f64);
            Root::new((a.value * da + b.value * db) / (da + db), e.weight)
        })
        .collect();
    RootList::new(roots).expect("matched edges have positive weight")
}

/// Which side of the matching a clustered root list sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    P,
    Q,
}

/// Clustered roots left over after the GCD takes its share: unmatched roots
/// keep their multiplicity `d`, matched ones keep `d - w`.
pub fn cofactor(clustered: &RootList, m: &Matching, side: Side) -> RootList {
    let roots = clustered
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let partner = match side {
                Side::P => m.left_partner(i),
                Side::Q => m.right_partner(i),
            };
            let used = partner.map_or(0, |e| e.weight);
            let rest = r.multiplicity - used;
            (rest > 0).then(|| Root::new(r.value, rest))
        })
        .collect();
    RootList::new(roots).expect("cofactor multiplicities are positive")
}

/// `G` times the cofactor, in root form.
pub fn reconstruct(clustered: &RootList, m: &Matching, side: Side, gcd: &RootList) -> RootList {
    let mut roots: Vec<Root> = gcd.entries().to_vec();
    roots.extend_from_slice(cofactor(clustered, m, side).entries());
    RootList::new(roots).expect("valid roots")
}

/// Nodes for sampling `G`: its distinct roots, then 0, then Chebyshev points
/// of `[lo, hi]` until there are `deg G + 1` of them.
pub fn gcd_nodes(gcd: &RootList, lo: f64, hi: f64) -> Vec<Complex64> {
    let needed = gcd.total_multiplicity() + 1;
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
    let min_gap = 1e-6 * (hi - lo);
    let mut nodes: Vec<Complex64> = Vec::with_capacity(needed);
    let push_if_apart = |nodes: &mut Vec<Complex64>, z: Complex64| {
        if nodes.iter().all(|x| (x - z).norm() >= min_gap) {
            nodes.push(z);
        }
    };
    for r in gcd {
        push_if_apart(&mut nodes, r.value);
    }
    if nodes.len() < needed {
        push_if_apart(&mut nodes, Complex64::new(0.0, 0.0));
    }
    let mut count = needed;
    while nodes.len() < needed {
        let fresh: Vec<Complex64> = chebyshev_nodes(count, lo, hi)
            .into_iter()
            .filter(|z| nodes.iter().all(|x| (x - z).norm() >= min_gap))
            .collect();
        if fresh.len() >= needed - nodes.len() {
            let take = needed - nodes.len();
            nodes.extend(fresh.into_iter().take(take));
        } else {
            count += 1;
        }
    }
    nodes
}

fn real_hull(polys: &[&LagrangePoly]) -> (f64, f64) {
    polys
        .iter()
        .flat_map(|p| p.nodes().iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.re), hi.max(z.re)))
}

/// Runs the whole pipeline on two sampled polynomials.
pub fn approximate_gcd(p: &LagrangePoly, q: &LagrangePoly, params: &AgcdParams) -> Result<AgcdResult> {
    params.validate()?;
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (p_report, q_report) = rootfind::roots_pair(p, q);
    let (p_report, q_report) = (p_report?, q_report?);
    let sigmas = params.sigmas();
    let cparams = params.cluster_params();

    let p_clusters = cluster::cluster(&RootList::from_simple(p_report.roots.iter().copied())?, &cparams)?;
    let q_clusters = cluster::cluster(&RootList::from_simple(q_report.roots.iter().copied())?, &cparams)?;

    let graph = build_graph(&p_clusters.roots, &q_clusters.roots, sigmas.edge);
    let matching = match params.matcher {
        Matcher::Greedy => greedy_mwm(&graph),
        Matcher::Exact => exact_mwm(&graph)?,
    };
    let gcd_roots = assemble_gcd(&matching, &graph);
    let p_tilde_roots = reconstruct(&p_clusters.roots, &matching, Side::P, &gcd_roots);
    let q_tilde_roots = reconstruct(&q_clusters.roots, &matching, Side::Q, &gcd_roots);

    let dist_p = root_pseudometric(
        &RootVector::new(p_report.roots.clone()),
        &RootVector::from(&p_tilde_roots),
        params.rho,
    )?;
    let dist_q = root_pseudometric(
        &RootVector::new(q_report.roots.clone()),
        &RootVector::from(&q_tilde_roots),
        params.rho,
    )?;
    let cert_p = dist_p <= sigmas.cert;
    let cert_q = dist_q <= sigmas.cert;

    let mut warnings = Vec::new();
    for (name, report) in [("P", &p_report), ("Q", &q_report)] {
        for note in &report.conditioning.notes {
            warnings.push(format!("{name}: {note}"));
        }
    }
    if !cert_p {
        warnings.push(format!("d(P, P~) = {dist_p:e} exceeds sigma = {:e}", sigmas.cert));
    }
    if !cert_q {
        warnings.push(format!("d(Q, Q~) = {dist_q:e} exceeds sigma = {:e}", sigmas.cert));
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    let (lo, hi) = real_hull(&[p, q]);
    let gcd = Materialized {
        samples: from_roots_monic(&gcd_roots, gcd_nodes(&gcd_roots, lo, hi))?,
        roots: gcd_roots.clone(),
    };
    let p_tilde = Materialized {
        samples: from_roots_monic(&p_tilde_roots, p.nodes().to_vec())?,
        roots: p_tilde_roots,
    };
    let q_tilde = Materialized {
        samples: from_roots_monic(&q_tilde_roots, q.nodes().to_vec())?,
        roots: q_tilde_roots,
    };

    let result = AgcdResult {
        p_cofactor: cofactor(&p_clusters.roots, &matching, Side::P),
        q_cofactor: cofactor(&q_clusters.roots, &matching, Side::Q),
        gcd,
        p_tilde,
        q_tilde,
        graph,
        matching,
        dist_p,
        dist_q,
        cert_p,
        cert_q,
        sigmas,
        rho: params.rho,
        p_report,
        q_report,
        p_clusters,
        q_clusters,
        warnings,
    };
    debug_assert_eq!(result.check_bookkeeping(), Ok(()));
    Ok(result)
}
