//! Bipartite graph between two clustered root sets and maximum-weight
//! matchings on it.
//!
//! Vertices are the clustered roots of `P` (left) and `Q` (right). A root
//! pair within `sigma` is an edge weighted by the smaller multiplicity, so
//! the weight of a matching is the degree of the GCD it produces.

use crate::assignment::min_cost_assignment;
use crate::error::{Error, Result};
use crate::lagpoly::RootList;

/// Exhaustive search is used when both sides have at most this many vertices.
pub const EXHAUSTIVE_SIDE_LIMIT: usize = 8;
/// `|left| * |right|` above which [`exact_mwm`] refuses to run.
pub const EXACT_SIZE_GUARD: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub left: usize,
    pub right: usize,
    pub weight: u32,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchGraph {
    pub left: RootList,
    pub right: RootList,
    pub edges: Vec<Edge>,
    pub sigma: f64,
    /// Distance evaluations spent building the graph.
    pub comparisons: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Matching {
    pub edges: Vec<Edge>,
    pub total_weight: u64,
}

impl Matching {
    fn from_edges(mut edges: Vec<Edge>) -> Self {
        edges.sort_by(|a, b| (a.left, a.right).cmp(&(b.left, b.right)));
        let total_weight = edges.iter().map(|e| e.weight as u64).sum();
        Self { edges, total_weight }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// No two edges share a left or a right vertex.
    pub fn is_valid(&self) -> bool {
        let mut lefts: Vec<usize> = self.edges.iter().map(|e| e.left).collect();
        let mut rights: Vec<usize> = self.edges.iter().map(|e| e.right).collect();
        lefts.sort_unstable();
        rights.sort_unstable();
        lefts.windows(2).all(|w| w[0] != w[1]) && rights.windows(2).all(|w| w[0] != w[1])
    }

    pub fn left_partner(&self, left: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.left == left)
    }

    pub fn right_partner(&self, right: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.right == right)
    }
}

/// Edges `{r, s}` with `|r - s| <= sigma`, weighted by
/// `min(mult(r), mult(s))`.
pub fn build_graph(left: &RootList, right: &RootList, sigma: f64) -> MatchGraph {
    let mut edges = Vec::new();
    for (i, r) in left.iter().enumerate() {
        for (j, s) in right.iter().enumerate() {
            let distance = (r.value - s.value).norm();
            if distance <= sigma {
                edges.push(Edge {
                    left: i,
                    right: j,
                    weight: r.multiplicity.min(s.multiplicity),
                    distance,
                });
            }
        }
    }
    MatchGraph {
        left: left.clone(),
        right: right.clone(),
        edges,
        sigma,
        comparisons: left.len() * right.len(),
    }
}

impl MatchGraph {
    /// The same graph with sides swapped.
    pub fn transposed(&self) -> MatchGraph {
        MatchGraph {
            left: self.right.clone(),
            right: self.left.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    left: e.right,
                    right: e.left,
                    ..*e
                })
                .collect(),
            sigma: self.sigma,
            comparisons: self.comparisons,
        }
    }

    /// Edge list as CSV `left_re,left_im,right_re,right_im,weight,distance`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("left_re,left_im,right_re,right_im,weight,distance\n");
        for e in &self.edges {
            out.push_str(&format!(
                "{},{},{},{}\n",
                crate::cli::format_complex(self.left.entries()[e.left].value),
                crate::cli::format_complex(self.right.entries()[e.right].value),
                e.weight,
                crate::cli::format_real(e.distance)
            ));
        }
        out
    }
}

/// Greedy half-approximation: scan edges by descending weight (ties by
/// ascending distance, then indices) and keep every edge disjoint from
/// those already kept.
pub fn greedy_mwm(g: &MatchGraph) -> Matching {
    let mut order: Vec<&Edge> = g.edges.iter().collect();
    order.sort_by(|a, b| {
        b.weight
            .cmp(&a.weight)
            .then(a.distance.total_cmp(&b.distance))
            .then((a.left, a.right).cmp(&(b.left, b.right)))
    });
    let mut left_used = vec![false; g.left.len()];
    let mut right_used = vec![false; g.right.len()];
    let mut taken = Vec::new();
    for e in order {
        if !left_used[e.left] && !right_used[e.right] {
            left_used[e.left] = true;
            right_used[e.right] = true;
            taken.push(*e);
        }
    }
    Matching::from_edges(taken)
}

fn exhaustive(g: &MatchGraph) -> Matching {
    let mut by_left: Vec<Vec<Edge>> = vec![Vec::new(); g.left.len()];
    for e in &g.edges {
        by_left[e.left].push(*e);
    }
    fn search(
        i: usize,
        by_left: &[Vec<Edge>],
        right_used: &mut Vec<bool>,
        current: &mut Vec<Edge>,
        weight: u64,
        best: &mut (u64, Vec<Edge>),
    ) {
        if i == by_left.len() {
            if weight > best.0 {
                *best = (weight, current.clone());
            }
            return;
        }
        for e in &by_left[i] {
            if !right_used[e.right] {
                right_used[e.right] = true;
                current.push(*e);
                search(i + 1, by_left, right_used, current, weight + e.weight as u64, best);
                current.pop();
                right_used[e.right] = false;
            }
        }
        search(i + 1, by_left, right_used, current, weight, best);
    }
    let mut best = (0, Vec::new());
    search(0, &by_left, &mut vec![false; g.right.len()], &mut Vec::new(), 0, &mut best);
    Matching::from_edges(best.1)
}

/// Maximum-weight matching through an assignment problem: missing edges
/// carry weight zero and are dropped from the result.
pub fn assignment_mwm(g: &MatchGraph) -> Matching {
    if g.edges.is_empty() {
        return Matching::default();
    }
    let transpose = g.left.len() > g.right.len();
    let (rows, cols) = if transpose {
        (g.right.len(), g.left.len())
    } else {
        (g.left.len(), g.right.len())
    };
    let max_w = g.edges.iter().map(|e| e.weight).max().unwrap_or(0) as f64;
    let mut costs = vec![vec![max_w; cols]; rows];
    let mut lookup = vec![vec![None; cols]; rows];
    for e in &g.edges {
        let (r, c) = if transpose { (e.right, e.left) } else { (e.left, e.right) };
        costs[r][c] = max_w - e.weight as f64;
        lookup[r][c] = Some(*e);
    }
    let assignment = min_cost_assignment(&costs);
    let edges = assignment
        .iter()
        .enumerate()
        .filter_map(|(r, &c)| lookup[r][c])
        .collect();
    Matching::from_edges(edges)
}

/// Exact maximum-weight matching, intended as an oracle for the greedy one.
pub fn exact_mwm(g: &MatchGraph) -> Result<Matching> {
    let (l, r) = (g.left.len(), g.right.len());
    if l * r > EXACT_SIZE_GUARD {
        return Err(Error::SizeGuard {
            left: l,
            right: r,
            limit: EXACT_SIZE_GUARD,
        });
    }
    if l <= EXHAUSTIVE_SIDE_LIMIT && r <= EXHAUSTIVE_SIDE_LIMIT {
        Ok(exhaustive(g))
    } else {
        Ok(assignment_mwm(g))
    }
}
