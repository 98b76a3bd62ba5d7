//! Distance and symmetry heuristic for clustering approximate roots.
//!
//! A perturbed `m`-fold root splits into `m` simple roots spread roughly
//! evenly on a small circle whose radius scales like `s^(1/m)` for a
//! perturbation of size `s`. Candidate sets of `m` points are accepted when
//!
//! * every point lies within `fuzz * sigma^(1/m)` of the set's centroid,
//! * the largest and smallest distances to the centroid differ by at most
//!   [`RADIUS_BAND`], and
//! * the angular gaps around the centroid are each within
//!   [`ANGLE_TOLERANCE`] of `2 pi / m`.
//!
//! Larger `m` is searched first. Within one `m`, the most symmetric
//! candidates win, then the tightest.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ClusterParams, Clustering};
use crate::lagpoly::{Root, RootList};

/// Largest allowed deviation of an angular gap from `2 pi / m`, radians.
pub const ANGLE_TOLERANCE: f64 = 0.35;
/// Largest allowed ratio of max to min distance from the centroid.
pub const RADIUS_BAND: f64 = 2.0;
/// Up to this many live points every subset is a candidate.
pub const EXHAUSTIVE_LIMIT: usize = 12;
/// Beyond the exhaustive limit, candidates are drawn from this many extra
/// nearest neighbours per point (beyond the `m - 1` needed).
pub const NEIGHBOUR_SLACK: usize = 4;

#[derive(Debug, Clone, Copy)]
struct Score {
    asymmetry: f64,
    mean_radius: f64,
}

fn centroid(points: &[Complex64], idx: &[usize]) -> Complex64 {
    idx.iter().map(|&i| points[i]).sum::<Complex64>() / idx.len() as f64
}

fn assess(points: &[Complex64], idx: &[usize], radius: f64) -> Option<Score> {
    let m = idx.len();
    let c = centroid(points, idx);
    let dists: Vec<f64> = idx.iter().map(|&i| (points[i] - c).norm()).collect();
    let max_d = dists.iter().cloned().fold(0.0, f64::max);
    let min_d = dists.iter().cloned().fold(f64::INFINITY, f64::min);
    if max_d > radius {
        return None;
    }
    if max_d <= 8.0 * f64::EPSILON * c.norm().max(1.0) {
        // coincident up to rounding, where the angular test is meaningless
        return Some(Score {
            asymmetry: 0.0,
            mean_radius: 0.0,
        });
    }
    if min_d == 0.0 || max_d / min_d > RADIUS_BAND {
        return None;
    }
    let mut angles: Vec<f64> = idx.iter().map(|&i| (points[i] - c).arg()).collect();
    angles.sort_by(f64::total_cmp);
    let ideal = 2.0 * PI / m as f64;
    let mut asymmetry: f64 = 0.0;
    for k in 0..m {
        let gap = if k + 1 < m {
            angles[k + 1] - angles[k]
        } else {
            angles[0] + 2.0 * PI - angles[m - 1]
        };
        asymmetry = asymmetry.max((gap - ideal).abs());
    }
    if asymmetry > ANGLE_TOLERANCE {
        return None;
    }
    Some(Score {
        asymmetry,
        mean_radius: dists.iter().sum::<f64>() / m as f64,
    })
}

fn combinations(pool: &[usize], k: usize, mut visit: impl FnMut(&[usize])) {
    fn go(pool: &[usize], k: usize, start: usize, acc: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if acc.len() == k {
            visit(acc);
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - acc.len() {
                break;
            }
            acc.push(pool[i]);
            go(pool, k, i + 1, acc, visit);
            acc.pop();
        }
    }
    let mut acc = Vec::with_capacity(k);
    go(pool, k, 0, &mut acc, &mut visit);
}

fn candidates(points: &[Complex64], alive: &[usize], m: usize, radius: f64) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    if alive.len() <= EXHAUSTIVE_LIMIT {
        combinations(alive, m, |c| {
            out.insert(c.to_vec());
        });
        return out;
    }
    let reach = 2.0 * radius;
    for &p in alive {
        let mut near: Vec<(f64, usize)> = alive
            .iter()
            .filter(|&&q| q != p)
            .map(|&q| ((points[q] - points[p]).norm(), q))
            .filter(|&(d, _)| d <= reach)
            .collect();
        if near.len() < m - 1 {
            continue;
        }
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        near.truncate(m - 1 + NEIGHBOUR_SLACK);
        let pool: Vec<usize> = near.iter().map(|&(_, q)| q).collect();
        combinations(&pool, m - 1, |c| {
            let mut set = c.to_vec();
            set.push(p);
            set.sort_unstable();
            out.insert(set);
        });
    }
    out
}

/// Heuristic clustering with provenance. An input root of multiplicity `d`
/// is treated as `d` coincident points.
pub fn cluster_roots_heuristic_detailed(roots: &RootList, params: &ClusterParams) -> Clustering {
    let mut points = Vec::new();
    let mut owner = Vec::new();
    for (k, r) in roots.iter().enumerate() {
        for _ in 0..r.multiplicity {
            points.push(r.value);
            owner.push(k);
        }
    }
    let mut alive = vec![true; points.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut evaluations = 0u64;

    for m in (2..=params.max_multiplicity as usize).rev() {
        let live: Vec<usize> = (0..points.len()).filter(|&i| alive[i]).collect();
        if live.len() < m {
            continue;
        }
        let radius = params.fuzz_factor * params.sigma.powf(1.0 / m as f64);
        let mut accepted: Vec<(Score, Vec<usize>)> = candidates(&points, &live, m, radius)
            .into_iter()
            .filter_map(|set| {
                evaluations += 1;
                assess(&points, &set, radius).map(|s| (s, set))
            })
            .collect();
        accepted.sort_by(|a, b| {
            a.0.asymmetry
                .total_cmp(&b.0.asymmetry)
                .then(a.0.mean_radius.total_cmp(&b.0.mean_radius))
                .then(a.1.cmp(&b.1))
        });
        for (_, set) in accepted {
            if set.iter().all(|&i| alive[i]) {
                for &i in &set {
                    alive[i] = false;
                }
                groups.push(set);
            }
        }
    }
    for i in 0..points.len() {
        if alive[i] {
            groups.push(vec![i]);
        }
    }

    // coalesce outputs that landed on exactly the same point
    let mut merged: Vec<(Root, Vec<usize>)> = Vec::new();
    for set in groups {
        let z = centroid(&points, &set);
        let mut members: Vec<usize> = set.iter().map(|&i| owner[i]).collect();
        members.sort_unstable();
        members.dedup();
        match merged.iter_mut().find(|(r, _)| r.value == z) {
            Some((r, m)) => {
                r.multiplicity += set.len() as u32;
                m.extend(members);
                m.sort_unstable();
                m.dedup();
            }
            None => merged.push((Root::new(z, set.len() as u32), members)),
        }
    }
    Clustering::from_groups(merged, evaluations)
}

pub fn cluster_roots_heuristic(roots: &RootList, params: &ClusterParams) -> RootList {
    cluster_roots_heuristic_detailed(roots, params).roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polygon(center: Complex64, radius: f64, m: usize, phase: f64) -> Vec<Complex64> {
        (0..m)
            .map(|k| center + Complex64::from_polar(radius, phase + 2.0 * PI * k as f64 / m as f64))
            .collect()
    }

    #[test]
    fn perfect_triple_collapses() {
        let pts = polygon(Complex64::new(5.0, 0.0), 1e-3, 3, 0.0);
        let roots = RootList::from_simple(pts).unwrap();
        let out = cluster_roots_heuristic(&roots, &ClusterParams::heuristic(1e-6));
        assert_eq!(out.len(), 1);
        assert_eq!(out.entries()[0].multiplicity, 3);
        assert!((out.entries()[0].value - Complex64::new(5.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn distant_pair_is_untouched() {
        let sigma = 0.1;
        let roots = RootList::from_real_pairs(&[(0.0, 1), (10.0 * sigma, 1)]).unwrap();
        let out = cluster_roots_heuristic(&roots, &ClusterParams::heuristic(sigma));
        assert_eq!(out, roots);
    }

    #[test]
    fn prefers_symmetric_triangle_over_closer_point() {
        let c = Complex64::new(0.3, 0.4);
        let mut pts = polygon(c, 0.05, 3, 0.2);
        // interior point closer to the centre than the triangle vertices
        pts.push(c + Complex64::new(0.02, 0.01));
        let roots = RootList::from_simple(pts.clone()).unwrap();
        let clustering = cluster_roots_heuristic_detailed(&roots, &ClusterParams::heuristic(1e-3));
        let triple = clustering
            .roots
            .iter()
            .position(|r| r.multiplicity == 3)
            .expect("a triple is formed");
        assert!((clustering.roots.entries()[triple].value - c).norm() < 1e-12);
        let interior = roots.iter().position(|r| r.value == pts[3]).unwrap();
        assert!(!clustering.members[triple].contains(&interior));
    }

    #[test]
    fn existing_multiplicity_is_kept() {
        let roots = RootList::from_real_pairs(&[(1.0, 2), (4.0, 1)]).unwrap();
        let out = cluster_roots_heuristic(&roots, &ClusterParams::heuristic(0.01));
        assert_eq!(out, roots);
        let four = RootList::from_real_pairs(&[(1.0, 4)]).unwrap();
        assert_eq!(cluster_roots_heuristic(&four, &ClusterParams::heuristic(0.01)), four);
    }

    #[test]
    fn rounding_level_pair_is_coincident() {
        // the centroid rounds onto one of the points
        let roots = RootList::from_real_pairs(&[(-2.000000000000001, 1), (-2.0000000000000004, 1)]).unwrap();
        let out = cluster_roots_heuristic(&roots, &ClusterParams::heuristic(1e-6));
        assert_eq!(out.multiplicities(), vec![2]);
    }

    #[test]
    fn combinations_enumerates_all() {
        let mut seen = Vec::new();
        combinations(&[1, 2, 3, 4], 2, |c| seen.push(c.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![1, 2]);
        assert_eq!(seen[5], vec![3, 4]);
    }
}
