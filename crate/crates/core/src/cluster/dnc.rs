//! Divide-and-conquer clustering, shaped like the closest-pair algorithm.
//!
//! The real-sorted input is split at its middle element, both halves are
//! clustered recursively and merged into one list ordered by imaginary
//! part. Points within `sigma` of the dividing line `x = Re(q[mid])` form
//! the strip; close pairs inside the strip are merged in ascending order of
//! distance, each point taking part in at most one merge per strip pass.
//! Merges are therefore pairwise and not transitive: `[1, 1.5, 2]` with
//! `sigma = 0.5` yields `[[1.25, 2], [2, 1]]`, not `[[1.5, 3]]`.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::{Clustering, MergeRule};
use crate::lagpoly::{Root, RootList};

#[derive(Debug, Clone)]
struct Point {
    z: Complex64,
    mult: u32,
    members: Vec<usize>,
}

fn cmp_im(a: &Point, b: &Point) -> Ordering {
    a.z.im.total_cmp(&b.z.im).then(a.z.re.total_cmp(&b.z.re))
}

struct Pass {
    sigma: f64,
    rule: MergeRule,
    comparisons: u64,
}

impl Pass {
    fn merge_by_im(&mut self, a: Vec<Point>, b: Vec<Point>) -> Vec<Point> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut a = a.into_iter().peekable();
        let mut b = b.into_iter().peekable();
        loop {
            let take_a = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    self.comparisons += 1;
                    cmp_im(x, y) != Ordering::Greater
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            out.push(if take_a { a.next() } else { b.next() }.unwrap());
        }
        out
    }

    fn combine(&self, u: Point, v: Point) -> Point {
        let mult = u.mult + v.mult;
        let z = match self.rule {
            MergeRule::Weighted => (u.z * u.mult as f64 + v.z * v.mult as f64) / mult as f64,
            MergeRule::Midpoint => (u.z + v.z) * 0.5,
        };
        let mut members = u.members;
        members.extend(v.members);
        Point { z, mult, members }
    }

    /// Merges close pairs among `strip` (ordered by imaginary part).
    fn check_strip(&mut self, strip: Vec<Point>) -> Vec<Point> {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for i in 0..strip.len() {
            for j in i + 1..strip.len() {
                self.comparisons += 1;
                if strip[j].z.im - strip[i].z.im > self.sigma {
                    break;
                }
                let d = (strip[i].z - strip[j].z).norm();
                if d <= self.sigma {
                    pairs.push((d, i, j));
                }
            }
        }
        if pairs.is_empty() {
            return strip;
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        self.comparisons += pairs.len() as u64;

        let mut slots: Vec<Option<Point>> = strip.into_iter().map(Some).collect();
        let mut merged = Vec::new();
        for (_, i, j) in pairs {
            if slots[i].is_some() && slots[j].is_some() {
                let u = slots[i].take().unwrap();
                let v = slots[j].take().unwrap();
                merged.push(self.combine(u, v));
            }
        }
        merged.sort_by(cmp_im);
        self.comparisons += merged.len() as u64;
        let rest: Vec<Point> = slots.into_iter().flatten().collect();
        self.merge_by_im(rest, merged)
    }

    fn recurse(&mut self, q: &[Point]) -> Vec<Point> {
        if q.len() == 1 {
            return vec![q[0].clone()];
        }
        let mid = (q.len() - 1) / 2;
        let left = self.recurse(&q[..=mid]);
        let right = self.recurse(&q[mid + 1..]);
        let line = q[mid].z.re;
        let merged = self.merge_by_im(left, right);

        let mut strip = Vec::new();
        let mut rest = Vec::new();
        for p in merged {
            self.comparisons += 1;
            if (p.z.re - line).abs() <= self.sigma {
                strip.push(p);
            } else {
                rest.push(p);
            }
        }
        let strip = self.check_strip(strip);
        self.merge_by_im(rest, strip)
    }
}

fn one_pass(points: Vec<Point>, sigma: f64, rule: MergeRule, comparisons: &mut u64) -> Vec<Point> {
    if points.is_empty() {
        return points;
    }
    let mut pass = Pass {
        sigma,
        rule,
        comparisons: 0,
    };
    let mut out = pass.recurse(&points);
    *comparisons += pass.comparisons;
    out.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    out
}

/// Divide-and-conquer clustering with provenance and comparison count.
pub fn cluster_roots_dnc_detailed(q: &RootList, sigma: f64, rule: MergeRule, fixpoint: bool) -> Clustering {
    let mut points: Vec<Point> = q
        .iter()
        .enumerate()
        .map(|(k, r)| Point {
            z: r.value,
            mult: r.multiplicity,
            members: vec![k],
        })
        .collect();
    let mut comparisons = 0;
    loop {
        let before = points.len();
        points = one_pass(points, sigma, rule, &mut comparisons);
        if !fixpoint || points.len() == before {
            break;
        }
    }
    Clustering::from_groups(
        points
            .into_iter()
            .map(|p| (Root::new(p.z, p.mult), p.members))
            .collect(),
        comparisons,
    )
}

/// Clusters a real-sorted root list with tolerance `sigma`, merging pairs by
/// multiplicity-weighted centroid.
pub fn cluster_roots_dnc(q: &RootList, sigma: f64) -> RootList {
    cluster_roots_dnc_detailed(q, sigma, MergeRule::Weighted, false).roots
}
