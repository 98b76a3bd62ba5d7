//! Linear and bottleneck assignment on dense cost matrices.

/// Minimum-cost assignment of every row to a distinct column (Hungarian
/// method with potentials, O(n^2 m)). Requires `rows <= cols`. Returns the
/// column chosen for each row.
pub fn min_cost_assignment(costs: &[Vec<f64>]) -> Vec<usize> {
    let n = costs.len();
    if n == 0 {
        return Vec::new();
    }
    let m = costs[0].len();
    assert!(costs.iter().all(|row| row.len() == m), "ragged cost matrix");
    assert!(n <= m, "more rows than columns");

    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    // p[j]: row assigned to column j (1-based, 0 = none)
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = costs[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![usize::MAX; n];
    for j in 1..=m {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Whether a perfect matching exists using only entries with
/// `costs[i][j] <= threshold` (Kuhn's augmenting paths). Returns the
/// matching when it does.
fn perfect_under(costs: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = costs.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        i: usize,
        costs: &[Vec<f64>],
        threshold: f64,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..costs.len() {
            if costs[i][j] <= threshold && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, costs, threshold, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }

    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, costs, threshold, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut assignment = vec![0; n];
    for (j, i) in owner.iter().enumerate() {
        assignment[i.expect("perfect matching")] = j;
    }
    Some(assignment)
}

/// Assignment minimising the largest cost on a square matrix: binary search
/// over the distinct entries for the smallest feasible threshold.
pub fn bottleneck_assignment(costs: &[Vec<f64>]) -> Vec<usize> {
    let n = costs.len();
    if n == 0 {
        return Vec::new();
    }
    assert!(costs.iter().all(|row| row.len() == n), "bottleneck assignment needs a square matrix");
    let mut levels: Vec<f64> = costs.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let (mut lo, mut hi) = (0, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_under(costs, levels[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    perfect_under(costs, levels[lo]).expect("the largest level always admits a perfect matching")
}
