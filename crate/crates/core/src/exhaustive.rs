//! Brute-force reference search: the plain recursion over every split with
//! no bounds, caching, or early exit, plus the sweep-based depth-1 fast
//! path. The recursion rebuilds subsets naively on purpose so it stays
//! independent of the optimized search it validates.

use crate::dataset::{best_action, Dataset};
use crate::error::SearchError;
use crate::tree::PolicyTree;

/// One candidate split: covariate, threshold, and the two induced subsets
/// (both nonempty, ascending unit index).
#[derive(Debug, Clone)]
pub struct SplitCandidate {
    pub covariate: usize,
    pub value: f64,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

/// Enumerates every distinct split of `units` on covariate `j`: one
/// candidate per distinct value except the maximum (which would send all
/// units left), thresholds ascending.
pub fn enumerate_splits(ds: &Dataset, units: &[u32], j: usize) -> Vec<SplitCandidate> {
    let mut values: Vec<f64> = units.iter().map(|&i| ds.x(i, j)).collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();
    if values.len() < 2 {
        return Vec::new();
    }
    values.pop();
    values
        .into_iter()
        .map(|v| {
            let (left, right) = units.iter().partition(|&&i| ds.x(i, j) <= v);
            SplitCandidate {
                covariate: j,
                value: v,
                left,
                right,
            }
        })
        .collect()
}

/// Internal result: the winning tree, the value used for parent comparisons,
/// and whether that value equals the subset's maximum-reward sum.
pub(crate) struct Solved {
    pub tree: PolicyTree,
    pub value: f64,
    pub perfect: bool,
}

/// The plain recursion. Candidate values are the sum of the two child
/// optima, except that a split whose children are both perfect scores
/// exactly the subset's maximum-reward sum, so perfect trees compare
/// identically no matter how their value was accumulated. Ties prefer the
/// leaf, then the smaller covariate, then the smaller threshold.
pub(crate) fn solve_naive(ds: &Dataset, units: &[u32], depth: usize) -> Solved {
    let perfect_sum = ds.max_reward_sum(units);
    let (leaf_action, leaf_value) = ds.best_leaf(units).expect("nonempty unit set");
    let mut best = PolicyTree::leaf(leaf_action);
    let mut best_value = leaf_value;

    if depth > 0 && units.len() >= 2 {
        for j in 0..ds.num_covariates() {
            for cand in enumerate_splits(ds, units, j) {
                let left = solve_naive(ds, &cand.left, depth - 1);
                let right = solve_naive(ds, &cand.right, depth - 1);
                let value = if left.perfect && right.perfect {
                    perfect_sum
                } else {
                    left.value + right.value
                };
                if value > best_value {
                    best = PolicyTree::split(j, cand.value, left.tree, right.tree);
                    best_value = value;
                }
            }
        }
    }

    let perfect = best_value == perfect_sum;
    Solved {
        tree: best,
        value: best_value,
        perfect,
    }
}

/// Finds an optimal tree of depth at most `depth` by brute force.
///
/// The returned reward is the tree's reward recomputed over `units` in
/// ascending index order, so it can be compared exactly against any other
/// strategy and against [`Dataset::tree_reward`].
pub fn search_exhaustive(
    ds: &Dataset,
    units: &[u32],
    depth: usize,
) -> Result<(PolicyTree, f64), SearchError> {
    ds.check_units(units)?;
    let mut sorted = units.to_vec();
    sorted.sort_unstable();
    let solved = solve_naive(ds, &sorted, depth);
    let reward = ds.tree_reward(&solved.tree, &sorted);
    Ok((solved.tree, reward))
}

/// Depth-1 search without set-family maintenance: per covariate, sort once
/// and sweep thresholds while maintaining running per-action reward sums for
/// both sides. Same contract as [`search_exhaustive`] with `depth == 1`.
pub fn search_depth1_fast(ds: &Dataset, units: &[u32]) -> Result<(PolicyTree, f64), SearchError> {
    ds.check_units(units)?;
    let mut sorted = units.to_vec();
    sorted.sort_unstable();
    let units = &sorted[..];

    let m = ds.num_actions();
    let perfect_sum = ds.max_reward_sum(units);
    let (leaf_action, leaf_value) = ds.best_leaf(units)?;

    let mut initial_right = vec![0.0f64; m];
    ds.accumulate_action_sums(units, &mut initial_right);

    // Running-sum sweep to select the best split; ties prefer the leaf,
    // then the smaller covariate, then the smaller threshold.
    let mut best_value = leaf_value;
    let mut best_split: Option<(usize, f64)> = None;
    let mut pairs: Vec<(f64, u32)> = Vec::with_capacity(units.len());
    let mut left_sums = vec![0.0f64; m];
    let mut right_sums = vec![0.0f64; m];

    for j in 0..ds.num_covariates() {
        pairs.clear();
        pairs.extend(units.iter().map(|&i| (ds.x(i, j), i)));
        pairs.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        if pairs[0].0 == pairs[pairs.len() - 1].0 {
            continue;
        }
        left_sums.fill(0.0);
        right_sums.copy_from_slice(&initial_right);
        let mut pos = 0;
        while pos < pairs.len() {
            let value = pairs[pos].0;
            let mut end = pos + 1;
            while end < pairs.len() && pairs[end].0 == value {
                end += 1;
            }
            if end == pairs.len() {
                break;
            }
            for &(_, i) in &pairs[pos..end] {
                let row_base = i;
                for a in 0..m {
                    let r = ds.reward(row_base, a);
                    left_sums[a] += r;
                    right_sums[a] -= r;
                }
            }
            let (_, lv) = best_action(&left_sums);
            let (_, rv) = best_action(&right_sums);
            let cand = lv + rv;
            if cand > best_value {
                best_value = cand;
                best_split = Some((j, value));
            }
            pos = end;
        }
    }

    // Recompute the winner from scratch so the returned tree and reward use
    // the canonical fixed-order sums.
    let tree = match best_split {
        None => PolicyTree::leaf(leaf_action),
        Some((j, v)) => {
            let (left, right): (Vec<u32>, Vec<u32>) = units.iter().partition(|&&i| ds.x(i, j) <= v);
            let (la, lv) = ds.best_leaf(&left)?;
            let (ra, rv) = ds.best_leaf(&right)?;
            let left_perfect = lv == ds.max_reward_sum(&left);
            let right_perfect = rv == ds.max_reward_sum(&right);
            let value = if left_perfect && right_perfect {
                perfect_sum
            } else {
                lv + rv
            };
            if value > leaf_value {
                PolicyTree::split(j, v, PolicyTree::leaf(la), PolicyTree::leaf(ra))
            } else {
                PolicyTree::leaf(leaf_action)
            }
        }
    };
    let reward = ds.tree_reward(&tree, units);
    Ok((tree, reward))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1_example() -> Dataset {
        Dataset::build(
            vec![vec![1.0], vec![2.0], vec![3.0]],
            vec![vec![5.0, 0.0], vec![0.0, 5.0], vec![0.0, 5.0]],
        )
        .unwrap()
    }

    #[test]
    fn thresholds_exclude_the_maximum() {
        let ds = Dataset::build(
            vec![vec![1.0], vec![2.0], vec![3.0]],
            vec![vec![0.0, 0.0]; 3],
        )
        .unwrap();
        let splits = enumerate_splits(&ds, &[0, 1, 2], 0);
        let thresholds: Vec<f64> = splits.iter().map(|s| s.value).collect();
        assert_eq!(thresholds, vec![1.0, 2.0]);
        assert_eq!(splits[0].left, vec![0]);
        assert_eq!(splits[1].left, vec![0, 1]);
    }

    #[test]
    fn constant_covariate_yields_no_splits() {
        let ds = Dataset::build(vec![vec![4.0]; 3], vec![vec![0.0, 0.0]; 3]).unwrap();
        assert!(enumerate_splits(&ds, &[0, 1, 2], 0).is_empty());
    }

    #[test]
    fn binary_covariate_yields_one_split() {
        let ds = Dataset::build(
            vec![vec![0.0], vec![1.0], vec![0.0], vec![1.0]],
            vec![vec![0.0, 0.0]; 4],
        )
        .unwrap();
        let splits = enumerate_splits(&ds, &[0, 1, 2, 3], 0);
        assert_eq!(splits.len(), 1);
        assert_eq!(splits[0].value, 0.0);
        assert_eq!(splits[0].left, vec![0, 2]);
        assert_eq!(splits[0].right, vec![1, 3]);
    }

    #[test]
    fn depth_zero_is_the_base_case() {
        let ds = Dataset::build(
            vec![vec![0.0], vec![1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 2.0]],
        )
        .unwrap();
        let (tree, reward) = search_exhaustive(&ds, &[0, 1], 0).unwrap();
        assert_eq!(tree, PolicyTree::leaf(1));
        assert_eq!(reward, 2.0);
    }

    #[test]
    fn depth_one_example_splits_off_the_first_unit() {
        let ds = d1_example();
        let (tree, reward) = search_exhaustive(&ds, &[0, 1, 2], 1).unwrap();
        assert_eq!(reward, 15.0);
        assert_eq!(
            tree,
            PolicyTree::split(0, 1.0, PolicyTree::leaf(0), PolicyTree::leaf(1))
        );
        // The reported reward matches an independent re-summation.
        assert_eq!(ds.tree_reward(&tree, &[0, 1, 2]), 15.0);
    }

    #[test]
    fn depth1_fast_matches_exhaustive_on_the_example() {
        let ds = d1_example();
        let (tree, reward) = search_depth1_fast(&ds, &[0, 1, 2]).unwrap();
        let (tree_ex, reward_ex) = search_exhaustive(&ds, &[0, 1, 2], 1).unwrap();
        assert_eq!(reward, reward_ex);
        assert_eq!(tree, tree_ex);
    }

    #[test]
    fn depth1_fast_falls_back_to_the_leaf_on_constant_covariates() {
        let ds = Dataset::build(
            vec![vec![7.0]; 3],
            vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![3.0, 0.0]],
        )
        .unwrap();
        let (tree, reward) = search_depth1_fast(&ds, &[0, 1, 2]).unwrap();
        assert_eq!(tree, PolicyTree::leaf(0));
        assert_eq!(reward, 6.0);
    }

    #[test]
    fn reward_is_monotone_in_depth() {
        let ds = Dataset::build(
            vec![
                vec![0.0, 3.0],
                vec![1.0, 1.0],
                vec![2.0, 2.0],
                vec![3.0, 0.0],
            ],
            vec![
                vec![2.0, 0.0],
                vec![0.0, 1.0],
                vec![3.0, 1.0],
                vec![0.0, 4.0],
            ],
        )
        .unwrap();
        let units: Vec<u32> = (0..4).collect();
        let mut prev = f64::NEG_INFINITY;
        for d in 0..4 {
            let (_, r) = search_exhaustive(&ds, &units, d).unwrap();
            assert!(r >= prev, "depth {d}: {r} < {prev}");
            prev = r;
        }
    }

    #[test]
    fn empty_unit_set_is_rejected() {
        let ds = d1_example();
        assert_eq!(
            search_exhaustive(&ds, &[], 1).unwrap_err(),
            SearchError::EmptyUnitSet
        );
        assert_eq!(
            search_depth1_fast(&ds, &[]).unwrap_err(),
            SearchError::EmptyUnitSet
        );
    }

    #[test]
    fn threshold_canonicalization_preserves_partitions() {
        // Any threshold strictly between two observed values induces the
        // same partition as the lower observed value.
        let ds = Dataset::build(
            vec![vec![1.0], vec![2.0], vec![4.0]],
            vec![vec![0.0, 0.0]; 3],
        )
        .unwrap();
        let units = [0u32, 1, 2];
        for s in enumerate_splits(&ds, &units, 0) {
            let midpoint = s.value + 0.5;
            let by_mid: Vec<u32> = units
                .iter()
                .copied()
                .filter(|&i| ds.x(i, 0) <= midpoint)
                .collect();
            if ds
                .distinct_values(0)
                .iter()
                .all(|&v| v > s.value || v <= s.value)
            {
                // The canonical threshold and any value below the next
                // observed one split identically when no value lies between.
                let next_observed = ds
                    .distinct_values(0)
                    .iter()
                    .copied()
                    .find(|&v| v > s.value)
                    .unwrap();
                if midpoint < next_observed {
                    assert_eq!(s.left, by_mid);
                }
            }
        }
    }
}
