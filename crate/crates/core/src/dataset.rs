//! Problem data: covariate and reward matrices plus the precomputed
//! per-unit reward extrema and per-covariate value ranks that the search
//! strategies rely on.

use crate::error::{DataError, SearchError};
use crate::tree::PolicyTree;

/// Immutable training data for policy tree search.
///
/// Covariates form an `n x p` matrix and rewards an `n x m` matrix with one
/// column per action. All indices are 0-based. Construction validates shapes,
/// rejects non-finite entries, and precomputes:
///
/// * per-unit reward maxima and minima (used by pruning bounds and the
///   perfect-tree test),
/// * per-covariate distinct-value counts and dense ranks (used to pick a
///   unit-set method and to drive counting sort on arbitrary reals).
///
/// A `Dataset` is immutable after construction and safe to share across
/// concurrent searches.
#[derive(Debug, Clone)]
pub struct Dataset {
    n: usize,
    p: usize,
    m: usize,
    /// Row-major `n x p`.
    covariates: Vec<f64>,
    /// Row-major `n x m`.
    rewards: Vec<f64>,
    unit_max_reward: Vec<f64>,
    unit_min_reward: Vec<f64>,
    distinct_counts: Vec<usize>,
    /// Column-major `p x n`: `ranks[j * n + i]` is the dense rank of
    /// `x(i, j)` among the distinct values of covariate `j`.
    ranks: Vec<u32>,
    /// Distinct values of each covariate, ascending.
    distinct_values: Vec<Vec<f64>>,
}

impl Dataset {
    /// Validates and assembles a dataset from row-wise matrices.
    pub fn build(covariates: Vec<Vec<f64>>, rewards: Vec<Vec<f64>>) -> Result<Self, DataError> {
        let n = covariates.len();
        if n == 0 {
            return Err(DataError::Empty);
        }
        if n != rewards.len() {
            return Err(DataError::RowCountMismatch {
                covariate_rows: n,
                reward_rows: rewards.len(),
            });
        }
        if n > u32::MAX as usize {
            return Err(DataError::TooManyRows(n));
        }
        let p = covariates[0].len();
        if p == 0 {
            return Err(DataError::NoCovariates);
        }
        let m = rewards[0].len();
        if m < 2 {
            return Err(DataError::TooFewActions(m));
        }

        let mut x = Vec::with_capacity(n * p);
        for (i, row) in covariates.iter().enumerate() {
            if row.len() != p {
                return Err(DataError::RaggedRow {
                    matrix: "covariates",
                    row: i,
                    expected: p,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(DataError::NonFinite {
                        matrix: "covariates",
                        row: i,
                        col: j,
                    });
                }
                // Canonicalize -0.0 so every sort path orders ties identically.
                x.push(if v == 0.0 { 0.0 } else { v });
            }
        }

        let mut r = Vec::with_capacity(n * m);
        for (i, row) in rewards.iter().enumerate() {
            if row.len() != m {
                return Err(DataError::RaggedRow {
                    matrix: "rewards",
                    row: i,
                    expected: m,
                    got: row.len(),
                });
            }
            for (a, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(DataError::NonFinite {
                        matrix: "rewards",
                        row: i,
                        col: a,
                    });
                }
                r.push(v);
            }
        }

        let mut unit_max = Vec::with_capacity(n);
        let mut unit_min = Vec::with_capacity(n);
        for i in 0..n {
            let row = &r[i * m..(i + 1) * m];
            let mut max = row[0];
            let mut min = row[0];
            for &v in &row[1..] {
                if v > max {
                    max = v;
                }
                if v < min {
                    min = v;
                }
            }
            unit_max.push(max);
            unit_min.push(min);
        }

        // Dense ranks per covariate: sort (value, unit) once per column.
        let mut ranks = vec![0u32; p * n];
        let mut distinct_counts = Vec::with_capacity(p);
        let mut distinct_values = Vec::with_capacity(p);
        let mut order: Vec<u32> = (0..n as u32).collect();
        for j in 0..p {
            order.sort_unstable_by(|&a, &b| {
                let va = x[a as usize * p + j];
                let vb = x[b as usize * p + j];
                va.partial_cmp(&vb).unwrap().then(a.cmp(&b))
            });
            let mut values = Vec::new();
            let mut rank = 0u32;
            let mut prev = f64::NAN;
            for &i in &order {
                let v = x[i as usize * p + j];
                if values.is_empty() || v != prev {
                    values.push(v);
                    rank = values.len() as u32 - 1;
                    prev = v;
                }
                ranks[j * n + i as usize] = rank;
            }
            distinct_counts.push(values.len());
            distinct_values.push(values);
        }

        Ok(Dataset {
            n,
            p,
            m,
            covariates: x,
            rewards: r,
            unit_max_reward: unit_max,
            unit_min_reward: unit_min,
            distinct_counts,
            ranks,
            distinct_values,
        })
    }

    pub fn num_units(&self) -> usize {
        self.n
    }

    pub fn num_covariates(&self) -> usize {
        self.p
    }

    pub fn num_actions(&self) -> usize {
        self.m
    }

    /// Value of covariate `j` for unit `i`.
    #[inline]
    pub fn x(&self, i: u32, j: usize) -> f64 {
        self.covariates[i as usize * self.p + j]
    }

    /// Covariate row for unit `i`.
    #[inline]
    pub fn x_row(&self, i: u32) -> &[f64] {
        let i = i as usize;
        &self.covariates[i * self.p..(i + 1) * self.p]
    }

    /// Reward for unit `i` under action `a`.
    #[inline]
    pub fn reward(&self, i: u32, a: usize) -> f64 {
        self.rewards[i as usize * self.m + a]
    }

    #[inline]
    pub fn unit_max_reward(&self, i: u32) -> f64 {
        self.unit_max_reward[i as usize]
    }

    #[inline]
    pub fn unit_min_reward(&self, i: u32) -> f64 {
        self.unit_min_reward[i as usize]
    }

    /// Best-case minus worst-case reward for unit `i`.
    #[inline]
    pub fn reward_span(&self, i: u32) -> f64 {
        self.unit_max_reward[i as usize] - self.unit_min_reward[i as usize]
    }

    /// Number of distinct values of covariate `j` over the whole dataset.
    #[inline]
    pub fn distinct_count(&self, j: usize) -> usize {
        self.distinct_counts[j]
    }

    pub fn distinct_counts(&self) -> &[usize] {
        &self.distinct_counts
    }

    /// Distinct values of covariate `j`, ascending.
    pub fn distinct_values(&self, j: usize) -> &[f64] {
        &self.distinct_values[j]
    }

    /// Dense rank of `x(i, j)` among the distinct values of covariate `j`.
    #[inline]
    pub fn rank(&self, i: u32, j: usize) -> u32 {
        self.ranks[j * self.n + i as usize]
    }

    /// All unit indices, ascending.
    pub fn all_units(&self) -> Vec<u32> {
        (0..self.n as u32).collect()
    }

    /// Checks that every index is in range; the searches assume this.
    pub fn check_units(&self, units: &[u32]) -> Result<(), SearchError> {
        if units.is_empty() {
            return Err(SearchError::EmptyUnitSet);
        }
        for &i in units {
            if i as usize >= self.n {
                return Err(SearchError::UnitOutOfRange(i, self.n));
            }
        }
        Ok(())
    }

    /// Best single action over `units`: the action maximizing the summed
    /// reward, ties broken toward the smaller action index. Sums accumulate
    /// in the order the units are given; callers pass ascending unit index
    /// so values are reproducible across strategies.
    pub fn best_leaf(&self, units: &[u32]) -> Result<(usize, f64), SearchError> {
        if units.is_empty() {
            return Err(SearchError::EmptyUnitSet);
        }
        let mut sums = vec![0.0f64; self.m];
        self.accumulate_action_sums(units, &mut sums);
        Ok(best_action(&sums))
    }

    /// Adds each unit's per-action rewards into `sums` (length `m`).
    pub(crate) fn accumulate_action_sums(&self, units: &[u32], sums: &mut [f64]) {
        for &i in units {
            let row = &self.rewards[i as usize * self.m..(i as usize + 1) * self.m];
            for (s, &v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
    }

    /// Total reward of assigning actions with `tree`, summed over `units`
    /// in the order given (ascending unit index for determinism).
    pub fn tree_reward(&self, tree: &PolicyTree, units: &[u32]) -> f64 {
        let mut total = 0.0;
        for &i in units {
            let a = tree.assign_action(self.x_row(i));
            total += self.reward(i, a);
        }
        total
    }

    /// Sum of per-unit maximum rewards over `units`, in the order given.
    /// No tree of any depth can beat this; a tree that reaches it is perfect.
    pub fn max_reward_sum(&self, units: &[u32]) -> f64 {
        let mut total = 0.0;
        for &i in units {
            total += self.unit_max_reward[i as usize];
        }
        total
    }
}

/// Argmax over per-action sums, ties toward the smaller action index.
pub(crate) fn best_action(sums: &[f64]) -> (usize, f64) {
    let mut best = 0;
    let mut best_sum = sums[0];
    for (a, &s) in sums.iter().enumerate().skip(1) {
        if s > best_sum {
            best = a;
            best_sum = s;
        }
    }
    (best, best_sum)
}
