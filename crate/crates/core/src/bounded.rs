//! The accelerated search: incumbent-driven pruning with cheap transfer
//! bounds, subtree caching, perfect-tree early exit, and workspaces
//! allocated once per top-level search.
//!
//! The search returns exactly the same reward as the brute-force recursion
//! on every instance; only the tree may differ when several trees tie.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cache::{CacheEntry, SubtreeCache, CACHE_CAPACITY};
use crate::dataset::{best_action, Dataset};
use crate::error::SearchError;
use crate::exhaustive::Solved;
use crate::sets::{
    sort_units_by_covariate, FamilySplit, Method, MethodChoice, SortScratch, SortedSetFamily,
};
use crate::tree::PolicyTree;

/// Instrumentation counters for one or more searches.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    /// Subproblems solved (cache hits excluded).
    pub subproblems_solved: u64,
    /// Candidate splits whose children were actually solved.
    pub splits_evaluated: u64,
    /// Candidate splits skipped because their upper bound could not beat
    /// the incumbent.
    pub bound_prunes: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
    /// Subproblems that stopped early because the incumbent reached the
    /// subset's maximum-reward sum.
    pub perfect_exits: u64,
    /// Wall-clock time spent inside `run`, excluding I/O.
    #[serde(rename = "elapsed_seconds", serialize_with = "serialize_elapsed")]
    pub elapsed: Duration,
}

fn serialize_elapsed<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    // Seconds with millisecond precision.
    s.serialize_f64((d.as_millis() as f64) / 1000.0)
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.subproblems_solved += other.subproblems_solved;
        self.splits_evaluated += other.splits_evaluated;
        self.bound_prunes += other.bound_prunes;
        self.cache_hits += other.cache_hits;
        self.cache_misses += other.cache_misses;
        self.perfect_exits += other.perfect_exits;
        self.elapsed += other.elapsed;
    }
}

/// Upper bound on the optimal reward of a split derived from a previously
/// solved neighboring split: the old optimum plus the reward span of every
/// unit that changed sides.
///
/// With `moved_units` the units transferred from the right side to the left,
/// this bounds the new split's `R*_left + R*_right`; it stays valid when
/// `moved_units` is any superset of the units that changed sides in either
/// direction, since spans are non-negative.
pub fn transfer_bound(
    prev_left_opt: f64,
    prev_right_opt: f64,
    moved_units: &[u32],
    ds: &Dataset,
) -> f64 {
    let mut bound = prev_left_opt + prev_right_opt;
    for &i in moved_units {
        bound += ds.reward_span(i);
    }
    bound
}

/// True when `tree_reward` equals the sum of per-unit maximum rewards over
/// `units` (compared exactly under the fixed summation order): such a tree
/// is optimal at any depth.
pub fn is_perfect(tree_reward: f64, units: &[u32], ds: &Dataset) -> bool {
    tree_reward == ds.max_reward_sum(units)
}

/// Strategy toggles for a bounded search.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub method: MethodChoice,
    pub use_bounds: bool,
    pub use_cache: bool,
    pub cache_capacity: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            method: MethodChoice::Auto,
            use_bounds: true,
            use_cache: true,
            cache_capacity: CACHE_CAPACITY,
        }
    }
}

/// The last fully solved split within a subproblem; anchors transfer bounds
/// for candidates that follow it. The threshold is kept as the dense rank of
/// the splitting value, so side membership tests read the column-major rank
/// matrix instead of the covariate matrix.
struct SolvedAnchor {
    covariate: usize,
    threshold_rank: u32,
    left_value: f64,
    right_value: f64,
}

/// Span sum over units whose side differs between a solved split and a new
/// candidate split. Stops early once the sum exceeds `budget` (the bound can
/// no longer fire) and reports infinity, which keeps later bounds built on
/// top of it sound: an overestimate can only suppress pruning.
fn cross_anchor_span(
    ds: &Dataset,
    units: &[u32],
    anchor: &SolvedAnchor,
    covariate: usize,
    threshold_rank: u32,
    budget: f64,
) -> f64 {
    let mut base = 0.0;
    for &i in units {
        let was_left = ds.rank(i, anchor.covariate) <= anchor.threshold_rank;
        let now_left = ds.rank(i, covariate) <= threshold_rank;
        if was_left != now_left {
            base += ds.reward_span(i);
            if base > budget {
                return f64::INFINITY;
            }
        }
    }
    base
}

/// Preallocated buffers reused across the whole search.
struct Workspace {
    pool: Vec<Vec<u32>>,
    action_sums: Vec<f64>,
    initial_sums: Vec<f64>,
    left_sums: Vec<f64>,
    right_sums: Vec<f64>,
    pairs: Vec<(f64, u32)>,
    thresholds: Vec<(f64, u32)>,
    sort: SortScratch,
    unit_capacity: usize,
}

impl Workspace {
    fn new(n: usize, m: usize) -> Self {
        Workspace {
            pool: Vec::new(),
            action_sums: vec![0.0; m],
            initial_sums: vec![0.0; m],
            left_sums: vec![0.0; m],
            right_sums: vec![0.0; m],
            pairs: Vec::with_capacity(n),
            thresholds: Vec::new(),
            sort: SortScratch::with_capacity(n),
            unit_capacity: n,
        }
    }

    fn take_buf(&mut self) -> Vec<u32> {
        self.pool
            .pop()
            .unwrap_or_else(|| Vec::with_capacity(self.unit_capacity))
    }

    fn put_buf(&mut self, mut buf: Vec<u32>) {
        buf.clear();
        self.pool.push(buf);
    }
}

/// One pruned candidate split, recorded for soundness replay: the oracle
/// optimum of the skipped split can never exceed the incumbent that stood
/// when it was pruned.
#[derive(Debug, Clone)]
pub struct PruneRecord {
    pub units: Vec<u32>,
    pub depth: usize,
    pub covariate: usize,
    pub threshold: f64,
    pub incumbent: f64,
}

/// A reusable search engine over one dataset. Owns its cache, stats, and
/// workspaces; a single search runs single-threaded, while independent
/// searches over the same `Dataset` may run concurrently.
pub struct BoundedSearch<'a> {
    ds: &'a Dataset,
    method: Method,
    use_bounds: bool,
    use_cache: bool,
    pub cache: SubtreeCache,
    pub stats: SearchStats,
    /// Set to `Some` before `run` to capture every pruned split for replay.
    pub prune_log: Option<Vec<PruneRecord>>,
    ws: Workspace,
}

impl<'a> BoundedSearch<'a> {
    pub fn new(ds: &'a Dataset, config: SearchConfig) -> Self {
        BoundedSearch {
            ds,
            method: config.method.resolve(ds),
            use_bounds: config.use_bounds,
            use_cache: config.use_cache,
            cache: SubtreeCache::new(config.cache_capacity),
            stats: SearchStats::default(),
            prune_log: None,
            ws: Workspace::new(ds.num_units(), ds.num_actions()),
        }
    }

    fn record_prune(
        &mut self,
        units: &[u32],
        depth: usize,
        covariate: usize,
        threshold: f64,
        incumbent: f64,
    ) {
        self.stats.bound_prunes += 1;
        if let Some(log) = &mut self.prune_log {
            log.push(PruneRecord {
                units: units.to_vec(),
                depth,
                covariate,
                threshold,
                incumbent,
            });
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Finds an optimal tree of depth at most `depth` for `units`.
    ///
    /// The returned reward is the tree's reward recomputed over the units in
    /// ascending index order, bit-identical to what `search_exhaustive`
    /// reports for the same subproblem.
    pub fn run(&mut self, units: &[u32], depth: usize) -> Result<(PolicyTree, f64), SearchError> {
        self.ds.check_units(units)?;
        let start = Instant::now();
        let mut sorted = units.to_vec();
        sorted.sort_unstable();
        let solved = self.solve(&sorted, depth, None);
        let reward = self.ds.tree_reward(&solved.tree, &sorted);
        self.stats.elapsed += start.elapsed();
        Ok((solved.tree, reward))
    }

    fn solve(&mut self, units: &[u32], depth: usize, family: Option<SortedSetFamily>) -> Solved {
        if self.use_cache && depth >= 1 {
            if let Some(entry) = self.cache.lookup(depth, units) {
                self.stats.cache_hits += 1;
                return Solved {
                    tree: entry.tree.clone(),
                    value: entry.value,
                    perfect: entry.perfect,
                };
            }
            self.stats.cache_misses += 1;
        }
        self.stats.subproblems_solved += 1;

        let perfect_sum = self.ds.max_reward_sum(units);
        let (leaf_action, leaf_value) = {
            let sums = &mut self.ws.action_sums;
            sums.fill(0.0);
            self.ds.accumulate_action_sums(units, sums);
            best_action(sums)
        };
        let mut result = Solved {
            tree: PolicyTree::leaf(leaf_action),
            value: leaf_value,
            perfect: leaf_value == perfect_sum,
        };

        if result.perfect {
            if depth > 0 {
                self.stats.perfect_exits += 1;
            }
        } else if depth == 1 {
            result = self.solve_depth1(units, result, perfect_sum);
        } else if depth >= 2 && units.len() >= 2 {
            result = match self.method {
                Method::Method2 => self.sweep_splits(units, depth, None, result, perfect_sum),
                Method::Method1 => {
                    let family = family.unwrap_or_else(|| SortedSetFamily::build(self.ds, units));
                    self.sweep_splits(units, depth, Some(family), result, perfect_sum)
                }
            };
        }

        if self.use_cache && depth >= 1 {
            self.cache.insert(
                depth,
                units,
                CacheEntry {
                    tree: result.tree.clone(),
                    value: result.value,
                    perfect: result.perfect,
                },
            );
        }
        result
    }

    /// Depth >= 2: sweep every covariate's thresholds in ascending order,
    /// solving each candidate split recursively unless a transfer bound shows
    /// it cannot beat the incumbent. With Method 1 a `FamilySplit` maintains
    /// the two sorted-vector families through the sweep and children inherit
    /// snapshots; with Method 2 the sweep order comes from re-sorting a
    /// single set per covariate.
    fn sweep_splits(
        &mut self,
        units: &[u32],
        depth: usize,
        family: Option<SortedSetFamily>,
        mut incumbent: Solved,
        perfect_sum: f64,
    ) -> Solved {
        let ds = self.ds;
        let p = ds.num_covariates();
        let mut last_solved: Option<SolvedAnchor> = None;
        let mut sweep = self.ws.take_buf();
        let mut left_buf = self.ws.take_buf();
        let mut right_buf = self.ws.take_buf();
        let mut thresholds = std::mem::take(&mut self.ws.thresholds);

        'sweeps: for j in 0..p {
            // Candidate thresholds: every distinct value except the maximum,
            // paired with its dense rank.
            thresholds.clear();
            match &family {
                Some(fam) => collect_thresholds(ds, fam.vector(j), j, &mut thresholds),
                None => {
                    sort_units_by_covariate(units, ds, j, &mut sweep, &mut self.ws.sort);
                    collect_thresholds(ds, &sweep, j, &mut thresholds);
                }
            }
            if thresholds.is_empty() {
                continue;
            }

            let mut family_split = family.as_ref().map(|fam| FamilySplit::begin(fam, j));
            // (anchor left+right value, accumulated moved-unit span).
            let mut sweep_anchor: Option<(f64, f64)> = None;
            let mut moved_cursor = 0usize;

            for &(v, v_rank) in thresholds.iter() {
                // Keep the set machinery current before any bound decision.
                let moved_span = match &mut family_split {
                    Some(fs) => {
                        let moved = fs.advance(ds, v).expect("thresholds ascend");
                        moved.iter().map(|&i| ds.reward_span(i)).sum::<f64>()
                    }
                    None => {
                        let start = moved_cursor;
                        while moved_cursor < sweep.len()
                            && ds.rank(sweep[moved_cursor], j) <= v_rank
                        {
                            moved_cursor += 1;
                        }
                        sweep[start..moved_cursor]
                            .iter()
                            .map(|&i| ds.reward_span(i))
                            .sum::<f64>()
                    }
                };

                if self.use_bounds {
                    match &mut sweep_anchor {
                        Some((_, accum)) => *accum += moved_span,
                        None => {
                            if let Some(anchor) = &last_solved {
                                // Seed this sweep's bound from the last solved
                                // split on another covariate: every unit whose
                                // side differs between the two partitions can
                                // contribute at most its reward span.
                                let budget =
                                    incumbent.value - (anchor.left_value + anchor.right_value);
                                let base = cross_anchor_span(ds, units, anchor, j, v_rank, budget);
                                sweep_anchor = Some((anchor.left_value + anchor.right_value, base));
                            }
                        }
                    }
                    if let Some((anchor_value, accum)) = sweep_anchor {
                        if anchor_value + accum <= incumbent.value {
                            self.record_prune(units, depth, j, v, incumbent.value);
                            continue;
                        }
                    }
                }

                left_buf.clear();
                right_buf.clear();
                for &i in units {
                    if ds.rank(i, j) <= v_rank {
                        left_buf.push(i);
                    } else {
                        right_buf.push(i);
                    }
                }
                self.stats.splits_evaluated += 1;

                let (left_family, right_family) = match (&family_split, depth >= 3) {
                    (Some(fs), true) => (Some(fs.left().clone()), Some(fs.right().clone())),
                    _ => (None, None),
                };
                let left = self.solve(&left_buf, depth - 1, left_family);
                let right = self.solve(&right_buf, depth - 1, right_family);

                let value = if left.perfect && right.perfect {
                    perfect_sum
                } else {
                    left.value + right.value
                };
                sweep_anchor = Some((left.value + right.value, 0.0));
                last_solved = Some(SolvedAnchor {
                    covariate: j,
                    threshold_rank: v_rank,
                    left_value: left.value,
                    right_value: right.value,
                });

                if value > incumbent.value {
                    incumbent = Solved {
                        tree: PolicyTree::split(j, v, left.tree, right.tree),
                        value,
                        perfect: value == perfect_sum,
                    };
                    if incumbent.perfect {
                        self.stats.perfect_exits += 1;
                        break 'sweeps;
                    }
                }
            }
        }

        self.ws.thresholds = thresholds;
        self.ws.put_buf(right_buf);
        self.ws.put_buf(left_buf);
        self.ws.put_buf(sweep);
        incumbent
    }

    /// Depth 1: per covariate, sort once and sweep thresholds with running
    /// per-action reward sums, with the same bound and perfection logic as
    /// the general sweep. The winner is recomputed from scratch so the
    /// returned value uses the canonical fixed-order sums.
    fn solve_depth1(&mut self, units: &[u32], leaf: Solved, perfect_sum: f64) -> Solved {
        let ds = self.ds;
        let p = ds.num_covariates();
        let m = ds.num_actions();

        {
            let init = &mut self.ws.initial_sums;
            init.fill(0.0);
            ds.accumulate_action_sums(units, init);
        }

        let mut sel_value = leaf.value;
        let mut sel_split: Option<(usize, f64)> = None;
        let mut last_solved: Option<SolvedAnchor> = None;
        let mut sweep = self.ws.take_buf();

        for j in 0..p {
            if ds.distinct_count(j) == 2 && self.method == Method::Method2 {
                // Binary fast path: one candidate, no sort. A branch-free
                // pass collects the low-value units in ascending index
                // order, then the sums accumulate exactly as the sorted
                // sweep would.
                let mut lows = self.ws.take_buf();
                lows.resize(units.len(), 0);
                let mut count = 0usize;
                for &i in units {
                    lows[count] = i;
                    count += (ds.rank(i, j) == 0) as usize;
                }
                lows.truncate(count);
                if count == 0 || count == units.len() {
                    self.ws.put_buf(lows);
                    continue;
                }
                if m == 2 {
                    let mut l0 = 0.0f64;
                    let mut l1 = 0.0f64;
                    let mut q0 = self.ws.initial_sums[0];
                    let mut q1 = self.ws.initial_sums[1];
                    for &i in &lows {
                        let r0 = ds.reward(i, 0);
                        let r1 = ds.reward(i, 1);
                        l0 += r0;
                        l1 += r1;
                        q0 -= r0;
                        q1 -= r1;
                    }
                    self.ws.left_sums[0] = l0;
                    self.ws.left_sums[1] = l1;
                    self.ws.right_sums[0] = q0;
                    self.ws.right_sums[1] = q1;
                } else {
                    let left_sums = &mut self.ws.left_sums;
                    let right_sums = &mut self.ws.right_sums;
                    left_sums.fill(0.0);
                    right_sums.copy_from_slice(&self.ws.initial_sums);
                    for &i in &lows {
                        for a in 0..m {
                            let r = ds.reward(i, a);
                            left_sums[a] += r;
                            right_sums[a] -= r;
                        }
                    }
                }
                self.ws.put_buf(lows);
                let v = ds.distinct_values(j)[0];
                if self.use_bounds {
                    if let Some(anchor) = &last_solved {
                        let anchor_value = anchor.left_value + anchor.right_value;
                        let base =
                            cross_anchor_span(ds, units, anchor, j, 0, sel_value - anchor_value);
                        if anchor_value + base <= sel_value {
                            self.record_prune(units, 1, j, v, sel_value);
                            continue;
                        }
                    }
                }
                self.stats.splits_evaluated += 1;
                let (_, lv) = best_action(&self.ws.left_sums);
                let (_, rv) = best_action(&self.ws.right_sums);
                last_solved = Some(SolvedAnchor {
                    covariate: j,
                    threshold_rank: 0,
                    left_value: lv,
                    right_value: rv,
                });
                let cand = lv + rv;
                if cand > sel_value {
                    sel_value = cand;
                    sel_split = Some((j, v));
                    if sel_value == perfect_sum {
                        if let Some(exit) = self.try_perfect_exit(units, j, v, perfect_sum) {
                            self.ws.put_buf(sweep);
                            return exit;
                        }
                    }
                }
                continue;
            }

            // General path: materialize the (value, index) order.
            match self.method {
                Method::Method2 => {
                    sort_units_by_covariate(units, ds, j, &mut sweep, &mut self.ws.sort);
                }
                Method::Method1 => {
                    let pairs = &mut self.ws.pairs;
                    pairs.clear();
                    pairs.extend(units.iter().map(|&i| (ds.x(i, j), i)));
                    pairs.sort_unstable_by(|a, b| {
                        a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1))
                    });
                    sweep.clear();
                    sweep.extend(pairs.iter().map(|&(_, i)| i));
                }
            }
            if sweep.is_empty() || ds.rank(sweep[0], j) == ds.rank(sweep[sweep.len() - 1], j) {
                continue;
            }

            {
                let left_sums = &mut self.ws.left_sums;
                let right_sums = &mut self.ws.right_sums;
                left_sums.fill(0.0);
                right_sums.copy_from_slice(&self.ws.initial_sums);
            }
            let mut sweep_anchor: Option<(f64, f64)> = None;
            let mut pos = 0;
            while pos < sweep.len() {
                let v_rank = ds.rank(sweep[pos], j);
                let mut end = pos + 1;
                while end < sweep.len() && ds.rank(sweep[end], j) == v_rank {
                    end += 1;
                }
                if end == sweep.len() {
                    break;
                }
                let v = ds.x(sweep[pos], j);
                let mut moved_span = 0.0;
                {
                    let left_sums = &mut self.ws.left_sums;
                    let right_sums = &mut self.ws.right_sums;
                    for &i in &sweep[pos..end] {
                        moved_span += ds.reward_span(i);
                        for a in 0..m {
                            let r = ds.reward(i, a);
                            left_sums[a] += r;
                            right_sums[a] -= r;
                        }
                    }
                }
                pos = end;

                if self.use_bounds {
                    match &mut sweep_anchor {
                        Some((_, accum)) => *accum += moved_span,
                        None => {
                            if let Some(anchor) = &last_solved {
                                let anchor_value = anchor.left_value + anchor.right_value;
                                let base = cross_anchor_span(
                                    ds,
                                    units,
                                    anchor,
                                    j,
                                    v_rank,
                                    sel_value - anchor_value,
                                );
                                sweep_anchor = Some((anchor_value, base));
                            }
                        }
                    }
                    if let Some((anchor_value, accum)) = sweep_anchor {
                        if anchor_value + accum <= sel_value {
                            self.record_prune(units, 1, j, v, sel_value);
                            continue;
                        }
                    }
                }

                self.stats.splits_evaluated += 1;
                let (_, lv) = best_action(&self.ws.left_sums);
                let (_, rv) = best_action(&self.ws.right_sums);
                sweep_anchor = Some((lv + rv, 0.0));
                last_solved = Some(SolvedAnchor {
                    covariate: j,
                    threshold_rank: v_rank,
                    left_value: lv,
                    right_value: rv,
                });
                let cand = lv + rv;
                if cand > sel_value {
                    sel_value = cand;
                    sel_split = Some((j, v));
                    if sel_value == perfect_sum {
                        if let Some(exit) = self.try_perfect_exit(units, j, v, perfect_sum) {
                            self.ws.put_buf(sweep);
                            return exit;
                        }
                    }
                }
            }
        }
        self.ws.put_buf(sweep);

        match sel_split {
            None => leaf,
            Some((j, v)) => {
                let solved = self.rescore_depth1_split(units, j, v, perfect_sum);
                if solved.value > leaf.value {
                    solved
                } else {
                    leaf
                }
            }
        }
    }

    /// Canonical re-evaluation of a depth-1 split: partition, per-side leaf
    /// sums in ascending index order, perfect override.
    fn rescore_depth1_split(
        &mut self,
        units: &[u32],
        j: usize,
        v: f64,
        perfect_sum: f64,
    ) -> Solved {
        let ds = self.ds;
        let mut left_buf = self.ws.take_buf();
        let mut right_buf = self.ws.take_buf();
        for &i in units {
            if ds.x(i, j) <= v {
                left_buf.push(i);
            } else {
                right_buf.push(i);
            }
        }
        let (la, lv) = {
            let sums = &mut self.ws.left_sums;
            sums.fill(0.0);
            ds.accumulate_action_sums(&left_buf, sums);
            best_action(sums)
        };
        let (ra, rv) = {
            let sums = &mut self.ws.right_sums;
            sums.fill(0.0);
            ds.accumulate_action_sums(&right_buf, sums);
            best_action(sums)
        };
        let left_perfect = lv == ds.max_reward_sum(&left_buf);
        let right_perfect = rv == ds.max_reward_sum(&right_buf);
        let value = if left_perfect && right_perfect {
            perfect_sum
        } else {
            lv + rv
        };
        self.ws.put_buf(right_buf);
        self.ws.put_buf(left_buf);
        Solved {
            tree: PolicyTree::split(j, v, PolicyTree::leaf(la), PolicyTree::leaf(ra)),
            value,
            perfect: value == perfect_sum,
        }
    }

    /// Confirms a perfect-looking depth-1 incumbent with the canonical sums
    /// before exiting early; the running sums can disagree in the last ulp.
    fn try_perfect_exit(
        &mut self,
        units: &[u32],
        j: usize,
        v: f64,
        perfect_sum: f64,
    ) -> Option<Solved> {
        let solved = self.rescore_depth1_split(units, j, v, perfect_sum);
        if solved.perfect {
            self.stats.perfect_exits += 1;
            Some(solved)
        } else {
            None
        }
    }
}

/// Distinct covariate values over `order` (sorted by that covariate) with
/// their dense ranks, excluding the maximum.
fn collect_thresholds(ds: &Dataset, order: &[u32], j: usize, out: &mut Vec<(f64, u32)>) {
    out.clear();
    let mut iter = order.iter();
    let Some(&first) = iter.next() else {
        return;
    };
    let mut prev = first;
    for &i in iter {
        if ds.rank(i, j) != ds.rank(prev, j) {
            out.push((ds.x(prev, j), ds.rank(prev, j)));
            prev = i;
        }
    }
}

/// Convenience entry point with the default configuration (automatic method
/// choice, bounds and cache enabled): runs one search against the supplied
/// cache and accumulates counters into `stats`.
pub fn search_bounded(
    ds: &Dataset,
    units: &[u32],
    depth: usize,
    cache: &mut SubtreeCache,
    stats: &mut SearchStats,
) -> Result<(PolicyTree, f64), SearchError> {
    let mut search = BoundedSearch::new(ds, SearchConfig::default());
    std::mem::swap(&mut search.cache, cache);
    let result = search.run(units, depth);
    std::mem::swap(&mut search.cache, cache);
    stats.merge(&search.stats);
    result
}
