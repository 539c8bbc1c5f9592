//! The two physical unit-subset representations used during split
//! enumeration, plus the heuristic that chooses between them.
//!
//! Method 1 keeps one sorted vector per covariate and moves units between a
//! left and a right family as the splitting value increases. Method 2 keeps
//! a single set and re-sorts it just before sweeping each covariate, using
//! counting sort when the covariate has few distinct values, radix sort on a
//! monotone integer encoding of the float values otherwise, and a direct
//! two-bucket pass for binary covariates.

use crate::dataset::Dataset;
use crate::error::AdvanceError;

/// Covariates with fewer distinct values than this are counting-sorted;
/// the rest are radix-sorted. The same cutoff (inclusive) feeds the
/// method-choice heuristic.
pub const DISTINCT_VALUE_THRESHOLD: usize = 30;

/// Which unit-set representation a search uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// One sorted vector per covariate, advanced as thresholds grow.
    Method1,
    /// A single set, re-sorted per covariate sweep.
    Method2,
}

/// Method selection: automatic (data-driven) or forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Force(Method),
}

impl MethodChoice {
    pub fn resolve(self, ds: &Dataset) -> Method {
        match self {
            MethodChoice::Auto => choose_method(ds),
            MethodChoice::Force(m) => m,
        }
    }
}

/// Picks Method 2 when a strict majority of covariates have at most
/// [`DISTINCT_VALUE_THRESHOLD`] distinct values, Method 1 otherwise.
pub fn choose_method(ds: &Dataset) -> Method {
    let low = ds
        .distinct_counts()
        .iter()
        .filter(|&&k| k <= DISTINCT_VALUE_THRESHOLD)
        .count();
    if 2 * low > ds.num_covariates() {
        Method::Method2
    } else {
        Method::Method1
    }
}

/// Order-preserving integer encoding of a finite f64: unsigned comparison of
/// encodings matches float comparison.
#[inline]
pub(crate) fn encode_f64(v: f64) -> u64 {
    let bits = v.to_bits();
    if bits >> 63 == 1 {
        !bits
    } else {
        bits ^ (1 << 63)
    }
}

/// Scratch buffers shared by the sorting routines, allocated once per search.
#[derive(Debug, Default)]
pub struct SortScratch {
    keys: Vec<u64>,
    keys_aux: Vec<u64>,
    units_aux: Vec<u32>,
    counts: Vec<u32>,
}

impl SortScratch {
    pub fn with_capacity(n: usize) -> Self {
        SortScratch {
            keys: Vec::with_capacity(n),
            keys_aux: Vec::with_capacity(n),
            units_aux: Vec::with_capacity(n),
            counts: vec![0; DISTINCT_VALUE_THRESHOLD.max(256)],
        }
    }
}

/// Method 2: a single subset of unit indices.
///
/// The membership never changes after construction; only the iteration order
/// does. `master` keeps the units in ascending index order so every sort is
/// computed from the same canonical order, making the result independent of
/// any previous sort.
#[derive(Debug, Clone)]
pub struct SingleSet {
    master: Vec<u32>,
    units: Vec<u32>,
    sorted_by: Option<usize>,
}

impl SingleSet {
    /// `units` must be distinct and ascending.
    pub fn new(units: Vec<u32>) -> Self {
        debug_assert!(units.windows(2).all(|w| w[0] < w[1]));
        SingleSet {
            units: units.clone(),
            master: units,
            sorted_by: None,
        }
    }

    pub fn len(&self) -> usize {
        self.master.len()
    }

    pub fn is_empty(&self) -> bool {
        self.master.is_empty()
    }

    /// Current iteration order.
    pub fn units(&self) -> &[u32] {
        &self.units
    }

    /// Covariate the set is currently sorted by, if any.
    pub fn sorted_by(&self) -> Option<usize> {
        self.sorted_by
    }

    /// Orders the set by `(x[i][j], i)`. Counting sort when covariate `j`
    /// has fewer than [`DISTINCT_VALUE_THRESHOLD`] distinct values, radix
    /// sort otherwise. Both paths are stable with respect to unit index and
    /// produce identical orderings; the choice is performance only.
    pub fn sort_by_covariate(&mut self, ds: &Dataset, j: usize, scratch: &mut SortScratch) {
        sort_units_by_covariate(&self.master, ds, j, &mut self.units, scratch);
        self.sorted_by = Some(j);
    }
}

/// Writes `master` (ascending unit index) into `out` ordered by
/// `(x[i][j], i)`, picking counting or radix sort from the covariate's
/// global distinct-value count.
pub(crate) fn sort_units_by_covariate(
    master: &[u32],
    ds: &Dataset,
    j: usize,
    out: &mut Vec<u32>,
    scratch: &mut SortScratch,
) {
    if ds.distinct_count(j) < DISTINCT_VALUE_THRESHOLD {
        counting_sort_by_rank(master, ds, j, out, scratch);
    } else {
        radix_sort_by_value(master, ds, j, out, scratch);
    }
}

/// Stable counting sort of `master` (ascending unit index) by the dense rank
/// of covariate `j`, written into `out`.
fn counting_sort_by_rank(
    master: &[u32],
    ds: &Dataset,
    j: usize,
    out: &mut Vec<u32>,
    scratch: &mut SortScratch,
) {
    let k = ds.distinct_count(j);
    let counts = &mut scratch.counts[..k];
    counts.fill(0);
    for &i in master {
        counts[ds.rank(i, j) as usize] += 1;
    }
    let mut offset = 0u32;
    for c in counts.iter_mut() {
        let next = offset + *c;
        *c = offset;
        offset = next;
    }
    out.clear();
    out.resize(master.len(), 0);
    for &i in master {
        let r = ds.rank(i, j) as usize;
        out[counts[r] as usize] = i;
        counts[r] += 1;
    }
}

/// Stable LSD radix sort of `master` (ascending unit index) by the monotone
/// u64 encoding of covariate `j`, 8 bits per pass, written into `out`.
fn radix_sort_by_value(
    master: &[u32],
    ds: &Dataset,
    j: usize,
    out: &mut Vec<u32>,
    scratch: &mut SortScratch,
) {
    let n = master.len();
    out.clear();
    out.extend_from_slice(master);
    scratch.keys.clear();
    scratch
        .keys
        .extend(master.iter().map(|&i| encode_f64(ds.x(i, j))));
    scratch.keys_aux.resize(n, 0);
    scratch.units_aux.resize(n, 0);

    let counts = &mut scratch.counts[..256];
    for pass in 0..8 {
        let shift = pass * 8;
        counts.fill(0);
        for &k in scratch.keys.iter() {
            counts[((k >> shift) & 0xff) as usize] += 1;
        }
        // Skip passes where every key shares the byte.
        if counts.iter().any(|&c| c as usize == n) {
            continue;
        }
        let mut offset = 0u32;
        for c in counts.iter_mut() {
            let next = offset + *c;
            *c = offset;
            offset = next;
        }
        for (&k, &u) in scratch.keys.iter().zip(out.iter()) {
            let b = ((k >> shift) & 0xff) as usize;
            let dst = counts[b] as usize;
            scratch.keys_aux[dst] = k;
            scratch.units_aux[dst] = u;
            counts[b] += 1;
        }
        std::mem::swap(&mut scratch.keys, &mut scratch.keys_aux);
        std::mem::swap(out, &mut scratch.units_aux);
    }
}

/// Splits a set on a covariate with two distinct values in one pass, no sort:
/// units whose value equals the subset minimum go left, the rest right. Both
/// outputs keep ascending index order. Works for any distinct-value count
/// (it degrades to a min-scan plus partition), but is intended for binary
/// covariates.
pub fn binary_partition(set: &SingleSet, ds: &Dataset, j: usize) -> (Vec<u32>, Vec<u32>) {
    let master = &set.master;
    let mut min = f64::INFINITY;
    for &i in master {
        let v = ds.x(i, j);
        if v < min {
            min = v;
        }
    }
    let mut left = Vec::with_capacity(master.len());
    let mut right = Vec::new();
    for &i in master {
        if ds.x(i, j) == min {
            left.push(i);
        } else {
            right.push(i);
        }
    }
    (left, right)
}

/// Method 1: one vector of unit indices per covariate, vector `j` sorted by
/// `(x[i][j], i)`.
#[derive(Debug, Clone)]
pub struct SortedSetFamily {
    vectors: Vec<Vec<u32>>,
}

impl SortedSetFamily {
    /// Builds the family from units in ascending index order with one
    /// comparison sort per covariate.
    pub fn build(ds: &Dataset, units: &[u32]) -> Self {
        let p = ds.num_covariates();
        let mut vectors = Vec::with_capacity(p);
        for j in 0..p {
            let mut v = units.to_vec();
            v.sort_unstable_by(|&a, &b| {
                ds.x(a, j).partial_cmp(&ds.x(b, j)).unwrap().then(a.cmp(&b))
            });
            vectors.push(v);
        }
        SortedSetFamily { vectors }
    }

    pub fn empty(p: usize) -> Self {
        SortedSetFamily {
            vectors: vec![Vec::new(); p],
        }
    }

    pub fn len(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors[0].is_empty()
    }

    /// Units sorted by covariate `j`.
    pub fn vector(&self, j: usize) -> &[u32] {
        &self.vectors[j]
    }

    /// Derives the family of a child subset by filtering every vector;
    /// sorted order is inherited, no re-sort.
    pub fn filter(&self, mut keep: impl FnMut(u32) -> bool) -> Self {
        SortedSetFamily {
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().copied().filter(|&i| keep(i)).collect())
                .collect(),
        }
    }
}

/// An in-progress split of one family: units migrate from the right family
/// to the left as the threshold on `covariate` increases.
#[derive(Debug)]
pub struct FamilySplit {
    covariate: usize,
    threshold: Option<f64>,
    left: SortedSetFamily,
    right: SortedSetFamily,
    moved: Vec<u32>,
    scratch: Vec<u32>,
}

impl FamilySplit {
    /// Starts with everything on the right.
    pub fn begin(parent: &SortedSetFamily, covariate: usize) -> Self {
        FamilySplit {
            covariate,
            threshold: None,
            left: SortedSetFamily::empty(parent.vectors.len()),
            right: parent.clone(),
            moved: Vec::new(),
            scratch: Vec::new(),
        }
    }

    pub fn covariate(&self) -> usize {
        self.covariate
    }

    pub fn left(&self) -> &SortedSetFamily {
        &self.left
    }

    pub fn right(&self) -> &SortedSetFamily {
        &self.right
    }

    /// Raises the threshold to `new_threshold`, moving every unit with
    /// `x[i][covariate] <= new_threshold` from the right family to the left
    /// and keeping all `2p` vectors sorted. Returns the moved units in
    /// covariate order.
    pub fn advance(&mut self, ds: &Dataset, new_threshold: f64) -> Result<&[u32], AdvanceError> {
        if let Some(current) = self.threshold {
            if new_threshold <= current {
                return Err(AdvanceError::ThresholdNotIncreasing {
                    current,
                    new: new_threshold,
                });
            }
        }
        let j = self.covariate;

        // Vector j is sorted by the sweep covariate, so the movers are a
        // prefix of the right vector.
        let cut = self.right.vectors[j].partition_point(|&i| ds.x(i, j) <= new_threshold);
        self.moved.clear();
        self.moved.extend(self.right.vectors[j].drain(..cut));
        self.left.vectors[j].extend_from_slice(&self.moved);

        // Every other vector needs a stable extract-and-merge.
        if cut > 0 {
            for k in 0..self.left.vectors.len() {
                if k == j {
                    continue;
                }
                let right_k = &mut self.right.vectors[k];
                self.scratch.clear();
                let mut kept = 0;
                for idx in 0..right_k.len() {
                    let i = right_k[idx];
                    if ds.x(i, j) <= new_threshold {
                        self.scratch.push(i);
                    } else {
                        right_k[kept] = i;
                        kept += 1;
                    }
                }
                right_k.truncate(kept);
                merge_sorted_by(&mut self.left.vectors[k], &self.scratch, |a, b| {
                    let va = ds.x(a, k);
                    let vb = ds.x(b, k);
                    va < vb || (va == vb && a < b)
                });
            }
        }

        self.threshold = Some(new_threshold);
        Ok(&self.moved)
    }
}

/// Merges sorted `incoming` into sorted `dst` under `before` (strict order).
fn merge_sorted_by(dst: &mut Vec<u32>, incoming: &[u32], mut before: impl FnMut(u32, u32) -> bool) {
    if incoming.is_empty() {
        return;
    }
    if dst.is_empty() || before(*dst.last().unwrap(), incoming[0]) {
        dst.extend_from_slice(incoming);
        return;
    }
    let mut merged = Vec::with_capacity(dst.len() + incoming.len());
    let mut a = dst.iter().copied().peekable();
    let mut b = incoming.iter().copied().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(&x), Some(&y)) => {
                if before(y, x) {
                    merged.push(y);
                    b.next();
                } else {
                    merged.push(x);
                    a.next();
                }
            }
            (Some(_), None) => {
                merged.extend(a);
                break;
            }
            (None, Some(_)) => {
                merged.extend(b);
                break;
            }
            (None, None) => break,
        }
    }
    *dst = merged;
}
