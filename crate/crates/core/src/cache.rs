//! Cache of solved subproblems, keyed by the exact unit subset and depth.
//!
//! Keys store the full sorted index list rather than a hash, so a lookup can
//! never silently collide and return a tree for a different subset. There is
//! no eviction: once the entry counter reaches capacity, further inserts are
//! dropped.

use std::collections::HashMap;

use crate::tree::PolicyTree;

/// Maximum number of cached trees.
pub const CACHE_CAPACITY: usize = 1_000_000;

/// Exact cache key: depth plus the full sorted unit-index list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    depth: u32,
    units: Box<[u32]>,
}

impl CacheKey {
    pub fn new(depth: usize, units: &[u32]) -> Self {
        debug_assert!(units.windows(2).all(|w| w[0] < w[1]));
        CacheKey {
            depth: depth as u32,
            units: units.into(),
        }
    }
}

/// A solved subproblem: the optimal subtree, its comparison value, and
/// whether that value equals the subset's maximum-reward sum.
#[derive(Debug, Clone)]
pub struct CacheEntry {
    pub tree: PolicyTree,
    pub value: f64,
    pub perfect: bool,
}

/// Map from (unit subset, depth) to the optimal subtree, capped in size.
#[derive(Debug)]
pub struct SubtreeCache {
    map: HashMap<CacheKey, CacheEntry>,
    capacity: usize,
}

impl Default for SubtreeCache {
    fn default() -> Self {
        Self::new(CACHE_CAPACITY)
    }
}

impl SubtreeCache {
    pub fn new(capacity: usize) -> Self {
        SubtreeCache {
            map: HashMap::new(),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Exact-match lookup on (depth, full index list).
    pub fn lookup(&self, depth: usize, units: &[u32]) -> Option<&CacheEntry> {
        self.map.get(&CacheKey::new(depth, units))
    }

    /// Inserts unless the cache is full; a drop is silent and permanent.
    pub fn insert(&mut self, depth: usize, units: &[u32], entry: CacheEntry) {
        if self.map.len() < self.capacity {
            self.map.insert(CacheKey::new(depth, units), entry);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(value: f64) -> CacheEntry {
        CacheEntry {
            tree: PolicyTree::leaf(0),
            value,
            perfect: false,
        }
    }

    #[test]
    fn lookup_is_exact_on_the_sorted_index_list() {
        let mut cache = SubtreeCache::new(10);
        cache.insert(2, &[1, 3, 5], entry(7.0));
        assert!(cache.lookup(2, &[1, 3, 5]).is_some());
        assert!(cache.lookup(2, &[1, 3]).is_none());
        assert!(cache.lookup(2, &[1, 3, 6]).is_none());
    }

    #[test]
    fn depth_is_part_of_the_key() {
        let mut cache = SubtreeCache::new(10);
        cache.insert(2, &[0, 1], entry(1.0));
        assert!(cache.lookup(2, &[0, 1]).is_some());
        assert!(cache.lookup(1, &[0, 1]).is_none());
    }

    #[test]
    fn inserts_are_dropped_at_capacity() {
        let mut cache = SubtreeCache::new(2);
        cache.insert(1, &[0], entry(1.0));
        cache.insert(1, &[1], entry(2.0));
        cache.insert(1, &[2], entry(3.0));
        assert_eq!(cache.len(), 2);
        assert!(cache.lookup(1, &[2]).is_none());
        assert!(cache.lookup(1, &[0]).is_some());
    }
}
