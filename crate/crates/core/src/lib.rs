//! Exact depth-limited policy tree learning.
//!
//! Given an `n x p` covariate matrix and an `n x m` reward matrix (one
//! column per action), the searches here find a binary threshold tree of
//! bounded depth that maximizes the total reward of its action assignments.
//! Two strategies share one contract:
//!
//! * [`search_exhaustive`] — the plain recursion over every split; slow but
//!   simple, the correctness reference.
//! * [`BoundedSearch`] — the production search: incumbent pruning via cheap
//!   transfer bounds, subtree caching keyed on exact unit subsets,
//!   perfect-tree early exit, and a choice of unit-set machinery
//!   (per-covariate sorted vectors or a single re-sorted set with
//!   counting/radix sorts).
//!
//! Both return bit-identical optimal rewards on every instance; all reward
//! sums run in ascending unit-index order so results are reproducible
//! across strategies and platforms. All indices are 0-based, including in
//! serialized output.
//!
//! The [`simulation`] module reproduces a synthetic policy-learning pipeline
//! (randomized treatments, doubly-robust scores from known nuisances) for
//! benchmarks and statistical checks.

pub mod bounded;
pub mod cache;
pub mod dataset;
pub mod error;
pub mod exhaustive;
pub mod io;
pub mod sets;
pub mod simulation;
pub mod tree;

pub use bounded::{
    is_perfect, search_bounded, transfer_bound, BoundedSearch, SearchConfig, SearchStats,
};
pub use cache::{SubtreeCache, CACHE_CAPACITY};
pub use dataset::Dataset;
pub use error::{CsvError, DataError, SearchError, SimError, TreeParseError};
pub use exhaustive::{enumerate_splits, search_depth1_fast, search_exhaustive};
pub use sets::{choose_method, Method, MethodChoice, DISTINCT_VALUE_THRESHOLD};
pub use simulation::{
    generate, oracle_scores, policy_value, rmse, CovariateKind, SimConfig, SimDataset,
};
pub use tree::PolicyTree;
