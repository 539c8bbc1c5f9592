//! Property tests for the core invariants.

use policy_tree::io::{tree_from_json, tree_to_json};
use policy_tree::sets::{binary_partition, SingleSet, SortScratch};
use policy_tree::{enumerate_splits, Dataset, PolicyTree};
use proptest::prelude::*;

/// Small-integer reward matrices: float arithmetic on them is exact, so
/// additivity and shift properties hold bitwise.
fn integer_dataset() -> impl Strategy<Value = Dataset> {
    (2usize..12, 1usize..4, 2usize..4).prop_flat_map(|(n, p, m)| {
        let covariates = prop::collection::vec(prop::collection::vec(-4i8..=4, p..=p), n..=n);
        let rewards = prop::collection::vec(prop::collection::vec(-8i8..=8, m..=m), n..=n);
        (covariates, rewards).prop_map(|(xs, rs)| {
            Dataset::build(
                xs.into_iter()
                    .map(|row| row.into_iter().map(f64::from).collect())
                    .collect(),
                rs.into_iter()
                    .map(|row| row.into_iter().map(f64::from).collect())
                    .collect(),
            )
            .unwrap()
        })
    })
}

fn arbitrary_tree() -> impl Strategy<Value = PolicyTree> {
    let leaf = (0usize..5).prop_map(PolicyTree::leaf);
    leaf.prop_recursive(3, 24, 2, |inner| {
        (0usize..4, -10.0f64..10.0, inner.clone(), inner)
            .prop_map(|(j, v, l, r)| PolicyTree::split(j, v, l, r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tree_reward_is_additive_over_disjoint_sets(ds in integer_dataset(), tree in arbitrary_tree()) {
        let n = ds.num_units();
        let evens: Vec<u32> = (0..n as u32).filter(|i| i % 2 == 0).collect();
        let odds: Vec<u32> = (0..n as u32).filter(|i| i % 2 == 1).collect();
        let all: Vec<u32> = (0..n as u32).collect();
        // Clamp the tree to valid covariates by rebuilding out-of-range
        // splits as leaves.
        let tree = clamp(&tree, ds.num_covariates(), ds.num_actions());
        prop_assert_eq!(
            ds.tree_reward(&tree, &all),
            ds.tree_reward(&tree, &evens) + ds.tree_reward(&tree, &odds)
        );
    }

    #[test]
    fn best_leaf_never_beats_the_row_maxima(ds in integer_dataset()) {
        let units = ds.all_units();
        let (_, reward) = ds.best_leaf(&units).unwrap();
        let cap = ds.max_reward_sum(&units);
        prop_assert!(reward <= cap);
        // Equality holds exactly when one action is row-optimal everywhere.
        let exists_common_argmax = (0..ds.num_actions()).any(|a| {
            units.iter().all(|&i| ds.reward(i, a) == ds.unit_max_reward(i))
        });
        prop_assert_eq!(reward == cap, exists_common_argmax);
    }

    #[test]
    fn shifting_one_unit_shifts_best_leaf(ds in integer_dataset(), c in -16i8..=16) {
        let n = ds.num_units();
        let m = ds.num_actions();
        let p = ds.num_covariates();
        let c = f64::from(c);
        let units = ds.all_units();
        let (action, reward) = ds.best_leaf(&units).unwrap();

        let covariates: Vec<Vec<f64>> = (0..n).map(|i| ds.x_row(i as u32).to_vec()).collect();
        let mut rewards: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..m).map(|a| ds.reward(i as u32, a)).collect())
            .collect();
        for v in rewards[0].iter_mut() {
            *v += c;
        }
        let _ = p;
        let shifted = Dataset::build(covariates, rewards).unwrap();
        let (action2, reward2) = shifted.best_leaf(&units).unwrap();
        prop_assert_eq!(reward2, reward + c);
        prop_assert_eq!(action2, action);
    }

    #[test]
    fn sort_paths_agree_with_a_comparison_sort(
        values in prop::collection::vec(prop::num::i8::ANY, 2..60),
        continuous in prop::collection::vec(-1.0f64..1.0, 40..80),
    ) {
        // Low-cardinality column exercises counting sort, the continuous one
        // radix sort; both must equal the comparison-sorted order.
        for column in [
            values.iter().map(|&v| f64::from(v % 6)).collect::<Vec<f64>>(),
            continuous,
        ] {
            let n = column.len();
            let ds = Dataset::build(
                column.iter().map(|&v| vec![v]).collect(),
                vec![vec![0.0, 0.0]; n],
            )
            .unwrap();
            let units = ds.all_units();
            let mut set = SingleSet::new(units.clone());
            let mut scratch = SortScratch::with_capacity(n);
            set.sort_by_covariate(&ds, 0, &mut scratch);
            let mut expected = units;
            expected.sort_by(|&a, &b| {
                ds.x(a, 0).partial_cmp(&ds.x(b, 0)).unwrap().then(a.cmp(&b))
            });
            prop_assert_eq!(set.units(), expected.as_slice());
        }
    }

    #[test]
    fn binary_partition_agrees_with_sorting(bits in prop::collection::vec(prop::bool::ANY, 2..40)) {
        let n = bits.len();
        let ds = Dataset::build(
            bits.iter().map(|&b| vec![if b { 1.0 } else { 0.0 }]).collect(),
            vec![vec![0.0, 0.0]; n],
        )
        .unwrap();
        let units = ds.all_units();
        let set = SingleSet::new(units.clone());
        let (left, right) = binary_partition(&set, &ds, 0);
        let expected_left: Vec<u32> = units.iter().copied().filter(|&i| ds.x(i, 0) == 0.0).collect();
        let expected_right: Vec<u32> = units.iter().copied().filter(|&i| ds.x(i, 0) != 0.0).collect();
        if expected_left.is_empty() {
            // Constant column: everything lands on the left as the minimum.
            prop_assert_eq!(left.len(), n);
            prop_assert!(right.is_empty());
        } else {
            prop_assert_eq!(left, expected_left);
            prop_assert_eq!(right, expected_right);
        }
    }

    #[test]
    fn json_round_trip_is_identity_and_canonical(tree in arbitrary_tree()) {
        let json = tree_to_json(&tree);
        let parsed = tree_from_json(&json).unwrap();
        prop_assert_eq!(&parsed, &tree);
        prop_assert_eq!(tree_to_json(&parsed), json);
    }

    #[test]
    fn enumerated_splits_partition_and_grow(ds in integer_dataset()) {
        let units = ds.all_units();
        for j in 0..ds.num_covariates() {
            let splits = enumerate_splits(&ds, &units, j);
            let mut prev_left = 0;
            let mut prev_value = f64::NEG_INFINITY;
            for s in &splits {
                prop_assert!(!s.left.is_empty() && !s.right.is_empty());
                prop_assert!(s.left.len() > prev_left);
                prop_assert!(s.value > prev_value);
                let mut all: Vec<u32> = s.left.iter().chain(&s.right).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(&all, &units);
                prop_assert!(s.left.iter().all(|&i| ds.x(i, j) <= s.value));
                prop_assert!(s.right.iter().all(|&i| ds.x(i, j) > s.value));
                prev_left = s.left.len();
                prev_value = s.value;
            }
        }
    }
}

fn clamp(tree: &PolicyTree, p: usize, m: usize) -> PolicyTree {
    match tree {
        PolicyTree::Leaf { action } => PolicyTree::leaf(action % m),
        PolicyTree::Split {
            covariate,
            value,
            left,
            right,
        } => {
            if *covariate < p {
                PolicyTree::split(*covariate, *value, clamp(left, p, m), clamp(right, p, m))
            } else {
                clamp(left, p, m)
            }
        }
    }
}
