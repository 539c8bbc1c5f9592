//! The policy tree representation: a binary tree of threshold splits with
//! one action per leaf.

use serde::{Deserialize, Serialize};

/// A depth-limited policy tree.
///
/// A node is either a leaf carrying an action index in `0..m`, or a split on
/// `covariate` at `value`: units with `x[covariate] <= value` go left, the
/// rest go right. All indices are 0-based, including in the serialized JSON
/// form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PolicyTree {
    Leaf {
        action: usize,
    },
    Split {
        covariate: usize,
        value: f64,
        left: Box<PolicyTree>,
        right: Box<PolicyTree>,
    },
}

impl PolicyTree {
    pub fn leaf(action: usize) -> Self {
        PolicyTree::Leaf { action }
    }

    pub fn split(covariate: usize, value: f64, left: PolicyTree, right: PolicyTree) -> Self {
        PolicyTree::Split {
            covariate,
            value,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Walks the tree for one covariate row; the boundary `x[j] == value`
    /// goes left.
    pub fn assign_action(&self, row: &[f64]) -> usize {
        let mut node = self;
        loop {
            match node {
                PolicyTree::Leaf { action } => return *action,
                PolicyTree::Split {
                    covariate,
                    value,
                    left,
                    right,
                } => {
                    node = if row[*covariate] <= *value {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    /// Maximum number of split nodes on any root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            PolicyTree::Leaf { .. } => 0,
            PolicyTree::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// True when every split covariate is in `0..p`.
    pub fn covariates_in_range(&self, p: usize) -> bool {
        match self {
            PolicyTree::Leaf { .. } => true,
            PolicyTree::Split {
                covariate,
                left,
                right,
                ..
            } => *covariate < p && left.covariates_in_range(p) && right.covariates_in_range(p),
        }
    }

    /// True when every leaf action is in `0..m`.
    pub fn actions_in_range(&self, m: usize) -> bool {
        match self {
            PolicyTree::Leaf { action } => *action < m,
            PolicyTree::Split { left, right, .. } => {
                left.actions_in_range(m) && right.actions_in_range(m)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_assigns_its_action() {
        assert_eq!(PolicyTree::leaf(0).assign_action(&[5.0, -3.0]), 0);
    }

    #[test]
    fn boundary_goes_left() {
        let t = PolicyTree::split(0, 2.4, PolicyTree::leaf(1), PolicyTree::leaf(0));
        assert_eq!(t.assign_action(&[2.4]), 1);
        assert_eq!(t.assign_action(&[2.4000000001]), 0);
    }

    #[test]
    fn nested_splits_route_to_the_expected_leaf() {
        // Split on x1 <= 2.4 with a left child splitting on x2 <= 3.7; a unit
        // satisfying both inequalities lands in the left-left leaf.
        let t = PolicyTree::split(
            0,
            2.4,
            PolicyTree::split(1, 3.7, PolicyTree::leaf(2), PolicyTree::leaf(1)),
            PolicyTree::leaf(0),
        );
        assert_eq!(t.assign_action(&[2.0, 3.0]), 2);
        assert_eq!(t.assign_action(&[2.0, 4.0]), 1);
        assert_eq!(t.assign_action(&[3.0, 3.0]), 0);
    }

    #[test]
    fn depth_counts_splits_on_longest_path() {
        assert_eq!(PolicyTree::leaf(0).depth(), 0);
        let t = PolicyTree::split(
            0,
            0.0,
            PolicyTree::split(0, -1.0, PolicyTree::leaf(0), PolicyTree::leaf(1)),
            PolicyTree::leaf(0),
        );
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn range_checks() {
        let t = PolicyTree::split(1, 0.0, PolicyTree::leaf(0), PolicyTree::leaf(2));
        assert!(t.covariates_in_range(2));
        assert!(!t.covariates_in_range(1));
        assert!(t.actions_in_range(3));
        assert!(!t.actions_in_range(2));
    }
}
