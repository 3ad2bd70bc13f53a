//! Targeted-bagging split planner: disjoint, near-equal, contiguous folds,
//! one per training target, so different targets see different data.

use parity_codes::{Error, Result};
use serde::Serialize;

/// Assignment of dataset items to training targets. Folds are pairwise
/// disjoint, cover 0..n_items, and differ in size by at most one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SplitPlan {
    pub n_items: usize,
    pub assignments: Vec<Vec<usize>>,
}

/// Splits `n_items` into `n_targets` contiguous folds; target t trains on
/// fold t. The first `n_items % n_targets` folds take the extra item.
pub fn plan_targeted_bagging(n_items: usize, n_targets: usize) -> Result<SplitPlan> {
    if n_targets == 0 {
        return Err(Error::InvalidArgument("need at least one target".into()));
    }
    if n_items < n_targets {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n_items} items across {n_targets} targets"
        )));
    }
    let base = n_items / n_targets;
    let remainder = n_items % n_targets;
    let mut assignments = Vec::with_capacity(n_targets);
    let mut start = 0usize;
    for t in 0..n_targets {
        let size = base + usize::from(t < remainder);
        assignments.push((start..start + size).collect());
        start += size;
    }
    Ok(SplitPlan {
        n_items,
        assignments,
    })
}
