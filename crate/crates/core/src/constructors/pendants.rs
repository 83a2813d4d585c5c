//! Doubling a labeled tree by attaching pendant edges.

use std::str::FromStr;

use crate::gf2::{xor_all, BitVec};
use crate::pairing::{solve_pairing, PairingInstance};
use crate::trees::{LabeledTree, Labeling, Tree};

use super::ConstructError;

/// Anchors and how many pendants each receives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendantPlan {
    pub anchors: Vec<(usize, usize)>,
}

impl PendantPlan {
    pub fn new(anchors: Vec<(usize, usize)>) -> Result<Self, ConstructError> {
        if let Some(&(v, _)) = anchors.iter().find(|&&(_, c)| c == 0) {
            return Err(ConstructError::BadPlan(format!("anchor {v} has count 0")));
        }
        Ok(PendantPlan { anchors })
    }

    pub fn total(&self) -> usize {
        self.anchors.iter().map(|&(_, c)| c).sum()
    }
}

impl FromStr for PendantPlan {
    type Err = ConstructError;

    /// Parses `"2:1,7:1,3:3"` (vertex id, pendant count).
    fn from_str(s: &str) -> Result<Self, ConstructError> {
        let bad = || ConstructError::BadPlan(s.to_string());
        let anchors = s
            .split(',')
            .map(|part| {
                let (v, c) = part.trim().split_once(':').ok_or_else(bad)?;
                Ok((
                    v.trim().parse().map_err(|_| bad())?,
                    c.trim().parse().map_err(|_| bad())?,
                ))
            })
            .collect::<Result<Vec<_>, ConstructError>>()?;
        PendantPlan::new(anchors)
    }
}

/// Attaches `c_i` pendants to each anchor, doubling the vertex count.
///
/// Old labels gain a leading 0. The i-th new pendant (ids appended in plan
/// order) gets label `1p_i` and its edge `1q_i`, where `(p_i, q_i)` pairs
/// `F_2^n` with `p_i + q_i` equal to the anchor label.
pub fn add_pendants(base: &LabeledTree, plan: &PendantPlan) -> Result<LabeledTree, ConstructError> {
    let n = base.n();
    let count = base.tree.vertex_count();
    let expected = 1usize << (n - 1);
    if plan.total() != expected {
        return Err(ConstructError::PlanSizeMismatch {
            expected,
            found: plan.total(),
        });
    }
    if let Some(&(v, _)) = plan.anchors.iter().find(|&&(v, _)| v >= count) {
        return Err(ConstructError::UnknownAnchor(v));
    }
    if !base.verify().valid {
        return Err(ConstructError::BaseInvalid);
    }
    let targets: Vec<BitVec> = plan
        .anchors
        .iter()
        .flat_map(|&(v, c)| std::iter::repeat_n(base.label(v), c))
        .collect();
    if !xor_all(n, targets.iter().copied()).is_zero() {
        return Err(ConstructError::TargetSumNonzero);
    }
    let inst = PairingInstance::new(n, targets)?;
    let (partition, _) = solve_pairing(&inst)?;

    let zero = BitVec::zero(1);
    let one = BitVec::new(1, 1);
    let mut labels: Vec<BitVec> = base
        .labeling
        .labels()
        .iter()
        .map(|l| l.with_prefix(zero))
        .collect();
    let mut edges = base.tree.edges().to_vec();
    let anchors = plan
        .anchors
        .iter()
        .flat_map(|&(v, c)| std::iter::repeat_n(v, c));
    for (anchor, &(p, _)) in anchors.zip(partition.pairs()) {
        edges.push((anchor, labels.len()));
        labels.push(p.with_prefix(one));
    }
    let tree = Tree::new(2 * count, edges)?;
    let out = LabeledTree::new(tree, Labeling::new(n + 1, labels)?)?;
    debug_assert!(out.verify().valid);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{even_degree_label_sum, Tree};

    fn figure1() -> LabeledTree {
        crate::trees::fixtures::figure1()
    }

    #[test]
    fn figure_one_doubles() {
        let base = figure1();
        let plan: PendantPlan = "2:1,7:1,3:3,4:1,1:2".parse().unwrap();
        let out = add_pendants(&base, &plan).unwrap();
        assert_eq!(out.tree.vertex_count(), 16);
        assert_eq!(out.n(), 5);
        assert!(out.verify().valid);
        assert!(even_degree_label_sum(&out.tree, &out.labeling).is_zero());
        // the base survives as the 0-prefixed subgraph
        for v in 0..8 {
            assert_eq!(out.label(v).prefix(1).bits(), 0);
            assert_eq!(out.label(v).suffix(4), base.label(v));
        }
    }

    #[test]
    fn plan_errors() {
        let base = figure1();
        let short: PendantPlan = "2:1,7:1,3:2,4:1,1:2".parse().unwrap();
        assert_eq!(
            add_pendants(&base, &short),
            Err(ConstructError::PlanSizeMismatch {
                expected: 8,
                found: 7
            })
        );
        let edge = LabeledTree::new(
            Tree::path(2).unwrap(),
            Labeling::new(2, vec![BitVec::new(1, 2), BitVec::new(2, 2)]).unwrap(),
        )
        .unwrap();
        let mixed: PendantPlan = "0:1,1:1".parse().unwrap();
        assert_eq!(
            add_pendants(&edge, &mixed),
            Err(ConstructError::TargetSumNonzero)
        );
        let doubled: PendantPlan = "0:2".parse().unwrap();
        let out = add_pendants(&edge, &doubled).unwrap();
        assert!(out.verify().valid);
        assert_eq!(out.tree.degree(0), 3);
        assert!("0:0".parse::<PendantPlan>().is_err());
        assert!("0-1".parse::<PendantPlan>().is_err());
        let far: PendantPlan = "9:2".parse().unwrap();
        assert_eq!(
            add_pendants(&edge, &far),
            Err(ConstructError::UnknownAnchor(9))
        );
    }
}
