//! Exhaustive check that every target multiset of a small dimension pairs.

use std::time::{Duration, Instant};

use crate::gf2::BitVec;

use super::{check_partition, exact_pairing_solver, PairingInstance};

/// Largest `n` the sweep enumerates; `n = 5` already has about 10^12
/// multisets.
pub const MAX_SWEEP_DIM: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub n: u32,
    pub shards: usize,
    pub shard: usize,
    /// Instances checked by this shard.
    pub instances: u64,
    /// Instances the exact solver could not pair.
    pub failures: Vec<Vec<BitVec>>,
    pub elapsed: Duration,
}

/// Calls `visit` on every multiset of `2^(n-1)` nonzero vectors with XOR 0,
/// as nondecreasing value lists in lexicographic order.
pub fn for_each_instance(n: u32, mut visit: impl FnMut(&[u32])) {
    fn go(
        n: u32,
        len: usize,
        min: u32,
        acc: u32,
        cur: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]),
    ) {
        if cur.len() == len {
            if acc == 0 {
                visit(cur);
            }
            return;
        }
        for v in min..1u32 << n {
            cur.push(v);
            go(n, len, v, acc ^ v, cur, visit);
            cur.pop();
        }
    }
    let len = 1usize << (n - 1);
    go(n, len, 1, 0, &mut Vec::with_capacity(len), &mut visit);
}

/// Runs the exact solver on the instances whose lexicographic rank is
/// `shard` modulo `shards`.
pub fn sweep_shard(n: u32, shards: usize, shard: usize, budget: Duration) -> SweepReport {
    assert!(
        (2..=MAX_SWEEP_DIM).contains(&n),
        "sweep supports 2 <= n <= {MAX_SWEEP_DIM}"
    );
    assert!(shard < shards, "shard index out of range");
    let start = Instant::now();
    let mut rank = 0usize;
    let mut instances = 0;
    let mut failures = Vec::new();
    for_each_instance(n, |vals| {
        let mine = rank % shards == shard;
        rank += 1;
        if !mine {
            return;
        }
        instances += 1;
        let targets: Vec<BitVec> = vals.iter().map(|&v| BitVec::new(v, n)).collect();
        let inst = PairingInstance::new(n, targets.clone()).expect("valid instance");
        let ok = exact_pairing_solver(&inst, budget)
            .is_ok_and(|part| check_partition(&inst, &part).is_ok());
        if !ok {
            failures.push(targets);
        }
    });
    SweepReport {
        n,
        shards,
        shard,
        instances,
        failures,
        elapsed: start.elapsed(),
    }
}
