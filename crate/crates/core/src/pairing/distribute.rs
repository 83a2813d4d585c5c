//! Distributing paired copies of target values among bins under size and
//! distinct-value limits.

use std::collections::{BTreeMap, BTreeSet};

use super::PairingError;

pub(crate) const NODE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, Default)]
pub(crate) struct Bin {
    /// Copies placed before distribution (value → count).
    pub forced: BTreeMap<u32, usize>,
    /// Final size of the bin.
    pub capacity: usize,
    pub max_distinct: usize,
    /// Values that may not receive any distributed copies.
    pub forbidden: BTreeSet<u32>,
}

impl Bin {
    pub fn new(capacity: usize, max_distinct: usize) -> Self {
        Bin {
            capacity,
            max_distinct,
            ..Default::default()
        }
    }

    pub fn force(mut self, v: u32, count: usize) -> Self {
        if count > 0 {
            *self.forced.entry(v).or_insert(0) += count;
        }
        self
    }

    pub fn forbid(mut self, v: u32) -> Self {
        self.forbidden.insert(v);
        self
    }
}

struct State<'a> {
    bins: &'a [Bin],
    pools: Vec<(u32, usize)>,
    need: Vec<usize>,
    distinct: Vec<usize>,
    touched: Vec<usize>,
    choice: Vec<u32>,
    nodes: u64,
}

impl State<'_> {
    fn allowed(&self, v: u32) -> u32 {
        (0..self.bins.len())
            .filter(|&b| !self.bins[b].forbidden.contains(&v))
            .fold(0, |m, b| m | (1 << b))
    }

    /// Touch sets for value `v` in preference order: bins already holding
    /// `v`, then other single bins by remaining need, then larger sets.
    fn options(&self, v: u32, units: usize) -> Vec<u32> {
        let nb = self.bins.len();
        let allowed = self.allowed(v);
        let mut opts: Vec<u32> = (1u32..(1 << nb))
            .filter(|&s| s & !allowed == 0 && s.count_ones() as usize <= units)
            .collect();
        let holds = |s: u32| {
            (0..nb)
                .filter(|&b| s >> b & 1 == 1)
                .all(|b| self.bins[b].forced.contains_key(&v))
        };
        let slack = |s: u32| -> usize {
            (0..nb)
                .filter(|&b| s >> b & 1 == 1)
                .map(|b| self.need[b] - self.touched[b].min(self.need[b]))
                .sum()
        };
        opts.sort_by_key(|&s| (s.count_ones(), !holds(s), std::cmp::Reverse(slack(s)), s));
        opts
    }

    fn go(&mut self, i: usize) -> Result<bool, PairingError> {
        self.nodes += 1;
        if self.nodes > NODE_LIMIT {
            return Err(PairingError::InternalSearchFailed(
                "distribution search exceeded node limit".into(),
            ));
        }
        if !self.hall_possible(i) {
            return Ok(false);
        }
        if i == self.pools.len() {
            return Ok(true);
        }
        let (v, units) = self.pools[i];
        for s in self.options(v, units) {
            let nb = self.bins.len();
            let ok = (0..nb).filter(|&b| s >> b & 1 == 1).all(|b| {
                let new = !self.bins[b].forced.contains_key(&v);
                self.touched[b] < self.need[b]
                    && self.distinct[b] + new as usize <= self.bins[b].max_distinct
            });
            if !ok {
                continue;
            }
            for b in (0..nb).filter(|&b| s >> b & 1 == 1) {
                self.touched[b] += 1;
                if !self.bins[b].forced.contains_key(&v) {
                    self.distinct[b] += 1;
                }
            }
            self.choice[i] = s;
            if self.go(i + 1)? {
                return Ok(true);
            }
            for b in (0..nb).filter(|&b| s >> b & 1 == 1) {
                self.touched[b] -= 1;
                if !self.bins[b].forced.contains_key(&v) {
                    self.distinct[b] -= 1;
                }
            }
        }
        Ok(false)
    }

    /// Transportation condition with values `0..i` fixed to their touch
    /// sets (each touched bin gets at least one unit): every bin subset's
    /// need is coverable, and what is pinned inside a subset fits in it.
    /// Exact once every value is fixed.
    fn hall_possible(&self, i: usize) -> bool {
        let nb = self.bins.len();
        for set in 1u32..(1 << nb) {
            let need: usize = (0..nb)
                .filter(|&b| set >> b & 1 == 1)
                .map(|b| self.need[b])
                .sum();
            let mut reach = 0;
            let mut confined = 0;
            for (k, &(v, u)) in self.pools.iter().enumerate() {
                let s = if k < i {
                    self.choice[k]
                } else {
                    self.allowed(v)
                };
                let outside = (s & !set).count_ones() as usize;
                let inside = (s & set).count_ones() as usize;
                if k < i {
                    // one unit is pinned to every bin of the touch set
                    if inside > 0 {
                        reach += u - outside;
                    }
                    confined += if outside == 0 { u } else { inside };
                } else if inside > 0 {
                    reach += u;
                }
            }
            if reach < need || confined > need {
                return false;
            }
        }
        true
    }

    /// Concrete amounts once touch sets are fixed: one unit per touched
    /// bin, the rest by augmenting paths.
    fn amounts(&self) -> Option<Vec<Vec<usize>>> {
        let nb = self.bins.len();
        let np = self.pools.len();
        let mut amt = vec![vec![0usize; np]; nb];
        let mut left: Vec<usize> = Vec::with_capacity(np);
        let mut room: Vec<usize> = self.need.clone();
        for (k, &(_, u)) in self.pools.iter().enumerate() {
            let s = self.choice[k];
            let mut u = u;
            for (b, slot) in amt.iter_mut().enumerate() {
                if s >> b & 1 == 1 {
                    slot[k] = 1;
                    u -= 1;
                    room[b] -= 1;
                }
            }
            left.push(u);
        }
        // greedy then repair by moving units between bins along touch sets
        for k in 0..np {
            let s = self.choice[k];
            for b in 0..nb {
                if s >> b & 1 == 1 {
                    let x = left[k].min(room[b]);
                    amt[b][k] += x;
                    left[k] -= x;
                    room[b] -= x;
                }
            }
        }
        while let Some(k) = (0..np).find(|&k| left[k] > 0) {
            // find a path k -> b1 (via existing amount) ... -> bin with room
            if !self.augment(k, &mut amt, &mut room) {
                return None;
            }
            left[k] -= 1;
        }
        Some(amt)
    }

    /// Moves one unit of value `k` into some bin, displacing along an
    /// alternating path to a bin with room.
    #[allow(clippy::needless_range_loop)]
    fn augment(&self, k: usize, amt: &mut [Vec<usize>], room: &mut [usize]) -> bool {
        let nb = self.bins.len();
        let np = self.pools.len();
        // BFS over bins; edge b -> b' exists via value j with choice
        // containing both, amt[b][j] > lower bound, and j may enter b'
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; nb];
        let mut seen = vec![false; nb];
        let mut queue = std::collections::VecDeque::new();
        for b in 0..nb {
            if self.choice[k] >> b & 1 == 1 {
                seen[b] = true;
                queue.push_back(b);
            }
        }
        while let Some(b) = queue.pop_front() {
            if room[b] > 0 {
                // unwind: b receives, predecessors shift
                let mut cur = b;
                room[b] -= 1;
                while let Some((from, via)) = prev[cur] {
                    amt[cur][via] += 1;
                    amt[from][via] -= 1;
                    cur = from;
                }
                amt[cur][k] += 1;
                return true;
            }
            for j in 0..np {
                if amt[b][j] <= 1 {
                    continue;
                }
                for b2 in 0..nb {
                    if !seen[b2] && self.choice[j] >> b2 & 1 == 1 {
                        seen[b2] = true;
                        prev[b2] = Some((b, j));
                        queue.push_back(b2);
                    }
                }
            }
        }
        false
    }
}

/// Assigns the pair units of each pool value to bins. Returns
/// `units[bin][pool index]`. Fails with `InternalSearchFailed` when no
/// assignment exists or the node limit is hit.
pub(crate) fn distribute(
    bins: &[Bin],
    pools: &[(u32, usize)],
) -> Result<Vec<Vec<usize>>, PairingError> {
    let fail = |m: &str| Err(PairingError::InternalSearchFailed(m.to_string()));
    let mut need = Vec::with_capacity(bins.len());
    let mut distinct = Vec::with_capacity(bins.len());
    for b in bins {
        let forced: usize = b.forced.values().sum();
        if forced > b.capacity || (b.capacity - forced) % 2 == 1 {
            return fail("bin capacity incompatible with forced copies");
        }
        if b.forced.len() > b.max_distinct {
            return fail("forced copies exceed distinct limit");
        }
        need.push((b.capacity - forced) / 2);
        distinct.push(b.forced.len());
    }
    let live: Vec<(usize, (u32, usize))> = pools
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, (_, u))| u > 0)
        .collect();
    if live.iter().map(|&(_, (_, u))| u).sum::<usize>() != need.iter().sum::<usize>() {
        return fail("pool size does not match bin capacity");
    }
    let mut order: Vec<usize> = (0..live.len()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(live[k].1 .1));
    let sorted: Vec<(u32, usize)> = order.iter().map(|&k| live[k].1).collect();
    let mut st = State {
        bins,
        pools: sorted,
        need,
        distinct,
        touched: vec![0; bins.len()],
        choice: vec![0; order.len()],
        nodes: 0,
    };
    if !st.go(0)? {
        return fail("no distribution satisfies the limits");
    }
    // the Hall check at the leaf is exact, so amounts always exist
    let amt = match st.amounts() {
        Some(a) => a,
        None => return fail("touch sets admit no amounts"),
    };
    let mut out = vec![vec![0usize; pools.len()]; bins.len()];
    for (pos, &k) in order.iter().enumerate() {
        let orig = live[k].0;
        for (b, row) in out.iter_mut().enumerate() {
            row[orig] = amt[b][pos];
        }
    }
    Ok(out)
}
