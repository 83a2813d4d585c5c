//! Exact backtracking search, branching on the unused vector with the
//! fewest remaining partners.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Ctx, PairingError, Pairs};

const CLOCK_INTERVAL: u64 = 4096;
/// Node limit of the first attempt; later attempts grow it by half.
const FIRST_LIMIT: u64 = 20_000;

struct Search<'a> {
    size: usize,
    values: Vec<u32>,
    remaining: Vec<usize>,
    used: Vec<bool>,
    /// Order in which values are tried at every node.
    order: Vec<usize>,
    stack: Vec<(u32, usize)>,
    nodes: u64,
    limit: u64,
    aborted: bool,
    ctx: &'a Ctx,
}

impl Search<'_> {
    /// Number of remaining values that can pair `z` with an unused vector.
    fn options(&self, z: usize) -> usize {
        self.values
            .iter()
            .zip(&self.remaining)
            .filter(|&(&v, &r)| r > 0 && !self.used[z ^ v as usize])
            .count()
    }

    /// The unused vector with fewest options (smallest on ties), or
    /// `None` when every vector is used.
    fn pick(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for z in (0..self.size).filter(|&z| !self.used[z]) {
            let k = self.options(z);
            if best.is_none_or(|(_, b)| k < b) {
                best = Some((z, k));
                if k <= 1 {
                    break;
                }
            }
        }
        best
    }

    fn go(&mut self) -> Result<bool, PairingError> {
        let Some((x, k)) = self.pick() else {
            return Ok(true);
        };
        if k == 0 {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(CLOCK_INTERVAL) {
            self.ctx.check_time()?;
        }
        if self.nodes > self.limit {
            self.aborted = true;
            return Ok(false);
        }
        for k in 0..self.order.len() {
            let vi = self.order[k];
            if self.remaining[vi] == 0 {
                continue;
            }
            let y = x ^ self.values[vi] as usize;
            if self.used[y] {
                continue;
            }
            self.used[x] = true;
            self.used[y] = true;
            self.remaining[vi] -= 1;
            self.stack.push((x.min(y) as u32, vi));
            if self.go()? {
                return Ok(true);
            }
            self.stack.pop();
            self.remaining[vi] += 1;
            self.used[x] = false;
            self.used[y] = false;
            if self.aborted {
                return Ok(false);
            }
        }
        Ok(false)
    }
}

/// Pairs aligned with `vals`; `p` is always the smaller vector.
pub(crate) fn exact_pairs(n: u32, vals: &[u32], ctx: &mut Ctx) -> Result<Pairs, PairingError> {
    ctx.note(|| format!("exact n={n} targets={}", vals.len()));
    debug_assert_eq!(vals.len(), 1 << (n - 1));
    // distinct values in order of first appearance
    let mut values: Vec<u32> = Vec::new();
    let mut slots: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match values.iter().position(|&u| u == v) {
            Some(k) => slots[k].push(i),
            None => {
                values.push(v);
                slots.push(vec![i]);
            }
        }
    }
    let remaining = slots.iter().map(Vec::len).collect();
    let l = values.len();
    let mut search = Search {
        size: 1 << n,
        values,
        remaining,
        used: vec![false; 1 << n],
        order: (0..l).collect(),
        stack: Vec::with_capacity(vals.len()),
        nodes: 0,
        limit: FIRST_LIMIT,
        aborted: false,
        ctx,
    };
    // restarts: input order first, then seeded orders with growing limits
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut restarts = 0;
    loop {
        if search.go()? {
            break;
        }
        if !search.aborted {
            return Err(PairingError::Infeasible);
        }
        restarts += 1;
        search.order.shuffle(&mut rng);
        search.limit += search.limit / 2;
        search.nodes = 0;
        search.aborted = false;
    }
    let mut out = vec![(0, 0); vals.len()];
    let mut next = vec![0usize; slots.len()];
    for &(x, vi) in &search.stack {
        let slot = slots[vi][next[vi]];
        next[vi] += 1;
        out[slot] = (x, x ^ search.values[vi]);
    }
    if restarts > 0 {
        ctx.note(|| format!("exact search restarted {restarts} times"));
    }
    Ok(out)
}
