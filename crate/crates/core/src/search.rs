//! Randomized greedy labeling search with restarts, plus an exhaustive
//! backtracking search for small trees.
//!
//! Restart `r` draws from ChaCha8 stream `r` under the configured seed, so
//! the labeling found depends only on the seed and strategy. Workers take
//! restarts `r ≡ w (mod W)` and the smallest successful restart wins, which
//! keeps results independent of the worker count.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{BitVec, MAX_DIM};
use crate::trees::{verify_set_sequential, Labeling, Tree};

/// Largest tree the exhaustive strategy accepts.
pub const EXHAUSTIVE_MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    GreedyRestart,
    Backtracking,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::GreedyRestart => "greedy",
            Strategy::Backtracking => "exhaustive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub seed: u64,
    pub budget: Duration,
    pub max_restarts: u64,
    pub strategy: Strategy,
    /// Worker threads for greedy restarts.
    pub workers: usize,
    /// Print `key=value` progress lines to standard error.
    pub progress: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            budget: Duration::from_secs(60),
            max_restarts: u64::MAX,
            strategy: Strategy::GreedyRestart,
            workers: 1,
            progress: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("tree with {0} vertices has no set-sequential size 2^n - 1")]
    BadSize(usize),
    #[error("exhaustive search is limited to {EXHAUSTIVE_MAX_VERTICES} vertices, got {0}")]
    TooLarge(usize),
    #[error("invalid search config: {0}")]
    BadConfig(&'static str),
    #[error("no labeling found within the budget ({restarts} restarts)")]
    BudgetExhausted { restarts: u64 },
    #[error("no set-sequential labeling exists")]
    Infeasible,
}

impl SearchError {
    pub fn name(&self) -> &'static str {
        match self {
            SearchError::BadSize(_) => "BadSize",
            SearchError::TooLarge(_) => "TooLarge",
            SearchError::BadConfig(_) => "BadConfig",
            SearchError::BudgetExhausted { .. } => "BudgetExhausted",
            SearchError::Infeasible => "Infeasible",
        }
    }
}

/// Dimension `n` with `2|V| - 1 = 2^n - 1`.
pub fn dimension_for(t: &Tree) -> Result<u32, SearchError> {
    let v = t.vertex_count();
    if !v.is_power_of_two() || v.trailing_zeros() + 1 > MAX_DIM {
        return Err(SearchError::BadSize(v));
    }
    Ok(v.trailing_zeros() + 1)
}

pub fn search_labeling(t: &Tree, cfg: &SearchConfig) -> Result<Labeling, SearchError> {
    if cfg.budget.is_zero() {
        return Err(SearchError::BadConfig("budget must be positive"));
    }
    if cfg.max_restarts == 0 {
        return Err(SearchError::BadConfig("max_restarts must be at least 1"));
    }
    let n = dimension_for(t)?;
    let labels = match cfg.strategy {
        Strategy::GreedyRestart => greedy(t, n, cfg)?,
        Strategy::Backtracking => exhaustive(t, n, cfg)?,
    };
    let lab = Labeling::new(n, labels.into_iter().map(|x| BitVec::new(x, n)).collect())
        .expect("labels have width n");
    assert!(
        verify_set_sequential(t, &lab).valid,
        "search produced an invalid labeling"
    );
    Ok(lab)
}

struct Greedy<'a> {
    t: &'a Tree,
    n: u32,
    /// Vertices by descending degree; ties are shuffled per restart.
    by_degree: Vec<usize>,
    used: Vec<bool>,
    labels: Vec<u32>,
    candidates: Vec<u32>,
}

impl<'a> Greedy<'a> {
    fn new(t: &'a Tree, n: u32) -> Self {
        let mut by_degree: Vec<usize> = (0..t.vertex_count()).collect();
        by_degree.sort_by_key(|&v| std::cmp::Reverse(t.degree(v)));
        let small = n <= 12;
        Greedy {
            t,
            n,
            by_degree,
            used: vec![false; 1 << n],
            labels: vec![0; t.vertex_count()],
            candidates: if small {
                (1..1u32 << n).collect()
            } else {
                Vec::new()
            },
        }
    }

    fn fits(&self, v: usize, x: u32, placed: &[bool]) -> bool {
        if self.used[x as usize] {
            return false;
        }
        // new edges are pairwise distinct since the neighbour labels are
        self.t
            .neighbors(v)
            .iter()
            .all(|&w| !placed[w] || !self.used[(x ^ self.labels[w]) as usize])
    }

    fn place(&mut self, v: usize, x: u32, placed: &mut [bool]) {
        self.used[x as usize] = true;
        self.labels[v] = x;
        for &w in self.t.neighbors(v) {
            if placed[w] {
                self.used[(x ^ self.labels[w]) as usize] = true;
            }
        }
        placed[v] = true;
    }

    /// One restart; returns how many vertices were labeled.
    fn run(&mut self, rng: &mut ChaCha8Rng) -> usize {
        self.used.iter_mut().for_each(|u| *u = false);
        self.used[0] = true;
        // each restart depends only on its own rng
        self.candidates.sort_unstable();
        let mut order = self.by_degree.clone();
        // shuffle inside each run of equal degree
        let mut i = 0;
        while i < order.len() {
            let d = self.t.degree(order[i]);
            let mut j = i;
            while j < order.len() && self.t.degree(order[j]) == d {
                j += 1;
            }
            order[i..j].shuffle(rng);
            i = j;
        }
        let mut placed = vec![false; order.len()];
        for (depth, &v) in order.iter().enumerate() {
            let found = if self.candidates.is_empty() {
                self.sample(v, &placed, rng)
            } else {
                self.candidates.shuffle(rng);
                self.candidates
                    .iter()
                    .copied()
                    .find(|&x| self.fits(v, x, &placed))
            };
            match found {
                Some(x) => self.place(v, x, &mut placed),
                None => return depth,
            }
        }
        order.len()
    }

    /// Random probing followed by a scan, for large dimensions.
    fn sample(&self, v: usize, placed: &[bool], rng: &mut ChaCha8Rng) -> Option<u32> {
        let top = 1u32 << self.n;
        for _ in 0..256 {
            let x = rng.gen_range(1..top);
            if self.fits(v, x, placed) {
                return Some(x);
            }
        }
        let start = rng.gen_range(1..top);
        (start..top)
            .chain(1..start)
            .find(|&x| self.fits(v, x, placed))
    }
}

fn restart_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

fn greedy(t: &Tree, n: u32, cfg: &SearchConfig) -> Result<Vec<u32>, SearchError> {
    let deadline = Instant::now() + cfg.budget;
    let workers = cfg.workers.max(1) as u64;
    // smallest successful restart so far (u64::MAX = none)
    let winner = AtomicU64::new(u64::MAX);
    let best_depth = AtomicUsize::new(0);
    let attempted = AtomicU64::new(0);
    let results: Vec<Option<(u64, Vec<u32>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (winner, best_depth, attempted) = (&winner, &best_depth, &attempted);
                s.spawn(move || {
                    let mut g = Greedy::new(t, n);
                    let mut r = w;
                    while r < cfg.max_restarts && r < winner.load(Ordering::Relaxed) {
                        if r % 1024 == w && Instant::now() >= deadline {
                            break;
                        }
                        let mut rng = restart_rng(cfg.seed, r);
                        let depth = g.run(&mut rng);
                        attempted.fetch_add(1, Ordering::Relaxed);
                        if depth == t.vertex_count() {
                            winner.fetch_min(r, Ordering::Relaxed);
                            return Some((r, g.labels.clone()));
                        }
                        if best_depth.fetch_max(depth, Ordering::Relaxed) < depth && cfg.progress {
                            eprintln!("restart={r} best_depth={depth}");
                        }
                        r += workers;
                    }
                    None
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker"))
            .collect()
    });
    let restarts = attempted.load(Ordering::Relaxed);
    let best = results.into_iter().flatten().min_by_key(|(r, _)| *r);
    if cfg.progress {
        let winner = best
            .as_ref()
            .map_or("none".to_string(), |(r, _)| r.to_string());
        eprintln!("strategy=greedy restarts={restarts} winner={winner}");
    }
    best.map(|(_, labels)| labels)
        .ok_or(SearchError::BudgetExhausted { restarts })
}

struct Exhaustive {
    /// Breadth-first order; every vertex after the first has its parent earlier.
    order: Vec<usize>,
    parent: Vec<usize>,
    used: Vec<bool>,
    labels: Vec<u32>,
    nodes: u64,
    deadline: Instant,
}

impl Exhaustive {
    fn go(&mut self, depth: usize) -> Result<bool, SearchError> {
        if depth == self.order.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && Instant::now() >= self.deadline {
            return Err(SearchError::BudgetExhausted { restarts: 0 });
        }
        let v = self.order[depth];
        let p = self.parent[v];
        for x in 1..self.used.len() as u32 {
            if self.used[x as usize] {
                continue;
            }
            let e = if depth == 0 { 0 } else { x ^ self.labels[p] };
            if depth > 0 && self.used[e as usize] {
                continue;
            }
            self.used[x as usize] = true;
            self.used[e as usize] = true;
            self.labels[v] = x;
            if self.forward_ok(depth + 1) && self.go(depth + 1)? {
                return Ok(true);
            }
            self.used[x as usize] = false;
            if depth > 0 {
                self.used[e as usize] = false;
            }
        }
        Ok(false)
    }

    /// Every unlabeled vertex whose parent is labeled still has a choice.
    fn forward_ok(&self, from: usize) -> bool {
        self.order[from..].iter().all(|&w| {
            let p = self.parent[w];
            let placed = self.order[..from].contains(&p);
            !placed
                || (1..self.used.len() as u32)
                    .any(|x| !self.used[x as usize] && !self.used[(x ^ self.labels[p]) as usize])
        })
    }
}

fn exhaustive(t: &Tree, n: u32, cfg: &SearchConfig) -> Result<Vec<u32>, SearchError> {
    if t.vertex_count() > EXHAUSTIVE_MAX_VERTICES {
        return Err(SearchError::TooLarge(t.vertex_count()));
    }
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; t.vertex_count()];
    parent[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in t.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut used = vec![false; 1 << n];
    used[0] = true;
    let mut ex = Exhaustive {
        order,
        parent,
        used,
        labels: vec![0; t.vertex_count()],
        nodes: 0,
        deadline: Instant::now() + cfg.budget,
    };
    let found = ex.go(0)?;
    if cfg.progress {
        eprintln!("strategy=exhaustive nodes={} found={found}", ex.nodes);
    }
    if found {
        Ok(ex.labels)
    } else {
        Err(SearchError::Infeasible)
    }
}
