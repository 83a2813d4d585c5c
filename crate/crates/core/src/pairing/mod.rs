//! Pair-partition solvers.
//!
//! Given `2^(n-1)` nonzero targets `v_i` in `F_2^n` whose XOR is zero, find
//! pairs `(p_i, q_i)` covering every vector of `F_2^n` exactly once with
//! `p_i + q_i = v_i`. The constructive solvers cover instances with small
//! span, few distinct values, or paired (even multiplicity) targets; an
//! exact backtracking search handles small `n`.
//!
//! Internally everything works on raw `u32` values with an explicit
//! dimension; the public wrappers validate inputs and check every result.

mod distribute;
mod exact;
mod few_values;
mod lift;
mod split;
pub mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::gf2::{self, BitVec, Gf2Error, VectorMultiset};

pub(crate) type Pairs = Vec<(u32, u32)>;

/// Default wall-clock budget for exact search inside a solve.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

/// Largest `n` accepted by the pairing solvers (they enumerate `F_2^n`).
pub const MAX_PAIRING_DIM: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("case not applicable: {0}")]
    CaseNotApplicable(String),
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("no partition exists")]
    Infeasible,
    #[error("internal search failed: {0}")]
    InternalSearchFailed(String),
    #[error("no constructive case applies for n = {0}")]
    NotCovered(u32),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

impl PairingError {
    pub fn name(&self) -> &'static str {
        match self {
            PairingError::PreconditionViolated(_) => "PreconditionViolated",
            PairingError::CaseNotApplicable(_) => "CaseNotApplicable",
            PairingError::BudgetExhausted => "BudgetExhausted",
            PairingError::Infeasible => "Infeasible",
            PairingError::InternalSearchFailed(_) => "InternalSearchFailed",
            PairingError::NotCovered(_) => "NotCovered",
            PairingError::Gf2(e) => e.name(),
        }
    }
}

fn precondition(msg: impl Into<String>) -> PairingError {
    PairingError::PreconditionViolated(msg.into())
}

/// A validated instance: `2^(n-1)` nonzero targets in `F_2^n` with XOR 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingInstance {
    n: u32,
    targets: VectorMultiset,
}

impl PairingInstance {
    pub fn new(n: u32, targets: Vec<BitVec>) -> Result<Self, PairingError> {
        if !(2..=MAX_PAIRING_DIM).contains(&n) {
            return Err(precondition(format!(
                "n = {n} outside 2..={MAX_PAIRING_DIM}"
            )));
        }
        let targets = VectorMultiset::new(n, targets)?;
        let expected = 1usize << (n - 1);
        if targets.len() != expected {
            return Err(precondition(format!(
                "expected {expected} targets, got {}",
                targets.len()
            )));
        }
        if let Some(i) = targets.items().iter().position(|v| v.is_zero()) {
            return Err(precondition(format!("target {i} is zero")));
        }
        let sum = targets.xor_sum();
        if !sum.is_zero() {
            return Err(precondition(format!("targets sum to {sum}, not 0")));
        }
        Ok(PairingInstance { n, targets })
    }

    /// Parses the comma-separated bitstring form.
    pub fn parse(n: u32, text: &str) -> Result<Self, PairingError> {
        let vs = VectorMultiset::parse(text, n)?;
        Self::new(n, vs.into_items())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn targets(&self) -> &VectorMultiset {
        &self.targets
    }

    pub(crate) fn raw(&self) -> Vec<u32> {
        self.targets.items().iter().map(|v| v.bits()).collect()
    }

    pub fn span_dim(&self) -> usize {
        gf2::dim_span(&self.targets)
    }

    pub fn distinct_count(&self) -> usize {
        self.targets.distinct_count()
    }

    pub fn all_even(&self) -> bool {
        self.targets.all_multiplicities_even()
    }
}

/// Pairs aligned with the instance's targets: `pairs[i].0 + pairs[i].1`
/// equals target `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPartition {
    n: u32,
    pairs: Vec<(BitVec, BitVec)>,
}

impl PairPartition {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn pairs(&self) -> &[(BitVec, BitVec)] {
        &self.pairs
    }

    pub(crate) fn from_raw(n: u32, raw: &[(u32, u32)]) -> Self {
        PairPartition {
            n,
            pairs: raw
                .iter()
                .map(|&(p, q)| (BitVec::new(p, n), BitVec::new(q, n)))
                .collect(),
        }
    }

    /// One `"p q v"` line per pair.
    pub fn to_lines(&self) -> Vec<String> {
        self.pairs
            .iter()
            .map(|&(p, q)| format!("{p} {q} {}", p + q))
            .collect()
    }
}

/// Independent check of both partition invariants against an instance.
pub fn check_partition(inst: &PairingInstance, part: &PairPartition) -> Result<(), String> {
    let n = inst.n();
    if part.n() != n {
        return Err(format!("partition dimension {} != {n}", part.n()));
    }
    let targets = inst.targets().items();
    if part.pairs().len() != targets.len() {
        return Err(format!(
            "{} pairs for {} targets",
            part.pairs().len(),
            targets.len()
        ));
    }
    let mut seen = vec![false; 1usize << n];
    for (i, (&(p, q), &v)) in part.pairs().iter().zip(targets).enumerate() {
        if p.dim() != n || q.dim() != n {
            return Err(format!("pair {i} has wrong dimension"));
        }
        if p + q != v {
            return Err(format!("pair {i}: {p} + {q} != {v}"));
        }
        for x in [p, q] {
            let slot = &mut seen[x.bits() as usize];
            if *slot {
                return Err(format!("vector {x} used twice"));
            }
            *slot = true;
        }
    }
    // 2^(n-1) pairs with no repeats cover F_2^n exactly
    Ok(())
}

/// Which constructive case produced a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RouteTag {
    ExactSearch,
    Dim5Coset,
    Dim6EvenCoset,
    AtMostNValues,
    DimHalfEven,
}

impl RouteTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RouteTag::ExactSearch => "exact",
            RouteTag::Dim5Coset => "dim5",
            RouteTag::Dim6EvenCoset => "dim6-even",
            RouteTag::AtMostNValues => "n-values",
            RouteTag::DimHalfEven => "dim-half",
        }
    }

    pub fn parse(s: &str) -> Option<RouteTag> {
        Some(match s {
            "exact" => RouteTag::ExactSearch,
            "dim5" => RouteTag::Dim5Coset,
            "dim6-even" => RouteTag::Dim6EvenCoset,
            "n-values" => RouteTag::AtMostNValues,
            "dim-half" => RouteTag::DimHalfEven,
            _ => return None,
        })
    }
}

impl fmt::Display for RouteTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverRoute {
    pub tag: RouteTag,
    /// One line per recursive step, indented by depth.
    pub trace: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Wall-clock budget for the whole solve.
    pub budget: Duration,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_BUDGET,
        }
    }
}

const TRACE_LIMIT: usize = 512;

/// Per-solve state: deadline and recursion trace.
pub(crate) struct Ctx {
    deadline: Instant,
    depth: usize,
    trace: Vec<String>,
}

impl Ctx {
    pub fn new(budget: Duration) -> Self {
        Ctx {
            deadline: Instant::now() + budget,
            depth: 0,
            trace: Vec::new(),
        }
    }

    pub fn note(&mut self, msg: impl FnOnce() -> String) {
        if self.trace.len() < TRACE_LIMIT {
            let line = format!("{}{}", "  ".repeat(self.depth), msg());
            self.trace.push(line);
        }
    }

    pub fn check_time(&self) -> Result<(), PairingError> {
        if Instant::now() > self.deadline {
            Err(PairingError::BudgetExhausted)
        } else {
            Ok(())
        }
    }

    /// Runs `f` one trace level deeper.
    pub fn nested<T>(&mut self, f: impl FnOnce(&mut Ctx) -> T) -> T {
        self.depth += 1;
        let out = f(self);
        self.depth -= 1;
        out
    }
}

/// Named index sets and groups produced by a splitting step, checked before
/// the solver recurses on them.
#[derive(Clone, Debug, Default)]
pub struct WorkingSplit {
    pub groups: Vec<Vec<usize>>,
    pub index_sets: Vec<(&'static str, Vec<usize>)>,
    pub translation: Option<BitVec>,
}

impl WorkingSplit {
    /// Groups must partition `0..total`; named sets must be pairwise
    /// disjoint.
    pub fn check(&self, total: usize) -> Result<(), PairingError> {
        let mut seen = vec![false; total];
        for g in &self.groups {
            for &i in g {
                if i >= total || seen[i] {
                    return Err(PairingError::InternalSearchFailed(format!(
                        "split groups do not partition 0..{total}"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PairingError::InternalSearchFailed(
                "split groups miss an index".into(),
            ));
        }
        let mut owner: BTreeMap<usize, &str> = BTreeMap::new();
        for (name, set) in &self.index_sets {
            for &i in set {
                if let Some(other) = owner.insert(i, name) {
                    return Err(PairingError::InternalSearchFailed(format!(
                        "index {i} in both {other} and {name}"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn xor_raw(vals: &[u32]) -> u32 {
    vals.iter().fold(0, |a, &b| a ^ b)
}

pub(crate) fn rank_raw(vals: &[u32]) -> usize {
    let mut e = gf2::Echelon::new();
    for &v in vals {
        e.insert(v);
    }
    e.rank()
}

/// Value → indices (in input order), values in numeric order.
pub(crate) fn classes(vals: &[u32]) -> BTreeMap<u32, Vec<usize>> {
    let mut m: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &v) in vals.iter().enumerate() {
        m.entry(v).or_default().push(i);
    }
    m
}

pub(crate) fn all_even_raw(vals: &[u32]) -> bool {
    classes(vals).values().all(|ix| ix.len() % 2 == 0)
}

/// Solves a group in `F_2^n` whose span is small: exact search up to
/// dimension 5, coset lifting above.
pub(crate) fn solve_low(n: u32, vals: &[u32], ctx: &mut Ctx) -> Result<Pairs, PairingError> {
    if n <= 5 {
        exact::exact_pairs(n, vals, ctx)
    } else {
        let k = rank_raw(vals).max(2);
        lift::small_dimension(n, vals, k, ctx)
    }
}

fn finish(
    inst: &PairingInstance,
    raw: Result<Pairs, PairingError>,
) -> Result<PairPartition, PairingError> {
    let part = PairPartition::from_raw(inst.n(), &raw?);
    check_partition(inst, &part)
        .map_err(|e| PairingError::InternalSearchFailed(format!("checker rejected: {e}")))?;
    Ok(part)
}

/// Backtracking search over all partitions, branching on the unused
/// vector with the fewest possible partners.
pub fn exact_pairing_solver(
    inst: &PairingInstance,
    budget: Duration,
) -> Result<PairPartition, PairingError> {
    let mut ctx = Ctx::new(budget);
    finish(inst, exact::exact_pairs(inst.n(), &inst.raw(), &mut ctx))
}

fn halving_instance(vs: &VectorMultiset) -> Result<u32, PairingError> {
    let n = vs.dim();
    if n < 3 {
        return Err(precondition("halving needs n >= 3"));
    }
    if n > MAX_PAIRING_DIM {
        return Err(precondition(format!("n = {n} too large")));
    }
    if vs.len() != 1usize << (n - 1) {
        return Err(precondition(format!(
            "expected {} vectors, got {}",
            1usize << (n - 1),
            vs.len()
        )));
    }
    if vs.items().iter().any(|v| v.is_zero()) {
        return Err(precondition("zero vector present"));
    }
    if !vs.xor_sum().is_zero() {
        return Err(precondition("vectors do not sum to 0"));
    }
    Ok(n)
}

fn select(vs: &VectorMultiset, idx: &[usize]) -> VectorMultiset {
    VectorMultiset::new(vs.dim(), idx.iter().map(|&i| vs.items()[i]).collect())
        .expect("same dimension")
}

/// Splits `2^(n-1)` nonzero vectors with XOR 0 and span dimension below `n`
/// into two halves of equal size, each with XOR 0.
pub fn split_zero_sum_halves(
    vs: &VectorMultiset,
) -> Result<(VectorMultiset, VectorMultiset), PairingError> {
    let n = halving_instance(vs)?;
    if gf2::dim_span(vs) >= n as usize {
        return Err(precondition("span is the whole space"));
    }
    let raw: Vec<u32> = vs.items().iter().map(|v| v.bits()).collect();
    let mut ctx = Ctx::new(DEFAULT_BUDGET);
    let (a, b) = split::halve(n, &raw, &mut ctx)?;
    Ok((select(vs, &a), select(vs, &b)))
}

/// Recursively halves `vs` into `2^k` groups with at most three distinct
/// values each, every value with even multiplicity.
pub fn split_to_three_values(
    vs: &VectorMultiset,
    k: usize,
) -> Result<Vec<VectorMultiset>, PairingError> {
    let n = vs.dim();
    if n < 2 || vs.len() != 1usize << (n - 1) {
        return Err(precondition("expected 2^(n-1) vectors"));
    }
    if !vs.all_multiplicities_even() {
        return Err(precondition("odd multiplicity present"));
    }
    if k != gf2::dim_span(vs) {
        return Err(precondition(format!(
            "k = {k} but span dimension is {}",
            gf2::dim_span(vs)
        )));
    }
    let raw: Vec<u32> = vs.items().iter().map(|v| v.bits()).collect();
    let groups = split::three_value_groups(&raw, k)?;
    Ok(groups.iter().map(|g| select(vs, g)).collect())
}

/// Coset lifting from a `k`-dimensional base (`k <= 6`; `k = 6` requires
/// every multiplicity to be even).
pub fn solve_small_dimension(
    inst: &PairingInstance,
    k: usize,
) -> Result<PairPartition, PairingError> {
    let dim = inst.span_dim();
    if k > 6 || dim > k || k > inst.n() as usize {
        return Err(PairingError::CaseNotApplicable(format!(
            "span dimension {dim} with k = {k}"
        )));
    }
    if k == 6 && !inst.all_even() {
        return Err(PairingError::CaseNotApplicable(
            "six-dimensional base needs even multiplicities".into(),
        ));
    }
    let mut ctx = Ctx::new(DEFAULT_BUDGET);
    let raw = lift::small_dimension(inst.n(), &inst.raw(), k.max(2), &mut ctx);
    finish(inst, raw)
}

/// Even multiplicities and span dimension at most `n/2`.
pub fn solve_dim_half_even(inst: &PairingInstance) -> Result<PairPartition, PairingError> {
    check_dim_half(inst)?;
    let mut ctx = Ctx::new(DEFAULT_BUDGET);
    let raw = lift::dim_half_even(inst.n(), &inst.raw(), &mut ctx);
    finish(inst, raw)
}

fn check_dim_half(inst: &PairingInstance) -> Result<(), PairingError> {
    if !inst.all_even() {
        return Err(PairingError::CaseNotApplicable(
            "odd multiplicity present".into(),
        ));
    }
    let dim = inst.span_dim();
    if 2 * dim > inst.n() as usize {
        return Err(PairingError::CaseNotApplicable(format!(
            "span dimension {dim} exceeds n/2"
        )));
    }
    Ok(())
}

/// Reduces an even-multiplicity instance to one in `F_2^(n-1)` solved by
/// `base`, then expands each downstairs pair into two pairs upstairs.
pub fn lift_even_pairs<F>(
    inst: &PairingInstance,
    mut base: F,
) -> Result<PairPartition, PairingError>
where
    F: FnMut(&PairingInstance) -> Result<PairPartition, PairingError>,
{
    if inst.n() < 3 {
        return Err(PairingError::CaseNotApplicable("needs n >= 3".into()));
    }
    if !inst.all_even() {
        return Err(PairingError::CaseNotApplicable(
            "odd multiplicity present".into(),
        ));
    }
    let mut ctx = Ctx::new(DEFAULT_BUDGET);
    let mut call = |m: u32, vals: &[u32], _: &mut Ctx| -> Result<Pairs, PairingError> {
        let sub = PairingInstance::new(m, vals.iter().map(|&v| BitVec::new(v, m)).collect())?;
        let part = base(&sub)?;
        check_partition(&sub, &part).map_err(|e| {
            PairingError::InternalSearchFailed(format!("base solver output rejected: {e}"))
        })?;
        Ok(part
            .pairs()
            .iter()
            .map(|&(p, q)| (p.bits(), q.bits()))
            .collect())
    };
    let raw = lift::lift_even(inst.n(), &inst.raw(), &mut call, &mut ctx);
    finish(inst, raw)
}

/// At most `n` distinct target values.
pub fn solve_at_most_n_values(inst: &PairingInstance) -> Result<PairPartition, PairingError> {
    let l = inst.distinct_count();
    if l > inst.n() as usize {
        return Err(PairingError::CaseNotApplicable(format!(
            "{l} distinct values exceed n = {}",
            inst.n()
        )));
    }
    let mut ctx = Ctx::new(DEFAULT_BUDGET);
    let raw = few_values::at_most_n(inst.n(), &inst.raw(), &mut ctx);
    finish(inst, raw)
}

/// The route `solve_pairing` would take, or `None` if no case applies.
pub fn choose_route(inst: &PairingInstance) -> Option<RouteTag> {
    let n = inst.n();
    if n <= 2 {
        return Some(RouteTag::ExactSearch);
    }
    let dim = inst.span_dim();
    let even = inst.all_even();
    if n >= 6 && dim <= 5 {
        Some(RouteTag::Dim5Coset)
    } else if n >= 6 && dim == 6 && even {
        Some(RouteTag::Dim6EvenCoset)
    } else if inst.distinct_count() <= n as usize {
        Some(RouteTag::AtMostNValues)
    } else if even && 2 * dim <= n as usize {
        Some(RouteTag::DimHalfEven)
    } else if n <= 6 {
        Some(RouteTag::ExactSearch)
    } else {
        None
    }
}

pub fn solve_pairing(inst: &PairingInstance) -> Result<(PairPartition, SolverRoute), PairingError> {
    solve_pairing_with(inst, &SolveOptions::default())
}

pub fn solve_pairing_with(
    inst: &PairingInstance,
    opts: &SolveOptions,
) -> Result<(PairPartition, SolverRoute), PairingError> {
    let tag = choose_route(inst).ok_or(PairingError::NotCovered(inst.n()))?;
    solve_with_route(inst, tag, opts)
}

/// Runs one specific route; fails with `CaseNotApplicable` when its
/// hypothesis does not hold.
pub fn solve_with_route(
    inst: &PairingInstance,
    tag: RouteTag,
    opts: &SolveOptions,
) -> Result<(PairPartition, SolverRoute), PairingError> {
    let n = inst.n();
    let vals = inst.raw();
    let dim = inst.span_dim();
    let mut ctx = Ctx::new(opts.budget);
    let raw = match tag {
        RouteTag::ExactSearch => exact::exact_pairs(n, &vals, &mut ctx),
        RouteTag::Dim5Coset => {
            if dim > 5 {
                return Err(PairingError::CaseNotApplicable(format!(
                    "span dimension {dim} > 5"
                )));
            }
            lift::small_dimension(n, &vals, dim.max(2), &mut ctx)
        }
        RouteTag::Dim6EvenCoset => {
            if dim > 6 || !inst.all_even() || n < 6 {
                return Err(PairingError::CaseNotApplicable(
                    "needs n >= 6, span dimension <= 6 and even multiplicities".into(),
                ));
            }
            lift::small_dimension(n, &vals, 6, &mut ctx)
        }
        RouteTag::AtMostNValues => {
            let l = inst.distinct_count();
            if l > n as usize {
                return Err(PairingError::CaseNotApplicable(format!(
                    "{l} distinct values exceed n = {n}"
                )));
            }
            few_values::at_most_n(n, &vals, &mut ctx)
        }
        RouteTag::DimHalfEven => {
            check_dim_half(inst)?;
            lift::dim_half_even(n, &vals, &mut ctx)
        }
    };
    let part = finish(inst, raw)?;
    Ok((
        part,
        SolverRoute {
            tag,
            trace: ctx.trace,
        },
    ))
}
