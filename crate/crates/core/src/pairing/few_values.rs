//! Instances with at most `n` distinct target values.
//!
//! The recursion splits the targets into bins that live in cosets of a
//! hyperplane (or of a codimension-2 subspace), each bin again having few
//! distinct values, and solves the bins one or two dimensions lower.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::distribute::{distribute, Bin};
use super::{classes, exact, lift, rank_raw, xor_raw, Ctx, PairingError, Pairs, WorkingSplit};
use crate::gf2::{self, mask, Basis, BitVec, LinearMap};

type Classes = BTreeMap<u32, Vec<usize>>;

const ORDER_ATTEMPTS: u64 = 64;
const KERNEL_ENUMERATION_LIMIT: u32 = 16;

fn failed(msg: impl Into<String>) -> PairingError {
    PairingError::InternalSearchFailed(msg.into())
}

pub(crate) fn at_most_n(n: u32, vals: &[u32], ctx: &mut Ctx) -> Result<Pairs, PairingError> {
    ctx.check_time()?;
    if n <= 5 {
        return exact::exact_pairs(n, vals, ctx);
    }
    let cls = classes(vals);
    let l = cls.len();
    if l > n as usize {
        return Err(PairingError::CaseNotApplicable(format!(
            "{l} distinct values exceed n = {n}"
        )));
    }
    let odd: Vec<u32> = cls
        .iter()
        .filter(|(_, ix)| ix.len() % 2 == 1)
        .map(|(&v, _)| v)
        .collect();
    let m = odd.len();
    if m == 0 {
        if n == 6 {
            ctx.note(|| "few-values n=6 all even: even-pairs reduction".into());
            return ctx.nested(|c| {
                lift::lift_even(
                    6,
                    vals,
                    &mut |k, v: &[u32], c2: &mut Ctx| exact::exact_pairs(k, v, c2),
                    c,
                )
            });
        }
        if l <= 2 {
            ctx.note(|| format!("few-values n={n} l={l}: coset lift"));
            return ctx.nested(|c| lift::small_dimension(n, vals, 2, c));
        }
        let distinct: Vec<u32> = cls.keys().copied().collect();
        if l == n as usize && rank_raw(&distinct) == l {
            return exactly_n_independent(n, vals, &cls, ctx);
        }
        return even_two_cosets(n, vals, &cls, ctx);
    }
    if l < n as usize {
        return odd_spare_dimension(n, vals, &cls, &odd, ctx);
    }
    if m + 2 <= n as usize {
        return odd_few(n, vals, &cls, &odd, ctx);
    }
    odd_many(n, vals, &cls, &odd, ctx)
}

/// Pair units left for distribution after the forced copies. `synthetic`
/// copies are forced but not real targets; `outside` copies are real
/// targets handled apart from the bins.
fn pools_after(
    cls: &Classes,
    bins: &[Bin],
    synthetic: &[u32],
    outside: &[u32],
) -> Option<Vec<(u32, usize)>> {
    let mut out = Vec::with_capacity(cls.len());
    for (&v, ix) in cls {
        let mut forced: usize = bins
            .iter()
            .map(|b| b.forced.get(&v).copied().unwrap_or(0))
            .sum();
        forced -= synthetic.iter().filter(|&&s| s == v).count();
        forced += outside.iter().filter(|&&s| s == v).count();
        let left = ix.len().checked_sub(forced)?;
        if left % 2 == 1 {
            return None;
        }
        out.push((v, left / 2));
    }
    Some(out)
}

/// Per-bin value counts (forced plus distributed units), with one copy of
/// each bin's synthetic value removed.
fn bin_counts(
    bins: &[Bin],
    pools: &[(u32, usize)],
    units: &[Vec<usize>],
    synthetic: &[Option<u32>],
) -> Vec<BTreeMap<u32, usize>> {
    bins.iter()
        .enumerate()
        .map(|(b, bin)| {
            let mut c = bin.forced.clone();
            for (k, &(v, _)) in pools.iter().enumerate() {
                if units[b][k] > 0 {
                    *c.entry(v).or_insert(0) += 2 * units[b][k];
                }
            }
            if let Some(Some(s)) = synthetic.get(b) {
                let e = c.get_mut(s).expect("synthetic value is forced");
                *e -= 1;
                if *e == 0 {
                    c.remove(s);
                }
            }
            c
        })
        .collect()
}

/// Turns per-bin counts into index lists, skipping indices in `reserved`.
fn realize(cls: &Classes, counts: &[BTreeMap<u32, usize>], reserved: &[usize]) -> Vec<Vec<usize>> {
    let mut cursor: BTreeMap<u32, Vec<usize>> = cls
        .iter()
        .map(|(&v, ix)| {
            let free: Vec<usize> = ix
                .iter()
                .copied()
                .filter(|i| !reserved.contains(i))
                .collect();
            (v, free)
        })
        .collect();
    counts
        .iter()
        .map(|c| {
            let mut out = Vec::new();
            for (&v, &k) in c {
                let list = cursor.get_mut(&v).expect("value present");
                out.extend(list.drain(..k));
            }
            out.sort_unstable();
            out
        })
        .collect()
}

/// Tries each bin layout in turn; returns index lists for the first one
/// the distributor can complete.
fn split_by_layouts(
    cls: &Classes,
    layouts: Vec<Vec<Bin>>,
) -> Result<Vec<Vec<usize>>, PairingError> {
    let mut last = failed("no layout given");
    for bins in layouts {
        let Some(pools) = pools_after(cls, &bins, &[], &[]) else {
            continue;
        };
        match distribute(&bins, &pools) {
            Ok(units) => {
                let counts = bin_counts(&bins, &pools, &units, &[]);
                return Ok(realize(cls, &counts, &[]));
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Bin 0 is solved in a hyperplane `H` containing every target, bin 1 in
/// its complement `H + t`.
fn two_cosets(
    n: u32,
    vals: &[u32],
    groups: Vec<Vec<usize>>,
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let split = WorkingSplit {
        groups,
        ..Default::default()
    };
    split.check(vals.len())?;
    let distinct: Vec<BitVec> = classes(vals).keys().map(|&v| BitVec::new(v, n)).collect();
    let coords = LinearMap::adapted_to(n, &distinct);
    let back = coords.inverse();
    let top = 1u32 << (n - 1);
    let low = mask(n - 1);
    let mut out = vec![(0, 0); vals.len()];
    for (side, g) in split.groups.iter().enumerate() {
        let sub: Vec<u32> = g.iter().map(|&i| coords.apply_bits(vals[i])).collect();
        if sub.iter().any(|&v| v & top != 0) {
            return Err(failed("targets span the whole space"));
        }
        let sub: Vec<u32> = sub.into_iter().map(|v| v & low).collect();
        let pairs = ctx.nested(|c| at_most_n(n - 1, &sub, c))?;
        let shift = if side == 1 { top } else { 0 };
        for (&i, &(p, q)) in g.iter().zip(&pairs) {
            out[i] = (back.apply_bits(p | shift), back.apply_bits(q | shift));
        }
    }
    Ok(out)
}

fn counts_of(cls: &Classes) -> BTreeMap<u32, usize> {
    cls.iter().map(|(&v, ix)| (v, ix.len())).collect()
}

/// Even multiplicities, span below `n`: all copies of one value go to each
/// side, the rest is spread in pairs.
fn even_two_cosets(
    n: u32,
    vals: &[u32],
    cls: &Classes,
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let half = 1usize << (n - 2);
    let cnt = counts_of(cls);
    let small: Vec<u32> = cnt
        .iter()
        .filter(|(_, &c)| c <= half)
        .map(|(&v, _)| v)
        .collect();
    ctx.note(|| format!("few-values n={n} l={} even: two cosets", cls.len()));
    let max = n as usize - 1;
    let mut layouts = Vec::new();
    if small.len() >= 2 {
        let (u1, u2) = (small[0], small[1]);
        layouts.push(vec![
            Bin::new(half, max).force(u1, cnt[&u1]),
            Bin::new(half, max).force(u2, cnt[&u2]),
        ]);
    }
    layouts.push(vec![Bin::new(half, max), Bin::new(half, max)]);
    let groups = split_by_layouts(cls, layouts)?;
    two_cosets(n, vals, groups, ctx)
}

/// Exactly `n` linearly independent values, all with even multiplicity:
/// project along the most frequent value `u1` and rebalance counts that
/// are 2 mod 4 so every downstairs value stays even.
fn exactly_n_independent(
    n: u32,
    vals: &[u32],
    cls: &Classes,
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let cnt = counts_of(cls);
    let mut order: Vec<u32> = cnt.keys().copied().collect();
    order.sort_by_key(|v| (std::cmp::Reverse(cnt[v]), *v));
    let twos = |skip: u32| {
        cnt.iter()
            .filter(|(&v, &c)| v != skip && c % 4 == 2)
            .map(|(&v, _)| v)
            .collect::<Vec<u32>>()
    };
    let u1 = order
        .iter()
        .copied()
        .find(|&u| twos(u).len() <= cnt[&u] / 2)
        .ok_or_else(|| failed("no value can absorb the 2 mod 4 corrections"))?;
    ctx.note(|| {
        format!(
            "few-values n={n} exactly n independent: project along {}",
            BitVec::new(u1, n)
        )
    });

    let mut rows = vec![BitVec::new(u1, n)];
    rows.extend(cnt.keys().filter(|&&v| v != u1).map(|&v| BitVec::new(v, n)));
    let back = LinearMap::embedding(&Basis::from_rows(n, rows)?)?;
    let coords = back.inverse();
    let top = 1u32 << (n - 1);
    let low = mask(n - 1);

    let mut units: Vec<(u32, [usize; 2])> = Vec::new();
    for (&v, ix) in cls {
        units.extend(ix.chunks(2).map(|c| (v, [c[0], c[1]])));
    }
    let filler = *cnt.keys().find(|&&v| v != u1).expect("at least two values");
    let corrections = twos(u1);
    let (mut i1, mut i2, mut i3) = (Vec::new(), Vec::new(), Vec::new());
    let mut down = vec![0u32; units.len()];
    let mut pending = corrections.iter();
    for (u, &(v, _)) in units.iter().enumerate() {
        if v != u1 {
            down[u] = coords.apply_bits(v) & low;
            i1.push(u);
        } else if let Some(&w) = pending.next() {
            down[u] = coords.apply_bits(w) & low;
            i2.push(u);
        } else {
            down[u] = coords.apply_bits(filler) & low;
            i3.push(u);
        }
    }
    let split = WorkingSplit {
        groups: vec![(0..units.len()).collect()],
        index_sets: vec![("I1", i1), ("I2", i2), ("I3", i3)],
        translation: None,
    };
    split.check(units.len())?;
    debug_assert!(super::all_even_raw(&down));

    let sub = ctx.nested(|c| at_most_n(n - 1, &down, c))?;
    let mut out = vec![(0, 0); vals.len()];
    for (u, &(v, ix)) in units.iter().enumerate() {
        let (p, q) = sub[u];
        let (a, b) = if v == u1 {
            ((p, p ^ top), (q, q ^ top))
        } else {
            ((p, q), (p ^ top, q ^ top))
        };
        out[ix[0]] = (back.apply_bits(a.0), back.apply_bits(a.1));
        out[ix[1]] = (back.apply_bits(b.0), back.apply_bits(b.1));
    }
    Ok(out)
}

fn singles(mut bin: Bin, values: &[u32]) -> Bin {
    for &v in values {
        bin = bin.force(v, 1);
    }
    bin
}

/// Odd multiplicities and fewer than `n` distinct values: one copy of
/// each odd value on the first side, everything else in pairs.
fn odd_spare_dimension(
    n: u32,
    vals: &[u32],
    cls: &Classes,
    odd: &[u32],
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let half = 1usize << (n - 2);
    let max = n as usize - 1;
    ctx.note(|| {
        format!(
            "few-values n={n} l={} m={}: two cosets",
            cls.len(),
            odd.len()
        )
    });
    let layouts = vec![vec![singles(Bin::new(half, max), odd), Bin::new(half, max)]];
    let groups = split_by_layouts(cls, layouts)?;
    two_cosets(n, vals, groups, ctx)
}

/// `l = n` with at most `n - 2` odd values: an even value with few copies
/// stays entirely on the second side, the rarest remaining value entirely
/// on the first.
fn odd_few(
    n: u32,
    vals: &[u32],
    cls: &Classes,
    odd: &[u32],
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let half = 1usize << (n - 2);
    let max = n as usize - 1;
    let cnt = counts_of(cls);
    ctx.note(|| format!("few-values n={n} m={}: two cosets", odd.len()));
    let mut layouts = Vec::new();
    let mut evens: Vec<u32> = cnt
        .iter()
        .filter(|(_, &c)| c % 2 == 0 && c <= half)
        .map(|(&v, _)| v)
        .collect();
    evens.sort_by_key(|v| (cnt[v], *v));
    if let Some(&un) = evens.first() {
        let ui = cnt
            .keys()
            .copied()
            .filter(|&v| v != un)
            .min_by_key(|v| (cnt[v], *v))
            .expect("several values");
        let mut first = singles(Bin::new(half, max), odd);
        let already = first.forced.get(&ui).copied().unwrap_or(0);
        first = first.force(ui, cnt[&ui] - already);
        layouts.push(vec![first, Bin::new(half, max).force(un, cnt[&un])]);
    }
    layouts.push(vec![singles(Bin::new(half, max), odd), Bin::new(half, max)]);
    let groups = split_by_layouts(cls, layouts)?;
    two_cosets(n, vals, groups, ctx)
}

/// Zero-sum subsets of `odd` as bitmasks (excluding the empty and the full
/// set), smallest first; `None` if the kernel is too large to enumerate.
fn zero_sum_masks(odd: &[u32]) -> Option<Vec<u64>> {
    let m = odd.len();
    // elimination tracking which originals make up each row
    let mut rows: Vec<(u32, u64)> = Vec::new();
    let mut kernel: Vec<u64> = Vec::new();
    for (i, &v) in odd.iter().enumerate() {
        let (mut x, mut c) = (v, 1u64 << i);
        for &(r, rc) in &rows {
            if x ^ r < x {
                x ^= r;
                c ^= rc;
            }
        }
        if x == 0 {
            kernel.push(c);
        } else {
            rows.push((x, c));
            rows.sort_by_key(|r| std::cmp::Reverse(r.0));
        }
    }
    if kernel.len() as u32 > KERNEL_ENUMERATION_LIMIT {
        return None;
    }
    let full = (1u64 << m) - 1;
    let mut all: Vec<u64> = Vec::new();
    for sel in 1u64..(1 << kernel.len()) {
        let mut s = 0;
        for (k, &b) in kernel.iter().enumerate() {
            if sel >> k & 1 == 1 {
                s ^= b;
            }
        }
        if s != full {
            all.push(s);
        }
    }
    all.sort_by_key(|s| (s.count_ones(), *s));
    Some(all)
}

fn members(odd: &[u32], mask: u64) -> Vec<u32> {
    (0..odd.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| odd[i])
        .collect()
}

/// `l = n` and at least `n - 1` odd values.
fn odd_many(
    n: u32,
    vals: &[u32],
    cls: &Classes,
    odd: &[u32],
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let half = 1usize << (n - 2);
    let max = n as usize - 1;
    let subsets = zero_sum_masks(odd).ok_or_else(|| failed("too many odd values"))?;
    let full = (1u64 << odd.len()) - 1;

    let even: Vec<u64> = subsets
        .iter()
        .copied()
        .filter(|s| s.count_ones() % 2 == 0)
        .collect();
    if !even.is_empty() {
        ctx.note(|| format!("few-values n={n} m={}: even zero-sum split", odd.len()));
        let layouts = even
            .iter()
            .take(8)
            .map(|&u| {
                vec![
                    singles(Bin::new(half, max), &members(odd, u)),
                    singles(Bin::new(half, max), &members(odd, full ^ u)),
                ]
            })
            .collect();
        let groups = split_by_layouts(cls, layouts)?;
        return two_cosets(n, vals, groups, ctx);
    }
    // only odd proper zero-sum subsets (or none): both special values must
    // come from the same side
    let side = subsets.first().copied();
    three_cosets(n, vals, cls, odd, side, ctx)
}

/// Three-coset construction. Two odd values `ui`, `uj` get prefix `01` in
/// new coordinates (all others `00`); the remaining odd values are split
/// into two groups whose sums `u1'`, `u2'` replace `ui`, `uj` in the bins
/// for prefixes `10` and `11`; a translation `t` inside the `00` part
/// swaps the sums back.
fn three_cosets(
    n: u32,
    vals: &[u32],
    cls: &Classes,
    odd: &[u32],
    side: Option<u64>,
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let half = 1usize << (n - 2);
    let cnt = counts_of(cls);
    let distinct: Vec<BitVec> = cnt.keys().map(|&v| BitVec::new(v, n)).collect();
    let phi1 = *gf2::annihilator(n, &distinct)
        .first()
        .ok_or_else(|| failed("targets span the whole space"))?;

    let mut cands: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..odd.len() {
        for b in a + 1..odd.len() {
            if let Some(s) = side {
                if (s >> a & 1) != (s >> b & 1) {
                    continue;
                }
            }
            cands.push((cnt[&odd[a]] + cnt[&odd[b]], a, b));
        }
    }
    cands.sort_unstable();
    let mut last = failed("no admissible pair of odd values");
    for (total, a, b) in cands {
        if total > half + 2 {
            break;
        }
        let (ui, uj) = (odd[a], odd[b]);
        let constraints: Vec<(BitVec, bool)> = distinct
            .iter()
            .map(|&v| (v, v.bits() == ui || v.bits() == uj))
            .collect();
        let Some(phi2) = gf2::solve_functional(n, &constraints) else {
            continue;
        };
        let functionals = Basis::from_rows(n, vec![phi1, phi2])?.extend_to_full();
        let coords = LinearMap::from_functionals(n, functionals.rows())?;
        ctx.note(|| {
            format!(
                "few-values n={n} m={}: three cosets around {} {}",
                odd.len(),
                BitVec::new(ui, n),
                BitVec::new(uj, n)
            )
        });
        match three_cosets_with(n, vals, cls, odd, (ui, uj), &coords, side, ctx) {
            Ok(out) => return Ok(out),
            Err(e @ PairingError::BudgetExhausted) => return Err(e),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Splits of the remaining odd values into groups of sizes `split_at` and
/// `rest.len() - split_at` with nonzero sums: sorted order and its
/// rotations first, then seeded shuffles. No split appears twice.
fn group_orders(rest: &[u32], split_at: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    let mut consider = |o: &[u32]| {
        let (mut a, mut b) = (o[..split_at].to_vec(), o[split_at..].to_vec());
        if xor_raw(&a) == 0 || xor_raw(&b) == 0 {
            return;
        }
        a.sort_unstable();
        b.sort_unstable();
        if !out.iter().any(|(x, _)| *x == a) {
            out.push((a, b));
        }
    };
    let mut o = rest.to_vec();
    for _ in 0..rest.len() {
        consider(&o);
        o.rotate_left(1);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..ORDER_ATTEMPTS {
        o.shuffle(&mut rng);
        consider(&o);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn three_cosets_with(
    n: u32,
    vals: &[u32],
    cls: &Classes,
    odd: &[u32],
    (ui, uj): (u32, u32),
    coords: &LinearMap,
    side: Option<u64>,
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let m = odd.len();
    let half = 1usize << (n - 2);
    let quarter = 1usize << (n - 3);
    let rest: Vec<u32> = odd
        .iter()
        .copied()
        .filter(|&v| v != ui && v != uj)
        .collect();
    let c = if m.is_multiple_of(4) {
        m / 2 + 1
    } else {
        m / 2
    };
    let mut chosen = None;
    let mut last = failed("no nonzero group sums");
    for (g1, g2) in group_orders(&rest, c - 2) {
        let (s1, s2) = (xor_raw(&g1), xor_raw(&g2));
        let bins = vec![
            singles(Bin::new(quarter, n as usize - 2), &g1)
                .force(s1, 1)
                .forbid(ui)
                .forbid(uj),
            singles(Bin::new(quarter, n as usize - 2), &g2)
                .force(s2, 1)
                .forbid(ui)
                .forbid(uj),
            Bin::new(half, n as usize - 1),
        ];
        // the single copies of ui and uj are realized by the translation
        let Some(pools) = pools_after(cls, &bins, &[s1, s2], &[ui, uj]) else {
            continue;
        };
        match distribute(&bins, &pools) {
            Ok(units) => {
                chosen = Some((s1, s2, bins, pools, units));
                break;
            }
            Err(e) => last = e,
        }
    }
    let (s1, s2, bins, pools, units) = chosen.ok_or(last)?;
    let counts = bin_counts(&bins, &pools, &units, &[Some(s1), Some(s2), None]);
    let (ii, ij) = (cls[&ui][0], cls[&uj][0]);
    let groups = realize(cls, &counts, &[ii, ij]);

    let mut split = WorkingSplit {
        groups: groups.clone(),
        ..Default::default()
    };
    split.groups.push(vec![ii, ij]);
    if let Some(s) = side {
        let idx_of =
            |mask: u64| -> Vec<usize> { members(odd, mask).iter().map(|v| cls[v][0]).collect() };
        split.index_sets.push(("U1", idx_of(s)));
        split.index_sets.push(("U2", idx_of(((1u64 << m) - 1) ^ s)));
    }
    split.check(vals.len())?;

    let back = coords.inverse();
    let tr = |v: u32| coords.apply_bits(v);
    let low2 = mask(n - 2);
    let low1 = mask(n - 1);
    let local = |extra: Option<u32>, g: &[usize], keep: u32| -> Result<Vec<u32>, PairingError> {
        let mut out: Vec<u32> = extra.into_iter().map(tr).collect();
        out.extend(g.iter().map(|&i| tr(vals[i])));
        if out.iter().any(|&v| v & !keep != 0) {
            return Err(failed("value outside its coset"));
        }
        Ok(out)
    };
    let d1 = local(Some(s1), &groups[0], low2)?;
    let d2 = local(Some(s2), &groups[1], low2)?;
    let d3 = local(None, &groups[2], low1)?;
    let p1 = ctx.nested(|c| at_most_n(n - 2, &d1, c))?;
    let p2 = ctx.nested(|c| at_most_n(n - 2, &d2, c))?;
    let p3 = ctx.nested(|c| at_most_n(n - 1, &d3, c))?;

    let pre1 = 0b10u32 << (n - 2);
    let pre2 = 0b11u32 << (n - 2);
    let (p11, q11) = (p1[0].0 | pre1, p1[0].1 | pre1);
    let (p21, q21) = (p2[0].0 | pre2, p2[0].1 | pre2);
    let t = p11 ^ p21 ^ tr(ui);
    ctx.note(|| format!("translation {}", BitVec::new(t, n)));

    let mut out = vec![(0, 0); vals.len()];
    let mut put = |i: usize, p: u32, q: u32| out[i] = (back.apply_bits(p), back.apply_bits(q));
    put(ii, p11, p21 ^ t);
    put(ij, q11, q21 ^ t);
    for (&i, &(p, q)) in groups[0].iter().zip(&p1[1..]) {
        put(i, p | pre1, q | pre1);
    }
    for (&i, &(p, q)) in groups[1].iter().zip(&p2[1..]) {
        put(i, (p | pre2) ^ t, (q | pre2) ^ t);
    }
    for (&i, &(p, q)) in groups[2].iter().zip(&p3) {
        put(i, p, q);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::test_util::valid_raw;
    use super::*;
    use std::time::Duration;

    fn ctx() -> Ctx {
        Ctx::new(Duration::from_secs(30))
    }

    fn expand(spec: &[(u32, usize)]) -> Vec<u32> {
        spec.iter()
            .flat_map(|&(v, c)| std::iter::repeat_n(v, c))
            .collect()
    }

    fn solve(n: u32, vals: &[u32]) {
        assert_eq!(vals.len(), 1 << (n - 1));
        assert_eq!(xor_raw(vals), 0);
        let out = at_most_n(n, vals, &mut ctx()).unwrap();
        assert!(valid_raw(n, vals, &out), "invalid partition for {vals:?}");
    }

    #[test]
    fn small_examples() {
        solve(4, &expand(&[(1, 3), (2, 1), (4, 1), (7, 3)]));
        solve(4, &expand(&[(1, 5), (2, 1), (4, 1), (7, 1)]));
        let mut c = ctx();
        assert!(matches!(
            at_most_n(3, &[1, 2, 4, 7], &mut c),
            Ok(_) | Err(PairingError::CaseNotApplicable(_))
        ));
    }

    #[test]
    fn even_branches() {
        // l < n
        solve(7, &expand(&[(1, 20), (2, 14), (4, 10), (8, 12), (3, 8)]));
        // l = n dependent
        solve(
            7,
            &expand(&[(1, 10), (2, 10), (3, 10), (4, 10), (8, 8), (16, 8), (24, 8)]),
        );
        // l = n independent, with counts 2 mod 4
        solve(
            7,
            &expand(&[(1, 22), (2, 6), (4, 6), (8, 6), (16, 10), (32, 6), (64, 8)]),
        );
        solve(
            8,
            &expand(&[
                (1, 30),
                (2, 14),
                (4, 14),
                (8, 14),
                (16, 14),
                (32, 14),
                (64, 14),
                (128, 14),
            ]),
        );
    }

    #[test]
    fn odd_branches() {
        // l < n with odd values
        solve(6, &expand(&[(1, 11), (2, 9), (3, 8), (4, 1), (7, 3)]));
        // m <= n - 2
        solve(
            6,
            &expand(&[(1, 9), (2, 7), (4, 5), (7, 3), (8, 4), (16, 4)]),
        );
        // circuit of n odd values: 1,2,4,8,16,31 at n = 6
        solve(
            6,
            &expand(&[(1, 5), (2, 3), (4, 7), (8, 5), (16, 7), (31, 5)]),
        );
        // two odd circuits {1,2,3} and {4,8,12} at n = 6
        solve(
            6,
            &expand(&[(1, 5), (2, 5), (3, 5), (4, 5), (8, 7), (12, 5)]),
        );
    }

    #[test]
    fn odd_branches_larger() {
        // circuit of 8 odd values at n = 8
        let c: Vec<u32> = vec![1, 2, 4, 8, 16, 32, 64, 127];
        let counts = [23, 15, 17, 13, 19, 15, 11, 15];
        let spec: Vec<(u32, usize)> = c.iter().copied().zip(counts).collect();
        solve(8, &expand(&spec));
        // even zero-sum subsets {1,2,4,7} and {8,16,32,56}
        let c: Vec<u32> = vec![1, 2, 4, 7, 8, 16, 32, 56];
        let spec: Vec<(u32, usize)> = c.iter().copied().zip(counts).collect();
        solve(8, &expand(&spec));
        // n - 1 odd values forming a circuit plus one even value
        let spec = [(1, 9), (2, 9), (4, 9), (8, 9), (16, 9), (31, 9), (32, 10)];
        solve(7, &expand(&spec));
    }

    #[test]
    fn zero_sum_masks_lists_subsets() {
        let m = zero_sum_masks(&[1, 2, 3, 4, 8, 12]).unwrap();
        assert_eq!(m, vec![0b000111, 0b111000]);
    }
}
