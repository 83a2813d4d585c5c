//! Coset lifting (small span), the balanced split for span at most `n/2`,
//! and the even-pairs reduction to one dimension lower.

use super::{classes, exact, rank_raw, solve_low, split, xor_raw, Ctx, PairingError, Pairs};
use crate::gf2::{mask, Basis, BitVec, Echelon, LinearMap};

/// Extends the span of `vals` with standard vectors up to rank `k`.
fn subspace_rows(n: u32, vals: &[u32], k: usize) -> Vec<BitVec> {
    let mut e = Echelon::new();
    for &v in vals {
        e.insert(v);
    }
    for bit in 0..n {
        if e.rank() >= k {
            break;
        }
        e.insert(1 << bit);
    }
    e.rows().iter().map(|&r| BitVec::new(r, n)).collect()
}

/// Span dimension at most `k` (`2 <= k <= 6`; `k = 6` needs even
/// multiplicities): halve down to groups of `2^(k-1)` targets, solve each
/// inside a `k`-dimensional subspace `S`, translate group `i` to coset `i`.
pub(crate) fn small_dimension(
    n: u32,
    vals: &[u32],
    k: usize,
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let k = k.min(n as usize) as u32;
    ctx.note(|| format!("coset-lift n={n} k={k}"));
    if n <= 5 {
        return exact::exact_pairs(n, vals, ctx);
    }
    if k == n {
        // only reachable with n = k = 6
        return ctx.nested(|ctx| {
            lift_even(
                n,
                vals,
                &mut |m, v: &[u32], c: &mut Ctx| exact::exact_pairs(m, v, c),
                ctx,
            )
        });
    }
    let coords = LinearMap::adapted_to(n, &subspace_rows(n, vals, k as usize));
    let back = coords.inverse();
    let local: Vec<u32> = vals.iter().map(|&v| coords.apply_bits(v)).collect();
    debug_assert!(local.iter().all(|&v| v >> k == 0));

    let mut groups: Vec<Vec<usize>> = vec![(0..vals.len()).collect()];
    for level in 0..(n - k) {
        let dim = n - level;
        let mut next = Vec::with_capacity(groups.len() * 2);
        for g in &groups {
            let sub: Vec<u32> = g.iter().map(|&i| local[i]).collect();
            let (a, b) = ctx.nested(|ctx| split::halve(dim, &sub, ctx))?;
            next.push(a.iter().map(|&j| g[j]).collect());
            next.push(b.iter().map(|&j| g[j]).collect());
        }
        groups = next;
    }

    let mut out = vec![(0, 0); vals.len()];
    for (t, g) in groups.iter().enumerate() {
        let sub: Vec<u32> = g.iter().map(|&i| local[i]).collect();
        let pairs = ctx.nested(|ctx| {
            if k <= 5 {
                exact::exact_pairs(k, &sub, ctx)
            } else {
                lift_even(
                    k,
                    &sub,
                    &mut |m, v: &[u32], c: &mut Ctx| exact::exact_pairs(m, v, c),
                    ctx,
                )
            }
        })?;
        let shift = (t as u32) << k;
        for (&i, &(p, q)) in g.iter().zip(&pairs) {
            out[i] = (back.apply_bits(shift | p), back.apply_bits(shift | q));
        }
    }
    Ok(out)
}

/// Even multiplicities, span dimension `k <= n/2`: balanced split into
/// `2^k` groups of at most three values, each solved in a coset of an
/// `(n-k)`-dimensional subspace containing the span.
pub(crate) fn dim_half_even(n: u32, vals: &[u32], ctx: &mut Ctx) -> Result<Pairs, PairingError> {
    let k = rank_raw(vals) as u32;
    ctx.note(|| format!("balanced-split n={n} k={k}"));
    let groups = split::three_value_groups(vals, k as usize)?;
    let m = n - k;
    let coords = LinearMap::adapted_to(n, &subspace_rows(n, vals, m as usize));
    let back = coords.inverse();
    let mut out = vec![(0, 0); vals.len()];
    for (t, g) in groups.iter().enumerate() {
        let sub: Vec<u32> = g.iter().map(|&i| coords.apply_bits(vals[i])).collect();
        debug_assert!(sub.iter().all(|&v| v >> m == 0));
        let pairs = ctx.nested(|ctx| solve_low(m, &sub, ctx))?;
        let shift = (t as u32) << m;
        for (&i, &(p, q)) in g.iter().zip(&pairs) {
            out[i] = (back.apply_bits(shift | p), back.apply_bits(shift | q));
        }
    }
    Ok(out)
}

pub(crate) type BaseSolver<'a> =
    dyn FnMut(u32, &[u32], &mut Ctx) -> Result<Pairs, PairingError> + 'a;

/// Whether projecting along `a` yields a valid downstairs instance, given
/// `j` pair units equal to `a` and the XOR `r` of one representative per
/// unit.
fn projection_ok(a: u32, j: usize, r: u32) -> bool {
    match j {
        0 => r == 0 || r == a,
        1 => r != 0 && r != a,
        _ => true,
    }
}

/// Picks the projection direction: the first target's value when it
/// works, then other target values in numeric order, then a non-target.
fn choose_direction(n: u32, first: u32, units: &[u32]) -> Option<u32> {
    let cls = classes(units);
    let r = xor_raw(units);
    let count = |a: u32| cls.get(&a).map_or(0, Vec::len);
    std::iter::once(first)
        .chain(cls.keys().copied())
        .chain(std::iter::once(r).filter(|&r| r != 0))
        .chain((1..(1u32 << n)).filter(|a| !cls.contains_key(a)).take(1))
        .find(|&a| projection_ok(a, count(a), r))
}

/// Even-pairs reduction: group equal targets into units of two, project
/// along a direction `a`, solve one target per unit in `F_2^(n-1)` with
/// `base`, and expand each downstairs pair `(p, q)` into the four vectors
/// `p, p+a, q, q+a`.
pub(crate) fn lift_even(
    n: u32,
    vals: &[u32],
    base: &mut BaseSolver<'_>,
    ctx: &mut Ctx,
) -> Result<Pairs, PairingError> {
    let mut units: Vec<(u32, [usize; 2])> = Vec::with_capacity(vals.len() / 2);
    for (&v, idx) in &classes(vals) {
        if idx.len() % 2 == 1 {
            return Err(PairingError::CaseNotApplicable(
                "odd multiplicity present".into(),
            ));
        }
        units.extend(idx.chunks(2).map(|c| (v, [c[0], c[1]])));
    }
    // keep the unit holding the first target in front
    units.sort_by_key(|&(_, ix)| ix[0]);
    let unit_vals: Vec<u32> = units.iter().map(|&(v, _)| v).collect();
    let a = choose_direction(n, vals[0], &unit_vals).ok_or_else(|| {
        PairingError::InternalSearchFailed("no valid projection direction".into())
    })?;
    ctx.note(|| format!("even-pairs n={n} direction={}", BitVec::new(a, n)));

    // coordinates sending a to the top unit vector
    let basis = Basis::from_rows(n, vec![BitVec::new(a, n)])?.extend_to_full();
    let back = LinearMap::embedding(&basis)?;
    let coords = back.inverse();
    let top = 1u32 << (n - 1);
    let low = mask(n - 1);

    let mut down: Vec<u32> = vec![0; units.len()];
    let mut sigma = 0u32;
    let mut a_units = Vec::new();
    for (u, &(v, _)) in units.iter().enumerate() {
        if v == a {
            a_units.push(u);
        } else {
            down[u] = coords.apply_bits(v) & low;
            sigma ^= down[u];
        }
    }
    fill_free_targets(n - 1, &mut down, &a_units, sigma);
    debug_assert!(down.iter().all(|&d| d != 0) && xor_raw(&down) == 0);

    let sub = ctx.nested(|ctx| base(n - 1, &down, ctx))?;
    let mut out = vec![(0, 0); vals.len()];
    for (u, &(v, ix)) in units.iter().enumerate() {
        let (p, q) = sub[u];
        let (first, second) = if v == a {
            ((p, p ^ top), (q, q ^ top))
        } else if coords.apply_bits(v) & top == 0 {
            ((p, q), (p ^ top, q ^ top))
        } else {
            ((p, q ^ top), (p ^ top, q))
        };
        out[ix[0]] = (back.apply_bits(first.0), back.apply_bits(first.1));
        out[ix[1]] = (back.apply_bits(second.0), back.apply_bits(second.1));
    }
    Ok(out)
}

/// Units equal to the projection direction carry no constraint downstairs
/// except that all downstairs targets are nonzero and sum to zero. Assigns
/// them nonzero values whose XOR is `sigma`, reusing an existing value.
fn fill_free_targets(m: u32, down: &mut [u32], free: &[usize], sigma: u32) {
    let j = free.len();
    if j == 0 {
        return;
    }
    let x = down.iter().copied().find(|&d| d != 0).unwrap_or(1);
    if j == 1 {
        down[free[0]] = sigma;
        return;
    }
    for &u in &free[..j - 2] {
        down[u] = x;
    }
    let rem = if (j - 2) % 2 == 1 { sigma ^ x } else { sigma };
    let (s1, s2) = if rem == 0 {
        (x, x)
    } else {
        let y = [x, 1, 2, 3]
            .into_iter()
            .find(|&y| y != 0 && y != rem && y <= mask(m))
            .expect("dimension at least 2");
        (y, y ^ rem)
    };
    down[free[j - 2]] = s1;
    down[free[j - 1]] = s2;
}

#[cfg(test)]
mod tests {
    use super::super::test_util::valid_raw;
    use super::*;
    use std::time::Duration;

    fn ctx() -> Ctx {
        Ctx::new(Duration::from_secs(20))
    }

    fn exact_base() -> impl FnMut(u32, &[u32], &mut Ctx) -> Result<Pairs, PairingError> {
        |m, v: &[u32], c: &mut Ctx| exact::exact_pairs(m, v, c)
    }

    #[test]
    fn translate_pairing_for_single_value() {
        let vals = vec![1u32; 8];
        let out = small_dimension(4, &vals, 2, &mut ctx()).unwrap();
        assert!(valid_raw(4, &vals, &out));
        let vals = vec![1u32; 32];
        let out = small_dimension(6, &vals, 2, &mut ctx()).unwrap();
        assert!(valid_raw(6, &vals, &out));
    }

    #[test]
    fn coset_lift_dimension_five_in_eight() {
        // 128 targets from a 5-dim subspace with odd multiplicities
        let mut vals: Vec<u32> = Vec::new();
        for i in 0..128u32 {
            vals.push(1 + (i * 7) % 31);
        }
        let fix = xor_raw(&vals);
        if fix != 0 {
            let last = vals.len() - 1;
            vals[last] ^= fix;
            if vals[last] == 0 {
                vals[last] = fix;
                vals[last - 1] ^= fix;
            }
        }
        assert_eq!(xor_raw(&vals), 0);
        let out = small_dimension(8, &vals, rank_raw(&vals), &mut ctx()).unwrap();
        assert!(valid_raw(8, &vals, &out));
    }

    #[test]
    fn even_pairs_examples() {
        let vals = [1, 1, 6, 6];
        let out = lift_even(3, &vals, &mut exact_base(), &mut ctx()).unwrap();
        assert!(valid_raw(3, &vals, &out));
        // four distinct values summing to 0, each twice: no target value
        // works as the projection direction
        let vals = [1, 1, 2, 2, 4, 4, 7, 7];
        let out = lift_even(4, &vals, &mut exact_base(), &mut ctx()).unwrap();
        assert!(valid_raw(4, &vals, &out));
        // repeated direction value
        let vals = [3, 3, 3, 3, 3, 3, 5, 5];
        let out = lift_even(4, &vals, &mut exact_base(), &mut ctx()).unwrap();
        assert!(valid_raw(4, &vals, &out));
    }

    #[test]
    fn even_pairs_dimension_six() {
        let pool = [1u32, 2, 4, 8, 16, 32, 63, 21, 42, 7, 56, 11, 13, 17, 33, 48];
        let vals: Vec<u32> = (0..32).map(|i| pool[i / 2]).collect();
        let out = lift_even(6, &vals, &mut exact_base(), &mut ctx()).unwrap();
        assert!(valid_raw(6, &vals, &out));
    }

    #[test]
    fn direction_rules() {
        assert!(projection_ok(5, 2, 0));
        assert!(!projection_ok(5, 1, 5));
        assert!(projection_ok(5, 1, 3));
        assert!(projection_ok(5, 0, 0));
        assert!(!projection_ok(5, 0, 3));
        // units 1,2,4,7: every target direction fails, a non-target works
        let a = choose_direction(3, 1, &[1, 2, 4, 7]).unwrap();
        assert!(![1, 2, 4, 7].contains(&a));
    }

    #[test]
    fn dim_half_examples() {
        let vals = [1, 1, 2, 2, 3, 3, 1, 1];
        let out = dim_half_even(4, &vals, &mut ctx()).unwrap();
        assert!(valid_raw(4, &vals, &out));
        let pool = [1u32, 2, 3, 4, 5, 6, 7];
        let vals: Vec<u32> = (0..32).map(|i| pool[(i / 2) % 7]).collect();
        let out = dim_half_even(6, &vals, &mut ctx()).unwrap();
        assert!(valid_raw(6, &vals, &out));
    }
}
