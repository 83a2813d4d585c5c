//! Splitting target multisets into zero-sum halves.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{classes, exact, Ctx, PairingError};
use crate::gf2::{self, BitVec, LinearMap, Parity, VectorMultiset};

const SHUFFLE_ATTEMPTS: u64 = 64;

/// Splits `2^(n-1)` values (span dimension below `n`, XOR 0) into two
/// index lists of size `2^(n-2)`, each with XOR 0. Values sharing a pair
/// slot stay on the same side, so even multiplicities remain even.
pub(crate) fn halve(
    n: u32,
    vals: &[u32],
    ctx: &mut Ctx,
) -> Result<(Vec<usize>, Vec<usize>), PairingError> {
    let half = 1usize << (n - 2);
    debug_assert_eq!(vals.len(), 2 * half);
    if n <= 5 {
        return halve_by_hyperplane(n, vals, ctx);
    }

    let mut odd: Vec<usize> = Vec::new();
    let mut units: Vec<[usize; 2]> = Vec::new();
    for idx in classes(vals).values() {
        let rest = if idx.len() % 2 == 1 {
            odd.push(idx[0]);
            &idx[1..]
        } else {
            &idx[..]
        };
        units.extend(rest.chunks(2).map(|c| [c[0], c[1]]));
    }
    let l = odd.len();
    ctx.note(|| format!("halve n={n} odd-values={l}"));

    let odd_in_a: Vec<usize> = if l <= half {
        odd.clone()
    } else {
        let odd_vals: Vec<u32> = odd.iter().map(|&i| vals[i]).collect();
        let chosen = split_odd_values(n, &odd_vals, half)?;
        chosen.into_iter().map(|k| odd[k]).collect()
    };
    let mut in_a = vec![false; vals.len()];
    for &i in &odd_in_a {
        in_a[i] = true;
    }
    let mut size_a = odd_in_a.len();
    for u in &units {
        if size_a == half {
            break;
        }
        in_a[u[0]] = true;
        in_a[u[1]] = true;
        size_a += 2;
    }
    if size_a != half {
        return Err(PairingError::InternalSearchFailed(
            "halving could not fill the first half".into(),
        ));
    }
    let a: Vec<usize> = (0..vals.len()).filter(|&i| in_a[i]).collect();
    let b: Vec<usize> = (0..vals.len()).filter(|&i| !in_a[i]).collect();
    Ok((a, b))
}

/// Small case: solve exactly, then split by which side of a hyperplane
/// containing the span each pair lies on.
fn halve_by_hyperplane(
    n: u32,
    vals: &[u32],
    ctx: &mut Ctx,
) -> Result<(Vec<usize>, Vec<usize>), PairingError> {
    let vs: Vec<BitVec> = vals.iter().map(|&v| BitVec::new(v, n)).collect();
    let phi = *gf2::annihilator(n, &vs)
        .first()
        .ok_or_else(|| PairingError::PreconditionViolated("span is the whole space".into()))?;
    let pairs = exact::exact_pairs(n, vals, ctx)?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, &(p, _)) in pairs.iter().enumerate() {
        if (p & phi.bits()).count_ones() % 2 == 0 {
            a.push(i);
        } else {
            b.push(i);
        }
    }
    Ok((a, b))
}

/// Chooses an even-sized zero-sum subset of the distinct odd-multiplicity
/// values so that both it and its complement have at most `half` elements.
/// Returns positions into `odd_vals`.
fn split_odd_values(n: u32, odd_vals: &[u32], half: usize) -> Result<Vec<usize>, PairingError> {
    let l = odd_vals.len();
    let order: Vec<usize> = (0..l).collect();

    // 4-blocks {x00, x01, x10, x11} in coordinates flattening the span
    let coords = LinearMap::adapted_to(
        n,
        &odd_vals
            .iter()
            .map(|&v| BitVec::new(v, n))
            .collect::<Vec<_>>(),
    );
    let mut by_prefix: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for (k, &v) in odd_vals.iter().enumerate() {
        by_prefix
            .entry(coords.apply_bits(v) >> 2)
            .or_default()
            .push(k);
    }
    let blocks: Vec<Vec<usize>> = by_prefix.into_values().filter(|g| g.len() == 4).collect();

    if let Some(found) = pieces_then_pick(n, odd_vals, blocks, &order, half) {
        return Ok(found);
    }
    if let Some(found) = pieces_then_pick(n, odd_vals, Vec::new(), &order, half) {
        return Ok(found);
    }
    for attempt in 0..SHUFFLE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        let mut shuffled = order.clone();
        shuffled.shuffle(&mut rng);
        if let Some(found) = pieces_then_pick(n, odd_vals, Vec::new(), &shuffled, half) {
            return Ok(found);
        }
    }
    Err(PairingError::InternalSearchFailed(format!(
        "no balanced zero-sum split of {l} odd values"
    )))
}

/// Decomposes the values into disjoint zero-sum pieces (the given blocks
/// first, then small circuits), then picks pieces whose total size is even
/// and lies in `[l - half, half]`.
fn pieces_then_pick(
    n: u32,
    odd_vals: &[u32],
    blocks: Vec<Vec<usize>>,
    order: &[usize],
    half: usize,
) -> Option<Vec<usize>> {
    let l = odd_vals.len();
    let mut taken = vec![false; l];
    let mut pieces = blocks;
    for p in &pieces {
        for &k in p {
            taken[k] = true;
        }
    }
    let mut rest: Vec<usize> = order.iter().copied().filter(|&k| !taken[k]).collect();
    while !rest.is_empty() {
        let vs = VectorMultiset::new(
            n,
            rest.iter().map(|&k| BitVec::new(odd_vals[k], n)).collect(),
        )
        .ok()?;
        match gf2::zero_sum_subset(&vs, n as usize, Parity::Any) {
            Ok(sub) if sub.len() < rest.len() => {
                let piece: Vec<usize> = sub.iter().map(|&s| rest[s]).collect();
                let mut drop = vec![false; rest.len()];
                for &s in &sub {
                    drop[s] = true;
                }
                rest = rest
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !drop[*j])
                    .map(|(_, &k)| k)
                    .collect();
                pieces.push(piece);
            }
            _ => {
                // the remainder itself sums to zero
                pieces.push(std::mem::take(&mut rest));
            }
        }
    }

    let lo = l.saturating_sub(half);
    let sizes: Vec<usize> = pieces.iter().map(Vec::len).collect();
    let chosen = subset_sum(&sizes, |s| s >= lo && s <= half && s % 2 == 0)?;
    Some(chosen.into_iter().flat_map(|p| pieces[p].clone()).collect())
}

/// Indices of items whose sizes sum to a value accepted by `ok`.
fn subset_sum(sizes: &[usize], ok: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let total: usize = sizes.iter().sum();
    // reach[i][s]: sum s reachable using the first i items
    let mut reach = vec![vec![false; total + 1]; sizes.len() + 1];
    reach[0][0] = true;
    for (i, &w) in sizes.iter().enumerate() {
        for s in 0..=total {
            if reach[i][s] {
                reach[i + 1][s] = true;
                reach[i + 1][s + w] = true;
            }
        }
    }
    let target = (0..=total).find(|&s| reach[sizes.len()][s] && ok(s))?;
    let mut s = target;
    let mut out = Vec::new();
    for i in (0..sizes.len()).rev() {
        if !reach[i][s] {
            out.push(i);
            s -= sizes[i];
        }
    }
    Some(out)
}

/// One balancing step: values sorted by ascending count alternate between
/// the two sides, then the larger side hands copies of the most frequent
/// value to the smaller.
fn alternate_split(vals: &[u32], group: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let sub: Vec<u32> = group.iter().map(|&i| vals[i]).collect();
    let mut cls: Vec<(u32, Vec<usize>)> = classes(&sub)
        .into_iter()
        .map(|(v, ix)| (v, ix.into_iter().map(|j| group[j]).collect()))
        .collect();
    cls.sort_by_key(|(v, ix)| (ix.len(), *v));
    let (mut s1, mut s2) = (Vec::new(), Vec::new());
    for (pos, (_, ix)) in cls.iter().enumerate() {
        if pos % 2 == 0 {
            s1.extend(ix);
        } else {
            s2.extend(ix);
        }
    }
    if let Some((_, last)) = cls.last() {
        let last_in_s1 = (cls.len() - 1).is_multiple_of(2);
        let (big, small) = if last_in_s1 {
            (&mut s1, &mut s2)
        } else {
            (&mut s2, &mut s1)
        };
        if big.len() > small.len() {
            let moves = (big.len() - small.len()) / 2;
            let mv: Vec<usize> = last[last.len() - moves..].to_vec();
            big.retain(|i| !mv.contains(i));
            small.extend(mv);
        }
    }
    s1.sort_unstable();
    s2.sort_unstable();
    (s1, s2)
}

/// `k` rounds of [`alternate_split`] giving `2^k` groups.
pub(crate) fn three_value_groups(vals: &[u32], k: usize) -> Result<Vec<Vec<usize>>, PairingError> {
    let mut groups = vec![(0..vals.len()).collect::<Vec<usize>>()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(groups.len() * 2);
        for g in &groups {
            let (a, b) = alternate_split(vals, g);
            next.push(a);
            next.push(b);
        }
        groups = next;
    }
    let size = vals.len() >> k;
    for g in &groups {
        let sub: Vec<u32> = g.iter().map(|&i| vals[i]).collect();
        let cls = classes(&sub);
        if g.len() != size || cls.len() > 3 || cls.values().any(|ix| ix.len() % 2 == 1) {
            return Err(PairingError::InternalSearchFailed(format!(
                "balanced split produced a group of size {} with {} values",
                g.len(),
                cls.len()
            )));
        }
    }
    Ok(groups)
}
