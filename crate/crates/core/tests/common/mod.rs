//! Generators and independent checks shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use setseq::gf2::BitVec;
use setseq::pairing::PairingInstance;
use setseq::trees::{CaterpillarSpec, LabeledTree};

pub fn instance(n: u32, vals: &[u32]) -> PairingInstance {
    let targets = vals.iter().map(|&v| BitVec::new(v, n)).collect();
    PairingInstance::new(n, targets).unwrap()
}

/// Random instance with at most `n` distinct values.
pub fn few_values(n: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let size = 1usize << (n - 1);
    loop {
        let l = rng.gen_range(2..=n as usize);
        let mut counts = vec![1usize; l];
        // skewed counts: extra copies favour low indices
        let skew = rng.gen_range(1..=4);
        for _ in l..size {
            let k = (0..skew).map(|_| rng.gen_range(0..l)).min().unwrap();
            counts[k] += 1;
        }
        let mut values: Vec<u32> = Vec::with_capacity(l);
        while values.len() < l {
            let v = rng.gen_range(1..1u32 << n);
            if !values.contains(&v) {
                values.push(v);
            }
        }
        // the last value must cancel the odd-count ones before it
        let rest = values[..l - 1]
            .iter()
            .zip(&counts)
            .filter(|(_, &c)| c % 2 == 1)
            .fold(0, |x, (&v, _)| x ^ v);
        if rest != 0 {
            if counts[l - 1] % 2 == 0 || values[..l - 1].contains(&rest) {
                continue;
            }
            values[l - 1] = rest;
        } else if counts[l - 1] % 2 == 1 {
            continue;
        }
        let mut out: Vec<u32> = values
            .iter()
            .zip(&counts)
            .flat_map(|(&v, &c)| std::iter::repeat_n(v, c))
            .collect();
        out.shuffle(rng);
        return out;
    }
}

/// Elements of a random `d`-dimensional subspace, zero first.
pub fn subspace(n: u32, d: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    assert!(d <= n);
    let mut span = vec![0u32];
    while span.len() < 1 << d {
        let v = rng.gen_range(1..1u32 << n);
        if !span.contains(&v) {
            span = span.iter().flat_map(|&s| [s, s ^ v]).collect();
        }
    }
    span
}

/// Differences of a random pairing inside the cosets of a random
/// `d`-dimensional subspace.
pub fn low_dimension(n: u32, d: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let span = subspace(n, d, rng);
    let mut seen = vec![false; 1 << n];
    let mut out = Vec::new();
    for x in 0..1u32 << n {
        if seen[x as usize] {
            continue;
        }
        let mut coset: Vec<u32> = span.iter().map(|&s| s ^ x).collect();
        for &y in &coset {
            seen[y as usize] = true;
        }
        coset.shuffle(rng);
        out.extend(coset.chunks(2).map(|p| p[0] ^ p[1]));
    }
    out.shuffle(rng);
    out
}

/// Rank over F_2 by elimination on raw bit patterns.
pub fn rank(vals: &[u32]) -> usize {
    let mut rows: Vec<u32> = Vec::new();
    for &v in vals {
        let r = rows.iter().fold(v, |x, &row| x.min(x ^ row));
        if r != 0 {
            rows.push(r);
        }
    }
    rows.len()
}

/// Doubled targets spanning a random 6-dimensional subspace.
pub fn dim6_even(n: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    assert!(n >= 6);
    loop {
        let span = subspace(n, 6, rng);
        let half: Vec<u32> = (0..1usize << (n - 2))
            .map(|_| span[rng.gen_range(1..span.len())])
            .collect();
        if rank(&half) < 6 {
            continue;
        }
        let mut vals: Vec<u32> = half.iter().flat_map(|&v| [v, v]).collect();
        vals.shuffle(rng);
        return vals;
    }
}

/// Doubled targets inside a random subspace of dimension at most `n / 2`.
pub fn half_dim_even(n: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let d = rng.gen_range(1..=n / 2);
    let span = subspace(n, d, rng);
    let mut vals: Vec<u32> = (0..1usize << (n - 2))
        .map(|_| span[rng.gen_range(1..span.len())])
        .flat_map(|v| [v, v])
        .collect();
    vals.shuffle(rng);
    vals
}

/// Random odd-degree caterpillar with `2^n` vertices and the given
/// diameter (at least 2); `2^n >= 2 * diameter` is required.
pub fn odd_caterpillar(diameter: usize, n: u32, rng: &mut ChaCha8Rng) -> CaterpillarSpec {
    let total = 1usize << n;
    if diameter == 2 {
        return CaterpillarSpec::new(vec![total - 1]).unwrap();
    }
    let k = diameter - 1;
    assert!(
        total >= 2 * k + 2,
        "too few vertices for diameter {diameter}"
    );
    let mut degrees = vec![3; k];
    for _ in 0..(total - 2 * k - 2) / 2 {
        degrees[rng.gen_range(0..k)] += 2;
    }
    CaterpillarSpec::new(degrees).unwrap()
}

/// Smallest `n` with room for an odd caterpillar of this diameter.
pub fn min_dim(diameter: usize) -> u32 {
    (2 * diameter.max(2)).next_power_of_two().trailing_zeros()
}

/// Vertex labels and induced edge labels are exactly the nonzero vectors,
/// each once.
pub fn oracle_set_sequential(lt: &LabeledTree) -> bool {
    let n = lt.n();
    let count = lt.tree.vertex_count();
    if 2 * count != 1 << n {
        return false;
    }
    let labels: Vec<u32> = (0..count).map(|v| lt.label(v).bits()).collect();
    let mut seen = vec![false; 1 << n];
    seen[0] = true;
    let edge_vals = lt.tree.edges().iter().map(|&(a, b)| labels[a] ^ labels[b]);
    for x in labels.iter().copied().chain(edge_vals) {
        if std::mem::replace(&mut seen[x as usize], true) {
            return false;
        }
    }
    seen.iter().all(|&s| s)
}

/// XOR of the labels on even-degree vertices.
pub fn even_degree_xor(lt: &LabeledTree) -> u32 {
    (0..lt.tree.vertex_count())
        .filter(|&v| lt.tree.degree(v).is_multiple_of(2))
        .fold(0, |acc, v| acc ^ lt.label(v).bits())
}

pub fn bitvec_rank(vals: &[BitVec]) -> usize {
    rank(&vals.iter().map(|v| v.bits()).collect::<Vec<_>>())
}
