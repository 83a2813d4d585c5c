//! Four copies of a labeled tree joined into a longer one.
//!
//! The `u`-`v` path labels `z_1..z_k` (vertices at odd positions, edges at
//! even ones) are rewritten into a chain `w_1..w_{4k+3}` of `n+2`-bit
//! vectors, each `z_i` appearing once under every two-bit prefix. The
//! chain labels the path through all four copies; everything off the path
//! inherits its prefix through [`PrefixMap`].

use std::collections::VecDeque;

use crate::gf2::BitVec;
use crate::trees::{LabeledTree, Labeling, Tree};

use super::ConstructError;

/// The bijection `00→00, 01→10, 10→11, 11→01` on two-bit prefixes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrefixMap;

impl PrefixMap {
    const TABLE: [u32; 4] = [0b00, 0b10, 0b11, 0b01];

    pub fn apply_bits(self, p: u32) -> u32 {
        Self::TABLE[p as usize & 3]
    }

    pub fn apply(self, p: BitVec) -> BitVec {
        BitVec::new(self.apply_bits(p.bits()), 2)
    }
}

/// Which `z` index sits under position `pos` (1-based) of the chain, or 0
/// for the three zero-suffix separators.
pub fn suffix_index(k: usize, pos: usize) -> usize {
    let (b2, b3, b4) = (k + 1, 2 * k + 2, 3 * k + 3);
    if pos <= k {
        k + 1 - pos
    } else if pos == b2 || pos == b3 || pos == b4 {
        0
    } else if pos < b3 {
        match pos - b2 {
            j if j == k - 1 => k,
            j if j == k => k - 1,
            j => j,
        }
    } else if pos < b4 {
        match pos - b3 {
            1 => k - 1,
            2 => k,
            j if j == k - 1 => 1,
            j if j == k => 2,
            j => k + 1 - j,
        }
    } else {
        match pos - b4 {
            1 => 2,
            2 => 1,
            j => j,
        }
    }
}

/// Fixed prefixes of the separators at positions `k+1`, `2k+2`, `3k+3`.
fn fixed_prefix(k: usize, pos: usize) -> Option<u32> {
    match pos {
        p if p == k + 1 => Some(0b10),
        p if p == 2 * k + 2 => Some(0b11),
        p if p == 3 * k + 3 => Some(0b01),
        _ => None,
    }
}

struct PrefixSearch {
    k: usize,
    prefix: Vec<u32>,
    /// Prefixes already used under each suffix index, as a 4-bit mask.
    seen: Vec<u8>,
    suffix: Vec<usize>,
}

impl PrefixSearch {
    fn set(&mut self, pos: usize, p: u32) -> bool {
        let s = self.suffix[pos];
        if s == 0 {
            return fixed_prefix(self.k, pos) == Some(p);
        }
        if self.seen[s] & (1 << p) != 0 {
            return false;
        }
        self.seen[s] |= 1 << p;
        self.prefix[pos] = p;
        true
    }

    fn unset(&mut self, pos: usize) {
        let s = self.suffix[pos];
        if s != 0 {
            self.seen[s] &= !(1 << self.prefix[pos]);
        }
    }

    /// Chooses the free value at even `pos` (or position 1), then derives
    /// the odd position after it.
    fn go(&mut self, pos: usize) -> bool {
        let last = 4 * self.k + 3;
        if pos > last {
            return true;
        }
        let options: Vec<u32> = match fixed_prefix(self.k, pos) {
            Some(p) => vec![p],
            None => (0..4).collect(),
        };
        for p in options {
            if !self.set(pos, p) {
                continue;
            }
            if pos == 1 {
                if self.go(2) {
                    return true;
                }
            } else {
                let next = self.prefix[pos - 1] ^ p;
                if self.set(pos + 1, next) {
                    if self.go(pos + 2) {
                        return true;
                    }
                    self.unset(pos + 1);
                }
            }
            self.unset(pos);
        }
        false
    }
}

/// Two-bit prefixes for the `4k+3` chain positions (index 0 is position 1).
pub fn solve_w_prefixes(k: usize) -> Result<Vec<BitVec>, ConstructError> {
    if k < 5 || k.is_multiple_of(2) {
        return Err(ConstructError::BadK(k));
    }
    let len = 4 * k + 3;
    let mut search = PrefixSearch {
        k,
        prefix: vec![0; len + 1],
        seen: vec![0; k + 1],
        suffix: (0..=len)
            .map(|p| if p == 0 { 0 } else { suffix_index(k, p) })
            .collect(),
    };
    // separators carry their fixed prefix
    for pos in [k + 1, 2 * k + 2, 3 * k + 3] {
        search.prefix[pos] = fixed_prefix(k, pos).unwrap();
    }
    if !search.go(1) {
        return Err(ConstructError::Unsolvable(k));
    }
    Ok(search.prefix[1..]
        .iter()
        .map(|&p| BitVec::new(p, 2))
        .collect())
}

/// The chain `w_1..w_{4k+3}` with the data it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WSequence {
    pub k: usize,
    pub z: Vec<BitVec>,
    pub prefixes: Vec<BitVec>,
    pub w: Vec<BitVec>,
}

impl WSequence {
    /// Checks the chain relation, distinctness, the separator prefixes and
    /// that every `z_i` appears under all four prefixes.
    pub fn check(&self) -> Result<(), String> {
        let k = self.k;
        let len = 4 * k + 3;
        if self.w.len() != len || self.prefixes.len() != len {
            return Err(format!("expected {len} entries"));
        }
        for i in 1..=2 * k + 1 {
            if self.w[2 * i - 2] + self.w[2 * i] != self.w[2 * i - 1] {
                return Err(format!("chain relation fails at w_{}", 2 * i));
            }
        }
        let mut sorted = self.w.clone();
        sorted.sort();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err("values repeat".into());
        }
        let n = self.z[0].dim();
        let mut masks = vec![0u8; k + 1];
        for pos in 1..=len {
            let w = self.w[pos - 1];
            let s = suffix_index(k, pos);
            let expected = if s == 0 {
                BitVec::zero(n)
            } else {
                self.z[s - 1]
            };
            if w.suffix(n) != expected || w.prefix(2) != self.prefixes[pos - 1] {
                return Err(format!("w_{pos} does not match its layout"));
            }
            if let Some(p) = fixed_prefix(k, pos) {
                if w.prefix(2).bits() != p {
                    return Err(format!("separator w_{pos} has prefix {}", w.prefix(2)));
                }
            }
            masks[s] |= 1 << w.prefix(2).bits();
        }
        if let Some(i) = (1..=k).find(|&i| masks[i] != 0b1111) {
            return Err(format!("z_{i} misses a prefix"));
        }
        Ok(())
    }
}

/// Lays out `prefix ‖ suffix` along the chain and checks the result.
pub fn build_w_sequence(z: &[BitVec], prefixes: &[BitVec]) -> Result<WSequence, ConstructError> {
    let k = z.len();
    if k < 5 || k.is_multiple_of(2) {
        return Err(ConstructError::BadK(k));
    }
    let n = z[0].dim();
    for i in 1..=(k - 1) / 2 {
        if z[2 * i - 2] + z[2 * i] != z[2 * i - 1] {
            return Err(ConstructError::InvalidPath(2 * i));
        }
    }
    if prefixes.len() != 4 * k + 3 || prefixes.iter().any(|p| p.dim() != 2) {
        return Err(ConstructError::BadPrefixes(format!(
            "need {} two-bit prefixes",
            4 * k + 3
        )));
    }
    let w = (1..=4 * k + 3)
        .map(|pos| {
            let s = suffix_index(k, pos);
            let suffix = if s == 0 { BitVec::zero(n) } else { z[s - 1] };
            suffix.with_prefix(prefixes[pos - 1])
        })
        .collect();
    let seq = WSequence {
        k,
        z: z.to_vec(),
        prefixes: prefixes.to_vec(),
        w,
    };
    seq.check().map_err(ConstructError::BadPrefixes)?;
    Ok(seq)
}

/// `K_{1,3}` with center `001` and leaves `010`, `100`, `111`.
pub fn k_one_three() -> LabeledTree {
    let labels = [1, 2, 4, 7].iter().map(|&b| BitVec::new(b, 3)).collect();
    LabeledTree::new(
        Tree::star(3).expect("star"),
        Labeling::new(3, labels).expect("labels"),
    )
    .expect("labeled star")
}

/// Joins four copies of `base` by the edges `u1-u2`, `v2-v3`, `u3-u4`.
/// Copy `c` (0-based) of vertex `x` gets id `c * |V| + x`.
pub fn four_copies(base: &LabeledTree, u: usize, v: usize) -> Result<LabeledTree, ConstructError> {
    let t = &base.tree;
    let count = t.vertex_count();
    if count < 3 {
        return Err(ConstructError::TooSmall);
    }
    if u == v {
        return Err(ConstructError::SameVertex);
    }
    for x in [u, v] {
        if x >= count {
            return Err(crate::trees::TreeError::VertexOutOfRange(x).into());
        }
        if t.degree(x) != 1 {
            return Err(ConstructError::NotLeaf(x));
        }
    }
    if !base.verify().valid {
        return Err(ConstructError::BaseInvalid);
    }
    let n = base.n();
    let path = t.path_between(u, v);
    let m = path.len();
    let mut z = Vec::with_capacity(2 * m - 1);
    for j in 0..m {
        z.push(base.label(path[j]));
        if j + 1 < m {
            z.push(base.edge_label(path[j], path[j + 1]));
        }
    }
    let k = z.len();
    let seq = build_w_sequence(&z, &solve_w_prefixes(k)?)?;

    let mut labels = vec![BitVec::zero(n + 2); 4 * count];
    let mut done = vec![false; 4 * count];
    let forward = path.iter();
    let backward = path.iter().rev();
    let order: Vec<(usize, usize)> = backward
        .clone()
        .map(|&x| (0, x))
        .chain(forward.clone().map(|&x| (1, x)))
        .chain(backward.map(|&x| (2, x)))
        .chain(forward.map(|&x| (3, x)))
        .collect();
    for (j, &(c, x)) in order.iter().enumerate() {
        labels[c * count + x] = seq.w[2 * j];
        done[c * count + x] = true;
    }
    // off-path vertices take f of their parent's prefix
    let f = PrefixMap;
    let mut on_path = vec![false; count];
    path.iter().for_each(|&x| on_path[x] = true);
    let mut queue: VecDeque<usize> = path.iter().copied().collect();
    while let Some(q) = queue.pop_front() {
        for &r in t.neighbors(q) {
            if on_path[r] || done[r] {
                continue;
            }
            for c in 0..4 {
                let p = labels[c * count + q].prefix(2);
                labels[c * count + r] = base.label(r).with_prefix(f.apply(p));
                done[c * count + r] = true;
            }
            queue.push_back(r);
        }
    }
    let mut edges = Vec::with_capacity(4 * count - 1);
    for c in 0..4 {
        edges.extend(
            t.edges()
                .iter()
                .map(|&(a, b)| (c * count + a, c * count + b)),
        );
    }
    edges.push((u, count + u));
    edges.push((count + v, 2 * count + v));
    edges.push((2 * count + u, 3 * count + u));
    let tree = Tree::new(4 * count, edges)?;
    let out = LabeledTree::new(tree, Labeling::new(n + 2, labels)?)?;
    debug_assert!(out.verify().valid);
    Ok(out)
}
