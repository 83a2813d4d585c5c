//! Trees, caterpillars and the set-sequential verifier.
//!
//! A labeling assigns each vertex a nonzero vector of `F_2^n`; an edge gets
//! the sum of its endpoint labels. The labeling is set-sequential when the
//! vertex and edge labels together are exactly the nonzero vectors of
//! `F_2^n`, each used once.

mod io;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::{BitVec, MAX_DIM};

pub use io::{to_dot, TreeDocument, VertexEntry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("non-canonical caterpillar {0}: degrees must be >= 2 unless the spec is T[1]")]
    NonCanonical(String),
    #[error("cannot parse caterpillar spec {0:?}")]
    BadSpec(String),
    #[error("labeling has {labels} labels for {vertices} vertices")]
    LabelCount { labels: usize, vertices: usize },
    #[error("label of vertex {vertex} has dimension {got}, expected {expected}")]
    LabelDimension {
        vertex: usize,
        expected: u32,
        got: u32,
    },
    #[error("invalid document: {0}")]
    Document(String),
}

impl TreeError {
    pub fn name(&self) -> &'static str {
        match self {
            TreeError::NotATree(_) => "NotATree",
            TreeError::VertexOutOfRange(_) => "VertexOutOfRange",
            TreeError::NonCanonical(_) => "NonCanonical",
            TreeError::BadSpec(_) => "BadSpec",
            TreeError::LabelCount { .. } => "LabelCount",
            TreeError::LabelDimension { .. } => "LabelDimension",
            TreeError::Document(_) => "InvalidDocument",
        }
    }
}

/// An undirected tree on vertices `0..vertex_count`.
///
/// Equality compares edge sets, ignoring edge order and orientation.
#[derive(Debug, Clone)]
pub struct Tree {
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count() == other.vertex_count() && self.edge_set() == other.edge_set()
    }
}

impl Eq for Tree {}

impl Tree {
    fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut set: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        set.sort_unstable();
        set
    }

    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        if vertex_count < 2 {
            return Err(TreeError::NotATree("fewer than 2 vertices".into()));
        }
        if edges.len() != vertex_count - 1 {
            return Err(TreeError::NotATree(format!(
                "{} edges for {vertex_count} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); vertex_count];
        for &(a, b) in &edges {
            for x in [a, b] {
                if x >= vertex_count {
                    return Err(TreeError::VertexOutOfRange(x));
                }
            }
            if a == b {
                return Err(TreeError::NotATree(format!("loop at {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let tree = Tree { edges, adj };
        let reached = tree.distances(0).iter().filter(|d| d.is_some()).count();
        if reached != vertex_count {
            return Err(TreeError::NotATree("disconnected".into()));
        }
        Ok(tree)
    }

    /// Path on `k` vertices `0 - 1 - ... - (k-1)`.
    pub fn path(k: usize) -> Result<Self, TreeError> {
        Tree::new(k, (1..k).map(|i| (i - 1, i)).collect())
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Result<Self, TreeError> {
        Tree::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.degree(v) == 1)
            .collect()
    }

    fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    fn farthest(&self, from: usize) -> (usize, usize) {
        let dist = self.distances(from);
        let mut best = (from, 0);
        for (v, d) in dist.iter().enumerate() {
            let d = d.expect("connected");
            if d > best.1 {
                best = (v, d);
            }
        }
        best
    }

    /// Longest distance between two vertices (double BFS sweep).
    pub fn diameter(&self) -> usize {
        let (a, _) = self.farthest(0);
        self.farthest(a).1
    }

    /// Degree of each vertex mod 2 (`true` = odd).
    pub fn degree_parities(&self) -> Vec<bool> {
        self.adj.iter().map(|n| n.len() % 2 == 1).collect()
    }

    pub fn all_odd(&self) -> bool {
        self.adj.iter().all(|n| n.len() % 2 == 1)
    }

    /// Vertices of the unique path from `u` to `v`, both included.
    pub fn path_between(&self, u: usize, v: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        parent[u] = u;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut out = vec![v];
        let mut x = v;
        while x != u {
            x = parent[x];
            out.push(x);
        }
        out.reverse();
        out
    }

    /// Endpoints of some longest path.
    pub fn diametral_pair(&self) -> (usize, usize) {
        let (a, _) = self.farthest(0);
        let (b, _) = self.farthest(a);
        (a.min(b), a.max(b))
    }

    /// Tree with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Tree {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        Tree::new(self.vertex_count(), edges).expect("permutation of a tree")
    }
}

/// Degree sequence `d_1..d_k` of the caterpillar `T[d_1,...,d_k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CaterpillarSpec {
    degrees: Vec<usize>,
}

impl CaterpillarSpec {
    /// Accepts canonical specs only: `[1]` or all degrees at least 2.
    pub fn new(degrees: Vec<usize>) -> Result<Self, TreeError> {
        let spec = CaterpillarSpec { degrees };
        if spec.degrees.is_empty() || !spec.is_canonical() {
            return Err(TreeError::NonCanonical(spec.to_string()));
        }
        Ok(spec)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Number of center path vertices.
    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.degrees == [1] || self.degrees.iter().all(|&d| d >= 2)
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() + 2 - self.k()
    }

    pub fn diameter(&self) -> usize {
        if self.degrees == [1] {
            1
        } else {
            self.k() + 1
        }
    }

    pub fn reversed(&self) -> Self {
        let mut degrees = self.degrees.clone();
        degrees.reverse();
        CaterpillarSpec { degrees }
    }

    /// Whether every vertex of the caterpillar has odd degree.
    pub fn all_odd(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 1)
    }

    /// Pendant count of path vertex `i` in the built tree.
    pub fn pendants(&self, i: usize) -> usize {
        let k = self.k();
        let d = self.degrees[i];
        match (k, i) {
            (1, _) => d,
            (_, 0) => d - 1,
            (_, i) if i == k - 1 => d - 1,
            _ => d - 2,
        }
    }
}

/// `T[d_1,...,d_k]` with both path endpoints' leaves made explicit as
/// degree-1 path vertices: `[1, d_1, ..., d_k, 1]`.
pub fn pad_spec(spec: &CaterpillarSpec) -> Vec<usize> {
    if spec.degrees == [1] {
        return vec![1, 1];
    }
    let mut out = Vec::with_capacity(spec.k() + 2);
    out.push(1);
    out.extend_from_slice(&spec.degrees);
    out.push(1);
    out
}

impl fmt::Display for CaterpillarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[")?;
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for CaterpillarSpec {
    type Err = TreeError;

    /// Parses `T[3,3,3]`. An entry `dxN` (or `d×N`) repeats `d` N times.
    fn from_str(s: &str) -> Result<Self, TreeError> {
        let bad = || TreeError::BadSpec(s.to_string());
        let inner = s
            .trim()
            .strip_prefix("T[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let mut degrees = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            let (d, times) = match part.split_once(['x', '×']) {
                Some((d, t)) => (d.trim(), t.trim().parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let d: usize = d.parse().map_err(|_| bad())?;
            degrees.extend(std::iter::repeat_n(d, times));
        }
        CaterpillarSpec::new(degrees)
    }
}

/// Builds `T[d_1,...,d_k]`: path vertices `0..k` in order, then the
/// pendants of each path vertex in path order.
pub fn build_caterpillar(spec: &CaterpillarSpec) -> Tree {
    let k = spec.k();
    if spec.degrees == [1] {
        return Tree::path(2).expect("single edge");
    }
    let mut edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    let mut next = k;
    for i in 0..k {
        for _ in 0..spec.pendants(i) {
            edges.push((i, next));
            next += 1;
        }
    }
    Tree::new(next, edges).expect("caterpillar is a tree")
}

/// Maps a caterpillar onto `build_caterpillar(spec)` numbering, given its
/// center path in order. Returns `perm` with `perm[old] = new`, or `None`
/// if the degrees do not match the spec.
pub fn caterpillar_numbering(
    tree: &Tree,
    path: &[usize],
    spec: &CaterpillarSpec,
) -> Option<Vec<usize>> {
    if tree.vertex_count() != spec.vertex_count() {
        return None;
    }
    let k = spec.k();
    if spec.degrees == [1] {
        return (path.len() == 2).then(|| {
            let mut perm = vec![0; 2];
            perm[path[0]] = 0;
            perm[path[1]] = 1;
            perm
        });
    }
    if path.len() != k {
        return None;
    }
    let mut perm = vec![usize::MAX; tree.vertex_count()];
    for (i, &v) in path.iter().enumerate() {
        if tree.degree(v) != spec.degrees[i] {
            return None;
        }
        perm[v] = i;
    }
    let mut next = k;
    for &v in path {
        for &w in tree.neighbors(v) {
            if perm[w] != usize::MAX {
                continue;
            }
            if tree.degree(w) != 1 {
                return None;
            }
            perm[w] = next;
            next += 1;
        }
    }
    (next == tree.vertex_count()).then_some(perm)
}

/// Vertex labels of a tree in `F_2^n`, indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    n: u32,
    labels: Vec<BitVec>,
}

impl Labeling {
    pub fn new(n: u32, labels: Vec<BitVec>) -> Result<Self, TreeError> {
        if n == 0 || n > MAX_DIM {
            return Err(TreeError::Document(format!("dimension {n} out of range")));
        }
        for (vertex, l) in labels.iter().enumerate() {
            if l.dim() != n {
                return Err(TreeError::LabelDimension {
                    vertex,
                    expected: n,
                    got: l.dim(),
                });
            }
        }
        Ok(Labeling { n, labels })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn labels(&self) -> &[BitVec] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> BitVec {
        self.labels[v]
    }

    /// Labeling with vertex `v` moved to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Labeling {
        let mut labels = self.labels.clone();
        for (v, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[v];
        }
        Labeling { n: self.n, labels }
    }
}

/// A tree together with a labeling of its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    pub tree: Tree,
    pub labeling: Labeling,
}

impl LabeledTree {
    pub fn new(tree: Tree, labeling: Labeling) -> Result<Self, TreeError> {
        if labeling.labels.len() != tree.vertex_count() {
            return Err(TreeError::LabelCount {
                labels: labeling.labels.len(),
                vertices: tree.vertex_count(),
            });
        }
        Ok(LabeledTree { tree, labeling })
    }

    pub fn n(&self) -> u32 {
        self.labeling.n
    }

    pub fn label(&self, v: usize) -> BitVec {
        self.labeling.labels[v]
    }

    pub fn edge_label(&self, a: usize, b: usize) -> BitVec {
        self.label(a) + self.label(b)
    }

    pub fn verify(&self) -> VerifierReport {
        verify_set_sequential(&self.tree, &self.labeling)
    }

    pub fn relabeled(&self, perm: &[usize]) -> LabeledTree {
        LabeledTree {
            tree: self.tree.relabeled(perm),
            labeling: self.labeling.relabeled(perm),
        }
    }
}

/// Where a label sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Location {
    Vertex(usize),
    Edge(usize, usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Vertex(v) => write!(f, "vertex {v}"),
            Location::Edge(a, b) => write!(f, "edge {a}-{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `|V| + |E|` differs from `2^n - 1`.
    SizeMismatch {
        expected: usize,
        found: usize,
    },
    /// The labeling does not cover every vertex (or covers too many).
    LabelCount {
        labels: usize,
        vertices: usize,
    },
    ZeroLabel(Location),
    DuplicateValue(BitVec, Vec<Location>),
    MissingValue(BitVec),
    /// Missing values beyond the enumeration limit.
    MoreMissing(usize),
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::SizeMismatch { .. } => "SizeMismatch",
            Violation::LabelCount { .. } => "LabelCount",
            Violation::ZeroLabel(_) => "ZeroLabel",
            Violation::DuplicateValue(..) => "DuplicateValue",
            Violation::MissingValue(_) => "MissingValue",
            Violation::MoreMissing(_) => "MoreMissing",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SizeMismatch { expected, found } => {
                write!(f, "SizeMismatch expected={expected} found={found}")
            }
            Violation::LabelCount { labels, vertices } => {
                write!(f, "LabelCount labels={labels} vertices={vertices}")
            }
            Violation::ZeroLabel(at) => write!(f, "ZeroLabel at {at}"),
            Violation::DuplicateValue(v, at) => {
                write!(f, "DuplicateValue {v} at ")?;
                for (i, l) in at.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{l}")?;
                }
                Ok(())
            }
            Violation::MissingValue(v) => write!(f, "MissingValue {v}"),
            Violation::MoreMissing(c) => write!(f, "MoreMissing count={c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

const MISSING_LIMIT: usize = 4096;

/// Checks a labeling and lists every defect found. Never panics.
pub fn verify_set_sequential(t: &Tree, lab: &Labeling) -> VerifierReport {
    let mut violations = Vec::new();
    let n = lab.n;
    let expected = (1usize << n) - 1;
    let found = t.vertex_count() + t.edges().len();
    if found != expected {
        violations.push(Violation::SizeMismatch { expected, found });
    }
    if lab.labels.len() != t.vertex_count() {
        violations.push(Violation::LabelCount {
            labels: lab.labels.len(),
            vertices: t.vertex_count(),
        });
    }
    let get = |v: usize| lab.labels.get(v).copied();
    let mut all: Vec<(BitVec, Location)> = Vec::with_capacity(found);
    for v in 0..t.vertex_count() {
        if let Some(l) = get(v) {
            all.push((l, Location::Vertex(v)));
        }
    }
    for &(a, b) in t.edges() {
        if let (Some(x), Some(y)) = (get(a), get(b)) {
            all.push((x + y, Location::Edge(a, b)));
        }
    }
    all.sort();
    for &(l, at) in &all {
        if l.is_zero() {
            violations.push(Violation::ZeroLabel(at));
        }
    }
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        if j - i > 1 && !all[i].0.is_zero() {
            let at = all[i..j].iter().map(|&(_, at)| at).collect();
            violations.push(Violation::DuplicateValue(all[i].0, at));
        }
        i = j;
    }
    // missing values: walk the sorted distinct values
    let mut present = all.iter().map(|&(l, _)| l.bits()).peekable();
    let mut missing = 0usize;
    for x in 1..=expected as u64 {
        let x = x as u32;
        while present.peek().is_some_and(|&p| p < x) {
            present.next();
        }
        if present.peek() == Some(&x) {
            continue;
        }
        if missing < MISSING_LIMIT {
            violations.push(Violation::MissingValue(BitVec::new(x, n)));
        }
        missing += 1;
    }
    if missing > MISSING_LIMIT {
        violations.push(Violation::MoreMissing(missing - MISSING_LIMIT));
    }
    VerifierReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// Sum of the labels of even-degree vertices.
pub fn even_degree_label_sum(t: &Tree, lab: &Labeling) -> BitVec {
    let mut s = BitVec::zero(lab.n);
    for (v, &odd) in t.degree_parities().iter().enumerate() {
        if !odd {
            s += lab.labels[v];
        }
    }
    s
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The 8-vertex labeled tree of the pendant-edge illustration.
    pub fn figure1() -> LabeledTree {
        let labels = [
            "0001", "0111", "1101", "0010", "0101", "1100", "1110", "1010",
        ];
        let tree = Tree::new(
            8,
            vec![(0, 1), (0, 3), (3, 2), (3, 7), (0, 4), (1, 5), (1, 6)],
        )
        .unwrap();
        let labels = labels
            .iter()
            .map(|s| BitVec::parse(s, 4).unwrap())
            .collect();
        LabeledTree::new(tree, Labeling::new(4, labels).unwrap()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(n: u32, items: &[&str]) -> Labeling {
        Labeling::new(
            n,
            items.iter().map(|s| BitVec::parse(s, n).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn caterpillar_shapes() {
        let t1: CaterpillarSpec = "T[1]".parse().unwrap();
        let t = build_caterpillar(&t1);
        assert_eq!((t.vertex_count(), t.diameter()), (2, 1));
        let t333: CaterpillarSpec = "T[3,3,3]".parse().unwrap();
        let t = build_caterpillar(&t333);
        assert_eq!((t.vertex_count(), t.diameter()), (8, 4));
        assert_eq!(t333.vertex_count(), 8);
        let s: CaterpillarSpec = "T[5,3,3,3,3,3]".parse().unwrap();
        let t = build_caterpillar(&s);
        assert_eq!((t.vertex_count(), t.diameter()), (16, 7));
        let star: CaterpillarSpec = "T[3]".parse().unwrap();
        let t = build_caterpillar(&star);
        assert_eq!((t.vertex_count(), t.diameter()), (4, 2));
        assert!(t.all_odd());
    }

    #[test]
    fn spec_parsing() {
        let s: CaterpillarSpec = "T[3,2x12]".parse().unwrap();
        assert_eq!(s.k(), 13);
        assert_eq!(s.to_string(), "T[3,2,2,2,2,2,2,2,2,2,2,2,2]");
        let s: CaterpillarSpec = "T[2×14]".parse().unwrap();
        assert_eq!(s.vertex_count(), 16);
        assert!(matches!(
            "T[2,1]".parse::<CaterpillarSpec>(),
            Err(TreeError::NonCanonical(_))
        ));
        assert!(matches!(
            "T(3)".parse::<CaterpillarSpec>(),
            Err(TreeError::BadSpec(_))
        ));
        assert_eq!(pad_spec(&"T[3,3]".parse().unwrap()), vec![1, 3, 3, 1]);
    }

    #[test]
    fn diameters_and_parities() {
        assert_eq!(Tree::path(2).unwrap().diameter(), 1);
        assert_eq!(Tree::star(3).unwrap().diameter(), 2);
        assert!(Tree::star(3).unwrap().all_odd());
        let p4 = Tree::path(4).unwrap();
        assert_eq!(p4.degree_parities(), vec![true, false, false, true]);
        let s: CaterpillarSpec = "T[3,3,3,2,2,2,2,2,2,3]".parse().unwrap();
        let t = build_caterpillar(&s);
        let even = t.degree_parities().iter().filter(|&&p| !p).count();
        assert_eq!(even, 6);
    }

    #[test]
    fn rejects_non_trees() {
        assert!(Tree::new(3, vec![(0, 1)]).is_err());
        assert!(Tree::new(4, vec![(0, 1), (1, 0), (2, 3)]).is_err());
        assert!(matches!(
            Tree::new(3, vec![(0, 1), (1, 5)]),
            Err(TreeError::VertexOutOfRange(5))
        ));
    }

    #[test]
    fn figure_one_verifies() {
        let f = fixtures::figure1();
        assert!(f.verify().valid);
        assert!(even_degree_label_sum(&f.tree, &f.labeling).is_zero());
    }

    #[test]
    fn single_edge_verifies() {
        let t = Tree::path(2).unwrap();
        let r = verify_set_sequential(&t, &lab(2, &["01", "10"]));
        assert!(r.valid, "{:?}", r.violations);
    }

    #[test]
    fn four_path_reports_duplicate() {
        let t = Tree::path(4).unwrap();
        let l = lab(3, &["001", "010", "100", "111"]);
        let r = verify_set_sequential(&t, &l);
        assert!(!r.valid);
        let dup = BitVec::parse("011", 3).unwrap();
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateValue(x, at) if *x == dup && at.len() == 2)));
        let mid = lab(3, &["001", "010", "100", "111"]);
        assert_eq!(
            even_degree_label_sum(&t, &mid),
            BitVec::parse("110", 3).unwrap()
        );
    }

    #[test]
    fn verifier_is_total() {
        let t = Tree::path(3).unwrap();
        // too few labels, wrong size, zero label
        let r = verify_set_sequential(&t, &lab(3, &["000", "001"]));
        let names: Vec<_> = r.violations.iter().map(Violation::name).collect();
        assert!(names.contains(&"SizeMismatch"));
        assert!(names.contains(&"LabelCount"));
        assert!(names.contains(&"ZeroLabel"));
        assert!(names.contains(&"MissingValue"));
    }

    #[test]
    fn numbering_matches_built_caterpillar() {
        let spec: CaterpillarSpec = "T[3,5,3]".parse().unwrap();
        let built = build_caterpillar(&spec);
        // reverse the ids and recover the numbering
        let n = built.vertex_count();
        let rev: Vec<usize> = (0..n).map(|v| n - 1 - v).collect();
        let t = built.relabeled(&rev);
        let perm = caterpillar_numbering(&t, &[n - 1, n - 2, n - 3], &spec).unwrap();
        assert_eq!(t.relabeled(&perm), built);
    }
}
