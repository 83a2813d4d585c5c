//! JSON documents and DOT export for (labeled) trees.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{LabeledTree, Labeling, Tree, TreeError};
use crate::gf2::BitVec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// On-disk form: `{"n": 4, "vertices": [{"id": 0, "label": "0001"}], "edges": [[0, 1]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub n: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[usize; 2]>,
}

impl TreeDocument {
    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        serde_json::from_str(text).map_err(|e| TreeError::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Unlabeled document; `n` is the smallest dimension with room for
    /// `2|V| - 1` labels.
    pub fn from_tree(tree: &Tree) -> Self {
        let total = 2 * tree.vertex_count() - 1;
        let n = usize::BITS - total.leading_zeros();
        TreeDocument {
            n,
            vertices: (0..tree.vertex_count())
                .map(|id| VertexEntry { id, label: None })
                .collect(),
            edges: tree.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_labeled(lt: &LabeledTree) -> Self {
        TreeDocument {
            n: lt.n(),
            vertices: lt
                .labeling
                .labels()
                .iter()
                .enumerate()
                .map(|(id, l)| VertexEntry {
                    id,
                    label: Some(l.to_string()),
                })
                .collect(),
            edges: lt.tree.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn tree(&self) -> Result<Tree, TreeError> {
        let count = self.vertices.len();
        let mut seen = vec![false; count];
        for v in &self.vertices {
            if v.id >= count {
                return Err(TreeError::VertexOutOfRange(v.id));
            }
            if std::mem::replace(&mut seen[v.id], true) {
                return Err(TreeError::Document(format!("vertex {} listed twice", v.id)));
            }
        }
        Tree::new(count, self.edges.iter().map(|&[a, b]| (a, b)).collect())
    }

    pub fn is_labeled(&self) -> bool {
        self.vertices.iter().all(|v| v.label.is_some())
    }

    /// Requires every vertex to carry a width-`n` label.
    pub fn labeled(&self) -> Result<LabeledTree, TreeError> {
        let tree = self.tree()?;
        let mut labels = vec![BitVec::zero(self.n.max(1)); tree.vertex_count()];
        for v in &self.vertices {
            let text = v
                .label
                .as_deref()
                .ok_or_else(|| TreeError::Document(format!("vertex {} has no label", v.id)))?;
            labels[v.id] = BitVec::parse(text, self.n)
                .map_err(|e| TreeError::Document(format!("vertex {}: {e}", v.id)))?;
        }
        LabeledTree::new(tree, Labeling::new(self.n, labels)?)
    }
}

/// Graphviz text: vertices show their labels, edges their induced labels.
pub fn to_dot(lt: &LabeledTree) -> String {
    let mut out = String::from("graph tree {\n");
    for v in 0..lt.tree.vertex_count() {
        let _ = writeln!(out, "  {v} [label=\"{v}: {}\"];", lt.label(v));
    }
    for &(a, b) in lt.tree.edges() {
        let _ = writeln!(out, "  {a} -- {b} [label=\"{}\"];", lt.edge_label(a, b));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::figure1;
    use super::*;

    #[test]
    fn round_trip() {
        let f = figure1();
        let doc = TreeDocument::from_labeled(&f);
        let back = TreeDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back.labeled().unwrap(), f);
    }

    #[test]
    fn unlabeled_documents() {
        let doc =
            TreeDocument::from_json(r#"{"n":2,"vertices":[{"id":0},{"id":1}],"edges":[[0,1]]}"#)
                .unwrap();
        assert!(!doc.is_labeled());
        assert_eq!(doc.tree().unwrap().vertex_count(), 2);
        assert!(doc.labeled().is_err());
        assert_eq!(TreeDocument::from_tree(&Tree::star(3).unwrap()).n, 3);
    }

    #[test]
    fn rejects_bad_documents() {
        let dup = r#"{"n":2,"vertices":[{"id":0},{"id":0}],"edges":[[0,1]]}"#;
        assert!(TreeDocument::from_json(dup).unwrap().tree().is_err());
        let width =
            r#"{"n":2,"vertices":[{"id":0,"label":"011"},{"id":1,"label":"10"}],"edges":[[0,1]]}"#;
        assert!(TreeDocument::from_json(width).unwrap().labeled().is_err());
        assert!(TreeDocument::from_json("{").is_err());
    }

    #[test]
    fn dot_lists_edge_labels() {
        let dot = to_dot(&figure1());
        assert!(dot.contains("0 -- 1 [label=\"0110\"]"));
        assert!(dot.starts_with("graph tree {"));
    }
}
