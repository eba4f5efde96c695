//! Finite induced subgraphs of the infinite graphs, with boundary flags.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteTruncation {
    /// Serialized node addresses.
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    /// `boundary[i]` is set when vertex `i` has a neighbour outside the truncation.
    pub boundary: Vec<bool>,
    /// Tree height of each vertex, rendered.
    pub heights: Vec<String>,
    /// Vertices drawn highlighted in DOT output.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tagged: Vec<usize>,
    pub provenance: String,
    #[serde(skip)]
    index: HashMap<String, usize>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl FiniteTruncation {
    pub fn new(
        vertices: Vec<String>,
        heights: Vec<String>,
        mut edges: Vec<(usize, usize)>,
        boundary: Vec<bool>,
        provenance: String,
    ) -> FiniteTruncation {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.retain(|e| e.0 != e.1);
        edges.sort_unstable();
        edges.dedup();
        let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        FiniteTruncation { vertices, edges, boundary, heights, tagged: Vec::new(), provenance, index, adj }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    /// Graphviz rendering; vertex names are the serialized addresses.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph truncation {\n  node [shape=box, fontsize=10];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let mut attrs = vec![format!("label=\"{}\\nh={}\"", v.replace('"', "'"), self.heights[i])];
            if self.boundary[i] {
                attrs.push("style=dashed".into());
            }
            if self.tagged.contains(&i) {
                attrs.push("color=red".into());
            }
            let _ = writeln!(s, "  n{i} [{}];", attrs.join(", "));
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        s.push_str("}\n");
        s
    }
}
