//! Simple undirected graphs with stable dense identifiers and the structural
//! predicates used by the constructions: girth, cyclic edge cuts, connectors
//! and neighborhoods.

mod connector;
pub mod io;
mod structure;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use connector::{d_connector, d_connector_with, h_paths_up_to, is_d_closed, is_forest, neighborhood, HPath};
pub use structure::{
    components, contract_and_subdivide, cyclic_cuts_below, cyclic_edge_connectivity,
    cyclic_edge_connectivity_by_edge_sets, girth, is_connected, is_cyclically_k_connected,
    max_degree, Contraction, CyclicConnectivity, BIPARTITION_LIMIT,
};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("vertex label {0:?} must be non-empty and free of whitespace, '-' and ':'")]
    BadLabel(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(String, String),
    #[error("vertex id {0} out of range")]
    UnknownVertex(VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{0}")]
    Invalid(String),
}

/// A positive integer or infinity. `Finite(_) < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(usize),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<usize> {
        match self {
            Extended::Finite(n) => Some(n),
            Extended::Infinite => None,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(n) => write!(f, "{n}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Simple undirected graph. Vertex and edge ids are dense and assigned in
/// insertion order; every vertex carries a unique label used in all
/// external formats.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    labels: Vec<String>,
    label_index: HashMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edge_index: HashMap<(VertexId, VertexId), EdgeId>,
}

fn label_ok(label: &str) -> bool {
    !label.is_empty() && !label.chars().any(|c| c.is_whitespace() || c == '-' || c == ':')
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices labelled `0..n` with the given edges.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v.to_string())?;
        }
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<VertexId, GraphError> {
        let label = label.into();
        if !label_ok(&label) {
            return Err(GraphError::BadLabel(label));
        }
        if self.label_index.contains_key(&label) {
            return Err(GraphError::DuplicateLabel(label));
        }
        let id = self.labels.len();
        self.label_index.insert(label.clone(), id);
        self.labels.push(label);
        self.adj.push(Vec::new());
        Ok(id)
    }

    /// Returns the id of `label`, creating the vertex if needed.
    pub fn vertex_or_insert(&mut self, label: &str) -> Result<VertexId, GraphError> {
        match self.label_index.get(label) {
            Some(&v) => Ok(v),
            None => self.add_vertex(label),
        }
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        let n = self.labels.len();
        if u >= n {
            return Err(GraphError::UnknownVertex(u));
        }
        if v >= n {
            return Err(GraphError::UnknownVertex(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.labels[u].clone()));
        }
        let key = (u.min(v), u.max(v));
        if self.edge_index.contains_key(&key) {
            return Err(GraphError::ParallelEdge(
                self.labels[key.0].clone(),
                self.labels[key.1].clone(),
            ));
        }
        let id = self.edges.len();
        self.edges.push(key);
        self.edge_index.insert(key, id);
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.labels.len()
    }

    pub fn edge_ids(&self) -> std::ops::Range<EdgeId> {
        0..self.edges.len()
    }

    /// Endpoints `(u, v)` with `u < v`.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// `(neighbor, edge)` pairs in insertion order.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.label_index.get(label).copied()
    }

    pub fn edge_label(&self, e: EdgeId) -> String {
        let (u, v) = self.edges[e];
        format!("{}-{}", self.labels[u], self.labels[v])
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Copy of the subgraph `h` as a standalone graph (labels kept) plus the
    /// vertex and edge id maps from new ids to host ids.
    pub fn extract(&self, h: &Subgraph) -> (Graph, Vec<VertexId>, Vec<EdgeId>) {
        let mut g = Graph::new();
        let mut vmap = HashMap::new();
        let mut vorig = Vec::new();
        for &v in &h.vertices {
            let id = g.add_vertex(self.labels[v].clone()).expect("labels are unique in host");
            vmap.insert(v, id);
            vorig.push(v);
        }
        let mut eorig = Vec::new();
        for &e in &h.edges {
            let (u, v) = self.edges[e];
            g.add_edge(vmap[&u], vmap[&v]).expect("host is simple");
            eorig.push(e);
        }
        (g, vorig, eorig)
    }

    /// Subgraph induced by `vertices`.
    pub fn induced(&self, vertices: &BTreeSet<VertexId>) -> Subgraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, (u, v))| vertices.contains(u) && vertices.contains(v))
            .map(|(e, _)| e)
            .collect();
        Subgraph {
            vertices: vertices.clone(),
            edges,
        }
    }

    pub fn whole(&self) -> Subgraph {
        Subgraph {
            vertices: self.vertices().collect(),
            edges: self.edge_ids().collect(),
        }
    }
}

/// Vertex and edge subsets of a host graph. The host is passed explicitly
/// to every operation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Subgraph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The edges together with their endpoints.
    pub fn from_edges(g: &Graph, edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut h = Subgraph::empty();
        for e in edges {
            h.add_edge(g, e);
        }
        h
    }

    pub fn add_edge(&mut self, g: &Graph, e: EdgeId) {
        let (u, v) = g.endpoints(e);
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.edges.insert(e);
    }

    pub fn contains_subgraph(&self, other: &Subgraph) -> bool {
        other.vertices.is_subset(&self.vertices) && other.edges.is_subset(&self.edges)
    }

    /// Every edge is incident only to member vertices and ids resolve.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.vertices.iter().all(|&v| v < g.vertex_count())
            && self.edges.iter().all(|&e| {
                e < g.edge_count() && {
                    let (u, v) = g.endpoints(e);
                    self.vertices.contains(&u) && self.vertices.contains(&v)
                }
            })
    }

    pub fn has_isolated_vertex(&self, g: &Graph) -> bool {
        self.vertices.iter().any(|&v| {
            !g.neighbors(v)
                .iter()
                .any(|&(_, e)| self.edges.contains(&e))
        })
    }
}

/// An edge cut `F` with the two sides of `G - F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCut {
    pub edges: BTreeSet<EdgeId>,
    pub side_a: BTreeSet<VertexId>,
    pub side_b: BTreeSet<VertexId>,
}

impl EdgeCut {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Disjoint-set forest over `0..n`.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
