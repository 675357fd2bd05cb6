use std::collections::{BTreeSet, VecDeque};

use super::{EdgeId, Graph, Subgraph, UnionFind, VertexId};

/// A path whose end-vertices lie in `H` while none of its internal vertices
/// and none of its edges do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl HPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// For every pair of distinct `H`-vertices joined by an `H`-path of length
/// at most `d`, one shortest such path. Sorted by endpoints.
pub fn h_paths_up_to(g: &Graph, h: &Subgraph, d: usize) -> Vec<HPath> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut dist = vec![usize::MAX; n];
    let mut via: Vec<(VertexId, EdgeId)> = vec![(usize::MAX, usize::MAX); n];
    for &u in &h.vertices {
        let mut touched = vec![u];
        dist[u] = 0;
        // endpoint -> (predecessor, edge) of the closing step
        let mut hits: Vec<(VertexId, VertexId, EdgeId)> = Vec::new();
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if dist[x] >= d {
                break;
            }
            for &(y, e) in g.neighbors(x) {
                if h.edges.contains(&e) {
                    continue;
                }
                if h.vertices.contains(&y) {
                    if y > u && !hits.iter().any(|&(t, _, _)| t == y) {
                        hits.push((y, x, e));
                    }
                    continue;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    via[y] = (x, e);
                    touched.push(y);
                    queue.push_back(y);
                }
            }
        }
        hits.sort();
        for (end, pred, last) in hits {
            let mut vertices = vec![end];
            let mut edges = vec![last];
            let mut cur = pred;
            while cur != u {
                vertices.push(cur);
                let (p, e) = via[cur];
                edges.push(e);
                cur = p;
            }
            vertices.push(u);
            vertices.reverse();
            edges.reverse();
            out.push(HPath { vertices, edges });
        }
        for v in touched {
            dist[v] = usize::MAX;
        }
    }
    out
}

/// Every `H`-path is longer than `d`.
pub fn is_d_closed(g: &Graph, h: &Subgraph, d: usize) -> bool {
    h_paths_up_to(g, h, d).is_empty()
}

/// Smallest `d`-closed subgraph of `g` containing `h`.
pub fn d_connector(g: &Graph, h: &Subgraph, d: usize) -> Subgraph {
    d_connector_with(g, h, d, |_| 0)
}

/// Fixpoint of adjoining short `H`-paths, with `choose` picking which of the
/// currently available paths is adjoined next.
pub fn d_connector_with(
    g: &Graph,
    h: &Subgraph,
    d: usize,
    mut choose: impl FnMut(&[HPath]) -> usize,
) -> Subgraph {
    let mut cur = h.clone();
    loop {
        let paths = h_paths_up_to(g, &cur, d);
        if paths.is_empty() {
            return cur;
        }
        let pick = choose(&paths).min(paths.len() - 1);
        let p = &paths[pick];
        cur.vertices.extend(p.vertices.iter().copied());
        cur.edges.extend(p.edges.iter().copied());
    }
}

/// `N(H)`: every edge with an end-vertex in `H`, with its endpoints. The
/// vertices of `H` are kept as well.
pub fn neighborhood(g: &Graph, h: &Subgraph) -> Subgraph {
    let mut out = Subgraph {
        vertices: h.vertices.clone(),
        edges: BTreeSet::new(),
    };
    for &v in &h.vertices {
        for &(w, e) in g.neighbors(v) {
            out.vertices.insert(w);
            out.edges.insert(e);
        }
    }
    out
}

pub fn is_forest(g: &Graph, h: &Subgraph) -> bool {
    let mut uf = UnionFind::new(g.vertex_count());
    h.edges.iter().all(|&e| {
        let (u, v) = g.endpoints(e);
        uf.union(u, v)
    })
}
