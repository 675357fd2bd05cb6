use std::collections::{BTreeSet, VecDeque};

use super::{EdgeCut, EdgeId, Extended, Graph, GraphError, UnionFind, VertexId};

/// Above this order the cyclic-cut search switches from vertex
/// bipartitions to edge-subset enumeration.
pub const BIPARTITION_LIMIT: usize = 26;

pub fn max_degree(g: &Graph) -> usize {
    g.max_degree()
}

/// Length of a shortest cycle, by BFS from every vertex.
pub fn girth(g: &Graph) -> Extended {
    let n = g.vertex_count();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    for root in g.vertices() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        parent_edge.iter_mut().for_each(|p| *p = usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &(w, e) in g.neighbors(u) {
                if e == parent_edge[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent_edge[w] = e;
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Extended::Infinite
    } else {
        Extended::Finite(best)
    }
}

/// Connected components as sorted vertex sets, ordered by smallest member.
pub fn components(g: &Graph, removed: &BTreeSet<EdgeId>) -> Vec<BTreeSet<VertexId>> {
    let mut uf = UnionFind::new(g.vertex_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !removed.contains(&e) {
            uf.union(u, v);
        }
    }
    let mut by_root: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut out: Vec<BTreeSet<VertexId>> = Vec::new();
    for v in g.vertices() {
        let r = uf.find(v);
        let idx = *by_root[r].get_or_insert_with(|| {
            out.push(BTreeSet::new());
            out.len() - 1
        });
        out[idx].insert(v);
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    g.vertex_count() <= 1 || components(g, &BTreeSet::new()).len() == 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicConnectivity {
    pub size: Extended,
    pub witness: Option<EdgeCut>,
}

/// Minimum size of a cyclic edge cut, with a witness.
///
/// Exact. Graphs up to [`BIPARTITION_LIMIT`] vertices are searched over
/// vertex bipartitions with connected sides; larger ones over edge subsets
/// of increasing size. Both are exponential.
pub fn cyclic_edge_connectivity(g: &Graph) -> Result<CyclicConnectivity, GraphError> {
    if !is_connected(g) {
        return Err(GraphError::Disconnected);
    }
    if g.vertex_count() <= BIPARTITION_LIMIT {
        let cut = Bipartitions::new(g).minimum(usize::MAX);
        Ok(CyclicConnectivity {
            size: cut
                .as_ref()
                .map_or(Extended::Infinite, |c| Extended::Finite(c.size())),
            witness: cut,
        })
    } else {
        cyclic_edge_connectivity_by_edge_sets(g)
    }
}

/// Same contract as [`cyclic_edge_connectivity`], always enumerating edge
/// subsets. Kept public as an independent route.
pub fn cyclic_edge_connectivity_by_edge_sets(
    g: &Graph,
) -> Result<CyclicConnectivity, GraphError> {
    if !is_connected(g) {
        return Err(GraphError::Disconnected);
    }
    // Each side of a cyclic cut holds at least three edges.
    let max = g.edge_count().saturating_sub(6);
    for k in 1..=max {
        let mut found = None;
        for_each_subset(g.edge_count(), k, |subset| {
            found = check_cyclic_cut(g, subset);
            found.is_some()
        });
        if let Some(cut) = found {
            return Ok(CyclicConnectivity {
                size: Extended::Finite(k),
                witness: Some(cut),
            });
        }
    }
    Ok(CyclicConnectivity {
        size: Extended::Infinite,
        witness: None,
    })
}

/// Every minimal cyclic edge cut with fewer than `k` edges. A minimal cut
/// leaves exactly two connected sides.
pub fn cyclic_cuts_below(g: &Graph, k: usize) -> Result<Vec<EdgeCut>, GraphError> {
    if !is_connected(g) {
        return Err(GraphError::Disconnected);
    }
    if k <= 1 {
        return Ok(Vec::new());
    }
    if g.vertex_count() <= BIPARTITION_LIMIT {
        return Ok(Bipartitions::new(g).all_below(k));
    }
    let mut out = Vec::new();
    for size in 1..k.min(g.edge_count() + 1) {
        for_each_subset(g.edge_count(), size, |subset| {
            if let Some(cut) = check_cyclic_cut(g, subset) {
                out.push(cut);
            }
            false
        });
    }
    Ok(out)
}

/// More than `k` edges and no cyclic edge cut with fewer than `k` edges.
pub fn is_cyclically_k_connected(g: &Graph, k: usize) -> Result<bool, GraphError> {
    if g.edge_count() <= k {
        return Ok(false);
    }
    Ok(cyclic_cuts_below(g, k)?.is_empty())
}

/// `subset` is a minimal cyclic cut: `G - F` has exactly two components,
/// each containing a cycle, and every cut edge joins them.
fn check_cyclic_cut(g: &Graph, subset: &[EdgeId]) -> Option<EdgeCut> {
    let removed: BTreeSet<EdgeId> = subset.iter().copied().collect();
    let comps = components(g, &removed);
    if comps.len() != 2 {
        return None;
    }
    let (a, b) = (&comps[0], &comps[1]);
    let crossing = subset.iter().all(|&e| {
        let (u, v) = g.endpoints(e);
        a.contains(&u) != a.contains(&v)
    });
    if !crossing {
        return None;
    }
    let inner = |side: &BTreeSet<VertexId>| {
        g.edges()
            .iter()
            .filter(|(u, v)| side.contains(u) && side.contains(v))
            .count()
    };
    if inner(a) < a.len() || inner(b) < b.len() {
        return None;
    }
    Some(EdgeCut {
        edges: removed,
        side_a: a.clone(),
        side_b: b.clone(),
    })
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns true.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Bitmask enumeration of bipartitions `(S, V \ S)` with the last vertex
/// always outside `S`.
struct Bipartitions<'g> {
    g: &'g Graph,
    adj: Vec<u64>,
    full: u64,
}

impl<'g> Bipartitions<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        assert!(n <= 63);
        let mut adj = vec![0u64; n];
        for &(u, v) in g.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Self {
            g,
            adj,
            full: if n == 0 { 0 } else { (1u64 << n) - 1 },
        }
    }

    fn inner_edges(&self, s: u64) -> u32 {
        let mut t = s;
        let mut twice = 0;
        while t != 0 {
            let v = t.trailing_zeros() as usize;
            twice += (self.adj[v] & s).count_ones();
            t &= t - 1;
        }
        twice / 2
    }

    fn boundary(&self, s: u64) -> u32 {
        let out = self.full & !s;
        let mut t = s;
        let mut size = 0;
        while t != 0 {
            let v = t.trailing_zeros() as usize;
            size += (self.adj[v] & out).count_ones();
            t &= t - 1;
        }
        size
    }

    fn connected(&self, s: u64) -> bool {
        if s == 0 {
            return false;
        }
        let mut seen = 1u64 << s.trailing_zeros();
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            let mut t = frontier;
            while t != 0 {
                let v = t.trailing_zeros() as usize;
                next |= self.adj[v];
                t &= t - 1;
            }
            next &= s & !seen;
            seen |= next;
            frontier = next;
        }
        seen == s
    }

    /// Cut size if `(s, complement)` is a minimal cyclic cut smaller than `bound`.
    fn cyclic_cut_size(&self, s: u64, bound: u32) -> Option<u32> {
        let c = self.full & !s;
        let size = self.boundary(s);
        if size >= bound {
            return None;
        }
        if self.inner_edges(s) < s.count_ones() || self.inner_edges(c) < c.count_ones() {
            return None;
        }
        if !self.connected(s) || !self.connected(c) {
            return None;
        }
        Some(size)
    }

    fn to_cut(&self, s: u64) -> EdgeCut {
        let side = |mask: u64| -> BTreeSet<VertexId> {
            self.g.vertices().filter(|&v| mask >> v & 1 == 1).collect()
        };
        let edges = self
            .g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| (s >> u & 1) != (s >> v & 1))
            .map(|(e, _)| e)
            .collect();
        EdgeCut {
            edges,
            side_a: side(s),
            side_b: side(self.full & !s),
        }
    }

    fn masks(&self) -> std::ops::Range<u64> {
        let n = self.g.vertex_count();
        if n < 2 {
            return 1..1;
        }
        1..(1u64 << (n - 1))
    }

    fn minimum(&self, cap: usize) -> Option<EdgeCut> {
        let mut bound = u32::try_from(cap).unwrap_or(u32::MAX);
        let mut best = None;
        for s in self.masks() {
            if let Some(size) = self.cyclic_cut_size(s, bound) {
                bound = size;
                best = Some(s);
            }
        }
        best.map(|s| self.to_cut(s))
    }

    fn all_below(&self, k: usize) -> Vec<EdgeCut> {
        let bound = u32::try_from(k).unwrap_or(u32::MAX);
        self.masks()
            .filter(|&s| self.cyclic_cut_size(s, bound).is_some())
            .map(|s| self.to_cut(s))
            .collect()
    }
}

/// `G_B`: one side of a cut collapsed to a hub vertex, each cut edge
/// replaced by a path with `t` internal vertices.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Graph,
    pub hub: VertexId,
    /// Host vertex for every new vertex; `None` for the hub and subdivision
    /// vertices.
    pub vertex_origin: Vec<Option<VertexId>>,
    /// Host edge for every new edge inside the kept side.
    pub edge_origin: Vec<Option<EdgeId>>,
    /// For each host cut edge, the new edges of its path from the hub.
    pub cut_paths: Vec<(EdgeId, Vec<EdgeId>)>,
}

fn fresh_label(g: &Graph, base: &str, taken: &Graph) -> String {
    let mut label = base.to_string();
    let mut i = 0;
    while g.vertex_by_label(&label).is_some() || taken.vertex_by_label(&label).is_some() {
        i += 1;
        label = format!("{base}_{i}");
    }
    label
}

pub fn contract_and_subdivide(
    g: &Graph,
    a: &BTreeSet<VertexId>,
    t: usize,
) -> Result<Contraction, GraphError> {
    if a.is_empty() || a.len() >= g.vertex_count() {
        return Err(GraphError::Invalid("contracted side must be a proper nonempty vertex set".into()));
    }
    if let Some(&v) = a.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(GraphError::UnknownVertex(v));
    }
    let (side, _, _) = g.extract(&g.induced(a));
    if !is_connected(&side) {
        return Err(GraphError::Invalid("contracted side does not induce a connected subgraph".into()));
    }

    let mut out = Graph::new();
    let mut vertex_origin = Vec::new();
    let mut new_id = vec![usize::MAX; g.vertex_count()];
    for v in g.vertices().filter(|v| !a.contains(v)) {
        new_id[v] = out.add_vertex(g.label(v))?;
        vertex_origin.push(Some(v));
    }
    let hub_label = fresh_label(g, "w", &out);
    let hub = out.add_vertex(hub_label)?;
    vertex_origin.push(None);

    let mut edge_origin = Vec::new();
    let mut cut_paths = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match (a.contains(&u), a.contains(&v)) {
            (false, false) => {
                out.add_edge(new_id[u], new_id[v])?;
                edge_origin.push(Some(e));
            }
            (true, true) => {}
            (ua, _) => {
                let kept = if ua { v } else { u };
                let mut prev = hub;
                let mut path = Vec::new();
                for j in 1..=t {
                    let label = fresh_label(g, &format!("s{e}_{j}"), &out);
                    let s = out.add_vertex(label)?;
                    vertex_origin.push(None);
                    path.push(out.add_edge(prev, s)?);
                    edge_origin.push(None);
                    prev = s;
                }
                let last = out.add_edge(prev, new_id[kept]).map_err(|err| match err {
                    GraphError::ParallelEdge(..) => GraphError::Invalid(
                        "contraction without subdivision would create parallel edges".into(),
                    ),
                    other => other,
                })?;
                edge_origin.push(None);
                path.push(last);
                cut_paths.push((e, path));
            }
        }
    }
    Ok(Contraction {
        graph: out,
        hub,
        vertex_origin,
        edge_origin,
        cut_paths,
    })
}
