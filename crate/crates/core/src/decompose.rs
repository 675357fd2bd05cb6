//! Partitions of `E(G)` into `⌈ℓ/2⌉` sub-2-factors, one of them a matching
//! when `ℓ` is odd.

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, VertexId};

/// Default node budget of the backtracking search.
pub const NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("maximum degree {max_degree} exceeds ell = {ell}")]
    DegreeTooLarge { max_degree: usize, ell: usize },
    #[error("ell must be positive")]
    ZeroEll,
    #[error("no {0}-decomposition exists (exhaustive search)")]
    NotFound(usize),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<Vec<EdgeId>>,
    /// Index of the designated matching, present exactly when `ℓ` is odd.
    pub matching: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub parts: Vec<Vec<String>>,
    pub matching: Option<usize>,
}

impl Decomposition {
    fn normalized(mut self) -> Self {
        for p in &mut self.parts {
            p.sort_unstable();
        }
        self
    }

    pub fn to_doc(&self, g: &Graph) -> DecompositionDoc {
        DecompositionDoc {
            parts: self
                .parts
                .iter()
                .map(|p| p.iter().map(|&e| g.edge_label(e)).collect())
                .collect(),
            matching: self.matching,
        }
    }

    pub fn from_doc(g: &Graph, doc: &DecompositionDoc) -> Result<Self, DecomposeError> {
        let edge = |s: &String| {
            let err = || DecomposeError::UnknownEdge(s.clone());
            let (a, b) = s.split_once('-').ok_or_else(err)?;
            let u = g.vertex_by_label(a).ok_or_else(err)?;
            let v = g.vertex_by_label(b).ok_or_else(err)?;
            g.edge_between(u, v).ok_or_else(err)
        };
        let parts = doc
            .parts
            .iter()
            .map(|p| p.iter().map(edge).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            parts,
            matching: doc.matching,
        })
    }
}

/// Proper edge coloring with at most `Δ + 1` colors (Misra–Gries). Classes
/// are listed by color and are never empty.
pub fn edge_color(g: &Graph) -> Vec<Vec<EdgeId>> {
    let palette = g.max_degree() + 1;
    let mut color: Vec<Option<usize>> = vec![None; g.edge_count()];
    // at[v][c]: the edge of color c at v
    let mut at: Vec<Vec<Option<EdgeId>>> = vec![vec![None; palette]; g.vertex_count()];
    let free = |at: &Vec<Vec<Option<EdgeId>>>, v: VertexId| -> usize {
        at[v].iter().position(Option::is_none).expect("palette has a free color")
    };
    let is_free = |at: &Vec<Vec<Option<EdgeId>>>, v: VertexId, c: usize| at[v][c].is_none();

    for e0 in g.edge_ids() {
        let (u, v) = g.endpoints(e0);
        // maximal fan of u starting at v
        let mut fan: Vec<VertexId> = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let next = g.neighbors(u).iter().find(|&&(x, e)| {
                !fan.contains(&x) && color[e].is_some_and(|c| is_free(&at, last, c))
            });
            match next {
                Some(&(x, _)) => fan.push(x),
                None => break,
            }
        }
        let c = free(&at, u);
        let d = free(&at, *fan.last().unwrap());
        if c != d {
            // invert the cd-path starting at u, which begins with a d-edge
            let mut path = Vec::new();
            let mut cur = u;
            let mut want = d;
            while let Some(e) = at[cur][want] {
                path.push(e);
                cur = g.other_end(e, cur);
                want = if want == d { c } else { d };
            }
            for &e in &path {
                let (a, b) = g.endpoints(e);
                let old = color[e].unwrap();
                at[a][old] = None;
                at[b][old] = None;
            }
            for &e in &path {
                let (a, b) = g.endpoints(e);
                let new = if color[e] == Some(c) { d } else { c };
                color[e] = Some(new);
                at[a][new] = Some(e);
                at[b][new] = Some(e);
            }
        }
        // shortest fan prefix that is still a fan and ends where d is free
        let fan_edge = |x: VertexId| g.edge_between(u, x).unwrap();
        let mut w = None;
        for j in 0..fan.len() {
            if j > 0 {
                let ok = color[fan_edge(fan[j])].is_some_and(|col| is_free(&at, fan[j - 1], col));
                if !ok {
                    break;
                }
            }
            if is_free(&at, fan[j], d) {
                w = Some(j);
                break;
            }
        }
        let w = w.expect("Misra-Gries invariant: a fan prefix ends at a d-free vertex");
        // rotate the prefix and color its last edge with d
        let edges: Vec<EdgeId> = fan[..=w].iter().map(|&x| fan_edge(x)).collect();
        let shifted: Vec<Option<usize>> = (0..=w)
            .map(|i| if i < w { color[edges[i + 1]] } else { Some(d) })
            .collect();
        for &e in &edges {
            if let Some(old) = color[e] {
                let (a, b) = g.endpoints(e);
                at[a][old] = None;
                at[b][old] = None;
            }
        }
        for (&e, col) in edges.iter().zip(shifted) {
            let col = col.expect("fan edges beyond the first are colored");
            let (a, b) = g.endpoints(e);
            color[e] = Some(col);
            at[a][col] = Some(e);
            at[b][col] = Some(e);
        }
    }
    drop_last_color(g, &mut color, &mut at);
    let mut classes = vec![Vec::new(); palette];
    for e in g.edge_ids() {
        classes[color[e].expect("every edge colored")].push(e);
    }
    classes.retain(|c| !c.is_empty());
    classes
}

/// Tries to recolor every edge of the last color `Δ` into `0..Δ` by
/// swapping a two-colored Kempe chain.
fn drop_last_color(g: &Graph, color: &mut [Option<usize>], at: &mut [Vec<Option<EdgeId>>]) {
    let extra = g.max_degree();
    if extra == 0 {
        return;
    }
    let set = |color: &mut [Option<usize>], at: &mut [Vec<Option<EdgeId>>], e: EdgeId, c: Option<usize>| {
        let (a, b) = g.endpoints(e);
        if let Some(old) = color[e] {
            at[a][old] = None;
            at[b][old] = None;
        }
        if let Some(new) = c {
            at[a][new] = Some(e);
            at[b][new] = Some(e);
        }
        color[e] = c;
    };
    for e in g.edge_ids() {
        if color[e] != Some(extra) {
            continue;
        }
        let (u, v) = g.endpoints(e);
        set(color, at, e, None);
        let free_u: Vec<usize> = (0..extra).filter(|&c| at[u][c].is_none()).collect();
        let free_v: Vec<usize> = (0..extra).filter(|&c| at[v][c].is_none()).collect();
        let mut done = false;
        'pairs: for &a in &free_u {
            for &b in &free_v {
                if a == b {
                    set(color, at, e, Some(a));
                    done = true;
                    break 'pairs;
                }
                // chain from v: a-edge, b-edge, ...
                let mut path = Vec::new();
                let mut cur = v;
                let mut want = a;
                while let Some(f) = at[cur][want] {
                    path.push(f);
                    cur = g.other_end(f, cur);
                    want = if want == a { b } else { a };
                }
                if cur == u || path.iter().any(|&f| {
                    let (x, y) = g.endpoints(f);
                    x == u || y == u
                }) {
                    continue;
                }
                let flipped: Vec<(EdgeId, usize)> = path
                    .iter()
                    .map(|&f| (f, if color[f] == Some(a) { b } else { a }))
                    .collect();
                for &(f, _) in &flipped {
                    set(color, at, f, None);
                }
                for (f, c) in flipped {
                    set(color, at, f, Some(c));
                }
                set(color, at, e, Some(a));
                done = true;
                break 'pairs;
            }
        }
        if !done {
            set(color, at, e, Some(extra));
        }
    }
}

fn part_count(ell: usize) -> usize {
    ell.div_ceil(2)
}

/// Pairs edge-color classes; the smallest class becomes the matching when
/// `ℓ` is odd. Needs at most `ℓ` classes.
fn from_edge_coloring(classes: Vec<Vec<EdgeId>>, ell: usize) -> Option<Decomposition> {
    if classes.len() > ell {
        return None;
    }
    let mut classes = classes;
    let mut parts = Vec::new();
    let mut matching = None;
    if ell % 2 == 1 {
        let smallest = (0..classes.len()).min_by_key(|&i| (classes[i].len(), i));
        parts.push(smallest.map(|i| classes.remove(i)).unwrap_or_default());
        matching = Some(0);
    }
    let mut it = classes.into_iter();
    while let Some(a) = it.next() {
        let mut p = a;
        p.extend(it.next().unwrap_or_default());
        parts.push(p);
    }
    parts.resize(part_count(ell), Vec::new());
    Some(Decomposition { parts, matching }.normalized())
}

struct Backtrack<'a> {
    g: &'a Graph,
    order: Vec<EdgeId>,
    caps: Vec<usize>,
    load: Vec<Vec<u8>>,
    assign: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Backtrack<'_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn search(&mut self, k: usize) -> Option<bool> {
        if k == self.order.len() {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let e = self.order[k];
        let (u, v) = self.g.endpoints(e);
        let mut opened_empty = false;
        for p in 0..self.caps.len() {
            let cap = self.caps[p];
            if self.load[p][u] as usize >= cap || self.load[p][v] as usize >= cap {
                continue;
            }
            // interchangeable empty 2-parts: only try the first
            let empty = self.load[p].iter().all(|&l| l == 0);
            if empty && cap == 2 {
                if opened_empty {
                    continue;
                }
                opened_empty = true;
            }
            self.load[p][u] += 1;
            self.load[p][v] += 1;
            self.assign[e] = p;
            match self.search(k + 1) {
                Some(false) => {}
                other => return other,
            }
            self.load[p][u] -= 1;
            self.load[p][v] -= 1;
        }
        Some(false)
    }
}

/// Edges in breadth-first order so that neighboring edges are decided
/// together.
fn bfs_edge_order(g: &Graph) -> Vec<EdgeId> {
    let mut seen_v = vec![false; g.vertex_count()];
    let mut seen_e = vec![false; g.edge_count()];
    let mut order = Vec::with_capacity(g.edge_count());
    for s in g.vertices() {
        if seen_v[s] {
            continue;
        }
        seen_v[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in g.neighbors(x) {
                if !seen_e[e] {
                    seen_e[e] = true;
                    order.push(e);
                }
                if !seen_v[y] {
                    seen_v[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

/// Exhaustive search over edge-to-part assignments.
pub fn backtrack_decomposition(g: &Graph, ell: usize, budget: u64) -> Result<Decomposition, DecomposeError> {
    let parts = part_count(ell);
    let mut caps = vec![2; parts];
    let matching = (ell % 2 == 1).then_some(0);
    if matching.is_some() {
        caps[0] = 1;
    }
    let mut bt = Backtrack {
        g,
        order: bfs_edge_order(g),
        load: vec![vec![0; g.vertex_count()]; parts],
        caps,
        assign: vec![0; g.edge_count()],
        nodes: 0,
        budget,
    };
    match bt.search(0) {
        Some(true) => {
            let mut out = vec![Vec::new(); parts];
            for e in g.edge_ids() {
                out[bt.assign[e]].push(e);
            }
            Ok(Decomposition { parts: out, matching }.normalized())
        }
        Some(false) => Err(DecomposeError::NotFound(ell)),
        None => Err(DecomposeError::BudgetExhausted(budget)),
    }
}

/// An `ℓ`-decomposition: edge-coloring fast path, then backtracking.
pub fn ell_decomposition(g: &Graph, ell: usize, budget: u64) -> Result<Decomposition, DecomposeError> {
    if ell == 0 {
        return Err(DecomposeError::ZeroEll);
    }
    let max_degree = g.max_degree();
    if max_degree > ell {
        return Err(DecomposeError::DegreeTooLarge { max_degree, ell });
    }
    if let Some(d) = from_edge_coloring(edge_color(g), ell) {
        return Ok(d);
    }
    backtrack_decomposition(g, ell, budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionViolation {
    PartCount { expected: usize, found: usize },
    MatchingIndex(Option<usize>),
    Uncovered(EdgeId),
    Repeated(EdgeId),
    UnknownEdge(EdgeId),
    Degree { part: usize, vertex: VertexId, degree: usize },
}

pub fn verify_decomposition(
    g: &Graph,
    d: &Decomposition,
    ell: usize,
) -> Result<(), Vec<DecompositionViolation>> {
    use DecompositionViolation as V;
    let mut out = Vec::new();
    if d.parts.len() != part_count(ell) {
        out.push(V::PartCount {
            expected: part_count(ell),
            found: d.parts.len(),
        });
    }
    let matching_ok = match d.matching {
        None => ell % 2 == 0,
        Some(i) => ell % 2 == 1 && i < d.parts.len(),
    };
    if !matching_ok {
        out.push(V::MatchingIndex(d.matching));
    }
    let mut seen = vec![0usize; g.edge_count()];
    for (p, part) in d.parts.iter().enumerate() {
        let cap = if d.matching == Some(p) { 1 } else { 2 };
        let mut deg = vec![0usize; g.vertex_count()];
        for &e in part {
            if e >= g.edge_count() {
                out.push(V::UnknownEdge(e));
                continue;
            }
            seen[e] += 1;
            let (a, b) = g.endpoints(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        for (vertex, &degree) in deg.iter().enumerate() {
            if degree > cap {
                out.push(V::Degree { part: p, vertex, degree });
            }
        }
    }
    for (e, &k) in seen.iter().enumerate() {
        match k {
            0 => out.push(V::Uncovered(e)),
            1 => {}
            _ => out.push(V::Repeated(e)),
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn is_proper(g: &Graph, classes: &[Vec<EdgeId>]) -> bool {
        let mut all: Vec<EdgeId> = classes.concat();
        all.sort_unstable();
        all == g.edge_ids().collect::<Vec<_>>()
            && classes.iter().all(|c| {
                let mut hit = vec![false; g.vertex_count()];
                c.iter().all(|&e| {
                    let (a, b) = g.endpoints(e);
                    !std::mem::replace(&mut hit[a], true) && !std::mem::replace(&mut hit[b], true)
                })
            })
    }

    #[test]
    fn edge_color_examples() {
        let k4 = fixtures::complete(4);
        let c = edge_color(&k4);
        assert!(is_proper(&k4, &c));
        assert_eq!(c.len(), 3);
        let c5 = fixtures::cycle(5);
        let c = edge_color(&c5);
        assert!(is_proper(&c5, &c));
        assert_eq!(c.len(), 3);
        let star = fixtures::star(4);
        assert_eq!(edge_color(&star).len(), 4);
    }

    #[test]
    fn decomposition_examples() {
        let c6 = fixtures::cycle(6);
        let d = ell_decomposition(&c6, 2, NODE_BUDGET).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert_eq!(d.parts[0].len(), 6);
        verify_decomposition(&c6, &d, 2).unwrap();

        let k4 = fixtures::complete(4);
        let d = ell_decomposition(&k4, 3, NODE_BUDGET).unwrap();
        verify_decomposition(&k4, &d, 3).unwrap();
        assert_eq!(d.parts[0].len(), 2);
        assert_eq!(d.parts[1].len(), 4);

        let p = fixtures::petersen();
        let d = ell_decomposition(&p, 3, NODE_BUDGET).unwrap();
        verify_decomposition(&p, &d, 3).unwrap();
        assert_eq!(d.parts[d.matching.unwrap()].len(), 5);
    }

    #[test]
    fn petersen_is_class_two_so_backtracking_is_needed() {
        let p = fixtures::petersen();
        assert_eq!(edge_color(&p).len(), 4);
        assert!(backtrack_decomposition(&p, 3, NODE_BUDGET).is_ok());
    }

    #[test]
    fn nonexistence_and_budget() {
        // K4 has no 2-decomposition: a single sub-2-factor cannot hold degree 3
        assert!(matches!(
            ell_decomposition(&fixtures::complete(4), 2, NODE_BUDGET),
            Err(DecomposeError::DegreeTooLarge { .. })
        ));
        // ell = 1 asks for a single matching
        let k4 = fixtures::complete(4);
        assert_eq!(backtrack_decomposition(&k4, 1, NODE_BUDGET), Err(DecomposeError::NotFound(1)));
        assert_eq!(
            backtrack_decomposition(&fixtures::petersen(), 3, 1),
            Err(DecomposeError::BudgetExhausted(1))
        );
    }

    #[test]
    fn verifier_catches_tampering() {
        let p = fixtures::petersen();
        let d = ell_decomposition(&p, 3, NODE_BUDGET).unwrap();
        let m = d.matching.unwrap();
        let other = 1 - m;

        let mut moved = d.clone();
        let e = moved.parts[m].pop().unwrap();
        moved.parts[other].push(e);
        let v = verify_decomposition(&p, &moved, 3).unwrap_err();
        assert!(v.iter().any(|x| matches!(x, DecompositionViolation::Degree { degree: 3, .. })));

        let mut dropped = d.clone();
        let e = dropped.parts[other].pop().unwrap();
        assert_eq!(
            verify_decomposition(&p, &dropped, 3),
            Err(vec![DecompositionViolation::Uncovered(e)])
        );
    }

    #[test]
    fn json_round_trip() {
        let p = fixtures::petersen();
        let d = ell_decomposition(&p, 3, NODE_BUDGET).unwrap();
        let text = serde_json::to_string(&d.to_doc(&p)).unwrap();
        let doc: DecompositionDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(Decomposition::from_doc(&p, &doc).unwrap(), d);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (3usize..9, prop::collection::vec(any::<bool>(), 36)).prop_map(|(n, bits)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    }

    proptest! {
        #[test]
        fn misra_gries_is_proper_within_vizing(g in arb_graph()) {
            let c = edge_color(&g);
            prop_assert!(is_proper(&g, &c));
            prop_assert!(c.len() <= g.max_degree() + 1);
            for a in 0..c.len() {
                for b in a + 1..c.len() {
                    let mut deg = vec![0; g.vertex_count()];
                    for &e in c[a].iter().chain(&c[b]) {
                        let (x, y) = g.endpoints(e);
                        deg[x] += 1;
                        deg[y] += 1;
                    }
                    prop_assert!(deg.iter().all(|&d| d <= 2));
                }
            }
        }

        #[test]
        fn returned_decompositions_verify(g in arb_graph(), extra in 0usize..3) {
            let ell = g.max_degree().max(1) + extra;
            if let Ok(d) = ell_decomposition(&g, ell, 100_000) {
                prop_assert!(verify_decomposition(&g, &d, ell).is_ok());
            }
        }
    }
}
