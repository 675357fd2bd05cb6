//! The total graph `T(G)` and its independent sets.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::graph::{EdgeId, Graph, VertexId};
use crate::rational::{self, Rational};

/// Default cap on `|V(T(G))|` for full maximal-set enumeration.
pub const ENUMERATION_BUDGET: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TotalError {
    #[error("unknown total element {0:?}")]
    UnknownElement(String),
    #[error("total graph has {size} elements, enumeration budget is {budget}")]
    BudgetExceeded { size: usize, budget: usize },
    #[error("weight vector has {found} entries, expected {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("negative weight on {0}")]
    NegativeWeight(String),
}

/// A vertex or an edge of the host graph. Vertices sort before edges, which
/// matches [`TotalElement::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TotalElement {
    Vertex(VertexId),
    Edge(EdgeId),
}

impl TotalElement {
    /// Dense index: vertex `i` is `i`, edge `j` is `|V| + j`.
    pub fn index(self, g: &Graph) -> usize {
        match self {
            TotalElement::Vertex(v) => v,
            TotalElement::Edge(e) => g.vertex_count() + e,
        }
    }

    pub fn from_index(g: &Graph, i: usize) -> Self {
        let n = g.vertex_count();
        if i < n {
            TotalElement::Vertex(i)
        } else {
            TotalElement::Edge(i - n)
        }
    }

    /// `v:<label>` or `e:<label>-<label>`.
    pub fn label(self, g: &Graph) -> String {
        match self {
            TotalElement::Vertex(v) => format!("v:{}", g.label(v)),
            TotalElement::Edge(e) => format!("e:{}", g.edge_label(e)),
        }
    }

    pub fn parse(g: &Graph, s: &str) -> Result<Self, TotalError> {
        let err = || TotalError::UnknownElement(s.to_string());
        if let Some(l) = s.strip_prefix("v:") {
            return g.vertex_by_label(l).map(TotalElement::Vertex).ok_or_else(err);
        }
        let (a, b) = s.strip_prefix("e:").and_then(|r| r.split_once('-')).ok_or_else(err)?;
        let u = g.vertex_by_label(a).ok_or_else(err)?;
        let v = g.vertex_by_label(b).ok_or_else(err)?;
        g.edge_between(u, v).map(TotalElement::Edge).ok_or_else(err)
    }

    pub fn is_valid_in(self, g: &Graph) -> bool {
        match self {
            TotalElement::Vertex(v) => v < g.vertex_count(),
            TotalElement::Edge(e) => e < g.edge_count(),
        }
    }
}

pub fn element_count(g: &Graph) -> usize {
    g.vertex_count() + g.edge_count()
}

pub fn elements(g: &Graph) -> impl Iterator<Item = TotalElement> + '_ {
    (0..element_count(g)).map(move |i| TotalElement::from_index(g, i))
}

/// Adjacency in `T(G)`: adjacent vertices, edges sharing an end, or a vertex
/// and an edge incident with it.
pub fn adjacent(g: &Graph, x: TotalElement, y: TotalElement) -> bool {
    use TotalElement::{Edge, Vertex};
    match (x, y) {
        (Vertex(u), Vertex(v)) => u != v && g.edge_between(u, v).is_some(),
        (Edge(e), Edge(f)) => {
            if e == f {
                return false;
            }
            let (a, b) = g.endpoints(e);
            let (c, d) = g.endpoints(f);
            a == c || a == d || b == c || b == d
        }
        (Vertex(v), Edge(e)) | (Edge(e), Vertex(v)) => {
            let (a, b) = g.endpoints(e);
            v == a || v == b
        }
    }
}

/// `T(G)` as an explicit graph on `0..|V|+|E|`, with the element behind
/// each vertex.
pub fn total_graph(g: &Graph) -> (Graph, Vec<TotalElement>) {
    let elems: Vec<TotalElement> = elements(g).collect();
    let mut pairs = Vec::new();
    for (i, &x) in elems.iter().enumerate() {
        for (j, &y) in elems.iter().enumerate().skip(i + 1) {
            if adjacent(g, x, y) {
                pairs.push((i, j));
            }
        }
    }
    let t = Graph::from_edges(elems.len(), &pairs).expect("total graph is simple");
    (t, elems)
}

/// Closed neighborhoods of `T(G)` as bitsets over element indices.
#[derive(Debug, Clone)]
pub struct TotalAdjacency {
    closed: Vec<FixedBitSet>,
}

impl TotalAdjacency {
    pub fn new(g: &Graph) -> Self {
        let size = element_count(g);
        let n = g.vertex_count();
        let mut closed: Vec<FixedBitSet> = (0..size)
            .map(|i| {
                let mut b = FixedBitSet::with_capacity(size);
                b.insert(i);
                b
            })
            .collect();
        let mut link = |a: usize, b: usize| {
            closed[a].insert(b);
            closed[b].insert(a);
        };
        for v in g.vertices() {
            let inc = g.neighbors(v);
            for (k, &(w, e)) in inc.iter().enumerate() {
                link(v, w);
                link(v, n + e);
                for &(_, f) in &inc[k + 1..] {
                    link(n + e, n + f);
                }
            }
        }
        Self { closed }
    }

    pub fn len(&self) -> usize {
        self.closed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closed.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.closed[a].contains(b)
    }

    pub fn closed(&self, a: usize) -> &FixedBitSet {
        &self.closed[a]
    }
}

/// A set of pairwise non-adjacent total elements, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TotalIndependentSet(Vec<TotalElement>);

impl TotalIndependentSet {
    /// Sorts and deduplicates; does not check independence.
    pub fn new_unchecked(mut members: Vec<TotalElement>) -> Self {
        members.sort();
        members.dedup();
        Self(members)
    }

    pub fn new(g: &Graph, members: Vec<TotalElement>) -> Option<Self> {
        let s = Self::new_unchecked(members);
        is_total_independent(g, &s.0).then_some(s)
    }

    pub fn from_indices(g: &Graph, idx: impl IntoIterator<Item = usize>) -> Self {
        Self::new_unchecked(idx.into_iter().map(|i| TotalElement::from_index(g, i)).collect())
    }

    pub fn members(&self) -> &[TotalElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: TotalElement) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn indices<'a>(&'a self, g: &'a Graph) -> impl Iterator<Item = usize> + 'a {
        self.0.iter().map(move |x| x.index(g))
    }

    pub fn labels(&self, g: &Graph) -> Vec<String> {
        self.0.iter().map(|x| x.label(g)).collect()
    }

    pub fn parse(g: &Graph, labels: &[String]) -> Result<Self, TotalError> {
        let members = labels
            .iter()
            .map(|s| TotalElement::parse(g, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new_unchecked(members))
    }

    pub fn is_maximal(&self, g: &Graph) -> bool {
        elements(g).all(|y| self.contains(y) || self.0.iter().any(|&x| adjacent(g, x, y)))
    }
}

impl fmt::Display for TotalIndependentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Checks the three adjacency clauses pairwise; `T(G)` is never built.
pub fn is_total_independent(g: &Graph, s: &[TotalElement]) -> bool {
    s.iter().all(|x| x.is_valid_in(g))
        && s.iter()
            .enumerate()
            .all(|(i, &x)| s[i + 1..].iter().all(|&y| x != y && !adjacent(g, x, y)))
}

/// Every maximal total independent set, in lexicographic order.
pub fn enumerate_maximal_tis(
    g: &Graph,
    budget: usize,
) -> Result<Vec<TotalIndependentSet>, TotalError> {
    let size = element_count(g);
    if size > budget {
        return Err(TotalError::BudgetExceeded { size, budget });
    }
    let adj = TotalAdjacency::new(g);
    let mut p = FixedBitSet::with_capacity(size);
    p.insert_range(..);
    let x = FixedBitSet::with_capacity(size);
    let mut out = Vec::new();
    bron_kerbosch(&adj, &mut Vec::new(), p, x, &mut out);
    let mut sets: Vec<TotalIndependentSet> = out
        .into_iter()
        .map(|r| TotalIndependentSet::from_indices(g, r))
        .collect();
    sets.sort();
    Ok(sets)
}

/// Maximal cliques of the complement of `T(G)`, with pivoting.
fn bron_kerbosch(
    adj: &TotalAdjacency,
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if p.count_ones(..) == 0 {
        if x.count_ones(..) == 0 {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| {
            let mut rest = p.clone();
            rest.difference_with(adj.closed(u));
            (rest.count_ones(..), std::cmp::Reverse(u))
        })
        .expect("p is nonempty");
    let mut branch = p.clone();
    branch.intersect_with(adj.closed(pivot));
    for v in branch.ones() {
        let mut np = p.clone();
        np.difference_with(adj.closed(v));
        let mut nx = x.clone();
        nx.difference_with(adj.closed(v));
        r.push(v);
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
}

/// A maximum-weight total independent set, extended to a maximal one.
pub fn max_weight_tis(
    g: &Graph,
    weights: &[Rational],
) -> Result<(TotalIndependentSet, Rational), TotalError> {
    let adj = TotalAdjacency::new(g);
    max_weight_tis_with(g, &adj, weights)
}

/// Same as [`max_weight_tis`] with a precomputed adjacency.
pub fn max_weight_tis_with(
    g: &Graph,
    adj: &TotalAdjacency,
    weights: &[Rational],
) -> Result<(TotalIndependentSet, Rational), TotalError> {
    if weights.len() != adj.len() {
        return Err(TotalError::WeightLength {
            expected: adj.len(),
            found: weights.len(),
        });
    }
    if let Some(i) = weights.iter().position(|w| !rational::is_nonnegative(w)) {
        return Err(TotalError::NegativeWeight(TotalElement::from_index(g, i).label(g)));
    }
    let den = rational::common_denominator(weights);
    let scaled: Vec<BigInt> = weights
        .iter()
        .map(|w| w.numer() * (&den / w.denom()))
        .collect();
    let total: BigInt = scaled.iter().sum();
    let picked = if total.to_i128().is_some() {
        let small: Vec<i128> = scaled.iter().map(|w| w.to_i128().unwrap()).collect();
        branch_and_bound(adj, &small)
    } else {
        branch_and_bound(adj, &scaled)
    };
    let mut chosen = FixedBitSet::with_capacity(adj.len());
    for &v in &picked {
        chosen.insert(v);
    }
    // pad with zero-weight elements to reach a maximal set
    for i in 0..adj.len() {
        if !chosen.contains(i) && chosen.ones().all(|j| !adj.adjacent(i, j)) {
            chosen.insert(i);
        }
    }
    let value: Rational = picked.iter().map(|&i| weights[i].clone()).sum();
    Ok((TotalIndependentSet::from_indices(g, chosen.ones()), value))
}

struct Search<'a, W> {
    adj: &'a TotalAdjacency,
    w: &'a [W],
    best: W,
    best_set: Vec<usize>,
    cur: Vec<usize>,
}

impl<W> Search<'_, W>
where
    W: Clone + Ord + Zero + for<'b> Add<&'b W, Output = W>,
{
    /// Greedy partition of `cand` (weight-descending) into cliques of
    /// `T(G)`; an independent set takes at most one member of each.
    fn clique_bound(&self, cand: &[usize]) -> W {
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        let mut bound = W::zero();
        for &v in cand {
            match cliques
                .iter_mut()
                .find(|c| c.iter().all(|&u| self.adj.adjacent(u, v)))
            {
                Some(c) => c.push(v),
                None => {
                    bound = bound + &self.w[v];
                    cliques.push(vec![v]);
                }
            }
        }
        bound
    }

    fn expand(&mut self, cand: &[usize], cur_w: W) {
        if cand.is_empty() {
            if cur_w > self.best {
                self.best = cur_w;
                self.best_set = self.cur.clone();
            }
            return;
        }
        if cur_w.clone() + &self.clique_bound(cand) <= self.best {
            return;
        }
        let v = cand[0];
        let rest: Vec<usize> = cand[1..]
            .iter()
            .copied()
            .filter(|&u| !self.adj.adjacent(u, v))
            .collect();
        self.cur.push(v);
        self.expand(&rest, cur_w.clone() + &self.w[v]);
        self.cur.pop();
        self.expand(&cand[1..], cur_w);
    }
}

fn branch_and_bound<W>(adj: &TotalAdjacency, w: &[W]) -> Vec<usize>
where
    W: Clone + Ord + Zero + for<'b> Add<&'b W, Output = W>,
{
    let mut cand: Vec<usize> = (0..w.len()).filter(|&i| !w[i].is_zero()).collect();
    cand.sort_by(|&a, &b| match w[b].cmp(&w[a]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    let mut s = Search {
        adj,
        w,
        best: W::zero(),
        best_set: Vec::new(),
        cur: Vec::new(),
    };
    s.expand(&cand, W::zero());
    let mut out = s.best_set;
    out.sort_unstable();
    out
}

/// A vertex of maximum degree with its incident edges: a clique of size
/// `Δ + 1` in `T(G)`.
pub fn max_degree_clique(g: &Graph) -> Vec<TotalElement> {
    let Some(v) = g.vertices().max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))) else {
        return Vec::new();
    };
    let mut c = vec![TotalElement::Vertex(v)];
    c.extend(g.neighbors(v).iter().map(|&(_, e)| TotalElement::Edge(e)));
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn all_indep_brute(g: &Graph) -> Vec<Vec<usize>> {
        let (t, _) = total_graph(g);
        let size = t.vertex_count();
        let mut maximal = Vec::new();
        for mask in 0u64..(1 << size) {
            let members: Vec<usize> = (0..size).filter(|&i| mask >> i & 1 == 1).collect();
            let indep = t.edges().iter().all(|&(a, b)| mask >> a & 1 == 0 || mask >> b & 1 == 0);
            if !indep {
                continue;
            }
            let max = (0..size).all(|i| {
                mask >> i & 1 == 1 || t.neighbors(i).iter().any(|&(j, _)| mask >> j & 1 == 1)
            });
            if max {
                maximal.push(members);
            }
        }
        maximal
    }

    #[test]
    fn total_graph_examples() {
        let (t, _) = total_graph(&fixtures::complete(2));
        assert_eq!((t.vertex_count(), t.edge_count()), (3, 3));
        let (t, _) = total_graph(&fixtures::path(3));
        // two vertex pairs, one edge pair, four incidences
        assert_eq!((t.vertex_count(), t.edge_count()), (5, 7));
    }

    /// `T(C_n)` is the square of `C_{2n}`: walking the cycle alternately
    /// through vertices and edges gives the Hamiltonian order.
    #[test]
    fn total_graph_of_cycle_is_square_of_cycle() {
        for n in [4, 5, 6] {
            let g = fixtures::cycle(n);
            let (t, elems) = total_graph(&g);
            assert_eq!(t.vertex_count(), 2 * n);
            let mut order = Vec::new();
            for i in 0..n {
                order.push(TotalElement::Vertex(i));
                order.push(TotalElement::Edge(g.edge_between(i, (i + 1) % n).unwrap()));
            }
            let pos = |x: TotalElement| order.iter().position(|&y| y == x).unwrap();
            for a in 0..2 * n {
                for b in a + 1..2 * n {
                    let gap = (pos(elems[a]) as i64 - pos(elems[b]) as i64).rem_euclid(2 * n as i64);
                    let expect = matches!(gap, 1 | 2) || gap == 2 * n as i64 - 1 || gap == 2 * n as i64 - 2;
                    assert_eq!(t.edge_between(a, b).is_some(), expect);
                }
            }
        }
    }

    #[test]
    fn independence_examples() {
        let k4 = fixtures::complete(4);
        assert!(is_total_independent(&k4, &[TotalElement::Vertex(2)]));
        let e = k4.edge_between(0, 1).unwrap();
        assert!(!is_total_independent(&k4, &[TotalElement::Vertex(0), TotalElement::Edge(e)]));
        let f = k4.edge_between(2, 3).unwrap();
        assert!(is_total_independent(&k4, &[TotalElement::Edge(e), TotalElement::Edge(f)]));
    }

    #[test]
    fn independence_matches_total_graph() {
        for g in [fixtures::path(4), fixtures::cycle(5), fixtures::complete(4), fixtures::star(3)] {
            let (t, elems) = total_graph(&g);
            let size = elems.len();
            for a in 0..size {
                for b in a + 1..size {
                    let pair = [elems[a], elems[b]];
                    assert_eq!(is_total_independent(&g, &pair), t.edge_between(a, b).is_none());
                    for c in b + 1..size {
                        let triple = [elems[a], elems[b], elems[c]];
                        let expect = [(a, b), (a, c), (b, c)]
                            .iter()
                            .all(|&(x, y)| t.edge_between(x, y).is_none());
                        assert_eq!(is_total_independent(&g, &triple), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let k2 = enumerate_maximal_tis(&fixtures::complete(2), ENUMERATION_BUDGET).unwrap();
        assert_eq!(k2.len(), 3);
        assert!(k2.iter().all(|s| s.len() == 1));
        for g in [fixtures::path(3), fixtures::cycle(5), fixtures::complete(4), fixtures::star(4)] {
            let sets = enumerate_maximal_tis(&g, ENUMERATION_BUDGET).unwrap();
            let mut got: Vec<Vec<usize>> = sets.iter().map(|s| s.indices(&g).collect()).collect();
            got.sort();
            let mut want = all_indep_brute(&g);
            want.sort();
            assert_eq!(got, want);
            assert!(sets.iter().all(|s| s.is_maximal(&g)));
        }
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        match enumerate_maximal_tis(&fixtures::petersen(), 20) {
            Err(TotalError::BudgetExceeded { size: 25, budget: 20 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn max_weight_examples() {
        let k2 = fixtures::complete(2);
        let (s, w) = max_weight_tis(&k2, &[int(0), int(0), int(0)]).unwrap();
        assert_eq!(w, int(0));
        assert!(s.is_maximal(&k2));
        let (_, w) = max_weight_tis(&k2, &vec![int(1); 3]).unwrap();
        assert_eq!(w, int(1));
        let c5 = fixtures::cycle(5);
        let (s, w) = max_weight_tis(&c5, &vec![int(1); 10]).unwrap();
        assert_eq!(w, int(3));
        assert!(is_total_independent(&c5, s.members()));
        assert!(max_weight_tis(&c5, &[int(1)]).is_err());
    }

    #[test]
    fn max_degree_clique_is_a_clique() {
        for g in [fixtures::petersen(), fixtures::complete(5), fixtures::star(4)] {
            let c = max_degree_clique(&g);
            assert_eq!(c.len(), g.max_degree() + 1);
            for (i, &x) in c.iter().enumerate() {
                assert!(c[i + 1..].iter().all(|&y| adjacent(&g, x, y)));
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        let g = fixtures::petersen();
        for x in elements(&g) {
            assert_eq!(TotalElement::parse(&g, &x.label(&g)).unwrap(), x);
        }
        assert!(TotalElement::parse(&g, "v:99").is_err());
        assert!(TotalElement::parse(&g, "e:0-2").is_err());
        assert!(TotalElement::parse(&g, "x:0").is_err());
    }

    fn arb_small_graph() -> impl Strategy<Value = Graph> {
        (3usize..7, prop::collection::vec(any::<bool>(), 21)).prop_map(|(n, bits)| {
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
        fn pricing_dominates_every_maximal_set(
            g in arb_small_graph(),
            raw in prop::collection::vec((0i64..7, 1i64..5), 30),
        ) {
            let size = element_count(&g);
            let w: Vec<Rational> = raw[..size].iter().map(|&(a, b)| ratio(a, b)).collect();
            let (best, value) = max_weight_tis(&g, &w).unwrap();
            prop_assert!(is_total_independent(&g, best.members()));
            prop_assert!(best.is_maximal(&g));
            let sum: Rational = best.indices(&g).map(|i| w[i].clone()).sum();
            prop_assert_eq!(&sum, &value);
            for s in enumerate_maximal_tis(&g, ENUMERATION_BUDGET).unwrap() {
                let v: Rational = s.indices(&g).map(|i| w[i].clone()).sum();
                prop_assert!(v <= value);
            }
        }

        #[test]
        fn total_clique_bound(g in arb_small_graph()) {
            let c = max_degree_clique(&g);
            prop_assert_eq!(c.len(), g.max_degree() + 1);
            for (i, &x) in c.iter().enumerate() {
                prop_assert!(c[i + 1..].iter().all(|&y| adjacent(&g, x, y)));
            }
        }
    }
}
