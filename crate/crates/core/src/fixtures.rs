//! Named graphs bundled with the toolkit, with attributes the rest of the
//! crate can re-derive.

use crate::graph::{Extended, Graph};
use crate::rational::{int, ratio, Rational};

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    Graph::from_edges(a + b, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// `K_{1,k}` with center 0.
pub fn star(k: usize) -> Graph {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Graph::from_edges(k + 1, &edges).unwrap()
}

/// Path of `spine` vertices, each topped up with leaves to degree `degree`.
pub fn caterpillar(spine: usize, degree: usize) -> Graph {
    let mut edges: Vec<_> = (1..spine).map(|i| (i - 1, i)).collect();
    let mut next = spine;
    for v in 0..spine {
        let have = usize::from(v > 0) + usize::from(v + 1 < spine);
        for _ in have..degree {
            edges.push((v, next));
            next += 1;
        }
    }
    Graph::from_edges(next, &edges).unwrap()
}

/// Hamiltonian cycle plus the chords of an LCF code repeated `times`.
pub fn lcf(code: &[i64], times: usize) -> Graph {
    let n = code.len() * times;
    let mut g = cycle(n);
    for i in 0..n {
        let j = (i as i64 + code[i % code.len()]).rem_euclid(n as i64) as usize;
        if g.edge_between(i, j).is_none() {
            g.add_edge(i, j).unwrap();
        }
    }
    g
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).unwrap()
}

pub fn heawood() -> Graph {
    lcf(&[5, -5], 7)
}

pub fn mcgee() -> Graph {
    lcf(&[12, 7, -7], 8)
}

pub fn pappus() -> Graph {
    lcf(&[5, 7, -7, 7, -7, -5], 3)
}

pub fn dodecahedron() -> Graph {
    lcf(&[10, 7, 4, -4, -7, 10, -4, 7, -7, 4], 2)
}

/// 5-regular icosahedron.
pub fn icosahedron() -> Graph {
    let mut edges = Vec::new();
    // two poles (0, 11) and two pentagons 1..=5, 6..=10
    for i in 0..5 {
        let up = 1 + i;
        let up_next = 1 + (i + 1) % 5;
        let down = 6 + i;
        let down_next = 6 + (i + 1) % 5;
        edges.push((0, up));
        edges.push((up, up_next));
        edges.push((up, down));
        edges.push((up_next, down));
        edges.push((down, down_next));
        edges.push((11, down));
    }
    Graph::from_edges(12, &edges).unwrap()
}

/// Every edge replaced by a path with `t` internal vertices.
pub fn subdivide(g: &Graph, t: usize) -> Graph {
    let mut out = Graph::new();
    for v in g.vertices() {
        out.add_vertex(g.label(v)).unwrap();
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let mut prev = u;
        for j in 1..=t {
            let s = out.add_vertex(format!("s{e}_{j}")).unwrap();
            out.add_edge(prev, s).unwrap();
            prev = s;
        }
        out.add_edge(prev, v).unwrap();
    }
    out
}

/// Two disjoint copies of `g` joined by the edges `(i, n + j)` listed in
/// `links`.
pub fn joined_copies(g: &Graph, links: &[(usize, usize)]) -> Graph {
    let n = g.vertex_count();
    let mut edges: Vec<_> = g.edges().to_vec();
    edges.extend(g.edges().iter().map(|&(u, v)| (u + n, v + n)));
    edges.extend(links.iter().map(|&(i, j)| (i, n + j)));
    Graph::from_edges(2 * n, &edges).unwrap()
}

/// One representative of every isomorphism class of connected graphs on
/// `n ≤ 7` vertices, in increasing canonical code.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=7).contains(&n));
    all_graphs(n)
        .into_iter()
        .map(|code| decode(n, code))
        .filter(crate::graph::is_connected)
        .collect()
}

/// Connected graphs on `1..=max_n` vertices.
pub fn small_graph_corpus(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}

fn pair_bit(n: usize, i: usize, j: usize) -> u32 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    // Row-major index of (i, j) in the strict upper triangle.
    (i * (2 * n - i - 1) / 2 + (j - i - 1)) as u32
}

fn decode(n: usize, code: u32) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if code >> pair_bit(n, i, j) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Smallest code over relabelings that list vertices by decreasing degree.
fn canonical(adj: &[u8]) -> u32 {
    let n = adj.len();
    let deg: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
    let slot_degree: Vec<u32> = order.iter().map(|&v| deg[v]).collect();
    let mut best = u32::MAX;
    let mut perm = Vec::with_capacity(n);
    let mut used = 0u8;
    fn go(
        adj: &[u8],
        deg: &[u32],
        slot_degree: &[u32],
        perm: &mut Vec<usize>,
        used: &mut u8,
        best: &mut u32,
    ) {
        let n = adj.len();
        let p = perm.len();
        if p == n {
            let mut code = 0u32;
            for i in 0..n {
                for j in i + 1..n {
                    if adj[perm[i]] >> perm[j] & 1 == 1 {
                        code |= 1 << pair_bit(n, i, j);
                    }
                }
            }
            *best = (*best).min(code);
            return;
        }
        for v in 0..n {
            if *used >> v & 1 == 0 && deg[v] == slot_degree[p] {
                *used |= 1 << v;
                perm.push(v);
                go(adj, deg, slot_degree, perm, used, best);
                perm.pop();
                *used &= !(1 << v);
            }
        }
    }
    go(adj, &deg, &slot_degree, &mut perm, &mut used, &mut best);
    best
}

/// Canonical codes of all graphs on `n` vertices, connected or not.
fn all_graphs(n: usize) -> Vec<u32> {
    if n == 1 {
        return vec![0];
    }
    let mut out = std::collections::BTreeSet::new();
    for code in all_graphs(n - 1) {
        let mut adj = vec![0u8; n];
        for i in 0..n - 1 {
            for j in i + 1..n - 1 {
                if code >> pair_bit(n - 1, i, j) & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        for nb in 0u8..(1 << (n - 1)) {
            let mut a = adj.clone();
            a[n - 1] = nb;
            for (i, row) in a.iter_mut().enumerate().take(n - 1) {
                if nb >> i & 1 == 1 {
                    *row |= 1 << (n - 1);
                }
            }
            out.insert(canonical(&a));
        }
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub graph: Graph,
    pub girth: Extended,
    pub max_degree: usize,
    pub cyclic_connectivity: Extended,
    /// Certified fractional total chromatic number, when known.
    pub chi: Option<Rational>,
}

fn fixture(
    name: &'static str,
    graph: Graph,
    girth: Extended,
    max_degree: usize,
    cyclic_connectivity: Extended,
    chi: Option<Rational>,
) -> Fixture {
    Fixture {
        name,
        graph,
        girth,
        max_degree,
        cyclic_connectivity,
        chi,
    }
}

pub fn bundled() -> Vec<Fixture> {
    use Extended::{Finite as F, Infinite as Inf};
    vec![
        fixture("k2", complete(2), Inf, 1, Inf, Some(int(3))),
        fixture("p3", path(3), Inf, 2, Inf, Some(int(3))),
        fixture("c4", cycle(4), F(4), 2, Inf, Some(int(4))),
        fixture("c5", cycle(5), F(5), 2, Inf, Some(ratio(10, 3))),
        fixture("c6", cycle(6), F(6), 2, Inf, Some(int(3))),
        fixture("c7", cycle(7), F(7), 2, Inf, Some(ratio(7, 2))),
        fixture("k4", complete(4), F(3), 3, Inf, Some(int(5))),
        fixture("k6", complete(6), F(3), 5, F(9), Some(int(7))),
        fixture("k22", complete_bipartite(2, 2), F(4), 2, Inf, Some(int(4))),
        fixture("k33", complete_bipartite(3, 3), F(4), 3, Inf, Some(int(5))),
        fixture("petersen", petersen(), F(5), 3, F(5), Some(int(4))),
        fixture("heawood", heawood(), F(6), 3, F(6), Some(int(4))),
        fixture("mcgee", mcgee(), F(7), 3, F(7), Some(int(4))),
        fixture("pappus", pappus(), F(6), 3, F(6), Some(int(4))),
        fixture("dodecahedron", dodecahedron(), F(5), 3, F(5), Some(int(4))),
    ]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    bundled().into_iter().find(|f| f.name == name)
}
