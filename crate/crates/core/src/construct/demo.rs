//! Seeded random recoloring tasks: trees of the required depth, integer
//! total colorings scrambled by random isometries, random target sets.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coloring::IntervalColoring;
use crate::graph::{Graph, VertexId};
use crate::interval::IntervalSet;
use crate::isometry::{Piece, PiecewiseIsometry};
use crate::rational::{int, Rational};
use crate::total::{self, TotalElement};

use super::recolor::{DepthParams, RecolorTask};

#[derive(Debug, Clone)]
pub struct TaskShape {
    pub max_degree: usize,
    pub eps_prime: Rational,
    pub eps: Rational,
    /// Chance, in percent, that a spine vertex grows side branches.
    pub branching: u32,
}

impl TaskShape {
    pub fn new(max_degree: usize, eps_prime: Rational, eps: Rational) -> Self {
        Self {
            max_degree,
            eps_prime,
            eps,
            branching: 40,
        }
    }

    /// Random `0 < ε′ < ε ≤ 2` on a grid of twelfths.
    pub fn random(rng: &mut impl Rng, max_degree: usize) -> Self {
        let eps = rng.gen_range(2..=24);
        let eps_prime = rng.gen_range(1..eps);
        Self::new(
            max_degree,
            Rational::new(eps_prime.into(), 12.into()),
            Rational::new(eps.into(), 12.into()),
        )
    }
}

/// Tree rooted at leaf 0 with a spine of length `depth` and random side
/// branches that never go deeper than the spine.
pub fn random_tree(rng: &mut impl Rng, depth: usize, max_degree: usize, branching: u32) -> Graph {
    let mut edges = Vec::new();
    let mut dist = vec![0usize];
    let mut degree = vec![0usize];
    let add = |parent: usize, edges: &mut Vec<(usize, usize)>, dist: &mut Vec<usize>, degree: &mut Vec<usize>| {
        let v = dist.len();
        dist.push(dist[parent] + 1);
        degree.push(1);
        degree[parent] += 1;
        edges.push((parent, v));
        v
    };
    let mut prev = 0;
    for _ in 0..depth {
        prev = add(prev, &mut edges, &mut dist, &mut degree);
    }
    let mut queue: VecDeque<usize> = (1..depth).collect();
    while let Some(u) = queue.pop_front() {
        if dist[u] >= depth || !rng.gen_ratio(branching, 100) {
            continue;
        }
        let room = max_degree.saturating_sub(degree[u]);
        let k = rng.gen_range(0..=room.min(2));
        for _ in 0..k {
            let v = add(u, &mut edges, &mut dist, &mut degree);
            if rng.gen_ratio(1, 2) {
                queue.push_back(v);
            }
        }
    }
    Graph::from_edges(dist.len(), &edges).expect("tree edges are simple")
}

/// Random rearrangement of `[0, length)` into pieces with endpoints on a grid
/// of step `length / (4 · cuts)`.
pub fn random_isometry(rng: &mut impl Rng, length: &Rational, cuts: usize) -> PiecewiseIsometry {
    let grid = 4 * cuts as i64;
    let mut points: Vec<i64> = (1..grid).collect();
    points.shuffle(rng);
    points.truncate(cuts);
    points.push(0);
    points.push(grid);
    points.sort_unstable();
    let at = |i: i64| length * Rational::new(i.into(), grid.into());
    let mut blocks: Vec<(i64, i64)> = points.windows(2).map(|w| (w[0], w[1])).collect();
    blocks.shuffle(rng);
    let mut pos = 0;
    let mut pieces = Vec::new();
    for &(a, b) in &blocks {
        pieces.push(Piece::new(at(a), at(b), at(pos) - at(a)));
        pos += b - a;
    }
    PiecewiseIsometry::new(length.clone(), pieces).expect("block permutation is a bijection")
}

/// Proper total coloring of a tree with colors `0..colors` (needs
/// `colors ≥ Δ+1`), color `j` realized as `[j, j+1)` and then scrambled by a
/// random isometry of `[0, ambient)`.
pub fn tree_total_coloring(
    tree: &Graph,
    root: VertexId,
    colors: usize,
    rng: &mut impl Rng,
    ambient: Rational,
) -> IntervalColoring {
    let n = tree.vertex_count();
    let mut cv = vec![usize::MAX; n];
    let mut ce = vec![usize::MAX; tree.edge_count()];
    let mut parent_edge = vec![usize::MAX; n];
    cv[root] = rng.gen_range(0..colors);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let mut used = vec![cv[u]];
        if parent_edge[u] != usize::MAX {
            used.push(ce[parent_edge[u]]);
        }
        for &(w, e) in tree.neighbors(u) {
            if e == parent_edge[u] {
                continue;
            }
            let free: Vec<usize> = (0..colors).filter(|c| !used.contains(c)).collect();
            ce[e] = *free.choose(rng).expect("enough colors");
            used.push(ce[e]);
            let free: Vec<usize> = (0..colors).filter(|&c| c != cv[u] && c != ce[e]).collect();
            cv[w] = *free.choose(rng).expect("enough colors");
            parent_edge[w] = e;
            queue.push_back(w);
        }
    }
    let scramble = random_isometry(rng, &ambient, 6);
    let unit = |c: usize| {
        let set = IntervalSet::interval(int(c as i64), int(c as i64 + 1));
        scramble.apply(&set).expect("colors fit the ambient")
    };
    let colors = total::elements(tree)
        .map(|x| match x {
            TotalElement::Vertex(v) => unit(cv[v]),
            TotalElement::Edge(e) => unit(ce[e]),
        })
        .collect();
    IntervalColoring { ambient, colors }
}

/// A task with a tree of depth exactly `d`, a scrambled base coloring and
/// disjoint measure-1 targets `X`, `Y`.
pub fn random_task(rng: &mut impl Rng, shape: &TaskShape) -> RecolorTask {
    let p = DepthParams::new(shape.max_degree, &shape.eps_prime, &shape.eps).expect("valid shape");
    let tree = random_tree(rng, p.d, shape.max_degree, shape.branching);
    let base = tree_total_coloring(&tree, 0, shape.max_degree + 1, rng, p.inner.clone());
    let sigma = random_isometry(rng, &p.outer, 5);
    let x = sigma.apply(&IntervalSet::interval(int(0), int(1))).expect("inside");
    let y = sigma.apply(&IntervalSet::interval(int(1), int(2))).expect("inside");
    RecolorTask {
        tree,
        root: 0,
        base,
        x,
        y,
        max_degree: shape.max_degree,
        eps_prime: shape.eps_prime.clone(),
        eps: shape.eps.clone(),
    }
}
