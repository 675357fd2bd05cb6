//! Recoloring a rooted tree so that the root and its edge receive prescribed
//! color sets while the deepest level keeps its colors.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use crate::coloring::{verify_interval_coloring, IntervalColoring};
use crate::graph::{is_connected, Graph, VertexId};
use crate::interval::{build_level_partition, IntervalSet, LevelPartition};
use crate::isometry::{extend_swap, matching_isometry, PiecewiseIsometry};
use crate::rational::{self, int, Rational};
use crate::total::{self, TotalElement};

use super::ConstructError;

/// `L′ = Δ+1+ε′`, `L = Δ+1+ε`, `δ = ε-ε′`, `s = ⌈L′/δ⌉`, `d = 2s+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthParams {
    pub inner: Rational,
    pub outer: Rational,
    pub delta_gap: Rational,
    pub s: usize,
    pub d: usize,
}

impl DepthParams {
    pub fn new(max_degree: usize, eps_prime: &Rational, eps: &Rational) -> Result<Self, ConstructError> {
        if !eps_prime.is_positive() || eps <= eps_prime {
            return Err(ConstructError::Precondition(format!(
                "need 0 < eps' < eps, got eps' = {}, eps = {}",
                rational::format(eps_prime),
                rational::format(eps)
            )));
        }
        let base = int(max_degree as i64 + 1);
        let inner = &base + eps_prime;
        let outer = &base + eps;
        let delta_gap = eps - eps_prime;
        let s = rational::ceil_to_usize(&(&inner / &delta_gap));
        Ok(Self {
            inner,
            outer,
            delta_gap,
            s,
            d: 2 * s + 1,
        })
    }

    pub fn partition(&self) -> LevelPartition {
        build_level_partition(&self.inner, &self.outer, &self.delta_gap).expect("parameters are valid")
    }
}

#[derive(Debug, Clone)]
pub struct RecolorTask {
    pub tree: Graph,
    pub root: VertexId,
    /// Valid coloring of `tree` with ambient `Δ+1+ε′`.
    pub base: IntervalColoring,
    pub x: IntervalSet,
    pub y: IntervalSet,
    pub max_degree: usize,
    pub eps_prime: Rational,
    pub eps: Rational,
}

impl RecolorTask {
    pub fn params(&self) -> Result<DepthParams, ConstructError> {
        DepthParams::new(self.max_degree, &self.eps_prime, &self.eps)
    }

    /// The unique neighbor `r′` of the root and the edge `rr′`.
    pub fn root_edge(&self) -> Option<(VertexId, usize)> {
        match self.tree.neighbors(self.root) {
            [(v, e)] => Some((*v, *e)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<DepthParams, ConstructError> {
        let p = self.params()?;
        let t = &self.tree;
        let bad = |m: String| Err(ConstructError::Precondition(m));
        if self.root >= t.vertex_count() {
            return bad(format!("root {} is not a vertex", self.root));
        }
        if t.edge_count() + 1 != t.vertex_count() || !is_connected(t) {
            return bad("not a tree".into());
        }
        if self.root_edge().is_none() {
            return bad(format!("root {} is not a leaf", t.label(self.root)));
        }
        if t.max_degree() > self.max_degree {
            return bad(format!("tree has degree {} above {}", t.max_degree(), self.max_degree));
        }
        let depth = distances(t, self.root).into_iter().max().unwrap_or(0);
        if depth > p.d {
            return bad(format!("tree depth {depth} exceeds d = {}", p.d));
        }
        if self.base.ambient != p.inner {
            return bad(format!(
                "base ambient {} differs from {}",
                rational::format(&self.base.ambient),
                rational::format(&p.inner)
            ));
        }
        if let Err(v) = verify_interval_coloring(t, &self.base) {
            return Err(ConstructError::Invalid {
                stage: "recolor base".into(),
                violations: v.iter().map(|x| x.describe(t)).collect(),
            });
        }
        let zero = Rational::zero();
        for (name, set) in [("X", &self.x), ("Y", &self.y)] {
            if !set.measure().is_one() {
                return bad(format!("{name} has measure {}", rational::format(&set.measure())));
            }
            if !set.within(&zero, &p.outer) {
                return bad(format!("{name} leaves [0, {})", rational::format(&p.outer)));
            }
        }
        if !self.x.is_disjoint(&self.y) {
            return bad("X and Y intersect".into());
        }
        Ok(p)
    }
}

pub(crate) fn distances(g: &Graph, from: VertexId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Level of every total element: vertices at distance `j` get `d - j`,
/// edges the smaller level of their endpoints.
pub fn levels(tree: &Graph, root: VertexId, d: usize) -> Vec<usize> {
    let dist = distances(tree, root);
    let vertex_level = |v: VertexId| d - dist[v];
    total::elements(tree)
        .map(|x| match x {
            TotalElement::Vertex(v) => vertex_level(v),
            TotalElement::Edge(e) => {
                let (u, v) = tree.endpoints(e);
                vertex_level(u).min(vertex_level(v))
            }
        })
        .collect()
}

/// Isometry of `[0, outer)` sending `a` onto `x`, `b` onto `y` and the rest
/// onto the rest, fixing every overlap it can.
pub fn root_isometry(
    outer: &Rational,
    a: &IntervalSet,
    b: &IntervalSet,
    x: &IntervalSet,
    y: &IntervalSet,
) -> Result<PiecewiseIsometry, ConstructError> {
    let ambient = IntervalSet::interval(Rational::zero(), outer.clone());
    let src_rest = ambient.subtract(&a.union(b));
    let dst_rest = ambient.subtract(&x.union(y));
    let mut pieces = matching_isometry(a, x, true)?.pieces().to_vec();
    pieces.extend(matching_isometry(b, y, true)?.pieces().iter().cloned());
    pieces.extend(matching_isometry(&src_rest, &dst_rest, true)?.pieces().iter().cloned());
    Ok(PiecewiseIsometry::new(outer.clone(), pieces)?)
}

/// `π_0, ..., π_{2s}` with `π_{2k}` agreeing with `pi` on `I_1, ..., I_k`.
pub fn isometry_cascade(
    pi: &PiecewiseIsometry,
    part: &LevelPartition,
) -> Result<Vec<PiecewiseIsometry>, ConstructError> {
    let top = part.block(0);
    let mut out = vec![PiecewiseIsometry::identity(pi.length().clone())];
    let mut done = IntervalSet::empty();
    for k in 0..part.s() {
        let cur = out.last().expect("nonempty");
        let j = cur.apply(top)?;
        let target = pi.apply(part.block(k + 1))?;
        let common = j.intersect(&target);
        let need = target.measure() - common.measure();
        let (extra, _) = j
            .subtract(&target)
            .split_at_measure(&need)
            .ok_or_else(|| ConstructError::Cascade(format!("step {}: J too small", 2 * k + 1)))?;
        let sigma = matching_isometry(&common.union(&extra), &target, true)?;
        let odd = extend_swap(cur, &sigma)?;

        let j_next = odd.apply(part.block(k + 1))?;
        let tau = pi.compose(&odd.inverse())?.restrict(&j_next)?;
        let even = extend_swap(&odd, &tau)?;

        done = done.union(part.block(k + 1));
        if !even.agrees_on(pi, &done) {
            return Err(ConstructError::Cascade(format!(
                "pi_{} disagrees with pi on I_1..I_{}",
                2 * k + 2,
                k + 1
            )));
        }
        out.push(odd);
        out.push(even);
    }
    Ok(out)
}

/// The recolored tree. Checks every postcondition before returning.
pub fn recolor_tree(task: &RecolorTask) -> Result<IntervalColoring, ConstructError> {
    let p = task.validate()?;
    let t = &task.tree;
    let (r1, re) = task.root_edge().expect("validated");
    let one = Rational::one();
    let root_idx = TotalElement::Vertex(task.root).index(t);
    let edge_idx = TotalElement::Edge(re).index(t);

    let mut base = task.base.colors.clone();
    base[root_idx] = base[root_idx].truncate_to_measure(&one);
    base[edge_idx] = base[edge_idx].truncate_to_measure(&one);

    let pi = root_isometry(&p.outer, &base[root_idx], &base[edge_idx], &task.x, &task.y)?;
    let cascade = isometry_cascade(&pi, &p.partition())?;
    let lv = levels(t, task.root, p.d);

    let mut colors = Vec::with_capacity(base.len());
    for (i, set) in base.iter().enumerate() {
        colors.push(if i == root_idx {
            task.x.clone()
        } else {
            cascade[lv[i]].apply(set)?
        });
    }
    let out = IntervalColoring {
        ambient: p.outer.clone(),
        colors,
    };
    let problems = recolor_violations(task, &p, &out);
    if !problems.is_empty() {
        return Err(ConstructError::Invalid {
            stage: format!("recolor tree rooted at {} (r' = {})", t.label(task.root), t.label(r1)),
            violations: problems,
        });
    }
    Ok(out)
}

/// Validity at ambient `Δ+1+ε`, `c(r) = X`, `c(rr′) = Y`, and agreement
/// with the base coloring on level 0.
pub fn recolor_violations(task: &RecolorTask, p: &DepthParams, c: &IntervalColoring) -> Vec<String> {
    let t = &task.tree;
    let mut out = Vec::new();
    if c.ambient != p.outer {
        out.push(format!("ambient {}", rational::format(&c.ambient)));
    }
    if let Err(v) = verify_interval_coloring(t, c) {
        out.extend(v.iter().map(|x| x.describe(t)));
    }
    let Some((_, re)) = task.root_edge() else {
        out.push("root is not a leaf".into());
        return out;
    };
    if c.color(t, TotalElement::Vertex(task.root)) != &task.x {
        out.push("c(r) differs from X".into());
    }
    if c.color(t, TotalElement::Edge(re)) != &task.y {
        out.push("c(rr') differs from Y".into());
    }
    for (i, l) in levels(t, task.root, p.d).into_iter().enumerate() {
        if l == 0 && c.colors[i] != task.base.colors[i] {
            out.push(format!(
                "{} changed on level 0",
                TotalElement::from_index(t, i).label(t)
            ));
        }
    }
    out
}
