//! Splitting along a small cyclic edge cut and gluing the two colorings back
//! together through recolored trees.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::One;

use crate::coloring::{verify_interval_coloring, IntervalColoring};
use crate::graph::{
    contract_and_subdivide, cyclic_cuts_below, d_connector, girth, is_connected, is_d_closed, is_forest,
    neighborhood, Contraction, EdgeCut, EdgeId, Extended, Graph, Subgraph, VertexId,
};
use crate::interval::IntervalSet;
use crate::rational::{self, Rational};
use crate::total::{self, TotalElement};

use super::recolor::{recolor_tree, DepthParams, RecolorTask};
use super::ConstructError;

/// An edge `xy` of `N(F′)` outside `F′`, with `x ∈ V(F′)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub edge: EdgeId,
    pub x: VertexId,
    pub y: VertexId,
}

#[derive(Debug, Clone)]
pub struct SplitPlan {
    /// `side_a` is `A`, `side_b` is the smaller side `B`.
    pub cut: EdgeCut,
    pub d: usize,
    pub d0: usize,
    pub girth: Extended,
    /// `F′`, the `d₀`-connector of `F` inside `G_X = G[B] + F`.
    pub connector: Subgraph,
    pub boundary: Vec<BoundaryEdge>,
    /// `T(e)` for every boundary edge, in the same order.
    pub trees: Vec<Subgraph>,
    /// `G_A` as a subgraph of the host, induced by `A ∪ V(N(F′))`.
    pub side_a: Subgraph,
    /// `G_A` as a standalone graph with its vertex and edge maps to the host.
    pub graph_a: (Graph, Vec<VertexId>, Vec<EdgeId>),
    pub contraction: Contraction,
}

impl SplitPlan {
    pub fn graph_b(&self) -> &Graph {
        &self.contraction.graph
    }

    /// The girth hypothesis `g > (d₀+1)Δ` under which every invariant is
    /// guaranteed.
    pub fn girth_hypothesis(&self, max_degree: usize) -> bool {
        self.girth > Extended::Finite((self.d0 + 1) * max_degree)
    }
}

/// Minimal cyclic cut with fewer than `max_degree` edges and the smallest
/// possible side `B`; ties go to the lexicographically smallest `B`.
pub fn select_cut(g: &Graph, max_degree: usize) -> Result<Option<EdgeCut>, ConstructError> {
    let cuts = cyclic_cuts_below(g, max_degree)?;
    let oriented = cuts.into_iter().flat_map(|c| {
        let flip = EdgeCut {
            edges: c.edges.clone(),
            side_a: c.side_b.clone(),
            side_b: c.side_a.clone(),
        };
        [c, flip]
    });
    Ok(oriented.min_by(|p, q| {
        (p.side_b.len(), &p.side_b).cmp(&(q.side_b.len(), &q.side_b))
    }))
}

fn map_subgraph(h: &Subgraph, vmap: &[VertexId], emap: &[EdgeId]) -> Subgraph {
    Subgraph {
        vertices: h.vertices.iter().map(|&v| vmap[v]).collect(),
        edges: h.edges.iter().map(|&e| emap[e]).collect(),
    }
}

fn pull_subgraph(h: &Subgraph, vmap: &[VertexId], emap: &[EdgeId]) -> Subgraph {
    let vinv: BTreeMap<VertexId, VertexId> = vmap.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let einv: BTreeMap<EdgeId, EdgeId> = emap.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    Subgraph {
        vertices: h.vertices.iter().map(|v| vinv[v]).collect(),
        edges: h.edges.iter().map(|e| einv[e]).collect(),
    }
}

/// `G_X`: the side `B` with the cut edges and their endpoints.
pub fn side_with_cut(g: &Graph, cut: &EdgeCut) -> Subgraph {
    let mut h = g.induced(&cut.side_b);
    for &e in &cut.edges {
        h.add_edge(g, e);
    }
    h
}

/// The split data for `g` at tree depth `d`, or `None` when `g` has no
/// cyclic cut with fewer than `max_degree` edges. Every invariant of the
/// plan is checked; a plan that violates one is reported as an error.
pub fn plan_split(g: &Graph, max_degree: usize, d: usize) -> Result<Option<SplitPlan>, ConstructError> {
    if !is_connected(g) {
        return Err(crate::graph::GraphError::Disconnected.into());
    }
    if d == 0 {
        return Err(ConstructError::Precondition("tree depth must be positive".into()));
    }
    let Some(cut) = select_cut(g, max_degree)? else {
        return Ok(None);
    };
    let d0 = 2 * d + 2;

    let gx = side_with_cut(g, &cut);
    let (gx_graph, gx_v, gx_e) = g.extract(&gx);
    let f = Subgraph::from_edges(g, cut.edges.iter().copied());
    let f_local = pull_subgraph(&f, &gx_v, &gx_e);
    let connector = map_subgraph(&d_connector(&gx_graph, &f_local, d0), &gx_v, &gx_e);

    let nbhd = neighborhood(g, &connector);
    let mut a_vertices: BTreeSet<VertexId> = cut.side_a.clone();
    a_vertices.extend(nbhd.vertices.iter().copied());
    let side_a = g.induced(&a_vertices);
    let graph_a = g.extract(&side_a);

    let mut boundary = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        for (x, y) in [(u, v), (v, u)] {
            if connector.vertices.contains(&x) && cut.side_b.contains(&y) && !connector.vertices.contains(&y) {
                boundary.push(BoundaryEdge { edge: e, x, y });
            }
        }
    }

    let outside: BTreeSet<VertexId> = cut.side_b.difference(&connector.vertices).copied().collect();
    let trees = boundary
        .iter()
        .map(|b| {
            let ball = ball_within(g, b.y, d - 1, &outside);
            let mut t = g.induced(&ball);
            t.add_edge(g, b.edge);
            t
        })
        .collect();

    let gi = girth(g);
    let t = gi.finite().expect("a graph with a cyclic cut has a cycle") / 2;
    let contraction = contract_and_subdivide(g, &cut.side_a, t)?;

    let plan = SplitPlan {
        cut,
        d,
        d0,
        girth: gi,
        connector,
        boundary,
        trees,
        side_a,
        graph_a,
        contraction,
    };
    let problems = plan_violations(g, max_degree, &plan);
    if !problems.is_empty() {
        return Err(ConstructError::Plan {
            cut: plan.cut.edges.iter().map(|&e| g.edge_label(e)).collect(),
            violations: problems,
        });
    }
    Ok(Some(plan))
}

/// Vertices of `allowed` within distance `radius` of `from`, walking only
/// through `allowed`.
fn ball_within(g: &Graph, from: VertexId, radius: usize, allowed: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let mut dist = BTreeMap::from([(from, 0usize)]);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if dist[&u] == radius {
            continue;
        }
        for &(w, _) in g.neighbors(u) {
            if allowed.contains(&w) && !dist.contains_key(&w) {
                dist.insert(w, dist[&u] + 1);
                queue.push_back(w);
            }
        }
    }
    dist.into_keys().collect()
}

/// Every split invariant that fails on `plan`.
pub fn plan_violations(g: &Graph, max_degree: usize, plan: &SplitPlan) -> Vec<String> {
    let mut out = Vec::new();
    let cut = &plan.cut;
    if cut.size() >= max_degree {
        out.push(format!("cut has {} edges, not below {max_degree}", cut.size()));
    }
    if cut.side_a.is_disjoint(&cut.side_b) && cut.side_a.len() + cut.side_b.len() == g.vertex_count() {
        let crossing: BTreeSet<EdgeId> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, (u, v))| cut.side_a.contains(u) != cut.side_a.contains(v))
            .map(|(e, _)| e)
            .collect();
        if crossing != cut.edges {
            out.push("cut edges are not exactly the edges between the sides".into());
        }
    } else {
        out.push("sides do not partition the vertices".into());
    }
    for (name, side) in [("A", &cut.side_a), ("B", &cut.side_b)] {
        let h = g.induced(side);
        let (sg, _, _) = g.extract(&h);
        if !is_connected(&sg) || is_forest(g, &h) {
            out.push(format!("side {name} is not connected with a cycle"));
        }
    }
    let gx = side_with_cut(g, cut);
    let (gx_graph, gx_v, gx_e) = g.extract(&gx);
    let f = Subgraph::from_edges(g, cut.edges.iter().copied());
    if !plan.connector.contains_subgraph(&f) || !gx.contains_subgraph(&plan.connector) {
        out.push("connector does not lie between F and G_X".into());
    } else if !is_d_closed(&gx_graph, &pull_subgraph(&plan.connector, &gx_v, &gx_e), plan.d0) {
        out.push(format!("connector is not {}-closed", plan.d0));
    }
    if plan.side_a.edges.len() >= g.edge_count() {
        out.push(format!(
            "G_A has {} edges, not fewer than {}",
            plan.side_a.edges.len(),
            g.edge_count()
        ));
    }
    for (b, t) in plan.boundary.iter().zip(&plan.trees) {
        if t.edges.len() + 1 != t.vertices.len() || !is_forest(g, t) {
            out.push(format!("T({}) is not a tree", g.edge_label(b.edge)));
        }
    }
    for i in 0..plan.trees.len() {
        for j in i + 1..plan.trees.len() {
            let (bi, bj) = (&plan.boundary[i], &plan.boundary[j]);
            let common: BTreeSet<VertexId> =
                plan.trees[i].vertices.intersection(&plan.trees[j].vertices).copied().collect();
            let allowed: BTreeSet<VertexId> = if bi.x == bj.x { [bi.x].into() } else { BTreeSet::new() };
            if !common.is_subset(&allowed) {
                out.push(format!(
                    "T({}) and T({}) share {} vertices",
                    g.edge_label(bi.edge),
                    g.edge_label(bj.edge),
                    common.len()
                ));
            }
        }
    }
    out
}

fn trimmed(c: &IntervalColoring) -> IntervalColoring {
    let one = Rational::one();
    IntervalColoring {
        ambient: c.ambient.clone(),
        colors: c.colors.iter().map(|s| s.truncate_to_measure(&one)).collect(),
    }
}

/// Host element for every element of `G_B` that comes from `B`.
fn contraction_lookup(g: &Graph, plan: &SplitPlan) -> BTreeMap<usize, usize> {
    let gb = plan.graph_b();
    let mut out = BTreeMap::new();
    for (i, o) in plan.contraction.vertex_origin.iter().enumerate() {
        if let Some(v) = o {
            out.insert(TotalElement::Vertex(*v).index(g), TotalElement::Vertex(i).index(gb));
        }
    }
    for (i, o) in plan.contraction.edge_origin.iter().enumerate() {
        if let Some(e) = o {
            out.insert(TotalElement::Edge(*e).index(g), TotalElement::Edge(i).index(gb));
        }
    }
    out
}

/// Coloring of `g` at ambient `Δ+1+ε` from `c_A` on `G_A` (ambient `Δ+1+ε`)
/// and `c_B` on `G_B` (ambient `Δ+1+ε′`). Each tree `T(e)` is recolored
/// from `c_B` towards `X = c_A(x)`, `Y = c_A(e)`. Every color set of `c_A`
/// is first cut down to its leftmost measure-1 part.
pub fn glue_colorings(
    g: &Graph,
    plan: &SplitPlan,
    max_degree: usize,
    c_a: &IntervalColoring,
    c_b: &IntervalColoring,
    eps_prime: &Rational,
    eps: &Rational,
) -> Result<IntervalColoring, ConstructError> {
    let p = DepthParams::new(max_degree, eps_prime, eps)?;
    if p.d != plan.d {
        return Err(ConstructError::Precondition(format!(
            "plan built for depth {}, parameters need {}",
            plan.d, p.d
        )));
    }
    let (ga, ga_v, ga_e) = &plan.graph_a;
    let gb = plan.graph_b();
    for (name, graph, c, ambient) in [("c_A", ga, c_a, &p.outer), ("c_B", gb, c_b, &p.inner)] {
        if &c.ambient != ambient {
            return Err(ConstructError::Precondition(format!(
                "{name} has ambient {}, expected {}",
                rational::format(&c.ambient),
                rational::format(ambient)
            )));
        }
        if let Err(v) = verify_interval_coloring(graph, c) {
            return Err(ConstructError::Invalid {
                stage: format!("{name} input"),
                violations: v.iter().map(|x| x.describe(graph)).collect(),
            });
        }
    }
    let c_a = trimmed(c_a);

    let size = total::element_count(g);
    let mut colors: Vec<Option<IntervalSet>> = vec![None; size];
    let mut from_a = BTreeMap::new();
    let core: BTreeSet<VertexId> = plan.cut.side_a.union(&plan.connector.vertices).copied().collect();
    for (i, &v) in ga_v.iter().enumerate() {
        let gi = TotalElement::Vertex(v).index(g);
        let ai = TotalElement::Vertex(i).index(ga);
        from_a.insert(gi, ai);
        if core.contains(&v) {
            colors[gi] = Some(c_a.colors[ai].clone());
        }
    }
    for (i, &e) in ga_e.iter().enumerate() {
        let gi = TotalElement::Edge(e).index(g);
        let ai = TotalElement::Edge(i).index(ga);
        from_a.insert(gi, ai);
        let (u, v) = g.endpoints(e);
        if core.contains(&u) && core.contains(&v) {
            colors[gi] = Some(c_a.colors[ai].clone());
        }
    }

    let to_b = contraction_lookup(g, plan);
    for (b, tree) in plan.boundary.iter().zip(&plan.trees) {
        let (tg, tv, te) = g.extract(tree);
        let host = |x: TotalElement| match x {
            TotalElement::Vertex(v) => TotalElement::Vertex(tv[v]).index(g),
            TotalElement::Edge(e) => TotalElement::Edge(te[e]).index(g),
        };
        let base = total::elements(&tg)
            .map(|x| {
                let gi = host(x);
                to_b.get(&gi).map(|&bi| c_b.colors[bi].clone()).ok_or_else(|| {
                    ConstructError::Precondition(format!(
                        "{} is not part of G_B",
                        TotalElement::from_index(g, gi).label(g)
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let root = tv.iter().position(|&v| v == b.x).expect("tree contains x");
        let task = RecolorTask {
            tree: tg.clone(),
            root,
            base: IntervalColoring {
                ambient: p.inner.clone(),
                colors: base,
            },
            x: c_a.colors[from_a[&TotalElement::Vertex(b.x).index(g)]].clone(),
            y: c_a.colors[from_a[&TotalElement::Edge(b.edge).index(g)]].clone(),
            max_degree,
            eps_prime: eps_prime.clone(),
            eps: eps.clone(),
        };
        let c_e = recolor_tree(&task)?;
        for x in total::elements(&tg) {
            let gi = host(x);
            let set = &c_e.colors[x.index(&tg)];
            match &colors[gi] {
                Some(prev) if prev != set => {
                    return Err(ConstructError::Invalid {
                        stage: "glue".into(),
                        violations: vec![format!(
                            "{} gets two different colors",
                            TotalElement::from_index(g, gi).label(g)
                        )],
                    })
                }
                Some(_) => {}
                None => colors[gi] = Some(set.clone()),
            }
        }
    }

    for (gi, slot) in colors.iter_mut().enumerate() {
        if slot.is_none() {
            let bi = to_b.get(&gi).ok_or_else(|| {
                ConstructError::Precondition(format!(
                    "{} has no source coloring",
                    TotalElement::from_index(g, gi).label(g)
                ))
            })?;
            *slot = Some(c_b.colors[*bi].clone());
        }
    }
    let out = IntervalColoring {
        ambient: p.outer.clone(),
        colors: colors.into_iter().map(Option::unwrap).collect(),
    };
    let mut problems: Vec<String> = match verify_interval_coloring(g, &out) {
        Ok(()) => Vec::new(),
        Err(v) => v.iter().map(|x| x.describe(g)).collect(),
    };
    problems.extend(boundary_disagreements(g, plan, &c_a, &out));
    if !problems.is_empty() {
        return Err(ConstructError::Invalid {
            stage: "glue".into(),
            violations: problems,
        });
    }
    Ok(out)
}

/// Elements where the glued coloring differs from `c_A` although they must
/// agree: the boundary edges and their endpoints in `F′`.
pub fn boundary_disagreements(
    g: &Graph,
    plan: &SplitPlan,
    c_a: &IntervalColoring,
    glued: &IntervalColoring,
) -> Vec<String> {
    let (ga, ga_v, ga_e) = &plan.graph_a;
    let vpos = |v: VertexId| ga_v.iter().position(|&w| w == v);
    let epos = |e: EdgeId| ga_e.iter().position(|&f| f == e);
    let mut out = Vec::new();
    for b in &plan.boundary {
        let pairs = [
            (TotalElement::Vertex(b.x), vpos(b.x).map(TotalElement::Vertex)),
            (TotalElement::Edge(b.edge), epos(b.edge).map(TotalElement::Edge)),
        ];
        for (host, local) in pairs {
            let agree = local.is_some_and(|l| c_a.color(ga, l) == glued.color(g, host));
            if !agree {
                out.push(format!("{} differs from c_A", host.label(g)));
            }
        }
    }
    out
}
