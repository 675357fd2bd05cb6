//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::collections::{BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fractotal::chi::{
    fractional_total_chromatic_number, solve_weighted_coloring, verify_certificate, CertificateDoc, ChiMode,
    LpCertificate, WeightedOutcome,
};
use fractotal::coloring::{
    fractional_to_weighted, verify_interval_coloring, weighted_to_fractional, weights_to_interval_assignment,
    IntervalColoring, IntervalColoringDoc, WeightedColoring, WeightedEntryDoc,
};
use fractotal::construct::demo::{random_task, TaskShape};
use fractotal::construct::split::boundary_disagreements;
use fractotal::construct::{
    compose_factor_colorings, construct_coloring, glue_colorings, plan_split, plan_violations, recolor_tree,
    Coefficients, ConstructOptions, DepthParams, RecolorTask,
};
use fractotal::decompose::{ell_decomposition, verify_decomposition, DecompositionDoc, NODE_BUDGET};
use fractotal::graph::{
    d_connector, girth, is_cyclically_k_connected, is_forest, neighborhood, Extended, Graph, Subgraph,
};
use fractotal::rational::{int, ratio, Rational};
use fractotal::total::{self, TotalElement, ENUMERATION_BUDGET};
use fractotal::{fixtures, isometry::PiecewiseIsometry};

type Outcome = Result<String, String>;

fn chi(g: &Graph) -> Rational {
    fractional_total_chromatic_number(g, ChiMode::ColumnGeneration, ENUMERATION_BUDGET)
        .expect("column generation succeeds")
        .value
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    if took > limit {
        return Err(format!("{what} took {took:?}, limit {limit:?}"));
    }
    Ok(())
}

fn tight_instances() -> Outcome {
    let cases = [
        ("K4", fixtures::complete(4), int(5), Duration::from_secs(1)),
        ("K6", fixtures::complete(6), int(7), Duration::from_secs(300)),
        ("K2,2", fixtures::complete_bipartite(2, 2), int(4), Duration::from_secs(1)),
        ("K3,3", fixtures::complete_bipartite(3, 3), int(5), Duration::from_secs(300)),
    ];
    let mut notes = Vec::new();
    for (name, g, want, limit) in cases {
        let t = Instant::now();
        let got = chi(&g);
        within(limit, t, name)?;
        if got != want {
            return Err(format!("{name}: got {got}, expected {want}"));
        }
        notes.push(format!("{name}={got}"));
    }
    Ok(notes.join(" "))
}

fn universal_bounds() -> Outcome {
    let t = Instant::now();
    let mut graphs = fixtures::small_graph_corpus(7);
    graphs.extend(fixtures::bundled().into_iter().map(|f| f.graph));
    for g in &graphs {
        let delta = int(g.max_degree() as i64);
        let value = chi(g);
        if value < &delta + int(1) || value > &delta + int(2) {
            return Err(format!("{} vertices, {} edges: chi = {value}", g.vertex_count(), g.edge_count()));
        }
    }
    within(Duration::from_secs(1800), t, "corpus")?;
    Ok(format!("{} graphs in {:?}", graphs.len(), t.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let mut graphs = fixtures::small_graph_corpus(6);
    graphs.extend(
        fixtures::bundled()
            .into_iter()
            .filter(|f| total::element_count(&f.graph) <= 24)
            .map(|f| f.graph),
    );
    let mut compared = 0;
    for g in &graphs {
        let Ok(full) = fractional_total_chromatic_number(g, ChiMode::Enumerate, ENUMERATION_BUDGET) else {
            continue;
        };
        let cg = chi(g);
        if full.value != cg {
            return Err(format!("enumeration {} vs column generation {cg}", full.value));
        }
        compared += 1;
    }
    if compared < 50 {
        return Err(format!("only {compared} instances compared"));
    }
    Ok(format!("{compared} instances agree"))
}

fn bfs(g: &Graph, root: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[root] = 0;
    let mut q = VecDeque::from([root]);
    while let Some(u) = q.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

fn check_recolored(task: &RecolorTask, c: &IntervalColoring) -> Result<(), String> {
    let t = &task.tree;
    let ambient = int(task.max_degree as i64 + 1) + &task.eps;
    if c.ambient != ambient {
        return Err("wrong ambient".into());
    }
    if let Err(v) = verify_interval_coloring(t, c) {
        return Err(format!("invalid coloring: {}", v[0].describe(t)));
    }
    let [(_, re)] = t.neighbors(task.root) else {
        return Err("root not a leaf".into());
    };
    if c.color(t, TotalElement::Vertex(task.root)) != &task.x || c.color(t, TotalElement::Edge(*re)) != &task.y {
        return Err("root colors differ from X, Y".into());
    }
    let d = DepthParams::new(task.max_degree, &task.eps_prime, &task.eps).map_err(|e| e.to_string())?.d;
    let dist = bfs(t, task.root);
    for v in t.vertices().filter(|&v| dist[v] == d) {
        let mut elems = vec![TotalElement::Vertex(v)];
        elems.extend(t.neighbors(v).iter().map(|&(_, e)| TotalElement::Edge(e)));
        for x in elems {
            if c.color(t, x) != task.base.color(t, x) {
                return Err(format!("{} changed at depth d", x.label(t)));
            }
        }
    }
    Ok(())
}

fn recolor_suite() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let tasks = 120;
    let mut deepest = 0;
    for i in 0..tasks {
        let delta = if i % 2 == 0 { 5 } else { 7 };
        let shape = TaskShape::random(&mut rng, delta);
        let task = random_task(&mut rng, &shape);
        let c = recolor_tree(&task).map_err(|e| format!("task {i}: {e}"))?;
        check_recolored(&task, &c).map_err(|e| format!("task {i}: {e}"))?;
        deepest = deepest.max(task.params().unwrap().d);
    }
    within(Duration::from_secs(600), t, "recolor tasks")?;
    Ok(format!("{tasks} tasks, depth up to {deepest}, {:?}", t.elapsed()))
}

fn combination_arithmetic() -> Outcome {
    let mut runs = 0;
    for delta in [5usize, 7, 9] {
        let k = int((delta / 2) as i64);
        for eps in [ratio(1, 10), ratio(1, 2), int(1)] {
            let two = int(2);
            let odd = &two * &k + int(1);
            let factor = &odd / (&two * &k * (&k + int(1)));
            let closed = ((&k + int(1)) * (&two + &eps / &odd)).recip();
            let target = (&two * &k + &two + &eps).recip();
            let vertex_chain = &k * &factor * &two / (&two * &odd + &eps);
            let edge_chain = &factor * &two * &k / (&two * (&odd + &eps / &two));
            if vertex_chain != closed || edge_chain != closed || closed <= target {
                return Err(format!("chain identity fails for delta {delta}, eps {eps}"));
            }

            let g = fixtures::caterpillar(2, delta);
            let d = ell_decomposition(&g, delta, NODE_BUDGET).map_err(|e| e.to_string())?;
            let c = Coefficients::new(delta, &eps).map_err(|e| e.to_string())?;
            let m = d.matching.ok_or("no matching")?;
            let mut ws = Vec::new();
            for (_, part) in d.parts.iter().enumerate().filter(|&(i, _)| i != m) {
                match solve_weighted_coloring(&g, &c.factor_bounds(&g, part)).map_err(|e| e.to_string())? {
                    WeightedOutcome::Feasible(w) => ws.push(w),
                    WeightedOutcome::Infeasible { min_mass, .. } => {
                        return Err(format!("factor infeasible for delta {delta}: {min_mass}"))
                    }
                }
            }
            let w = compose_factor_colorings(&g, &d, &ws, &eps).map_err(|e| e.to_string())?;
            if w.total() != Rational::one() {
                return Err("mass differs from 1".into());
            }
            let cov = w.coverage(&g);
            let matching: BTreeSet<usize> = d.parts[m].iter().copied().collect();
            for x in total::elements(&g) {
                let got = &cov[x.index(&g)];
                let ok = match x {
                    TotalElement::Edge(e) if matching.contains(&e) => got >= &(&two * &k + &two).recip(),
                    _ => got > &target,
                };
                if !ok {
                    return Err(format!("delta {delta}, eps {eps}: {} has {got}", x.label(&g)));
                }
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} parameter pairs"))
}

fn connector_forests() -> Outcome {
    let cases: Vec<(&str, Graph, usize, usize)> = vec![
        ("mcgee", fixtures::mcgee(), 1, 2),
        ("heawood", fixtures::heawood(), 1, 2),
        ("petersen/1", fixtures::subdivide(&fixtures::petersen(), 1), 2, 3),
        ("k33/2", fixtures::subdivide(&fixtures::complete_bipartite(3, 3), 2), 2, 3),
        ("petersen/2", fixtures::subdivide(&fixtures::petersen(), 2), 2, 5),
        ("mcgee/1", fixtures::subdivide(&fixtures::mcgee(), 1), 2, 5),
    ];
    let mut checked = 0;
    for (name, g, ell, d) in cases {
        let need = Extended::Finite((d + 1) * ell);
        if girth(&g) <= need {
            return Err(format!("{name}: girth {} not above {need}", girth(&g)));
        }
        let m = g.edge_count();
        let mut hs: Vec<Vec<usize>> = (0..m).map(|e| vec![e]).collect();
        if ell >= 2 {
            for a in 0..m {
                for b in a + 1..m {
                    hs.push(vec![a, b]);
                }
            }
        }
        for edges in hs {
            let h = Subgraph::from_edges(&g, edges.iter().copied());
            let n = neighborhood(&g, &d_connector(&g, &h, d));
            if !is_forest(&g, &n) {
                return Err(format!("{name}, (l,d)=({ell},{d}): neighborhood of H={edges:?} has a cycle"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} subgraphs"))
}

fn decomposition_realization() -> Outcome {
    let mut names = Vec::new();
    for f in fixtures::bundled() {
        let delta = f.graph.max_degree();
        if !is_cyclically_k_connected(&f.graph, delta).unwrap_or(false) {
            continue;
        }
        let t = Instant::now();
        let d = ell_decomposition(&f.graph, delta, NODE_BUDGET).map_err(|e| format!("{}: {e}", f.name))?;
        within(Duration::from_secs(60), t, f.name)?;
        if let Err(v) = verify_decomposition(&f.graph, &d, delta) {
            return Err(format!("{}: {v:?}", f.name));
        }
        names.push(f.name);
    }
    for required in ["petersen", "heawood", "mcgee"] {
        if !names.contains(&required) {
            return Err(format!("{required} was not checked"));
        }
    }
    Ok(names.join(","))
}

fn split_instances() -> Vec<(&'static str, Graph, Rational)> {
    let bridged = |n: usize| fixtures::joined_copies(&fixtures::cycle(n), &[(0, 0)]);
    vec![("c24+c24", bridged(24), int(2))]
}

fn construction_soundness() -> Outcome {
    let mut instances: Vec<(String, Graph, Rational, ConstructOptions)> = Vec::new();
    for f in fixtures::bundled() {
        for limit in [24, 0] {
            let opts = ConstructOptions {
                lp_edge_limit: limit,
                ..ConstructOptions::default()
            };
            instances.push((format!("{}/lp{limit}", f.name), f.graph.clone(), int(1), opts));
        }
    }
    for (name, g, eps) in split_instances() {
        instances.push((name.into(), g, eps, ConstructOptions::default()));
    }
    let (mut done, mut failed, mut splits) = (0, 0, 0);
    for (name, g, eps, opts) in &instances {
        let ambient = int(g.max_degree() as i64 + 1) + eps;
        match construct_coloring(g, eps, opts) {
            Ok(out) => {
                if out.coloring.ambient != ambient {
                    return Err(format!("{name}: ambient {}", out.coloring.ambient));
                }
                if let Err(v) = verify_interval_coloring(g, &out.coloring) {
                    return Err(format!("{name}: emitted an invalid coloring: {}", v[0].describe(g)));
                }
                done += 1;
            }
            Err(f) => {
                if let Some(p) = &f.partial {
                    let pg = fractotal::graph::io::parse_edge_list(&p.edge_list).map_err(|e| e.to_string())?;
                    let pc = IntervalColoring::from_doc(&pg, &p.coloring).map_err(|e| e.to_string())?;
                    if verify_interval_coloring(&pg, &pc).is_err() {
                        return Err(format!("{name}: partial artifact does not verify"));
                    }
                }
                failed += 1;
            }
        }
    }

    for (name, g, eps) in split_instances() {
        let delta = g.max_degree();
        let eps_prime = &eps / int(2);
        let p = DepthParams::new(delta, &eps_prime, &eps).map_err(|e| e.to_string())?;
        let plan = plan_split(&g, delta, p.d)
            .map_err(|e| format!("{name}: {e}"))?
            .ok_or(format!("{name}: no cut"))?;
        let problems = plan_violations(&g, delta, &plan);
        if !problems.is_empty() {
            return Err(format!("{name}: {problems:?}"));
        }
        if plan.side_a.edges.len() >= g.edge_count() {
            return Err(format!("{name}: G_A is not smaller"));
        }
        for (i, a) in plan.trees.iter().enumerate() {
            for (j, b) in plan.trees.iter().enumerate().skip(i + 1) {
                let common: BTreeSet<_> = a.vertices.intersection(&b.vertices).copied().collect();
                let shared_root = plan.boundary[i].x == plan.boundary[j].x;
                if !(common.is_empty() || shared_root && common == BTreeSet::from([plan.boundary[i].x])) {
                    return Err(format!("{name}: trees {i} and {j} overlap"));
                }
            }
        }
        let opts = ConstructOptions::default();
        let c_a = construct_coloring(&plan.graph_a.0, &eps, &opts).map_err(|f| f.reason.to_string())?;
        let c_b = construct_coloring(plan.graph_b(), &eps_prime, &opts).map_err(|f| f.reason.to_string())?;
        let glued = glue_colorings(&g, &plan, delta, &c_a.coloring, &c_b.coloring, &eps_prime, &eps)
            .map_err(|e| format!("{name}: {e}"))?;
        let trimmed = IntervalColoring {
            ambient: c_a.coloring.ambient.clone(),
            colors: c_a.coloring.colors.iter().map(|s| s.truncate_to_measure(&int(1))).collect(),
        };
        let diff = boundary_disagreements(&g, &plan, &trimmed, &glued);
        if !diff.is_empty() {
            return Err(format!("{name}: {diff:?}"));
        }
        if verify_interval_coloring(&g, &glued).is_err() {
            return Err(format!("{name}: glued coloring invalid"));
        }
        splits += 1;
    }
    Ok(format!(
        "{done} verified, {failed} structured failures, {splits} split plans checked"
    ))
}

fn json_identical<T: serde::Serialize + serde::de::DeserializeOwned>(value: &T) -> Result<(), String> {
    let a = serde_json::to_string(value).map_err(|e| e.to_string())?;
    let back: T = serde_json::from_str(&a).map_err(|e| e.to_string())?;
    let b = serde_json::to_string(&back).map_err(|e| e.to_string())?;
    if a != b {
        return Err("JSON round trip changed the bytes".into());
    }
    Ok(())
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let corpus: Vec<Graph> = fixtures::small_graph_corpus(7)
        .into_iter()
        .filter(|g| g.edge_count() > 0)
        .collect();
    let instances = 200;
    for i in 0..instances {
        let g = corpus.choose(&mut rng).expect("nonempty corpus");
        let cert = fractional_total_chromatic_number(g, ChiMode::ColumnGeneration, ENUMERATION_BUDGET)
            .map_err(|e| e.to_string())?;
        let (w, alpha) = fractional_to_weighted(&cert.primal).map_err(|e| e.to_string())?;
        if w.total() != Rational::one() || alpha != cert.value.recip() {
            return Err(format!("instance {i}: weighted form has wrong mass"));
        }
        let frac = weighted_to_fractional(g, &w, &alpha).map_err(|e| e.to_string())?;
        if frac != cert.primal {
            return Err(format!("instance {i}: weighted -> fractional does not return the LP solution"));
        }
        let extra = Rational::new(rng.gen_range(0..4).into(), 3.into());
        let ambient = &cert.value + extra;
        let c = weights_to_interval_assignment(g, &frac, &ambient).map_err(|e| e.to_string())?;
        if let Err(v) = verify_interval_coloring(g, &c) {
            return Err(format!("instance {i}: {}", v[0].describe(g)));
        }

        let doc = c.to_doc(g);
        json_identical(&doc)?;
        let text = serde_json::to_string(&doc).map_err(|e| e.to_string())?;
        let parsed: IntervalColoringDoc = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if IntervalColoring::from_doc(g, &parsed).map_err(|e| e.to_string())? != c {
            return Err(format!("instance {i}: interval coloring changed"));
        }
        let cdoc = cert.to_doc(g);
        json_identical(&cdoc)?;
        let cert_back: CertificateDoc =
            serde_json::from_str(&serde_json::to_string(&cdoc).unwrap()).map_err(|e| e.to_string())?;
        let cert_back = LpCertificate::from_doc(g, &cert_back).map_err(|e| e.to_string())?;
        if cert_back != cert || verify_certificate(g, &cert_back).is_err() {
            return Err(format!("instance {i}: certificate changed"));
        }
        let wdoc: Vec<WeightedEntryDoc> = w.to_doc(g);
        json_identical(&wdoc)?;
        if WeightedColoring::from_doc(g, &wdoc).map_err(|e| e.to_string())? != w {
            return Err(format!("instance {i}: weighted coloring changed"));
        }
        if g.max_degree() >= 1 {
            let d = ell_decomposition(g, g.max_degree(), NODE_BUDGET).map_err(|e| e.to_string())?;
            let ddoc: DecompositionDoc = d.to_doc(g);
            json_identical(&ddoc)?;
        }
    }
    let iso = fractotal::construct::demo::random_isometry(&mut rng, &ratio(13, 2), 5);
    json_identical::<PiecewiseIsometry>(&iso)?;
    Ok(format!("{instances} instances"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("tight instances K4, K6, K2,2, K3,3", tight_instances),
        ("universal bounds on the small-graph corpus", universal_bounds),
        ("enumeration and column generation agree", oracle_equivalence),
        ("randomized tree recoloring", recolor_suite),
        ("convex combination arithmetic", combination_arithmetic),
        ("connector neighborhoods are forests", connector_forests),
        ("decompositions of cyclically connected fixtures", decomposition_realization),
        ("construction emits only verified colorings", construction_soundness),
        ("conversion pipeline and JSON round trips", round_trips),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(note) => println!("criterion {}: PASS: {name} ({note}; {:.1?})", i + 1, t.elapsed()),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL: {name} ({why})", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
