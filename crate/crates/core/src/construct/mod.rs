//! The constructive pipeline: per-factor weighted colorings combined over a
//! decomposition, tree recoloring by isometry cascades, and the cut-split
//! induction that glues colorings of the two sides.

pub mod compose;
pub mod demo;
pub mod recolor;
pub mod split;

use num_traits::Signed;
use serde::Serialize;

use crate::chi::{fractional_total_chromatic_number, solve_weighted_coloring, ChiError, ChiMode, WeightedOutcome};
use crate::coloring::{
    verify_interval_coloring, weighted_to_fractional, weights_to_interval_assignment, ColoringError,
    IntervalColoring, IntervalColoringDoc,
};
use crate::decompose::{ell_decomposition, DecomposeError, DecompositionDoc, NODE_BUDGET};
use crate::graph::{io, Graph, GraphError};
use crate::isometry::IsometryError;
use crate::rational::{self, int, Rational};
use crate::total::{TotalError, ENUMERATION_BUDGET};

pub use compose::{coefficient_chain, compose_factor_colorings, ChainCheck, Coefficients, CoverageReport};
pub use recolor::{isometry_cascade, levels, recolor_tree, recolor_violations, DepthParams, RecolorTask};
pub use split::{glue_colorings, plan_split, plan_violations, select_cut, BoundaryEdge, SplitPlan};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Total(#[from] TotalError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Chi(#[from] ChiError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
    #[error("isometry cascade: {0}")]
    Cascade(String),
    #[error("coverage below the required bound at {}", .0.iter().map(|r| r.element.as_str()).collect::<Vec<_>>().join(", "))]
    Coverage(Vec<CoverageReport>),
    #[error("factor {part} admits no weighted coloring meeting its bounds (minimum mass {min_mass})")]
    FactorInfeasible { part: usize, min_mass: String },
    #[error("fractional total chromatic number {value} exceeds the ambient {ambient}")]
    AboveAmbient { value: String, ambient: String },
    #[error("split plan along {cut:?} violates: {}", .violations.join("; "))]
    Plan { cut: Vec<String>, violations: Vec<String> },
    #[error("{stage}: {}", .violations.join("; "))]
    Invalid { stage: String, violations: Vec<String> },
    #[error("recursion depth {0} reached")]
    DepthLimit(usize),
}

#[derive(Debug, Clone)]
pub struct ConstructOptions {
    /// Graphs with at most this many edges go straight to the LP.
    pub lp_edge_limit: usize,
    pub max_depth: usize,
    pub decompose_budget: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        Self {
            lp_edge_limit: 24,
            max_depth: 6,
            decompose_budget: NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Branch {
    Lp {
        value: String,
    },
    Factors {
        epsilon: String,
        decomposition: DecompositionDoc,
    },
    Split {
        cut: Vec<String>,
        side_b: Vec<String>,
        connector_edges: Vec<String>,
        boundary: Vec<String>,
        girth: String,
        girth_hypothesis: bool,
        eps_prime: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    /// `G` for the input, then `.A` / `.B` per split.
    pub graph: String,
    pub depth: usize,
    pub vertices: usize,
    pub edges: usize,
    #[serde(with = "rational::serde_str")]
    pub ambient: Rational,
    pub branch: Option<Branch>,
    pub verified: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub coloring: IntervalColoring,
    pub trace: Vec<TraceStep>,
}

/// A verified coloring of some graph met along the way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialArtifact {
    pub graph: String,
    pub depth: usize,
    pub edge_list: String,
    pub coloring: IntervalColoringDoc,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{reason}")]
pub struct ConstructFailure {
    pub reason: ConstructError,
    pub trace: Vec<TraceStep>,
    /// The deepest verified coloring produced before the failure.
    pub partial: Option<PartialArtifact>,
}

struct Run<'o> {
    opts: &'o ConstructOptions,
    max_degree: usize,
    trace: Vec<TraceStep>,
    partial: Option<PartialArtifact>,
}

/// Fractional total coloring of `g` at ambient `Δ+1+ε`, `Δ = Δ(g)`.
///
/// Small graphs and graphs of smaller maximum degree go to the LP. A graph
/// without a cyclic cut below `Δ` goes through decomposition, per-factor LPs
/// and composition (odd `Δ`; the LP otherwise). Any other graph is split,
/// both sides are colored recursively (`B` at `ε′ = ε/2`) and glued. Every
/// returned coloring has passed the verifier.
pub fn construct_coloring(
    g: &Graph,
    epsilon: &Rational,
    opts: &ConstructOptions,
) -> Result<Construction, Box<ConstructFailure>> {
    let mut run = Run {
        opts,
        max_degree: g.max_degree(),
        trace: Vec::new(),
        partial: None,
    };
    if !epsilon.is_positive() {
        return Err(run.fail(ConstructError::Precondition("epsilon must be positive".into())));
    }
    match run.color(g, epsilon, "G".into(), 0) {
        Ok(coloring) => Ok(Construction {
            coloring,
            trace: run.trace,
        }),
        Err(e) => Err(run.fail(e)),
    }
}

impl Run<'_> {
    fn fail(self, reason: ConstructError) -> Box<ConstructFailure> {
        Box::new(ConstructFailure {
            reason,
            trace: self.trace,
            partial: self.partial,
        })
    }

    fn color(&mut self, g: &Graph, eps: &Rational, name: String, depth: usize) -> Result<IntervalColoring, ConstructError> {
        let ambient = int(self.max_degree as i64 + 1) + eps;
        let slot = self.trace.len();
        self.trace.push(TraceStep {
            graph: name.clone(),
            depth,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            ambient: ambient.clone(),
            branch: None,
            verified: false,
            error: None,
        });
        let result = self.dispatch(g, eps, &ambient, &name, depth, slot).and_then(|c| {
            verify_interval_coloring(g, &c).map_err(|v| ConstructError::Invalid {
                stage: format!("coloring of {name}"),
                violations: v.iter().map(|x| x.describe(g)).collect(),
            })?;
            Ok(c)
        });
        match &result {
            Ok(c) => {
                self.trace[slot].verified = true;
                if self.partial.as_ref().map_or(true, |p| p.depth <= depth) {
                    self.partial = Some(PartialArtifact {
                        graph: name,
                        depth,
                        edge_list: io::write_edge_list(g),
                        coloring: c.to_doc(g),
                    });
                }
            }
            Err(e) => self.trace[slot].error = Some(e.to_string()),
        }
        result
    }

    fn dispatch(
        &mut self,
        g: &Graph,
        eps: &Rational,
        ambient: &Rational,
        name: &str,
        depth: usize,
        slot: usize,
    ) -> Result<IntervalColoring, ConstructError> {
        let delta = self.max_degree;
        if g.edge_count() <= delta || g.max_degree() < delta || g.edge_count() <= self.opts.lp_edge_limit {
            return self.lp(g, ambient, slot);
        }
        if depth >= self.opts.max_depth {
            return Err(ConstructError::DepthLimit(depth));
        }
        let eps_prime = eps / int(2);
        let params = DepthParams::new(delta, &eps_prime, eps)?;
        let Some(plan) = plan_split(g, delta, params.d)? else {
            if delta % 2 == 1 && delta >= 3 {
                return self.factors(g, eps, ambient, slot);
            }
            return self.lp(g, ambient, slot);
        };
        self.trace[slot].branch = Some(Branch::Split {
            cut: plan.cut.edges.iter().map(|&e| g.edge_label(e)).collect(),
            side_b: plan.cut.side_b.iter().map(|&v| g.label(v).to_string()).collect(),
            connector_edges: plan.connector.edges.iter().map(|&e| g.edge_label(e)).collect(),
            boundary: plan.boundary.iter().map(|b| g.edge_label(b.edge)).collect(),
            girth: plan.girth.to_string(),
            girth_hypothesis: plan.girth_hypothesis(delta),
            eps_prime: rational::format(&eps_prime),
        });
        let c_a = self.color(&plan.graph_a.0, eps, format!("{name}.A"), depth + 1)?;
        let c_b = self.color(plan.graph_b(), &eps_prime, format!("{name}.B"), depth + 1)?;
        glue_colorings(g, &plan, delta, &c_a, &c_b, &eps_prime, eps)
    }

    fn lp(&mut self, g: &Graph, ambient: &Rational, slot: usize) -> Result<IntervalColoring, ConstructError> {
        let cert = fractional_total_chromatic_number(g, ChiMode::ColumnGeneration, ENUMERATION_BUDGET)?;
        self.trace[slot].branch = Some(Branch::Lp {
            value: rational::format(&cert.value),
        });
        if &cert.value > ambient {
            return Err(ConstructError::AboveAmbient {
                value: rational::format(&cert.value),
                ambient: rational::format(ambient),
            });
        }
        Ok(weights_to_interval_assignment(g, &cert.primal, ambient)?)
    }

    fn factors(
        &mut self,
        g: &Graph,
        eps: &Rational,
        ambient: &Rational,
        slot: usize,
    ) -> Result<IntervalColoring, ConstructError> {
        let coeffs = Coefficients::new(g.max_degree(), eps)?;
        let decomp = ell_decomposition(g, g.max_degree(), self.opts.decompose_budget)?;
        self.trace[slot].branch = Some(Branch::Factors {
            epsilon: rational::format(eps),
            decomposition: decomp.to_doc(g),
        });
        let m = decomp.matching.expect("odd ell has a matching");
        let mut weights = Vec::new();
        for (i, part) in decomp.parts.iter().enumerate().filter(|&(i, _)| i != m) {
            match solve_weighted_coloring(g, &coeffs.factor_bounds(g, part))? {
                WeightedOutcome::Feasible(w) => weights.push(w),
                WeightedOutcome::Infeasible { min_mass, .. } => {
                    return Err(ConstructError::FactorInfeasible {
                        part: i,
                        min_mass: rational::format(&min_mass),
                    })
                }
            }
        }
        let w = compose_factor_colorings(g, &decomp, &weights, eps)?;
        let frac = weighted_to_fractional(g, &w, &ambient.recip())?;
        Ok(weights_to_interval_assignment(g, &frac, ambient)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;

    #[test]
    fn k2_takes_the_lp_branch() {
        let out = construct_coloring(&fixtures::complete(2), &int(1), &ConstructOptions::default()).unwrap();
        assert_eq!(out.coloring.ambient, int(3));
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].branch, Some(Branch::Lp { value: "3/1".into() }));
    }

    #[test]
    fn lp_value_above_ambient_fails_structurally() {
        let err = construct_coloring(&fixtures::complete(4), &ratio(1, 2), &ConstructOptions::default()).unwrap_err();
        assert!(matches!(err.reason, ConstructError::AboveAmbient { .. }));
        assert!(err.partial.is_none());
        assert!(!err.trace[0].verified);
    }

    #[test]
    fn petersen_factor_branch() {
        let opts = ConstructOptions {
            lp_edge_limit: 0,
            ..ConstructOptions::default()
        };
        let g = fixtures::petersen();
        match construct_coloring(&g, &int(1), &opts) {
            Ok(out) => {
                assert!(matches!(out.trace[0].branch, Some(Branch::Factors { .. })));
                assert!(verify_interval_coloring(&g, &out.coloring).is_ok());
                assert_eq!(out.coloring.ambient, int(5));
            }
            Err(f) => {
                assert!(matches!(f.reason, ConstructError::FactorInfeasible { .. }));
                assert!(matches!(f.trace[0].branch, Some(Branch::Factors { .. })));
            }
        }
    }

    #[test]
    fn split_branch_on_bridged_cycles() {
        let g = fixtures::joined_copies(&fixtures::cycle(24), &[(0, 0)]);
        let out = construct_coloring(&g, &int(2), &ConstructOptions::default()).unwrap();
        assert!(matches!(out.trace[0].branch, Some(Branch::Split { .. })));
        assert_eq!(out.coloring.ambient, int(6));
        assert!(verify_interval_coloring(&g, &out.coloring).is_ok());
        assert!(out.trace.iter().all(|s| s.verified));
    }
}
