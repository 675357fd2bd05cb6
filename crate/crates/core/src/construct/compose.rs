//! Convex combination of per-factor weighted colorings into a weighted
//! `1/(Δ+1+ε)`-coloring of a graph with a `Δ`-decomposition.

use num_traits::{One, Signed, Zero};

use crate::coloring::WeightedColoring;
use crate::decompose::{verify_decomposition, Decomposition};
use crate::graph::Graph;
use crate::rational::{self, int, Rational};
use crate::total::{self, TotalElement, TotalIndependentSet};

use super::ConstructError;

/// The parameters of the combination for odd `Δ = 2k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficients {
    pub k: usize,
    pub epsilon: Rational,
    pub epsilon_prime: Rational,
    /// Weight of every factor coloring: `(2k+1)/(2k(k+1))`.
    pub factor: Rational,
    /// Weight of the matching: `1/(2k+2)`.
    pub matching: Rational,
}

impl Coefficients {
    pub fn new(delta: usize, epsilon: &Rational) -> Result<Self, ConstructError> {
        if delta < 3 || delta % 2 == 0 {
            return Err(ConstructError::Precondition(format!(
                "maximum degree must be odd and at least 3, got {delta}"
            )));
        }
        if !epsilon.is_positive() {
            return Err(ConstructError::Precondition("epsilon must be positive".into()));
        }
        let k = (delta / 2) as i64;
        Ok(Self {
            k: k as usize,
            epsilon: epsilon.clone(),
            epsilon_prime: epsilon / int(2),
            factor: Rational::new((2 * k + 1).into(), (2 * k * (k + 1)).into()),
            matching: Rational::new(1.into(), (2 * k + 2).into()),
        })
    }

    pub fn delta(&self) -> usize {
        2 * self.k + 1
    }

    /// `1/(Δ+ε′)`, the vertex bound each factor coloring must meet.
    pub fn vertex_bound(&self) -> Rational {
        (int(self.delta() as i64) + &self.epsilon_prime).recip()
    }

    /// `(Δ-1)/(2(Δ+ε′))`, the bound on the factor's own edges.
    pub fn factor_edge_bound(&self) -> Rational {
        int(self.delta() as i64 - 1) / (int(2) * (int(self.delta() as i64) + &self.epsilon_prime))
    }

    /// `1/(2k+2+ε)`.
    pub fn target(&self) -> Rational {
        (int(2 * self.k as i64 + 2) + &self.epsilon).recip()
    }

    /// Per-element lower bounds for the factor `F`.
    pub fn factor_bounds(&self, g: &Graph, factor: &[usize]) -> Vec<Rational> {
        let mut b = vec![Rational::zero(); total::element_count(g)];
        for v in g.vertices() {
            b[v] = self.vertex_bound();
        }
        for &e in factor {
            b[TotalElement::Edge(e).index(g)] = self.factor_edge_bound();
        }
        b
    }
}

/// The exact values along the two inequality chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCheck {
    /// `k · (2k+1)/(2k(k+1)) · 2/(2(2k+1)+ε)`.
    pub vertex_chain: Rational,
    /// `(2k+1)/(2k(k+1)) · 2k/(2(2k+1+ε′))`.
    pub edge_chain: Rational,
    /// `1/((k+1)(2+ε/(2k+1)))`.
    pub closed_form: Rational,
    pub target: Rational,
}

impl ChainCheck {
    pub fn holds(&self) -> bool {
        self.vertex_chain == self.closed_form
            && self.edge_chain == self.closed_form
            && self.closed_form > self.target
    }
}

pub fn coefficient_chain(c: &Coefficients) -> ChainCheck {
    let k = int(c.k as i64);
    let two = int(2);
    let odd = &two * &k + int(1);
    let vertex_chain = &k * &c.factor * &two / (&two * &odd + &c.epsilon);
    let edge_chain = &c.factor * (&two * &k) / (&two * (&odd + &c.epsilon_prime));
    let closed_form = ((&k + int(1)) * (&two + &c.epsilon / &odd)).recip();
    ChainCheck {
        vertex_chain,
        edge_chain,
        closed_form,
        target: c.target(),
    }
}

/// Elements whose coverage in the composed coloring falls short, with the
/// exact slack `found - required` (negative, or zero where strictness is
/// demanded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub element: String,
    pub found: Rational,
    pub required: Rational,
    pub strict: bool,
}

impl CoverageReport {
    pub fn slack(&self) -> Rational {
        &self.found - &self.required
    }
}

/// `w = Σ (2k+1)/(2k(k+1)) · w_i′ + 1/(2k+2) · [M]`, checked exactly:
/// mass 1, `w[v] > 1/(2k+2+ε)` on vertices and on factor edges, and
/// `w[e] ≥ 1/(2k+2)` on matching edges.
///
/// `factor_colorings[i]` belongs to the `i`-th non-matching part of
/// `decomp`, in part order.
pub fn compose_factor_colorings(
    g: &Graph,
    decomp: &Decomposition,
    factor_colorings: &[WeightedColoring],
    epsilon: &Rational,
) -> Result<WeightedColoring, ConstructError> {
    let delta = g.max_degree();
    let c = Coefficients::new(delta, epsilon)?;
    if let Err(v) = verify_decomposition(g, decomp, delta) {
        return Err(ConstructError::Precondition(format!("not a {delta}-decomposition: {v:?}")));
    }
    let m_idx = decomp.matching.expect("odd ell has a matching");
    let factors: Vec<&Vec<usize>> = decomp
        .parts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != m_idx)
        .map(|(_, p)| p)
        .collect();
    if factors.len() != c.k || factor_colorings.len() != c.k {
        return Err(ConstructError::Precondition(format!(
            "expected {} factor colorings, got {}",
            c.k,
            factor_colorings.len()
        )));
    }
    for (i, (w, f)) in factor_colorings.iter().zip(&factors).enumerate() {
        w.check(g)?;
        let mass = w.total();
        if !mass.is_one() {
            return Err(ConstructError::Precondition(format!(
                "factor coloring {i} has mass {}",
                rational::format(&mass)
            )));
        }
        w.check_coverage(g, &c.factor_bounds(g, f))?;
    }
    let matching = TotalIndependentSet::new(
        g,
        decomp.parts[m_idx].iter().map(|&e| TotalElement::Edge(e)).collect(),
    )
    .ok_or_else(|| ConstructError::Precondition("matching part is not independent".into()))?;

    let mut entries: Vec<(TotalIndependentSet, Rational)> = factor_colorings
        .iter()
        .flat_map(|w| w.scaled(&c.factor).entries().to_vec())
        .collect();
    entries.push((matching, c.matching.clone()));
    let w = WeightedColoring::new(entries);

    let mass = w.total();
    if !mass.is_one() {
        return Err(ConstructError::Precondition(format!(
            "composed mass is {}",
            rational::format(&mass)
        )));
    }
    let short = coverage_shortfalls(g, decomp, &w, &c);
    if !short.is_empty() {
        return Err(ConstructError::Coverage(short));
    }
    Ok(w)
}

/// Every violated inequality of the composed coloring.
pub fn coverage_shortfalls(
    g: &Graph,
    decomp: &Decomposition,
    w: &WeightedColoring,
    c: &Coefficients,
) -> Vec<CoverageReport> {
    let cov = w.coverage(g);
    let target = c.target();
    let mut in_matching = vec![false; g.edge_count()];
    if let Some(m) = decomp.matching {
        for &e in &decomp.parts[m] {
            in_matching[e] = true;
        }
    }
    let mut out = Vec::new();
    for x in total::elements(g) {
        let found = &cov[x.index(g)];
        let (required, strict) = match x {
            TotalElement::Edge(e) if in_matching[e] => (c.matching.clone(), false),
            _ => (target.clone(), true),
        };
        let ok = if strict { found > &required } else { found >= &required };
        if !ok {
            out.push(CoverageReport {
                element: x.label(g),
                found: found.clone(),
                required,
                strict,
            });
        }
    }
    out
}
