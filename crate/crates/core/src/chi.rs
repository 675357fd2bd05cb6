//! The covering LP over total independent sets: the fractional total
//! chromatic number with certificates, and weighted colorings with
//! per-element lower bounds.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coloring::{ColoringError, WeightedColoring, WeightedEntryDoc};
use crate::graph::Graph;
use crate::rational::{self, Rational};
use crate::simplex::{LpError, LpSolution, Sense, Simplex};
use crate::total::{self, TotalAdjacency, TotalElement, TotalError, TotalIndependentSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChiError {
    #[error(transparent)]
    Total(#[from] TotalError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("pricing returned a column already in the master problem")]
    Stalled,
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error("bounds have {found} entries, expected {expected}")]
    BoundsLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiMode {
    Enumerate,
    ColumnGeneration,
}

/// Optimal primal and dual solutions of the covering LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpCertificate {
    pub value: Rational,
    /// Fractional coloring: coverage `≥ 1`, mass `value`.
    pub primal: WeightedColoring,
    /// Dual weights per element index: every total independent set has
    /// dual weight at most 1.
    pub dual: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub primal: Vec<WeightedEntryDoc>,
    pub dual: Vec<DualEntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEntryDoc {
    pub element: String,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

impl LpCertificate {
    pub fn to_doc(&self, g: &Graph) -> CertificateDoc {
        CertificateDoc {
            value: self.value.clone(),
            primal: self.primal.to_doc(g),
            dual: self
                .dual
                .iter()
                .enumerate()
                .map(|(i, y)| DualEntryDoc {
                    element: TotalElement::from_index(g, i).label(g),
                    weight: y.clone(),
                })
                .collect(),
        }
    }

    pub fn from_doc(g: &Graph, doc: &CertificateDoc) -> Result<Self, ChiError> {
        let mut dual = vec![None; total::element_count(g)];
        for e in &doc.dual {
            let i = TotalElement::parse(g, &e.element)?.index(g);
            dual[i] = Some(e.weight.clone());
        }
        let dual = dual
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ChiError::Certificate("dual misses an element".into()))?;
        Ok(Self {
            value: doc.value.clone(),
            primal: WeightedColoring::from_doc(g, &doc.primal)?,
            dual,
        })
    }
}

fn indicator(g: &Graph, s: &TotalIndependentSet) -> Vec<Rational> {
    let mut col = vec![Rational::zero(); total::element_count(g)];
    for i in s.indices(g) {
        col[i] = Rational::one();
    }
    col
}

/// Repeatedly takes a total independent set covering the most uncovered
/// targets until every target is covered.
pub fn greedy_cover(g: &Graph, adj: &TotalAdjacency, targets: &[bool]) -> Vec<TotalIndependentSet> {
    let mut uncovered = targets.to_vec();
    let mut sets = Vec::new();
    while uncovered.iter().any(|&u| u) {
        let w: Vec<Rational> = uncovered
            .iter()
            .map(|&u| if u { Rational::one() } else { Rational::zero() })
            .collect();
        let (s, _) = total::max_weight_tis_with(g, adj, &w).expect("indicator weights are valid");
        for i in s.indices(g) {
            uncovered[i] = false;
        }
        sets.push(s);
    }
    sets
}

/// `min Σ x_I` subject to coverage `≥ bounds`, optionally pricing new
/// columns until no set has dual weight above 1.
fn solve_cover(
    g: &Graph,
    adj: &TotalAdjacency,
    bounds: &[Rational],
    mut sets: Vec<TotalIndependentSet>,
    generate: bool,
) -> Result<(LpSolution, Vec<TotalIndependentSet>), ChiError> {
    let rows = bounds.len();
    let cols: Vec<Vec<Rational>> = sets.iter().map(|s| indicator(g, s)).collect();
    let mut lp = Simplex::new(vec![Rational::one(); cols.len()], cols, &vec![Sense::Ge; rows], bounds.to_vec())?;
    loop {
        let sol = lp.solve()?;
        if !generate {
            return Ok((sol, sets));
        }
        let (s, price) = total::max_weight_tis_with(g, adj, &sol.dual)?;
        if price <= Rational::one() {
            return Ok((sol, sets));
        }
        if sets.contains(&s) {
            return Err(ChiError::Stalled);
        }
        lp.add_column(Rational::one(), indicator(g, &s))?;
        sets.push(s);
    }
}

fn weights_from(sets: &[TotalIndependentSet], x: &[Rational]) -> WeightedColoring {
    WeightedColoring::new(sets.iter().cloned().zip(x.iter().cloned()))
}

/// Exact `χ″_f(G)` with an optimal fractional coloring and a dual witness.
pub fn fractional_total_chromatic_number(
    g: &Graph,
    mode: ChiMode,
    budget: usize,
) -> Result<LpCertificate, ChiError> {
    let adj = TotalAdjacency::new(g);
    let size = total::element_count(g);
    let ones = vec![Rational::one(); size];
    let (sol, sets) = match mode {
        ChiMode::Enumerate => {
            let sets = total::enumerate_maximal_tis(g, budget)?;
            solve_cover(g, &adj, &ones, sets, false)?
        }
        ChiMode::ColumnGeneration => {
            let sets = greedy_cover(g, &adj, &vec![true; size]);
            solve_cover(g, &adj, &ones, sets, true)?
        }
    };
    let cert = LpCertificate {
        value: sol.value,
        primal: weights_from(&sets, &sol.x),
        dual: sol.dual,
    };
    verify_certificate(g, &cert)?;
    Ok(cert)
}

/// Primal feasibility, dual feasibility (via the exact pricing oracle) and
/// equal objectives.
pub fn verify_certificate(g: &Graph, cert: &LpCertificate) -> Result<(), ChiError> {
    let size = total::element_count(g);
    cert.primal.check(g)?;
    cert.primal.check_coverage(g, &vec![Rational::one(); size])?;
    let mass = cert.primal.total();
    if mass != cert.value {
        return Err(ChiError::Certificate(format!(
            "primal mass {} differs from value {}",
            rational::format(&mass),
            rational::format(&cert.value)
        )));
    }
    if cert.dual.len() != size || cert.dual.iter().any(|y| y.is_negative()) {
        return Err(ChiError::Certificate("dual must be a nonnegative vector over all elements".into()));
    }
    let dual_value: Rational = cert.dual.iter().sum();
    if dual_value != cert.value {
        return Err(ChiError::Certificate(format!(
            "dual value {} differs from value {}",
            rational::format(&dual_value),
            rational::format(&cert.value)
        )));
    }
    let (s, price) = total::max_weight_tis(g, &cert.dual)?;
    if price > Rational::one() {
        return Err(ChiError::Certificate(format!(
            "dual weight of {} is {}",
            s.labels(g).join(","),
            rational::format(&price)
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightedOutcome {
    /// Mass exactly 1 and coverage `≥ bounds`.
    Feasible(WeightedColoring),
    /// Every weighted coloring of mass 1 misses the bounds: the dual `y`
    /// has `y(I) ≤ 1` for all sets while `Σ y_x b_x = min_mass > 1`.
    Infeasible { min_mass: Rational, dual: Vec<Rational> },
}

/// A weighted total coloring `w` (mass 1) with `w[x] ≥ bounds[x]`, found by
/// column generation on the covering LP, or a dual infeasibility witness.
pub fn solve_weighted_coloring(g: &Graph, bounds: &[Rational]) -> Result<WeightedOutcome, ChiError> {
    let size = total::element_count(g);
    if bounds.len() != size {
        return Err(ChiError::BoundsLength {
            expected: size,
            found: bounds.len(),
        });
    }
    if let Some(i) = bounds.iter().position(|b| b.is_negative()) {
        return Err(TotalError::NegativeWeight(TotalElement::from_index(g, i).label(g)).into());
    }
    let adj = TotalAdjacency::new(g);
    let targets: Vec<bool> = bounds.iter().map(|b| b.is_positive()).collect();
    if !targets.iter().any(|&t| t) {
        let (s, _) = total::max_weight_tis_with(g, &adj, &vec![Rational::zero(); size])?;
        return Ok(WeightedOutcome::Feasible(WeightedColoring::new([(s, Rational::one())])));
    }
    let sets = greedy_cover(g, &adj, &targets);
    let (sol, sets) = solve_cover(g, &adj, bounds, sets, true)?;
    if sol.value > Rational::one() {
        return Ok(WeightedOutcome::Infeasible {
            min_mass: sol.value,
            dual: sol.dual,
        });
    }
    let mut w = weights_from(&sets, &sol.x);
    let slack = Rational::one() - &sol.value;
    if !slack.is_zero() {
        let first = w.entries()[0].0.clone();
        w = WeightedColoring::new(w.entries().iter().cloned().chain([(first, slack)]));
    }
    w.check_coverage(g, bounds)?;
    Ok(WeightedOutcome::Feasible(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};
    use crate::total::ENUMERATION_BUDGET;

    fn chi(g: &Graph, mode: ChiMode) -> Rational {
        fractional_total_chromatic_number(g, mode, ENUMERATION_BUDGET).unwrap().value
    }

    #[test]
    fn small_values_both_modes() {
        let cases = [
            (fixtures::complete(2), int(3)),
            (fixtures::complete(4), int(5)),
            (fixtures::complete_bipartite(2, 2), int(4)),
            (fixtures::cycle(5), ratio(10, 3)),
        ];
        for (g, want) in cases {
            assert_eq!(chi(&g, ChiMode::Enumerate), want);
            assert_eq!(chi(&g, ChiMode::ColumnGeneration), want);
        }
    }

    #[test]
    fn budget_refusal_only_in_enumeration() {
        let p = fixtures::petersen();
        assert!(matches!(
            fractional_total_chromatic_number(&p, ChiMode::Enumerate, 20),
            Err(ChiError::Total(TotalError::BudgetExceeded { .. }))
        ));
        assert_eq!(chi(&p, ChiMode::ColumnGeneration), int(4));
    }

    #[test]
    fn certificate_is_tight_somewhere_and_round_trips() {
        let g = fixtures::cycle(5);
        let cert = fractional_total_chromatic_number(&g, ChiMode::ColumnGeneration, 0).unwrap();
        assert!(cert.primal.coverage(&g).iter().any(|c| *c == int(1)));
        let text = serde_json::to_string(&cert.to_doc(&g)).unwrap();
        let doc: CertificateDoc = serde_json::from_str(&text).unwrap();
        let back = LpCertificate::from_doc(&g, &doc).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&g, &back).is_ok());

        let mut bad = cert.clone();
        bad.dual[0] += int(1);
        assert!(verify_certificate(&g, &bad).is_err());
    }

    #[test]
    fn weighted_feasibility() {
        let k4 = fixtures::complete(4);
        let size = total::element_count(&k4);
        match solve_weighted_coloring(&k4, &vec![int(0); size]).unwrap() {
            WeightedOutcome::Feasible(w) => {
                assert_eq!(w.entries().len(), 1);
                assert_eq!(w.total(), int(1));
                assert!(w.entries()[0].0.is_maximal(&k4));
            }
            other => panic!("{other:?}"),
        }
        match solve_weighted_coloring(&k4, &vec![int(1); size]).unwrap() {
            WeightedOutcome::Infeasible { min_mass, dual } => {
                assert_eq!(min_mass, int(5));
                let (_, price) = total::max_weight_tis(&k4, &dual).unwrap();
                assert!(price <= int(1));
            }
            other => panic!("{other:?}"),
        }
    }

    /// C6 with F = E(C6), eps = 1, Δ = 2: vertices need 1/(Δ+ε) = 1/3,
    /// edges of F need (Δ-1)/(2(Δ+ε)) = 1/6.
    #[test]
    fn weighted_c6_factor_bounds() {
        let g = fixtures::cycle(6);
        let mut bounds = vec![ratio(1, 3); 6];
        bounds.extend(vec![ratio(1, 6); 6]);
        match solve_weighted_coloring(&g, &bounds).unwrap() {
            WeightedOutcome::Feasible(w) => {
                assert_eq!(w.total(), int(1));
                w.check(&g).unwrap();
                w.check_coverage(&g, &bounds).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }
}
