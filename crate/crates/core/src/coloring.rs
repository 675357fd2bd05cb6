//! Weighted and interval total colorings, conversions between them, and the
//! exact verifier.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::interval::IntervalSet;
use crate::rational::{self, Rational};
use crate::total::{self, TotalElement, TotalError, TotalIndependentSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringError {
    #[error(transparent)]
    Element(#[from] TotalError),
    #[error("set {0} is not total independent")]
    NotIndependent(String),
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("alpha must be positive, got {0}")]
    NonPositiveAlpha(String),
    #[error("total mass is {found}, expected {expected}")]
    Mass { expected: String, found: String },
    #[error("coverage of {element} is {found}, below {required}")]
    Coverage {
        element: String,
        found: String,
        required: String,
    },
    #[error("coloring lists {found} elements, graph has {expected}")]
    Size { expected: usize, found: usize },
    #[error("malformed coloring: {0}")]
    Malformed(String),
}

/// Finitely supported distribution-like map from total independent sets to
/// nonnegative rationals. Entries are sorted by set and have positive weight.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedColoring {
    entries: Vec<(TotalIndependentSet, Rational)>,
}

impl WeightedColoring {
    /// Merges repeated sets and drops zero weights.
    pub fn new(entries: impl IntoIterator<Item = (TotalIndependentSet, Rational)>) -> Self {
        let mut v: Vec<(TotalIndependentSet, Rational)> = entries.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(TotalIndependentSet, Rational)> = Vec::with_capacity(v.len());
        for (s, w) in v {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += w,
                _ => out.push((s, w)),
            }
        }
        out.retain(|(_, w)| !w.is_zero());
        Self { entries: out }
    }

    pub fn entries(&self) -> &[(TotalIndependentSet, Rational)] {
        &self.entries
    }

    pub fn total(&self) -> Rational {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// `w[x]` for every element, indexed by element index.
    pub fn coverage(&self, g: &Graph) -> Vec<Rational> {
        let mut cov = vec![Rational::zero(); total::element_count(g)];
        for (s, w) in &self.entries {
            for i in s.indices(g) {
                cov[i] += w;
            }
        }
        cov
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self::new(self.entries.iter().map(|(s, w)| (s.clone(), w * factor)))
    }

    /// Support sets are independent and weights nonnegative.
    pub fn check(&self, g: &Graph) -> Result<(), ColoringError> {
        for (s, w) in &self.entries {
            if !total::is_total_independent(g, s.members()) {
                return Err(ColoringError::NotIndependent(s.labels(g).join(",")));
            }
            if w.is_negative() {
                return Err(ColoringError::NegativeWeight(rational::format(w)));
            }
        }
        Ok(())
    }

    /// Every element is covered at least `required[x]`.
    pub fn check_coverage(&self, g: &Graph, required: &[Rational]) -> Result<(), ColoringError> {
        for (i, (c, r)) in self.coverage(g).iter().zip(required).enumerate() {
            if c < r {
                return Err(ColoringError::Coverage {
                    element: TotalElement::from_index(g, i).label(g),
                    found: rational::format(c),
                    required: rational::format(r),
                });
            }
        }
        Ok(())
    }

    pub fn to_doc(&self, g: &Graph) -> Vec<WeightedEntryDoc> {
        self.entries
            .iter()
            .map(|(s, w)| WeightedEntryDoc {
                set: s.labels(g),
                weight: w.clone(),
            })
            .collect()
    }

    pub fn from_doc(g: &Graph, doc: &[WeightedEntryDoc]) -> Result<Self, ColoringError> {
        let entries = doc
            .iter()
            .map(|e| Ok((TotalIndependentSet::parse(g, &e.set)?, e.weight.clone())))
            .collect::<Result<Vec<_>, ColoringError>>()?;
        let w = Self::new(entries);
        w.check(g)?;
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedEntryDoc {
    pub set: Vec<String>,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

/// Rescales a weighted `α`-coloring (mass 1, coverage `≥ α`) into a
/// fractional `1/α`-coloring (coverage `≥ 1`).
pub fn weighted_to_fractional(
    g: &Graph,
    w: &WeightedColoring,
    alpha: &Rational,
) -> Result<WeightedColoring, ColoringError> {
    if !alpha.is_positive() {
        return Err(ColoringError::NonPositiveAlpha(rational::format(alpha)));
    }
    w.check(g)?;
    let total = w.total();
    if !total.is_one() {
        return Err(ColoringError::Mass {
            expected: "1/1".into(),
            found: rational::format(&total),
        });
    }
    w.check_coverage(g, &vec![alpha.clone(); total::element_count(g)])?;
    Ok(w.scaled(&alpha.recip()))
}

/// Inverse of [`weighted_to_fractional`]: scales mass `k` down to 1.
pub fn fractional_to_weighted(w: &WeightedColoring) -> Result<(WeightedColoring, Rational), ColoringError> {
    let k = w.total();
    if !k.is_positive() {
        return Err(ColoringError::Mass {
            expected: "positive".into(),
            found: rational::format(&k),
        });
    }
    Ok((w.scaled(&k.recip()), k.recip()))
}

/// Color sets `c(x) ⊆ [0, ambient)` for every total element, indexed by
/// element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalColoring {
    pub ambient: Rational,
    pub colors: Vec<IntervalSet>,
}

impl IntervalColoring {
    pub fn color(&self, g: &Graph, x: TotalElement) -> &IntervalSet {
        &self.colors[x.index(g)]
    }

    pub fn to_doc(&self, g: &Graph) -> IntervalColoringDoc {
        IntervalColoringDoc {
            ambient: self.ambient.clone(),
            colors: self
                .colors
                .iter()
                .enumerate()
                .map(|(i, set)| ColorEntryDoc {
                    element: TotalElement::from_index(g, i).label(g),
                    set: set.clone(),
                })
                .collect(),
        }
    }

    /// Every element must appear exactly once.
    pub fn from_doc(g: &Graph, doc: &IntervalColoringDoc) -> Result<Self, ColoringError> {
        let size = total::element_count(g);
        let mut colors: Vec<Option<IntervalSet>> = vec![None; size];
        for entry in &doc.colors {
            let i = TotalElement::parse(g, &entry.element)?.index(g);
            if colors[i].replace(entry.set.clone()).is_some() {
                return Err(ColoringError::Malformed(format!("{} listed twice", entry.element)));
            }
        }
        let found = colors.iter().filter(|c| c.is_some()).count();
        if found != size {
            return Err(ColoringError::Size { expected: size, found });
        }
        Ok(Self {
            ambient: doc.ambient.clone(),
            colors: colors.into_iter().map(Option::unwrap).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalColoringDoc {
    #[serde(with = "rational::serde_str")]
    pub ambient: Rational,
    pub colors: Vec<ColorEntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorEntryDoc {
    pub element: String,
    pub set: IntervalSet,
}

/// Stacks the support sets as consecutive intervals of length `w(I)`,
/// in set order, starting at 0.
pub fn weights_to_interval_assignment(
    g: &Graph,
    w: &WeightedColoring,
    ambient: &Rational,
) -> Result<IntervalColoring, ColoringError> {
    w.check(g)?;
    let total = w.total();
    if &total > ambient {
        return Err(ColoringError::Mass {
            expected: format!("at most {}", rational::format(ambient)),
            found: rational::format(&total),
        });
    }
    w.check_coverage(g, &vec![Rational::one(); total::element_count(g)])?;
    let mut parts: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); total::element_count(g)];
    let mut at = Rational::zero();
    for (s, weight) in w.entries() {
        let end = &at + weight;
        for i in s.indices(g) {
            parts[i].push((at.clone(), end.clone()));
        }
        at = end;
    }
    Ok(IntervalColoring {
        ambient: ambient.clone(),
        colors: parts.into_iter().map(IntervalSet::from_intervals).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Measure {
        element: TotalElement,
        measure: Rational,
    },
    Overlap {
        a: TotalElement,
        b: TotalElement,
        common: IntervalSet,
    },
    OutOfAmbient {
        element: TotalElement,
    },
    Size {
        expected: usize,
        found: usize,
    },
}

impl Violation {
    pub fn describe(&self, g: &Graph) -> String {
        match self {
            Violation::Measure { element, measure } => {
                format!("{}: measure {} < 1", element.label(g), rational::format(measure))
            }
            Violation::Overlap { a, b, common } => {
                format!("({}, {}): intersection {}", a.label(g), b.label(g), common)
            }
            Violation::OutOfAmbient { element } => {
                format!("{}: not inside the ambient interval", element.label(g))
            }
            Violation::Size { expected, found } => {
                format!("coloring has {found} color sets, expected {expected}")
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Exact check of measure `≥ 1`, containment in `[0, k)` and disjointness
/// along every edge of `T(G)`. Returns every violation found.
pub fn verify_interval_coloring(g: &Graph, c: &IntervalColoring) -> Result<(), Vec<Violation>> {
    let size = total::element_count(g);
    if c.colors.len() != size {
        return Err(vec![Violation::Size {
            expected: size,
            found: c.colors.len(),
        }]);
    }
    let mut out = Vec::new();
    let zero = Rational::zero();
    for (i, set) in c.colors.iter().enumerate() {
        let element = TotalElement::from_index(g, i);
        let m = set.measure();
        if m < Rational::one() {
            out.push(Violation::Measure { element, measure: m });
        }
        if !set.within(&zero, &c.ambient) {
            out.push(Violation::OutOfAmbient { element });
        }
    }
    let adj = total::TotalAdjacency::new(g);
    for a in 0..size {
        for b in adj.closed(a).ones().filter(|&b| b > a) {
            let common = c.colors[a].intersect(&c.colors[b]);
            if !common.is_empty() {
                out.push(Violation::Overlap {
                    a: TotalElement::from_index(g, a),
                    b: TotalElement::from_index(g, b),
                    common,
                });
            }
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
    use crate::rational::{int, ratio};

    fn k2_singletons(weight: Rational) -> WeightedColoring {
        let g = fixtures::complete(2);
        WeightedColoring::new(
            total::elements(&g).map(|x| (TotalIndependentSet::new_unchecked(vec![x]), weight.clone())),
        )
    }

    #[test]
    fn weighted_to_fractional_examples() {
        let g = fixtures::complete(2);
        let w = k2_singletons(ratio(1, 3));
        let f = weighted_to_fractional(&g, &w, &ratio(1, 3)).unwrap();
        assert_eq!(f.total(), int(3));
        assert!(f.coverage(&g).iter().all(|c| *c == int(1)));
        let (back, alpha) = fractional_to_weighted(&f).unwrap();
        assert_eq!(back, w);
        assert_eq!(alpha, ratio(1, 3));
        assert!(weighted_to_fractional(&g, &w, &ratio(1, 2)).is_err());
        assert!(weighted_to_fractional(&g, &w, &int(0)).is_err());

        // alpha = 1 leaves a covering distribution unchanged
        let one = WeightedColoring::new([(
            TotalIndependentSet::new_unchecked(total::elements(&fixtures::path(1)).collect()),
            int(1),
        )]);
        assert_eq!(weighted_to_fractional(&fixtures::path(1), &one, &int(1)).unwrap(), one);
    }

    #[test]
    fn stacking_examples() {
        let g = fixtures::complete(2);
        let c = weights_to_interval_assignment(&g, &k2_singletons(int(1)), &int(3)).unwrap();
        let expect: Vec<IntervalSet> = (0..3).map(|i| IntervalSet::interval(int(i), int(i + 1))).collect();
        assert_eq!(c.colors, expect);
        assert!(verify_interval_coloring(&g, &c).is_ok());

        // single set of weight 1: every member gets [0, 1)
        let h = fixtures::path(1);
        let w = WeightedColoring::new([(TotalIndependentSet::new_unchecked(vec![TotalElement::Vertex(0)]), int(1))]);
        let c = weights_to_interval_assignment(&h, &w, &int(1)).unwrap();
        assert_eq!(c.colors, vec![IntervalSet::interval(int(0), int(1))]);
    }

    #[test]
    fn verifier_reports_each_violation() {
        let g = fixtures::complete(2);
        let good = weights_to_interval_assignment(&g, &k2_singletons(int(1)), &int(3)).unwrap();

        let mut shrunk = good.clone();
        shrunk.colors[0] = IntervalSet::interval(int(0), ratio(1, 2));
        let v = verify_interval_coloring(&g, &shrunk).unwrap_err();
        assert_eq!(
            v,
            vec![Violation::Measure {
                element: TotalElement::Vertex(0),
                measure: ratio(1, 2)
            }]
        );

        let mut clash = good.clone();
        clash.colors[2] = clash.colors[0].clone();
        let v = verify_interval_coloring(&g, &clash).unwrap_err();
        assert!(v.iter().any(|x| matches!(
            x,
            Violation::Overlap { a: TotalElement::Vertex(0), b: TotalElement::Edge(0), .. }
        )));

        let mut narrow = good.clone();
        narrow.ambient = int(2);
        let v = verify_interval_coloring(&g, &narrow).unwrap_err();
        assert_eq!(v, vec![Violation::OutOfAmbient { element: TotalElement::Edge(0) }]);
    }

    #[test]
    fn documents_round_trip() {
        let g = fixtures::complete(2);
        let w = k2_singletons(ratio(1, 3));
        let doc = serde_json::to_string(&w.to_doc(&g)).unwrap();
        let parsed: Vec<WeightedEntryDoc> = serde_json::from_str(&doc).unwrap();
        assert_eq!(WeightedColoring::from_doc(&g, &parsed).unwrap(), w);

        let c = weights_to_interval_assignment(&g, &k2_singletons(int(1)), &int(3)).unwrap();
        let text = serde_json::to_string(&c.to_doc(&g)).unwrap();
        let back: IntervalColoringDoc = serde_json::from_str(&text).unwrap();
        let c2 = IntervalColoring::from_doc(&g, &back).unwrap();
        assert_eq!(c2, c);
        assert_eq!(serde_json::to_string(&c2.to_doc(&g)).unwrap(), text);
        assert!(text.contains(r#""element":"e:0-1""#));
    }
}
