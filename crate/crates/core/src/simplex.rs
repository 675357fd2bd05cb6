//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems have the form `min c·x` subject to rows `a·x (≤|≥|=) b` and
//! `x ≥ 0`. Columns can be appended after a solve and the solver restarted
//! from the current basis.
//!
//! The tableau uses malachite rationals, which keep small values inline;
//! inputs and outputs are converted at the boundary.

use malachite_nz::natural::Natural;
use malachite_q::Rational as Q;
use num_bigint::{BigInt, BigUint, Sign};

use crate::rational::Rational;

const ZERO: Q = Q::const_from_unsigned(0);
const ONE: Q = Q::const_from_unsigned(1);

fn limbs(n: &BigInt) -> (bool, Natural) {
    let (sign, digits) = n.to_u64_digits();
    (sign != Sign::Minus, Natural::from_limbs_asc(&digits))
}

fn to_q(x: &Rational) -> Q {
    let (pos, num) = limbs(x.numer());
    let (_, den) = limbs(x.denom());
    Q::from_sign_and_naturals(pos, num, den)
}

fn big(n: &Natural) -> BigUint {
    let words: Vec<u32> = n
        .to_limbs_asc()
        .into_iter()
        .flat_map(|l| [l as u32, (l >> 32) as u32])
        .collect();
    BigUint::new(words)
}

fn from_q(q: &Q) -> Rational {
    let sign = if *q < ZERO { Sign::Minus } else { Sign::Plus };
    let (num, den) = q.to_numerator_and_denominator();
    Rational::new(BigInt::from_biguint(sign, big(&num)), BigInt::from_biguint(Sign::Plus, big(&den)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("column has {found} entries, expected {expected}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    /// Values of the structural columns, in insertion order.
    pub x: Vec<Rational>,
    /// One multiplier per row; nonnegative for `≥` rows of a minimization.
    pub dual: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Structural,
    Slack,
    Artificial,
}

#[derive(Debug, Clone)]
pub struct Simplex {
    /// `m` rows of the current tableau `B⁻¹A`.
    tab: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    cost: Vec<Q>,
    kind: Vec<Kind>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Column holding `+e_i` in the original matrix, for each row.
    unit: Vec<usize>,
    negated: Vec<bool>,
    structural: Vec<usize>,
}

impl Simplex {
    /// `columns[j]` is the dense column of structural variable `j`.
    pub fn new(
        objective: Vec<Rational>,
        columns: Vec<Vec<Rational>>,
        senses: &[Sense],
        rhs: Vec<Rational>,
    ) -> Result<Self, LpError> {
        let m = rhs.len();
        if senses.len() != m {
            return Err(LpError::Dimension {
                expected: m,
                found: senses.len(),
            });
        }
        if objective.len() != columns.len() {
            return Err(LpError::Dimension {
                expected: columns.len(),
                found: objective.len(),
            });
        }
        let mut s = Simplex {
            tab: vec![Vec::new(); m],
            rhs: Vec::with_capacity(m),
            cost: Vec::new(),
            kind: Vec::new(),
            basis: vec![0; m],
            in_basis: Vec::new(),
            unit: vec![0; m],
            negated: Vec::with_capacity(m),
            structural: Vec::new(),
        };
        let mut senses = senses.to_vec();
        for (i, b) in rhs.iter().enumerate() {
            let b = to_q(b);
            let neg = b < ZERO;
            if neg {
                senses[i] = match senses[i] {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
            s.negated.push(neg);
            s.rhs.push(if neg { -b } else { b });
        }
        for (c, col) in objective.iter().zip(columns) {
            let col = s.oriented(&col)?;
            s.push_column(to_q(c), Kind::Structural, col);
        }
        for (i, &sense) in senses.iter().enumerate() {
            let e = |v: Q| -> Vec<Q> { (0..m).map(|r| if r == i { v.clone() } else { ZERO }).collect() };
            let unit = match sense {
                Sense::Le => s.push_column(ZERO, Kind::Slack, e(ONE)),
                Sense::Ge => {
                    s.push_column(ZERO, Kind::Slack, e(-ONE));
                    s.push_column(ZERO, Kind::Artificial, e(ONE))
                }
                Sense::Eq => s.push_column(ZERO, Kind::Artificial, e(ONE)),
            };
            s.unit[i] = unit;
        }
        s.basis = s.unit.clone();
        for &b in &s.basis {
            s.in_basis[b] = true;
        }
        Ok(s)
    }

    fn oriented(&self, col: &[Rational]) -> Result<Vec<Q>, LpError> {
        if col.len() != self.rhs.len() {
            return Err(LpError::Dimension {
                expected: self.rhs.len(),
                found: col.len(),
            });
        }
        Ok(col
            .iter()
            .zip(&self.negated)
            .map(|(a, &neg)| if neg { -to_q(a) } else { to_q(a) })
            .collect())
    }

    fn push_column(&mut self, cost: Q, kind: Kind, col: Vec<Q>) -> usize {
        let j = self.cost.len();
        for (row, a) in self.tab.iter_mut().zip(col) {
            row.push(a);
        }
        self.cost.push(cost);
        self.kind.push(kind);
        self.in_basis.push(false);
        if kind == Kind::Structural {
            self.structural.push(j);
        }
        j
    }

    pub fn rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn columns(&self) -> usize {
        self.structural.len()
    }

    /// Appends a structural column expressed in the current basis; call
    /// [`Simplex::solve`] again to re-optimize.
    pub fn add_column(&mut self, cost: Rational, col: Vec<Rational>) -> Result<usize, LpError> {
        let a = self.oriented(&col)?;
        let transformed: Vec<Q> = self
            .tab
            .iter()
            .map(|row| {
                let mut acc = ZERO;
                for (&u, ai) in self.unit.iter().zip(&a) {
                    if *ai != ZERO && row[u] != ZERO {
                        acc += &row[u] * ai;
                    }
                }
                acc
            })
            .collect();
        self.push_column(to_q(&cost), Kind::Structural, transformed);
        Ok(self.structural.len() - 1)
    }

    fn reduced_cost(&self, cost: &[Q], j: usize) -> Q {
        let mut d = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b] != ZERO && self.tab[r][j] != ZERO {
                d -= &cost[b] * &self.tab[r][j];
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.tab[r][j].clone();
        if p != ONE {
            for a in self.tab[r].iter_mut() {
                if *a != ZERO {
                    *a /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let prow = std::mem::take(&mut self.tab[r]);
        let nonzero: Vec<usize> = (0..prow.len()).filter(|&k| prow[k] != ZERO).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.tab.len() {
            if i == r || self.tab[i][j] == ZERO {
                continue;
            }
            let f = self.tab[i][j].clone();
            let row = &mut self.tab[i];
            for &k in &nonzero {
                row[k] -= &f * &prow[k];
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.tab[r] = prow;
        self.in_basis[self.basis[r]] = false;
        self.in_basis[j] = true;
        self.basis[r] = j;
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving
    /// variable among ratio ties.
    fn optimize(&mut self, cost: &[Q], allow_artificial: bool) -> Result<(), LpError> {
        loop {
            let entering = (0..self.cost.len())
                .filter(|&j| allow_artificial || self.kind[j] != Kind::Artificial)
                .filter(|&j| !self.in_basis[j])
                .find(|&j| self.reduced_cost(cost, j) < ZERO);
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leave: Option<(Q, usize)> = None;
            for r in 0..self.tab.len() {
                let a = &self.tab[r][j];
                if *a <= ZERO {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((best, br)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    leave = Some((ratio, r));
                }
            }
            let Some((_, r)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, j);
        }
    }

    fn artificial_at_positive_level(&self) -> bool {
        self.basis
            .iter()
            .enumerate()
            .any(|(r, &b)| self.kind[b] == Kind::Artificial && self.rhs[r] != ZERO)
    }

    pub fn solve(&mut self) -> Result<LpSolution, LpError> {
        if self.artificial_at_positive_level() {
            let phase1: Vec<Q> = self
                .kind
                .iter()
                .map(|&k| if k == Kind::Artificial { ONE } else { ZERO })
                .collect();
            self.optimize(&phase1, true)?;
            if self.artificial_at_positive_level() {
                return Err(LpError::Infeasible);
            }
        }
        self.drive_out_artificials();
        let cost = self.cost.clone();
        self.optimize(&cost, false)?;
        Ok(self.solution())
    }

    /// Replaces basic artificials (all at level zero) by real columns where
    /// the row allows it; rows without such an entry are redundant.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.tab.len() {
            if self.kind[self.basis[r]] != Kind::Artificial {
                continue;
            }
            let j = (0..self.cost.len()).find(|&j| {
                self.kind[j] != Kind::Artificial && !self.in_basis[j] && self.tab[r][j] != ZERO
            });
            if let Some(j) = j {
                self.pivot(r, j);
            }
        }
    }

    fn solution(&self) -> LpSolution {
        let mut values = vec![ZERO; self.cost.len()];
        for (r, &b) in self.basis.iter().enumerate() {
            values[b] = self.rhs[r].clone();
        }
        let x: Vec<Rational> = self.structural.iter().map(|&j| from_q(&values[j])).collect();
        let mut value = ZERO;
        for &j in &self.structural {
            value += &self.cost[j] * &values[j];
        }
        let dual = (0..self.rhs.len())
            .map(|i| {
                let mut y = ZERO;
                for (r, &b) in self.basis.iter().enumerate() {
                    if self.cost[b] != ZERO {
                        y += &self.cost[b] * &self.tab[r][self.unit[i]];
                    }
                }
                from_q(&if self.negated[i] { -y } else { y })
            })
            .collect();
        LpSolution {
            value: from_q(&value),
            x,
            dual,
        }
    }
}

/// One-shot solve of `min c·x` subject to the given rows, `x ≥ 0`.
pub fn simplex_solve(
    objective: Vec<Rational>,
    columns: Vec<Vec<Rational>>,
    senses: &[Sense],
    rhs: Vec<Rational>,
) -> Result<LpSolution, LpError> {
    Simplex::new(objective, columns, senses, rhs)?.solve()
}
