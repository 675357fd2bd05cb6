//! Finite unions of half-open rational intervals `[a, b)`.
//!
//! Sets are kept canonical: sorted, pairwise disjoint and never abutting, so
//! structural equality is set equality and disjointness is an exact test.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[a, b)`; empty when `b <= a`.
    pub fn interval(a: Rational, b: Rational) -> Self {
        if b > a {
            Self { parts: vec![(a, b)] }
        } else {
            Self::empty()
        }
    }

    pub fn from_intervals(items: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut v: Vec<_> = items.into_iter().filter(|(a, b)| b > a).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        Self::from_sorted(v)
    }

    fn from_sorted(v: Vec<(Rational, Rational)>) -> Self {
        let mut parts: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match parts.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => parts.push((a, b)),
            }
        }
        Self { parts }
    }

    pub fn parts(&self) -> &[(Rational, Rational)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.parts
            .iter()
            .fold(Rational::zero(), |acc, (a, b)| acc + (b - a))
    }

    pub fn inf(&self) -> Option<&Rational> {
        self.parts.first().map(|p| &p.0)
    }

    pub fn sup(&self) -> Option<&Rational> {
        self.parts.last().map(|p| &p.1)
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let idx = self.parts.partition_point(|(_, b)| b <= t);
        self.parts.get(idx).is_some_and(|(a, _)| a <= t)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.parts.len() + other.parts.len());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() || j < other.parts.len() {
            let take_left = match (self.parts.get(i), other.parts.get(j)) {
                (Some(x), Some(y)) => x.0 <= y.0,
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                v.push(self.parts[i].clone());
                i += 1;
            } else {
                v.push(other.parts[j].clone());
                j += 1;
            }
        }
        Self::from_sorted(v)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a1, b1) = &self.parts[i];
            let (a2, b2) = &other.parts[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        // pieces come out sorted and disjoint; abutting is impossible since
        // each input is canonical
        Self { parts: out }
    }

    pub fn subtract(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let mut j = 0;
        for (a, b) in &self.parts {
            let mut start = a.clone();
            while j < other.parts.len() && &other.parts[j].1 <= a {
                j += 1;
            }
            let mut k = j;
            while k < other.parts.len() && &other.parts[k].0 < b {
                let (c, d) = &other.parts[k];
                if c > &start {
                    out.push((start.clone(), c.clone()));
                }
                if d > &start {
                    start = d.clone();
                }
                k += 1;
            }
            if &start < b {
                out.push((start, b.clone()));
            }
        }
        Self { parts: out }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.subtract(other).is_empty()
    }

    /// Contained in `[lo, hi)`.
    pub fn within(&self, lo: &Rational, hi: &Rational) -> bool {
        self.parts.is_empty() || (self.inf().unwrap() >= lo && self.sup().unwrap() <= hi)
    }

    pub fn translate(&self, by: &Rational) -> Self {
        Self {
            parts: self
                .parts
                .iter()
                .map(|(a, b)| (a + by, b + by))
                .collect(),
        }
    }

    /// Splits into the leftmost part of measure `m` and the rest. Returns
    /// `None` when `m` is negative or exceeds the measure.
    pub fn split_at_measure(&self, m: &Rational) -> Option<(Self, Self)> {
        if m.is_negative() || m > &self.measure() {
            return None;
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut need = m.clone();
        for (a, b) in &self.parts {
            let len = b - a;
            if need.is_zero() {
                right.push((a.clone(), b.clone()));
            } else if len <= need {
                need -= &len;
                left.push((a.clone(), b.clone()));
            } else {
                let cut = a + &need;
                left.push((a.clone(), cut.clone()));
                right.push((cut, b.clone()));
                need = Rational::zero();
            }
        }
        Some((Self { parts: left }, Self { parts: right }))
    }

    /// Leftmost subset of measure `m`, or the whole set if it is smaller.
    pub fn truncate_to_measure(&self, m: &Rational) -> Self {
        match self.split_at_measure(m) {
            Some((left, _)) => left,
            None => self.clone(),
        }
    }

    /// Every endpoint, in order.
    pub fn endpoints(&self) -> impl Iterator<Item = &Rational> {
        self.parts.iter().flat_map(|(a, b)| [a, b])
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("{}");
        }
        for (i, (a, b)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "[{}, {})", rational::format(a), rational::format(b))?;
        }
        Ok(())
    }
}

impl PartialOrd for IntervalSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntervalSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.parts.len()))?;
        for (a, b) in &self.parts {
            seq.serialize_element(&[rational::format(a), rational::format(b)])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<[String; 2]> = Deserialize::deserialize(d)?;
        let mut items = Vec::with_capacity(raw.len());
        for [a, b] in raw {
            let a = rational::parse(&a).map_err(de::Error::custom)?;
            let b = rational::parse(&b).map_err(de::Error::custom)?;
            if b <= a {
                return Err(de::Error::custom("interval with b <= a"));
            }
            items.push((a, b));
        }
        let set = IntervalSet::from_intervals(items.iter().cloned());
        if set.parts != items {
            return Err(de::Error::custom("interval set is not in canonical form"));
        }
        Ok(set)
    }
}

/// Blocks `I_1, ..., I_s` of measure `delta` covering `[0, inner)` (the last
/// one possibly shorter) and the top block `I_0 = [inner, outer)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPartition {
    pub blocks: Vec<IntervalSet>,
    pub top: IntervalSet,
}

impl LevelPartition {
    pub fn s(&self) -> usize {
        self.blocks.len()
    }

    /// `I_k` for `k` in `0..=s`.
    pub fn block(&self, k: usize) -> &IntervalSet {
        if k == 0 {
            &self.top
        } else {
            &self.blocks[k - 1]
        }
    }
}

pub fn build_level_partition(
    inner: &Rational,
    outer: &Rational,
    delta: &Rational,
) -> Option<LevelPartition> {
    if !inner.is_positive() || inner >= outer || !delta.is_positive() {
        return None;
    }
    let s = rational::ceil_to_usize(&(inner / delta));
    let blocks = (1..=s)
        .map(|k| {
            let lo = delta * Rational::from_integer((k as i64 - 1).into());
            let hi = (delta * Rational::from_integer((k as i64).into())).min(inner.clone());
            IntervalSet::interval(lo, hi)
        })
        .collect();
    Some(LevelPartition {
        blocks,
        top: IntervalSet::interval(inner.clone(), outer.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn iv(a: Rational, b: Rational) -> IntervalSet {
        IntervalSet::interval(a, b)
    }

    #[test]
    fn half_open_disjointness() {
        let a = iv(int(0), int(1));
        let b = iv(int(1), int(2));
        assert!(a.intersect(&b).is_empty());
        assert!(a.is_disjoint(&b));
        // abutting pieces merge
        assert_eq!(a.union(&b), iv(int(0), int(2)));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(IntervalSet::empty().measure(), int(0));
        assert_eq!(iv(int(0), int(1)).measure(), int(1));
        let u = iv(int(0), int(1)).union(&iv(int(2), ratio(5, 2)));
        assert_eq!(u.measure(), ratio(3, 2));
        let delta = ratio(1, 7);
        let s = 5;
        let many = IntervalSet::from_intervals(
            (0..s).map(|i| (int(2 * i), int(2 * i) + &delta)),
        );
        assert_eq!(many.measure(), &delta * int(s));
    }

    #[test]
    fn subtract_example() {
        let d = iv(int(0), int(2)).subtract(&iv(ratio(1, 2), int(1)));
        assert_eq!(
            d,
            IntervalSet::from_intervals([(int(0), ratio(1, 2)), (int(1), int(2))])
        );
    }

    #[test]
    fn contains_and_split() {
        let u = IntervalSet::from_intervals([(int(0), int(1)), (int(2), int(3))]);
        assert!(u.contains(&int(0)));
        assert!(!u.contains(&int(1)));
        assert!(u.contains(&ratio(5, 2)));
        let (l, r) = u.split_at_measure(&ratio(3, 2)).unwrap();
        assert_eq!(l, IntervalSet::from_intervals([(int(0), int(1)), (int(2), ratio(5, 2))]));
        assert_eq!(r, iv(ratio(5, 2), int(3)));
        assert!(u.split_at_measure(&int(3)).is_none());
    }

    #[test]
    fn level_partitions() {
        let p = build_level_partition(&int(6), &ratio(13, 2), &int(2)).unwrap();
        assert_eq!(p.s(), 3);
        assert_eq!(p.block(1), &iv(int(0), int(2)));
        assert_eq!(p.block(2), &iv(int(2), int(4)));
        assert_eq!(p.block(3), &iv(int(4), int(6)));
        assert_eq!(p.block(0), &iv(int(6), ratio(13, 2)));

        let p = build_level_partition(&int(5), &int(6), &int(2)).unwrap();
        assert_eq!(p.s(), 3);
        assert_eq!(p.block(3), &iv(int(4), int(5)));

        let p = build_level_partition(&int(5), &int(6), &int(9)).unwrap();
        assert_eq!(p.s(), 1);
        assert_eq!(p.block(1), &iv(int(0), int(5)));

        assert!(build_level_partition(&int(5), &int(5), &int(1)).is_none());
    }

    #[test]
    fn json_round_trip_and_rejects_non_canonical() {
        let u = IntervalSet::from_intervals([(int(0), ratio(1, 3)), (int(2), ratio(7, 3))]);
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, r#"[["0/1","1/3"],["2/1","7/3"]]"#);
        let back: IntervalSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert!(serde_json::from_str::<IntervalSet>(r#"[["0","1"],["1","2"]]"#).is_err());
        assert!(serde_json::from_str::<IntervalSet>(r#"[["1","0"]]"#).is_err());
    }

    pub(crate) fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((0i64..40, 1i64..10, 1i64..6), 0..6).prop_map(|v| {
            IntervalSet::from_intervals(
                v.into_iter()
                    .map(|(a, len, den)| (ratio(a, den), ratio(a, den) + ratio(len, den))),
            )
        })
    }

    /// Membership oracle evaluated on a grid fine enough for the generated
    /// endpoints (denominators divide 60).
    fn grid() -> impl Iterator<Item = Rational> {
        (0..=60 * 50).map(|k| ratio(2 * k + 1, 120))
    }

    proptest! {
        #[test]
        fn canonical_idempotent(a in arb_set()) {
            let again = IntervalSet::from_intervals(a.parts().iter().cloned());
            prop_assert_eq!(&again, &a);
            for w in a.parts().windows(2) {
                prop_assert!(w[0].1 < w[1].0);
            }
        }

        #[test]
        fn inclusion_exclusion(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(
                a.union(&b).measure() + a.intersect(&b).measure(),
                a.measure() + b.measure()
            );
            prop_assert_eq!(a.subtract(&b).measure() + a.intersect(&b).measure(), a.measure());
        }

        #[test]
        fn set_ops_match_membership(a in arb_set(), b in arb_set()) {
            let (u, i, d) = (a.union(&b), a.intersect(&b), a.subtract(&b));
            for t in grid() {
                let (x, y) = (a.contains(&t), b.contains(&t));
                prop_assert_eq!(u.contains(&t), x || y);
                prop_assert_eq!(i.contains(&t), x && y);
                prop_assert_eq!(d.contains(&t), x && !y);
            }
        }
    }
}
