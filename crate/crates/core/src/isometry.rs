//! Measure-preserving piecewise translations of `[0, L)`.

use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::interval::IntervalSet;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsometryError {
    #[error("source pieces do not partition [0, {0})")]
    SourceNotPartition(String),
    #[error("image pieces do not partition [0, {0})")]
    ImageNotPartition(String),
    #[error("pieces overlap")]
    Overlap,
    #[error("set is not contained in the ambient interval [0, {0})")]
    OutOfAmbient(String),
    #[error("measures differ: {0} vs {1}")]
    UnequalMeasure(String, String),
    #[error("ambient lengths differ")]
    AmbientMismatch,
}

/// `[start, end)` translated by `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Rational,
    pub end: Rational,
    pub offset: Rational,
}

impl Piece {
    pub fn new(start: Rational, end: Rational, offset: Rational) -> Self {
        Self { start, end, offset }
    }

    pub fn image_start(&self) -> Rational {
        &self.start + &self.offset
    }

    pub fn image_end(&self) -> Rational {
        &self.end + &self.offset
    }

    fn inverse(&self) -> Piece {
        Piece {
            start: self.image_start(),
            end: self.image_end(),
            offset: -self.offset.clone(),
        }
    }
}

/// Sorts by start and merges contiguous pieces with equal offsets.
fn normalize(mut pieces: Vec<Piece>) -> Vec<Piece> {
    pieces.retain(|p| p.end > p.start);
    pieces.sort_by(|a, b| a.start.cmp(&b.start));
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) if last.end == p.start && last.offset == p.offset => last.end = p.end,
            _ => out.push(p),
        }
    }
    out
}

fn check_disjoint_sorted(mut spans: Vec<(Rational, Rational)>) -> Result<(), IsometryError> {
    spans.sort();
    if spans.windows(2).any(|w| w[0].1 > w[1].0) {
        return Err(IsometryError::Overlap);
    }
    Ok(())
}

/// Image of `set` under the given pieces (only the parts of `set` covered by
/// some piece are mapped).
fn apply_pieces(pieces: &[Piece], set: &IntervalSet) -> IntervalSet {
    let mut out = Vec::new();
    for (a, b) in set.parts() {
        let first = pieces.partition_point(|p| &p.end <= a);
        for p in &pieces[first..] {
            if &p.start >= b {
                break;
            }
            let lo = a.max(&p.start);
            let hi = b.min(&p.end);
            if lo < hi {
                out.push((lo + &p.offset, hi + &p.offset));
            }
        }
    }
    IntervalSet::from_intervals(out)
}

/// Pieces of `pieces` clipped to `set`.
fn restrict_pieces(pieces: &[Piece], set: &IntervalSet) -> Vec<Piece> {
    let mut out = Vec::new();
    for (a, b) in set.parts() {
        let first = pieces.partition_point(|p| &p.end <= a);
        for p in &pieces[first..] {
            if &p.start >= b {
                break;
            }
            let lo = a.max(&p.start);
            let hi = b.min(&p.end);
            if lo < hi {
                out.push(Piece::new(lo.clone(), hi.clone(), p.offset.clone()));
            }
        }
    }
    normalize(out)
}

/// `outer ∘ inner` over the domain of `inner`; parts whose image misses
/// `outer`'s domain are dropped.
fn compose_pieces(outer: &[Piece], inner: &[Piece]) -> Vec<Piece> {
    let mut out = Vec::new();
    for p in inner {
        let (lo_img, hi_img) = (p.image_start(), p.image_end());
        let first = outer.partition_point(|q| q.end <= lo_img);
        for q in &outer[first..] {
            if q.start >= hi_img {
                break;
            }
            let lo = (&lo_img).max(&q.start);
            let hi = (&hi_img).min(&q.end);
            if lo < hi {
                out.push(Piece::new(
                    lo - &p.offset,
                    hi - &p.offset,
                    &p.offset + &q.offset,
                ));
            }
        }
    }
    normalize(out)
}

fn eval_pieces(pieces: &[Piece], t: &Rational) -> Option<Rational> {
    let idx = pieces.partition_point(|p| &p.end <= t);
    pieces
        .get(idx)
        .filter(|p| &p.start <= t)
        .map(|p| t + &p.offset)
}

/// Bijection of `[0, L)` given by finitely many translated pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseIsometry {
    length: Rational,
    pieces: Vec<Piece>,
}

impl PiecewiseIsometry {
    pub fn new(length: Rational, pieces: Vec<Piece>) -> Result<Self, IsometryError> {
        let pieces = normalize(pieces);
        let show = || rational::format(&length);
        let mut at = Rational::zero();
        for p in &pieces {
            if p.start != at {
                return Err(IsometryError::SourceNotPartition(show()));
            }
            at = p.end.clone();
        }
        if at != length && !(pieces.is_empty() && length.is_zero()) {
            return Err(IsometryError::SourceNotPartition(show()));
        }
        let mut images: Vec<_> = pieces.iter().map(|p| (p.image_start(), p.image_end())).collect();
        images.sort();
        let mut at = Rational::zero();
        for (a, b) in images {
            if a != at {
                return Err(IsometryError::ImageNotPartition(show()));
            }
            at = b;
        }
        if at != length {
            return Err(IsometryError::ImageNotPartition(show()));
        }
        Ok(Self { length, pieces })
    }

    pub fn identity(length: Rational) -> Self {
        assert!(length.is_positive());
        Self {
            pieces: vec![Piece::new(Rational::zero(), length.clone(), Rational::zero())],
            length,
        }
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn ambient(&self) -> IntervalSet {
        IntervalSet::interval(Rational::zero(), self.length.clone())
    }

    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        eval_pieces(&self.pieces, t)
    }

    pub fn apply(&self, set: &IntervalSet) -> Result<IntervalSet, IsometryError> {
        if !set.within(&Rational::zero(), &self.length) {
            return Err(IsometryError::OutOfAmbient(rational::format(&self.length)));
        }
        Ok(apply_pieces(&self.pieces, set))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PiecewiseIsometry) -> Result<Self, IsometryError> {
        if self.length != inner.length {
            return Err(IsometryError::AmbientMismatch);
        }
        Ok(Self {
            length: self.length.clone(),
            pieces: compose_pieces(&self.pieces, &inner.pieces),
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            length: self.length.clone(),
            pieces: normalize(self.pieces.iter().map(Piece::inverse).collect()),
        }
    }

    pub fn restrict(&self, set: &IntervalSet) -> Result<PartialIsometry, IsometryError> {
        if !set.within(&Rational::zero(), &self.length) {
            return Err(IsometryError::OutOfAmbient(rational::format(&self.length)));
        }
        Ok(PartialIsometry {
            pieces: restrict_pieces(&self.pieces, set),
        })
    }

    /// Both maps translate every point of `set` by the same amount.
    pub fn agrees_on(&self, other: &PiecewiseIsometry, set: &IntervalSet) -> bool {
        let a = restrict_pieces(&self.pieces, set);
        let b = restrict_pieces(&other.pieces, set);
        a == b
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.iter().all(|p| p.offset.is_zero())
    }

    /// Points of `[0, L)` moved by the map.
    pub fn support(&self) -> IntervalSet {
        IntervalSet::from_intervals(
            self.pieces
                .iter()
                .filter(|p| !p.offset.is_zero())
                .map(|p| (p.start.clone(), p.end.clone())),
        )
    }
}

impl Serialize for PiecewiseIsometry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_pieces(&self.pieces, s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseIsometry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pieces = deserialize_pieces(d)?;
        let length = pieces
            .iter()
            .map(|p| p.end.clone())
            .max()
            .ok_or_else(|| de::Error::custom("isometry without pieces"))?;
        let iso = PiecewiseIsometry::new(length, pieces.clone()).map_err(de::Error::custom)?;
        if iso.pieces != pieces {
            return Err(de::Error::custom("isometry pieces are not in canonical form"));
        }
        Ok(iso)
    }
}

#[derive(Serialize, Deserialize)]
struct RawPiece {
    src: [String; 2],
    offset: String,
}

fn serialize_pieces<S: Serializer>(pieces: &[Piece], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(pieces.len()))?;
    for p in pieces {
        seq.serialize_element(&RawPiece {
            src: [rational::format(&p.start), rational::format(&p.end)],
            offset: rational::format(&p.offset),
        })?;
    }
    seq.end()
}

fn deserialize_pieces<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Piece>, D::Error> {
    let raw: Vec<RawPiece> = Deserialize::deserialize(d)?;
    raw.into_iter()
        .map(|r| {
            let p = |s: &str| rational::parse(s).map_err(de::Error::custom);
            Ok(Piece::new(p(&r.src[0])?, p(&r.src[1])?, p(&r.offset)?))
        })
        .collect()
}

/// Measure-preserving bijection between two interval sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialIsometry {
    pieces: Vec<Piece>,
}

impl PartialIsometry {
    pub fn new(pieces: Vec<Piece>) -> Result<Self, IsometryError> {
        let pieces = normalize(pieces);
        check_disjoint_sorted(pieces.iter().map(|p| (p.start.clone(), p.end.clone())).collect())?;
        check_disjoint_sorted(pieces.iter().map(|p| (p.image_start(), p.image_end())).collect())?;
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.pieces.iter().map(|p| (p.start.clone(), p.end.clone())))
    }

    pub fn image(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.pieces.iter().map(|p| (p.image_start(), p.image_end())))
    }

    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        eval_pieces(&self.pieces, t)
    }

    /// Image of the part of `set` inside the domain.
    pub fn apply(&self, set: &IntervalSet) -> IntervalSet {
        apply_pieces(&self.pieces, set)
    }

    pub fn inverse(&self) -> Self {
        Self {
            pieces: normalize(self.pieces.iter().map(Piece::inverse).collect()),
        }
    }

    /// Restriction of `self ∘ inner` to the points `inner` maps into the
    /// domain of `self`.
    pub fn after(&self, inner: &PartialIsometry) -> PartialIsometry {
        PartialIsometry {
            pieces: compose_pieces(&self.pieces, &inner.pieces),
        }
    }

    pub fn restrict(&self, set: &IntervalSet) -> PartialIsometry {
        PartialIsometry {
            pieces: restrict_pieces(&self.pieces, set),
        }
    }

    pub fn fixes(&self, set: &IntervalSet) -> bool {
        restrict_pieces(&self.pieces, set).iter().all(|p| p.offset.is_zero())
            && set.is_subset(&self.domain())
    }
}

impl Serialize for PartialIsometry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_pieces(&self.pieces, s)
    }
}

impl<'de> Deserialize<'de> for PartialIsometry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PartialIsometry::new(deserialize_pieces(d)?).map_err(de::Error::custom)
    }
}

/// Maps `src` onto `dst` left to right, splitting at the shorter piece.
fn zip(src: &IntervalSet, dst: &IntervalSet) -> Vec<Piece> {
    let mut out = Vec::new();
    let mut di = dst.parts().iter();
    let mut cur_dst = di.next().cloned();
    for (a, b) in src.parts() {
        let mut pos = a.clone();
        while &pos < b {
            let Some((c, d)) = cur_dst.as_mut() else {
                return out;
            };
            let len = (b - &pos).min(&*d - &*c);
            let end = &pos + &len;
            out.push(Piece::new(pos.clone(), end.clone(), &*c - &pos));
            *c += &len;
            if c == d {
                cur_dst = di.next().cloned();
            }
            pos = end;
        }
    }
    out
}

/// Measure-preserving bijection `src -> dst`. With `fix_overlap`, every point
/// of `src ∩ dst` is fixed and the residues `src \ dst`, `dst \ src` are
/// zipped in increasing order.
pub fn matching_isometry(
    src: &IntervalSet,
    dst: &IntervalSet,
    fix_overlap: bool,
) -> Result<PartialIsometry, IsometryError> {
    let (ms, md) = (src.measure(), dst.measure());
    if ms != md {
        return Err(IsometryError::UnequalMeasure(rational::format(&ms), rational::format(&md)));
    }
    let pieces = if fix_overlap {
        let common = src.intersect(dst);
        let mut pieces: Vec<Piece> = common
            .parts()
            .iter()
            .map(|(a, b)| Piece::new(a.clone(), b.clone(), Rational::zero()))
            .collect();
        pieces.extend(zip(&src.subtract(dst), &dst.subtract(src)));
        pieces
    } else {
        zip(src, dst)
    };
    PartialIsometry::new(pieces)
}

/// Post-composes `base` with the swap induced by `sigma: S -> T`: points
/// `base` sends into `S` continue through `sigma`, points sent into `T \ S`
/// go back through `sigma⁻¹`, all others are left as `base` maps them.
///
/// Fails when the swap is not a bijection, i.e. `sigma` does not map
/// `S ∩ T` onto itself.
pub fn extend_swap(
    base: &PiecewiseIsometry,
    sigma: &PartialIsometry,
) -> Result<PiecewiseIsometry, IsometryError> {
    let s = sigma.domain();
    let t = sigma.image();
    let zero = Rational::zero();
    if !s.within(&zero, base.length()) || !t.within(&zero, base.length()) {
        return Err(IsometryError::OutOfAmbient(rational::format(base.length())));
    }
    let mut pieces: Vec<Piece> = sigma.pieces().to_vec();
    pieces.extend(sigma.inverse().restrict(&t.subtract(&s)).pieces().iter().cloned());
    let rest = base.ambient().subtract(&s.union(&t));
    pieces.extend(
        rest.parts()
            .iter()
            .map(|(a, b)| Piece::new(a.clone(), b.clone(), Rational::zero())),
    );
    let swap = PiecewiseIsometry::new(base.length().clone(), pieces)?;
    swap.compose(base)
}
