//! Finite unions of half-open intervals `[a, b)` with endpoints in `ℚ·π`.
//!
//! A [`PiSet`] is always held in canonical form: intervals sorted, pairwise
//! disjoint, and with touching neighbours merged. Two sets agree up to a null
//! set exactly when their canonical interval lists are identical, so `==` on
//! `PiSet` is set equality mod null sets.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pi::PiRational;

/// The half-open interval `[a, b)`, `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    a: PiRational,
    b: PiRational,
}

impl Interval {
    pub fn new(a: PiRational, b: PiRational) -> Result<Self> {
        if a >= b {
            return Err(Error::EmptyInterval {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        Ok(Interval { a, b })
    }

    /// `[a·π, b·π)` from small integer fractions; panics on an empty interval.
    pub fn pi(a: (i64, i64), b: (i64, i64)) -> Self {
        Interval::new(PiRational::new(a.0, a.1), PiRational::new(b.0, b.1)).expect("non-empty interval")
    }

    /// `[a, b)` if non-empty, `None` otherwise.
    pub fn nonempty(a: PiRational, b: PiRational) -> Option<Self> {
        (a < b).then_some(Interval { a, b })
    }

    pub(crate) fn from_coeffs(a: BigRational, b: BigRational) -> Option<Self> {
        Interval::nonempty(PiRational::from_coeff(a), PiRational::from_coeff(b))
    }

    pub fn a(&self) -> &PiRational {
        &self.a
    }

    pub fn b(&self) -> &PiRational {
        &self.b
    }

    pub fn length(&self) -> PiRational {
        &self.b - &self.a
    }

    pub fn contains(&self, s: &PiRational) -> bool {
        &self.a <= s && s < &self.b
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let a = (&self.a).max(&other.a).clone();
        let b = (&self.b).min(&other.b).clone();
        Interval::nonempty(a, b)
    }

    pub fn mul_pow2(&self, n: i64) -> Interval {
        Interval {
            a: self.a.mul_pow2(n),
            b: self.b.mul_pow2(n),
        }
    }

    /// Multiply by a positive rational factor.
    pub fn scale(&self, factor: &BigRational) -> Interval {
        debug_assert!(factor > &BigRational::zero());
        Interval {
            a: self.a.scale(factor),
            b: self.b.scale(factor),
        }
    }

    pub fn add_two_pi(&self, k: i64) -> Interval {
        Interval {
            a: self.a.add_two_pi(k),
            b: self.b.add_two_pi(k),
        }
    }

    pub fn add_two_pi_rational(&self, shift: &BigRational) -> Interval {
        Interval {
            a: self.a.add_two_pi_rational(shift),
            b: self.b.add_two_pi_rational(shift),
        }
    }

    /// Whether the closure of the interval meets 0.
    pub fn touches_zero(&self) -> bool {
        !self.a.is_positive() && !self.b.is_negative()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.a, self.b)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: PiRational,
            b: PiRational,
        }
        let raw = Raw::deserialize(d)?;
        Interval::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

/// `(p, q)` standing for `pπ/q`.
pub type PiFraction = (i64, i64);

/// A canonical finite union of half-open intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiSet {
    intervals: Vec<Interval>,
}

impl PiSet {
    pub fn empty() -> Self {
        PiSet::default()
    }

    /// Canonical form of an arbitrary (overlapping, unsorted) interval list.
    pub fn normalize(raw: Vec<Interval>) -> PiSet {
        let mut raw = raw;
        raw.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match out.last_mut() {
                Some(last) if iv.a <= last.b => {
                    if iv.b > last.b {
                        last.b = iv.b;
                    }
                }
                _ => out.push(iv),
            }
        }
        PiSet { intervals: out }
    }

    /// Like [`PiSet::normalize`] but validates raw `(a, b)` pairs first.
    pub fn from_pairs(pairs: Vec<(PiRational, PiRational)>) -> Result<PiSet> {
        let ivs = pairs
            .into_iter()
            .map(|(a, b)| Interval::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PiSet::normalize(ivs))
    }

    /// Shorthand for tests and constructors: each pair is `((p, q), (r, s))`
    /// meaning `[pπ/q, rπ/s)`.
    pub fn pi(pairs: &[(PiFraction, PiFraction)]) -> PiSet {
        PiSet::normalize(pairs.iter().map(|&(a, b)| Interval::pi(a, b)).collect())
    }

    pub fn interval(iv: Interval) -> PiSet {
        PiSet { intervals: vec![iv] }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn measure(&self) -> PiRational {
        PiRational::from_coeff(
            self.intervals
                .iter()
                .fold(BigRational::zero(), |acc, iv| acc + (iv.b.coeff() - iv.a.coeff())),
        )
    }

    pub fn contains(&self, s: &PiRational) -> bool {
        // intervals are sorted; the candidate is the last one starting at or before s
        let idx = self.intervals.partition_point(|iv| &iv.a <= s);
        idx > 0 && self.intervals[idx - 1].contains(s)
    }

    pub fn min(&self) -> Option<&PiRational> {
        self.intervals.first().map(|iv| &iv.a)
    }

    pub fn max(&self) -> Option<&PiRational> {
        self.intervals.last().map(|iv| &iv.b)
    }

    /// `2^n·E`.
    pub fn dilate(&self, n: i64) -> PiSet {
        // positive scaling keeps order and disjointness
        PiSet {
            intervals: self.intervals.iter().map(|iv| iv.mul_pow2(n)).collect(),
        }
    }

    /// `d·E` for a rational `d > 0`.
    pub fn scale(&self, factor: &BigRational) -> PiSet {
        PiSet {
            intervals: self.intervals.iter().map(|iv| iv.scale(factor)).collect(),
        }
    }

    /// `E + 2πk`.
    pub fn translate(&self, k: i64) -> PiSet {
        PiSet {
            intervals: self.intervals.iter().map(|iv| iv.add_two_pi(k)).collect(),
        }
    }

    pub fn union(&self, other: &PiSet) -> PiSet {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        PiSet::normalize(all)
    }

    pub fn intersect(&self, other: &PiSet) -> PiSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let x = &self.intervals[i];
            let y = &other.intervals[j];
            if let Some(iv) = x.intersect(y) {
                out.push(iv);
            }
            if x.b < y.b {
                i += 1;
            } else {
                j += 1;
            }
        }
        // pieces of sorted disjoint inputs come out sorted and disjoint; merge touching ones
        PiSet::normalize(out)
    }

    pub fn subtract(&self, other: &PiSet) -> PiSet {
        let mut out = Vec::new();
        let mut j = 0;
        for x in &self.intervals {
            let mut cursor = x.a.clone();
            while j < other.intervals.len() && other.intervals[j].b <= x.a {
                j += 1;
            }
            let mut k = j;
            while k < other.intervals.len() && other.intervals[k].a < x.b {
                let y = &other.intervals[k];
                if let Some(iv) = Interval::nonempty(cursor.clone(), y.a.clone()) {
                    out.push(iv);
                }
                if y.b > cursor {
                    cursor = y.b.clone();
                }
                k += 1;
            }
            if let Some(iv) = Interval::nonempty(cursor, x.b.clone()) {
                out.push(iv);
            }
        }
        PiSet::normalize(out)
    }

    pub fn symmetric_difference(&self, other: &PiSet) -> PiSet {
        self.subtract(other).union(&other.subtract(self))
    }

    pub fn is_subset_of(&self, other: &PiSet) -> bool {
        self.subtract(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &PiSet) -> bool {
        self.intersect(other).is_empty()
    }
}

impl fmt::Display for PiSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PiSetRepr {
    unit: String,
    intervals: Vec<Interval>,
}

impl Serialize for PiSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PiSetRepr {
            unit: "pi".into(),
            intervals: self.intervals.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PiSetRepr::deserialize(d)?;
        if repr.unit != "pi" {
            return Err(serde::de::Error::custom(format!(
                "unsupported unit {:?}, expected \"pi\"",
                repr.unit
            )));
        }
        Ok(PiSet::normalize(repr.intervals))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn journe() -> Vec<Interval> {
        vec![
            Interval::pi((4, 7), (1, 1)),
            Interval::pi((-32, 7), (-4, 1)),
            Interval::pi((4, 1), (32, 7)),
            Interval::pi((-1, 1), (-4, 7)),
        ]
    }

    #[test]
    fn merges_adjacent_and_overlapping() {
        let s = PiSet::normalize(vec![Interval::pi((1, 1), (2, 1)), Interval::pi((2, 1), (3, 1))]);
        assert_eq!(s.intervals(), &[Interval::pi((1, 1), (3, 1))]);
        let s = PiSet::normalize(vec![Interval::pi((1, 1), (3, 1)), Interval::pi((2, 1), (4, 1))]);
        assert_eq!(s.intervals(), &[Interval::pi((1, 1), (4, 1))]);
    }

    #[test]
    fn journe_sorted_not_merged() {
        let s = PiSet::normalize(journe());
        assert_eq!(
            s.intervals(),
            &[
                Interval::pi((-32, 7), (-4, 1)),
                Interval::pi((-1, 1), (-4, 7)),
                Interval::pi((4, 7), (1, 1)),
                Interval::pi((4, 1), (32, 7)),
            ]
        );
        assert_eq!(s.measure(), PiRational::integer(2));
    }

    #[test]
    fn rejects_empty_interval() {
        assert!(Interval::new(PiRational::integer(1), PiRational::integer(1)).is_err());
        assert!(PiSet::from_pairs(vec![(PiRational::integer(2), PiRational::integer(1))]).is_err());
    }

    #[test]
    fn measure_examples() {
        let lp = PiSet::pi(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1))]);
        assert_eq!(lp.measure(), PiRational::integer(2));
        assert_eq!(PiSet::empty().measure(), PiRational::zero());
    }

    #[test]
    fn dilate_translate_examples() {
        let s = PiSet::pi(&[((1, 1), (2, 1))]);
        assert_eq!(s.dilate(1), PiSet::pi(&[((2, 1), (4, 1))]));
        assert_eq!(s.dilate(0), s);
        assert_eq!(s.translate(-1), PiSet::pi(&[((-1, 1), (0, 1))]));
        let n = PiSet::pi(&[((-2, 1), (-1, 1))]);
        assert_eq!(n.dilate(-1), PiSet::pi(&[((-1, 1), (-1, 2))]));
        assert_eq!(n.translate(1), PiSet::pi(&[((0, 1), (1, 1))]));
        assert_eq!(n.translate(0), n);
    }

    #[test]
    fn boolean_algebra() {
        let a = PiSet::pi(&[((0, 1), (2, 1))]);
        let b = PiSet::pi(&[((1, 1), (3, 1))]);
        assert_eq!(a.intersect(&b), PiSet::pi(&[((1, 1), (2, 1))]));
        assert_eq!(a.union(&PiSet::empty()), a);
        assert_eq!(a.subtract(&b), PiSet::pi(&[((0, 1), (1, 1))]));
        let holes = PiSet::pi(&[((0, 1), (10, 1))]).subtract(&PiSet::pi(&[
            ((1, 1), (2, 1)),
            ((3, 1), (4, 1)),
            ((9, 1), (12, 1)),
        ]));
        assert_eq!(
            holes,
            PiSet::pi(&[((0, 1), (1, 1)), ((2, 1), (3, 1)), ((4, 1), (9, 1))])
        );
    }

    #[test]
    fn contains_is_half_open() {
        let s = PiSet::pi(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1))]);
        assert!(s.contains(&PiRational::integer(1)));
        assert!(!s.contains(&PiRational::integer(2)));
        assert!(s.contains(&PiRational::integer(-2)));
        assert!(!s.contains(&PiRational::integer(-1)));
        assert!(!s.contains(&PiRational::zero()));
    }

    #[test]
    fn json_roundtrip_and_noncanonical_ingest() {
        let js = r#"{"unit":"pi","intervals":[{"a":{"num":2,"den":1},"b":{"num":3,"den":1}},{"a":{"num":1,"den":1},"b":{"num":2,"den":1}}]}"#;
        let s: PiSet = serde_json::from_str(js).unwrap();
        assert_eq!(s, PiSet::pi(&[((1, 1), (3, 1))]));
        let out = serde_json::to_string(&s).unwrap();
        assert_eq!(
            out,
            r#"{"unit":"pi","intervals":[{"a":{"num":1,"den":1},"b":{"num":3,"den":1}}]}"#
        );
        let bad = r#"{"unit":"pi","intervals":[{"a":{"num":2,"den":1},"b":{"num":1,"den":1}}]}"#;
        assert!(serde_json::from_str::<PiSet>(bad).is_err());
        let bad_unit = r#"{"unit":"deg","intervals":[]}"#;
        assert!(serde_json::from_str::<PiSet>(bad_unit).is_err());
    }
}
