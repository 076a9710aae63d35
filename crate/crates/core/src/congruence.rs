//! Translation (mod 2π) and dilation (mod `d`) congruence, and the
//! wavelet-set decision built from them.
//!
//! Both congruences are decided the same way. Each set is folded onto a
//! fundamental domain of the acting group: `[0, 2π)` for translations by
//! `2πℤ`, and `[-dπ, -π) ∪ [π, dπ)` for dilations by powers of `d`. Every
//! folded piece remembers its group index (`k` or `n`). A measurable
//! bijection by group elements exists exactly when, on every elementary cell
//! of the common refinement of both folds, the two sets have the same
//! multiplicity. Pairing the indices cell by cell gives the witness, which is
//! then compacted by merging neighbouring pieces with equal index offsets.
//!
//! Everything is exact; no tolerance appears in this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::pi::{floor_log, pow_rational, PiRational};
use crate::set::{Interval, PiSet};

/// Piece of `E` together with the integer `k` such that `piece + 2πk` lies
/// in the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftPiece {
    pub piece: Interval,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationWitness {
    pub pieces: Vec<ShiftPiece>,
}

/// Piece of `G` together with the exponent `n` such that `d^n·piece` lies in
/// the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentPiece {
    pub piece: Interval,
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilationWitness {
    #[serde(with = "crate::pi::exact")]
    pub factor: BigRational,
    pub pieces: Vec<ExponentPiece>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    NotTranslationCongruent,
    NotDilationCongruent,
    WrongMeasure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletVerdict {
    pub is_wavelet_set: bool,
    pub translation: Option<TranslationWitness>,
    pub dilation: Option<DilationWitness>,
    pub failure_reason: Option<FailureReason>,
}

impl TranslationWitness {
    /// `⋃ (piece + 2πk)`, normalized.
    pub fn image(&self) -> PiSet {
        PiSet::normalize(self.pieces.iter().map(|p| p.piece.add_two_pi(p.shift)).collect())
    }

    pub fn domain(&self) -> PiSet {
        PiSet::normalize(self.pieces.iter().map(|p| p.piece.clone()).collect())
    }

    /// Re-checks the witness against `source` and `target` exactly.
    pub fn verify(&self, source: &PiSet, target: &PiSet) -> bool {
        let pieces: Vec<Interval> = self.pieces.iter().map(|p| p.piece.clone()).collect();
        let images: Vec<Interval> = self.pieces.iter().map(|p| p.piece.add_two_pi(p.shift)).collect();
        tiles(&pieces, source) && tiles(&images, target)
    }
}

impl DilationWitness {
    pub fn image(&self) -> PiSet {
        PiSet::normalize(
            self.pieces
                .iter()
                .map(|p| p.piece.scale(&pow_rational(&self.factor, p.exponent)))
                .collect(),
        )
    }

    pub fn domain(&self) -> PiSet {
        PiSet::normalize(self.pieces.iter().map(|p| p.piece.clone()).collect())
    }

    pub fn verify(&self, source: &PiSet, target: &PiSet) -> bool {
        let pieces: Vec<Interval> = self.pieces.iter().map(|p| p.piece.clone()).collect();
        let images: Vec<Interval> = self
            .pieces
            .iter()
            .map(|p| p.piece.scale(&pow_rational(&self.factor, p.exponent)))
            .collect();
        tiles(&pieces, source) && tiles(&images, target)
    }
}

/// Whether `pieces` are pairwise disjoint with union exactly `set`.
pub(crate) fn tiles(pieces: &[Interval], set: &PiSet) -> bool {
    let total = pieces
        .iter()
        .fold(BigRational::zero(), |acc, iv| acc + iv.length().into_coeff());
    PiSet::normalize(pieces.to_vec()) == *set && &total == set.measure().coeff()
}

/// A folded piece: residue interval `[lo, hi)` (π-coefficients) on the
/// fundamental domain plus its group index.
#[derive(Clone, Debug)]
struct Folded {
    lo: BigRational,
    hi: BigRational,
    index: i64,
}

trait Action {
    /// Folds `[a, b)`; `None` if it needs infinitely many pieces.
    fn fold(&self, a: &BigRational, b: &BigRational, out: &mut Vec<Folded>) -> Option<()>;
    /// Maps a residue interval back to the copy with the given index.
    fn unfold(&self, lo: &BigRational, hi: &BigRational, index: i64) -> Interval;
}

struct Translation;

impl Action for Translation {
    fn fold(&self, a: &BigRational, b: &BigRational, out: &mut Vec<Folded>) -> Option<()> {
        let two = BigRational::from_integer(2.into());
        let mut k = (a / &two).floor();
        loop {
            let base = &k * &two;
            if &base >= b {
                break;
            }
            let lo = a.max(&base).clone() - &base;
            let hi = b.min(&(&base + &two)).clone() - &base;
            if lo < hi {
                out.push(Folded {
                    lo,
                    hi,
                    index: to_i64(k.numer()),
                });
            }
            k += BigRational::one();
        }
        Some(())
    }

    fn unfold(&self, lo: &BigRational, hi: &BigRational, index: i64) -> Interval {
        let off = BigRational::from_integer(BigInt::from(2 * index));
        Interval::from_coeffs(lo + &off, hi + &off).expect("non-empty residue")
    }
}

struct Dilation {
    d: BigRational,
}

impl Action for Dilation {
    fn fold(&self, a: &BigRational, b: &BigRational, out: &mut Vec<Folded>) -> Option<()> {
        let d = &self.d;
        if !a.is_positive() && !b.is_negative() {
            // closure meets 0: infinitely many dyadic copies
            return None;
        }
        if a.is_positive() {
            let mut m = floor_log(a, d);
            let mut dm = pow_rational(d, m);
            while &dm < b {
                let next = &dm * d;
                let lo = a.max(&dm).clone() / &dm;
                let hi = b.min(&next).clone() / &dm;
                if lo < hi {
                    out.push(Folded { lo, hi, index: m });
                }
                m += 1;
                dm = next;
            }
        } else {
            // block m is [-d^{m+1}, -d^m); start with the block holding a
            let mut m = floor_log(&(-a), d);
            if pow_rational(d, m) == -a.clone() {
                m -= 1;
            }
            let mut dm = pow_rational(d, m);
            loop {
                let left = -(&dm * d);
                if &left >= b {
                    break;
                }
                let right = -dm.clone();
                let lo = a.max(&left).clone() / &dm;
                let hi = b.min(&right).clone() / &dm;
                if lo < hi {
                    out.push(Folded { lo, hi, index: m });
                }
                m -= 1;
                dm /= d;
            }
        }
        Some(())
    }

    fn unfold(&self, lo: &BigRational, hi: &BigRational, index: i64) -> Interval {
        let scale = pow_rational(&self.d, index);
        Interval::from_coeffs(lo * &scale, hi * &scale).expect("non-empty residue")
    }
}

fn to_i64(v: &BigInt) -> i64 {
    i64::try_from(v).expect("group index fits in i64")
}

fn fold_set(action: &dyn Action, set: &PiSet) -> Option<Vec<Folded>> {
    let mut out = Vec::new();
    for iv in set.intervals() {
        action.fold(iv.a().coeff(), iv.b().coeff(), &mut out)?;
    }
    Some(out)
}

/// Core matcher: `(piece of source, index offset)` pairs, or `None`.
fn match_folds(action: &dyn Action, source: &PiSet, target: &PiSet) -> Option<Vec<(Interval, i64)>> {
    let src = fold_set(action, source)?;
    let tgt = fold_set(action, target)?;

    let mut cuts: Vec<BigRational> = src
        .iter()
        .chain(tgt.iter())
        .flat_map(|f| [f.lo.clone(), f.hi.clone()])
        .collect();
    cuts.sort();
    cuts.dedup();

    let mut raw: Vec<(Interval, i64)> = Vec::new();
    for w in cuts.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        let covering = |list: &[Folded]| -> Vec<i64> {
            let mut ks: Vec<i64> = list
                .iter()
                .filter(|f| &f.lo <= p && q <= &f.hi)
                .map(|f| f.index)
                .collect();
            ks.sort_unstable();
            ks
        };
        let ks = covering(&src);
        let kt = covering(&tgt);
        if ks.len() != kt.len() {
            return None;
        }
        for (s, t) in ks.into_iter().zip(kt) {
            raw.push((action.unfold(p, q, s), t - s));
        }
    }

    raw.sort_by(|x, y| x.0.cmp(&y.0));
    let mut merged: Vec<(Interval, i64)> = Vec::with_capacity(raw.len());
    for (iv, k) in raw {
        if let Some((last, lk)) = merged.last_mut() {
            if *lk == k && last.b() == iv.a() {
                *last = Interval::new(last.a().clone(), iv.b().clone()).expect("merge");
                continue;
            }
        }
        merged.push((iv, k));
    }
    Some(merged)
}

/// Splits `iv` into pieces `2^m·r` with `r` in the Littlewood–Paley set.
///
/// Returns `(r, m)` pairs in increasing order of position, or `None` when the
/// closure of `iv` meets 0.
pub fn dyadic_fold(iv: &Interval) -> Option<Vec<(Interval, i64)>> {
    let action = Dilation {
        d: BigRational::from_integer(2.into()),
    };
    let mut out = Vec::new();
    action.fold(iv.a().coeff(), iv.b().coeff(), &mut out)?;
    Some(
        out.into_iter()
            .map(|f| (Interval::from_coeffs(f.lo, f.hi).expect("non-empty residue"), f.index))
            .collect(),
    )
}

/// Splits `iv` into pieces `r + 2πk` with `r` in `[0, 2π)`.
pub fn translation_fold(iv: &Interval) -> Vec<(Interval, i64)> {
    let mut out = Vec::new();
    Translation.fold(iv.a().coeff(), iv.b().coeff(), &mut out);
    out.into_iter()
        .map(|f| (Interval::from_coeffs(f.lo, f.hi).expect("non-empty residue"), f.index))
        .collect()
}

/// The `2πℤ`-translation witness from `source` to `target`, if one exists.
pub fn translation_congruent(source: &PiSet, target: &PiSet) -> Option<TranslationWitness> {
    if source.measure() != target.measure() {
        return None;
    }
    let pieces = match_folds(&Translation, source, target)?
        .into_iter()
        .map(|(piece, shift)| ShiftPiece { piece, shift })
        .collect();
    let w = TranslationWitness { pieces };
    debug_assert!(w.verify(source, target));
    Some(w)
}

/// The dyadic dilation witness from `source` to `target`, if one exists.
pub fn dilation_congruent(source: &PiSet, target: &PiSet) -> Option<DilationWitness> {
    dilation_congruent_by(source, target, &BigRational::from_integer(2.into()))
}

/// Dilation congruence for a rational factor `d > 1`.
pub fn dilation_congruent_by(source: &PiSet, target: &PiSet, d: &BigRational) -> Option<DilationWitness> {
    assert!(d > &BigRational::one(), "dilation factor must exceed 1");
    let action = Dilation { d: d.clone() };
    let pieces = match_folds(&action, source, target)?
        .into_iter()
        .map(|(piece, exponent)| ExponentPiece { piece, exponent })
        .collect();
    let w = DilationWitness {
        factor: d.clone(),
        pieces,
    };
    debug_assert!(w.verify(source, target));
    Some(w)
}

/// `[0, 2π)`.
pub fn unit_translation_domain() -> PiSet {
    PiSet::pi(&[((0, 1), (2, 1))])
}

/// `[-dπ, -π) ∪ [π, dπ)`; for `d = 2` the Littlewood–Paley set.
pub fn dilation_domain(d: &BigRational) -> PiSet {
    let one = BigRational::one();
    PiSet::normalize(vec![
        Interval::from_coeffs(-d.clone(), -one.clone()).expect("d > 1"),
        Interval::from_coeffs(one, d.clone()).expect("d > 1"),
    ])
}

pub fn littlewood_paley() -> PiSet {
    dilation_domain(&BigRational::from_integer(2.into()))
}

pub fn is_translation_generator(e: &PiSet) -> bool {
    translation_congruent(e, &unit_translation_domain()).is_some()
}

pub fn is_dilation_generator(g: &PiSet) -> bool {
    dilation_congruent(g, &littlewood_paley()).is_some()
}

/// Spectral for `ℤ` in the elementary sense: 2π-translation congruent to `[0, 2π)`.
pub fn is_spectral_for_z(e: &PiSet) -> bool {
    is_translation_generator(e)
}

/// Decides whether `E` is a dyadic wavelet set.
///
/// Criteria are checked in a fixed order: the measure gate, translation
/// congruence to `[0, 2π)`, then dilation congruence to the Littlewood–Paley
/// set. The first failure is reported.
pub fn is_wavelet_set(e: &PiSet) -> WaveletVerdict {
    is_wavelet_set_by(e, &BigRational::from_integer(2.into()))
}

/// Wavelet-set decision for dilation factor `d`.
pub fn is_wavelet_set_by(e: &PiSet, d: &BigRational) -> WaveletVerdict {
    let fail = |reason, translation| WaveletVerdict {
        is_wavelet_set: false,
        translation,
        dilation: None,
        failure_reason: Some(reason),
    };
    if e.measure() != PiRational::integer(2) {
        return fail(FailureReason::WrongMeasure, None);
    }
    let Some(translation) = translation_congruent(e, &unit_translation_domain()) else {
        return fail(FailureReason::NotTranslationCongruent, None);
    };
    let Some(dilation) = dilation_congruent_by(e, &dilation_domain(d), d) else {
        return fail(FailureReason::NotDilationCongruent, Some(translation));
    };
    assert_eq!(
        e.measure(),
        PiRational::integer(2),
        "positive verdict with wrong measure"
    );
    WaveletVerdict {
        is_wavelet_set: true,
        translation: Some(translation),
        dilation: Some(dilation),
        failure_reason: None,
    }
}
