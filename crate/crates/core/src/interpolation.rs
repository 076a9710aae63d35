//! Interpolation maps between wavelet sets and the algebra around them.
//!
//! For wavelet sets `E` and `F` the interpolation map `σ = σ_E^F` is the
//! 2π-translation congruence `E → F`, extended to all of `ℝ` by
//! 2-homogeneity: `σ(s) = 2^n σ(2^{-n} s)` for `s ∈ 2^n E`, and `σ(0) = 0`.
//! An [`InterpolationMap`] stores only its core pieces on `E`, each with a
//! shift `c` meaning `σ(s) = s + 2πc` there; the homogeneous extension is
//! applied lazily. Shifts of maps built directly from a congruence are
//! integers. Compositions can pick up dyadic rational shifts, because a core
//! piece of one map may land on a rescaled copy of a piece of the next.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::{wavelet_identity_deviation, FrequencySymbol, SymbolPiece};
use crate::congruence::{dyadic_fold, is_wavelet_set, littlewood_paley, tiles, translation_congruent};
use crate::error::{Error, Result};
use crate::pi::{ceil_log, floor_log, pow2, PiRational};
use crate::set::{Interval, PiSet};

/// Default cap on the number of pieces produced by [`compose`].
pub const DEFAULT_PIECE_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapPiece {
    pub piece: Interval,
    /// `σ(s) = s + 2π·shift` on `piece`.
    #[serde(with = "crate::pi::exact")]
    pub shift: BigRational,
}

impl MapPiece {
    pub fn image(&self) -> Interval {
        self.piece.add_two_pi_rational(&self.shift)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolationMap {
    domain_core: PiSet,
    pieces: Vec<MapPiece>,
    target_core: PiSet,
}

impl InterpolationMap {
    pub fn identity(core: &PiSet) -> Self {
        InterpolationMap {
            domain_core: core.clone(),
            pieces: core
                .intervals()
                .iter()
                .map(|iv| MapPiece {
                    piece: iv.clone(),
                    shift: BigRational::zero(),
                })
                .collect(),
            target_core: core.clone(),
        }
    }

    /// Assembles a map without validation; see [`check_measure_preserving`].
    pub fn from_parts(domain_core: PiSet, pieces: Vec<MapPiece>, target_core: PiSet) -> Self {
        InterpolationMap {
            domain_core,
            pieces,
            target_core,
        }
    }

    pub fn domain_core(&self) -> &PiSet {
        &self.domain_core
    }

    pub fn target_core(&self) -> &PiSet {
        &self.target_core
    }

    pub fn pieces(&self) -> &[MapPiece] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.iter().all(|p| p.shift.is_zero())
    }

    /// Whether every shift is an integer multiple of 2π.
    pub fn has_integral_shifts(&self) -> bool {
        self.pieces.iter().all(|p| p.shift.is_integer())
    }

    /// The core piece and exponent `n` with `2^{-n} s` in that piece.
    pub fn locate(&self, s: &PiRational) -> Option<(&MapPiece, i64)> {
        if s.is_zero() {
            return None;
        }
        let two = BigRational::from_integer(2.into());
        self.pieces.iter().find_map(|p| {
            let (a, b) = (p.piece.a(), p.piece.b());
            let n = if s.is_positive() {
                if !a.is_positive() {
                    return None;
                }
                // largest n with 2^n a <= s
                floor_log(&(s.coeff() / a.coeff()), &two)
            } else {
                if !b.is_negative() {
                    return None;
                }
                // smallest n with |s| <= 2^n |a|
                ceil_log(&(s.coeff() / a.coeff()), &two)
            };
            p.piece.contains(&s.mul_pow2(-n)).then_some((p, n))
        })
    }

    /// `σ(s)` via the homogeneous extension.
    pub fn eval(&self, s: &PiRational) -> Result<PiRational> {
        if s.is_zero() {
            return Ok(PiRational::zero());
        }
        let (p, n) = self
            .locate(s)
            .ok_or_else(|| Error::OutsideDilationOrbit(s.to_string()))?;
        Ok(s.add_two_pi_rational(&(&p.shift * pow2(n))))
    }

    /// `σ^{-1}`, with cores swapped.
    pub fn inverse(&self) -> InterpolationMap {
        let pieces = self
            .pieces
            .iter()
            .map(|p| MapPiece {
                piece: p.image(),
                shift: -p.shift.clone(),
            })
            .collect();
        InterpolationMap {
            domain_core: self.target_core.clone(),
            pieces: merge_pieces(pieces),
            target_core: self.domain_core.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Sorts pieces and merges touching neighbours with equal shifts.
fn merge_pieces(mut pieces: Vec<MapPiece>) -> Vec<MapPiece> {
    pieces.sort_by(|x, y| x.piece.cmp(&y.piece));
    let mut out: Vec<MapPiece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if let Some(last) = out.last_mut() {
            if last.shift == p.shift && last.piece.b() == p.piece.a() {
                last.piece = Interval::new(last.piece.a().clone(), p.piece.b().clone()).expect("merge");
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Candidate exponents `n` for which `2^n·q` can meet `target`.
///
/// Both intervals must stay away from 0; `None` when they lie on opposite
/// sides of it.
fn dyadic_overlap_range(target: &Interval, q: &Interval) -> Option<std::ops::RangeInclusive<i64>> {
    let two = BigRational::from_integer(2.into());
    let (t_lo, t_hi, q_lo, q_hi) = if target.a().is_positive() && q.a().is_positive() {
        (target.a(), target.b(), q.a(), q.b())
    } else if target.b().is_negative() || target.b().is_zero() {
        if !(q.b().is_negative() || q.b().is_zero()) {
            return None;
        }
        // magnitudes of [a, b) with b < 0 form (|b|, |a|]
        (target.b(), target.a(), q.b(), q.a())
    } else {
        return None;
    };
    if t_lo.is_zero() || q_lo.is_zero() {
        return None;
    }
    let lo = floor_log(&(t_lo.coeff() / q_hi.coeff()).abs(), &two);
    let hi = ceil_log(&(t_hi.coeff() / q_lo.coeff()).abs(), &two);
    Some(lo..=hi)
}

/// The interpolation map `σ_E^F` of two wavelet sets.
pub fn build_sigma(e: &PiSet, f: &PiSet) -> Result<InterpolationMap> {
    for (name, set) in [("E", e), ("F", f)] {
        let v = is_wavelet_set(set);
        if !v.is_wavelet_set {
            return Err(Error::NotWaveletSet(format!(
                "{name} = {set}: {:?}",
                v.failure_reason.expect("negative verdict carries a reason")
            )));
        }
    }
    let w = translation_congruent(e, f)
        .ok_or_else(|| Error::Postcondition("wavelet sets are not translation congruent".into()))?;
    let pieces = w
        .pieces
        .into_iter()
        .map(|p| MapPiece {
            piece: p.piece,
            shift: BigRational::from_integer(p.shift.into()),
        })
        .collect();
    Ok(InterpolationMap {
        domain_core: e.clone(),
        pieces: merge_pieces(pieces),
        target_core: f.clone(),
    })
}

/// `σ_2 ∘ σ_1` with domain core `σ_1`'s domain core.
pub fn compose(m2: &InterpolationMap, m1: &InterpolationMap) -> Result<InterpolationMap> {
    compose_with_cap(m2, m1, DEFAULT_PIECE_CAP)
}

pub fn compose_with_cap(m2: &InterpolationMap, m1: &InterpolationMap, cap: usize) -> Result<InterpolationMap> {
    let mut out: Vec<MapPiece> = Vec::new();
    for p in &m1.pieces {
        let image = p.image();
        if image.touches_zero() {
            return Err(Error::OutsideDilationOrbit(image.to_string()));
        }
        let mut covered = BigRational::zero();
        for q in &m2.pieces {
            for n in dyadic_overlap_range(&image, &q.piece).into_iter().flatten() {
                let Some(sub) = image.intersect(&q.piece.mul_pow2(n)) else {
                    continue;
                };
                covered += sub.length().into_coeff();
                out.push(MapPiece {
                    piece: sub.add_two_pi_rational(&-p.shift.clone()),
                    shift: &p.shift + &q.shift * pow2(n),
                });
                if out.len() > cap {
                    return Err(Error::PieceCapExceeded { cap });
                }
            }
        }
        if &covered != image.length().coeff() {
            return Err(Error::OutsideDilationOrbit(image.to_string()));
        }
    }
    let pieces = merge_pieces(out);
    let target_core = PiSet::normalize(pieces.iter().map(MapPiece::image).collect());
    Ok(InterpolationMap {
        domain_core: m1.domain_core.clone(),
        pieces,
        target_core,
    })
}

/// `σ^n` for `n >= 0`; `σ^0` is the identity on the domain core.
pub fn power(m: &InterpolationMap, n: usize) -> Result<InterpolationMap> {
    let mut acc = InterpolationMap::identity(&m.domain_core);
    for _ in 0..n {
        acc = compose(m, &acc)?;
    }
    Ok(acc)
}

/// Smallest `k <= k_max` with `σ^k = id`. Powers that cannot be formed
/// (malformed maps, piece cap) count as "not found".
pub fn torsion_order(m: &InterpolationMap, k_max: usize) -> Option<usize> {
    let mut acc = m.clone();
    for k in 1..=k_max {
        if acc.is_identity() {
            return Some(k);
        }
        if k == k_max {
            break;
        }
        acc = compose(m, &acc).ok()?;
    }
    None
}

/// Pieces tile the domain core and their images tile the target core.
pub fn check_measure_preserving(m: &InterpolationMap) -> bool {
    let pieces: Vec<Interval> = m.pieces.iter().map(|p| p.piece.clone()).collect();
    let images: Vec<Interval> = m.pieces.iter().map(MapPiece::image).collect();
    tiles(&pieces, &m.domain_core) && tiles(&images, &m.target_core)
}

/// Whether `σ^n` moves every point of `E` by an integer multiple of 2π; when
/// it does, `σ^n(E)` is also confirmed to be a wavelet set.
pub fn power_congruence(m: &InterpolationMap, n: usize) -> bool {
    let Ok(p) = power(m, n) else {
        return false;
    };
    p.has_integral_shifts() && is_wavelet_set(&p.target_core).is_wavelet_set
}

/// Serde adapter writing a complex number as `[re, im]`.
pub mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValuePiece {
    pub piece: Interval,
    #[serde(with = "complex_pair")]
    pub value: Complex64,
}

/// A piecewise-constant `h` with `h(2s) = h(s)`, stored on the
/// Littlewood–Paley fundamental domain `[-2π, -π) ∪ [π, 2π)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilationPeriodicFunction {
    fundamental_domain: PiSet,
    pieces: Vec<ValuePiece>,
}

impl DilationPeriodicFunction {
    pub fn constant(value: Complex64) -> Self {
        let lp = littlewood_paley();
        let pieces = lp
            .intervals()
            .iter()
            .map(|iv| ValuePiece {
                piece: iv.clone(),
                value,
            })
            .collect();
        DilationPeriodicFunction {
            fundamental_domain: lp,
            pieces,
        }
    }

    /// Validates that the pieces tile the Littlewood–Paley set.
    pub fn from_pieces(pieces: Vec<ValuePiece>) -> Result<Self> {
        let lp = littlewood_paley();
        let ivs: Vec<Interval> = pieces.iter().map(|p| p.piece.clone()).collect();
        if !tiles(&ivs, &lp) {
            return Err(Error::InvalidInput(
                "dilation-periodic pieces must tile [-2π, -π) ∪ [π, 2π)".into(),
            ));
        }
        let mut pieces = pieces;
        pieces.sort_by(|x, y| x.piece.cmp(&y.piece));
        Ok(DilationPeriodicFunction {
            fundamental_domain: lp,
            pieces: merge_values(pieces),
        })
    }

    /// `inside` on `set ∩ LP`, `outside` on the rest of the fundamental domain.
    pub fn indicator(set: &PiSet, inside: Complex64, outside: Complex64) -> Self {
        let lp = littlewood_paley();
        let on = set.intersect(&lp);
        let off = lp.subtract(&on);
        let mut pieces: Vec<ValuePiece> = on
            .intervals()
            .iter()
            .map(|iv| ValuePiece {
                piece: iv.clone(),
                value: inside,
            })
            .chain(off.intervals().iter().map(|iv| ValuePiece {
                piece: iv.clone(),
                value: outside,
            }))
            .collect();
        pieces.sort_by(|x, y| x.piece.cmp(&y.piece));
        DilationPeriodicFunction {
            fundamental_domain: lp,
            pieces: merge_values(pieces),
        }
    }

    pub fn fundamental_domain(&self) -> &PiSet {
        &self.fundamental_domain
    }

    pub fn pieces(&self) -> &[ValuePiece] {
        &self.pieces
    }

    pub fn is_real(&self) -> bool {
        self.pieces.iter().all(|p| p.value.im == 0.0)
    }

    /// Value at a point of the fundamental domain.
    fn value_at_residue(&self, r: &PiRational) -> Option<Complex64> {
        self.pieces.iter().find(|p| p.piece.contains(r)).map(|p| p.value)
    }

    /// `h(s)` for `s != 0`.
    pub fn eval(&self, s: &PiRational) -> Result<Complex64> {
        let r = fold_point(s).ok_or_else(|| Error::OutsideDilationOrbit(s.to_string()))?;
        self.value_at_residue(&r)
            .ok_or_else(|| Error::Postcondition(format!("no piece holds residue {r}")))
    }

    /// `h` restricted to `iv` (which must stay away from 0) as pieces of `iv`.
    pub fn pieces_on(&self, iv: &Interval) -> Result<Vec<(Interval, Complex64)>> {
        let folded = dyadic_fold(iv).ok_or_else(|| Error::OutsideDilationOrbit(iv.to_string()))?;
        let mut out = Vec::new();
        for (residue, m) in folded {
            for p in &self.pieces {
                if let Some(sub) = residue.intersect(&p.piece) {
                    out.push((sub.mul_pow2(m), p.value));
                }
            }
        }
        Ok(out)
    }
}

impl<'de> Deserialize<'de> for DilationPeriodicFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            fundamental_domain: Option<PiSet>,
            pieces: Vec<ValuePiece>,
        }
        let raw = Raw::deserialize(d)?;
        if let Some(fd) = raw.fundamental_domain {
            if fd != littlewood_paley() {
                return Err(serde::de::Error::custom(
                    "only the Littlewood–Paley fundamental domain is supported",
                ));
            }
        }
        DilationPeriodicFunction::from_pieces(raw.pieces).map_err(serde::de::Error::custom)
    }
}

fn merge_values(pieces: Vec<ValuePiece>) -> Vec<ValuePiece> {
    let mut out: Vec<ValuePiece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if let Some(last) = out.last_mut() {
            if last.value == p.value && last.piece.b() == p.piece.a() {
                last.piece = Interval::new(last.piece.a().clone(), p.piece.b().clone()).expect("merge");
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// The representative `2^{-m} s` of `s` in the Littlewood–Paley set.
fn fold_point(s: &PiRational) -> Option<PiRational> {
    if s.is_zero() {
        return None;
    }
    let two = BigRational::from_integer(2.into());
    let mag = s.coeff().abs();
    let m = if s.is_positive() {
        floor_log(&mag, &two)
    } else {
        ceil_log(&mag, &two) - 1
    };
    Some(s.mul_pow2(-m))
}

/// `h ∘ σ^{-1}`, again a dilation-periodic function.
pub fn conjugate_multiplier(h: &DilationPeriodicFunction, m: &InterpolationMap) -> Result<DilationPeriodicFunction> {
    let tau = m.inverse();
    let lp = littlewood_paley();
    let mut out: Vec<ValuePiece> = Vec::new();
    for half in lp.intervals() {
        for q in tau.pieces() {
            for n in dyadic_overlap_range(half, &q.piece).into_iter().flatten() {
                let Some(region) = half.intersect(&q.piece.mul_pow2(n)) else {
                    continue;
                };
                // on 2^n·q, τ(s) = s + 2π·2^n·shift
                let shift = &q.shift * pow2(n);
                let moved = region.add_two_pi_rational(&shift);
                for (sub, value) in h.pieces_on(&moved)? {
                    out.push(ValuePiece {
                        piece: sub.add_two_pi_rational(&-shift.clone()),
                        value,
                    });
                }
            }
        }
    }
    DilationPeriodicFunction::from_pieces(out)
        .map_err(|_| Error::Postcondition("conjugated multiplier does not tile the fundamental domain".into()))
}

/// Coefficients `h_0, …, h_{k-1}` paired with an interpolation map of
/// torsion order `k`.
#[derive(Clone, Debug)]
pub struct CoefficientFamily {
    pub sigma: InterpolationMap,
    pub coefficients: Vec<DilationPeriodicFunction>,
}

impl CoefficientFamily {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }
}

/// File form of a family: the map is rebuilt from its two wavelet sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientFamilySpec {
    pub e: PiSet,
    pub f: PiSet,
    pub coefficients: Vec<DilationPeriodicFunction>,
}

impl CoefficientFamilySpec {
    pub fn build(&self) -> Result<CoefficientFamily> {
        Ok(CoefficientFamily {
            sigma: build_sigma(&self.e, &self.f)?,
            coefficients: self.coefficients.clone(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionCell {
    pub piece: Interval,
    /// `max |M M* - I|` on this cell.
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub order: usize,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub unitary: bool,
    pub cells: Vec<CriterionCell>,
}

/// Per-cell unitarity of the coefficient matrix.
///
/// Entry `(i, j)` (0-based) is `h_{(j - i) mod k} ∘ σ^{-i}`, which is the
/// circulant layout `[[h1, h2, h3], [h3∘σ⁻¹, h1∘σ⁻¹, h2∘σ⁻¹], [h2∘σ⁻², h3∘σ⁻², h1∘σ⁻²]]`
/// for `k = 3` in 1-based coefficient names.
pub fn coefficient_report(fam: &CoefficientFamily) -> Result<CriterionReport> {
    let k = fam.order();
    if k == 0 {
        return Err(Error::InvalidInput("empty coefficient family".into()));
    }
    let found = torsion_order(&fam.sigma, k);
    if found != Some(k) {
        return Err(Error::TorsionMismatch { expected: k, found });
    }
    let powers = (0..k).map(|i| power(&fam.sigma, i)).collect::<Result<Vec<_>>>()?;
    let mut entries: Vec<Vec<DilationPeriodicFunction>> = Vec::with_capacity(k);
    for (i, p) in powers.iter().enumerate() {
        let row = (0..k)
            .map(|j| conjugate_multiplier(&fam.coefficients[(j + k - i) % k], p))
            .collect::<Result<Vec<_>>>()?;
        entries.push(row);
    }

    let mut cuts: Vec<PiRational> = littlewood_paley()
        .intervals()
        .iter()
        .flat_map(|iv| [iv.a().clone(), iv.b().clone()])
        .collect();
    for row in &entries {
        for g in row {
            for p in g.pieces() {
                cuts.push(p.piece.a().clone());
                cuts.push(p.piece.b().clone());
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let lp = littlewood_paley();
    let mut cells = Vec::new();
    let mut max_dev = 0.0f64;
    for w in cuts.windows(2) {
        let cell = Interval::new(w[0].clone(), w[1].clone()).expect("sorted cuts");
        if !lp.contains(cell.a()) {
            continue;
        }
        let m: Vec<Vec<Complex64>> = entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|g| {
                        g.value_at_residue(cell.a())
                            .expect("entry covers the fundamental domain")
                    })
                    .collect()
            })
            .collect();
        let dev = unitarity_deviation(&m);
        max_dev = max_dev.max(dev);
        cells.push(CriterionCell {
            piece: cell,
            deviation: dev,
        });
    }
    let tolerance = crate::tol::RAW;
    Ok(CriterionReport {
        order: k,
        tolerance,
        max_deviation: max_dev,
        unitary: max_dev <= tolerance,
        cells,
    })
}

fn unitarity_deviation(m: &[Vec<Complex64>]) -> f64 {
    let k = m.len();
    let mut dev = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let s: Complex64 = (0..k).map(|l| m[i][l] * m[j][l].conj()).sum();
            let target = if i == j { Complex64::one() } else { Complex64::zero() };
            dev = dev.max((s - target).norm());
        }
    }
    dev
}

/// Whether `Σ M_{h_n} U^n` is unitary, decided cell by cell.
pub fn coefficient_criterion(fam: &CoefficientFamily) -> Result<bool> {
    Ok(coefficient_report(fam)?.unitary)
}

/// `(2π)^{-1/2} Σ_n h_n χ_{σ^n(E)}` as a frequency symbol.
///
/// The result is checked against the two orthonormal-wavelet identities
/// `Σ_k |ψ̂(s + 2πk)|² = 1/2π` and `Σ_j |ψ̂(2^j s)|² = 1/2π` a.e.; when its
/// support has measure 2π it must also be a wavelet set.
pub fn interpolated_symbol(fam: &CoefficientFamily) -> Result<FrequencySymbol> {
    let report = coefficient_report(fam)?;
    if !report.unitary {
        return Err(Error::CriterionFailed(report.max_deviation));
    }
    let k = fam.order();
    let mut contributions: Vec<(Interval, Complex64)> = Vec::new();
    for n in 0..k {
        let image = power(&fam.sigma, n)?.target_core;
        for iv in image.intervals() {
            contributions.extend(fam.coefficients[n].pieces_on(iv)?);
        }
    }
    let mut cuts: Vec<PiRational> = contributions
        .iter()
        .flat_map(|(iv, _)| [iv.a().clone(), iv.b().clone()])
        .collect();
    cuts.sort();
    cuts.dedup();

    let scale = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let cell = Interval::new(w[0].clone(), w[1].clone()).expect("sorted cuts");
        let covering: Vec<Complex64> = contributions
            .iter()
            .filter(|(iv, _)| iv.contains(cell.a()))
            .map(|(_, v)| *v)
            .collect();
        if covering.is_empty() {
            continue;
        }
        let total: Complex64 = covering.into_iter().sum();
        if total == Complex64::zero() {
            continue;
        }
        pieces.push(SymbolPiece {
            piece: cell,
            value: total * scale,
        });
    }
    let symbol = FrequencySymbol::from_pieces(pieces)?;

    let (dt, dd) = wavelet_identity_deviation(&symbol)?;
    if dt > crate::tol::ALGEBRAIC || dd > crate::tol::ALGEBRAIC {
        return Err(Error::Postcondition(format!(
            "interpolated symbol violates the wavelet identities ({dt:.3e}, {dd:.3e})"
        )));
    }
    if symbol.support().measure() == PiRational::integer(2) && !is_wavelet_set(symbol.support()).is_wavelet_set {
        return Err(Error::Postcondition("measure-2π support is not a wavelet set".into()));
    }
    Ok(symbol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{journe_path, shannon, shannon_path};

    fn journe_pair(b1: (i64, i64), b2: (i64, i64)) -> InterpolationMap {
        let e = journe_path(&PiRational::new(b1.0, b1.1)).unwrap();
        let f = journe_path(&PiRational::new(b2.0, b2.1)).unwrap();
        build_sigma(&e, &f).unwrap()
    }

    fn int(k: i64) -> BigRational {
        BigRational::from_integer(k.into())
    }

    #[test]
    fn identity_sigma() {
        let e = shannon();
        let m = build_sigma(&e, &e).unwrap();
        assert!(m.is_identity());
        assert_eq!(m.eval(&PiRational::integer(1)).unwrap(), PiRational::integer(1));
        assert_eq!(m.eval(&PiRational::zero()).unwrap(), PiRational::zero());
        assert_eq!(torsion_order(&m, 3), Some(1));
        assert!(check_measure_preserving(&m));
    }

    #[test]
    fn journe_pair_shifts() {
        // β1 = 0, β2 = π/14
        let m = journe_pair((0, 1), (1, 14));
        let moving: Vec<(Interval, BigRational)> = m
            .pieces()
            .iter()
            .filter(|p| !p.shift.is_zero())
            .map(|p| (p.piece.clone(), p.shift.clone()))
            .collect();
        assert_eq!(
            moving,
            vec![
                (Interval::pi((-1, 1), (-13, 14)), int(1)),
                (Interval::pi((4, 1), (30, 7)), int(-4)),
            ]
        );
    }

    #[test]
    fn journe_pair_eval_and_extension() {
        let m = journe_pair((0, 1), (1, 14));
        let s = PiRational::integer(-1);
        assert_eq!(m.eval(&s).unwrap(), PiRational::integer(1));
        // 2·(4π + 4β1) = 8π maps to 8π - 16π
        let t = PiRational::integer(8);
        assert_eq!(m.eval(&t).unwrap(), PiRational::integer(-8));
    }

    #[test]
    fn journe_pair_is_an_involution() {
        let m = journe_pair((-1, 7), (1, 7));
        let sq = compose(&m, &m).unwrap();
        assert!(sq.is_identity());
        assert_eq!(sq.domain_core(), m.domain_core());
        assert_eq!(torsion_order(&m, 4), Some(2));
        assert!(check_measure_preserving(&m));
        assert!(power_congruence(&m, 1));
    }

    #[test]
    fn inverse_roundtrip() {
        let e = shannon();
        let f = shannon_path(&PiRational::new(1, 2)).unwrap();
        let m = build_sigma(&e, &f).unwrap();
        assert_eq!(m.pieces().iter().filter(|p| !p.shift.is_zero()).count(), 2);
        let back = build_sigma(&f, &e).unwrap();
        assert_eq!(back, m.inverse());
        assert!(compose(&back, &m).unwrap().is_identity());
        assert_eq!(m.inverse().inverse(), m);
        assert!(compose(&InterpolationMap::identity(&f), &m).unwrap() == m);
    }

    #[test]
    fn corrupted_map_is_not_measure_preserving() {
        let m = journe_pair((0, 1), (1, 14));
        let mut pieces = m.pieces().to_vec();
        pieces.push(pieces[0].clone());
        let bad = InterpolationMap::from_parts(m.domain_core().clone(), pieces, m.target_core().clone());
        assert!(!check_measure_preserving(&bad));
    }

    #[test]
    fn non_wavelet_sets_rejected() {
        let h = PiSet::pi(&[((2, 1), (4, 1))]);
        assert!(matches!(build_sigma(&h, &shannon()), Err(Error::NotWaveletSet(_))));
    }

    #[test]
    fn eval_outside_orbit() {
        // a map whose core misses the negative axis cannot place negative points
        let core = PiSet::pi(&[((1, 1), (2, 1))]);
        let m = InterpolationMap::identity(&core);
        assert!(matches!(
            m.eval(&PiRational::integer(-1)),
            Err(Error::OutsideDilationOrbit(_))
        ));
    }

    #[test]
    fn constant_multiplier_is_fixed() {
        let m = journe_pair((0, 1), (1, 7));
        let one = DilationPeriodicFunction::constant(Complex64::one());
        assert_eq!(conjugate_multiplier(&one, &m).unwrap(), one);
        let h =
            DilationPeriodicFunction::indicator(&PiSet::pi(&[((1, 1), (3, 2))]), Complex64::one(), Complex64::zero());
        let id = InterpolationMap::identity(m.domain_core());
        assert_eq!(conjugate_multiplier(&h, &id).unwrap(), h);
    }

    #[test]
    fn conjugated_indicator_matches_pointwise_pullback() {
        let m = journe_pair((0, 1), (1, 7));
        let h =
            DilationPeriodicFunction::indicator(&PiSet::pi(&[((1, 1), (3, 2))]), Complex64::one(), Complex64::zero());
        let g = conjugate_multiplier(&h, &m).unwrap();
        let inv = m.inverse();
        for num in -64..64 {
            let s = PiRational::new(num, 17);
            if s.is_zero() {
                continue;
            }
            let direct = h.eval(&inv.eval(&s).unwrap()).unwrap();
            assert_eq!(g.eval(&s).unwrap(), direct, "s = {s}");
            assert_eq!(g.eval(&s.mul_pow2(3)).unwrap(), g.eval(&s).unwrap());
        }
    }

    #[test]
    fn criterion_examples() {
        let m = journe_pair((0, 1), (1, 14));
        let fam = |a: Complex64, b: Complex64| CoefficientFamily {
            sigma: m.clone(),
            coefficients: vec![
                DilationPeriodicFunction::constant(a),
                DilationPeriodicFunction::constant(b),
            ],
        };
        for theta in [0.0, 0.3, 1.1, 2.5] {
            let f = fam(
                Complex64::new(f64::cos(theta), 0.0),
                Complex64::new(0.0, f64::sin(theta)),
            );
            assert!(coefficient_criterion(&f).unwrap(), "θ = {theta}");
        }
        assert!(!coefficient_criterion(&fam(Complex64::one(), Complex64::one())).unwrap());

        let single = CoefficientFamily {
            sigma: InterpolationMap::identity(&shannon()),
            coefficients: vec![DilationPeriodicFunction::constant(Complex64::one())],
        };
        assert!(coefficient_criterion(&single).unwrap());

        let mismatch = CoefficientFamily {
            sigma: InterpolationMap::identity(&shannon()),
            coefficients: vec![DilationPeriodicFunction::constant(Complex64::one()); 2],
        };
        assert!(matches!(
            coefficient_criterion(&mismatch),
            Err(Error::TorsionMismatch { .. })
        ));
    }

    #[test]
    fn degenerate_coefficients_give_the_wavelet_set_symbol() {
        let m = journe_pair((0, 1), (1, 14));
        let fam = CoefficientFamily {
            sigma: m.clone(),
            coefficients: vec![
                DilationPeriodicFunction::constant(Complex64::one()),
                DilationPeriodicFunction::constant(Complex64::zero()),
            ],
        };
        let sym = interpolated_symbol(&fam).unwrap();
        assert_eq!(sym.support(), m.domain_core());
        assert_eq!(sym, FrequencySymbol::indicator(m.domain_core()));
    }

    /// Shannon set with three small pieces cyclically exchanged along one
    /// dyadic/translation orbit.
    pub(crate) fn three_cycle_target() -> PiSet {
        let x = PiSet::pi(&[((3, 2), (25, 16))]);
        let y_b = x.translate(-1).dilate(2);
        let y_c = x.translate(-2).dilate(-1);
        shannon()
            .subtract(&x)
            .subtract(&y_b)
            .subtract(&y_c)
            .union(&x.translate(-1))
            .union(&x.translate(-2).dilate(2))
            .union(&x.dilate(-1))
    }

    #[test]
    fn synthetic_three_cycle() {
        let f = three_cycle_target();
        assert!(is_wavelet_set(&f).is_wavelet_set);
        let m = build_sigma(&shannon(), &f).unwrap();
        assert_eq!(torsion_order(&m, 6), Some(3));
        let sq = compose(&m, &m).unwrap();
        assert!(!sq.is_identity());
        assert!(check_measure_preserving(&sq));
        assert!(compose(&m, &sq).unwrap().is_identity());
    }

    #[test]
    fn dyadic_net_shift_breaks_power_congruence() {
        let m = build_sigma(&shannon(), &three_cycle_target()).unwrap();
        let sq = power(&m, 2).unwrap();
        assert!(!sq.has_integral_shifts(), "{:?}", sq.pieces());
        assert!(!power_congruence(&m, 2));
        assert!(power_congruence(&m, 1));
        assert!(power_congruence(&m, 3));
    }

    #[test]
    fn group_laws_on_roster() {
        let roster = [
            shannon(),
            shannon_path(&PiRational::new(1, 2)).unwrap(),
            shannon_path(&PiRational::new(-1, 3)).unwrap(),
            journe_path(&PiRational::zero()).unwrap(),
            journe_path(&PiRational::new(1, 7)).unwrap(),
            three_cycle_target(),
        ];
        for e in &roster {
            for f in &roster {
                let m = build_sigma(e, f).unwrap();
                assert!(check_measure_preserving(&m));
                assert!(compose(&m.inverse(), &m).unwrap().is_identity());
                for g in &roster {
                    let n = build_sigma(f, g).unwrap();
                    let direct = build_sigma(e, g).unwrap();
                    assert_eq!(compose(&n, &m).unwrap(), direct, "{e} -> {f} -> {g}");
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn beta() -> impl Strategy<Value = PiRational> {
            (-28i64..=28).prop_map(|n| PiRational::new(n, 196))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn journe_pairs_are_involutions(b1 in beta(), b2 in beta()) {
                let m = build_sigma(&journe_path(&b1).unwrap(), &journe_path(&b2).unwrap()).unwrap();
                let expected = if b1 == b2 { 1 } else { 2 };
                prop_assert_eq!(torsion_order(&m, 4), Some(expected));
                prop_assert!(check_measure_preserving(&m));
            }

            #[test]
            fn sigma_is_two_homogeneous(num in -400i64..400, n in -6i64..6) {
                prop_assume!(num != 0);
                let m = build_sigma(&journe_path(&PiRational::zero()).unwrap(), &three_cycle_target()).unwrap();
                let s = PiRational::new(num, 37);
                prop_assert_eq!(m.eval(&s.mul_pow2(n)).unwrap(), m.eval(&s).unwrap().mul_pow2(n));
            }
        }
    }
}
