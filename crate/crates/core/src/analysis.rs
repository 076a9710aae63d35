//! Frequency symbols and closed-form Gram windows of the dyadic
//! dilation/translation system.
//!
//! A symbol is a piecewise-constant function of frequency; every quantity
//! here reduces to integrals `∫_a^b e^{iλs} ds` with `a`, `b` rational
//! multiples of π and `λ` a dyadic rational, which are evaluated through
//! their antiderivative. Phases `e^{iπr}` are reduced exactly before the
//! floating-point step, so large dilations do not lose accuracy.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::congruence::{dyadic_fold, littlewood_paley, translation_fold, unit_translation_domain};
use crate::error::{Error, Result};
use crate::interpolation::{complex_pair, DilationPeriodicFunction};
use crate::pi::{exp_i_pi, pow2, ratio_to_f64, PiRational};
use crate::set::{Interval, PiSet};

/// `(2π)^{-1/2}`, the modulus of an MSF symbol.
pub fn msf_modulus() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolPiece {
    pub piece: Interval,
    #[serde(with = "complex_pair")]
    pub value: Complex64,
}

/// Piecewise-constant function on the frequency axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencySymbol {
    support: PiSet,
    pieces: Vec<SymbolPiece>,
}

impl FrequencySymbol {
    /// `(2π)^{-1/2} χ_E`.
    pub fn indicator(e: &PiSet) -> Self {
        Self::constant(e, Complex64::new(msf_modulus(), 0.0))
    }

    pub fn constant(e: &PiSet, value: Complex64) -> Self {
        let pieces = if value == Complex64::zero() {
            Vec::new()
        } else {
            e.intervals()
                .iter()
                .map(|iv| SymbolPiece {
                    piece: iv.clone(),
                    value,
                })
                .collect()
        };
        Self::assemble(pieces)
    }

    /// Pieces must be pairwise disjoint; zero-valued pieces are dropped and
    /// touching pieces with equal values merged.
    pub fn from_pieces(mut pieces: Vec<SymbolPiece>) -> Result<Self> {
        pieces.retain(|p| p.value != Complex64::zero());
        pieces.sort_by(|x, y| x.piece.cmp(&y.piece));
        for w in pieces.windows(2) {
            if w[1].piece.a() < w[0].piece.b() {
                return Err(Error::InvalidInput(format!(
                    "symbol pieces {} and {} overlap",
                    w[0].piece, w[1].piece
                )));
            }
        }
        Ok(Self::assemble(pieces))
    }

    fn assemble(pieces: Vec<SymbolPiece>) -> Self {
        let mut merged: Vec<SymbolPiece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if let Some(last) = merged.last_mut() {
                if last.value == p.value && last.piece.b() == p.piece.a() {
                    last.piece = Interval::new(last.piece.a().clone(), p.piece.b().clone()).expect("merge");
                    continue;
                }
            }
            merged.push(p);
        }
        let support = PiSet::normalize(merged.iter().map(|p| p.piece.clone()).collect());
        FrequencySymbol {
            support,
            pieces: merged,
        }
    }

    pub fn support(&self) -> &PiSet {
        &self.support
    }

    pub fn pieces(&self) -> &[SymbolPiece] {
        &self.pieces
    }

    pub fn eval(&self, s: &PiRational) -> Complex64 {
        self.pieces
            .iter()
            .find(|p| p.piece.contains(s))
            .map_or(Complex64::zero(), |p| p.value)
    }

    /// Largest deviation of `|value|` from `(2π)^{-1/2}` over the pieces.
    pub fn modulus_deviation(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| (p.value.norm() - msf_modulus()).abs())
            .fold(0.0, f64::max)
    }

    /// `∫ |ψ̂|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.value.norm_sqr() * p.piece.length().to_f64())
            .sum()
    }
}

impl<'de> Deserialize<'de> for FrequencySymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            support: Option<PiSet>,
            pieces: Vec<SymbolPiece>,
        }
        let raw = Raw::deserialize(d)?;
        let sym = FrequencySymbol::from_pieces(raw.pieces).map_err(serde::de::Error::custom)?;
        if let Some(s) = raw.support {
            if s != sym.support {
                return Err(serde::de::Error::custom("support does not match the pieces"));
            }
        }
        Ok(sym)
    }
}

/// `∫_a^b e^{iλs} ds` for `a = πα`, `b = πβ`.
fn oscillatory_integral(lambda: &BigRational, iv: &Interval) -> Complex64 {
    if lambda.is_zero() {
        return Complex64::new(iv.length().to_f64(), 0.0);
    }
    let eb = exp_i_pi(&(lambda * iv.b().coeff()));
    let ea = exp_i_pi(&(lambda * iv.a().coeff()));
    (eb - ea) / Complex64::new(0.0, ratio_to_f64(lambda))
}

/// `⟨D̂^{n1} T̂^{l1} ψ̂, D̂^{n2} T̂^{l2} ψ̂⟩`, where
/// `(D̂^n T̂^l ψ̂)(s) = 2^{-n/2} e^{-i l 2^{-n} s} ψ̂(2^{-n} s)`.
///
/// Swapping the two index pairs conjugates the result exactly.
pub fn inner_product(sym: &FrequencySymbol, n1: i64, l1: i64, n2: i64, l2: i64) -> Complex64 {
    if (n1, l1) > (n2, l2) {
        return inner_product(sym, n2, l2, n1, l1).conj();
    }
    let lambda = BigRational::from_integer(l2.into()) * pow2(-n2) - BigRational::from_integer(l1.into()) * pow2(-n1);
    let scale = 2f64.powf(-((n1 + n2) as f64) / 2.0);
    let mut total = Complex64::zero();
    for p in &sym.pieces {
        let p1 = p.piece.mul_pow2(n1);
        for q in &sym.pieces {
            if let Some(iv) = p1.intersect(&q.piece.mul_pow2(n2)) {
                total += p.value * q.value.conj() * oscillatory_integral(&lambda, &iv);
            }
        }
    }
    total * scale
}

#[derive(Clone, Debug, Serialize)]
pub struct GramWindow {
    pub n_range: (i64, i64),
    pub l_range: (i64, i64),
    /// Row/column labels `(n, l)` in matrix order.
    pub index: Vec<(i64, i64)>,
    #[serde(serialize_with = "serialize_complex_rows")]
    pub entries: Vec<Vec<Complex64>>,
    /// `max |G - I|`.
    pub deviation: f64,
}

fn serialize_complex_rows<S: serde::Serializer>(rows: &[Vec<Complex64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw: Vec<Vec<[f64; 2]>> = rows.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
    raw.serialize(s)
}

impl GramWindow {
    pub fn size(&self) -> usize {
        self.index.len()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| (self.entries[i][j] - self.entries[j][i].conj()).norm() <= tol))
    }
}

/// Pairings for `-N ≤ n ≤ N` and `0 ≤ l ≤ L`, ordered with `n` outermost.
pub fn gram_window(sym: &FrequencySymbol, n: i64, l: i64) -> GramWindow {
    gram_window_ranges(sym, (-n, n), (0, l))
}

pub fn gram_window_ranges(sym: &FrequencySymbol, n_range: (i64, i64), l_range: (i64, i64)) -> GramWindow {
    let index: Vec<(i64, i64)> = (n_range.0..=n_range.1)
        .flat_map(|n| (l_range.0..=l_range.1).map(move |l| (n, l)))
        .collect();
    let size = index.len();
    let mut entries = vec![vec![Complex64::zero(); size]; size];
    for i in 0..size {
        for j in i..size {
            let (n1, l1) = index[i];
            let (n2, l2) = index[j];
            let v = inner_product(sym, n1, l1, n2, l2);
            entries[i][j] = v;
            entries[j][i] = v.conj();
        }
        // the diagonal is real in exact arithmetic
        entries[i][i] = Complex64::new(entries[i][i].re, 0.0);
    }
    let mut deviation = 0.0f64;
    for (i, row) in entries.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::zero()
            };
            deviation = deviation.max((z - target).norm());
        }
    }
    GramWindow {
        n_range,
        l_range,
        index,
        entries,
        deviation,
    }
}

/// `e^{i h̃} ψ̂_E` for a real dilation-periodic `h`.
pub fn phase_modulate(e: &PiSet, h: &DilationPeriodicFunction) -> Result<FrequencySymbol> {
    if !h.is_real() {
        return Err(Error::InvalidInput("phase function must be real-valued".into()));
    }
    let mut pieces = Vec::new();
    for iv in e.intervals() {
        for (sub, v) in h.pieces_on(iv)? {
            pieces.push(SymbolPiece {
                piece: sub,
                value: Complex64::from_polar(msf_modulus(), v.re),
            });
        }
    }
    FrequencySymbol::from_pieces(pieces)
}

/// `ψ(t) = (2π)^{-1/2} ∫ e^{ist} ψ̂(s) ds` on a grid.
pub fn time_samples(sym: &FrequencySymbol, grid: &[f64]) -> Vec<Complex64> {
    let c = msf_modulus();
    grid.iter()
        .map(|&t| {
            let sum: Complex64 = sym
                .pieces
                .iter()
                .map(|p| {
                    let a = p.piece.a().to_f64();
                    let b = p.piece.b().to_f64();
                    if t.abs() < 1e-12 {
                        p.value * (b - a)
                    } else {
                        let w = (Complex64::new(0.0, b * t).exp() - Complex64::new(0.0, a * t).exp())
                            / Complex64::new(0.0, t);
                        p.value * w
                    }
                })
                .sum();
            sum * c
        })
        .collect()
}

/// The Haar wavelet.
pub fn eval_haar(t: f64) -> f64 {
    if (0.0..0.5).contains(&t) {
        1.0
    } else if (0.5..=1.0).contains(&t) {
        -1.0
    } else {
        0.0
    }
}

/// Accumulates `|value|²` of folded pieces onto the cells of a fundamental
/// domain and returns the largest deviation from `(2π)^{-1}`.
fn folded_deviation(domain: &PiSet, folded: Vec<(Interval, f64)>) -> f64 {
    let mut cuts: Vec<PiRational> = domain
        .intervals()
        .iter()
        .flat_map(|iv| [iv.a().clone(), iv.b().clone()])
        .chain(folded.iter().flat_map(|(iv, _)| [iv.a().clone(), iv.b().clone()]))
        .collect();
    cuts.sort();
    cuts.dedup();
    let target = 1.0 / (2.0 * PI);
    let mut dev = 0.0f64;
    for w in cuts.windows(2) {
        if !domain.contains(&w[0]) {
            continue;
        }
        let total: f64 = folded.iter().filter(|(iv, _)| iv.contains(&w[0])).map(|(_, v)| v).sum();
        dev = dev.max((total - target).abs());
    }
    dev
}

/// Deviations of `Σ_k |ψ̂(s + 2πk)|²` and `Σ_j |ψ̂(2^j s)|²` from `1/2π`.
///
/// The first vanishes iff the integer translates are orthonormal; the
/// second is the Calderón condition, which additionally detects
/// incompleteness of the dilation system.
pub fn wavelet_identity_deviation(sym: &FrequencySymbol) -> Result<(f64, f64)> {
    let mut tr = Vec::new();
    let mut dl = Vec::new();
    for p in &sym.pieces {
        let w = p.value.norm_sqr();
        tr.extend(translation_fold(&p.piece).into_iter().map(|(iv, _)| (iv, w)));
        let folded = dyadic_fold(&p.piece).ok_or_else(|| Error::OutsideDilationOrbit(p.piece.to_string()))?;
        dl.extend(folded.into_iter().map(|(iv, _)| (iv, w)));
    }
    Ok((
        folded_deviation(&unit_translation_domain(), tr),
        folded_deviation(&littlewood_paley(), dl),
    ))
}
