//! Closed-form Gram entries and time samples against brute-force midpoint
//! quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use wavesets::analysis::{gram_window, inner_product, phase_modulate, time_samples, FrequencySymbol};
use wavesets::families::{journe_path, shannon, shannon_path};
use wavesets::interpolation::{DilationPeriodicFunction, ValuePiece};
use wavesets::{Interval, PiRational, PiSet};

/// Midpoint rule for `∫ f` over every piece of the symbol's support.
fn quad(sym: &FrequencySymbol, steps: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for p in sym.pieces() {
        let (a, b) = (p.piece.a().to_f64(), p.piece.b().to_f64());
        let h = (b - a) / steps as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..steps {
            s += f(a + (i as f64 + 0.5) * h);
        }
        total += p.value * s * h;
    }
    total
}

/// `ψ̂` evaluated at a float frequency.
fn eval_f64(sym: &FrequencySymbol, s: f64) -> Complex64 {
    sym.pieces()
        .iter()
        .find(|p| p.piece.a().to_f64() <= s && s < p.piece.b().to_f64())
        .map_or(Complex64::new(0.0, 0.0), |p| p.value)
}

#[test]
fn time_samples_match_quadrature() {
    let sym = FrequencySymbol::indicator(&journe_path(&PiRational::zero()).unwrap());
    let grid: Vec<f64> = (0..1024).map(|i| -8.0 + 16.0 * i as f64 / 1023.0).collect();
    let closed = time_samples(&sym, &grid);
    let c = 1.0 / (2.0 * PI).sqrt();
    let mut worst = 0.0f64;
    for (t, v) in grid.iter().zip(&closed) {
        let q = quad(&sym, 8000, |s| Complex64::new(0.0, s * t).exp()) * c;
        worst = worst.max((q - v).norm());
    }
    assert!(worst < 1e-6, "worst deviation {worst:e}");
}

#[test]
fn samples_obey_decay_envelope() {
    let sym = FrequencySymbol::indicator(&shannon_path(&PiRational::new(1, 3)).unwrap());
    let c = 1.0 / (2.0 * PI).sqrt();
    let total: f64 = sym.pieces().iter().map(|p| p.value.norm()).sum();
    for t in [50.0, -73.5, 200.0, 1e4] {
        let v = time_samples(&sym, &[t])[0];
        assert!(v.norm() <= c * total * 2.0 / t.abs() + 1e-15);
    }
}

#[test]
fn gram_entries_match_quadrature() {
    let sym = FrequencySymbol::indicator(&shannon_path(&PiRational::new(1, 2)).unwrap());
    for (n1, l1, n2, l2) in [(0, 0, 0, 0), (0, 1, 0, 3), (1, 2, 0, 5), (-1, 4, 1, 0), (2, 6, 1, 1)] {
        // ⟨f, g⟩ with f, g the dilated translates, integrated over f's support
        let f = |s: f64, n: i32, l: i32| {
            let m = 2f64.powi(-n);
            Complex64::new(0.0, -(l as f64) * m * s).exp() * eval_f64(&sym, m * s) * m.sqrt()
        };
        let mut q = Complex64::new(0.0, 0.0);
        for p in sym.pieces() {
            let scale = 2f64.powi(n1);
            let (a, b) = (p.piece.a().to_f64() * scale, p.piece.b().to_f64() * scale);
            let steps = 40_000;
            let h = (b - a) / steps as f64;
            for i in 0..steps {
                let s = a + (i as f64 + 0.5) * h;
                q += f(s, n1, l1) * f(s, n2, l2).conj() * h;
            }
        }
        let exact = inner_product(&sym, n1 as i64, l1 as i64, n2 as i64, l2 as i64);
        assert!((q - exact).norm() < 1e-6, "({n1},{l1},{n2},{l2}): {q} vs {exact}");
    }
}

#[test]
fn norm_matches_quadrature() {
    let sym = FrequencySymbol::indicator(&journe_path(&PiRational::new(-1, 14)).unwrap());
    let q = quad(&sym, 100, |_| Complex64::new(1.0, 0.0));
    assert!((sym.norm_sqr() - 1.0).abs() < 1e-12);
    assert!((q.norm() * (2.0 * PI).sqrt() - 2.0 * PI).abs() < 1e-9);
}

#[test]
fn hardy_symbol_window() {
    // orthonormal but incomplete: the window itself cannot tell
    let hardy = FrequencySymbol::indicator(&PiSet::pi(&[((2, 1), (4, 1))]));
    assert!(gram_window(&hardy, 2, 6).deviation < 1e-12);
}

fn phase() -> impl Strategy<Value = DilationPeriodicFunction> {
    (
        prop::collection::btree_set(-63i64..-1, 0..4),
        prop::collection::btree_set(1i64..63, 0..4),
        prop::collection::vec(-3.0f64..3.0, 10),
    )
        .prop_map(|(neg, pos, vals)| {
            let mut pieces = Vec::new();
            let mut vi = vals.into_iter().cycle();
            for (lo, hi, cuts) in [(-128i64, -64i64, neg), (64, 128, pos)] {
                let mut pts: Vec<i64> = cuts.into_iter().map(|c| lo + (c.abs() % 63) + 1).collect();
                pts.push(lo);
                pts.push(hi);
                pts.sort_unstable();
                pts.dedup();
                for w in pts.windows(2) {
                    pieces.push(ValuePiece {
                        piece: Interval::new(PiRational::new(w[0], 64), PiRational::new(w[1], 64)).unwrap(),
                        value: Complex64::new(vi.next().unwrap(), 0.0),
                    });
                }
            }
            DilationPeriodicFunction::from_pieces(pieces).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn phase_modulation_keeps_gram_identity(h in phase()) {
        for e in [shannon(), journe_path(&PiRational::new(1, 14)).unwrap()] {
            let sym = phase_modulate(&e, &h).unwrap();
            prop_assert!(sym.modulus_deviation() < 1e-15);
            prop_assert!(gram_window(&sym, 2, 6).deviation <= 1e-10);
        }
    }

    #[test]
    fn conjugate_symmetry(n1 in -2i64..=2, l1 in 0i64..=6, n2 in -2i64..=2, l2 in 0i64..=6) {
        let sym = FrequencySymbol::indicator(&journe_path(&PiRational::new(1, 14)).unwrap());
        prop_assert_eq!(inner_product(&sym, n1, l1, n2, l2), inner_product(&sym, n2, l2, n1, l1).conj());
    }
}
