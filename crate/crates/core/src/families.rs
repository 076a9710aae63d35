//! Parameterised wavelet-set families.
//!
//! All parameters are exact: angles are [`PiRational`]s and the dilation
//! factor of [`d_dilation_set`] is a plain rational. Pieces that degenerate to
//! empty intervals at the ends of a parameter range are dropped.

use num_rational::BigRational;
use num_traits::One;

use crate::congruence::{
    dilation_congruent_by, dilation_domain, is_wavelet_set, translation_congruent, unit_translation_domain,
    DilationWitness, TranslationWitness,
};
use crate::error::{Error, Result};
use crate::pi::PiRational;
use crate::set::{Interval, PiSet};

/// Family names understood by [`build`].
pub const FAMILY_NAMES: [&str; 5] = ["shannon", "shannon-path", "journe-path", "subset-ext", "d-dilation"];

/// `[-2π, -π) ∪ [π, 2π)`.
pub fn shannon() -> PiSet {
    PiSet::pi(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1))])
}

/// `E_α = [-2π + 2α, -π + α) ∪ [π + α, 2π + 2α)` for `-π < α < π`.
pub fn shannon_path(alpha: &PiRational) -> Result<PiSet> {
    let pi = PiRational::integer(1);
    if !(alpha > &-pi.clone() && alpha < &pi) {
        return Err(Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha.to_string(),
            range: "(-π, π)",
        });
    }
    let two_alpha = alpha.mul_pow2(1);
    let pieces = [
        (
            PiRational::integer(-2) + two_alpha.clone(),
            PiRational::integer(-1) + alpha.clone(),
        ),
        (
            PiRational::integer(1) + alpha.clone(),
            PiRational::integer(2) + two_alpha,
        ),
    ];
    Ok(collect(pieces))
}

/// The generalised Journé set
/// `J_β = [-32π/7, -4π + 4β) ∪ [-π + β, -4π/7) ∪ [4π/7, π + β) ∪ [4π + 4β, 32π/7)`
/// for `-π/7 ≤ β ≤ π/7`.
pub fn journe_path(beta: &PiRational) -> Result<PiSet> {
    let bound = PiRational::new(1, 7);
    if !(beta >= &-bound.clone() && beta <= &bound) {
        return Err(Error::ParameterOutOfRange {
            name: "beta",
            value: beta.to_string(),
            range: "[-π/7, π/7]",
        });
    }
    let four_beta = beta.mul_pow2(2);
    let pieces = [
        (PiRational::new(-32, 7), PiRational::integer(-4) + four_beta.clone()),
        (PiRational::integer(-1) + beta.clone(), PiRational::new(-4, 7)),
        (PiRational::new(4, 7), PiRational::integer(1) + beta.clone()),
        (PiRational::integer(4) + four_beta, PiRational::new(32, 7)),
    ];
    Ok(collect(pieces))
}

/// For `A ⊆ [π, 3π/2)` builds the wavelet set
/// `W = [3π/2, 2π) ∪ A ∪ B ∪ C ∪ D` with `B = [2π, 3π) \ 2A`,
/// `C = [-π, -π/2) \ (A - 2π)` and `D = 2A - 4π`, so that `W ∩ [π, 3π/2) = A`.
pub fn subset_extension(a: &PiSet) -> Result<PiSet> {
    let window = PiSet::pi(&[((1, 1), (3, 2))]);
    if !a.is_subset_of(&window) {
        return Err(Error::ParameterOutOfRange {
            name: "A",
            value: a.to_string(),
            range: "subsets of [π, 3π/2)",
        });
    }
    let two_a = a.dilate(1);
    let b = PiSet::pi(&[((2, 1), (3, 1))]).subtract(&two_a);
    let c = PiSet::pi(&[((-1, 1), (-1, 2))]).subtract(&a.translate(-1));
    let d = two_a.translate(-2);
    let w = PiSet::pi(&[((3, 2), (2, 1))]).union(a).union(&b).union(&c).union(&d);

    if w.intersect(&window) != *a {
        return Err(Error::Postcondition(format!("W ∩ [π, 3π/2) != A for A = {a}")));
    }
    if !is_wavelet_set(&w).is_wavelet_set {
        return Err(Error::Postcondition(format!(
            "subset extension of {a} is not a wavelet set"
        )));
    }
    Ok(w)
}

/// The `d`-dilation wavelet set `G = A ∪ B ∪ C` for rational `d ≥ 2`:
/// `A = [-2dπ/(d+1), -2π/(d+1))`, `B = [2π/(d²-1), 2π/(d+1))`,
/// `C = [2dπ/(d+1), 2d²π/(d²-1))`.
pub fn d_dilation_set(d: &BigRational) -> Result<PiSet> {
    let two = BigRational::from_integer(2.into());
    if d < &two {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d.to_string(),
            range: "d >= 2",
        });
    }
    let one = BigRational::one();
    let dp1 = d + &one;
    let dsq1 = d * d - &one;
    let c = |x: BigRational| PiRational::from_coeff(x);
    let pieces = [
        (c(-(&two * d) / &dp1), c(-(&two) / &dp1)),
        (c(&two / &dsq1), c(&two / &dp1)),
        (c(&two * d / &dp1), c(&two * d * d / &dsq1)),
    ];
    Ok(collect(pieces))
}

/// Witnesses that `G` is a `d`-wavelet set: translation congruence to
/// `[0, 2π)` and `d`-dilation congruence to `[-dπ, -π) ∪ [π, dπ)`.
pub fn d_wavelet_witnesses(g: &PiSet, d: &BigRational) -> Option<(TranslationWitness, DilationWitness)> {
    let t = translation_congruent(g, &unit_translation_domain())?;
    let w = dilation_congruent_by(g, &dilation_domain(d), d)?;
    Some((t, w))
}

pub fn is_d_wavelet_set(g: &PiSet, d: &BigRational) -> bool {
    d_wavelet_witnesses(g, d).is_some()
}

/// Dispatches a family by name. `param` is the π-coefficient for the path
/// families and the plain rational factor for `d-dilation`; `subset` is the
/// set `A` for `subset-ext`.
pub fn build(name: &str, param: Option<&BigRational>, subset: Option<&PiSet>) -> Result<PiSet> {
    let need = |what: &str| Error::InvalidInput(format!("family {name} needs {what}"));
    match name {
        "shannon" => Ok(shannon()),
        "shannon-path" => shannon_path(&PiRational::from_coeff(param.ok_or_else(|| need("--param"))?.clone())),
        "journe-path" => journe_path(&PiRational::from_coeff(param.ok_or_else(|| need("--param"))?.clone())),
        "subset-ext" => subset_extension(subset.ok_or_else(|| need("--set"))?),
        "d-dilation" => d_dilation_set(param.ok_or_else(|| need("--param"))?),
        other => Err(Error::InvalidInput(format!(
            "unknown family {other:?}; expected one of {FAMILY_NAMES:?}"
        ))),
    }
}

fn collect<const N: usize>(pieces: [(PiRational, PiRational); N]) -> PiSet {
    PiSet::normalize(
        pieces
            .into_iter()
            .filter_map(|(a, b)| Interval::nonempty(a, b))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::is_translation_generator;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn shannon_is_wavelet_set() {
        assert!(is_wavelet_set(&shannon()).is_wavelet_set);
        assert_eq!(shannon().measure(), PiRational::integer(2));
    }

    #[test]
    fn shannon_path_values() {
        assert_eq!(shannon_path(&PiRational::zero()).unwrap(), shannon());
        assert_eq!(
            shannon_path(&PiRational::new(1, 2)).unwrap(),
            PiSet::pi(&[((-1, 1), (-1, 2)), ((3, 2), (3, 1))])
        );
        assert!(shannon_path(&PiRational::integer(1)).is_err());
        assert!(shannon_path(&PiRational::integer(-1)).is_err());
        assert!(is_translation_generator(
            &shannon_path(&PiRational::new(-1, 2)).unwrap()
        ));
    }

    #[test]
    fn journe_endpoints() {
        let j0 = journe_path(&PiRational::zero()).unwrap();
        assert_eq!(
            j0,
            PiSet::pi(&[
                ((-32, 7), (-4, 1)),
                ((-1, 1), (-4, 7)),
                ((4, 7), (1, 1)),
                ((4, 1), (32, 7))
            ])
        );
        for b in [PiRational::new(1, 7), PiRational::new(-1, 7)] {
            let j = journe_path(&b).unwrap();
            assert_eq!(j.len(), 3, "{j}");
            assert!(is_wavelet_set(&j).is_wavelet_set);
        }
        assert!(journe_path(&PiRational::new(1, 3)).is_err());
    }

    #[test]
    fn subset_extension_examples() {
        let empty = subset_extension(&PiSet::empty()).unwrap();
        assert_eq!(empty, PiSet::pi(&[((-1, 1), (-1, 2)), ((3, 2), (3, 1))]));

        let full = subset_extension(&PiSet::pi(&[((1, 1), (3, 2))])).unwrap();
        assert_eq!(full, shannon());

        let a = PiSet::pi(&[((1, 1), (5, 4))]);
        let w = subset_extension(&a).unwrap();
        assert_eq!(w.intersect(&PiSet::pi(&[((1, 1), (3, 2))])), a);

        assert!(subset_extension(&PiSet::pi(&[((1, 1), (2, 1))])).is_err());
    }

    #[test]
    fn d_dilation_values() {
        let g3 = d_dilation_set(&q(3, 1)).unwrap();
        assert_eq!(g3, PiSet::pi(&[((-3, 2), (-1, 2)), ((1, 4), (1, 2)), ((3, 2), (9, 4))]));
        assert!(is_d_wavelet_set(&g3, &q(3, 1)));
        // at d = 2 the middle piece collapses
        let g2 = d_dilation_set(&q(2, 1)).unwrap();
        assert_eq!(g2, PiSet::pi(&[((-4, 3), (-2, 3)), ((4, 3), (8, 3))]));
        assert!(is_d_wavelet_set(&g2, &q(2, 1)));
        assert!(is_d_wavelet_set(&d_dilation_set(&q(5, 2)).unwrap(), &q(5, 2)));
        assert!(d_dilation_set(&q(1, 1)).is_err());
        // a 3-wavelet set is not a dyadic one
        assert!(!is_wavelet_set(&g3).is_wavelet_set);
    }

    #[test]
    fn build_dispatch() {
        assert_eq!(build("shannon", None, None).unwrap(), shannon());
        assert!(build("nope", None, None).is_err());
        assert!(build("journe-path", None, None).is_err());
    }
}
