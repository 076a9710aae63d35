//! Finite-dimensional unitary systems: wandering vectors, local commutants
//! and interpolation unitaries.
//!
//! Operators on `ℂ^d` are vectorised row-major (`A[r][c]` at index
//! `r·d + c`). All rank decisions use a threshold relative to the largest
//! singular value of the matrix at hand.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigen, hermitian_function, identity, inverse_condition, is_unitary, max_abs, max_diff, nullspace,
    random_complex_matrix, rank, span_residual, CMatrix, CVector, MatrixJson,
};

/// Default rank threshold.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct UnitarySystem {
    dim: usize,
    elements: Vec<CMatrix>,
}

impl UnitarySystem {
    /// `elements[0]` must be the identity; all must be unitary.
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidSystem("no elements".into()))?;
        let dim = first.nrows();
        for (i, u) in elements.iter().enumerate() {
            if u.shape() != (dim, dim) {
                return Err(Error::InvalidSystem(format!("element {i} is not {dim}x{dim}")));
            }
            if !is_unitary(u, 1e-10) {
                return Err(Error::InvalidSystem(format!("element {i} is not unitary")));
            }
        }
        if max_diff(first, &identity(dim)) > 1e-10 {
            return Err(Error::InvalidSystem("first element must be the identity".into()));
        }
        Ok(UnitarySystem { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Columns `U_i x`.
    pub fn orbit(&self, x: &CVector) -> CMatrix {
        let cols: Vec<CVector> = self.elements.iter().map(|u| u * x).collect();
        CMatrix::from_columns(&cols)
    }

    /// Whether the product of any two elements is again an element.
    pub fn is_semigroup(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements
                .iter()
                .all(|b| self.elements.iter().any(|u| max_diff(&(a * b), u) <= 1e-10))
        })
    }

    pub fn to_json(&self) -> UnitarySystemJson {
        UnitarySystemJson {
            elements: self.elements.iter().map(MatrixJson::from).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitarySystemJson {
    pub elements: Vec<MatrixJson>,
}

impl TryFrom<UnitarySystemJson> for UnitarySystem {
    type Error = Error;

    fn try_from(j: UnitarySystemJson) -> Result<Self> {
        let els = j
            .elements
            .into_iter()
            .map(CMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        UnitarySystem::new(els)
    }
}

/// Left regular representation from a Cayley table (`table[g][h] = g·h`).
/// The identity element comes first; the rest keep table order.
pub fn regular_representation(table: &[Vec<usize>]) -> Result<UnitarySystem> {
    let k = table.len();
    let bad = |msg: String| Error::InvalidGroupTable(msg);
    if k == 0 {
        return Err(bad("empty table".into()));
    }
    for (g, row) in table.iter().enumerate() {
        if row.len() != k {
            return Err(bad(format!("row {g} has length {}, expected {k}", row.len())));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= k) {
            return Err(bad(format!("entry {v} out of range")));
        }
    }
    let latin = (0..k).all(|g| {
        let mut row_seen = vec![false; k];
        let mut col_seen = vec![false; k];
        for h in 0..k {
            row_seen[table[g][h]] = true;
            col_seen[table[h][g]] = true;
        }
        row_seen.iter().all(|&b| b) && col_seen.iter().all(|&b| b)
    });
    if !latin {
        return Err(bad("not a Latin square (inverses missing)".into()));
    }
    let e = (0..k)
        .find(|&e| (0..k).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| bad("no identity element".into()))?;
    for a in 0..k {
        for b in 0..k {
            for x in 0..k {
                if table[table[a][b]][x] != table[a][table[b][x]] {
                    return Err(bad(format!("not associative at ({a}, {b}, {x})")));
                }
            }
        }
    }
    let order = std::iter::once(e).chain((0..k).filter(|&g| g != e));
    let elements = order
        .map(|g| CMatrix::from_fn(k, k, |r, h| if table[g][h] == r { c(1.0, 0.0) } else { c(0.0, 0.0) }))
        .collect();
    UnitarySystem::new(elements)
}

/// Cayley table of `ℤ_n`.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect()
}

/// Four permutation unitaries on `ℂ⁴` with `U_i e_0 = e_i`, not closed
/// under products.
pub fn non_semigroup_system() -> UnitarySystem {
    let perm = |p: [usize; 4]| CMatrix::from_fn(4, 4, |r, col| if p[col] == r { c(1.0, 0.0) } else { c(0.0, 0.0) });
    UnitarySystem::new(vec![
        identity(4),
        perm([1, 0, 2, 3]),
        perm([2, 0, 1, 3]),
        perm([3, 1, 2, 0]),
    ])
    .expect("permutation matrices are unitary")
}

pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}

fn orbit_gram(u: &UnitarySystem, x: &CVector) -> CMatrix {
    let o = u.orbit(x);
    o.adjoint() * o
}

/// `{U x}` is orthonormal to `1e-10`.
pub fn is_wandering(u: &UnitarySystem, x: &CVector) -> bool {
    max_diff(&orbit_gram(u, x), &identity(u.len())) <= 1e-10
}

/// Wandering with an orbit spanning the space.
pub fn is_complete_wandering(u: &UnitarySystem, x: &CVector) -> bool {
    u.len() == u.dim && is_wandering(u, x) && rank(&u.orbit(x), RANK_TOL) == u.dim
}

/// A linear space of `d×d` operators.
#[derive(Clone, Debug)]
pub struct OperatorSubspaceBasis {
    pub dim: usize,
    pub basis: Vec<CMatrix>,
}

impl OperatorSubspaceBasis {
    fn from_nullspace(dim: usize, null: &CMatrix) -> Self {
        let basis = (0..null.ncols())
            .map(|j| CMatrix::from_fn(dim, dim, |r, col| null[(r * dim + col, j)]))
            .collect();
        OperatorSubspaceBasis { dim, basis }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis elements as columns of a `d² × len` matrix.
    pub fn as_columns(&self) -> CMatrix {
        let d2 = self.dim * self.dim;
        CMatrix::from_fn(d2, self.len(), |i, j| self.basis[j][(i / self.dim, i % self.dim)])
    }

    /// Distance of `a` (vectorised) from the span.
    pub fn residual(&self, a: &CMatrix) -> f64 {
        span_residual(&self.as_columns(), &vectorize(a))
    }

    pub fn contains(&self, a: &CMatrix, tol: f64) -> bool {
        self.residual(a) <= tol * a.norm().max(1.0)
    }

    /// `Σ coeffs_j B_j`.
    pub fn combine(&self, coeffs: &[Complex64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (b, &w) in self.basis.iter().zip(coeffs) {
            out += b * w;
        }
        out
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let w = random_complex_matrix(rng, self.len(), 1);
        self.combine(w.as_slice())
    }

    pub fn to_json(&self) -> Vec<MatrixJson> {
        self.basis.iter().map(MatrixJson::from).collect()
    }
}

fn vectorize(a: &CMatrix) -> CVector {
    let d = a.nrows();
    CVector::from_fn(d * a.ncols(), |i, _| a[(i / d, i % d)])
}

/// `C_x(U) = {A : (A U_i - U_i A) x = 0 for all i}`.
pub fn local_commutant(u: &UnitarySystem, x: &CVector) -> OperatorSubspaceBasis {
    let d = u.dim;
    let n = u.len();
    let mut m = CMatrix::zeros(n * d, d * d);
    for (i, ui) in u.elements.iter().enumerate() {
        let uix = ui * x;
        for r in 0..d {
            let row = i * d + r;
            for a in 0..d {
                for b in 0..d {
                    let mut coeff = -ui[(r, a)] * x[b];
                    if a == r {
                        coeff += uix[b];
                    }
                    m[(row, a * d + b)] = coeff;
                }
            }
        }
    }
    OperatorSubspaceBasis::from_nullspace(d, &nullspace(&m, RANK_TOL))
}

/// `U' = {A : A U_i = U_i A for all i}`.
pub fn commutant(u: &UnitarySystem) -> OperatorSubspaceBasis {
    let d = u.dim;
    let mut m = CMatrix::zeros(u.len() * d * d, d * d);
    for (i, ui) in u.elements.iter().enumerate() {
        for r in 0..d {
            for s in 0..d {
                let row = (i * d + r) * d + s;
                for a in 0..d {
                    for b in 0..d {
                        let mut coeff = c(0.0, 0.0);
                        if a == r {
                            coeff += ui[(b, s)];
                        }
                        if b == s {
                            coeff -= ui[(r, a)];
                        }
                        m[(row, a * d + b)] = coeff;
                    }
                }
            }
        }
    }
    OperatorSubspaceBasis::from_nullspace(d, &nullspace(&m, RANK_TOL))
}

/// Whether `A ↦ A x` is injective on the span of `space`.
pub fn separates(space: &OperatorSubspaceBasis, x: &CVector) -> bool {
    if space.is_empty() {
        return true;
    }
    let cols: Vec<CVector> = space.basis.iter().map(|a| a * x).collect();
    rank(&CMatrix::from_columns(&cols), RANK_TOL) == space.len()
}

/// Random unitary `exp(iH)` with `H` Hermitian in `space` (which must be
/// closed under adjoints, as commutants of unitary systems are).
pub fn random_unitary_in<R: Rng + ?Sized>(space: &OperatorSubspaceBasis, rng: &mut R) -> Result<CMatrix> {
    let x = space.random_element(rng);
    let h = (&x + x.adjoint()) * c(0.5, 0.0);
    hermitian_function(&h, |t| Complex64::from_polar(1.0, t))
}

/// Random self-adjoint unitary `sign(H)` with `H` Hermitian in `space`.
pub fn random_involution_in<R: Rng + ?Sized>(space: &OperatorSubspaceBasis, rng: &mut R) -> Result<CMatrix> {
    let x = space.random_element(rng);
    let h = (&x + x.adjoint()) * c(0.5, 0.0);
    hermitian_function(&h, |t| c(if t < 0.0 { -1.0 } else { 1.0 }, 0.0))
}

/// `W ψ` for a random unitary `W` in the commutant; complete wandering
/// whenever `ψ` is.
pub fn random_complete_wandering<R: Rng + ?Sized>(
    psi: &CVector,
    comm: &OperatorSubspaceBasis,
    rng: &mut R,
) -> Result<CVector> {
    let w = random_unitary_in(comm, rng)?;
    Ok(w * psi)
}

/// The unique `V` with `V U_i ψ = U_i η`.
pub fn interpolation_unitary(u: &UnitarySystem, psi: &CVector, eta: &CVector) -> Result<CMatrix> {
    if !is_complete_wandering(u, psi) || !is_complete_wandering(u, eta) {
        return Err(Error::NotWandering);
    }
    let x = u.orbit(psi);
    let y = u.orbit(eta);
    let v = &y * x.adjoint();
    if !is_unitary(&v, 1e-10) {
        return Err(Error::Postcondition("interpolation unitary is not unitary".into()));
    }
    if !local_commutant(u, psi).contains(&v, 1e-10) {
        return Err(Error::Postcondition(
            "interpolation unitary outside the local commutant".into(),
        ));
    }
    Ok(v)
}

/// Whether `ψ₁ + λψ₂` has an orbit forming a basis (condition number below
/// `1e8`).
pub fn riesz_combination_check(u: &UnitarySystem, psi1: &CVector, psi2: &CVector, lambda: Complex64) -> bool {
    if u.len() != u.dim {
        return false;
    }
    let phi = psi1 + psi2 * lambda;
    inverse_condition(&u.orbit(&phi)) > 1e-8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub rho_is_wandering: bool,
    pub v_squared_is_identity: bool,
}

/// Tests `ρ = cos α·ψ + i sin α·η` for wandering and, independently,
/// `V² = I` for the interpolation unitary of `(ψ, η)`.
pub fn interpolation_pair_test(u: &UnitarySystem, psi: &CVector, eta: &CVector, alpha: f64) -> Result<PairVerdict> {
    if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha.to_string(),
            range: "(0, π/2)",
        });
    }
    let rho = psi * c(alpha.cos(), 0.0) + eta * c(0.0, alpha.sin());
    let v = interpolation_unitary(u, psi, eta)?;
    Ok(PairVerdict {
        rho_is_wandering: is_wandering(u, &rho),
        v_squared_is_identity: max_diff(&(&v * &v), &identity(u.dim)) <= 1e-10,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameVectorClass {
    Wandering,
    ParsevalFrameVector,
    Neither,
}

#[derive(Clone, Debug)]
pub struct FrameVectorReport {
    pub class: FrameVectorClass,
    /// `A ∈ C_ψ(U)` with `Aψ = x`, when `x` is a Parseval frame vector.
    pub factor: Option<CMatrix>,
    /// `A` is a partial isometry (co-isometry when the frame is complete).
    pub factor_checked: bool,
}

/// Classifies `x` against a known complete wandering vector `ψ`.
pub fn parseval_frame_vector_check(u: &UnitarySystem, psi: &CVector, x: &CVector) -> Result<FrameVectorReport> {
    if !is_complete_wandering(u, psi) {
        return Err(Error::NotWandering);
    }
    let ox = u.orbit(x);
    let s = &ox * ox.adjoint();
    let is_projection = max_diff(&(&s * &s), &s) <= 1e-10 && max_abs(&s) > 0.0;
    if !is_projection {
        return Ok(FrameVectorReport {
            class: FrameVectorClass::Neither,
            factor: None,
            factor_checked: false,
        });
    }
    let a = &ox * u.orbit(psi).adjoint();
    let complete = max_diff(&s, &identity(u.dim)) <= 1e-10;
    let partial_iso = max_diff(&(&a * a.adjoint() * &a), &a) <= 1e-10;
    let co_iso = !complete || max_diff(&(&a * a.adjoint()), &identity(u.dim)) <= 1e-10;
    let in_local = local_commutant(u, psi).contains(&a, 1e-10);
    let class = if is_wandering(u, x) {
        FrameVectorClass::Wandering
    } else {
        FrameVectorClass::ParsevalFrameVector
    };
    if complete && u.is_semigroup() && class != FrameVectorClass::Wandering {
        return Err(Error::Postcondition(
            "complete Parseval frame vector of a group system is not wandering".into(),
        ));
    }
    Ok(FrameVectorReport {
        class,
        factor: Some(a),
        factor_checked: partial_iso && co_iso && in_local,
    })
}

/// Spectral projection of a random Hermitian element of `space` onto its
/// eigenvalues below the median.
pub fn random_projection_in<R: Rng + ?Sized>(space: &OperatorSubspaceBasis, rng: &mut R) -> Result<CMatrix> {
    let x = space.random_element(rng);
    let h = (&x + x.adjoint()) * c(0.5, 0.0);
    let e = hermitian_eigen(&h)?;
    let cut = e.values[e.values.len() / 2];
    hermitian_function(&h, |t| c(if t < cut { 1.0 } else { 0.0 }, 0.0))
}

pub fn vector_from_pairs(pairs: &[[f64; 2]]) -> CVector {
    DVector::from_iterator(pairs.len(), pairs.iter().map(|p| c(p[0], p[1])))
}

pub fn vector_to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn regular_representations() {
        let z2 = regular_representation(&cyclic_table(2)).unwrap();
        let swap = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(z2.elements()[1], swap);
        let z4 = regular_representation(&cyclic_table(4)).unwrap();
        assert_eq!(z4.len(), 4);
        assert!(z4.is_semigroup());
        let shift = &z4.elements()[1];
        assert_eq!(shift * shift * shift * shift, identity(4));
        // identity not in row 0
        let t = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(regular_representation(&t).unwrap().elements()[0], identity(2));
    }

    #[test]
    fn bad_tables() {
        // Latin square with identity 0 but not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(regular_representation(&t), Err(Error::InvalidGroupTable(_))));
        assert!(regular_representation(&[vec![0, 0], vec![0, 1]]).is_err());
        assert!(regular_representation(&[vec![0, 1]]).is_err());
    }

    #[test]
    fn wandering_examples() {
        let z4 = regular_representation(&cyclic_table(4)).unwrap();
        assert!(is_complete_wandering(&z4, &basis_vector(4, 0)));
        let uniform = CVector::from_element(4, c(0.5, 0.0));
        assert!(!is_wandering(&z4, &uniform));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = crate::linalg::random_unit_vector(&mut rng, 4);
            let g = orbit_gram(&z4, &x);
            assert_eq!(is_wandering(&z4, &x), max_diff(&g, &identity(4)) <= 1e-10);
        }
    }

    #[test]
    fn local_commutant_dimensions() {
        for k in [2, 4, 8] {
            let u = regular_representation(&cyclic_table(k)).unwrap();
            let lc = local_commutant(&u, &basis_vector(k, 0));
            let cm = commutant(&u);
            assert_eq!(lc.len(), k);
            assert_eq!(cm.len(), k);
            assert!(cm.basis.iter().all(|b| lc.contains(b, 1e-10)));
        }
        let trivial = UnitarySystem::new(vec![identity(3)]).unwrap();
        assert_eq!(local_commutant(&trivial, &basis_vector(3, 1)).len(), 9);
        let flip = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let two = UnitarySystem::new(vec![identity(2), flip]).unwrap();
        let x = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        assert_eq!(local_commutant(&two, &x).len(), 2);
    }

    #[test]
    fn non_semigroup_system_shape() {
        let u = non_semigroup_system();
        assert!(!u.is_semigroup());
        assert!(is_complete_wandering(&u, &basis_vector(4, 0)));
        let lc = local_commutant(&u, &basis_vector(4, 0));
        assert!(separates(&lc, &basis_vector(4, 0)));
    }

    #[test]
    fn interpolation_unitary_examples() {
        let z2 = regular_representation(&cyclic_table(2)).unwrap();
        let e1 = basis_vector(2, 0);
        let e2 = basis_vector(2, 1);
        assert!(max_diff(&interpolation_unitary(&z2, &e1, &e1).unwrap(), &identity(2)) < 1e-14);
        let v = interpolation_unitary(&z2, &e1, &e2).unwrap();
        assert_eq!(v, z2.elements()[1]);
        assert!(max_diff(&(&v * &v), &identity(2)) < 1e-14);
        let r = interpolation_pair_test(&z2, &e1, &e2, std::f64::consts::FRAC_PI_4).unwrap();
        assert!(r.rho_is_wandering && r.v_squared_is_identity);
        assert!(interpolation_unitary(&z2, &e1, &CVector::from_element(2, c(0.5f64.sqrt(), 0.0))).is_err());
    }

    #[test]
    fn order_four_pair_fails_both_sides() {
        let z4 = regular_representation(&cyclic_table(4)).unwrap();
        let psi = basis_vector(4, 0);
        // right translation by one step: in the commutant, order 4
        let right = CMatrix::from_fn(
            4,
            4,
            |r, col| if r == (col + 3) % 4 { c(1.0, 0.0) } else { c(0.0, 0.0) },
        );
        assert!(commutant(&z4).contains(&right, 1e-12));
        let eta = &right * &psi;
        let r = interpolation_pair_test(&z4, &psi, &eta, std::f64::consts::FRAC_PI_4).unwrap();
        assert_eq!(
            r,
            PairVerdict {
                rho_is_wandering: false,
                v_squared_is_identity: false
            }
        );
    }

    #[test]
    fn riesz_examples() {
        let z2 = regular_representation(&cyclic_table(2)).unwrap();
        let e1 = basis_vector(2, 0);
        let e2 = basis_vector(2, 1);
        assert!(riesz_combination_check(&z2, &e1, &e2, c(0.0, 0.0)));
        assert!(riesz_combination_check(&z2, &e1, &e2, c(0.5, 0.0)));
        assert!(!riesz_combination_check(&z2, &e1, &e2, c(-1.0, 0.0)));
    }

    #[test]
    fn frame_vector_classes() {
        let z4 = regular_representation(&cyclic_table(4)).unwrap();
        let psi = basis_vector(4, 0);
        let r = parseval_frame_vector_check(&z4, &psi, &psi).unwrap();
        assert_eq!(r.class, FrameVectorClass::Wandering);
        assert!(max_diff(r.factor.as_ref().unwrap(), &identity(4)) < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cm = commutant(&z4);
        let p = random_projection_in(&cm, &mut rng).unwrap();
        let x = &p * &psi;
        let r = parseval_frame_vector_check(&z4, &psi, &x).unwrap();
        assert_eq!(r.class, FrameVectorClass::ParsevalFrameVector);
        assert!(r.factor_checked);

        let w = random_complete_wandering(&psi, &cm, &mut rng).unwrap();
        let r = parseval_frame_vector_check(&z4, &psi, &w).unwrap();
        assert_eq!(r.class, FrameVectorClass::Wandering);
        assert!(r.factor_checked);

        let junk = CVector::from_element(4, c(1.0, 0.0));
        assert_eq!(
            parseval_frame_vector_check(&z4, &psi, &junk).unwrap().class,
            FrameVectorClass::Neither
        );
    }
}
