//! Dense complex linear algebra helpers.
//!
//! Hermitian eigenproblems use a cyclic Jacobi sweep (deterministic, no
//! dependence on LAPACK-style shift strategies). Rank and nullspace decisions
//! go through nalgebra's SVD with a threshold relative to the largest
//! singular value.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = nalgebra::DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `max |A - B|` over entries; `inf` on shape mismatch.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    max_abs(&(a - b))
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    max_diff(&(u.adjoint() * u), &identity(u.ncols()))
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    u.is_square() && unitarity_defect(u) <= tol
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && max_diff(a, &a.adjoint()) <= tol
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Cyclic Jacobi for Hermitian `a`; stops once the off-diagonal Frobenius
/// norm is below `1e-12·‖a‖_F` (or exactly zero for the zero matrix).
pub fn hermitian_eigen(a: &CMatrix) -> Result<Eigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let scale = a.norm().max(f64::MIN_POSITIVE);
    if !is_hermitian(a, 1e-12 * scale.max(1.0)) {
        return Err(Error::InvalidInput("matrix is not Hermitian".into()));
    }
    let n = a.nrows();
    let mut m = (a + a.adjoint()) * c(0.5, 0.0);
    let mut v = identity(n);
    let off = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    for _sweep in 0..100 {
        if off(&m) <= 1e-12 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // G acts on the (p, q) plane: columns p and q of V mix.
                let g_pp = c(cs, 0.0);
                let g_pq = c(sn, 0.0);
                let g_qp = -phase.conj() * sn;
                let g_qq = phase.conj() * cs;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * g_pp + mkq * g_qp;
                    m[(k, q)] = mkp * g_pq + mkq * g_qq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
                    m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }
    if off(&m) > 1e-10 * scale {
        return Err(Error::Postcondition("Jacobi iteration did not converge".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    Ok(Eigen { values, vectors })
}

/// `f(A)` for Hermitian `A` via its eigendecomposition.
pub fn hermitian_function(a: &CMatrix, f: impl Fn(f64) -> Complex64) -> Result<CMatrix> {
    let e = hermitian_eigen(a)?;
    let n = a.nrows();
    let d = CMatrix::from_fn(n, n, |i, j| if i == j { f(e.values[i]) } else { c(0.0, 0.0) });
    Ok(&e.vectors * d * e.vectors.adjoint())
}

fn singular_values_padded(a: &CMatrix) -> (Vec<f64>, Option<CMatrix>) {
    // pad with zero rows so that the SVD exposes the full right space
    let (r, k) = a.shape();
    let padded = if r < k {
        let mut p = CMatrix::zeros(k, k);
        p.view_mut((0, 0), (r, k)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    (svd.singular_values.iter().copied().collect(), svd.v_t)
}

/// Numerical rank with threshold `rel_tol · σ_max`.
pub fn rank(a: &CMatrix, rel_tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let (sv, _) = singular_values_padded(a);
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Orthonormal basis (columns) of the nullspace of `a`.
pub fn nullspace(a: &CMatrix, rel_tol: f64) -> CMatrix {
    let k = a.ncols();
    if a.nrows() == 0 {
        return identity(k);
    }
    let (sv, v_t) = singular_values_padded(a);
    let v_t = v_t.expect("right singular vectors requested");
    let top = sv.iter().copied().fold(0.0, f64::max);
    let null: Vec<usize> = (0..sv.len())
        .filter(|&i| top == 0.0 || sv[i] <= rel_tol * top)
        .collect();
    CMatrix::from_fn(k, null.len(), |r, j| v_t[(null[j], r)].conj())
}

/// Smallest singular value over largest; 0 for singular input.
pub fn inverse_condition(a: &CMatrix) -> f64 {
    let sv = a.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    let bottom = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if top == 0.0 {
        0.0
    } else {
        bottom / top
    }
}

/// Least-squares residual of `b` against the column span of `basis`.
pub fn span_residual(basis: &CMatrix, b: &CVector) -> f64 {
    if basis.ncols() == 0 {
        return b.norm();
    }
    let q = basis.clone().qr().q();
    let proj = &q * (q.adjoint() * b);
    (b - proj).norm()
}

pub fn random_complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    })
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    let v = random_complex_matrix(rng, n, 1).column(0).into_owned();
    let norm = v.norm();
    v / c(norm, 0.0)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with phase-fixed `R`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let (q, r) = random_complex_matrix(rng, n, n).qr().unpack();
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() == 0.0 { c(1.0, 0.0) } else { d / d.norm() };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random positive semidefinite Hermitian matrix with trace `trace`.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, n: usize, trace: f64) -> CMatrix {
    let g = random_complex_matrix(rng, n, n);
    let p = &g * g.adjoint();
    let t = p.trace().re;
    p * c(trace / t, 0.0)
}

/// JSON form: `{"rows": r, "cols": c, "data": [[[re, im], ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<CMatrix> {
        if j.data.len() != j.rows || j.data.iter().any(|r| r.len() != j.cols) {
            return Err(Error::DimensionMismatch(format!(
                "declared {}x{} but data has a different shape",
                j.rows, j.cols
            )));
        }
        Ok(CMatrix::from_fn(j.rows, j.cols, |i, k| {
            c(j.data[i][k][0], j.data[i][k][1])
        }))
    }
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    MatrixJson::from(m)
}

pub fn matrix_from_json(j: MatrixJson) -> Result<CMatrix> {
    CMatrix::try_from(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn jacobi_matches_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..7 {
            let g = random_complex_matrix(&mut rng, n, n);
            let a = &g + g.adjoint();
            let e = hermitian_eigen(&a).unwrap();
            assert!(is_unitary(&e.vectors, 1e-12));
            let d = CMatrix::from_fn(n, n, |i, j| if i == j { c(e.values[i], 0.0) } else { c(0.0, 0.0) });
            assert!(max_diff(&(&e.vectors * d * e.vectors.adjoint()), &a) < 1e-11);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn jacobi_diagonal_and_degenerate() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0)]));
        assert_eq!(hermitian_eigen(&a).unwrap().values, vec![1.0, 2.0]);
        let z = CMatrix::zeros(3, 3);
        assert_eq!(hermitian_eigen(&z).unwrap().values, vec![0.0; 3]);
        let bad = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(hermitian_eigen(&bad).is_err());
    }

    #[test]
    fn rank_and_nullspace() {
        let a = CMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(rank(&a, 1e-10), 1);
        let n = nullspace(&a, 1e-10);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&a * &n)) < 1e-14);
        assert_eq!(nullspace(&CMatrix::zeros(2, 2), 1e-10).ncols(), 2);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(is_unitary(&random_unitary(&mut rng, 6), 1e-12));
    }

    #[test]
    fn json_roundtrip() {
        let m = CMatrix::from_row_slice(1, 2, &[c(1.0, -2.0), c(0.5, 0.0)]);
        let s = serde_json::to_string(&matrix_to_json(&m)).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"data":[[[1.0,-2.0],[0.5,0.0]]]}"#);
        let back = matrix_from_json(serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, m);
        let bad: MatrixJson = serde_json::from_str(r#"{"rows":2,"cols":2,"data":[[[1,0]]]}"#).unwrap();
        assert!(matrix_from_json(bad).is_err());
    }
}
