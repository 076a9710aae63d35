//! Finite frames, Naimark complements, and rank-one decompositions of
//! positive operators.
//!
//! A frame of `k` vectors in `ℂ^n` is stored as its `n×k` synthesis matrix
//! `F`; the analysis operator is `F*` and the frame operator `S = F F*`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigen, hermitian_function, identity, is_hermitian, max_abs, max_diff, random_unitary, CMatrix,
    CVector, MatrixJson,
};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct FrameMatrix {
    vectors: CMatrix,
}

impl FrameMatrix {
    /// Columns are the frame vectors.
    pub fn new(vectors: CMatrix) -> Result<Self> {
        if vectors.ncols() == 0 {
            return Err(Error::InvalidInput("a frame needs at least one vector".into()));
        }
        Ok(FrameMatrix { vectors })
    }

    pub fn from_columns(cols: &[CVector]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::InvalidInput("a frame needs at least one vector".into()));
        }
        Self::new(CMatrix::from_columns(cols))
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn count(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn synthesis(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> CVector {
        self.vectors.column(j).into_owned()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from(&self.vectors)
    }

    /// One line per vector: `j,re_0,im_0,re_1,im_1,...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j");
        for i in 0..self.dim() {
            let _ = write!(out, ",re_{i},im_{i}");
        }
        out.push('\n');
        for j in 0..self.count() {
            let _ = write!(out, "{j}");
            for i in 0..self.dim() {
                let z = self.vectors[(i, j)];
                let _ = write!(out, ",{:?},{:?}", z.re, z.im);
            }
            out.push('\n');
        }
        out
    }
}

impl TryFrom<MatrixJson> for FrameMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        FrameMatrix::new(CMatrix::try_from(j)?)
    }
}

pub fn frame_operator(f: &FrameMatrix) -> CMatrix {
    &f.vectors * f.vectors.adjoint()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
}

/// Extreme eigenvalues of `S`; `lower` is clamped at 0.
pub fn frame_bounds(f: &FrameMatrix) -> Result<FrameBounds> {
    let e = hermitian_eigen(&frame_operator(f))?;
    let upper = *e.values.last().expect("non-empty spectrum");
    let lower = e.values[0].max(0.0);
    let lower = if lower <= tol::ALGEBRAIC * upper.max(1.0) {
        0.0
    } else {
        lower
    };
    Ok(FrameBounds {
        lower,
        upper,
        is_frame: lower > 0.0,
    })
}

/// `‖S - I‖_max`.
pub fn parseval_deviation(f: &FrameMatrix) -> f64 {
    max_diff(&frame_operator(f), &identity(f.dim()))
}

pub fn is_parseval(f: &FrameMatrix, tol: f64) -> bool {
    parseval_deviation(f) <= tol
}

/// `G` with `(F* | G*)` unitary, so that `x_j ⊕ y_j` is an orthonormal
/// basis of `ℂ^k`.
pub fn naimark_complement(f: &FrameMatrix) -> Result<CMatrix> {
    let dev = parseval_deviation(f);
    if dev > tol::ALGEBRAIC {
        return Err(Error::NotParseval(dev));
    }
    let k = f.count();
    let q = identity(k) - f.vectors.adjoint() * &f.vectors;
    let e = hermitian_eigen(&q)?;
    let cols: Vec<CVector> = (0..k)
        .filter(|&i| e.values[i] > 0.5)
        .map(|i| e.vectors.column(i).into_owned())
        .collect();
    if cols.len() != k - f.dim() {
        return Err(Error::Postcondition(format!(
            "complement has dimension {}, expected {}",
            cols.len(),
            k - f.dim()
        )));
    }
    let g = if cols.is_empty() {
        CMatrix::zeros(0, k)
    } else {
        CMatrix::from_columns(&cols).adjoint()
    };
    if naimark_defect(f, &g) > tol::ALGEBRAIC {
        return Err(Error::Postcondition("assembled dilation is not unitary".into()));
    }
    Ok(g)
}

/// `‖U*U - I‖_max` for `U = (F* | G*)`.
pub fn naimark_defect(f: &FrameMatrix, g: &CMatrix) -> f64 {
    let k = f.count();
    let mut u = CMatrix::zeros(k, f.dim() + g.nrows());
    u.view_mut((0, 0), (k, f.dim())).copy_from(&f.vectors.adjoint());
    u.view_mut((0, f.dim()), (k, g.nrows())).copy_from(&g.adjoint());
    max_diff(&(u.adjoint() * &u), &identity(u.ncols()))
}

/// `‖G F*‖_max`.
pub fn disjointness_defect(f: &FrameMatrix, g: &FrameMatrix) -> Result<f64> {
    if f.count() != g.count() {
        return Err(Error::DimensionMismatch(format!(
            "frames have {} and {} vectors",
            f.count(),
            g.count()
        )));
    }
    Ok(max_abs(&(&g.vectors * f.vectors.adjoint())))
}

pub fn strongly_disjoint(f: &FrameMatrix, g: &FrameMatrix) -> Result<bool> {
    Ok(disjointness_defect(f, g)? <= tol::ALGEBRAIC)
}

/// Encodes `x` and `y` into `c = F*x + G*y` and decodes with `F` and `G`.
pub fn multiplex_roundtrip(f: &FrameMatrix, g: &FrameMatrix, x: &CVector, y: &CVector) -> Result<(CVector, CVector)> {
    for fr in [f, g] {
        let dev = parseval_deviation(fr);
        if dev > tol::ALGEBRAIC {
            return Err(Error::NotParseval(dev));
        }
    }
    let d = disjointness_defect(f, g)?;
    if d > tol::ALGEBRAIC {
        return Err(Error::NotDisjoint(d));
    }
    if x.len() != f.dim() || y.len() != g.dim() {
        return Err(Error::DimensionMismatch(
            "signal length differs from frame dimension".into(),
        ));
    }
    let coeffs = f.vectors.adjoint() * x + g.vectors.adjoint() * y;
    Ok((&f.vectors * &coeffs, &g.vectors * &coeffs))
}

/// Whether `eigs` majorizes `weights` (descending partial sums, zero padded,
/// equal totals), up to `1e-10`.
pub fn majorization_check(eigs: &[f64], weights: &[f64]) -> bool {
    if eigs
        .iter()
        .chain(weights)
        .any(|&v| v < -tol::ALGEBRAIC || !v.is_finite())
    {
        return false;
    }
    let m = eigs.len().max(weights.len());
    let sorted = |v: &[f64]| {
        let mut s = v.to_vec();
        s.resize(m, 0.0);
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let (a, b) = (sorted(eigs), sorted(weights));
    let (mut sa, mut sb) = (0.0, 0.0);
    for i in 0..m {
        sa += a[i];
        sb += b[i];
        if sa < sb - tol::ALGEBRAIC {
            return false;
        }
    }
    (sa - sb).abs() <= tol::ALGEBRAIC
}

/// `B ≈ Σ c_i u_i u_i*` with unit `u_i`.
#[derive(Clone, Debug)]
pub struct RankOneDecomposition {
    pub weights: Vec<f64>,
    pub units: Vec<CVector>,
}

impl RankOneDecomposition {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.units.first().map_or(0, |u| u.len());
        let mut out = CMatrix::zeros(n, n);
        for (w, u) in self.weights.iter().zip(&self.units) {
            out += u * u.adjoint() * c(*w, 0.0);
        }
        out
    }

    pub fn residual(&self, b: &CMatrix) -> f64 {
        max_diff(&self.reconstruct(), b)
    }

    /// Largest `| ‖u_i‖ - 1 |`.
    pub fn norm_defect(&self) -> f64 {
        self.units.iter().map(|u| (u.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn as_frame(&self) -> Result<FrameMatrix> {
        FrameMatrix::from_columns(&self.units)
    }
}

fn check_positive(b: &CMatrix) -> Result<Vec<f64>> {
    let scale = b.norm().max(1.0);
    if !is_hermitian(b, tol::RAW * scale) {
        return Err(Error::InvalidInput("matrix is not Hermitian".into()));
    }
    let e = hermitian_eigen(b)?;
    if e.values[0] < -tol::ALGEBRAIC * scale {
        return Err(Error::InvalidInput(format!(
            "matrix is not positive (eigenvalue {:.3e})",
            e.values[0]
        )));
    }
    Ok(e.values)
}

/// Unitary `W` (`m×m`, real) with `diag(W* diag(λ) W) = targets`, where
/// `λ` majorizes `targets` and both have length `m`.
fn schur_horn_rotations(lambda: &[f64], targets: &[f64]) -> Vec<Vec<f64>> {
    let m = lambda.len();
    // active vectors (coordinates in ℝ^m) and their Rayleigh values
    let mut active: Vec<(Vec<f64>, f64)> = (0..m)
        .map(|i| {
            let mut v = vec![0.0; m];
            v[i] = 1.0;
            (v, lambda[i])
        })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| targets[j].total_cmp(&targets[i]));
    let mut columns = vec![Vec::new(); m];
    for &ti in &order {
        let t = targets[ti];
        // stable: equal values keep lower original index first
        active.sort_by(|x, y| y.1.total_cmp(&x.1));
        let last = active.len() - 1;
        let j = (0..last).find(|&j| active[j].1 >= t && t >= active[j + 1].1);
        let Some(j) = j else {
            let idx = if t >= active[0].1 { 0 } else { last };
            columns[ti] = active.remove(idx).0;
            continue;
        };
        let (a, b) = (active[j].1, active[j + 1].1);
        let cos2 = if a - b > 0.0 {
            ((t - b) / (a - b)).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let (cs, sn) = (cos2.sqrt(), (1.0 - cos2).sqrt());
        let (vj, vk) = (active[j].0.clone(), active[j + 1].0.clone());
        let chosen: Vec<f64> = vj.iter().zip(&vk).map(|(p, q)| cs * p + sn * q).collect();
        let rest: Vec<f64> = vj.iter().zip(&vk).map(|(p, q)| -sn * p + cs * q).collect();
        columns[ti] = chosen;
        active[j] = (rest, a + b - t);
        active.remove(j + 1);
    }
    columns
}

/// Rank-one decomposition with prescribed positive weights via Schur–Horn
/// synthesis.
pub fn weighted_decomposition(b: &CMatrix, weights: &[f64]) -> Result<RankOneDecomposition> {
    if weights.is_empty() || weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
        return Err(Error::InvalidInput("weights must be positive".into()));
    }
    let eig_vals = check_positive(b)?;
    let trace = b.trace().re;
    let total: f64 = weights.iter().sum();
    if (total - trace).abs() > tol::SYNTHESIS * trace.abs().max(1.0) {
        return Err(Error::Infeasible(format!("weights sum to {total}, trace is {trace}")));
    }
    if !majorization_check(&eig_vals, weights) {
        return Err(Error::Infeasible("eigenvalues do not majorize the weights".into()));
    }
    let n = b.nrows();
    let k = weights.len();
    let m = n.max(k);
    let e = hermitian_eigen(b)?;
    // descending spectrum, clamped, padded
    let mut lambda: Vec<f64> = e.values.iter().rev().map(|v| v.max(0.0)).collect();
    lambda.resize(m, 0.0);
    let mut targets = weights.to_vec();
    targets.resize(m, 0.0);
    let w = schur_horn_rotations(&lambda, &targets);

    let mut units = Vec::with_capacity(k);
    for (i, &ci) in weights.iter().enumerate() {
        let mut f = CVector::zeros(n);
        for (r, &lam) in lambda.iter().enumerate().take(n) {
            // eigenvector for λ_r is column n-1-r of the ascending basis
            let col = e.vectors.column(n - 1 - r);
            f += col * c(lam.sqrt() * w[i][r], 0.0);
        }
        units.push(f / c(ci.sqrt(), 0.0));
    }
    let dec = RankOneDecomposition {
        weights: weights.to_vec(),
        units,
    };
    let res = dec.residual(b);
    if res > tol::SYNTHESIS * trace.max(1.0) || dec.norm_defect() > tol::SYNTHESIS {
        return Err(Error::Postcondition(format!("synthesis residual {res:.3e}")));
    }
    Ok(dec)
}

/// `B = Σ_{i<k} u_i u_i*` with unit `u_i`, for positive `B` of trace `k`.
pub fn projection_decomposition(b: &CMatrix, k: usize) -> Result<RankOneDecomposition> {
    let trace = b.trace().re;
    if (trace - k as f64).abs() > tol::SYNTHESIS * trace.abs().max(1.0) {
        return Err(Error::Infeasible(format!("trace {trace} does not equal k = {k}")));
    }
    weighted_decomposition(b, &vec![1.0; k])
}

#[derive(Clone, Debug)]
pub struct Etf {
    pub frame: FrameMatrix,
    /// Tight frame bound.
    pub bound: f64,
}

/// Tight frame `{T x_j}` of `k` vectors on the ellipsoid `T·S₁`, with bound
/// `K = k / tr(T^{-2})`.
pub fn etf_construct(t: &CMatrix, k: usize) -> Result<Etf> {
    let n = t.nrows();
    if !t.is_square() {
        return Err(Error::DimensionMismatch("T must be square".into()));
    }
    if k < n {
        return Err(Error::InvalidInput(format!("need k >= n, got k = {k}, n = {n}")));
    }
    let eigs = check_positive(t)?;
    if eigs[0] <= tol::RAW * eigs[n - 1].max(1.0) {
        return Err(Error::Singular);
    }
    let t_inv2 = hermitian_function(t, |x| c(1.0 / (x * x), 0.0))?;
    let bound = k as f64 / t_inv2.trace().re;
    let s = &t_inv2 * c(bound, 0.0);
    let s = (&s + s.adjoint()) * c(0.5, 0.0);
    let dec = projection_decomposition(&s, k)?;
    let frame = FrameMatrix::new(t * dec.as_frame()?.synthesis())?;
    Ok(Etf { frame, bound })
}

/// `max |Σ f_j f_j* - K I|`.
pub fn tightness_defect(f: &FrameMatrix, bound: f64) -> f64 {
    max_diff(&frame_operator(f), &(identity(f.dim()) * c(bound, 0.0)))
}

/// The first `n` rows of a Haar unitary of size `k`.
pub fn random_parseval_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> FrameMatrix {
    let u = random_unitary(rng, k);
    FrameMatrix::new(u.rows(0, n).into_owned()).expect("k >= 1")
}

/// Two Parseval frames of `k` vectors from disjoint row blocks of one unitary.
pub fn random_disjoint_pair<R: Rng + ?Sized>(
    rng: &mut R,
    n1: usize,
    n2: usize,
    k: usize,
) -> (FrameMatrix, FrameMatrix) {
    let u = random_unitary(rng, k);
    (
        FrameMatrix::new(u.rows(0, n1).into_owned()).expect("k >= 1"),
        FrameMatrix::new(u.rows(n1, n2).into_owned()).expect("k >= 1"),
    )
}

pub fn complex_vec(values: &[Complex64]) -> CVector {
    CVector::from_column_slice(values)
}
