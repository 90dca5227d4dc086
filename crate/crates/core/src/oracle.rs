//! Independent brute-force backends used to cross-validate the algebraic
//! routes: the adjoint matrix of `v ↦ B × v`, dense eigendecomposition,
//! Faddeev-LeVerrier characteristic polynomials, and a series exponential.
//!
//! Nothing here calls into [`crate::spectral`] or [`crate::decomp`];
//! independence from the code paths being checked is the point. Shared
//! code is limited to [`crate::ga_core`] arithmetic.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::ga_core::{GaError, Multivector, Tolerance};

#[derive(Debug, Clone, Error)]
pub enum OracleError {
    #[error("input must be a bivector")]
    NonBivector,
    #[error("input must be real (max imaginary coefficient {0:.3e})")]
    NonRealInput(f64),
    #[error("eigenvalue iteration failed to converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("eigenpair residual {residual:.3e} exceeds the contract {bound:.3e}")]
    ResidualTooLarge { residual: f64, bound: f64 },
    #[error(transparent)]
    Ga(#[from] GaError),
}

/// Relative eigenvalue-cluster width when grouping repeated values.
const CLUSTER_RTOL: f64 = 1e-7;
/// Pivot threshold (relative to the matrix scale) below which an eliminated
/// column counts toward the kernel.
const KERNEL_RTOL: f64 = 1e-6;
/// Residual contract for every returned eigenpair, relative to `‖M‖`.
const EIG_RESIDUAL_RTOL: f64 = 1e-10;

/// Matrix of the adjoint action `f(v) = B × v` on generator coordinates:
/// column `j` holds the coordinates of `commutator(B, e_{j+1})`.
pub fn adjoint_matrix(b: &Multivector) -> Result<DMatrix<f64>, OracleError> {
    let tol = Tolerance::default();
    if !b.is_bivector(tol) {
        return Err(OracleError::NonBivector);
    }
    if !b.is_real(tol) {
        return Err(OracleError::NonRealInput(b.max_imag()));
    }
    let n = b.sig().dim();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for col in 0..n {
        let e = Multivector::basis_vector(b.sig(), col)?;
        let image = b.commutator(&e)?;
        for (row, c) in image.vector_coords().iter().enumerate() {
            a[(row, col)] = c.re;
        }
    }
    Ok(a)
}

/// One eigenvalue cluster: the representative value, its algebraic
/// multiplicity, and a basis of the (possibly smaller) eigenspace.
#[derive(Debug, Clone)]
pub struct EigenClass {
    pub value: Complex64,
    pub algebraic: usize,
    pub vectors: Vec<DVector<Complex64>>,
}

#[derive(Debug, Clone)]
pub struct Eigen {
    pub classes: Vec<EigenClass>,
}

impl Eigen {
    /// All eigenvalues with algebraic multiplicity, flattened.
    pub fn values(&self) -> Vec<Complex64> {
        self.classes
            .iter()
            .flat_map(|c| std::iter::repeat(c.value).take(c.algebraic))
            .collect()
    }

    pub fn geometric_count(&self) -> usize {
        self.classes.iter().map(|c| c.vectors.len()).sum()
    }
}

/// Eigenvalues of a real square matrix (with algebraic multiplicity, in no
/// particular order), via the real Schur form.
pub fn eig_values(m: &DMatrix<f64>) -> Result<Vec<Complex64>, OracleError> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let max_iter = 100 * n.max(10);
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, max_iter)
        .ok_or(OracleError::NonConvergence {
            iterations: max_iter,
        })?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Full eigendecomposition of a real matrix: values clustered into classes,
/// each with a polished eigenvector basis meeting the residual contract
/// `‖Mv - λv‖ ≤ 1e-10 ‖M‖` per pair. Defective classes simply return fewer
/// vectors than their algebraic multiplicity.
pub fn eig(m: &DMatrix<f64>) -> Result<Eigen, OracleError> {
    let values = eig_values(m)?;
    let mc = m.map(|x| Complex64::new(x, 0.0));
    let scale = matrix_scale(m);
    let mut classes = Vec::new();
    for (value, algebraic) in cluster_values(&values, CLUSTER_RTOL) {
        let vectors = eigenvectors_for_complex(&mc, value, scale)?;
        classes.push(EigenClass {
            value,
            algebraic,
            vectors,
        });
    }
    Ok(Eigen { classes })
}

/// Eigenvector basis of a real matrix for one (complex) eigenvalue.
pub fn eigenvectors_for(
    m: &DMatrix<f64>,
    lambda: Complex64,
) -> Result<Vec<DVector<Complex64>>, OracleError> {
    let mc = m.map(|x| Complex64::new(x, 0.0));
    eigenvectors_for_complex(&mc, lambda, matrix_scale(m))
}

fn matrix_scale(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300)
}

fn eigenvectors_for_complex(
    mc: &DMatrix<Complex64>,
    lambda: Complex64,
    scale: f64,
) -> Result<Vec<DVector<Complex64>>, OracleError> {
    let n = mc.nrows();
    let mut shifted = mc.clone();
    for i in 0..n {
        shifted[(i, i)] -= lambda;
    }
    let mut basis = kernel_basis_complex(&shifted, KERNEL_RTOL);
    let bound = EIG_RESIDUAL_RTOL * scale;
    for v in &mut basis {
        let mut residual = (&shifted * &*v).norm() / v.norm();
        let mut rounds = 0;
        while residual > bound && rounds < 4 {
            inverse_iteration_step(&shifted, v, scale);
            residual = (&shifted * &*v).norm() / v.norm();
            rounds += 1;
        }
        if residual > bound {
            return Err(OracleError::ResidualTooLarge { residual, bound });
        }
        let norm = v.norm();
        *v /= Complex64::new(norm, 0.0);
    }
    Ok(basis)
}

/// One step of inverse iteration on the already-shifted matrix; a tiny
/// diagonal perturbation keeps the solve away from exact singularity.
fn inverse_iteration_step(shifted: &DMatrix<Complex64>, v: &mut DVector<Complex64>, scale: f64) {
    let n = shifted.nrows();
    let mut m = shifted.clone();
    let eps = Complex64::new(1e-13 * scale, 1e-13 * scale);
    for i in 0..n {
        m[(i, i)] += eps;
    }
    if let Some(x) = m.lu().solve(&*v) {
        let norm = x.norm();
        if norm > 0.0 {
            *v = x / Complex64::new(norm, 0.0);
        }
    }
}

/// Kernel basis by Gaussian elimination with full pivoting; pivots below
/// `rtol` times the largest entry count as zero.
fn kernel_basis_complex(m: &DMatrix<Complex64>, rtol: f64) -> Vec<DVector<Complex64>> {
    let n = m.nrows();
    let mut u = m.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let scale = u.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        // Zero matrix: the kernel is everything.
        return (0..n)
            .map(|i| {
                let mut v = DVector::zeros(n);
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
    }
    let threshold = rtol * scale;
    let mut rank = 0;
    for step in 0..n {
        let mut best = (step, step);
        let mut best_norm = 0.0;
        for i in step..n {
            for j in step..n {
                let norm = u[(i, j)].norm();
                if norm > best_norm {
                    best_norm = norm;
                    best = (i, j);
                }
            }
        }
        if best_norm <= threshold {
            break;
        }
        u.swap_rows(step, best.0);
        u.swap_columns(step, best.1);
        col_perm.swap(step, best.1);
        for i in (step + 1)..n {
            let factor = u[(i, step)] / u[(step, step)];
            for j in step..n {
                let above = u[(step, j)];
                u[(i, j)] -= factor * above;
            }
        }
        rank = step + 1;
    }
    let mut basis = Vec::with_capacity(n - rank);
    for free in rank..n {
        // Back-substitute with x[free] = 1, other free variables 0.
        let mut x = vec![Complex64::ZERO; n];
        x[free] = Complex64::new(1.0, 0.0);
        for i in (0..rank).rev() {
            let mut sum = Complex64::ZERO;
            for j in (i + 1)..n {
                sum += u[(i, j)] * x[j];
            }
            x[i] = -sum / u[(i, i)];
        }
        let mut v = DVector::zeros(n);
        for (permuted, value) in x.into_iter().enumerate() {
            v[col_perm[permuted]] = value;
        }
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        basis.push(v);
    }
    basis
}

/// Groups values whose distance is below `rtol · max(1, |λ|)`; returns
/// (representative mean, multiplicity) per cluster, in input order.
fn cluster_values(values: &[Complex64], rtol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &v in values {
        let mut placed = false;
        for (rep, members) in clusters.iter_mut() {
            if (v - *rep).norm() <= rtol * rep.norm().max(1.0) {
                members.push(v);
                let sum: Complex64 = members.iter().sum();
                *rep = sum / members.len() as f64;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((v, vec![v]));
        }
    }
    clusters
        .into_iter()
        .map(|(rep, members)| (rep, members.len()))
        .collect()
}

/// Monic characteristic polynomial `det(μI - M)` by Faddeev-LeVerrier:
/// returns `[1, c_1, ..., c_n]` in descending powers of μ.
pub fn char_poly_matrix(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    let mut aux = DMatrix::<f64>::identity(n, n);
    for k in 1..=n {
        let mk = m * &aux;
        let ck = -mk.trace() / k as f64;
        coeffs.push(ck);
        aux = mk + DMatrix::<f64>::identity(n, n) * ck;
    }
    coeffs
}

/// Genuine series exponential with scaling and squaring; truncation error
/// is far below 1e-14 relative (the argument is halved until its largest
/// coefficient is ≤ 0.5, and the series runs to machine precision).
pub fn exp_series(b: &Multivector) -> Result<Multivector, OracleError> {
    if !b.is_bivector(Tolerance::default()) {
        return Err(OracleError::NonBivector);
    }
    let norm = b.max_norm();
    let mut squarings = 0u32;
    let mut scaled = b.clone();
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
        scaled = &scaled / 2f64.powi(squarings as i32);
    }
    let mut sum = Multivector::one(b.sig());
    let mut term = Multivector::one(b.sig());
    for j in 1..=40 {
        term = &(&term * &scaled) / j as f64;
        sum = &sum + &term;
        if term.max_norm() <= 1e-17 * sum.max_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Rank by singular-value thresholding at `rel_tol` times the largest
/// singular value.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let svd = m.clone().svd(false, false);
    let max_sv = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if max_sv == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > rel_tol * max_sv)
        .count()
}
