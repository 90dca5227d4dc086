//! The `W_j` ladder of a bivector, the outer exponential, the scalar
//! characteristic polynomial and the spectrum.
//!
//! For a bivector `B` the ladder is `W_j = B^∧j / j!`; the largest `k` with
//! `W_k ≠ 0` fixes the effective dimension `2k`, and `W_k` is the effective
//! pseudoscalar of the subspace in which `B` acts. The outer exponential
//! `Λ^B = Σ W_j` is a finite sum, and the spectrum of `B` consists of the
//! roots of the scalar polynomial `P_2k(μ) = M_μ M̃_μ` with
//! `M_μ = Σ (-μ)^j W_{k-j}`. Since `P_2k` is even it is treated as a degree-k
//! polynomial `Q_k(λ)` in `λ = μ²` whose coefficients are the scalars
//! `⟨W_j²⟩₀`; roots are found on the companion matrix and polished by Newton
//! steps, and the result is cross-checked against the adjoint-matrix
//! eigenvalues from [`crate::oracle`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::ga_core::{GaError, Multivector, Tolerance};
use crate::oracle::{self, OracleError};

#[derive(Debug, Clone, Error)]
pub enum SpectralError {
    #[error("input must be a bivector (grade-2 support only)")]
    NonBivector,
    #[error("operation requires a real bivector (max imaginary coefficient {0:.3e})")]
    NonRealInput(f64),
    #[error("internal consistency check failed: {what} (residual {residual:.3e})")]
    InternalConsistency { what: String, residual: f64 },
    #[error("root residual {residual:.3e} above bound {bound:.3e} after polishing")]
    RootResidual { residual: f64, bound: f64 },
    #[error("spectrum disagrees with the adjoint-matrix oracle: {detail}")]
    OracleMismatch { detail: String },
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Tolerances controlling the spectrum computation.
#[derive(Debug, Clone, Copy)]
pub struct SpectralConfig {
    pub tol: Tolerance,
    /// Relative width for clustering roots into multiplicities; root
    /// sensitivity scales worse than arithmetic error, hence separate.
    pub cluster_tol: f64,
    /// Cross-check the eigenvalue pairs against the adjoint-matrix oracle.
    pub oracle_check: bool,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            tol: Tolerance::default(),
            cluster_tol: 1e-7,
            oracle_check: true,
        }
    }
}

/// Relative tolerance for the built-in verification of the characteristic
/// polynomial against directly expanded `M_μ M̃_μ` samples.
const CHAR_POLY_CHECK_RTOL: f64 = 1e-8;
/// Relative tolerance when matching spectrum pairs against oracle
/// eigenvalues (loose enough for the defective-eigenvalue splitting of QR).
const ORACLE_MATCH_RTOL: f64 = 5e-7;

/// The wedge-power ladder `[W_0 = 1, W_1 = B, ..., W_k]`.
#[derive(Debug, Clone)]
pub struct WLadder {
    terms: Vec<Multivector>,
    wk_squared: Complex64,
}

impl WLadder {
    /// `W_j`; panics if `j > k` (callers index within the ladder).
    pub fn term(&self, j: usize) -> &Multivector {
        &self.terms[j]
    }

    pub fn terms(&self) -> &[Multivector] {
        &self.terms
    }

    /// Effective half-dimension: the largest `j` with `W_j ≠ 0`.
    pub fn k(&self) -> usize {
        self.terms.len() - 1
    }

    /// The scalar `W_k²` (real for real input).
    pub fn wk_squared(&self) -> Complex64 {
        self.wk_squared
    }

    /// `Λ^B = Σ W_j`.
    pub fn outer_exp(&self) -> Multivector {
        let mut sum = self.terms[0].clone();
        for t in &self.terms[1..] {
            sum = &sum + t;
        }
        sum
    }

    /// `Λ^{-B} = Σ (-1)^j W_j`.
    pub fn outer_exp_neg(&self) -> Multivector {
        let mut sum = self.terms[0].clone();
        for (j, t) in self.terms.iter().enumerate().skip(1) {
            if j % 2 == 0 {
                sum = &sum + t;
            } else {
                sum = &sum - t;
            }
        }
        sum
    }

    /// Even part of the outer exponential, `cos∧(B) = Σ W_{2j}`.
    pub fn outer_cos(&self) -> Multivector {
        let mut sum = self.terms[0].clone();
        for t in self.terms.iter().skip(2).step_by(2) {
            sum = &sum + t;
        }
        sum
    }

    /// Odd part, `sin∧(B) = Σ W_{2j+1}`.
    pub fn outer_sin(&self) -> Multivector {
        let mut sum = Multivector::zero(self.terms[0].sig());
        for t in self.terms.iter().skip(1).step_by(2) {
            sum = &sum + t;
        }
        sum
    }

    /// `M_μ = Σ_j (-μ)^j W_{k-j}`, the operator whose kernel holds the
    /// eigenvectors for μ.
    pub fn m_mu(&self, mu: Complex64) -> Multivector {
        let k = self.k();
        let mut sum = Multivector::zero(self.terms[0].sig());
        let mut power = Complex64::new(1.0, 0.0);
        for j in 0..=k {
            sum = &sum + &(&self.terms[k - j] * power);
            power *= -mu;
        }
        sum
    }
}

/// An eigenvalue pair `±μ` of the adjoint action, with its multiplicity as
/// a root of `Q_k`. `μ` follows the branch convention `Im(μ) ≥ 0`, ties
/// broken by `Re(μ) ≥ 0`; a pseudo-null pair is stored as exactly zero.
#[derive(Debug, Clone, Copy)]
pub struct EigenvaluePair {
    pub mu: Complex64,
    pub lambda: Complex64,
    pub multiplicity: usize,
}

impl EigenvaluePair {
    pub fn is_zero(&self) -> bool {
        self.mu == Complex64::ZERO
    }
}

/// Ladder, characteristic-polynomial coefficients and eigenvalue pairs of a
/// real bivector.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub ladder: WLadder,
    /// `c_j = ⟨W_j²⟩₀` for `j = 0..=k`; the monic polynomial is
    /// `Q_k(λ) = Σ_j (-1)^j c_j λ^{k-j}` with `c_0 = 1`.
    pub q_coeffs: Vec<f64>,
    /// Pairs sorted by `(|μ|, arg μ)` ascending; multiplicities sum to `k`.
    pub pairs: Vec<EigenvaluePair>,
    pub is_pseudo_null: bool,
}

impl SpectralData {
    pub fn effective_dimension(&self) -> usize {
        2 * self.ladder.k()
    }

    /// Nonzero pairs only (the pseudo-null pair is handled separately by
    /// the null-limit construction).
    pub fn nonzero_pairs(&self) -> impl Iterator<Item = &EigenvaluePair> {
        self.pairs.iter().filter(|p| !p.is_zero())
    }
}

/// Computes the ladder of `b`, stopping at the largest nonzero wedge power.
/// Accepts complex bivectors (used internally for `B/μ`); the realness of
/// `W_k²` is asserted only for real input.
pub fn w_ladder(b: &Multivector) -> Result<WLadder, SpectralError> {
    w_ladder_with(b, Tolerance::default())
}

pub fn w_ladder_with(b: &Multivector, tol: Tolerance) -> Result<WLadder, SpectralError> {
    if !b.is_bivector(tol) {
        return Err(SpectralError::NonBivector);
    }
    let b_norm = b.max_norm();
    let mut terms = vec![Multivector::one(b.sig())];
    if b_norm > tol.abs_eps {
        terms.push(b.clone());
        let half_dim = b.sig().dim() / 2;
        for j in 2..=half_dim {
            let prev = &terms[j - 1];
            let candidate = &prev.wedge(b)? / j as f64;
            // W_{j} counts as the (verified) zero past the top power when it
            // is negligible against the cancellation scale of the wedge.
            if candidate.max_norm() <= tol.threshold(prev.max_norm() * b_norm) {
                break;
            }
            terms.push(candidate);
        }
    }
    let wk = terms.last().expect("ladder is never empty");
    let square = wk.geometric_product(wk)?;
    let scale = wk.max_norm() * wk.max_norm();
    let non_scalar = (&square - &square.grade_select(0)).max_norm();
    if non_scalar > tol.threshold(scale).max(1e-9 * scale) {
        return Err(SpectralError::InternalConsistency {
            what: "effective pseudoscalar square has non-scalar part".into(),
            residual: non_scalar,
        });
    }
    let wk_squared = square.scalar_part();
    if b.is_real(tol) && wk_squared.im.abs() > tol.threshold(scale).max(1e-9 * scale) {
        return Err(SpectralError::InternalConsistency {
            what: "W_k^2 must be real for a real bivector".into(),
            residual: wk_squared.im.abs(),
        });
    }
    Ok(WLadder { terms, wk_squared })
}

/// The outer exponential `Λ^B = Σ_{j=0}^{k} W_j` (always a finite sum).
pub fn outer_exp(b: &Multivector) -> Result<Multivector, SpectralError> {
    Ok(w_ladder(b)?.outer_exp())
}

/// `|Λ^B|² = Λ^B Λ^{-B}`, asserted numerically scalar before returning.
pub fn outer_norm_sq(b: &Multivector) -> Result<Complex64, SpectralError> {
    outer_norm_sq_with(b, Tolerance::default())
}

pub fn outer_norm_sq_with(b: &Multivector, tol: Tolerance) -> Result<Complex64, SpectralError> {
    let ladder = w_ladder_with(b, tol)?;
    let pos = ladder.outer_exp();
    let neg = ladder.outer_exp_neg();
    let product = pos.geometric_product(&neg)?;
    let scale = pos.max_norm() * neg.max_norm();
    let non_scalar = (&product - &product.grade_select(0)).max_norm();
    if non_scalar > tol.threshold(scale).max(1e-9 * scale) {
        return Err(SpectralError::InternalConsistency {
            what: "|Λ^B|² has a non-scalar residue".into(),
            residual: non_scalar,
        });
    }
    Ok(product.scalar_part())
}

/// Coefficients `c_j = ⟨W_j²⟩₀` of the characteristic polynomial, verified
/// against directly expanded `M_μ M̃_μ` at sample values of μ.
pub fn char_poly(b: &Multivector) -> Result<Vec<f64>, SpectralError> {
    let tol = Tolerance::default();
    let ladder = w_ladder_with(b, tol)?;
    if !b.is_real(tol) {
        return Err(SpectralError::NonRealInput(b.max_imag()));
    }
    let coeffs = char_poly_from_ladder(&ladder)?;
    verify_char_poly(&ladder, &coeffs)?;
    Ok(coeffs)
}

fn char_poly_from_ladder(ladder: &WLadder) -> Result<Vec<f64>, SpectralError> {
    let mut coeffs = Vec::with_capacity(ladder.k() + 1);
    for j in 0..=ladder.k() {
        let wj = ladder.term(j);
        let square = wj.geometric_product(wj)?;
        let c = square.scalar_part();
        let scale = wj.max_norm() * wj.max_norm();
        if c.im.abs() > 1e-9 * scale.max(1.0) {
            return Err(SpectralError::InternalConsistency {
                what: format!("⟨W_{j}²⟩₀ is not real"),
                residual: c.im.abs(),
            });
        }
        coeffs.push(c.re);
    }
    Ok(coeffs)
}

/// Evaluates `P_2k(μ) = Σ_j (-1)^j c_j μ^{2(k-j)}` and compares it with the
/// scalar of the directly expanded product `M_μ M̃_μ`.
fn verify_char_poly(ladder: &WLadder, coeffs: &[f64]) -> Result<(), SpectralError> {
    let k = ladder.k();
    let samples = [
        Complex64::new(0.83, 0.41),
        Complex64::new(0.0, 1.3),
        Complex64::new(0.57, 0.0),
    ];
    for mu in samples {
        let m = ladder.m_mu(mu);
        let product = m.geometric_product(&m.reverse())?;
        let scale = m.max_norm() * m.max_norm();
        let non_scalar = (&product - &product.grade_select(0)).max_norm();
        if non_scalar > CHAR_POLY_CHECK_RTOL * scale.max(1.0) {
            return Err(SpectralError::InternalConsistency {
                what: "M_μ M̃_μ has a non-scalar part".into(),
                residual: non_scalar,
            });
        }
        let mut expected = Complex64::ZERO;
        let mut eval_scale = 0.0f64;
        for (j, &c) in coeffs.iter().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let term = mu.powu(2 * (k - j) as u32) * c * sign;
            expected += term;
            eval_scale = eval_scale.max(term.norm());
        }
        let diff = (product.scalar_part() - expected).norm();
        if diff > CHAR_POLY_CHECK_RTOL * eval_scale.max(scale).max(1.0) {
            return Err(SpectralError::InternalConsistency {
                what: format!("char poly disagrees with M_μ M̃_μ at μ = {mu}"),
                residual: diff,
            });
        }
    }
    Ok(())
}

/// The spectrum of a real bivector: eigenvalue pairs `±μ_j`, multiplicities,
/// and the pseudo-null classification.
pub fn spectrum(b: &Multivector) -> Result<SpectralData, SpectralError> {
    spectrum_with(b, &SpectralConfig::default())
}

pub fn spectrum_with(b: &Multivector, config: &SpectralConfig) -> Result<SpectralData, SpectralError> {
    if !b.is_real(config.tol) {
        return Err(SpectralError::NonRealInput(b.max_imag()));
    }
    let ladder = w_ladder_with(b, config.tol)?;
    let q_coeffs = char_poly_from_ladder(&ladder)?;
    verify_char_poly(&ladder, &q_coeffs)?;
    let k = ladder.k();

    let mut pairs: Vec<EigenvaluePair> = Vec::new();
    let mut is_pseudo_null = false;
    if k > 0 {
        // Monic Q_k(λ) = λ^k + a_1 λ^{k-1} + ... + a_k with a_j = (-1)^j c_j.
        let monic: Vec<f64> = q_coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
            .collect();
        let mut roots = companion_roots(&monic)?;
        for root in &mut roots {
            *root = polish_root(&monic, *root)?;
        }
        let lambda_scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let zero_thr = config.cluster_tol * lambda_scale.max(1.0);
        for (lambda, multiplicity) in cluster_roots(&roots, config.cluster_tol) {
            let (mu, lambda) = if lambda.norm() <= zero_thr {
                is_pseudo_null = true;
                (Complex64::ZERO, Complex64::ZERO)
            } else {
                (principal_mu(lambda), lambda)
            };
            pairs.push(EigenvaluePair {
                mu,
                lambda,
                multiplicity,
            });
        }
        pairs.sort_by(|a, b| {
            (a.mu.norm(), a.mu.arg())
                .partial_cmp(&(b.mu.norm(), b.mu.arg()))
                .unwrap()
        });

        // The pseudo-null flag must agree with W_k² being numerically zero
        // (the product of all squared eigenvalues).
        let wk_scale = ladder.term(k).max_norm().powi(2);
        let wk_zero = ladder.wk_squared().norm() <= 1e-6 * wk_scale.max(1e-300);
        if wk_zero != is_pseudo_null {
            return Err(SpectralError::InternalConsistency {
                what: "pseudo-null classification disagrees between W_k² and the root set".into(),
                residual: ladder.wk_squared().norm(),
            });
        }
    }

    let data = SpectralData {
        ladder,
        q_coeffs,
        pairs,
        is_pseudo_null,
    };
    if config.oracle_check {
        cross_check_oracle(b, &data)?;
    }
    Ok(data)
}

/// Roots of a monic real polynomial `[1, a_1, ..., a_k]` via the companion
/// matrix.
fn companion_roots(monic: &[f64]) -> Result<Vec<Complex64>, SpectralError> {
    let k = monic.len() - 1;
    if k == 0 {
        return Ok(Vec::new());
    }
    if k == 1 {
        return Ok(vec![Complex64::new(-monic[1], 0.0)]);
    }
    let mut companion = DMatrix::<f64>::zeros(k, k);
    for i in 1..k {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..k {
        companion[(i, k - 1)] = -monic[k - i];
    }
    Ok(oracle::eig_values(&companion)?)
}

fn eval_poly(monic: &[f64], x: Complex64) -> (Complex64, Complex64, f64) {
    let mut value = Complex64::ZERO;
    let mut derivative = Complex64::ZERO;
    let mut scale = 0.0f64;
    for &c in monic {
        derivative = derivative * x + value;
        value = value * x + c;
        scale = scale * x.norm() + c.abs();
    }
    (value, derivative, scale)
}

/// One-root Newton polish; converges quadratically for simple roots and
/// linearly (which is still plenty here) for clustered ones.
fn polish_root(monic: &[f64], mut root: Complex64) -> Result<Complex64, SpectralError> {
    let mut best = root;
    let mut best_residual = f64::INFINITY;
    for _ in 0..60 {
        let (value, derivative, scale) = eval_poly(monic, root);
        let residual = value.norm();
        if residual < best_residual {
            best_residual = residual;
            best = root;
        }
        if residual <= 1e-16 * scale.max(1e-300) || derivative.norm() == 0.0 {
            break;
        }
        let step = value / derivative;
        root -= step;
        if step.norm() <= 1e-16 * root.norm().max(1.0) {
            break;
        }
    }
    let (_, _, scale) = eval_poly(monic, best);
    let bound = 1e-10 * scale.max(1e-300);
    if best_residual > bound {
        return Err(SpectralError::RootResidual {
            residual: best_residual,
            bound,
        });
    }
    Ok(best)
}

fn cluster_roots(roots: &[Complex64], cluster_tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &root in roots {
        let mut placed = false;
        for (rep, members) in clusters.iter_mut() {
            if (root - *rep).norm() <= cluster_tol * rep.norm().max(1.0) {
                members.push(root);
                let sum: Complex64 = members.iter().sum();
                *rep = sum / members.len() as f64;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((root, vec![root]));
        }
    }
    clusters
        .into_iter()
        .map(|(rep, members)| (rep, members.len()))
        .collect()
}

/// Square root of λ on the fixed branch: `Im(μ) ≥ 0`, ties broken by
/// `Re(μ) ≥ 0`. The sign of μ is immaterial mathematically; the branch is
/// fixed for reproducibility.
fn principal_mu(lambda: Complex64) -> Complex64 {
    let mu = lambda.sqrt();
    if mu.im < 0.0 || (mu.im == 0.0 && mu.re < 0.0) {
        -mu
    } else {
        mu
    }
}

/// Matches the `±μ_j` multiset (with multiplicity) against the nonzero
/// adjoint-matrix eigenvalues; everything left over must be numerically
/// zero (the kernel of the adjoint plus any pseudo-null directions).
fn cross_check_oracle(b: &Multivector, data: &SpectralData) -> Result<(), SpectralError> {
    let a = oracle::adjoint_matrix(b)?;
    let oracle_values = oracle::eig_values(&a)?;
    let mut used = vec![false; oracle_values.len()];
    let mu_scale = data
        .pairs
        .iter()
        .map(|p| p.mu.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    for pair in data.nonzero_pairs() {
        for target in [pair.mu, -pair.mu] {
            for _ in 0..pair.multiplicity {
                let tol = ORACLE_MATCH_RTOL * target.norm().max(1.0);
                let found = oracle_values
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !used[*i])
                    .min_by(|(_, x), (_, y)| {
                        (**x - target)
                            .norm()
                            .partial_cmp(&(**y - target).norm())
                            .unwrap()
                    });
                match found {
                    Some((i, value)) if (value - target).norm() <= tol => used[i] = true,
                    _ => {
                        return Err(SpectralError::OracleMismatch {
                            detail: format!("no adjoint eigenvalue matches μ = {target}"),
                        })
                    }
                }
            }
        }
    }
    for (i, value) in oracle_values.iter().enumerate() {
        if !used[i] && value.norm() > ORACLE_MATCH_RTOL * mu_scale {
            return Err(SpectralError::OracleMismatch {
                detail: format!("unmatched nonzero adjoint eigenvalue {value}"),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga_core::{parse_multivector, Signature};

    fn mv(text: &str, sig: Signature) -> Multivector {
        parse_multivector(text, sig).unwrap()
    }

    fn sig(p: usize, q: usize, r: usize) -> Signature {
        Signature::new(p, q, r).unwrap()
    }

    #[test]
    fn ladder_of_zero() {
        let ladder = w_ladder(&Multivector::zero(sig(4, 0, 0))).unwrap();
        assert_eq!(ladder.k(), 0);
        assert_eq!(ladder.wk_squared(), Complex64::new(1.0, 0.0));
        assert!(ladder
            .outer_exp()
            .approx_eq(&Multivector::one(sig(4, 0, 0)), 0.0));
    }

    #[test]
    fn ladder_of_worked_example() {
        let s = sig(4, 0, 0);
        let ladder = w_ladder(&mv("e12 + 2*e34", s)).unwrap();
        assert_eq!(ladder.k(), 2);
        assert!(ladder.term(2).approx_eq(&mv("2*e1234", s), 1e-14));
        assert!((ladder.wk_squared() - Complex64::new(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ladder_of_all_pairs_bivector() {
        let s = sig(2, 2, 0);
        let ladder = w_ladder(&mv("e12+e13+e14+e23+e24+e34", s)).unwrap();
        assert_eq!(ladder.k(), 2);
        assert!((ladder.wk_squared() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn outer_exp_examples() {
        let s = sig(4, 0, 0);
        assert!(outer_exp(&Multivector::zero(s))
            .unwrap()
            .approx_eq(&Multivector::one(s), 0.0));
        let b = mv("e12 + 2*e34", s);
        let expected = mv("1 + e12 + 2*e34 + 2*e1234", s);
        assert!(outer_exp(&b).unwrap().approx_eq(&expected, 1e-14));
        assert!(outer_exp(&b)
            .unwrap()
            .grade_select(2)
            .approx_eq(&b, 1e-14));
    }

    #[test]
    fn outer_norm_sq_examples() {
        let s = sig(4, 0, 0);
        let one = outer_norm_sq(&Multivector::zero(s)).unwrap();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-14);

        // -i(e12 + e34) has |Λ^B|² = 0: the isoclinic zero divisor.
        let b = &mv("e12 + e34", s) * Complex64::new(0.0, -1.0);
        assert!(outer_norm_sq(&b).unwrap().norm() < 1e-12);

        let c = mv("0.3*e12 - 1.7*e13 + 0.9*e24", s);
        let plus = outer_norm_sq(&c).unwrap();
        let minus = outer_norm_sq(&(-&c)).unwrap();
        assert!((plus - minus).norm() < 1e-12);
    }

    #[test]
    fn char_poly_of_worked_example() {
        let s = sig(4, 0, 0);
        let coeffs = char_poly(&mv("e12 + 2*e34", s)).unwrap();
        assert_eq!(coeffs.len(), 3);
        assert!((coeffs[0] - 1.0).abs() < 1e-14);
        assert!((coeffs[1] + 5.0).abs() < 1e-12);
        assert!((coeffs[2] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn char_poly_of_simple_bivector() {
        let s = sig(3, 0, 0);
        let coeffs = char_poly(&mv("1.5*e12", s)).unwrap();
        // Q_1(λ) = λ - ⟨B²⟩₀ with ⟨B²⟩₀ = -2.25.
        assert_eq!(coeffs.len(), 2);
        assert!((coeffs[1] + 2.25).abs() < 1e-12);
    }

    #[test]
    fn spectrum_of_worked_example() {
        let s = sig(4, 0, 0);
        let data = spectrum(&mv("e12 + 2*e34", s)).unwrap();
        assert_eq!(data.effective_dimension(), 4);
        assert!(!data.is_pseudo_null);
        assert_eq!(data.pairs.len(), 2);
        assert!((data.pairs[0].mu - Complex64::new(0.0, 1.0)).norm() < 1e-10);
        assert_eq!(data.pairs[0].multiplicity, 1);
        assert!((data.pairs[1].mu - Complex64::new(0.0, 2.0)).norm() < 1e-10);
        assert_eq!(data.pairs[1].multiplicity, 1);
    }

    #[test]
    fn spectrum_of_isoclinic_bivector() {
        let s = sig(4, 0, 0);
        let data = spectrum(&mv("e12 + e34", s)).unwrap();
        assert_eq!(data.pairs.len(), 1);
        assert!((data.pairs[0].mu - Complex64::new(0.0, 1.0)).norm() < 1e-10);
        assert_eq!(data.pairs[0].multiplicity, 2);
    }

    #[test]
    fn spectrum_of_all_pairs_bivector() {
        let s = sig(2, 2, 0);
        let data = spectrum(&mv("e12+e13+e14+e23+e24+e34", s)).unwrap();
        assert_eq!(data.pairs.len(), 1);
        assert!((data.pairs[0].mu - Complex64::new(1.0, 0.0)).norm() < 1e-7);
        assert_eq!(data.pairs[0].multiplicity, 2);
        assert!(!data.is_pseudo_null);
    }

    #[test]
    fn spectrum_of_pseudo_null_bivector() {
        // e12 + e35 in R_{4,0,1}: λ = 0 enters the spectrum and W_2² = 0.
        let s = sig(4, 0, 1);
        let data = spectrum(&mv("e12 + e35", s)).unwrap();
        assert!(data.is_pseudo_null);
        assert_eq!(data.pairs.len(), 2);
        assert!(data.pairs[0].is_zero());
        assert!((data.pairs[1].mu - Complex64::new(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn spectrum_requires_real_input() {
        let s = sig(4, 0, 0);
        let b = &mv("e12", s) * Complex64::new(0.0, 1.0);
        assert!(matches!(spectrum(&b), Err(SpectralError::NonRealInput(_))));
    }

    #[test]
    fn w_ladder_rejects_non_bivectors() {
        let s = sig(3, 0, 0);
        assert!(matches!(
            w_ladder(&mv("1 + e12", s)),
            Err(SpectralError::NonBivector)
        ));
    }
}
