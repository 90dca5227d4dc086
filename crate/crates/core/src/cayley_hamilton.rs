//! The factored Cayley-Hamilton identity `M_f(v) = 0` for the adjoint map
//! `f(v) = B × v`, its scalar form `P_2k(f) = 0`, the simplicial-derivative
//! coefficient identities, and the explicit 4D matrix realisation.
//!
//! The factored identity reads
//!
//! ```text
//! M_f(v) = f^k(v) - B f^{k-1}(v) + W_2 f^{k-2}(v) - ... + (-1)^k W_k · v = 0
//! ```
//!
//! with geometric products throughout except the last term, which is the
//! contraction `W_k · v`: for `v` inside the effective subspace the two
//! agree (`W_k ∧ v = 0` there), and the contraction extends the identity to
//! arbitrary vectors when `2k < n`. Squaring `M_μ` recovers the scalar
//! characteristic identity, whose coefficients `⟨W_j²⟩₀` also fall out of
//! the simplicial derivatives `⟨∂_(2j) f_(2j)⟩₀ = (-1)^j ⟨W_j²⟩₀`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::ga_core::{GaError, Multivector, Signature, Tolerance};
use crate::spectral::{self, SpectralError};

#[derive(Debug, Clone, Error)]
pub enum ChError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// An absolute residual together with the scale of the terms that were
/// cancelled to produce it.
#[derive(Debug, Clone, Copy)]
pub struct Residual {
    pub norm: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.norm / self.scale.max(1e-300)
    }

    pub fn within(&self, rel_bound: f64) -> bool {
        self.norm <= rel_bound * self.scale.max(1e-300)
    }
}

/// Cached powers `[f^0(v), f^1(v), ..., f^max(v)]` of the adjoint action on
/// a probe vector; each power is again grade-1.
#[derive(Debug, Clone)]
pub struct AdjointPowers {
    powers: Vec<Multivector>,
}

impl AdjointPowers {
    pub fn new(b: &Multivector, v: &Multivector, max_power: usize) -> Result<Self, ChError> {
        let tol = Tolerance::default();
        if !b.is_bivector(tol) || !b.is_real(tol) {
            return Err(ChError::InvalidInput("B must be a real bivector".into()));
        }
        if !v.is_homogeneous(1, tol) {
            return Err(ChError::InvalidInput("probe must be a vector".into()));
        }
        let mut powers = Vec::with_capacity(max_power + 1);
        powers.push(v.clone());
        for a in 1..=max_power {
            let next = b.commutator(&powers[a - 1])?;
            powers.push(next);
        }
        Ok(AdjointPowers { powers })
    }

    pub fn get(&self, a: usize) -> &Multivector {
        &self.powers[a]
    }
}

/// Residual of the factored identity `M_f(v) = 0`; holds for arbitrary
/// probe vectors, not just eigenvectors.
pub fn check_factored_ch(b: &Multivector, v: &Multivector) -> Result<Residual, ChError> {
    let ladder = spectral::w_ladder(b)?;
    let k = ladder.k();
    if k == 0 {
        return Err(ChError::InvalidInput(
            "zero bivector has no characteristic identity".into(),
        ));
    }
    let powers = AdjointPowers::new(b, v, k)?;
    let mut sum = Multivector::zero(b.sig());
    let mut scale = 0.0f64;
    for j in 0..=k {
        let term = if j < k {
            ladder.term(j).geometric_product(powers.get(k - j))?
        } else {
            ladder.term(k).dot(v)?
        };
        scale = scale.max(term.max_norm());
        if j % 2 == 0 {
            sum = &sum + &term;
        } else {
            sum = &sum - &term;
        }
    }
    Ok(Residual {
        norm: sum.max_norm(),
        scale,
    })
}

/// Residual of the scalar identity `Σ (-1)^{k-j} ⟨W_j²⟩₀ f^{2(k-j)}(v) = 0`.
/// The identity is stated on the effective subspace (the image of `f`);
/// for probes with a component outside it the `j = k` term survives and the
/// residual is genuinely nonzero.
pub fn check_scalar_ch(b: &Multivector, v: &Multivector) -> Result<Residual, ChError> {
    let ladder = spectral::w_ladder(b)?;
    let k = ladder.k();
    if k == 0 {
        return Err(ChError::InvalidInput(
            "zero bivector has no characteristic identity".into(),
        ));
    }
    let powers = AdjointPowers::new(b, v, 2 * k)?;
    let mut sum = Multivector::zero(b.sig());
    let mut scale = 0.0f64;
    for j in 0..=k {
        let wj = ladder.term(j);
        let c = wj.geometric_product(wj)?.scalar_part();
        let term = powers.get(2 * (k - j)) * c;
        scale = scale.max(term.max_norm());
        if (k - j) % 2 == 0 {
            sum = &sum + &term;
        } else {
            sum = &sum - &term;
        }
    }
    Ok(Residual {
        norm: sum.max_norm(),
        scale,
    })
}

/// Dual frame vector `e^i` of an orthonormal non-degenerate frame:
/// `e^i = e_i / (e_i · e_i)`, i.e. `±e_i`.
fn dual_frame(sig: Signature) -> Result<Vec<Multivector>, ChError> {
    if sig.is_degenerate() {
        return Err(ChError::Unsupported(
            "simplicial derivatives need a non-degenerate metric (dual frame)".into(),
        ));
    }
    (0..sig.dim())
        .map(|i| Ok(Multivector::basis_vector(sig, i)? * sig.metric(i)))
        .collect()
}

/// The simplicial derivative `∂_(r) f_(r)` of the adjoint map, by exhaustive
/// summation over frame tuples with the `1/r!` factor:
///
/// ```text
/// ∂_(r) f_(r) = (1/r!) Σ (e^{a_r} ∧ … ∧ e^{a_1}) (f(e_{a_1}) ∧ … ∧ f(e_{a_r}))
/// ```
///
/// Cost grows as `n!/(n-r)!`; intended for the verification range `n ≤ 6`.
pub fn simplicial_derivative(b: &Multivector, r: usize) -> Result<Multivector, ChError> {
    Ok(simplicial_derivative_scaled(b, r)?.0)
}

/// Same as [`simplicial_derivative`], also returning the largest summand
/// magnitude for use as a residual scale.
pub fn simplicial_derivative_scaled(
    b: &Multivector,
    r: usize,
) -> Result<(Multivector, f64), ChError> {
    let tol = Tolerance::default();
    if !b.is_bivector(tol) || !b.is_real(tol) {
        return Err(ChError::InvalidInput("B must be a real bivector".into()));
    }
    let sig = b.sig();
    if r == 0 {
        return Ok((Multivector::one(sig), 1.0));
    }
    let n = sig.dim();
    let duals = dual_frame(sig)?;
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        images.push(b.commutator(&Multivector::basis_vector(sig, i)?)?);
    }
    let mut sum = Multivector::zero(sig);
    let mut scale = 0.0f64;
    let mut tuple = vec![0usize; r];
    let mut used = vec![false; n];
    // Depth-first enumeration of all r-tuples with distinct entries
    // (repeats make the left wedge vanish).
    fn recurse(
        depth: usize,
        r: usize,
        n: usize,
        tuple: &mut Vec<usize>,
        used: &mut Vec<bool>,
        duals: &[Multivector],
        images: &[Multivector],
        sum: &mut Multivector,
        scale: &mut f64,
    ) -> Result<(), ChError> {
        if depth == r {
            let mut left = duals[tuple[r - 1]].clone();
            for d in (0..r - 1).rev() {
                left = left.wedge(&duals[tuple[d]])?;
            }
            let mut right = images[tuple[0]].clone();
            for d in 1..r {
                right = right.wedge(&images[tuple[d]])?;
            }
            let term = left.geometric_product(&right)?;
            *scale = scale.max(term.max_norm());
            *sum = &*sum + &term;
            return Ok(());
        }
        for i in 0..n {
            if used[i] {
                continue;
            }
            used[i] = true;
            tuple[depth] = i;
            recurse(depth + 1, r, n, tuple, used, duals, images, sum, scale)?;
            used[i] = false;
        }
        Ok(())
    }
    if r <= n {
        recurse(
            0, r, n, &mut tuple, &mut used, &duals, &images, &mut sum, &mut scale,
        )?;
    }
    let factorial: f64 = (1..=r).map(|x| x as f64).product();
    Ok((&sum / factorial, scale / factorial))
}

/// Scalar part `⟨∂_(j) f_(j)⟩₀`.
pub fn simplicial_coeffs(b: &Multivector, j: usize) -> Result<f64, ChError> {
    let derivative = simplicial_derivative(b, j)?;
    let c = derivative.scalar_part();
    if c.im.abs() > 1e-9 * c.norm().max(1.0) {
        return Err(ChError::InvalidInput(format!(
            "simplicial scalar came out complex ({c})"
        )));
    }
    Ok(c.re)
}

/// Top-grade part `⟨∂_(j) f_(j)⟩_{2j}`, which equals `(-2)^j W_j`.
pub fn simplicial_top_grade(b: &Multivector, j: usize) -> Result<Multivector, ChError> {
    Ok(simplicial_derivative(b, j)?.grade_select(2 * j))
}

/// The didactic 4D Euclidean specialisation: the signed matrix `A` of the
/// adjoint action (rows indexed so the displayed layout has `-B_ij` above
/// the diagonal) and the trivector matrix `T` representing `v ↦ W_2 v`.
#[derive(Debug, Clone)]
pub struct MatrixPair {
    pub a: DMatrix<f64>,
    pub t_mat: DMatrix<f64>,
    /// The common factor of `T`: minus the pseudoscalar coefficient of `W_2`.
    pub t_scalar: f64,
}

fn require_r400(b: &Multivector) -> Result<(), ChError> {
    let sig = b.sig();
    if (sig.p(), sig.q(), sig.r()) != (4, 0, 0) {
        return Err(ChError::Unsupported(format!(
            "matrix example is specialised to R_{{4,0,0}}, got {}",
            sig.algebra_name()
        )));
    }
    let tol = Tolerance::default();
    if !b.is_bivector(tol) || !b.is_real(tol) {
        return Err(ChError::InvalidInput("B must be a real bivector".into()));
    }
    Ok(())
}

pub fn adjoint_and_trivector_matrices(b: &Multivector) -> Result<MatrixPair, ChError> {
    require_r400(b)?;
    let coeff = |i: usize, j: usize| b.coeff((1 << (i - 1)) | (1 << (j - 1))).re;
    let mut a = DMatrix::<f64>::zeros(4, 4);
    for row in 1..=4usize {
        for col in 1..=4usize {
            if row < col {
                a[(row - 1, col - 1)] = -coeff(row, col);
            } else if row > col {
                a[(row - 1, col - 1)] = coeff(col, row);
            }
        }
    }
    // Pseudoscalar coefficient of W_2 = (B ∧ B)/2, in closed form and by
    // direct expansion; they must agree.
    let w = coeff(1, 2) * coeff(3, 4) - coeff(1, 3) * coeff(2, 4) + coeff(1, 4) * coeff(2, 3);
    let w2 = &b.wedge(b)? / 2.0;
    let direct = w2.coeff(0b1111).re;
    if (w - direct).abs() > 1e-10 * w.abs().max(1.0) {
        return Err(ChError::InvalidInput(format!(
            "pseudoscalar coefficient mismatch: closed form {w}, expansion {direct}"
        )));
    }
    let t_scalar = -w;
    let mut t_mat = DMatrix::<f64>::zeros(4, 4);
    for i in 0..4 {
        t_mat[(i, 3 - i)] = t_scalar;
    }
    Ok(MatrixPair { a, t_mat, t_scalar })
}

/// Coordinates of a grade-3 element on the dual trivector basis
/// `(-e123, e124, -e134, e234)`, the basis in which `v ↦ W_2 v` is the
/// uniform antidiagonal `T`.
pub fn trivector_coords(x: &Multivector) -> Result<DVector<f64>, ChError> {
    if x.sig().dim() != 4 {
        return Err(ChError::Unsupported("trivector coordinates are 4D-specific".into()));
    }
    Ok(DVector::from_vec(vec![
        -x.coeff(0b0111).re,
        x.coeff(0b1011).re,
        -x.coeff(0b1101).re,
        x.coeff(0b1110).re,
    ]))
}

/// Verifies the 4D block identity: `B(B×v)` has the stacked representation
/// `(A² ; T) v`, so `M_f(v) = f²(v) - B f(v) + W₂ v` becomes
/// `(A² ; 0) v - (A² ; T) v + (0 ; T) v = 0`.
pub fn check_block_identity(b: &Multivector, v: &Multivector) -> Result<Residual, ChError> {
    require_r400(b)?;
    let tol = Tolerance::default();
    if !v.is_homogeneous(1, tol) || !v.is_real(tol) {
        return Err(ChError::InvalidInput("probe must be a real vector".into()));
    }
    let pair = adjoint_and_trivector_matrices(b)?;
    let coords = DVector::from_vec(v.vector_coords().iter().map(|c| c.re).collect::<Vec<_>>());

    let f_v = b.commutator(v)?;
    let f2_v = b.commutator(&f_v)?;
    let bf_v = b.geometric_product(&f_v)?;
    let w2 = &b.wedge(b)? / 2.0;
    let w2_v = w2.geometric_product(v)?;

    let a_sq = &pair.a * &pair.a;
    let vec_part = |m: &Multivector| {
        DVector::from_vec(m.vector_coords().iter().map(|c| c.re).collect::<Vec<_>>())
    };

    // f²(v) and the grade-1 part of B f(v) are both A² v.
    let r1 = (&a_sq * &coords - vec_part(&f2_v)).norm();
    let r2 = (&a_sq * &coords - vec_part(&bf_v.grade_select(1))).norm();
    // The grade-3 part of B f(v) and W₂ v are both T v.
    let tv = &pair.t_mat * &coords;
    let r3 = (&tv - trivector_coords(&bf_v.grade_select(3))?).norm();
    let r4 = (&tv - trivector_coords(&w2_v)?).norm();

    let scale = (a_sq.norm() * coords.norm())
        .max(tv.norm())
        .max(bf_v.max_norm());
    Ok(Residual {
        norm: r1.max(r2).max(r3).max(r4),
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga_core::parse_multivector;
    use crate::oracle;

    fn sig(p: usize, q: usize, r: usize) -> Signature {
        Signature::new(p, q, r).unwrap()
    }

    fn mv(text: &str, s: Signature) -> Multivector {
        parse_multivector(text, s).unwrap()
    }

    #[test]
    fn factored_ch_on_worked_example() {
        let s = sig(4, 0, 0);
        let b = mv("e12 + 2*e34", s);
        let v = mv("e1", s);
        let res = check_factored_ch(&b, &v).unwrap();
        assert!(res.norm <= 1e-12 * res.scale.max(1.0), "residual {}", res.norm);
    }

    #[test]
    fn factored_ch_reduces_to_k1_for_simple_bivector() {
        let s = sig(3, 0, 0);
        let b = mv("1.3*e12", s);
        for text in ["e1", "e2", "e3", "e1 - 0.5*e2 + 2*e3"] {
            let res = check_factored_ch(&b, &mv(text, s)).unwrap();
            assert!(res.within(1e-12), "residual {} for {text}", res.norm);
        }
    }

    #[test]
    fn factored_ch_on_eigenvector() {
        // M_f(v_μ) = M_μ v_μ = 0 for the eigenvector e1 + i e2 of e12.
        let s = sig(2, 0, 0);
        let b = mv("e12", s);
        let v = mv("e1 + 1i*e2", s);
        let res = check_factored_ch(&b, &v).unwrap();
        assert!(res.within(1e-13));
    }

    #[test]
    fn factored_ch_contraction_term_matters_off_subspace() {
        // For v with a component outside the effective subspace the last
        // term must be the contraction W_k · v; the plain geometric product
        // W_k v leaves the wedge part W_k ∧ v ≠ 0 behind.
        let s = sig(3, 0, 0);
        let b = mv("e12", s);
        let v = mv("e3", s);
        let res = check_factored_ch(&b, &v).unwrap();
        assert!(res.within(1e-13));
        let wedge_leftover = b.wedge(&v).unwrap();
        assert!(wedge_leftover.max_norm() > 0.5);
    }

    #[test]
    fn scalar_ch_quarter_turn() {
        // B = e12 in R_{2,0,0}: f² = -id, so f²(v) + v = 0 for all v.
        let s = sig(2, 0, 0);
        let b = mv("e12", s);
        for text in ["e1", "e2", "0.3*e1 - 1.7*e2"] {
            let res = check_scalar_ch(&b, &mv(text, s)).unwrap();
            assert!(res.within(1e-13));
        }
    }

    #[test]
    fn scalar_ch_worked_example() {
        // f⁴(v) + 5 f²(v) + 4 v = 0 on the (full) effective subspace.
        let s = sig(4, 0, 0);
        let b = mv("e12 + 2*e34", s);
        for text in ["e1", "e4", "0.2*e1 + 0.9*e2 - e3"] {
            let res = check_scalar_ch(&b, &mv(text, s)).unwrap();
            assert!(res.within(1e-12));
        }
    }

    #[test]
    fn scalar_ch_fails_off_effective_subspace() {
        // Documented behaviour: for v outside the image of f only the
        // ⟨W_k²⟩₀ term survives, so the identity does not extend there.
        let s = sig(3, 0, 0);
        let b = mv("e12", s);
        let res = check_scalar_ch(&b, &mv("e3", s)).unwrap();
        assert!(res.relative() > 0.5);
    }

    #[test]
    fn simplicial_first_derivative_is_minus_two_b() {
        let s = sig(2, 2, 0);
        let b = mv("0.7*e12 - 1.1*e13 + 0.4*e24 + 0.9*e34", s);
        let d1 = simplicial_derivative(&b, 1).unwrap();
        assert!(d1.approx_eq(&(&b * -2.0), 1e-12));
    }

    #[test]
    fn simplicial_scalars_match_ladder_coefficients() {
        let s = sig(4, 0, 0);
        let b = mv("0.9*e12 + 0.3*e13 - 0.7*e14 + 1.2*e23 + 0.1*e24 - 0.4*e34", s);
        let ladder = spectral::w_ladder(&b).unwrap();
        // ⟨∂_(2j) f_(2j)⟩₀ = (-1)^j ⟨W_j²⟩₀ for j = 1..k.
        for j in 1..=ladder.k() {
            let wj = ladder.term(j);
            let cj = wj.geometric_product(wj).unwrap().scalar_part().re;
            let got = simplicial_coeffs(&b, 2 * j).unwrap();
            let expected = if j % 2 == 0 { cj } else { -cj };
            assert!(
                (got - expected).abs() <= 1e-10 * expected.abs().max(1.0),
                "j = {j}: got {got}, expected {expected}"
            );
        }
        // Odd-index scalars vanish.
        for r in [1usize, 3] {
            let got = simplicial_coeffs(&b, r).unwrap();
            assert!(got.abs() < 1e-10, "odd r = {r} gave {got}");
        }
    }

    #[test]
    fn simplicial_top_grade_is_w_ladder() {
        let s = sig(4, 0, 0);
        let b = mv("0.5*e12 + 1.5*e34 - 0.25*e13", s);
        let ladder = spectral::w_ladder(&b).unwrap();
        for j in 1..=ladder.k() {
            let top = simplicial_top_grade(&b, j).unwrap();
            let expected = ladder.term(j) * (-2.0f64).powi(j as i32);
            assert!(top.approx_eq(&expected, 1e-11), "j = {j}");
        }
        // Past the top power the ladder is zero.
        let beyond = simplicial_top_grade(&b, ladder.k() + 1).unwrap();
        assert!(beyond.max_norm() < 1e-11);
    }

    #[test]
    fn simplicial_rejects_degenerate_signatures() {
        let s = sig(3, 0, 1);
        let b = mv("e12", s);
        assert!(matches!(
            simplicial_derivative(&b, 1),
            Err(ChError::Unsupported(_))
        ));
    }

    #[test]
    fn matrix_pair_layout_and_char_poly() {
        let s = sig(4, 0, 0);
        let b = mv("1.0*e12 + 2.0*e13 + 3.0*e14 + 4.0*e23 + 5.0*e24 + 6.0*e34", s);
        let pair = adjoint_and_trivector_matrices(&b).unwrap();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, -1.0, -2.0, -3.0, //
                1.0, 0.0, -4.0, -5.0, //
                2.0, 4.0, 0.0, -6.0, //
                3.0, 5.0, 6.0, 0.0,
            ],
        );
        assert!((&pair.a - &expected).norm() < 1e-14);
        // The displayed layout is the transpose of the column-as-image
        // adjoint matrix.
        let column_form = oracle::adjoint_matrix(&b).unwrap();
        assert!((&pair.a - column_form.transpose()).norm() < 1e-13);

        // det(μI - A) = μ⁴ - μ²⟨B²⟩₀ + ⟨W₂²⟩₀.
        let coeffs = oracle::char_poly_matrix(&pair.a);
        let ladder = spectral::w_ladder(&b).unwrap();
        let c1 = b.geometric_product(&b).unwrap().scalar_part().re;
        let w2 = ladder.term(2);
        let c2 = w2.geometric_product(w2).unwrap().scalar_part().re;
        assert!(coeffs[1].abs() < 1e-10);
        assert!(coeffs[3].abs() < 1e-10 * c1.abs().max(1.0));
        assert!((coeffs[2] + c1).abs() < 1e-10 * c1.abs().max(1.0));
        assert!((coeffs[4] - c2).abs() < 1e-10 * c2.abs().max(1.0));

        // T's scalar factor is minus the pseudoscalar coefficient of W₂.
        let w = w2.coeff(0b1111).re;
        assert!((pair.t_scalar + w).abs() < 1e-12 * w.abs().max(1.0));
    }

    #[test]
    fn block_identity_on_basis_and_random_vectors() {
        let s = sig(4, 0, 0);
        let b = mv("0.3*e12 - 1.2*e13 + 0.8*e14 + 2.1*e23 - 0.5*e24 + 1.4*e34", s);
        for text in ["e1", "e2", "e3", "e4", "0.2*e1 - 0.7*e2 + 1.1*e3 + 0.5*e4"] {
            let res = check_block_identity(&b, &mv(text, s)).unwrap();
            assert!(res.within(1e-12), "probe {text}: residual {}", res.norm);
        }
    }
}
