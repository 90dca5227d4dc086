//! Rotor synthesis: closed-form exponentials through the invariant
//! decomposition, the generalised Cayley transform `R = (1 - tan∧(B))(1 +
//! tan∧(B))⁻¹`, the `⊕` composition law on commuting simple bivectors, and
//! the tangent decomposition `R = ⟨R⟩₀ Λ^T` of a rotor.

use thiserror::Error;

use crate::decomp::{self, DecompError};
use crate::ga_core::{GaError, Multivector, Tolerance};
use crate::oracle::{self, OracleError};
use crate::spectral::{self, SpectralError};

#[derive(Debug, Clone, Error)]
pub enum RotorError {
    #[error("bivector is not simple: square has non-scalar residue {residual:.3e}")]
    NotSimple { residual: f64 },
    #[error("value is not a unit rotor (residual {residual:.3e})")]
    NotARotor { residual: f64 },
    #[error("tangent argument is not anti-self-reverse (residual {residual:.3e})")]
    NotAntiSelfReverse { residual: f64 },
    #[error("rotor has numerically vanishing scalar part (π-rotation boundary)")]
    PiBoundary,
    #[error("principal logarithm undefined: {0}")]
    LogUndefined(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency check failed: {what} (residual {residual:.3e})")]
    InternalConsistency { what: String, residual: f64 },
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Ga(#[from] GaError),
}

/// An even, real element with `R R~ = 1` after normalisation.
#[derive(Debug, Clone)]
pub struct Rotor {
    pub value: Multivector,
    pub normalized: bool,
}

impl Rotor {
    /// Wraps an even real multivector, verifying `R R~` is a positive
    /// scalar and dividing out its square root.
    pub fn from_even(value: Multivector) -> Result<Self, RotorError> {
        let tol = Tolerance::default();
        let scale = value.max_norm();
        if !value.is_real(tol) {
            return Err(RotorError::InvalidInput(format!(
                "rotor value must be real (imaginary residue {:.3e})",
                value.max_imag()
            )));
        }
        let odd: f64 = (0..value.sig().blade_count())
            .filter(|m| m.count_ones() % 2 == 1)
            .map(|m| value.coeff(m).norm())
            .fold(0.0, f64::max);
        if odd > tol.threshold(scale) {
            return Err(RotorError::InvalidInput(
                "rotor value must lie in the even subalgebra".into(),
            ));
        }
        let norm_sq = value.geometric_product(&value.reverse())?;
        let non_scalar = (&norm_sq - &norm_sq.grade_select(0)).max_norm();
        if non_scalar > 1e-9 * (scale * scale).max(1.0) {
            return Err(RotorError::NotARotor {
                residual: non_scalar,
            });
        }
        let s = norm_sq.scalar_part().re;
        if s <= 0.0 {
            return Err(RotorError::NotARotor { residual: s.abs() });
        }
        let normalized_value = &value.real_part() / s.sqrt();
        Ok(Rotor {
            value: normalized_value,
            normalized: true,
        })
    }

    /// `‖R R~ - 1‖`, the unit-norm residual.
    pub fn unit_residual(&self) -> f64 {
        let one = Multivector::one(self.value.sig());
        match self.value.geometric_product(&self.value.reverse()) {
            Ok(p) => p.distance(&one),
            Err(_) => f64::NAN,
        }
    }
}

/// How an exponential was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpMethod {
    /// Product of per-part closed forms from the invariant decomposition.
    Factored { parts: usize },
    /// Scaled-and-squared series summation (decomposition unavailable).
    Series,
}

/// Exponential result with its provenance flag.
#[derive(Debug, Clone)]
pub struct BivectorExp {
    pub rotor: Rotor,
    pub method: ExpMethod,
}

/// Closed-form exponential of a simple real bivector: trigonometric for
/// `b² < 0`, hyperbolic for `b² > 0`, affine `1 + b` for the null case.
pub fn exp_simple(b: &Multivector) -> Result<Rotor, RotorError> {
    let tol = Tolerance::default();
    if !b.is_real(tol) || !b.is_homogeneous(2, tol) {
        return Err(RotorError::InvalidInput(
            "exp_simple expects a real bivector".into(),
        ));
    }
    let square = b.geometric_product(b)?;
    let scale = (b.max_norm() * b.max_norm()).max(1e-300);
    let non_scalar = (&square - &square.grade_select(0)).max_norm();
    if non_scalar > 1e-8 * scale {
        return Err(RotorError::NotSimple {
            residual: non_scalar,
        });
    }
    let s = square.scalar_part().re;
    let one = Multivector::one(b.sig());
    let value = if s < -tol.threshold(scale) {
        let theta = (-s).sqrt();
        &(&one * theta.cos()) + &(b * (theta.sin() / theta))
    } else if s > tol.threshold(scale) {
        let phi = s.sqrt();
        &(&one * phi.cosh()) + &(b * (phi.sinh() / phi))
    } else {
        &one + b
    };
    Rotor::from_even(value)
}

/// `exp(B)` as the ordered product of the closed-form exponentials of the
/// invariant-decomposition parts; the factors pairwise commute (asserted),
/// so the order is immaterial. Falls back to the series exponential, with
/// the method flagged, when no real decomposition exists.
pub fn exp_bivector(b: &Multivector) -> Result<BivectorExp, RotorError> {
    match decomp::decompose(b) {
        Ok(d) => {
            let factors: Vec<Rotor> = d
                .parts
                .iter()
                .map(|p| exp_simple(&p.b))
                .collect::<Result<_, _>>()?;
            for (i, ri) in factors.iter().enumerate() {
                for rj in factors.iter().skip(i + 1) {
                    let ij = ri.value.geometric_product(&rj.value)?;
                    let ji = rj.value.geometric_product(&ri.value)?;
                    let residual = ij.distance(&ji);
                    if residual > 1e-9 * ij.max_norm().max(1.0) {
                        return Err(RotorError::InternalConsistency {
                            what: "exponential factors do not commute".into(),
                            residual,
                        });
                    }
                }
            }
            let mut value = Multivector::one(b.sig());
            for f in &factors {
                value = &value * &f.value;
            }
            Ok(BivectorExp {
                rotor: Rotor::from_even(value)?,
                method: ExpMethod::Factored {
                    parts: d.parts.len(),
                },
            })
        }
        Err(DecompError::Jordanesque(_)) | Err(DecompError::ComplexEigenvalue { .. }) => {
            let value = oracle::exp_series(b)?;
            Ok(BivectorExp {
                rotor: Rotor::from_even(value)?,
                method: ExpMethod::Series,
            })
        }
        Err(other) => Err(other.into()),
    }
}

/// Generalised Cayley transform `B ↦ (1 - tan∧(B))(1 + tan∧(B))⁻¹`.
pub fn cayley(b: &Multivector) -> Result<Rotor, RotorError> {
    let tan = decomp::outer_tan(b)?;
    cayley_of_tangent(&tan)
}

/// The Möbius map `(1 - t)(1 + t)⁻¹` on an anti-self-reverse argument
/// (a tangent value, e.g. an `⊕`-fold of commuting simple bivectors).
pub fn cayley_of_tangent(t: &Multivector) -> Result<Rotor, RotorError> {
    let anti = (&t.reverse() + t).max_norm();
    if anti > 1e-9 * t.max_norm().max(1.0) {
        return Err(RotorError::NotAntiSelfReverse { residual: anti });
    }
    let one = Multivector::one(t.sig());
    let denominator = &one + t;
    let inv = denominator.mv_inverse().map_err(RotorError::Ga)?;
    let value = (&one - t).geometric_product(&inv)?;
    Rotor::from_even(value)
}

/// Left fold of `x ⊕ y = (x + y)(1 + xy)⁻¹` over commuting simple
/// bivectors. The fold provably equals the quotient of the odd by the even
/// elementary symmetric polynomials in the parts (which is `tan∧` of their
/// sum); both routes are computed and must agree.
pub fn oplus(parts: &[Multivector]) -> Result<Multivector, RotorError> {
    let first = parts
        .first()
        .ok_or_else(|| RotorError::InvalidInput("oplus needs at least one part".into()))?;
    let sig = first.sig();
    let one = Multivector::one(sig);

    let mut fold = first.clone();
    for x in &parts[1..] {
        if x.sig() != sig {
            return Err(GaError::SignatureMismatch(sig, x.sig()).into());
        }
        let numerator = &fold + x;
        let denominator = &one + &fold.geometric_product(x)?;
        fold = numerator.geometric_product(&denominator.mv_inverse().map_err(RotorError::Ga)?)?;
    }

    // Elementary symmetric polynomials e_p(x_1..x_k), built incrementally.
    let mut esp: Vec<Multivector> = vec![one.clone()];
    for x in parts {
        esp.push(Multivector::zero(sig));
        for p in (1..esp.len()).rev() {
            let bumped = &esp[p - 1] * x;
            esp[p] = &esp[p] + &bumped;
        }
    }
    let mut cos = Multivector::zero(sig);
    let mut sin = Multivector::zero(sig);
    for (p, e) in esp.iter().enumerate() {
        if p % 2 == 0 {
            cos = &cos + e;
        } else {
            sin = &sin + e;
        }
    }
    let symmetric = sin.geometric_product(&cos.mv_inverse().map_err(RotorError::Ga)?)?;
    let agreement = fold.distance(&symmetric);
    if agreement > 1e-9 * fold.max_norm().max(1.0) {
        return Err(RotorError::InternalConsistency {
            what: "⊕ fold disagrees with the symmetric-polynomial quotient".into(),
            residual: agreement,
        });
    }
    let anti = (&fold.reverse() + &fold).max_norm();
    if anti > 1e-9 * fold.max_norm().max(1.0) {
        return Err(RotorError::NotAntiSelfReverse { residual: anti });
    }
    Ok(fold)
}

/// Writes a rotor as `R = ⟨R⟩₀ Λ^T` with `T = ⟨R⟩₂ / ⟨R⟩₀`; the identity is
/// re-verified on the result. Rotors at the π-rotation boundary
/// (`⟨R⟩₀ ≈ 0`) are rejected.
pub fn tangent_decomposition(rotor: &Rotor) -> Result<(f64, Multivector), RotorError> {
    let tol = Tolerance::default();
    let r = &rotor.value;
    let s = r.scalar_part().re;
    if s.abs() <= tol.threshold(r.max_norm().max(1.0)) {
        return Err(RotorError::PiBoundary);
    }
    let t = &r.grade_select(2) / s;
    let reconstructed = &spectral::outer_exp(&t)? * s;
    let residual = reconstructed.distance(r);
    if residual > 1e-8 * r.max_norm().max(1.0) {
        return Err(RotorError::InternalConsistency {
            what: "rotor is not of outer-exponential form ⟨R⟩₀ Λ^T".into(),
            residual,
        });
    }
    Ok((s, t))
}

/// Principal logarithm: tangent decomposition, invariant decomposition of
/// `T`, then the per-part scalar inverse tangent applied to the eigenvalue
/// of each part. Defined for rotors with positive scalar part.
pub fn log_rotor(rotor: &Rotor) -> Result<Multivector, RotorError> {
    let (s, t) = tangent_decomposition(rotor)?;
    if s < 0.0 {
        return Err(RotorError::LogUndefined(
            "rotor has negative scalar part; no principal outer-exponential logarithm".into(),
        ));
    }
    let tol = Tolerance::default();
    let d = decomp::decompose(&t)?;
    let mut log = Multivector::zero(t.sig());
    for part in &d.parts {
        let lambda = part.square();
        let scale = (part.b.max_norm() * part.b.max_norm()).max(1e-300);
        let factor = if lambda < -tol.threshold(scale) {
            let tau = (-lambda).sqrt();
            tau.atan() / tau
        } else if lambda > tol.threshold(scale) {
            let tau = lambda.sqrt();
            if tau >= 1.0 {
                return Err(RotorError::LogUndefined(format!(
                    "hyperbolic tangent part has |τ| = {tau} ≥ 1"
                )));
            }
            tau.atanh() / tau
        } else {
            1.0
        };
        log = &log + &(&part.b * factor);
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga_core::{parse_multivector, Signature};

    fn sig(p: usize, q: usize, r: usize) -> Signature {
        Signature::new(p, q, r).unwrap()
    }

    fn mv(text: &str, s: Signature) -> Multivector {
        parse_multivector(text, s).unwrap()
    }

    #[test]
    fn exp_simple_rotation() {
        let s = sig(2, 0, 0);
        let theta = 0.77;
        let r = exp_simple(&(&mv("e12", s) * theta)).unwrap();
        let expected = &(&Multivector::one(s) * theta.cos()) + &(&mv("e12", s) * theta.sin());
        assert!(r.value.approx_eq(&expected, 1e-14));
        assert!(r.unit_residual() < 1e-13);
    }

    #[test]
    fn exp_simple_identity_and_null() {
        let s = sig(3, 0, 1);
        let zero = Multivector::zero(s);
        assert!(exp_simple(&zero)
            .unwrap()
            .value
            .approx_eq(&Multivector::one(s), 0.0));
        let null = mv("0.4*e14", s);
        let r = exp_simple(&null).unwrap();
        assert!(r.value.approx_eq(&(&Multivector::one(s) + &null), 1e-14));
    }

    #[test]
    fn exp_simple_matches_series_for_small_arguments() {
        let s = sig(2, 2, 0);
        for text in ["0.3*e12", "0.8*e13", "0.5*e34"] {
            let b = mv(text, s);
            let closed = exp_simple(&b).unwrap();
            let series = oracle::exp_series(&b).unwrap();
            assert!(closed.value.approx_eq(&series, 1e-12), "mismatch for {text}");
        }
    }

    #[test]
    fn exp_bivector_factors_worked_example() {
        let s = sig(4, 0, 0);
        let b = mv("e12 + 2*e34", s);
        let exp = exp_bivector(&b).unwrap();
        assert_eq!(exp.method, ExpMethod::Factored { parts: 2 });
        let product = exp_simple(&mv("e12", s))
            .unwrap()
            .value
            .geometric_product(&exp_simple(&mv("2*e34", s)).unwrap().value)
            .unwrap();
        assert!(exp.rotor.value.approx_eq(&product, 1e-12));
        assert!(exp.rotor.unit_residual() < 1e-12);

        let series = oracle::exp_series(&b).unwrap();
        assert!(exp.rotor.value.approx_eq(&series, 1e-10));
    }

    #[test]
    fn exp_bivector_series_fallback_on_jordanesque_input() {
        let s = sig(2, 2, 0);
        let b = mv("e12+e13+e14+e23+e24+e34", s);
        let exp = exp_bivector(&b).unwrap();
        assert_eq!(exp.method, ExpMethod::Series);
        let series = oracle::exp_series(&b).unwrap();
        assert!(exp.rotor.value.approx_eq(&series, 1e-12));
    }

    #[test]
    fn cayley_of_zero_and_simple() {
        let s = sig(2, 0, 0);
        assert!(cayley(&Multivector::zero(s))
            .unwrap()
            .value
            .approx_eq(&Multivector::one(s), 0.0));

        // (1 - λe12)/(1 + λe12) directly.
        let lam = 0.6;
        let b = &mv("e12", s) * lam;
        let r = cayley(&b).unwrap();
        let one = Multivector::one(s);
        let direct = (&one - &b)
            .geometric_product(&(&one + &b).mv_inverse().unwrap())
            .unwrap();
        assert!(r.value.approx_eq(&direct, 1e-13));
        assert!(r.unit_residual() < 1e-13);
    }

    #[test]
    fn cayley_morphism_on_commuting_simple_parts() {
        let s = sig(4, 0, 0);
        let b1 = mv("0.4*e12", s);
        let b2 = mv("0.9*e34", s);
        let lhs = cayley(&b1)
            .unwrap()
            .value
            .geometric_product(&cayley(&b2).unwrap().value)
            .unwrap();
        let folded = oplus(&[b1.clone(), b2.clone()]).unwrap();
        let rhs = cayley_of_tangent(&folded).unwrap();
        assert!(lhs.approx_eq(&rhs.value, 1e-12));
        // ... and ⊕ of the parts is tan∧ of the sum.
        let tan_sum = decomp::outer_tan(&(&b1 + &b2)).unwrap();
        assert!(folded.approx_eq(&tan_sum, 1e-12));
    }

    #[test]
    fn oplus_examples() {
        let s = sig(4, 0, 0);
        let b = mv("0.7*e13", s);
        assert!(oplus(&[b.clone()]).unwrap().approx_eq(&b, 0.0));

        let b1 = mv("0.4*e12", s);
        let b2 = mv("0.9*e34", s);
        let folded = oplus(&[b1.clone(), b2.clone()]).unwrap();
        let one = Multivector::one(s);
        let direct = (&b1 + &b2)
            .geometric_product(
                &(&one + &b1.geometric_product(&b2).unwrap())
                    .mv_inverse()
                    .unwrap(),
            )
            .unwrap();
        assert!(folded.approx_eq(&direct, 1e-13));
        // Anti-self-reverse even when not a pure bivector.
        assert!((&folded.reverse() + &folded).max_norm() < 1e-12);
    }

    #[test]
    fn tangent_decomposition_of_plane_rotor() {
        let s = sig(2, 0, 0);
        let theta = 0.43;
        let r = exp_simple(&(&mv("e12", s) * theta)).unwrap();
        let (scalar, t) = tangent_decomposition(&r).unwrap();
        assert!((scalar - theta.cos()).abs() < 1e-13);
        assert!(t.approx_eq(&(&mv("e12", s) * theta.tan()), 1e-13));

        let identity = Rotor::from_even(Multivector::one(s)).unwrap();
        let (scalar, t) = tangent_decomposition(&identity).unwrap();
        assert_eq!(scalar, 1.0);
        assert_eq!(t.max_norm(), 0.0);
    }

    #[test]
    fn tangent_decomposition_rejects_pi_boundary() {
        let s = sig(2, 0, 0);
        let r = Rotor {
            value: mv("e12", s),
            normalized: true,
        };
        assert!(matches!(
            tangent_decomposition(&r),
            Err(RotorError::PiBoundary)
        ));
    }

    #[test]
    fn classical_tangent_equals_outer_tangent_of_t() {
        // ta(B) = (R - R~)(R + R~)⁻¹ = ta∧(T) with T = ⟨R⟩₂/⟨R⟩₀.
        let s = sig(4, 0, 0);
        let b = mv("0.3*e12 + 0.52*e34", s);
        let r = exp_bivector(&b).unwrap().rotor;
        let rev = r.value.reverse();
        let num = &r.value - &rev;
        let den = &r.value + &rev;
        let classical = num
            .geometric_product(&den.mv_inverse().unwrap())
            .unwrap();
        let (_, t) = tangent_decomposition(&r).unwrap();
        let outer = decomp::outer_tan(&t).unwrap();
        assert!(classical.approx_eq(&outer, 1e-11));
    }

    #[test]
    fn log_rotor_round_trip() {
        let s = sig(4, 0, 0);
        let b = mv("0.31*e12 + 0.7*e34", s);
        let r = exp_bivector(&b).unwrap().rotor;
        let log = log_rotor(&r).unwrap();
        assert!(log.approx_eq(&b, 1e-10));

        // Mixed rotation/boost generator.
        let s22 = sig(2, 2, 0);
        let b = mv("0.4*e12 + 0.6*e34", s22);
        let r = exp_bivector(&b).unwrap().rotor;
        let log = log_rotor(&r).unwrap();
        assert!(log.approx_eq(&b, 1e-10));
    }
}
