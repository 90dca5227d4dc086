//! Outer trigonometric functions and the invariant decomposition of a
//! bivector into commuting simple bivectors.
//!
//! Three constructions cooperate:
//!
//! * the outer-tangent formula `b_j = μ_j tan∧(B/μ_j)` for eigenvalue pairs
//!   of multiplicity one,
//! * eigenvector pairing `β_μ = (v₊ ∧ v₋)/(v₊ · v₋)` for repeated
//!   eigenvalues, where `v₊` must be matched with a partner such that
//!   `v₊ · v₋ ≠ 0`,
//! * the null limit `W_k W_{k-1}⁻¹` for the pseudo-null part (the μ → 0
//!   limit of both the tangent and cotangent routes).
//!
//! [`decompose`] dispatches between them per eigenvalue class and records
//! the provenance of every part. Bivectors with fewer eigenvectors than
//! their effective dimension (Jordan-type adjoint action) are detected and
//! reported as [`DecompError::Jordanesque`]; they are not decomposed.

use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

use crate::ga_core::{GaError, Multivector, Tolerance};
use crate::oracle::{self, OracleError};
use crate::spectral::{self, SpectralConfig, SpectralData, SpectralError, WLadder};

/// Relative bound on the imaginary residue allowed before a part is
/// declared real and stripped; failure is an error, never silent truncation.
const REALNESS_RTOL: f64 = 1e-8;
/// Bound below which a pairing value `v₊ · v₋` counts as zero.
const PAIRING_TOL: f64 = 1e-8;
/// Residual allowed when validating eigenvector and simplicity properties.
const STRUCTURE_RTOL: f64 = 1e-7;

#[derive(Debug, Clone, Error)]
pub enum DecompError {
    #[error("repeated eigenvalue μ = {mu}; the tangent formula needs distinct pairs — use the eigenvector-pairing path")]
    RequiresEigenPairing { mu: Complex64 },
    #[error("cos∧ is not invertible (residual {residual:.3e}); use the eigenvector-pairing path")]
    NonInvertibleCos { residual: f64 },
    #[error("Jordanesque bivector: {0}")]
    Jordanesque(JordanesqueDetails),
    #[error("eigenvalue square λ = {lambda} is not real; the decomposition has no real form for this class")]
    ComplexEigenvalue { lambda: Complex64 },
    #[error("result fails the realness check (imaginary residue {residual:.3e} of scale {scale:.3e})")]
    NotReal { residual: f64, scale: f64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("numerical failure: {what} (residual {residual:.3e})")]
    NumericalFailure { what: String, residual: f64 },
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Diagnostic payload for Jordan-type failures: the spectrum, how many
/// eigenvectors the class needed, and how many actually exist.
#[derive(Debug, Clone)]
pub struct JordanesqueDetails {
    pub effective_dimension: usize,
    pub mu: Complex64,
    pub expected: usize,
    pub found: usize,
    pub pairs: Vec<(Complex64, usize)>,
    pub note: String,
}

impl std::fmt::Display for JordanesqueDetails {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "class μ = {} has {} eigenvector(s), needs {} (effective dimension {}); {}",
            self.mu, self.found, self.expected, self.effective_dimension, self.note
        )
    }
}

fn jordanesque_note() -> String {
    "the adjoint action has a nontrivial Jordan block, so no decomposition into \
     commuting simple bivectors exists; detected and reported only"
        .to_string()
}

/// How a simple part was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompMethod {
    OuterTangent,
    EigenPairing,
    NullLimit,
}

impl DecompMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecompMethod::OuterTangent => "outer_tangent",
            DecompMethod::EigenPairing => "eigen_pairing",
            DecompMethod::NullLimit => "null_limit",
        }
    }
}

/// One commuting simple part: a real bivector whose square is a scalar,
/// labelled with its eigenvalue pair ±μ and provenance.
#[derive(Debug, Clone)]
pub struct SimpleBivector {
    pub b: Multivector,
    pub mu: Complex64,
    pub method: DecompMethod,
}

impl SimpleBivector {
    /// Validates realness, grade-2 support and simplicity, then strips the
    /// imaginary residue.
    fn checked(value: Multivector, mu: Complex64, method: DecompMethod) -> Result<Self, DecompError> {
        let scale = value.max_norm();
        let imag = value.max_imag();
        if imag > REALNESS_RTOL * scale.max(1e-300) {
            return Err(DecompError::NotReal {
                residual: imag,
                scale,
            });
        }
        let real = value.real_part();
        if !real.is_homogeneous(2, Tolerance::new(STRUCTURE_RTOL, 1e-13)) {
            return Err(DecompError::NumericalFailure {
                what: "decomposition part is not a bivector".into(),
                residual: (&real - &real.grade_select(2)).max_norm(),
            });
        }
        let real = real.grade_select(2);
        let square = real.geometric_product(&real)?;
        let non_scalar = (&square - &square.grade_select(0)).max_norm();
        let sq_scale = scale * scale;
        if non_scalar > STRUCTURE_RTOL * sq_scale.max(1e-300) {
            return Err(DecompError::NumericalFailure {
                what: "decomposition part is not simple (square has non-scalar part)".into(),
                residual: non_scalar,
            });
        }
        Ok(SimpleBivector {
            b: real,
            mu,
            method,
        })
    }

    /// The scalar square `⟨b²⟩₀` (equals μ² for unit-β parts, 0 for
    /// null-limit parts).
    pub fn square(&self) -> f64 {
        self.b
            .geometric_product(&self.b)
            .map(|s| s.scalar_part().re)
            .unwrap_or(f64::NAN)
    }
}

/// A complete decomposition `B = Σ b_j` with the recorded reconstruction
/// residual.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub parts: Vec<SimpleBivector>,
    pub residual: f64,
}

impl Decomposition {
    pub fn sum(&self, sig: crate::ga_core::Signature) -> Multivector {
        let mut total = Multivector::zero(sig);
        for p in &self.parts {
            total = &total + &p.b;
        }
        total
    }
}

/// An eigenvector pair for the class ±μ with nonzero pairing value.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub v_plus: Multivector,
    pub v_minus: Multivector,
    pub mu: Complex64,
    pub pairing_value: Complex64,
}

/// Tolerances for the decomposition; wraps the spectral configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecompConfig {
    pub spectral: SpectralConfig,
}

// ---- outer trigonometric functions ----

/// `cos∧(B) = (Λ^B + Λ^{-B})/2 = Σ W_{2j}` (grades ≡ 0 mod 4).
pub fn outer_cos(b: &Multivector) -> Result<Multivector, DecompError> {
    Ok(spectral::w_ladder(b)?.outer_cos())
}

/// `sin∧(B) = (Λ^B - Λ^{-B})/2 = Σ W_{2j+1}` (grades ≡ 2 mod 4).
pub fn outer_sin(b: &Multivector) -> Result<Multivector, DecompError> {
    Ok(spectral::w_ladder(b)?.outer_sin())
}

/// `tan∧(B) = sin∧(B) cos∧(B)⁻¹`; the factors commute, so the quotient is
/// two-sided. Fails when `cos∧(B)` is a zero divisor (repeated eigenvalue
/// pairs) — the eigenvector-pairing construction still applies then.
pub fn outer_tan(b: &Multivector) -> Result<Multivector, DecompError> {
    let ladder = spectral::w_ladder(b)?;
    outer_tan_from_ladder(&ladder)
}

fn outer_tan_from_ladder(ladder: &WLadder) -> Result<Multivector, DecompError> {
    let cos = ladder.outer_cos();
    let sin = ladder.outer_sin();
    let inv = cos.mv_inverse().map_err(|e| match e {
        GaError::NonInvertible { residual } => DecompError::NonInvertibleCos { residual },
        other => DecompError::Ga(other),
    })?;
    Ok(sin.geometric_product(&inv)?)
}

// ---- the three part constructions ----

/// The μ-class part by the tangent formula, `μ tan∧(B/μ)`. The intermediate
/// bivector `B/μ` is complex; the result must come out real.
fn tangent_part(b: &Multivector, pair_mu: Complex64, lambda: Complex64) -> Result<SimpleBivector, DecompError> {
    if lambda.im.abs() > 1e-8 * lambda.norm().max(1.0) {
        return Err(DecompError::ComplexEigenvalue { lambda });
    }
    let b_mu = b * pair_mu.inv();
    let tan = outer_tan(&b_mu)?;
    let part = &tan * pair_mu;
    SimpleBivector::checked(part, pair_mu, DecompMethod::OuterTangent)
}

/// The pseudo-null part `W_k W_{k-1}⁻¹`. The parity discussion (tan∧
/// versus cot∧ limits as μ → 0) collapses to this quotient for either
/// parity of k, so the quotient is implemented directly.
pub fn null_limit_part(ladder: &WLadder) -> Result<SimpleBivector, DecompError> {
    let k = ladder.k();
    if k == 0 {
        return Err(DecompError::Unsupported(
            "zero bivector has no null-limit part".into(),
        ));
    }
    let inv = ladder.term(k - 1).mv_inverse().map_err(|e| match e {
        GaError::NonInvertible { residual } => DecompError::Unsupported(format!(
            "W_{} is not invertible (residual {residual:.3e}); degenerate beyond the null-limit construction",
            k - 1
        )),
        other => DecompError::Ga(other),
    })?;
    let part = ladder.term(k).geometric_product(&inv)?;
    SimpleBivector::checked(part, Complex64::ZERO, DecompMethod::NullLimit)
}

/// Eigenvector pairs for every nonzero eigenvalue class of `B`, built from
/// the adjoint matrix: per class the +μ and -μ eigenspaces are extracted and
/// paired greedily on the largest Gram entry `v₊ · v₋`, deflating the
/// remaining eigenvectors after each pick so later pairs stay orthogonal to
/// earlier ones.
pub fn eigen_pairs(b: &Multivector, spec: &SpectralData) -> Result<Vec<EigenPair>, DecompError> {
    let a = oracle::adjoint_matrix(b)?;
    let mut out = Vec::new();
    for pair in spec.nonzero_pairs() {
        out.extend(class_pairs(b, &a, pair.mu, pair.multiplicity, spec)?);
    }
    Ok(out)
}

fn class_pairs(
    b: &Multivector,
    a: &nalgebra::DMatrix<f64>,
    mu: Complex64,
    multiplicity: usize,
    spec: &SpectralData,
) -> Result<Vec<EigenPair>, DecompError> {
    let sig = b.sig();
    let jordanesque = |found: usize, note: String| {
        DecompError::Jordanesque(JordanesqueDetails {
            effective_dimension: spec.effective_dimension(),
            mu,
            expected: multiplicity,
            found,
            pairs: spec.pairs.iter().map(|p| (p.mu, p.multiplicity)).collect(),
            note,
        })
    };

    let plus_coords = oracle::eigenvectors_for(a, mu)?;
    if plus_coords.len() < multiplicity {
        return Err(jordanesque(plus_coords.len(), jordanesque_note()));
    }
    if plus_coords.len() > multiplicity {
        return Err(DecompError::NumericalFailure {
            what: format!(
                "eigenspace for μ = {mu} has dimension {} above the algebraic multiplicity {multiplicity}",
                plus_coords.len()
            ),
            residual: 0.0,
        });
    }
    // For purely imaginary μ the -μ eigenspace of the real adjoint matrix is
    // the complex conjugate of the +μ one; using exactly that basis keeps
    // the pairing conjugate-aligned and the resulting parts real.
    let imaginary_mu = mu.re.abs() <= 1e-9 * mu.norm();
    let minus_coords: Vec<DVector<Complex64>> = if imaginary_mu {
        plus_coords.iter().map(|v| v.map(|c| c.conj())).collect()
    } else {
        oracle::eigenvectors_for(a, -mu)?
    };
    if minus_coords.len() < multiplicity {
        return Err(jordanesque(minus_coords.len(), jordanesque_note()));
    }

    let to_mv = |coords: &DVector<Complex64>| -> Result<Multivector, DecompError> {
        Ok(Multivector::vector(
            sig,
            coords.iter().copied().collect::<Vec<_>>().as_slice(),
        )?)
    };
    let mut plus: Vec<Multivector> = plus_coords
        .iter()
        .map(to_mv)
        .collect::<Result<_, _>>()?;
    let mut minus: Vec<Multivector> = minus_coords
        .iter()
        .map(to_mv)
        .collect::<Result<_, _>>()?;

    let mut pairs = Vec::with_capacity(multiplicity);
    for _ in 0..multiplicity {
        // Gram matrix of metric-bilinear inner products (no conjugation).
        let mut best: Option<(usize, usize, Complex64)> = None;
        for (i, vp) in plus.iter().enumerate() {
            for (j, vm) in minus.iter().enumerate() {
                let g = vp.dot(vm)?.scalar_part();
                if best.map_or(true, |(_, _, bg)| g.norm() > bg.norm()) {
                    best = Some((i, j, g));
                }
            }
        }
        let (i, j, pairing_value) = best.expect("eigenspaces are nonempty");
        if pairing_value.norm() <= PAIRING_TOL {
            return Err(jordanesque(
                pairs.len(),
                format!(
                    "all pairing values v₊·v₋ vanish for the class μ = {mu}; {}",
                    jordanesque_note()
                ),
            ));
        }
        let v_plus = plus.remove(i);
        let v_minus = minus.remove(j);
        validate_eigenpair(b, &v_plus, mu)?;
        validate_eigenpair(b, &v_minus, -mu)?;
        for w in plus.iter_mut() {
            let coeff = w.dot(&v_minus)?.scalar_part() / pairing_value;
            *w = &*w - &(&v_plus * coeff);
            normalize_vector(w);
        }
        for x in minus.iter_mut() {
            let coeff = x.dot(&v_plus)?.scalar_part() / pairing_value;
            *x = &*x - &(&v_minus * coeff);
            normalize_vector(x);
        }
        pairs.push(EigenPair {
            v_plus,
            v_minus,
            mu,
            pairing_value,
        });
    }
    Ok(pairs)
}

fn normalize_vector(v: &mut Multivector) {
    let norm: f64 = v
        .vector_coords()
        .iter()
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if norm > 0.0 {
        *v = &*v / norm;
    }
}

/// Eigenvector property `B × v = μ v` and, for μ ≠ 0, the null property
/// `v² = 0`.
fn validate_eigenpair(b: &Multivector, v: &Multivector, mu: Complex64) -> Result<(), DecompError> {
    let image = b.commutator(v)?;
    let residual = image.distance(&(v * mu));
    let scale = b.max_norm() * v.max_norm();
    if residual > STRUCTURE_RTOL * scale.max(1e-300) {
        return Err(DecompError::NumericalFailure {
            what: format!("eigenvector residual for μ = {mu}"),
            residual,
        });
    }
    let square = v.geometric_product(v)?.scalar_part();
    if square.norm() > STRUCTURE_RTOL * (v.max_norm() * v.max_norm()).max(1e-300) {
        return Err(DecompError::NumericalFailure {
            what: "eigenvector for nonzero μ is not null".into(),
            residual: square.norm(),
        });
    }
    Ok(())
}

/// `β_μ = (v₊ ∧ v₋)/(v₊ · v₋)`, asserted to square to 1, scaled to the
/// simple part `μ β_μ` with its imaginary residue stripped after the
/// realness check.
pub fn beta_from_pair(pair: &EigenPair) -> Result<SimpleBivector, DecompError> {
    if pair.pairing_value.norm() <= PAIRING_TOL {
        return Err(DecompError::NumericalFailure {
            what: "pairing value v₊·v₋ is numerically zero".into(),
            residual: pair.pairing_value.norm(),
        });
    }
    let beta = &pair.v_plus.wedge(&pair.v_minus)? / pair.pairing_value;
    let square = beta.geometric_product(&beta)?;
    let one = Multivector::one(beta.sig());
    let residual = square.distance(&one);
    let scale = (beta.max_norm() * beta.max_norm()).max(1.0);
    if residual > STRUCTURE_RTOL * scale {
        return Err(DecompError::NumericalFailure {
            what: "β² ≠ 1".into(),
            residual,
        });
    }
    SimpleBivector::checked(&beta * pair.mu, pair.mu, DecompMethod::EigenPairing)
}

// ---- dispatchers ----

/// Tangent-formula decomposition. Requires every eigenvalue pair to be
/// distinct (multiplicity one); repeated pairs or a non-invertible cos∧
/// raise [`DecompError::RequiresEigenPairing`].
pub fn decompose_tangent(b: &Multivector, spec: &SpectralData) -> Result<Decomposition, DecompError> {
    let mut parts = Vec::new();
    for pair in spec.nonzero_pairs() {
        if pair.multiplicity > 1 {
            return Err(DecompError::RequiresEigenPairing { mu: pair.mu });
        }
        let part = tangent_part(b, pair.mu, pair.lambda).map_err(|e| match e {
            DecompError::NonInvertibleCos { .. } => {
                DecompError::RequiresEigenPairing { mu: pair.mu }
            }
            other => other,
        })?;
        parts.push(part);
    }
    if spec.is_pseudo_null {
        parts.push(null_limit_part(&spec.ladder)?);
    }
    finish_decomposition(b, parts)
}

/// Full dispatcher: tangent formula per class where the pair is simple and
/// the cos∧ quotient inverts, eigenvector pairing as the per-class fallback,
/// and the null-limit part when the bivector is pseudo-null. Provenance is
/// recorded on every part.
pub fn decompose(b: &Multivector) -> Result<Decomposition, DecompError> {
    decompose_with(b, &DecompConfig::default())
}

pub fn decompose_with(b: &Multivector, config: &DecompConfig) -> Result<Decomposition, DecompError> {
    let spec = spectral::spectrum_with(b, &config.spectral)?;
    decompose_from_spectrum(b, &spec)
}

/// Decomposition against an already-computed spectrum.
pub fn decompose_from_spectrum(b: &Multivector, spec: &SpectralData) -> Result<Decomposition, DecompError> {
    let adjoint = oracle::adjoint_matrix(b)?;
    let mut parts = Vec::new();
    for pair in spec.nonzero_pairs() {
        if pair.lambda.im.abs() > 1e-8 * pair.lambda.norm().max(1.0) {
            return Err(DecompError::ComplexEigenvalue {
                lambda: pair.lambda,
            });
        }
        if pair.multiplicity == 1 {
            match tangent_part(b, pair.mu, pair.lambda) {
                Ok(part) => {
                    parts.push(part);
                    continue;
                }
                // cos∧ can be a zero divisor through some other class; the
                // pairing route below still works for this one.
                Err(DecompError::NonInvertibleCos { .. }) | Err(DecompError::NotReal { .. }) => {}
                Err(other) => return Err(other),
            }
        }
        for eigen_pair in class_pairs(b, &adjoint, pair.mu, pair.multiplicity, spec)? {
            parts.push(beta_from_pair(&eigen_pair)?);
        }
    }
    if spec.is_pseudo_null {
        parts.push(null_limit_part(&spec.ladder)?);
    }
    finish_decomposition(b, parts)
}

/// Sum, pairwise-commutation and part-count contract checks; records the
/// reconstruction residual.
fn finish_decomposition(
    b: &Multivector,
    parts: Vec<SimpleBivector>,
) -> Result<Decomposition, DecompError> {
    let scale = b.max_norm().max(1e-300);
    let sum = parts
        .iter()
        .fold(Multivector::zero(b.sig()), |acc, p| &acc + &p.b);
    let residual = sum.distance(&b.real_part());
    if residual > 1e-8 * scale {
        return Err(DecompError::NumericalFailure {
            what: "decomposition parts do not sum to the input".into(),
            residual,
        });
    }
    for (i, pi) in parts.iter().enumerate() {
        for pj in parts.iter().skip(i + 1) {
            let comm = pi.b.commutator(&pj.b)?;
            let comm_scale = (pi.b.max_norm() * pj.b.max_norm()).max(1e-300);
            if comm.max_norm() > 1e-8 * comm_scale {
                return Err(DecompError::NumericalFailure {
                    what: "decomposition parts do not commute".into(),
                    residual: comm.max_norm(),
                });
            }
        }
    }
    if parts.len() > b.sig().dim() / 2 {
        return Err(DecompError::NumericalFailure {
            what: format!(
                "{} parts exceed the bound ⌊n/2⌋ = {}",
                parts.len(),
                b.sig().dim() / 2
            ),
            residual: parts.len() as f64,
        });
    }
    Ok(Decomposition { parts, residual })
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
    fn outer_trig_of_zero() {
        let s = sig(4, 0, 0);
        let zero = Multivector::zero(s);
        assert!(outer_cos(&zero).unwrap().approx_eq(&Multivector::one(s), 0.0));
        assert!(outer_sin(&zero).unwrap().approx_eq(&zero, 0.0));
    }

    #[test]
    fn outer_cos_of_isoclinic_divided_by_i() {
        let s = sig(4, 0, 0);
        let b = &mv("e12 + e34", s) * Complex64::new(0.0, -1.0);
        let cos = outer_cos(&b).unwrap();
        assert!(cos.approx_eq(&mv("1 - e1234", s), 1e-14));
    }

    #[test]
    fn main_identity_both_products() {
        let s = sig(4, 0, 0);
        let b = mv("0.7*e12 - 0.4*e13 + 1.1*e24 + 0.2*e34", s);
        let cos = outer_cos(&b).unwrap();
        let sin = outer_sin(&b).unwrap();
        // Wedge variant: cos∧^∧2 - sin∧^∧2 = 1.
        let wedge_diff = &cos.wedge(&cos).unwrap() - &sin.wedge(&sin).unwrap();
        assert!(wedge_diff.approx_eq(&Multivector::one(s), 1e-12));
        // Clifford variant equals |Λ^B|².
        let cliff_diff = &(&cos * &cos) - &(&sin * &sin);
        let norm_sq = spectral::outer_norm_sq(&b).unwrap();
        assert!(cliff_diff.approx_eq(&Multivector::scalar_c(s, norm_sq), 1e-12));
    }

    #[test]
    fn outer_tan_of_simple_bivector_is_itself() {
        let s = sig(3, 0, 0);
        let b = mv("0.8*e12", s);
        assert!(outer_tan(&b).unwrap().approx_eq(&b, 1e-14));
    }

    #[test]
    fn tangent_parts_of_worked_example() {
        let s = sig(4, 0, 0);
        let b = mv("e12 + 2*e34", s);
        let i = Complex64::new(0.0, 1.0);
        let part1 = tangent_part(&b, i, -i * i).unwrap();
        assert!(part1.b.approx_eq(&mv("e12", s), 1e-12));
        let part2 = tangent_part(&b, 2.0 * i, Complex64::new(-4.0, 0.0)).unwrap();
        assert!(part2.b.approx_eq(&mv("2*e34", s), 1e-12));
    }

    #[test]
    fn decompose_tangent_worked_example() {
        let s = sig(4, 0, 0);
        let b = mv("e12 + 2*e34", s);
        let spec = spectral::spectrum(&b).unwrap();
        let d = decompose_tangent(&b, &spec).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert!(d.parts[0].b.approx_eq(&mv("e12", s), 1e-10));
        assert!(d.parts[1].b.approx_eq(&mv("2*e34", s), 1e-10));
        assert!(d.residual < 1e-12);

        let simple = mv("1.3*e13", s);
        let spec = spectral::spectrum(&simple).unwrap();
        let d = decompose_tangent(&simple, &spec).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert!(d.parts[0].b.approx_eq(&simple, 1e-12));
    }

    #[test]
    fn decompose_tangent_rejects_repeated_eigenvalues() {
        let s = sig(4, 0, 0);
        let b = mv("e12 + e34", s);
        let spec = spectral::spectrum(&b).unwrap();
        assert!(matches!(
            decompose_tangent(&b, &spec),
            Err(DecompError::RequiresEigenPairing { .. })
        ));
    }

    #[test]
    fn null_limit_part_examples() {
        // B = e12 + e35 in R_{4,0,1}: the null part is e35 = W_2 W_1^{-1}.
        let s = sig(4, 0, 1);
        let b = mv("e12 + e35", s);
        let ladder = spectral::w_ladder(&b).unwrap();
        let part = null_limit_part(&ladder).unwrap();
        assert!(part.b.approx_eq(&mv("e35", s), 1e-12));
        assert!(part.square().abs() < 1e-12);
        assert_eq!(part.method, DecompMethod::NullLimit);

        // A simple null bivector is its own null part (k = 1, W_1/W_0 = B).
        let simple_null = mv("e15", s);
        let ladder = spectral::w_ladder(&simple_null).unwrap();
        let part = null_limit_part(&ladder).unwrap();
        assert!(part.b.approx_eq(&simple_null, 1e-13));
    }

    #[test]
    fn eigen_pairs_of_e12() {
        let s = sig(2, 0, 0);
        let b = mv("e12", s);
        let spec = spectral::spectrum(&b).unwrap();
        let pairs = eigen_pairs(&b, &spec).unwrap();
        assert_eq!(pairs.len(), 1);
        let pair = &pairs[0];
        assert!((pair.mu - Complex64::new(0.0, 1.0)).norm() < 1e-10);
        assert!(pair.pairing_value.norm() > 0.5);
        // v₊ ∝ e1 + i e2 up to a complex phase: check the eigen-equation.
        let image = b.commutator(&pair.v_plus).unwrap();
        assert!(image.approx_eq(&(&pair.v_plus * pair.mu), 1e-10));

        let part = beta_from_pair(pair).unwrap();
        assert!(part.b.approx_eq(&b, 1e-10));
        // β · v± = ±v±.
        let beta = &pair.v_plus.wedge(&pair.v_minus).unwrap() / pair.pairing_value;
        let plus_action = beta.dot(&pair.v_plus).unwrap();
        assert!(plus_action.approx_eq(&pair.v_plus, 1e-10));
        let minus_action = beta.dot(&pair.v_minus).unwrap();
        assert!(minus_action.approx_eq(&-&pair.v_minus, 1e-10));
    }

    #[test]
    fn eigen_pairs_avoid_zero_pairings_in_isoclinic_case() {
        let s = sig(4, 0, 0);
        let b = mv("e12 + e34", s);
        let spec = spectral::spectrum(&b).unwrap();
        let pairs = eigen_pairs(&b, &spec).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert!(p.pairing_value.norm() > PAIRING_TOL);
        }
    }

    #[test]
    fn all_pairs_bivector_is_jordanesque() {
        let s = sig(2, 2, 0);
        let b = mv("e12+e13+e14+e23+e24+e34", s);
        match decompose(&b) {
            Err(DecompError::Jordanesque(details)) => {
                assert_eq!(details.effective_dimension, 4);
                assert!(details.found < details.expected);
            }
            other => panic!("expected Jordanesque error, got {other:?}"),
        }
    }

    #[test]
    fn decompose_worked_example_uses_tangent_path() {
        let s = sig(4, 0, 0);
        let d = decompose(&mv("e12 + 2*e34", s)).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert!(d
            .parts
            .iter()
            .all(|p| p.method == DecompMethod::OuterTangent));
    }

    #[test]
    fn decompose_isoclinic_uses_pairing_path() {
        let s = sig(4, 0, 0);
        let b = mv("e12 + e34", s);
        let d = decompose(&b).unwrap();
        assert_eq!(d.parts.len(), 2);
        for part in &d.parts {
            assert_eq!(part.method, DecompMethod::EigenPairing);
            assert!((part.square() + 1.0).abs() < 1e-9);
        }
        assert!(d.sum(s).approx_eq(&b, 1e-9));
        let comm = d.parts[0].b.commutator(&d.parts[1].b).unwrap();
        assert!(comm.max_norm() < 1e-9);
    }

    #[test]
    fn decompose_pseudo_null_example() {
        let s = sig(4, 0, 1);
        let b = mv("e12 + e35", s);
        let d = decompose(&b).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert!(d.sum(s).approx_eq(&b, 1e-10));
        let null_part = d
            .parts
            .iter()
            .find(|p| p.method == DecompMethod::NullLimit)
            .expect("null part present");
        assert!(null_part.b.approx_eq(&mv("e35", s), 1e-10));
        assert!(null_part.square().abs() < 1e-10);
    }

    #[test]
    fn decompose_zero_bivector() {
        let s = sig(4, 0, 0);
        let d = decompose(&Multivector::zero(s)).unwrap();
        assert!(d.parts.is_empty());
        assert_eq!(d.residual, 0.0);
    }

    #[test]
    fn boost_class_with_real_eigenvalue() {
        // e13 in R_{1,1} embedded in R_{2,2}: b² = +1, so μ = 1 is real.
        let s = sig(2, 2, 0);
        let b = mv("1.7*e13", s);
        let d = decompose(&b).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert!(d.parts[0].b.approx_eq(&b, 1e-10));
        assert!((d.parts[0].square() - 1.7f64.powi(2)).abs() < 1e-9);
    }
}
