use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{GaError, Signature, Tolerance};

/// Dense multivector of `R_{p,q,r}` with complex coefficients.
///
/// Storage is canonical: the coefficient at index `m` belongs to the blade
/// `e_{i1} e_{i2} ...` whose (0-indexed) generators are the set bits of `m`,
/// taken in ascending order. Values are immutable after construction; every
/// operation returns a fresh multivector.
#[derive(Clone, Debug)]
pub struct Multivector {
    sig: Signature,
    coeffs: Vec<Complex64>,
}

#[derive(Clone, Copy, PartialEq)]
enum ProductKind {
    Geometric,
    Wedge,
    Dot,
}

/// Parity of the transpositions needed to interleave the generators of `b`
/// into those of `a` (each generator of `b` passes every generator of `a`
/// with a strictly larger index).
fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut rest = a >> 1;
    let mut swaps = 0u32;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Geometric product of two basis blades: the combined sign (transposition
/// parity times metric factors of annihilated generators) and the result
/// blade. A shared degenerate generator yields factor 0.
pub(crate) fn blade_mul(sig: Signature, a: usize, b: usize) -> (f64, usize) {
    let mut factor = reorder_sign(a, b);
    let mut common = a & b;
    while common != 0 {
        let i = common.trailing_zeros() as usize;
        factor *= sig.metric(i);
        if factor == 0.0 {
            break;
        }
        common &= common - 1;
    }
    (factor, a ^ b)
}

pub(crate) fn grade_of(mask: usize) -> usize {
    mask.count_ones() as usize
}

impl Multivector {
    // ---- constructors ----

    pub fn zero(sig: Signature) -> Self {
        Multivector {
            sig,
            coeffs: vec![Complex64::ZERO; sig.blade_count()],
        }
    }

    pub fn scalar(sig: Signature, value: f64) -> Self {
        Self::scalar_c(sig, Complex64::new(value, 0.0))
    }

    pub fn scalar_c(sig: Signature, value: Complex64) -> Self {
        let mut mv = Self::zero(sig);
        mv.coeffs[0] = value;
        mv
    }

    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, 1.0)
    }

    /// Basis vector `e_{i+1}` (0-indexed argument).
    pub fn basis_vector(sig: Signature, i: usize) -> Result<Self, GaError> {
        if i >= sig.dim() {
            return Err(GaError::GeneratorOutOfRange {
                index: i + 1,
                dim: sig.dim(),
            });
        }
        Self::basis_blade(sig, 1 << i)
    }

    /// Unit basis blade for the given bitmask.
    pub fn basis_blade(sig: Signature, mask: usize) -> Result<Self, GaError> {
        if mask >= sig.blade_count() {
            return Err(GaError::GeneratorOutOfRange {
                index: mask,
                dim: sig.dim(),
            });
        }
        let mut mv = Self::zero(sig);
        mv.coeffs[mask] = Complex64::new(1.0, 0.0);
        Ok(mv)
    }

    pub fn from_coeffs(sig: Signature, coeffs: Vec<Complex64>) -> Result<Self, GaError> {
        if coeffs.len() != sig.blade_count() {
            return Err(GaError::CoefficientLength {
                got: coeffs.len(),
                expected: sig.blade_count(),
            });
        }
        Ok(Multivector { sig, coeffs })
    }

    /// Grade-1 element from generator coordinates (length `n`).
    pub fn vector(sig: Signature, coords: &[Complex64]) -> Result<Self, GaError> {
        if coords.len() != sig.dim() {
            return Err(GaError::CoefficientLength {
                got: coords.len(),
                expected: sig.dim(),
            });
        }
        let mut mv = Self::zero(sig);
        for (i, c) in coords.iter().enumerate() {
            mv.coeffs[1 << i] = *c;
        }
        Ok(mv)
    }

    pub fn real_vector(sig: Signature, coords: &[f64]) -> Result<Self, GaError> {
        let c: Vec<Complex64> = coords.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::vector(sig, &c)
    }

    // ---- accessors ----

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coeff(&self, mask: usize) -> Complex64 {
        self.coeffs[mask]
    }

    pub fn set_coeff(&mut self, mask: usize, value: Complex64) {
        self.coeffs[mask] = value;
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Generator coordinates of the grade-1 part.
    pub fn vector_coords(&self) -> Vec<Complex64> {
        (0..self.sig.dim()).map(|i| self.coeffs[1 << i]).collect()
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(|(m, c)| (m, *c))
    }

    /// Largest coefficient magnitude; the scale used by every tolerance test.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary-part magnitude over all coefficients.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_numerically_zero(&self, threshold: f64) -> bool {
        self.max_norm() <= threshold
    }

    /// Real iff every imaginary part is below `tol` relative to the largest
    /// coefficient magnitude.
    pub fn is_real(&self, tol: Tolerance) -> bool {
        self.max_imag() <= tol.threshold(self.max_norm())
    }

    /// Support lies in grade-2 blades only (below tolerance elsewhere).
    pub fn is_bivector(&self, tol: Tolerance) -> bool {
        let thr = tol.threshold(self.max_norm());
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| grade_of(m) == 2 || c.norm() <= thr)
    }

    /// True when the support is a single grade (or the value is zero).
    pub fn is_homogeneous(&self, grade: usize, tol: Tolerance) -> bool {
        let thr = tol.threshold(self.max_norm());
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| grade_of(m) == grade || c.norm() <= thr)
    }

    pub fn real_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Complex64::new(c.re, 0.0))
            .collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }

    /// Complex conjugation of every coefficient.
    pub fn conj(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.conj()).collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }

    pub fn approx_eq(&self, other: &Self, threshold: f64) -> bool {
        self.sig == other.sig && self.distance(other) <= threshold
    }

    /// Max-norm of the coefficient-wise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn ensure_same_sig(&self, other: &Self) -> Result<(), GaError> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(GaError::SignatureMismatch(self.sig, other.sig))
        }
    }

    // ---- products ----

    fn mul_kind(&self, rhs: &Self, kind: ProductKind) -> Self {
        debug_assert_eq!(self.sig, rhs.sig);
        let mut out = Self::zero(self.sig);
        for (ma, ca) in self.nonzero() {
            let ga = grade_of(ma);
            for (mb, cb) in rhs.nonzero() {
                let gout = grade_of(ma ^ mb);
                let keep = match kind {
                    ProductKind::Geometric => true,
                    ProductKind::Wedge => gout == ga + grade_of(mb),
                    ProductKind::Dot => gout == ga.abs_diff(grade_of(mb)),
                };
                if !keep {
                    continue;
                }
                let (f, m) = blade_mul(self.sig, ma, mb);
                if f != 0.0 {
                    out.coeffs[m] += ca * cb * f;
                }
            }
        }
        out
    }

    /// The full geometric (Clifford) product `ab`.
    pub fn geometric_product(&self, rhs: &Self) -> Result<Self, GaError> {
        self.ensure_same_sig(rhs)?;
        Ok(self.mul_kind(rhs, ProductKind::Geometric))
    }

    /// Outer product: for homogeneous grades s, t this is `⟨ab⟩_{s+t}`,
    /// extended bilinearly.
    pub fn wedge(&self, rhs: &Self) -> Result<Self, GaError> {
        self.ensure_same_sig(rhs)?;
        Ok(self.mul_kind(rhs, ProductKind::Wedge))
    }

    /// Grade-|s-t| contraction `⟨ab⟩_{|s-t|}`, extended bilinearly over
    /// grades (scalars pass through: `1 · x = x`).
    pub fn dot(&self, rhs: &Self) -> Result<Self, GaError> {
        self.ensure_same_sig(rhs)?;
        Ok(self.mul_kind(rhs, ProductKind::Dot))
    }

    /// Commutator product `a × b = (ab - ba)/2`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, GaError> {
        self.ensure_same_sig(rhs)?;
        let ab = self.mul_kind(rhs, ProductKind::Geometric);
        let ba = rhs.mul_kind(self, ProductKind::Geometric);
        Ok((&ab - &ba) * 0.5)
    }

    /// Anti-commutator `(ab + ba)/2`.
    pub fn anticommutator(&self, rhs: &Self) -> Result<Self, GaError> {
        self.ensure_same_sig(rhs)?;
        let ab = self.mul_kind(rhs, ProductKind::Geometric);
        let ba = rhs.mul_kind(self, ProductKind::Geometric);
        Ok((&ab + &ba) * 0.5)
    }

    /// Keeps only the coefficients whose blade has `ell` generators.
    pub fn grade_select(&self, ell: usize) -> Self {
        let mut out = Self::zero(self.sig);
        for (m, c) in self.nonzero() {
            if grade_of(m) == ell {
                out.coeffs[m] = c;
            }
        }
        out
    }

    /// Reversion: each grade-g component picks up `(-1)^{g(g-1)/2}`.
    pub fn reverse(&self) -> Self {
        let mut out = self.clone();
        for (m, c) in out.coeffs.iter_mut().enumerate() {
            if grade_of(m) % 4 >= 2 {
                *c = -*c;
            }
        }
        out
    }

    /// Group action `X -> R X R~`.
    pub fn sandwich(&self, x: &Self) -> Result<Self, GaError> {
        self.ensure_same_sig(x)?;
        Ok(&(self * x) * &self.reverse())
    }

    // ---- inverse ----

    /// Multiplicative inverse via a dense solve of the left-regular
    /// representation, `L_a x = 1`. Works uniformly in all signatures
    /// (including degenerate ones) and doubles as a zero-divisor detector:
    /// the solution is accepted only if both residuals `a x - 1` and
    /// `x a - 1` are numerically zero.
    pub fn mv_inverse(&self) -> Result<Self, GaError> {
        self.mv_inverse_with(Tolerance::default())
    }

    pub fn mv_inverse_with(&self, tol: Tolerance) -> Result<Self, GaError> {
        let n = self.sig.blade_count();
        let scale = self.max_norm();
        if scale == 0.0 {
            return Err(GaError::NonInvertible {
                residual: f64::INFINITY,
            });
        }
        let mut l = DMatrix::<Complex64>::zeros(n, n);
        for (ma, ca) in self.nonzero() {
            for col in 0..n {
                let (f, row) = blade_mul(self.sig, ma, col);
                if f != 0.0 {
                    l[(row, col)] += ca * f;
                }
            }
        }
        let mut rhs = DVector::<Complex64>::zeros(n);
        rhs[0] = Complex64::new(1.0, 0.0);
        let solution = l.lu().solve(&rhs);
        let x = match solution {
            Some(x) => x,
            None => {
                return Err(GaError::NonInvertible {
                    residual: f64::INFINITY,
                })
            }
        };
        let inv = Multivector {
            sig: self.sig,
            coeffs: x.iter().copied().collect(),
        };
        let one = Self::one(self.sig);
        let res_right = (self * &inv).distance(&one);
        let res_left = (&inv * self).distance(&one);
        let residual = res_right.max(res_left);
        let res_scale = (scale * inv.max_norm()).max(1.0);
        if residual > tol.threshold(res_scale) {
            return Err(GaError::NonInvertible { residual });
        }
        Ok(inv)
    }
}

// ---- operators (panic on signature mismatch; use the checked methods at
// boundaries where mixed signatures can occur) ----

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        self.mul_kind(rhs, ProductKind::Geometric)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        let coeffs = self.coeffs.iter().map(|c| c * rhs).collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        let coeffs = self.coeffs.iter().map(|c| c * rhs).collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }
}

impl Div<f64> for &Multivector {
    type Output = Multivector;
    fn div(self, rhs: f64) -> Multivector {
        self * (1.0 / rhs)
    }
}

impl Div<Complex64> for &Multivector {
    type Output = Multivector;
    fn div(self, rhs: Complex64) -> Multivector {
        self * rhs.inv()
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Multivector {
            type Output = Multivector;
            fn $method(self, rhs: Multivector) -> Multivector {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Multivector> for Multivector {
            type Output = Multivector;
            fn $method(self, rhs: &Multivector) -> Multivector {
                (&self).$method(rhs)
            }
        }
        impl $trait<Multivector> for &Multivector {
            type Output = Multivector;
            fn $method(self, rhs: Multivector) -> Multivector {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        &self * rhs
    }
}

impl Mul<Complex64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        &self * rhs
    }
}

impl Div<f64> for Multivector {
    type Output = Multivector;
    fn div(self, rhs: f64) -> Multivector {
        &self / rhs
    }
}

impl Div<Complex64> for Multivector {
    type Output = Multivector;
    fn div(self, rhs: Complex64) -> Multivector {
        &self / rhs
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::parse::canonical_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: usize, q: usize, r: usize) -> Signature {
        Signature::new(p, q, r).unwrap()
    }

    fn blade(s: Signature, mask: usize) -> Multivector {
        Multivector::basis_blade(s, mask).unwrap()
    }

    #[test]
    fn generator_squares_follow_signature() {
        let e1 = blade(sig(1, 0, 0), 0b1);
        assert_eq!((&e1 * &e1).scalar_part(), Complex64::new(1.0, 0.0));

        let e1_null = blade(sig(0, 0, 1), 0b1);
        assert_eq!((&e1_null * &e1_null).max_norm(), 0.0);

        let e1_neg = blade(sig(0, 1, 0), 0b1);
        assert_eq!((&e1_neg * &e1_neg).scalar_part(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn worked_square_in_r4() {
        // (e12 + 2 e34)^2 = -5 + 4 e1234, by expanding the four blade products.
        let s = sig(4, 0, 0);
        let b = &blade(s, 0b0011) + &(&blade(s, 0b1100) * 2.0);
        let sq = &b * &b;
        let mut expected = Multivector::scalar(s, -5.0);
        expected.set_coeff(0b1111, Complex64::new(4.0, 0.0));
        assert!(sq.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn commutator_of_vectors_is_wedge() {
        let s = sig(2, 1, 0);
        let u = Multivector::real_vector(s, &[1.0, 2.0, -0.5]).unwrap();
        let v = Multivector::real_vector(s, &[-3.0, 0.25, 1.5]).unwrap();
        let comm = u.commutator(&v).unwrap();
        let wedge = u.wedge(&v).unwrap();
        assert!(comm.approx_eq(&wedge, 1e-14));
    }

    #[test]
    fn commutator_of_bivector_and_vector_is_dot() {
        let s = sig(3, 1, 0);
        let b = &blade(s, 0b0011) + &(&blade(s, 0b1010) * -2.0);
        let v = Multivector::real_vector(s, &[0.5, -1.0, 2.0, 0.75]).unwrap();
        let comm = b.commutator(&v).unwrap();
        let dot = b.dot(&v).unwrap();
        assert!(comm.approx_eq(&dot, 1e-14));
    }

    #[test]
    fn disjoint_bivector_blades_commute() {
        let s = sig(4, 0, 0);
        let e12 = blade(s, 0b0011);
        let e34 = blade(s, 0b1100);
        assert_eq!(e12.commutator(&e34).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn grade_select_examples() {
        let s = sig(4, 0, 0);
        let x = &Multivector::one(s) + &blade(s, 0b0011);
        assert!(x.grade_select(2).approx_eq(&blade(s, 0b0011), 0.0));

        let b = &blade(s, 0b0011) + &(&blade(s, 0b1100) * 2.0);
        let sq = &b * &b;
        assert!(sq
            .grade_select(4)
            .approx_eq(&(&blade(s, 0b1111) * 4.0), 1e-15));
    }

    #[test]
    fn reverse_signs_by_grade() {
        let s = sig(4, 0, 0);
        let e12 = blade(s, 0b0011);
        assert!(e12.reverse().approx_eq(&-&e12, 0.0));

        let x = &(&Multivector::one(s) + &e12) + &blade(s, 0b1111);
        let expected = &(&Multivector::one(s) - &e12) + &blade(s, 0b1111);
        assert!(x.reverse().approx_eq(&expected, 0.0));
    }

    #[test]
    fn mv_inverse_examples() {
        let s = sig(4, 0, 0);
        let two = Multivector::scalar(s, 2.0);
        assert!(two
            .mv_inverse()
            .unwrap()
            .approx_eq(&Multivector::scalar(s, 0.5), 1e-14));

        // 1 + e12 has inverse (1 - e12)/2 since (1+e12)(1-e12) = 1 - e12^2 = 2.
        let x = &Multivector::one(s) + &blade(s, 0b0011);
        let expected = &(&Multivector::one(s) - &blade(s, 0b0011)) * 0.5;
        assert!(x.mv_inverse().unwrap().approx_eq(&expected, 1e-13));

        // 1 - e1234 is a zero divisor: (1 - e1234)(1 + e1234) = 1 - 1 = 0.
        let zd = &Multivector::one(s) - &blade(s, 0b1111);
        assert!(matches!(zd.mv_inverse(), Err(GaError::NonInvertible { .. })));
    }

    #[test]
    fn mv_inverse_in_degenerate_signature() {
        // e12 + e35 in R_{4,0,1}: verified against the hand-expanded inverse.
        let s = sig(4, 0, 1);
        let b = &blade(s, 0b00011) + &blade(s, 0b10100);
        let inv = b.mv_inverse().unwrap();
        let expected = &-&blade(s, 0b00011) + &blade(s, 0b10100);
        assert!(inv.approx_eq(&expected, 1e-13));
    }

    #[test]
    fn sandwich_reflection_sign() {
        let s = sig(2, 0, 0);
        let e1 = blade(s, 0b01);
        let e2 = blade(s, 0b10);
        let refl = e1.sandwich(&e2).unwrap();
        assert!(refl.approx_eq(&-&e2, 0.0));
        let x = &e2 + &Multivector::one(s);
        assert!(Multivector::one(s).sandwich(&x).unwrap().approx_eq(&x, 0.0));
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = Multivector::one(sig(2, 0, 0));
        let b = Multivector::one(sig(3, 0, 0));
        assert!(matches!(
            a.geometric_product(&b),
            Err(GaError::SignatureMismatch(_, _))
        ));
    }
}
