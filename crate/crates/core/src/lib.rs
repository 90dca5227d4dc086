//! Spectra and invariant decompositions of bivectors in geometric algebras
//! `R_{p,q,r}` of arbitrary (possibly degenerate) signature.
//!
//! The crate is organised around the ladder of wedge powers `W_j = B^∧j / j!`
//! of a bivector `B`. The ladder yields the outer exponential, the
//! characteristic polynomial of the adjoint action `v ↦ B × v`, and from
//! there the eigenvalue pairs `±μ_j`. Those eigenvalues drive everything
//! else:
//!
//! * [`spectral`] — the `W_j` ladder, outer exponential, characteristic
//!   polynomial and spectrum,
//! * [`decomp`] — outer trigonometric functions and the decomposition of a
//!   bivector into commuting simple bivectors (outer-tangent formula,
//!   eigenvector pairing, null limit),
//! * [`rotor_cayley`] — closed-form exponentials, the generalised Cayley
//!   transform and the `⊕` composition law,
//! * [`cayley_hamilton`] — the factored and scalar Cayley-Hamilton
//!   identities and the simplicial-derivative coefficient checks,
//! * [`oracle`] — independent dense-matrix backends (eigendecomposition,
//!   Faddeev-LeVerrier, series exponential) used to cross-validate the
//!   algebraic routes,
//! * [`verify`] — seeded randomized batteries over many signatures,
//!   reported as machine-readable records.
//!
//! All multivectors are dense with complex coefficients ([`ga_core`]);
//! every operation is a pure function of its inputs and safe to call
//! concurrently.

pub mod ga_core;
pub mod spectral;
pub mod decomp;
pub mod rotor_cayley;
pub mod cayley_hamilton;
pub mod oracle;
pub mod verify;

pub use ga_core::{parse_multivector, GaError, Multivector, Signature, Tolerance};
pub use spectral::{char_poly, outer_exp, outer_norm_sq, spectrum, w_ladder, SpectralData, WLadder};
pub use decomp::{decompose, Decomposition, SimpleBivector};
pub use rotor_cayley::{cayley, exp_bivector, Rotor};
