//! Seeded randomized verification batteries over many signatures, with
//! machine-readable per-signature records. A fixed seed makes every suite
//! bit-reproducible; samples are assigned to signatures round-robin, so the
//! record order is deterministic as well.

use std::collections::HashMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cayley_hamilton::{self as ch};
use crate::ga_core::{Multivector, Signature};
use crate::oracle;
use crate::spectral;

/// One aggregated check result: the worst residual seen for this
/// (signature, check) cell and whether it stayed within the bound.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyRecord {
    pub signature: String,
    pub seed: u64,
    pub check: String,
    pub max_residual: f64,
    pub pass: bool,
}

pub fn all_pass(records: &[VerifyRecord]) -> bool {
    records.iter().all(|r| r.pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ch,
    Simplicial,
    Spectral,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Ch, Suite::Simplicial, Suite::Spectral];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ch => "ch",
            Suite::Simplicial => "simplicial",
            Suite::Spectral => "spectral",
        }
    }

    pub fn default_count(&self) -> usize {
        match self {
            Suite::Ch => 500,
            // Per-signature sample count for the simplicial battery.
            Suite::Simplicial => 50,
            Suite::Spectral => 200,
        }
    }

    pub fn default_max_dim(&self) -> usize {
        match self {
            Suite::Ch => 8,
            Suite::Simplicial => 6,
            Suite::Spectral => 8,
        }
    }

    pub fn run(&self, seed: u64, count: usize, max_dim: usize) -> Vec<VerifyRecord> {
        match self {
            Suite::Ch => ch_suite(seed, count, max_dim),
            Suite::Simplicial => simplicial_suite(seed, count, max_dim),
            Suite::Spectral => spectral_suite(seed, count, max_dim),
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ch" => Ok(Suite::Ch),
            "simplicial" => Ok(Suite::Simplicial),
            "spectral" => Ok(Suite::Spectral),
            other => Err(format!("unknown suite `{other}` (ch|simplicial|spectral|all)")),
        }
    }
}

// ---- sampling ----

/// Random real bivector with coefficients uniform in ±amplitude; resampled
/// until it is not numerically negligible.
pub fn random_bivector(sig: Signature, rng: &mut impl Rng, amplitude: f64) -> Multivector {
    loop {
        let mut b = Multivector::zero(sig);
        for mask in 0..sig.blade_count() {
            if mask.count_ones() == 2 {
                let c = rng.gen_range(-amplitude..=amplitude);
                b.set_coeff(mask, num_complex::Complex64::new(c, 0.0));
            }
        }
        if b.max_norm() > 1e-3 * amplitude {
            return b;
        }
    }
}

pub fn random_vector(sig: Signature, rng: &mut impl Rng) -> Multivector {
    let coords: Vec<f64> = (0..sig.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    Multivector::real_vector(sig, &coords).expect("coords match dimension")
}

/// Random probe inside the effective subspace: the image `B × w` of a
/// random vector, normalised; retries until the image is non-negligible.
pub fn random_image_vector(b: &Multivector, rng: &mut impl Rng) -> Option<Multivector> {
    for _ in 0..64 {
        let w = random_vector(b.sig(), rng);
        let image = b.commutator(&w).ok()?;
        let norm = image.max_norm();
        if norm > 1e-6 * b.max_norm() {
            return Some(&image / norm);
        }
    }
    None
}

/// All signatures (p, q, r) with `2 ≤ p + q ≤ max_pq` and `r ≤ max_r`,
/// in deterministic order.
pub fn signatures_up_to(max_pq: usize, max_r: usize) -> Vec<Signature> {
    let mut sigs = Vec::new();
    for total in 2..=max_pq {
        for p in (0..=total).rev() {
            for r in 0..=max_r {
                if let Ok(sig) = Signature::new(p, total - p, r) {
                    sigs.push(sig);
                }
            }
        }
    }
    sigs
}

// ---- aggregation plumbing ----

struct Aggregator {
    seed: u64,
    cells: HashMap<(String, &'static str), f64>,
    order: Vec<(String, &'static str)>,
    bounds: HashMap<&'static str, f64>,
}

impl Aggregator {
    fn new(seed: u64) -> Self {
        Aggregator {
            seed,
            cells: HashMap::new(),
            order: Vec::new(),
            bounds: HashMap::new(),
        }
    }

    fn record(&mut self, sig: Signature, check: &'static str, bound: f64, residual: f64) {
        let key = (sig.to_string(), check);
        self.bounds.insert(check, bound);
        match self.cells.get_mut(&key) {
            Some(worst) => *worst = worst.max(residual),
            None => {
                self.cells.insert(key.clone(), residual);
                self.order.push(key);
            }
        }
    }

    fn failure(&mut self, sig: Signature, check: &'static str, bound: f64) {
        // f64::MAX rather than infinity so the record stays a JSON number.
        self.record(sig, check, bound, f64::MAX);
    }

    fn finish(self) -> Vec<VerifyRecord> {
        self.order
            .into_iter()
            .map(|key| {
                let residual = self.cells[&key];
                let bound = self.bounds[key.1];
                VerifyRecord {
                    signature: key.0,
                    seed: self.seed,
                    check: key.1.to_string(),
                    max_residual: residual,
                    pass: residual <= bound,
                }
            })
            .collect()
    }
}

// ---- the suites ----

/// Factored and scalar Cayley-Hamilton residuals on random (B, v) samples
/// across signatures with `p + q ≤ max_dim`, `r ≤ 1`. Scalar-identity
/// probes are drawn from the image of the adjoint map (the identity is
/// stated on the effective subspace).
pub fn ch_suite(seed: u64, count: usize, max_dim: usize) -> Vec<VerifyRecord> {
    const BOUND: f64 = 1e-9;
    let sigs = signatures_up_to(max_dim, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agg = Aggregator::new(seed);
    for i in 0..count {
        let sig = sigs[i % sigs.len()];
        let b = random_bivector(sig, &mut rng, 1.0);
        let v = random_vector(sig, &mut rng);
        match ch::check_factored_ch(&b, &v) {
            Ok(res) => agg.record(sig, "factored_ch", BOUND, res.relative()),
            Err(_) => agg.failure(sig, "factored_ch", BOUND),
        }
        match random_image_vector(&b, &mut rng) {
            Some(probe) => match ch::check_scalar_ch(&b, &probe) {
                Ok(res) => agg.record(sig, "scalar_ch", BOUND, res.relative()),
                Err(_) => agg.failure(sig, "scalar_ch", BOUND),
            },
            None => agg.failure(sig, "scalar_ch", BOUND),
        }
    }
    agg.finish()
}

/// Characteristic-polynomial agreement between the ladder route and the
/// adjoint-matrix oracle, plus the elementary-symmetric-polynomial
/// identity `⟨W_j²⟩₀ = e_j(μ₁², ..., μ_k²)`.
pub fn spectral_suite(seed: u64, count: usize, max_dim: usize) -> Vec<VerifyRecord> {
    const BOUND: f64 = 1e-8;
    let sigs = signatures_up_to(max_dim, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agg = Aggregator::new(seed);
    for i in 0..count {
        let sig = sigs[i % sigs.len()];
        let b = random_bivector(sig, &mut rng, 1.0);
        let data = match spectral::spectrum(&b) {
            Ok(d) => d,
            Err(_) => {
                agg.failure(sig, "char_poly_vs_adjoint", BOUND);
                agg.failure(sig, "elementary_symmetric", BOUND);
                continue;
            }
        };
        match char_poly_residual(&b, &data) {
            Some(res) => agg.record(sig, "char_poly_vs_adjoint", BOUND, res),
            None => agg.failure(sig, "char_poly_vs_adjoint", BOUND),
        }
        agg.record(sig, "elementary_symmetric", BOUND, symmetric_residual(&data));
    }
    agg.finish()
}

/// Relative disagreement between `det(μI - A)` (Faddeev-LeVerrier on the
/// adjoint matrix) and `μ^{n-2k} Σ (-1)^j c_j μ^{2(k-j)}` from the ladder.
fn char_poly_residual(b: &Multivector, data: &spectral::SpectralData) -> Option<f64> {
    let a = oracle::adjoint_matrix(b).ok()?;
    let fl = oracle::char_poly_matrix(&a);
    let k = data.ladder.k();
    let n = b.sig().dim();
    let scale = fl
        .iter()
        .map(|c| c.abs())
        .chain(data.q_coeffs.iter().map(|c| c.abs()))
        .fold(1.0, f64::max);
    let mut worst = 0.0f64;
    for (i, &coeff) in fl.iter().enumerate() {
        let expected = if i % 2 == 0 && i / 2 <= k {
            let j = i / 2;
            if j % 2 == 0 {
                data.q_coeffs[j]
            } else {
                -data.q_coeffs[j]
            }
        } else {
            0.0
        };
        let _ = n;
        worst = worst.max((coeff - expected).abs() / scale);
    }
    Some(worst)
}

/// Relative disagreement of `c_j` with the elementary symmetric polynomial
/// of the squared eigenvalues (multiplicities respected).
fn symmetric_residual(data: &spectral::SpectralData) -> f64 {
    let k = data.ladder.k();
    let lambdas: Vec<num_complex::Complex64> = data
        .pairs
        .iter()
        .flat_map(|p| std::iter::repeat(p.lambda).take(p.multiplicity))
        .collect();
    // e_j via the running product Π (1 + t λ_i).
    let mut esp = vec![num_complex::Complex64::ZERO; k + 1];
    esp[0] = num_complex::Complex64::new(1.0, 0.0);
    for &lambda in &lambdas {
        for j in (1..=k).rev() {
            let bump = esp[j - 1] * lambda;
            esp[j] += bump;
        }
    }
    let scale = data.q_coeffs.iter().map(|c| c.abs()).fold(1.0, f64::max);
    let mut worst = 0.0f64;
    for j in 0..=k {
        let expected = num_complex::Complex64::new(data.q_coeffs[j], 0.0);
        worst = worst.max((esp[j] - expected).norm() / scale);
    }
    worst
}

/// Simplicial-derivative identities on every non-degenerate signature with
/// `n ≤ max_dim`, `count` random bivectors each: `∂_(1)f_(1) = -2B`
/// exactly, even-index scalars reproduce `(-1)^j ⟨W_j²⟩₀`, odd-index
/// scalars vanish.
pub fn simplicial_suite(seed: u64, count: usize, max_dim: usize) -> Vec<VerifyRecord> {
    const D1_BOUND: f64 = 1e-12;
    const SCALAR_BOUND: f64 = 1e-10;
    let mut sigs = Vec::new();
    for n in 2..=max_dim {
        for p in (0..=n).rev() {
            if let Ok(sig) = Signature::new(p, n - p, 0) {
                sigs.push(sig);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agg = Aggregator::new(seed);
    for &sig in &sigs {
        for _ in 0..count {
            let b = random_bivector(sig, &mut rng, 1.0);
            let ladder = match spectral::w_ladder(&b) {
                Ok(l) => l,
                Err(_) => {
                    agg.failure(sig, "d1_f1", D1_BOUND);
                    continue;
                }
            };
            match ch::simplicial_derivative_scaled(&b, 1) {
                Ok((d1, scale)) => {
                    let residual = d1.distance(&(&b * -2.0)) / scale.max(b.max_norm());
                    agg.record(sig, "d1_f1", D1_BOUND, residual);
                }
                Err(_) => agg.failure(sig, "d1_f1", D1_BOUND),
            }
            for j in 1..=ladder.k() {
                let wj = ladder.term(j);
                let cj = match wj.geometric_product(wj) {
                    Ok(sq) => sq.scalar_part().re,
                    Err(_) => {
                        agg.failure(sig, "even_scalars", SCALAR_BOUND);
                        continue;
                    }
                };
                match ch::simplicial_derivative_scaled(&b, 2 * j) {
                    Ok((derivative, scale)) => {
                        let expected = if j % 2 == 0 { cj } else { -cj };
                        let got = derivative.scalar_part().re;
                        let residual = (got - expected).abs() / scale.max(1.0);
                        agg.record(sig, "even_scalars", SCALAR_BOUND, residual);
                    }
                    Err(_) => agg.failure(sig, "even_scalars", SCALAR_BOUND),
                }
            }
            for j in 0..ladder.k() {
                let r = 2 * j + 1;
                match ch::simplicial_derivative_scaled(&b, r) {
                    Ok((derivative, scale)) => {
                        let residual = derivative.scalar_part().norm() / scale.max(1.0);
                        agg.record(sig, "odd_scalars", SCALAR_BOUND, residual);
                    }
                    Err(_) => agg.failure(sig, "odd_scalars", SCALAR_BOUND),
                }
            }
        }
    }
    agg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_are_deterministic() {
        let a = spectral_suite(7, 12, 4);
        let b = spectral_suite(7, 12, 4);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.signature, y.signature);
            assert_eq!(x.check, y.check);
            assert_eq!(x.max_residual.to_bits(), y.max_residual.to_bits());
        }
    }

    #[test]
    fn small_ch_suite_passes() {
        let records = ch_suite(42, 40, 5);
        assert!(all_pass(&records), "failing records: {:?}", records
            .iter()
            .filter(|r| !r.pass)
            .collect::<Vec<_>>());
    }

    #[test]
    fn small_spectral_suite_passes() {
        let records = spectral_suite(42, 30, 5);
        assert!(all_pass(&records), "failing records: {:?}", records
            .iter()
            .filter(|r| !r.pass)
            .collect::<Vec<_>>());
    }

    #[test]
    fn small_simplicial_suite_passes() {
        let records = simplicial_suite(42, 4, 4);
        assert!(all_pass(&records), "failing records: {:?}", records
            .iter()
            .filter(|r| !r.pass)
            .collect::<Vec<_>>());
    }
}
