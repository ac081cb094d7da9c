//! Seeded random draws used by constructors, tests and searches.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::tensor::{c, cis, CMat, C64};

pub type SeededRng = ChaCha8Rng;

/// Default seed for every randomized routine that does not receive one.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes extra indices into a base seed (splitmix64 finalizer per part).
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(base, |acc, &p| {
        let mut z = acc ^ p.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    })
}

/// Standard complex Gaussian sample.
pub fn gaussian(rng: &mut impl Rng) -> C64 {
    // Box–Muller
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    c(r * t.cos(), r * t.sin()) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_phase(rng: &mut impl Rng) -> C64 {
    cis(rng.gen_range(0.0..2.0 * std::f64::consts::PI))
}

pub fn ginibre(n: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(n, n, |_, _| gaussian(rng))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMat {
    let qr = ginibre(n, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let z = r[(j, j)];
        let ph = if z.norm() > 0.0 { z / z.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMat {
    let g = ginibre(n, rng);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::unitarity_residual;

    #[test]
    fn haar_sample_is_unitary() {
        let mut r = rng(3);
        for n in 1..6 {
            assert!(unitarity_residual(&random_unitary(n, &mut r)) < 1e-13);
        }
    }
}
