//! Seeded random ensembles.
//!
//! Everything is driven by one 64-bit seed. Independent streams come from
//! [`sub_seed`], which mixes `(seed, counter)` through SplitMix64, so a
//! sample's value depends only on its index and never on how work is split
//! across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{c64, re, Complex64, ComplexMatrix, ComplexVector};

pub type SeededRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derived seed for the `counter`-th independent use of `seed`.
pub fn sub_seed(seed: u64, counter: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ counter.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts have variance 1/2.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    c64(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    // fill row-major so the stream order matches the serialized layout
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

pub fn gaussian_vector(dim: usize, rng: &mut impl Rng) -> ComplexVector {
    ComplexVector::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Uniformly distributed unit vector.
pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> ComplexVector {
    loop {
        let v = gaussian_vector(dim, rng);
        let n = v.norm();
        if n > 1e-300 {
            return v / re(n);
        }
    }
}

/// Haar-distributed unitary drawn from an explicit generator.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            re(1.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed unitary, deterministic in `seed`.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(dim, &mut seeded_rng(seed))
}

/// Random Hermitian matrix with Gaussian entries scaled by `scale`.
pub fn random_hermitian(dim: usize, scale: f64, rng: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    (&g + g.adjoint()) * re(0.5 * scale)
}
