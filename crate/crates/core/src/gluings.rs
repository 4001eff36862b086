//! Gluings of two channels and their interference functions.
//!
//! With Kraus operators `{A_k}` in arm A and `{B_l}` in arm B, a local
//! (LSP) gluing is fixed by coefficient vectors `a`, `b` with norms at most
//! one, and has
//!
//! ```text
//! F(ρ) = Σ_kl b_l a_k* tr[A_k† B_l ρ]
//! ```
//!
//! A subspace preserving (SP) gluing replaces `b_l a_k*` by a contraction
//! `C_lk` (`CC† ≤ I`). With a unitary `U` inserted after arm B the same sum
//! with `A_k† U B_l` gives the generalized interference function.
//!
//! Coefficients are stored against the Kraus ordering of the channels they
//! were built with; remixing a channel yields a new gluing value.

use rand::Rng;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::numerics::{self, re, trace, Complex64, ComplexMatrix, ComplexVector};
use crate::states::{check_dims, DensityMatrix, PureState};

/// Slack allowed on `‖a‖₂ ≤ 1` and `s_max(C) ≤ 1`.
pub const NORM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LspGluing {
    channel_a: KrausChannel,
    channel_b: KrausChannel,
    coeff_a: ComplexVector,
    coeff_b: ComplexVector,
}

impl LspGluing {
    pub fn new(
        channel_a: KrausChannel,
        channel_b: KrausChannel,
        coeff_a: ComplexVector,
        coeff_b: ComplexVector,
    ) -> Result<Self> {
        check_dims(channel_a.dim(), channel_b.dim())?;
        check_dims(channel_a.len(), coeff_a.len())?;
        check_dims(channel_b.len(), coeff_b.len())?;
        for c in [&coeff_a, &coeff_b] {
            let norm = c.norm();
            if !norm.is_finite() || norm > 1.0 + NORM_SLACK {
                return Err(Error::CoefficientNorm { norm });
            }
        }
        Ok(LspGluing {
            channel_a,
            channel_b,
            coeff_a,
            coeff_b,
        })
    }

    /// Both arms empty: identity channels with unit coefficients.
    pub fn identity(dim: usize) -> Self {
        let one = ComplexVector::from_element(1, re(1.0));
        LspGluing {
            channel_a: KrausChannel::identity(dim),
            channel_b: KrausChannel::identity(dim),
            coeff_a: one.clone(),
            coeff_b: one,
        }
    }

    pub fn random(dim: usize, rank_a: usize, rank_b: usize, rng: &mut impl Rng) -> Self {
        let channel_a = KrausChannel::random(dim, rank_a, rng);
        let channel_b = KrausChannel::random(dim, rank_b, rng);
        let coeff_a = random_ball_vector(rank_a, rng);
        let coeff_b = random_ball_vector(rank_b, rng);
        LspGluing {
            channel_a,
            channel_b,
            coeff_a,
            coeff_b,
        }
    }

    pub fn dim(&self) -> usize {
        self.channel_a.dim()
    }

    pub fn channel_a(&self) -> &KrausChannel {
        &self.channel_a
    }

    pub fn channel_b(&self) -> &KrausChannel {
        &self.channel_b
    }

    pub fn coeff_a(&self) -> &ComplexVector {
        &self.coeff_a
    }

    pub fn coeff_b(&self) -> &ComplexVector {
        &self.coeff_b
    }

    /// The SP gluing with `C = b a†`.
    pub fn to_sp(&self) -> SpGluing {
        SpGluing {
            channel_a: self.channel_a.clone(),
            channel_b: self.channel_b.clone(),
            contraction: &self.coeff_b * self.coeff_a.adjoint(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpGluing {
    channel_a: KrausChannel,
    channel_b: KrausChannel,
    contraction: ComplexMatrix,
}

impl SpGluing {
    /// `contraction` has shape (Kraus count of B) × (Kraus count of A).
    pub fn new(
        channel_a: KrausChannel,
        channel_b: KrausChannel,
        contraction: ComplexMatrix,
    ) -> Result<Self> {
        check_dims(channel_a.dim(), channel_b.dim())?;
        check_dims(channel_b.len(), contraction.nrows())?;
        check_dims(channel_a.len(), contraction.ncols())?;
        numerics::ensure_finite(&contraction)?;
        let largest = numerics::spectral_norm(&contraction);
        if largest > 1.0 + NORM_SLACK {
            return Err(Error::ContractionInfeasible { largest });
        }
        Ok(SpGluing {
            channel_a,
            channel_b,
            contraction,
        })
    }

    pub fn random(dim: usize, rank_a: usize, rank_b: usize, rng: &mut impl Rng) -> Self {
        let channel_a = KrausChannel::random(dim, rank_a, rng);
        let channel_b = KrausChannel::random(dim, rank_b, rng);
        let contraction = random_contraction(rank_b, rank_a, rng);
        SpGluing {
            channel_a,
            channel_b,
            contraction,
        }
    }

    pub fn dim(&self) -> usize {
        self.channel_a.dim()
    }

    pub fn channel_a(&self) -> &KrausChannel {
        &self.channel_a
    }

    pub fn channel_b(&self) -> &KrausChannel {
        &self.channel_b
    }

    pub fn contraction(&self) -> &ComplexMatrix {
        &self.contraction
    }
}

/// `Ã₀ = Σ_k a_k A_k` and `B̃₀ = Σ_l b_l B_l`; `F(ρ) = tr[Ã₀† B̃₀ ρ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceOperatorPair {
    pub op_a: ComplexMatrix,
    pub op_b: ComplexMatrix,
}

impl CoherenceOperatorPair {
    pub fn interference(&self, rho: &DensityMatrix) -> Result<Complex64> {
        check_dims(self.op_a.nrows(), rho.dim())?;
        Ok(trace(&(self.op_a.adjoint() * &self.op_b * rho.matrix())))
    }
}

fn combine(kraus: &[ComplexMatrix], coeffs: &ComplexVector) -> ComplexMatrix {
    let dim = kraus[0].nrows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (k, op) in kraus.iter().enumerate() {
        out += op * coeffs[k];
    }
    out
}

pub fn coherence_operators(g: &LspGluing) -> CoherenceOperatorPair {
    CoherenceOperatorPair {
        op_a: combine(g.channel_a.kraus(), &g.coeff_a),
        op_b: combine(g.channel_b.kraus(), &g.coeff_b),
    }
}

/// `T_kl = tr[A_k† U B_l ρ]` (with `U = I` when absent).
fn pair_traces(
    a: &KrausChannel,
    b: &KrausChannel,
    rho: &DensityMatrix,
    u: Option<&ComplexMatrix>,
) -> ComplexMatrix {
    let right: Vec<ComplexMatrix> = b
        .kraus()
        .iter()
        .map(|bl| match u {
            Some(u) => u * bl * rho.matrix(),
            None => bl * rho.matrix(),
        })
        .collect();
    ComplexMatrix::from_fn(a.len(), b.len(), |k, l| {
        trace(&(a.kraus()[k].adjoint() * &right[l]))
    })
}

pub fn interference_lsp(g: &LspGluing, rho: &DensityMatrix) -> Result<Complex64> {
    check_dims(g.dim(), rho.dim())?;
    let t = pair_traces(&g.channel_a, &g.channel_b, rho, None);
    let mut f = re(0.0);
    for k in 0..g.channel_a.len() {
        for l in 0..g.channel_b.len() {
            f += g.coeff_b[l] * g.coeff_a[k].conj() * t[(k, l)];
        }
    }
    Ok(f)
}

pub fn interference_sp(g: &SpGluing, rho: &DensityMatrix) -> Result<Complex64> {
    check_dims(g.dim(), rho.dim())?;
    let t = pair_traces(&g.channel_a, &g.channel_b, rho, None);
    Ok(contract(&g.contraction, &t))
}

/// `Σ_kl C_lk T_kl = tr[C T]`.
fn contract(c: &ComplexMatrix, t: &ComplexMatrix) -> Complex64 {
    let mut f = re(0.0);
    for k in 0..t.nrows() {
        for l in 0..t.ncols() {
            f += c[(l, k)] * t[(k, l)];
        }
    }
    f
}

/// `G(ρ, U) = Σ_kl C_lk tr[A_k† U B_l ρ]`.
pub fn generalized_interference(
    g: &SpGluing,
    rho: &DensityMatrix,
    u: &ComplexMatrix,
) -> Result<Complex64> {
    check_dims(g.dim(), rho.dim())?;
    check_dims(g.dim(), u.nrows())?;
    numerics::ensure_unitary(u)?;
    let t = pair_traces(&g.channel_a, &g.channel_b, rho, Some(u));
    Ok(contract(&g.contraction, &t))
}

/// `Q_kl = ⟨ψ|A_k† U B_l|ψ⟩`, so that `F(|ψ⟩⟨ψ|) = a† Q b`.
pub fn overlap_matrix_q(
    channel_a: &KrausChannel,
    channel_b: &KrausChannel,
    psi: &PureState,
    u: Option<&ComplexMatrix>,
) -> Result<ComplexMatrix> {
    check_dims(channel_a.dim(), channel_b.dim())?;
    check_dims(channel_a.dim(), psi.dim())?;
    if let Some(u) = u {
        check_dims(channel_a.dim(), u.nrows())?;
        numerics::ensure_unitary(u)?;
    }
    let a_images = channel_a.images(psi);
    let b_images: Vec<ComplexVector> = channel_b
        .images(psi)
        .into_iter()
        .map(|v| match u {
            Some(u) => u * v,
            None => v,
        })
        .collect();
    Ok(ComplexMatrix::from_fn(
        a_images.len(),
        b_images.len(),
        |k, l| a_images[k].dotc(&b_images[l]),
    ))
}

/// Vector drawn uniformly in direction with norm `√u`, `u` uniform on [0, 1].
pub fn random_ball_vector(len: usize, rng: &mut impl Rng) -> ComplexVector {
    let dir = numerics::random_unit_vector(len, rng);
    let radius: f64 = rng.random::<f64>().sqrt();
    dir * re(radius)
}

/// Random matrix with largest singular value in [0, 1].
pub fn random_contraction(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = numerics::gaussian_matrix(rows, cols, rng);
    let top = numerics::spectral_norm(&g).max(1e-300);
    let scale: f64 = rng.random::<f64>().powf(0.25);
    g * re(scale / top)
}
