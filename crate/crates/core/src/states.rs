//! Density matrices, pure decompositions and Uhlmann fidelity.
//!
//! A pure decomposition `{|a_k⟩}` of `ρ` is any set of unnormalized vectors
//! with `ρ = Σ_k |a_k⟩⟨a_k|`. For two states the overlap matrix
//! `M_kl = ⟨a_k|b_l⟩` has singular values that do not depend on which
//! decompositions were picked; they are the eigenvalues of
//! `√(√ρ_B ρ_A √ρ_B)`, and everything in [`crate::measures`] is built on them.

use crate::error::{Error, Result};
use crate::numerics::{
    self, ensure_finite, ensure_square, hermitian_eig, hermiticity_deviation, re, trace,
    ComplexMatrix, ComplexVector, Spectrum, HERMITIAN_TOL, PSD_FLOOR,
};

/// Eigenvalues at or below this are dropped from spectral decompositions.
pub const ZERO_EIGENVALUE_CUTOFF: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-9;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate_density(matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn spectrum(&self) -> Spectrum {
        hermitian_eig(&self.matrix).expect("validated Hermitian")
    }

    /// Eigenvalues sorted non-increasing, negatives clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum()
            .values
            .into_iter()
            .map(|v| v.max(0.0))
            .collect()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim, dim) * re(1.0 / dim as f64),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        DensityMatrix {
            matrix: v * v.adjoint(),
        }
    }

    /// `U ρ U†`. The caller guarantees `U` is unitary.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim(), u.nrows())?;
        let m = u * &self.matrix * u.adjoint();
        Ok(DensityMatrix {
            matrix: (&m + m.adjoint()) * re(0.5),
        })
    }

    pub fn sqrt(&self) -> ComplexMatrix {
        numerics::psd_sqrt(&self.matrix).expect("validated PSD")
    }

    /// `α ρ₁ + (1 − α) ρ₂` for `α ∈ [0, 1]`.
    pub fn mix(&self, other: &DensityMatrix, alpha: f64) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(DensityMatrix {
            matrix: &self.matrix * re(alpha) + &other.matrix * re(1.0 - alpha),
        })
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.is_empty()
            || amplitudes
                .iter()
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(PureState { amplitudes })
    }

    /// Normalizes `v`; fails only for the zero vector.
    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::NonFinite);
        }
        PureState::new(v / re(n))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = ComplexVector::zeros(dim);
        v[index] = re(1.0);
        PureState { amplitudes: v }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: ComplexVector::from_vec(vec![re(h), re(h)]),
        }
    }

    pub fn random(dim: usize, rng: &mut impl rand::Rng) -> Self {
        PureState {
            amplitudes: numerics::random_unit_vector(dim, rng),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `⟨ψ|K|ψ⟩`.
    pub fn expectation(&self, k: &ComplexMatrix) -> numerics::Complex64 {
        self.amplitudes.dotc(&(k * &self.amplitudes))
    }
}

/// Unnormalized vectors `{|a_k⟩}` with `Σ_k |a_k⟩⟨a_k|` a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PureDecomposition {
    dim: usize,
    vectors: Vec<ComplexVector>,
}

impl PureDecomposition {
    /// Accepts `vectors` if they represent a valid density matrix.
    pub fn new(dim: usize, vectors: Vec<ComplexVector>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let d = PureDecomposition { dim, vectors };
        validate_density(d.reconstruct())?;
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `Σ_k |a_k⟩⟨a_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for v in &self.vectors {
            out += v * v.adjoint();
        }
        out
    }

    pub fn state(&self) -> DensityMatrix {
        DensityMatrix::new(self.reconstruct()).expect("validated at construction")
    }

    /// `|a'_j⟩ = Σ_k V_jk |a_k⟩`; the result decomposes the same state when
    /// `V†V = I`.
    pub fn remix(&self, v: &ComplexMatrix) -> Result<Self> {
        check_dims(self.len(), v.ncols())?;
        let deviation = numerics::isometry_deviation(v);
        if deviation > numerics::UNITARY_TOL {
            return Err(Error::NotIsometry { deviation });
        }
        let vectors = (0..v.nrows())
            .map(|j| {
                let mut acc = ComplexVector::zeros(self.dim);
                for (k, a) in self.vectors.iter().enumerate() {
                    acc += a * v[(j, k)];
                }
                acc
            })
            .collect();
        Ok(PureDecomposition {
            dim: self.dim,
            vectors,
        })
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Checks the density-matrix invariants and wraps the matrix.
pub fn validate_density(matrix: ComplexMatrix) -> Result<DensityMatrix> {
    ensure_square(&matrix)?;
    ensure_finite(&matrix)?;
    let deviation = hermiticity_deviation(&matrix);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let min_eigenvalue = *hermitian_eig(&matrix)?.values.last().expect("non-empty");
    if min_eigenvalue < PSD_FLOOR {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let deviation = (trace(&matrix) - re(1.0)).norm();
    if deviation > TRACE_TOL {
        return Err(Error::TraceNotOne { deviation });
    }
    Ok(DensityMatrix { matrix })
}

/// `{√λ_k |ψ_k⟩}` over eigenpairs with `λ_k` above [`ZERO_EIGENVALUE_CUTOFF`],
/// sorted non-increasing.
pub fn spectral_decomposition(rho: &DensityMatrix) -> PureDecomposition {
    let spectrum = rho.spectrum();
    let vectors = spectrum
        .values
        .iter()
        .enumerate()
        .filter(|(_, &lambda)| lambda > ZERO_EIGENVALUE_CUTOFF)
        .map(|(k, &lambda)| spectrum.vector(k) * re(lambda.sqrt()))
        .collect();
    PureDecomposition {
        dim: rho.dim(),
        vectors,
    }
}

/// `M_kl = ⟨a_k|b_l⟩`.
pub fn overlap_matrix_m(da: &PureDecomposition, db: &PureDecomposition) -> Result<ComplexMatrix> {
    check_dims(da.dim(), db.dim())?;
    Ok(overlap_of_vectors(da.vectors(), db.vectors()))
}

pub(crate) fn overlap_of_vectors(a: &[ComplexVector], b: &[ComplexVector]) -> ComplexMatrix {
    let rows = a.len().max(1);
    let cols = b.len().max(1);
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (k, ak) in a.iter().enumerate() {
        for (l, bl) in b.iter().enumerate() {
            m[(k, l)] = ak.dotc(bl);
        }
    }
    m
}

/// Singular values of the overlap matrix of the two spectral decompositions,
/// i.e. the eigenvalues of `√(√ρ_B ρ_A √ρ_B)`, non-increasing.
pub fn fidelity_spectrum(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<Vec<f64>> {
    let m = overlap_matrix_m(
        &spectral_decomposition(rho_a),
        &spectral_decomposition(rho_b),
    )?;
    Ok(numerics::singular_values(&m))
}

/// Uhlmann fidelity `tr√(√ρ_B ρ_A √ρ_B)`, computed as the nuclear norm of
/// the spectral overlap matrix.
pub fn uhlmann_fidelity(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<f64> {
    Ok(fidelity_spectrum(rho_a, rho_b)?
        .iter()
        .sum::<f64>()
        .min(1.0))
}

/// The same quantity evaluated literally as `tr psd_sqrt(√ρ_B ρ_A √ρ_B)`.
///
/// Loses about half the working digits when either state is rank deficient
/// (square roots of rounding noise), so it serves as a cross-check only.
pub fn uhlmann_fidelity_sandwich(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<f64> {
    check_dims(rho_a.dim(), rho_b.dim())?;
    let inner = sandwich_root(rho_a, rho_b)?;
    Ok(trace(&inner).re)
}

/// `√(√ρ_B ρ_A √ρ_B)`.
pub fn sandwich_root(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<ComplexMatrix> {
    check_dims(rho_a.dim(), rho_b.dim())?;
    let sb = rho_b.sqrt();
    let inner = &sb * rho_a.matrix() * &sb;
    let inner = (&inner + inner.adjoint()) * re(0.5);
    numerics::psd_sqrt(&inner)
}

/// `G G† / tr[G G†]` for a `dim × rank` complex Gaussian `G`.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(dim, rank, &mut numerics::seeded_rng(seed))
}

pub fn random_density_with(
    dim: usize,
    rank: usize,
    rng: &mut impl rand::Rng,
) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let g = numerics::gaussian_matrix(dim, rank, rng);
    let p = &g * g.adjoint();
    let t = trace(&p).re;
    let m = p * re(1.0 / t);
    Ok(DensityMatrix {
        matrix: (&m + m.adjoint()) * re(0.5),
    })
}
