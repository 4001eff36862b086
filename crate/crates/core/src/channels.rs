//! Trace-preserving completely positive maps in Kraus form and their
//! Stinespring dilations.
//!
//! Tensor products are ordered system ⊗ ancilla, so the basis state
//! `|s⟩|a⟩` sits at index `s · ancilla_dim + a`.

use crate::error::{Error, Result};
use crate::numerics::{
    self, complete_unitary, ensure_finite, ensure_square, hermitian_eig, max_abs_diff, re,
    Complex64, ComplexMatrix, ComplexVector, UNITARY_TOL,
};
use crate::states::{check_dims, spectral_decomposition, DensityMatrix, PureState};

pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Gram eigenvalues below this fraction of the largest are treated as zero.
pub const INDEPENDENCE_TOL: f64 = 1e-10;
pub const CHOI_TOL: f64 = 1e-9;

/// Channel `ρ ↦ Σ_k K_k ρ K_k†` with `Σ_k K_k†K_k = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        validate_channel(kraus)
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel {
            dim,
            kraus: vec![ComplexMatrix::identity(dim, dim)],
        }
    }

    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        numerics::ensure_unitary(u)?;
        Ok(KrausChannel {
            dim: u.nrows(),
            kraus: vec![u.clone()],
        })
    }

    /// Qubit dephasing in the computational basis, `{|0⟩⟨0|, |1⟩⟨1|}`.
    pub fn transverse_relaxation() -> Self {
        let mut p0 = ComplexMatrix::zeros(2, 2);
        p0[(0, 0)] = re(1.0);
        let mut p1 = ComplexMatrix::zeros(2, 2);
        p1[(1, 1)] = re(1.0);
        KrausChannel {
            dim: 2,
            kraus: vec![p0, p1],
        }
    }

    /// The same dephasing channel written as `{I/√2, σ_z/√2}`.
    pub fn random_phase_flip() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let i = ComplexMatrix::identity(2, 2) * re(h);
        let z = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![re(h), re(-h)]));
        KrausChannel {
            dim: 2,
            kraus: vec![i, z],
        }
    }

    /// Random channel with `rank` Kraus operators, read off the first `dim`
    /// columns of a Haar unitary on `rank · dim` dimensions.
    pub fn random(dim: usize, rank: usize, rng: &mut impl rand::Rng) -> Self {
        let u = numerics::haar_unitary(rank * dim, rng);
        let kraus = (0..rank)
            .map(|k| u.view((k * dim, 0), (dim, dim)).into_owned())
            .collect();
        KrausChannel { dim, kraus }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_channel(self, rho)
    }

    /// `{U K_k}`: this channel followed by the unitary `U`.
    pub fn then_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim, u.nrows())?;
        numerics::ensure_unitary(u)?;
        Ok(KrausChannel {
            dim: self.dim,
            kraus: self.kraus.iter().map(|k| u * k).collect(),
        })
    }

    /// Same operators plus an appended zero operator.
    pub fn with_zero_operator(&self) -> Self {
        let mut kraus = self.kraus.clone();
        kraus.push(ComplexMatrix::zeros(self.dim, self.dim));
        KrausChannel {
            dim: self.dim,
            kraus,
        }
    }

    /// `{K_k |ψ⟩}`, a pure decomposition of the output on `|ψ⟩⟨ψ|`.
    pub fn images(&self, psi: &PureState) -> Vec<ComplexVector> {
        self.kraus.iter().map(|k| k * psi.amplitudes()).collect()
    }
}

pub fn completeness_deviation(kraus: &[ComplexMatrix]) -> f64 {
    let dim = kraus[0].nrows();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for k in kraus {
        sum += k.adjoint() * k;
    }
    max_abs_diff(&sum, &ComplexMatrix::identity(dim, dim))
}

pub fn validate_channel(kraus: Vec<ComplexMatrix>) -> Result<KrausChannel> {
    let first = kraus.first().ok_or(Error::EmptyKraus)?;
    let dim = ensure_square(first)?;
    for k in &kraus {
        ensure_finite(k)?;
        check_dims(dim, ensure_square(k)?)?;
    }
    let deviation = completeness_deviation(&kraus);
    if deviation > COMPLETENESS_TOL {
        return Err(Error::NotTracePreserving { deviation });
    }
    Ok(KrausChannel { dim, kraus })
}

pub fn apply_channel(channel: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dims(channel.dim, rho.dim())?;
    let mut out = ComplexMatrix::zeros(channel.dim, channel.dim);
    for k in &channel.kraus {
        out += k * rho.matrix() * k.adjoint();
    }
    DensityMatrix::new((&out + out.adjoint()) * re(0.5))
}

/// `(Λ ⊗ id)(|Φ⟩⟨Φ|)` with `|Φ⟩ = Σ_i |i⟩|i⟩` unnormalized.
pub fn choi_matrix(channel: &KrausChannel) -> ComplexMatrix {
    let d = channel.dim;
    let mut choi = ComplexMatrix::zeros(d * d, d * d);
    for k in &channel.kraus {
        // (K ⊗ I)|Φ⟩ has entry K[a, i] at index a·d + i
        let v = ComplexVector::from_fn(d * d, |idx, _| k[(idx / d, idx % d)]);
        choi += &v * v.adjoint();
    }
    choi
}

pub fn choi_distance(a: &KrausChannel, b: &KrausChannel) -> f64 {
    max_abs_diff(&choi_matrix(a), &choi_matrix(b))
}

/// Gram matrix `G_kl = tr[K_k† K_l]`.
pub fn kraus_gram(kraus: &[ComplexMatrix]) -> ComplexMatrix {
    let r = kraus.len();
    ComplexMatrix::from_fn(r, r, |k, l| {
        numerics::trace(&(kraus[k].adjoint() * &kraus[l]))
    })
}

/// Equivalent channel whose Kraus operators are linearly independent.
///
/// Already-independent sets are returned unchanged. Otherwise the operators
/// are rotated into the eigenbasis of the Gram matrix and the null directions
/// are dropped.
pub fn reduce_to_independent(channel: &KrausChannel) -> KrausChannel {
    let gram = kraus_gram(&channel.kraus);
    let spectrum = hermitian_eig(&gram).expect("Gram matrix is Hermitian");
    let cutoff = INDEPENDENCE_TOL * spectrum.largest().max(0.0);
    if spectrum.values.iter().all(|&mu| mu > cutoff) {
        return channel.clone();
    }
    let kraus = spectrum
        .values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > cutoff)
        .map(|(j, _)| {
            let w = canonical_phase(spectrum.vector(j));
            let mut op = ComplexMatrix::zeros(channel.dim, channel.dim);
            for (k, kk) in channel.kraus.iter().enumerate() {
                op += kk * w[k];
            }
            op
        })
        .collect();
    KrausChannel {
        dim: channel.dim,
        kraus,
    }
}

/// Rotates `v` so its largest entry (first one on ties) is real positive.
fn canonical_phase(v: ComplexVector) -> ComplexVector {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .find(|z| z.norm() >= max * (1.0 - 1e-9))
        .copied()
        .unwrap_or(re(1.0));
    if pivot.norm() == 0.0 {
        return v;
    }
    v * (pivot.conj() / pivot.norm())
}

/// `K'_j = Σ_k V_jk K_k` for an isometry `V` on the Kraus index space.
pub fn remix_kraus(channel: &KrausChannel, v: &ComplexMatrix) -> Result<KrausChannel> {
    check_dims(channel.len(), v.ncols())?;
    let deviation = numerics::isometry_deviation(v);
    if deviation > UNITARY_TOL {
        return Err(Error::NotIsometry { deviation });
    }
    let kraus = (0..v.nrows())
        .map(|j| {
            let mut op = ComplexMatrix::zeros(channel.dim, channel.dim);
            for (k, kk) in channel.kraus.iter().enumerate() {
                op += kk * v[(j, k)];
            }
            op
        })
        .collect();
    Ok(KrausChannel {
        dim: channel.dim,
        kraus,
    })
}

/// Unitary on system ⊗ ancilla with a fixed ancilla reference state.
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringDilation {
    system_dim: usize,
    ancilla_dim: usize,
    global_unitary: ComplexMatrix,
    ancilla_ref: PureState,
}

impl StinespringDilation {
    pub fn new(
        system_dim: usize,
        ancilla_dim: usize,
        global_unitary: ComplexMatrix,
        ancilla_ref: PureState,
    ) -> Result<Self> {
        check_dims(system_dim * ancilla_dim, global_unitary.nrows())?;
        numerics::ensure_unitary(&global_unitary)?;
        check_dims(ancilla_dim, ancilla_ref.dim())?;
        Ok(StinespringDilation {
            system_dim,
            ancilla_dim,
            global_unitary,
            ancilla_ref,
        })
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn global_unitary(&self) -> &ComplexMatrix {
        &self.global_unitary
    }

    pub fn ancilla_ref(&self) -> &PureState {
        &self.ancilla_ref
    }

    /// `𝕌 (I ⊗ |E₀⟩)`, the isometry from system into system ⊗ ancilla.
    pub fn isometry(&self) -> ComplexMatrix {
        let embed = numerics::kron(
            &ComplexMatrix::identity(self.system_dim, self.system_dim),
            &ComplexMatrix::from_column_slice(
                self.ancilla_dim,
                1,
                self.ancilla_ref.amplitudes().as_slice(),
            ),
        );
        &self.global_unitary * embed
    }

    /// `⟨e_a| 𝕌 |E₀⟩` for the ancilla basis state `a`.
    pub fn ancilla_block(&self, a: usize) -> ComplexMatrix {
        let v = self.isometry();
        ComplexMatrix::from_fn(self.system_dim, self.system_dim, |i, j| {
            v[(i * self.ancilla_dim + a, j)]
        })
    }

    /// `⟨E₀| 𝕌 |E₀⟩`, the amplitude for the ancilla to be left undisturbed.
    pub fn coherence_operator(&self) -> ComplexMatrix {
        let v = self.isometry();
        let e0 = self.ancilla_ref.amplitudes();
        ComplexMatrix::from_fn(self.system_dim, self.system_dim, |i, j| {
            (0..self.ancilla_dim)
                .map(|a| e0[a].conj() * v[(i * self.ancilla_dim + a, j)])
                .sum()
        })
    }

    /// The represented channel, with Kraus operators taken in the ancilla
    /// computational basis.
    pub fn channel(&self) -> KrausChannel {
        KrausChannel {
            dim: self.system_dim,
            kraus: (0..self.ancilla_dim)
                .map(|a| self.ancilla_block(a))
                .collect(),
        }
    }

    /// `tr_E[𝕌 (ρ ⊗ |E₀⟩⟨E₀|) 𝕌†]`, evaluated on the full joint space.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dims(self.system_dim, rho.dim())?;
        let e0 = self.ancilla_ref.amplitudes();
        let env = e0 * e0.adjoint();
        let joint = &self.global_unitary
            * numerics::kron(rho.matrix(), &env)
            * self.global_unitary.adjoint();
        let reduced = partial_trace_second(&joint, self.system_dim, self.ancilla_dim);
        DensityMatrix::new((&reduced + reduced.adjoint()) * re(0.5))
    }
}

/// Traces out the second factor of a `(d1·d2)`-square matrix.
pub fn partial_trace_second(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d1, d1, |i, j| {
        (0..d2)
            .map(|a| m[(i * d2 + a, j * d2 + a)])
            .sum::<Complex64>()
    })
}

/// Dilation with ancilla dimension `r` and `|E₀⟩ = |e_0⟩` acting as
/// `|φ⟩|E₀⟩ ↦ Σ_k K_k|φ⟩ ⊗ |e_k⟩`.
pub fn stinespring_dilation(channel: &KrausChannel) -> StinespringDilation {
    let r = channel.len().max(1);
    let frame = ComplexMatrix::identity(r, r);
    dilation_with_frame(channel, &frame).expect("identity frame is orthonormal")
}

/// Dilation acting as `|φ⟩|E₀⟩ ↦ Σ_k K_k|φ⟩ ⊗ |f_k⟩`, where `|f_k⟩` is
/// column `k` of `frame` and `|E₀⟩ = |e_0⟩`.
///
/// `frame` must have orthonormal columns, one per Kraus operator. The
/// remaining columns of the unitary are filled deterministically by
/// [`complete_unitary`].
pub fn dilation_with_frame(
    channel: &KrausChannel,
    frame: &ComplexMatrix,
) -> Result<StinespringDilation> {
    check_dims(channel.len(), frame.ncols())?;
    let deviation = numerics::isometry_deviation(frame);
    if deviation > UNITARY_TOL {
        return Err(Error::NotIsometry { deviation });
    }
    let d = channel.dim;
    let e = frame.nrows();
    let fixed: Vec<(usize, ComplexVector)> = (0..d)
        .map(|s| {
            let mut col = ComplexVector::zeros(d * e);
            for (k, kk) in channel.kraus.iter().enumerate() {
                for i in 0..d {
                    let amp = kk[(i, s)];
                    if amp == re(0.0) {
                        continue;
                    }
                    for a in 0..e {
                        col[i * e + a] += amp * frame[(a, k)];
                    }
                }
            }
            (s * e, col)
        })
        .collect();
    let global_unitary = complete_unitary(d * e, &fixed);
    StinespringDilation::new(d, e, global_unitary, PureState::basis(e, 0))
}

/// Dilation whose coherence operator is `⟨E₀|𝕌|E₀⟩ = Σ_k a_k K_k`.
///
/// The ancilla output frame is taken from a unitary `W` whose first row is
/// `a` when `‖a‖ = 1` (ancilla dimension `r`), and
/// `(√(1 − ‖a‖²), a_1, …, a_r)` otherwise (dimension `r + 1`, frame from the
/// last `r` columns).
pub fn dilation_with_coefficients(
    channel: &KrausChannel,
    coeffs: &ComplexVector,
) -> Result<StinespringDilation> {
    check_dims(channel.len(), coeffs.len())?;
    let norm = coeffs.norm();
    if !norm.is_finite() || norm > 1.0 + 1e-12 {
        return Err(Error::CoefficientNorm { norm });
    }
    let r = coeffs.len();
    let deficit = (1.0 - norm * norm).max(0.0);
    let (row, offset) = if deficit <= 1e-12 {
        (coeffs / re(norm), 0)
    } else {
        let mut row = ComplexVector::zeros(r + 1);
        row[0] = re(deficit.sqrt());
        row.rows_mut(1, r).copy_from(coeffs);
        (row.clone() / re(row.norm()), 1)
    };
    let x = complete_unitary(row.len(), &[(0, row.conjugate())]);
    let frame = x.adjoint().columns(offset, r).into_owned();
    dilation_with_frame(channel, &frame)
}

/// Channel taking `|ψ⟩⟨ψ|` to `target`: Kraus operators `|a_k⟩⟨ψ|` from the
/// spectral decomposition of `target`, plus `|â_1⟩⟨ψ_j^⊥|` for an
/// orthonormal basis of the complement of `|ψ⟩`.
pub fn preparation_channel(psi: &PureState, target: &DensityMatrix) -> Result<KrausChannel> {
    check_dims(psi.dim(), target.dim())?;
    let d = psi.dim();
    let decomposition = spectral_decomposition(target);
    let bra_psi = psi.amplitudes().adjoint();
    let mut kraus: Vec<ComplexMatrix> = decomposition
        .vectors()
        .iter()
        .map(|a| a * &bra_psi)
        .collect();

    let first = &decomposition.vectors()[0];
    let lead = first / re(first.norm());
    let basis = complete_unitary(d, &[(0, psi.amplitudes().clone())]);
    for j in 1..d {
        kraus.push(&lead * basis.column(j).adjoint());
    }
    validate_channel(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c64, random_unitary, seeded_rng, unitarity_deviation};
    use crate::states::random_density_with;

    fn ket(bits: &[f64]) -> ComplexVector {
        ComplexVector::from_iterator(bits.len(), bits.iter().map(|&b| re(b)))
    }

    fn proj(i: usize) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(2, 2);
        p[(i, i)] = re(1.0);
        p
    }

    #[test]
    fn validate_examples() {
        assert!(validate_channel(vec![ComplexMatrix::identity(2, 2)]).is_ok());
        assert!(validate_channel(KrausChannel::transverse_relaxation().kraus).is_ok());
        assert!(validate_channel(KrausChannel::random_phase_flip().kraus).is_ok());
        match validate_channel(vec![proj(0)]) {
            Err(Error::NotTracePreserving { deviation }) => {
                assert!((deviation - 1.0).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(validate_channel(vec![]), Err(Error::EmptyKraus)));
    }

    #[test]
    fn apply_examples() {
        let plus = DensityMatrix::from_pure(&PureState::plus());
        let half = DensityMatrix::maximally_mixed(2);
        let rho = random_density_with(2, 2, &mut seeded_rng(3)).unwrap();
        let id = KrausChannel::identity(2).apply(&rho).unwrap();
        assert!(max_abs_diff(id.matrix(), rho.matrix()) < 1e-15);
        for ch in [
            KrausChannel::transverse_relaxation(),
            KrausChannel::random_phase_flip(),
        ] {
            let out = ch.apply(&plus).unwrap();
            assert!(max_abs_diff(out.matrix(), half.matrix()) < 1e-15);
        }
        let three = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            KrausChannel::identity(2).apply(&three),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn choi_examples() {
        let c = choi_matrix(&KrausChannel::identity(2));
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_eq!(c[(i, j)], re(1.0));
        }
        assert_eq!(c.iter().filter(|z| z.norm() > 0.0).count(), 4);

        assert!(
            choi_distance(
                &KrausChannel::transverse_relaxation(),
                &KrausChannel::random_phase_flip()
            ) < 1e-15
        );

        let x = ComplexMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]);
        let c = choi_matrix(&KrausChannel::unitary(&x).unwrap());
        let s = hermitian_eig(&c).unwrap().values;
        assert!((s[0] - 2.0).abs() < 1e-12 && s[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn reduce_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let dup = KrausChannel::new(vec![ComplexMatrix::identity(2, 2) * re(h); 2]).unwrap();
        let reduced = reduce_to_independent(&dup);
        assert_eq!(reduced.len(), 1);
        assert!(max_abs_diff(&reduced.kraus[0], &ComplexMatrix::identity(2, 2)) < 1e-12);

        let tr = KrausChannel::transverse_relaxation();
        assert_eq!(reduce_to_independent(&tr), tr);

        let ch = KrausChannel::random(3, 3, &mut seeded_rng(5)).with_zero_operator();
        let reduced = reduce_to_independent(&ch);
        assert_eq!(reduced.len(), 3);
        assert!(choi_distance(&ch, &reduced) < 1e-9);
    }

    #[test]
    fn remix_examples() {
        let tr = KrausChannel::transverse_relaxation();
        assert_eq!(
            remix_kraus(&tr, &ComplexMatrix::identity(2, 2)).unwrap(),
            tr
        );

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = ComplexMatrix::from_row_slice(2, 2, &[re(h), re(h), re(h), re(-h)]);
        let remixed = remix_kraus(&tr, &hadamard).unwrap();
        let expected = KrausChannel::random_phase_flip();
        for (a, b) in remixed.kraus.iter().zip(&expected.kraus) {
            assert!(max_abs_diff(a, b) < 1e-15);
        }

        let mut rng = seeded_rng(17);
        let ch = KrausChannel::random(2, 3, &mut rng);
        let v = random_unitary(5, 3).columns(0, 3).into_owned();
        let remixed = remix_kraus(&ch, &v).unwrap();
        for _ in 0..10 {
            let rho = random_density_with(2, 2, &mut rng).unwrap();
            let a = ch.apply(&rho).unwrap();
            let b = remixed.apply(&rho).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-9);
        }

        let not_iso = ComplexMatrix::identity(2, 2) * re(0.5);
        assert!(matches!(
            remix_kraus(&tr, &not_iso),
            Err(Error::NotIsometry { .. })
        ));
    }

    #[test]
    fn dilation_examples() {
        let id = stinespring_dilation(&KrausChannel::identity(2));
        assert_eq!(id.ancilla_dim(), 1);
        assert!(max_abs_diff(id.global_unitary(), &ComplexMatrix::identity(2, 2)) < 1e-15);

        let cnot = stinespring_dilation(&KrausChannel::transverse_relaxation());
        assert_eq!(cnot.ancilla_dim(), 2);
        let expected = ComplexMatrix::from_row_slice(
            4,
            4,
            &[
                1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.,
            ]
            .map(re),
        );
        assert!(max_abs_diff(cnot.global_unitary(), &expected) < 1e-15);

        let mut rng = seeded_rng(23);
        let ch = KrausChannel::random(2, 4, &mut rng);
        let dil = stinespring_dilation(&ch);
        assert!(unitarity_deviation(dil.global_unitary()) < 1e-9);
        for _ in 0..10 {
            let rho = random_density_with(2, 2, &mut rng).unwrap();
            let a = ch.apply(&rho).unwrap();
            let b = dil.apply(&rho).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-9);
        }
    }

    #[test]
    fn coefficient_dilation_has_requested_coherence_operator() {
        let mut rng = seeded_rng(8);
        let ch = KrausChannel::random(3, 2, &mut rng);
        let a = ComplexVector::from_vec(vec![c64(0.3, 0.2), c64(-0.1, 0.5)]);
        let dil = dilation_with_coefficients(&ch, &a).unwrap();
        let expected = &ch.kraus[0] * a[0] + &ch.kraus[1] * a[1];
        assert!(max_abs_diff(&dil.coherence_operator(), &expected) < 1e-12);
        assert!(choi_distance(&dil.channel(), &ch) < 1e-9);
        let too_long = ComplexVector::from_vec(vec![re(1.0), re(0.5)]);
        assert!(matches!(
            dilation_with_coefficients(&ch, &too_long),
            Err(Error::CoefficientNorm { .. })
        ));
    }

    #[test]
    fn preparation_examples() {
        let zero = PureState::basis(2, 0);
        let ch = preparation_channel(&zero, &DensityMatrix::from_pure(&zero)).unwrap();
        let out = ch.apply(&DensityMatrix::from_pure(&zero)).unwrap();
        assert!(max_abs_diff(out.matrix(), &proj(0)) < 1e-15);
        assert!(max_abs_diff(&ch.kraus[0], &proj(0)) < 1e-15);

        let half = DensityMatrix::maximally_mixed(2);
        let ch = preparation_channel(&zero, &half).unwrap();
        assert_eq!(ch.len(), 3);
        assert!(
            max_abs_diff(
                ch.apply(&DensityMatrix::from_pure(&zero)).unwrap().matrix(),
                half.matrix()
            ) < 1e-15
        );
        // the first two operators map |0⟩ onto orthogonal vectors of norm 1/√2
        let images = ch.images(&zero);
        assert!((images[0].norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((images[1].norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(images[2].norm() < 1e-15);

        let target = DensityMatrix::new(ComplexMatrix::from_diagonal(&ket(&[0.7, 0.3]))).unwrap();
        let ch = preparation_channel(&PureState::plus(), &target).unwrap();
        let out = ch
            .apply(&DensityMatrix::from_pure(&PureState::plus()))
            .unwrap();
        assert!(max_abs_diff(out.matrix(), target.matrix()) < 1e-9);
    }
}
