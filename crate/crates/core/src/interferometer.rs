//! Mach-Zehnder interferometer with glued channels in its arms.
//!
//! The simulation is a plain state-vector evolution on
//! path ⊗ system ⊗ ancilla and shares no code with the interference formulas
//! in [`crate::gluings`], which makes it the oracle for them.
//!
//! Conventions:
//!
//! * both beamsplitters map `|A⟩ ↦ (|A⟩+|B⟩)/√2`, `|B⟩ ↦ (|A⟩−|B⟩)/√2`;
//! * the phase `e^{iφ}` is applied in arm A, which gives
//!   `p_A(φ) = ½[1 + v cos(φ − γ)]` with `F = v e^{iγ}`;
//! * the optional variable unitary acts on the internal state in arm B,
//!   after that arm's channel.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::channels::{
    choi_distance, dilation_with_coefficients, dilation_with_frame, stinespring_dilation,
    KrausChannel, StinespringDilation,
};
use crate::error::{Error, Result};
use crate::gluings::{LspGluing, SpGluing};
use crate::numerics::{
    self, hermitian_eig, max_abs, psd_sqrt, re, seeded_rng, Complex64, ComplexMatrix, ComplexVector,
};
use crate::states::{check_dims, spectral_decomposition, DensityMatrix, PureState};

/// Visibilities below this are reported with phase zero.
pub const PHASE_CUTOFF: f64 = 1e-12;
pub const PATTERN_CONSISTENCY_TOL: f64 = 1e-9;
/// Pure-state samples used by [`max_visibility_over_inputs`] for non-normal
/// effective operators.
pub const VISIBILITY_SAMPLES: usize = 10_000;
pub const VISIBILITY_SEED: u64 = 0x5EE_D0FF_1E1D;
/// Accuracy of the sampled numerical radius for non-normal operators.
pub const ASCENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlueKind {
    Lsp,
    Sp,
}

/// Phase setting plus an optional variable unitary after arm B's channel.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InterferometerConfig {
    pub phase: f64,
    pub variable_shift: Option<ComplexMatrix>,
}

impl InterferometerConfig {
    pub fn with_phase(phase: f64) -> Self {
        InterferometerConfig {
            phase,
            variable_shift: None,
        }
    }
}

/// Subspace-preserving joint unitary `|A⟩⟨A|⊗𝕌_A' + |B⟩⟨B|⊗𝕌_B'`, where each
/// arm unitary acts on system ⊗ (all ancillas).
///
/// LSP gluings use two ancillas, ordered system ⊗ E_A ⊗ E_B, with
/// `𝕌_A' = 𝕌_A ⊗ I_B` and `𝕌_B'` equal to `𝕌_B` acting on system ⊗ E_B.
/// SP gluings share one ancilla between the arms.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedDilation {
    kind: GlueKind,
    system_dim: usize,
    ancilla_dims: Vec<usize>,
    arm_a: ComplexMatrix,
    arm_b: ComplexMatrix,
    ancilla_ref: ComplexVector,
}

impl GluedDilation {
    /// LSP gluing from one dilation per arm, each with its own ancilla.
    pub fn lsp_from_dilations(a: &StinespringDilation, b: &StinespringDilation) -> Result<Self> {
        check_dims(a.system_dim(), b.system_dim())?;
        let d = a.system_dim();
        let (ea, eb) = (a.ancilla_dim(), b.ancilla_dim());
        let arm_a = numerics::kron(a.global_unitary(), &ComplexMatrix::identity(eb, eb));
        let ub = b.global_unitary();
        let n = d * ea * eb;
        let arm_b = ComplexMatrix::from_fn(n, n, |row, col| {
            let (s, rest) = (row / (ea * eb), row % (ea * eb));
            let (x, y) = (rest / eb, rest % eb);
            let (s2, rest2) = (col / (ea * eb), col % (ea * eb));
            let (x2, y2) = (rest2 / eb, rest2 % eb);
            if x != x2 {
                return re(0.0);
            }
            ub[(s * eb + y, s2 * eb + y2)]
        });
        let ancilla_ref = numerics::kron(
            &ComplexMatrix::from_column_slice(ea, 1, a.ancilla_ref().amplitudes().as_slice()),
            &ComplexMatrix::from_column_slice(eb, 1, b.ancilla_ref().amplitudes().as_slice()),
        )
        .column(0)
        .into_owned();
        Ok(GluedDilation {
            kind: GlueKind::Lsp,
            system_dim: d,
            ancilla_dims: vec![ea, eb],
            arm_a,
            arm_b,
            ancilla_ref,
        })
    }

    /// SP gluing from two unitaries on system ⊗ shared ancilla.
    pub fn sp_from_unitaries(
        system_dim: usize,
        arm_a: ComplexMatrix,
        arm_b: ComplexMatrix,
        ancilla_ref: PureState,
    ) -> Result<Self> {
        let e = ancilla_ref.dim();
        for u in [&arm_a, &arm_b] {
            check_dims(system_dim * e, u.nrows())?;
            numerics::ensure_unitary(u)?;
        }
        Ok(GluedDilation {
            kind: GlueKind::Sp,
            system_dim,
            ancilla_dims: vec![e],
            arm_a,
            arm_b,
            ancilla_ref: ancilla_ref.amplitudes().clone(),
        })
    }

    pub fn kind(&self) -> GlueKind {
        self.kind
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dims(&self) -> &[usize] {
        &self.ancilla_dims
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_ref.len()
    }

    /// Unitaries on system ⊗ ancillas for arm A and arm B.
    pub fn arm_unitaries(&self) -> (&ComplexMatrix, &ComplexMatrix) {
        (&self.arm_a, &self.arm_b)
    }

    /// The full `2·d·e` square unitary on path ⊗ system ⊗ ancillas.
    pub fn global_unitary(&self) -> ComplexMatrix {
        let n = self.arm_a.nrows();
        let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
        u.view_mut((0, 0), (n, n)).copy_from(&self.arm_a);
        u.view_mut((n, n), (n, n)).copy_from(&self.arm_b);
        u
    }

    /// Largest entry of the path-off-diagonal blocks of the global unitary.
    pub fn off_diagonal_leak(&self) -> f64 {
        let u = self.global_unitary();
        let n = self.arm_a.nrows();
        let upper = u.view((0, n), (n, n)).into_owned();
        let lower = u.view((n, 0), (n, n)).into_owned();
        max_abs(&upper).max(max_abs(&lower))
    }

    fn embed(&self, psi: &ComplexVector) -> ComplexVector {
        let e = self.ancilla_dim();
        ComplexVector::from_fn(self.system_dim * e, |idx, _| {
            psi[idx / e] * self.ancilla_ref[idx % e]
        })
    }

    fn shift_on_system(&self, u: &ComplexMatrix, x: &ComplexVector) -> ComplexVector {
        let e = self.ancilla_dim();
        ComplexVector::from_fn(x.len(), |idx, _| {
            let (s, a) = (idx / e, idx % e);
            (0..self.system_dim)
                .map(|t| u[(s, t)] * x[t * e + a])
                .sum::<Complex64>()
        })
    }

    /// Effective operator `K` with `F(ψ) = ⟨ψ|K|ψ⟩`: `K_ij` is the overlap of
    /// the arm-A output for `|i⟩` with the (shifted) arm-B output for `|j⟩`.
    pub fn effective_operator(&self, shift: Option<&ComplexMatrix>) -> ComplexMatrix {
        let d = self.system_dim;
        let outputs = |arm: &ComplexMatrix, u: Option<&ComplexMatrix>| -> Vec<ComplexVector> {
            (0..d)
                .map(|i| {
                    let out = arm * self.embed(&PureState::basis(d, i).amplitudes().clone());
                    match u {
                        Some(u) => self.shift_on_system(u, &out),
                        None => out,
                    }
                })
                .collect()
        };
        let xa = outputs(&self.arm_a, None);
        let yb = outputs(&self.arm_b, shift);
        ComplexMatrix::from_fn(d, d, |i, j| xa[i].dotc(&yb[j]))
    }
}

/// LSP dilation whose arm coherence operators are `Σ a_k A_k` and `Σ b_l B_l`.
pub fn build_lsp_dilation(g: &LspGluing) -> Result<GluedDilation> {
    let a = dilation_with_coefficients(g.channel_a(), g.coeff_a())?;
    let b = dilation_with_coefficients(g.channel_b(), g.coeff_b())?;
    GluedDilation::lsp_from_dilations(&a, &b)
}

/// Shared-ancilla dilation reproducing the contraction of an SP gluing.
///
/// The ancilla has dimension `r_A + r_B`. Arm A sends `A_k|φ⟩` to the
/// ancilla state `|e_k⟩`; arm B sends `B_l|φ⟩` to
/// `|g_l⟩ = Σ_k C_lk |e_k⟩ + Σ_j D_jl |e_{r_A+j}⟩` with
/// `D = √(I − C̄Cᵀ)`, so the `|g_l⟩` are orthonormal and `⟨e_k|g_l⟩ = C_lk`.
pub fn build_sp_dilation(g: &SpGluing) -> Result<GluedDilation> {
    let c = g.contraction();
    let (rb, ra) = c.shape();
    let largest = numerics::spectral_norm(c);
    if largest > 1.0 + crate::gluings::NORM_SLACK {
        return Err(Error::ContractionInfeasible { largest });
    }
    let e = ra + rb;
    let frame_a = ComplexMatrix::identity(e, ra);

    let gram = ComplexMatrix::from_fn(rb, rb, |l, m| {
        (0..ra)
            .map(|k| c[(l, k)].conj() * c[(m, k)])
            .sum::<Complex64>()
    });
    let defect = ComplexMatrix::identity(rb, rb) - gram;
    let defect = (&defect + defect.adjoint()) * re(0.5);
    let d = psd_sqrt(&defect)?;
    let mut frame_b = ComplexMatrix::zeros(e, rb);
    for l in 0..rb {
        for k in 0..ra {
            frame_b[(k, l)] = c[(l, k)];
        }
        for j in 0..rb {
            frame_b[(ra + j, l)] = d[(j, l)];
        }
    }

    let ua = dilation_with_frame(g.channel_a(), &frame_a)?;
    let ub = dilation_with_frame(g.channel_b(), &frame_b)?;
    GluedDilation::sp_from_unitaries(
        g.dim(),
        ua.global_unitary().clone(),
        ub.global_unitary().clone(),
        PureState::basis(e, 0),
    )
}

/// Detection probabilities at the two output ports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub p_a: f64,
    pub p_b: f64,
}

/// Runs one particle with internal state `psi` through the interferometer.
pub fn simulate(
    d: &GluedDilation,
    psi: &PureState,
    cfg: &InterferometerConfig,
) -> Result<Detection> {
    check_dims(d.system_dim, psi.dim())?;
    if let Some(u) = &cfg.variable_shift {
        check_dims(d.system_dim, u.nrows())?;
        numerics::ensure_unitary(u)?;
    }
    let h = re(FRAC_1_SQRT_2);
    let start = d.embed(psi.amplitudes());
    let zero = ComplexVector::zeros(start.len());

    let beamsplit = |a: &ComplexVector, b: &ComplexVector| ((a + b) * h, (a - b) * h);

    let (path_a, path_b) = beamsplit(&start, &zero);
    let path_a = path_a * Complex64::from_polar(1.0, cfg.phase);
    let path_a = &d.arm_a * path_a;
    let mut path_b = &d.arm_b * path_b;
    if let Some(u) = &cfg.variable_shift {
        path_b = d.shift_on_system(u, &path_b);
    }
    let (out_a, out_b) = beamsplit(&path_a, &path_b);
    Ok(Detection {
        p_a: out_a.norm_squared(),
        p_b: out_b.norm_squared(),
    })
}

/// `p_A` for a mixed internal state, averaged over its spectral decomposition.
pub fn simulate_mixed(
    d: &GluedDilation,
    rho: &DensityMatrix,
    cfg: &InterferometerConfig,
) -> Result<Detection> {
    check_dims(d.system_dim, rho.dim())?;
    let mut total = Detection { p_a: 0.0, p_b: 0.0 };
    for v in spectral_decomposition(rho).vectors() {
        let weight = v.norm_squared();
        let psi = PureState::normalized(v.clone())?;
        let det = simulate(d, &psi, cfg)?;
        total.p_a += weight * det.p_a;
        total.p_b += weight * det.p_b;
    }
    Ok(total)
}

/// Interference amplitude `F = v e^{iγ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferencePattern {
    pub visibility: f64,
    pub phase: f64,
    pub amplitude: Complex64,
}

impl InterferencePattern {
    pub fn from_amplitude(amplitude: Complex64) -> Self {
        let visibility = amplitude.norm();
        let phase = if visibility < PHASE_CUTOFF {
            0.0
        } else {
            let g = amplitude.arg();
            if g <= -PI {
                PI
            } else {
                g
            }
        };
        InterferencePattern {
            visibility,
            phase,
            amplitude,
        }
    }

    /// `½[1 + v cos(φ − γ)]`.
    pub fn p_a(&self, phi: f64) -> f64 {
        0.5 * (1.0 + self.visibility * (phi - self.phase).cos())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseScanResult {
    pub pattern: InterferencePattern,
    pub samples: Vec<(f64, f64)>,
}

fn scan_with(
    shift: Option<&ComplexMatrix>,
    mut p_a: impl FnMut(&InterferometerConfig) -> Result<Detection>,
) -> Result<PhaseScanResult> {
    let mut samples = Vec::with_capacity(3);
    for phi in [0.0, PI / 2.0, PI] {
        let cfg = InterferometerConfig {
            phase: phi,
            variable_shift: shift.cloned(),
        };
        samples.push((phi, p_a(&cfg)?.p_a));
    }
    let real = 2.0 * samples[0].1 - 1.0;
    let imag = 2.0 * samples[1].1 - 1.0;
    let deviation = ((2.0 * samples[2].1 - 1.0) + real).abs();
    if deviation > PATTERN_CONSISTENCY_TOL {
        return Err(Error::InconsistentPattern { deviation });
    }
    Ok(PhaseScanResult {
        pattern: InterferencePattern::from_amplitude(Complex64::new(real, imag)),
        samples,
    })
}

/// Samples `p_A` at `φ = 0, π/2, π` and reads off `F` exactly.
pub fn phase_scan(
    d: &GluedDilation,
    psi: &PureState,
    shift: Option<&ComplexMatrix>,
) -> Result<PhaseScanResult> {
    scan_with(shift, |cfg| simulate(d, psi, cfg))
}

pub fn phase_scan_mixed(
    d: &GluedDilation,
    rho: &DensityMatrix,
    shift: Option<&ComplexMatrix>,
) -> Result<PhaseScanResult> {
    scan_with(shift, |cfg| simulate_mixed(d, rho, cfg))
}

/// `points` evenly spaced phases over `[0, 2π)`.
pub fn scan_points(
    d: &GluedDilation,
    rho: &DensityMatrix,
    shift: Option<&ComplexMatrix>,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    (0..points)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / points as f64;
            let cfg = InterferometerConfig {
                phase: phi,
                variable_shift: shift.cloned(),
            };
            Ok((phi, simulate_mixed(d, rho, &cfg)?.p_a))
        })
        .collect()
}

/// Least-squares fit of `p = ½ + ½(Re F cos φ + Im F sin φ)` to samples.
///
/// Returns `None` when the phases do not determine both components
/// (fewer than two distinct directions).
pub fn fit_pattern(samples: &[(f64, f64)]) -> Option<InterferencePattern> {
    let (mut cc, mut cs, mut ss, mut cy, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(phi, p) in samples {
        let (s, c) = phi.sin_cos();
        let y = 2.0 * p - 1.0;
        cc += c * c;
        cs += c * s;
        ss += s * s;
        cy += c * y;
        sy += s * y;
    }
    let det = cc * ss - cs * cs;
    if det.abs() < 1e-12 {
        return None;
    }
    let real = (ss * cy - cs * sy) / det;
    let imag = (cc * sy - cs * cy) / det;
    Some(InterferencePattern::from_amplitude(Complex64::new(
        real, imag,
    )))
}

/// Best visibility over pure inputs for a fixed gluing, with the input that
/// reaches it.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityMax {
    pub visibility: f64,
    pub input: PureState,
    /// True when the effective operator is normal and the value is its
    /// spectral radius.
    pub exact: bool,
}

/// `sup_ψ |⟨ψ|K|ψ⟩|`, the numerical radius of the effective operator.
///
/// Normal `K`: the spectral radius. Otherwise the best of
/// [`VISIBILITY_SAMPLES`] seeded inputs, each of the best few refined by
/// local ascent.
pub fn max_visibility_over_inputs(
    d: &GluedDilation,
    shift: Option<&ComplexMatrix>,
) -> Result<VisibilityMax> {
    if let Some(u) = shift {
        check_dims(d.system_dim, u.nrows())?;
        numerics::ensure_unitary(u)?;
    }
    let k = d.effective_operator(shift);
    numerical_radius(&k)
}

pub fn is_normal(k: &ComplexMatrix) -> bool {
    numerics::max_abs_diff(&(k * k.adjoint()), &(k.adjoint() * k)) < 1e-12
}

pub fn numerical_radius(k: &ComplexMatrix) -> Result<VisibilityMax> {
    let dim = k.nrows();
    let value_at = |v: &ComplexVector| v.dotc(&(k * v)).norm();

    if is_normal(k) {
        let f = numerics::svd(k);
        let start = f.v.column(0).into_owned();
        let (input, _) = ascend(k, start)?;
        return Ok(VisibilityMax {
            visibility: f.singular_values[0],
            input: PureState::normalized(input)?,
            exact: true,
        });
    }

    let mut rng = seeded_rng(VISIBILITY_SEED);
    let mut candidates: Vec<(f64, ComplexVector)> = (0..VISIBILITY_SAMPLES)
        .map(|_| {
            let v = numerics::random_unit_vector(dim, &mut rng);
            (value_at(&v), v)
        })
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best: Option<(f64, ComplexVector)> = None;
    for (_, v) in candidates.into_iter().take(8) {
        let (v, value) = ascend(k, v)?;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, v));
        }
    }
    let (visibility, input) = best.expect("at least one sample");
    Ok(VisibilityMax {
        visibility,
        input: PureState::normalized(input)?,
        exact: false,
    })
}

/// Monotone ascent on `|⟨ψ|K|ψ⟩|`: with `θ = arg⟨ψ|K|ψ⟩`, replace `ψ` by
/// the top eigenvector of `Re(e^{−iθ}K)`.
fn ascend(k: &ComplexMatrix, mut v: ComplexVector) -> Result<(ComplexVector, f64)> {
    let mut value = v.dotc(&(k * &v)).norm();
    for _ in 0..1000 {
        let f = v.dotc(&(k * &v));
        let rotation = if f.norm() > 0.0 {
            f.conj() / f.norm()
        } else {
            re(1.0)
        };
        let rotated = k * rotation;
        let h = (&rotated + rotated.adjoint()) * re(0.5);
        let next = hermitian_eig(&h)?.vector(0);
        let next_value = next.dotc(&(k * &next)).norm();
        if next_value <= value + 1e-15 {
            break;
        }
        v = next;
        value = next_value;
    }
    Ok((v, value))
}

/// Two dilations of qubit dephasing, both with ancilla `|0⟩`.
///
/// The first is CNOT (system controls the ancilla), which records the
/// system's basis state perfectly. The second, `diag(1, 1, 1, −1)(I ⊗ H)`,
/// leaves the ancilla in `(|0⟩ ± |1⟩)/√2` and so only half-records it.
pub fn dephasing_dilations() -> (StinespringDilation, StinespringDilation) {
    let h = FRAC_1_SQRT_2;
    let cnot = ComplexMatrix::from_fn(4, 4, |i, j| re(f64::from([0, 1, 3, 2][j] == i)));
    let ih = numerics::kron(
        &ComplexMatrix::identity(2, 2),
        &ComplexMatrix::from_row_slice(2, 2, &[re(h), re(h), re(h), re(-h)]),
    );
    let cz = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![
        re(1.0),
        re(1.0),
        re(1.0),
        re(-1.0),
    ]));
    let ancilla = PureState::basis(2, 0);
    let a = StinespringDilation::new(2, 2, cnot, ancilla.clone()).expect("CNOT is unitary");
    let b = StinespringDilation::new(2, 2, cz * ih, ancilla).expect("product of unitaries");
    (a, b)
}

/// Tomography versus interferometry on the two [`dephasing_dilations`],
/// each placed in arm B with arm A empty.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingComparison {
    /// Largest entry of the difference of the two marginal Choi matrices.
    pub choi_distance: f64,
    /// Same, between the first marginal and the textbook dephasing channel.
    pub reference_distance: f64,
    pub visibility_a: VisibilityMax,
    pub visibility_b: VisibilityMax,
}

impl DephasingComparison {
    /// The marginals agree but the best visibilities do not.
    pub fn distinguishes(&self, tol: f64) -> bool {
        self.choi_distance < tol
            && (self.visibility_a.visibility - self.visibility_b.visibility).abs() > tol
    }
}

pub fn compare_dephasing_dilations() -> Result<DephasingComparison> {
    let (a, b) = dephasing_dilations();
    let empty = stinespring_dilation(&KrausChannel::identity(2));
    let glued_a = GluedDilation::lsp_from_dilations(&empty, &a)?;
    let glued_b = GluedDilation::lsp_from_dilations(&empty, &b)?;
    Ok(DephasingComparison {
        choi_distance: choi_distance(&a.channel(), &b.channel()),
        reference_distance: choi_distance(&a.channel(), &KrausChannel::transverse_relaxation()),
        visibility_a: max_visibility_over_inputs(&glued_a, None)?,
        visibility_b: max_visibility_over_inputs(&glued_b, None)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{stinespring_dilation, KrausChannel};
    use crate::gluings::{interference_lsp, interference_sp};
    use crate::numerics::{c64, random_unitary};

    fn identity_dilation(dim: usize) -> GluedDilation {
        build_lsp_dilation(&LspGluing::identity(dim)).unwrap()
    }

    #[test]
    fn empty_interferometer() {
        let d = identity_dilation(2);
        assert!(
            numerics::max_abs_diff(&d.global_unitary(), &ComplexMatrix::identity(4, 4)) < 1e-15
        );
        let psi = PureState::plus();
        let at = |phi| {
            simulate(&d, &psi, &InterferometerConfig::with_phase(phi))
                .unwrap()
                .p_a
        };
        assert!((at(0.0) - 1.0).abs() < 1e-15);
        assert!(at(PI).abs() < 1e-15);
        let scan = phase_scan(&d, &psi, None).unwrap();
        assert!((scan.pattern.visibility - 1.0).abs() < 1e-15);
        assert!(scan.pattern.phase.abs() < 1e-15);
    }

    #[test]
    fn global_phase_shift_moves_fringes() {
        let d = identity_dilation(2);
        let u = ComplexMatrix::identity(2, 2) * Complex64::from_polar(1.0, PI / 4.0);
        let scan = phase_scan(&d, &PureState::basis(2, 0), Some(&u)).unwrap();
        assert!((scan.pattern.visibility - 1.0).abs() < 1e-12);
        assert!((scan.pattern.phase - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_in_one_arm() {
        let u = random_unitary(3, 21);
        let g = LspGluing::new(
            KrausChannel::identity(3),
            KrausChannel::unitary(&u).unwrap(),
            ComplexVector::from_element(1, re(1.0)),
            ComplexVector::from_element(1, re(1.0)),
        )
        .unwrap();
        let d = build_lsp_dilation(&g).unwrap();
        let psi = PureState::random(3, &mut seeded_rng(4));
        let expected = InterferencePattern::from_amplitude(psi.expectation(&u));
        let scan = phase_scan(&d, &psi, None).unwrap();
        assert!((scan.pattern.visibility - expected.visibility).abs() < 1e-12);
        assert!((scan.pattern.phase - expected.phase).abs() < 1e-12);
        for j in 0..16 {
            let phi = j as f64 * 0.4 - 3.0;
            let p = simulate(&d, &psi, &InterferometerConfig::with_phase(phi))
                .unwrap()
                .p_a;
            assert!((p - expected.p_a(phi)).abs() < 1e-12);
        }
    }

    #[test]
    fn dephasing_dilations_differ_in_visibility() {
        let psi_any = PureState::random(2, &mut seeded_rng(6));
        let a = GluedDilation::lsp_from_dilations(
            &stinespring_dilation(&KrausChannel::identity(2)),
            &stinespring_dilation(&KrausChannel::transverse_relaxation()),
        )
        .unwrap();
        let vm = max_visibility_over_inputs(&a, None).unwrap();
        assert!(vm.exact);
        assert!((vm.visibility - 1.0).abs() < 1e-12);
        assert!((vm.input.amplitudes()[0].norm() - 1.0).abs() < 1e-9);

        let g = LspGluing::new(
            KrausChannel::identity(2),
            KrausChannel::random_phase_flip(),
            ComplexVector::from_element(1, re(1.0)),
            ComplexVector::from_vec(vec![re(1.0), re(0.0)]),
        )
        .unwrap();
        let b = build_lsp_dilation(&g).unwrap();
        assert!(
            (max_visibility_over_inputs(&b, None).unwrap().visibility - FRAC_1_SQRT_2).abs()
                < 1e-12
        );
        let scan = phase_scan(&b, &psi_any, None).unwrap();
        assert!((scan.pattern.visibility - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn dephasing_comparison() {
        let c = compare_dephasing_dilations().unwrap();
        assert!(c.choi_distance < 1e-12 && c.reference_distance < 1e-12);
        assert!((c.visibility_a.visibility - 1.0).abs() < 1e-12);
        assert!((c.visibility_b.visibility - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(c.distinguishes(1e-9));
    }

    #[test]
    fn lsp_and_sp_dilations_match_formulas() {
        let mut rng = seeded_rng(12);
        for _ in 0..10 {
            let g = LspGluing::random(2, 3, 2, &mut rng);
            let psi = PureState::random(2, &mut rng);
            let rho = DensityMatrix::from_pure(&psi);
            let scan = phase_scan(&build_lsp_dilation(&g).unwrap(), &psi, None).unwrap();
            assert!((scan.pattern.amplitude - interference_lsp(&g, &rho).unwrap()).norm() < 1e-10);

            let sp = crate::gluings::SpGluing::random(2, 2, 3, &mut rng);
            let d = build_sp_dilation(&sp).unwrap();
            assert!(d.off_diagonal_leak() < 1e-12);
            let scan = phase_scan(&d, &psi, None).unwrap();
            assert!((scan.pattern.amplitude - interference_sp(&sp, &rho).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn correlated_dephasing_keeps_full_visibility() {
        let tr = KrausChannel::transverse_relaxation();
        let g =
            crate::gluings::SpGluing::new(tr.clone(), tr, ComplexMatrix::identity(2, 2)).unwrap();
        let d = build_sp_dilation(&g).unwrap();
        let scan = phase_scan(&d, &PureState::plus(), None).unwrap();
        assert!((scan.pattern.visibility - 1.0).abs() < 1e-12);
    }

    #[test]
    fn least_squares_fit_recovers_pattern() {
        let truth = InterferencePattern::from_amplitude(c64(0.3, -0.4));
        let samples: Vec<(f64, f64)> = (0..12)
            .map(|j| {
                let phi = j as f64 * PI / 6.0;
                (phi, truth.p_a(phi))
            })
            .collect();
        let fit = fit_pattern(&samples).unwrap();
        assert!((fit.amplitude - truth.amplitude).norm() < 1e-12);
        assert!(fit_pattern(&[(0.0, 1.0)]).is_none());
    }

    #[test]
    fn non_normal_numerical_radius() {
        // w([[0, 1], [0, 0]]) = 1/2
        let k = ComplexMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(0.0), re(0.0)]);
        let vm = numerical_radius(&k).unwrap();
        assert!(!vm.exact);
        assert!((vm.visibility - 0.5).abs() < ASCENT_TOL);
    }

    #[test]
    fn phase_is_in_half_open_interval() {
        let p = InterferencePattern::from_amplitude(c64(-1.0, -0.0));
        assert_eq!(p.phase, PI);
        let p = InterferencePattern::from_amplitude(c64(1e-13, 0.0));
        assert_eq!(p.phase, 0.0);
    }
}
