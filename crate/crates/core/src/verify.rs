//! Seeded property suites over random instances.
//!
//! Every suite runs `trials` independent cases. Case `i` of suite `s` draws
//! from `sub_seed(sub_seed(seed, s), i)`, and each suite reports the largest
//! deviation seen, so the numbers do not depend on how rayon splits the work.
//! For one-sided checks the deviation is the amount by which the inequality
//! is violated, clamped at zero.

use rand::Rng;
use rayon::prelude::*;

use crate::channels::{
    apply_channel, choi_distance, dilation_with_coefficients, preparation_channel,
    reduce_to_independent, remix_kraus, stinespring_dilation, KrausChannel,
};
use crate::error::Result;
use crate::gluings::{
    coherence_operators, interference_lsp, interference_sp, overlap_matrix_q, LspGluing, SpGluing,
};
use crate::interferometer::{
    build_lsp_dilation, build_sp_dilation, phase_scan, simulate, InterferometerConfig,
};
use crate::measures::{
    coherence_lsp, coherence_sp, coherent_fidelity_lsp, coherent_fidelity_sp, maximize_lsp_numeric,
    maximize_sp_numeric, optimal_aligner, search_coefficients, search_contractions, search_shifts,
    shifted_fidelity, GluingClass, SearchConfig,
};
use crate::numerics::{
    self, haar_unitary, hermitian_eig, max_abs_diff, psd_sqrt, random_hermitian, re, seeded_rng,
    singular_values, sub_seed, trace, ComplexMatrix, SeededRng,
};
use crate::states::{
    fidelity_spectrum, overlap_matrix_m, random_density_with, sandwich_root,
    spectral_decomposition, uhlmann_fidelity, uhlmann_fidelity_sandwich, DensityMatrix, PureState,
};

/// Samples per trial for the random-search checks.
pub const SEARCH_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteResult {
    pub module: &'static str,
    pub name: &'static str,
    pub trials: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

type Check = fn(usize, &mut SeededRng) -> Result<f64>;

struct Suite {
    module: &'static str,
    name: &'static str,
    tolerance: f64,
    check: Check,
}

const SUITES: &[Suite] = &[
    Suite {
        module: "numerics",
        name: "eig_reconstruction",
        tolerance: 1e-9,
        check: eig_reconstruction,
    },
    Suite {
        module: "numerics",
        name: "singular_value_invariance",
        tolerance: 1e-9,
        check: singular_value_invariance,
    },
    Suite {
        module: "numerics",
        name: "svd_reconstruction",
        tolerance: 1e-9,
        check: svd_reconstruction,
    },
    Suite {
        module: "numerics",
        name: "psd_sqrt_consistency",
        tolerance: 1e-8,
        check: psd_sqrt_consistency,
    },
    Suite {
        module: "numerics",
        name: "polar_optimality",
        tolerance: 1e-8,
        check: polar_optimality,
    },
    Suite {
        module: "states",
        name: "m_matrix_invariance",
        tolerance: 1e-9,
        check: m_matrix_invariance,
    },
    Suite {
        module: "states",
        name: "singular_value_identity",
        tolerance: 1e-9,
        check: singular_value_identity,
    },
    Suite {
        module: "states",
        name: "fidelity_sum",
        tolerance: 1e-9,
        check: fidelity_sum,
    },
    Suite {
        module: "states",
        name: "fidelity_bounds",
        tolerance: 1e-8,
        check: fidelity_bounds,
    },
    Suite {
        module: "channels",
        name: "preparation_bridging",
        tolerance: 1e-9,
        check: preparation_bridging,
    },
    Suite {
        module: "channels",
        name: "dilation_round_trip",
        tolerance: 1e-9,
        check: dilation_round_trip,
    },
    Suite {
        module: "channels",
        name: "choi_preservation",
        tolerance: 1e-9,
        check: choi_preservation,
    },
    Suite {
        module: "gluings",
        name: "interference_bound",
        tolerance: 1e-9,
        check: interference_bound,
    },
    Suite {
        module: "gluings",
        name: "coherence_operator_consistency",
        tolerance: 1e-10,
        check: coherence_operator_consistency,
    },
    Suite {
        module: "gluings",
        name: "sp_contains_lsp",
        tolerance: 1e-12,
        check: sp_contains_lsp,
    },
    Suite {
        module: "gluings",
        name: "q_invariance",
        tolerance: 1e-9,
        check: q_invariance,
    },
    Suite {
        module: "gluings",
        name: "linearity",
        tolerance: 1e-12,
        check: linearity,
    },
    Suite {
        module: "measures",
        name: "ordering_chain",
        tolerance: 1e-9,
        check: ordering_chain,
    },
    Suite {
        module: "measures",
        name: "channel_independence",
        tolerance: 1e-9,
        check: channel_independence,
    },
    Suite {
        module: "measures",
        name: "input_irrelevance",
        tolerance: 1e-9,
        check: input_irrelevance,
    },
    Suite {
        module: "measures",
        name: "unitary_invariance",
        tolerance: 1e-9,
        check: unitary_invariance,
    },
    Suite {
        module: "measures",
        name: "aligner_attains",
        tolerance: 1e-9,
        check: aligner_attains,
    },
    Suite {
        module: "measures",
        name: "never_exceeds",
        tolerance: 1e-8,
        check: never_exceeds,
    },
    Suite {
        module: "interferometer",
        name: "oracle_equivalence",
        tolerance: 1e-10,
        check: oracle_equivalence,
    },
    Suite {
        module: "interferometer",
        name: "subspace_preservation",
        tolerance: 1e-12,
        check: subspace_preservation,
    },
    Suite {
        module: "interferometer",
        name: "shift_reduction",
        tolerance: 1e-10,
        check: shift_reduction,
    },
    Suite {
        module: "interferometer",
        name: "visibility_bound",
        tolerance: 1e-9,
        check: visibility_bound,
    },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs every suite at dimension `dim`.
pub fn run_all(dim: usize, trials: usize, seed: u64) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .enumerate()
        .map(|(s, suite)| run_suite(suite, dim, trials, sub_seed(seed, s as u64)))
        .collect()
}

/// Runs the suite called `name`, if there is one.
pub fn run_named(name: &str, dim: usize, trials: usize, seed: u64) -> Option<SuiteResult> {
    let s = SUITES.iter().position(|suite| suite.name == name)?;
    Some(run_suite(&SUITES[s], dim, trials, sub_seed(seed, s as u64)))
}

fn run_suite(suite: &Suite, dim: usize, trials: usize, seed: u64) -> SuiteResult {
    let max_deviation = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(sub_seed(seed, i as u64));
            match (suite.check)(dim, &mut rng) {
                Ok(d) if d.is_nan() => f64::INFINITY,
                Ok(d) => d,
                Err(_) => f64::INFINITY,
            }
        })
        .reduce(|| 0.0, f64::max);
    SuiteResult {
        module: suite.module,
        name: suite.name,
        trials,
        max_deviation,
        tolerance: suite.tolerance,
    }
}

fn violation(excess: f64) -> f64 {
    excess.max(0.0)
}

fn elementwise(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn random_rank(dim: usize, rng: &mut SeededRng) -> usize {
    rng.random_range(1..=dim)
}

fn random_state(dim: usize, rng: &mut SeededRng) -> Result<DensityMatrix> {
    let rank = random_rank(dim, rng);
    random_density_with(dim, rank, rng)
}

fn full_rank_state(dim: usize, rng: &mut SeededRng) -> Result<DensityMatrix> {
    random_density_with(dim, dim, rng)
}

/// `n × r` matrix with orthonormal columns.
fn random_isometry(n: usize, r: usize, rng: &mut SeededRng) -> ComplexMatrix {
    haar_unitary(n, rng).columns(0, r).into_owned()
}

fn random_lsp(dim: usize, rng: &mut SeededRng) -> LspGluing {
    let (ra, rb) = (random_rank(dim, rng), random_rank(dim, rng));
    LspGluing::random(dim, ra, rb, rng)
}

fn random_sp(dim: usize, rng: &mut SeededRng) -> SpGluing {
    let (ra, rb) = (random_rank(dim, rng), random_rank(dim, rng));
    SpGluing::random(dim, ra, rb, rng)
}

fn eig_reconstruction(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let h = random_hermitian(dim, 1.0, rng);
    let s = hermitian_eig(&h)?;
    let diag = ComplexMatrix::from_diagonal(&numerics::ComplexVector::from_iterator(
        dim,
        s.values.iter().map(|&v| re(v)),
    ));
    Ok(max_abs_diff(&(&s.vectors * diag * s.vectors.adjoint()), &h))
}

fn singular_value_invariance(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let m = numerics::gaussian_matrix(dim, dim, rng);
    let (v, w) = (haar_unitary(dim, rng), haar_unitary(dim, rng));
    Ok(elementwise(
        &singular_values(&m),
        &singular_values(&(v * &m * w)),
    ))
}

fn svd_reconstruction(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (rows, cols) = (rng.random_range(1..=dim + 2), rng.random_range(1..=dim + 2));
    let rank = rng.random_range(1..=rows.min(cols));
    let m = numerics::gaussian_matrix(rows, rank, rng) * numerics::gaussian_matrix(rank, cols, rng);
    let f = numerics::svd(&m);
    let s = ComplexMatrix::from_diagonal(&numerics::ComplexVector::from_iterator(
        f.singular_values.len(),
        f.singular_values.iter().map(|&x| re(x)),
    ));
    let residual = max_abs_diff(&(&f.u * s * f.v.adjoint()), &m);
    Ok(residual
        .max(numerics::isometry_deviation(&f.u))
        .max(numerics::isometry_deviation(&f.v)))
}

fn psd_sqrt_consistency(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let rank = random_rank(dim, rng);
    let v = haar_unitary(dim, rng);
    let diag = numerics::ComplexVector::from_fn(dim, |k, _| {
        re(if k < rank { rng.random::<f64>() } else { 0.0 })
    });
    let s = &v * ComplexMatrix::from_diagonal(&diag) * v.adjoint();
    let s = (&s + s.adjoint()) * re(0.5);
    Ok(max_abs_diff(&psd_sqrt(&(&s * &s))?, &s))
}

fn polar_optimality(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let m = numerics::gaussian_matrix(dim, dim, rng);
    let w = numerics::polar_unitary(&m)?;
    let nuclear = numerics::nuclear_norm(&m);
    let mut deviation = (trace(&(w.adjoint() * &m)).norm() - nuclear).abs();
    for _ in 0..SEARCH_SAMPLES {
        let u = haar_unitary(dim, rng);
        deviation = deviation.max(violation(trace(&(u.adjoint() * &m)).norm() - nuclear));
    }
    Ok(deviation)
}

fn m_matrix_invariance(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (a, b) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let (da, db) = (spectral_decomposition(&a), spectral_decomposition(&b));
    let m = overlap_matrix_m(&da, &db)?;
    let extra = rng.random_range(0..=2);
    let va = random_isometry(da.len() + extra, da.len(), rng);
    let vb = random_isometry(db.len() + extra, db.len(), rng);
    let remixed = overlap_matrix_m(&da.remix(&va)?, &db.remix(&vb)?)?;
    Ok(elementwise(
        &singular_values(&m),
        &singular_values(&remixed),
    ))
}

fn singular_value_identity(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (a, b) = (full_rank_state(dim, rng)?, full_rank_state(dim, rng)?);
    let s = fidelity_spectrum(&a, &b)?;
    let root = hermitian_eig(&sandwich_root(&a, &b)?)?;
    let sum: f64 = s.iter().sum();
    Ok(
        elementwise(&s, &root.values)
            .max((sum.min(1.0) - uhlmann_fidelity_sandwich(&a, &b)?).abs()),
    )
}

fn fidelity_sum(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (a, b) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let sum: f64 = fidelity_spectrum(&a, &b)?.iter().sum();
    let f = uhlmann_fidelity(&a, &b)?;
    Ok((f - sum.min(1.0))
        .abs()
        .max((f - uhlmann_fidelity(&b, &a)?).abs()))
}

fn fidelity_bounds(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (a, b) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let f = uhlmann_fidelity(&a, &b)?;
    let mut deviation = violation(-f).max(violation(f - 1.0));
    deviation = deviation.max((uhlmann_fidelity(&a, &a)? - 1.0).abs());
    // distinct random states stay well away from fidelity one
    if max_abs_diff(a.matrix(), b.matrix()) > 1e-3 {
        deviation = deviation.max(violation(f - (1.0 - 1e-8)));
    }
    Ok(deviation)
}

fn preparation_bridging(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let target = random_state(dim, rng)?;
    let psi = PureState::random(dim, rng);
    let channel = preparation_channel(&psi, &target)?;
    let images = channel.images(&psi);
    let mut rebuilt = ComplexMatrix::zeros(dim, dim);
    for v in &images {
        rebuilt += v * v.adjoint();
    }
    let mut deviation = max_abs_diff(&rebuilt, target.matrix());
    let output = apply_channel(&channel, &DensityMatrix::from_pure(&psi))?;
    deviation = deviation.max(max_abs_diff(output.matrix(), target.matrix()));
    // completion operators contribute zero images, leaving Q unchanged
    let rank = spectral_decomposition(&target).len();
    for v in &images[rank..] {
        deviation = deviation.max(v.norm());
    }
    let other = KrausChannel::random(dim, random_rank(dim, rng), rng);
    let full = overlap_matrix_q(&channel, &other, &psi, None)?;
    let head = full.rows(0, rank).into_owned();
    Ok(deviation.max(elementwise(
        &singular_values(&full),
        &singular_values(&head),
    )))
}

fn dilation_round_trip(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let channel = KrausChannel::random(dim, random_rank(dim, rng), rng);
    let rho = random_state(dim, rng)?;
    let expected = apply_channel(&channel, &rho)?;
    let mut deviation = max_abs_diff(
        stinespring_dilation(&channel).apply(&rho)?.matrix(),
        expected.matrix(),
    );
    let coeffs = crate::gluings::random_ball_vector(channel.len(), rng);
    let shaped = dilation_with_coefficients(&channel, &coeffs)?;
    deviation = deviation.max(max_abs_diff(
        shaped.apply(&rho)?.matrix(),
        expected.matrix(),
    ));
    Ok(deviation)
}

fn choi_preservation(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let channel = KrausChannel::random(dim, random_rank(dim, rng), rng);
    let v = random_isometry(channel.len() + rng.random_range(0..=2), channel.len(), rng);
    let remixed = remix_kraus(&channel, &v)?;
    let padded = remixed.with_zero_operator();
    let reduced = reduce_to_independent(&padded);
    Ok(choi_distance(&channel, &remixed).max(choi_distance(&channel, &reduced)))
}

fn interference_bound(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let rho = random_state(dim, rng)?;
    let lsp = interference_lsp(&random_lsp(dim, rng), &rho)?;
    let sp = interference_sp(&random_sp(dim, rng), &rho)?;
    Ok(violation(lsp.norm() - 1.0).max(violation(sp.norm() - 1.0)))
}

fn coherence_operator_consistency(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let g = random_lsp(dim, rng);
    let rho = random_state(dim, rng)?;
    Ok((coherence_operators(&g).interference(&rho)? - interference_lsp(&g, &rho)?).norm())
}

fn sp_contains_lsp(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let g = random_lsp(dim, rng);
    let rho = random_state(dim, rng)?;
    Ok((interference_sp(&g.to_sp(), &rho)? - interference_lsp(&g, &rho)?).norm())
}

fn q_invariance(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let a = KrausChannel::random(dim, random_rank(dim, rng), rng);
    let b = KrausChannel::random(dim, random_rank(dim, rng), rng);
    let psi = PureState::random(dim, rng);
    let base = singular_values(&overlap_matrix_q(&a, &b, &psi, None)?);

    let va = random_isometry(a.len() + 1, a.len(), rng);
    let vb = random_isometry(b.len() + 1, b.len(), rng);
    let remixed = singular_values(&overlap_matrix_q(
        &remix_kraus(&a, &va)?,
        &remix_kraus(&b, &vb)?,
        &psi,
        None,
    )?);

    let pure = DensityMatrix::from_pure(&psi);
    let prep_a = preparation_channel(&psi, &apply_channel(&a, &pure)?)?;
    let prep_b = preparation_channel(&psi, &apply_channel(&b, &pure)?)?;
    let prepared = singular_values(&overlap_matrix_q(&prep_a, &prep_b, &psi, None)?);
    Ok(elementwise(&base, &remixed).max(elementwise(&base, &prepared)))
}

fn linearity(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let g = random_sp(dim, rng);
    let (r1, r2) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let alpha: f64 = rng.random();
    let mixed = interference_sp(&g, &r1.mix(&r2, alpha)?)?;
    let split = interference_sp(&g, &r1)? * alpha + interference_sp(&g, &r2)? * (1.0 - alpha);
    Ok((mixed - split).norm())
}

fn ordering_chain(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (a, b) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let f_lsp = coherent_fidelity_lsp(&a, &b)?;
    let f_sp = coherent_fidelity_sp(&a, &b)?;
    let g_lsp = coherence_lsp(&a, &b)?;
    let g_sp = coherence_sp(&a, &b)?;
    let chain = [f_lsp - f_sp, f_sp - g_sp, f_lsp - g_lsp, g_lsp - g_sp];
    let range = [f_lsp, f_sp, g_lsp, g_sp]
        .iter()
        .map(|&v| violation(-v).max(violation(v - 1.0)))
        .fold(0.0, f64::max);
    Ok(chain.iter().map(|&x| violation(x)).fold(range, f64::max))
}

fn numeric_values(a: &KrausChannel, b: &KrausChannel, psi: &PureState) -> Result<[f64; 2]> {
    let none = SearchConfig {
        samples: 0,
        seed: 0,
    };
    Ok([
        maximize_lsp_numeric(a, b, psi, &none)?.value,
        maximize_sp_numeric(a, b, psi, &none)?.value,
    ])
}

fn channel_independence(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (ra, rb) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let psi = PureState::random(dim, rng);
    let a = preparation_channel(&psi, &ra)?;
    let b = preparation_channel(&psi, &rb)?;
    let base = numeric_values(&a, &b, &psi)?;
    let va = random_isometry(a.len() + 1, a.len(), rng);
    let vb = random_isometry(b.len() + 1, b.len(), rng);
    let remixed = numeric_values(&remix_kraus(&a, &va)?, &remix_kraus(&b, &vb)?, &psi)?;
    let closed = [
        coherent_fidelity_lsp(&ra, &rb)?,
        coherent_fidelity_sp(&ra, &rb)?,
    ];
    Ok(elementwise(&base, &remixed).max(elementwise(&base, &closed)))
}

fn input_irrelevance(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (ra, rb) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let psi = PureState::random(dim, rng);
    let phi = PureState::random(dim, rng);
    let at = |input: &PureState| -> Result<[f64; 2]> {
        numeric_values(
            &preparation_channel(input, &ra)?,
            &preparation_channel(input, &rb)?,
            input,
        )
    };
    Ok(elementwise(&at(&psi)?, &at(&phi)?))
}

fn unitary_invariance(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (a, b) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let (v, w) = (haar_unitary(dim, rng), haar_unitary(dim, rng));
    let (a2, b2) = (a.conjugate_by(&v)?, b.conjugate_by(&w)?);
    let lsp = (coherence_lsp(&a, &b)? - coherence_lsp(&a2, &b2)?).abs();
    let sp = (coherence_sp(&a, &b)? - coherence_sp(&a2, &b2)?).abs();
    Ok(lsp.max(sp))
}

fn aligner_attains(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (a, b) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let mut deviation: f64 = 0.0;
    for (class, value) in [
        (GluingClass::Lsp, coherence_lsp(&a, &b)?),
        (GluingClass::Sp, coherence_sp(&a, &b)?),
    ] {
        let u = optimal_aligner(&a, &b, class)?;
        deviation = deviation.max((shifted_fidelity(&a, &b, &u, class)? - value).abs());
    }
    Ok(deviation)
}

fn never_exceeds(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let (ra, rb) = (random_state(dim, rng)?, random_state(dim, rng)?);
    let psi = PureState::random(dim, rng);
    let q = overlap_matrix_q(
        &preparation_channel(&psi, &ra)?,
        &preparation_channel(&psi, &rb)?,
        &psi,
        None,
    )?;
    let search = SearchConfig {
        samples: SEARCH_SAMPLES,
        seed: rng.random(),
    };
    let excess = [
        search_coefficients(&q, &search) - coherent_fidelity_lsp(&ra, &rb)?,
        search_contractions(&q, &search) - coherent_fidelity_sp(&ra, &rb)?,
        search_shifts(&ra, &rb, GluingClass::Lsp, &search) - coherence_lsp(&ra, &rb)?,
        search_shifts(&ra, &rb, GluingClass::Sp, &search) - coherence_sp(&ra, &rb)?,
    ];
    Ok(excess.iter().map(|&x| violation(x)).fold(0.0, f64::max))
}

fn oracle_equivalence(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let psi = PureState::random(dim, rng);
    let rho = DensityMatrix::from_pure(&psi);
    let lsp = random_lsp(dim, rng);
    let sp = random_sp(dim, rng);
    let lsp_scan = phase_scan(&build_lsp_dilation(&lsp)?, &psi, None)?;
    let sp_scan = phase_scan(&build_sp_dilation(&sp)?, &psi, None)?;
    let lsp_dev = (lsp_scan.pattern.amplitude - interference_lsp(&lsp, &rho)?).norm();
    let sp_dev = (sp_scan.pattern.amplitude - interference_sp(&sp, &rho)?).norm();
    Ok(lsp_dev.max(sp_dev))
}

fn subspace_preservation(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let psi = PureState::random(dim, rng);
    let cfg = InterferometerConfig::with_phase(rng.random_range(0.0..std::f64::consts::TAU));
    let mut deviation: f64 = 0.0;
    for d in [
        build_lsp_dilation(&random_lsp(dim, rng))?,
        build_sp_dilation(&random_sp(dim, rng))?,
    ] {
        let det = simulate(&d, &psi, &cfg)?;
        deviation = deviation
            .max(d.off_diagonal_leak())
            .max((det.p_a + det.p_b - 1.0).abs());
    }
    Ok(deviation)
}

fn shift_reduction(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let channel = KrausChannel::random(dim, random_rank(dim, rng), rng);
    let coeff_b = crate::gluings::random_ball_vector(channel.len(), rng);
    let one = numerics::ComplexVector::from_element(1, re(1.0));
    let u = haar_unitary(dim, rng);
    let plain = LspGluing::new(
        KrausChannel::identity(dim),
        channel.clone(),
        one.clone(),
        coeff_b.clone(),
    )?;
    let folded = LspGluing::new(
        KrausChannel::identity(dim),
        channel.then_unitary(&u)?,
        one,
        coeff_b,
    )?;
    let psi = PureState::random(dim, rng);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let shifted = simulate(
        &build_lsp_dilation(&plain)?,
        &psi,
        &InterferometerConfig {
            phase,
            variable_shift: Some(u),
        },
    )?;
    let direct = simulate(
        &build_lsp_dilation(&folded)?,
        &psi,
        &InterferometerConfig::with_phase(phase),
    )?;
    Ok((shifted.p_a - direct.p_a).abs())
}

fn visibility_bound(dim: usize, rng: &mut SeededRng) -> Result<f64> {
    let psi = PureState::random(dim, rng);
    let u = haar_unitary(dim, rng);
    let lsp = phase_scan(&build_lsp_dilation(&random_lsp(dim, rng))?, &psi, Some(&u))?;
    let sp = phase_scan(&build_sp_dilation(&random_sp(dim, rng))?, &psi, Some(&u))?;
    Ok(violation(lsp.pattern.visibility - 1.0).max(violation(sp.pattern.visibility - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_pass_vacuously() {
        for r in run_all(2, 0, 7) {
            assert_eq!(r.max_deviation, 0.0);
            assert!(r.passed());
        }
    }

    #[test]
    fn small_run_passes_and_repeats() {
        let first = run_all(2, 4, 11);
        assert!(first.iter().all(SuiteResult::passed), "{first:#?}");
        assert_eq!(first, run_all(2, 4, 11));
    }

    #[test]
    fn thread_count_does_not_matter() {
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| run_named("oracle_equivalence", 3, 12, 5));
        let b = many.install(|| run_named("oracle_equivalence", 3, 12, 5));
        assert_eq!(a, b);
    }
}
