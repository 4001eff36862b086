use std::path::Path;

use serde_json::{json, Value};

use coherence_lab::gluings::{generalized_interference, interference_lsp, interference_sp};
use coherence_lab::interferometer::{
    build_lsp_dilation, build_sp_dilation, compare_dephasing_dilations, fit_pattern,
    max_visibility_over_inputs, phase_scan_mixed, scan_points, InterferencePattern,
};
use coherence_lab::io::{self, Document};
use coherence_lab::measures::{report_for, Measure, MeasureReport, Optimizer, SearchConfig};
use coherence_lab::numerics::{spectral_norm, unitarity_deviation};
use coherence_lab::verify;
use coherence_lab::{Complex64, ComplexMatrix, Error, Result};

use crate::format::{complex, fixed, sci};
use crate::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DIMENSION: u8 = 3;
pub const EXIT_ORACLE: u8 = 4;
pub const EXIT_SUITE: u8 = 5;

/// Formula and simulation may differ by at most this much.
pub const ORACLE_TOL: f64 = 1e-8;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DimensionMismatch { .. } => EXIT_DIMENSION,
        _ => EXIT_PARSE,
    }
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| pair(m[(i, j)])).collect()))
            .collect(),
    )
}

fn describe(measure: Measure) -> &'static str {
    match measure {
        Measure::FidelityLsp => "coherent fidelity, local gluings",
        Measure::FidelitySp => "coherent fidelity, subspace preserving gluings",
        Measure::CoherenceLsp => "coherence, local gluings with unitary shift",
        Measure::CoherenceSp => "coherence, subspace preserving gluings with unitary shift",
    }
}

fn optimizer_summary(o: &Optimizer) -> String {
    match o {
        Optimizer::Coefficients { coeff_a, coeff_b } => format!(
            "coefficients a ({} entries, norm {}), b ({} entries, norm {})",
            coeff_a.len(),
            fixed(coeff_a.norm()),
            coeff_b.len(),
            fixed(coeff_b.norm())
        ),
        Optimizer::Contraction(c) => {
            format!(
                "contraction {}x{}, largest singular value {}",
                c.nrows(),
                c.ncols(),
                fixed(spectral_norm(c))
            )
        }
        Optimizer::Unitary(u) => {
            format!(
                "unitary shift {}x{}, unitarity deviation {}",
                u.nrows(),
                u.ncols(),
                sci(unitarity_deviation(u))
            )
        }
    }
}

fn optimizer_json(o: &Optimizer) -> Value {
    match o {
        Optimizer::Coefficients { coeff_a, coeff_b } => json!({
            "type": "coefficients",
            "coeff_a": coeff_a.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
            "coeff_b": coeff_b.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
        }),
        Optimizer::Contraction(c) => json!({ "type": "contraction", "matrix": matrix(c) }),
        Optimizer::Unitary(u) => json!({ "type": "unitary", "matrix": matrix(u) }),
    }
}

/// The optimizer reproduces the value and no search sample beats it.
fn report_consistent(r: &MeasureReport) -> bool {
    (r.achieved - r.value).abs() <= ORACLE_TOL && r.certificate_gap >= -ORACLE_TOL
}

pub fn measure(
    state_a: &Path,
    state_b: &Path,
    which: Measure,
    seed: u64,
    format: Format,
) -> Result<u8> {
    let a = io::read_state(state_a)?;
    let b = io::read_state(state_b)?;
    let search = SearchConfig {
        samples: 1000,
        seed,
    };
    let report = report_for(which, &a, &b, &search)?;
    let ok = report_consistent(&report);
    match format {
        Format::Text => {
            println!("measure      {} ({})", which.name(), describe(which));
            println!("value        {}", fixed(report.value));
            println!("achieved     {}", fixed(report.achieved));
            println!("optimizer    {}", optimizer_summary(&report.optimizer));
            println!(
                "search       best of {} samples is {} below the value",
                search.samples,
                fixed(report.certificate_gap)
            );
        }
        Format::Json => print_json(&json!({
            "measure": which.name(),
            "value": report.value,
            "achieved": report.achieved,
            "certificate_gap": report.certificate_gap,
            "search_samples": search.samples,
            "seed": seed,
            "optimizer": optimizer_json(&report.optimizer),
        })),
    }
    if ok {
        Ok(EXIT_OK)
    } else {
        eprintln!("error: optimizer does not reproduce the closed form within {ORACLE_TOL:e}");
        Ok(EXIT_ORACLE)
    }
}

pub fn interfere(
    gluing: &Path,
    input: &Path,
    shift: Option<&Path>,
    scan: Option<usize>,
    format: Format,
) -> Result<u8> {
    let doc = io::read_gluing(gluing)?;
    let rho = io::read_state(input)?;
    let u = shift.map(io::read_unitary).transpose()?;
    let (dilation, formula) = match &doc {
        Document::GluingLsp(g) => {
            let f = match &u {
                Some(u) => generalized_interference(&g.to_sp(), &rho, u)?,
                None => interference_lsp(g, &rho)?,
            };
            (build_lsp_dilation(g)?, f)
        }
        Document::GluingSp(g) => {
            let f = match &u {
                Some(u) => generalized_interference(g, &rho, u)?,
                None => interference_sp(g, &rho)?,
            };
            (build_sp_dilation(g)?, f)
        }
        _ => unreachable!("read_gluing only returns gluings"),
    };
    let simulated = phase_scan_mixed(&dilation, &rho, u.as_ref())?.pattern;
    let formula = InterferencePattern::from_amplitude(formula);
    let difference = (formula.amplitude - simulated.amplitude).norm();
    let best = max_visibility_over_inputs(&dilation, u.as_ref())?;
    let samples = match scan {
        Some(n) => scan_points(&dilation, &rho, u.as_ref(), n)?,
        None => Vec::new(),
    };
    let fit = fit_pattern(&samples);

    match format {
        Format::Text => {
            println!("gluing       {}", doc.kind());
            println!(
                "formula      v = {}  gamma = {}",
                fixed(formula.visibility),
                fixed(formula.phase)
            );
            println!(
                "simulation   v = {}  gamma = {}",
                fixed(simulated.visibility),
                fixed(simulated.phase)
            );
            println!("amplitude    {}", complex(formula.amplitude));
            println!("difference   {}", sci(difference));
            println!(
                "best input   v = {} ({})",
                fixed(best.visibility),
                if best.exact {
                    "spectral radius"
                } else {
                    "sampled and refined"
                }
            );
            if !samples.is_empty() {
                println!("scan         phi p_A");
                for (phi, p) in &samples {
                    println!("             {} {}", fixed(*phi), fixed(*p));
                }
                if let Some(fit) = fit {
                    println!(
                        "fit          v = {}  gamma = {}",
                        fixed(fit.visibility),
                        fixed(fit.phase)
                    );
                }
            }
        }
        Format::Json => print_json(&json!({
            "gluing": doc.kind(),
            "formula": { "visibility": formula.visibility, "phase": formula.phase, "amplitude": pair(formula.amplitude) },
            "simulation": {
                "visibility": simulated.visibility,
                "phase": simulated.phase,
                "amplitude": pair(simulated.amplitude),
            },
            "difference": difference,
            "max_visibility": { "visibility": best.visibility, "exact": best.exact },
            "scan": samples.iter().map(|(phi, p)| json!([phi, p])).collect::<Vec<_>>(),
            "fit": fit.map(|f| json!({ "visibility": f.visibility, "phase": f.phase })),
        })),
    }
    if difference > ORACLE_TOL {
        eprintln!(
            "error: formula and simulation differ by {}",
            sci(difference)
        );
        return Ok(EXIT_ORACLE);
    }
    Ok(EXIT_OK)
}

pub fn verify(dim: usize, trials: usize, seed: u64, format: Format) -> Result<u8> {
    let results = verify::run_all(dim, trials, seed);
    let failed = results.iter().find(|r| !r.passed());
    match format {
        Format::Text => {
            println!("verify dim={dim} trials={trials} seed={seed}");
            println!(
                "{:<16}{:<32}{:<26}{:<11}status",
                "module", "suite", "max_deviation", "tolerance"
            );
            for r in &results {
                println!(
                    "{:<16}{:<32}{:<26}{:<11}{}",
                    r.module,
                    r.name,
                    sci(r.max_deviation),
                    sci(r.tolerance),
                    if r.passed() { "ok" } else { "FAIL" }
                );
            }
            match failed {
                None => println!("all {} suites passed", results.len()),
                Some(r) => println!("first failing suite: {}", r.name),
            }
        }
        Format::Json => print_json(&json!({
            "dim": dim,
            "trials": trials,
            "seed": seed,
            "suites": results.iter().map(|r| json!({
                "module": r.module,
                "suite": r.name,
                "max_deviation": r.max_deviation,
                "tolerance": r.tolerance,
                "passed": r.passed(),
            })).collect::<Vec<_>>(),
            "first_failure": failed.map(|r| r.name),
        })),
    }
    match failed {
        None => Ok(EXIT_OK),
        Some(r) => {
            eprintln!("error: suite {} exceeded its tolerance", r.name);
            Ok(EXIT_SUITE)
        }
    }
}

/// Agreement required of the two marginal channels.
const CHOI_TOL: f64 = 1e-12;

pub fn distinguish_demo(format: Format) -> Result<u8> {
    let c = compare_dephasing_dilations()?;
    let distinguishes = c.distinguishes(CHOI_TOL);
    let verdict = if distinguishes {
        "identical channels, different maximal visibility: the interferometer separates dilations that tomography cannot"
    } else {
        "the interferometer does not separate these dilations"
    };
    match format {
        Format::Text => {
            println!("dilation (a)  CNOT, ancilla |0>");
            println!("dilation (b)  diag(1,1,1,-1) (I x H), ancilla |0>");
            println!("choi distance (a) vs (b)        {}", sci(c.choi_distance));
            println!(
                "choi distance (a) vs dephasing  {}",
                sci(c.reference_distance)
            );
            println!(
                "max visibility (a)              {}",
                fixed(c.visibility_a.visibility)
            );
            println!(
                "max visibility (b)              {}",
                fixed(c.visibility_b.visibility)
            );
            println!("verdict  {verdict}");
        }
        Format::Json => print_json(&json!({
            "choi_distance": c.choi_distance,
            "reference_distance": c.reference_distance,
            "visibility_a": c.visibility_a.visibility,
            "visibility_b": c.visibility_b.visibility,
            "distinguishes": distinguishes,
            "verdict": verdict,
        })),
    }
    Ok(if distinguishes { EXIT_OK } else { EXIT_ORACLE })
}
