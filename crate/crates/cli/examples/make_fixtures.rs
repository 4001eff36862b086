//! Regenerates the files in `fixtures/`.
//!
//! cargo run -p coherence-lab-cli --example make_fixtures

use std::path::Path;

use coherence_lab::channels::KrausChannel;
use coherence_lab::gluings::{LspGluing, SpGluing};
use coherence_lab::io::{to_json, Document};
use coherence_lab::numerics::{re, seeded_rng, ComplexMatrix, ComplexVector};
use coherence_lab::states::{DensityMatrix, PureState};

fn diag(values: &[f64]) -> DensityMatrix {
    let d = ComplexVector::from_iterator(values.len(), values.iter().map(|&v| re(v)));
    DensityMatrix::new(ComplexMatrix::from_diagonal(&d)).unwrap()
}

fn write(dir: &Path, name: &str, doc: Document) {
    std::fs::write(dir.join(name), to_json(&doc) + "\n").unwrap();
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();
    let one = ComplexVector::from_element(1, re(1.0));
    let h = std::f64::consts::FRAC_1_SQRT_2;

    write(
        &dir,
        "maximally_mixed.json",
        Document::State(DensityMatrix::maximally_mixed(2)),
    );
    write(
        &dir,
        "ket0.json",
        Document::State(DensityMatrix::from_pure(&PureState::basis(2, 0))),
    );
    write(
        &dir,
        "plus.json",
        Document::State(DensityMatrix::from_pure(&PureState::plus())),
    );
    write(
        &dir,
        "diag_0.7_0.3.json",
        Document::State(diag(&[0.7, 0.3])),
    );
    write(
        &dir,
        "diag_0.6_0.4.json",
        Document::State(diag(&[0.6, 0.4])),
    );

    write(
        &dir,
        "identity_gluing.json",
        Document::GluingLsp(LspGluing::identity(2)),
    );
    // arm B dephases as {I/√2, Z/√2} and only the I/√2 branch is coherent
    let half = LspGluing::new(
        KrausChannel::identity(2),
        KrausChannel::random_phase_flip(),
        one.clone(),
        ComplexVector::from_vec(vec![re(1.0), re(0.0)]),
    )
    .unwrap();
    write(&dir, "dephasing_gluing.json", Document::GluingLsp(half));
    let tr = KrausChannel::transverse_relaxation();
    let correlated = SpGluing::new(tr.clone(), tr, ComplexMatrix::identity(2, 2)).unwrap();
    write(
        &dir,
        "correlated_dephasing_gluing.json",
        Document::GluingSp(correlated),
    );

    let mut rng = seeded_rng(2024);
    write(
        &dir,
        "random_lsp_gluing.json",
        Document::GluingLsp(LspGluing::random(3, 2, 3, &mut rng)),
    );
    write(
        &dir,
        "random_sp_gluing.json",
        Document::GluingSp(SpGluing::random(3, 3, 2, &mut rng)),
    );
    let input = PureState::random(3, &mut rng);
    write(
        &dir,
        "random_input_3.json",
        Document::State(DensityMatrix::from_pure(&input)),
    );

    let hadamard = ComplexMatrix::from_row_slice(2, 2, &[re(h), re(h), re(h), re(-h)]);
    write(&dir, "hadamard.json", Document::Unitary(hadamard));
}
