use nalgebra::SymmetricEigen;

use super::{re, Complex64, ComplexMatrix, ComplexVector, HERMITIAN_TOL, PSD_FLOOR, RANK_TOL};
use crate::error::{Error, Result};

/// Eigen-decomposition of a Hermitian matrix, values sorted non-increasing.
/// Column `k` of `vectors` pairs with `values[k]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k).into_owned()
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }

    /// `Σ_k f(λ_k) v_k v_k†`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.nrows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vectors.column(k);
            out += (v * v.adjoint()) * re(f(lambda));
        }
        out
    }
}

/// Thin SVD `M = U diag(s) V†` with `s` sorted non-increasing.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Largest absolute entry.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.nrows() >= 1 && m.ncols() >= 1 && m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// `‖U†U − I‖_max`.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    isometry_deviation(u).max(if u.is_square() { 0.0 } else { f64::INFINITY })
}

/// `‖V†V − I‖_max`, the isometry defect of the columns.
pub fn isometry_deviation(v: &ComplexMatrix) -> f64 {
    let gram = v.adjoint() * v;
    max_abs_diff(&gram, &ComplexMatrix::identity(v.ncols(), v.ncols()))
}

pub fn ensure_unitary(u: &ComplexMatrix) -> Result<()> {
    ensure_square(u)?;
    let deviation = unitarity_deviation(u);
    if deviation <= super::UNITARY_TOL {
        Ok(())
    } else {
        Err(Error::NotUnitary { deviation })
    }
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// The input is symmetrized before decomposition so the result is exactly
/// Hermitian even when `h` carries rounding noise below [`HERMITIAN_TOL`].
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Spectrum> {
    ensure_square(h)?;
    ensure_finite(h)?;
    let deviation = hermiticity_deviation(h);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (h + h.adjoint()) * re(0.5);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    // stable: ties keep the decomposition order
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let columns: Vec<ComplexVector> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    Ok(Spectrum {
        values,
        vectors: ComplexMatrix::from_columns(&columns),
    })
}

/// Thin SVD with sorted singular values.
///
/// Computed from the eigendecomposition of the Hermitian dilation
/// `[[0, M], [M†, 0]]`, whose eigenvalues are `±s_k` with eigenvectors
/// `(u_k, ±v_k)/√2`. Singular vectors for singular values at the noise
/// level are completed to orthonormal sets.
pub fn svd(m: &ComplexMatrix) -> SvdFactors {
    let (rows, cols) = m.shape();
    let p = rows.min(cols);
    let mut h = ComplexMatrix::zeros(rows + cols, rows + cols);
    h.view_mut((0, rows), (rows, cols)).copy_from(m);
    h.view_mut((rows, 0), (cols, rows)).copy_from(&m.adjoint());
    let spectrum = hermitian_eig(&h).expect("dilation is Hermitian");

    let singular_values: Vec<f64> = spectrum
        .values
        .iter()
        .take(p)
        .map(|&s| s.max(0.0))
        .collect();
    let noise =
        (rows + cols) as f64 * f64::EPSILON * singular_values.first().copied().unwrap_or(0.0) * 4.0;
    let mut fixed_u = Vec::new();
    let mut fixed_v = Vec::new();
    for (k, &s) in singular_values.iter().enumerate() {
        if s <= noise {
            break;
        }
        let x = spectrum.vector(k);
        let u = x.rows(0, rows).into_owned();
        let v = x.rows(rows, cols).into_owned();
        fixed_u.push((k, &u / re(u.norm())));
        fixed_v.push((k, &v / re(v.norm())));
    }
    SvdFactors {
        u: complete_unitary(rows, &fixed_u).columns(0, p).into_owned(),
        singular_values,
        v: complete_unitary(cols, &fixed_v).columns(0, p).into_owned(),
    }
}

/// Singular values, non-increasing, `min(rows, cols)` of them.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    svd(m).singular_values
}

pub fn nuclear_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m)[0]
}

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues at or below `n · ε · λ_max` are rounding noise of a zero
/// eigenvalue and map to zero; taken literally their square roots would
/// be of order `√ε ≈ 1e-8`.
pub fn psd_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spectrum = hermitian_eig(p)?;
    let min = *spectrum.values.last().expect("non-empty spectrum");
    if min < PSD_FLOOR {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let noise = p.nrows() as f64 * f64::EPSILON * spectrum.largest().max(0.0);
    Ok(spectrum.map_values(|lambda| if lambda <= noise { 0.0 } else { lambda.sqrt() }))
}

/// Unitary factor `W = U V†` of the polar decomposition `M = W |M|`.
///
/// `W` maximizes `Re tr[W† M]` over unitaries, reaching the nuclear norm.
pub fn polar_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(m)?;
    let f = svd(m);
    let smallest = *f.singular_values.last().expect("non-empty");
    if smallest <= RANK_TOL {
        return Err(Error::RankDeficient { smallest });
    }
    Ok(&f.u * f.v.adjoint())
}

/// Extends a set of orthonormal columns to a unitary.
///
/// `fixed` pins column `index` to the given vector; every other column is
/// filled, in increasing index order, with the canonical basis vector that
/// has the largest component orthogonal to everything placed so far (first
/// index wins ties), orthonormalized by two passes of Gram-Schmidt.
pub fn complete_unitary(dim: usize, fixed: &[(usize, ComplexVector)]) -> ComplexMatrix {
    let mut placed: Vec<Option<ComplexVector>> = vec![None; dim];
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(dim);
    for (idx, v) in fixed {
        placed[*idx] = Some(v.clone());
        basis.push(v.clone());
    }

    let project_out = |mut x: ComplexVector, basis: &[ComplexVector]| {
        for _ in 0..2 {
            for b in basis {
                let coeff = b.dotc(&x);
                x -= b * coeff;
            }
        }
        x
    };

    for slot in placed.iter_mut() {
        if slot.is_some() {
            continue;
        }
        let mut best: Option<(f64, ComplexVector)> = None;
        for e in 0..dim {
            let mut candidate = ComplexVector::zeros(dim);
            candidate[e] = re(1.0);
            let residual = project_out(candidate, &basis);
            let norm = residual.norm();
            if best.as_ref().is_none_or(|(n, _)| norm > *n + 1e-12) {
                best = Some((norm, residual));
            }
        }
        let (norm, residual) = best.expect("dim >= 1");
        let unit = residual / re(norm);
        basis.push(unit.clone());
        *slot = Some(unit);
    }

    let cols: Vec<ComplexVector> = placed.into_iter().map(|c| c.expect("filled")).collect();
    ComplexMatrix::from_columns(&cols)
}

/// `exp(iH)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spectrum = hermitian_eig(h)?;
    let n = h.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in spectrum.values.iter().enumerate() {
        let v = spectrum.vectors.column(k);
        out += (v * v.adjoint()) * Complex64::from_polar(1.0, lambda);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c64, gaussian_matrix, random_unitary};

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![re(1.0), re(-1.0)]))
    }

    #[test]
    fn eig_identity_and_sigma_z() {
        let s = hermitian_eig(&ComplexMatrix::identity(2, 2)).unwrap();
        assert_eq!(s.values, vec![1.0, 1.0]);

        let s = hermitian_eig(&sigma_z()).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-15 && (s.values[1] + 1.0).abs() < 1e-15);
        assert!((s.vectors[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!((s.vectors[(1, 1)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[re(1.0), re(1.0), re(0.0), re(1.0)]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn svd_reconstructs_rank_deficient() {
        let mut rng = crate::numerics::seeded_rng(1);
        for t in 0..4000 {
            let (m, n) = (1 + t % 6, 1 + (t / 6) % 6);
            let r = 1 + (t / 36) % m.min(n);
            let g = gaussian_matrix(m, r, &mut rng) * gaussian_matrix(r, n, &mut rng);
            let f = svd(&g);
            let s = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
                f.singular_values.len(),
                f.singular_values.iter().map(|&x| re(x)),
            ));
            assert!(
                max_abs_diff(&(&f.u * s * f.v.adjoint()), &g) < 1e-12 * (1.0 + max_abs(&g)) * 10.0
            );
            assert!(isometry_deviation(&f.u) < 1e-12 && isometry_deviation(&f.v) < 1e-12);
        }
    }

    #[test]
    fn singular_values_examples() {
        let col = ComplexMatrix::from_column_slice(2, 1, &[re(0.5), re(0.5)]);
        let s = singular_values(&col);
        assert_eq!(s.len(), 1);
        assert!((s[0] - 0.5f64.sqrt()).abs() < 1e-15);

        let s = singular_values(&ComplexMatrix::identity(3, 3));
        assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-15));

        let d = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![re(0.5), re(0.5)]));
        assert!(singular_values(&d).iter().all(|x| (x - 0.5).abs() < 1e-15));
    }

    #[test]
    fn psd_sqrt_examples() {
        let i = ComplexMatrix::identity(2, 2);
        assert!(max_abs_diff(&psd_sqrt(&i).unwrap(), &i) < 1e-15);
        let d = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![re(4.0), re(9.0)]));
        let expected =
            ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![re(2.0), re(3.0)]));
        assert!(max_abs_diff(&psd_sqrt(&d).unwrap(), &expected) < 1e-14);
    }

    #[test]
    fn psd_sqrt_clamps_and_rejects() {
        let tiny =
            ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![re(1.0), re(-5e-10)]));
        let s = psd_sqrt(&tiny).unwrap();
        assert_eq!(s[(1, 1)], re(0.0));
        let neg = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![re(1.0), re(-1e-3)]));
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn polar_examples() {
        let u = random_unitary(3, 11);
        assert!(max_abs_diff(&polar_unitary(&u).unwrap(), &u) < 1e-12);

        let d = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![re(2.0), re(3.0)]));
        assert!(max_abs_diff(&polar_unitary(&d).unwrap(), &ComplexMatrix::identity(2, 2)) < 1e-14);

        let singular = ComplexMatrix::from_row_slice(2, 2, &[re(1.0), re(1.0), re(1.0), re(1.0)]);
        assert!(matches!(
            polar_unitary(&singular),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn completion_is_unitary_and_respects_fixed_columns() {
        let h = 0.5f64.sqrt();
        let fixed = vec![(
            0,
            ComplexVector::from_vec(vec![re(h), c64(0.0, h), re(0.0)]),
        )];
        let u = complete_unitary(3, &fixed);
        assert!(unitarity_deviation(&u) < 1e-14);
        assert_eq!(u.column(0).into_owned(), fixed[0].1);
    }

    #[test]
    fn exp_i_of_zero_is_identity() {
        let z = ComplexMatrix::zeros(3, 3);
        assert!(
            max_abs_diff(
                &exp_i_hermitian(&z).unwrap(),
                &ComplexMatrix::identity(3, 3)
            ) < 1e-15
        );
    }
}
