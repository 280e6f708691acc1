use super::ComplexMatrix;
use crate::Result;

/// Spectrum of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors;
        let d = ComplexMatrix::from_real_diagonal(&self.values);
        &(v * &d) * &v.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized first; anything further than `HERMITIAN_TOL`
/// from Hermitian is rejected.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let sym = m.symmetrized()?;
    let eig = sym.to_nalgebra().symmetric_eigen();
    let dim = m.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(dim);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..dim {
            vectors[(row, col)] = eig.eigenvectors[(row, k)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub(crate) fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let sym = m.symmetrized()?;
    let mut values: Vec<f64> = sym.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// `‖M‖_tr = Σ|λᵢ|` for Hermitian `M`.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|l| l.abs()).sum())
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::operator::{pauli_matrix, PauliLabel, PauliString};
    use crate::Error;

    fn closed_qubit_pdm() -> ComplexMatrix {
        let mut r = ComplexMatrix::zeros(4);
        r[(0, 0)] = Complex64::new(1.0, 0.0);
        r[(1, 2)] = Complex64::new(0.5, 0.0);
        r[(2, 1)] = Complex64::new(0.5, 0.0);
        r
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn pauli_z_spectrum() {
        let e = hermitian_eig(&pauli_matrix(PauliLabel::Z)).unwrap();
        assert_close(&e.values, &[-1.0, 1.0], 1e-15);
    }

    #[test]
    fn closed_system_two_event_spectrum() {
        let e = hermitian_eig(&closed_qubit_pdm()).unwrap();
        assert_close(&e.values, &[-0.5, 0.0, 0.5, 1.0], 1e-12);
        assert!(e.reconstruct().max_abs_diff(&closed_qubit_pdm()) < 1e-12);
    }

    #[test]
    fn werner_like_spectrum() {
        // I/4 + λ(XX+YY+ZZ)/4, singlet (1-3λ)/4, triplet (1+λ)/4
        let lambda = 0.5;
        let mut m = ComplexMatrix::identity(4).scale_real(0.25);
        for l in [PauliLabel::X, PauliLabel::Y, PauliLabel::Z] {
            let p = PauliString::new(vec![l, l]).matrix().scale_real(lambda / 4.0);
            m = &m + &p;
        }
        let e = hermitian_eig(&m).unwrap();
        assert_close(&e.values, &[-0.125, 0.375, 0.375, 0.375], 1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        let half_id = ComplexMatrix::identity(2).scale_real(0.5);
        assert!((trace_norm(&half_id).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_norm(&closed_qubit_pdm()).unwrap() - 2.0).abs() < 1e-12);
        // dephasing family at γ = 1/2: spectrum {1, 0, ±1/4}
        let mut r = closed_qubit_pdm();
        r[(1, 2)] = Complex64::new(0.25, 0.0);
        r[(2, 1)] = Complex64::new(0.25, 0.0);
        assert!((trace_norm(&r).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian(_))));
        assert!(matches!(trace_norm(&m), Err(Error::NotHermitian(_))));
    }
}
