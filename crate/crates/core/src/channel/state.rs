use num_complex::Complex64;

use crate::operator::{hermitian_eig, kron, pauli_matrix, ComplexMatrix, PauliLabel};
use crate::{Error, Result, HERMITIAN_TOL, PSD_TOL};

/// A valid density matrix on `n` qubits: Hermitian, unit trace, positive semi-definite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: ComplexMatrix,
    qubit_count: usize,
}

impl DensityState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let qubit_count = matrix
            .qubit_count()
            .ok_or_else(|| Error::Dimension(format!("state dim {} is not a power of two", matrix.dim())))?;
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!("state trace {tr} is not 1")));
        }
        let min_eig = hermitian_eig(&matrix)?.values[0];
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidArgument(format!(
                "state has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { matrix, qubit_count })
    }

    /// Wraps a matrix already known to be a state (output of a CPTP map on a state).
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        let qubit_count = matrix.qubit_count().expect("power-of-two dimension");
        Self { matrix, qubit_count }
    }

    /// `(I + r_x X + r_y Y + r_z Z)/2`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > 1.0 + HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!("Bloch vector {r:?} has norm {norm} > 1")));
        }
        let mut m = ComplexMatrix::identity(2);
        for (x, l) in r.iter().zip([PauliLabel::X, PauliLabel::Y, PauliLabel::Z]) {
            m = &m + &pauli_matrix(l).scale_real(*x);
        }
        Ok(Self::new_unchecked(m.scale_real(0.5)))
    }

    /// Tensor product of single-qubit Bloch states, qubit 0 leftmost.
    pub fn product_bloch(rs: &[[f64; 3]]) -> Result<Self> {
        let factors = rs
            .iter()
            .map(|&r| Self::from_bloch(r).map(|s| s.matrix))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new_unchecked(kron(&factors)?))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1 << n;
        Self::new_unchecked(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// `|ψ⟩⟨ψ|` after normalizing `ψ`.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        let m = ComplexMatrix::outer(&unit);
        if m.qubit_count().is_none() {
            return Err(Error::Dimension(format!("state dim {} is not a power of two", m.dim())));
        }
        Ok(Self::new_unchecked(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of a single-qubit state.
    pub fn bloch(&self) -> Option<[f64; 3]> {
        (self.qubit_count == 1).then(|| {
            [PauliLabel::X, PauliLabel::Y, PauliLabel::Z]
                .map(|l| pauli_matrix(l).trace_product(&self.matrix).re)
        })
    }
}
