use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, ONE};
use crate::{Error, Result};

const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit Pauli label: `σ₀ = I, σ₁ = X, σ₂ = Y, σ₃ = Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliLabel {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("Pauli label index {i} not in 0..4")))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_identity(self) -> bool {
        self == PauliLabel::I
    }

    /// Whether the operator flips the computational basis bit.
    fn flips(self) -> bool {
        matches!(self, PauliLabel::X | PauliLabel::Y)
    }

    /// Phase `f` with `σ|b⟩ = f(b)|b ⊕ flips⟩`.
    fn phase(self, bit: usize) -> Complex64 {
        match (self, bit) {
            (PauliLabel::I, _) | (PauliLabel::X, _) | (PauliLabel::Z, 0) => ONE,
            (PauliLabel::Z, _) => -ONE,
            (PauliLabel::Y, 0) => I_UNIT,
            (PauliLabel::Y, _) => -I_UNIT,
        }
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            PauliLabel::I => 'I',
            PauliLabel::X => 'X',
            PauliLabel::Y => 'Y',
            PauliLabel::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// The standard 2×2 Pauli matrix.
pub fn pauli_matrix(label: PauliLabel) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    for col in 0..2 {
        let row = if label.flips() { col ^ 1 } else { col };
        m[(row, col)] = label.phase(col);
    }
    m
}

/// Tensor product of single-qubit Paulis, one label per factor, leftmost first.
///
/// Every Pauli string is a monomial matrix: column `c` has its only nonzero in
/// row `c ⊕ flip_mask`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    labels: Vec<PauliLabel>,
}

impl PauliString {
    pub fn new(labels: Vec<PauliLabel>) -> Self {
        Self { labels }
    }

    pub fn identity(n: usize) -> Self {
        Self { labels: vec![PauliLabel::I; n] }
    }

    /// `label` on factor `q` of `n`, identity elsewhere.
    pub fn single(n: usize, q: usize, label: PauliLabel) -> Self {
        let mut labels = vec![PauliLabel::I; n];
        labels[q] = label;
        Self { labels }
    }

    /// Decodes a base-4 index, first label most significant.
    pub fn from_index(mut index: usize, n: usize) -> Self {
        let mut labels = vec![PauliLabel::I; n];
        for slot in labels.iter_mut().rev() {
            *slot = PauliLabel::ALL[index % 4];
            index /= 4;
        }
        Self { labels }
    }

    pub fn index(&self) -> usize {
        self.labels.iter().fold(0, |acc, l| acc * 4 + l.index())
    }

    pub fn labels(&self) -> &[PauliLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    fn flip_mask(&self) -> usize {
        let n = self.labels.len();
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.flips())
            .map(|(k, _)| 1 << (n - 1 - k))
            .sum()
    }

    /// Phase picked up by basis state `c`: `P|c⟩ = phase(c)|c ⊕ mask⟩`.
    fn phase(&self, c: usize) -> Complex64 {
        let n = self.labels.len();
        self.labels
            .iter()
            .enumerate()
            .map(|(k, l)| l.phase((c >> (n - 1 - k)) & 1))
            .product()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mask = self.flip_mask();
        let mut m = ComplexMatrix::zeros(self.dim());
        for c in 0..self.dim() {
            m[(c ^ mask, c)] = self.phase(c);
        }
        m
    }

    fn check_dim(&self, m: &ComplexMatrix) -> Result<()> {
        if m.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "Pauli string of length {} needs a {}-dim matrix, got {}",
                self.len(),
                self.dim(),
                m.dim()
            )));
        }
        Ok(())
    }

    /// `Tr(P·M)`.
    pub fn trace_with(&self, m: &ComplexMatrix) -> Result<Complex64> {
        self.check_dim(m)?;
        let mask = self.flip_mask();
        Ok((0..self.dim()).map(|c| self.phase(c ^ mask) * m[(c ^ mask, c)]).sum())
    }

    /// `(P·M + M·P)/2`.
    pub fn half_anticommutator(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(m)?;
        let mask = self.flip_mask();
        let dim = self.dim();
        let phases: Vec<Complex64> = (0..dim).map(|c| self.phase(c)).collect();
        let mut out = ComplexMatrix::zeros(dim);
        for r in 0..dim {
            let left = phases[r ^ mask];
            for c in 0..dim {
                out[(r, c)] = (left * m[(r ^ mask, c)] + m[(r, c ^ mask)] * phases[c]) * 0.5;
            }
        }
        Ok(out)
    }

    /// Adds `w·P` into `acc`.
    pub(crate) fn accumulate_into(&self, acc: &mut ComplexMatrix, w: f64) {
        let mask = self.flip_mask();
        for c in 0..self.dim() {
            acc[(c ^ mask, c)] += self.phase(c) * w;
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Raw Pauli expectations `Re Tr(P_a·M)` for all `4ⁿ` strings, indexed by [`PauliString::index`].
pub fn pauli_expectations(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m
        .qubit_count()
        .ok_or_else(|| Error::Dimension(format!("dim {} is not a power of two", m.dim())))?;
    (0..1usize << (2 * n))
        .map(|a| PauliString::from_index(a, n).trace_with(m).map(|z| z.re))
        .collect()
}

/// `2⁻ⁿ Σ_a e_a P_a` from raw expectations `e_a`.
pub fn from_pauli_expectations(expectations: &[f64], n: usize) -> Result<ComplexMatrix> {
    if expectations.len() != 1 << (2 * n) {
        return Err(Error::Dimension(format!(
            "{} expectations for {n} factor(s); need {}",
            expectations.len(),
            1usize << (2 * n)
        )));
    }
    let mut acc = ComplexMatrix::zeros(1 << n);
    let norm = 1.0 / (1u64 << n) as f64;
    for (a, &e) in expectations.iter().enumerate() {
        if e != 0.0 {
            PauliString::from_index(a, n).accumulate_into(&mut acc, e * norm);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::kron;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_matrices() {
        assert_eq!(pauli_matrix(PauliLabel::I), ComplexMatrix::identity(2));
        let x = ComplexMatrix::from_rows(vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap();
        assert_eq!(pauli_matrix(PauliLabel::X), x);
        let y = ComplexMatrix::from_rows(vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]).unwrap();
        assert_eq!(pauli_matrix(PauliLabel::Y), y);
        assert_eq!(pauli_matrix(PauliLabel::Z), ComplexMatrix::from_real_diagonal(&[1.0, -1.0]));
    }

    #[test]
    fn paulis_are_hermitian_unitary_and_traceless() {
        for l in PauliLabel::ALL {
            let p = pauli_matrix(l);
            assert!(p.is_hermitian(0.0));
            assert_eq!(&p * &p, ComplexMatrix::identity(2));
            if !l.is_identity() {
                assert_eq!(p.trace(), c(0., 0.));
            }
        }
    }

    #[test]
    fn label_index_bounds() {
        assert_eq!(PauliLabel::from_index(2).unwrap(), PauliLabel::Y);
        assert!(PauliLabel::from_index(4).is_err());
    }

    #[test]
    fn string_matrix_equals_dense_kron() {
        for a in 0..64 {
            let p = PauliString::from_index(a, 3);
            assert_eq!(p.index(), a);
            let dense = kron(&p.labels().iter().map(|&l| pauli_matrix(l)).collect::<Vec<_>>()).unwrap();
            assert_eq!(p.matrix(), dense, "string {p}");
        }
    }

    #[test]
    fn sparse_products_match_dense() {
        let mut m = ComplexMatrix::zeros(4);
        for r in 0..4 {
            for col in 0..4 {
                m[(r, col)] = c((r * 4 + col) as f64 * 0.1, r as f64 - col as f64);
            }
        }
        for a in 0..16 {
            let p = PauliString::from_index(a, 2);
            let pm = p.matrix();
            let tr = p.trace_with(&m).unwrap();
            assert!((tr - (&pm * &m).trace()).norm() < 1e-14);
            let dense = (&(&pm * &m) + &(&m * &pm)).scale_real(0.5);
            assert!(p.half_anticommutator(&m).unwrap().max_abs_diff(&dense) < 1e-14);
        }
    }

    #[test]
    fn expansion_round_trip() {
        let psi = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)];
        let rho = ComplexMatrix::outer(&psi);
        let e = pauli_expectations(&rho).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-15);
        let back = from_pauli_expectations(&e, 2).unwrap();
        assert!(back.max_abs_diff(&rho) < 1e-15);
    }
}
