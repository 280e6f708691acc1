use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result, HERMITIAN_TOL};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
///
/// Basis states are ordered `|b₁b₂…bₙ⟩` with `b₁` the most significant bit, so
/// the leftmost tensor factor of a Kronecker product is qubit (or event) 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {dim}x{dim} = {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// Builds from nested rows; every row must have the same length as the outer list.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("rows do not form a square matrix".into()));
        }
        Self::from_row_major(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|` for an (unnormalized) state vector.
    pub fn outer(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn qubit_count(&self) -> Option<usize> {
        self.dim.is_power_of_two().then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Largest elementwise modulus `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M†|` elementwise.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M†)/2`, erroring if `M` is further than [`HERMITIAN_TOL`] from Hermitian.
    pub fn symmetrized(&self) -> Result<Self> {
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in i + 1..self.dim {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Ok(m)
    }

    /// `M ρ M†`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        &(self * rho) * &self.adjoint()
    }

    /// `Tr(A·B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = ZERO;
        for i in 0..self.dim {
            for k in 0..self.dim {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &nalgebra::DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let dim = m.nrows();
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product of the factors, leftmost most significant.
pub fn kron(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("kron of an empty factor list".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| kron2(&acc, f)))
}

pub(crate) fn kron2(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Traces out every factor not listed in `keep`, preserving the order of kept factors.
pub fn partial_trace(m: &ComplexMatrix, factor_dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = factor_dims.iter().product();
    if factor_dims.is_empty() || total != m.dim() {
        return Err(Error::Dimension(format!(
            "factor dims {factor_dims:?} do not multiply to matrix dim {}",
            m.dim()
        )));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= factor_dims.len()) {
        return Err(Error::Dimension(format!("factor index {bad} out of range")));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..factor_dims.len()).filter(|i| !kept.contains(i)).collect();

    // strides[i] = product of the dims to the right of factor i
    let mut strides = vec![1usize; factor_dims.len()];
    for i in (0..factor_dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * factor_dims[i + 1];
    }
    let kept_dim: usize = kept.iter().map(|&i| factor_dims[i]).product();
    let traced_dim: usize = traced.iter().map(|&i| factor_dims[i]).product();

    // Offsets into the full index for each kept / traced multi-index.
    let offsets = |factors: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for &f in factors.iter().rev() {
                    off += (idx % factor_dims[f]) * strides[f];
                    idx /= factor_dims[f];
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(&kept, kept_dim);
    let traced_off = offsets(&traced, traced_dim);

    let mut out = ComplexMatrix::zeros(kept_dim);
    for (r, &kr) in kept_off.iter().enumerate() {
        for (c, &kc) in kept_off.iter().enumerate() {
            out[(r, c)] = traced_off.iter().map(|&t| m[(kr + t, kc + t)]).sum();
        }
    }
    Ok(out)
}

/// Embeds an operator acting on `targets` (in the operator's own factor order)
/// into an `n_qubits` register, identity elsewhere.
pub fn embed(op: &ComplexMatrix, n_qubits: usize, targets: &[usize]) -> Result<ComplexMatrix> {
    let m = targets.len();
    if op.dim() != 1 << m {
        return Err(Error::Dimension(format!(
            "operator of dim {} cannot act on {m} target qubit(s)",
            op.dim()
        )));
    }
    check_targets(targets, n_qubits)?;
    let dim = 1usize << n_qubits;
    // bit position (from the least significant end) of each target qubit
    let shifts: Vec<usize> = targets.iter().map(|&q| n_qubits - 1 - q).collect();
    let target_mask: usize = shifts.iter().map(|&s| 1 << s).sum();
    let local = |idx: usize| -> usize {
        shifts.iter().fold(0, |acc, &s| (acc << 1) | ((idx >> s) & 1))
    };
    let mut out = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        let lr = local(r);
        for c in 0..dim {
            if r & !target_mask == c & !target_mask {
                out[(r, c)] = op[(lr, local(c))];
            }
        }
    }
    Ok(out)
}

/// `(K ⊗ I)·M·(K ⊗ I)†` with `K` acting on `targets` of an `n_qubits` register,
/// without materializing the embedded operator.
pub fn conjugate_local(k: &ComplexMatrix, n_qubits: usize, targets: &[usize], m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let local_dim = 1usize << targets.len();
    if k.dim() != local_dim {
        return Err(Error::Dimension(format!(
            "operator of dim {} cannot act on {} target qubit(s)",
            k.dim(),
            targets.len()
        )));
    }
    check_targets(targets, n_qubits)?;
    let dim = 1usize << n_qubits;
    if m.dim() != dim {
        return Err(Error::Dimension(format!("expected a {dim}-dim operator, got {}", m.dim())));
    }
    let shifts: Vec<usize> = targets.iter().map(|&q| n_qubits - 1 - q).collect();
    let target_mask: usize = shifts.iter().map(|&s| 1 << s).sum();
    let local = |idx: usize| shifts.iter().fold(0, |acc, &s| (acc << 1) | ((idx >> s) & 1));
    let scatter: Vec<usize> = (0..local_dim)
        .map(|j| {
            shifts
                .iter()
                .enumerate()
                .map(|(b, &s)| ((j >> (targets.len() - 1 - b)) & 1) << s)
                .sum()
        })
        .collect();
    let loc: Vec<usize> = (0..dim).map(local).collect();

    // left = K·M
    let mut left = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        let base = r & !target_mask;
        for (j, &sj) in scatter.iter().enumerate() {
            let kv = k[(loc[r], j)];
            if kv == ZERO {
                continue;
            }
            let src = base | sj;
            for c in 0..dim {
                left[(r, c)] += kv * m[(src, c)];
            }
        }
    }
    // out = left·K†
    let mut out = ComplexMatrix::zeros(dim);
    for c in 0..dim {
        let base = c & !target_mask;
        for (j, &sj) in scatter.iter().enumerate() {
            let kv = k[(loc[c], j)].conj();
            if kv == ZERO {
                continue;
            }
            let src = base | sj;
            for r in 0..dim {
                out[(r, c)] += left[(r, src)] * kv;
            }
        }
    }
    Ok(out)
}

pub(crate) fn check_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in targets.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::Dimension(format!("qubit {q} out of range for {n_qubits} qubit(s)")));
        }
        if targets[..i].contains(&q) {
            return Err(Error::InvalidArgument(format!("target qubit {q} repeated")));
        }
    }
    Ok(())
}
