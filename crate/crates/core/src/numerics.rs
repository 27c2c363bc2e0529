//! Dense complex linear algebra.
//!
//! Matrices are square, row-major, and indexed by basis labels with qubit 1 as the most
//! significant bit: label `k = k1·2^(n-1) + … + kn·2^0`. Kronecker products put the left
//! operand's index in the high-order position so that `A ⊗ B` places `A` on the upper
//! qubits.

use std::fmt;

use crate::{Error, Execution, Result};

pub type Complex = num_complex::Complex64;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

/// Absolute tolerances used across comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Acceptance threshold for `max_abs_diff`-style residuals.
    pub abs_tol: f64,
    /// Magnitudes at or below this count as structural zeros.
    pub zero_tol: f64,
}

impl Tolerance {
    pub fn new(abs_tol: f64, zero_tol: f64) -> Result<Self> {
        for t in [abs_tol, zero_tol] {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        Ok(Self { abs_tol, zero_tol })
    }

    pub fn with_zero_tol(self, zero_tol: f64) -> Result<Self> {
        Self::new(self.abs_tol, zero_tol)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            zero_tol: 1e-12,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{})", self.dim, self.dim)?;
        if self.dim <= 8 {
            for r in 0..self.dim {
                let row: Vec<String> = self
                    .row(r)
                    .iter()
                    .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries, rejecting bad lengths and non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(
                0,
                "matrix dimension must be positive",
            ));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { dim, data })
    }

    /// Row-major construction from nested rows; convenient for small literals.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Panics if `dim == 0`; entries produced by `f` must be finite.
    pub(crate) fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex) -> Self {
        assert!(dim > 0);
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<Complex>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn diagonal(entries: &[Complex]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension(
                0,
                "matrix dimension must be positive",
            ));
        }
        let m = Self::from_fn(entries.len(), |r, c| if r == c { entries[r] } else { ZERO });
        Self::from_row_major(m.dim, m.data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.data[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Complex] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.data
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn is_diagonal(&self, zero_tol: f64) -> bool {
        (0..self.dim).all(|r| {
            self.row(r)
                .iter()
                .enumerate()
                .all(|(c, z)| r == c || z.norm() <= zero_tol)
        })
    }

    /// Standard matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, Execution::default())
    }

    pub fn mul_with(&self, other: &Self, exec: Execution) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        exec.for_each_chunk(&mut out, n, |r, out_row| {
            // i-k-j order keeps `other` accesses contiguous.
            for (k, a) in self.row(r).iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        });
        Ok(Self::from_raw(n, out))
    }

    /// Kronecker product with `self` as the most significant block.
    pub fn tensor(&self, other: &Self) -> Self {
        let (p, q) = (self.dim, other.dim);
        Self::from_fn(p * q, |r, c| {
            self.get(r / q, c / q) * other.get(r % q, c % q)
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_dims(self.dim, v.len())?;
        let amplitudes = (0..self.dim)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v.amplitudes())
                    .fold(ZERO, |acc, (a, x)| acc + a * x)
            })
            .collect();
        Ok(StateVector {
            n_qubits: v.n_qubits,
            amplitudes,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim, other.dim)?;
        Ok(max_abs_diff_slices(&self.data, &other.data))
    }

    /// `max |(U U†) − I|` over all entries.
    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual_with(Execution::default())
    }

    pub fn unitarity_residual_with(&self, exec: Execution) -> f64 {
        let n = self.dim;
        // (U U†)_{rc} = Σ_k U_{rk} conj(U_{ck}): a row-by-row inner product.
        let per_row = exec.map_range(n, |r| {
            let a = self.row(r);
            (0..n)
                .map(|c| {
                    let dot = a
                        .iter()
                        .zip(self.row(c))
                        .fold(ZERO, |acc, (x, y)| acc + x * y.conj());
                    let target = if r == c { ONE } else { ZERO };
                    (dot - target).norm()
                })
                .fold(0.0, f64::max)
        });
        per_row.into_iter().fold(0.0, f64::max)
    }
}

pub fn mat_mul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.mul(b)
}

pub fn mat_tensor(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.tensor(b)
}

pub fn mat_adjoint(a: &DenseMatrix) -> DenseMatrix {
    a.adjoint()
}

pub fn apply_to_vector(a: &DenseMatrix, v: &StateVector) -> Result<StateVector> {
    a.apply(v)
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    a.max_abs_diff(b)
}

pub(crate) fn max_abs_diff_slices(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Amplitudes of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<Complex>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidDimension(
                len,
                "state length must be a power of two",
            ));
        }
        if let Some(i) = amplitudes.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(n_qubits: usize, k: usize) -> Result<Self> {
        let len = 1usize << n_qubits;
        if k >= len {
            return Err(Error::InvalidArgument(format!(
                "basis index {k} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; len];
        amplitudes[k] = ONE;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.len(), other.len())?;
        Ok(max_abs_diff_slices(&self.amplitudes, &other.amplitudes))
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn hadamard() -> DenseMatrix {
        DenseMatrix::from_real_rows(&[
            vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ])
        .unwrap()
    }

    fn triple_loop(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        let n = a.dim();
        let mut out = DenseMatrix::zeros(n);
        for r in 0..n {
            for col in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += a.get(r, k) * b.get(k, col);
                }
                out.set(r, col, acc);
            }
        }
        out
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(DenseMatrix::from_row_major(0, vec![]).is_err());
        assert!(DenseMatrix::from_row_major(2, vec![ONE; 3]).is_err());
        assert_eq!(
            DenseMatrix::from_row_major(1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(0))
        );
        assert!(StateVector::from_amplitudes(vec![ONE; 3]).is_err());
        assert!(StateVector::from_amplitudes(vec![c(0.0, f64::INFINITY), ONE]).is_err());
        assert!(Tolerance::new(-1.0, 0.0).is_err());
        assert!(Tolerance::new(0.0, f64::NAN).is_err());
        let t = Tolerance::default();
        assert_eq!((t.abs_tol, t.zero_tol), (1e-10, 1e-12));
    }

    #[test]
    fn mat_mul_examples() {
        let h = hadamard();
        assert_eq!(mat_mul(&DenseMatrix::identity(2), &h).unwrap(), h);
        let hh = mat_mul(&h, &h).unwrap();
        assert!(hh.max_abs_diff(&DenseMatrix::identity(2)).unwrap() < 1e-15);
        assert!(mat_mul(&h, &DenseMatrix::identity(4)).is_err());
    }

    #[test]
    fn mat_mul_matches_triple_loop() {
        let mut rng = rng(7);
        let a = random_matrix(8, &mut rng);
        let b = random_matrix(8, &mut rng);
        let fast = mat_mul(&a, &b).unwrap();
        assert!(fast.max_abs_diff(&triple_loop(&a, &b)).unwrap() < 1e-13);
        let seq = a.mul_with(&b, Execution::Sequential).unwrap();
        assert_eq!(seq, fast);
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(
            mat_tensor(&DenseMatrix::identity(2), &DenseMatrix::identity(2)),
            DenseMatrix::identity(4)
        );
        let a = DenseMatrix::diagonal(&[ONE, c(0.0, 1.0)]).unwrap();
        let b = DenseMatrix::diagonal(&[ONE, c(-1.0, 0.0)]).unwrap();
        let expected =
            DenseMatrix::diagonal(&[ONE, c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        assert_eq!(mat_tensor(&a, &b), expected);

        // H on the high qubit spreads |00⟩ onto |00⟩ and |10⟩.
        let hi = mat_tensor(&hadamard(), &DenseMatrix::identity(2));
        let col0 = hi.apply(&StateVector::basis(2, 0).unwrap()).unwrap();
        let expected = [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0];
        for (z, e) in col0.amplitudes().iter().zip(expected) {
            assert!((z - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn adjoint_examples() {
        let d = DenseMatrix::diagonal(&[ONE, c(0.0, 1.0)]).unwrap();
        assert_eq!(
            mat_adjoint(&d),
            DenseMatrix::diagonal(&[ONE, c(0.0, -1.0)]).unwrap()
        );
        assert_eq!(mat_adjoint(&hadamard()), hadamard());
        let m = random_matrix(8, &mut rng(3));
        assert_eq!(mat_adjoint(&mat_adjoint(&m)), m);
    }

    #[test]
    fn apply_examples() {
        let v = random_state(3, &mut rng(1));
        assert_eq!(apply_to_vector(&DenseMatrix::identity(8), &v).unwrap(), v);
        let out = apply_to_vector(&hadamard(), &StateVector::basis(1, 0).unwrap()).unwrap();
        assert_eq!(out.amplitudes(), &[c(FRAC_1_SQRT_2, 0.0); 2]);
        assert!(apply_to_vector(&hadamard(), &v).is_err());

        let mut rng = rng(11);
        let m = random_matrix(16, &mut rng);
        let v = random_state(4, &mut rng);
        let got = apply_to_vector(&m, &v).unwrap();
        let mut worst: f64 = 0.0;
        for r in 0..16 {
            let mut acc = ZERO;
            for k in 0..16 {
                acc += m.get(r, k) * v.amplitudes()[k];
            }
            worst = worst.max((acc - got.amplitudes()[r]).norm());
        }
        assert!(worst < 1e-13);
    }

    #[test]
    fn max_abs_diff_examples() {
        let m = random_matrix(4, &mut rng(5));
        assert_eq!(max_abs_diff(&m, &m).unwrap(), 0.0);
        let z = DenseMatrix::diagonal(&[ONE, c(-1.0, 0.0)]).unwrap();
        assert_eq!(max_abs_diff(&DenseMatrix::identity(2), &z).unwrap(), 2.0);
        let h = hadamard();
        let mut p = h.clone();
        p.set(0, 0, h.get(0, 0) + c(1e-8, 0.0));
        assert!((max_abs_diff(&h, &p).unwrap() - 1e-8).abs() < 1e-16);
        assert!(max_abs_diff(&h, &DenseMatrix::identity(4)).is_err());
    }

    #[test]
    fn unitarity_residual_paths_agree() {
        let h = hadamard();
        let u = h
            .tensor(&h)
            .tensor(&DenseMatrix::diagonal(&[ONE, c(0.0, 1.0)]).unwrap());
        let par = u.unitarity_residual_with(Execution::Parallel);
        assert_eq!(par, u.unitarity_residual_with(Execution::Sequential));
        assert!(par < 1e-15);
        assert!(DenseMatrix::zeros(2).unitarity_residual() == 1.0);
    }

    // Gaussian-integer entries keep every product exact, so associativity can be
    // checked bit-for-bit; floating complex multiplication itself is not associative.
    fn small_matrix(max_dim: usize) -> impl Strategy<Value = DenseMatrix> {
        (1..=max_dim).prop_flat_map(|d| {
            prop::collection::vec((-4i32..=4, -4i32..=4), d * d).prop_map(move |v| {
                let data = v
                    .into_iter()
                    .map(|(re, im)| c(re as f64, im as f64))
                    .collect();
                DenseMatrix::from_row_major(d, data).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn tensor_is_associative(a in small_matrix(2), b in small_matrix(4), cm in small_matrix(2)) {
            let left = a.tensor(&b).tensor(&cm);
            let right = a.tensor(&b.tensor(&cm));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn matvec_composes(n in 0usize..=6, seed in any::<u64>()) {
            let mut rng = rng(seed);
            let dim = 1 << n;
            // Scaled so entries of every product stay O(1).
            let s = Complex::new(1.0 / (dim as f64).sqrt(), 0.0);
            let a = random_matrix(dim, &mut rng).scale(s);
            let b = random_matrix(dim, &mut rng).scale(s);
            let v = random_state(n, &mut rng);
            let lhs = a.mul(&b).unwrap().apply(&v).unwrap();
            let rhs = a.apply(&b.apply(&v).unwrap()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
        }
    }
}
