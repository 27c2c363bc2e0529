//! Reference Fourier transforms: dense DFT, recursive radix-2 FFT, twiddle diagonals and
//! the block recursion `F_N = (1/√2)·[[F, A·F], [F, −A·F]]·P_eo`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::gates::unit_phase;
use crate::numerics::{Complex, DenseMatrix, ZERO};
use crate::{Error, Execution, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentSign {
    Plus,
    Minus,
}

impl ExponentSign {
    fn as_i64(self) -> i64 {
        match self {
            ExponentSign::Plus => 1,
            ExponentSign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            ExponentSign::Plus => ExponentSign::Minus,
            ExponentSign::Minus => ExponentSign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    None,
    /// `1/√N` per application.
    Unitary,
}

/// Sign of the exponent and normalization of a DFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DftConvention {
    pub sign: ExponentSign,
    pub normalization: Normalization,
}

impl DftConvention {
    /// `X_k = Σ e^{−2πi·km/N} x_m`, unnormalized.
    pub const FORWARD: Self = Self {
        sign: ExponentSign::Minus,
        normalization: Normalization::None,
    };
    /// Unitary, negative exponent.
    pub const UNITARY: Self = Self {
        sign: ExponentSign::Minus,
        normalization: Normalization::Unitary,
    };
    /// Unitary, positive exponent: the QFT's classical matrix.
    pub const QFT: Self = Self {
        sign: ExponentSign::Plus,
        normalization: Normalization::Unitary,
    };

    pub fn new(sign: ExponentSign, normalization: Normalization) -> Self {
        Self {
            sign,
            normalization,
        }
    }

    /// The convention that undoes this one.
    pub fn inverse(self) -> Self {
        Self {
            sign: self.sign.flipped(),
            normalization: self.normalization,
        }
    }

    fn scale(self, n: usize) -> f64 {
        match self.normalization {
            Normalization::None => 1.0,
            Normalization::Unitary => (1.0 / n as f64).sqrt(),
        }
    }
}

/// A sampled signal `{x_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal(Vec<Complex>);

impl Signal {
    pub fn new(samples: Vec<Complex>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidDimension(
                0,
                "a signal needs at least one sample",
            ));
        }
        if let Some(i) = samples.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(samples))
    }

    pub fn from_real(samples: &[f64]) -> Result<Self> {
        Self::new(samples.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn samples(&self) -> &[Complex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_samples(self) -> Vec<Complex> {
        self.0
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(crate::numerics::max_abs_diff_slices(&self.0, &other.0))
    }
}

/// Index permutation given as a source order: output position `t` takes input `source[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn source_order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(t, &s)| t == s)
    }

    pub fn apply<T: Copy>(&self, input: &[T]) -> Vec<T> {
        self.0.iter().map(|&s| input[s]).collect()
    }
}

fn require_power_of_two(n: usize) -> Result<()> {
    if n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidDimension(n, "size must be a power of two"))
    }
}

fn require_even(n: usize) -> Result<()> {
    if n >= 2 && n.is_multiple_of(2) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(n, "size must be even"))
    }
}

/// Entry `(k, m) = norm·e^{sign·2πi·km/N}`.
pub fn dft_matrix(n: usize, conv: DftConvention) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            0,
            "matrix dimension must be positive",
        ));
    }
    let scale = conv.scale(n);
    let sign = conv.sign.as_i64();
    let roots: Vec<Complex> = (0..n as i64)
        .map(|p| unit_phase(sign * p, n as u64) * scale)
        .collect();
    Ok(DenseMatrix::from_fn(n, |k, m| roots[(k * m) % n]))
}

/// Recursive even/odd radix-2 FFT: `X_k = E_k + w^k·O_k`, `X_{k+N/2} = E_k − w^k·O_k`.
pub fn fft_radix2(signal: &Signal, conv: DftConvention) -> Result<Signal> {
    let n = signal.len();
    require_power_of_two(n)?;
    let sign = conv.sign.as_i64();
    let twiddles: Vec<Complex> = (0..n / 2)
        .map(|k| unit_phase(sign * k as i64, n as u64))
        .collect();
    let mut out = vec![ZERO; n];
    fft_rec(signal.samples(), 1, &twiddles, &mut out);
    let scale = conv.scale(n);
    if scale != 1.0 {
        out.iter_mut().for_each(|z| *z *= scale);
    }
    Signal::new(out)
}

/// Transforms `input[0], input[stride], …` into `out`. `twiddles` holds the length-N
/// roots; at sub-size `m` the root `w_m^k` is `twiddles[k·N/m]`.
fn fft_rec(input: &[Complex], stride: usize, twiddles: &[Complex], out: &mut [Complex]) {
    let m = out.len();
    if m == 1 {
        out[0] = input[0];
        return;
    }
    let half = m / 2;
    let (evens, odds) = out.split_at_mut(half);
    fft_rec(input, stride * 2, twiddles, evens);
    fft_rec(&input[stride..], stride * 2, twiddles, odds);
    let step = 2 * twiddles.len() / m;
    for k in 0..half {
        let e = evens[k];
        let o = twiddles[k * step] * odds[k];
        evens[k] = e + o;
        odds[k] = e - o;
    }
}

/// FFTs of many signals, evaluated per signal.
pub fn fft_batch(signals: &[Signal], conv: DftConvention, exec: Execution) -> Result<Vec<Signal>> {
    exec.map_range(signals.len(), |i| fft_radix2(&signals[i], conv))
        .into_iter()
        .collect()
}

/// `diag(1, w, …, w^{N/2−1})`, `w = e^{sign·2πi/N}`.
pub fn twiddle_diagonal(n: usize, conv: DftConvention) -> Result<DenseMatrix> {
    require_even(n)?;
    let sign = conv.sign.as_i64();
    let entries: Vec<Complex> = (0..n / 2)
        .map(|k| unit_phase(sign * k as i64, n as u64))
        .collect();
    DenseMatrix::diagonal(&entries)
}

/// `⊗_{k=2..n} diag(1, e^{sign·2πi/2^k})`, with the `k = 2` factor most significant.
pub fn a_matrix_tensor(n_qubits: usize, conv: DftConvention) -> Result<DenseMatrix> {
    if n_qubits < 2 {
        return Err(Error::InvalidDimension(
            n_qubits,
            "needs at least two qubits",
        ));
    }
    let sign = conv.sign.as_i64();
    let factor =
        |k: usize| DenseMatrix::diagonal(&[Complex::new(1.0, 0.0), unit_phase(sign, 1u64 << k)]);
    let mut acc = factor(2)?;
    for k in 3..=n_qubits {
        acc = acc.tensor(&factor(k)?);
    }
    Ok(acc)
}

/// Even indices (ascending) followed by odd indices (ascending).
pub fn even_odd_shuffle(n: usize) -> Result<Permutation> {
    require_even(n)?;
    Ok(Permutation(
        (0..n).step_by(2).chain((1..n).step_by(2)).collect(),
    ))
}

/// Index with bits `b₁…bₙ` goes to the index with bits `bₙ…b₁`.
pub fn bit_reversal_perm(n_qubits: usize) -> Result<Permutation> {
    if n_qubits == 0 || n_qubits >= usize::BITS as usize {
        return Err(Error::InvalidDimension(
            n_qubits,
            "qubit count out of range",
        ));
    }
    let shift = usize::BITS as usize - n_qubits;
    Ok(Permutation(
        (0..1usize << n_qubits)
            .map(|k| k.reverse_bits() >> shift)
            .collect(),
    ))
}

/// Unitary negative-exponent DFT built from the block recursion down to `F₂`.
///
/// The block form acts on input reordered evens-first, so each level composes it with
/// [`even_odd_shuffle`] on the column side.
pub fn dft_recursion_build(n: usize) -> Result<DenseMatrix> {
    require_power_of_two(n)?;
    if n < 2 {
        return Err(Error::InvalidDimension(n, "the recursion starts at N = 2"));
    }
    Ok(recursion_level(n))
}

fn recursion_level(n: usize) -> DenseMatrix {
    let r = Complex::new(FRAC_1_SQRT_2, 0.0);
    if n == 2 {
        return DenseMatrix::from_raw(2, vec![r, r, r, -r]);
    }
    let half = n / 2;
    let f = recursion_level(half);
    let twiddles: Vec<Complex> = (0..half)
        .map(|k| unit_phase(-(k as i64), n as u64))
        .collect();
    let src = even_odd_shuffle(n).expect("n is even");
    let mut out = DenseMatrix::zeros(n);
    for (t, &col) in src.source_order().iter().enumerate() {
        // column t of the block matrix lands at input index col
        let (block_col, odd) = (t % half, t >= half);
        for (row, &w) in twiddles.iter().enumerate() {
            let base = f.get(row, block_col);
            if odd {
                let a = w * base;
                out.set(row, col, r * a);
                out.set(row + half, col, -r * a);
            } else {
                out.set(row, col, r * base);
                out.set(row + half, col, r * base);
            }
        }
    }
    out
}

/// Entry `(m, k) = 2^{−n/2}·e^{+2πi·km/2^n}`.
pub fn qft_reference_matrix(n_qubits: usize) -> Result<DenseMatrix> {
    if n_qubits == 0 || n_qubits > 30 {
        return Err(Error::InvalidDimension(
            n_qubits,
            "qubit count out of range",
        ));
    }
    dft_matrix(1 << n_qubits, DftConvention::QFT)
}
