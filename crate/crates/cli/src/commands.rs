use std::fs;
use std::path::Path;

use ladder_core::analysis::{bench_apply, norm_report, sparsity_report};
use ladder_core::circuit::{
    build_recursive_circuit, check_recursion_identity, realize_unitary, MAX_DENSE_QUBITS,
};
use ladder_core::gates::GateSetConfig;
use ladder_core::report::KeyValueReport;
use ladder_core::transforms::{
    a_matrix_tensor, dft_matrix, dft_recursion_build, fft_radix2, qft_reference_matrix,
    twiddle_diagonal, DftConvention, ExponentSign, Normalization, Signal,
};
use ladder_core::{DenseMatrix, StateVector, Tolerance};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::formats::{self, Part};
use crate::{CliError, Command, NormArg, Output, PartArg, SignArg, VerifyTarget};

/// Largest FFT size checked against the dense DFT by `verify fft`.
pub const MAX_VERIFY_FFT_SIZE: usize = 1 << 14;

pub const QFT_TOL: f64 = 1e-10;
pub const LADDER_RECURSION_TOL: f64 = 1e-10;
pub const DFT_RECURSION_TOL: f64 = 1e-11;
pub const AMATRIX_TOL: f64 = 1e-13;
/// Per-sample factor; the FFT bound is `FFT_TOL_PER_N · N`.
pub const FFT_TOL_PER_N: f64 = 1e-9;

pub fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Synth {
            config,
            qubits,
            bit_reversal,
            out,
        } => synth(config, *qubits, *bit_reversal, out.as_deref()),
        Command::Render { input, part, out } => render(input, *part, out),
        Command::Analyze { input, zero_tol } => analyze(input, *zero_tol),
        Command::Verify {
            target,
            qubits,
            size,
            config,
        } => verify(*target, *qubits, *size, config.as_deref()),
        Command::Fft {
            input,
            sign,
            norm,
            out,
        } => fft(input, *sign, *norm, out.as_deref()),
        Command::Bench {
            config,
            qubits,
            trials,
            bit_reversal,
        } => bench(config, *qubits, *trials, *bit_reversal),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_config(path: &Path) -> Result<GateSetConfig, CliError> {
    GateSetConfig::parse(&read_text(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn check_cap(n_qubits: usize) -> Result<(), CliError> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(CliError::Cap(format!(
            "{n_qubits} qubits exceeds the dense realization cap of {MAX_DENSE_QUBITS}"
        )));
    }
    Ok(())
}

fn emit(out: Option<&Path>, bytes: Vec<u8>) -> Result<Output, CliError> {
    match out {
        Some(path) => {
            write_bytes(path, &bytes)?;
            Ok(Output::ok(Vec::new()))
        }
        None => Ok(Output::ok(bytes)),
    }
}

pub fn synth(
    config: &Path,
    qubits: usize,
    bit_reversal: bool,
    out: Option<&Path>,
) -> Result<Output, CliError> {
    let cfg = load_config(config)?;
    check_cap(qubits)?;
    let circuit = build_recursive_circuit(&cfg, qubits, bit_reversal)?;
    let u = realize_unitary(&circuit)?;
    emit(out, formats::write_matrix(&u).into_bytes())
}

fn load_matrix(path: &Path) -> Result<DenseMatrix, CliError> {
    formats::read_matrix(&read_text(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn render(input: &Path, part: PartArg, out: &Path) -> Result<Output, CliError> {
    let m = load_matrix(input)?;
    let part = match part {
        PartArg::Real => Part::Real,
        PartArg::Imag => Part::Imag,
        PartArg::Abs => Part::Abs,
    };
    write_bytes(out, &formats::write_pgm(&m, part))?;
    Ok(Output::ok(Vec::new()))
}

pub fn analyze(input: &Path, zero_tol: f64) -> Result<Output, CliError> {
    let tol = Tolerance::default().with_zero_tol(zero_tol)?;
    let m = load_matrix(input)?;
    let sparsity = sparsity_report(&m, tol);
    let mut report = sparsity.to_report();
    report.extend(&norm_report(&m).to_report());
    if let Some(note) = sparsity.non_sparse_discrepancy() {
        report.text("discrepancy", note);
    }
    Ok(Output::ok(report.to_string()))
}

fn verdict(report: &mut KeyValueReport, passed: bool) -> Output {
    report.text("status", if passed { "pass" } else { "fail" });
    Output {
        stdout: report.to_string().into_bytes(),
        exit_code: if passed { 0 } else { 1 },
    }
}

/// Resolves `--qubits` or a power-of-two `--size` to a qubit count.
fn qubit_count(qubits: Option<usize>, size: Option<usize>) -> Result<usize, CliError> {
    match (qubits, size) {
        (Some(n), None) => Ok(n),
        (None, Some(s)) if s.is_power_of_two() => Ok(s.trailing_zeros() as usize),
        (None, Some(s)) => Err(CliError::Input(format!("--size {s} is not a power of two"))),
        (Some(_), Some(_)) => Err(CliError::Input("give --qubits or --size, not both".into())),
        (None, None) => Err(CliError::Input("--qubits or --size is required".into())),
    }
}

pub fn verify(
    target: VerifyTarget,
    qubits: Option<usize>,
    size: Option<usize>,
    config: Option<&Path>,
) -> Result<Output, CliError> {
    let n = qubit_count(qubits, size)?;
    let mut report = KeyValueReport::new();
    match target {
        VerifyTarget::Qft => {
            if n == 0 {
                return Err(CliError::Input("qft needs at least one qubit".into()));
            }
            check_cap(n)?;
            let circuit = build_recursive_circuit(&GateSetConfig::qft(), n, true)?;
            let u = realize_unitary(&circuit)?;
            let residual = u.max_abs_diff(&qft_reference_matrix(n)?)?;
            report
                .text("target", "qft")
                .text("qubits", n)
                .number("tolerance", QFT_TOL)
                .number("residual", residual)
                .number("unitarity_residual", u.unitarity_residual());
            Ok(verdict(&mut report, residual <= QFT_TOL))
        }
        VerifyTarget::Recursion => {
            if n < 2 {
                return Err(CliError::Input(
                    "recursion needs at least two qubits".into(),
                ));
            }
            check_cap(n)?;
            let cfg = match config {
                Some(p) => load_config(p)?,
                None => GateSetConfig::qft(),
            };
            let ladder = check_recursion_identity(&cfg, n)?;
            let size = 1usize << n;
            let dft = dft_recursion_build(size)?
                .max_abs_diff(&dft_matrix(size, DftConvention::UNITARY)?)?;
            report
                .text("target", "recursion")
                .text("qubits", n)
                .text("size", size)
                .number("ladder_tolerance", LADDER_RECURSION_TOL)
                .number("ladder_residual", ladder)
                .number("dft_tolerance", DFT_RECURSION_TOL)
                .number("dft_residual", dft);
            Ok(verdict(
                &mut report,
                ladder <= LADDER_RECURSION_TOL && dft <= DFT_RECURSION_TOL,
            ))
        }
        VerifyTarget::Amatrix => {
            if n < 2 {
                return Err(CliError::Input("amatrix needs at least two qubits".into()));
            }
            check_cap(n)?;
            let residual = a_matrix_tensor(n, DftConvention::FORWARD)?
                .max_abs_diff(&twiddle_diagonal(1 << n, DftConvention::FORWARD)?)?;
            report
                .text("target", "amatrix")
                .text("qubits", n)
                .number("tolerance", AMATRIX_TOL)
                .number("residual", residual);
            Ok(verdict(&mut report, residual <= AMATRIX_TOL))
        }
        VerifyTarget::Fft => {
            let size = 1usize
                .checked_shl(n as u32)
                .filter(|&s| s <= MAX_VERIFY_FFT_SIZE)
                .ok_or_else(|| CliError::Cap(format!("fft size exceeds {MAX_VERIFY_FFT_SIZE}")))?;
            let residual = fft_vs_dense(size, 5)?;
            let tol = FFT_TOL_PER_N * size as f64;
            report
                .text("target", "fft")
                .text("size", size)
                .number("tolerance", tol)
                .number("residual", residual);
            Ok(verdict(&mut report, residual <= tol))
        }
    }
}

/// Largest deviation of the FFT from dense DFT matvec over `count` seeded signals.
fn fft_vs_dense(size: usize, count: usize) -> Result<f64, CliError> {
    let dense = dft_matrix(size, DftConvention::FORWARD)?;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut next = move || rng.gen_range(-1.0..1.0);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let samples: Vec<_> = (0..size)
            .map(|_| ladder_core::Complex::new(next(), next()))
            .collect();
        let fast = fft_radix2(&Signal::new(samples.clone())?, DftConvention::FORWARD)?;
        let slow = dense.apply(&StateVector::from_amplitudes(samples)?)?;
        let diff = fast
            .samples()
            .iter()
            .zip(slow.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(diff);
    }
    Ok(worst)
}

pub fn fft(
    input: &Path,
    sign: SignArg,
    norm: NormArg,
    out: Option<&Path>,
) -> Result<Output, CliError> {
    let samples = formats::read_signal(&read_text(input)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    let conv = DftConvention::new(
        match sign {
            SignArg::Plus => ExponentSign::Plus,
            SignArg::Minus => ExponentSign::Minus,
        },
        match norm {
            NormArg::None => Normalization::None,
            NormArg::Unitary => Normalization::Unitary,
        },
    );
    let transformed = fft_radix2(&Signal::new(samples)?, conv)?;
    emit(
        out,
        formats::write_signal(transformed.samples()).into_bytes(),
    )
}

pub fn bench(
    config: &Path,
    qubits: usize,
    trials: usize,
    bit_reversal: bool,
) -> Result<Output, CliError> {
    let cfg = load_config(config)?;
    if trials == 0 {
        return Err(CliError::Input("--trials must be positive".into()));
    }
    check_cap(qubits)?;
    let report = bench_apply(&cfg, qubits, trials, bit_reversal)?;
    Ok(Output::ok(report.to_report().to_string()))
}
