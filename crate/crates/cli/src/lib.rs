//! The `ladderlab` command line: synthesize ladder-circuit transforms, verify the Fourier
//! recursions, analyze sparsity and norms, render heatmaps, run FFTs and time the
//! streamed/dense/FFT paths.
//!
//! Exit codes: 0 success, 1 verification failed, 2 input error, 3 resource cap.

pub mod commands;
pub mod formats;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::run;

#[derive(Debug, Parser)]
#[command(
    name = "ladderlab",
    version,
    about = "Ladder-circuit transform laboratory"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Realize the dense unitary of a ladder circuit and write it as a matrix file.
    Synth {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        bit_reversal: bool,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render one part of a matrix file as an 8-bit grayscale PGM.
    Render {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PartArg::Real)]
        part: PartArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sparsity and norm report for a matrix file.
    Analyze {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        zero_tol: f64,
    },
    /// Check one of the Fourier identities and print its residual.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
        /// Gate set for the `recursion` target (defaults to the QFT gate set).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Radix-2 FFT of a signal file.
    Fft {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t = NormArg::None)]
        norm: NormArg,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Median timings of gate-streamed application, dense matvec and (for the QFT gate
    /// set) the FFT.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        qubits: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        bit_reversal: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Real,
    Imag,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Qft,
    Recursion,
    Amatrix,
    Fft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    None,
    Unitary,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<ladder_core::Error> for CliError {
    fn from(e: ladder_core::Error) -> Self {
        match e {
            ladder_core::Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<formats::FormatError> for CliError {
    fn from(e: formats::FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// What a command produced: bytes for standard output and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: Vec<u8>,
    pub exit_code: i32,
}

impl Output {
    fn ok(stdout: impl Into<Vec<u8>>) -> Self {
        Self {
            stdout: stdout.into(),
            exit_code: 0,
        }
    }
}
