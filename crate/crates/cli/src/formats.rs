//! Text matrix files, signal files and 8-bit grayscale heatmaps.
//!
//! Matrix file: a header line `N <dim>` followed by `dim` rows of `dim` space-separated
//! `re,im` pairs. Signal file: one `re,im` pair per line. Numbers use the shortest
//! decimal that reads back to the same `f64`.

use std::fmt::Write as _;

use ladder_core::report::format_number;
use ladder_core::{Complex, DenseMatrix};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

fn write_pair(out: &mut String, z: Complex) {
    let _ = write!(out, "{},{}", format_number(z.re), format_number(z.im));
}

fn parse_pair(token: &str, line: usize) -> Result<Complex, FormatError> {
    let (re, im) = token
        .split_once(',')
        .ok_or_else(|| err(line, format!("expected `re,im`, found {token:?}")))?;
    let parse = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| err(line, format!("invalid number {s:?}")))
    };
    Ok(Complex::new(parse(re)?, parse(im)?))
}

pub fn write_matrix(m: &DenseMatrix) -> String {
    let n = m.dim();
    let mut out = String::with_capacity(n * n * 24 + 16);
    let _ = writeln!(out, "N {n}");
    for r in 0..n {
        for (c, z) in m.row(r).iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            write_pair(&mut out, *z);
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix(text: &str) -> Result<DenseMatrix, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty matrix file"))?;
    let dim: usize = header
        .strip_prefix("N ")
        .and_then(|d| d.trim().parse().ok())
        .filter(|&d| d > 0)
        .ok_or_else(|| err(1, "expected header `N <dim>`"))?;

    let mut data = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        let (no, line) = lines
            .next()
            .ok_or_else(|| err(row + 2, format!("expected {dim} rows, found {row}")))?;
        let before = data.len();
        for token in line.split(' ') {
            data.push(parse_pair(token, no)?);
        }
        if data.len() - before != dim {
            return Err(err(
                no,
                format!("expected {dim} entries, found {}", data.len() - before),
            ));
        }
    }
    if let Some((no, line)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(no, format!("unexpected trailing content {line:?}")));
    }
    DenseMatrix::from_row_major(dim, data).map_err(|e| err(1, e.to_string()))
}

pub fn write_signal(samples: &[Complex]) -> String {
    let mut out = String::with_capacity(samples.len() * 24);
    for z in samples {
        write_pair(&mut out, *z);
        out.push('\n');
    }
    out
}

pub fn read_signal(text: &str) -> Result<Vec<Complex>, FormatError> {
    let samples = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_pair(l.trim(), i + 1))
        .collect::<Result<Vec<_>, _>>()?;
    if samples.is_empty() {
        return Err(err(1, "empty signal file"));
    }
    Ok(samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Real,
    Imag,
    Abs,
}

impl Part {
    fn select(self, z: Complex) -> f64 {
        match self {
            Part::Real => z.re,
            Part::Imag => z.im,
            Part::Abs => z.norm(),
        }
    }
}

/// 8-bit pixels, min/max normalized per image; a flat image is all zeros.
pub fn heatmap_pixels(m: &DenseMatrix, part: Part) -> Vec<u8> {
    let values: Vec<f64> = m.as_slice().iter().map(|&z| part.select(z)).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return vec![0; values.len()];
    }
    values
        .iter()
        .map(|v| {
            ((v - lo) / (hi - lo) * 255.0 + 0.5)
                .floor()
                .clamp(0.0, 255.0) as u8
        })
        .collect()
}

/// Binary PGM (`P5`, maxval 255) of `heatmap_pixels`.
pub fn write_pgm(m: &DenseMatrix, part: Part) -> Vec<u8> {
    let n = m.dim();
    let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
    out.extend(heatmap_pixels(m, part));
    out
}
