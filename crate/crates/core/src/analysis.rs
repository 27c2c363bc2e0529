//! Measurements on realized transforms: sparsity, global-phase equivalence, gate-count
//! audits, matrix norms and timing.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use rand::{Rng, SeedableRng};

use crate::circuit::{build_recursive_circuit, realize_unitary, MAX_DENSE_QUBITS};
use crate::gates::{GateSetConfig, GATE_TABLE};
use crate::numerics::{Complex, DenseMatrix, StateVector, Tolerance};
use crate::report::KeyValueReport;
use crate::transforms::{bit_reversal_perm, fft_radix2, DftConvention, Signal};
use crate::{Error, Execution, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsityVerdict {
    FullyDense,
    Dense,
    Sparse,
    GeneralizedPermutation,
    Diagonal,
}

impl SparsityVerdict {
    /// Whether the verdict counts as non-sparse.
    pub fn is_non_sparse(self) -> bool {
        matches!(self, SparsityVerdict::FullyDense | SparsityVerdict::Dense)
    }
}

impl fmt::Display for SparsityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SparsityVerdict::FullyDense => "fully-dense",
            SparsityVerdict::Dense => "dense",
            SparsityVerdict::Sparse => "sparse",
            SparsityVerdict::GeneralizedPermutation => "generalized-permutation",
            SparsityVerdict::Diagonal => "diagonal",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsityReport {
    pub dim: usize,
    pub nnz: usize,
    pub density: f64,
    pub min_nonzero_magnitude: Option<f64>,
    pub max_magnitude: f64,
    pub zero_tol: f64,
    pub verdict: SparsityVerdict,
}

struct RowScan {
    nnz: usize,
    min: f64,
    max: f64,
    off_diagonal: bool,
    only_col: Option<usize>,
}

pub fn sparsity_report(m: &DenseMatrix, tol: Tolerance) -> SparsityReport {
    sparsity_report_with(m, tol, Execution::default())
}

pub fn sparsity_report_with(m: &DenseMatrix, tol: Tolerance, exec: Execution) -> SparsityReport {
    let n = m.dim();
    let rows = exec.map_range(n, |r| {
        let mut scan = RowScan {
            nnz: 0,
            min: f64::INFINITY,
            max: 0.0,
            off_diagonal: false,
            only_col: None,
        };
        for (c, z) in m.row(r).iter().enumerate() {
            let a = z.norm();
            scan.max = scan.max.max(a);
            if a > tol.zero_tol {
                scan.nnz += 1;
                scan.min = scan.min.min(a);
                scan.off_diagonal |= c != r;
                scan.only_col = Some(c);
            }
        }
        if scan.nnz != 1 {
            scan.only_col = None;
        }
        scan
    });

    let nnz: usize = rows.iter().map(|s| s.nnz).sum();
    let min = rows.iter().map(|s| s.min).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|s| s.max).fold(0.0, f64::max);
    let diagonal = rows.iter().all(|s| !s.off_diagonal);
    let generalized_permutation = nnz == n && {
        let mut seen = vec![false; n];
        rows.iter().all(|s| match s.only_col {
            Some(c) if !seen[c] => {
                seen[c] = true;
                true
            }
            _ => false,
        })
    };
    let density = nnz as f64 / (n * n) as f64;
    let verdict = if diagonal {
        SparsityVerdict::Diagonal
    } else if generalized_permutation {
        SparsityVerdict::GeneralizedPermutation
    } else if nnz == n * n {
        SparsityVerdict::FullyDense
    } else if density >= 0.5 {
        SparsityVerdict::Dense
    } else {
        SparsityVerdict::Sparse
    };
    SparsityReport {
        dim: n,
        nnz,
        density,
        min_nonzero_magnitude: (nnz > 0).then_some(min),
        max_magnitude: max,
        zero_tol: tol.zero_tol,
        verdict,
    }
}

impl SparsityReport {
    /// A note when a ladder transform measures as structurally sparse. Ladder gate sets
    /// are expected to populate the whole matrix only when the single-qubit generator
    /// is itself non-sparse.
    pub fn non_sparse_discrepancy(&self) -> Option<String> {
        match self.verdict {
            SparsityVerdict::Diagonal | SparsityVerdict::GeneralizedPermutation => Some(format!(
                "expected a non-sparse ladder transform, measured {} with {} nonzeros",
                self.verdict, self.nnz
            )),
            _ => None,
        }
    }

    pub fn to_report(&self) -> KeyValueReport {
        let mut r = KeyValueReport::new();
        r.text("dim", self.dim)
            .number("zero_tol", self.zero_tol)
            .text("nnz", self.nnz)
            .number("density", self.density);
        match self.min_nonzero_magnitude {
            Some(v) => r.number("min_nonzero_magnitude", v),
            None => r.text("min_nonzero_magnitude", "none"),
        };
        r.number("max_magnitude", self.max_magnitude)
            .text("verdict", self.verdict);
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub equal_up_to_global_phase: bool,
    /// `φ` in `(−π, π]` with `U ≈ e^{iφ}·V`.
    pub best_phase: f64,
    pub residual: f64,
}

impl EquivalenceReport {
    pub fn to_report(&self) -> KeyValueReport {
        let mut r = KeyValueReport::new();
        r.text("equal_up_to_global_phase", self.equal_up_to_global_phase)
            .number("best_phase", self.best_phase)
            .number("residual", self.residual);
        r
    }
}

/// Aligns `V` to `U` by the phase at `U`'s largest-magnitude entry, then measures
/// `max |U − e^{iφ}V|` against `tol.abs_tol`.
pub fn equivalent_up_to_global_phase(
    u: &DenseMatrix,
    v: &DenseMatrix,
    tol: Tolerance,
) -> Result<EquivalenceReport> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let (anchor, _) = u
        .as_slice()
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, z)| {
            let a = z.norm();
            if a > best.1 {
                (i, a)
            } else {
                best
            }
        });
    let (ua, va) = (u.as_slice()[anchor], v.as_slice()[anchor]);
    if va.norm() <= tol.zero_tol {
        let residual = u.max_abs_diff(v)?;
        return Ok(EquivalenceReport {
            equal_up_to_global_phase: false,
            best_phase: 0.0,
            residual,
        });
    }
    let mut phase = (ua * va.conj()).arg();
    if phase <= -std::f64::consts::PI {
        phase = std::f64::consts::PI;
    }
    let rotated = v.scale(Complex::from_polar(1.0, phase));
    let residual = u.max_abs_diff(&rotated)?;
    Ok(EquivalenceReport {
        equal_up_to_global_phase: residual <= tol.abs_tol,
        best_phase: phase,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditRow {
    pub n_qubits: usize,
    pub singles: usize,
    pub twos: usize,
    pub swaps: usize,
    pub matches_formula: bool,
}

impl AuditRow {
    /// Ladder gates, swaps excluded: `n(n+1)/2` when the formula holds.
    pub fn total(&self) -> usize {
        self.singles + self.twos
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityAudit {
    pub rows: Vec<AuditRow>,
    pub exact_match: bool,
}

impl ComplexityAudit {
    /// Second differences of [`AuditRow::total`] over consecutive rows.
    pub fn second_differences(&self) -> Vec<i64> {
        let totals: Vec<i64> = self.rows.iter().map(|r| r.total() as i64).collect();
        totals.windows(3).map(|w| w[2] - 2 * w[1] + w[0]).collect()
    }

    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].total() > w[0].total())
    }

    pub fn to_report(&self) -> KeyValueReport {
        let mut r = KeyValueReport::new();
        for row in &self.rows {
            let n = row.n_qubits;
            r.text(format!("n{n}.singles"), row.singles)
                .text(format!("n{n}.twos"), row.twos)
                .text(format!("n{n}.swaps"), row.swaps)
                .text(format!("n{n}.exact"), row.matches_formula);
        }
        r.text("exact_match", self.exact_match);
        r
    }
}

/// Builds the ladder for every `n` and checks `n` singles, `n(n−1)/2` two-qubit gates
/// and `⌊n/2⌋` swaps (when reversing).
pub fn complexity_audit(
    cfg: &GateSetConfig,
    n_range: impl IntoIterator<Item = usize>,
    bit_reversal: bool,
) -> Result<ComplexityAudit> {
    let rows = n_range
        .into_iter()
        .map(|n| {
            let g = build_recursive_circuit(cfg, n, bit_reversal)?.gate_count();
            let swaps = if bit_reversal { n / 2 } else { 0 };
            Ok(AuditRow {
                n_qubits: n,
                singles: g.singles,
                twos: g.twos,
                swaps: g.swaps,
                matches_formula: g.singles == n && g.twos == n * (n - 1) / 2 && g.swaps == swaps,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::InvalidArgument("empty qubit range".into()));
    }
    let exact_match = rows.iter().all(|r| r.matches_formula);
    Ok(ComplexityAudit { rows, exact_match })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub entrywise_l1: f64,
    pub max_column_sum: f64,
    pub max_row_sum: f64,
    pub frobenius: f64,
}

impl NormReport {
    pub fn to_report(&self) -> KeyValueReport {
        let mut r = KeyValueReport::new();
        r.number("entrywise_l1", self.entrywise_l1)
            .number("max_column_sum", self.max_column_sum)
            .number("max_row_sum", self.max_row_sum)
            .number("frobenius", self.frobenius);
        r
    }
}

pub fn norm_report(m: &DenseMatrix) -> NormReport {
    norm_report_with(m, Execution::default())
}

pub fn norm_report_with(m: &DenseMatrix, exec: Execution) -> NormReport {
    let n = m.dim();
    let rows = exec.map_range(n, |r| {
        m.row(r).iter().fold((0.0, 0.0), |(abs, sq), z| {
            (abs + z.norm(), sq + z.norm_sqr())
        })
    });
    let cols = exec.map_range(n, |c| (0..n).map(|r| m.get(r, c).norm()).sum::<f64>());
    NormReport {
        entrywise_l1: rows.iter().map(|r| r.0).sum(),
        max_column_sum: cols.into_iter().fold(0.0, f64::max),
        max_row_sum: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        frobenius: rows.iter().map(|r| r.1).sum::<f64>().sqrt(),
    }
}

/// One gate-table row realized at one size.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRowResult {
    /// 1-based position in [`GATE_TABLE`].
    pub row: usize,
    pub config: GateSetConfig,
    pub n_qubits: usize,
    pub sparsity: SparsityReport,
    /// The published classification, non-sparse for every row.
    pub published_non_sparse: bool,
    /// Set when the measurement disagrees with the published classification.
    pub discrepancy: bool,
}

impl TableRowResult {
    pub fn to_report(&self) -> KeyValueReport {
        let mut r = KeyValueReport::new();
        r.text("row", self.row)
            .text("qubits", self.n_qubits)
            .text("single", &self.config.single)
            .text("two", &self.config.two)
            .extend(&self.sparsity.to_report())
            .text("published_non_sparse", self.published_non_sparse)
            .text("discrepancy", self.discrepancy);
        r
    }
}

/// Realizes every [`GATE_TABLE`] row (without bit reversal) at each size in `sizes`.
pub fn reproduce_gate_table(sizes: &[usize], tol: Tolerance) -> Result<Vec<TableRowResult>> {
    let mut out = Vec::new();
    for (idx, text) in GATE_TABLE.iter().enumerate() {
        let config = GateSetConfig::parse(text)?;
        for &n in sizes {
            let u = realize_unitary(&build_recursive_circuit(&config, n, false)?)?;
            let sparsity = sparsity_report(&u, tol);
            let discrepancy = !sparsity.verdict.is_non_sparse();
            out.push(TableRowResult {
                row: idx + 1,
                config: config.clone(),
                n_qubits: n,
                sparsity,
                published_non_sparse: true,
                discrepancy,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub n_qubits: usize,
    pub trials: usize,
    pub streamed_median_seconds: f64,
    pub dense_median_seconds: f64,
    /// Present for the Fourier gate set only.
    pub fft_median_seconds: Option<f64>,
    pub streamed_dense_max_diff: f64,
    pub fft_max_diff: Option<f64>,
    pub outputs_agree: bool,
}

impl BenchReport {
    pub fn to_report(&self) -> KeyValueReport {
        let mut r = KeyValueReport::new();
        r.text("qubits", self.n_qubits)
            .text("trials", self.trials)
            .number("streamed_median_seconds", self.streamed_median_seconds)
            .number("dense_median_seconds", self.dense_median_seconds);
        if let Some(t) = self.fft_median_seconds {
            r.number("fft_median_seconds", t);
        }
        r.number("streamed_dense_max_diff", self.streamed_dense_max_diff);
        if let Some(d) = self.fft_max_diff {
            r.number("fft_max_diff", d);
        }
        r.text("outputs_agree", self.outputs_agree);
        r
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

fn time_trials<T>(trials: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut last = None;
    let times = (0..trials)
        .map(|_| {
            let start = Instant::now();
            let out = black_box(f());
            let t = start.elapsed().as_secs_f64();
            last = Some(out);
            t
        })
        .collect();
    (median(times), last.expect("at least one trial"))
}

/// Median wall time of gate-streamed application against dense matvec on one fixed
/// random state, plus the radix-2 FFT when `cfg` is the Fourier gate set.
pub fn bench_apply(
    cfg: &GateSetConfig,
    n_qubits: usize,
    trials: usize,
    bit_reversal: bool,
) -> Result<BenchReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::CapExceeded {
            n_qubits,
            cap: MAX_DENSE_QUBITS,
        });
    }
    let circuit = build_recursive_circuit(cfg, n_qubits, bit_reversal)?;
    let dense = realize_unitary(&circuit)?;

    let mut rng = rand::rngs::StdRng::seed_from_u64(0x1add_e125);
    let raw: Vec<Complex> = (0..1usize << n_qubits)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let state = StateVector::from_amplitudes(raw.iter().map(|z| z / norm).collect())?;

    let (streamed_t, streamed) = time_trials(trials, || {
        let mut amps = state.amplitudes().to_vec();
        circuit
            .apply_in_place(&mut amps)
            .expect("sized to the circuit");
        amps
    });
    let (dense_t, dense_out) = time_trials(trials, || dense.apply(&state).expect("sized"));
    let streamed_dense_max_diff =
        crate::numerics::max_abs_diff_slices(&streamed, dense_out.amplitudes());

    let (fft_median_seconds, fft_max_diff) = if *cfg == GateSetConfig::qft() {
        let signal = Signal::new(state.amplitudes().to_vec())?;
        let (t, out) = time_trials(trials, || {
            fft_radix2(&signal, DftConvention::QFT).expect("power of two")
        });
        // Without the final swaps the ladder emits the transform in bit-reversed order.
        let expected = if bit_reversal {
            out.into_samples()
        } else {
            bit_reversal_perm(n_qubits)?.apply(out.samples())
        };
        let diff = crate::numerics::max_abs_diff_slices(&expected, &streamed);
        (Some(t), Some(diff))
    } else {
        (None, None)
    };

    let tol = Tolerance::default().abs_tol;
    let outputs_agree = streamed_dense_max_diff <= tol && fft_max_diff.is_none_or(|d| d <= tol);
    Ok(BenchReport {
        n_qubits,
        trials,
        streamed_median_seconds: streamed_t,
        dense_median_seconds: dense_t,
        fft_median_seconds,
        streamed_dense_max_diff,
        fft_max_diff,
        outputs_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_recursive_circuit;
    use crate::numerics::testutil::{random_matrix, rng};
    use crate::transforms::{dft_matrix, qft_reference_matrix};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn realize(cfg: &GateSetConfig, n: usize, rev: bool) -> DenseMatrix {
        realize_unitary(&build_recursive_circuit(cfg, n, rev).unwrap()).unwrap()
    }

    fn hadamard_power(n: usize) -> DenseMatrix {
        let h = crate::gates::make_named_single("H").unwrap();
        (1..n).fold(h.clone(), |acc, _| acc.tensor(&h))
    }

    /// Brute-force recheck of every verdict predicate.
    fn verdict_predicates_hold(m: &DenseMatrix, rep: &SparsityReport) -> bool {
        let n = m.dim();
        let nz = |r: usize, c: usize| m.get(r, c).norm() > rep.zero_tol;
        let nnz = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| nz(r, c))
            .count();
        let diagonal = (0..n).all(|r| (0..n).all(|c| r == c || !nz(r, c)));
        let perm = nnz == n
            && (0..n).all(|r| (0..n).filter(|&c| nz(r, c)).count() == 1)
            && (0..n).all(|c| (0..n).filter(|&r| nz(r, c)).count() == 1);
        let expected = if diagonal {
            SparsityVerdict::Diagonal
        } else if perm {
            SparsityVerdict::GeneralizedPermutation
        } else if nnz == n * n {
            SparsityVerdict::FullyDense
        } else if nnz as f64 / (n * n) as f64 >= 0.5 {
            SparsityVerdict::Dense
        } else {
            SparsityVerdict::Sparse
        };
        rep.nnz == nnz && rep.verdict == expected && (0.0..=1.0).contains(&rep.density)
    }

    #[test]
    fn sparsity_examples() {
        let r = sparsity_report(&DenseMatrix::identity(4), tol());
        assert_eq!((r.nnz, r.verdict), (4, SparsityVerdict::Diagonal));
        let r = sparsity_report(&hadamard_power(4), tol());
        assert_eq!((r.nnz, r.verdict), (256, SparsityVerdict::FullyDense));
        assert!((r.min_nonzero_magnitude.unwrap() - 0.25).abs() < 1e-15);
        let r = sparsity_report(
            &realize(&GateSetConfig::table_row(1).unwrap(), 4, false),
            tol(),
        );
        assert_eq!(r.verdict, SparsityVerdict::FullyDense);
        assert_eq!(r.density, 1.0);
        let r = sparsity_report(&DenseMatrix::zeros(3), tol());
        assert_eq!((r.nnz, r.min_nonzero_magnitude), (0, None));
    }

    #[test]
    fn sparsity_intermediate_verdicts() {
        let x = crate::gates::make_named_single("X").unwrap();
        let h = crate::gates::make_named_single("H").unwrap();
        let perm = x.tensor(&DenseMatrix::identity(2));
        let rep = sparsity_report(&perm, tol());
        assert_eq!(rep.verdict, SparsityVerdict::GeneralizedPermutation);
        assert!(verdict_predicates_hold(&perm, &rep));

        // half the entries nonzero
        let half = h.tensor(&DenseMatrix::identity(2));
        let rep = sparsity_report(&half, tol());
        assert_eq!((rep.nnz, rep.verdict), (8, SparsityVerdict::Dense));

        let quarter = h.tensor(&DenseMatrix::identity(4));
        let rep = sparsity_report(&quarter, tol());
        assert_eq!(rep.verdict, SparsityVerdict::Sparse);
        assert!(verdict_predicates_hold(&quarter, &rep));

        // two nonzeros in one column is not a permutation even with nnz = N
        let mut m = DenseMatrix::zeros(2);
        m.set(0, 1, Complex::new(1.0, 0.0));
        m.set(1, 1, Complex::new(1.0, 0.0));
        let rep = sparsity_report(&m, tol());
        assert_eq!(rep.verdict, SparsityVerdict::Dense);
    }

    #[test]
    fn sparsity_scan_paths_agree() {
        let m = realize(&GateSetConfig::table_row(2).unwrap(), 6, false);
        assert_eq!(
            sparsity_report_with(&m, tol(), Execution::Sequential),
            sparsity_report_with(&m, tol(), Execution::Parallel)
        );
    }

    #[test]
    fn verdicts_match_brute_force_for_table() {
        for i in 0..5 {
            let cfg = GateSetConfig::table_row(i).unwrap();
            for n in [2, 4, 5] {
                let m = realize(&cfg, n, false);
                let rep = sparsity_report(&m, tol());
                assert!(verdict_predicates_hold(&m, &rep), "row {} n={n}", i + 1);
            }
        }
    }

    #[test]
    fn discrepancy_flagged_only_for_structured_transforms() {
        let results = reproduce_gate_table(&[4], tol()).unwrap();
        let flags: Vec<bool> = results.iter().map(|r| r.discrepancy).collect();
        assert_eq!(flags, vec![true, false, false, false, true]);
        assert_eq!(
            results[0].sparsity.verdict,
            SparsityVerdict::GeneralizedPermutation
        );
        assert_eq!(results[4].sparsity.verdict, SparsityVerdict::Diagonal);
        assert!(results[0].sparsity.non_sparse_discrepancy().is_some());
        assert!(results[1].sparsity.non_sparse_discrepancy().is_none());
        assert_eq!(results[0].to_report().get("discrepancy"), Some("true"));
    }

    #[test]
    fn equivalence_examples() {
        let m = random_matrix(4, &mut rng(3));
        let shifted = m.scale(Complex::from_polar(1.0, PI / 3.0));
        let rep = equivalent_up_to_global_phase(&m, &shifted, tol()).unwrap();
        assert!(rep.equal_up_to_global_phase);
        assert!(rep.residual < 1e-13);
        assert!((rep.best_phase + PI / 3.0).abs() < 1e-13);

        let z = DenseMatrix::diagonal(&[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]).unwrap();
        let rep = equivalent_up_to_global_phase(&DenseMatrix::identity(2), &z, tol()).unwrap();
        assert!(!rep.equal_up_to_global_phase);
        assert!((rep.residual - 2.0).abs() < 1e-15);

        let qft = realize(&GateSetConfig::qft(), 4, true);
        let rep =
            equivalent_up_to_global_phase(&qft, &qft_reference_matrix(4).unwrap(), tol()).unwrap();
        assert!(rep.equal_up_to_global_phase);
        assert!(rep.best_phase.abs() < 1e-12);
        assert!(rep.residual < 1e-10);

        // V vanishes where U peaks
        let x = crate::gates::make_named_single("X").unwrap();
        let rep = equivalent_up_to_global_phase(&DenseMatrix::identity(2), &x, tol()).unwrap();
        assert!(!rep.equal_up_to_global_phase);
        assert!(equivalent_up_to_global_phase(&x, &DenseMatrix::identity(4), tol()).is_err());

        // phase −π normalizes to π
        let rep = equivalent_up_to_global_phase(
            &DenseMatrix::identity(2).scale(-Complex::new(1.0, 0.0)),
            &DenseMatrix::identity(2),
            tol(),
        )
        .unwrap();
        assert_eq!(rep.best_phase, PI);
    }

    proptest! {
        #[test]
        fn equivalence_is_reflexive_symmetric_and_phase_invariant(
            seed in any::<u64>(), a in -PI..PI, b in -PI..PI,
        ) {
            let t = Tolerance::new(1e-12, 1e-12).unwrap();
            let m = random_matrix(4, &mut rng(seed));
            prop_assert!(equivalent_up_to_global_phase(&m, &m, t).unwrap().equal_up_to_global_phase);
            let v = m.scale(Complex::from_polar(1.0, a));
            let fwd = equivalent_up_to_global_phase(&m, &v, t).unwrap();
            let back = equivalent_up_to_global_phase(&v, &m, t).unwrap();
            prop_assert!(fwd.equal_up_to_global_phase && back.equal_up_to_global_phase);
            let w = v.scale(Complex::from_polar(1.0, b));
            prop_assert!(equivalent_up_to_global_phase(&w, &m, t).unwrap().equal_up_to_global_phase);

            let other = random_matrix(4, &mut rng(seed.wrapping_add(1)));
            let x = equivalent_up_to_global_phase(&m, &other, t).unwrap().equal_up_to_global_phase;
            let y = equivalent_up_to_global_phase(&other, &m, t).unwrap().equal_up_to_global_phase;
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn complexity_audit_examples() {
        let audit = complexity_audit(&GateSetConfig::qft(), 1..=10, false).unwrap();
        assert!(audit.exact_match);
        for row in &audit.rows {
            assert_eq!(
                (row.singles, row.twos),
                (row.n_qubits, row.n_qubits * (row.n_qubits - 1) / 2)
            );
        }
        let audit = complexity_audit(&GateSetConfig::qft(), [4], true).unwrap();
        assert_eq!((audit.rows[0].total(), audit.rows[0].swaps), (10, 2));
        let audit = complexity_audit(&GateSetConfig::qft(), 1..=12, true).unwrap();
        assert!(audit.second_differences().iter().all(|&d| d == 1));
        assert!(audit.strictly_increasing());
        assert!(complexity_audit(&GateSetConfig::qft(), 1..1, false).is_err());
        assert_eq!(audit.to_report().get("exact_match"), Some("true"));
    }

    #[test]
    fn norm_examples() {
        for n in [1, 4, 16] {
            let r = norm_report(&DenseMatrix::identity(n));
            assert_eq!(r.entrywise_l1, n as f64);
            assert!((r.frobenius - (n as f64).sqrt()).abs() < 1e-15);
            assert_eq!((r.max_row_sum, r.max_column_sum), (1.0, 1.0));
        }
        let f2 = dft_matrix(2, DftConvention::UNITARY).unwrap();
        let r = norm_report(&f2);
        assert!((r.entrywise_l1 - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!((r.max_column_sum - 2.0 * FRAC_1_SQRT_2).abs() < 1e-15);

        let m = realize(&GateSetConfig::table_row(2).unwrap(), 4, false);
        let mut l1 = 0.0;
        for row in 0..16 {
            for col in 0..16 {
                l1 += m.get(row, col).norm();
            }
        }
        let r = norm_report(&m);
        assert!((r.entrywise_l1 - l1).abs() < 1e-12);
        assert_eq!(r, norm_report_with(&m, Execution::Sequential));
    }

    #[test]
    fn frobenius_of_unitaries() {
        for i in 0..5 {
            let cfg = GateSetConfig::table_row(i).unwrap();
            for n in [3, 6] {
                let m = realize(&cfg, n, false);
                let f = norm_report(&m).frobenius;
                assert!((f - ((1 << n) as f64).sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bench_outputs_agree() {
        let rep = bench_apply(&GateSetConfig::qft(), 8, 10, false).unwrap();
        assert!(rep.outputs_agree);
        assert!(rep.streamed_dense_max_diff < 1e-10);
        assert!(rep.fft_max_diff.unwrap() < 1e-10);

        let rep = bench_apply(&GateSetConfig::qft(), 4, 3, true).unwrap();
        let t = [
            rep.streamed_median_seconds,
            rep.dense_median_seconds,
            rep.fft_median_seconds.unwrap(),
        ];
        assert!(t.iter().all(|&x| x > 0.0), "{t:?}");

        let rep = bench_apply(&GateSetConfig::table_row(3).unwrap(), 6, 2, false).unwrap();
        assert!(rep.fft_median_seconds.is_none() && rep.outputs_agree);

        assert!(bench_apply(&GateSetConfig::qft(), 4, 0, false).is_err());
        assert!(bench_apply(&GateSetConfig::qft(), 13, 1, false).is_err());
    }
}
