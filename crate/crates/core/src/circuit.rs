//! Recursive ladder circuits.
//!
//! The `n`-qubit circuit is `U_n = (I ⊗ U_{n-1}) · V_n`: block `V_n` acts first on qubit 1
//! and every qubit below it, then the `(n-1)`-qubit ladder runs on qubits `2..=n`. A block
//! with top qubit `q` applies `S` to `q` and then `T(target q, control r)` for
//! `r = q+1..=n` in ascending order.
//!
//! Qubits are labelled `1..=n` with qubit 1 the most significant bit of a basis index.

use crate::gates::GateSetConfig;
use crate::numerics::{Complex, DenseMatrix, StateVector, ZERO};
use crate::{Error, Execution, Result};

/// Largest qubit count accepted by [`realize_unitary`].
pub const MAX_DENSE_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementKind {
    Single { target: usize },
    Two { target: usize, control: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GatePlacement {
    pub kind: PlacementKind,
    /// 2×2 for single-qubit placements, 4×4 (control high, target low) otherwise.
    pub matrix: DenseMatrix,
}

impl GatePlacement {
    fn relabel(&self, shift: usize) -> Self {
        let kind = match self.kind {
            PlacementKind::Single { target } => PlacementKind::Single {
                target: target - shift,
            },
            PlacementKind::Two { target, control } => PlacementKind::Two {
                target: target - shift,
                control: control - shift,
            },
        };
        Self {
            kind,
            matrix: self.matrix.clone(),
        }
    }
}

/// One ladder block `V`: `S` on the top qubit followed by the two-qubit gates below it.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderBlock {
    pub top_qubit: usize,
    pub placements: Vec<GatePlacement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursiveCircuit {
    n_qubits: usize,
    blocks: Vec<LadderBlock>,
    swaps: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCounts {
    pub singles: usize,
    pub twos: usize,
    pub swaps: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.singles + self.twos + self.swaps
    }
}

pub fn build_recursive_circuit(
    cfg: &GateSetConfig,
    n_qubits: usize,
    bit_reversal: bool,
) -> Result<RecursiveCircuit> {
    if n_qubits == 0 {
        return Err(Error::InvalidDimension(
            0,
            "a ladder circuit needs at least one qubit",
        ));
    }
    let single = cfg.single.matrix()?;
    let blocks = (1..=n_qubits)
        .map(|q| {
            let mut placements = Vec::with_capacity(1 + n_qubits - q);
            placements.push(GatePlacement {
                kind: PlacementKind::Single { target: q },
                matrix: single.clone(),
            });
            for r in q + 1..=n_qubits {
                placements.push(GatePlacement {
                    kind: PlacementKind::Two {
                        target: q,
                        control: r,
                    },
                    matrix: cfg.two.realize(q, r)?,
                });
            }
            Ok(LadderBlock {
                top_qubit: q,
                placements,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let swaps = if bit_reversal {
        (1..=n_qubits / 2).map(|q| (q, n_qubits + 1 - q)).collect()
    } else {
        Vec::new()
    };
    Ok(RecursiveCircuit {
        n_qubits,
        blocks,
        swaps,
    })
}

impl RecursiveCircuit {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn blocks(&self) -> &[LadderBlock] {
        &self.blocks
    }

    pub fn swaps(&self) -> &[(usize, usize)] {
        &self.swaps
    }

    pub fn placements(&self) -> impl Iterator<Item = &GatePlacement> {
        self.blocks.iter().flat_map(|b| b.placements.iter())
    }

    pub fn gate_count(&self) -> GateCounts {
        gate_count(self)
    }

    /// The circuit with only its first block, `V_n` extended by identity.
    pub fn head_block(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            blocks: self.blocks[..1].to_vec(),
            swaps: Vec::new(),
        }
    }

    /// Blocks `2..=n` relabelled onto an `(n-1)`-qubit register, i.e. `U_{n-1}` with the
    /// gate matrices it has inside `U_n`. Swaps are dropped. `None` for one qubit.
    pub fn tail(&self) -> Option<Self> {
        if self.n_qubits < 2 {
            return None;
        }
        let blocks = self.blocks[1..]
            .iter()
            .map(|b| LadderBlock {
                top_qubit: b.top_qubit - 1,
                placements: b.placements.iter().map(|p| p.relabel(1)).collect(),
            })
            .collect();
        Some(Self {
            n_qubits: self.n_qubits - 1,
            blocks,
            swaps: Vec::new(),
        })
    }

    /// Applies the circuit in place to `2^n` amplitudes.
    pub fn apply_in_place(&self, amps: &mut [Complex]) -> Result<()> {
        if amps.len() != 1usize << self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n_qubits,
                found: amps.len(),
            });
        }
        let n = self.n_qubits;
        let bit = |q: usize| 1usize << (n - q);
        for p in self.placements() {
            let m = p.matrix.as_slice();
            match p.kind {
                PlacementKind::Single { target } => apply_single(amps, bit(target), m),
                PlacementKind::Two { target, control } => {
                    apply_two(amps, bit(control), bit(target), m)
                }
            }
        }
        for &(a, b) in &self.swaps {
            apply_swap(amps, bit(a), bit(b));
        }
        Ok(())
    }
}

fn apply_single(amps: &mut [Complex], t: usize, m: &[Complex]) {
    for i in 0..amps.len() {
        if i & t != 0 {
            continue;
        }
        let (a0, a1) = (amps[i], amps[i | t]);
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | t] = m[2] * a0 + m[3] * a1;
    }
}

fn apply_two(amps: &mut [Complex], c: usize, t: usize, m: &[Complex]) {
    for i in 0..amps.len() {
        if i & (c | t) != 0 {
            continue;
        }
        let idx = [i, i | t, i | c, i | c | t];
        let a = idx.map(|k| amps[k]);
        for (row, &k) in idx.iter().enumerate() {
            let r = &m[4 * row..4 * row + 4];
            amps[k] = r[0] * a[0] + r[1] * a[1] + r[2] * a[2] + r[3] * a[3];
        }
    }
}

fn apply_swap(amps: &mut [Complex], a: usize, b: usize) {
    for i in 0..amps.len() {
        if i & a != 0 && i & b == 0 {
            amps.swap(i, i ^ (a | b));
        }
    }
}

/// Streams every gate over the state; no `2^n × 2^n` matrix is formed.
pub fn apply_circuit(c: &RecursiveCircuit, v: &StateVector) -> Result<StateVector> {
    if v.n_qubits() != c.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits,
            found: v.n_qubits(),
        });
    }
    let mut out = v.clone();
    c.apply_in_place(out.amplitudes_mut())?;
    Ok(out)
}

/// Dense unitary whose column `k` is the circuit applied to `|k⟩`.
pub fn realize_unitary(c: &RecursiveCircuit) -> Result<DenseMatrix> {
    realize_unitary_with(c, Execution::default())
}

pub fn realize_unitary_with(c: &RecursiveCircuit, exec: Execution) -> Result<DenseMatrix> {
    if c.n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::CapExceeded {
            n_qubits: c.n_qubits,
            cap: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << c.n_qubits;
    let columns = exec.map_range(dim, |k| {
        let mut col = vec![ZERO; dim];
        col[k] = Complex::new(1.0, 0.0);
        c.apply_in_place(&mut col).expect("column length matches");
        col
    });
    let mut data = vec![ZERO; dim * dim];
    for (k, col) in columns.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            data[r * dim + k] = *z;
        }
    }
    Ok(DenseMatrix::from_raw(dim, data))
}

pub fn gate_count(c: &RecursiveCircuit) -> GateCounts {
    let mut counts = GateCounts {
        singles: 0,
        twos: 0,
        swaps: c.swaps.len(),
    };
    for p in c.placements() {
        match p.kind {
            PlacementKind::Single { .. } => counts.singles += 1,
            PlacementKind::Two { .. } => counts.twos += 1,
        }
    }
    counts
}

/// `max |U_n − (I₂ ⊗ U_{n-1})·V_n|`, each side realized independently.
///
/// `U_{n-1}` is the tail of the `n`-qubit ladder, so position-dependent angle schedules
/// keep the labels they have inside `U_n`.
pub fn check_recursion_identity(cfg: &GateSetConfig, n_qubits: usize) -> Result<f64> {
    if n_qubits < 2 {
        return Err(Error::InvalidDimension(
            n_qubits,
            "the recursion identity needs at least two qubits",
        ));
    }
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::CapExceeded {
            n_qubits,
            cap: MAX_DENSE_QUBITS,
        });
    }
    let full = build_recursive_circuit(cfg, n_qubits, false)?;
    let direct = realize_unitary(&full)?;
    let tail = realize_unitary(&full.tail().expect("n >= 2"))?;
    let head = realize_unitary(&full.head_block())?;
    let composed = DenseMatrix::identity(2).tensor(&tail).mul(&head)?;
    direct.max_abs_diff(&composed)
}
