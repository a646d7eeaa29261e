//! Local two-qubit holonomic gates on an `n`-qubit register with one ancilla.
//!
//! Basis layout: qubit 0 is the most significant bit, the ancilla is the
//! least significant factor with `|−⟩ ↦ 0`, `|+⟩ ↦ 1`. A gate on the pair
//! `(i, j)` uses the local basis `|q_i q_j⟩`, matching the `|00⟩..|11⟩`
//! ordering of [`NamedGate`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, UnitaryMatrix, C64};
use crate::synthesis::{compile_unitary, two_qubit_gate, NamedGate, PhaseParams};

pub const MIN_QUBITS: usize = 2;
pub const MAX_QUBITS: usize = 6;

/// Which ancilla code space the register lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    Plus,
    Minus,
}

impl Code {
    fn bit(self) -> usize {
        match self {
            Code::Minus => 0,
            Code::Plus => 1,
        }
    }
}

/// `n` qubits plus an ancilla; `ε` is the ancilla splitting, kept as metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Register {
    n_qubits: usize,
    code: Code,
    epsilon: f64,
}

impl Register {
    pub fn new(n_qubits: usize, code: Code) -> Result<Self> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::QubitIndex(format!(
                "register size {n_qubits} outside {MIN_QUBITS}..={MAX_QUBITS}"
            )));
        }
        Ok(Register { n_qubits, code, epsilon: 1.0 })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn code(&self) -> Code {
        self.code
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `2^n · 2`
    pub fn dim(&self) -> usize {
        1 << (self.n_qubits + 1)
    }

    /// Bit position of qubit `q` in a full state index.
    fn bit_of(&self, q: usize) -> usize {
        self.n_qubits - q
    }

    /// `|bits⟩ ⊗ |±⟩` where `bits` is the qubit register value (qubit 0 most
    /// significant).
    pub fn basis_state(&self, bits: usize) -> Result<Vec<C64>> {
        if bits >= 1 << self.n_qubits {
            return Err(Error::QubitIndex(format!("basis index {bits} out of range for {} qubits", self.n_qubits)));
        }
        let mut v = vec![C64::default(); self.dim()];
        v[(bits << 1) | self.code.bit()] = C64::new(1.0, 0.0);
        Ok(v)
    }

    /// Squared norm of the component outside the register's code.
    pub fn off_code_weight(&self, state: &[C64]) -> f64 {
        let other = 1 - self.code.bit();
        state.iter().enumerate().filter(|(k, _)| k & 1 == other).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// The qubit part of a state in the code, length `2^n`.
    pub fn code_amplitudes(&self, state: &[C64]) -> Vec<C64> {
        (0..1 << self.n_qubits).map(|b| state[(b << 1) | self.code.bit()]).collect()
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i == j || i >= self.n_qubits || j >= self.n_qubits {
            return Err(Error::QubitIndex(format!(
                "pair ({i}, {j}) invalid for {} qubits (0-based, distinct)",
                self.n_qubits
            )));
        }
        Ok(())
    }
}

/// A 4×4 unitary acting on qubits `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGate {
    i: usize,
    j: usize,
    gate: UnitaryMatrix,
}

/// Places `g` on qubits `(i, j)` of `reg`; identity elsewhere and on the ancilla.
pub fn embed_local_gate(reg: &Register, i: usize, j: usize, g: &UnitaryMatrix) -> Result<LocalGate> {
    reg.check_pair(i, j)?;
    if g.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: g.dim() });
    }
    Ok(LocalGate { i, j, gate: g.clone() })
}

impl LocalGate {
    pub fn pair(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn gate(&self) -> &UnitaryMatrix {
        &self.gate
    }

    /// Applies the gate to a full register state in place, touching only
    /// the four amplitudes of each `(q_i, q_j)` slice.
    pub fn apply(&self, reg: &Register, state: &mut [C64]) -> Result<()> {
        if state.len() != reg.dim() {
            return Err(Error::DimensionMismatch { expected: reg.dim(), found: state.len() });
        }
        reg.check_pair(self.i, self.j)?;
        let (bi, bj) = (1usize << reg.bit_of(self.i), 1usize << reg.bit_of(self.j));
        let g = self.gate.matrix();
        for base in 0..state.len() {
            if base & (bi | bj) != 0 {
                continue;
            }
            let idx = [base, base | bj, base | bi, base | bi | bj];
            let amp = idx.map(|k| state[k]);
            for (r, &k) in idx.iter().enumerate() {
                state[k] = (0..4).map(|col| g[(r, col)] * amp[col]).sum();
            }
        }
        Ok(())
    }

    /// The full `2^{n+1}`-dimensional matrix, built column by column from
    /// [`apply`](Self::apply).
    pub fn to_matrix(&self, reg: &Register) -> Result<CMatrix> {
        let d = reg.dim();
        let mut m = CMatrix::zeros(d);
        for col in 0..d {
            let mut v = vec![C64::default(); d];
            v[col] = C64::new(1.0, 0.0);
            self.apply(reg, &mut v)?;
            for (r, x) in v.into_iter().enumerate() {
                m[(r, col)] = x;
            }
        }
        Ok(m)
    }
}

/// What a circuit element applies.
#[derive(Debug, Clone, PartialEq)]
pub enum GateSpec {
    /// A named loop program, embedded through its evaluated holonomy.
    Named(NamedGate, PhaseParams),
    Matrix(UnitaryMatrix),
}

impl GateSpec {
    pub fn unitary(&self) -> Result<UnitaryMatrix> {
        match self {
            GateSpec::Named(g, p) => Ok(two_qubit_gate(*g, *p).evaluate()),
            GateSpec::Matrix(m) if m.dim() == 4 => Ok(m.clone()),
            GateSpec::Matrix(m) => Err(Error::DimensionMismatch { expected: 4, found: m.dim() }),
        }
    }

    /// Primitive loops needed for this gate on its own `CP^4`.
    pub fn local_cost(&self) -> Result<usize> {
        match self {
            GateSpec::Named(g, p) => Ok(two_qubit_gate(*g, *p).len()),
            GateSpec::Matrix(m) => Ok(compile_unitary(m.matrix())?.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitGate {
    pub i: usize,
    pub j: usize,
    pub gate: GateSpec,
}

/// Runs a circuit on a register state.
pub fn apply_circuit(reg: &Register, circuit: &[CircuitGate], state: &mut [C64]) -> Result<()> {
    for g in circuit {
        embed_local_gate(reg, g.i, g.j, &g.gate.unitary()?)?.apply(reg, state)?;
    }
    Ok(())
}

/// The circuit's unitary on the `2^n` qubit space (the code block).
pub fn circuit_unitary(reg: &Register, circuit: &[CircuitGate]) -> Result<CMatrix> {
    let q = 1usize << reg.n_qubits;
    let mut m = CMatrix::zeros(q);
    for col in 0..q {
        let mut v = reg.basis_state(col)?;
        apply_circuit(reg, circuit, &mut v)?;
        for (r, a) in reg.code_amplitudes(&v).into_iter().enumerate() {
            m[(r, col)] = a;
        }
    }
    Ok(m)
}

/// Primitive-loop counts for the two encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    /// Per gate, on its own `CP^4`.
    pub local_per_gate: Vec<usize>,
    pub local_total: usize,
    /// The whole circuit compiled on one `CP^{2^n}` code.
    pub monolithic: usize,
    /// Each gate compiled separately on `CP^{2^n}`, summed.
    pub monolithic_per_gate: usize,
}

/// Counts primitive loops under local embedding and under a single
/// `2^n`-dimensional code.
pub fn gate_count(reg: &Register, circuit: &[CircuitGate]) -> Result<CostReport> {
    let local_per_gate = circuit.iter().map(|g| g.gate.local_cost()).collect::<Result<Vec<_>>>()?;
    let monolithic = if circuit.is_empty() { 0 } else { compile_unitary(&circuit_unitary(reg, circuit)?)?.len() };
    let monolithic_per_gate = circuit
        .iter()
        .map(|g| compile_unitary(&circuit_unitary(reg, core::slice::from_ref(g))?).map(|p| p.len()))
        .sum::<Result<usize>>()?;
    Ok(CostReport { local_total: local_per_gate.iter().sum(), local_per_gate, monolithic, monolithic_per_gate })
}
