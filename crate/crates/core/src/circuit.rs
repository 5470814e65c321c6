//! Layered circuits of product-state reflections and free single-qubit gates.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gates::Gate;

/// Gates applied in list order. Each qubit may take part in at most one
/// multi-qubit gate per layer; single-qubit unitaries are unrestricted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layer {
    pub gates: Vec<Gate>,
}

impl Layer {
    pub fn new(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    pub fn has_multi_qubit(&self) -> bool {
        self.gates.iter().any(Gate::is_multi_qubit)
    }

    fn multi_mask_conflict(&self, gate: &Gate) -> bool {
        if !gate.is_multi_qubit() {
            return false;
        }
        self.gates
            .iter()
            .filter(|g| g.is_multi_qubit())
            .any(|g| g.qubits().iter().any(|q| gate.qubits().contains(q)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_inputs: usize,
    pub n_ancilla: usize,
    /// The designated output register, if any.
    pub output: Option<usize>,
    pub layers: Vec<Layer>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    QubitOutOfRange(usize),
    DuplicateQubitInGate(usize),
    QubitReuse(usize),
    PayloadArity { qubits: usize, payload: usize },
    PrimitiveArity { qubits: usize },
    NotNormalized,
    NotUnitary,
    OutputOutOfRange(usize),
}

/// An invariant violation and where it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub layer: Option<usize>,
    pub gate: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::QubitOutOfRange(q) => write!(f, "qubit {} out of range", q)?,
            ViolationKind::DuplicateQubitInGate(q) => write!(f, "duplicate qubit {} in gate", q)?,
            ViolationKind::QubitReuse(q) => write!(f, "qubit reuse in layer (qubit {})", q)?,
            ViolationKind::PayloadArity { qubits, payload } => {
                write!(f, "payload arity: {} states for {} qubits", payload, qubits)?
            }
            ViolationKind::PrimitiveArity { qubits } => {
                write!(f, "primitive arity: {} qubits", qubits)?
            }
            ViolationKind::NotNormalized => write!(f, "reflection state not normalized")?,
            ViolationKind::NotUnitary => write!(f, "single-qubit matrix not unitary")?,
            ViolationKind::OutputOutOfRange(q) => write!(f, "output register {} out of range", q)?,
        }
        if let Some(l) = self.layer {
            write!(f, " at layer {}", l)?;
        }
        if let Some(g) = self.gate {
            write!(f, ", gate {}", g)?;
        }
        Ok(())
    }
}

impl Circuit {
    pub fn new(n_inputs: usize, n_ancilla: usize) -> Self {
        Self {
            n_inputs,
            n_ancilla,
            output: None,
            layers: Vec::new(),
        }
    }

    pub fn with_output(mut self, t: usize) -> Self {
        self.output = Some(t);
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_inputs + self.n_ancilla
    }

    /// Append a gate to the last layer, opening a new one only when a
    /// multi-qubit gate would reuse a qubit.
    pub fn push(&mut self, gate: Gate) -> &mut Self {
        match self.layers.last_mut() {
            Some(layer) if !layer.multi_mask_conflict(&gate) => layer.gates.push(gate),
            _ => self.layers.push(Layer::new(vec![gate])),
        }
        self
    }

    /// Append gates as a fresh layer.
    pub fn push_layer(&mut self, gates: Vec<Gate>) -> &mut Self {
        self.layers.push(Layer::new(gates));
        self
    }

    /// Append all layers of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits() != self.n_qubits() {
            return Err(Error::CountMismatch {
                expected: self.n_qubits(),
                got: other.n_qubits(),
            });
        }
        self.layers.extend(other.layers.iter().cloned());
        Ok(self)
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }

    /// Layers holding at least one multi-qubit gate.
    pub fn depth(&self) -> usize {
        self.layers.iter().filter(|l| l.has_multi_qubit()).count()
    }

    /// Number of multi-qubit gates.
    pub fn size(&self) -> usize {
        self.gates().filter(|g| g.is_multi_qubit()).count()
    }

    pub fn is_qac_legal(&self) -> bool {
        self.gates().all(Gate::is_qac_legal)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let n = self.n_qubits();
        let mut out = Vec::new();
        if let Some(t) = self.output {
            if t >= n {
                out.push(Violation {
                    layer: None,
                    gate: None,
                    kind: ViolationKind::OutputOutOfRange(t),
                });
            }
        }
        for (li, layer) in self.layers.iter().enumerate() {
            let mut used = vec![false; n];
            for (gi, gate) in layer.gates.iter().enumerate() {
                let mut at = |kind| {
                    out.push(Violation {
                        layer: Some(li),
                        gate: Some(gi),
                        kind,
                    })
                };
                let qs = gate.qubits();
                for (i, &q) in qs.iter().enumerate() {
                    if q >= n {
                        at(ViolationKind::QubitOutOfRange(q));
                    } else if qs[..i].contains(&q) {
                        at(ViolationKind::DuplicateQubitInGate(q));
                    }
                }
                match gate {
                    Gate::Reflection { qubits, state } => {
                        if qubits.len() != state.len() {
                            at(ViolationKind::PayloadArity {
                                qubits: qubits.len(),
                                payload: state.len(),
                            });
                        }
                        if state.iter().any(|s| !s.is_normalized()) {
                            at(ViolationKind::NotNormalized);
                        }
                    }
                    Gate::Unitary { matrix, .. } => {
                        if !matrix.is_unitary(1e-12) {
                            at(ViolationKind::NotUnitary);
                        }
                    }
                    Gate::Primitive { qubits, op } => {
                        let (lo, hi) = op.arity();
                        if qubits.len() < lo || qubits.len() > hi {
                            at(ViolationKind::PrimitiveArity {
                                qubits: qubits.len(),
                            });
                        }
                    }
                }
                if gate.is_multi_qubit() {
                    for &q in qs.iter().filter(|&&q| q < n) {
                        if used[q] {
                            at(ViolationKind::QubitReuse(q));
                        }
                        used[q] = true;
                    }
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = v.iter().map(|x| alloc::format!("{}", x)).collect();
            Err(Error::InvalidCircuit(msg.join("; ")))
        }
    }

    /// Inverse circuit: layers and gate order reversed, unitaries adjointed.
    pub fn dagger(&self) -> Circuit {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| Layer::new(l.gates.iter().rev().map(Gate::dagger).collect()))
            .collect();
        Circuit {
            layers,
            ..self.clone()
        }
    }

    /// `a` followed by `b`. Register split and output come from `a` unless
    /// `b` names an output.
    pub fn compose(a: &Circuit, b: &Circuit) -> Result<Circuit> {
        let mut out = a.clone();
        out.append(b)?;
        out.output = b.output.or(a.output);
        Ok(out)
    }

    /// Relabel qubit `i` to `map[i]` inside a register of
    /// `n_inputs + n_ancilla` qubits.
    pub fn embed(&self, map: &[usize], n_inputs: usize, n_ancilla: usize) -> Result<Circuit> {
        let width = n_inputs + n_ancilla;
        if map.len() != self.n_qubits() {
            return Err(Error::CountMismatch {
                expected: self.n_qubits(),
                got: map.len(),
            });
        }
        let mut seen = vec![false; width];
        for &m in map {
            if m >= width {
                return Err(Error::OutOfRange { qubit: m, n: width });
            }
            if seen[m] {
                return Err(Error::DuplicateQubit(m));
            }
            seen[m] = true;
        }
        Ok(Circuit {
            n_inputs,
            n_ancilla,
            output: self.output.map(|t| map[t]),
            layers: self
                .layers
                .iter()
                .map(|l| Layer::new(l.gates.iter().map(|g| g.relabel(map)).collect()))
                .collect(),
        })
    }

    /// Same circuit on a wider register (extra qubits appended as ancillae).
    pub fn widen(&self, extra: usize) -> Circuit {
        Circuit {
            n_ancilla: self.n_ancilla + extra,
            ..self.clone()
        }
    }
}
