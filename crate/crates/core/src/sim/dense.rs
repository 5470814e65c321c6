//! Full-matrix reference implementation, entry by entry from the gate
//! definitions. Used as an oracle for the fast kernels and for observables.

use nalgebra::{DMatrix, DVector};

use super::Statevector;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::math::gather;
use crate::C64;

/// Largest register the oracle will build matrices for.
pub const DENSE_CAP: usize = 12;

fn cap(n: usize) -> Result<()> {
    if n > DENSE_CAP {
        Err(Error::QubitCap {
            requested: n,
            cap: DENSE_CAP,
        })
    } else {
        Ok(())
    }
}

/// `<i|G|j>` for a gate on an `n`-qubit register.
pub fn gate_entry(gate: &Gate, i: usize, j: usize) -> C64 {
    let qs = gate.qubits();
    let mask = crate::math::mask_of(qs);
    if i & !mask != j & !mask {
        return C64::new(0.0, 0.0);
    }
    let (li, lj) = (gather(i, qs), gather(j, qs));
    match gate {
        Gate::Reflection { state, .. } => {
            let mut ti = C64::new(1.0, 0.0);
            let mut tj = C64::new(1.0, 0.0);
            for (b, s) in state.iter().enumerate() {
                ti *= s.amp(li >> b);
                tj *= s.amp(lj >> b);
            }
            let delta = if li == lj { 1.0 } else { 0.0 };
            C64::new(delta, 0.0) - ti * tj.conj() * 2.0
        }
        Gate::Unitary { matrix, .. } => matrix.m[li][lj],
        Gate::Primitive { op, .. } => {
            let (img, neg) = op.map_local(lj, qs.len());
            if img == li {
                C64::new(if neg { -1.0 } else { 1.0 }, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }
    }
}

pub fn gate_matrix(gate: &Gate, n: usize) -> Result<DMatrix<C64>> {
    cap(n)?;
    let d = 1 << n;
    Ok(DMatrix::from_fn(d, d, |i, j| gate_entry(gate, i, j)))
}

/// Product of all gate matrices, first gate rightmost.
pub fn circuit_matrix(c: &Circuit) -> Result<DMatrix<C64>> {
    let n = c.n_qubits();
    cap(n)?;
    c.ensure_valid()?;
    let d = 1 << n;
    let mut u = DMatrix::<C64>::identity(d, d);
    for g in c.gates() {
        u = gate_matrix(g, n)? * u;
    }
    Ok(u)
}

pub fn apply(c: &Circuit, psi: &Statevector) -> Result<Statevector> {
    if c.n_qubits() != psi.n_qubits() {
        return Err(Error::CountMismatch {
            expected: psi.n_qubits(),
            got: c.n_qubits(),
        });
    }
    let u = circuit_matrix(c)?;
    let v = DVector::from_column_slice(psi.amplitudes());
    Statevector::from_amplitudes(psi.n_qubits(), (u * v).iter().copied().collect())
}
