//! Dense statevector simulation.
//!
//! Product reflections are applied as a rank-one update per configuration of
//! the untouched qubits, `psi <- psi - 2 theta <theta|_S psi`, so a gate on `k`
//! qubits costs `O(2^n)` regardless of `k`.

pub mod dense;
mod density;

use alloc::vec;
use alloc::vec::Vec;

pub use density::{hermitian_eigenvalues, DensityMatrix};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{Gate, PrimitiveOp, SingleQubitState, Unitary2};
use crate::math::{gather, mask_of, scatter};
use crate::{check_cap, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Selects basis states on a subset of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projector {
    /// `bits` (bit `j` for `qubits[j]`) on the subset.
    Basis {
        qubits: Vec<usize>,
        bits: usize,
    },
    HammingAtLeast {
        qubits: Vec<usize>,
        k: usize,
    },
    HammingExact {
        qubits: Vec<usize>,
        k: usize,
    },
}

impl Projector {
    pub fn qubits(&self) -> &[usize] {
        match self {
            Projector::Basis { qubits, .. }
            | Projector::HammingAtLeast { qubits, .. }
            | Projector::HammingExact { qubits, .. } => qubits,
        }
    }

    /// Whether the local configuration `local` of the subset is selected.
    pub fn accepts(&self, local: usize) -> bool {
        let w = local.count_ones() as usize;
        match self {
            Projector::Basis { bits, .. } => local == *bits,
            Projector::HammingAtLeast { k, .. } => w >= *k,
            Projector::HammingExact { k, .. } => w == *k,
        }
    }
}

pub(crate) fn check_subset(qubits: &[usize], n: usize) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::OutOfRange { qubit: q, n });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Complex amplitudes over `2^n` basis states, little-endian.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<C64>,
}

impl Statevector {
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_cap(n)?;
        if index >> n != 0 {
            return Err(Error::InputLength {
                input: index,
                n_inputs: n,
            });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Ok(Self { n, amps })
    }

    /// Wraps raw amplitudes; the vector is not renormalized.
    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        check_cap(n)?;
        if amps.len() != 1 << n {
            return Err(Error::Dimension(amps.len(), 1 << n));
        }
        Ok(Self { n, amps })
    }

    /// `states[0] (x) states[1] (x) ...` with `states[j]` on qubit `j`.
    pub fn product(states: &[SingleQubitState]) -> Result<Self> {
        let n = states.len();
        check_cap(n)?;
        let mut amps = vec![ONE; 1 << n];
        for (i, a) in amps.iter_mut().enumerate() {
            for (j, s) in states.iter().enumerate() {
                *a *= s.amp(i >> j);
            }
        }
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Rescaled copy; errors on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = crate::math::sqrt(self.norm_sqr());
        if n < 1e-300 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self {
            n: self.n,
            amps: self.amps.iter().map(|a| a / n).collect(),
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::Dimension(self.n, other.n));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `self` on the low qubits, `high` on the qubits above.
    pub fn tensor(&self, high: &Self) -> Result<Self> {
        let n = self.n + high.n;
        check_cap(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for h in &high.amps {
            for l in &self.amps {
                amps.push(l * h);
            }
        }
        Ok(Self { n, amps })
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Distribution of the computational-basis outcome on `qubits`
    /// (bit `j` for `qubits[j]`).
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        check_subset(qubits, self.n)?;
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[gather(i, qubits)] += a.norm_sqr();
        }
        Ok(out)
    }

    pub fn prob_bit(&self, qubit: usize, bit: bool) -> Result<f64> {
        check_subset(&[qubit], self.n)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| ((i >> qubit) & 1 == 1) == bit)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `<psi| Z_qubit |psi>`.
    pub fn z_expectation(&self, qubit: usize) -> Result<f64> {
        check_subset(&[qubit], self.n)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if (i >> qubit) & 1 == 0 {
                    a.norm_sqr()
                } else {
                    -a.norm_sqr()
                }
            })
            .sum())
    }

    /// Partial contraction `<bra|_T psi`: an unnormalized vector on the
    /// remaining qubits, kept in increasing index order.
    pub fn contract(&self, bra: &[(usize, SingleQubitState)]) -> Result<Self> {
        let qs: Vec<usize> = bra.iter().map(|(q, _)| *q).collect();
        check_subset(&qs, self.n)?;
        let rest: Vec<usize> = (0..self.n).filter(|q| !qs.contains(q)).collect();
        let mut out = vec![ZERO; 1 << rest.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let mut w = *a;
            for (q, s) in bra {
                w *= s.amp(i >> q).conj();
            }
            out[gather(i, &rest)] += w;
        }
        Ok(Self {
            n: rest.len(),
            amps: out,
        })
    }

    /// `<bra|psi>` where `bra` names a state for every qubit.
    pub fn amplitude(&self, bra: &[(usize, SingleQubitState)]) -> Result<C64> {
        if bra.len() != self.n {
            return Err(Error::Dimension(bra.len(), self.n));
        }
        Ok(self.contract(bra)?.amps[0])
    }

    /// `||P psi||^2`.
    pub fn slice_norm(&self, proj: &Projector) -> Result<f64> {
        check_subset(proj.qubits(), self.n)?;
        let qs = proj.qubits();
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| proj.accepts(gather(*i, qs)))
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `P psi`, left unnormalized.
    pub fn project(&self, proj: &Projector) -> Result<Self> {
        check_subset(proj.qubits(), self.n)?;
        let qs = proj.qubits();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if proj.accepts(gather(i, qs)) {
                    *a
                } else {
                    ZERO
                }
            })
            .collect();
        Ok(Self { n: self.n, amps })
    }

    /// Reduced state on `keep`; `keep[j]` becomes qubit `j`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        DensityMatrix::from_pure_partial(self, keep)
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for &q in gate.qubits() {
            if q >= self.n {
                return Err(Error::OutOfRange {
                    qubit: q,
                    n: self.n,
                });
            }
        }
        match gate {
            Gate::Reflection { qubits, state } => {
                if qubits.len() != state.len() {
                    return Err(Error::InvalidCircuit(alloc::string::String::from(
                        "payload arity",
                    )));
                }
                apply_reflection(&mut self.amps, qubits, state);
            }
            Gate::Unitary { qubit, matrix } => apply_unitary(&mut self.amps, *qubit, matrix),
            Gate::Primitive { qubits, op } => apply_primitive(&mut self.amps, qubits, *op),
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n_qubits() != self.n {
            return Err(Error::CountMismatch {
                expected: self.n,
                got: c.n_qubits(),
            });
        }
        c.ensure_valid()?;
        for g in c.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }
}

/// `C|x>|0^m>` with input bit `i` of `x` on qubit `i`.
pub fn run(c: &Circuit, x: usize) -> Result<Statevector> {
    if x >> c.n_inputs != 0 {
        return Err(Error::InputLength {
            input: x,
            n_inputs: c.n_inputs,
        });
    }
    let mut psi = Statevector::basis(c.n_qubits(), x)?;
    psi.apply_circuit(c)?;
    Ok(psi)
}

pub fn run_bits(c: &Circuit, bits: &[bool]) -> Result<Statevector> {
    if bits.len() != c.n_inputs {
        return Err(Error::Dimension(bits.len(), c.n_inputs));
    }
    let x = bits
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as usize) << i));
    run(c, x)
}

/// `C|psi>` for an arbitrary starting state.
pub fn run_from(c: &Circuit, psi: &Statevector) -> Result<Statevector> {
    let mut out = psi.clone();
    out.apply_circuit(c)?;
    Ok(out)
}

fn apply_reflection(amps: &mut [C64], qubits: &[usize], state: &[SingleQubitState]) {
    let k = qubits.len();
    let smask = mask_of(qubits);
    let comp = (amps.len() - 1) & !smask;
    // Nonzero entries of |theta> as (offset, amplitude).
    let mut support: Vec<(usize, C64)> = Vec::with_capacity(1 << k);
    for local in 0..(1usize << k) {
        let mut w = ONE;
        for (j, s) in state.iter().enumerate() {
            w *= s.amp(local >> j);
        }
        if w != ZERO {
            support.push((scatter(local, qubits), w));
        }
    }
    let mut r = 0usize;
    loop {
        let mut c = ZERO;
        for &(off, w) in &support {
            c += w.conj() * amps[r | off];
        }
        if c != ZERO {
            let c2 = c * 2.0;
            for &(off, w) in &support {
                amps[r | off] -= w * c2;
            }
        }
        r = ((r | smask).wrapping_add(1)) & comp;
        if r == 0 {
            break;
        }
    }
}

fn apply_unitary(amps: &mut [C64], q: usize, u: &Unitary2) {
    let stride = 1usize << q;
    let m = u.m;
    for block in (0..amps.len()).step_by(stride << 1) {
        for i in block..block + stride {
            let (a, b) = (amps[i], amps[i + stride]);
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[i + stride] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn apply_primitive(amps: &mut [C64], qubits: &[usize], op: PrimitiveOp) {
    if let PrimitiveOp::Cz = op {
        let m = mask_of(qubits);
        for (i, a) in amps.iter_mut().enumerate() {
            if i & m == m {
                *a = -*a;
            }
        }
        return;
    }
    let k = qubits.len();
    let m = mask_of(qubits);
    for i in 0..amps.len() {
        let local = gather(i, qubits);
        let (img, _) = op.map_local(local, k);
        if img > local {
            let j = (i & !m) | scatter(img, qubits);
            amps.swap(i, j);
        }
    }
}
