//! Seeded random states, gates and circuit corpora.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::circuit::Circuit;
use crate::fourier::BooleanFn;
use crate::gates::{Gate, PrimitiveOp, SingleQubitState, Unitary2};
use crate::math::{acos_clamped, sqrt};
use crate::rng::SplitMix64;
use crate::sim::{DensityMatrix, Statevector};
use crate::C64;

/// Haar-random single-qubit state.
pub fn random_qubit(rng: &mut SplitMix64) -> SingleQubitState {
    let theta = acos_clamped(1.0 - 2.0 * rng.next_f64());
    SingleQubitState::bloch(theta, rng.uniform(-PI, PI))
}

/// Haar-random 2x2 unitary (ZYZ angles with a global phase).
pub fn random_unitary2(rng: &mut SplitMix64) -> Unitary2 {
    let gamma = 2.0 * acos_clamped(sqrt(rng.next_f64()));
    let u = Unitary2::rz(rng.uniform(0.0, 2.0 * PI))
        .mul(&Unitary2::ry(gamma))
        .mul(&Unitary2::rz(rng.uniform(0.0, 2.0 * PI)));
    Unitary2::global_phase(rng.uniform(0.0, 2.0 * PI)).mul(&u)
}

/// Haar-random pure state from complex Gaussian amplitudes.
pub fn random_state(rng: &mut SplitMix64, n: usize) -> Statevector {
    let amps: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(rng.normal(), rng.normal()))
        .collect();
    Statevector::from_amplitudes(n, amps)
        .and_then(|s| s.normalized())
        .expect("gaussian vector is nonzero")
}

/// Mixed state as the marginal of a random pure state on `n + extra` qubits.
pub fn random_density(rng: &mut SplitMix64, n: usize, extra: usize) -> DensityMatrix {
    let psi = random_state(rng, n + extra);
    let keep: Vec<usize> = (0..n).collect();
    psi.partial_trace(&keep).expect("valid keep set")
}

/// Random gate touching at most `max_arity` qubits of an `n`-qubit register.
/// Primitives are limited to the QAC-legal `cnot` and `cz` unless
/// `allow_primitives` is set.
pub fn random_gate_with(
    rng: &mut SplitMix64,
    n: usize,
    max_arity: usize,
    allow_primitives: bool,
) -> Gate {
    let kinds = if allow_primitives { 5 } else { 3 };
    let kind = if n < 2 { 0 } else { rng.below(kinds) };
    match kind {
        0 => Gate::unitary(rng.below(n), random_unitary2(rng)),
        1 => {
            let k = 2 + rng.below(max_arity.clamp(2, n) - 1);
            let qs = rng.choose_distinct(n, k);
            let st = (0..k).map(|_| random_qubit(rng)).collect();
            Gate::reflection(qs, st)
        }
        2 => {
            let qs = rng.choose_distinct(n, 2);
            if rng.below(2) == 0 {
                Gate::primitive(qs, PrimitiveOp::Cnot)
            } else {
                Gate::primitive(qs, PrimitiveOp::Cz)
            }
        }
        _ => {
            let k = 2 + rng.below(max_arity.clamp(2, n) - 1);
            let qs = rng.choose_distinct(n, k);
            let op = match rng.below(4) {
                0 => PrimitiveOp::Fanout,
                1 => PrimitiveOp::Parity,
                2 => PrimitiveOp::Exact(rng.below(k)),
                _ => PrimitiveOp::Threshold(rng.below(k)),
            };
            Gate::primitive(qs, op)
        }
    }
}

pub fn random_gate(rng: &mut SplitMix64, n: usize, max_arity: usize) -> Gate {
    random_gate_with(rng, n, max_arity, true)
}

/// Circuit with exactly `multi` multi-qubit QAC-legal gates, each preceded by
/// a layer of random single-qubit unitaries, and a closing unitary layer.
pub fn random_qac_circuit(
    rng: &mut SplitMix64,
    n_inputs: usize,
    n_ancilla: usize,
    multi: usize,
) -> Circuit {
    let n = n_inputs + n_ancilla;
    let mut c = Circuit::new(n_inputs, n_ancilla);
    let mut placed = 0;
    while placed < multi && n >= 2 {
        for q in 0..n {
            if rng.below(2) == 0 {
                c.push(Gate::unitary(q, random_unitary2(rng)));
            }
        }
        let g = random_gate_with(rng, n, n.min(4), false);
        if g.is_multi_qubit() {
            c.push(g);
            placed += 1;
        }
    }
    for q in 0..n {
        c.push(Gate::unitary(q, random_unitary2(rng)));
    }
    c
}

/// Single-output circuit: output register is one of the ancillae.
pub fn random_single_output_circuit(
    rng: &mut SplitMix64,
    n_inputs: usize,
    n_ancilla: usize,
    multi: usize,
) -> Circuit {
    assert!(n_ancilla >= 1, "needs an ancilla for the output");
    let t = n_inputs + rng.below(n_ancilla);
    random_qac_circuit(rng, n_inputs, n_ancilla, multi).with_output(t)
}

/// State-preparation circuit (no inputs) on `n` qubits.
pub fn random_prep_circuit(rng: &mut SplitMix64, n: usize, multi: usize) -> Circuit {
    random_qac_circuit(rng, 0, n, multi)
}

/// Random function with entries uniform in `[-1, 1]`.
pub fn random_boolean_fn(rng: &mut SplitMix64, n: usize) -> BooleanFn {
    let table = (0..1usize << n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    BooleanFn::new(n, table).expect("entries in range")
}

/// Random `+-1`-valued function.
pub fn random_sign_fn(rng: &mut SplitMix64, n: usize) -> BooleanFn {
    let table = (0..1usize << n)
        .map(|_| if rng.below(2) == 0 { 1.0 } else { -1.0 })
        .collect();
    BooleanFn::new(n, table).expect("entries in range")
}
