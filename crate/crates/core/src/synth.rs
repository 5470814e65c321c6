//! Exact state preparation from the zero state, one qubit at a time, using
//! controlled SU(2) gates built from product reflections.

use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{Gate, SingleQubitState, Unitary2};
use crate::library::controlled_su2;
use crate::math::sqrt;
use crate::sim::Statevector;
use crate::C64;

const SKIP: f64 = 1e-14;

/// Circuit `C` on `n` ancillae with `C|0^n> = psi` (no global phase).
///
/// Qubit `j` is rotated conditioned on every configuration of qubits `< j`
/// with nonzero marginal weight, so the gate count grows like `2^n`.
pub fn prepare_state(psi: &Statevector) -> Result<Circuit> {
    let n = psi.n_qubits();
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            value: 0.0,
        });
    }
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }
    let amps = psi.amplitudes();
    let mut c = Circuit::new(0, n);

    // weights[j][p]: mass of strings whose low j bits equal p.
    let mut weights: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    weights.push(amps.iter().map(|a| a.norm_sqr()).collect());
    for j in (0..n).rev() {
        let prev = weights.last().expect("seeded");
        weights.push(
            (0..1usize << j)
                .map(|p| prev[p] + prev[p | (1 << j)])
                .collect(),
        );
    }
    weights.reverse();

    for j in 0..n {
        let last = j == n - 1;
        let controls: Vec<usize> = (0..j).collect();
        for prefix in 0..1usize << j {
            let parent = sqrt(weights[j][prefix]);
            if parent < SKIP {
                continue;
            }
            let (lo, hi) = (prefix, prefix | (1 << j));
            let (a, b) = if last {
                (amps[lo], amps[hi])
            } else {
                (
                    C64::new(sqrt(weights[j + 1][lo]), 0.0),
                    C64::new(sqrt(weights[j + 1][hi]), 0.0),
                )
            };
            let v = Unitary2::preparing(SingleQubitState::normalized(a / parent, b / parent)?);
            if j == 0 {
                c.push(Gate::unitary(0, v));
            } else {
                for g in controlled_su2(&controls, prefix, j, &v)? {
                    c.push(g);
                }
            }
        }
    }
    Ok(c)
}
