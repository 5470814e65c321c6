//! Standard gates expressed as product reflections.

use alloc::vec::Vec;

use crate::circuit::Layer;
use crate::error::{Error, Result};
use crate::gates::{Gate, SingleQubitState, Unitary2};
use crate::math::sqrt;
use crate::C64;

fn check_disjoint(controls: &[usize], target: usize) -> Result<()> {
    if controls.contains(&target) {
        return Err(Error::DuplicateQubit(target));
    }
    Ok(())
}

/// `I - 2|0..0><0..0|_controls (x) |-><-|_target`: flips the target when every
/// control is 0.
pub fn nor_gate(controls: &[usize], target: usize) -> Result<Gate> {
    check_disjoint(controls, target)?;
    let mut qubits = controls.to_vec();
    qubits.push(target);
    let mut state = alloc::vec![SingleQubitState::zero(); controls.len()];
    state.push(SingleQubitState::minus());
    Ok(Gate::reflection(qubits, state))
}

/// Flips the target when any control is 1: the NOR gate followed by X on the
/// target.
pub fn or_gate(controls: &[usize], target: usize) -> Result<Vec<Gate>> {
    Ok(alloc::vec![nor_gate(controls, target)?, Gate::x(target)])
}

/// Flips the target when every control is 1: the NOR gate conjugated by X on
/// each control.
pub fn and_gate(controls: &[usize], target: usize) -> Result<Vec<Gate>> {
    let mut g: Vec<Gate> = controls.iter().map(|&q| Gate::x(q)).collect();
    g.push(nor_gate(controls, target)?);
    g.extend(controls.iter().map(|&q| Gate::x(q)));
    Ok(g)
}

/// One layer of `cz(xs[i], ts[i])`.
pub fn cz_layer(xs: &[usize], ts: &[usize]) -> Result<Layer> {
    if xs.len() != ts.len() {
        return Err(Error::CountMismatch {
            expected: xs.len(),
            got: ts.len(),
        });
    }
    Ok(Layer::new(
        xs.iter().zip(ts).map(|(&x, &t)| Gate::cz(x, t)).collect(),
    ))
}

pub fn rot_gamma_gate(qubit: usize, gamma: f64) -> Result<Gate> {
    Ok(Gate::unitary(qubit, Unitary2::rot_gamma(gamma)?))
}

/// `-1` eigenvector of `Rot_gamma`, so that `Rot_gamma = I - 2|v><v|`.
pub fn rot_gamma_axis(gamma: f64) -> Result<SingleQubitState> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Parameter {
            name: "gamma",
            value: gamma,
        });
    }
    let g = sqrt(gamma);
    Ok(SingleQubitState {
        a0: C64::new(sqrt((1.0 - g) / 2.0), 0.0),
        a1: C64::new(-sqrt((1.0 + g) / 2.0), 0.0),
    })
}

/// `Rot_gamma` on `target` when every control is 1, as one product reflection.
pub fn controlled_rot(controls: &[usize], target: usize, gamma: f64) -> Result<Gate> {
    check_disjoint(controls, target)?;
    let mut qubits = controls.to_vec();
    qubits.push(target);
    let mut state = alloc::vec![SingleQubitState::one(); controls.len()];
    state.push(rot_gamma_axis(gamma)?);
    Ok(Gate::reflection(qubits, state))
}

/// `I - 2|0..0><0..0|` on `qubits`.
pub fn reflect_zero(qubits: &[usize]) -> Gate {
    Gate::reflection(
        qubits.to_vec(),
        alloc::vec![SingleQubitState::zero(); qubits.len()],
    )
}

/// Apply a special unitary `v` to `target` when the controls read `config`
/// (bit `j` of `config` for `controls[j]`). Uses two product reflections:
/// `(n1.sigma)(n2.sigma) = v` for suitable Bloch vectors `n1`, `n2`.
pub fn controlled_su2(
    controls: &[usize],
    config: usize,
    target: usize,
    v: &Unitary2,
) -> Result<Vec<Gate>> {
    check_disjoint(controls, target)?;
    let det = v.det();
    if (det - 1.0).norm() > 1e-9 || !v.is_unitary(1e-9) {
        return Err(Error::Precondition(alloc::format!(
            "controlled_su2 needs det 1, got {}",
            det
        )));
    }
    // v = c I - i (w . sigma) with w = s m.
    let m = v.m;
    let c = m[0][0].re;
    let w = [-m[1][0].im, m[1][0].re, -m[0][0].im];
    let wn = sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if wn < 1e-15 {
        if c > 0.0 {
            return Ok(Vec::new());
        }
        // v = -I: two reflections about orthogonal axes.
        return pair(controls, config, target, [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]);
    }
    let u = perpendicular(w);
    let cross = [
        w[1] * u[2] - w[2] * u[1],
        w[2] * u[0] - w[0] * u[2],
        w[0] * u[1] - w[1] * u[0],
    ];
    let n2 = [
        c * u[0] - cross[0],
        c * u[1] - cross[1],
        c * u[2] - cross[2],
    ];
    pair(controls, config, target, u, n2)
}

fn perpendicular(w: [f64; 3]) -> [f64; 3] {
    let pick = if w[0].abs() <= w[1].abs() && w[0].abs() <= w[2].abs() {
        [1.0, 0.0, 0.0]
    } else if w[1].abs() <= w[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let wn2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    let d = (pick[0] * w[0] + pick[1] * w[1] + pick[2] * w[2]) / wn2;
    let u = [pick[0] - d * w[0], pick[1] - d * w[1], pick[2] - d * w[2]];
    let un = sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    [u[0] / un, u[1] / un, u[2] / un]
}

fn pair(
    controls: &[usize],
    config: usize,
    target: usize,
    n1: [f64; 3],
    n2: [f64; 3],
) -> Result<Vec<Gate>> {
    let mut qubits = controls.to_vec();
    qubits.push(target);
    let ctrl: Vec<SingleQubitState> = (0..controls.len())
        .map(|j| SingleQubitState::basis((config >> j) & 1 == 1))
        .collect();
    let mk = |n: [f64; 3]| {
        let mut s = ctrl.clone();
        s.push(SingleQubitState::from_bloch_vector(n));
        Gate::reflection(qubits.clone(), s)
    };
    // Product is R1 R2 as an operator, so R2 must be applied first.
    Ok(alloc::vec![mk(n2), mk(n1)])
}
