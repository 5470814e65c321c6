use alloc::vec::Vec;

use super::range;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::fourier::{wht, BooleanFn};
use crate::gates::{Gate, SingleQubitState};
use crate::math::sqrt;
use crate::sim::{run, Statevector};
use crate::C64;

/// Clean version of a single-output circuit.
///
/// Layout of the result on `n` inputs and `m` original ancillae: inputs at
/// `0..n`, their copies at `n..2n`, the original ancillae at `2n..2n+m` and
/// the new output `2n+m`. For every input `x`,
/// `<x, b, 0..0| C' |x, 0..0> = p_b(x)` where `f_C(x) = p_0(x) - p_1(x)`.
pub fn make_clean(c: &Circuit) -> Result<Circuit> {
    let t = c.output.ok_or(Error::NoOutput)?;
    let (n, m) = (c.n_inputs, c.n_ancilla);
    crate::check_cap(2 * n + m + 1)?;
    let out = 2 * n + m;
    let map: Vec<usize> = (0..n)
        .map(|i| n + i)
        .chain((0..m).map(|j| 2 * n + j))
        .collect();
    let inner = c.embed(&map, n, n + m + 1)?;
    let t_inner = map[t];

    let mut cc = Circuit::new(n, n + m + 1).with_output(out);
    let copy: Vec<Gate> = (0..n).map(|i| Gate::cnot(i, n + i)).collect();
    cc.push_layer(copy.clone());
    cc.append(&inner)?;
    cc.push_layer(alloc::vec![Gate::cnot(t_inner, out)]);
    cc.append(&inner.dagger())?;
    cc.push_layer(copy);
    Ok(cc)
}

/// Normalized high-degree part of `f`:
/// `sum_{|S| >= k} f^(S) |S> / sqrt(W^{>=k}[f])`.
pub fn t_k_state(f: &BooleanFn, k: usize) -> Result<Statevector> {
    let spec = wht(f);
    let mass = spec.weight_at_least(k);
    if mass <= 1e-12 {
        return Err(Error::VanishingMass { level: k });
    }
    let norm = 1.0 / sqrt(mass);
    let amps = spec
        .coeffs()
        .iter()
        .enumerate()
        .map(|(s, &c)| {
            C64::new(
                if s.count_ones() as usize >= k {
                    c * norm
                } else {
                    0.0
                },
                0.0,
            )
        })
        .collect();
    Statevector::from_amplitudes(f.n(), amps)
}

/// `H^n |T_k>`.
pub fn t_k_hat(f: &BooleanFn, k: usize) -> Result<Statevector> {
    let mut s = t_k_state(f, k)?;
    for q in 0..f.n() {
        s.apply_gate(&Gate::h(q))?;
    }
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct PsiStar {
    /// `H_X . C' . H_X`, to be run on the all-zero state.
    pub circuit: Circuit,
    pub clean: Circuit,
    /// Final state `H_X C' |+^n, 0..0>`.
    pub state: Statevector,
    /// `C' |+^n, 0..0>`, before the last Hadamard layer.
    pub before_hadamard: Statevector,
    pub inputs: Vec<usize>,
    pub output: usize,
    /// Clean-computation ancillae other than the output.
    pub ancillae: Vec<usize>,
}

pub fn build_psi_star(c: &Circuit) -> Result<PsiStar> {
    let clean = make_clean(c)?;
    let n = c.n_inputs;
    let width = clean.n_qubits();
    let output = clean.output.expect("make_clean sets the output");
    let hs: Vec<Gate> = (0..n).map(Gate::h).collect();

    let mut first = Circuit::new(0, width);
    if n > 0 {
        first.push_layer(hs.clone());
    }
    first.append(&clean)?;
    let before_hadamard = run(&first, 0)?;

    let mut circuit = first;
    if n > 0 {
        circuit.push_layer(hs);
    }
    let mut state = before_hadamard.clone();
    for q in 0..n {
        state.apply_gate(&Gate::h(q))?;
    }
    let ancillae = (n..width).filter(|&q| q != output).collect();
    Ok(PsiStar {
        circuit,
        clean,
        state,
        before_hadamard,
        inputs: range(0, n),
        output,
        ancillae,
    })
}

/// `|<T^_k|_X <-|_out <0..0|_A  C'|+^n, 0..0>|`.
pub fn bilinear_extraction(ps: &PsiStar, f: &BooleanFn, k: usize) -> Result<f64> {
    if f.n() != ps.inputs.len() {
        return Err(Error::Dimension(f.n(), ps.inputs.len()));
    }
    let mut bra: Vec<(usize, SingleQubitState)> =
        alloc::vec![(ps.output, SingleQubitState::minus())];
    bra.extend(ps.ancillae.iter().map(|&q| (q, SingleQubitState::zero())));
    let rest = ps.before_hadamard.contract(&bra)?;
    let hat = t_k_hat(f, k)?;
    Ok(hat.inner(&rest)?.norm())
}
