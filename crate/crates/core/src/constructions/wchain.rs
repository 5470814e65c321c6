//! The chain from `(|0^n> + |W_n>)/sqrt(2)` to the poor man's fanout.
//!
//! Shared layout for the controlled maps: control at qubit 0, targets at
//! `1..=n`, two work ancillae at `n+1` and `n+2`.

use alloc::vec::Vec;

use super::{amplify::reflection_from_prep, exact_amp_amp, extend, range, splice};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{Gate, PrimitiveOp, SingleQubitState, Unitary2};
use crate::library::{controlled_rot, nor_gate, or_gate};
use crate::math::powi;
use crate::C64;

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            value: 0.0,
        });
    }
    crate::check_cap(n + 3)
}

/// Clean preparation of `(|0^n> + |W_n>)/sqrt(2)` on qubits `0..n`; qubits
/// `n` and `n+1` are work ancillae that end at 0.
pub fn zero_w_prep(n: usize) -> Result<Circuit> {
    check_n(n)?;
    let p = 1.0 / (n as f64 + 1.0);
    let targets = range(0, n);
    let prep = Unitary2::preparing(SingleQubitState::eps(p)?);
    let mut base = Circuit::new(0, n + 1).with_output(n);
    extend(&mut base, targets.iter().map(|&q| Gate::unitary(q, prep)));
    // Flag strings of weight at most one.
    base.push(nor_gate(&targets, n)?);
    let mut qs = targets.clone();
    qs.push(n);
    base.push(Gate::primitive(qs, PrimitiveOp::Exact(1)));
    let good = 2.0 * powi(1.0 - p, n as i32);
    exact_amp_amp(&base, good)
}

fn controlled_layout_map(n: usize) -> Vec<usize> {
    // zero_w_prep qubits: targets 0..n, then two ancillae.
    (1..=n).chain([n + 1, n + 2]).collect()
}

/// `|0>_x|0^n> -> |0>_x|0^n>`, `|1>_x|0^n> -> |1>_x|W_n>`.
pub fn controlled_w(n: usize) -> Result<Circuit> {
    check_n(n)?;
    let zw = zero_w_prep(n)?;
    let map = controlled_layout_map(n);
    let targets = range(1, n + 1);

    // (|1>|0^n> - |0>|W_n>)/sqrt(2), up to sign.
    let mut phi = Circuit::new(0, n + 3);
    splice(&mut phi, &zw, &map)?;
    extend(&mut phi, or_gate(&targets, 0)?);
    extend(&mut phi, [Gate::x(0), Gate::z(0)]);
    let r_phi = reflection_from_prep(&phi, &range(0, n + 1))?;

    let mut c = Circuit::new(n + 1, 2);
    splice(&mut c, &zw, &map)?;
    c.append(&r_phi)?;
    c.push(Gate::h(0));
    extend(&mut c, or_gate(&targets, 0)?);
    Ok(c)
}

/// Prepares `alpha|0^n> + beta|W_n>` on qubits `1..=n`; qubit 0 and the two
/// work ancillae end at 0.
pub fn any_0w(n: usize, alpha: C64, beta: C64) -> Result<Circuit> {
    let s = SingleQubitState::new(alpha, beta)?;
    let cw = controlled_w(n)?;
    let mut c = Circuit::new(0, n + 3);
    c.push(Gate::unitary(0, Unitary2::preparing(s)));
    c.append(&cw)?;
    extend(&mut c, or_gate(&range(1, n + 1), 0)?);
    Ok(c)
}

/// Rotation parameter for [`uncompute_w`]: `1 - 1/(4p)` with
/// `p = (1 - 1/n)^{n-1}` the weight-one mass of `|1/n>^n`.
pub fn uncompute_w_gamma(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            value: 0.0,
        });
    }
    let p = powi(1.0 - 1.0 / n as f64, n as i32 - 1);
    Ok(1.0 - 1.0 / (4.0 * p))
}

/// `|1>_q|1/n>^n -> |1>_q|W_n>` and `|0>_q|0^n> -> |0>_q|0^n>`, where
/// `|1/n> = sqrt(1-1/n)|0> + sqrt(1/n)|1>`.
pub fn uncompute_w(n: usize) -> Result<Circuit> {
    check_n(n)?;
    let (q, a0, a1) = (0, n + 1, n + 2);
    let xs = range(1, n + 1);
    let gamma = uncompute_w_gamma(n)?;
    let mut exact: Vec<usize> = xs.clone();
    exact.push(a0);
    let exact = Gate::primitive(exact, PrimitiveOp::Exact(1));
    let ccrot = controlled_rot(&[q, a0], a1, gamma)?;

    let weak = Unitary2::preparing(SingleQubitState::eps(1.0 / n as f64)?);
    let mut prep = Circuit::new(0, n + 3);
    extend(&mut prep, xs.iter().map(|&x| Gate::unitary(x, weak)));
    prep.push(Gate::x(q));
    prep.push(exact.clone());
    prep.push(ccrot.clone());
    let r = reflection_from_prep(&prep, &range(0, n + 3))?;

    let mut c = Circuit::new(n + 1, 2);
    c.push(exact);
    c.push(ccrot);
    c.push(Gate::z(a1));
    c.append(&r)?;
    c.push(Gate::z(a1));
    c.push(Gate::cnot(q, a0));
    c.push(Gate::cnot(q, a1));
    Ok(c)
}

/// `|b>|0^n> -> |b>|b/n>^n`: controlled W followed by the inverse of
/// [`uncompute_w`].
pub fn poor_mans_fanout(n: usize) -> Result<Circuit> {
    let mut c = controlled_w(n)?;
    c.append(&uncompute_w(n)?.dagger())?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::zero_probability;
    use crate::sim::{run, run_from, Statevector};
    use crate::states::w_state;

    fn zero_or_w(n: usize, b: bool) -> Statevector {
        if b {
            w_state(n).unwrap()
        } else {
            Statevector::zero(n).unwrap()
        }
    }

    fn weak(n: usize, b: bool) -> Statevector {
        let s = if b {
            SingleQubitState::eps(1.0 / n as f64).unwrap()
        } else {
            SingleQubitState::zero()
        };
        Statevector::product(&alloc::vec![s; n]).unwrap()
    }

    /// `|b>_0 (x) mid (x) |00>`.
    fn layout(b: bool, mid: &Statevector) -> Statevector {
        let ctrl = Statevector::basis(1, b as usize).unwrap();
        ctrl.tensor(mid)
            .unwrap()
            .tensor(&Statevector::zero(2).unwrap())
            .unwrap()
    }

    fn fid(a: &Statevector, b: &Statevector) -> f64 {
        a.fidelity(b).unwrap()
    }

    #[test]
    fn zero_w_prep_overlap() {
        for n in 1..=6 {
            let out = run(&zero_w_prep(n).unwrap(), 0).unwrap();
            let want = {
                let mut a: Vec<C64> = w_state(n).unwrap().into_amplitudes();
                a[0] = C64::new(1.0, 0.0);
                Statevector::from_amplitudes(n, a)
                    .unwrap()
                    .normalized()
                    .unwrap()
            };
            let want = want.tensor(&Statevector::zero(2).unwrap()).unwrap();
            assert!(fid(&out, &want) >= 1.0 - 1e-9, "n={n}");
        }
    }

    #[test]
    fn controlled_w_map() {
        for n in 1..=5 {
            let c = controlled_w(n).unwrap();
            for b in [false, true] {
                let out = run_from(&c, &layout(b, &Statevector::zero(n).unwrap())).unwrap();
                assert!(
                    fid(&out, &layout(b, &zero_or_w(n, b))) >= 1.0 - 1e-9,
                    "n={n} b={b}"
                );
            }
        }
    }

    #[test]
    fn any_0w_superposition() {
        let (a, b) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        for n in 2..=4 {
            let out = run(&any_0w(n, a, b).unwrap(), 0).unwrap();
            let mut amps: Vec<C64> = w_state(n)
                .unwrap()
                .into_amplitudes()
                .iter()
                .map(|x| x * b)
                .collect();
            amps[0] = a;
            let mid = Statevector::from_amplitudes(n, amps).unwrap();
            assert!(fid(&out, &layout(false, &mid)) >= 1.0 - 1e-9);
        }
        assert!(any_0w(2, C64::new(1.0, 0.0), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn uncompute_and_fanout_maps() {
        for n in 1..=5 {
            let u = uncompute_w(n).unwrap();
            let out = run_from(&u, &layout(true, &weak(n, true))).unwrap();
            assert!(fid(&out, &layout(true, &w_state(n).unwrap())) >= 1.0 - 1e-9);
            let out = run_from(&u, &layout(false, &weak(n, false))).unwrap();
            assert!(fid(&out, &layout(false, &weak(n, false))) >= 1.0 - 1e-9);

            let f = poor_mans_fanout(n).unwrap();
            for b in [false, true] {
                let out = run_from(&f, &layout(b, &Statevector::zero(n).unwrap())).unwrap();
                assert!(
                    fid(&out, &layout(b, &weak(n, b))) >= 1.0 - 1e-9,
                    "n={n} b={b}"
                );
                assert!(zero_probability(&out, &[n + 1, n + 2]).unwrap() >= 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn fanout_of_two_gives_plus_states() {
        let out = run_from(
            &poor_mans_fanout(2).unwrap(),
            &layout(true, &Statevector::zero(2).unwrap()),
        )
        .unwrap();
        let plus = Statevector::product(&[SingleQubitState::plus(); 2]).unwrap();
        assert!(fid(&out, &layout(true, &plus)) >= 1.0 - 1e-12);
    }

    #[test]
    fn builder_then_dagger_is_identity() {
        let c = poor_mans_fanout(2).unwrap();
        let mut both = c.clone();
        both.append(&c.dagger()).unwrap();
        for x in 0..(1usize << both.n_qubits()) {
            let out = run_from(&both, &Statevector::basis(both.n_qubits(), x).unwrap()).unwrap();
            assert!((out.amplitudes()[x].norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn limiting_weight_ratio() {
        let v = powi(1.0 - 1.0 / 65.0, 64);
        assert!((v - 0.370_735).abs() < 1e-6);
        assert!((uncompute_w_gamma(1).unwrap() - 0.75).abs() < 1e-15);
    }
}
