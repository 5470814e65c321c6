//! Named states and the measures used on them: felinity, trace distance,
//! overlap with a pure state and the all-zero / all-one branch weights.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gates::{SingleQubitState, Unitary2};
use crate::math::{binomial, cos, sin, sqrt};
use crate::sim::{hermitian_eigenvalues, DensityMatrix, Statevector};
use crate::C64;

/// Largest register for the rotated-W helpers.
pub const ROTATED_W_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    Dicke {
        n: usize,
        k: usize,
    },
    W {
        n: usize,
    },
    Cat {
        n: usize,
    },
    /// `bits[j]` is qubit `j`.
    Basis {
        bits: Vec<bool>,
    },
    EpsProduct {
        eps: f64,
        n: usize,
    },
    RotatedW {
        n: usize,
        beta: f64,
    },
    OddParityMixture {
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum BuiltState {
    Pure(Statevector),
    Mixed(DensityMatrix),
}

impl BuiltState {
    pub fn n_qubits(&self) -> usize {
        match self {
            BuiltState::Pure(s) => s.n_qubits(),
            BuiltState::Mixed(r) => r.n_qubits(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            BuiltState::Pure(s) => DensityMatrix::from_pure(s),
            BuiltState::Mixed(r) => r.clone(),
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        match self {
            BuiltState::Pure(s) => s.probabilities(),
            BuiltState::Mixed(r) => r.diagonal(),
        }
    }

    pub fn pure(&self) -> Option<&Statevector> {
        match self {
            BuiltState::Pure(s) => Some(s),
            BuiltState::Mixed(_) => None,
        }
    }
}

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

pub fn dicke(n: usize, k: usize) -> Result<Statevector> {
    if k > n {
        return Err(Error::Parameter {
            name: "k",
            value: k as f64,
        });
    }
    crate::check_cap(n)?;
    let a = 1.0 / sqrt(binomial(n as u64, k as u64));
    let amps = (0..1usize << n)
        .map(|y| {
            if y.count_ones() as usize == k {
                real(a)
            } else {
                real(0.0)
            }
        })
        .collect();
    Statevector::from_amplitudes(n, amps)
}

pub fn w_state(n: usize) -> Result<Statevector> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            value: 0.0,
        });
    }
    dicke(n, 1)
}

pub fn cat(n: usize) -> Result<Statevector> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            value: 0.0,
        });
    }
    crate::check_cap(n)?;
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![real(0.0); 1 << n];
    amps[0] = real(h);
    amps[(1 << n) - 1] = real(h);
    Statevector::from_amplitudes(n, amps)
}

/// `R_y(beta) = [[cos(b/2), -sin(b/2)], [sin(b/2), cos(b/2)]]` on every qubit
/// of `|W_n>`.
pub fn rotated_w(n: usize, beta: f64) -> Result<Statevector> {
    rotate_all(&w_state(n)?, &Unitary2::ry(beta))
}

fn rotate_all(psi: &Statevector, u: &Unitary2) -> Result<Statevector> {
    let mut out = psi.clone();
    for q in 0..psi.n_qubits() {
        out.apply_gate(&crate::gates::Gate::unitary(q, *u))?;
    }
    Ok(out)
}

pub fn build_state(spec: &NamedState) -> Result<BuiltState> {
    let pure = match spec {
        NamedState::Dicke { n, k } => dicke(*n, *k)?,
        NamedState::W { n } => w_state(*n)?,
        NamedState::Cat { n } => cat(*n)?,
        NamedState::Basis { bits } => {
            let idx = bits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &b)| acc | ((b as usize) << j));
            Statevector::basis(bits.len(), idx)?
        }
        NamedState::EpsProduct { eps, n } => {
            let s = SingleQubitState::eps(*eps)?;
            Statevector::product(&vec![s; *n])?
        }
        NamedState::RotatedW { n, beta } => {
            if *n > ROTATED_W_CAP {
                return Err(Error::QubitCap {
                    requested: *n,
                    cap: ROTATED_W_CAP,
                });
            }
            rotated_w(*n, *beta)?
        }
        NamedState::OddParityMixture { n } => {
            if *n == 0 {
                return Err(Error::Parameter {
                    name: "n",
                    value: 0.0,
                });
            }
            crate::check_cap(*n)?;
            let w = 1.0 / (1u64 << (*n - 1)) as f64;
            let probs: Vec<f64> = (0..1usize << n)
                .map(|y| if y.count_ones() % 2 == 1 { w } else { 0.0 })
                .collect();
            return Ok(BuiltState::Mixed(DensityMatrix::from_diagonal(*n, &probs)?));
        }
    };
    Ok(BuiltState::Pure(pure))
}

/// `2 sum_y p(y) p(not y)` for a computational-basis distribution.
pub fn felinity_from_probs(probs: &[f64]) -> Result<f64> {
    let d = probs.len();
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::Dimension(d, d.next_power_of_two()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(total));
    }
    let flip = d - 1;
    Ok(2.0
        * probs
            .iter()
            .enumerate()
            .map(|(y, p)| p * probs[y ^ flip])
            .sum::<f64>())
}

/// Felinity from the diagonal of `rho`.
pub fn felinity(rho: &DensityMatrix) -> Result<f64> {
    felinity_from_probs(&rho.diagonal())
}

pub fn felinity_pure(psi: &Statevector) -> Result<f64> {
    felinity_from_probs(&psi.probabilities())
}

/// Felinity from the full matrices `rho` and `X^n rho X^n`.
pub fn felinity_dense(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    let d = m.nrows();
    let flip = d - 1;
    let conj = nalgebra::DMatrix::from_fn(d, d, |i, j| m[(i ^ flip, j ^ flip)]);
    let mut acc = 0.0;
    for y in 0..d {
        acc += (m[(y, y)] * conj[(y, y)]).re;
    }
    Ok(2.0 * acc)
}

/// `TD(rho, sigma) = (1/2) sum |eig(rho - sigma)|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != sigma.n_qubits() {
        return Err(Error::Dimension(rho.n_qubits(), sigma.n_qubits()));
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok(0.5
        * hermitian_eigenvalues(&diff)
            .iter()
            .map(|e| e.abs())
            .sum::<f64>())
}

/// `<psi|rho|psi>`.
pub fn fidelity_with(psi: &Statevector, rho: &DensityMatrix) -> Result<f64> {
    rho.expectation(psi)
}

/// `(<0^n|rho|0^n>, <1^n|rho|1^n>)`.
pub fn branch_weights(rho: &DensityMatrix) -> (f64, f64) {
    let d = rho.diagonal();
    (d[0], d[d.len() - 1])
}

/// `<D^n_k|psi>` for every `k`.
pub fn dicke_coefficients(psi: &Statevector) -> Vec<C64> {
    let n = psi.n_qubits();
    let mut acc = vec![real(0.0); n + 1];
    for (y, a) in psi.amplitudes().iter().enumerate() {
        acc[y.count_ones() as usize] += a;
    }
    acc.iter()
        .enumerate()
        .map(|(k, s)| s / sqrt(binomial(n as u64, k as u64)))
        .collect()
}

/// Dicke-basis coefficients of `R_y(beta)^n |W_n>` in closed form.
pub fn rotated_w_dicke_coefficients(n: usize, beta: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            value: 0.0,
        });
    }
    let (c, s) = (cos(beta / 2.0), sin(beta / 2.0));
    let pw = |x: f64, e: usize| crate::math::powi(x, e as i32);
    let norm = 1.0 / sqrt(n as f64);
    Ok((0..=n)
        .map(|k| {
            // Weight-k string: the excitation either lands on a 1 or on a 0.
            let on_one = if k > 0 {
                k as f64 * pw(c, n - k + 1) * pw(s, k - 1)
            } else {
                0.0
            };
            let on_zero = if k < n {
                (n - k) as f64 * pw(s, k + 1) * pw(c, n - k - 1)
            } else {
                0.0
            };
            sqrt(binomial(n as u64, k as u64)) * norm * (on_one - on_zero)
        })
        .collect())
}

/// `2 sum_k |a_k|^2 |a_{n-k}|^2 / C(n,k)` for a permutation-symmetric state
/// with Dicke coefficients `alphas`.
pub fn dicke_basis_felinity(alphas: &[C64]) -> Result<f64> {
    if alphas.is_empty() {
        return Err(Error::Dimension(0, 1));
    }
    let n = alphas.len() - 1;
    Ok(2.0
        * (0..=n)
            .map(|k| alphas[k].norm_sqr() * alphas[n - k].norm_sqr() / binomial(n as u64, k as u64))
            .sum::<f64>())
}

/// Felinity of `R_y(beta)^n |W_n>` by simulation.
pub fn felinity_rotated_w(n: usize, beta: f64) -> Result<f64> {
    if n > ROTATED_W_CAP {
        return Err(Error::QubitCap {
            requested: n,
            cap: ROTATED_W_CAP,
        });
    }
    felinity_pure(&rotated_w(n, beta)?)
}
