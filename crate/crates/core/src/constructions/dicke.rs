use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{Gate, SingleQubitState};
use crate::math::{binomial_pmf, binomial_u128, exp, floor, log2, sqrt};
use crate::rng::SplitMix64;
use crate::sim::{run_from, Projector, Statevector};
use crate::states::{dicke, felinity_from_probs};

/// Largest `n` for exact hit probabilities.
pub const HIT_CAP: usize = 120;

/// `max(1, floor(k / log2(k)^2))`.
pub fn block_count_partition(k: usize) -> usize {
    let l = log2(k as f64);
    if l <= 0.0 {
        return 1;
    }
    (floor(k as f64 / (l * l)) as usize).max(1)
}

/// `max(1, floor(k / log2(k)))`.
pub fn block_count_dicke(k: usize) -> usize {
    let l = log2(k as f64);
    if l <= 0.0 {
        return 1;
    }
    (floor(k as f64 / l) as usize).max(1)
}

fn split_sizes(n: usize, l: usize) -> Vec<usize> {
    (0..l).map(|i| n / l + usize::from(i < n % l)).collect()
}

/// `0..n` cut into `l` consecutive blocks whose sizes differ by at most one.
pub fn contiguous_blocks(n: usize, l: usize) -> Result<Vec<Vec<usize>>> {
    if l == 0 || l > n {
        return Err(Error::Parameter {
            name: "blocks",
            value: l as f64,
        });
    }
    let mut start = 0;
    Ok(split_sizes(n, l)
        .into_iter()
        .map(|s| {
            let b = (start..start + s).collect();
            start += s;
            b
        })
        .collect())
}

/// Uniformly random partition of `0..n` into `block_count_partition(k)`
/// near-equal blocks.
pub fn block_partition(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k == 0 || k > n {
        return Err(Error::Parameter {
            name: "k",
            value: k as f64,
        });
    }
    let l = block_count_partition(k);
    let mut perm: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut perm);
    let mut start = 0;
    Ok(split_sizes(n, l)
        .into_iter()
        .map(|s| {
            let mut b = perm[start..start + s].to_vec();
            b.sort_unstable();
            start += s;
            b
        })
        .collect())
}

/// Probability that a uniform string of weight at least `k` has a 1 in
/// every block. Exact integer counting through the generating polynomial.
pub fn all_blocks_hit_probability(n: usize, k: usize, blocks: &[Vec<usize>]) -> Result<f64> {
    if n > HIT_CAP {
        return Err(Error::Budget(alloc::format!("n = {n} exceeds {HIT_CAP}")));
    }
    if k > n {
        return Err(Error::Parameter {
            name: "k",
            value: k as f64,
        });
    }
    let mut seen = vec![false; n];
    for b in blocks {
        if b.is_empty() {
            return Err(Error::Precondition(alloc::string::String::from(
                "empty block",
            )));
        }
        for &q in b {
            if q >= n {
                return Err(Error::OutOfRange { qubit: q, n });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit(q));
            }
            seen[q] = true;
        }
    }
    let free = seen.iter().filter(|s| !**s).count() as u64;
    let binom = |a: u64, b: u64| binomial_u128(a, b).expect("n within cap");

    // poly[t] = number of weight-t strings hitting every block.
    let mut poly: Vec<u128> = (0..=free).map(|t| binom(free, t)).collect();
    for b in blocks {
        let size = b.len() as u64;
        let factor: Vec<u128> = (0..=size)
            .map(|j| if j == 0 { 0 } else { binom(size, j) })
            .collect();
        let mut next = vec![0u128; poly.len() + factor.len() - 1];
        for (i, &p) in poly.iter().enumerate() {
            if p == 0 {
                continue;
            }
            for (j, &f) in factor.iter().enumerate() {
                next[i + j] += p * f;
            }
        }
        poly = next;
    }
    let hit: u128 = poly.iter().skip(k).sum();
    let total: u128 = (k as u64..=n as u64).map(|t| binom(n as u64, t)).sum();
    Ok(hit as f64 / total as f64)
}

#[derive(Debug, Clone)]
pub struct DickeLayer {
    pub circuit: Circuit,
    pub n: usize,
    pub k: usize,
    pub blocks: Vec<Vec<usize>>,
    /// Register holding one flag per block, at `n..n+blocks.len()`.
    pub flags: Vec<usize>,
    pub state: Statevector,
    pub one_weight: f64,
    pub zero_weight: f64,
    /// `Pr[Binom(n, k/n) = k]`.
    pub binomial_pmf: f64,
    /// `e^{-1} / sqrt(k)`.
    pub binomial_floor: f64,
    pub felinity: f64,
    /// `1 / (8k)`.
    pub asymptotic_floor: f64,
}

impl DickeLayer {
    pub fn product_bound_holds(&self) -> bool {
        self.felinity + 1e-12 >= self.one_weight * self.zero_weight
    }
}

/// One layer of block reflections `I - 2|p>^m<p|^m (x) |+><+|` with
/// `p = k/n`, applied to `|D^n_k>|0^l>`.
pub fn dicke_felinity_layer(n: usize, k: usize) -> Result<DickeLayer> {
    if k == 0 || k > n {
        return Err(Error::Parameter {
            name: "k",
            value: k as f64,
        });
    }
    let l = block_count_dicke(k).min(n);
    crate::check_cap(n + l)?;
    let blocks = contiguous_blocks(n, l)?;
    let p = k as f64 / n as f64;
    let ps = SingleQubitState::eps(p)?;
    let flags: Vec<usize> = (n..n + l).collect();

    let mut circuit = Circuit::new(n, l);
    circuit.push_layer(
        blocks
            .iter()
            .zip(&flags)
            .map(|(b, &f)| {
                let mut qs = b.clone();
                qs.push(f);
                let mut st = vec![ps; b.len()];
                st.push(SingleQubitState::plus());
                Gate::reflection(qs, st)
            })
            .collect(),
    );
    let start = dicke(n, k)?.tensor(&Statevector::zero(l)?)?;
    let state = run_from(&circuit, &start)?;
    let one_weight = state.slice_norm(&Projector::Basis {
        qubits: flags.clone(),
        bits: (1 << l) - 1,
    })?;
    let zero_weight = state.slice_norm(&Projector::Basis {
        qubits: flags.clone(),
        bits: 0,
    })?;
    let felinity = felinity_from_probs(&state.marginal_probabilities(&flags)?)?;
    Ok(DickeLayer {
        circuit,
        n,
        k,
        blocks,
        flags,
        state,
        one_weight,
        zero_weight,
        binomial_pmf: binomial_pmf(n as u64, k as u64, p),
        binomial_floor: exp(-1.0) / sqrt(k as f64),
        felinity,
        asymptotic_floor: 1.0 / (8.0 * k as f64),
    })
}
