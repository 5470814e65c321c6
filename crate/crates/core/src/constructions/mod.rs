//! Builders for the gadgets: clean computation, Fourier-mass extraction,
//! felinity-to-parity, reflections and exact amplitude amplification,
//! skewed-nekomata amplification, block partitions, the Dicke layer and the
//! W-state chain.

mod amplify;
mod clean;
mod dicke;
mod parity;
mod wchain;

pub use amplify::{
    amp_amp_gamma, exact_amp_amp, flag_weight, or_grid_distribution, reflection_from_prep,
    skewed_nekomata_amplify, SkewedNekomata,
};
pub use clean::{bilinear_extraction, build_psi_star, make_clean, t_k_hat, t_k_state, PsiStar};
pub use dicke::{
    all_blocks_hit_probability, block_count_dicke, block_count_partition, block_partition,
    contiguous_blocks, dicke_felinity_layer, DickeLayer,
};
pub use parity::felinity_to_parity_circuit;
pub use wchain::{
    any_0w, controlled_w, poor_mans_fanout, uncompute_w, uncompute_w_gamma, zero_w_prep,
};

use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::error::Result;
use crate::gates::Gate;
use crate::sim::{Projector, Statevector};

pub(crate) fn extend(c: &mut Circuit, gates: impl IntoIterator<Item = Gate>) {
    for g in gates {
        c.push(g);
    }
}

/// Append `src` relabelled through `map` onto `dst`.
pub(crate) fn splice(dst: &mut Circuit, src: &Circuit, map: &[usize]) -> Result<()> {
    let e = src.embed(map, dst.n_inputs, dst.n_ancilla)?;
    dst.append(&e)?;
    Ok(())
}

/// Probability that every qubit in `qubits` reads 0.
pub fn zero_probability(psi: &Statevector, qubits: &[usize]) -> Result<f64> {
    if qubits.is_empty() {
        return Ok(psi.norm_sqr());
    }
    psi.slice_norm(&Projector::Basis {
        qubits: qubits.to_vec(),
        bits: 0,
    })
}

pub(crate) fn range(lo: usize, hi: usize) -> Vec<usize> {
    (lo..hi).collect()
}
