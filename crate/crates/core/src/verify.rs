//! One verification routine per gadget, each producing a [`GadgetReport`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::circuit::Circuit;
use crate::constructions::{
    all_blocks_hit_probability, any_0w, bilinear_extraction, block_count_partition,
    block_partition, build_psi_star, controlled_w, dicke_felinity_layer, exact_amp_amp,
    felinity_to_parity_circuit, make_clean, poor_mans_fanout, skewed_nekomata_amplify, uncompute_w,
    zero_probability, zero_w_prep,
};
use crate::error::{Error, Result};
use crate::fourier::{correlation, extract_fc, parity_fn, wht};
use crate::gates::SingleQubitState;
use crate::majority::{
    ac0_postprocess_contract, approx_t_accept_prob, majority_circuit_correlation,
    weak_copy_circuit, weak_copy_input, weak_copy_prob, ApproxTDesign, Band,
};
use crate::math::{powi, sqrt};
use crate::random::{
    random_density, random_prep_circuit, random_single_output_circuit, random_state,
};
use crate::report::GadgetReport;
use crate::rng::SplitMix64;
use crate::sim::{run, run_from, Projector, Statevector};
use crate::states::{
    felinity, felinity_pure, felinity_rotated_w, rotated_w, trace_distance, w_state,
};
use crate::synth::prepare_state;
use crate::C64;

/// A verifiable statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma {
    pub id: &'static str,
    pub description: &'static str,
    pub default_n: usize,
    pub default_k: Option<usize>,
}

pub const LEMMAS: &[Lemma] = &[
    Lemma {
        id: "clean-comp",
        description: "clean computation returns amplitude p_b(x) on |x>|b>|0..0>",
        default_n: 2,
        default_k: None,
    },
    Lemma {
        id: "psi-star",
        description:
            "psi* keeps half the zero branch and half of every Fourier tail on the Hamming slice",
        default_n: 2,
        default_k: None,
    },
    Lemma {
        id: "tk-extract",
        description: "the |T_k> bilinear form equals sqrt(W>=k / 2)",
        default_n: 2,
        default_k: None,
    },
    Lemma {
        id: "fel-par",
        description: "felinity of the prepared marginal equals correlation with parity",
        default_n: 3,
        default_k: None,
    },
    Lemma {
        id: "lipschitz",
        description: "felinity is 8-Lipschitz in trace distance",
        default_n: 3,
        default_k: None,
    },
    Lemma {
        id: "monotone",
        description: "felinity does not decrease when a qubit is traced out",
        default_n: 4,
        default_k: None,
    },
    Lemma {
        id: "dicke-layer",
        description:
            "one block-reflection layer on a Dicke state marks all blocks with binomial weight",
        default_n: 8,
        default_k: Some(4),
    },
    Lemma {
        id: "partition",
        description: "random block partitions of a weight >= k string hit every block",
        default_n: 16,
        default_k: Some(8),
    },
    Lemma {
        id: "amp-amp",
        description: "single-round amplitude amplification is exact for alpha >= 1/4",
        default_n: 2,
        default_k: None,
    },
    Lemma {
        id: "w-chain",
        description: "W-state chain up to the poor man's fanout",
        default_n: 3,
        default_k: None,
    },
    Lemma {
        id: "weak-copy",
        description: "weak-copy test output law",
        default_n: 4,
        default_k: None,
    },
    Lemma {
        id: "approx-t",
        description: "amplified threshold discriminator accepts near t and rejects far from t",
        default_n: 256,
        default_k: None,
    },
    Lemma {
        id: "majority-corr",
        description:
            "parallel threshold grid correlates with MAJORITY; loss split into three terms",
        default_n: 255,
        default_k: None,
    },
    Lemma {
        id: "rotated-w",
        description: "felinity of rotated W states, direct and in the Dicke basis",
        default_n: 6,
        default_k: None,
    },
    Lemma {
        id: "post-process",
        description: "classical post-processing with error delta keeps correlation >= 1 - 2 delta",
        default_n: 3,
        default_k: None,
    },
    Lemma {
        id: "skew-neko",
        description: "skewed nekomata amplification and the OR grid",
        default_n: 2,
        default_k: None,
    },
];

pub fn lemma(id: &str) -> Option<&'static Lemma> {
    LEMMAS.iter().find(|l| l.id == id)
}

/// Parameters shared by every routine. Unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub n: usize,
    pub k: Option<usize>,
    pub seed: u64,
    /// Corpus size for randomized routines.
    pub samples: usize,
    pub a: f64,
    pub d: f64,
}

impl VerifyConfig {
    pub fn for_lemma(l: &Lemma, seed: u64) -> Self {
        Self {
            n: l.default_n,
            k: l.default_k,
            seed,
            samples: 10,
            a: 4.0,
            d: 8.0,
        }
    }
}

/// Runs the routine registered under `id`.
pub fn verify(id: &str, cfg: &VerifyConfig) -> Result<GadgetReport> {
    let mut r = GadgetReport::new(id).with_seed(cfg.seed);
    r.param("n", cfg.n as f64);
    if let Some(k) = cfg.k {
        r.param("k", k as f64);
    }
    match id {
        "clean-comp" => clean_comp(cfg, &mut r)?,
        "psi-star" => psi_star(cfg, &mut r)?,
        "tk-extract" => tk_extract(cfg, &mut r)?,
        "fel-par" => fel_par(cfg, &mut r)?,
        "lipschitz" => lipschitz(cfg, &mut r)?,
        "monotone" => monotone(cfg, &mut r)?,
        "dicke-layer" => dicke_layer(cfg, &mut r)?,
        "partition" => partition(cfg, &mut r)?,
        "amp-amp" => amp_amp(cfg, &mut r)?,
        "w-chain" => w_chain(cfg, &mut r)?,
        "weak-copy" => weak_copy(cfg, &mut r)?,
        "approx-t" => approx_t(cfg, &mut r)?,
        "majority-corr" => majority_corr(cfg, &mut r)?,
        "rotated-w" => rotated_w_check(cfg, &mut r)?,
        "post-process" => post_process(cfg, &mut r)?,
        "skew-neko" => skew_neko(cfg, &mut r)?,
        _ => return Err(Error::Precondition(format!("unknown lemma id {id}"))),
    }
    Ok(r)
}

fn need(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(String::from(what)))
    }
}

fn worst(acc: &mut f64, v: f64) {
    if v > *acc {
        *acc = v;
    }
}

fn corpus(cfg: &VerifyConfig, ancillae: usize) -> Vec<Circuit> {
    let mut rng = SplitMix64::new(cfg.seed);
    (0..cfg.samples)
        .map(|_| {
            let multi = 1 + rng.below(3);
            random_single_output_circuit(&mut rng, cfg.n, ancillae, multi)
        })
        .collect()
}

fn clean_comp(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((1..=4).contains(&cfg.n), "n must be in 1..=4")?;
    let (mut amp_err, mut clean_err) = (0.0, 0.0);
    for c in corpus(cfg, 2) {
        let f = extract_fc(&c)?;
        let cc = make_clean(&c)?;
        let out = cc.output.ok_or(Error::NoOutput)?;
        let rest: Vec<usize> = (cfg.n..cc.n_qubits()).filter(|&q| q != out).collect();
        for x in 0..1usize << cfg.n {
            let psi = run(&cc, x)?;
            let p0 = (1.0 + f.value(x)) / 2.0;
            let p1 = 1.0 - p0;
            for (b, p) in [(0usize, p0), (1, p1)] {
                let a = psi.amplitudes()[x | (b << out)];
                worst(&mut amp_err, (a - C64::new(p, 0.0)).norm());
            }
            let back = zero_probability(&psi, &rest)?;
            worst(&mut clean_err, (back - (p0 * p0 + p1 * p1)).abs());
        }
    }
    r.check_le("max |amplitude - p_b(x)|", amp_err, 0.0, 1e-9);
    r.check_le("max |clean return - (p0^2 + p1^2)|", clean_err, 0.0, 1e-9);
    Ok(())
}

fn psi_star(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((1..=4).contains(&cfg.n), "n must be in 1..=4")?;
    let mut zero_min = f64::INFINITY;
    let mut slack_min = f64::INFINITY;
    for c in corpus(cfg, 2) {
        let spec = wht(&extract_fc(&c)?);
        let ps = build_psi_star(&c)?;
        let z = ps.state.slice_norm(&Projector::Basis {
            qubits: ps.inputs.clone(),
            bits: 0,
        })?;
        zero_min = zero_min.min(z);
        for k in 0..=cfg.n {
            let s = ps.state.slice_norm(&Projector::HammingAtLeast {
                qubits: ps.inputs.clone(),
                k,
            })?;
            slack_min = slack_min.min(s - spec.weight_at_least(k) / 2.0);
        }
    }
    r.check_ge("min zero-branch weight", zero_min, 0.5, 1e-9);
    r.check_ge("min slice_norm - W>=k/2", slack_min, 0.0, 1e-9);
    Ok(())
}

fn tk_extract(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((1..=4).contains(&cfg.n), "n must be in 1..=4")?;
    let mut err: f64 = 0.0;
    let mut used = 0usize;
    for c in corpus(cfg, 2) {
        let f = extract_fc(&c)?;
        let spec = wht(&f);
        let ps = build_psi_star(&c)?;
        for k in 0..=cfg.n {
            let w = spec.weight_at_least(k);
            if w <= 1e-12 {
                continue;
            }
            used += 1;
            err = err.max((bilinear_extraction(&ps, &f, k)? - sqrt(w / 2.0)).abs());
        }
    }
    r.check_le("max |bilinear - sqrt(W>=k/2)|", err, 0.0, 1e-9);
    r.info("levels checked", used as f64);
    Ok(())
}

/// Largest `|corr(f_C', PARITY) - fel|` and `|f^([n]) - fel|` over every
/// nonempty target subset of `c`'s qubits.
pub fn felinity_parity_gap(c: &Circuit) -> Result<(f64, f64)> {
    let m = c.n_qubits();
    let psi = run(c, 0)?;
    let (mut corr_err, mut coeff_err): (f64, f64) = (0.0, 0.0);
    for mask in 1usize..1 << m {
        let targets: Vec<usize> = (0..m).filter(|q| mask >> q & 1 == 1).collect();
        let fel = felinity(&psi.partial_trace(&targets)?)?;
        let f = extract_fc(&felinity_to_parity_circuit(c, &targets)?)?;
        let t = targets.len();
        corr_err = corr_err.max((correlation(&f, &parity_fn(t))? - fel).abs());
        coeff_err = coeff_err.max((wht(&f).coeff((1 << t) - 1) - fel).abs());
    }
    Ok((corr_err, coeff_err))
}

fn fel_par(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((1..=5).contains(&cfg.n), "n must be in 1..=5")?;
    let mut rng = SplitMix64::new(cfg.seed);
    let (mut corr_err, mut coeff_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..cfg.samples {
        let multi = 1 + rng.below(3);
        let c = random_prep_circuit(&mut rng, cfg.n, multi);
        let (a, b) = felinity_parity_gap(&c)?;
        corr_err = corr_err.max(a);
        coeff_err = coeff_err.max(b);
    }
    r.check_le("max |corr - fel|", corr_err, 0.0, 1e-9);
    r.check_le("max |top coefficient - fel|", coeff_err, 0.0, 1e-9);
    Ok(())
}

fn lipschitz(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((1..=6).contains(&cfg.n), "n must be in 1..=6")?;
    let mut rng = SplitMix64::new(cfg.seed);
    let mut slack = f64::INFINITY;
    for i in 0..cfg.samples {
        let rho = random_density(&mut rng, cfg.n, 1);
        // Alternate between unrelated pairs and small perturbations.
        let sigma = if i % 2 == 0 {
            random_density(&mut rng, cfg.n, 1)
        } else {
            let other = random_density(&mut rng, cfg.n, 1);
            crate::sim::DensityMatrix::mixture(&[(0.97, rho.clone()), (0.03, other)])?
        };
        let d = (felinity(&rho)? - felinity(&sigma)?).abs();
        slack = slack.min(8.0 * trace_distance(&rho, &sigma)? - d);
    }
    r.check_ge("min 8 TD - |delta fel|", slack, 0.0, 1e-9);
    Ok(())
}

fn monotone(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((2..=6).contains(&cfg.n), "n must be in 2..=6")?;
    let mut rng = SplitMix64::new(cfg.seed);
    let mut slack = f64::INFINITY;
    for _ in 0..cfg.samples {
        let psi = random_state(&mut rng, cfg.n + 1);
        let rho = psi.partial_trace(&(0..cfg.n).collect::<Vec<_>>())?;
        let f = felinity(&rho)?;
        for q in 0..cfg.n {
            let keep: Vec<usize> = (0..cfg.n).filter(|&j| j != q).collect();
            slack = slack.min(felinity(&rho.partial_trace(&keep)?)? - f);
        }
    }
    r.check_ge("min fel(traced) - fel", slack, 0.0, 1e-9);
    Ok(())
}

fn dicke_layer(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    let k = cfg.k.unwrap_or(cfg.n / 2).max(1);
    let d = dicke_felinity_layer(cfg.n, k)?;
    r.param("blocks", d.blocks.len() as f64);
    r.check_eq("all-ones flag weight", d.one_weight, d.binomial_pmf, 1e-9);
    r.check_ge(
        "binomial pmf vs e^-1/sqrt(k)",
        d.binomial_pmf,
        d.binomial_floor,
        0.0,
    );
    r.check_ge(
        "felinity vs product of branch weights",
        d.felinity,
        d.one_weight * d.zero_weight,
        1e-12,
    );
    r.info("all-zero flag weight", d.zero_weight);
    r.info("felinity", d.felinity);
    r.info("asymptotic floor 1/(8k)", d.asymptotic_floor);
    if k > cfg.n / 2 {
        r.note("k exceeds n/2");
    }
    Ok(())
}

/// Exhaustive hit probability over the uniform weight-`>= k` set.
pub fn hit_probability_exhaustive(n: usize, k: usize, blocks: &[Vec<usize>]) -> f64 {
    let (mut hit, mut total) = (0u64, 0u64);
    for x in 0..1usize << n {
        if (x.count_ones() as usize) < k {
            continue;
        }
        total += 1;
        if blocks.iter().all(|b| b.iter().any(|&q| x >> q & 1 == 1)) {
            hit += 1;
        }
    }
    hit as f64 / total as f64
}

fn partition(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    let k = cfg.k.unwrap_or(cfg.n / 2).max(1);
    let blocks = block_partition(cfg.n, k, cfg.seed)?;
    let mut all: Vec<usize> = blocks.concat();
    all.sort_unstable();
    let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let spread = sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0);
    r.param("blocks", blocks.len() as f64);
    r.check_true(
        "blocks partition 0..n",
        all == (0..cfg.n).collect::<Vec<_>>(),
    );
    r.check_le("block size spread", spread as f64, 1.0, 0.0);
    r.check_eq(
        "block count",
        blocks.len() as f64,
        block_count_partition(k) as f64,
        0.0,
    );
    let p = all_blocks_hit_probability(cfg.n, k, &blocks)?;
    if cfg.n <= 20 {
        r.check_eq(
            "hit probability vs enumeration",
            p,
            hit_probability_exhaustive(cfg.n, k, &blocks),
            1e-12,
        );
    }
    r.info("hit probability", p);
    r.info("asymptotic target", 0.9);
    Ok(())
}

/// `sqrt(alpha)|good>|1> + sqrt(1-alpha)|bad>|0>` with the flag on the last
/// qubit, as a circuit.
pub fn flagged_prep(good: &Statevector, bad: &Statevector, alpha: f64) -> Result<Circuit> {
    let k = good.n_qubits();
    if bad.n_qubits() != k {
        return Err(Error::Dimension(bad.n_qubits(), k));
    }
    let d = 1usize << k;
    let mut amps = vec![C64::new(0.0, 0.0); 2 * d];
    for i in 0..d {
        amps[i] = bad.amplitudes()[i] * sqrt(1.0 - alpha);
        amps[d + i] = good.amplitudes()[i] * sqrt(alpha);
    }
    let state = Statevector::from_amplitudes(k + 1, amps)?;
    Ok(prepare_state(&state)?.with_output(k))
}

/// `1 - <good| rho |good>` for the amplified state, and the probability that
/// the flag and the extra qubit are not both 0.
pub fn amplification_error(
    good: &Statevector,
    bad: &Statevector,
    alpha: f64,
) -> Result<(f64, f64)> {
    let k = good.n_qubits();
    let amp = exact_amp_amp(&flagged_prep(good, bad, alpha)?, alpha)?;
    let out = run(&amp, 0)?;
    let dirty = 1.0 - zero_probability(&out, &[k, k + 1])?;
    let want = good.tensor(&Statevector::zero(2)?)?;
    Ok((1.0 - out.fidelity(&want)?, dirty))
}

fn amp_amp(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((1..=3).contains(&cfg.n), "n must be in 1..=3")?;
    let mut rng = SplitMix64::new(cfg.seed);
    let (mut inf, mut dirty): (f64, f64) = (0.0, 0.0);
    for alpha in [0.25, 1.0 / 3.0, 0.5, 1.0] {
        for _ in 0..cfg.samples.max(1) {
            let good = random_state(&mut rng, cfg.n);
            let bad = random_state(&mut rng, cfg.n);
            let (i, d) = amplification_error(&good, &bad, alpha)?;
            inf = inf.max(i);
            dirty = dirty.max(d);
        }
    }
    r.check_le("max infidelity", inf, 0.0, 1e-9);
    r.check_le("max ancilla residue", dirty, 0.0, 1e-9);
    Ok(())
}

/// `|b> (x) mid (x) |0^extra>`.
fn ctrl_layout(b: bool, mid: &Statevector, extra: usize) -> Result<Statevector> {
    Statevector::basis(1, b as usize)?
        .tensor(mid)?
        .tensor(&Statevector::zero(extra)?)
}

fn weak_product(n: usize, on: bool) -> Result<Statevector> {
    let s = if on {
        SingleQubitState::eps(1.0 / n as f64)?
    } else {
        SingleQubitState::zero()
    };
    Statevector::product(&vec![s; n])
}

/// Worst infidelity and worst ancilla residue of the W chain at size `n`.
pub fn w_chain_errors(n: usize) -> Result<[(&'static str, f64, f64); 5]> {
    let anc = [n + 1, n + 2];
    let zero = Statevector::zero(n)?;
    let w = w_state(n)?;
    let check = |c: &Circuit, input: &Statevector, want: &Statevector| -> Result<(f64, f64)> {
        let out = run_from(c, input)?;
        Ok((
            1.0 - out.fidelity(want)?,
            1.0 - zero_probability(&out, &anc)?,
        ))
    };
    let merge = |a: (f64, f64), b: (f64, f64)| (a.0.max(b.0), a.1.max(b.1));

    let zw = run(&zero_w_prep(n)?, 0)?;
    let mut sup: Vec<C64> = w.amplitudes().to_vec();
    sup[0] = C64::new(1.0, 0.0);
    let sup = Statevector::from_amplitudes(n, sup)?
        .normalized()?
        .tensor(&Statevector::zero(2)?)?;
    let zw_err = (
        1.0 - zw.fidelity(&sup)?,
        1.0 - zero_probability(&zw, &[n, n + 1])?,
    );

    let cw = controlled_w(n)?;
    let cw_err = merge(
        check(
            &cw,
            &ctrl_layout(false, &zero, 2)?,
            &ctrl_layout(false, &zero, 2)?,
        )?,
        check(
            &cw,
            &ctrl_layout(true, &zero, 2)?,
            &ctrl_layout(true, &w, 2)?,
        )?,
    );

    let (alpha, beta) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let a0w = run(&any_0w(n, alpha, beta)?, 0)?;
    let mut mid: Vec<C64> = w.amplitudes().iter().map(|v| v * beta).collect();
    mid[0] = alpha;
    let want = ctrl_layout(false, &Statevector::from_amplitudes(n, mid)?, 2)?;
    let a0w_err = (
        1.0 - a0w.fidelity(&want)?,
        1.0 - zero_probability(&a0w, &[0, n + 1, n + 2])?,
    );

    let uw = uncompute_w(n)?;
    let uw_err = merge(
        check(
            &uw,
            &ctrl_layout(true, &weak_product(n, true)?, 2)?,
            &ctrl_layout(true, &w, 2)?,
        )?,
        check(
            &uw,
            &ctrl_layout(false, &zero, 2)?,
            &ctrl_layout(false, &zero, 2)?,
        )?,
    );

    let pf = poor_mans_fanout(n)?;
    let pf_err = merge(
        check(
            &pf,
            &ctrl_layout(false, &zero, 2)?,
            &ctrl_layout(false, &zero, 2)?,
        )?,
        check(
            &pf,
            &ctrl_layout(true, &zero, 2)?,
            &ctrl_layout(true, &weak_product(n, true)?, 2)?,
        )?,
    );
    Ok([
        ("zero_w_prep", zw_err.0, zw_err.1),
        ("controlled_w", cw_err.0, cw_err.1),
        ("any_0w", a0w_err.0, a0w_err.1),
        ("uncompute_w", uw_err.0, uw_err.1),
        ("poor_mans_fanout", pf_err.0, pf_err.1),
    ])
}

fn w_chain(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need(cfg.n >= 1, "n must be positive")?;
    for (name, inf, dirty) in w_chain_errors(cfg.n)? {
        r.check_le(&format!("{name} infidelity"), inf, 0.0, 1e-9);
        r.check_le(&format!("{name} ancilla residue"), dirty, 0.0, 1e-9);
    }
    let p1 = powi(1.0 - 1.0 / (cfg.n as f64 + 1.0), cfg.n as i32);
    r.check_ge(
        "weight-at-most-one mass before amplification",
        2.0 * p1,
        0.25,
        0.0,
    );
    r.info("(1 - 1/(n+1))^n", p1);
    Ok(())
}

/// Largest `|simulated - closed form|` over every integer threshold and
/// weight at size `n`.
pub fn weak_copy_gap(n: usize) -> Result<f64> {
    let mut err: f64 = 0.0;
    for t in 0..=n {
        let c = weak_copy_circuit(n, t as f64)?;
        for l in 0..=n {
            let p = run_from(&c, &weak_copy_input(n, l)?)?.prob_bit(n, true)?;
            err = err.max((p - weak_copy_prob(n, t as f64, l)?).abs());
        }
    }
    Ok(err)
}

fn weak_copy(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need(cfg.n >= 2, "n must be at least 2")?;
    r.check_le(
        "max |simulated - closed form|",
        weak_copy_gap(cfg.n)?,
        0.0,
        1e-9,
    );
    r.check_eq(
        "closed form at (2,1,0)",
        weak_copy_prob(2, 1.0, 0)?,
        1.0 / 3.0,
        1e-12,
    );
    r.check_eq(
        "closed form at (4,2,3)",
        weak_copy_prob(4, 2.0, 3)?,
        27.0 / 1024.0,
        1e-12,
    );
    Ok(())
}

/// Smallest inner acceptance and largest outer acceptance for the threshold
/// `t`, scored pessimistically.
pub fn approx_t_window(n: usize, t: f64, a: f64, d: f64) -> Result<(f64, f64)> {
    let design = ApproxTDesign::new(n, t, a, d)?;
    let (mut inner, mut outer) = (1.0f64, 0.0f64);
    for l in 0..=n {
        let dev = (l as f64 - t).abs();
        let b = approx_t_accept_prob(&design, l)?;
        if dev < design.inner_radius() {
            inner = inner.min(b.lower);
        } else if dev > design.outer_radius() {
            outer = outer.max(b.upper);
        }
    }
    Ok((inner, outer))
}

fn approx_t(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need(cfg.n >= 4, "n must be at least 4")?;
    r.param("a", cfg.a);
    r.param("d", cfg.d);
    let n = cfg.n as f64;
    for (label, t) in [("n/4", n / 4.0), ("n/2", n / 2.0), ("3n/4", 3.0 * n / 4.0)] {
        let (inner, outer) = approx_t_window(cfg.n, t, cfg.a, cfg.d)?;
        r.check_ge(
            &format!("t={label} min accept inside"),
            inner,
            1.0 - 1.0 / n,
            0.0,
        );
        r.check_le(
            &format!("t={label} max accept outside"),
            outer,
            1.0 / n,
            0.0,
        );
    }
    Ok(())
}

fn majority_corr(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    r.param("a", cfg.a);
    r.param("d", cfg.d);
    let rep = majority_circuit_correlation(cfg.n, cfg.a, cfg.d)?;
    // Recount the loss terms straight from the table.
    let n = cfg.n as f64;
    let (mut test, mut central, mut tail) = (0.0, 0.0, 0.0);
    for row in &rep.rows {
        let dev = (row.weight as f64 - n / 2.0).abs();
        let loss = crate::math::binomial_pmf(cfg.n as u64, row.weight as u64, 0.5)
            * (1.0 - row.contribution);
        if dev <= rep.gamma {
            central += loss;
        } else if dev > rep.reach {
            tail += loss;
        } else {
            test += loss;
        }
        if row.band == Band::Central && dev > rep.gamma {
            r.note(format!("weight {} misfiled", row.weight));
        }
    }
    r.check_eq("test loss", rep.loss_test, test, 1e-9);
    r.check_eq("central loss", rep.loss_central, central, 1e-9);
    r.check_eq("tail loss", rep.loss_tail, tail, 1e-9);
    r.check_eq(
        "1 - correlation = sum of losses",
        1.0 - rep.correlation,
        test + central + tail,
        1e-9,
    );
    r.info("correlation", rep.correlation);
    r.info("test-loss bound |T|/n", rep.test_bound);
    r.info("central band mass", rep.central_mass);
    r.info("tail bound", rep.tail_bound);
    r.info("degenerate", if rep.degenerate { 1.0 } else { 0.0 });
    Ok(())
}

/// `beta` grid used by the rotated-W routine.
pub fn beta_grid() -> Vec<f64> {
    (0..=12).map(|i| PI * i as f64 / 12.0).collect()
}

fn rotated_w_check(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need(
        (1..=crate::states::ROTATED_W_CAP).contains(&cfg.n),
        "n out of range",
    )?;
    let (mut err, mut slack): (f64, f64) = (0.0, f64::INFINITY);
    let bound = 2.0 * powi(0.5, cfg.n as i32 - 2) * powi(cfg.n as f64, 3);
    for beta in beta_grid() {
        let direct = felinity_pure(&rotated_w(cfg.n, beta)?)?;
        err = err.max((direct - felinity_rotated_w(cfg.n, beta)?).abs());
        slack = slack.min(bound - direct);
    }
    r.check_le("max |direct - Dicke basis|", err, 0.0, 1e-9);
    r.check_ge("decay bound - fel", slack, 0.0, 0.0);
    Ok(())
}

fn post_process(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((1..=8).contains(&cfg.n), "n must be in 1..=8")?;
    let mut rng = SplitMix64::new(cfg.seed);
    let outs = 1usize << cfg.n;
    let dists: Vec<Vec<f64>> = (0..1usize << cfg.n)
        .map(|_| {
            let raw: Vec<f64> = (0..outs).map(|_| rng.next_f64()).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|v| v / s).collect()
        })
        .collect();
    let post = |y: usize| y.count_ones() % 2 == 1;
    let g = |x: usize| x.count_ones().is_multiple_of(2);
    let s = ac0_postprocess_contract(&dists, post, g)?;
    let mut brute = 0.0;
    for (x, dist) in dists.iter().enumerate() {
        for (y, p) in dist.iter().enumerate() {
            brute += p * if post(y) == g(x) { 1.0 } else { -1.0 };
        }
    }
    brute /= dists.len() as f64;
    r.check_eq("correlation vs enumeration", s.correlation, brute, 1e-12);
    r.check_ge(
        "correlation vs 1 - 2 max delta",
        s.correlation,
        1.0 - 2.0 * s.max_delta,
        1e-12,
    );
    let exact: Vec<Vec<f64>> = (0..1usize << cfg.n)
        .map(|x| {
            (0..outs)
                .map(|y| if y == x ^ 1 { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let s = ac0_postprocess_contract(&exact, post, g)?;
    r.check_eq("zero-error correlation", s.correlation, 1.0, 1e-12);
    Ok(())
}

fn skew_neko(cfg: &VerifyConfig, r: &mut GadgetReport) -> Result<()> {
    need((2..=4).contains(&cfg.n), "n must be in 2..=4")?;
    let n = cfg.n;
    // sqrt(g)|0^n>|0> + sqrt(e)|1^n>|1> + sqrt(1-g-e)|10..0>|0>.
    let (g, e) = (0.6, 0.1);
    let mut amps = vec![C64::new(0.0, 0.0); 1 << (n + 1)];
    amps[0] = C64::new(sqrt(g), 0.0);
    amps[(1 << (n + 1)) - 1] = C64::new(sqrt(e), 0.0);
    amps[1] = C64::new(sqrt(1.0 - g - e), 0.0);
    let c = prepare_state(&Statevector::from_amplitudes(n + 1, amps)?)?;
    let targets: Vec<usize> = (0..n).collect();
    let s = skewed_nekomata_amplify(&c, &targets, e)?;
    r.check_eq("amplified one-branch weight", s.eps1, s.eps1_expected, 1e-6);
    r.check_eq(
        "amplified branches fill the targets",
        s.eps1 + s.zero_weight,
        1.0,
        1e-6,
    );
    r.check_true("grid branches >= 0.2", s.branches_ok());
    r.info("eps/gamma", s.eps1_ratio);
    r.info("grid rows", s.m1.map_or(0.0, |m| m as f64));
    r.info("grid zero branch", s.grid_zero);
    r.info("grid one branch", s.grid_one);
    Ok(())
}
