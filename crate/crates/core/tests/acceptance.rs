//! End-to-end acceptance checks. Every criterion prints one PASS/FAIL line
//! straight to stderr so it shows up even when test output is captured.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use qaclab_core::constructions::{
    any_0w, build_psi_star, controlled_w, dicke_felinity_layer, exact_amp_amp,
    felinity_to_parity_circuit, make_clean, poor_mans_fanout, uncompute_w, zero_w_prep,
};
use qaclab_core::fourier::{correlation, extract_fc, parity_fn};
use qaclab_core::majority::{
    approx_t_accept_prob, majority_circuit_correlation, weak_copy_circuit, ApproxTDesign,
};
use qaclab_core::random::{
    random_density, random_prep_circuit, random_single_output_circuit, random_state,
};
use qaclab_core::sim::{run, run_from};
use qaclab_core::states::{
    build_state, cat, dicke_basis_felinity, felinity, felinity_rotated_w,
    rotated_w_dicke_coefficients, w_state, NamedState,
};
use qaclab_core::verify::flagged_prep;
use qaclab_core::{Circuit, DensityMatrix, SplitMix64, Statevector, C64};

fn line(id: u32, name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "criterion {id:>2} {verdict} {name}: {detail}"
    );
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn state(amps: Vec<C64>) -> Statevector {
    let n = amps.len().trailing_zeros() as usize;
    Statevector::from_amplitudes(n, amps).unwrap()
}

fn overlap_sq(a: &Statevector, b: &Statevector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum::<C64>()
        .norm_sqr()
}

/// `sum_y p(y) p(~y)`, doubled, with `p` the distribution of `qubits`.
fn felinity_oracle(probs: &[f64], qubits: &[usize]) -> f64 {
    let k = qubits.len();
    let mut marg = vec![0.0; 1 << k];
    for (i, p) in probs.iter().enumerate() {
        let y = qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | ((i >> q & 1) << j));
        marg[y] += p;
    }
    let all = (1usize << k) - 1;
    2.0 * (0..1usize << k)
        .map(|y| marg[y] * marg[y ^ all])
        .sum::<f64>()
}

/// `Pr[out = 0] - Pr[out = 1]` for every input, from raw amplitudes.
fn fc_oracle(circ: &Circuit) -> Vec<f64> {
    let out = circ.output.unwrap();
    (0..1usize << circ.n_inputs)
        .map(|x| {
            run(circ, x)
                .unwrap()
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if i >> out & 1 == 0 {
                        a.norm_sqr()
                    } else {
                        -a.norm_sqr()
                    }
                })
                .sum()
        })
        .collect()
}

fn fourier_oracle(f: &[f64]) -> Vec<f64> {
    let size = f.len() as f64;
    (0..f.len())
        .map(|s| {
            f.iter()
                .enumerate()
                .map(|(x, v)| {
                    if (x & s).count_ones() % 2 == 0 {
                        *v
                    } else {
                        -*v
                    }
                })
                .sum::<f64>()
                / size
        })
        .collect()
}

fn mass_at_least(spec: &[f64], k: usize) -> f64 {
    spec.iter()
        .enumerate()
        .filter(|(s, _)| s.count_ones() as usize >= k)
        .map(|(_, v)| v * v)
        .sum()
}

fn subsets(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (1usize..1 << m).map(move |mask| (0..m).filter(|q| mask >> q & 1 == 1).collect())
}

fn prep_corpus() -> Vec<Circuit> {
    let mut rng = SplitMix64::new(0xacce);
    (0..60)
        .map(|i| random_prep_circuit(&mut rng, 2 + i % 4, i % 4))
        .collect()
}

/// Circuits with inputs on 2 to 5 qubits in total and at most three
/// multi-qubit gates.
fn input_corpus() -> Vec<Circuit> {
    let mut rng = SplitMix64::new(0xc1ea);
    (0..60)
        .map(|i| {
            let inputs = 1 + i % 3;
            let ancillae = 1 + (i / 3) % 2;
            random_single_output_circuit(&mut rng, inputs, ancillae, i % 4)
        })
        .collect()
}

#[test]
fn criterion_01_felinity_gives_parity_correlation() {
    let start = Instant::now();
    let (mut worst, mut worst_lib, mut cases) = (0.0f64, 0.0f64, 0usize);
    for prep in prep_corpus() {
        let m = prep.n_qubits();
        let probs = run(&prep, 0).unwrap().probabilities();
        for t in subsets(m) {
            let circ = felinity_to_parity_circuit(&prep, &t).unwrap();
            let f = fc_oracle(&circ);
            let corr = f
                .iter()
                .enumerate()
                .map(|(x, v)| if x.count_ones() % 2 == 0 { *v } else { -*v })
                .sum::<f64>()
                / f.len() as f64;
            let fel = felinity_oracle(&probs, &t);
            worst = worst.max((corr - fel).abs());
            let lib_corr = correlation(&extract_fc(&circ).unwrap(), &parity_fn(t.len())).unwrap();
            worst_lib = worst_lib.max((lib_corr - corr).abs());
            cases += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-9 && worst_lib <= 1e-9 && secs <= 60.0;
    line(
        1,
        "felinity-parity identity",
        pass,
        format!("{cases} (circuit, T) pairs, max gap {worst:.2e}, {secs:.1}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_fourier_mass_reaches_hamming_slice() {
    let start = Instant::now();
    let (mut zero_min, mut slice_slack, mut bilinear_err) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    let mut levels = 0usize;
    for circ in input_corpus() {
        let n = circ.n_inputs;
        let spec = fourier_oracle(&fc_oracle(&circ));
        let ps = build_psi_star(&circ).unwrap();
        let width = ps.clean.n_qubits();
        let d = 1usize << n;
        let mut plus = vec![c(0.0); 1 << width];
        for a in plus.iter_mut().take(d) {
            *a = c(1.0 / (d as f64).sqrt());
        }
        let before = run_from(&ps.clean, &state(plus)).unwrap();
        let amps = before.amplitudes();

        // Hadamard on the input register, by hand.
        let mut star = vec![c(0.0); amps.len()];
        for rest in 0..amps.len() >> n {
            for y in 0..d {
                star[y | rest << n] = (0..d)
                    .map(|x| {
                        if (x & y).count_ones() % 2 == 0 {
                            amps[x | rest << n]
                        } else {
                            -amps[x | rest << n]
                        }
                    })
                    .sum::<C64>()
                    / (d as f64).sqrt();
            }
        }
        let weight = |k: usize| -> f64 {
            star.iter()
                .enumerate()
                .filter(|(i, _)| (i & (d - 1)).count_ones() as usize >= k)
                .map(|(_, a)| a.norm_sqr())
                .sum()
        };
        let zero: f64 = star
            .iter()
            .enumerate()
            .filter(|(i, _)| i & (d - 1) == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        zero_min = zero_min.min(zero);
        for k in 0..=n {
            let mass = mass_at_least(&spec, k);
            slice_slack = slice_slack.min(weight(k) - mass / 2.0);
            if mass <= 1e-12 {
                continue;
            }
            // <T^_k|_X <-|_out <0..0|_rest applied to the state before the last Hadamards.
            let that: Vec<f64> = (0..d)
                .map(|x| {
                    (0..d)
                        .filter(|s| s.count_ones() as usize >= k)
                        .map(|s| {
                            if (x & s).count_ones() % 2 == 0 {
                                spec[s]
                            } else {
                                -spec[s]
                            }
                        })
                        .sum::<f64>()
                        / (mass * d as f64).sqrt()
                })
                .collect();
            let val: C64 = (0..d)
                .map(|x| (amps[x] - amps[x | 1 << ps.output]) * (that[x] / 2f64.sqrt()))
                .sum();
            bilinear_err = bilinear_err.max((val.norm() - (mass / 2.0).sqrt()).abs());
            levels += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass =
        zero_min >= 0.5 - 1e-9 && slice_slack >= -1e-9 && bilinear_err <= 1e-9 && secs <= 120.0;
    line(
        2,
        "Fourier mass to Hamming slice",
        pass,
        format!(
            "min zero weight {zero_min:.6}, min slice slack {slice_slack:.2e}, bilinear err {bilinear_err:.2e} over {levels} levels, {secs:.1}s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_clean_computation_amplitudes() {
    let (mut amp_err, mut back_err) = (0.0f64, 0.0f64);
    for circ in input_corpus() {
        let f = fc_oracle(&circ);
        let clean = make_clean(&circ).unwrap();
        let out = clean.output.unwrap();
        let n = circ.n_inputs;
        let input_mask = (1usize << n) - 1;
        for (x, fx) in f.iter().enumerate() {
            let psi = run(&clean, x).unwrap();
            let amps = psi.amplitudes();
            let (p0, p1) = ((1.0 + fx) / 2.0, (1.0 - fx) / 2.0);
            amp_err = amp_err
                .max((amps[x] - c(p0)).norm())
                .max((amps[x | 1 << out] - c(p1)).norm());
            let back: f64 = amps
                .iter()
                .enumerate()
                .filter(|(i, _)| i & !input_mask & !(1 << out) == 0)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            back_err = back_err.max((back - (p0 * p0 + p1 * p1)).abs());
        }
    }
    let pass = amp_err <= 1e-9 && back_err <= 1e-9;
    line(
        3,
        "clean computation amplitudes",
        pass,
        format!("amplitude err {amp_err:.2e}, clean-return err {back_err:.2e}"),
    );
    assert!(pass);
}

fn trace_distance_oracle(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let diff = a.matrix() - b.matrix();
    diff.singular_values().iter().sum::<f64>() / 2.0
}

#[test]
fn criterion_04_felinity_measure_suite() {
    let fel = |s: NamedState| felinity(&build_state(&s).unwrap().density()).unwrap();
    let mut exact_err = 0.0f64;
    for n in 1..=6 {
        exact_err = exact_err.max((fel(NamedState::Cat { n }) - 1.0).abs());
        exact_err = exact_err
            .max((fel(NamedState::EpsProduct { eps: 0.5, n }) - 2f64.powi(1 - n as i32)).abs());
        // W_2 sits on the complementary pair 01, 10, so its felinity is 1.
        if n >= 3 {
            exact_err = exact_err.max(fel(NamedState::W { n }).abs());
        } else if n == 2 {
            exact_err = exact_err.max((fel(NamedState::W { n }) - 1.0).abs());
        }
        if n % 2 == 0 {
            exact_err = exact_err
                .max((fel(NamedState::OddParityMixture { n }) - 2f64.powi(2 - n as i32)).abs());
        }
    }

    let mut rng = SplitMix64::new(0xfe11);
    let (mut lip_slack, mut mono_slack, mut oracle_err) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    let mut states = 0usize;
    for i in 0..240 {
        let n = 1 + i % 6;
        let rho = if i % 2 == 0 {
            DensityMatrix::from_pure(&random_state(&mut rng, n))
        } else {
            random_density(&mut rng, n, 1 + i % 3)
        };
        let sigma = random_density(&mut rng, n, 1 + (i / 2) % 3);
        let t = rng.next_f64();
        let near =
            DensityMatrix::mixture(&[(1.0 - t * 0.1, rho.clone()), (t * 0.1, sigma.clone())])
                .unwrap();
        let f_rho = felinity(&rho).unwrap();
        let all: Vec<usize> = (0..n).collect();
        oracle_err = oracle_err.max((f_rho - felinity_oracle(&rho.diagonal(), &all)).abs());
        for other in [&sigma, &near] {
            let gap = (f_rho - felinity(other).unwrap()).abs();
            lip_slack = lip_slack.min(8.0 * trace_distance_oracle(&rho, other) - gap);
        }
        for q in 0..n {
            if n < 2 {
                break;
            }
            let keep: Vec<usize> = (0..n).filter(|&j| j != q).collect();
            let reduced = felinity(&rho.partial_trace(&keep).unwrap()).unwrap();
            mono_slack = mono_slack.min(reduced - f_rho);
        }
        states += 1;
    }
    let pass =
        exact_err <= 1e-12 && oracle_err <= 1e-12 && lip_slack >= -1e-9 && mono_slack >= -1e-9;
    line(
        4,
        "felinity measure suite",
        pass,
        format!(
            "closed-form err {exact_err:.2e}, {states} states, Lipschitz slack {lip_slack:.3e}, monotone slack {mono_slack:.3e}"
        ),
    );
    assert!(pass);
}

fn w_amps(n: usize) -> Vec<C64> {
    let mut v = vec![c(0.0); 1 << n];
    for i in 0..n {
        v[1 << i] = c(1.0 / (n as f64).sqrt());
    }
    v
}

fn weak_amps(n: usize) -> Vec<C64> {
    let p = 1.0 / n as f64;
    (0..1usize << n)
        .map(|y| {
            let ones = y.count_ones() as i32;
            c((p.powi(ones) * (1.0 - p).powi(n as i32 - ones)).sqrt())
        })
        .collect()
}

fn zero_amps(n: usize) -> Vec<C64> {
    let mut v = vec![c(0.0); 1 << n];
    v[0] = c(1.0);
    v
}

/// `sum_b coeff_b |b>_0 |reg_b>_{1..=n} |00>`.
fn controlled(n: usize, parts: &[(C64, &[C64]); 2]) -> Statevector {
    let mut v = vec![c(0.0); 1 << (n + 3)];
    for (b, (coef, reg)) in parts.iter().enumerate() {
        for (y, a) in reg.iter().enumerate() {
            v[b | y << 1] += coef * a;
        }
    }
    state(v)
}

/// Circuit name, circuit, inputs for control 0 and 1, outputs for control 0 and 1.
type MapCase<'a> = (
    &'static str,
    Circuit,
    &'a [C64],
    &'a [C64],
    &'a [C64],
    &'a [C64],
);

#[test]
fn criterion_05_w_chain_exactness() {
    let mut worst: Vec<(&str, f64)> = Vec::new();
    let mut record = |name: &'static str, err: f64| match worst.iter_mut().find(|(k, _)| *k == name)
    {
        Some(e) => e.1 = e.1.max(err),
        None => worst.push((name, err)),
    };
    let h = 1.0 / 2f64.sqrt();
    for n in 2..=8 {
        let (zero, w, weak) = (zero_amps(n), w_amps(n), weak_amps(n));

        let zw = run(&zero_w_prep(n).unwrap(), 0).unwrap();
        let mut want = vec![c(0.0); 1 << (n + 2)];
        for (y, a) in w.iter().enumerate() {
            want[y] = a * h;
        }
        want[0] = c(h);
        record("zero_w_prep", 1.0 - overlap_sq(&zw, &state(want)));

        let cases: [MapCase; 3] = [
            (
                "controlled_w",
                controlled_w(n).unwrap(),
                &zero,
                &zero,
                &zero,
                &w,
            ),
            (
                "uncompute_w",
                uncompute_w(n).unwrap(),
                &zero,
                &weak,
                &zero,
                &w,
            ),
            (
                "poor_mans_fanout",
                poor_mans_fanout(n).unwrap(),
                &zero,
                &zero,
                &zero,
                &weak,
            ),
        ];
        for (name, circ, in0, in1, out0, out1) in cases {
            for (c0, c1) in [(c(1.0), c(0.0)), (c(0.0), c(1.0)), (c(h), C64::new(0.0, h))] {
                let input = controlled(n, &[(c0, in0), (c1, in1)]);
                let want = controlled(n, &[(c0, out0), (c1, out1)]);
                record(
                    name,
                    1.0 - overlap_sq(&run_from(&circ, &input).unwrap(), &want),
                );
            }
        }

        for (alpha, beta) in [
            (c(0.6), C64::new(0.0, 0.8)),
            (c(1.0), c(0.0)),
            (c(0.0), c(1.0)),
            (c(h), c(-h)),
        ] {
            let got = run(&any_0w(n, alpha, beta).unwrap(), 0).unwrap();
            let mut reg = w.iter().map(|a| a * beta).collect::<Vec<_>>();
            reg[0] += alpha;
            record(
                "any_0w",
                1.0 - overlap_sq(&got, &controlled(n, &[(c(1.0), &reg), (c(0.0), &zero)])),
            );
        }
    }
    let pass = worst.iter().all(|(_, e)| *e <= 1e-9);
    let detail = worst
        .iter()
        .map(|(k, e)| format!("{k} {e:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    line(5, "W-chain exactness n=2..8", pass, detail);
    assert!(pass);
}

fn weak_copy_law(n: usize, t: f64, l: usize) -> f64 {
    let nf = n as f64;
    let r2 = 1.0 - 1.0 / nf;
    let d = (t - l as f64) / nf;
    d * d * r2.powi(l as i32) / (r2 + t * t / (nf * nf))
}

#[test]
fn criterion_06_weak_copy_law() {
    let start = Instant::now();
    let mut err = 0.0f64;
    let mut cases = 0usize;
    for n in 2..=10 {
        let p = 1.0 / n as f64;
        let one = [c((1.0 - p).sqrt()), c(p.sqrt())];
        let ts: Vec<f64> = (0..=2 * n).map(|j| j as f64 / 2.0).collect();
        for &t in &ts {
            let circ = weak_copy_circuit(n, t).unwrap();
            for l in 0..=n {
                let mut v = vec![c(0.0); 1 << (n + 4)];
                for (y, a) in v.iter_mut().enumerate().take(1 << n) {
                    *a = (0..n).fold(c(1.0), |acc, q| {
                        let bit = y >> q & 1;
                        acc * if q < l {
                            one[bit]
                        } else if bit == 0 {
                            c(1.0)
                        } else {
                            c(0.0)
                        }
                    });
                }
                let out = run_from(&circ, &state(v)).unwrap();
                let p1: f64 = out
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i >> n & 1 == 1)
                    .map(|(_, a)| a.norm_sqr())
                    .sum();
                err = err.max((p1 - weak_copy_law(n, t, l)).abs());
                cases += 1;
            }
        }
    }
    let spot = [(2, 1.0, 0, 1.0 / 3.0), (4, 2.0, 3, 27.0 / 1024.0)];
    let spot_err = spot
        .iter()
        .map(|&(n, t, l, want)| (weak_copy_law(n, t, l) - want).abs())
        .fold(0.0, f64::max);
    let pass = err <= 1e-9 && spot_err <= 1e-12;
    line(
        6,
        "weak-copy law n<=10",
        pass,
        format!(
            "{cases} cases, max err {err:.2e}, spot err {spot_err:.1e}, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    );
    assert!(pass);
}

fn ln_choose(n: usize, k: usize) -> f64 {
    (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum()
}

fn binom_pmf(n: usize, k: usize, p: f64) -> f64 {
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    (ln_choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
}

struct Design {
    n: usize,
    t: f64,
    r: usize,
    m: usize,
}

impl Design {
    fn new(n: usize, t: f64, a: f64, d: f64) -> Self {
        let nf = n as f64;
        let u = t / nf;
        let lambda = (-u).exp() / (1.0 + u * u);
        Design {
            n,
            t,
            r: (3.0 * nf * a * a / lambda).ceil() as usize,
            m: (d * nf.log2()).ceil() as usize,
        }
    }

    /// Pessimistic and optimistic acceptance on a weight-`l` input.
    fn accept(&self, l: usize) -> (f64, f64) {
        let q = weak_copy_law(self.n, self.t, l);
        let w = 1.0 - (1.0 - q).powi(self.r as i32);
        let (mut lo, mut hi) = (0.0, 0.0);
        for k in 0..=self.m {
            let pk = binom_pmf(self.m, k, w);
            if (k as f64) < 0.7 * self.m as f64 {
                lo += pk;
            }
            if (k as f64) <= 0.8 * self.m as f64 {
                hi += pk;
            }
        }
        (lo, hi)
    }
}

#[test]
fn criterion_07_approx_t_contract() {
    let start = Instant::now();
    let (n, a, d) = (256usize, 4.0, 8.0);
    let nf = n as f64;
    let (mut inside_min, mut outside_max, mut lib_err) = (1.0f64, 0.0f64, 0.0f64);
    for t in [nf / 4.0, nf / 2.0, 3.0 * nf / 4.0] {
        let design = Design::new(n, t, a, d);
        let lib = ApproxTDesign::new(n, t, a, d).unwrap();
        assert_eq!((lib.r_reps, lib.m_reps), (design.r, design.m));
        for l in 0..=n {
            let (lo, hi) = design.accept(l);
            let b = approx_t_accept_prob(&lib, l).unwrap();
            lib_err = lib_err.max((b.lower - lo).abs()).max((b.upper - hi).abs());
            let dev = (l as f64 - t).abs();
            if dev < nf.sqrt() / (2.0 * a) {
                inside_min = inside_min.min(lo);
            } else if dev > nf.sqrt() / a {
                outside_max = outside_max.max(hi);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass =
        inside_min >= 1.0 - 1.0 / nf && outside_max <= 1.0 / nf && lib_err <= 1e-9 && secs <= 120.0;
    line(
        7,
        "APPROX_t contract n=256 a=4 d=8",
        pass,
        format!("min accept inside {inside_min:.12}, max accept outside {outside_max:.3e}, library gap {lib_err:.1e}, {secs:.1}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_08_majority_correlation_losses() {
    let (n, a, d) = (255usize, 4.0, 8.0);
    let nf = n as f64;
    let eta = nf.sqrt() / (2.0 * a);
    let gamma = nf.sqrt() / a;
    let reach = nf.log2() * nf.sqrt();
    let steps = (reach / eta).floor() as usize;
    let plus: Vec<Design> = (1..=steps)
        .map(|j| nf / 2.0 + j as f64 * eta)
        .filter(|&t| t <= nf)
        .map(|t| Design::new(n, t, a, d))
        .collect();
    let minus: Vec<Design> = (1..=steps)
        .map(|j| nf / 2.0 - j as f64 * eta)
        .filter(|&t| t >= 0.0)
        .map(|t| Design::new(n, t, a, d))
        .collect();
    let fire = |ds: &[Design], l: usize| -> (f64, f64) {
        let (mut none_lo, mut none_hi) = (1.0, 1.0);
        for d in ds {
            let (lo, hi) = d.accept(l);
            none_lo *= 1.0 - lo;
            none_hi *= 1.0 - hi;
        }
        (1.0 - none_lo, 1.0 - none_hi)
    };
    let (mut test, mut central, mut tail, mut corr) = (0.0, 0.0, 0.0, 0.0);
    for l in 0..=n {
        let (p, m) = (fire(&plus, l), fire(&minus, l));
        let contribution = if 2 * l > n { p.0 - m.1 } else { m.0 - p.1 };
        let mass = binom_pmf(n, l, 0.5);
        let loss = mass * (1.0 - contribution);
        corr += mass * contribution;
        let dev = (l as f64 - nf / 2.0).abs();
        if dev <= gamma {
            central += loss;
        } else if dev > reach {
            tail += loss;
        } else {
            test += loss;
        }
    }
    let rep = majority_circuit_correlation(n, a, d).unwrap();
    let errs = [
        (rep.loss_test - test).abs(),
        (rep.loss_central - central).abs(),
        (rep.loss_tail - tail).abs(),
        (rep.correlation - corr).abs(),
    ];
    let err = errs.iter().cloned().fold(0.0, f64::max);
    let pass = err <= 1e-9 && rep.rows.len() == n + 1;
    line(
        8,
        "majority correlation n=255",
        pass,
        format!(
            "losses test {test:.6e} central {central:.6e} tail {tail:.6e}, correlation {corr:.6} (reported only), max err {err:.1e}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_dicke_layer() {
    let mut err = 0.0f64;
    let mut floor_ok = true;
    let mut parts = Vec::new();
    for (n, k) in [(4usize, 2usize), (6, 3), (8, 4), (10, 5)] {
        let layer = dicke_felinity_layer(n, k).unwrap();
        let flag_mask: usize = layer.flags.iter().map(|q| 1usize << q).sum();
        let ones: f64 = layer
            .state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| i & flag_mask == flag_mask)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        // |<p^n|D^n_k>|^2 by enumeration.
        let p = k as f64 / n as f64;
        let count = (0..1usize << n)
            .filter(|y| y.count_ones() as usize == k)
            .count() as f64;
        let ov = count * (p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)).sqrt() / count.sqrt();
        let pmf = ov * ov;
        err = err.max((ones - pmf).abs());
        floor_ok &= pmf >= (-1.0f64).exp() / (k as f64).sqrt();
        parts.push(format!("({n},{k}) {ones:.6}"));
    }
    let pass = err <= 1e-9 && floor_ok;
    line(
        9,
        "Dicke layer",
        pass,
        format!(
            "{}; max err {err:.1e}, e^-1/sqrt(k) floor holds: {floor_ok}",
            parts.join(" ")
        ),
    );
    assert!(pass);
}

fn rotated_w_oracle(n: usize, beta: f64) -> Vec<f64> {
    let (cb, sb) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let u = [[cb, -sb], [sb, cb]];
    (0..1usize << n)
        .map(|y| {
            let amp: f64 = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| u[y >> i & 1][usize::from(i == j)])
                        .product::<f64>()
                })
                .sum::<f64>()
                / (n as f64).sqrt();
            amp * amp
        })
        .collect()
}

#[test]
fn criterion_10_rotated_w_felinity() {
    let grid: Vec<f64> = (0..=12).map(|j| j as f64 * PI / 12.0).collect();
    let (mut err, mut decay_slack) = (0.0f64, f64::INFINITY);
    for n in 2..=10 {
        let all: Vec<usize> = (0..n).collect();
        for &beta in &grid {
            let direct = felinity_rotated_w(n, beta).unwrap();
            let alphas: Vec<C64> = rotated_w_dicke_coefficients(n, beta)
                .unwrap()
                .into_iter()
                .map(c)
                .collect();
            let dicke = dicke_basis_felinity(&alphas).unwrap();
            let oracle = felinity_oracle(&rotated_w_oracle(n, beta), &all);
            err = err.max((direct - dicke).abs()).max((direct - oracle).abs());
            let bound = 2.0 * 0.5f64.powi(n as i32 - 2) * (n as f64).powi(3);
            decay_slack = decay_slack.min(bound - direct);
        }
    }
    let pass = err <= 1e-9 && decay_slack >= 0.0;
    line(
        10,
        "rotated-W felinity n<=10",
        pass,
        format!(
            "{} grid points, dual-path err {err:.1e}, decay bound slack {decay_slack:.3e}",
            9 * grid.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_11_amplitude_amplification() {
    let mut rng = SplitMix64::new(0xa11a);
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for alpha in [0.25, 1.0 / 3.0, 0.5, 1.0] {
        for k in 1..=3 {
            for _ in 0..8 {
                let good = random_state(&mut rng, k);
                let bad = random_state(&mut rng, k);
                let amp = exact_amp_amp(&flagged_prep(&good, &bad, alpha).unwrap(), alpha).unwrap();
                let out = run(&amp, 0).unwrap();
                let mut want = good.amplitudes().to_vec();
                want.resize(1 << (k + 2), c(0.0));
                worst = worst.max(1.0 - overlap_sq(&out, &state(want)));
                cases += 1;
            }
        }
    }
    let pass = worst <= 1e-9;
    line(
        11,
        "amplitude amplification exactness",
        pass,
        format!("{cases} targets, max infidelity {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn named_states_match_hand_built_amplitudes() {
    for n in 2..=5 {
        let w = w_state(n).unwrap();
        assert!((overlap_sq(&w, &state(w_amps(n))) - 1.0).abs() < 1e-12);
        let mut cat_amps = zero_amps(n);
        cat_amps[0] = c(1.0 / 2f64.sqrt());
        cat_amps[(1 << n) - 1] = c(1.0 / 2f64.sqrt());
        assert!((overlap_sq(&cat(n).unwrap(), &state(cat_amps)) - 1.0).abs() < 1e-12);
    }
}
