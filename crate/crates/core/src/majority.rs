//! Approximate MAJORITY from weak copies.
//!
//! A weak copy of an `n`-bit input with Hamming weight `l` is the product
//! state with `|1/n> = sqrt(1-1/n)|0> + sqrt(1/n)|1>` on the `l` set positions
//! and `|0>` elsewhere. Thresholds `t` are real numbers in `[0, n]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::constructions::{any_0w, reflection_from_prep};
use crate::error::{Error, Result};
use crate::gates::{Gate, SingleQubitState};
use crate::math::{binomial_pmf, ceil, exp, log2, powf, powi, sqrt};
use crate::sim::Statevector;
use crate::C64;

/// Largest number of repetitions the exact acceptance computation accepts.
pub const REPS_CAP: usize = 1 << 20;

/// Parameters of the weak-copy test at threshold `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCopyParams {
    pub n: usize,
    pub t: f64,
    /// `sqrt(1 - 1/n)`.
    pub r: f64,
    /// Overlap of a weight-`t` weak copy with `|0^n>`.
    pub alpha_t: f64,
    /// Overlap of a weight-`t` weak copy with `|W_n>`.
    pub gamma_t: f64,
    pub s: f64,
    /// Reflection state is `a|0^n> + b|W_n>`.
    pub a: f64,
    pub b: f64,
}

impl WeakCopyParams {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter {
                name: "n",
                value: n as f64,
            });
        }
        if !(0.0..=n as f64).contains(&t) {
            return Err(Error::Parameter {
                name: "t",
                value: t,
            });
        }
        let nf = n as f64;
        let r = sqrt(1.0 - 1.0 / nf);
        let alpha_t = powf(r, t);
        let gamma_t = t / nf * powf(r, t - 1.0);
        let s = sqrt(alpha_t * alpha_t + gamma_t * gamma_t);
        let a = sqrt((s - gamma_t) / (2.0 * s));
        let b = sqrt((s + gamma_t) / (2.0 * s));
        Ok(Self {
            n,
            t,
            r,
            alpha_t,
            gamma_t,
            s,
            a,
            b,
        })
    }

    pub fn lambda(&self) -> f64 {
        lambda_t(self.n, self.t)
    }
}

/// `e^{-t/n} / (1 + t^2/n^2)`.
pub fn lambda_t(n: usize, t: f64) -> f64 {
    let u = t / n as f64;
    exp(-u) / (1.0 + u * u)
}

/// Exact probability that the weak-copy test at threshold `t` outputs 1 on
/// an input of Hamming weight `l`:
/// `((t-l)/n)^2 r^{2l} / (r^2 + t^2/n^2)`.
pub fn weak_copy_prob(n: usize, t: f64, l: usize) -> Result<f64> {
    let p = WeakCopyParams::new(n, t)?;
    if l > n {
        return Err(Error::Parameter {
            name: "l",
            value: l as f64,
        });
    }
    let nf = n as f64;
    let d = (t - l as f64) / nf;
    let r2 = p.r * p.r;
    Ok(d * d * powi(r2, l as i32) / (r2 + t * t / (nf * nf)))
}

/// Ratio of [`weak_copy_prob`] to `lambda_t ((l-t)/n)^2`. The test is only
/// meant to work where this stays inside `[2/3, 4/3]`.
pub fn asymptotic_factor(n: usize, t: f64, l: usize) -> Result<f64> {
    let p = WeakCopyParams::new(n, t)?;
    if l > n {
        return Err(Error::Parameter {
            name: "l",
            value: l as f64,
        });
    }
    let nf = n as f64;
    let r2 = p.r * p.r;
    Ok(powi(r2, l as i32) / (r2 + t * t / (nf * nf)) / p.lambda())
}

/// Layout used by [`weak_copy_circuit`]: weak copy on `0..n`, output `n`,
/// then the three work qubits of the reflection.
pub fn weak_copy_width(n: usize) -> usize {
    n + 4
}

/// `I - 2|phi><phi|` with `phi = a|0^n> + b|W_n>` on qubits `0..n`, work
/// qubits `n+1..n+4` starting and ending at 0.
pub fn weak_copy_reflection(n: usize, t: f64) -> Result<Circuit> {
    let p = WeakCopyParams::new(n, t)?;
    let prep = any_0w(n, C64::new(p.a, 0.0), C64::new(p.b, 0.0))?;
    let map: Vec<usize> = [n + 1]
        .into_iter()
        .chain(0..n)
        .chain([n + 2, n + 3])
        .collect();
    let prep = prep.embed(&map, 0, weak_copy_width(n))?;
    reflection_from_prep(&prep, &(0..n).collect::<Vec<_>>())
}

/// The weak-copy test: the reflection above, then the reflection about
/// `|0^n>|+>_o`. The output register is qubit `n`.
pub fn weak_copy_circuit(n: usize, t: f64) -> Result<Circuit> {
    let mut c = weak_copy_reflection(n, t)?;
    let mut qs: Vec<usize> = (0..n).collect();
    qs.push(n);
    let mut st = vec![SingleQubitState::zero(); n];
    st.push(SingleQubitState::plus());
    c.push(Gate::reflection(qs, st));
    Ok(c.with_output(n))
}

/// Weak copy of a weight-`l` input in the [`weak_copy_circuit`] layout, with
/// the set bits on the first `l` positions.
pub fn weak_copy_input(n: usize, l: usize) -> Result<Statevector> {
    if n < 1 || l > n {
        return Err(Error::Parameter {
            name: "l",
            value: l as f64,
        });
    }
    let one = SingleQubitState::eps(1.0 / n as f64)?;
    let mut st = vec![SingleQubitState::zero(); weak_copy_width(n)];
    for s in st.iter_mut().take(l) {
        *s = one;
    }
    Statevector::product(&st)
}

/// `1 - (1-q)^reps`: some of `reps` independent tests fires.
pub fn or_block_prob(q: f64, reps: usize) -> f64 {
    1.0 - powi(1.0 - q, reps as i32)
}

/// Parameters of the amplified discriminator for `|l - t|` small versus large.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxTDesign {
    pub n: usize,
    pub t: f64,
    pub a: f64,
    pub d: f64,
    pub lambda: f64,
    /// Weak-copy tests ORed together per block.
    pub r_reps: usize,
    /// Number of blocks handed to the approximate majority.
    pub m_reps: usize,
    /// Weak copies of each input bit consumed.
    pub s_copies: usize,
    /// Weight below which the post-processor outputs 1.
    pub accept_below: f64,
    /// Weight above which the post-processor outputs 0.
    pub reject_above: f64,
}

impl ApproxTDesign {
    pub fn new(n: usize, t: f64, a: f64, d: f64) -> Result<Self> {
        WeakCopyParams::new(n, t)?;
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Parameter {
                name: "a",
                value: a,
            });
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Parameter {
                name: "d",
                value: d,
            });
        }
        let nf = n as f64;
        let lambda = lambda_t(n, t);
        let r = ceil(3.0 * nf * a * a / lambda);
        let m = ceil(d * log2(nf)).max(1.0);
        if r > REPS_CAP as f64 || m > REPS_CAP as f64 {
            return Err(Error::Budget(alloc::format!("r = {r}, m = {m}")));
        }
        let (r_reps, m_reps) = (r as usize, m as usize);
        let s_copies = ceil(r * m / nf).max(1.0) as usize;
        Ok(Self {
            n,
            t,
            a,
            d,
            lambda,
            r_reps,
            m_reps,
            s_copies,
            accept_below: 0.7 * m,
            reject_above: 0.8 * m,
        })
    }

    /// Half-width of the acceptance window, `sqrt(n)/(2a)`.
    pub fn inner_radius(&self) -> f64 {
        sqrt(self.n as f64) / (2.0 * self.a)
    }

    /// Distance beyond which rejection is promised, `sqrt(n)/a`.
    pub fn outer_radius(&self) -> f64 {
        sqrt(self.n as f64) / self.a
    }
}

/// Range of acceptance probabilities consistent with the post-processing
/// contract: `lower` scores the tie region as rejecting, `upper` as accepting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptBounds {
    pub lower: f64,
    pub upper: f64,
}

impl AcceptBounds {
    /// The probability some of several independent tests accepts.
    pub fn any_of(items: &[AcceptBounds]) -> AcceptBounds {
        let lo: f64 = items.iter().map(|b| 1.0 - b.lower).product();
        let hi: f64 = items.iter().map(|b| 1.0 - b.upper).product();
        AcceptBounds {
            lower: 1.0 - lo,
            upper: 1.0 - hi,
        }
    }
}

/// Exact acceptance bounds on a weight-`l` input.
pub fn approx_t_accept_prob(design: &ApproxTDesign, l: usize) -> Result<AcceptBounds> {
    let q = weak_copy_prob(design.n, design.t, l)?;
    let w = or_block_prob(q, design.r_reps);
    Ok(accept_from_block_prob(design, w))
}

fn accept_from_block_prob(design: &ApproxTDesign, w: f64) -> AcceptBounds {
    let m = design.m_reps;
    let mut lower = 0.0;
    let mut upper = 0.0;
    for k in 0..=m {
        let pk = binomial_pmf(m as u64, k as u64, w);
        let kf = k as f64;
        if kf < design.accept_below {
            lower += pk;
        }
        if kf <= design.reject_above {
            upper += pk;
        }
    }
    AcceptBounds {
        lower: lower.min(1.0),
        upper: upper.min(1.0),
    }
}

/// Which loss term of the majority analysis a weight falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// `|l - n/2| <= sqrt(n)/a`.
    Central,
    /// Covered by the threshold grid.
    Test,
    /// `|l - n/2| > L`.
    Tail,
}

impl Band {
    pub fn name(&self) -> &'static str {
        match self {
            Band::Central => "central",
            Band::Test => "test",
            Band::Tail => "tail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    pub weight: usize,
    /// `C(n, l) 2^{-n}`.
    pub mass: f64,
    /// MAJORITY as a bit: 1 iff `l > n/2`.
    pub maj: bool,
    /// Some upper threshold fires.
    pub plus: AcceptBounds,
    /// Some lower threshold fires.
    pub minus: AcceptBounds,
    /// Pessimistic `2 Pr[agree] - 1`.
    pub contribution: f64,
    pub band: Band,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorityReport {
    pub n: usize,
    pub a: f64,
    pub d: f64,
    /// Threshold spacing `sqrt(n)/(2a)`.
    pub eta: f64,
    /// Central band half-width `sqrt(n)/a`.
    pub gamma: f64,
    /// Grid reach `log2(n) sqrt(n)`.
    pub reach: f64,
    pub plus_thresholds: Vec<f64>,
    pub minus_thresholds: Vec<f64>,
    pub rows: Vec<WeightRow>,
    pub correlation: f64,
    pub loss_test: f64,
    pub loss_central: f64,
    pub loss_tail: f64,
    /// `|T+ u T-| / n`.
    pub test_bound: f64,
    /// Binomial mass of the central band.
    pub central_mass: f64,
    /// `2 e^{-2 L^2 / n}`.
    pub tail_bound: f64,
    /// The central band already covers every weight.
    pub degenerate: bool,
}

/// Thresholds `n/2 +- j eta` for `1 <= j <= L/eta`, clipped to `[0, n]`.
pub fn majority_thresholds(n: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let eta = sqrt(nf) / (2.0 * a);
    let reach = log2(nf) * sqrt(nf);
    let steps = (reach / eta) as usize;
    let half = nf / 2.0;
    let plus = (1..=steps)
        .map(|j| half + j as f64 * eta)
        .filter(|&t| t <= nf)
        .collect();
    let minus = (1..=steps)
        .map(|j| half - j as f64 * eta)
        .filter(|&t| t >= 0.0)
        .collect();
    (plus, minus)
}

fn band_of(n: usize, l: usize, gamma: f64, reach: f64) -> Band {
    let dev = (l as f64 - n as f64 / 2.0).abs();
    if dev <= gamma {
        Band::Central
    } else if dev > reach {
        Band::Tail
    } else {
        Band::Test
    }
}

/// Per-weight agreement of the parallel threshold circuit with MAJORITY.
///
/// An upper threshold firing votes 1, a lower one votes 0; both or neither
/// is a fair coin. Tie regions of the post-processing contract are scored
/// against the correct answer.
pub fn majority_circuit_correlation(n: usize, a: f64, d: f64) -> Result<MajorityReport> {
    if n < 3 {
        return Err(Error::Parameter {
            name: "n",
            value: n as f64,
        });
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Parameter {
            name: "a",
            value: a,
        });
    }
    let nf = n as f64;
    let eta = sqrt(nf) / (2.0 * a);
    let gamma = sqrt(nf) / a;
    let reach = log2(nf) * sqrt(nf);
    let (plus_t, minus_t) = majority_thresholds(n, a);

    let designs = |ts: &[f64]| -> Result<Vec<ApproxTDesign>> {
        ts.iter().map(|&t| ApproxTDesign::new(n, t, a, d)).collect()
    };
    let plus_d = designs(&plus_t)?;
    let minus_d = designs(&minus_t)?;

    let mut rows = Vec::with_capacity(n + 1);
    let (mut loss_test, mut loss_central, mut loss_tail, mut central_mass) = (0.0, 0.0, 0.0, 0.0);
    for l in 0..=n {
        let fire = |ds: &[ApproxTDesign]| -> Result<AcceptBounds> {
            let each = ds
                .iter()
                .map(|d| approx_t_accept_prob(d, l))
                .collect::<Result<Vec<_>>>()?;
            Ok(AcceptBounds::any_of(&each))
        };
        let plus = fire(&plus_d)?;
        let minus = fire(&minus_d)?;
        let maj = 2 * l > n;
        let contribution = if maj {
            plus.lower - minus.upper
        } else {
            minus.lower - plus.upper
        };
        let mass = binomial_pmf(n as u64, l as u64, 0.5);
        let band = band_of(n, l, gamma, reach);
        let loss = mass * (1.0 - contribution);
        match band {
            Band::Central => {
                loss_central += loss;
                central_mass += mass;
            }
            Band::Test => loss_test += loss,
            Band::Tail => loss_tail += loss,
        }
        rows.push(WeightRow {
            weight: l,
            mass,
            maj,
            plus,
            minus,
            contribution,
            band,
        });
    }
    let correlation = rows.iter().map(|r| r.mass * r.contribution).sum();
    Ok(MajorityReport {
        n,
        a,
        d,
        eta,
        gamma,
        reach,
        test_bound: (plus_t.len() + minus_t.len()) as f64 / nf,
        plus_thresholds: plus_t,
        minus_thresholds: minus_t,
        rows,
        correlation,
        loss_test,
        loss_central,
        loss_tail,
        central_mass,
        tail_bound: 2.0 * exp(-2.0 * reach * reach / nf),
        degenerate: gamma >= nf / 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostProcessSummary {
    /// `sum_x 2^{-n} (2 Pr[post(y) = g(x)] - 1)`.
    pub correlation: f64,
    /// Largest per-input error probability.
    pub max_delta: f64,
    /// `correlation >= 1 - 2 max_delta`.
    pub bound_holds: bool,
}

/// Correlation of a classical post-processing of measured outcomes with a
/// target function. `outcomes[x][y]` is the probability of outcome `y` on
/// input `x`.
pub fn ac0_postprocess_contract(
    outcomes: &[Vec<f64>],
    post: impl Fn(usize) -> bool,
    g: impl Fn(usize) -> bool,
) -> Result<PostProcessSummary> {
    let count = outcomes.len();
    if count == 0 || !count.is_power_of_two() {
        return Err(Error::Dimension(count, count.next_power_of_two().max(1)));
    }
    let mut correlation = 0.0;
    let mut max_delta: f64 = 0.0;
    for (x, dist) in outcomes.iter().enumerate() {
        let total: f64 = dist.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(total));
        }
        let want = g(x);
        let delta: f64 = dist
            .iter()
            .enumerate()
            .filter(|&(y, _)| post(y) != want)
            .map(|(_, p)| p)
            .sum();
        max_delta = max_delta.max(delta);
        correlation += 1.0 - 2.0 * delta;
    }
    correlation /= count as f64;
    Ok(PostProcessSummary {
        correlation,
        max_delta,
        bound_holds: correlation >= 1.0 - 2.0 * max_delta - 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{poor_mans_fanout, zero_probability};
    use crate::rng::SplitMix64;
    use crate::sim::{run, run_from};
    use proptest::prelude::*;

    fn simulated(n: usize, t: f64, l: usize) -> f64 {
        let c = weak_copy_circuit(n, t).unwrap();
        run_from(&c, &weak_copy_input(n, l).unwrap())
            .unwrap()
            .prob_bit(n, true)
            .unwrap()
    }

    #[test]
    fn params_identities() {
        for n in 2..12 {
            for t in 0..=n {
                let p = WeakCopyParams::new(n, t as f64).unwrap();
                assert!((p.a * p.a + p.b * p.b - 1.0).abs() < 1e-12);
                assert!((1.0 - 2.0 * p.a * p.a - p.gamma_t / p.s).abs() < 1e-12);
                assert!((2.0 * p.a * p.b - p.alpha_t / p.s).abs() < 1e-12);
                let lam = p.lambda();
                assert!(lam >= exp(-1.0) / 2.0 - 1e-15 && lam <= 1.0);
            }
        }
        assert!(WeakCopyParams::new(1, 0.0).is_err());
        assert!(WeakCopyParams::new(4, 4.5).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!((weak_copy_prob(2, 1.0, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((weak_copy_prob(4, 2.0, 3).unwrap() - 27.0 / 1024.0).abs() < 1e-15);
        assert_eq!(weak_copy_prob(6, 3.0, 3).unwrap(), 0.0);
        assert!(weak_copy_prob(4, 2.0, 5).is_err());
    }

    #[test]
    fn circuit_matches_closed_form() {
        for n in 2..=5 {
            for t in 0..=n {
                for l in 0..=n {
                    let want = weak_copy_prob(n, t as f64, l).unwrap();
                    assert!(
                        (simulated(n, t as f64, l) - want).abs() < 1e-9,
                        "n={n} t={t} l={l}"
                    );
                }
            }
        }
        assert!((simulated(2, 1.0, 0) - 1.0 / 3.0).abs() < 1e-9);
        assert!((simulated(4, 2.0, 3) - 27.0 / 1024.0).abs() < 1e-9);
    }

    #[test]
    fn circuit_leaves_work_qubits_clean() {
        let (n, t) = (4, 1.5);
        let c = weak_copy_circuit(n, t).unwrap();
        for l in 0..=n {
            let out = run_from(&c, &weak_copy_input(n, l).unwrap()).unwrap();
            assert!(zero_probability(&out, &[n + 1, n + 2, n + 3]).unwrap() > 1.0 - 1e-9);
        }
    }

    #[test]
    fn reflection_is_an_involution() {
        let r = weak_copy_reflection(3, 2.0).unwrap();
        let mut twice = r.clone();
        twice.append(&r).unwrap();
        let mut rng = SplitMix64::new(3);
        let mut st = vec![SingleQubitState::zero(); weak_copy_width(3)];
        for s in st.iter_mut().take(4) {
            *s = crate::random::random_qubit(&mut rng);
        }
        let psi = Statevector::product(&st).unwrap();
        assert!(run_from(&twice, &psi).unwrap().fidelity(&psi).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn two_copies_or_together() {
        let (n, t, l) = (2, 1.0, 2);
        let c = weak_copy_circuit(n, t).unwrap();
        let w = weak_copy_width(n);
        let mut both = Circuit::new(0, 2 * w);
        both.append(&c.embed(&(0..w).collect::<Vec<_>>(), 0, 2 * w).unwrap())
            .unwrap();
        both.append(&c.embed(&(w..2 * w).collect::<Vec<_>>(), 0, 2 * w).unwrap())
            .unwrap();
        let input = weak_copy_input(n, l)
            .unwrap()
            .tensor(&weak_copy_input(n, l).unwrap())
            .unwrap();
        let out = run_from(&both, &input).unwrap();
        let none = zero_probability(&out, &[n, w + n]).unwrap();
        let q = weak_copy_prob(n, t, l).unwrap();
        assert!((1.0 - none - or_block_prob(q, 2)).abs() < 1e-9);
    }

    #[test]
    fn end_to_end_from_classical_bits() {
        // Each input bit is fanned out weakly; copy i of bit i feeds the test.
        let n = 2;
        let t = 1.0;
        let block = n + 2;
        let base = n + n * block;
        let width = base + 4;
        let mut c = Circuit::new(n, width - n);
        let fan = poor_mans_fanout(n).unwrap();
        for i in 0..n {
            let start = n + i * block;
            let map: Vec<usize> = [i].into_iter().chain(start..start + block).collect();
            c.append(&fan.embed(&map, n, width - n).unwrap()).unwrap();
        }
        let test = weak_copy_circuit(n, t).unwrap();
        let map: Vec<usize> = (0..n)
            .map(|j| n + j * block + j)
            .chain(base..base + 4)
            .collect();
        c.append(&test.embed(&map, n, width - n).unwrap()).unwrap();
        for x in 0..(1usize << n) {
            let p = run(&c, x).unwrap().prob_bit(base, true).unwrap();
            let want = weak_copy_prob(n, t, x.count_ones() as usize).unwrap();
            assert!((p - want).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn or_block_examples() {
        assert_eq!(or_block_prob(0.0, 7), 0.0);
        assert!((or_block_prob(0.5, 2) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn design_counts() {
        let d = ApproxTDesign::new(256, 128.0, 4.0, 8.0).unwrap();
        assert_eq!(d.m_reps, 64);
        let lam = lambda_t(256, 128.0);
        assert_eq!(d.r_reps, ceil(3.0 * 256.0 * 16.0 / lam) as usize);
        assert_eq!(d.s_copies, ceil(d.r_reps as f64 * 64.0 / 256.0) as usize);
        assert!(d.r_reps >= 1 && d.s_copies >= 1);
        assert!(ApproxTDesign::new(256, 128.0, 0.0, 8.0).is_err());
        assert!(matches!(
            ApproxTDesign::new(256, 128.0, 1e6, 8.0),
            Err(Error::Budget(_))
        ));
    }

    /// Acceptance straight from the binomial sum with the tie region split
    /// both ways.
    fn oracle_accept(m: usize, w: f64, below: f64, above: f64) -> (f64, f64) {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for k in 0..=m {
            let c = crate::math::binomial(m as u64, k as u64);
            let p = c * powi(w, k as i32) * powi(1.0 - w, (m - k) as i32);
            if (k as f64) < below {
                lo += p;
            }
            if (k as f64) <= above {
                hi += p;
            }
        }
        (lo, hi)
    }

    #[test]
    fn accept_prob_against_binomial_sum() {
        let d = ApproxTDesign::new(64, 20.0, 2.0, 3.0).unwrap();
        for l in [0usize, 10, 18, 20, 22, 40, 64] {
            let got = approx_t_accept_prob(&d, l).unwrap();
            let w = or_block_prob(weak_copy_prob(64, 20.0, l).unwrap(), d.r_reps);
            let (lo, hi) = oracle_accept(d.m_reps, w, d.accept_below, d.reject_above);
            assert!((got.lower - lo).abs() < 1e-12 && (got.upper - hi).abs() < 1e-12);
            assert!(got.lower <= got.upper);
        }
        let at_t = approx_t_accept_prob(&d, 20).unwrap();
        assert_eq!(at_t.lower, 1.0);
    }

    #[test]
    fn design_sound_at_256_middle() {
        let n = 256;
        let d = ApproxTDesign::new(n, 128.0, 4.0, 8.0).unwrap();
        assert!(approx_t_accept_prob(&d, 128).unwrap().lower >= 1.0 - 1.0 / n as f64);
        for l in 0..=n {
            let dev = (l as f64 - 128.0).abs();
            let b = approx_t_accept_prob(&d, l).unwrap();
            if dev < d.inner_radius() {
                assert!(b.lower >= 1.0 - 1.0 / n as f64, "l={l}");
            } else if dev > d.outer_radius() {
                assert!(b.upper <= 1.0 / n as f64, "l={l}");
            }
        }
    }

    #[test]
    fn accept_prob_falls_away_from_threshold() {
        let n = 100;
        let d = ApproxTDesign::new(n, 37.0, 3.0, 4.0).unwrap();
        let acc: Vec<f64> = (0..=n)
            .map(|l| approx_t_accept_prob(&d, l).unwrap().lower)
            .collect();
        for l in 37..n {
            assert!(acc[l + 1] <= acc[l] + 1e-15);
        }
        for l in 1..=37 {
            assert!(acc[l - 1] <= acc[l] + 1e-15);
        }
    }

    #[test]
    fn asymptotic_factor_near_one_for_large_n() {
        let n = 4096;
        let f = asymptotic_factor(n, 2048.0, 2050).unwrap();
        assert!((2.0 / 3.0..=4.0 / 3.0).contains(&f));
        let exact = weak_copy_prob(n, 2048.0, 2050).unwrap();
        let approx = lambda_t(n, 2048.0) * (2.0 / n as f64) * (2.0 / n as f64);
        assert!((exact / approx - f).abs() < 1e-9);
    }

    #[test]
    fn majority_loss_terms_add_up() {
        let rep = majority_circuit_correlation(63, 2.0, 4.0).unwrap();
        assert_eq!(rep.rows.len(), 64);
        let total = rep.loss_test + rep.loss_central + rep.loss_tail;
        assert!((1.0 - rep.correlation - total).abs() < 1e-12);
        let mass: f64 = rep.rows.iter().map(|r| r.mass).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!(!rep.degenerate);
        assert!(rep.correlation > 0.0);
        for r in &rep.rows {
            assert!(r.contribution <= 1.0 + 1e-12 && r.contribution >= -1.0 - 1e-12);
        }
    }

    #[test]
    fn majority_degenerate_when_band_covers_everything() {
        let rep = majority_circuit_correlation(15, 0.5, 2.0).unwrap();
        assert!(rep.degenerate);
        assert!(rep.rows.iter().all(|r| r.band == Band::Central));
        eprintln!("degenerate correlation {}", rep.correlation);
    }

    #[test]
    fn majority_complement_symmetry() {
        // Complementing the input maps weight l to n - l. Swapping which grid
        // votes 1 turns the circuit into one for the complemented MAJORITY, so
        // the reindexed sum must give the same correlation.
        let n = 31;
        let rep = majority_circuit_correlation(n, 1.5, 3.0).unwrap();
        let swapped: f64 = (0..=n)
            .map(|l| {
                let row = &rep.rows[n - l];
                let maj_c = !row.maj;
                let (vote1, vote0) = (row.minus, row.plus);
                let c = if maj_c {
                    vote1.lower - vote0.upper
                } else {
                    vote0.lower - vote1.upper
                };
                binomial_pmf(n as u64, l as u64, 0.5) * c
            })
            .sum();
        assert!((swapped - rep.correlation).abs() < 1e-12);
    }

    #[test]
    fn postprocess_examples() {
        let exact = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let s = ac0_postprocess_contract(&exact, |y| y == 1, |x| x == 1).unwrap();
        assert_eq!(s.correlation, 1.0);
        assert_eq!(s.max_delta, 0.0);
        let coin = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        let s = ac0_postprocess_contract(&coin, |y| y == 1, |x| x == 1).unwrap();
        assert!(s.correlation >= 0.0 && s.bound_holds);
        assert!(ac0_postprocess_contract(&[vec![0.3]], |_| true, |_| true).is_err());
    }

    #[test]
    fn postprocess_against_enumeration() {
        let mut rng = SplitMix64::new(17);
        let (n, outs) = (3usize, 8usize);
        let dists: Vec<Vec<f64>> = (0..1 << n)
            .map(|_| {
                let raw: Vec<f64> = (0..outs).map(|_| rng.next_f64()).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|v| v / s).collect()
            })
            .collect();
        let post = |y: usize| y.count_ones() % 2 == 1;
        let g = |x: usize| x >= 4;
        let s = ac0_postprocess_contract(&dists, post, g).unwrap();
        let mut brute = 0.0;
        for (x, row) in dists.iter().enumerate() {
            for (y, p) in row.iter().enumerate().take(outs) {
                let sign = if post(y) == g(x) { 1.0 } else { -1.0 };
                brute += p * sign / (1 << n) as f64;
            }
        }
        assert!((s.correlation - brute).abs() < 1e-12);
        assert!(s.bound_holds);
    }

    proptest! {
        #[test]
        fn weak_copy_prob_is_a_probability(n in 2usize..300, tf in 0.0f64..1.0, lf in 0.0f64..1.0) {
            let t = tf * n as f64;
            let l = (lf * n as f64) as usize;
            let p = weak_copy_prob(n, t, l).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }

        #[test]
        fn bounds_are_ordered(n in 8usize..200, tf in 0.0f64..1.0, a in 0.5f64..4.0, l in 0usize..200) {
            let t = tf * n as f64;
            let d = ApproxTDesign::new(n, t, a, 3.0).unwrap();
            let b = approx_t_accept_prob(&d, l.min(n)).unwrap();
            prop_assert!(b.lower <= b.upper + 1e-15);
            prop_assert!(b.lower >= -1e-15 && b.upper <= 1.0 + 1e-15);
        }
    }
}
