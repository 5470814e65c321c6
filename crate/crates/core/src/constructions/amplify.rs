use alloc::vec;
use alloc::vec::Vec;

use super::{extend, range, zero_probability};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{Gate, SingleQubitState, Unitary2};
use crate::library::{controlled_rot, reflect_zero};
use crate::math::{ceil, exp, floor, ln};
use crate::sim::{run, Projector};

fn require_prep(c: &Circuit) -> Result<()> {
    if c.n_inputs != 0 {
        return Err(Error::Precondition(alloc::format!(
            "expected a preparation circuit, got {} inputs",
            c.n_inputs
        )));
    }
    Ok(())
}

/// `C (I - 2|0..0><0..0|) C^dag`: the reflection about `C|0..0>`.
///
/// Qubits outside `targets` must come back to 0 (probability within 1e-9),
/// so that on the subspace where they are 0 the result is `I - 2|psi><psi|`.
pub fn reflection_from_prep(c: &Circuit, targets: &[usize]) -> Result<Circuit> {
    let psi = run(c, 0)?;
    crate::sim::check_subset(targets, c.n_qubits())?;
    let rest: Vec<usize> = (0..c.n_qubits()).filter(|q| !targets.contains(q)).collect();
    let clean = zero_probability(&psi, &rest)?;
    if clean < 1.0 - 1e-9 {
        return Err(Error::NotClean(clean));
    }
    let mut r = Circuit::new(c.n_inputs, c.n_ancilla);
    r.append(&c.dagger())?;
    r.push(reflect_zero(&range(0, c.n_qubits())));
    r.append(c)?;
    Ok(r)
}

/// Rotation parameter that puts amplitude exactly 1/2 on the marked branch.
pub fn amp_amp_gamma(alpha: f64) -> Result<f64> {
    if !(0.25 - 1e-12..=1.0 + 1e-12).contains(&alpha) {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha,
        });
    }
    Ok((1.0 - 1.0 / (4.0 * alpha)).clamp(0.0, 1.0))
}

/// Probability that the output register of `c|0..0>` reads 1.
pub fn flag_weight(c: &Circuit) -> Result<f64> {
    let t = c.output.ok_or(Error::NoOutput)?;
    run(c, 0)?.prob_bit(t, true)
}

/// One exact round of amplitude amplification.
///
/// `c` prepares `sqrt(alpha)|good>|1>_t + sqrt(1-alpha)|bad>|0>_t` with `t`
/// its output. The result uses one extra qubit (the last) and maps the zero
/// state to `|good>` with `t` and the extra qubit back at 0.
pub fn exact_amp_amp(c: &Circuit, alpha: f64) -> Result<Circuit> {
    require_prep(c)?;
    let t = c.output.ok_or(Error::NoOutput)?;
    let gamma = amp_amp_gamma(alpha)?;
    let measured = flag_weight(c)?;
    if (measured - alpha).abs() > 1e-6 {
        return Err(Error::FlagWeight {
            measured,
            declared: alpha,
        });
    }
    let m = c.n_qubits();
    let a = m;
    crate::check_cap(m + 1)?;

    let mut p0 = c.widen(1);
    p0.output = None;
    p0.push(controlled_rot(&[t], a, gamma)?);

    let mut out = Circuit::new(0, m + 1);
    out.append(&p0)?;
    out.push(Gate::z(a));
    out.append(&p0.dagger())?;
    out.push(reflect_zero(&range(0, m + 1)));
    out.append(&p0)?;
    extend(
        &mut out,
        [
            Gate::x(t),
            Gate::x(a),
            Gate::unitary(a, Unitary2::real([[-1.0, 0.0], [0.0, -1.0]])?),
        ],
    );
    Ok(out)
}

/// Distribution of the bitwise OR of `copies` independent samples from
/// `row` (a distribution over `n`-bit strings).
pub fn or_grid_distribution(row: &[f64], copies: usize) -> Result<Vec<f64>> {
    let d = row.len();
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::Dimension(d, d.next_power_of_two()));
    }
    // Zeta transform over subsets, pointwise power, Moebius inverse.
    let mut z = row.to_vec();
    let mut h = 1;
    while h < d {
        for s in 0..d {
            if s & h != 0 {
                z[s] += z[s ^ h];
            }
        }
        h <<= 1;
    }
    for v in z.iter_mut() {
        *v = crate::math::powi(*v, copies as i32);
    }
    let mut h = 1;
    while h < d {
        for s in 0..d {
            if s & h != 0 {
                z[s] -= z[s ^ h];
            }
        }
        h <<= 1;
    }
    Ok(z)
}

#[derive(Debug, Clone)]
pub struct SkewedNekomata {
    /// Weight of `|0^n>` on the targets before amplification.
    pub gamma: f64,
    /// Weight of `|1^n>` on the targets before amplification.
    pub eps: f64,
    pub amplified: Circuit,
    pub zero_weight: f64,
    /// Measured weight of `|1^n>` after amplification.
    pub eps1: f64,
    /// `eps / (gamma + eps)`.
    pub eps1_expected: f64,
    /// The cruder ratio `eps / gamma`.
    pub eps1_ratio: f64,
    /// Rows in the OR grid, chosen so that `(1-eps1)^m1` is in `[0.25, 0.45]`.
    pub m1: Option<usize>,
    /// `ceil(1 / eps1^2)`.
    pub m1_inverse_square: usize,
    pub grid_zero: f64,
    pub grid_one: f64,
    /// No bad component to remove: `gamma + eps = 1`.
    pub degenerate: bool,
}

impl SkewedNekomata {
    /// Both grid branches carry at least 0.2 (vacuous outside the window).
    pub fn branches_ok(&self) -> bool {
        self.m1.is_none() || (self.grid_zero >= 0.2 && self.grid_one >= 0.2)
    }
}

/// Row count in `[lo, hi]` window closest to `1/e`.
fn choose_rows(eps1: f64) -> Option<usize> {
    if !(1e-12..1.0 - 1e-12).contains(&eps1) {
        return None;
    }
    let l = ln(1.0 - eps1);
    let lo = ceil(ln(0.45) / l).max(1.0) as usize;
    let hi = floor(ln(0.25) / l) as usize;
    let target = exp(-1.0);
    (lo..=hi)
        .filter(|&m| {
            let v = crate::math::powi(1.0 - eps1, m as i32);
            (0.25..=0.45).contains(&v)
        })
        .min_by(|&a, &b| {
            let da = (crate::math::powi(1.0 - eps1, a as i32) - target).abs();
            let db = (crate::math::powi(1.0 - eps1, b as i32) - target).abs();
            da.partial_cmp(&db).unwrap_or(core::cmp::Ordering::Equal)
        })
}

/// Mark both branches, amplify them exactly and feed the result through the
/// column-OR grid. `eps_floor` is the claimed lower bound on the `|1^n>`
/// weight.
pub fn skewed_nekomata_amplify(
    c: &Circuit,
    targets: &[usize],
    eps_floor: f64,
) -> Result<SkewedNekomata> {
    require_prep(c)?;
    let m = c.n_qubits();
    crate::sim::check_subset(targets, m)?;
    let n = targets.len();
    if n == 0 {
        return Err(Error::Precondition(alloc::string::String::from(
            "empty target set",
        )));
    }
    let psi = run(c, 0)?;
    let all = (1usize << n) - 1;
    let gamma = psi.slice_norm(&Projector::Basis {
        qubits: targets.to_vec(),
        bits: 0,
    })?;
    let eps = psi.slice_norm(&Projector::Basis {
        qubits: targets.to_vec(),
        bits: all,
    })?;
    if gamma < 0.25 - 1e-12 {
        return Err(Error::Precondition(alloc::format!(
            "zero-branch weight {gamma} below 1/4"
        )));
    }
    if eps < eps_floor.max(1e-3) - 1e-12 {
        return Err(Error::Precondition(alloc::format!(
            "one-branch weight {eps} below {}",
            eps_floor.max(1e-3)
        )));
    }

    let a = m;
    let mut marked = Circuit::new(0, m + 1).with_output(a);
    marked.append(&c.widen(1))?;
    let mut qs = targets.to_vec();
    qs.push(a);
    for bit in [false, true] {
        let mut st = vec![SingleQubitState::basis(bit); n];
        st.push(SingleQubitState::plus());
        marked.push_layer(vec![Gate::reflection(qs.clone(), st)]);
    }
    let amplified = exact_amp_amp(&marked, gamma + eps)?;
    let out = run(&amplified, 0)?;
    let zero_weight = out.slice_norm(&Projector::Basis {
        qubits: targets.to_vec(),
        bits: 0,
    })?;
    let eps1 = out.slice_norm(&Projector::Basis {
        qubits: targets.to_vec(),
        bits: all,
    })?;

    let m1 = choose_rows(eps1);
    let row = out.marginal_probabilities(targets)?;
    let (grid_zero, grid_one) = match m1 {
        Some(rows) => {
            let g = or_grid_distribution(&row, rows)?;
            (g[0], g[all])
        }
        None => (row[0], row[all]),
    };
    Ok(SkewedNekomata {
        gamma,
        eps,
        amplified,
        zero_weight,
        eps1,
        eps1_expected: eps / (gamma + eps),
        eps1_ratio: eps / gamma,
        m1,
        m1_inverse_square: if eps1 > 0.0 {
            ceil(1.0 / (eps1 * eps1)) as usize
        } else {
            usize::MAX
        },
        grid_zero,
        grid_one,
        degenerate: gamma + eps >= 1.0 - 1e-9,
    })
}
