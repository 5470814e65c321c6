//! Float helpers that work without `std`, plus exact combinatorics.

use crate::C64;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn powi(x: f64, k: i32) -> f64 {
    libm::pow(x, k as f64)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// `acos` with the argument clamped into `[-1, 1]`.
#[inline]
pub fn acos_clamped(x: f64) -> f64 {
    libm::acos(x.clamp(-1.0, 1.0))
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(cos(theta), sin(theta))
}

/// Exact binomial coefficient; `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Binomial coefficient as a float (log-space for large arguments).
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    match binomial_u128(n, k) {
        Some(v) if v < (1u128 << 100) => v as f64,
        _ => exp(ln_binomial(n, k)),
    }
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `Pr[Binom(n, p) = k]`, computed in log space when the direct product would
/// underflow.
pub fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let lp = ln_binomial(n, k) + k as f64 * ln(p) + (n - k) as f64 * libm::log1p(-p);
    exp(lp)
}

/// Full distribution of `Binom(n, p)` by exact convolution of Bernoulli trials.
pub fn binomial_distribution(n: usize, p: f64) -> alloc::vec::Vec<f64> {
    let mut dist = alloc::vec![0.0; n + 1];
    dist[0] = 1.0;
    for trial in 0..n {
        for w in (0..=trial + 1).rev() {
            let stay = dist[w] * (1.0 - p);
            let moved = if w > 0 { dist[w - 1] * p } else { 0.0 };
            dist[w] = stay + moved;
        }
    }
    dist
}

#[inline]
pub fn popcount(x: usize) -> u32 {
    x.count_ones()
}

/// Iterator over every submask of `mask`, including `0` and `mask` itself.
pub fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    core::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

/// Spread the low bits of `bits` onto the positions listed in `qubits`.
#[inline]
pub fn scatter(bits: usize, qubits: &[usize]) -> usize {
    let mut out = 0;
    for (j, &q) in qubits.iter().enumerate() {
        if (bits >> j) & 1 == 1 {
            out |= 1 << q;
        }
    }
    out
}

/// Inverse of [`scatter`].
#[inline]
pub fn gather(index: usize, qubits: &[usize]) -> usize {
    let mut out = 0;
    for (j, &q) in qubits.iter().enumerate() {
        out |= ((index >> q) & 1) << j;
    }
    out
}

pub fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | (1 << q))
}
