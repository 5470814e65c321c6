//! Real-valued Boolean functions on `{0,1}^n` and their Fourier spectra.
//!
//! `f^(S) = E_x[f(x) chi_S(x)]` with `chi_S(x) = (-1)^{sum_{i in S} x_i}`;
//! subsets are little-endian bit masks.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::sim::{dense, run};
use crate::C64;

/// Largest arity accepted for tables extracted from circuits.
pub const MAX_ARITY: usize = 16;
const RANGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BooleanFn {
    n: usize,
    table: Vec<f64>,
    bounded: bool,
}

impl BooleanFn {
    /// Table with every entry in `[-1, 1]` (within 1e-9).
    pub fn new(n: usize, table: Vec<f64>) -> Result<Self> {
        let f = Self::new_real(n, table)?;
        if !f.bounded {
            let bad = f
                .table
                .iter()
                .copied()
                .find(|v| v.abs() > 1.0 + RANGE_TOL)
                .unwrap_or(f64::NAN);
            return Err(Error::Parameter {
                name: "table entry",
                value: bad,
            });
        }
        Ok(f)
    }

    /// Arbitrary real table; `is_bounded` reports whether it stays in `[-1, 1]`.
    pub fn new_real(n: usize, table: Vec<f64>) -> Result<Self> {
        if table.len() != 1 << n {
            return Err(Error::Dimension(table.len(), 1 << n));
        }
        let bounded = table.iter().all(|v| v.abs() <= 1.0 + RANGE_TOL);
        Ok(Self { n, table, bounded })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new_real(n, (0..1usize << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn value(&self, x: usize) -> f64 {
        self.table[x]
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn mean(&self) -> f64 {
        self.table.iter().sum::<f64>() / self.table.len() as f64
    }

    /// `E[f^2]`.
    pub fn mean_square(&self) -> f64 {
        self.table.iter().map(|v| v * v).sum::<f64>() / self.table.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::Dimension(coeffs.len(), 1 << n));
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// Squared mass on each level `0..=n`.
    pub fn level_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            w[s.count_ones() as usize] += c * c;
        }
        w
    }

    /// `W^{>=k}`: squared mass on subsets of size at least `k`.
    pub fn weight_at_least(&self, k: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| s.count_ones() as usize >= k)
            .map(|(_, c)| c * c)
            .sum()
    }

    pub fn weight_below(&self, k: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| (s.count_ones() as usize) < k)
            .map(|(_, c)| c * c)
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `sum_S f^(S) g^(S)`.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Dimension(self.n, other.n));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Keep only coefficients whose subset size satisfies `keep`.
    pub fn filtered(&self, keep: impl Fn(usize) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| {
                if keep(s.count_ones() as usize) {
                    c
                } else {
                    0.0
                }
            })
            .collect();
        Self { n: self.n, coeffs }
    }
}

/// Unnormalized in-place Walsh-Hadamard butterfly.
fn butterfly(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(h << 1) {
            for j in block..block + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h <<= 1;
    }
}

pub fn wht(f: &BooleanFn) -> FourierSpectrum {
    let mut v = f.table.clone();
    butterfly(&mut v);
    let scale = 1.0 / v.len() as f64;
    v.iter_mut().for_each(|c| *c *= scale);
    FourierSpectrum { n: f.n, coeffs: v }
}

pub fn inverse_wht(spec: &FourierSpectrum) -> BooleanFn {
    let mut v = spec.coeffs.clone();
    butterfly(&mut v);
    BooleanFn::new_real(spec.n, v).expect("length preserved")
}

/// `W^{>=k}[f]`.
pub fn wgk(f: &BooleanFn, k: usize) -> Result<f64> {
    if k > f.n {
        return Err(Error::Parameter {
            name: "k",
            value: k as f64,
        });
    }
    Ok(wht(f).weight_at_least(k))
}

/// `E_x[f(x) g(x)]`.
pub fn correlation(f: &BooleanFn, g: &BooleanFn) -> Result<f64> {
    if f.n != g.n {
        return Err(Error::Dimension(f.n, g.n));
    }
    let s: f64 = f.table.iter().zip(&g.table).map(|(a, b)| a * b).sum();
    Ok(s / f.table.len() as f64)
}

/// Same quantity through Plancherel.
pub fn correlation_spectral(f: &BooleanFn, g: &BooleanFn) -> Result<f64> {
    if f.n != g.n {
        return Err(Error::Dimension(f.n, g.n));
    }
    wht(f).dot(&wht(g))
}

/// `chi_[n]`: `+1` on even weight.
pub fn parity_fn(n: usize) -> BooleanFn {
    BooleanFn::from_fn(n, |x| if x.count_ones() % 2 == 0 { 1.0 } else { -1.0 }).expect("valid")
}

/// `+1` iff `|x| <= n/2` (ties go to `+1`).
pub fn majority_fn(n: usize) -> BooleanFn {
    BooleanFn::from_fn(n, |x| {
        if 2 * x.count_ones() as usize <= n {
            1.0
        } else {
            -1.0
        }
    })
    .expect("valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    AtLeast,
    Below,
}

/// `MAJ^{>=k}` or `MAJ^{<k}`: the majority table with the complementary
/// coefficients zeroed. Entries may leave `[-1, 1]`.
pub fn maj_truncate(n: usize, k: usize, mode: Truncation) -> Result<BooleanFn> {
    if k > n + 1 {
        return Err(Error::Parameter {
            name: "k",
            value: k as f64,
        });
    }
    let spec = wht(&majority_fn(n));
    let kept = match mode {
        Truncation::AtLeast => spec.filtered(|s| s >= k),
        Truncation::Below => spec.filtered(|s| s < k),
    };
    Ok(inverse_wht(&kept))
}

fn check_extractable(c: &Circuit) -> Result<usize> {
    let t = c.output.ok_or(Error::NoOutput)?;
    if c.n_inputs > MAX_ARITY {
        return Err(Error::QubitCap {
            requested: c.n_inputs,
            cap: MAX_ARITY,
        });
    }
    Ok(t)
}

/// `f_C(x) = <x,0^m| C^dag Z_t C |x,0^m>` by simulating every input.
pub fn extract_fc(c: &Circuit) -> Result<BooleanFn> {
    let t = check_extractable(c)?;
    let mut table = Vec::with_capacity(1 << c.n_inputs);
    for x in 0..1usize << c.n_inputs {
        table.push(run(c, x)?.z_expectation(t)?);
    }
    BooleanFn::new(c.n_inputs, table)
}

/// The Heisenberg observable `O_C = <0^m| C^dag Z_t C |0^m>` as a
/// `2^n x 2^n` matrix, built from dense gate matrices.
pub fn observable(c: &Circuit) -> Result<DMatrix<C64>> {
    let t = check_extractable(c)?;
    let u = dense::circuit_matrix(c)?;
    let d_in = 1usize << c.n_inputs;
    // Columns of U restricted to inputs with clean ancillae.
    let up = u.columns(0, d_in).into_owned();
    let mut zup = up.clone();
    for i in 0..zup.nrows() {
        if (i >> t) & 1 == 1 {
            for j in 0..d_in {
                zup[(i, j)] = -zup[(i, j)];
            }
        }
    }
    Ok(up.adjoint() * zup)
}

/// `f_C` as the diagonal of [`observable`].
pub fn extract_fc_observable(c: &Circuit) -> Result<BooleanFn> {
    let o = observable(c)?;
    BooleanFn::new(c.n_inputs, (0..o.nrows()).map(|i| o[(i, i)].re).collect())
}

/// Smallest `W^{>=k}[MAJ_n] sqrt(k)` over the given arities and `1 <= k <= n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaFit {
    pub alpha: f64,
    pub n: usize,
    pub k: usize,
}

pub fn fitted_alpha(arities: impl IntoIterator<Item = usize>) -> AlphaFit {
    let mut best = AlphaFit {
        alpha: f64::INFINITY,
        n: 0,
        k: 0,
    };
    for n in arities {
        let spec = wht(&majority_fn(n));
        for k in 1..=n {
            let v = spec.weight_at_least(k) * sqrt(k as f64);
            if v < best.alpha {
                best = AlphaFit { alpha: v, n, k };
            }
        }
    }
    best
}
