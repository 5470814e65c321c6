use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::{check_subset, Statevector};
use crate::error::{Error, Result};
use crate::math::scatter;
use crate::{check_cap, C64};

/// A `2^n x 2^n` density matrix, little-endian like [`Statevector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// Checks shape, Hermiticity and unit trace (1e-10).
    pub fn new(n: usize, m: DMatrix<C64>) -> Result<Self> {
        check_cap(n)?;
        let d = 1usize << n;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Dimension(m.nrows().max(m.ncols()), d));
        }
        let rho = Self { n, m };
        let tr = rho.trace();
        if (tr - 1.0).norm() > 1e-10 {
            return Err(Error::NotNormalized(tr.re));
        }
        if rho.hermiticity_error() > 1e-10 {
            return Err(Error::Precondition(alloc::string::String::from(
                "matrix is not Hermitian",
            )));
        }
        Ok(rho)
    }

    pub fn from_pure(psi: &Statevector) -> Self {
        let a = psi.amplitudes();
        let d = a.len();
        Self {
            n: psi.n_qubits(),
            m: DMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj()),
        }
    }

    pub fn from_diagonal(n: usize, probs: &[f64]) -> Result<Self> {
        if probs.len() != 1 << n {
            return Err(Error::Dimension(probs.len(), 1 << n));
        }
        let d = probs.len();
        Self::new(
            n,
            DMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    C64::new(probs[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        )
    }

    /// Convex combination `sum w_i rho_i`.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::Dimension(0, 1))?;
        let n = first.1.n;
        let d = 1 << n;
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for (w, r) in parts {
            if r.n != n {
                return Err(Error::Dimension(r.n, n));
            }
            m += &r.m * C64::new(*w, 0.0);
        }
        Self::new(n, m)
    }

    pub(crate) fn from_pure_partial(psi: &Statevector, keep: &[usize]) -> Result<Self> {
        let n = psi.n_qubits();
        if keep.is_empty() {
            return Err(Error::Precondition(alloc::string::String::from(
                "empty keep set",
            )));
        }
        check_subset(keep, n)?;
        let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let d = 1usize << k;
        let a = psi.amplitudes();
        let offs: Vec<usize> = (0..d).map(|x| scatter(x, keep)).collect();
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for r in 0..(1usize << rest.len()) {
            let base = scatter(r, &rest);
            let col: Vec<C64> = offs.iter().map(|&o| a[base | o]).collect();
            for i in 0..d {
                if col[i] == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    m[(i, j)] += col[i] * col[j].conj();
                }
            }
        }
        Ok(Self { n: k, m })
    }

    /// Reduced state on `keep`; `keep[j]` becomes qubit `j`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::Precondition(alloc::string::String::from(
                "empty keep set",
            )));
        }
        check_subset(keep, self.n)?;
        let rest: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let d = 1usize << keep.len();
        let offs: Vec<usize> = (0..d).map(|x| scatter(x, keep)).collect();
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for r in 0..(1usize << rest.len()) {
            let base = scatter(r, &rest);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += self.m[(base | offs[i], base | offs[j])];
                }
            }
        }
        Ok(Self { n: keep.len(), m })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Computational-basis probabilities.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.m.nrows()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.m.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..=i {
                worst = worst.max((self.m[(i, j)] - self.m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// Hermitian, unit trace and no eigenvalue below `-tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
            && (self.trace() - 1.0).norm() <= tol
            && self.eigenvalues().first().is_none_or(|&e| e >= -tol)
    }

    /// `<psi|rho|psi>`.
    pub fn expectation(&self, psi: &Statevector) -> Result<f64> {
        if psi.n_qubits() != self.n {
            return Err(Error::Dimension(psi.n_qubits(), self.n));
        }
        let a = psi.amplitudes();
        let mut acc = C64::new(0.0, 0.0);
        for (i, ai) in a.iter().enumerate() {
            if *ai == C64::new(0.0, 0.0) {
                continue;
            }
            let row: C64 = a
                .iter()
                .enumerate()
                .map(|(j, aj)| self.m[(i, j)] * aj)
                .sum();
            acc += ai.conj() * row;
        }
        Ok(acc.re)
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let eig = m.clone().symmetric_eigen();
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_state;
    use crate::rng::SplitMix64;

    /// Naive double-loop partial trace straight from the definition.
    fn naive_partial_trace(psi: &Statevector, keep: &[usize]) -> DMatrix<C64> {
        let n = psi.n_qubits();
        let k = keep.len();
        let d = 1 << k;
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        let a = psi.amplitudes();
        for i in 0..(1usize << n) {
            for j in 0..(1usize << n) {
                let same_rest = (0..n)
                    .filter(|q| !keep.contains(q))
                    .all(|q| (i >> q) & 1 == (j >> q) & 1);
                if !same_rest {
                    continue;
                }
                let li: usize = keep
                    .iter()
                    .enumerate()
                    .map(|(t, &q)| ((i >> q) & 1) << t)
                    .sum();
                let lj: usize = keep
                    .iter()
                    .enumerate()
                    .map(|(t, &q)| ((j >> q) & 1) << t)
                    .sum();
                m[(li, lj)] += a[i] * a[j].conj();
            }
        }
        m
    }

    #[test]
    fn partial_trace_matches_naive_oracle() {
        let mut rng = SplitMix64::new(11);
        for keep in [vec![0], vec![2, 1], vec![3, 0, 2], vec![1, 3]] {
            let psi = random_state(&mut rng, 4);
            let fast = psi.partial_trace(&keep).unwrap();
            let slow = naive_partial_trace(&psi, &keep);
            assert!((fast.matrix() - slow).norm() < 1e-10);
            assert!((fast.trace() - 1.0).norm() < 1e-10);
            let via_dm = DensityMatrix::from_pure(&psi).partial_trace(&keep).unwrap();
            assert!((via_dm.matrix() - fast.matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn validity_checks() {
        let mut rng = SplitMix64::new(5);
        let psi = random_state(&mut rng, 3);
        let rho = DensityMatrix::from_pure(&psi);
        assert!(rho.is_valid(1e-9));
        let ev = rho.eigenvalues();
        assert!((ev[7] - 1.0).abs() < 1e-10 && ev[0].abs() < 1e-10);
        assert!((rho.expectation(&psi).unwrap() - 1.0).abs() < 1e-12);
        let bad = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(DensityMatrix::new(1, bad).is_err());
        assert!(DensityMatrix::new(2, DMatrix::identity(2, 2)).is_err());
    }
}
