//! Single-qubit states and unitaries, and the gate kinds a circuit can hold.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{cis, cos, sin, sqrt};
use crate::C64;

const UNIT_TOL: f64 = 1e-12;

#[inline]
fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A normalized single-qubit state `a0|0> + a1|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitState {
    pub a0: C64,
    pub a1: C64,
}

impl SingleQubitState {
    pub fn new(a0: C64, a1: C64) -> Result<Self> {
        let s = Self { a0, a1 };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(s)
    }

    /// Build from any nonzero pair by rescaling.
    pub fn normalized(a0: C64, a1: C64) -> Result<Self> {
        let n = sqrt(a0.norm_sqr() + a1.norm_sqr());
        if n < 1e-300 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self {
            a0: a0 / n,
            a1: a1 / n,
        })
    }

    pub const fn zero() -> Self {
        Self {
            a0: C64::new(1.0, 0.0),
            a1: C64::new(0.0, 0.0),
        }
    }

    pub const fn one() -> Self {
        Self {
            a0: C64::new(0.0, 0.0),
            a1: C64::new(1.0, 0.0),
        }
    }

    pub fn basis(bit: bool) -> Self {
        if bit {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn plus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self { a0: c(h), a1: c(h) }
    }

    pub fn minus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self {
            a0: c(h),
            a1: c(-h),
        }
    }

    /// `sqrt(1-eps)|0> + sqrt(eps)|1>`, the state written `|eps>`.
    pub fn eps(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::Parameter {
                name: "eps",
                value: eps,
            });
        }
        Ok(Self {
            a0: c(sqrt(1.0 - eps)),
            a1: c(sqrt(eps)),
        })
    }

    /// Point on the Bloch sphere with polar angle `theta` and azimuth `phi`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        Self {
            a0: c(cos(theta / 2.0)),
            a1: cis(phi) * sin(theta / 2.0),
        }
    }

    #[inline]
    pub fn amp(&self, bit: usize) -> C64 {
        if bit & 1 == 0 {
            self.a0
        } else {
            self.a1
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a0.norm_sqr() + self.a1.norm_sqr()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= UNIT_TOL
    }

    /// Bloch vector `(x, y, z)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let cross = self.a0.conj() * self.a1;
        [
            2.0 * cross.re,
            2.0 * cross.im,
            self.a0.norm_sqr() - self.a1.norm_sqr(),
        ]
    }

    /// State with the given unit Bloch vector (global phase fixed so `a0` is real).
    pub fn from_bloch_vector(v: [f64; 3]) -> Self {
        let z = v[2].clamp(-1.0, 1.0);
        let a0 = sqrt((1.0 + z) / 2.0);
        let r = sqrt((1.0 - z) / 2.0);
        let phi = crate::math::atan2(v[1], v[0]);
        Self {
            a0: c(a0),
            a1: cis(phi) * r,
        }
    }
}

/// A 2x2 unitary, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub m: [[C64; 2]; 2],
}

impl Unitary2 {
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        let u = Self { m };
        if !u.is_unitary(UNIT_TOL) {
            return Err(Error::Precondition(alloc::format!(
                "matrix is not unitary: {:?}",
                m
            )));
        }
        Ok(u)
    }

    pub fn real(m: [[f64; 2]; 2]) -> Result<Self> {
        Self::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self {
            m: [[c(1.0), c(0.0)], [c(0.0), c(1.0)]],
        }
    }

    pub fn x() -> Self {
        Self {
            m: [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
        }
    }

    pub fn y() -> Self {
        let i = C64::new(0.0, 1.0);
        Self {
            m: [[c(0.0), -i], [i, c(0.0)]],
        }
    }

    pub fn z() -> Self {
        Self {
            m: [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]],
        }
    }

    pub fn h() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self {
            m: [[c(h), c(h)], [c(h), c(-h)]],
        }
    }

    /// `diag(1, e^{i phi})`.
    pub fn phase(phi: f64) -> Self {
        Self {
            m: [[c(1.0), c(0.0)], [c(0.0), cis(phi)]],
        }
    }

    /// `e^{i phi} I`.
    pub fn global_phase(phi: f64) -> Self {
        let p = cis(phi);
        Self {
            m: [[p, c(0.0)], [c(0.0), p]],
        }
    }

    /// `R_y(beta) = [[cos(beta/2), -sin(beta/2)], [sin(beta/2), cos(beta/2)]]`.
    pub fn ry(beta: f64) -> Self {
        let (cb, sb) = (cos(beta / 2.0), sin(beta / 2.0));
        Self {
            m: [[c(cb), c(-sb)], [c(sb), c(cb)]],
        }
    }

    /// `R_z(phi) = diag(e^{-i phi/2}, e^{i phi/2})`.
    pub fn rz(phi: f64) -> Self {
        Self {
            m: [[cis(-phi / 2.0), c(0.0)], [c(0.0), cis(phi / 2.0)]],
        }
    }

    /// The real reflection `[[sqrt(g), sqrt(1-g)], [sqrt(1-g), -sqrt(g)]]`.
    pub fn rot_gamma(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Parameter {
                name: "gamma",
                value: gamma,
            });
        }
        let (g, h) = (sqrt(gamma), sqrt(1.0 - gamma));
        Ok(Self {
            m: [[c(g), c(h)], [c(h), c(-g)]],
        })
    }

    /// Special unitary whose first column is `state`, so `|0>` maps to it.
    pub fn preparing(state: SingleQubitState) -> Self {
        let (a, b) = (state.a0, state.a1);
        Self {
            m: [[a, -b.conj()], [b, a.conj()]],
        }
    }

    pub fn dagger(&self) -> Self {
        let m = self.m;
        Self {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = (self.m, rhs.m);
        let mut out = [[c(0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m: out }
    }

    pub fn apply(&self, s: SingleQubitState) -> SingleQubitState {
        SingleQubitState {
            a0: self.m[0][0] * s.a0 + self.m[0][1] * s.a1,
            a1: self.m[1][0] * s.a0 + self.m[1][1] * s.a1,
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.mul(&self.dagger());
        (p.m[0][0] - 1.0).norm() <= tol
            && (p.m[1][1] - 1.0).norm() <= tol
            && p.m[0][1].norm() <= tol
            && p.m[1][0].norm() <= tol
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (self.m[i][j] - other.m[i][j]).norm() <= tol))
    }
}

/// Classical reversible primitives. Every one of them is self-inverse.
///
/// Qubit layout per tag:
/// - `Fanout`: `qubits[0]` is the source, the rest are XOR targets;
/// - `Parity`, `Exact(w)`, `Threshold(w)`: the last qubit is the target and
///   receives the predicate of the others;
/// - `Cnot`: `[control, target]`; `Cz`: two qubits, symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimitiveOp {
    Fanout,
    Parity,
    Exact(usize),
    Threshold(usize),
    Cnot,
    Cz,
}

impl PrimitiveOp {
    /// Only `cnot` and `cz` are two-qubit reflections up to free single-qubit
    /// unitaries.
    pub fn is_qac_legal(&self) -> bool {
        matches!(self, PrimitiveOp::Cnot | PrimitiveOp::Cz)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PrimitiveOp::Fanout => "fanout",
            PrimitiveOp::Parity => "parity",
            PrimitiveOp::Exact(_) => "exact",
            PrimitiveOp::Threshold(_) => "threshold",
            PrimitiveOp::Cnot => "cnot",
            PrimitiveOp::Cz => "cz",
        }
    }

    pub fn param(&self) -> Option<usize> {
        match self {
            PrimitiveOp::Exact(w) | PrimitiveOp::Threshold(w) => Some(*w),
            _ => None,
        }
    }

    pub fn from_tag(tag: &str, param: Option<usize>) -> Option<Self> {
        Some(match (tag, param) {
            ("fanout", None) => PrimitiveOp::Fanout,
            ("parity", None) => PrimitiveOp::Parity,
            ("exact", Some(w)) => PrimitiveOp::Exact(w),
            ("threshold", Some(w)) => PrimitiveOp::Threshold(w),
            ("cnot", None) => PrimitiveOp::Cnot,
            ("cz", None) => PrimitiveOp::Cz,
            _ => return None,
        })
    }

    /// Smallest and largest allowed qubit counts.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            PrimitiveOp::Cnot | PrimitiveOp::Cz => (2, 2),
            PrimitiveOp::Fanout => (2, usize::MAX),
            PrimitiveOp::Parity | PrimitiveOp::Exact(_) | PrimitiveOp::Threshold(_) => {
                (2, usize::MAX)
            }
        }
    }

    /// Image of local basis index `bits` (bit `j` is `qubits[j]`) and the
    /// phase sign picked up. Only `Cz` produces a sign.
    pub fn map_local(&self, bits: usize, arity: usize) -> (usize, bool) {
        let last = arity - 1;
        let controls = bits & ((1 << last) - 1);
        let flip_target = |cond: bool| if cond { bits ^ (1 << last) } else { bits };
        match *self {
            PrimitiveOp::Fanout => {
                if bits & 1 == 1 {
                    (bits ^ (((1 << arity) - 1) & !1), false)
                } else {
                    (bits, false)
                }
            }
            PrimitiveOp::Parity => (flip_target(controls.count_ones() % 2 == 1), false),
            PrimitiveOp::Exact(w) => (flip_target(controls.count_ones() as usize == w), false),
            PrimitiveOp::Threshold(w) => (flip_target(controls.count_ones() as usize >= w), false),
            PrimitiveOp::Cnot => (flip_target(bits & 1 == 1), false),
            PrimitiveOp::Cz => (bits, bits == 0b11),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// `I - 2|theta><theta|` with `|theta>` the product of `state` over `qubits`.
    Reflection {
        qubits: Vec<usize>,
        state: Vec<SingleQubitState>,
    },
    /// A free single-qubit unitary.
    Unitary {
        qubit: usize,
        matrix: Unitary2,
    },
    Primitive {
        qubits: Vec<usize>,
        op: PrimitiveOp,
    },
}

impl Gate {
    pub fn reflection(qubits: Vec<usize>, state: Vec<SingleQubitState>) -> Self {
        Gate::Reflection { qubits, state }
    }

    pub fn unitary(qubit: usize, matrix: Unitary2) -> Self {
        Gate::Unitary { qubit, matrix }
    }

    pub fn primitive(qubits: Vec<usize>, op: PrimitiveOp) -> Self {
        Gate::Primitive { qubits, op }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Primitive {
            qubits: alloc::vec![control, target],
            op: PrimitiveOp::Cnot,
        }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Gate::Primitive {
            qubits: alloc::vec![a, b],
            op: PrimitiveOp::Cz,
        }
    }

    pub fn h(q: usize) -> Self {
        Gate::unitary(q, Unitary2::h())
    }

    pub fn x(q: usize) -> Self {
        Gate::unitary(q, Unitary2::x())
    }

    pub fn z(q: usize) -> Self {
        Gate::unitary(q, Unitary2::z())
    }

    pub fn qubits(&self) -> &[usize] {
        match self {
            Gate::Reflection { qubits, .. } | Gate::Primitive { qubits, .. } => qubits,
            Gate::Unitary { qubit, .. } => core::slice::from_ref(qubit),
        }
    }

    pub fn is_multi_qubit(&self) -> bool {
        self.qubits().len() >= 2
    }

    pub fn is_qac_legal(&self) -> bool {
        match self {
            Gate::Primitive { op, .. } => op.is_qac_legal(),
            _ => true,
        }
    }

    pub fn dagger(&self) -> Self {
        match self {
            Gate::Unitary { qubit, matrix } => Gate::Unitary {
                qubit: *qubit,
                matrix: matrix.dagger(),
            },
            other => other.clone(),
        }
    }

    /// Relabel qubits through `map` (old index to new index).
    pub fn relabel(&self, map: &[usize]) -> Self {
        match self {
            Gate::Reflection { qubits, state } => Gate::Reflection {
                qubits: qubits.iter().map(|&q| map[q]).collect(),
                state: state.clone(),
            },
            Gate::Unitary { qubit, matrix } => Gate::Unitary {
                qubit: map[*qubit],
                matrix: *matrix,
            },
            Gate::Primitive { qubits, op } => Gate::Primitive {
                qubits: qubits.iter().map(|&q| map[q]).collect(),
                op: *op,
            },
        }
    }
}
