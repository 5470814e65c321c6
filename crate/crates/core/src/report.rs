//! Machine-readable outcome of one gadget verification.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    /// `measured <= bound + tol`.
    Le,
    /// `measured >= bound - tol`.
    Ge,
    /// `|measured - bound| <= tol`.
    Eq,
    /// Recorded but never fails.
    Info,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "==",
            Relation::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GadgetReport {
    pub lemma: String,
    pub params: Vec<(String, f64)>,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl GadgetReport {
    pub fn new(lemma: &str) -> Self {
        Self {
            lemma: lemma.to_string(),
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn param(&mut self, name: &str, value: f64) -> &mut Self {
        self.params.push((name.to_string(), value));
        self
    }

    fn push(
        &mut self,
        name: &str,
        measured: f64,
        bound: f64,
        relation: Relation,
        tol: f64,
    ) -> bool {
        let passed = match relation {
            Relation::Le => measured <= bound + tol,
            Relation::Ge => measured >= bound - tol,
            Relation::Eq => (measured - bound).abs() <= tol,
            Relation::Info => true,
        };
        self.checks.push(Check {
            name: name.to_string(),
            measured,
            bound,
            relation,
            tol,
            passed,
        });
        passed
    }

    pub fn check_le(&mut self, name: &str, measured: f64, bound: f64, tol: f64) -> bool {
        self.push(name, measured, bound, Relation::Le, tol)
    }

    pub fn check_ge(&mut self, name: &str, measured: f64, bound: f64, tol: f64) -> bool {
        self.push(name, measured, bound, Relation::Ge, tol)
    }

    pub fn check_eq(&mut self, name: &str, measured: f64, expected: f64, tol: f64) -> bool {
        self.push(name, measured, expected, Relation::Eq, tol)
    }

    /// A boolean condition, stored as `1 == 1` or `0 == 1`.
    pub fn check_true(&mut self, name: &str, ok: bool) -> bool {
        self.push(name, if ok { 1.0 } else { 0.0 }, 1.0, Relation::Eq, 0.0)
    }

    pub fn info(&mut self, name: &str, value: f64) {
        self.push(name, value, value, Relation::Info, 0.0);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// `(name, measured)` for every check.
    pub fn measured(&self) -> Vec<(&str, f64)> {
        self.checks
            .iter()
            .map(|c| (c.name.as_str(), c.measured))
            .collect()
    }

    /// `(name, bound)` for every check that is not informational.
    pub fn bounds(&self) -> Vec<(&str, f64)> {
        self.checks
            .iter()
            .filter(|c| c.relation != Relation::Info)
            .map(|c| (c.name.as_str(), c.bound))
            .collect()
    }

    /// Folds another report's checks in, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: GadgetReport) {
        for mut c in other.checks {
            c.name = alloc::format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
        self.notes.extend(other.notes);
    }
}
