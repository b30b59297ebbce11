//! Separation witnesses.
//!
//! A witness for invariant `f` is a pair of tensors on which every other
//! member of a basis takes the same value while `f` does not, so `f` cannot
//! be a function of the others. This module holds the fixed witness tensors
//! ([`catalog`]), the one-parameter family used for `J8` ([`j8`]), and the
//! Newton-solved agreement systems used for `J6` ([`j6`]).

pub mod catalog;
pub mod j6;
pub mod j8;

use serde::Serialize;

use crate::contractions::{invariants, Invariant};
use crate::rotations::relative_gap;
use crate::scalar::Field;
use crate::tensor::Harmonic4;

pub use catalog::{catalog, catalog_pairs, verify_catalog, CatalogCheck, CatalogEntry};
pub use j6::{solve_agreement_system, verify_j6_separation, RestrictedFamily, SeparationSystem};
pub use j8::{bisect_root, h_eval, j8_family, verify_j8_separation};

/// Agreement tolerance used throughout (relative).
pub const AGREE_TOL: f64 = 1e-9;

/// "Differs" means a relative gap above this multiple of the agreement tolerance.
pub const SEPARATION_FACTOR: f64 = 1e3;

/// Absolute bound for invariants that must vanish in float mode.
pub const VANISH_TOL: f64 = 1e-10;

/// The two nine-invariant bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    SmithBao,
    Mixed,
}

impl Basis {
    pub fn members(self) -> [Invariant; 9] {
        use Invariant::*;
        match self {
            Basis::SmithBao => [J2, J3, J4, J5, J6, J7, J8, J9, J10],
            Basis::Mixed => [J2, J3, J5, J6, K6, J7, J8, J9, J10],
        }
    }

    /// Every member except `f`.
    pub fn others(self, f: Invariant) -> Vec<Invariant> {
        self.members().into_iter().filter(|&g| g != f).collect()
    }
}

/// Two tensors and the claim they witness.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessPair<T> {
    pub left: Harmonic4<T>,
    pub right: Harmonic4<T>,
    pub agree: Vec<Invariant>,
    /// `None` marks a pair that separates nothing.
    pub differ: Option<Invariant>,
    pub source: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Agree,
    Differ,
    Outside,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantComparison {
    pub invariant: Invariant,
    pub left: f64,
    pub right: f64,
    /// `|a − b| / max(|a|, |b|)`; decides separation.
    pub relative_gap: f64,
    /// `|a − b| / max(|a|, |b|, ‖D‖^deg)`; decides agreement, so values that
    /// vanish up to rounding still compare.
    pub scaled_gap: f64,
    pub role: Role,
    pub ok: bool,
}

/// An extra scalar condition attached to a report.
#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl NamedCheck {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        NamedCheck {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        NamedCheck {
            name: name.into(),
            value,
            threshold,
            pass: value > threshold,
        }
    }
}

/// Solver outcome: a root (bisection) or a parameter vector (Newton).
#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub solution: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual_history: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub source: String,
    pub differ: Option<Invariant>,
    pub tol_agree: f64,
    pub tol_sep: f64,
    pub comparisons: Vec<InvariantComparison>,
    pub checks: Vec<NamedCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveResult>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

impl WitnessReport {
    pub fn comparison(&self, f: Invariant) -> &InvariantComparison {
        &self.comparisons[f.index()]
    }

    pub fn push_check(&mut self, check: NamedCheck) {
        self.pass &= check.pass;
        self.checks.push(check);
    }
}

impl<T: Field> WitnessPair<T> {
    /// Evaluates both tensors. Passes iff every `agree` invariant has scaled
    /// gap within `tol_agree` and the `differ` invariant (if any) has relative
    /// gap above `tol_sep`.
    pub fn evaluate(&self, tol_agree: f64, tol_sep: f64) -> WitnessReport {
        let l = invariants(&self.left);
        let r = invariants(&self.right);
        let norm = l.j2.to_f64().max(r.j2.to_f64()).sqrt();
        let comparisons: Vec<InvariantComparison> = Invariant::ALL
            .into_iter()
            .map(|f| {
                let (a, b) = (l.get(f), r.get(f));
                let diff = a.sub(b).abs().to_f64();
                let size = a.to_f64().abs().max(b.to_f64().abs());
                let (gap, scaled) = if diff == 0.0 {
                    (0.0, 0.0)
                } else {
                    (diff / size, diff / size.max(norm.powi(f.degree() as i32)))
                };
                let role = if self.differ == Some(f) {
                    Role::Differ
                } else if self.agree.contains(&f) {
                    Role::Agree
                } else {
                    Role::Outside
                };
                let ok = match role {
                    Role::Agree => scaled <= tol_agree,
                    Role::Differ => gap > tol_sep,
                    Role::Outside => true,
                };
                InvariantComparison {
                    invariant: f,
                    left: a.to_f64(),
                    right: b.to_f64(),
                    relative_gap: gap,
                    scaled_gap: scaled,
                    role,
                    ok,
                }
            })
            .collect();
        let pass = comparisons.iter().all(|c| c.ok);
        WitnessReport {
            source: self.source.clone(),
            differ: self.differ,
            tol_agree,
            tol_sep,
            comparisons,
            checks: Vec::new(),
            solve: None,
            notes: Vec::new(),
            pass,
        }
    }
}

fn negligible<T: Field>(v: &T, norm: f64, degree: u32) -> bool {
    if T::EXACT {
        v.is_zero()
    } else {
        relative_gap(v.to_f64(), 0.0, norm, degree) <= AGREE_TOL
    }
}

/// The pair `(D, −D)`. Even invariants always agree; if exactly one odd
/// invariant is nonzero it is the one that separates, the other odd
/// invariants agree at zero.
pub fn sign_pair<T: Field>(d: &Harmonic4<T>) -> WitnessPair<T> {
    let inv = invariants(d);
    let norm = inv.j2.to_f64().sqrt();
    let live: Vec<Invariant> = Invariant::ODD
        .into_iter()
        .filter(|&f| !negligible(inv.get(f), norm, f.degree()))
        .collect();
    let (agree, differ) = match live.as_slice() {
        [f] => (
            Invariant::ALL.into_iter().filter(|g| g != f).collect(),
            Some(*f),
        ),
        _ => (Invariant::EVEN.to_vec(), None),
    };
    WitnessPair {
        left: d.clone(),
        right: d.negate(),
        agree,
        differ,
        source: match differ {
            Some(f) => format!("sign-pair-{}", f.name().to_lowercase()),
            None => "sign-pair".into(),
        },
    }
}

/// Relative tolerances for the float catalog checks.
pub fn float_tolerance(f: Invariant) -> f64 {
    if f.degree() <= 6 {
        1e-9
    } else {
        1e-8
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Ring};

    #[test]
    fn sign_pair_of_j3_witness() {
        let d = Harmonic4::<Rational>::from_i64([8, 0, 0, -4, 0, 5, 5, 3, 0]);
        let pair = sign_pair(&d);
        assert_eq!(pair.differ, Some(Invariant::J3));
        let report = pair.evaluate(0.0, 0.0);
        assert!(report.pass);
        let c = report.comparison(Invariant::J3);
        assert_eq!((c.left - c.right).abs(), 12960.0);
    }

    #[test]
    fn sign_pair_of_j9_witness() {
        let q = |n, d| Rational::from_ratio(n, d);
        let d = Harmonic4::from_independent([
            q(0, 1),
            q(1, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(-3, 4),
            q(1, 4),
            q(1, 1),
            q(0, 1),
        ]);
        let pair = sign_pair(&d);
        assert_eq!(pair.differ, Some(Invariant::J9));
        let report = pair.evaluate(0.0, 0.0);
        let c = report.comparison(Invariant::J9);
        assert_eq!((c.left, c.right), (45.0 / 8.0, -45.0 / 8.0));
        assert!(report.pass);
    }

    #[test]
    fn sign_pair_without_odd_invariants() {
        let d = Harmonic4::<Rational>::from_i64([1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let pair = sign_pair(&d);
        assert_eq!(pair.differ, None);
        assert!(pair.evaluate(0.0, 0.0).pass);
        assert!(Ring::is_zero(&invariants(&d).j3));
    }

    #[test]
    fn basis_members() {
        assert!(!Basis::SmithBao.members().contains(&Invariant::K6));
        assert!(!Basis::Mixed.members().contains(&Invariant::J4));
        assert_eq!(Basis::Mixed.others(Invariant::J6).len(), 8);
    }
}
