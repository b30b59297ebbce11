//! The one-parameter restricted family that separates `J8`.

use super::{Basis, NamedCheck, SolveResult, WitnessPair, WitnessReport, VANISH_TOL};
use crate::contractions::{invariants, Invariant};
use crate::error::{Error, Result};
use crate::tensor::Harmonic4;

/// Coefficients of `h`, constant term first.
pub const H_COEFFS: [f64; 7] = [-4.0, -156.0, -207.0, 5863.0, 6234.0, -24147.0, 9800.0];

/// Bracket containing the root of `h` used for the witness.
pub const H_BRACKET: (f64, f64) = (0.15, 0.2);

/// Width at which the root bisection stops.
pub const ROOT_TOL: f64 = 1e-14;

/// `h(t)` by Horner's rule.
pub fn h_eval(t: f64) -> f64 {
    H_COEFFS.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// Bisection on `[lo, hi]` until the bracket is no wider than `tol`.
/// Takes at most `ceil(log2((hi − lo) / tol))` halvings.
// Negated comparisons also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn bisect_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<SolveResult> {
    if !(tol > 0.0) || !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "bisection needs lo < hi and tol > 0, got [{lo}, {hi}], tol {tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 || fb == 0.0 {
        let x = if fa == 0.0 { a } else { b };
        return Ok(SolveResult {
            solution: vec![x],
            residual_norm: 0.0,
            iterations: 0,
            converged: true,
            residual_history: vec![0.0],
            note: None,
        });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let mut history = Vec::new();
    let mut iterations = 0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        iterations += 1;
        history.push(fm.abs());
        if fm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let x = 0.5 * (a + b);
    Ok(SolveResult {
        solution: vec![x],
        residual_norm: f(x).abs(),
        iterations,
        converged: true,
        residual_history: history,
        note: None,
    })
}

/// The pair `(D(t), D̂(t))`: `D1113 = 1`, `D1123 = −√t`,
/// `D2223 = (1 + 5t) / (4√t)`, and `D1223` on the two branches of
/// `(1 − 2t ± √(6 + 9t − 54t² + 24t³)) / (8t − 4)`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn j8_family(t: f64) -> Result<WitnessPair<f64>> {
    let radicand = 6.0 + 9.0 * t - 54.0 * t * t + 24.0 * t * t * t;
    if !(t > 0.0 && t < 0.5) || t == 0.25 || !(radicand >= 0.0) {
        return Err(Error::FamilyDomain(t));
    }
    let root = radicand.sqrt();
    let st = t.sqrt();
    let den = 8.0 * t - 4.0;
    let member = |d1223: f64| {
        Harmonic4::from_independent([
            0.0,
            0.0,
            1.0,
            0.0,
            -st,
            0.0,
            d1223,
            0.0,
            (1.0 + 5.0 * t) / (4.0 * st),
        ])
    };
    Ok(WitnessPair {
        left: member((1.0 - 2.0 * t + root) / den),
        right: member((1.0 - 2.0 * t - root) / den),
        agree: Basis::SmithBao.others(Invariant::J8),
        differ: Some(Invariant::J8),
        source: "j8-family".into(),
    })
}

/// Largest absolute odd invariant over both members.
pub fn max_odd_abs(pair: &WitnessPair<f64>) -> f64 {
    let (l, r) = (invariants(&pair.left), invariants(&pair.right));
    Invariant::ODD
        .iter()
        .map(|&f| l.get(f).abs().max(r.get(f).abs()))
        .fold(0.0, f64::max)
}

/// Root of `h` in its bracket, then the family at that root.
pub fn verify_j8_separation(tol_agree: f64, tol_sep: f64) -> Result<WitnessReport> {
    let (lo, hi) = H_BRACKET;
    let root = bisect_root(h_eval, lo, hi, ROOT_TOL)?;
    let t = root.solution[0];
    let pair = j8_family(t)?;
    let mut report = pair.evaluate(tol_agree, tol_sep);
    report.push_check(NamedCheck::at_most("|h(t*)|", root.residual_norm, 1e-10));
    report.push_check(NamedCheck::above("t* - 0.15", t - lo, 0.0));
    report.push_check(NamedCheck::above("0.2 - t*", hi - t, 0.0));
    report.push_check(NamedCheck::at_most(
        "max |odd|",
        max_odd_abs(&pair),
        VANISH_TOL,
    ));
    report.notes.push(format!(
        "t* = {t:.15}, (1 - 5t*)^2 = {:e}",
        (1.0 - 5.0 * t).powi(2)
    ));
    report.solve = Some(root);
    Ok(report)
}
