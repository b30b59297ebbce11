//! Verification suites run by `harmonic4 verify`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::contractions::{invariants, j4_from_mixed, Invariant};
use crate::error::{Error, Result};
use crate::poly::{verify_k6_identity, verify_parity, verify_restriction_lemma};
use crate::rotations::{isotropy_check, trial_seed, IsotropyTolerance};
use crate::scalar::Ring;
use crate::tensor::{random_rational, random_unit_float};
use crate::witnesses::{
    catalog::pair_tolerances, catalog_pairs, verify_catalog, verify_j6_separation,
    verify_j8_separation, SeparationSystem, AGREE_TOL, SEPARATION_FACTOR,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identity,
    Parity,
    Restriction,
    Isotropy,
    Witnesses,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Identity,
        Suite::Parity,
        Suite::Restriction,
        Suite::Isotropy,
        Suite::Witnesses,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identity => "identity",
            Suite::Parity => "parity",
            Suite::Restriction => "restriction",
            Suite::Isotropy => "isotropy",
            Suite::Witnesses => "witnesses",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Rotations per tensor in the isotropy suite.
    pub trials: usize,
    /// Random tensors in the isotropy suite.
    pub tensors: usize,
    /// Random rational tensors for the `J4` reconstruction check.
    pub samples: usize,
    pub isotropy_tol: IsotropyTolerance,
    /// Agreement tolerance for witnesses; separation is `10³` times this.
    pub agree_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            trials: 1000,
            tensors: 20,
            samples: 100,
            isotropy_tol: IsotropyTolerance::default(),
            agree_tol: AGREE_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub suites: Vec<Suite>,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

impl Summary {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn check(suite: Suite, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        suite,
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn from_result<T>(suite: Suite, name: &str, r: Result<T>, ok: impl FnOnce(T) -> String) -> Check {
    match r {
        Ok(v) => check(suite, name, true, ok(v)),
        Err(e) => check(suite, name, false, e.to_string()),
    }
}

fn identity(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Identity;
    let mut out = vec![from_result(s, "k6-identity", verify_k6_identity(), |_| {
        "residual is the zero polynomial".into()
    })];
    let mut bad = Vec::new();
    for i in 0..cfg.samples as u64 {
        let d = random_rational(trial_seed(cfg.seed, i));
        let v = invariants(&d);
        if v.j2.is_zero() {
            continue;
        }
        if j4_from_mixed(&v.j2, &v.j3, &v.j6, &v.k6) != v.j4 {
            bad.push(i);
        }
    }
    out.push(check(
        s,
        "j4-reconstruction",
        bad.is_empty(),
        if bad.is_empty() {
            format!("exact on {} random rational tensors", cfg.samples)
        } else {
            format!("mismatch at samples {bad:?}")
        },
    ));
    let zero = crate::scalar::Rational::zero();
    out.push(check(
        s,
        "j4-reconstruction-zero",
        j4_from_mixed(&zero, &zero, &zero, &zero).is_zero(),
        "J2 = 0 gives 0",
    ));
    out
}

fn parity() -> Vec<Check> {
    vec![from_result(Suite::Parity, "parity", verify_parity(), |v| {
        v.iter()
            .map(|(f, p)| format!("{f}:{p:?}"))
            .collect::<Vec<_>>()
            .join(" ")
    })]
}

fn restriction() -> Vec<Check> {
    vec![from_result(
        Suite::Restriction,
        "restriction-lemma",
        verify_restriction_lemma(),
        |_| "J3, J5, J7, J9 vanish identically".into(),
    )]
}

fn isotropy(cfg: &VerifyConfig) -> Vec<Check> {
    (0..cfg.tensors as u64)
        .map(|i| {
            let seed = trial_seed(cfg.seed ^ 0x15_07_0F, i);
            let d = random_unit_float(seed);
            let name = format!("isotropy-{i}");
            match isotropy_check(&d, cfg.trials, seed, cfg.isotropy_tol) {
                Ok(r) => {
                    let worst = r
                        .deviations
                        .iter()
                        .max_by(|a, b| {
                            (a.max_relative_deviation / a.tolerance)
                                .total_cmp(&(b.max_relative_deviation / b.tolerance))
                        })
                        .expect("ten deviations");
                    check(
                        Suite::Isotropy,
                        name,
                        r.pass,
                        format!(
                            "{} rotations, worst {} at {:.2e} (tol {:.0e})",
                            r.trials,
                            worst.invariant,
                            worst.max_relative_deviation,
                            worst.tolerance
                        ),
                    )
                }
                Err(e) => check(Suite::Isotropy, name, false, e.to_string()),
            }
        })
        .collect()
}

fn witnesses(cfg: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Witnesses;
    let mut out = Vec::new();

    let catalog = verify_catalog();
    let mut labels: Vec<&str> = catalog.iter().map(|c| c.label).collect();
    labels.dedup();
    for label in labels {
        let rows: Vec<_> = catalog.iter().filter(|c| c.label == label).collect();
        let failed: Vec<String> = rows
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} = {} (expected {})", c.invariant, c.computed, c.expected))
            .collect();
        out.push(check(
            s,
            format!("catalog-{label}"),
            failed.is_empty(),
            if failed.is_empty() {
                format!("{} values match", rows.len())
            } else {
                failed.join("; ")
            },
        ));
    }

    let (pair_agree, pair_sep) = pair_tolerances();
    for pair in catalog_pairs() {
        let r = pair.evaluate(pair_agree, pair_sep);
        let detail = match pair.differ {
            Some(f) => format!("{f} gap {:.3e}", r.comparison(f).relative_gap),
            None => "no separating invariant".into(),
        };
        let ok = r.pass && pair.differ.is_some();
        out.push(check(s, format!("pair-{}", pair.source), ok, detail));
    }

    let sep = SEPARATION_FACTOR * cfg.agree_tol;
    match verify_j8_separation(cfg.agree_tol, sep) {
        Ok(r) => {
            let t = r.solve.as_ref().map_or(f64::NAN, |x| x.solution[0]);
            let gap = r.comparison(Invariant::J8).relative_gap;
            out.push(check(
                s,
                "j8-family",
                r.pass,
                format!("t* = {t:.12}, J8 gap {gap:.3e}"),
            ));
        }
        Err(e) => out.push(check(s, "j8-family", false, e.to_string())),
    }

    for system in [SeparationSystem::SmithBao, SeparationSystem::Mixed] {
        let r = verify_j6_separation(system, cfg.agree_tol);
        let solve = r.solve.as_ref().expect("j6 report carries its solve");
        let mut detail = format!(
            "residual {:.1e} after {} iterations, J6 gap {:.3e}",
            solve.residual_norm,
            solve.iterations,
            r.comparison(Invariant::J6).relative_gap
        );
        for c in r.checks.iter().filter(|c| !c.pass) {
            detail.push_str(&format!(
                "; {} = {:e} (limit {:e})",
                c.name, c.value, c.threshold
            ));
        }
        out.push(check(s, system.label(), r.pass, detail));
    }
    out
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Summary {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    let mut checks = Vec::new();
    for &s in &suites {
        checks.extend(match s {
            Suite::Identity => identity(cfg),
            Suite::Parity => parity(),
            Suite::Restriction => restriction(),
            Suite::Isotropy => isotropy(cfg),
            Suite::Witnesses => witnesses(cfg),
            Suite::All => unreachable!(),
        });
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    Summary {
        suites,
        passed: checks.len() - failed,
        failed,
        pass: failed == 0,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_isotropy_suite() {
        let cfg = VerifyConfig {
            trials: 20,
            tensors: 3,
            ..VerifyConfig::default()
        };
        let summary = run(Suite::Isotropy, &cfg);
        assert_eq!(summary.checks.len(), 3);
        assert!(summary.pass, "{summary:#?}");
    }

    #[test]
    fn witness_suite_passes() {
        let summary = run(Suite::Witnesses, &VerifyConfig::default());
        assert!(
            summary.pass,
            "{:#?}",
            summary.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn impossible_isotropy_tolerance_fails() {
        let cfg = VerifyConfig {
            trials: 5,
            tensors: 1,
            isotropy_tol: IsotropyTolerance::uniform(0.0),
            ..VerifyConfig::default()
        };
        assert!(!run(Suite::Isotropy, &cfg).pass);
    }
}
