//! Fixed witness tensors with their published invariant values.

use serde::Serialize;

use super::{float_tolerance, sign_pair, Basis, WitnessPair, AGREE_TOL, SEPARATION_FACTOR};
use crate::contractions::{invariants, Invariant};
use crate::rotations::relative_gap;
use crate::scalar::{format_rational, Field, Rational};
use crate::tensor::Harmonic4;

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum CatalogTensor {
    Exact(Harmonic4<Rational>),
    Float(Harmonic4<f64>),
}

#[derive(Clone, Debug)]
pub enum Expected {
    Exact(Rational),
    Float(f64),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub tensor: CatalogTensor,
    /// Invariants not listed carry no published value.
    pub expected: Vec<(Invariant, Expected)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogCheck {
    pub label: &'static str,
    pub invariant: Invariant,
    pub expected: String,
    pub computed: String,
    /// Zero for exact matches.
    pub relative_error: f64,
    pub exact: bool,
    pub pass: bool,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn exact(values: &[(Invariant, Rational)]) -> Vec<(Invariant, Expected)> {
    values
        .iter()
        .map(|(f, v)| (*f, Expected::Exact(v.clone())))
        .collect()
}

/// `values` for the named invariants, zero for the rest of `listed`.
fn float_row(listed: &[Invariant], values: &[(Invariant, f64)]) -> Vec<(Invariant, Expected)> {
    listed
        .iter()
        .map(|&f| {
            let v = values
                .iter()
                .find(|(g, _)| *g == f)
                .map_or(0.0, |(_, v)| *v);
            (f, Expected::Float(v))
        })
        .collect()
}

fn axis_tensor(slot: usize, value: f64) -> Harmonic4<f64> {
    let mut c = [0.0; 9];
    c[slot] = value;
    Harmonic4::from_independent(c)
}

/// The restricted tensor of the `J10` pair; `plus` picks the `D1223` branch.
pub fn j10_tensor(plus: bool) -> Harmonic4<f64> {
    let s5 = 5f64.sqrt();
    let d1223 = if plus {
        (-4.0 / 9.0 + 28.0 / s5) / 16.0
    } else {
        -(4.0 / 9.0 + 28.0 / s5) / 16.0
    };
    Harmonic4::from_independent([
        0.0,
        0.0,
        1.0 / 9.0,
        0.0,
        -1.0 / (9.0 * s5),
        0.0,
        d1223,
        0.0,
        s5 / 18.0,
    ])
}

fn j10_expected(plus: bool) -> Vec<(Invariant, Expected)> {
    use Invariant::*;
    let sign = if plus { 1.0 } else { -1.0 };
    let j10 = 343.0 * (512675.0 + sign * 216.0 * 5f64.sqrt()) / 4860000.0;
    float_row(
        &Basis::SmithBao.members(),
        &[
            (J2, 10.0),
            (J4, 1553.0 / 45.0),
            (J6, 98.0 / 135.0),
            (J8, 207319.0 / 40500.0),
            (J10, j10),
        ],
    )
}

/// Tensor with a single nonzero odd invariant, value `v`.
fn odd_row(live: Invariant, v: f64) -> Vec<(Invariant, Expected)> {
    float_row(&Invariant::ODD, &[(live, v)])
}

pub fn j3_witness() -> Harmonic4<Rational> {
    Harmonic4::from_i64([8, 0, 0, -4, 0, 5, 5, 3, 0])
}

pub fn j9_witness() -> Harmonic4<Rational> {
    Harmonic4::from_independent([
        q(0, 1),
        q(1, 1),
        q(0, 1),
        q(0, 1),
        q(0, 1),
        q(-3, 4),
        q(1, 4),
        q(1, 1),
        q(0, 1),
    ])
}

pub fn j5_witness() -> Harmonic4<f64> {
    let r = (38.0f64 / 3.0).sqrt();
    let a = (2.5 + r).sqrt();
    Harmonic4::from_independent([
        1.0,
        a,
        -(2f64.sqrt()) / 2.0,
        -1.0,
        0.0,
        -a,
        0.0,
        0.5,
        0.5 * (5.0 + 2.0 * r).sqrt(),
    ])
}

pub fn j7_witness() -> Harmonic4<f64> {
    let r = 13033f64.sqrt();
    Harmonic4::from_independent([
        (-83.0 + r) / 144.0,
        0.0,
        (0.5 * (-11455.0 + 101.0 * r)).sqrt() / 72.0,
        0.0,
        0.0,
        1.0 / (2.0 * 2f64.sqrt()),
        0.0,
        0.5,
        0.0,
    ])
}

/// Every published tensor with its published values.
pub fn catalog() -> Vec<CatalogEntry> {
    use Invariant::*;
    let sb = Basis::SmithBao.members();
    let mixed = Basis::Mixed.members();
    let j7 = (6384263.0 - 55933.0 * 13033f64.sqrt()) / 884736.0;
    let zero = || q(0, 1);
    vec![
        CatalogEntry {
            label: "odd-j3",
            tensor: CatalogTensor::Exact(j3_witness()),
            expected: exact(&[(J3, q(-6480, 1)), (J5, zero()), (J7, zero()), (J9, zero())]),
        },
        CatalogEntry {
            label: "odd-j5",
            tensor: CatalogTensor::Float(j5_witness()),
            expected: odd_row(J5, 12.5),
        },
        CatalogEntry {
            label: "odd-j7",
            tensor: CatalogTensor::Float(j7_witness()),
            expected: odd_row(J7, j7),
        },
        CatalogEntry {
            label: "odd-j9",
            tensor: CatalogTensor::Exact(j9_witness()),
            expected: exact(&[(J3, zero()), (J5, zero()), (J7, zero()), (J9, q(45, 8))]),
        },
        CatalogEntry {
            label: "smith-bao-d1",
            tensor: CatalogTensor::Exact(Harmonic4::from_i64([1, 0, 0, 0, 0, 0, 0, 0, 0])),
            expected: sb
                .iter()
                .map(|&f| {
                    let v = match f {
                        J2 => q(8, 1),
                        J4 => q(32, 1),
                        _ => zero(),
                    };
                    (f, Expected::Exact(v))
                })
                .collect(),
        },
        CatalogEntry {
            label: "smith-bao-d2",
            tensor: CatalogTensor::Float(axis_tensor(1, 2f64.sqrt() / 11f64.powf(0.25))),
            expected: float_row(&sb, &[(J2, 32.0 / 11f64.sqrt()), (J4, 32.0)]),
        },
        CatalogEntry {
            label: "smith-bao-d3",
            tensor: CatalogTensor::Float(axis_tensor(1, 0.5f64.sqrt())),
            expected: float_row(&sb, &[(J2, 8.0), (J4, 22.0)]),
        },
        CatalogEntry {
            label: "mixed-d1",
            tensor: CatalogTensor::Float(axis_tensor(0, 2f64.sqrt())),
            expected: float_row(&mixed, &[(J2, 16.0), (K6, 1024.0)]),
        },
        CatalogEntry {
            label: "mixed-d2",
            tensor: CatalogTensor::Float(axis_tensor(1, 2.0 / 31f64.powf(1.0 / 6.0))),
            expected: float_row(&mixed, &[(J2, 64.0 / 31f64.cbrt()), (K6, 1024.0)]),
        },
        CatalogEntry {
            label: "j10-plus",
            tensor: CatalogTensor::Float(j10_tensor(true)),
            expected: j10_expected(true),
        },
        CatalogEntry {
            label: "j10-minus",
            tensor: CatalogTensor::Float(j10_tensor(false)),
            expected: j10_expected(false),
        },
    ]
}

fn check_float(
    label: &'static str,
    d: &Harmonic4<f64>,
    expected: &[(Invariant, Expected)],
    out: &mut Vec<CatalogCheck>,
) {
    let inv = invariants(d);
    let norm = d.frobenius_norm_sq().sqrt();
    for (f, e) in expected {
        let want = match e {
            Expected::Float(v) => *v,
            Expected::Exact(r) => r.to_f64(),
        };
        let got = *inv.get(*f);
        let err = relative_gap(got, want, norm, f.degree());
        out.push(CatalogCheck {
            label,
            invariant: *f,
            expected: format!("{want:e}"),
            computed: format!("{got:e}"),
            relative_error: err,
            exact: false,
            pass: err <= float_tolerance(*f),
        });
    }
}

fn check_exact(
    label: &'static str,
    d: &Harmonic4<Rational>,
    expected: &[(Invariant, Expected)],
    out: &mut Vec<CatalogCheck>,
) {
    let inv = invariants(d);
    for (f, e) in expected {
        let got = inv.get(*f);
        let Expected::Exact(want) = e else {
            unreachable!("exact catalog tensors carry exact values")
        };
        out.push(CatalogCheck {
            label,
            invariant: *f,
            expected: format_rational(want),
            computed: format_rational(got),
            relative_error: if got == want { 0.0 } else { f64::INFINITY },
            exact: true,
            pass: got == want,
        });
    }
}

/// Compares every catalog entry against its published values: exactly for
/// rational tensors, within 1e-9 (degree ≤ 6) / 1e-8 relative otherwise.
pub fn verify_catalog() -> Vec<CatalogCheck> {
    let mut out = Vec::new();
    for entry in catalog() {
        match &entry.tensor {
            CatalogTensor::Exact(d) => check_exact(entry.label, d, &entry.expected, &mut out),
            CatalogTensor::Float(d) => check_float(entry.label, d, &entry.expected, &mut out),
        }
    }
    out
}

/// Published pairs: the four sign pairs plus the `J2`, `J4` and `J10`
/// witnesses of the Smith-Bao basis and the `J2` witness of the mixed basis.
pub fn catalog_pairs() -> Vec<WitnessPair<f64>> {
    use Invariant::*;
    let mut pairs: Vec<WitnessPair<f64>> = [
        j3_witness().to_f64(),
        j5_witness(),
        j7_witness(),
        j9_witness().to_f64(),
    ]
    .iter()
    .map(sign_pair)
    .collect();
    let d1 = axis_tensor(0, 1.0);
    let table = |left, right, basis: Basis, f, source: &str| WitnessPair {
        left,
        right,
        agree: basis.others(f),
        differ: Some(f),
        source: source.into(),
    };
    pairs.push(table(
        d1.clone(),
        axis_tensor(1, 2f64.sqrt() / 11f64.powf(0.25)),
        Basis::SmithBao,
        J2,
        "smith-bao-j2",
    ));
    pairs.push(table(
        d1,
        axis_tensor(1, 0.5f64.sqrt()),
        Basis::SmithBao,
        J4,
        "smith-bao-j4",
    ));
    pairs.push(table(
        j10_tensor(true),
        j10_tensor(false),
        Basis::SmithBao,
        J10,
        "smith-bao-j10",
    ));
    pairs.push(table(
        axis_tensor(0, 2f64.sqrt()),
        axis_tensor(1, 2.0 / 31f64.powf(1.0 / 6.0)),
        Basis::Mixed,
        J2,
        "mixed-j2",
    ));
    pairs
}

/// Default tolerances for [`catalog_pairs`].
pub fn pair_tolerances() -> (f64, f64) {
    (AGREE_TOL, SEPARATION_FACTOR * AGREE_TOL)
}
