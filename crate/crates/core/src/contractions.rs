//! Auxiliary contractions `B`, `B²`, `C` and the ten invariants.
//!
//! With summation over repeated indices:
//!
//! ```text
//! B_ij   = D_iklm D_jklm          B²_ij = B_ik B_kj          C_ijkl = D_ijmn D_klmn
//! J2 = D:D    J3 = C:D    J4 = B:B    J5 = B·D·B    J6 = B·C·B    K6 = tr(B³)
//! J7 = B²·D·B    J8 = B²·C·B    J9 = B²·D·B²    J10 = B²·C·B²
//! ```
//!
//! where `X·T·Y = X_ij T_ijkl Y_kl`.
//!
//! [`invariants`] works on the 15 canonical slots and the six symmetric index
//! pairs, applying arrangement counts explicitly. [`invariants_oracle`] does
//! the same sums with plain loops over every index and shares no code with it
//! beyond the component accessor.

// Index loops mirror the tensor index notation.
#![allow(clippy::needless_range_loop)]

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Ring};
use crate::tensor::{slot0, slot_multiplicity, Harmonic4, N_SLOTS};

/// Symmetric index pairs `11, 12, 13, 22, 23, 33` (0-based).
pub const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// How many ordered index pairs map to each entry of [`PAIRS`].
pub const PAIR_WEIGHT: [i64; 6] = [1, 2, 2, 1, 2, 1];

#[inline]
fn pair_of(i: usize, j: usize) -> usize {
    const TABLE: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    TABLE[i][j]
}

/// Symmetric 3×3 matrix, entries `11, 12, 13, 22, 23, 33`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMat3<T> {
    pub v: [T; 6],
}

impl<T: Ring> SymMat3<T> {
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.v[pair_of(i, j)]
    }

    pub fn zero() -> Self {
        SymMat3 {
            v: std::array::from_fn(|_| T::zero()),
        }
    }

    pub fn identity() -> Self {
        SymMat3 {
            v: std::array::from_fn(|p| {
                if PAIRS[p].0 == PAIRS[p].1 {
                    T::one()
                } else {
                    T::zero()
                }
            }),
        }
    }

    pub fn diag(a: T, b: T, c: T) -> Self {
        SymMat3 {
            v: [a, T::zero(), T::zero(), b, T::zero(), c],
        }
    }

    pub fn trace(&self) -> T {
        self.v[0].add(&self.v[3]).add(&self.v[5])
    }

    /// Frobenius inner product `X_ij Y_ij`.
    pub fn inner(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for p in 0..6 {
            let mut term = T::zero();
            term.add_mul(&self.v[p], &other.v[p]);
            acc.add_assign(&term.scale_i64(PAIR_WEIGHT[p]));
        }
        acc
    }
}

/// Fourth-order tensor with pair symmetry only, stored as a symmetric 6×6
/// array over index pairs (21 entries). No weights are baked into storage.
#[derive(Clone, Debug, PartialEq)]
pub struct PairSym4<T> {
    v: Vec<T>,
}

#[inline]
fn tri(p: usize, q: usize) -> usize {
    let (a, b) = if p <= q { (p, q) } else { (q, p) };
    // row-major upper triangle of a 6×6
    a * 6 - a * (a + 1) / 2 + b
}

impl<T: Ring> PairSym4<T> {
    pub fn get_pair(&self, p: usize, q: usize) -> &T {
        &self.v[tri(p, q)]
    }

    /// Entry `C_ijkl` for 0-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &T {
        self.get_pair(pair_of(i, j), pair_of(k, l))
    }

    /// The pair view of a fully symmetric tensor.
    pub fn from_harmonic(d: &Harmonic4<T>) -> Self {
        let slots = d.slots();
        let mut v = Vec::with_capacity(21);
        for p in 0..6 {
            for q in p..6 {
                let (i, j) = PAIRS[p];
                let (k, l) = PAIRS[q];
                v.push(slots[slot0(i, j, k, l)].clone());
            }
        }
        PairSym4 { v }
    }
}

/// `B_ij = D_iklm D_jklm`, summed over the 10 sorted `(k, l, m)` triples
/// with their arrangement counts.
pub fn bilinear_b<T: Ring>(d: &Harmonic4<T>) -> SymMat3<T> {
    const TRIPLES: [([usize; 3], i64); 10] = [
        ([0, 0, 0], 1),
        ([0, 0, 1], 3),
        ([0, 0, 2], 3),
        ([0, 1, 1], 3),
        ([0, 1, 2], 6),
        ([0, 2, 2], 3),
        ([1, 1, 1], 1),
        ([1, 1, 2], 3),
        ([1, 2, 2], 3),
        ([2, 2, 2], 1),
    ];
    let slots = d.slots();
    let v = PAIRS.map(|(i, j)| {
        // buckets for weights 1, 3, 6
        let mut buckets = [T::zero(), T::zero(), T::zero()];
        for &([k, l, m], w) in &TRIPLES {
            let b = match w {
                1 => 0,
                3 => 1,
                _ => 2,
            };
            buckets[b].add_mul(&slots[slot0(i, k, l, m)], &slots[slot0(j, k, l, m)]);
        }
        let [b1, b3, b6] = buckets;
        b1.add(&b3.scale_i64(3)).add(&b6.scale_i64(6))
    });
    SymMat3 { v }
}

/// Ordinary matrix product `B B`.
pub fn mat_square<T: Ring>(b: &SymMat3<T>) -> SymMat3<T> {
    let v = PAIRS.map(|(i, j)| {
        let mut acc = T::zero();
        for k in 0..3 {
            acc.add_mul(b.get(i, k), b.get(k, j));
        }
        acc
    });
    SymMat3 { v }
}

/// `C_ijkl = D_ijmn D_klmn`, summed over the six `m <= n` pairs.
pub fn quartic_c<T: Ring>(d: &Harmonic4<T>) -> PairSym4<T> {
    let slots = d.slots();
    let mut v = Vec::with_capacity(21);
    for p in 0..6 {
        for q in p..6 {
            let (i, j) = PAIRS[p];
            let (k, l) = PAIRS[q];
            let mut diag = T::zero();
            let mut off = T::zero();
            for (r, &(m, n)) in PAIRS.iter().enumerate() {
                let acc = if PAIR_WEIGHT[r] == 1 {
                    &mut diag
                } else {
                    &mut off
                };
                acc.add_mul(&slots[slot0(i, j, m, n)], &slots[slot0(k, l, m, n)]);
            }
            v.push(diag.add(&off.scale_i64(2)));
        }
    }
    PairSym4 { v }
}

/// `X_ij T_ijkl Y_kl`, contracting `X` into `T` first.
pub fn sandwich<T: Ring>(x: &SymMat3<T>, t: &PairSym4<T>, y: &SymMat3<T>) -> T {
    let xw: [T; 6] = std::array::from_fn(|p| x.v[p].scale_i64(PAIR_WEIGHT[p]));
    let mut acc = T::zero();
    for q in 0..6 {
        let mut xt = T::zero();
        for p in 0..6 {
            xt.add_mul(&xw[p], t.get_pair(p, q));
        }
        let yq = y.v[q].scale_i64(PAIR_WEIGHT[q]);
        acc.add_mul(&xt, &yq);
    }
    acc
}

/// Full quadruple contraction `S_ijkl T_ijkl` of two pair-symmetric tensors.
fn double_dot<T: Ring>(s: &PairSym4<T>, t: &PairSym4<T>) -> T {
    let mut acc = T::zero();
    for p in 0..6 {
        for q in 0..6 {
            let mut term = T::zero();
            term.add_mul(s.get_pair(p, q), t.get_pair(p, q));
            acc.add_assign(&term.scale_i64(PAIR_WEIGHT[p] * PAIR_WEIGHT[q]));
        }
    }
    acc
}

/// One of the ten invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Invariant {
    J2,
    J3,
    J4,
    J5,
    J6,
    K6,
    J7,
    J8,
    J9,
    J10,
}

impl Invariant {
    pub const ALL: [Invariant; 10] = [
        Invariant::J2,
        Invariant::J3,
        Invariant::J4,
        Invariant::J5,
        Invariant::J6,
        Invariant::K6,
        Invariant::J7,
        Invariant::J8,
        Invariant::J9,
        Invariant::J10,
    ];

    pub const ODD: [Invariant; 4] = [Invariant::J3, Invariant::J5, Invariant::J7, Invariant::J9];

    pub const EVEN: [Invariant; 6] = [
        Invariant::J2,
        Invariant::J4,
        Invariant::J6,
        Invariant::K6,
        Invariant::J8,
        Invariant::J10,
    ];

    pub fn degree(self) -> u32 {
        match self {
            Invariant::J2 => 2,
            Invariant::J3 => 3,
            Invariant::J4 => 4,
            Invariant::J5 => 5,
            Invariant::J6 | Invariant::K6 => 6,
            Invariant::J7 => 7,
            Invariant::J8 => 8,
            Invariant::J9 => 9,
            Invariant::J10 => 10,
        }
    }

    pub fn is_odd(self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Invariant::J2 => "J2",
            Invariant::J3 => "J3",
            Invariant::J4 => "J4",
            Invariant::J5 => "J5",
            Invariant::J6 => "J6",
            Invariant::K6 => "K6",
            Invariant::J7 => "J7",
            Invariant::J8 => "J8",
            Invariant::J9 => "J9",
            Invariant::J10 => "J10",
        }
    }

    /// Position in [`Invariant::ALL`].
    pub fn index(self) -> usize {
        Invariant::ALL.iter().position(|&f| f == self).unwrap()
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Invariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Invariant::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownInvariant(s.to_string()))
    }
}

/// The ten invariants of one tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantVector<T> {
    pub j2: T,
    pub j3: T,
    pub j4: T,
    pub j5: T,
    pub j6: T,
    pub k6: T,
    pub j7: T,
    pub j8: T,
    pub j9: T,
    pub j10: T,
}

impl<T> InvariantVector<T> {
    pub fn get(&self, f: Invariant) -> &T {
        match f {
            Invariant::J2 => &self.j2,
            Invariant::J3 => &self.j3,
            Invariant::J4 => &self.j4,
            Invariant::J5 => &self.j5,
            Invariant::J6 => &self.j6,
            Invariant::K6 => &self.k6,
            Invariant::J7 => &self.j7,
            Invariant::J8 => &self.j8,
            Invariant::J9 => &self.j9,
            Invariant::J10 => &self.j10,
        }
    }

    pub fn from_fn(mut f: impl FnMut(Invariant) -> T) -> Self {
        InvariantVector {
            j2: f(Invariant::J2),
            j3: f(Invariant::J3),
            j4: f(Invariant::J4),
            j5: f(Invariant::J5),
            j6: f(Invariant::J6),
            k6: f(Invariant::K6),
            j7: f(Invariant::J7),
            j8: f(Invariant::J8),
            j9: f(Invariant::J9),
            j10: f(Invariant::J10),
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> InvariantVector<U> {
        InvariantVector::from_fn(|inv| f(self.get(inv)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Invariant, &T)> {
        Invariant::ALL.into_iter().map(move |f| (f, self.get(f)))
    }
}

impl<T: Field> InvariantVector<T> {
    pub fn to_f64(&self) -> InvariantVector<f64> {
        self.map(|v| v.to_f64())
    }
}

/// All ten invariants via the symmetry-reduced contractions.
pub fn invariants<T: Ring>(d: &Harmonic4<T>) -> InvariantVector<T> {
    let b = bilinear_b(d);
    let b2 = mat_square(&b);
    let c = quartic_c(d);
    let dp = PairSym4::from_harmonic(d);

    let slots = d.slots();
    let mut j2 = T::zero();
    for p in 0..N_SLOTS {
        let mut sq = T::zero();
        sq.add_mul(&slots[p], &slots[p]);
        j2.add_assign(&sq.scale_i64(slot_multiplicity(p)));
    }

    InvariantVector {
        j2,
        j3: double_dot(&c, &dp),
        j4: b.inner(&b),
        j5: sandwich(&b, &dp, &b),
        j6: sandwich(&b, &c, &b),
        k6: b2.inner(&b),
        j7: sandwich(&b2, &dp, &b),
        j8: sandwich(&b2, &c, &b),
        j9: sandwich(&b2, &dp, &b2),
        j10: sandwich(&b2, &c, &b2),
    }
}

/// All ten invariants by brute-force loops over every index combination.
pub fn invariants_oracle<T: Ring>(d: &Harmonic4<T>) -> InvariantVector<T> {
    let dense = d.dense();
    let at = |i: usize, j: usize, k: usize, l: usize| &dense[27 * i + 9 * j + 3 * k + l];

    let mut b: [[T; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| T::zero()));
    for (i, row) in b.iter_mut().enumerate() {
        for (j, bij) in row.iter_mut().enumerate() {
            for k in 0..3 {
                for l in 0..3 {
                    for m in 0..3 {
                        bij.add_mul(at(i, k, l, m), at(j, k, l, m));
                    }
                }
            }
        }
    }
    let mut b2: [[T; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| T::zero()));
    for (i, row) in b2.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            for k in 0..3 {
                v.add_mul(&b[i][k], &b[k][j]);
            }
        }
    }
    let mut c: Vec<T> = vec![T::zero(); 81];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let entry = &mut c[27 * i + 9 * j + 3 * k + l];
                    for m in 0..3 {
                        for n in 0..3 {
                            entry.add_mul(at(i, j, m, n), at(k, l, m, n));
                        }
                    }
                }
            }
        }
    }
    let cat = |i: usize, j: usize, k: usize, l: usize| &c[27 * i + 9 * j + 3 * k + l];

    let four = |f: &dyn Fn(usize, usize, usize, usize) -> T| {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        acc.add_assign(&f(i, j, k, l));
                    }
                }
            }
        }
        acc
    };
    let xty = |x: &[[T; 3]; 3], t: &dyn Fn(usize, usize, usize, usize) -> T, y: &[[T; 3]; 3]| {
        four(&|i, j, k, l| x[i][j].mul(&t(i, j, k, l)).mul(&y[k][l]))
    };
    let dt = |i, j, k, l| at(i, j, k, l).clone();
    let ct = |i, j, k, l| cat(i, j, k, l).clone();

    let mut j4 = T::zero();
    let mut k6 = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            j4.add_mul(&b[i][j], &b[i][j]);
            for k in 0..3 {
                k6.add_assign(&b[i][j].mul(&b[j][k]).mul(&b[k][i]));
            }
        }
    }

    InvariantVector {
        j2: four(&|i, j, k, l| at(i, j, k, l).mul(at(i, j, k, l))),
        j3: four(&|i, j, k, l| cat(i, j, k, l).mul(at(i, j, k, l))),
        j4,
        j5: xty(&b, &dt, &b),
        j6: xty(&b, &ct, &b),
        k6,
        j7: xty(&b2, &dt, &b),
        j8: xty(&b2, &ct, &b),
        j9: xty(&b2, &dt, &b2),
        j10: xty(&b2, &ct, &b2),
    }
}

/// Recovers `J4` from `J2, J3, J6, K6`:
/// `J4 = (39 J2³ + 10 J3² − 135 J6 + 240 K6) / (198 J2)`, and `0` when `J2 = 0`.
pub fn j4_from_mixed<T: Field>(j2: &T, j3: &T, j6: &T, k6: &T) -> T {
    if j2.is_zero() {
        return T::zero();
    }
    let num = j2
        .pow(3)
        .scale_i64(39)
        .add(&j3.mul(j3).scale_i64(10))
        .sub(&j6.scale_i64(135))
        .add(&k6.scale_i64(240));
    num.div(&j2.scale_i64(198))
}
