//! The harmonic tensor `D` and its index bookkeeping.
//!
//! A fourth-order symmetric tensor in three dimensions has 15 distinct slots,
//! one per non-decreasing index 4-tuple. Tracelessness imposes six linear
//! conditions, leaving nine independent components, stored in the order
//!
//! `D1111, D1112, D1113, D1122, D1123, D1222, D1223, D2222, D2223`.
//!
//! The other six slots are never stored; they are recomputed from the nine on
//! every read, so a [`Harmonic4`] cannot violate the trace conditions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{Field, Rational, Ring};

/// Number of independent components.
pub const N_INDEPENDENT: usize = 9;

/// Number of distinct slots of a fully symmetric fourth-order 3D tensor.
pub const N_SLOTS: usize = 15;

/// The 15 canonical (non-decreasing, 0-based) index tuples in lexicographic order.
pub const SLOTS: [[u8; 4]; N_SLOTS] = [
    [0, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 0, 2],
    [0, 0, 1, 1],
    [0, 0, 1, 2],
    [0, 0, 2, 2],
    [0, 1, 1, 1],
    [0, 1, 1, 2],
    [0, 1, 2, 2],
    [0, 2, 2, 2],
    [1, 1, 1, 1],
    [1, 1, 1, 2],
    [1, 1, 2, 2],
    [1, 2, 2, 2],
    [2, 2, 2, 2],
];

/// Slot position of each independent component, in storage order.
pub const INDEPENDENT_SLOTS: [usize; N_INDEPENDENT] = [0, 1, 2, 3, 4, 6, 7, 10, 11];

/// Human-readable names of the independent components.
pub const COMPONENT_NAMES: [&str; N_INDEPENDENT] = [
    "D1111", "D1112", "D1113", "D1122", "D1123", "D1222", "D1223", "D2222", "D2223",
];

const fn sort4(mut t: [u8; 4]) -> [u8; 4] {
    let mut i = 1;
    while i < 4 {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            let tmp = t[j];
            t[j] = t[j - 1];
            t[j - 1] = tmp;
            j -= 1;
        }
        i += 1;
    }
    t
}

const fn slot_position(t: [u8; 4]) -> usize {
    let s = sort4(t);
    let mut p = 0;
    while p < N_SLOTS {
        let c = SLOTS[p];
        if c[0] == s[0] && c[1] == s[1] && c[2] == s[2] && c[3] == s[3] {
            return p;
        }
        p += 1;
    }
    panic!("unreachable: every sorted tuple is a slot");
}

const fn build_slot_table() -> [usize; 81] {
    let mut table = [0usize; 81];
    let mut n = 0;
    while n < 81 {
        let t = [
            (n / 27) as u8,
            (n / 9 % 3) as u8,
            (n / 3 % 3) as u8,
            (n % 3) as u8,
        ];
        table[n] = slot_position(t);
        n += 1;
    }
    table
}

/// Maps a flat 0-based index `27a + 9b + 3c + d` to its slot position.
pub(crate) const SLOT_OF: [usize; 81] = build_slot_table();

/// Slot position for 0-based indices; no range checks.
#[inline]
pub(crate) fn slot0(a: usize, b: usize, c: usize, d: usize) -> usize {
    SLOT_OF[27 * a + 9 * b + 3 * c + d]
}

/// Number of distinct index arrangements of a slot, `4! / prod(count_i!)`.
pub(crate) const fn slot_multiplicity(p: usize) -> i64 {
    let s = SLOTS[p];
    let mut counts = [0i64; 3];
    let mut i = 0;
    while i < 4 {
        counts[s[i] as usize] += 1;
        i += 1;
    }
    const FACT: [i64; 5] = [1, 1, 2, 6, 24];
    24 / (FACT[counts[0] as usize] * FACT[counts[1] as usize] * FACT[counts[2] as usize])
}

/// A canonical (sorted, 1-based) index key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotKey(pub [u8; 4]);

impl SlotKey {
    /// Position of this key among the 15 slots.
    pub fn position(&self) -> usize {
        slot_position([self.0[0] - 1, self.0[1] - 1, self.0[2] - 1, self.0[3] - 1])
    }

    /// Number of index permutations that land on this slot.
    pub fn multiplicity(&self) -> i64 {
        slot_multiplicity(self.position())
    }

    pub fn from_position(p: usize) -> SlotKey {
        let s = SLOTS[p];
        SlotKey([s[0] + 1, s[1] + 1, s[2] + 1, s[3] + 1])
    }
}

fn check_index(i: usize) -> Result<()> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(i))
    }
}

/// Sorts four 1-based indices into their canonical slot key.
pub fn canonical_index(i: usize, j: usize, k: usize, l: usize) -> Result<SlotKey> {
    for idx in [i, j, k, l] {
        check_index(idx)?;
    }
    Ok(SlotKey(sort4([i as u8, j as u8, k as u8, l as u8])))
}

/// A symmetric traceless fourth-order 3D tensor, stored by its nine
/// independent components.
#[derive(Clone, Debug, PartialEq)]
pub struct Harmonic4<T> {
    indep: [T; N_INDEPENDENT],
}

impl<T: Ring> Harmonic4<T> {
    pub fn from_independent(indep: [T; N_INDEPENDENT]) -> Self {
        Harmonic4 { indep }
    }

    /// Builds from a slice; the slice must hold exactly nine values.
    pub fn from_slice(values: &[T]) -> Result<Self> {
        let indep: [T; N_INDEPENDENT] = values
            .to_vec()
            .try_into()
            .map_err(|_| Error::ComponentCount(values.len()))?;
        Ok(Self::from_independent(indep))
    }

    pub fn from_i64(values: [i64; N_INDEPENDENT]) -> Self {
        Self::from_independent(values.map(T::from_i64))
    }

    pub fn zero() -> Self {
        Self::from_independent(std::array::from_fn(|_| T::zero()))
    }

    pub fn independent(&self) -> &[T; N_INDEPENDENT] {
        &self.indep
    }

    /// All 15 slots, with the six dependent ones filled by the trace conditions.
    pub fn slots(&self) -> [T; N_SLOTS] {
        let [d1111, d1112, d1113, d1122, d1123, d1222, d1223, d2222, d2223] = &self.indep;
        let d1133 = d1111.add(d1122).neg();
        let d2233 = d1122.add(d2222).neg();
        let d3333 = d1111.add(&d1122.scale_i64(2)).add(d2222);
        let d1333 = d1113.add(d1223).neg();
        let d2333 = d1123.add(d2223).neg();
        let d1233 = d1112.add(d1222).neg();
        [
            d1111.clone(),
            d1112.clone(),
            d1113.clone(),
            d1122.clone(),
            d1123.clone(),
            d1133,
            d1222.clone(),
            d1223.clone(),
            d1233,
            d1333,
            d2222.clone(),
            d2223.clone(),
            d2233,
            d2333,
            d3333,
        ]
    }

    pub fn expand(&self) -> FullSym4<T> {
        FullSym4 {
            values: self.slots(),
        }
    }

    /// Entry `D_ijkl` for 1-based indices.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> Result<T> {
        let key = canonical_index(i, j, k, l)?;
        Ok(self.slots()[key.position()].clone())
    }

    /// The 81 entries in row-major order, `27a + 9b + 3c + d` (0-based).
    pub fn dense(&self) -> Vec<T> {
        let slots = self.slots();
        SLOT_OF.iter().map(|&p| slots[p].clone()).collect()
    }

    pub fn negate(&self) -> Self {
        Self::from_independent(std::array::from_fn(|n| self.indep[n].neg()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_independent(std::array::from_fn(|n| self.indep[n].mul(c)))
    }

    /// Sum of squares of all 81 entries; equals `J2`.
    pub fn frobenius_norm_sq(&self) -> T {
        let slots = self.slots();
        let mut acc = T::zero();
        for (p, v) in slots.iter().enumerate() {
            acc.add_assign(&v.mul(v).scale_i64(slot_multiplicity(p)));
        }
        acc
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Harmonic4<U> {
        Harmonic4::from_independent(std::array::from_fn(|n| f(&self.indep[n])))
    }
}

impl<T: Field> Harmonic4<T> {
    /// Largest single-trace violation of the expanded tensor.
    pub fn check_traceless(&self) -> T {
        self.expand().check_traceless()
    }

    pub fn to_f64(&self) -> Harmonic4<f64> {
        self.map(|v| v.to_f64())
    }
}

/// Fully symmetric fourth-order tensor held as its 15 canonical slots.
///
/// Unlike [`Harmonic4`] this type does not enforce tracelessness.
#[derive(Clone, Debug, PartialEq)]
pub struct FullSym4<T> {
    pub values: [T; N_SLOTS],
}

impl<T: Ring> FullSym4<T> {
    pub fn get(&self, key: SlotKey) -> &T {
        &self.values[key.position()]
    }

    pub fn get_mut(&mut self, key: SlotKey) -> &mut T {
        &mut self.values[key.position()]
    }

    /// Entry for 1-based indices.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> Result<T> {
        Ok(self.get(canonical_index(i, j, k, l)?).clone())
    }

    /// Reads back the nine independent slots, dropping the dependent ones.
    pub fn to_harmonic(&self) -> Harmonic4<T> {
        Harmonic4::from_independent(INDEPENDENT_SLOTS.map(|p| self.values[p].clone()))
    }
}

impl<T: Field> FullSym4<T> {
    /// Maximum over `j, k` and all six trace positions of `|sum_i A(..i..i..)|`.
    pub fn check_traceless(&self) -> T {
        max_trace_violation(|a, b, c, d| self.values[slot0(a, b, c, d)].clone())
    }
}

/// The six ways to place a contracted index pair among four positions.
const TRACE_POSITIONS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Max single-trace violation of a tensor given by a 0-based entry accessor.
pub(crate) fn max_trace_violation<T: Field>(entry: impl Fn(usize, usize, usize, usize) -> T) -> T {
    let mut worst = T::zero();
    for &(p, q) in &TRACE_POSITIONS {
        for j in 0..3 {
            for k in 0..3 {
                let mut sum = T::zero();
                for i in 0..3 {
                    let mut idx = [0usize; 4];
                    idx[p] = i;
                    idx[q] = i;
                    let free: Vec<usize> = (0..4).filter(|&s| s != p && s != q).collect();
                    idx[free[0]] = j;
                    idx[free[1]] = k;
                    sum.add_assign(&entry(idx[0], idx[1], idx[2], idx[3]));
                }
                let v = sum.abs();
                if v > worst {
                    worst = v;
                }
            }
        }
    }
    worst
}

/// Nine i.i.d. standard normal components, deterministic in `seed`.
pub fn random_float(seed: u64) -> Harmonic4<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Harmonic4::from_independent(std::array::from_fn(|_| rng.sample(StandardNormal)))
}

/// Nine i.i.d. rationals `p/q` with `p` uniform in `[-20, 20]` and `q` in `[1, 12]`.
pub fn random_rational(seed: u64) -> Harmonic4<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Harmonic4::from_independent(std::array::from_fn(|_| {
        let p: i64 = rng.random_range(-20..=20);
        let q: i64 = rng.random_range(1..=12);
        Rational::from_ratio(p, q)
    }))
}

/// Random float tensor rescaled to unit Frobenius norm.
pub fn random_unit_float(seed: u64) -> Harmonic4<f64> {
    let d = random_float(seed);
    let norm = d.frobenius_norm_sq().sqrt();
    d.scale(&(1.0 / norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn canonical_index_sorts() {
        assert_eq!(canonical_index(2, 1, 1, 1).unwrap(), SlotKey([1, 1, 1, 2]));
        assert_eq!(canonical_index(3, 1, 3, 1).unwrap(), SlotKey([1, 1, 3, 3]));
        assert_eq!(canonical_index(3, 3, 3, 3).unwrap(), SlotKey([3, 3, 3, 3]));
    }

    #[test]
    fn canonical_index_rejects_out_of_range() {
        assert!(matches!(
            canonical_index(0, 1, 1, 1),
            Err(Error::IndexOutOfRange(0))
        ));
        assert!(matches!(
            canonical_index(1, 1, 4, 1),
            Err(Error::IndexOutOfRange(4))
        ));
    }

    #[test]
    fn exactly_fifteen_keys() {
        let mut keys = std::collections::BTreeSet::new();
        for n in 0..81 {
            let (i, j, k, l) = (n / 27 + 1, n / 9 % 3 + 1, n / 3 % 3 + 1, n % 3 + 1);
            keys.insert(canonical_index(i, j, k, l).unwrap());
        }
        assert_eq!(keys.len(), N_SLOTS);
        let total: i64 = (0..N_SLOTS).map(slot_multiplicity).sum();
        assert_eq!(total, 81);
        for p in 0..N_SLOTS {
            assert_eq!(SlotKey::from_position(p).position(), p);
        }
    }

    #[test]
    fn completion_of_unit_d1111() {
        let d = Harmonic4::<Rational>::from_i64([1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(d.component(1, 1, 3, 3).unwrap(), q(-1, 1));
        assert_eq!(d.component(3, 1, 1, 3).unwrap(), q(-1, 1));
        assert_eq!(d.component(3, 3, 3, 3).unwrap(), q(1, 1));
        assert_eq!(d.component(2, 2, 2, 2).unwrap(), q(0, 1));
        for (i, j, k, l) in [(2, 2, 3, 3), (1, 3, 3, 3), (2, 3, 3, 3), (1, 2, 3, 3)] {
            assert_eq!(d.component(i, j, k, l).unwrap(), q(0, 1));
        }
    }

    #[test]
    fn completion_of_j3_witness() {
        let d = Harmonic4::<Rational>::from_i64([8, 0, 0, -4, 0, 5, 5, 3, 0]);
        let c = |i, j, k, l| d.component(i, j, k, l).unwrap();
        assert_eq!(c(1, 1, 3, 3), q(-4, 1));
        assert_eq!(c(2, 2, 3, 3), q(1, 1));
        assert_eq!(c(3, 3, 3, 3), q(3, 1));
        assert_eq!(c(1, 3, 3, 3), q(-5, 1));
        assert_eq!(c(2, 3, 3, 3), q(0, 1));
        assert_eq!(c(1, 2, 3, 3), q(-5, 1));
    }

    #[test]
    fn zero_tensor_has_zero_slots() {
        let d = Harmonic4::<Rational>::zero();
        assert!(d.slots().iter().all(Ring::is_zero));
        assert_eq!(d.check_traceless(), q(0, 1));
    }

    #[test]
    fn from_slice_checks_length() {
        assert!(matches!(
            Harmonic4::<f64>::from_slice(&[1.0; 8]),
            Err(Error::ComponentCount(8))
        ));
        assert!(Harmonic4::<f64>::from_slice(&[1.0; 9]).is_ok());
    }

    #[test]
    fn frobenius_of_d1() {
        let d = Harmonic4::<Rational>::from_i64([1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(d.frobenius_norm_sq(), q(8, 1));
        let d = Harmonic4::<f64>::from_i64([1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let scaled = d.scale(&2f64.sqrt());
        assert!((scaled.frobenius_norm_sq() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn frobenius_matches_dense_sum() {
        let d = random_rational(3);
        let dense = d.dense();
        let mut acc = Rational::zero();
        for v in &dense {
            acc.add_mul(v, v);
        }
        assert_eq!(d.frobenius_norm_sq(), acc);
    }

    #[test]
    fn negate_and_scale() {
        let d = random_rational(11);
        assert_eq!(d.negate().negate(), d);
        let neg = d.negate().slots();
        let c = q(-3, 7);
        let scaled = d.scale(&c).slots();
        for (p, v) in d.slots().iter().enumerate() {
            assert_eq!(neg[p], v.neg());
            assert_eq!(scaled[p], v.mul(&c));
        }
    }

    #[test]
    fn corrupted_fullsym_reports_violation() {
        let d = Harmonic4::<Rational>::from_i64([1, 2, -1, 3, 0, 1, 4, -2, 5]);
        let mut full = d.expand();
        assert_eq!(full.check_traceless(), q(0, 1));
        *full.get_mut(canonical_index(1, 1, 3, 3).unwrap()) += q(1, 1);
        assert_eq!(full.check_traceless(), q(1, 1));
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_float(7), random_float(7));
        assert_ne!(random_float(7), random_float(8));
        assert_eq!(random_rational(7), random_rational(7));
        assert_ne!(random_rational(7), random_rational(8));
        let u = random_unit_float(5);
        assert!((u.frobenius_norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_float_is_traceless_to_roundoff() {
        for seed in 0..20 {
            let d = random_float(seed);
            let norm = d.frobenius_norm_sq().sqrt();
            assert!(d.check_traceless() <= 1e-12 * norm);
        }
    }
}
