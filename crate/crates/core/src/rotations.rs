//! Orthogonal group action on harmonic tensors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::contractions::{invariants, Invariant, InvariantVector};
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::tensor::{max_trace_violation, FullSym4, Harmonic4, INDEPENDENT_SLOTS, SLOTS};

/// Default entrywise tolerance on `QᵀQ − I` for float matrices.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// A 3×3 orthogonal matrix, row-major. Determinant may be `+1` or `−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Orthogonal3<T> {
    m: [[T; 3]; 3],
}

impl<T: Field> Orthogonal3<T> {
    /// Accepts `m` if every entry of `QᵀQ − I` is within `tol` (use `0` for
    /// an exact check over the rationals).
    pub fn new(m: [[T; 3]; 3], tol: f64) -> Result<Self> {
        let q = Orthogonal3 { m };
        let dev = q.orthogonality_defect();
        if dev > tol || dev.is_nan() {
            return Err(Error::NotOrthogonal(dev));
        }
        Ok(q)
    }

    /// Row-major construction from nine entries.
    pub fn from_row_major(entries: &[T], tol: f64) -> Result<Self> {
        if entries.len() != 9 {
            return Err(Error::InvalidArgument(format!(
                "orthogonal matrix needs 9 entries, got {}",
                entries.len()
            )));
        }
        Self::new(
            std::array::from_fn(|i| std::array::from_fn(|j| entries[3 * i + j].clone())),
            tol,
        )
    }

    /// Max entry of `|QᵀQ − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let mut s = if i == j { T::one().neg() } else { T::zero() };
                for k in 0..3 {
                    s.add_mul(&self.m[k][i], &self.m[k][j]);
                }
                worst = worst.max(s.abs().to_f64());
            }
        }
        worst
    }

    pub fn identity() -> Self {
        Orthogonal3 {
            m: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
            }),
        }
    }

    /// `diag(s0, s1, s2)` with each sign `±1`.
    pub fn reflection(signs: [i64; 3]) -> Result<Self> {
        Self::new(
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    if i == j {
                        T::from_i64(signs[i])
                    } else {
                        T::zero()
                    }
                })
            }),
            0.0,
        )
    }

    /// The matrix sending basis vector `e_j` to `e_perm[j]` (0-based).
    pub fn permutation(perm: [usize; 3]) -> Result<Self> {
        Self::new(
            std::array::from_fn(|i| {
                std::array::from_fn(|j| if perm[j] == i { T::one() } else { T::zero() })
            }),
            0.0,
        )
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.m[i][j]
    }

    pub fn rows(&self) -> &[[T; 3]; 3] {
        &self.m
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        Orthogonal3 {
            m: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let mut s = T::zero();
                    for k in 0..3 {
                        s.add_mul(&self.m[i][k], &rhs.m[k][j]);
                    }
                    s
                })
            }),
        }
    }

    pub fn determinant(&self) -> T {
        let m = &self.m;
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            m[1][a].mul(&m[2][b]).sub(&m[1][c].mul(&m[2][d]))
        };
        m[0][0]
            .mul(&minor(1, 2, 2, 1))
            .sub(&m[0][1].mul(&minor(0, 2, 2, 0)))
            .add(&m[0][2].mul(&minor(0, 1, 1, 0)))
    }
}

/// `D'_abcd = Q_ai Q_bj Q_ck Q_dl D_ijkl` as 81 dense entries, one mode at a time.
pub fn rotate_dense<T: Field>(d: &Harmonic4<T>, q: &Orthogonal3<T>) -> Vec<T> {
    let mut cur = d.dense();
    for mode in 0..4 {
        let stride = 27 / 3usize.pow(mode as u32);
        let mut next = vec![T::zero(); 81];
        for (n, out) in next.iter_mut().enumerate() {
            let a = (n / stride) % 3;
            let base = n - a * stride;
            for i in 0..3 {
                out.add_mul(&q.m[a][i], &cur[base + i * stride]);
            }
        }
        cur = next;
    }
    cur
}

/// Applies `Q` to all four indices and re-expresses the result by its nine
/// independent components.
///
/// In debug builds the six dependent slots of the rotated tensor are
/// compared against their trace completions.
pub fn rotate<T: Field>(d: &Harmonic4<T>, q: &Orthogonal3<T>) -> Harmonic4<T> {
    let dense = rotate_dense(d, q);
    let full = FullSym4 {
        values: SLOTS.map(|s| {
            let [a, b, c, e] = s.map(usize::from);
            dense[27 * a + 9 * b + 3 * c + e].clone()
        }),
    };
    let out = full.to_harmonic();
    #[cfg(debug_assertions)]
    {
        let scale = d.frobenius_norm_sq().to_f64().sqrt();
        let completed = out.slots();
        for (p, v) in full.values.iter().enumerate() {
            if INDEPENDENT_SLOTS.contains(&p) {
                continue;
            }
            let gap = v.sub(&completed[p]).abs().to_f64();
            debug_assert!(
                gap <= 1e-9 * scale.max(1.0),
                "rotated slot {p} off its trace completion by {gap:e}"
            );
        }
    }
    out
}

/// Max single-trace violation of a dense 81-entry tensor.
pub fn dense_trace_violation<T: Field>(dense: &[T]) -> T {
    max_trace_violation(|a, b, c, d| dense[27 * a + 9 * b + 3 * c + d].clone())
}

/// Max `|A_ijkl − A_π(ijkl)|` over all index permutations of a dense tensor.
pub fn dense_symmetry_defect<T: Field>(dense: &[T]) -> T {
    let mut worst = T::zero();
    for n in 0..81 {
        let idx = [n / 27, n / 9 % 3, n / 3 % 3, n % 3];
        let mut sorted = idx;
        sorted.sort_unstable();
        let m = 27 * sorted[0] + 9 * sorted[1] + 3 * sorted[2] + sorted[3];
        let gap = dense[n].sub(&dense[m]).abs();
        if gap > worst {
            worst = gap;
        }
    }
    worst
}

/// Haar-distributed element of O(3): a uniform unit quaternion (normalised
/// Gaussian 4-vector) mapped into SO(3), times `diag(1, 1, −1)` on a fair coin.
pub fn random_rotation(seed: u64) -> Orthogonal3<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, x, y, z) = loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-6 {
            break (v[0] / n, v[1] / n, v[2] / n, v[3] / n);
        }
    };
    let mut m = [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ];
    if rng.random_bool(0.5) {
        for row in &mut m {
            row[2] = -row[2];
        }
    }
    Orthogonal3 { m }
}

/// Per-degree tolerances for [`isotropy_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsotropyTolerance {
    /// Invariants of degree 2 through 6.
    pub low_degree: f64,
    /// Invariants of degree 7 through 10.
    pub high_degree: f64,
}

impl Default for IsotropyTolerance {
    fn default() -> Self {
        IsotropyTolerance {
            low_degree: 1e-8,
            high_degree: 1e-7,
        }
    }
}

impl IsotropyTolerance {
    pub fn uniform(tol: f64) -> Self {
        IsotropyTolerance {
            low_degree: tol,
            high_degree: tol,
        }
    }

    pub fn for_invariant(&self, f: Invariant) -> f64 {
        if f.degree() <= 6 {
            self.low_degree
        } else {
            self.high_degree
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantDeviation {
    pub invariant: Invariant,
    pub max_relative_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Outcome of a Monte-Carlo isotropy run.
#[derive(Clone, Debug, Serialize)]
pub struct IsotropyReport {
    pub trials: usize,
    pub seed: u64,
    pub deviations: Vec<InvariantDeviation>,
    /// Seed of the rotation that produced the largest deviation overall.
    pub worst_seed: u64,
    pub pass: bool,
}

impl IsotropyReport {
    pub fn deviation(&self, f: Invariant) -> f64 {
        self.deviations[f.index()].max_relative_deviation
    }
}

/// `|a − b| / max(|a|, |b|, norm^deg)`, and `0` when `a == b`.
pub fn relative_gap(a: f64, b: f64, norm: f64, degree: u32) -> f64 {
    let diff = (a - b).abs();
    if diff == 0.0 {
        return 0.0;
    }
    diff / a.abs().max(b.abs()).max(norm.powi(degree as i32))
}

/// Per-trial rotation seed; independent of scheduling order.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Compares the invariants of `D` with those of `Q·D` for `trials` random
/// orthogonal `Q`, in parallel. Failure is reported, not raised.
pub fn isotropy_check(
    d: &Harmonic4<f64>,
    trials: usize,
    seed: u64,
    tol: IsotropyTolerance,
) -> Result<IsotropyReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "isotropy check needs at least one trial".into(),
        ));
    }
    let base = invariants(d);
    let norm = base.j2.sqrt();
    let per_trial: Vec<(u64, [f64; 10])> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t);
            let rotated = invariants(&rotate(d, &random_rotation(s)));
            (s, deviations(&base, &rotated, norm))
        })
        .collect();

    let mut max_dev = [0.0f64; 10];
    let mut worst_seed = per_trial[0].0;
    let mut worst_overall = -1.0f64;
    for (s, devs) in &per_trial {
        for (k, &v) in devs.iter().enumerate() {
            max_dev[k] = max_dev[k].max(v);
        }
        let m = devs.iter().cloned().fold(0.0, f64::max);
        if m > worst_overall {
            worst_overall = m;
            worst_seed = *s;
        }
    }
    let deviations: Vec<InvariantDeviation> = Invariant::ALL
        .into_iter()
        .map(|f| {
            let v = max_dev[f.index()];
            let tolerance = tol.for_invariant(f);
            InvariantDeviation {
                invariant: f,
                max_relative_deviation: v,
                tolerance,
                pass: v <= tolerance,
            }
        })
        .collect();
    let pass = deviations.iter().all(|d| d.pass);
    Ok(IsotropyReport {
        trials,
        seed,
        deviations,
        worst_seed,
        pass,
    })
}

fn deviations(a: &InvariantVector<f64>, b: &InvariantVector<f64>, norm: f64) -> [f64; 10] {
    Invariant::ALL.map(|f| relative_gap(*a.get(f), *b.get(f), norm, f.degree()))
}
