//! Exact sparse polynomials in the nine independent components.
//!
//! The symbolic invariants are produced by running the ordinary contraction
//! code from [`crate::contractions`] with [`SparsePoly`] as the scalar type,
//! so the expansions cannot drift from the numeric evaluator. On top of them
//! this module checks three polynomial identities exactly:
//!
//! * `K6 = −13/80·J2³ + 33/40·J2·J4 − 1/24·J3² + 9/16·J6`
//! * `f(−D) = (−1)^deg(f) f(D)` for all ten invariants
//! * `J3, J5, J7, J9` vanish identically once
//!   `D1111 = D1112 = D1122 = D1222 = D2222 = 0`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::contractions::{invariants, Invariant, InvariantVector};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Field, Rational, Ring};
use crate::tensor::{Harmonic4, COMPONENT_NAMES, N_INDEPENDENT};

/// Largest total degree a monomial may reach.
pub const MAX_DEGREE: u32 = 30;

/// Term-count guard; hitting it means something upstream is wrong.
pub const MAX_TERMS: usize = 1_000_000;

const BITS: u32 = 6;
const MASK: u64 = (1 << BITS) - 1;

/// Indices of the components zeroed by the restriction lemma:
/// `D1111, D1112, D1122, D1222, D2222`.
pub const RESTRICTED_VARS: [usize; 5] = [0, 1, 3, 5, 7];

/// Exponent vector over the nine components, packed six bits per variable
/// with `D1111` in the most significant field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    fn shift(var: usize) -> u32 {
        BITS * (N_INDEPENDENT - 1 - var) as u32
    }

    pub fn var(var: usize) -> Monomial {
        Monomial(1 << Self::shift(var))
    }

    pub fn from_exponents(exps: [u32; N_INDEPENDENT]) -> Result<Monomial> {
        let total: u32 = exps.iter().sum();
        if total > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "monomial degree {total} exceeds {MAX_DEGREE}"
            )));
        }
        Ok(Monomial(exps.iter().enumerate().fold(0, |acc, (v, &e)| {
            acc | (u64::from(e) << Self::shift(v))
        })))
    }

    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> Self::shift(var)) & MASK) as u32
    }

    pub fn exponents(self) -> [u32; N_INDEPENDENT] {
        std::array::from_fn(|v| self.exponent(v))
    }

    pub fn degree(self) -> u32 {
        (0..N_INDEPENDENT).map(|v| self.exponent(v)).sum()
    }

    /// Product; fields never carry because degrees are capped at 30 < 64.
    fn mul(self, other: Monomial) -> Monomial {
        Monomial(self.0 + other.0)
    }

    /// Graded lexicographic key: degree first, then exponents in variable order.
    pub fn grlex_key(self) -> (u32, u64) {
        (self.degree(), self.0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Monomial {
    fn render(self) -> String {
        let parts: Vec<String> = (0..N_INDEPENDENT)
            .filter(|&v| self.exponent(v) > 0)
            .map(|v| format!("{}^{}", COMPONENT_NAMES[v], self.exponent(v)))
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

/// Multiplicative hash for packed monomials.
#[derive(Default)]
pub struct MonomialHasher(u64);

impl Hasher for MonomialHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(8) ^ u64::from(b)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }

    fn write_u64(&mut self, n: u64) {
        let h = (self.0 ^ n).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        self.0 = h ^ (h >> 29);
    }
}

type TermMap = HashMap<Monomial, Rational, BuildHasherDefault<MonomialHasher>>;

/// Sparse polynomial with exact rational coefficients. No stored coefficient
/// is zero, so equal polynomials have equal term maps.
#[derive(Clone, Default, PartialEq)]
pub struct SparsePoly {
    terms: TermMap,
}

impl SparsePoly {
    /// The polynomial `x_var`, i.e. one independent component as a symbol.
    pub fn var(var: usize) -> SparsePoly {
        Self::monomial(Monomial::var(var), <Rational as Ring>::one())
    }

    pub fn constant(c: Rational) -> SparsePoly {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> SparsePoly {
        let mut terms = TermMap::default();
        if !Zero::is_zero(&c) {
            terms.insert(m, c);
        }
        SparsePoly { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(<Rational as Ring>::zero)
    }

    /// Largest total degree over the stored terms (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// True when every stored term has total degree exactly `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c)).collect();
        v.sort_by_key(|t| std::cmp::Reverse(t.0.grlex_key()));
        v
    }

    fn insert_add(terms: &mut TermMap, m: Monomial, c: Rational) {
        use std::collections::hash_map::Entry;
        match terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if Zero::is_zero(e.get()) {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if !Zero::is_zero(&c) {
                    e.insert(c);
                }
            }
        }
    }

    fn check_product(&self, other: &SparsePoly) -> Result<()> {
        let deg = self.total_degree() + other.total_degree();
        if !self.is_empty() && !other.is_empty() && deg > MAX_DEGREE {
            return Err(Error::Verification(format!(
                "polynomial product of degree {deg} exceeds the degree guard {MAX_DEGREE}"
            )));
        }
        Ok(())
    }

    fn guard_terms(&self) -> Result<()> {
        if self.terms.len() > MAX_TERMS {
            return Err(Error::Verification(format!(
                "polynomial has {} terms, above the guard of {MAX_TERMS}",
                self.terms.len()
            )));
        }
        Ok(())
    }

    /// Product, failing if the degree or term-count guards trip.
    pub fn checked_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        let mut out = SparsePoly::default();
        out.checked_add_mul(self, other)?;
        Ok(out)
    }

    /// `self += a * b`, failing if a guard trips.
    pub fn checked_add_mul(&mut self, a: &SparsePoly, b: &SparsePoly) -> Result<()> {
        a.check_product(b)?;
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        self.terms.reserve(large.len().min(MAX_TERMS));
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                Self::insert_add(&mut self.terms, ma.mul(*mb), ca * cb);
            }
            self.guard_terms()?;
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if Zero::is_zero(c) {
            return SparsePoly::default();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// `p^n`, with `p^0 = 1`.
    pub fn pow(&self, n: u32) -> SparsePoly {
        Ring::pow(self, n)
    }

    /// Evaluates at a rational point given in component order.
    pub fn evaluate(&self, point: &[Rational; N_INDEPENDENT]) -> Rational {
        let mut acc = <Rational as Ring>::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, x) in point.iter().enumerate() {
                let e = m.exponent(v);
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn evaluate_f64(&self, point: &[f64; N_INDEPENDENT]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                (0..N_INDEPENDENT).fold(c.to_f64(), |t, v| t * point[v].powi(m.exponent(v) as i32))
            })
            .sum()
    }

    /// Substitutes `x -> -x` for every variable.
    pub fn negate_variables(&self) -> SparsePoly {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.degree() % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Substitutes `0` for each listed variable.
    pub fn restrict_zero(&self, vars: &[usize]) -> SparsePoly {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.exponent(v) == 0))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// One line per term, `coeff * D1111^a D1112^b ...`, in descending
    /// graded-lex order. The zero polynomial renders as `0`.
    pub fn to_text(&self) -> String {
        if self.is_empty() {
            return "0\n".to_string();
        }
        let mut out = String::new();
        for (m, c) in self.sorted_terms() {
            let coeff = if c.is_integer() {
                c.numer().to_string()
            } else {
                format_rational(c)
            };
            if m == Monomial::ONE {
                out.push_str(&coeff);
            } else {
                out.push_str(&format!("{coeff} * {}", m.render()));
            }
            out.push('\n');
        }
        out
    }
}

impl FromStr for SparsePoly {
    type Err = Error;

    /// Parses the format written by [`SparsePoly::to_text`].
    fn from_str(text: &str) -> Result<SparsePoly> {
        let mut poly = SparsePoly::default();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (coeff, mono) = match line.split_once('*') {
                Some((c, m)) => (c.trim(), m.trim()),
                None => (line, ""),
            };
            let c = parse_rational(coeff)?;
            let mut exps = [0u32; N_INDEPENDENT];
            for factor in mono.split_whitespace() {
                let bad = || Error::InvalidArgument(format!("bad monomial factor {factor:?}"));
                let (name, e) = factor.split_once('^').ok_or_else(bad)?;
                let v = COMPONENT_NAMES
                    .iter()
                    .position(|&n| n == name)
                    .ok_or_else(bad)?;
                exps[v] += e.parse::<u32>().map_err(|_| bad())?;
            }
            Self::insert_add(&mut poly.terms, Monomial::from_exponents(exps)?, c);
        }
        Ok(poly)
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_text().trim_end())
    }
}

/// Guard violations panic here: [`Ring`] is infallible, and tripping a guard
/// inside the contraction pipeline means the pipeline itself is broken.
impl Ring for SparsePoly {
    fn zero() -> Self {
        SparsePoly::default()
    }

    fn one() -> Self {
        SparsePoly::constant(<Rational as Ring>::one())
    }

    fn from_i64(n: i64) -> Self {
        SparsePoly::constant(Rational::from_i64(n))
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            Self::insert_add(&mut out.terms, *m, -c);
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }

    fn neg(&self) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, rhs: &Self) {
        for (m, c) in &rhs.terms {
            Self::insert_add(&mut self.terms, *m, c.clone());
        }
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        self.checked_add_mul(a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    fn scale_i64(&self, n: i64) -> Self {
        self.scale(&Rational::from_i64(n))
    }
}

/// The generic tensor whose components are the nine symbols.
pub fn symbolic_tensor() -> Harmonic4<SparsePoly> {
    Harmonic4::from_independent(std::array::from_fn(SparsePoly::var))
}

/// All ten invariants as polynomials, expanded once per process.
pub fn symbolic_invariants() -> &'static InvariantVector<SparsePoly> {
    static CACHE: OnceLock<InvariantVector<SparsePoly>> = OnceLock::new();
    CACHE.get_or_init(|| invariants(&symbolic_tensor()))
}

/// One invariant by name (`"J2"`, ..., `"J10"`, `"K6"`).
pub fn symbolic_invariant(name: &str) -> Result<SparsePoly> {
    let f: Invariant = name.parse()?;
    Ok(symbolic_invariants().get(f).clone())
}

/// Coefficients of `K6 = a·J2³ + b·J2·J4 + c·J3² + d·J6`.
pub fn k6_identity_coefficients() -> [Rational; 4] {
    [
        Rational::from_ratio(-13, 80),
        Rational::from_ratio(33, 40),
        Rational::from_ratio(-1, 24),
        Rational::from_ratio(9, 16),
    ]
}

/// `K6 − (−13/80·J2³ + 33/40·J2·J4 − 1/24·J3² + 9/16·J6)` as a polynomial.
pub fn k6_identity_residual() -> SparsePoly {
    let s = symbolic_invariants();
    let [a, b, c, d] = k6_identity_coefficients();
    let rhs =
        s.j2.pow(3)
            .scale(&a)
            .add(&s.j2.mul(&s.j4).scale(&b))
            .add(&s.j3.mul(&s.j3).scale(&c))
            .add(&s.j6.scale(&d));
    s.k6.sub(&rhs)
}

fn describe_terms(p: &SparsePoly, limit: usize) -> String {
    let lines: Vec<String> = p.to_text().lines().take(limit).map(String::from).collect();
    let more = p.len().saturating_sub(limit);
    if more > 0 {
        format!("{} (+{more} more terms)", lines.join("; "))
    } else {
        lines.join("; ")
    }
}

/// Checks the `K6` identity; returns the (zero) residual on success.
pub fn verify_k6_identity() -> Result<SparsePoly> {
    let residual = k6_identity_residual();
    if residual.is_empty() {
        Ok(residual)
    } else {
        Err(Error::Verification(format!(
            "K6 identity residual has {} terms: {}",
            residual.len(),
            describe_terms(&residual, 5)
        )))
    }
}

/// Behaviour of an invariant under `D -> -D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Classifies every invariant by exact substitution `x -> -x`; fails if an
/// invariant is neither even nor odd or has the wrong parity for its degree.
pub fn verify_parity() -> Result<Vec<(Invariant, Parity)>> {
    let s = symbolic_invariants();
    let mut out = Vec::with_capacity(10);
    for f in Invariant::ALL {
        let p = s.get(f);
        let flipped = p.negate_variables();
        let parity = if &flipped == p {
            Parity::Even
        } else if flipped == p.neg() {
            Parity::Odd
        } else {
            return Err(Error::Verification(format!("{f} has no definite parity")));
        };
        let expected = if f.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        };
        if parity != expected {
            return Err(Error::Verification(format!(
                "{f} is {parity:?} under D -> -D, expected {expected:?}"
            )));
        }
        out.push((f, parity));
    }
    Ok(out)
}

/// Checks that `J3, J5, J7, J9` become the zero polynomial once the five
/// components in [`RESTRICTED_VARS`] are set to zero.
pub fn verify_restriction_lemma() -> Result<bool> {
    let s = symbolic_invariants();
    for f in Invariant::ODD {
        let restricted = s.get(f).restrict_zero(&RESTRICTED_VARS);
        if !restricted.is_empty() {
            return Err(Error::Verification(format!(
                "{f} survives the restriction with {} terms: {}",
                restricted.len(),
                describe_terms(&restricted, 5)
            )));
        }
    }
    Ok(true)
}
