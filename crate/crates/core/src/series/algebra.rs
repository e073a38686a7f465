//! Truncated sums of `coeff · aᵖ μ^q λʳ iˢ · trig(z) · ∂_zᵈ`.
//!
//! A single [`Series`] type plays three roles:
//! - operators, in the canonical form (multiplication by a trig monomial)
//!   followed by `∂_z^d`;
//! - functions of `z` (no derivative factor);
//! - scalars (no `z` dependence either).
//!
//! The imaginary unit is stored as a phase bit `s ∈ {0, 1}`; `i·i` folds into the
//! coefficient sign. Complex phases therefore never enter the coefficient ring.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ring::{rat, CoeffRing};
use crate::error::{Error, Result};

/// Trigonometric factor `1`, `cos nz` or `sin nz` (`n ≥ 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trig {
    One,
    Cos(u32),
    Sin(u32),
}

impl Trig {
    /// `cos(n z)` for any integer `n`.
    fn cos(n: i64) -> Trig {
        match n.unsigned_abs() {
            0 => Trig::One,
            m => Trig::Cos(m as u32),
        }
    }

    /// `sin(n z)` for any integer `n`, as `(sign, trig)`; `None` when zero.
    fn sin(n: i64) -> Option<(i64, Trig)> {
        match n {
            0 => None,
            n if n > 0 => Some((1, Trig::Sin(n as u32))),
            n => Some((-1, Trig::Sin((-n) as u32))),
        }
    }

    pub fn harmonic(&self) -> u32 {
        match *self {
            Trig::One => 0,
            Trig::Cos(n) | Trig::Sin(n) => n,
        }
    }

    /// Product as a sum of `(coefficient, trig)`.
    pub fn mul(self, other: Trig) -> Vec<(BigRational, Trig)> {
        let half = rat(1, 2);
        let as_cos = |t: Trig| -> Option<i64> {
            match t {
                Trig::One => Some(0),
                Trig::Cos(n) => Some(n as i64),
                Trig::Sin(_) => None,
            }
        };
        let mut out = Vec::new();
        let mut push_sin = |q: BigRational, n: i64| {
            if let Some((s, t)) = Trig::sin(n) {
                out.push((q * BigRational::from_integer(BigInt::from(s)), t));
            }
        };
        match (self, other) {
            (Trig::One, t) | (t, Trig::One) => return vec![(BigRational::one(), t)],
            (Trig::Cos(m), Trig::Cos(n)) => {
                let (m, n) = (m as i64, n as i64);
                return vec![(half.clone(), Trig::cos(m - n)), (half, Trig::cos(m + n))];
            }
            (Trig::Sin(m), Trig::Sin(n)) => {
                let (m, n) = (m as i64, n as i64);
                return vec![(half.clone(), Trig::cos(m - n)), (-half, Trig::cos(m + n))];
            }
            (Trig::Sin(m), c) | (c, Trig::Sin(m)) => {
                // sin m · cos n = ½[sin(m+n) + sin(m−n)]
                let (m, n) = (m as i64, as_cos(c).expect("cosine factor"));
                push_sin(half.clone(), m + n);
                push_sin(half, m - n);
            }
        }
        merge(out)
    }

    /// `d/dz` as `(coefficient, trig)`, `None` for constants.
    pub fn deriv(self) -> Option<(i64, Trig)> {
        match self {
            Trig::One => None,
            Trig::Cos(n) => Some((-(n as i64), Trig::Sin(n))),
            Trig::Sin(n) => Some((n as i64, Trig::Cos(n))),
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        match *self {
            Trig::One => 1.0,
            Trig::Cos(n) => (n as f64 * z).cos(),
            Trig::Sin(n) => (n as f64 * z).sin(),
        }
    }

    fn token(&self) -> Option<String> {
        match self {
            Trig::One => None,
            Trig::Cos(n) => Some(format!("cos{n}")),
            Trig::Sin(n) => Some(format!("sin{n}")),
        }
    }
}

fn merge(terms: Vec<(BigRational, Trig)>) -> Vec<(BigRational, Trig)> {
    let mut acc: BTreeMap<Trig, BigRational> = BTreeMap::new();
    for (q, t) in terms {
        *acc.entry(t).or_insert_with(BigRational::zero) += q;
    }
    acc.into_iter().filter(|(_, q)| !q.is_zero()).map(|(t, q)| (q, t)).collect()
}

/// Powers of the small parameters and of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub a: u32,
    pub mu: u32,
    pub lam: u32,
    pub i: u8,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { a: 0, mu: 0, lam: 0, i: 0 };

    pub fn new(a: u32, mu: u32, lam: u32, i: u8) -> Self {
        Self { a, mu, lam, i }
    }

    /// Product, with the sign produced by `i·i = −1`.
    fn mul(self, other: Monomial) -> (i64, Monomial) {
        let i = self.i + other.i;
        let (sign, i) = if i >= 2 { (-1, i - 2) } else { (1, i) };
        (
            sign,
            Monomial {
                a: self.a + other.a,
                mu: self.mu + other.mu,
                lam: self.lam + other.lam,
                i,
            },
        )
    }
}

/// Key of one series term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub mono: Monomial,
    pub trig: Trig,
    pub d: u32,
}

impl TermKey {
    pub fn new(mono: Monomial, trig: Trig, d: u32) -> Self {
        Self { mono, trig, d }
    }
}

impl fmt::Display for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mono;
        write!(f, "a{} mu{} lam{} i{}", m.a, m.mu, m.lam, m.i)?;
        if let Some(t) = self.trig.token() {
            write!(f, " {t}")?;
        }
        if self.d > 0 {
            write!(f, " d{}", self.d)?;
        }
        Ok(())
    }
}

/// Orders kept when truncating; `None` keeps everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Truncation {
    pub max_a: Option<u32>,
    pub max_mu: Option<u32>,
}

impl Truncation {
    pub const NONE: Truncation = Truncation { max_a: None, max_mu: None };

    pub fn a(max_a: u32) -> Self {
        Self { max_a: Some(max_a), max_mu: None }
    }

    pub fn a_mu(max_a: u32, max_mu: u32) -> Self {
        Self { max_a: Some(max_a), max_mu: Some(max_mu) }
    }

    fn keeps(&self, m: &Monomial) -> bool {
        self.max_a.is_none_or(|p| m.a <= p) && self.max_mu.is_none_or(|q| m.mu <= q)
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Sparse exact series; see the module docs for the term structure.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Series {
    terms: BTreeMap<TermKey, CoeffRing>,
}

pub type OperatorSeries = Series;
pub type TrigPolySeries = Series;
pub type ScalarSeries = Series;

impl Series {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coeff: CoeffRing, key: TermKey) -> Self {
        let mut s = Self::zero();
        s.add_term(key, coeff);
        s
    }

    /// `coeff · mono` as a scalar.
    pub fn scalar(coeff: CoeffRing, mono: Monomial) -> Self {
        Self::term(coeff, TermKey::new(mono, Trig::One, 0))
    }

    pub fn constant(coeff: CoeffRing) -> Self {
        Self::scalar(coeff, Monomial::ONE)
    }

    pub fn one() -> Self {
        Self::constant(CoeffRing::one())
    }

    /// The function `trig(z)`.
    pub fn trig(t: Trig) -> Self {
        Self::term(CoeffRing::one(), TermKey::new(Monomial::ONE, t, 0))
    }

    /// The operator `∂_z^d`.
    pub fn deriv_op(d: u32) -> Self {
        Self::term(CoeffRing::one(), TermKey::new(Monomial::ONE, Trig::One, d))
    }

    /// The monomial `aᵖ μ^q λʳ iˢ` with unit coefficient.
    pub fn mono(a: u32, mu: u32, lam: u32, i: u8) -> Self {
        Self::scalar(CoeffRing::one(), Monomial::new(a, mu, lam, i))
    }

    pub fn add_term(&mut self, key: TermKey, coeff: CoeffRing) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &CoeffRing)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &TermKey) -> CoeffRing {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        self.scale(&CoeffRing::int(-1))
    }

    pub fn scale(&self, c: &CoeffRing) -> Series {
        let mut out = Series::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    /// Multiplies every term by `mono` (e.g. `iμ`).
    pub fn times_mono(&self, mono: Monomial) -> Series {
        let mut out = Series::zero();
        for (k, v) in &self.terms {
            let (sign, m) = k.mono.mul(mono);
            out.add_term(TermKey::new(m, k.trig, k.d), v * &CoeffRing::int(sign));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&TermKey) -> bool) -> Series {
        Series {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, t: Truncation) -> Series {
        self.filter(|k| t.keeps(&k.mono))
    }

    /// Terms with the given power of `a`, re-keyed with `a⁰`.
    pub fn a_part(&self, p: u32) -> Series {
        self.filter(|k| k.mono.a == p).map_keys(|mut k| {
            k.mono.a = 0;
            k
        })
    }

    pub fn map_keys(&self, f: impl Fn(TermKey) -> TermKey) -> Series {
        let mut out = Series::zero();
        for (k, v) in &self.terms {
            out.add_term(f(*k), v.clone());
        }
        out
    }

    pub fn max_d(&self) -> u32 {
        self.terms.keys().map(|k| k.d).max().unwrap_or(0)
    }

    pub fn max_lam(&self) -> u32 {
        self.terms.keys().map(|k| k.mono.lam).max().unwrap_or(0)
    }

    pub fn is_function(&self) -> bool {
        self.terms.keys().all(|k| k.d == 0)
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|k| k.d == 0 && k.trig == Trig::One)
    }

    /// Derivative in `z` of a function series.
    pub fn deriv_z(&self) -> Series {
        let mut out = Series::zero();
        for (k, v) in &self.terms {
            if let Some((c, t)) = k.trig.deriv() {
                out.add_term(TermKey::new(k.mono, t, k.d), v * &CoeffRing::int(c));
            }
        }
        out
    }

    fn deriv_z_n(&self, n: u32) -> Series {
        (0..n).fold(self.clone(), |acc, _| acc.deriv_z())
    }

    /// Composition `self ∘ other` in canonical form, via
    /// `(f ∂ˢ)(g ∂ᵗ) = Σ_j C(s, j) f g⁽ʲ⁾ ∂^{s−j+t}`.
    pub fn compose(&self, other: &Series, trunc: Truncation) -> Series {
        let mut out = Series::zero();
        let max_s = self.max_d();
        // derivatives of each coefficient function of `other`
        let mut derivs: Vec<Series> = Vec::with_capacity(max_s as usize + 1);
        derivs.push(other.clone());
        for j in 1..=max_s as usize {
            let next = derivs[j - 1].deriv_z();
            derivs.push(next);
        }
        for (k1, v1) in &self.terms {
            let s = k1.d;
            for j in 0..=s {
                let bin = CoeffRing::rational(BigRational::from_integer(binomial(s, j)));
                for (k2, v2) in &derivs[j as usize].terms {
                    let (sign, m) = k1.mono.mul(k2.mono);
                    if !trunc.keeps(&m) {
                        continue;
                    }
                    let base = &(v1 * v2) * &(&bin * &CoeffRing::int(sign));
                    for (q, t) in k1.trig.mul(k2.trig) {
                        out.add_term(
                            TermKey::new(m, t, s - j + k2.d),
                            base.scale(&q),
                        );
                    }
                }
            }
        }
        out
    }

    /// Product of two series (composition for multiplication operators).
    pub fn mul(&self, other: &Series, trunc: Truncation) -> Series {
        self.compose(other, trunc)
    }

    /// Applies an operator to a function: `(f ∂ˢ) g = f g⁽ˢ⁾`.
    pub fn apply(&self, g: &Series, trunc: Truncation) -> Series {
        let mut out = Series::zero();
        for (k1, v1) in &self.terms {
            let dg = g.deriv_z_n(k1.d);
            let op = Series::term(v1.clone(), TermKey::new(k1.mono, k1.trig, 0));
            out = out.add(&op.compose(&dg, trunc));
        }
        out
    }

    /// `[T, z]`, term-wise `[f ∂ˢ, z] = s f ∂^{s−1}`.
    pub fn commutator_z(&self) -> Series {
        let mut out = Series::zero();
        for (k, v) in &self.terms {
            if k.d > 0 {
                out.add_term(
                    TermKey::new(k.mono, k.trig, k.d - 1),
                    v * &CoeffRing::int(k.d as i64),
                );
            }
        }
        out
    }

    /// `(1/2π)∫ f g dz` for function series (no conjugation; the second
    /// argument is real in every use).
    pub fn inner(&self, other: &Series, trunc: Truncation) -> Series {
        self.mul(other, trunc).filter(|k| k.trig == Trig::One && k.d == 0)
    }

    /// Inverse of a scalar series with an invertible `a⁰μ⁰λ⁰` term, to the
    /// given truncation (geometric series in the remainder).
    pub fn inverse(&self, trunc: Truncation) -> Result<Series> {
        if !self.is_scalar() {
            return Err(Error::Consistency("inverse of a non-scalar series".into()));
        }
        let lead_key = TermKey::new(Monomial::ONE, Trig::One, 0);
        let lead_inv = self.coeff(&lead_key).inverse().ok_or_else(|| {
            Error::Consistency(format!("leading term of {self} is not invertible"))
        })?;
        let mut rest = self.filter(|k| *k != lead_key).scale(&lead_inv);
        if rest.terms.keys().any(|k| k.mono.lam > 0 || k.mono.a + k.mono.mu == 0) {
            return Err(Error::Consistency("remainder is not small".into()));
        }
        rest = rest.neg();
        let mut out = Series::one();
        let mut power = Series::one();
        // each power raises the total order, so this terminates once truncated
        loop {
            power = power.mul(&rest, trunc);
            if power.is_zero() || (trunc.max_a.is_none() && trunc.max_mu.is_none()) {
                break;
            }
            out = out.add(&power);
        }
        Ok(out.scale(&lead_inv))
    }

    /// Removes `μ^p` from every term, failing if some term has a lower power.
    pub fn divide_mu(&self, p: u32) -> Result<Series> {
        if let Some((k, _)) = self.terms.iter().find(|(k, _)| k.mono.mu < p) {
            return Err(Error::Consistency(format!(
                "term `{k}` is not divisible by mu^{p}"
            )));
        }
        Ok(self.map_keys(|mut k| {
            k.mono.mu -= p;
            k
        }))
    }

    /// Numerical value at `(a, μ, λ, z)`, applying `∂` terms is not supported:
    /// terms with `d > 0` are rejected.
    pub fn eval(&self, a: f64, mu: f64, lam: Complex64, z: f64, k: f64, gamma: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (key, v) in &self.terms {
            if key.d > 0 {
                return Err(Error::Consistency(format!("cannot evaluate operator term `{key}`")));
            }
            let m = key.mono;
            let phase = if m.i == 1 { Complex64::i() } else { Complex64::new(1.0, 0.0) };
            acc += phase
                * v.eval(k, gamma)
                * a.powi(m.a as i32)
                * mu.powi(m.mu as i32)
                * lam.powu(m.lam)
                * key.trig.eval(z);
        }
        Ok(acc)
    }

    /// Canonical `term key → coefficient` map.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.terms.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    /// Builds a series from a `term key → coefficient` map. Keys may list
    /// several trig/derivative factors, which are composed left to right, so
    /// `a1 mu0 lam0 i0 d2 cos1` is `a·∂_z² ∘ cos z`.
    pub fn from_map<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Series> {
        let mut out = Series::zero();
        for (key, coeff) in entries {
            let coeff: CoeffRing = coeff.parse()?;
            out = out.add(&parse_key(key)?.scale(&coeff));
        }
        Ok(out)
    }
}

fn parse_key(key: &str) -> Result<Series> {
    let bad = |tok: &str| Error::Parse(format!("bad token `{tok}` in key `{key}`"));
    let num = |tok: &str, s: &str| s.parse::<u32>().map_err(|_| bad(tok));
    let mut mono = Monomial::ONE;
    let mut factors: Vec<Series> = Vec::new();
    for tok in key.split_whitespace() {
        if let Some(v) = tok.strip_prefix("lam") {
            mono.lam = num(tok, v)?;
        } else if let Some(v) = tok.strip_prefix("mu") {
            mono.mu = num(tok, v)?;
        } else if let Some(v) = tok.strip_prefix("cos") {
            factors.push(Series::trig(Trig::cos(num(tok, v)? as i64)));
        } else if let Some(v) = tok.strip_prefix("sin") {
            let n = num(tok, v)?;
            if n == 0 {
                return Err(bad(tok));
            }
            factors.push(Series::trig(Trig::Sin(n)));
        } else if let Some(v) = tok.strip_prefix('a') {
            mono.a = num(tok, v)?;
        } else if let Some(v) = tok.strip_prefix('i') {
            let i = num(tok, v)?;
            if i > 1 {
                return Err(bad(tok));
            }
            mono.i = i as u8;
        } else if let Some(v) = tok.strip_prefix('d') {
            factors.push(Series::deriv_op(num(tok, v)?));
        } else {
            return Err(bad(tok));
        }
    }
    let mut out = Series::scalar(CoeffRing::one(), mono);
    for f in factors {
        out = out.compose(&f, Truncation::NONE);
    }
    Ok(out)
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, v)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v})[{k}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CoeffRing {
        s.parse().unwrap()
    }

    #[test]
    fn trig_products() {
        assert_eq!(
            Trig::Cos(1).mul(Trig::Cos(1)),
            vec![(rat(1, 2), Trig::One), (rat(1, 2), Trig::Cos(2))]
        );
        assert_eq!(Trig::Sin(1).mul(Trig::Cos(1)), vec![(rat(1, 2), Trig::Sin(2))]);
        assert_eq!(
            Trig::Cos(1).mul(Trig::Sin(2)),
            vec![(rat(1, 2), Trig::Sin(1)), (rat(1, 2), Trig::Sin(3))]
        );
        assert_eq!(
            Trig::Sin(1).mul(Trig::Sin(1)),
            vec![(rat(1, 2), Trig::One), (rat(-1, 2), Trig::Cos(2))]
        );
    }

    #[test]
    fn leibniz_composition() {
        // ∂² ∘ cos = cos ∂² − 2 sin ∂ − cos
        let lhs = Series::deriv_op(2).compose(&Series::trig(Trig::Cos(1)), Truncation::NONE);
        let want = Series::from_map([
            ("a0 mu0 lam0 i0 cos1 d2", "1"),
            ("a0 mu0 lam0 i0 sin1 d1", "-2"),
            ("a0 mu0 lam0 i0 cos1", "-1"),
        ])
        .unwrap();
        assert_eq!(lhs, want);
        // key parsing composes in order
        assert_eq!(Series::from_map([("a0 mu0 lam0 i0 d2 cos1", "1")]).unwrap(), want);
    }

    #[test]
    fn commutators() {
        let dz = Series::deriv_op(1);
        assert_eq!(dz.commutator_z(), Series::one());
        let t0 = Series::from_map([
            ("a0 mu0 lam1 i0 d1", "2/3*sqrt3*k^-1"),
            ("a0 mu0 lam0 i0 d2", "-1"),
            ("a0 mu0 lam0 i0", "-1"),
        ])
        .unwrap();
        let t1 = t0.commutator_z();
        assert_eq!(
            t1,
            Series::from_map([("a0 mu0 lam1 i0", "2/3*sqrt3*k^-1"), ("a0 mu0 lam0 i0 d1", "-2")]).unwrap()
        );
        assert_eq!(t1.commutator_z(), Series::constant(CoeffRing::int(-2)));
    }

    #[test]
    fn imaginary_units_fold() {
        let imu = Series::mono(0, 1, 0, 1);
        let sq = imu.mul(&imu, Truncation::NONE);
        assert_eq!(sq, Series::scalar(CoeffRing::int(-1), Monomial::new(0, 2, 0, 0)));
    }

    #[test]
    fn application_and_inner_product() {
        let op = Series::from_map([("a0 mu0 lam0 i0 sin1 d1", "2*k^2")]).unwrap();
        let f = Series::trig(Trig::Cos(1));
        // 2k² sin z · (−sin z) = −k² + k² cos 2z
        let g = op.apply(&f, Truncation::NONE);
        assert_eq!(
            g,
            Series::from_map([("a0 mu0 lam0 i0", "-k^2"), ("a0 mu0 lam0 i0 cos2", "k^2")]).unwrap()
        );
        assert_eq!(f.inner(&f, Truncation::NONE), Series::constant(c("1/2")));
    }

    #[test]
    fn scalar_inverse() {
        // 1/((1 + a²k⁴)/2) = 2 − 2a²k⁴ + O(a⁴)
        let x = Series::from_map([("a0 mu0 lam0 i0", "1/2"), ("a2 mu0 lam0 i0", "1/2*k^4")]).unwrap();
        let inv = x.inverse(Truncation::a(2)).unwrap();
        assert_eq!(
            inv,
            Series::from_map([("a0 mu0 lam0 i0", "2"), ("a2 mu0 lam0 i0", "-2*k^4")]).unwrap()
        );
        assert!(Series::trig(Trig::Cos(1)).inverse(Truncation::a(2)).is_err());
    }

    #[test]
    fn mu_division() {
        let s = Series::mono(1, 2, 0, 0);
        assert_eq!(s.divide_mu(2).unwrap(), Series::mono(1, 0, 0, 0));
        assert!(s.divide_mu(3).is_err());
    }

    #[test]
    fn map_round_trip() {
        let s = Series::from_map([
            ("a2 mu1 lam1 i1 sin3", "-7/2*k^4"),
            ("a0 mu0 lam0 i0 cos1 d2", "sqrt3*k^-1 + gamma"),
        ])
        .unwrap();
        let m = s.to_map();
        let back = Series::from_map(m.iter().map(|(k, v)| (k.as_str(), v.as_str()))).unwrap();
        assert_eq!(back, s);
        assert!(Series::from_map([("a1 x2", "1")]).is_err());
    }

    #[test]
    fn numeric_evaluation() {
        let s = Series::from_map([("a1 mu0 lam1 i1 cos1", "2*k")]).unwrap();
        let v = s.eval(0.5, 0.0, Complex64::new(2.0, 0.0), 0.0, 3.0, 0.0).unwrap();
        assert!((v - Complex64::new(0.0, 6.0)).norm() < 1e-14);
        assert!(Series::deriv_op(1).eval(0.0, 0.0, Complex64::new(0.0, 0.0), 0.0, 1.0, 0.0).is_err());
    }
}
