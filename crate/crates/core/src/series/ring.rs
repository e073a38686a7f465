//! Exact coefficients in ℚ[√3, γ, k, k⁻¹].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponents of one ring monomial `γ^gamma · k^k · √3^sqrt3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RingExp {
    pub gamma: u32,
    pub k: i32,
    pub sqrt3: u8,
}

/// Sparse element of ℚ[√3, γ, k, k⁻¹], canonical: no zero coefficients and
/// `√3` to the power 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CoeffRing {
    terms: BTreeMap<RingExp, BigRational>,
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl CoeffRing {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), RingExp::default())
    }

    pub fn monomial(q: BigRational, exp: RingExp) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(exp, q);
        }
        Self { terms }
    }

    pub fn rational(q: BigRational) -> Self {
        Self::monomial(q, RingExp::default())
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat(n, 1))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::rational(rat(num, den))
    }

    /// `q · k^e`.
    pub fn k_pow(q: BigRational, e: i32) -> Self {
        Self::monomial(q, RingExp { k: e, ..RingExp::default() })
    }

    pub fn sqrt3() -> Self {
        Self::monomial(BigRational::one(), RingExp { sqrt3: 1, ..RingExp::default() })
    }

    pub fn gamma() -> Self {
        Self::monomial(BigRational::one(), RingExp { gamma: 1, ..RingExp::default() })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RingExp, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exp: RingExp, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    /// Inverse of a single-term element free of `γ`; `None` otherwise.
    pub fn inverse(&self) -> Option<Self> {
        let mut it = self.terms.iter();
        let (exp, q) = it.next()?;
        if it.next().is_some() || exp.gamma != 0 {
            return None;
        }
        // 1/√3 = √3/3
        let (q, s) = if exp.sqrt3 == 1 {
            (q.recip() / rat(3, 1), 1)
        } else {
            (q.recip(), 0)
        };
        Some(Self::monomial(
            q,
            RingExp {
                gamma: 0,
                k: -exp.k,
                sqrt3: s,
            },
        ))
    }

    pub fn eval(&self, k: f64, gamma: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, q)| {
                let mut v = q.to_f64().unwrap_or(f64::NAN) * k.powi(e.k) * gamma.powi(e.gamma as i32);
                if e.sqrt3 == 1 {
                    v *= 3f64.sqrt();
                }
                v
            })
            .sum()
    }

    /// Whether every term carries the same `(k, √3)` exponents; returns them.
    pub fn common_k_sqrt3(&self) -> Option<(i32, u8)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        it.all(|e| e.k == first.k && e.sqrt3 == first.sqrt3)
            .then_some((first.k, first.sqrt3))
    }

    /// Polynomial in `γ` after stripping a common `k^e √3^s` factor.
    pub fn gamma_part(&self) -> Vec<(u32, BigRational)> {
        self.terms.iter().map(|(e, q)| (e.gamma, q.clone())).collect()
    }
}

impl Add for &CoeffRing {
    type Output = CoeffRing;
    fn add(self, rhs: &CoeffRing) -> CoeffRing {
        let mut out = self.clone();
        for (e, q) in &rhs.terms {
            out.add_term(*e, q.clone());
        }
        out
    }
}

impl Sub for &CoeffRing {
    type Output = CoeffRing;
    fn sub(self, rhs: &CoeffRing) -> CoeffRing {
        let mut out = self.clone();
        for (e, q) in &rhs.terms {
            out.add_term(*e, -q.clone());
        }
        out
    }
}

impl Neg for &CoeffRing {
    type Output = CoeffRing;
    fn neg(self) -> CoeffRing {
        CoeffRing {
            terms: self.terms.iter().map(|(e, q)| (*e, -q.clone())).collect(),
        }
    }
}

impl Mul for &CoeffRing {
    type Output = CoeffRing;
    fn mul(self, rhs: &CoeffRing) -> CoeffRing {
        let mut out = CoeffRing::zero();
        for (e1, q1) in &self.terms {
            for (e2, q2) in &rhs.terms {
                let mut q = q1 * q2;
                let mut s = e1.sqrt3 + e2.sqrt3;
                if s == 2 {
                    q *= rat(3, 1);
                    s = 0;
                }
                out.add_term(
                    RingExp {
                        gamma: e1.gamma + e2.gamma,
                        k: e1.k + e2.k,
                        sqrt3: s,
                    },
                    q,
                );
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CoeffRing {
            type Output = CoeffRing;
            fn $m(self, rhs: CoeffRing) -> CoeffRing {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Factor list of a monomial, e.g. `sqrt3*gamma^2*k^-1`.
fn fmt_factors(e: &RingExp) -> Vec<String> {
    let mut f = Vec::new();
    if e.sqrt3 == 1 {
        f.push("sqrt3".to_string());
    }
    match e.gamma {
        0 => {}
        1 => f.push("gamma".into()),
        g => f.push(format!("gamma^{g}")),
    }
    match e.k {
        0 => {}
        1 => f.push("k".into()),
        k => f.push(format!("k^{k}")),
    }
    f
}

/// `|q|·monomial` without sign.
fn fmt_abs_term(e: &RingExp, q: &BigRational) -> String {
    let factors = fmt_factors(e);
    let a = q.abs();
    if factors.is_empty() {
        fmt_rational(&a)
    } else if a.is_one() {
        factors.join("*")
    } else {
        format!("{}*{}", fmt_rational(&a), factors.join("*"))
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", fmt_abs_term(e, q))?;
        }
        Ok(())
    }
}

fn parse_factor(tok: &str, q: &mut BigRational, e: &mut RingExp) -> Result<()> {
    let bad = || Error::Parse(format!("unrecognised factor `{tok}`"));
    let power = |s: &str| -> Result<i64> { s.parse::<i64>().map_err(|_| bad()) };
    if tok == "sqrt3" {
        if e.sqrt3 == 1 {
            *q *= rat(3, 1);
            e.sqrt3 = 0;
        } else {
            e.sqrt3 = 1;
        }
    } else if tok == "gamma" {
        e.gamma += 1;
    } else if let Some(p) = tok.strip_prefix("gamma^") {
        e.gamma += u32::try_from(power(p)?).map_err(|_| bad())?;
    } else if tok == "k" {
        e.k += 1;
    } else if let Some(p) = tok.strip_prefix("k^") {
        e.k += i32::try_from(power(p)?).map_err(|_| bad())?;
    } else if let Some((n, d)) = tok.split_once('/') {
        let (n, d) = (n.parse::<BigInt>().map_err(|_| bad())?, d.parse::<BigInt>().map_err(|_| bad())?);
        if d.is_zero() {
            return Err(bad());
        }
        *q *= BigRational::new(n, d);
    } else {
        *q *= BigRational::from_integer(tok.parse::<BigInt>().map_err(|_| bad())?);
    }
    Ok(())
}

impl FromStr for CoeffRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty coefficient".into()));
        }
        let mut out = CoeffRing::zero();
        let normalised = s.replace(" - ", " + -");
        for term in normalised.split(" + ") {
            let term = term.trim();
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, term),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            let mut q = BigRational::one();
            let mut e = RingExp::default();
            for tok in body.split('*') {
                parse_factor(tok.trim(), &mut q, &mut e)?;
            }
            if neg {
                q = -q;
            }
            out.add_term(e, q);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt3_squares_to_three() {
        let s = CoeffRing::sqrt3();
        assert_eq!(&s * &s, CoeffRing::int(3));
    }

    #[test]
    fn inverse_of_monomials() {
        let c0 = CoeffRing::k_pow(rat(1, 3), -1).mul(CoeffRing::sqrt3());
        let inv = c0.inverse().unwrap();
        assert_eq!(&c0 * &inv, CoeffRing::one());
        assert_eq!(inv.to_string(), "sqrt3*k");
        assert!((CoeffRing::int(1) + CoeffRing::gamma()).inverse().is_none());
        assert!(CoeffRing::gamma().inverse().is_none());
        assert!(CoeffRing::zero().inverse().is_none());
    }

    #[test]
    fn display_and_parse() {
        let c: CoeffRing = "2/3*sqrt3*k^-1".parse().unwrap();
        assert_eq!(c.to_string(), "2/3*sqrt3*k^-1");
        let d: CoeffRing = "7/64*k^4 + 1/64*gamma*k^4".parse().unwrap();
        assert_eq!(d.to_string(), "7/64*k^4 + 1/64*gamma*k^4");
        let e: CoeffRing = "-k^4 - 3".parse().unwrap();
        assert_eq!(e.to_string(), "-3 - k^4");
        assert_eq!("0".parse::<CoeffRing>().unwrap(), CoeffRing::zero());
        assert!("2*q".parse::<CoeffRing>().is_err());
        assert!("1/0".parse::<CoeffRing>().is_err());
        let s: CoeffRing = "sqrt3*sqrt3".parse().unwrap();
        assert_eq!(s, CoeffRing::int(3));
    }

    #[test]
    fn evaluation() {
        let c: CoeffRing = "1/4*sqrt3*k^3 - gamma".parse().unwrap();
        assert!((c.eval(2.0, 0.5) - (3f64.sqrt() * 2.0 - 0.5)).abs() < 1e-14);
    }

    fn element() -> impl Strategy<Value = CoeffRing> {
        prop::collection::vec((-5i64..=5, 1i64..=4, 0u32..=2, -3i32..=3, 0u8..=1), 0..4).prop_map(|ts| {
            let mut out = CoeffRing::zero();
            for (n, d, g, k, s) in ts {
                out = &out + &CoeffRing::monomial(rat(n, d), RingExp { gamma: g, k, sqrt3: s });
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn ring_axioms(x in element(), y in element(), z in element()) {
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!(&x + &(-&x), CoeffRing::zero());
        }

        #[test]
        fn display_round_trip(x in element()) {
            let parsed: CoeffRing = x.to_string().parse().unwrap();
            prop_assert_eq!(parsed, x);
        }
    }
}
