//! Order-by-order Stokes expansion in exact arithmetic.

use super::algebra::{Monomial, Series, TermKey, Trig, Truncation};
use super::ring::CoeffRing;
use super::{kq, SeriesModel};
use crate::error::{Error, Result};

/// `η = Σ aⁿ ηₙ(z)` and `c = Σ aⁿ cₙ` through a given order in `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesSeries {
    pub model: SeriesModel,
    pub order: u32,
    pub eta: Series,
    pub c: Series,
}

impl StokesSeries {
    /// Coefficient of `aⁿ cos jz` in `η`.
    pub fn eta_coeff(&self, n: u32, j: u32) -> CoeffRing {
        let trig = if j == 0 { Trig::One } else { Trig::Cos(j) };
        self.eta.coeff(&TermKey::new(Monomial::new(n, 0, 0, 0), trig, 0))
    }

    /// Coefficient of `aⁿ` in `c`.
    pub fn c_coeff(&self, n: u32) -> CoeffRing {
        self.c.coeff(&TermKey::new(Monomial::new(n, 0, 0, 0), Trig::One, 0))
    }

    /// `η` and `c` truncated at `a^order`.
    pub fn truncated(&self, order: u32) -> (Series, Series) {
        let t = Truncation::a(order);
        (self.eta.truncate(t), self.c.truncate(t))
    }
}

/// Traveling-wave residual of `(η, c)`, truncated in `a`.
pub fn residual_series(model: SeriesModel, eta: &Series, c: &Series, trunc: Truncation) -> Series {
    let d1 = eta.deriv_z();
    let d2 = d1.deriv_z();
    let m = |x: &Series, y: &Series| x.mul(y, trunc);
    match model {
        SeriesModel::A => {
            // (3c² − 2η)k²η″ − k²η′² + η
            let c2 = m(c, c);
            let coef = c2.scale(&CoeffRing::int(3)).sub(&eta.scale(&CoeffRing::int(2)));
            let k2 = kq(1, 1, 2);
            m(&m(&coef, &k2), &d2).sub(&m(&k2, &m(&d1, &d1))).add(eta)
        }
        SeriesModel::B => {
            // k²(w − c)w″ + (k²/2)w′² − (γ/2)k⁴w″w′² − w
            let k2 = kq(1, 1, 2);
            let g = Series::constant(&CoeffRing::gamma() * &CoeffRing::k_pow(super::rat(1, 2), 4));
            let w1sq = m(&d1, &d1);
            m(&m(&k2, &eta.sub(c)), &d2)
                .add(&m(&kq(1, 2, 2), &w1sq))
                .sub(&m(&g, &m(&d2, &w1sq)))
                .sub(eta)
        }
    }
}

fn a_pow(n: u32) -> Monomial {
    Monomial::new(n, 0, 0, 0)
}

fn cos_key(n: u32, j: u32) -> TermKey {
    let trig = if j == 0 { Trig::One } else { Trig::Cos(j) };
    TermKey::new(a_pow(n), trig, 0)
}

/// Solves the traveling-wave equation order by order through `a^order`
/// (`order ≥ 1`), normalised so the `cos z` coefficient of `η` is exactly `a`.
/// Returns `η` through `a^order` and `c` through `a^{order−1}`.
pub fn stokes_series(model: SeriesModel, order: u32) -> Result<StokesSeries> {
    if order == 0 {
        return Err(Error::Domain("Stokes order must be at least 1".into()));
    }
    let mut eta = Series::trig(Trig::Cos(1)).times_mono(a_pow(1));
    let mut c = Series::constant(model.base_speed());
    for n in 2..=order {
        let trunc = Truncation::a(n);
        let at = |eta: &Series, c: &Series| {
            residual_series(model, eta, c, trunc).filter(|k| k.mono.a == n)
        };
        let f = at(&eta, &c);
        let g = at(&eta, &c.add(&Series::mono(n - 1, 0, 0, 0))).sub(&f);
        let comp = |s: &Series, j: u32| s.coeff(&cos_key(n, j));

        let g1 = comp(&g, 1).inverse().ok_or_else(|| {
            Error::Consistency(format!("speed correction at order {n} is not determined"))
        })?;
        let cn = -&(&comp(&f, 1) * &g1);
        let mut eta_n = Series::zero();
        for j in (0..=n).filter(|&j| j != 1) {
            let probe = Series::term(CoeffRing::one(), cos_key(n, j));
            let resp = at(&eta.add(&probe), &c).sub(&f);
            let l = comp(&resp, j).inverse().ok_or_else(|| {
                Error::Consistency(format!("harmonic {j} is resonant at order {n}"))
            })?;
            let rhs = &comp(&f, j) + &(&cn * &comp(&g, j));
            eta_n.add_term(cos_key(n, j), -&(&rhs * &l));
        }
        c.add_term(TermKey::new(a_pow(n - 1), Trig::One, 0), cn);
        eta = eta.add(&eta_n);
        let left = at(&eta, &c);
        if !left.is_zero() {
            return Err(Error::Consistency(format!(
                "order {n} leaves an unsolved residual: {left}"
            )));
        }
    }
    Ok(StokesSeries { model, order, eta, c })
}
