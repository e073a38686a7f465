//! Projection onto the critical subspace, determinant and discriminant.

use num_traits::Signed;

use super::algebra::{Monomial, Series, TermKey, Truncation};
use super::operators::{bch_assemble, build_t0a, OPERATOR_TRUNCATION};
use super::ring::{CoeffRing, RingExp};
use super::stokes::stokes_series;
use super::SeriesModel;
use crate::error::{Error, Result};

/// Multiplies every term by `a^shift` (negative shifts divide, failing on
/// terms of too low an order).
fn shift_a(s: &Series, shift: i32) -> Result<Series> {
    if let Some((k, _)) = s.terms().find(|(k, _)| (k.mono.a as i32) + shift < 0) {
        return Err(Error::Consistency(format!("term `{k}` is not divisible by a^{}", -shift)));
    }
    Ok(s.map_keys(|mut k| {
        k.mono.a = (k.mono.a as i32 + shift) as u32;
        k
    }))
}

/// `∂_a` of a series.
fn deriv_a(s: &Series) -> Series {
    let mut out = Series::zero();
    for (k, v) in s.terms().filter(|(k, _)| k.mono.a > 0) {
        let mut key = *k;
        key.mono.a -= 1;
        out.add_term(key, v * &CoeffRing::int(k.mono.a as i64));
    }
    out
}

/// `(φ₁, φ₂) = (−(1/a)∂_zη, ∂_aη)` through `a²`.
pub fn critical_basis_series(model: SeriesModel) -> Result<(Series, Series)> {
    let eta = stokes_series(model, 3)?.eta;
    let phi1 = shift_a(&eta.deriv_z().neg(), -1)?.truncate(Truncation::a(2));
    let phi2 = deriv_a(&eta).truncate(Truncation::a(2));
    Ok((phi1, phi2))
}

/// `Bᵢⱼ = ⟨T φᵢ, φⱼ⟩ / ⟨φᵢ, φᵢ⟩` with entries kept through `a²` and `μ²`.
pub fn projected_matrix_series(model: SeriesModel) -> Result<[[Series; 2]; 2]> {
    let t = bch_assemble(&build_t0a(model)?);
    let (phi1, phi2) = critical_basis_series(model)?;
    let basis = [phi1, phi2];
    let tr = OPERATOR_TRUNCATION;
    let entry = |i: usize, j: usize| -> Result<Series> {
        let num = t.apply(&basis[i], tr).inner(&basis[j], tr);
        let norm = basis[i].inner(&basis[i], tr).inverse(tr)?;
        Ok(num.mul(&norm, tr))
    };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

/// `det B = b₀ + i b₁ λ + b₂ λ²` and the rescaled quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct DetSeries {
    pub model: SeriesModel,
    pub det: Series,
    pub b0: Series,
    pub b1: Series,
    pub b2: Series,
    pub d0: Series,
    pub d1: Series,
    pub d2: Series,
    pub disc: Series,
    /// Terms of `𝒟` of total degree ≤ 2 in `(a, μ)`.
    pub disc_leading: Series,
    /// Terms of `det` whose phase does not fit the real form above.
    pub extra: Series,
}

impl DetSeries {
    /// Human-readable leading discriminant, e.g. `4*mu^2 + (1-gamma)*k^4*a^2`.
    pub fn disc_leading_string(&self) -> String {
        format_scalar(&self.disc_leading)
    }
}

fn lam_part(det: &Series, lam: u32, i: u8) -> Series {
    det.filter(|k| k.mono.lam == lam && k.mono.i == i).map_keys(|mut k| {
        k.mono.lam = 0;
        k.mono.i = 0;
        k
    })
}

/// Expands the determinant exactly, divides out the `μ` powers and forms
/// `𝒟 = d₁² + 4 d₀ d₂`.
pub fn det_and_discriminant(model: SeriesModel) -> Result<DetSeries> {
    let b = projected_matrix_series(model)?;
    let tr = Truncation::NONE;
    let det = b[0][0].mul(&b[1][1], tr).sub(&b[0][1].mul(&b[1][0], tr));
    if !det.is_scalar() {
        return Err(Error::Consistency("determinant depends on z".into()));
    }
    let b0 = lam_part(&det, 0, 0);
    let b1 = lam_part(&det, 1, 1);
    let b2 = lam_part(&det, 2, 0);
    let extra = det.filter(|k| !matches!((k.mono.lam, k.mono.i), (0, 0) | (1, 1) | (2, 0)));
    let d0 = b0.divide_mu(2)?;
    let d1 = b1.divide_mu(1)?;
    let d2 = b2.clone();
    let disc = d1.mul(&d1, tr).add(&d0.mul(&d2, tr).scale(&CoeffRing::int(4)));
    let disc_leading = disc.filter(|k| k.mono.a + k.mono.mu <= 2);
    Ok(DetSeries { model, det, b0, b1, b2, d0, d1, d2, disc, disc_leading, extra })
}

fn mono_string(m: &Monomial) -> String {
    let mut parts = Vec::new();
    if m.i == 1 {
        parts.push("i".to_string());
    }
    for (name, p) in [("mu", m.mu), ("a", m.a), ("lambda", m.lam)] {
        match p {
            0 => {}
            1 => parts.push(name.to_string()),
            p => parts.push(format!("{name}^{p}")),
        }
    }
    parts.join("*")
}

/// Coefficient text: plain when it is a single ring term, otherwise a
/// polynomial in `γ` times a common `k`/`√3` factor when possible.
fn coeff_string(c: &CoeffRing) -> String {
    if c.len() == 1 {
        return c.to_string();
    }
    if let Some((k, sqrt3)) = c.common_k_sqrt3() {
        let poly: Vec<String> = c
            .gamma_part()
            .into_iter()
            .enumerate()
            .map(|(idx, (g, q))| {
                let body = CoeffRing::monomial(q.abs(), RingExp { gamma: g, k: 0, sqrt3: 0 }).to_string();
                match (idx, q.is_negative()) {
                    (0, true) => format!("-{body}"),
                    (0, false) => body,
                    (_, true) => format!("-{body}"),
                    (_, false) => format!("+{body}"),
                }
            })
            .collect();
        let factor = CoeffRing::monomial(num_traits::One::one(), RingExp { gamma: 0, k, sqrt3 });
        let grouped = format!("({})", poly.concat());
        return if factor == CoeffRing::one() {
            grouped
        } else {
            format!("{grouped}*{factor}")
        };
    }
    format!("({c})")
}

/// Renders a scalar series as `coeff*monomial` terms joined by `+`/`-`.
pub fn format_scalar(s: &Series) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (k, v)) in s.terms().enumerate() {
        let mono = mono_string(&k.mono);
        let mut coeff = coeff_string(v);
        let neg = coeff.starts_with('-');
        if neg {
            coeff.remove(0);
        }
        let term = match (coeff.as_str(), mono.is_empty()) {
            (c, true) => c.to_string(),
            ("1", false) => mono,
            (c, false) => format!("{c}*{mono}"),
        };
        let term = if k.trig != super::Trig::One || k.d > 0 {
            format!("{term}[{}]", TermKey::new(Monomial::ONE, k.trig, k.d))
        } else {
            term
        };
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    out
}
