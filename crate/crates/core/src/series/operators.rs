//! Symbolic Bloch operators and their μ-expansion.

use super::algebra::{Monomial, Series, Trig, Truncation};
use super::ring::{rat, CoeffRing};
use super::stokes::stokes_series;
use super::{kq, SeriesModel};
use crate::error::Result;

/// Basis functions the operators are applied to.
pub type BasisTag = Trig;

/// Orders kept by the operator expansion.
pub const OPERATOR_TRUNCATION: Truncation = Truncation { max_a: Some(2), max_mu: Some(2) };

fn lam() -> Series {
    Series::mono(0, 0, 1, 0)
}

/// Bloch operator of the model with `∂_z + iμ` replaced by `d`, for a wave
/// `(η, c)`, composed in exactly the order of the linearisation.
pub fn bloch_operator(model: SeriesModel, eta: &Series, c: &Series, d: &Series, trunc: Truncation) -> Series {
    let m = |x: &Series, y: &Series| x.compose(y, trunc);
    let d2 = m(d, d);
    let eta_z = eta.deriv_z();
    let one = Series::one();
    match model {
        SeriesModel::A => {
            // 2(cλ − k²η_z)D + k²D²∘(−3c² + 2η) − 1
            let first = m(c, &lam()).sub(&m(&kq(1, 1, 2), &eta_z)).scale(&CoeffRing::int(2));
            let inner = m(c, c).scale(&CoeffRing::int(-3)).add(&eta.scale(&CoeffRing::int(2)));
            m(&first, d).add(&m(&kq(1, 1, 2), &m(&d2, &inner))).sub(&one)
        }
        SeriesModel::B => {
            // (λ − k²w_z − γk⁴w_z w_zz)D + k²D²∘(w − c) − (γk⁴/2)w_z²D² − 1
            let gk4 = Series::constant(&CoeffRing::gamma() * &CoeffRing::k_pow(rat(1, 1), 4));
            let eta_zz = eta_z.deriv_z();
            let first = lam()
                .sub(&m(&kq(1, 1, 2), &eta_z))
                .sub(&m(&gk4, &m(&eta_z, &eta_zz)));
            let outer = m(&gk4, &m(&eta_z, &eta_z)).scale(&CoeffRing::frac(-1, 2));
            m(&first, d)
                .add(&m(&kq(1, 1, 2), &m(&d2, &eta.sub(c))))
                .add(&m(&outer, &d2))
                .sub(&one)
        }
    }
}

/// `T_{0,a}`: the co-periodic operator with the wave expanded through `a²`.
pub fn build_t0a(model: SeriesModel) -> Result<Series> {
    let (eta, c) = stokes_series(model, 3)?.truncated(2);
    let trunc = Truncation::a(2);
    Ok(bloch_operator(model, &eta, &c, &Series::deriv_op(1), trunc))
}

/// `[T, z]`.
pub fn commutator_z(t: &Series) -> Series {
    t.commutator_z()
}

/// `T_{0,a} + iμ T_{1,a} − (μ²/2) T_{2,a}` with `T_{1,a} = [T_{0,a}, z]` and
/// `T_{2,a} = [T_{1,a}, z]`.
pub fn bch_assemble(t0a: &Series) -> Series {
    let t1 = t0a.commutator_z();
    let t2 = t1.commutator_z();
    t0a.add(&t1.times_mono(Monomial::new(0, 1, 0, 1)))
        .add(&t2.times_mono(Monomial::new(0, 2, 0, 0)).scale(&CoeffRing::frac(-1, 2)))
}

/// The Bloch operator built directly with `D = ∂_z + iμ` (independent of the
/// commutator route).
pub fn direct_bloch(model: SeriesModel) -> Result<Series> {
    let (eta, c) = stokes_series(model, 3)?.truncated(2);
    let d = Series::deriv_op(1).add(&Series::mono(0, 1, 0, 1));
    Ok(bloch_operator(model, &eta, &c, &d, OPERATOR_TRUNCATION))
}

/// Exact action of an operator on a basis function.
pub fn apply_to(t: &Series, f: BasisTag) -> Series {
    t.apply(&Series::trig(f), Truncation::NONE)
}
