//! Exact operator-series engine.
//!
//! Everything here is symbolic: coefficients live in ℚ[√3, γ, k, k⁻¹] and the
//! small parameters `a`, `μ`, `λ` are formal. The engine rebuilds the Stokes
//! expansion, the μ-expansion of the Bloch operator, its action on the
//! critical basis, the projected 2×2 matrix, its determinant and discriminant,
//! and serves as an oracle for the numerical layers.

pub mod algebra;
pub mod golden;
pub mod operators;
pub mod projection;
pub mod ring;
pub mod stokes;

pub use algebra::{Monomial, OperatorSeries, ScalarSeries, Series, TermKey, Trig, TrigPolySeries, Truncation};
pub use operators::{apply_to, bch_assemble, build_t0a, commutator_z, direct_bloch, BasisTag};
pub use golden::{check_golden, engine_objects, golden_file, GoldenDiff, GoldenReport};
pub use projection::{critical_basis_series, det_and_discriminant, projected_matrix_series, DetSeries};
pub use ring::{rat, CoeffRing, RingExp};
pub use stokes::{stokes_series, StokesSeries};

use crate::stokes::ModelTag;

/// Model selector for the exact engine; `γ` of model B stays symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesModel {
    A,
    B,
}

impl SeriesModel {
    pub fn label(&self) -> &'static str {
        match self {
            SeriesModel::A => "A",
            SeriesModel::B => "B",
        }
    }

    /// Linear wave speed `c₀`.
    pub fn base_speed(&self) -> CoeffRing {
        match self {
            SeriesModel::A => CoeffRing::k_pow(rat(1, 3), -1) * CoeffRing::sqrt3(),
            SeriesModel::B => CoeffRing::k_pow(rat(1, 1), -2),
        }
    }
}

impl From<ModelTag> for SeriesModel {
    fn from(m: ModelTag) -> Self {
        match m {
            ModelTag::A => SeriesModel::A,
            ModelTag::B { .. } => SeriesModel::B,
        }
    }
}

/// `q · k^e` as a constant series.
pub(crate) fn kq(num: i64, den: i64, e: i32) -> Series {
    Series::constant(CoeffRing::k_pow(rat(num, den), e))
}
