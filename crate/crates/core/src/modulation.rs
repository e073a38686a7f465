//! Modulational stability via projection onto the critical subspace.
//!
//! Near `(a, μ) = (0, 0)` the Bloch spectrum has exactly two eigenvalues close to
//! the origin. Projecting the operator onto `φ₁ = −η′/a` and `φ₂ = ∂_aη` gives a
//! 2×2 matrix `B(λ)` with `det B = b0 + i b1 λ + b2 λ²`. Writing
//! `b_j = d_j μ^{2−j}` and `λ = iμX` turns this into
//! `μ²(d0 − d1 X − d2 X²)`, whose roots are real exactly when
//! `𝒟 = d1² + 4 d0 d2 > 0`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{apply_bloch_split, assemble_pencil, dispersion, spectrum_slice};
use crate::error::{Error, Result};
use crate::fourier::TrigSeries;
use crate::stokes::{branch_derivative, default_step, solve_wave, ModelTag, WaveBranch, DEFAULT_TOL};

/// Largest |a| or |μ| accepted by the projection.
pub const PROJECTION_LIMIT: f64 = 0.2;

/// Step of the finite differences giving `d_j` at `μ = 0`.
pub const LIMIT_STEP: f64 = 1e-3;

/// Real parts below this count as zero growth.
pub const GROWTH_TOL: f64 = 1e-6;

/// Eigenvalue spacing below which the critical pair cannot be told apart.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// `(φ₁, φ₂)`: odd and even functions spanning the critical subspace at `μ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalBasis {
    pub phi1: TrigSeries,
    pub phi2: TrigSeries,
    pub a: f64,
    pub k: f64,
}

pub fn critical_basis(branch: &WaveBranch) -> Result<CriticalBasis> {
    let n = branch.eta.n_modes();
    if branch.a == 0.0 {
        return Ok(CriticalBasis {
            phi1: TrigSeries::sin_mode(n, 1, 1.0),
            phi2: TrigSeries::cos_mode(n, 1, 1.0),
            a: 0.0,
            k: branch.k,
        });
    }
    let phi1 = branch.eta.deriv(1).scale(-1.0 / branch.a);
    let phi2 = branch_derivative(branch.model, branch.a, branch.k, n, default_step(branch.a))?;
    Ok(CriticalBasis {
        phi1,
        phi2,
        a: branch.a,
        k: branch.k,
    })
}

/// Coefficients of the projected determinant at one `(a, μ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadraticDet {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub disc: f64,
    pub mu: f64,
    pub a: f64,
    pub k: f64,
}

impl QuadraticDet {
    /// Roots of `Q(X) = d0 − d1 X − d2 X²`, the `+` root first.
    pub fn x_roots(&self) -> [Complex64; 2] {
        let sq = Complex64::new(self.disc, 0.0).sqrt();
        let denom = 2.0 * self.d2;
        [(-self.d1 + sq) / denom, (-self.d1 - sq) / denom]
    }

    /// Roots `λ = iμX` of `det B(λ)`.
    pub fn lambda_roots(&self) -> [Complex64; 2] {
        let imu = Complex64::new(0.0, self.mu);
        self.x_roots().map(|x| imu * x)
    }

    /// Growth rate `μ√(−𝒟)/(2|d2|)` predicted by the quadratic (zero when `𝒟 ≥ 0`).
    pub fn predicted_growth(&self) -> f64 {
        if self.disc >= 0.0 {
            0.0
        } else {
            self.mu.abs() * (-self.disc).sqrt() / (2.0 * self.d2.abs())
        }
    }
}

/// Raw `(b0, b1, b2)` from the 2×2 projection, without rescaling.
pub fn det_coefficients(
    branch: &WaveBranch,
    basis: &CriticalBasis,
    mu: f64,
) -> Result<(f64, f64, f64)> {
    let phis = [basis.phi1.to_complex(), basis.phi2.to_complex()];
    let norms = [
        basis.phi1.inner(&basis.phi1)?,
        basis.phi2.inner(&basis.phi2)?,
    ];
    let floor = 1e-8;
    if norms.iter().any(|&v| v < floor) {
        return Err(Error::Conditioning(format!(
            "basis norms {norms:?} below {floor}"
        )));
    }
    // B = B0 + λ B1, B_ij = ⟨T φ_i, φ_j⟩ / ⟨φ_i, φ_i⟩
    let mut b0m = [[Complex64::new(0.0, 0.0); 2]; 2];
    let mut b1m = b0m;
    for i in 0..2 {
        let (t0, t1) = apply_bloch_split(branch, mu, &phis[i]);
        for j in 0..2 {
            b0m[i][j] = t0.inner(&phis[j]) / norms[i];
            b1m[i][j] = t1.inner(&phis[j]) / norms[i];
        }
    }
    let p0 = b0m[0][0] * b0m[1][1] - b0m[0][1] * b0m[1][0];
    let p1 = b0m[0][0] * b1m[1][1] + b1m[0][0] * b0m[1][1]
        - b0m[0][1] * b1m[1][0]
        - b1m[0][1] * b0m[1][0];
    let p2 = b1m[0][0] * b1m[1][1] - b1m[0][1] * b1m[1][0];
    // det = p0 + p1 λ + p2 λ² with p1 = i b1
    Ok((p0.re, p1.im, p2.re))
}

fn check_small(label: &str, v: f64) -> Result<()> {
    if v.abs() > PROJECTION_LIMIT || !v.is_finite() {
        return Err(Error::Domain(format!(
            "{label} = {v} outside the projection window |{label}| <= {PROJECTION_LIMIT}"
        )));
    }
    Ok(())
}

/// Projected determinant and discriminant at Floquet exponent `mu`.
///
/// At `μ = 0` the rescaled coefficients are limits, taken by centred
/// differences in `μ` with one Richardson step.
pub fn projected_det(branch: &WaveBranch, basis: &CriticalBasis, mu: f64) -> Result<QuadraticDet> {
    check_small("a", branch.a)?;
    check_small("mu", mu)?;
    let (b0, b1, b2) = det_coefficients(branch, basis, mu)?;
    let (d0, d1, d2) = if mu != 0.0 {
        (b0 / (mu * mu), b1 / mu, b2)
    } else {
        let at = |m: f64| det_coefficients(branch, basis, m);
        let first = |h: f64| -> Result<(f64, f64)> {
            let (p0, p1, _) = at(h)?;
            let (m0, m1, _) = at(-h)?;
            // d0 = ½ b0''(0), d1 = b1'(0)
            Ok(((p0 - 2.0 * b0 + m0) / (2.0 * h * h), (p1 - m1) / (2.0 * h)))
        };
        let (c0, c1) = first(LIMIT_STEP)?;
        let (f0, f1) = first(0.5 * LIMIT_STEP)?;
        ((4.0 * f0 - c0) / 3.0, (4.0 * f1 - c1) / 3.0, b2)
    };
    Ok(QuadraticDet {
        b0,
        b1,
        b2,
        d0,
        d1,
        d2,
        disc: d1 * d1 + 4.0 * d0 * d2,
        mu,
        a: branch.a,
        k: branch.k,
    })
}

/// The two eigenvalues nearest the origin, matched to the `n = ±1` modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPair {
    pub mu: f64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    /// Roots `iμX±` of the projected quadratic.
    pub quadratic_roots: [Complex64; 2],
    /// The pair is closer than [`DEGENERACY_TOL`] and the labels are arbitrary.
    pub degenerate: bool,
}

impl CriticalPair {
    pub fn max_growth(&self) -> f64 {
        self.lambda_plus.re.abs().max(self.lambda_minus.re.abs())
    }
}

/// Critical eigenvalues of the full pencil, cross-checked against the quadratic.
pub fn critical_growth(
    branch: &WaveBranch,
    basis: &CriticalBasis,
    mu: f64,
) -> Result<CriticalPair> {
    let n_modes = branch.eta.n_modes();
    let sample = spectrum_slice(&assemble_pencil(branch, mu, n_modes)?)?;
    let mut by_size = sample.eigenvalues.clone();
    by_size.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    if by_size.len() < 2 {
        return Err(Error::Numeric(format!(
            "fewer than two finite eigenvalues at mu = {mu}"
        )));
    }
    let (p, q) = (by_size[0], by_size[1]);
    let k = branch.k;
    let target = |n: i64| Complex64::new(0.0, dispersion(branch.model, n, mu, k).unwrap_or(0.0));
    let (tp, tm) = (target(1), target(-1));
    let (lambda_plus, lambda_minus) = if (p - tp).norm() + (q - tm).norm() <= (p - tm).norm() + (q - tp).norm() {
        (p, q)
    } else {
        (q, p)
    };
    let quad = projected_det(branch, basis, mu)?;
    let mut roots = quad.lambda_roots();
    // order the quadratic roots to match the labelled eigenvalues
    if (roots[0] - lambda_plus).norm() > (roots[1] - lambda_plus).norm() {
        roots.swap(0, 1);
    }
    Ok(CriticalPair {
        mu,
        lambda_plus,
        lambda_minus,
        quadratic_roots: roots,
        degenerate: (p - q).norm() < DEGENERACY_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub model: ModelTag,
    pub a: f64,
    pub k: f64,
    pub verdict: Verdict,
    /// `(μ, 𝒟)` for each grid point.
    pub disc_samples: Vec<(f64, f64)>,
    /// Largest `|Re λ|` over the critical pair across the grid.
    pub max_growth: f64,
    pub threshold_estimate: Option<f64>,
}

/// Noise floor separating a genuine sign of `𝒟` from rounding.
pub fn positivity_margin(mu: f64, a: f64) -> f64 {
    1e-10_f64.max(1e-3 * (mu * mu + a * a))
}

/// Sweeps `𝒟` and the critical eigenvalues over `mu_grid` and decides stability.
pub fn discriminant_sweep(
    model: ModelTag,
    a: f64,
    k: f64,
    mu_grid: &[f64],
    n_modes: usize,
) -> Result<StabilityReport> {
    let branch = solve_wave(model, a, k, n_modes, DEFAULT_TOL)?;
    let basis = critical_basis(&branch)?;
    let points = mu_grid
        .par_iter()
        .map(|&mu| {
            let quad = projected_det(&branch, &basis, mu)?;
            let pair = critical_growth(&branch, &basis, mu)?;
            Ok((quad, pair))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut all_positive = true;
    let mut corroborated_negative = false;
    let mut max_growth = 0.0_f64;
    for (quad, pair) in &points {
        let margin = positivity_margin(quad.mu, a);
        let growth = pair.max_growth();
        max_growth = max_growth.max(growth);
        if quad.disc <= margin {
            all_positive = false;
        }
        if quad.disc < -margin {
            let noise_growth = quad.mu.abs() * margin.sqrt() / (2.0 * quad.d2.abs());
            if growth > 10.0 * noise_growth {
                corroborated_negative = true;
            }
        }
    }
    let verdict = if all_positive && max_growth <= GROWTH_TOL {
        Verdict::Stable
    } else if corroborated_negative {
        Verdict::Unstable
    } else {
        Verdict::Indeterminate
    };
    Ok(StabilityReport {
        model,
        a,
        k,
        verdict,
        disc_samples: points.iter().map(|(q, _)| (q.mu, q.disc)).collect(),
        max_growth,
        threshold_estimate: None,
    })
}

/// `𝒟` at `μ = 0` for model B with the given `γ`.
pub fn zero_mu_discriminant(gamma: f64, k: f64, a: f64, n_modes: usize) -> Result<f64> {
    let branch = solve_wave(ModelTag::B { gamma }, a, k, n_modes, DEFAULT_TOL)?;
    let basis = critical_basis(&branch)?;
    Ok(projected_det(&branch, &basis, 0.0)?.disc)
}

/// Width at which [`threshold_bisect`] stops.
pub const THRESHOLD_WIDTH: f64 = 1e-3;

/// Model B stability threshold `γ*` by bisection on the sign of `𝒟(μ → 0)`.
pub fn threshold_bisect(
    k: f64,
    a: f64,
    gamma_lo: f64,
    gamma_hi: f64,
    n_modes: usize,
) -> Result<f64> {
    if a == 0.0 {
        return Err(Error::Precondition(
            "the threshold is invisible at zero amplitude".into(),
        ));
    }
    let (mut lo, mut hi) = (gamma_lo.min(gamma_hi), gamma_lo.max(gamma_hi));
    let mut f_lo = zero_mu_discriminant(lo, k, a, n_modes)?;
    let f_hi = zero_mu_discriminant(hi, k, a, n_modes)?;
    let margin = positivity_margin(0.0, a);
    if f_lo.abs() <= margin || f_hi.abs() <= margin || f_lo.signum() == f_hi.signum() {
        return Err(Error::Precondition(format!(
            "discriminant must change sign on [{lo}, {hi}] (got {f_lo:e} and {f_hi:e})"
        )));
    }
    while hi - lo > THRESHOLD_WIDTH {
        let mid = 0.5 * (lo + hi);
        let f_mid = zero_mu_discriminant(mid, k, a, n_modes)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stokes::analytic_wave_with_modes;

    const N: usize = 24;

    fn wave(model: ModelTag, a: f64, k: f64) -> WaveBranch {
        solve_wave(model, a, k, N, 1e-13).unwrap()
    }

    #[test]
    fn flat_basis_is_sin_cos() {
        let b = analytic_wave_with_modes(ModelTag::A, 0.0, 1.0, N).unwrap();
        let basis = critical_basis(&b).unwrap();
        assert_eq!(basis.phi1, TrigSeries::sin_mode(N, 1, 1.0));
        assert_eq!(basis.phi2, TrigSeries::cos_mode(N, 1, 1.0));
    }

    #[test]
    fn basis_expansion_and_norms() {
        let a = 0.05;
        let basis = critical_basis(&wave(ModelTag::A, a, 1.0)).unwrap();
        assert!(basis.phi1.is_odd() && basis.phi2.is_even());
        assert_eq!(basis.phi1.inner(&basis.phi2).unwrap(), 0.0);
        assert!((basis.phi1.sin_coeff(1) - 1.0).abs() < 1e-12);
        assert!((basis.phi1.sin_coeff(2) - a).abs() < 1e-4);
        assert!((basis.phi1.sin_coeff(3) - 21.0 / 16.0 * a * a).abs() < 1e-4);

        let a = 0.1;
        let basis = critical_basis(&wave(ModelTag::A, a, 1.0)).unwrap();
        let n1 = basis.phi1.inner(&basis.phi1).unwrap();
        let n2 = basis.phi2.inner(&basis.phi2).unwrap();
        assert!((n1 - (1.0 + a * a) / 2.0).abs() < 1e-3);
        assert!((n2 - (1.0 + 3.0 * a * a) / 2.0).abs() < 1e-3);
    }

    #[test]
    fn flat_determinant() {
        let mu: f64 = 0.01;
        let b = analytic_wave_with_modes(ModelTag::A, 0.0, 1.0, N).unwrap();
        let basis = critical_basis(&b).unwrap();
        let q = projected_det(&b, &basis, mu).unwrap();
        let s3 = 3f64.sqrt();
        assert!((q.b0 - (-4.0 * mu * mu + mu.powi(4))).abs() < 1e-15);
        assert!((q.b1 - (-8.0 * mu + 4.0 * mu.powi(3)) / s3).abs() < 1e-14);
        assert!((q.b2 - 4.0 / 3.0 * (1.0 - mu * mu)).abs() < 1e-14);
        assert!((q.disc - 16.0 * mu * mu / 3.0).abs() < 1e-12);
    }

    #[test]
    fn double_root_at_group_velocity() {
        let b = analytic_wave_with_modes(ModelTag::A, 0.0, 1.0, N).unwrap();
        let basis = critical_basis(&b).unwrap();
        let q = projected_det(&b, &basis, 0.0).unwrap();
        assert!(q.disc.abs() < 1e-12);
        for x in q.x_roots() {
            assert!((x - Complex64::new(3f64.sqrt(), 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn coperiodic_determinant_is_pure_quadratic() {
        for a in [0.02, 0.05] {
            let b = wave(ModelTag::A, a, 1.0);
            let basis = critical_basis(&b).unwrap();
            let q = projected_det(&b, &basis, 0.0).unwrap();
            assert!(q.b0.abs() < 1e-8 && q.b1.abs() < 1e-8);
            let want = 4.0 / 3.0 + 2.0 * a * a / 3.0 - 1.25 * a.powi(4);
            assert!((q.b2 - want).abs() < 10.0 * a.powi(3));
        }
    }

    #[test]
    fn parity_in_mu() {
        let b = wave(ModelTag::B { gamma: 1.7 }, 0.04, 1.3);
        let basis = critical_basis(&b).unwrap();
        for mu in [0.003, 0.02, 0.07] {
            let (p0, p1, p2) = det_coefficients(&b, &basis, mu).unwrap();
            let (m0, m1, m2) = det_coefficients(&b, &basis, -mu).unwrap();
            assert!((p0 - m0).abs() < 1e-10);
            assert!((p1 + m1).abs() < 1e-10);
            assert!((p2 - m2).abs() < 1e-10);
        }
    }

    #[test]
    fn limit_is_continuous() {
        let b = wave(ModelTag::A, 0.03, 0.8);
        let basis = critical_basis(&b).unwrap();
        let at0 = projected_det(&b, &basis, 0.0).unwrap();
        let near = projected_det(&b, &basis, 1e-4).unwrap();
        assert!((at0.d0 - near.d0).abs() < 1e-6);
        assert!((at0.d1 - near.d1).abs() < 1e-6);
        assert!((at0.disc - near.disc).abs() < 1e-6);
    }

    #[test]
    fn model_b_zero_mu_discriminant() {
        let a = 0.02;
        for gamma in [0.0, 2.0, 3.0] {
            let d = zero_mu_discriminant(gamma, 1.0, a, N).unwrap();
            let want = a * a * (1.0 - gamma);
            assert!((d - want).abs() < 0.05 * want.abs(), "gamma {gamma}: {d} vs {want}");
        }
    }

    #[test]
    fn flat_critical_pair() {
        let b = analytic_wave_with_modes(ModelTag::A, 0.0, 1.0, N).unwrap();
        let basis = critical_basis(&b).unwrap();
        let mu = 0.03;
        let pair = critical_growth(&b, &basis, mu).unwrap();
        let w = |n| Complex64::new(0.0, dispersion(ModelTag::A, n, mu, 1.0).unwrap());
        assert!((pair.lambda_plus - w(1)).norm() < 1e-12);
        assert!((pair.lambda_minus - w(-1)).norm() < 1e-12);
        assert!(!pair.degenerate);
        let origin = critical_growth(&b, &basis, 0.0).unwrap();
        assert!(origin.degenerate);
    }

    #[test]
    fn growth_matches_quadratic_when_unstable() {
        let b = wave(ModelTag::B { gamma: 3.0 }, 0.02, 1.0);
        let basis = critical_basis(&b).unwrap();
        let mu = 0.005;
        let pair = critical_growth(&b, &basis, mu).unwrap();
        let q = projected_det(&b, &basis, mu).unwrap();
        let predicted = q.predicted_growth();
        assert!(predicted > 0.0);
        assert!((pair.max_growth() - predicted).abs() < 0.2 * predicted);
    }

    #[test]
    fn verdicts() {
        let grid: Vec<f64> = (1..=10).map(|i| 0.002 * i as f64).collect();
        let a_report = discriminant_sweep(ModelTag::A, 0.02, 1.0, &grid, N).unwrap();
        assert_eq!(a_report.verdict, Verdict::Stable);
        let min_disc = a_report.disc_samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        assert!(min_disc >= 16.0 * 0.02f64.powi(2) / 3.0 * 0.95);
        let unstable = discriminant_sweep(ModelTag::B { gamma: 2.0 }, 0.02, 1.0, &grid, N).unwrap();
        assert_eq!(unstable.verdict, Verdict::Unstable);
        let stable = discriminant_sweep(ModelTag::B { gamma: 0.0 }, 0.02, 1.0, &grid, N).unwrap();
        assert_eq!(stable.verdict, Verdict::Stable);
    }

    #[test]
    fn threshold_needs_a_sign_change() {
        assert!(matches!(
            threshold_bisect(1.0, 0.01, 0.0, 0.5, N),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn out_of_window_rejected() {
        let b = wave(ModelTag::A, 0.05, 1.0);
        let basis = critical_basis(&b).unwrap();
        assert!(projected_det(&b, &basis, 0.3).is_err());
    }
}
