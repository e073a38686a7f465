//! Periodic traveling waves `u = η(k(x - ct))` of the two models.
//!
//! Model A profiles solve
//! `(3c² − 2η)k²η″ − k²(η′)² + η = 0`,
//! model B profiles solve
//! `k²(w − c)w″ + (k²/2)(w′)² − (γ/2)k⁴w″(w′)² − w = 0`,
//! both on the 2π-torus with even `η`. The amplitude `a` is the coefficient of
//! `cos z`, so `2⟨η, cos z⟩ = a`.

use faer::linalg::solvers::Solve;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{TrigSeries, DEFAULT_MODES};

/// Largest |a| for which the small-amplitude theory is used.
pub const AMPLITUDE_LIMIT: f64 = 0.2;

/// Newton tolerance used when callers have no preference.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_NEWTON_ITERATIONS: usize = 40;

/// Which shallow-water model is being analysed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model")]
pub enum ModelTag {
    A,
    B { gamma: f64 },
}

impl ModelTag {
    /// `γ` for model B, zero for model A.
    pub fn gamma(&self) -> f64 {
        match *self {
            ModelTag::A => 0.0,
            ModelTag::B { gamma } => gamma,
        }
    }

    /// Linear (zero-amplitude) wave speed `c₀`.
    pub fn base_speed(&self, k: f64) -> f64 {
        match self {
            ModelTag::A => 1.0 / (3f64.sqrt() * k),
            ModelTag::B { .. } => 1.0 / (k * k),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ModelTag::A => "A",
            ModelTag::B { .. } => "B",
        }
    }
}

/// One point on the small-amplitude branch.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveBranch {
    pub model: ModelTag,
    pub a: f64,
    pub k: f64,
    pub c: f64,
    pub eta: TrigSeries,
    pub residual_norm: f64,
}

fn check_params(a: f64, k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("wavenumber must be positive, got k = {k}")));
    }
    if !a.is_finite() || a.abs() > AMPLITUDE_LIMIT {
        return Err(Error::Validity {
            amplitude: a,
            limit: AMPLITUDE_LIMIT,
        });
    }
    Ok(())
}

fn times(f: &TrigSeries, g: &TrigSeries) -> TrigSeries {
    f.mul(g).expect("operands share a cutoff")
}

/// Third-order Stokes expansion, with `DEFAULT_MODES` harmonics.
pub fn analytic_wave(model: ModelTag, a: f64, k: f64) -> Result<WaveBranch> {
    analytic_wave_with_modes(model, a, k, DEFAULT_MODES)
}

pub fn analytic_wave_with_modes(
    model: ModelTag,
    a: f64,
    k: f64,
    n_modes: usize,
) -> Result<WaveBranch> {
    check_params(a, k)?;
    if n_modes < 3 {
        return Err(Error::Dimension {
            expected: 3,
            found: n_modes,
        });
    }
    let k2 = k * k;
    let k4 = k2 * k2;
    let (a0, a2, a3, c) = match model {
        ModelTag::A => {
            let s3 = 3f64.sqrt();
            (
                -k2 / 2.0,
                k2 / 2.0,
                7.0 * k4 / 16.0,
                1.0 / (s3 * k) + a * a * k2 * k / (4.0 * s3),
            )
        }
        ModelTag::B { gamma } => (
            -k2 / 4.0,
            k2 / 4.0,
            (7.0 + gamma) * k4 / 64.0,
            1.0 / k2 + a * a * (1.0 - gamma) * k2 / 8.0,
        ),
    };
    let mut cos = vec![0.0; n_modes + 1];
    cos[0] = a * a * a0;
    cos[1] = a;
    cos[2] = a * a * a2;
    cos[3] = a * a * a * a3;
    let eta = TrigSeries::even(cos);
    let residual_norm = residual(model, &eta, c, k).sup_norm();
    Ok(WaveBranch {
        model,
        a,
        k,
        c,
        eta,
        residual_norm,
    })
}

/// Residual of the traveling-wave ODE at `(η, c)`.
pub fn residual(model: ModelTag, eta: &TrigSeries, c: f64, k: f64) -> TrigSeries {
    let n = eta.n_modes();
    let k2 = k * k;
    let d1 = eta.deriv(1);
    let d2 = eta.deriv(2);
    let d1sq = times(&d1, &d1);
    match model {
        ModelTag::A => {
            let coeff = &TrigSeries::constant(n, 3.0 * c * c) - &eta.scale(2.0);
            let lead = times(&coeff, &d2).scale(k2);
            &(&lead - &d1sq.scale(k2)) + eta
        }
        ModelTag::B { gamma } => {
            let shifted = eta - &TrigSeries::constant(n, c);
            let lead = times(&shifted, &d2).scale(k2);
            let cubic = times(&d2, &d1sq).scale(0.5 * gamma * k2 * k2);
            &(&(&lead + &d1sq.scale(0.5 * k2)) - &cubic) - eta
        }
    }
}

/// Coefficient functions `(p, q, r, ∂R/∂c)` of the linearisation
/// `δR = p δη″ + q δη′ + r δη + (∂R/∂c) δc`.
fn linearisation(
    model: ModelTag,
    eta: &TrigSeries,
    c: f64,
    k: f64,
) -> (TrigSeries, TrigSeries, TrigSeries, TrigSeries) {
    let n = eta.n_modes();
    let k2 = k * k;
    let d1 = eta.deriv(1);
    let d2 = eta.deriv(2);
    let one = TrigSeries::constant(n, 1.0);
    match model {
        ModelTag::A => {
            let p = (&TrigSeries::constant(n, 3.0 * c * c) - &eta.scale(2.0)).scale(k2);
            let q = d1.scale(-2.0 * k2);
            let r = &one - &d2.scale(2.0 * k2);
            let dc = d2.scale(6.0 * c * k2);
            (p, q, r, dc)
        }
        ModelTag::B { gamma } => {
            let g = gamma * k2 * k2;
            let p = &(eta - &TrigSeries::constant(n, c)).scale(k2)
                - &times(&d1, &d1).scale(0.5 * g);
            let q = &d1.scale(k2) - &times(&d2, &d1).scale(g);
            let r = &d2.scale(k2) - &one;
            let dc = d2.scale(-k2);
            (p, q, r, dc)
        }
    }
}

/// Newton–Galerkin solve in the cosine subspace, seeded by the Stokes expansion.
pub fn solve_wave(
    model: ModelTag,
    a: f64,
    k: f64,
    n_modes: usize,
    tol: f64,
) -> Result<WaveBranch> {
    solve_wave_traced(model, a, k, n_modes, tol).map(|(branch, _)| branch)
}

/// As [`solve_wave`], also returning the residual norm before each Newton step
/// and after the last one.
pub fn solve_wave_traced(
    model: ModelTag,
    a: f64,
    k: f64,
    n_modes: usize,
    tol: f64,
) -> Result<(WaveBranch, Vec<f64>)> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut branch = analytic_wave_with_modes(model, a, k, n_modes)?;
    if a == 0.0 {
        let norm = branch.residual_norm;
        return Ok((branch, vec![norm]));
    }
    let n = n_modes;
    let dim = n + 2;
    let mut history = Vec::new();
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let res = residual(model, &branch.eta, branch.c, k);
        let norm = res.sup_norm();
        history.push(norm);
        branch.residual_norm = norm;
        if norm <= tol {
            return Ok((branch, history));
        }

        let (p, q, r, dc) = linearisation(model, &branch.eta, branch.c, k);
        let mut jac = Mat::<f64>::zeros(dim, dim);
        for j in 0..=n {
            let jf = j as f64;
            let col = &(&times(&p, &TrigSeries::cos_mode(n, j, -jf * jf))
                + &times(&q, &TrigSeries::sin_mode(n, j, -jf)))
                + &times(&r, &TrigSeries::cos_mode(n, j, 1.0));
            for h in 0..=n {
                jac[(h, j)] = col.cos_coeff(h);
            }
        }
        for h in 0..=n {
            jac[(h, n + 1)] = dc.cos_coeff(h);
        }
        // amplitude normalisation row: η₁ = a
        jac[(n + 1, 1)] = 1.0;

        let rhs = Mat::<f64>::from_fn(dim, 1, |h, _| {
            if h <= n {
                -res.cos_coeff(h)
            } else {
                a - branch.eta.cos_coeff(1)
            }
        });
        let step = jac.partial_piv_lu().solve(&rhs);
        if (0..dim).any(|h| !step[(h, 0)].is_finite()) {
            return Err(Error::Convergence {
                iterations: history.len(),
                residual: norm,
            });
        }
        let cos: Vec<f64> = (0..=n)
            .map(|h| branch.eta.cos_coeff(h) + step[(h, 0)])
            .collect();
        branch.eta = TrigSeries::even(cos);
        branch.c += step[(n + 1, 0)];
    }
    let norm = residual(model, &branch.eta, branch.c, k).sup_norm();
    history.push(norm);
    if norm <= tol {
        branch.residual_norm = norm;
        return Ok((branch, history));
    }
    Err(Error::Convergence {
        iterations: MAX_NEWTON_ITERATIONS,
        residual: norm,
    })
}

/// Default finite-difference step for [`branch_derivative`].
pub fn default_step(a: f64) -> f64 {
    1e-4 * a.abs().max(0.01)
}

/// `∂_a η` by centred differences at steps `h` and `h/2` combined with one
/// Richardson extrapolation.
pub fn branch_derivative(
    model: ModelTag,
    a: f64,
    k: f64,
    n_modes: usize,
    h: f64,
) -> Result<TrigSeries> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let centred = |step: f64| -> Result<TrigSeries> {
        let plus = solve_wave(model, a + step, k, n_modes, DEFAULT_TOL)?;
        let minus = solve_wave(model, a - step, k, n_modes, DEFAULT_TOL)?;
        Ok((&plus.eta - &minus.eta).scale(0.5 / step))
    };
    let coarse = centred(h)?;
    let fine = centred(0.5 * h)?;
    Ok((&fine.scale(4.0) - &coarse).scale(1.0 / 3.0))
}
