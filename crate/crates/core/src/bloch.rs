//! Floquet–Bloch pencils `T(λ) = L0 + λ L1` and their spectra.
//!
//! Matrices act on coefficients of `e^{inz}`, `n = -N..=N`, where
//! `(∂_z + iμ)` is the diagonal `D = diag(i(n+μ))` and multiplication by a
//! function `f` is the truncated convolution `M(f)[m][n] = f̂_{m-n}`.
//!
//! Model A: `T = 2(cλ − k²η_z)(∂+iμ) + k²(∂+iμ)²(−3c² + 2η) − 1`.
//! Model B: `T = (λ − k²w_z − γk⁴w_z w_zz)(∂+iμ) + k²(∂+iμ)²(−c + w)
//!              − (γk⁴/2)w_z²(∂+iμ)² − 1`.

use faer::{c64, Mat};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{ComplexFourierVector, TrigSeries};
use crate::stokes::{ModelTag, WaveBranch};

/// Eigenvalues of modulus above this are treated as infinite.
pub const INFINITE_EIGENVALUE: f64 = 1e8;

/// Default number of uniform μ samples on `[0, 1/2]`.
pub const DEFAULT_MU_POINTS: usize = 201;

/// Matrix pair of the Bloch operator at one Floquet exponent.
#[derive(Clone, Debug)]
pub struct BlochPencil {
    pub mu: f64,
    pub n_modes: usize,
    pub model: ModelTag,
    pub a: f64,
    pub k: f64,
    pub c: f64,
    pub l0: Mat<c64>,
    pub l1: Mat<c64>,
}

impl BlochPencil {
    pub fn dim(&self) -> usize {
        2 * self.n_modes + 1
    }

    /// Matrix of `T(λ)`.
    pub fn at(&self, lambda: Complex64) -> Mat<c64> {
        Mat::from_fn(self.dim(), self.dim(), |i, j| {
            self.l0[(i, j)] + lambda * self.l1[(i, j)]
        })
    }

    /// `T(λ) v` by matrix action.
    pub fn apply(&self, lambda: Complex64, v: &ComplexFourierVector) -> ComplexFourierVector {
        let modes = v.modes();
        let out = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| (self.l0[(i, j)] + lambda * self.l1[(i, j)]) * modes[j])
                    .sum()
            })
            .collect();
        ComplexFourierVector::from_modes(out).expect("odd length")
    }
}

/// Folds any real μ into the fundamental cell `(−1/2, 1/2]`.
pub fn fold_mu(mu: f64) -> f64 {
    let m = mu - mu.round();
    if m <= -0.5 {
        m + 1.0
    } else {
        m
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > -0.5 && mu <= 0.5) {
        return Err(Error::Domain(format!(
            "Floquet exponent must lie in (-1/2, 1/2], got {mu}"
        )));
    }
    Ok(())
}

/// Coefficient functions of the Bloch operator in the form
/// `T = M(f1) D + D² M(f2) + M(f3) D² − 1 + λ·(scale) D`.
struct OperatorCoefficients {
    first: TrigSeries,
    inner: TrigSeries,
    outer: TrigSeries,
    lambda_scale: f64,
}

fn coefficients(model: ModelTag, branch: &WaveBranch, n_modes: usize) -> OperatorCoefficients {
    let eta = branch.eta.with_modes(n_modes);
    let (k, c) = (branch.k, branch.c);
    let k2 = k * k;
    let d1 = eta.deriv(1);
    let d2 = eta.deriv(2);
    let one = TrigSeries::constant(n_modes, 1.0);
    match model {
        ModelTag::A => OperatorCoefficients {
            first: d1.scale(-2.0 * k2),
            inner: (&eta.scale(2.0) - &one.scale(3.0 * c * c)).scale(k2),
            outer: TrigSeries::zeros(n_modes),
            lambda_scale: 2.0 * c,
        },
        ModelTag::B { gamma } => {
            let g = gamma * k2 * k2;
            let d1d2 = d1.mul(&d2).expect("shared cutoff");
            let d1sq = d1.mul(&d1).expect("shared cutoff");
            OperatorCoefficients {
                first: &d1.scale(-k2) - &d1d2.scale(g),
                inner: (&eta - &one.scale(c)).scale(k2),
                outer: d1sq.scale(-0.5 * g),
                lambda_scale: 1.0,
            }
        }
    }
}

/// Builds `(L0, L1)` for the branch at Floquet exponent `mu`.
pub fn assemble_pencil(branch: &WaveBranch, mu: f64, n_modes: usize) -> Result<BlochPencil> {
    check_mu(mu)?;
    let coeffs = coefficients(branch.model, branch, n_modes);
    let dim = 2 * n_modes + 1;
    let nn = n_modes as i64;
    let fhat = [
        coeffs.first.to_complex(),
        coeffs.inner.to_complex(),
        coeffs.outer.to_complex(),
    ];
    let d = |idx: usize| Complex64::new(0.0, (idx as i64 - nn) as f64 + mu);
    let l0 = Mat::<c64>::from_fn(dim, dim, |i, j| {
        let shift = i as i64 - j as i64;
        let (di, dj) = (d(i), d(j));
        let mut v = fhat[0].get(shift) * dj + di * di * fhat[1].get(shift) + fhat[2].get(shift) * dj * dj;
        if i == j {
            v -= 1.0;
        }
        v
    });
    let l1 = Mat::<c64>::from_fn(dim, dim, |i, j| {
        if i == j {
            d(i) * coeffs.lambda_scale
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Ok(BlochPencil {
        mu,
        n_modes,
        model: branch.model,
        a: branch.a,
        k: branch.k,
        c: branch.c,
        l0,
        l1,
    })
}

/// Split action `(T₀ v, T₁ v)` with `T(λ) = T₀ + λT₁`, computed by convolutions
/// of Fourier vectors without forming matrices.
pub fn apply_bloch_split(
    branch: &WaveBranch,
    mu: f64,
    v: &ComplexFourierVector,
) -> (ComplexFourierVector, ComplexFourierVector) {
    let n = v.n_modes();
    let coeffs = coefficients(branch.model, branch, n);
    let dv = v.shifted_deriv(mu, 1);
    let d2v = v.shifted_deriv(mu, 2);
    let mul = |f: &TrigSeries, g: &ComplexFourierVector| f.to_complex().mul(g).expect("shared cutoff");
    let t0 = mul(&coeffs.first, &dv)
        .add(&mul(&coeffs.inner, v).shifted_deriv(mu, 2))
        .add(&mul(&coeffs.outer, &d2v))
        .add(&v.scale(Complex64::new(-1.0, 0.0)));
    let t1 = dv.scale(Complex64::new(coeffs.lambda_scale, 0.0));
    (t0, t1)
}

/// `T(λ) v` through [`apply_bloch_split`].
pub fn apply_bloch(
    branch: &WaveBranch,
    mu: f64,
    lambda: Complex64,
    v: &ComplexFourierVector,
) -> ComplexFourierVector {
    let (t0, t1) = apply_bloch_split(branch, mu, v);
    t0.add(&t1.scale(lambda))
}

/// `Ω` with `λ = iΩ` the zero-amplitude eigenvalue carried by mode `n`.
pub fn dispersion(model: ModelTag, n: i64, mu: f64, k: f64) -> Result<f64> {
    let s = n as f64 + mu;
    if s == 0.0 {
        return Err(Error::Singularity { n, mu });
    }
    let base = s - 1.0 / s;
    Ok(match model {
        ModelTag::A => 3f64.sqrt() * k / 2.0 * base,
        ModelTag::B { .. } => base,
    })
}

/// A coincidence of two zero-amplitude eigenvalues `iΩ_n = iΩ_m` at `μ₀`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CollisionRecord {
    pub n: i64,
    pub m: i64,
    pub mu0: f64,
    pub omega: f64,
}

/// Collisions of the model A dispersion relation in `[0, 1/2]`.
///
/// Besides the double zero eigenvalue `(−1, 1)` at the origin, the only
/// collisions pair mode `0` with a mode `n ≤ −3`, at
/// `μ₀ = (−n − √(n² − 4))/2`. Each record is checked against `mu_tol`;
/// records that fail the check are dropped.
pub fn find_collisions(n_min: i64, mu_tol: f64, k: f64) -> Vec<CollisionRecord> {
    let mut out = vec![CollisionRecord {
        n: -1,
        m: 1,
        mu0: 0.0,
        omega: 0.0,
    }];
    for n in (n_min..=-3).rev() {
        let nf = n as f64;
        let mu0 = (-nf - (nf * nf - 4.0).sqrt()) / 2.0;
        let (Ok(w0), Ok(wn)) = (
            dispersion(ModelTag::A, 0, mu0, k),
            dispersion(ModelTag::A, n, mu0, k),
        ) else {
            continue;
        };
        if (w0 - wn).abs() <= mu_tol {
            out.push(CollisionRecord {
                n: 0,
                m: n,
                mu0,
                omega: w0,
            });
        }
    }
    out
}

/// Finite spectrum at one Floquet exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSample {
    pub mu: f64,
    pub eigenvalues: Vec<Complex64>,
    /// Mode index `n` each eigenvalue continues from, when tracked.
    pub branch_ids: Option<Vec<i64>>,
    /// Number of infinite eigenvalues discarded.
    pub infinite: usize,
}

/// Solves `L0 v = −λ L1 v` by the generalized Schur (QZ) decomposition.
pub fn spectrum_slice(pencil: &BlochPencil) -> Result<SpectrumSample> {
    let neg_l1 = Mat::<c64>::from_fn(pencil.dim(), pencil.dim(), |i, j| -pencil.l1[(i, j)]);
    let gevd = pencil.l0.generalized_eigen(&neg_l1).map_err(|e| {
        Error::Numeric(format!(
            "generalized eigensolver failed at mu = {} (dim {}): {e:?}",
            pencil.mu,
            pencil.dim()
        ))
    })?;
    let (alpha, beta) = (gevd.S_a(), gevd.S_b());
    let mut eigenvalues = Vec::with_capacity(pencil.dim());
    let mut infinite = 0;
    for i in 0..pencil.dim() {
        let (al, be): (Complex64, Complex64) = (alpha[i], beta[i]);
        let lam = al / be;
        if be.norm() == 0.0 || !lam.is_finite() || lam.norm() > INFINITE_EIGENVALUE {
            infinite += 1;
        } else {
            eigenvalues.push(lam);
        }
    }
    if eigenvalues.iter().any(|l| l.re.is_nan() || l.im.is_nan()) {
        return Err(Error::Numeric(format!("NaN eigenvalue at mu = {}", pencil.mu)));
    }
    Ok(SpectrumSample {
        mu: pencil.mu,
        eigenvalues,
        branch_ids: None,
        infinite,
    })
}

/// Labels each eigenvalue with the mode whose zero-amplitude value `iΩ_n` is
/// nearest, resolving conflicts greedily by distance.
pub fn label_by_dispersion(sample: &mut SpectrumSample, model: ModelTag, k: f64, n_modes: usize) {
    let nn = n_modes as i64;
    let targets: Vec<(i64, Complex64)> = (-nn..=nn)
        .filter_map(|n| {
            dispersion(model, n, sample.mu, k)
                .ok()
                .map(|w| (n, Complex64::new(0.0, w)))
        })
        .collect();
    let ids = greedy_match(&sample.eigenvalues, &targets);
    sample.branch_ids = Some(ids);
}

/// Labels eigenvalues by continuity from a previously labelled sample,
/// predicting each branch's motion with the dispersion shift between the two
/// Floquet exponents.
pub fn label_by_continuity(
    sample: &mut SpectrumSample,
    previous: &SpectrumSample,
    model: ModelTag,
    k: f64,
) {
    let Some(prev_ids) = &previous.branch_ids else {
        return;
    };
    let targets: Vec<(i64, Complex64)> = previous
        .eigenvalues
        .iter()
        .zip(prev_ids)
        .map(|(l, &n)| {
            let shift = match (
                dispersion(model, n, sample.mu, k),
                dispersion(model, n, previous.mu, k),
            ) {
                (Ok(w1), Ok(w0)) => w1 - w0,
                _ => 0.0,
            };
            (n, l + Complex64::new(0.0, shift))
        })
        .collect();
    sample.branch_ids = Some(greedy_match(&sample.eigenvalues, &targets));
}

fn greedy_match(values: &[Complex64], targets: &[(i64, Complex64)]) -> Vec<i64> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(values.len() * targets.len());
    for (i, v) in values.iter().enumerate() {
        for (j, (_, t)) in targets.iter().enumerate() {
            pairs.push(((v - t).norm(), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut ids = vec![None; values.len()];
    let mut used = vec![false; targets.len()];
    for (_, i, j) in pairs {
        if ids[i].is_none() && !used[j] {
            ids[i] = Some(targets[j].0);
            used[j] = true;
        }
    }
    // more eigenvalues than targets: label the rest past the largest id
    let mut extra = targets.iter().map(|t| t.0).max().unwrap_or(0);
    ids.into_iter()
        .map(|id| {
            id.unwrap_or_else(|| {
                extra += 1;
                extra
            })
        })
        .collect()
}

/// Spectra over a grid of Floquet exponents, computed in parallel and labelled
/// sequentially (dispersion at the first point, continuity afterwards).
pub fn sweep(branch: &WaveBranch, mus: &[f64], n_modes: usize) -> Result<Vec<SpectrumSample>> {
    let mut samples = mus
        .par_iter()
        .map(|&mu| assemble_pencil(branch, mu, n_modes).and_then(|p| spectrum_slice(&p)))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..samples.len() {
        if i == 0 {
            label_by_dispersion(&mut samples[0], branch.model, branch.k, n_modes);
        } else {
            let (head, tail) = samples.split_at_mut(i);
            label_by_continuity(&mut tail[0], &head[i - 1], branch.model, branch.k);
        }
    }
    Ok(samples)
}

/// `count` uniform points from `start` to `stop` inclusive.
pub fn uniform_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Outcome of the two reflection symmetries of the spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    /// Hausdorff distance between `σ(μ)` and `−conj σ(μ)`.
    pub reflection_defect: f64,
    /// Hausdorff distance between `conj σ(μ)` and `σ(−μ)`.
    pub conjugation_defect: f64,
    pub tolerance: f64,
    /// Eigenvalues without a partner within the tolerance.
    pub unmatched: Vec<Complex64>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.reflection_defect <= self.tolerance && self.conjugation_defect <= self.tolerance
    }
}

/// Default Hausdorff tolerance for [`symmetry_check`].
pub const SYMMETRY_TOL: f64 = 1e-8;

fn directed(from: &[Complex64], to: &[Complex64], tol: f64, unmatched: &mut Vec<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for x in from {
        let d = to.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min);
        if d > tol {
            unmatched.push(*x);
        }
        worst = worst.max(d);
    }
    worst
}

fn hausdorff(p: &[Complex64], q: &[Complex64], tol: f64, unmatched: &mut Vec<Complex64>) -> f64 {
    if p.is_empty() && q.is_empty() {
        return 0.0;
    }
    directed(p, q, tol, unmatched).max(directed(q, p, tol, unmatched))
}

/// Checks `σ(μ) = −conj σ(μ)` and `conj σ(μ) = σ(−μ)`.
pub fn symmetry_check(plus: &SpectrumSample, minus: &SpectrumSample, tol: f64) -> SymmetryReport {
    let mut unmatched = Vec::new();
    let reflected: Vec<Complex64> = plus.eigenvalues.iter().map(|l| -l.conj()).collect();
    let conjugated: Vec<Complex64> = plus.eigenvalues.iter().map(|l| l.conj()).collect();
    let reflection_defect = hausdorff(&plus.eigenvalues, &reflected, tol, &mut unmatched);
    let conjugation_defect = hausdorff(&conjugated, &minus.eigenvalues, tol, &mut unmatched);
    SymmetryReport {
        reflection_defect,
        conjugation_defect,
        tolerance: tol,
        unmatched,
    }
}
