//! Truncated trigonometric series on the 2π-torus.
//!
//! Two representations are used side by side:
//! - [`TrigSeries`]: real cosine/sine coefficients, the storage for wave profiles
//!   and basis functions. Even and odd functions are recognisable structurally.
//! - [`ComplexFourierVector`]: coefficients of `e^{inz}` for `n = -N..=N`, the
//!   basis in which `(∂_z + iμ)` is diagonal and Bloch pencils are assembled.
//!
//! Products always form the full convolution and then drop harmonics above the
//! cutoff, so there is no aliasing.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Harmonic cutoff used when none is given.
pub const DEFAULT_MODES: usize = 64;

/// Real trigonometric polynomial `c_0 + Σ_{j=1..N} (c_j cos jz + s_j sin jz)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigSeries {
    pub fn zeros(n_modes: usize) -> Self {
        Self {
            cos: vec![0.0; n_modes + 1],
            sin: vec![0.0; n_modes],
        }
    }

    /// Builds a series from cosine coefficients (length `N+1`) and sine
    /// coefficients (length `N`, index `j` holding `sin((j+1)z)`).
    pub fn from_coeffs(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.is_empty() || sin.len() + 1 != cos.len() {
            return Err(Error::Dimension {
                expected: cos.len().saturating_sub(1),
                found: sin.len(),
            });
        }
        Ok(Self { cos, sin })
    }

    /// Even series from cosine coefficients only.
    pub fn even(cos: Vec<f64>) -> Self {
        assert!(!cos.is_empty(), "an even series needs at least the constant term");
        let n = cos.len() - 1;
        Self {
            cos,
            sin: vec![0.0; n],
        }
    }

    /// Odd series from `sin_coeffs` (index `j` ↔ `sin((j+1)z)`).
    pub fn odd(sin: Vec<f64>) -> Self {
        let n = sin.len();
        Self {
            cos: vec![0.0; n + 1],
            sin,
        }
    }

    pub fn constant(n_modes: usize, value: f64) -> Self {
        let mut s = Self::zeros(n_modes);
        s.cos[0] = value;
        s
    }

    /// `amp · cos(harmonic · z)`; `harmonic = 0` gives a constant.
    pub fn cos_mode(n_modes: usize, harmonic: usize, amp: f64) -> Self {
        let mut s = Self::zeros(n_modes);
        if harmonic <= n_modes {
            s.cos[harmonic] = amp;
        }
        s
    }

    /// `amp · sin(harmonic · z)` for `harmonic >= 1`.
    pub fn sin_mode(n_modes: usize, harmonic: usize, amp: f64) -> Self {
        let mut s = Self::zeros(n_modes);
        if (1..=n_modes).contains(&harmonic) {
            s.sin[harmonic - 1] = amp;
        }
        s
    }

    pub fn n_modes(&self) -> usize {
        self.sin.len()
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// Coefficient of `cos(h z)`, zero beyond the cutoff.
    pub fn cos_coeff(&self, h: usize) -> f64 {
        self.cos.get(h).copied().unwrap_or(0.0)
    }

    /// Coefficient of `sin(h z)`, zero for `h = 0` and beyond the cutoff.
    pub fn sin_coeff(&self, h: usize) -> f64 {
        if h == 0 {
            0.0
        } else {
            self.sin.get(h - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn is_even(&self) -> bool {
        self.sin.iter().all(|&s| s == 0.0)
    }

    pub fn is_odd(&self) -> bool {
        self.cos.iter().all(|&c| c == 0.0)
    }

    /// Re-truncates or zero-pads to a new cutoff.
    pub fn with_modes(&self, n_modes: usize) -> Self {
        let mut out = Self::zeros(n_modes);
        for h in 0..=n_modes.min(self.n_modes()) {
            out.cos[h] = self.cos[h];
            if h >= 1 {
                out.sin[h - 1] = self.sin[h - 1];
            }
        }
        out
    }

    fn check_same_cutoff(&self, other: &Self) -> Result<()> {
        if self.n_modes() != other.n_modes() {
            return Err(Error::Dimension {
                expected: self.n_modes(),
                found: other.n_modes(),
            });
        }
        Ok(())
    }

    /// Product truncated to harmonics `<= N`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_cutoff(other)?;
        let n = self.n_modes();
        // full product has degree <= 2N
        let mut cos = vec![0.0; 2 * n + 1];
        let mut sin = vec![0.0; 2 * n + 1];
        for i in 0..=n {
            let (fc, fs) = (self.cos[i], self.sin_coeff(i));
            if fc == 0.0 && fs == 0.0 {
                continue;
            }
            for j in 0..=n {
                let (gc, gs) = (other.cos[j], other.sin_coeff(j));
                if gc == 0.0 && gs == 0.0 {
                    continue;
                }
                let sum = i + j;
                let diff = i.abs_diff(j);
                // cos i · cos j
                let cc = 0.5 * fc * gc;
                cos[diff] += cc;
                cos[sum] += cc;
                // sin i · sin j
                let ss = 0.5 * fs * gs;
                cos[diff] += ss;
                cos[sum] -= ss;
                // sin i · cos j + cos i · sin j
                let sc = 0.5 * fs * gc;
                sin[sum] += sc;
                if i >= j {
                    sin[diff] += sc;
                } else {
                    sin[diff] -= sc;
                }
                let cs = 0.5 * fc * gs;
                sin[sum] += cs;
                if j >= i {
                    sin[diff] += cs;
                } else {
                    sin[diff] -= cs;
                }
            }
        }
        cos.truncate(n + 1);
        Ok(Self {
            cos,
            sin: sin[1..=n].to_vec(),
        })
    }

    /// Term-wise derivative of the given order.
    pub fn deriv(&self, order: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..order {
            let n = out.n_modes();
            let mut cos = vec![0.0; n + 1];
            let mut sin = vec![0.0; n];
            for h in 1..=n {
                let hf = h as f64;
                // (c cos hz + s sin hz)' = h s cos hz - h c sin hz
                cos[h] = hf * out.sin[h - 1];
                sin[h - 1] = -hf * out.cos[h];
            }
            out = Self { cos, sin };
        }
        out
    }

    /// `(1/2π) ∫ f g dz`, computed from coefficients.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_cutoff(other)?;
        let mut acc = self.cos[0] * other.cos[0];
        let mut half = 0.0;
        for h in 1..=self.n_modes() {
            half += self.cos[h] * other.cos[h] + self.sin[h - 1] * other.sin[h - 1];
        }
        acc += 0.5 * half;
        Ok(acc)
    }

    pub fn eval(&self, z: f64) -> f64 {
        let mut acc = self.cos[0];
        for h in 1..=self.n_modes() {
            let (s, c) = (h as f64 * z).sin_cos();
            acc += self.cos[h] * c + self.sin[h - 1] * s;
        }
        acc
    }

    /// Maximum of `|f|` over `8N` equispaced samples (at least 64).
    pub fn sup_norm(&self) -> f64 {
        let m = (8 * self.n_modes()).max(64);
        (0..m)
            .map(|j| self.eval(2.0 * PI * j as f64 / m as f64).abs())
            .fold(0.0, f64::max)
    }

    /// Largest absolute coefficient.
    pub fn max_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(self.sin.iter())
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            cos: self.cos.iter().map(|c| c * factor).collect(),
            sin: self.sin.iter().map(|s| s * factor).collect(),
        }
    }

    /// `f(z + shift)`.
    pub fn translate(&self, shift: f64) -> Self {
        let mut out = Self::zeros(self.n_modes());
        out.cos[0] = self.cos[0];
        for h in 1..=self.n_modes() {
            let (s, c) = (h as f64 * shift).sin_cos();
            let (a, b) = (self.cos[h], self.sin[h - 1]);
            // a cos(h(z+t)) + b sin(h(z+t))
            out.cos[h] = a * c + b * s;
            out.sin[h - 1] = b * c - a * s;
        }
        out
    }

    pub fn to_complex(&self) -> ComplexFourierVector {
        let n = self.n_modes();
        let mut modes = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        modes[n] = Complex64::new(self.cos[0], 0.0);
        for h in 1..=n {
            let (c, s) = (self.cos[h], self.sin[h - 1]);
            modes[n + h] = Complex64::new(0.5 * c, -0.5 * s);
            modes[n - h] = Complex64::new(0.5 * c, 0.5 * s);
        }
        ComplexFourierVector { n_modes: n, modes }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(
            self.n_modes(),
            other.n_modes(),
            "trigonometric series with different cutoffs"
        );
        Self {
            cos: self.cos.iter().zip(&other.cos).map(|(a, b)| op(*a, *b)).collect(),
            sin: self.sin.iter().zip(&other.sin).map(|(a, b)| op(*a, *b)).collect(),
        }
    }
}

impl Add for &TrigSeries {
    type Output = TrigSeries;
    fn add(self, rhs: Self) -> TrigSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TrigSeries {
    type Output = TrigSeries;
    fn sub(self, rhs: Self) -> TrigSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TrigSeries {
    type Output = TrigSeries;
    fn neg(self) -> TrigSeries {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &TrigSeries {
    type Output = TrigSeries;
    fn mul(self, rhs: f64) -> TrigSeries {
        self.scale(rhs)
    }
}

/// Coefficients of `e^{inz}`, `n = -N..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexFourierVector {
    n_modes: usize,
    modes: Vec<Complex64>,
}

impl ComplexFourierVector {
    pub fn zeros(n_modes: usize) -> Self {
        Self {
            n_modes,
            modes: vec![Complex64::new(0.0, 0.0); 2 * n_modes + 1],
        }
    }

    /// Wraps a coefficient slice ordered `n = -N..=N`.
    pub fn from_modes(modes: Vec<Complex64>) -> Result<Self> {
        if modes.len() % 2 == 0 {
            return Err(Error::Dimension {
                expected: modes.len() + 1,
                found: modes.len(),
            });
        }
        Ok(Self {
            n_modes: (modes.len() - 1) / 2,
            modes,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    /// Coefficient of `e^{inz}`; zero outside `-N..=N`.
    pub fn get(&self, n: i64) -> Complex64 {
        let idx = n + self.n_modes as i64;
        if idx < 0 || idx as usize >= self.modes.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.modes[idx as usize]
        }
    }

    pub fn set(&mut self, n: i64, value: Complex64) {
        let idx = (n + self.n_modes as i64) as usize;
        self.modes[idx] = value;
    }

    /// Wavenumbers `n` in storage order.
    pub fn wavenumbers(&self) -> impl Iterator<Item = i64> {
        let n = self.n_modes as i64;
        -n..=n
    }

    /// Applies `(∂_z + iμ)^order`, i.e. multiplies mode `n` by `(i(n+μ))^order`.
    pub fn shifted_deriv(&self, mu: f64, order: u32) -> Self {
        let modes = self
            .wavenumbers()
            .zip(&self.modes)
            .map(|(n, c)| c * Complex64::new(0.0, n as f64 + mu).powu(order))
            .collect();
        Self {
            n_modes: self.n_modes,
            modes,
        }
    }

    /// Truncated convolution, i.e. the product of the two functions with
    /// harmonics above the cutoff dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n_modes != other.n_modes {
            return Err(Error::Dimension {
                expected: self.n_modes,
                found: other.n_modes,
            });
        }
        let n = self.n_modes as i64;
        let mut out = Self::zeros(self.n_modes);
        for (p, fp) in self.wavenumbers().zip(&self.modes) {
            if fp.norm_sqr() == 0.0 {
                continue;
            }
            for (q, gq) in other.wavenumbers().zip(&other.modes) {
                let m = p + q;
                if m.abs() <= n {
                    out.modes[(m + n) as usize] += fp * gq;
                }
            }
        }
        Ok(out)
    }

    /// `Σ f_n conj(g_n)`, the normalised L² inner product.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.modes
            .iter()
            .zip(&other.modes)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n_modes: self.n_modes,
            modes: self.modes.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_modes, other.n_modes);
        Self {
            n_modes: self.n_modes,
            modes: self.modes.iter().zip(&other.modes).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn eval(&self, z: f64) -> Complex64 {
        self.wavenumbers()
            .zip(&self.modes)
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * z))
            .sum()
    }

    /// Largest violation of `modes[-n] = conj(modes[n])`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n_modes as i64;
        (0..=n)
            .map(|h| (self.get(-h) - self.get(h).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Real trigonometric series of the real part of the represented function.
    pub fn to_trig(&self) -> TrigSeries {
        let n = self.n_modes;
        let mut out = TrigSeries::zeros(n);
        out.cos[0] = self.modes[n].re;
        for h in 1..=n {
            let (p, m) = (self.modes[n + h], self.modes[n - h]);
            out.cos[h] = (p + m).re;
            out.sin[h - 1] = (Complex64::i() * (p - m)).re;
        }
        out
    }
}
