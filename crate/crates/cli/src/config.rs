//! Run configuration: defaults, a flat `key = value` file format, and flag overrides.

use std::fmt;
use std::str::FromStr;

use mwstab_core::stokes::{ModelTag, DEFAULT_TOL};
use mwstab_core::DEFAULT_MODES;

use crate::format::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelName {
    A,
    B,
}

impl FromStr for ModelName {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(ModelName::A),
            "B" | "b" => Ok(ModelName::B),
            other => Err(bad(format!("unknown model `{other}` (expected A or B)"))),
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelName::A => "A",
            ModelName::B => "B",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(bad(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// `start:stop:count`, inclusive at both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MuGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl MuGrid {
    pub fn points(&self) -> Vec<f64> {
        mwstab_core::bloch::uniform_grid(self.start, self.stop, self.count)
    }
}

impl FromStr for MuGrid {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(bad(format!("mu grid `{s}` is not start:stop:count")));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| bad(format!("mu grid `{s}`: {e}")));
        Ok(MuGrid {
            start: num(start)?,
            stop: num(stop)?,
            count: count.trim().parse().map_err(|e| bad(format!("mu grid `{s}`: {e}")))?,
        })
    }
}

impl fmt::Display for MuGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", fmt_f64(self.start), fmt_f64(self.stop), self.count)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ModelName,
    pub k: f64,
    pub a: f64,
    pub gamma: f64,
    pub n_modes: usize,
    pub mu_grid: MuGrid,
    pub tol: f64,
    /// Empty for standard output.
    pub out_path: String,
    pub format: Format,
}

impl RunConfig {
    pub fn with_grid(mu_grid: MuGrid) -> Self {
        RunConfig {
            model: ModelName::A,
            k: 1.0,
            a: 0.01,
            gamma: 0.0,
            n_modes: DEFAULT_MODES,
            mu_grid,
            tol: DEFAULT_TOL,
            out_path: String::new(),
            format: Format::Csv,
        }
    }

    pub fn model_tag(&self) -> ModelTag {
        match self.model {
            ModelName::A => ModelTag::A,
            ModelName::B => ModelTag::B { gamma: self.gamma },
        }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        let float = |v: &str| v.parse::<f64>().map_err(|e| bad(format!("`{key}`: {e}")));
        match key.trim() {
            "model" => self.model = value.parse()?,
            "k" => self.k = float(value)?,
            "a" => self.a = float(value)?,
            "gamma" => self.gamma = float(value)?,
            "n_modes" | "modes" => {
                self.n_modes = value.parse().map_err(|e| bad(format!("`{key}`: {e}")))?
            }
            "mu_grid" => self.mu_grid = value.parse()?,
            "tol" => self.tol = float(value)?,
            "out_path" | "out" => self.out_path = value.to_string(),
            "format" => self.format = value.parse()?,
            other => return Err(bad(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Overlays the settings of a config file; `#` starts a comment.
    pub fn merge_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key, value)
                .map_err(|e| bad(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format!(
            "model = {}\nk = {}\na = {}\ngamma = {}\nn_modes = {}\nmu_grid = {}\ntol = {}\nout_path = {}\nformat = {}\n",
            self.model,
            fmt_f64(self.k),
            fmt_f64(self.a),
            fmt_f64(self.gamma),
            self.n_modes,
            self.mu_grid,
            fmt_f64(self.tol),
            self.out_path,
            self.format
        )
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let g = &self.mu_grid;
        if g.count < 2 {
            return Err(bad(format!("mu grid needs at least 2 points, got {}", g.count)));
        }
        if !(g.start < g.stop) {
            return Err(bad(format!("mu grid start {} must be below stop {}", g.start, g.stop)));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(bad(format!("k must be positive, got {}", self.k)));
        }
        if !self.a.is_finite() || !self.gamma.is_finite() {
            return Err(bad("a and gamma must be finite"));
        }
        if self.n_modes < 3 {
            return Err(bad(format!("need at least 3 modes, got {}", self.n_modes)));
        }
        if !(self.tol > 0.0) {
            return Err(bad(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut cfg = RunConfig::with_grid(MuGrid { start: 0.001, stop: 0.05, count: 50 });
        cfg.model = ModelName::B;
        cfg.gamma = 1.0 / 3.0;
        cfg.k = 0.1 + 0.2;
        cfg.out_path = "runs/out.csv".into();
        cfg.format = Format::Json;
        let mut back = RunConfig::with_grid(MuGrid { start: 0.0, stop: 1.0, count: 2 });
        back.merge_text(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_input() {
        let mut cfg = RunConfig::with_grid(MuGrid { start: 0.0, stop: 0.5, count: 11 });
        assert!(cfg.merge_text("model = C").is_err());
        assert!(cfg.merge_text("speed = 1").is_err());
        assert!(cfg.merge_text("k 1").is_err());
        assert!("0:1".parse::<MuGrid>().is_err());
        cfg.mu_grid = MuGrid { start: 0.5, stop: 0.0, count: 11 };
        assert!(cfg.validate().is_err());
        cfg.mu_grid = MuGrid { start: 0.0, stop: 0.5, count: 1 };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let mut cfg = RunConfig::with_grid(MuGrid { start: 0.0, stop: 0.5, count: 11 });
        cfg.merge_text("# sweep\n\nmodel = B  # extended\ngamma = 3\nmu_grid = 0:0.1:5\n").unwrap();
        assert_eq!(cfg.model_tag(), ModelTag::B { gamma: 3.0 });
        assert_eq!(cfg.mu_grid.points().len(), 5);
    }
}
