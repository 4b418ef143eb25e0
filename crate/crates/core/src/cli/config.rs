use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Example1,
    Example2,
    Example3,
    Measure,
    Verify,
}

/// Partially specified parameters from a config file or the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub dim: Option<usize>,
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    pub tau: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub hermitian: Option<bool>,
    pub matrix: Option<PathBuf>,
}

impl Overrides {
    /// `self` wins where both are set.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            dim: self.dim.or(base.dim),
            hbar: self.hbar.or(base.hbar),
            mass: self.mass.or(base.mass),
            omega: self.omega.or(base.omega),
            epsilon: self.epsilon.or(base.epsilon),
            eta: self.eta.or(base.eta),
            tau: self.tau.or(base.tau),
            dt: self.dt.or(base.dt),
            t_end: self.t_end.or(base.t_end),
            tol: self.tol.or(base.tol),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            hermitian: self.hermitian.or(base.hermitian),
            matrix: self.matrix.or(base.matrix),
        }
    }

    /// `key = value` lines; `#` starts a comment. Keys match the long flags,
    /// with `-` or `_` accepted.
    pub fn parse(text: &str) -> Result<Overrides> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let at = |e: String| Error::Parse(format!("line {}: {e}", lineno + 1));
            match key.as_str() {
                "dim" => o.dim = Some(parse_value(value).map_err(at)?),
                "hbar" => o.hbar = Some(parse_value(value).map_err(at)?),
                "mass" => o.mass = Some(parse_value(value).map_err(at)?),
                "omega" => o.omega = Some(parse_value(value).map_err(at)?),
                "epsilon" => o.epsilon = Some(parse_value(value).map_err(at)?),
                "eta" => o.eta = Some(parse_value(value).map_err(at)?),
                "tau" => o.tau = Some(parse_value(value).map_err(at)?),
                "dt" => o.dt = Some(parse_value(value).map_err(at)?),
                "t-end" => o.t_end = Some(parse_value(value).map_err(at)?),
                "tol" => o.tol = Some(parse_value(value).map_err(at)?),
                "seed" => o.seed = Some(parse_value(value).map_err(at)?),
                "out" => o.out = Some(PathBuf::from(value)),
                "hermitian" => o.hermitian = Some(parse_value(value).map_err(at)?),
                "matrix" => o.matrix = Some(PathBuf::from(value)),
                other => return Err(at(format!("unknown key `{other}`"))),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Overrides> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

fn parse_value<T: FromStr>(s: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| format!("invalid value `{s}`: {e}"))
}

/// Fully resolved, validated run parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub dim: usize,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub tau: f64,
    pub dt: f64,
    pub t_end: f64,
    pub tol: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub hermitian: bool,
    pub matrix: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for `command`. The cubic example runs in units with
    /// `omega = 1`; the gauge and driven examples use `omega = 0.5`.
    pub fn defaults(command: Command) -> Self {
        let omega = match command {
            Command::Example1 => 1.0,
            _ => 0.5,
        };
        Self {
            command,
            dim: 64,
            hbar: 1.0,
            mass: 1.0,
            omega,
            epsilon: 0.1,
            eta: 0.3,
            tau: 10.0,
            dt: 1e-3,
            t_end: 10.0,
            tol: 1e-8,
            seed: 20240229,
            out: None,
            hermitian: false,
            matrix: None,
        }
    }

    pub fn resolve(command: Command, o: Overrides) -> Result<Self> {
        let d = Self::defaults(command);
        let cfg = Self {
            command,
            dim: o.dim.unwrap_or(d.dim),
            hbar: o.hbar.unwrap_or(d.hbar),
            mass: o.mass.unwrap_or(d.mass),
            omega: o.omega.unwrap_or(d.omega),
            epsilon: o.epsilon.unwrap_or(d.epsilon),
            eta: o.eta.unwrap_or(d.eta),
            tau: o.tau.unwrap_or(d.tau),
            dt: o.dt.unwrap_or(d.dt),
            t_end: o.t_end.unwrap_or(d.t_end),
            tol: o.tol.unwrap_or(d.tol),
            seed: o.seed.unwrap_or(d.seed),
            out: o.out,
            hermitian: o.hermitian.unwrap_or(d.hermitian),
            matrix: o.matrix,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.dim < 8 {
            return bad(format!("dim must be at least 8, got {}", self.dim));
        }
        for (name, v) in [
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("omega", self.omega),
            ("tau", self.tau),
            ("dt", self.dt),
            ("t-end", self.t_end),
            ("tol", self.tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        for (name, v) in [("epsilon", self.epsilon), ("eta", self.eta)] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if self.dt >= self.t_end {
            return bad(format!("dt ({}) must be below t-end ({})", self.dt, self.t_end));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = Overrides::parse("# run\ndim = 32\nt_end=5 # short\nomega = 0.25\n").unwrap();
        let flags = Overrides {
            dim: Some(48),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Command::Example3, flags.over(file)).unwrap();
        assert_eq!(cfg.dim, 48);
        assert_eq!(cfg.t_end, 5.0);
        assert_eq!(cfg.omega, 0.25);
        assert_eq!(cfg.tau, 10.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Overrides::parse("dim 3").is_err());
        assert!(Overrides::parse("colour = red").is_err());
        assert!(Overrides::parse("dt = fast").is_err());
        let o = Overrides {
            dt: Some(20.0),
            ..Default::default()
        };
        assert!(matches!(RunConfig::resolve(Command::Example3, o), Err(Error::ConfigInvalid(_))));
        let o = Overrides {
            hbar: Some(-1.0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(Command::Example1, o).is_err());
    }

    #[test]
    fn per_example_defaults() {
        assert_eq!(RunConfig::defaults(Command::Example1).omega, 1.0);
        assert_eq!(RunConfig::defaults(Command::Example3).omega, 0.5);
    }
}
