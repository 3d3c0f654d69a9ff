//! Run configuration: flat `key = value` text with `model.`, `grid.`,
//! `quad.` and `cmd.` prefixes. `#` starts a comment line.
//!
//! Every key has a resolved value after loading (defaults filled in), so a
//! CSV header listing [`RunConfig::entries`] is enough to rerun a command.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fano::PiGrid;
use crate::model::{ModelParams, PhysicalConstants};
use crate::oracle::DiscretizationRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn nodes(&self) -> Vec<f64> {
        linear_or_log(self.min, self.max, self.points, self.spacing)
    }

    /// A coarser grid over the same range.
    pub fn coarse(&self, points: usize) -> Vec<f64> {
        linear_or_log(self.min, self.max, points, self.spacing)
    }
}

fn linear_or_log(min: f64, max: f64, n: usize, spacing: Spacing) -> Vec<f64> {
    if n == 1 {
        return vec![min];
    }
    let t = |i: usize| i as f64 / (n - 1) as f64;
    match spacing {
        Spacing::Linear => (0..n).map(|i| min + (max - min) * t(i)).collect(),
        Spacing::Log => (0..n).map(|i| min * (max / min).powf(t(i))).collect(),
    }
}

/// Options read by individual commands.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOptions {
    /// Bare frequencies for `spectrum`, as multiples of `Ω_T`.
    pub sweep: Vec<f64>,
    pub modes: Vec<usize>,
    pub rule: DiscretizationRule,
    /// Frequency at which `oracle-compare` probes field observables.
    pub probe: f64,
    pub pair_g: Vec<f64>,
    pub pair_mass: f64,
    pub pair_omega0: f64,
    pub chi_step: f64,
    pub chi_width: f64,
    pub chi_tol: f64,
    pub chi_nu: f64,
    pub chi_nu_prime: f64,
    pub coherence_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub pi_grid: PiGrid,
    /// Allowed `|∫π − 1|`.
    pub norm_tol: f64,
    pub cmd: CommandOptions,
    /// Resolved `key → value` pairs, sorted.
    pub entries: BTreeMap<String, String>,
}

const MODEL_KEYS: [&str; 9] = [
    "model.units",
    "model.omega0",
    "model.omega_c",
    "model.A",
    "model.charge",
    "model.mass",
    "model.epsilon0",
    "model.c",
    "model.hbar",
];
const OTHER_KEYS: [&str; 21] = [
    "grid.min",
    "grid.max",
    "grid.points",
    "grid.spacing",
    "quad.order",
    "quad.max_width",
    "quad.reach",
    "quad.norm_tol",
    "cmd.sweep",
    "cmd.modes",
    "cmd.rule",
    "cmd.probe",
    "cmd.pair_g",
    "cmd.pair_mass",
    "cmd.pair_omega0",
    "cmd.chi_step",
    "cmd.chi_width",
    "cmd.chi_tol",
    "cmd.chi_nu",
    "cmd.chi_nu_prime",
    "cmd.coherence_points",
];

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !MODEL_KEYS.contains(&k) && !OTHER_KEYS.contains(&k) {
            return Err(Error::Config(format!("line {}: unknown key '{k}'", n + 1)));
        }
        if v.is_empty() {
            return Err(Error::Config(format!("line {}: empty value for '{k}'", n + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key '{k}'", n + 1)));
        }
    }
    Ok(map)
}

struct Reader {
    map: BTreeMap<String, String>,
}

impl Reader {
    fn raw(&mut self, key: &str, default: Option<String>) -> Result<String> {
        match (self.map.get(key), default) {
            (Some(v), _) => Ok(v.clone()),
            (None, Some(d)) => {
                self.map.insert(key.to_string(), d.clone());
                Ok(d)
            }
            (None, None) => Err(Error::Config(format!("missing required key '{key}'"))),
        }
    }

    fn get<T: FromStr>(&mut self, key: &str, default: Option<String>) -> Result<T> {
        let v = self.raw(key, default)?;
        v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
    }

    fn list<T: FromStr>(&mut self, key: &str, default: &str) -> Result<Vec<T>> {
        let v = self.raw(key, Some(default.to_string()))?;
        v.split(',')
            .map(|s| s.trim().parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{s}'"))))
            .collect()
    }

    fn float(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        let x: f64 = self.get(key, default.map(fmt_default))?;
        if !x.is_finite() {
            return Err(Error::Config(format!("{key} must be finite")));
        }
        Ok(x)
    }

    fn positive(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        let x = self.float(key, default)?;
        if x <= 0.0 {
            return Err(Error::Config(format!("{key} must be positive, got {x}")));
        }
        Ok(x)
    }
}

fn fmt_default(x: f64) -> String {
    format!("{x:e}")
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut r = Reader { map: parse_pairs(text)? };
        let units = r.raw("model.units", Some("reduced".into()))?;
        let omega0 = r.positive("model.omega0", None)?;
        let omega_c = r.positive("model.omega_c", None)?;
        let params = match units.as_str() {
            "reduced" => {
                for k in ["model.charge", "model.mass", "model.epsilon0", "model.c", "model.hbar"] {
                    if r.map.contains_key(k) {
                        return Err(Error::Config(format!("{k} only applies to physical units")));
                    }
                }
                let a = r.float("model.A", None)?;
                ModelParams::reduced(omega0, omega_c, a)
            }
            "physical" => {
                if r.map.contains_key("model.A") {
                    return Err(Error::Config("model.A only applies to reduced units".into()));
                }
                let e = PhysicalConstants::electron();
                let constants = PhysicalConstants {
                    charge: r.positive("model.charge", Some(e.charge))?,
                    mass: r.positive("model.mass", Some(e.mass))?,
                    epsilon0: r.positive("model.epsilon0", Some(e.epsilon0))?,
                    c: r.positive("model.c", Some(e.c))?,
                    hbar: r.positive("model.hbar", Some(e.hbar))?,
                };
                ModelParams::physical(omega0, omega_c, constants)
            }
            other => {
                return Err(Error::Config(format!("model.units must be reduced or physical, got '{other}'")))
            }
        }
        .map_err(|e| Error::Config(e.to_string()))?;

        let spacing = match r.raw("grid.spacing", Some("linear".into()))?.as_str() {
            "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            other => return Err(Error::Config(format!("grid.spacing must be linear or log, got '{other}'"))),
        };
        let grid = GridSpec {
            min: r.positive("grid.min", Some(0.01 * omega_c))?,
            max: r.positive("grid.max", Some(10.0 * omega_c))?,
            points: r.get("grid.points", Some("200".into()))?,
            spacing,
        };
        if grid.points == 0 || grid.min >= grid.max {
            return Err(Error::Config("grid needs points >= 1 and min < max".into()));
        }

        let pi_grid = PiGrid {
            order: r.get("quad.order", Some("16".into()))?,
            max_width: r.positive("quad.max_width", Some(0.05))?,
            reach: r.positive("quad.reach", Some(50.0))?,
        };
        if !(2..=64).contains(&pi_grid.order) {
            return Err(Error::Config("quad.order must lie in 2..=64".into()));
        }
        let norm_tol = r.positive("quad.norm_tol", Some(1e-6))?;

        let rule: DiscretizationRule = r
            .raw("cmd.rule", Some("linear-panel".into()))?
            .parse()
            .map_err(|e: Error| Error::Config(e.to_string()))?;
        let cmd = CommandOptions {
            sweep: r.list("cmd.sweep", "1.5,3,10")?,
            modes: r.list("cmd.modes", "500,1000,2000,4000")?,
            rule,
            probe: r.positive("cmd.probe", Some(omega_c))?,
            pair_g: r.list("cmd.pair_g", "0,0.3,0.6,0.9")?,
            pair_mass: r.positive("cmd.pair_mass", Some(1.0))?,
            pair_omega0: r.positive("cmd.pair_omega0", Some(1.0))?,
            chi_step: r.positive("cmd.chi_step", Some(1e-3))?,
            chi_width: r.positive("cmd.chi_width", Some(0.02 * omega_c))?,
            chi_tol: r.positive("cmd.chi_tol", Some(1e-5))?,
            chi_nu: r.positive("cmd.chi_nu", Some(0.7 * omega_c))?,
            chi_nu_prime: r.positive("cmd.chi_nu_prime", Some(1.1 * omega_c))?,
            coherence_points: r.get("cmd.coherence_points", Some("20".into()))?,
        };
        if cmd.sweep.iter().any(|&k| !(k > 1.0 && k.is_finite())) {
            return Err(Error::Config("cmd.sweep entries must exceed 1".into()));
        }
        if cmd.modes.iter().any(|&m| m < 2) {
            return Err(Error::Config("cmd.modes entries must be at least 2".into()));
        }
        if cmd.coherence_points == 0 {
            return Err(Error::Config("cmd.coherence_points must be positive".into()));
        }
        Ok(Self { params, grid, pi_grid, norm_tol, cmd, entries: r.map })
    }
}
