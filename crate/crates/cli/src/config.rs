use std::fs;
use std::path::{Path, PathBuf};

use cdpw_core::cdpw::{QuadConfig, Routing, TauConfig};
use cdpw_core::f22::Thresholds;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "CDPW_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// Settings shared by every subcommand. Read from a key=value file, then
/// overridden by flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Pairwise spread allowed between methods during validation.
    pub rel_tol: f64,
    pub symmetry_tol: f64,
    pub prop1_tol: f64,
    pub coeff_tol: f64,
    /// Panels available to one quadrature pass.
    pub quadrature_budget: usize,
    pub routing: Routing,
    pub f22: Thresholds,
    pub output_format: Format,
    pub csv_precision: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rel_tol: 1e-9,
            symmetry_tol: 1e-12,
            prop1_tol: 1e-11,
            coeff_tol: 1e-12,
            quadrature_budget: QuadConfig::default().max_panels,
            routing: Routing::default(),
            f22: Thresholds::default(),
            output_format: Format::Csv,
            csv_precision: 17,
            seed: 0,
        }
    }
}

pub const KEYS: [&str; 14] = [
    "rel_tol",
    "symmetry_tol",
    "prop1_tol",
    "coeff_tol",
    "quadrature_budget",
    "kappa_min_kr",
    "sum1f1_max_kr",
    "sum1f1_max_l",
    "form_a_max",
    "series_max",
    "asymptotic_min",
    "output_format",
    "csv_precision",
    "seed",
];

impl RunConfig {
    /// Config from `path`, else from $CDPW_CONFIG, else defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let path: Option<PathBuf> = match path {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(CONFIG_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
        };
        let mut cfg = RunConfig::default();
        if let Some(p) = path {
            let text = fs::read_to_string(&p)
                .map_err(|e| CliError::Args(format!("cannot read config {}: {e}", p.display())))?;
            cfg.apply_text(&text)
                .map_err(|e| CliError::Args(format!("{}: {e}", p.display())))?;
        }
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "rel_tol" => self.rel_tol = tol(key, value)?,
            "symmetry_tol" => self.symmetry_tol = tol(key, value)?,
            "prop1_tol" => self.prop1_tol = tol(key, value)?,
            "coeff_tol" => self.coeff_tol = tol(key, value)?,
            "quadrature_budget" => {
                let b = num::<usize>(key, value)?;
                if b == 0 {
                    return Err("quadrature_budget must be positive".into());
                }
                self.quadrature_budget = b;
            }
            "kappa_min_kr" => self.routing.kappa_min_kr = threshold(key, value)?,
            "sum1f1_max_kr" => self.routing.sum1f1_max_kr = threshold(key, value)?,
            "sum1f1_max_l" => self.routing.sum1f1_max_l = num(key, value)?,
            "form_a_max" => self.f22.form_a_max = threshold(key, value)?,
            "series_max" => self.f22.series_max = threshold(key, value)?,
            "asymptotic_min" => self.f22.asymptotic_min = threshold(key, value)?,
            "output_format" => {
                self.output_format = Format::parse(value)
                    .ok_or_else(|| format!("output_format must be csv or json, got {value:?}"))?
            }
            "csv_precision" => {
                let p = num::<usize>(key, value)?;
                if !(1..=17).contains(&p) {
                    return Err(format!("csv_precision must lie in 1..=17, got {p}"));
                }
                self.csv_precision = p;
            }
            "seed" => self.seed = num(key, value)?,
            _ => return Err(format!("unknown key {key:?} (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    pub fn tau_config(&self) -> TauConfig {
        let mut c = TauConfig {
            routing: self.routing,
            f22: self.f22,
            ..TauConfig::default()
        };
        c.quad.max_panels = self.quadrature_budget;
        c
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("{key}: cannot parse {value:?}"))
}

fn threshold(key: &str, value: &str) -> Result<f64, String> {
    let v: f64 = num(key, value)?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!(
            "{key} must be finite and non-negative, got {value}"
        ))
    }
}

fn tol(key: &str, value: &str) -> Result<f64, String> {
    let v: f64 = num(key, value)?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{key} must be a positive tolerance, got {value}"))
    }
}
