//! Run configuration: defaults, config-file parsing, flag overrides.
//!
//! A run is described by a flat set of key=value settings. Resolution
//! is layered: built-in per-problem defaults, then an optional config
//! file, then command-line flags, each layer overriding the one below.
//! The resolved configuration is re-validated as a whole, so a file
//! and flags can only combine into states the solver accepts.
//!
//! `dump` emits the resolved configuration in the same key=value
//! format the parser reads, and parsing that dump reproduces the
//! configuration exactly (floats are printed in shortest round-trip
//! form).

use std::fmt;
use std::path::Path;

use fracham::ham::HamConfig;
use fracham::field::GridSpec;
use fracham::problems::{self, Problem};
use fracham::special::PsiFunction;

use crate::csvout::format_f64;

/// Everything a solver run needs, fully resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub alpha: f64,
    pub psi: String,
    pub a: f64,
    pub hbar: f64,
    pub m_terms: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub probe_x: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_samples: usize,
    pub output: String,
}

/// Optional per-field overrides collected from a config file or flags.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub problem: Option<String>,
    pub alpha: Option<f64>,
    pub psi: Option<String>,
    pub a: Option<f64>,
    pub hbar: Option<f64>,
    pub m_terms: Option<usize>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub n_points: Option<usize>,
    pub probe_x: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_samples: Option<usize>,
    pub output: Option<String>,
}

/// Configuration failure, reported on stderr and mapped to exit code 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

impl RunConfig {
    /// Built-in defaults for a problem/psi pair. The spatial window and
    /// probe point follow the problem; the time window starts at the
    /// lower terminal (0 for identity, 1 for the logarithmic weight,
    /// whose derivative blows up at the origin) and spans one unit.
    pub fn defaults(problem: &str, psi: &str) -> Result<RunConfig, ConfigError> {
        let (x_min, x_max, probe_x) = match problem {
            "diffusion" => (0.0, 1.0, 0.1),
            "gasdyn" => (0.0, 2.0, 0.2),
            "kdv" => (0.0, 2.0, 1.0),
            other => {
                return err(format!(
                    "unknown problem '{other}' (expected one of: diffusion, gasdyn, kdv)"
                ))
            }
        };
        let a = match psi {
            "identity" => 0.0,
            "log" => 1.0,
            other => return err(format!("unknown psi '{other}' (expected identity or log)")),
        };
        Ok(RunConfig {
            problem: problem.to_string(),
            alpha: 0.999,
            psi: psi.to_string(),
            a,
            hbar: -1.0,
            m_terms: 4,
            x_min,
            x_max,
            n_points: 401,
            probe_x,
            t_min: a,
            t_max: a + 1.0,
            t_samples: 101,
            output: "-".to_string(),
        })
    }

    /// Layer defaults, an optional config file, and flag overrides into
    /// a validated configuration.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<RunConfig, ConfigError> {
        let file_layer = match file {
            Some(path) => parse_config_file(path)?,
            None => Overrides::default(),
        };
        // The problem and psi choices decide which defaults apply, so
        // settle them first (flags beat the file beats the default).
        let problem = flags
            .problem
            .clone()
            .or_else(|| file_layer.problem.clone())
            .unwrap_or_else(|| "diffusion".to_string());
        let psi = flags
            .psi
            .clone()
            .or_else(|| file_layer.psi.clone())
            .unwrap_or_else(|| "identity".to_string());
        let mut cfg = RunConfig::defaults(&problem, &psi)?;
        // If the file moves the lower terminal but not the time window,
        // the window should follow the terminal; apply layers in order
        // with that coupling before explicit t settings land on top.
        for layer in [&file_layer, flags] {
            if let Some(a) = layer.a {
                cfg.a = a;
                cfg.t_min = a;
                cfg.t_max = a + 1.0;
            }
        }
        for layer in [&file_layer, flags] {
            cfg.apply(layer);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, layer: &Overrides) {
        if let Some(v) = layer.alpha {
            self.alpha = v;
        }
        if let Some(v) = layer.hbar {
            self.hbar = v;
        }
        if let Some(v) = layer.m_terms {
            self.m_terms = v;
        }
        if let Some(v) = layer.x_min {
            self.x_min = v;
        }
        if let Some(v) = layer.x_max {
            self.x_max = v;
        }
        if let Some(v) = layer.n_points {
            self.n_points = v;
        }
        if let Some(v) = layer.probe_x {
            self.probe_x = v;
        }
        if let Some(v) = layer.t_min {
            self.t_min = v;
        }
        if let Some(v) = layer.t_max {
            self.t_max = v;
        }
        if let Some(v) = layer.t_samples {
            self.t_samples = v;
        }
        if let Some(v) = &layer.output {
            self.output = v.clone();
        }
    }

    /// Check the configuration as a whole against the solver's rules.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.problem()?;
        // Grid and solver parameters get the library's own validation.
        let grid = self.grid()?;
        self.ham_config(self.alpha)?;
        if !self.probe_x.is_finite() || self.probe_x < self.x_min || self.probe_x > self.x_max {
            return err(format!(
                "probe_x = {} lies outside the grid [{}, {}]",
                self.probe_x, self.x_min, self.x_max
            ));
        }
        let _ = grid;
        if !self.t_min.is_finite() || !self.t_max.is_finite() || self.t_max < self.t_min {
            return err(format!(
                "time window [{}, {}] is not a valid interval",
                self.t_min, self.t_max
            ));
        }
        if self.t_min < self.a {
            return err(format!(
                "t_min = {} precedes the lower terminal a = {}",
                self.t_min, self.a
            ));
        }
        if self.t_samples == 0 {
            return err("t_samples must be at least 1");
        }
        if self.t_samples == 1 && self.t_max != self.t_min {
            return err("t_samples = 1 requires t_min == t_max");
        }
        if self.output.is_empty() {
            return err("output path is empty");
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<&'static dyn Problem, ConfigError> {
        problems::by_name(&self.problem).ok_or_else(|| {
            ConfigError(format!(
                "unknown problem '{}' (expected one of: diffusion, gasdyn, kdv)",
                self.problem
            ))
        })
    }

    pub fn psi_function(&self) -> Result<PsiFunction, ConfigError> {
        match self.psi.as_str() {
            "identity" => Ok(PsiFunction::identity()),
            "log" => Ok(PsiFunction::logarithm()),
            other => err(format!("unknown psi '{other}' (expected identity or log)")),
        }
    }

    pub fn grid(&self) -> Result<GridSpec, ConfigError> {
        GridSpec::new(self.x_min, self.x_max, self.n_points)
            .map_err(|e| ConfigError(e.to_string()))
    }

    /// Solver configuration at the given fractional order (the alpha
    /// table command reuses one RunConfig across several orders).
    pub fn ham_config(&self, alpha: f64) -> Result<HamConfig, ConfigError> {
        let psi = self.psi_function()?;
        let grid = self.grid()?;
        HamConfig::new(alpha, psi, self.a, self.hbar, self.m_terms, grid)
            .map_err(|e| ConfigError(e.to_string()))
    }

    /// Evaluation times: `t_samples` points spread evenly over the
    /// window, degenerating to the single point `t_min`.
    pub fn t_values(&self) -> Vec<f64> {
        if self.t_samples == 1 {
            return vec![self.t_min];
        }
        let n = self.t_samples;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.t_max
                } else {
                    self.t_min + (self.t_max - self.t_min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    /// Serialize in the key=value form `parse_config_file` reads.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("problem", self.problem.clone());
        kv("alpha", format_f64(self.alpha));
        kv("psi", self.psi.clone());
        kv("a", format_f64(self.a));
        kv("hbar", format_f64(self.hbar));
        kv("m_terms", self.m_terms.to_string());
        kv("x_min", format_f64(self.x_min));
        kv("x_max", format_f64(self.x_max));
        kv("n_points", self.n_points.to_string());
        kv("probe_x", format_f64(self.probe_x));
        kv("t_min", format_f64(self.t_min));
        kv("t_max", format_f64(self.t_max));
        kv("t_samples", self.t_samples.to_string());
        kv("output", self.output.clone());
        out
    }
}

/// Parse a flat key=value config file. Blank lines and lines starting
/// with '#' are skipped; keys may appear once each.
pub fn parse_config_file(path: &Path) -> Result<Overrides, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text).map_err(|msg| ConfigError(format!("{}: {msg}", path.display())))
}

fn parse_config_text(text: &str) -> Result<Overrides, String> {
    let mut over = Overrides::default();
    let mut seen: Vec<String> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|s| s == key) {
            return Err(format!("line {}: duplicate key '{key}'", lineno + 1));
        }
        let parse_f64 = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| format!("line {}: '{v}' is not a number", lineno + 1))
        };
        let parse_usize = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| format!("line {}: '{v}' is not a non-negative integer", lineno + 1))
        };
        match key {
            "problem" => over.problem = Some(value.to_string()),
            "alpha" => over.alpha = Some(parse_f64(value)?),
            "psi" => over.psi = Some(value.to_string()),
            "a" => over.a = Some(parse_f64(value)?),
            "hbar" => over.hbar = Some(parse_f64(value)?),
            "m_terms" => over.m_terms = Some(parse_usize(value)?),
            "x_min" => over.x_min = Some(parse_f64(value)?),
            "x_max" => over.x_max = Some(parse_f64(value)?),
            "n_points" => over.n_points = Some(parse_usize(value)?),
            "probe_x" => over.probe_x = Some(parse_f64(value)?),
            "t_min" => over.t_min = Some(parse_f64(value)?),
            "t_max" => over.t_max = Some(parse_f64(value)?),
            "t_samples" => over.t_samples = Some(parse_usize(value)?),
            "output" => over.output = Some(value.to_string()),
            other => return Err(format!("line {}: unknown key '{other}'", lineno + 1)),
        }
        seen.push(key.to_string());
    }
    Ok(over)
}
