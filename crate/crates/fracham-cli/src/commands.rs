//! Subcommand implementations. Each command resolves to a CSV document
//! returned as text; the caller decides where it goes.

use fracham::ham::{assemble, run_ham};
use fracham::problems;

use crate::config::{ConfigError, RunConfig};
use crate::csvout::{format_f64, Csv};

/// A failed command, carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or usage; exit code 1.
    Config(String),
    /// The solver or a special function failed numerically; exit code 2.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> CliError {
        CliError::Config(e.0)
    }
}

/// A library error raised after the configuration validated is a
/// runtime numerical failure (non-convergent series, overflow, ...).
fn run_err(e: fracham::Error) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Solve one configuration and tabulate the assembled series at the
/// probe point over the time window, next to the reference solution.
pub fn cmd_solve(cfg: &RunConfig) -> Result<String, CliError> {
    let problem = cfg.problem()?;
    let ham_cfg = cfg.ham_config(cfg.alpha)?;
    let state = run_ham(problem, &ham_cfg).map_err(run_err)?;
    let sum = assemble(&state, cfg.m_terms).map_err(run_err)?;
    let mut csv = Csv::with_header(&[
        "t".to_string(),
        "ham_value".to_string(),
        "reference_value".to_string(),
        "abs_error".to_string(),
    ]);
    for t in cfg.t_values() {
        let ham = sum.eval(cfg.probe_x, t).map_err(run_err)?;
        let reference = problem
            .reference(cfg.probe_x, t, &ham_cfg)
            .map_err(run_err)?;
        let abs_error = reference.map(|r| (ham - r).abs());
        csv.push_row(&[Some(t), Some(ham), reference, abs_error]);
    }
    Ok(csv.into_text())
}

/// One solver run per convergence-control value; columns share the
/// reference curve of the base configuration.
pub fn cmd_hsweep(cfg: &RunConfig, hbars: &[f64]) -> Result<String, CliError> {
    if hbars.is_empty() {
        return Err(CliError::Config("hbar list is empty".to_string()));
    }
    let problem = cfg.problem()?;
    let base = cfg.ham_config(cfg.alpha)?;
    let mut header = vec!["t".to_string(), "reference_value".to_string()];
    header.extend(
        hbars
            .iter()
            .map(|h| format!("ham[hbar={}]", format_f64(*h))),
    );
    let mut sums = Vec::with_capacity(hbars.len());
    for &hbar in hbars {
        let cfg_h = base
            .with_hbar(hbar)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let state = run_ham(problem, &cfg_h).map_err(run_err)?;
        sums.push(assemble(&state, cfg.m_terms).map_err(run_err)?);
    }
    let mut csv = Csv::with_header(&header);
    for t in cfg.t_values() {
        let mut row = Vec::with_capacity(hbars.len() + 2);
        row.push(Some(t));
        row.push(
            problem
                .reference(cfg.probe_x, t, &base)
                .map_err(run_err)?,
        );
        for sum in &sums {
            row.push(Some(sum.eval(cfg.probe_x, t).map_err(run_err)?));
        }
        csv.push_row(&row);
    }
    Ok(csv.into_text())
}

/// Tabulate the reference solution at the probe point for several
/// fractional orders; no solver run is involved. An empty order list
/// produces a header-only table.
pub fn cmd_alpha_table(cfg: &RunConfig, alphas: &[f64]) -> Result<String, CliError> {
    let problem = cfg.problem()?;
    let mut header = vec!["t".to_string()];
    header.extend(
        alphas
            .iter()
            .map(|a| format!("ref[alpha={}]", format_f64(*a))),
    );
    let mut csv = Csv::with_header(&header);
    if alphas.is_empty() {
        return Ok(csv.into_text());
    }
    let configs = alphas
        .iter()
        .map(|&a| cfg.ham_config(a).map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()?;
    for t in cfg.t_values() {
        let mut row = Vec::with_capacity(alphas.len() + 1);
        row.push(Some(t));
        for cfg_a in &configs {
            row.push(
                problem
                    .reference(cfg.probe_x, t, cfg_a)
                    .map_err(run_err)?,
            );
        }
        csv.push_row(&row);
    }
    Ok(csv.into_text())
}

fn escape_json(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Describe the built-in problems, one per line; `machine` switches to
/// one JSON record per line. Every problem runs under both built-in
/// time warps (the solver is generic over psi), so the listing states
/// that capability alongside the reference availability.
pub fn cmd_list(machine: bool) -> String {
    let mut out = String::new();
    for p in problems::all() {
        if machine {
            out.push_str(&format!(
                "{{\"name\":\"{}\",\"psi\":[\"identity\",\"log\"],\"reference\":\"{}\",\"description\":\"{}\"}}\n",
                escape_json(p.name()),
                escape_json(&p.reference_kind().to_string()),
                escape_json(p.description()),
            ));
        } else {
            out.push_str(&format!(
                "{:<10} {} (psi: identity, log; reference: {})\n",
                p.name(),
                p.description(),
                p.reference_kind()
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_cell(cell: &str) -> f64 {
        cell.parse::<f64>().unwrap()
    }

    #[test]
    fn solve_rows_carry_recomputable_errors() {
        let mut cfg = RunConfig::defaults("diffusion", "identity").unwrap();
        cfg.m_terms = 3;
        cfg.n_points = 101;
        cfg.t_samples = 6;
        cfg.t_max = 0.25;
        let text = cmd_solve(&cfg).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,ham_value,reference_value,abs_error");
        assert_eq!(lines.len(), 7);
        for line in &lines[1..] {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 4);
            let (ham, reference, abs) = (
                parse_cell(cells[1]),
                parse_cell(cells[2]),
                parse_cell(cells[3]),
            );
            // The error column reproduces exactly from the other two,
            // because every cell round-trips through its text.
            assert_eq!(abs, (ham - reference).abs());
        }
        // At t = a the series collapses to the initial condition.
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(parse_cell(first[0]), 0.0);
        assert!((parse_cell(first[1]) - (std::f64::consts::PI * 0.1).cos()).abs() < 1e-15);
    }

    #[test]
    fn hsweep_single_value_matches_solve() {
        let mut cfg = RunConfig::defaults("gasdyn", "identity").unwrap();
        cfg.m_terms = 3;
        cfg.n_points = 101;
        cfg.t_samples = 5;
        let solve = cmd_solve(&cfg).unwrap();
        let sweep = cmd_hsweep(&cfg, &[-1.0]).unwrap();
        let sweep_lines: Vec<&str> = sweep.lines().collect();
        assert_eq!(sweep_lines[0], "t,reference_value,ham[hbar=-1]");
        for (ls, lw) in solve.lines().skip(1).zip(sweep_lines.iter().skip(1)) {
            let s: Vec<&str> = ls.split(',').collect();
            let w: Vec<&str> = lw.split(',').collect();
            assert_eq!(s[0], w[0]);
            assert_eq!(s[1], w[2]); // the ham column is byte-identical
            assert_eq!(s[2], w[1]);
        }
    }

    #[test]
    fn alpha_table_headers_and_empty_list() {
        let mut cfg = RunConfig::defaults("kdv", "identity").unwrap();
        cfg.t_samples = 3;
        let text = cmd_alpha_table(&cfg, &[0.999, 0.5]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,ref[alpha=0.999],ref[alpha=0.5]");
        assert_eq!(lines.len(), 4);
        assert_eq!(cmd_alpha_table(&cfg, &[]).unwrap(), "t\n");
    }

    #[test]
    fn alpha_table_rejects_orders_outside_the_unit_interval() {
        let cfg = RunConfig::defaults("diffusion", "identity").unwrap();
        match cmd_alpha_table(&cfg, &[0.5, 1.5]) {
            Err(CliError::Config(_)) => {}
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn hsweep_rejects_empty_and_zero_hbar() {
        let cfg = RunConfig::defaults("diffusion", "identity").unwrap();
        assert!(matches!(cmd_hsweep(&cfg, &[]), Err(CliError::Config(_))));
        assert!(matches!(
            cmd_hsweep(&cfg, &[0.0]),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn list_names_every_problem() {
        let plain = cmd_list(false);
        for name in ["diffusion", "gasdyn", "kdv"] {
            assert!(plain.contains(name));
        }
        let machine = cmd_list(true);
        assert_eq!(machine.lines().count(), 3);
        for line in machine.lines() {
            assert!(line.starts_with("{\"name\":\""));
            assert!(line.ends_with("\"}"));
        }
    }

    #[test]
    fn numerical_failures_surface_as_exit_two_errors() {
        // A time window far past the series' reach overflows the
        // Mittag-Leffler sum in the reference column.
        let mut cfg = RunConfig::defaults("gasdyn", "identity").unwrap();
        cfg.m_terms = 1;
        cfg.n_points = 101;
        cfg.t_min = 0.0;
        cfg.t_max = 1e9;
        cfg.t_samples = 2;
        match cmd_solve(&cfg) {
            Err(e @ CliError::Numerical(_)) => assert_eq!(e.exit_code(), 2),
            other => panic!("expected a numerical failure, got {other:?}"),
        }
    }
}
