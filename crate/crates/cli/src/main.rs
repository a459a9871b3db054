//! `cdpw`: evaluation, validation and table generation for Coulomb-distorted
//! plane waves.

mod commands;
mod config;
mod error;
mod table;
mod validate;

use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cdpw_core::cdpw::{Sign, TauMethod};
use cdpw_core::ComplexScalar;

use crate::commands::Output;
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::validate::{Check, Grid};

#[derive(Parser, Debug)]
#[command(
    name = "cdpw",
    version,
    about = "Coulomb-distorted plane waves and their partial waves"
)]
struct Cli {
    /// Output format (overrides output_format in the config).
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,
    /// key=value config file; falls back to $CDPW_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized grids (overrides seed in the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone, Copy)]
struct Wave {
    #[arg(long, value_parser = parse_sign, default_value = "post")]
    sign: Sign,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// One partial-wave component τ_l.
    Eval {
        #[command(flatten)]
        wave: Wave,
        #[arg(long)]
        l: usize,
        #[arg(long, allow_negative_numbers = true)]
        kr: f64,
        #[arg(long, value_parser = parse_method, default_value = "auto")]
        method: TauMethod,
        /// Fixed truncation order for the asymptotic method.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Cross-checks between representations over a grid.
    Validate {
        /// Comma-separated subset of f22,tau,symmetry,prop1,coeffs.
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        only: Vec<Check>,
        /// Random grid with this many points.
        #[arg(long, conflicts_with = "a")]
        random: Option<usize>,
        /// Single parameter a, given as RE or RE,IM.
        #[arg(long, value_parser = parse_complex, allow_negative_numbers = true)]
        a: Option<ComplexScalar>,
    },
    /// Asymptotic coefficients d_n by recursion and in closed form.
    Coeffs {
        #[command(flatten)]
        wave: Wave,
        #[arg(long)]
        l: usize,
        /// Largest n (at most 64).
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Exact τ against the large-kr expansion.
    AsympCompare {
        #[command(flatten)]
        wave: Wave,
        #[arg(long)]
        l: usize,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        kr: Vec<f64>,
        /// Truncation order; optimal truncation when absent.
        #[arg(long)]
        n: Option<usize>,
    },
    /// The wave against its partial-wave sum.
    Reconstruct {
        #[command(flatten)]
        wave: Wave,
        #[arg(long)]
        kr: f64,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "-0.9,-0.5,0,0.5,0.9"
        )]
        cos: Vec<f64>,
        #[arg(long, default_value_t = 60)]
        lmax: usize,
    },
    /// Angular functional against its two-direction leading form.
    Asy3d {
        #[command(flatten)]
        wave: Wave,
        /// Legendre coefficients c_0,c_1,... of the test function.
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "1"
        )]
        f: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        kr: Vec<f64>,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    Format::parse(s).ok_or_else(|| format!("expected csv or json, got {s:?}"))
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s.to_ascii_lowercase().as_str() {
        "post" | "+" => Ok(Sign::Post),
        "prior" | "-" => Ok(Sign::Prior),
        _ => Err(format!("expected post or prior, got {s:?}")),
    }
}

fn parse_method(s: &str) -> Result<TauMethod, String> {
    TauMethod::parse(s).ok_or_else(|| {
        format!(
            "unknown method {s:?} (hyp2f2, incgamma, sum1f1, kappa, asymptotic, quadrature, auto)"
        )
    })
}

fn parse_check(s: &str) -> Result<Check, String> {
    Check::parse(s)
        .ok_or_else(|| format!("unknown check {s:?} (f22, tau, symmetry, prop1, coeffs)"))
}

fn parse_complex(s: &str) -> Result<ComplexScalar, String> {
    let bad = || format!("expected RE or RE,IM, got {s:?}");
    let mut it = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = it.next().and_then(|r| r.ok()).ok_or_else(bad)?;
    let im = match it.next() {
        Some(r) => r.map_err(|_| bad())?,
        None => 0.0,
    };
    if it.next().is_some() {
        return Err(bad());
    }
    Ok(ComplexScalar::new(re, im))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let out = match cli.cmd {
        Cmd::Eval {
            wave,
            l,
            kr,
            method,
            n,
        } => commands::eval(wave.sign, wave.gamma, l, kr, method, n, &cfg)?,
        Cmd::Validate { only, random, a } => {
            let grid = match (random, a) {
                (Some(n), _) => Grid::Random { n, seed: cfg.seed },
                (None, Some(a)) => Grid::FixedA(a),
                (None, None) => Grid::Default,
            };
            let report = validate::run(&grid, &only, &cfg)?;
            emit(
                &Output {
                    table: report.table(),
                    notes: Vec::new(),
                },
                &cfg,
                cli.out.as_ref(),
            )?;
            let fails = report.failures();
            eprintln!(
                "grid: {}\nchecked {} points: {} failed, {} exempt",
                report.grid,
                report.rows.len(),
                fails.len(),
                report.exempt().len()
            );
            for r in report.exempt() {
                eprintln!("exempt {} {}: {}", r.check.name(), r.point, r.note);
            }
            if !report.passed() {
                let list: Vec<String> = fails
                    .iter()
                    .map(|r| {
                        format!(
                            "{} {} (metric {:.3e}, threshold {:e}) {}",
                            r.check.name(),
                            r.point,
                            r.metric,
                            r.threshold,
                            r.note
                        )
                    })
                    .collect();
                return Err(CliError::Validation(format!(
                    "{} point(s)\n{}",
                    fails.len(),
                    list.join("\n")
                )));
            }
            return Ok(());
        }
        Cmd::Coeffs { wave, l, n } => commands::coeffs(wave.sign, wave.gamma, l, n)?,
        Cmd::AsympCompare { wave, l, kr, n } => {
            commands::asymp_compare(wave.sign, wave.gamma, l, &kr, n, &cfg)?
        }
        Cmd::Reconstruct {
            wave,
            kr,
            cos,
            lmax,
        } => commands::reconstruct(wave.sign, wave.gamma, kr, &cos, lmax, &cfg)?,
        Cmd::Asy3d { wave, f, kr } => commands::asy3d(wave.sign, wave.gamma, &f, &kr)?,
    };
    emit(&out, &cfg, cli.out.as_ref())
}

fn emit(out: &Output, cfg: &RunConfig, path: Option<&PathBuf>) -> Result<(), CliError> {
    let text = out.table.render(cfg.output_format, cfg.csv_precision);
    table::emit(&text, path.map(PathBuf::as_path))?;
    for n in &out.notes {
        eprintln!("{n}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    panic::set_hook(Box::new(|_| {}));
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        // a closed downstream pipe is not an error
        Ok(Err(CliError::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit()
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown".into());
            eprintln!("error: internal failure: {msg}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_argument() {
        assert_eq!(parse_complex("2").unwrap(), ComplexScalar::new(2.0, 0.0));
        assert_eq!(
            parse_complex("1, -0.5").unwrap(),
            ComplexScalar::new(1.0, -0.5)
        );
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
