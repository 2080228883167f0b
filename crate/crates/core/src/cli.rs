//! Batch interface: load a system config, run one stage, write a report.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 config or validation error,
//! 3 inconclusive verdict under `--strict`, 64 usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::criteria::{
    conditionmix_lhs, hypercyclicity_report, menet_unilateral, shift_product_criterion, weak_mixing_consistency,
    CriterionReport, Verdict,
};
use crate::error::Error;
use crate::factor::semiconjugacy_defect_with;
use crate::lab::{construct_hc_approx, orbit_density_report};
use crate::measure::MeasureSystem;
use crate::rational::format_rational;
use crate::sampling::{random_step_function, rng_from_seed};
use crate::shift::{derive_weights, SeqVector, Side};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "shiftlike", version, about = "Criteria and experiments for dissipative composition operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args, Debug)]
struct Opts {
    /// System configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 64)]
    horizon: u64,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 1e-2)]
    eps: f64,
    /// Exit with 3 when any verdict is inconclusive.
    #[arg(long, global = true)]
    strict: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Star constant c and distortion constant K.
    Validate,
    /// Derived weight sequence.
    Weights,
    /// All criterion reports.
    Criteria,
    /// Semiconjugacy defect over seeded random step functions.
    Semicheck,
    /// Approximate hypercyclic vector and orbit density.
    Orbit,
    /// Every stage in one document.
    Report,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Json(_) | Error::Io(_) => EXIT_CONFIG,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok((body, code)) => {
            let written = match &cli.opts.out {
                Some(path) => fs::write(path, body.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_FAILURE
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

struct Context {
    sys: MeasureSystem,
    hash: String,
}

fn load(opts: &Opts) -> Result<Context, Failure> {
    let path = opts
        .config
        .as_ref()
        .ok_or_else(|| Failure::new(EXIT_USAGE, "--config PATH is required"))?;
    let text = fs::read(path).map_err(|e| Failure::new(EXIT_CONFIG, format!("{}: {e}", path.display())))?;
    let hash = hex::encode(Sha256::digest(&text));
    let text = String::from_utf8(text)
        .map_err(|e| Failure::new(EXIT_CONFIG, format!("{}: not UTF-8: {e}", path.display())))?;
    let sys = MeasureSystem::from_json(&text).map_err(|e| Failure::new(EXIT_CONFIG, format!("{}: {e}", path.display())))?;
    Ok(Context { sys, hash })
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    let ctx = load(&cli.opts)?;
    let opts = &cli.opts;
    let mut inconclusive = false;
    let (result, tables) = match cli.command {
        Command::Validate => validate(&ctx),
        Command::Weights => weights(&ctx)?,
        Command::Criteria => {
            let reports = criteria(&ctx, opts)?;
            inconclusive = any_inconclusive(&reports);
            criteria_output(&reports)
        }
        Command::Semicheck => semicheck(&ctx, opts)?,
        Command::Orbit => orbit(&ctx, opts)?,
        Command::Report => {
            let (v, _) = validate(&ctx);
            let (w, _) = weights(&ctx)?;
            let reports = criteria(&ctx, opts)?;
            inconclusive = any_inconclusive(&reports);
            let (c, table) = criteria_output(&reports);
            let (s, _) = semicheck(&ctx, opts)?;
            let o = match orbit(&ctx, opts) {
                Ok((o, _)) => o,
                Err(f) => json!({ "error": f.message }),
            };
            (
                json!({ "validate": v, "weights": w, "criteria": c, "semicheck": s, "orbit": o }),
                table,
            )
        }
    };
    let body = match opts.output {
        Format::Json => {
            let doc = json!({
                "command": command_name(cli.command),
                "version": env!("CARGO_PKG_VERSION"),
                "config_sha256": ctx.hash,
                "seed": opts.seed,
                "horizon": opts.horizon,
                "samples": opts.samples,
                "eps": opts.eps,
                "result": result,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&tables, &ctx.hash)?,
    };
    let code = if opts.strict && inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Ok((body, code))
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Weights => "weights",
        Command::Criteria => "criteria",
        Command::Semicheck => "semicheck",
        Command::Orbit => "orbit",
        Command::Report => "report",
    }
}

/// Header row plus records.
type Table = (Vec<&'static str>, Vec<Vec<String>>);

fn to_csv(table: &Table, hash: &str) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::new(EXIT_FAILURE, e.to_string());
    let mut header: Vec<&str> = table.0.clone();
    header.extend(["config_sha256", "version"]);
    w.write_record(&header).map_err(io)?;
    for row in &table.1 {
        let mut row = row.clone();
        row.push(hash.to_string());
        row.push(env!("CARGO_PKG_VERSION").to_string());
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn validate(ctx: &Context) -> (Value, Table) {
    let sys = &ctx.sys;
    let c = format_rational(&sys.star_constant());
    let k = format_rational(&sys.distortion_constant());
    let value = json!({
        "p": sys.p().to_string(),
        "window": { "min": sys.k_min(), "max": sys.k_max() },
        "cells": sys.cell_count(),
        "tails": sys.tails().is_some(),
        "finite_mass": sys.has_finite_mass(),
        "star_constant": c,
        "distortion_constant": k,
    });
    let rows = vec![
        vec!["star_constant".into(), c],
        vec!["distortion_constant".into(), k],
        vec!["finite_mass".into(), sys.has_finite_mass().to_string()],
    ];
    (value, (vec!["quantity", "value"], rows))
}

fn weights(ctx: &Context) -> Result<(Value, Table), Failure> {
    let doc = derive_weights(&ctx.sys)?.to_doc();
    let rows = doc
        .explicit
        .iter()
        .map(|e| vec![e.k.to_string(), e.wp.clone(), e.w.to_string()])
        .collect();
    Ok((to_value(&doc), (vec!["k", "wp", "w"], rows)))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn criteria(ctx: &Context, opts: &Opts) -> Result<Vec<CriterionReport>, Failure> {
    let sys = &ctx.sys;
    let w = derive_weights(sys)?;
    let mut rng = rng_from_seed(opts.seed);
    let mut out = vec![
        hypercyclicity_report(sys, opts.horizon)?,
        shift_product_criterion(&w, opts.horizon)?,
    ];
    match weak_mixing_consistency(sys, opts.horizon, opts.samples, &mut rng) {
        Ok(r) => out.push(r),
        Err(e @ Error::InconsistentWitness { .. }) => return Err(Failure::new(EXIT_FAILURE, e.to_string())),
        Err(e) => return Err(e.into()),
    }
    out.push(conditionmix_lhs(sys, opts.horizon)?.report);
    let menet = match w.restrict_to_naturals() {
        Ok(_) => menet_unilateral(&w, opts.horizon, opts.horizon)?.report,
        Err(_) => CriterionReport::new(
            "unilateral_sup_inf_products",
            Verdict::InconclusiveWindow,
            None,
            "weights on ℕ are not fully determined",
        ),
    };
    out.push(menet);
    Ok(out)
}

fn any_inconclusive(reports: &[CriterionReport]) -> bool {
    reports.iter().any(|r| r.verdict == Verdict::InconclusiveWindow)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::Violated => "violated",
        Verdict::InconclusiveWindow => "inconclusive_window",
    }
}

fn criteria_output(reports: &[CriterionReport]) -> (Value, Table) {
    let rows = reports
        .iter()
        .map(|r| vec![r.criterion.clone(), verdict_name(r.verdict).into(), r.notes.clone()])
        .collect();
    (to_value(&reports), (vec!["criterion", "verdict", "notes"], rows))
}

fn semicheck(ctx: &Context, opts: &Opts) -> Result<(Value, Table), Failure> {
    let sys = &ctx.sys;
    let w = derive_weights(sys)?;
    let mut rng = rng_from_seed(opts.seed);
    let mut rows = Vec::with_capacity(opts.samples);
    let mut max_defect = 0.0_f64;
    let mut all_exact = true;
    for i in 0..opts.samples {
        let phi = random_step_function(&mut rng, sys, 6);
        let d = semiconjugacy_defect_with(sys, &w, &phi)?;
        all_exact &= d.exact_zero;
        max_defect = max_defect.max(d.value);
        rows.push(vec![i.to_string(), d.exact_zero.to_string(), d.value.to_string()]);
    }
    let value = json!({
        "samples": opts.samples,
        "all_exact_zero": all_exact,
        "max_defect": max_defect,
    });
    if !all_exact {
        return Err(Failure::new(
            EXIT_FAILURE,
            format!("semiconjugacy defect {max_defect:e} is not exactly zero"),
        ));
    }
    Ok((value, (vec!["sample", "exact_zero", "defect"], rows)))
}

fn orbit(ctx: &Context, opts: &Opts) -> Result<(Value, Table), Failure> {
    let w = derive_weights(&ctx.sys)?;
    let e = |n: i64| SeqVector::basis(Side::Bilateral, n);
    let targets = vec![e(0)?, e(0)?.add(&e(1)?)?, e(-1)?];
    let approx = construct_hc_approx(&w, &targets, opts.eps, opts.horizon)?;
    let n_max = approx.schedule.iter().copied().max().unwrap_or(0);
    let density = orbit_density_report(&w, &approx.x, &targets, opts.eps, n_max)?;
    let entries: Vec<Value> = approx
        .x
        .iter()
        .map(|(n, z): (i64, Complex64)| json!({ "n": n, "re": z.re, "im": z.im }))
        .collect();
    let value = json!({
        "targets": targets.iter().map(|t| to_value(&t.to_doc())).collect::<Vec<_>>(),
        "schedule": approx.schedule,
        "defects": approx.defects,
        "x": { "side": "bilateral", "entries": entries },
        "density": density,
    });
    let rows = density
        .orbit_norms
        .iter()
        .enumerate()
        .map(|(n, v)| vec![n.to_string(), v.to_string()])
        .collect();
    Ok((value, (vec!["n", "norm"], rows)))
}
