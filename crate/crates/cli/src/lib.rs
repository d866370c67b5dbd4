//! Batch front-end for vortex-sp: reads a JSON run configuration, evaluates
//! one analysis over a scan grid in parallel and writes CSV, a JSON sidecar
//! and optionally an SVG plot.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;
use vortex_sp::fourier::field_tables;
use vortex_sp::regime::{presets, EtaLedger, ValidationReport, Verdict};

use commands::{Computed, Overridden};
pub use config::RunConfig;
pub use error::CliError;

pub const THREADS_ENV: &str = "VORTEX_SP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "vortex-sp", version, about = "Smith-Purcell radiation of vortex electron packets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run even if the configuration fails validation.
    #[arg(long, global = true)]
    pub force: bool,
    /// Worker threads for the scan.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Output directory; overrides output.dir.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot where one makes sense.
    #[arg(long, global = true)]
    pub svg: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Spectral terms over the scan grid.
    Spectrum,
    /// Large-N angular terms over theta, phi, N or h.
    Angular,
    /// Line widths for each strip count in fwhm.strips.
    Fwhm,
    /// Angular terms against N with log-log slopes.
    Nscan,
    /// Shift of the polar maximum for each strip count in polar.strips.
    PolarShift,
    /// Small-parameter ledger and validity verdicts.
    Validate,
    /// Baseline parameter sets.
    Presets {
        /// Print full configuration blocks.
        #[arg(long)]
        list: bool,
    },
    /// Print the symbolic Fourier field tables.
    DumpTerms,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Angular => "angular",
            Command::Fwhm => "fwhm",
            Command::Nscan => "nscan",
            Command::PolarShift => "polar-shift",
            Command::Validate => "validate",
            Command::Presets { .. } => "presets",
            Command::DumpTerms => "dump-terms",
        }
    }
}

/// Files written and text for stdout.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub stdout: String,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    command: &'a str,
    config: &'a RunConfig,
    ledger: EtaLedger,
    validation: ValidationReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    overridden: Vec<Overridden>,
    summary: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<String>,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Presets { list } => return Ok(presets_text(*list)),
        Command::DumpTerms => {
            return Ok(Outcome {
                files: Vec::new(),
                stdout: field_tables().dump(),
            })
        }
        _ => {}
    }
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("`{}` needs --config <path>", cli.command.name())))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(dir) = &cli.out {
        cfg.output.dir = dir.clone();
    }
    cfg.output.svg |= cli.svg;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Io(e.to_string()))?
    };
    pool.install(|| run_config(&cli.command, &cfg, cli.force))
}

/// Run one command on an already loaded configuration.
pub fn run_config(command: &Command, cfg: &RunConfig, force: bool) -> Result<Outcome, CliError> {
    let name = command.name();
    let stem = cfg.output.stem.clone().unwrap_or_else(|| name.to_string());
    let dir = cfg.output.dir.as_path();
    let base = cfg.setup()?;
    let (ledger, report) = commands::ledger_and_report(&base, &cfg.thresholds)?;

    if let Command::Validate = command {
        return validate(cfg, &stem, dir, ledger, report, force);
    }
    let computed: Computed = match command {
        Command::Spectrum => commands::spectrum(cfg, force)?,
        Command::Angular => commands::angular(cfg, force)?,
        Command::Nscan => commands::nscan(cfg, force)?,
        Command::Fwhm => commands::fwhm(cfg, force)?,
        Command::PolarShift => commands::polar_shift(cfg, force)?,
        Command::Validate | Command::Presets { .. } | Command::DumpTerms => unreachable!("handled above"),
    };
    let mut files = Vec::new();
    let csv_name = format!("{stem}.csv");
    files.push(output::write_file(dir, &csv_name, &computed.table.to_csv())?);
    if cfg.output.svg {
        if let Some((title, xlabel)) = &computed.plot {
            let x: Vec<f64> = computed.table.rows.iter().map(|r| r[0]).collect();
            let series: Vec<(String, Vec<f64>)> = computed.table.header[1..computed.table.header.len() - 1]
                .iter()
                .map(|h| (h.clone(), computed.table.column(h).expect("column")))
                .collect();
            files.push(output::write_file(dir, &format!("{stem}.svg"), &svg::line_plot(title, xlabel, &x, &series))?);
        }
    }
    let overridden = computed.overridden;
    let stdout = format!(
        "{name}: {} rows, base configuration {}{}\n",
        computed.table.rows.len(),
        verdict_word(report.overall),
        if overridden.is_empty() {
            String::new()
        } else {
            format!(", {} points ran under --force", overridden.len())
        }
    );
    let sidecar = Sidecar {
        command: name,
        config: cfg,
        ledger,
        validation: report,
        overridden,
        summary: computed.summary,
        csv: Some(csv_name),
    };
    files.push(output::write_file(dir, &format!("{stem}.json"), &output::to_json(&sidecar)?)?);
    Ok(Outcome { files, stdout })
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "passes",
        Verdict::Warn => "passes with warnings",
        Verdict::Fail => "FAILS",
    }
}

fn validate(
    cfg: &RunConfig,
    stem: &str,
    dir: &Path,
    ledger: EtaLedger,
    report: ValidationReport,
    force: bool,
) -> Result<Outcome, CliError> {
    let mut text = String::new();
    let mut csv = String::from("parameter,value\n");
    for (k, v) in ledger.entries() {
        text.push_str(&format!("{k:>10} = {v:.3e}\n"));
        csv.push_str(&format!("{k},{}\n", output::sci(v)));
    }
    for c in &report.checks {
        let flag = match c.verdict {
            Verdict::Pass => "pass",
            Verdict::Warn => "warn",
            Verdict::Fail => "FAIL",
        };
        text.push_str(&format!("[{flag}] {:<20} {:<45} ratio {:.3e}\n", c.name, c.inequality, c.ratio));
    }
    text.push_str(&format!(
        "overall: {} ({} warnings), dominant correction {}, N_max = {:.1}, ell_max = {}\n",
        verdict_word(report.overall),
        report.warnings,
        report.dominant,
        report.n_max,
        report.ell_max
    ));
    let failed = report.overall == Verdict::Fail;
    let csv_name = format!("{stem}.csv");
    let mut files = vec![output::write_file(dir, &csv_name, &csv)?];
    let sidecar = Sidecar {
        command: "validate",
        config: cfg,
        ledger,
        validation: report,
        overridden: Vec::new(),
        summary: Value::Null,
        csv: Some(csv_name),
    };
    files.push(output::write_file(dir, &format!("{stem}.json"), &output::to_json(&sidecar)?)?);
    if failed && !force {
        eprint!("{text}");
        return Err(CliError::Validation("hard checks failed".into()));
    }
    Ok(Outcome { files, stdout: text })
}

#[derive(Serialize)]
struct PresetBlock {
    name: String,
    description: String,
    config: Value,
}

fn presets_text(list: bool) -> Outcome {
    let mut stdout = String::new();
    if list {
        let blocks: Vec<PresetBlock> = presets()
            .into_iter()
            .map(|p| PresetBlock {
                name: p.name,
                description: p.description,
                config: serde_json::json!({
                    "packet": { "rho0": p.packet.rho0, "ell": p.packet.ell, "n": p.packet.n, "beta": p.packet.beam.beta },
                    "grating": { "d": p.geometry.d, "a": p.geometry.a, "N": p.geometry.n_strips, "h": p.geometry.h },
                    "observation": { "theta": p.observation.theta, "phi": p.observation.phi },
                    "constants": { "lambda_c": p.packet.constants.lambda_c },
                }),
            })
            .collect();
        stdout = serde_json::to_string_pretty(&blocks).expect("static data serializes");
        stdout.push('\n');
    } else {
        for p in presets() {
            stdout.push_str(&format!("{:<4} {}\n", p.name, p.description));
        }
    }
    Outcome {
        files: Vec::new(),
        stdout,
    }
}

/// Parse arguments, run, print, and return the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
