//! The `achterbahn` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a published figure failed
//! to reproduce.

mod analyze;
mod attack;
mod estimate;
mod keystream;
mod table;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::attack::{builtin_plan, make_plan, make_plan_over, ParityCheckPlan, PublishedClaim};
use crate::boolfn::Bias;
use crate::cipher::{builtin_registers, builtin_spec, CipherSpec};
use crate::config::{load_cipher, load_plan};
use crate::error::{Error, Result};

pub use table::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "achterbahn", version, about = "Achterbahn-128/80 cryptanalysis workbench")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Also write report.{json,txt,csv} into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Profile a Boolean function and list its best linear approximations.
    Analyze(analyze::AnalyzeArgs),
    /// Data and time complexity of a parity-check attack.
    Estimate(estimate::EstimateArgs),
    /// Run the attack end to end on a small cipher.
    Attack(attack::AttackArgs),
    /// Key-load a cipher and print keystream as hex.
    Keystream(keystream::KeystreamArgs),
    /// Check every published figure the workbench reproduces.
    Verify,
}

/// A command's report in every format.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub json: String,
    pub text: String,
    pub csv: String,
    pub status: i32,
}

impl Report {
    fn get(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Text => &self.text,
            Format::Csv => &self.csv,
        }
    }
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if let Some(dir) = &cli.global.out {
                if let Err(e) = write_reports(dir, &report) {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            }
            let _ = out.write_all(report.get(cli.global.format).as_bytes());
            report.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn write_reports(dir: &Path, report: &Report) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), &report.json)?;
    std::fs::write(dir.join("report.txt"), &report.text)?;
    std::fs::write(dir.join("report.csv"), &report.csv)?;
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Analyze(a) => analyze::run(a),
        Command::Estimate(a) => estimate::run(a),
        Command::Attack(a) => attack::run(a),
        Command::Keystream(a) => keystream::run(a),
        Command::Verify => verify::run(),
    }
}

/// A plan with its cipher (when fully specified) and base bias.
pub(crate) struct ResolvedPlan {
    pub plan: ParityCheckPlan,
    pub base_bias: Bias,
    pub spec: Option<Arc<CipherSpec>>,
    pub claims: Vec<PublishedClaim>,
}

fn cipher_by_name(name: &str) -> Result<Arc<CipherSpec>> {
    builtin_spec(name).ok_or_else(|| Error::Config(format!("unknown built-in cipher {name:?}")))
}

/// Resolves `--builtin`/`--plan`/`--spec`. A `--spec` replaces the cipher of
/// a built-in plan; the bias then comes from its combiner.
pub(crate) fn resolve_plan(builtin: Option<&str>, plan: Option<&Path>, spec: Option<&Path>) -> Result<ResolvedPlan> {
    let spec = spec.map(load_cipher).transpose()?;
    if let Some(path) = plan {
        if builtin.is_some() {
            return Err(Error::Config("--builtin and --plan are exclusive".into()));
        }
        let file = load_plan(path)?;
        let request = file.request();
        let spec = match (spec, &file.cipher) {
            (Some(s), _) => Some(s),
            (None, Some(name)) => match builtin_spec(name) {
                Some(s) => Some(s),
                None => {
                    let regs = builtin_registers(name)
                        .ok_or_else(|| Error::Config(format!("unknown cipher {name:?}")))?;
                    let plan = make_plan_over(&regs, &request, None)?;
                    let base_bias = file
                        .bias()?
                        .ok_or_else(|| Error::Config("a register bank plan needs a bias".into()))?;
                    return Ok(ResolvedPlan { plan, base_bias, spec: None, claims: Vec::new() });
                }
            },
            (None, None) => return Err(Error::Config("plan file names no cipher; pass --spec".into())),
        };
        let spec = spec.expect("set above");
        let plan = make_plan(&spec, &request)?;
        let base_bias = match file.bias()? {
            Some(b) => b,
            None => spec.combiner.bias_at(plan.approximation)?,
        };
        return Ok(ResolvedPlan { plan, base_bias, spec: Some(spec), claims: Vec::new() });
    }
    let name = builtin.unwrap_or("toy");
    let b = builtin_plan(name)?;
    match spec {
        None => Ok(ResolvedPlan { plan: b.plan, base_bias: b.base_bias, spec: b.spec, claims: b.claims }),
        Some(spec) => {
            let plan = make_plan(&spec, &b.plan.request())?;
            let base_bias = spec.combiner.bias_at(plan.approximation)?;
            Ok(ResolvedPlan { plan, base_bias, spec: Some(spec), claims: Vec::new() })
        }
    }
}

pub(crate) fn resolve_cipher(builtin: Option<&str>, spec: Option<&Path>) -> Result<Arc<CipherSpec>> {
    match (builtin, spec) {
        (Some(_), Some(_)) => Err(Error::Config("--builtin and --spec are exclusive".into())),
        (_, Some(path)) => load_cipher(path),
        (name, None) => cipher_by_name(name.unwrap_or("toy")),
    }
}
