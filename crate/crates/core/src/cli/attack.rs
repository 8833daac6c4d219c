use std::path::PathBuf;

use clap::{Args, ValueEnum};

use super::keystream::Schedule;
use super::table::Table;
use super::{resolve_plan, to_json, Report};
use crate::attack::{run_experiment, ExperimentConfig, Input, Method};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exhaustive,
    Folded,
    FoldedDirect,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exhaustive => Method::Exhaustive,
            MethodArg::Folded => Method::Folded,
            MethodArg::FoldedDirect => Method::FoldedDirect,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    /// Built-in plan over a small cipher (toy, toy-lcm, toy-empty); default toy.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Advantage parameter `d` of the sample count `N = d / eps^2`.
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// Use exactly this many parity checks.
    #[arg(long)]
    pub samples: Option<u128>,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    /// Attack uniformly random bits instead of keystream.
    #[arg(long, conflicts_with = "noiseless")]
    pub random_input: bool,
    /// Replace the combiner by the approximation itself.
    #[arg(long)]
    pub noiseless: bool,
    #[arg(long, value_enum, default_value_t = Schedule::Recompute)]
    pub schedule: Schedule,
}

fn fills_text(m: &std::collections::BTreeMap<usize, u64>) -> String {
    if m.is_empty() {
        return "-".into();
    }
    m.iter().map(|(l, f)| format!("R{l}={f:#x}")).collect::<Vec<_>>().join(" ")
}

pub fn run(args: &AttackArgs) -> Result<Report> {
    let resolved = resolve_plan(args.builtin.as_deref(), args.plan.as_deref(), args.spec.as_deref())?;
    let spec = resolved
        .spec
        .ok_or_else(|| Error::Config("the attack needs a concrete cipher".into()))?;
    let mut cfg = ExperimentConfig::new(resolved.plan, spec, resolved.base_bias);
    cfg.d = args.d;
    cfg.samples = args.samples;
    cfg.method = args.method.into();
    cfg.input = if args.random_input {
        Input::Random
    } else if args.noiseless {
        Input::Noiseless
    } else {
        Input::Cipher
    };
    cfg.schedule = args.schedule.into();
    cfg.workers = args.workers;
    cfg.seed = args.seed;
    cfg.trials = args.trials;
    let report = run_experiment(&cfg)?;

    let mut t = Table::new(["trial", "planted", "method", "best", "eps_hat", "verdict", "ok"]);
    let mut curve = Table::new(["trial", "t", "eps_hat"]);
    for tr in &report.trials {
        for r in &tr.results {
            t.row([
                tr.trial.to_string(),
                fills_text(&tr.planted),
                r.method.clone(),
                fills_text(&r.best_candidate),
                format!("{:+.4}", r.empirical_bias),
                format!("{:?}", r.verdict).to_lowercase(),
                if tr.success { "yes" } else { "no" }.to_string(),
            ]);
        }
        for (n, e) in &tr.bias_curve {
            curve.row([tr.trial.to_string(), n.to_string(), format!("{e:.6}")]);
        }
    }
    let mut text = format!(
        "plan {} on {} ({} input)\nsamples {}  keystream bits {}  hypotheses {}  threshold {:.4}  expected bias {:+.4}\n\n",
        report.plan,
        report.cipher,
        match report.input {
            Input::Cipher => "keystream",
            Input::Random => "random",
            Input::Noiseless => "noiseless",
        },
        report.samples,
        report.keystream_bits,
        report.hypotheses,
        report.threshold,
        report.amplified_bias,
    );
    text.push_str(&t.render());
    text.push_str(&format!(
        "\nsuccess rate {:.2} over {} trial(s); methods agree: {}\n",
        report.success_rate,
        report.trials.len(),
        if report.agreement { "yes" } else { "no" }
    ));
    Ok(Report { json: to_json(&report), text, csv: curve.csv(), status: 0 })
}
