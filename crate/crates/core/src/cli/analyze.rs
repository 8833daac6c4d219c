use clap::Args;
use serde::Serialize;

use super::table::{fixed2, Table};
use super::{to_json, Report};
use crate::boolfn::{
    best_affine_approximations, profile, Anf, Approximation, FunctionProfile, LinearMask, TruthTable, MAX_VARS,
};
use crate::cipher::{achterbahn128_combiner, achterbahn80_combiner};
use crate::error::{Error, Result};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// ANF expression, e.g. "x_0x_1 + x_2".
    pub anf: Option<String>,
    /// Built-in function: F (Achterbahn-128) or G (Achterbahn-80).
    #[arg(long)]
    pub builtin: Option<String>,
    /// Number of variables (default: one past the highest index used, at least 2).
    #[arg(long, short = 'n')]
    pub vars: Option<usize>,
    /// Largest approximation weight searched (default: resiliency order + 1).
    #[arg(long)]
    pub max_weight: Option<u32>,
    /// Approximations listed.
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    /// Also report the bias of this mask (comma-separated variable labels).
    #[arg(long, value_delimiter = ',')]
    pub mask: Option<Vec<usize>>,
}

struct Subject {
    name: String,
    table: TruthTable,
    /// Added to variable indices when printing.
    label_offset: usize,
    reference: Option<Vec<usize>>,
}

fn subject(args: &AnalyzeArgs) -> Result<Subject> {
    match (&args.builtin, &args.anf) {
        (Some(_), Some(_)) => Err(Error::Config("give either an ANF or --builtin".into())),
        (Some(b), None) => match b.to_ascii_uppercase().as_str() {
            "F" => Ok(Subject {
                name: "F".into(),
                table: achterbahn128_combiner(),
                label_offset: 0,
                reference: Some(vec![0, 1, 2, 3, 4, 7, 8, 9, 10]),
            }),
            "G" => Ok(Subject {
                name: "G".into(),
                table: achterbahn80_combiner(),
                label_offset: 1,
                reference: Some(vec![1, 3, 4, 5, 6, 7, 10]),
            }),
            other => Err(Error::Config(format!("unknown built-in function {other:?}"))),
        },
        (None, Some(text)) => {
            let n = match args.vars {
                Some(n) => n,
                None => {
                    let support = Anf::parse(text, 64)?.support();
                    (64 - support.leading_zeros() as usize).max(2)
                }
            };
            if n > MAX_VARS {
                return Err(Error::TooManyVariables(n));
            }
            let table = Anf::parse(text, n)?.to_truth_table()?;
            Ok(Subject { name: text.clone(), table, label_offset: 0, reference: None })
        }
        (None, None) => Err(Error::Config("nothing to analyze: give an ANF or --builtin".into())),
    }
}

#[derive(Serialize)]
struct ApproxRecord {
    mask: Vec<usize>,
    weight: u32,
    walsh: i32,
    bias: f64,
    bias_log2: Option<f64>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    function: String,
    #[serde(flatten)]
    profile: FunctionProfile,
    max_weight: u32,
    /// Approximations sharing the largest `|bias|` within the weight bound.
    best_count: usize,
    approximations: Vec<ApproxRecord>,
    reference: Option<ApproxRecord>,
}

fn record(a: &Approximation, offset: usize) -> ApproxRecord {
    ApproxRecord {
        mask: a.mask.vars().iter().map(|v| v + offset).collect(),
        weight: a.mask.weight(),
        walsh: a.walsh,
        bias: a.bias.epsilon,
        bias_log2: (!a.bias.is_zero()).then(|| a.bias.log2_abs()),
    }
}

fn mask_text(vars: &[usize]) -> String {
    if vars.is_empty() {
        return "0".into();
    }
    vars.iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join("+")
}

fn bias_text(r: &ApproxRecord) -> String {
    match r.bias_log2 {
        None => "0".into(),
        Some(l) => format!("{}2^{}", if r.bias < 0.0 { "-" } else { "+" }, fixed2(l)),
    }
}

pub fn run(args: &AnalyzeArgs) -> Result<Report> {
    let s = subject(args)?;
    let n = s.table.n();
    let prof = profile(&s.table);
    let max_weight = args
        .max_weight
        .unwrap_or_else(|| (prof.resiliency_order + 1).clamp(0, n as i32) as u32);
    let all = best_affine_approximations(&s.table, max_weight);
    let best_abs = all.first().map(|a| a.walsh.unsigned_abs()).unwrap_or(0);
    let best_count = all.iter().take_while(|a| a.walsh.unsigned_abs() == best_abs).count();
    let approximations: Vec<ApproxRecord> = all.iter().take(args.top).map(|a| record(a, s.label_offset)).collect();

    let reference_vars = args.mask.clone().or(s.reference.clone());
    let reference = match reference_vars {
        Some(labels) => {
            let local: Vec<usize> = labels
                .iter()
                .map(|&l| {
                    l.checked_sub(s.label_offset)
                        .ok_or(Error::VariableOutOfRange { index: l, n })
                })
                .collect::<Result<_>>()?;
            let mask = LinearMask::from_vars(n, &local)?;
            let bias = s.table.bias_at(mask)?;
            let walsh = (bias.epsilon * (n as f64).exp2()).round() as i32;
            Some(record(&Approximation { mask, walsh, bias }, s.label_offset))
        }
        None => None,
    };

    let report = AnalyzeReport {
        function: s.name.clone(),
        profile: prof,
        max_weight,
        best_count,
        approximations,
        reference,
    };

    let mut summary = Table::new(["property", "value"]);
    summary.row(["function".to_string(), report.function.clone()]);
    summary.row(["variables".to_string(), n.to_string()]);
    summary.row(["balanced".to_string(), if prof.balanced { "yes" } else { "no" }.to_string()]);
    summary.row(["algebraic degree".to_string(), prof.algebraic_degree.to_string()]);
    summary.row(["resiliency order".to_string(), prof.resiliency_order.to_string()]);
    summary.row(["nonlinearity".to_string(), prof.nonlinearity.to_string()]);
    summary.row(["algebraic immunity".to_string(), prof.algebraic_immunity.to_string()]);

    let mut approx = Table::new(["mask", "weight", "walsh", "bias"]);
    for r in &report.approximations {
        approx.row([mask_text(&r.mask), r.weight.to_string(), r.walsh.to_string(), bias_text(r)]);
    }
    let mut text = summary.render();
    text.push_str(&format!(
        "\napproximations of weight <= {max_weight}: {best_count} share the largest |bias|\n"
    ));
    text.push_str(&approx.render());
    if let Some(r) = &report.reference {
        text.push_str(&format!(
            "\nmask {}: walsh {}, bias {}\n",
            mask_text(&r.mask),
            r.walsh,
            bias_text(r)
        ));
    }

    let mut csv = Table::new(["mask", "weight", "walsh", "bias"]);
    for r in report.approximations.iter().chain(&report.reference) {
        csv.row([mask_text(&r.mask), r.weight.to_string(), r.walsh.to_string(), r.bias.to_string()]);
    }
    Ok(Report { json: to_json(&report), text, csv: csv.csv(), status: 0 })
}
