use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use super::table::{pow2, Table};
use super::{resolve_plan, to_json, Report, ResolvedPlan, EXIT_MISMATCH, EXIT_OK};
use crate::attack::{estimate, AttackEstimate, ClaimCheck, CostModel, Quantity, Relation, BUILTIN_PLANS};
use crate::attack::{builtin_plan, BuiltinPlan};
use crate::error::Result;

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Built-in plan (v2, a80, a128, toy, toy-lcm, toy-empty); all when omitted.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Advantage parameter `d` of the sample count `N = d / eps^2`.
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// log2 cost of one parity-check term in the folded recovery.
    #[arg(long, default_value_t = 4.0)]
    pub term_cost: f64,
    /// log2 cost of one counter addition.
    #[arg(long, default_value_t = 4.7)]
    pub add_cost: f64,
    /// log2 cost of one reference-vector entry.
    #[arg(long, default_value_t = 3.0)]
    pub ref_cost: f64,
}

#[derive(Serialize)]
pub(crate) struct PlanEstimate {
    pub description: String,
    #[serde(flatten)]
    pub estimate: AttackEstimate,
    pub claims: Vec<ClaimCheck>,
}

pub(crate) fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Data => "data",
        Quantity::Time => "time",
        Quantity::FoldedTime => "folded time",
        Quantity::FirstOffset => "first offset",
    }
}

pub(crate) fn published_text(c: &ClaimCheck) -> String {
    match c.claim.relation {
        Relation::Near(_) => pow2(c.claim.log2),
        Relation::Below => format!("< {}", pow2(c.claim.log2)),
    }
}

pub(crate) fn status_text(c: &ClaimCheck) -> String {
    match (c.holds, c.claim.discrepancy) {
        (true, _) => "ok".into(),
        (false, Some(why)) => format!("documented discrepancy ({why})"),
        (false, None) => "MISMATCH".into(),
    }
}

pub(crate) fn estimate_all(names: &[&str], d: f64, costs: &CostModel) -> Result<Vec<PlanEstimate>> {
    names
        .iter()
        .map(|name| {
            let b: BuiltinPlan = builtin_plan(name)?;
            let est = b.estimate(d, costs)?;
            let claims = b.check_claims(&est)?;
            Ok(PlanEstimate { description: b.plan.to_string(), estimate: est, claims })
        })
        .collect()
}

fn claim_for(claims: &[ClaimCheck], q: Quantity) -> Option<&ClaimCheck> {
    claims.iter().find(|c| c.claim.quantity == q)
}

pub(crate) fn render(estimates: &[PlanEstimate]) -> Report {
    let mut text = String::new();
    let mut csv = Table::new(["plan", "quantity", "log2", "published", "status"]);
    let mut status = EXIT_OK;
    for pe in estimates {
        let e = &pe.estimate;
        let mut t = Table::new(["quantity", "value", "published", "status"]);
        t.row(["parity terms".into(), e.parity_terms.to_string(), String::new(), String::new()]);
        t.row(["base bias".into(), pow2(e.base_bias_log2), String::new(), String::new()]);
        t.row(["amplified bias".into(), pow2(e.amplified_bias_log2), String::new(), String::new()]);
        t.row(["samples".into(), pow2(e.log2_samples), String::new(), String::new()]);
        let mut quantities = vec![
            (Quantity::Data, "data", e.log2_data),
            (Quantity::Time, "time", e.log2_time),
        ];
        if let Some(f) = &e.folded {
            quantities.push((Quantity::FoldedTime, "folded time (fft)", f.log2_time));
        }
        for (q, label, value) in quantities {
            let (published, st) = match claim_for(&pe.claims, q) {
                Some(c) => (published_text(c), status_text(c)),
                None => (String::new(), String::new()),
            };
            t.row([label.to_string(), pow2(value), published, st]);
        }
        t.row(["time with terms".into(), pow2(e.log2_time_with_terms), String::new(), String::new()]);
        if let Some(f) = &e.folded {
            t.row(["folded time (scan)".into(), pow2(f.log2_time_direct), String::new(), String::new()]);
        }
        if let Some(c) = claim_for(&pe.claims, Quantity::FirstOffset) {
            t.row(["first offset".into(), pow2(c.computed), published_text(c), status_text(c)]);
        }
        text.push_str(&format!("{}\n", pe.description));
        text.push_str(&t.render());
        text.push('\n');

        csv.row([e.plan.clone(), "samples".into(), format!("{:.2}", e.log2_samples), String::new(), String::new()]);
        csv.row([e.plan.clone(), "data".into(), format!("{:.2}", e.log2_data), String::new(), String::new()]);
        csv.row([e.plan.clone(), "time".into(), format!("{:.2}", e.log2_time), String::new(), String::new()]);
        if let Some(f) = &e.folded {
            csv.row([e.plan.clone(), "folded time".into(), format!("{:.2}", f.log2_time), String::new(), String::new()]);
        }
        for c in &pe.claims {
            csv.row([
                e.plan.clone(),
                format!("published {}", quantity_name(c.claim.quantity)),
                format!("{:.2}", c.computed),
                published_text(c),
                status_text(c),
            ]);
            if !c.holds && c.claim.discrepancy.is_none() {
                status = EXIT_MISMATCH;
            }
        }
    }
    Report { json: to_json(&estimates), text, csv: csv.csv(), status }
}

pub fn run(args: &EstimateArgs) -> Result<Report> {
    let costs = CostModel { term_log2: args.term_cost, add_log2: args.add_cost, reference_log2: args.ref_cost };
    if args.builtin.is_none() && args.plan.is_none() && args.spec.is_none() {
        return Ok(render(&estimate_all(&BUILTIN_PLANS, args.d, &costs)?));
    }
    let ResolvedPlan { plan, base_bias, claims, .. } =
        resolve_plan(args.builtin.as_deref(), args.plan.as_deref(), args.spec.as_deref())?;
    let est = estimate(&plan, base_bias, args.d, &costs)?;
    let checked = BuiltinPlan { plan: plan.clone(), base_bias, spec: None, claims }.check_claims(&est)?;
    Ok(render(&[PlanEstimate { description: plan.to_string(), estimate: est, claims: checked }]))
}
