use serde::Serialize;

use super::estimate::{estimate_all, published_text, quantity_name, status_text};
use super::table::Table;
use super::{to_json, Report, EXIT_MISMATCH, EXIT_OK};
use crate::attack::{amplified_bias, sample_size, CostModel, BUILTIN_PLANS};
use crate::boolfn::{profile, Anf, LinearMask};
use crate::cipher::{achterbahn128_combiner, achterbahn80_combiner, ACHTERBAHN128_COMBINER};
use crate::error::Result;

#[derive(Serialize)]
struct Check {
    name: String,
    expected: String,
    computed: String,
    status: String,
    #[serde(skip)]
    fatal: bool,
}

fn exact(name: &str, expected: impl ToString, computed: impl ToString) -> Check {
    let (expected, computed) = (expected.to_string(), computed.to_string());
    let ok = expected == computed;
    Check {
        name: name.into(),
        expected,
        computed,
        status: if ok { "ok".into() } else { "MISMATCH".into() },
        fatal: !ok,
    }
}

/// `G` from the ANF of `F`: drop monomials containing `x_0` or `x_12` and
/// renumber `x_i` to `x_(i-1)`.
pub fn g_from_f_anf() -> Result<Anf> {
    let f = Anf::parse(ACHTERBAHN128_COMBINER, 13)?;
    let dropped = 1u64 | 1 << 12;
    Anf::from_monomials(
        11,
        f.monomials()
            .iter()
            .filter(|&&m| m & dropped == 0)
            .map(|&m| m >> 1),
    )
}

#[derive(Serialize)]
struct VerifyReport {
    checks: Vec<Check>,
    mismatches: usize,
}

pub fn run() -> Result<Report> {
    let mut checks = Vec::new();
    let f = achterbahn128_combiner();
    let g = achterbahn80_combiner();
    for (name, table, expected) in [("F", &f, (true, 4, 8, 3584, 4)), ("G", &g, (true, 4, 6, 896, 4))] {
        let p = profile(table);
        checks.push(exact(&format!("{name} balanced"), expected.0, p.balanced));
        checks.push(exact(&format!("{name} algebraic degree"), expected.1, p.algebraic_degree));
        checks.push(exact(&format!("{name} resiliency order"), expected.2, p.resiliency_order));
        checks.push(exact(&format!("{name} nonlinearity"), expected.3, p.nonlinearity));
        checks.push(exact(&format!("{name} algebraic immunity"), expected.4, p.algebraic_immunity));
    }
    let lf = LinearMask::from_vars(13, &[0, 1, 2, 3, 4, 7, 8, 9, 10])?;
    checks.push(exact("bias of l against F", 0.125, f.bias_at(lf)?.epsilon));
    let lg = LinearMask::from_vars(11, &[0, 2, 3, 4, 5, 6, 9])?;
    checks.push(exact("bias of l against G", -0.125, g.bias_at(lg)?.epsilon));
    checks.push(exact(
        "F(0, x_1..x_11, 0) equals G from the ANF",
        true,
        g_from_f_anf()?.to_truth_table()? == g,
    ));
    let amp = amplified_bias(crate::boolfn::Bias::from_log2(-3.0, false), 2);
    checks.push(exact("N for eps = 2^-12, d = 1", 1u64 << 24, sample_size(amp, 1.0)?.samples_needed));
    let err = sample_size(amp, 1.0)?.error_prob;
    checks.push(exact("error probability at d = 1", "0.3085", format!("{err:.4}")));

    let estimates = estimate_all(&BUILTIN_PLANS, 1.0, &CostModel::default())?;
    for pe in &estimates {
        for c in &pe.claims {
            checks.push(Check {
                name: format!("{} {}", pe.estimate.plan, quantity_name(c.claim.quantity)),
                expected: published_text(c),
                computed: format!("2^{:.2}", c.computed),
                status: status_text(c),
                fatal: !c.holds && c.claim.discrepancy.is_none(),
            });
        }
    }

    let mismatches = checks.iter().filter(|c| c.fatal).count();
    let mut t = Table::new(["check", "expected", "computed", "status"]);
    for c in &checks {
        t.row([c.name.clone(), c.expected.clone(), c.computed.clone(), c.status.clone()]);
    }
    let mut text = t.render();
    text.push_str(&format!("\n{mismatches} mismatch(es)\n"));
    let csv = t.csv();
    let report = VerifyReport { checks, mismatches };
    let status = if mismatches == 0 { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Report { json: to_json(&report), text, csv, status })
}
