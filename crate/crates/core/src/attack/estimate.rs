//! Data and time complexity of a parity-check attack.
//!
//! With `m` basis offsets the check has `2^m` terms and bias `eps^(2^m)`, so
//! `N = d * 2^(n_b 2^(m+1))` checks are needed (`n_b = log2 1/|eps|`).
//! * data: `N * D + sum(basis)` keystream bits, `D` the decimation factor;
//! * time: `N * 2^(sum of target lengths)`, one unit per check and guess.
//!
//! For two targets the folded recovery costs
//! `T_A [N (c_term + c_add) + T_B log2 T_B] + T_B c_ref`.

use serde::Serialize;

use super::distinguisher::amplified_log2;
use super::plan::ParityCheckPlan;
use crate::boolfn::Bias;
use crate::error::{Error, Result};

/// Per-operation costs (as log2) used by the folded-recovery estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostModel {
    /// Computing one `sigma(t) + sigma_A(t)`.
    pub term_log2: f64,
    /// One addition of a `V_1` counter.
    pub add_log2: f64,
    /// Generating one entry of the reference vector `V_2`.
    pub reference_log2: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel { term_log2: 4.0, add_log2: 4.7, reference_log2: 3.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoldedEstimate {
    /// Register whose initial states are enumerated.
    pub enumerated: usize,
    /// Register whose period the samples are folded over.
    pub folded: usize,
    /// Rotation search by FFT cross-correlation.
    pub log2_time: f64,
    /// Rotation search by evaluating the disagreement sum for every rotation.
    pub log2_time_direct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackEstimate {
    pub plan: String,
    pub m: usize,
    pub parity_terms: u64,
    pub base_bias_log2: f64,
    pub amplified_bias_log2: f64,
    pub d: f64,
    pub log2_samples: f64,
    pub log2_data: f64,
    /// Checks times guesses, the accounting of the worked examples.
    pub log2_time: f64,
    /// The same with the `2^m` terms of each check counted separately.
    pub log2_time_with_terms: f64,
    pub folded: Option<FoldedEstimate>,
}

fn log2_sum(terms: &[f64]) -> f64 {
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp2()).sum::<f64>().log2()
}

pub fn estimate(plan: &ParityCheckPlan, base_bias: Bias, d: f64, costs: &CostModel) -> Result<AttackEstimate> {
    if base_bias.is_zero() {
        return Err(Error::InvalidParameter("base bias must be nonzero".into()));
    }
    if d.is_nan() || d <= 0.0 {
        return Err(Error::InvalidParameter(format!("d = {d} must be positive")));
    }
    let m = plan.m();
    let amplified = amplified_log2(base_bias, m as u32);
    let log2_samples = d.log2() - 2.0 * amplified;

    let mut data_terms = vec![log2_samples + (plan.decimation_factor as f64).log2()];
    data_terms.extend(plan.basis.iter().map(|b| (b.offset as f64).log2()));
    let log2_data = log2_sum(&data_terms);

    let target_len: f64 = plan
        .targets
        .iter()
        .map(|&l| plan.register(l).map(|r| r.length as f64))
        .sum::<Option<f64>>()
        .ok_or_else(|| Error::InvalidPlan("unknown target".into()))?;
    let log2_time = log2_samples + target_len;

    let folded = if plan.targets.len() == 2 {
        let a = plan.register(plan.targets[0]).expect("checked above");
        let b = plan.register(plan.targets[1]).expect("checked above");
        let ta = (a.period as f64).log2();
        let tb = (b.period as f64).log2();
        let per_sample = log2_sum(&[costs.term_log2, costs.add_log2]);
        let sums = log2_samples + per_sample;
        let reference = tb + costs.reference_log2;
        let fft = tb + tb.log2();
        let direct = 1.0 + 2.0 * tb + costs.add_log2;
        Some(FoldedEstimate {
            enumerated: a.label,
            folded: b.label,
            log2_time: log2_sum(&[ta + log2_sum(&[sums, fft]), reference]),
            log2_time_direct: log2_sum(&[ta + log2_sum(&[sums, direct]), reference]),
        })
    } else {
        None
    };

    Ok(AttackEstimate {
        plan: plan.name.clone(),
        m,
        parity_terms: plan.parity_terms(),
        base_bias_log2: base_bias.log2_abs(),
        amplified_bias_log2: amplified,
        d,
        log2_samples,
        log2_data,
        log2_time,
        log2_time_with_terms: log2_time + m as f64,
        folded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_sum_adds_powers() {
        assert!((log2_sum(&[47.0, 48.0, 49.0]) - 7f64.log2() - 47.0).abs() < 1e-12);
        assert_eq!(log2_sum(&[3.0]), 3.0);
    }
}
