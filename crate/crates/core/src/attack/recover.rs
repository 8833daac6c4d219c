//! Initial-state recovery of the target registers: exhaustive search over all
//! fill tuples, and the two-register folding algorithm with a rotation search.

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::bits::PackedBits;
use super::distinguisher::{amplified_bias, normal_cdf, normal_quantile, sample_size, Verdict};
use super::plan::ParityCheckPlan;
use super::sigma::{keystream_parity, register_parity, KeystreamSource};
use super::xcorr::Correlator;
use crate::boolfn::Bias;
use crate::cipher::CipherSpec;
use crate::error::{Error, Result};
use crate::registers::RegisterCycle;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationSearch {
    #[default]
    Fft,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryParams {
    /// Bias of `sigma` for the correct guess, `eps^(2^m)`.
    pub amplified_bias: Bias,
    pub d: f64,
    pub samples: u128,
    /// Number of fill tuples searched.
    pub hypotheses: u64,
    /// Acceptance threshold on `|eps_hat|`.
    pub threshold: f64,
    /// Worker threads; `None` uses the global pool.
    #[serde(skip)]
    pub workers: Option<usize>,
}

/// Samples and threshold for recovery at advantage `d`.
///
/// `N = ceil(d / eps^2)`, rounded up to a multiple of the period of the second
/// target when there are two targets so that the folded search applies. The
/// threshold is `|eps| / 2`, raised for more than one hypothesis to
/// `z / sqrt(N)` with `z` the two-sided normal quantile at
/// `Phi(-sqrt(d)/2) / H`.
pub fn recovery_params(plan: &ParityCheckPlan, base_bias: Bias, d: f64) -> Result<RecoveryParams> {
    let eps = amplified_bias(base_bias, plan.m() as u32);
    let mut samples = sample_size(eps, d)?.samples_needed;
    let mut hypotheses: u64 = 1;
    for &l in &plan.targets {
        let r = plan
            .register(l)
            .ok_or_else(|| Error::InvalidPlan(format!("unknown target {l}")))?;
        hypotheses = hypotheses
            .checked_mul(r.period)
            .ok_or_else(|| Error::InvalidParameter("search space overflows".into()))?;
    }
    if plan.targets.len() == 2 {
        let tb = plan.register(plan.targets[1]).expect("checked").period as u128;
        samples = samples.div_ceil(tb) * tb;
    }
    let threshold = threshold_for(eps, d, hypotheses, samples);
    Ok(RecoveryParams { amplified_bias: eps, d, samples, hypotheses, threshold, workers: None })
}

fn threshold_for(eps: Bias, d: f64, hypotheses: u64, samples: u128) -> f64 {
    let half = eps.epsilon.abs() / 2.0;
    if hypotheses <= 1 {
        return half;
    }
    let alpha = normal_cdf(-d.sqrt() / 2.0);
    let z = normal_quantile(1.0 - alpha / (2.0 * hypotheses as f64));
    half.max(z / (samples as f64).sqrt())
}

impl RecoveryParams {
    /// Fixes the sample count; the threshold follows it.
    pub fn with_samples(mut self, samples: u128) -> Self {
        self.samples = samples;
        self.threshold = threshold_for(self.amplified_bias, self.d, self.hypotheses, samples);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackResult {
    pub method: String,
    pub verdict: Verdict,
    pub empirical_bias: f64,
    pub samples: u64,
    /// Ones of `sigma` under the best candidate.
    pub disagreements: u64,
    pub threshold: f64,
    pub hypotheses: u64,
    /// Highest-scoring fill per target.
    pub best_candidate: BTreeMap<usize, u64>,
    /// The best candidate when accepted, else empty.
    pub recovered_states: BTreeMap<usize, u64>,
    /// Parity-check evaluations performed.
    pub work_counter: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Best {
    score: u64,
    fills: Vec<u64>,
    ones: u64,
}

impl Best {
    fn beats(&self, other: &Best) -> bool {
        self.score > other.score || (self.score == other.score && self.fills < other.fills)
    }

    fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
        match (a, b) {
            (Some(a), Some(b)) => Some(if b.beats(&a) { b } else { a }),
            (a, b) => a.or(b),
        }
    }
}

fn run_in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn target_cycles(plan: &ParityCheckPlan, spec: &CipherSpec) -> Result<Vec<RegisterCycle>> {
    plan.targets
        .iter()
        .map(|&l| {
            let reg = spec
                .register(l)
                .ok_or_else(|| Error::InvalidPlan(format!("cipher has no register {l}")))?;
            RegisterCycle::new(reg)
        })
        .collect()
}

fn sample_count(params: &RecoveryParams) -> Result<usize> {
    usize::try_from(params.samples)
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidParameter(format!("{} samples not usable", params.samples)))
}

fn finish(method: &str, plan: &ParityCheckPlan, params: &RecoveryParams, best: Best, work: u64) -> AttackResult {
    let n = params.samples as u64;
    let empirical_bias = 1.0 - 2.0 * best.ones as f64 / n as f64;
    let verdict = if empirical_bias.abs() >= params.threshold { Verdict::Biased } else { Verdict::Random };
    let best_candidate: BTreeMap<usize, u64> = plan.targets.iter().copied().zip(best.fills).collect();
    let recovered_states = if verdict == Verdict::Biased { best_candidate.clone() } else { BTreeMap::new() };
    AttackResult {
        method: method.to_string(),
        verdict,
        empirical_bias,
        samples: n,
        disagreements: best.ones,
        threshold: params.threshold,
        hypotheses: params.hypotheses,
        best_candidate,
        recovered_states,
        work_counter: work,
    }
}

/// Tries every tuple of nonzero target fills in integer order and keeps the
/// one maximizing `|N - 2c|`; ties go to the smallest tuple.
pub fn exhaustive_recover(
    source: &(impl KeystreamSource + ?Sized),
    plan: &ParityCheckPlan,
    spec: &CipherSpec,
    params: &RecoveryParams,
) -> Result<AttackResult> {
    let n = sample_count(params)?;
    let s = keystream_parity(source, plan, n)?;
    let cycles = target_cycles(plan, spec)?;
    let tables: Vec<Vec<PackedBits>> = cycles
        .iter()
        .map(|c| {
            (1..=c.period())
                .into_par_iter()
                .map(|fill| register_parity(c, c.phase_of(fill).expect("maximal period"), plan, n))
                .collect()
        })
        .collect();

    fn descend(tables: &[Vec<PackedBits>], acc: &PackedBits, prefix: &mut Vec<u64>, n: u64, best: &mut Option<Best>) {
        let consider = |ones: u64, fills: Vec<u64>, best: &mut Option<Best>| {
            let cand = Best { score: (n as i64 - 2 * ones as i64).unsigned_abs(), fills, ones };
            if best.as_ref().is_none_or(|b| cand.beats(b)) {
                *best = Some(cand);
            }
        };
        match tables {
            [] => consider(acc.count_ones(), prefix.clone(), best),
            [last] => {
                for (i, t) in last.iter().enumerate() {
                    let ones = acc.xor_count(t);
                    let cand_score = (n as i64 - 2 * ones as i64).unsigned_abs();
                    if best.as_ref().is_none_or(|b| cand_score >= b.score) {
                        prefix.push(i as u64 + 1);
                        consider(ones, prefix.clone(), best);
                        prefix.pop();
                    }
                }
            }
            [first, rest @ ..] => {
                for (i, t) in first.iter().enumerate() {
                    let mut next = acc.clone();
                    next.xor_assign(t);
                    prefix.push(i as u64 + 1);
                    descend(rest, &next, prefix, n, best);
                    prefix.pop();
                }
            }
        }
    }

    let n64 = n as u64;
    let best = run_in_pool(params.workers, || match tables.split_first() {
        None => {
            let mut best = None;
            descend(&[], &s, &mut Vec::new(), n64, &mut best);
            best
        }
        Some((first, rest)) => first
            .par_iter()
            .enumerate()
            .map(|(i, t)| {
                let mut acc = s.clone();
                acc.xor_assign(t);
                let mut best = None;
                descend(rest, &acc, &mut vec![i as u64 + 1], n64, &mut best);
                best
            })
            .reduce(|| None, Best::merge),
    })?
    .expect("at least one candidate");
    let work = params.hypotheses.saturating_mul(n64);
    Ok(finish("exhaustive", plan, params, best, work))
}

/// `V_1[k] = sum_q x[T_B q + k]` for `k < T_B`.
pub fn fold_counts(x: &PackedBits, period: usize) -> Vec<u64> {
    let mut v1 = vec![0u64; period];
    for t in 0..x.len() {
        if x.get(t) {
            v1[t % period] += 1;
        }
    }
    v1
}

/// Disagreement total of one rotation:
/// `sum_k [(V_2[k+i] + 1) V_1[k] + V_2[k+i] (Q - V_1[k])]`.
pub fn eq2_total(v1: &[u64], v2: &[bool], q: u64, rotation: usize) -> u64 {
    let t = v2.len();
    (0..t)
        .map(|k| if v2[(k + rotation) % t] { q - v1[k] } else { v1[k] })
        .sum()
}

/// The same total against the complemented reference vector.
pub fn eq2_complement(v1: &[u64], v2: &[bool], q: u64, rotation: usize) -> u64 {
    let flipped: Vec<bool> = v2.iter().map(|b| !b).collect();
    eq2_total(v1, &flipped, q, rotation)
}

/// Two-target folding recovery. Register `A = targets[0]` is enumerated; the
/// samples are folded over the period of `B = targets[1]`, whose fill follows
/// from the best rotation of a reference sequence.
pub fn folded_recover(
    source: &(impl KeystreamSource + ?Sized),
    plan: &ParityCheckPlan,
    spec: &CipherSpec,
    params: &RecoveryParams,
    search: RotationSearch,
) -> Result<AttackResult> {
    if plan.targets.len() != 2 {
        return Err(Error::InvalidPlan(format!(
            "folded recovery needs exactly two targets, plan has {}",
            plan.targets.len()
        )));
    }
    let n = sample_count(params)?;
    let cycles = target_cycles(plan, spec)?;
    let (ca, cb) = (&cycles[0], &cycles[1]);
    let tb = cb.period() as usize;
    if n % tb != 0 {
        return Err(Error::InvalidParameter(format!(
            "{n} samples is not a multiple of the period {tb}"
        )));
    }
    let q = (n / tb) as u64;
    let step = (plan.decimation_factor % tb as u128) as u64;
    if step.gcd(&(tb as u64)) != 1 {
        return Err(Error::InvalidPlan("decimation factor shares a factor with the folded period".into()));
    }

    let s = keystream_parity(source, plan, n)?;
    let v2 = register_parity(cb, 0, plan, tb).to_bools();
    let u: Vec<f64> = v2.iter().map(|&b| if b { -1.0 } else { 1.0 }).collect();
    let fill_b: Vec<u64> = (0..tb as u64).map(|i| cb.fill_at(i * step % tb as u64)).collect();
    let n64 = n as u64;

    let score_rotations = |fill_a: u64, c: &[i64]| -> Best {
        let mut best: Option<Best> = None;
        for (i, &ci) in c.iter().enumerate() {
            debug_assert_eq!((ci + n as i64).rem_euclid(2), 0);
            let ones = ((ci + n as i64) / 2) as u64;
            let cand = Best { score: ci.unsigned_abs(), fills: vec![fill_a, fill_b[i]], ones };
            if best.as_ref().is_none_or(|b| cand.beats(b)) {
                best = Some(cand);
            }
        }
        best.expect("nonempty period")
    };

    let best = run_in_pool(params.workers, || {
        (1..=ca.period())
            .into_par_iter()
            .map_init(
                || Correlator::new(&u),
                |corr, fill_a| {
                    let mut x = register_parity(ca, ca.phase_of(fill_a).expect("maximal period"), plan, n);
                    x.xor_assign(&s);
                    let v1 = fold_counts(&x, tb);
                    let v: Vec<f64> = v1.iter().map(|&c| 2.0 * c as f64 - q as f64).collect();
                    let c: Vec<i64> = match search {
                        RotationSearch::Fft => corr.correlate(&v).iter().map(|x| x.round() as i64).collect(),
                        RotationSearch::Direct => direct_scan(&v2, &v1, q),
                    };
                    Some(score_rotations(fill_a, &c))
                },
            )
            .reduce(|| None, Best::merge)
    })?
    .expect("at least one candidate");

    let work = ca.period().saturating_mul(n64).saturating_add(tb as u64);
    let method = match search {
        RotationSearch::Fft => "folded-fft",
        RotationSearch::Direct => "folded-direct",
    };
    Ok(finish(method, plan, params, best, work))
}

/// Exact `C(i) = 2 * eq2_total(i) - N` for every rotation, the same
/// convention as the FFT path.
fn direct_scan(v2: &[bool], v1: &[u64], q: u64) -> Vec<i64> {
    let n = (v1.len() as u64 * q) as i64;
    (0..v2.len())
        .map(|i| 2 * eq2_total(v1, v2, q, i) as i64 - n)
        .collect()
}
