//! Seeded end-to-end runs: key-load a small cipher with a random key, then
//! recover the target fills from its keystream.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bits::PackedBits;
use super::distinguisher::Verdict;
use super::plan::ParityCheckPlan;
use super::recover::{
    exhaustive_recover, folded_recover, recovery_params, AttackResult, RecoveryParams, RotationSearch,
};
use super::sigma::{sigma_bits, KeystreamSource};
use crate::boolfn::{Bias, TruthTable};
use crate::cipher::{key_load, CipherSpec, CycleKeystream, KeyIv, ScheduleVariant};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Input {
    /// Keystream of the key-loaded cipher.
    #[default]
    Cipher,
    /// Uniformly random bits instead of keystream.
    Random,
    /// Keystream of the cipher with its combiner replaced by the approximation.
    Noiseless,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    Folded,
    FoldedDirect,
    /// Exhaustive and FFT-folded on the same data.
    #[default]
    Both,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub plan: ParityCheckPlan,
    pub spec: Arc<CipherSpec>,
    pub base_bias: Bias,
    pub d: f64,
    /// Overrides the sample count derived from `d`.
    pub samples: Option<u128>,
    pub method: Method,
    pub input: Input,
    pub schedule: ScheduleVariant,
    pub workers: Option<usize>,
    pub seed: u64,
    pub trials: usize,
}

impl ExperimentConfig {
    pub fn new(plan: ParityCheckPlan, spec: Arc<CipherSpec>, base_bias: Bias) -> Self {
        ExperimentConfig {
            plan,
            spec,
            base_bias,
            d: 1.0,
            samples: None,
            method: Method::Both,
            input: Input::Cipher,
            schedule: ScheduleVariant::Recompute,
            workers: None,
            seed: 1,
            trials: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub key: String,
    pub iv: String,
    pub planted: BTreeMap<usize, u64>,
    /// Bias of `sigma` under the planted fills.
    pub planted_sigma_bias: f64,
    pub results: Vec<AttackResult>,
    /// Planted fills recovered (random input: nothing accepted) by every method.
    pub success: bool,
    /// All methods chose the same candidate.
    pub agree: bool,
    /// Running bias of `sigma` under the first method's best candidate.
    pub bias_curve: Vec<(u64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub plan: String,
    pub cipher: String,
    pub input: Input,
    pub method: Method,
    pub seed: u64,
    pub d: f64,
    pub amplified_bias: f64,
    pub samples: u64,
    pub keystream_bits: u64,
    pub hypotheses: u64,
    pub threshold: f64,
    pub trials: Vec<TrialRecord>,
    pub success_rate: f64,
    pub agreement: bool,
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

fn hex_of(bits: &[bool]) -> String {
    let bytes: Vec<u8> = bits
        .chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |b, (i, &x)| b | ((x as u8) << (7 - i))))
        .collect();
    hex::encode(bytes)
}

fn bias_curve(sigma: &PackedBits) -> Vec<(u64, f64)> {
    let n = sigma.len();
    let mut points: Vec<usize> = (4..usize::BITS).map(|k| 1usize << k).take_while(|&p| p < n).collect();
    points.push(n);
    let mut ones = 0u64;
    let mut next = 0;
    let mut out = Vec::with_capacity(points.len());
    for t in 0..n {
        ones += sigma.get(t) as u64;
        if t + 1 == points[next] {
            out.push(((t + 1) as u64, 1.0 - 2.0 * ones as f64 / (t + 1) as f64));
            next += 1;
        }
    }
    out
}

pub fn run_trial(cfg: &ExperimentConfig, trial: usize, seed: u64) -> Result<TrialRecord> {
    let plan = &cfg.plan;
    let mut params = recovery_params(plan, cfg.base_bias, cfg.d)?;
    if let Some(n) = cfg.samples {
        params = params.with_samples(n);
    }
    params.workers = cfg.workers;
    usize::try_from(params.samples).map_err(|_| Error::InvalidParameter("sample count too large".into()))?;

    let spec = match cfg.input {
        Input::Noiseless => Arc::new(cfg.spec.with_combiner(TruthTable::linear(plan.approximation)?)?),
        _ => cfg.spec.clone(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_len = spec.max_length() as usize;
    let key = random_bits(&mut rng, (2 * max_len).div_ceil(8) * 8);
    let iv = random_bits(&mut rng, max_len.div_ceil(8) * 8);
    let state = key_load(spec.clone(), &KeyIv::new(key.clone(), iv.clone()), cfg.schedule)?;
    let planted: BTreeMap<usize, u64> = plan
        .targets
        .iter()
        .map(|&l| (l, state.fill_of(l).expect("target is a cipher register")))
        .collect();

    let cycles = CycleKeystream::tabulate(&spec)?;
    let keystream = CycleKeystream::new(&state, cycles)?;
    let (planted_sigma_bias, results, curve) = match cfg.input {
        Input::Random => {
            let len = usize::try_from(plan.keystream_needed(params.samples))
                .map_err(|_| Error::InvalidParameter("keystream too long".into()))?;
            let random = PackedBits::from_bools(&random_bits(&mut rng, len));
            attack_source(&random, cfg, &spec, &params, &planted)?
        }
        _ => attack_source(&keystream, cfg, &spec, &params, &planted)?,
    };

    let success = results.iter().all(|r| match cfg.input {
        Input::Random => r.verdict == Verdict::Random,
        _ => r.recovered_states == planted,
    });
    let agree = results.windows(2).all(|w| w[0].best_candidate == w[1].best_candidate);

    Ok(TrialRecord {
        trial,
        seed,
        key: hex_of(&key),
        iv: hex_of(&iv),
        planted,
        planted_sigma_bias,
        results,
        success,
        agree,
        bias_curve: curve,
    })
}

type Outcome = (f64, Vec<AttackResult>, Vec<(u64, f64)>);

fn attack_source<S: KeystreamSource + ?Sized>(
    source: &S,
    cfg: &ExperimentConfig,
    spec: &CipherSpec,
    params: &RecoveryParams,
    planted: &BTreeMap<usize, u64>,
) -> Result<Outcome> {
    let plan = &cfg.plan;
    let n = params.samples as usize;
    let guesses: Vec<(usize, u64)> = planted.iter().map(|(&l, &f)| (l, f)).collect();
    let planted_sigma = sigma_bits(source, plan, spec, &guesses, n)?;
    let planted_sigma_bias = 1.0 - 2.0 * planted_sigma.count_ones() as f64 / n as f64;

    let methods: Vec<Method> = match cfg.method {
        Method::Both if plan.targets.len() == 2 => vec![Method::Exhaustive, Method::Folded],
        Method::Both => vec![Method::Exhaustive],
        m => vec![m],
    };
    let results: Vec<AttackResult> = methods
        .iter()
        .map(|m| match m {
            Method::Exhaustive => exhaustive_recover(source, plan, spec, params),
            Method::Folded => folded_recover(source, plan, spec, params, RotationSearch::Fft),
            Method::FoldedDirect => folded_recover(source, plan, spec, params, RotationSearch::Direct),
            Method::Both => unreachable!("expanded above"),
        })
        .collect::<Result<_>>()?;
    let best: Vec<(usize, u64)> = results[0].best_candidate.iter().map(|(&l, &f)| (l, f)).collect();
    let curve = bias_curve(&sigma_bits(source, plan, spec, &best, n)?);
    Ok((planted_sigma_bias, results, curve))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is needed".into()));
    }
    let mut params = recovery_params(&cfg.plan, cfg.base_bias, cfg.d)?;
    if let Some(n) = cfg.samples {
        params = params.with_samples(n);
    }
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let trials: Vec<TrialRecord> = (0..cfg.trials)
        .map(|i| run_trial(cfg, i, master.next_u64()))
        .collect::<Result<_>>()?;
    let successes = trials.iter().filter(|t| t.success).count();
    Ok(ExperimentReport {
        plan: cfg.plan.name.clone(),
        cipher: cfg.spec.name.clone(),
        input: cfg.input,
        method: cfg.method,
        seed: cfg.seed,
        d: cfg.d,
        amplified_bias: params.amplified_bias.epsilon,
        samples: params.samples as u64,
        keystream_bits: cfg.plan.keystream_needed(params.samples) as u64,
        hypotheses: params.hypotheses,
        threshold: params.threshold,
        success_rate: successes as f64 / trials.len() as f64,
        agreement: trials.iter().all(|t| t.agree),
        trials,
    })
}
