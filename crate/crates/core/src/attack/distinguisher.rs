use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::boolfn::Bias;
use crate::error::{Error, Result};

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("unit normal").cdf(x)
}

pub fn normal_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("unit normal").inverse_cdf(p)
}

/// `eps^(2^m)`: the bias of a sum of `2^m` independent `eps`-biased terms.
pub fn amplified_bias(base: Bias, m: u32) -> Bias {
    let mut e = base.epsilon;
    for _ in 0..m {
        e *= e;
    }
    Bias { epsilon: e }
}

/// `log2 |eps^(2^m)|`, usable where the bias itself underflows.
pub fn amplified_log2(base: Bias, m: u32) -> f64 {
    base.log2_abs() * (1u64 << m) as f64
}

/// Sample count and error probability of the optimal distinguisher for a
/// given bias.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistinguisherParams {
    pub epsilon: Bias,
    pub d: f64,
    /// `ceil(d / eps^2)`.
    pub samples_needed: u128,
    /// `Phi(-sqrt(d) / 2)`.
    pub error_prob: f64,
    /// Test `|eps_hat|` instead of the signed estimate; needed when the sign
    /// of the bias is unknown (e.g. flipped by a decimated register).
    pub two_sided: bool,
}

pub fn sample_size(epsilon: Bias, d: f64) -> Result<DistinguisherParams> {
    if epsilon.is_zero() {
        return Err(Error::InvalidParameter("bias must be nonzero".into()));
    }
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::InvalidParameter(format!("advantage parameter d = {d} must be positive")));
    }
    let n = (d / (epsilon.epsilon * epsilon.epsilon)).ceil();
    if n >= u128::MAX as f64 {
        return Err(Error::InvalidParameter("sample count overflows".into()));
    }
    Ok(DistinguisherParams {
        epsilon,
        d,
        samples_needed: (n as u128).max(1),
        error_prob: normal_cdf(-d.sqrt() / 2.0),
        two_sided: false,
    })
}

impl DistinguisherParams {
    pub fn two_sided(mut self) -> Self {
        self.two_sided = true;
        self
    }

    /// Decision threshold on the estimated bias, midway between 0 and `|eps|`.
    pub fn threshold(&self) -> f64 {
        self.epsilon.epsilon.abs() / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The samples carry the expected bias (keystream).
    Biased,
    /// No bias detected.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    /// `1 - 2c/N` where `c` counts ones among the `N` samples.
    pub empirical_bias: f64,
    pub samples: u64,
    pub ones: u64,
}

pub fn empirical_bias(ones: u64, samples: u64) -> f64 {
    1.0 - 2.0 * ones as f64 / samples as f64
}

/// Threshold distinguisher on the first `samples_needed` bits of `bits`.
/// A bit equal to 0 counts as agreement with the approximation.
pub fn distinguish<I>(bits: I, params: &DistinguisherParams) -> Result<Decision>
where
    I: IntoIterator<Item = bool>,
{
    let needed = params.samples_needed;
    let mut n: u128 = 0;
    let mut ones: u64 = 0;
    for b in bits.into_iter() {
        if n == needed {
            break;
        }
        ones += b as u64;
        n += 1;
    }
    if n < needed {
        return Err(Error::InsufficientSamples { needed, available: n });
    }
    let eps_hat = empirical_bias(ones, n as u64);
    let statistic = if params.two_sided {
        eps_hat.abs()
    } else {
        eps_hat * params.epsilon.epsilon.signum()
    };
    let verdict = if statistic >= params.threshold() { Verdict::Biased } else { Verdict::Random };
    Ok(Decision { verdict, empirical_bias: eps_hat, samples: n as u64, ones })
}
