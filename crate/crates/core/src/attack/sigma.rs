//! Evaluation of the decimated parity check
//! `sigma(t) = sum_tau [S(tD + tau) + sum_targets x_j(tD + tau)]`.

use super::bits::PackedBits;
use super::plan::ParityCheckPlan;
use crate::cipher::{CipherSpec, CycleKeystream};
use crate::error::{Error, Result};
use crate::registers::{NlfsrSpec, RegisterCycle, RegisterState};

/// Random-access keystream.
pub trait KeystreamSource: Sync {
    /// Number of available positions.
    fn available(&self) -> u128;
    fn bit(&self, t: u128) -> bool;
}

impl KeystreamSource for PackedBits {
    fn available(&self) -> u128 {
        self.len() as u128
    }

    fn bit(&self, t: u128) -> bool {
        self.get(t as usize)
    }
}

impl KeystreamSource for [bool] {
    fn available(&self) -> u128 {
        self.len() as u128
    }

    fn bit(&self, t: u128) -> bool {
        self[t as usize]
    }
}

impl KeystreamSource for CycleKeystream {
    fn available(&self) -> u128 {
        u128::MAX
    }

    fn bit(&self, t: u128) -> bool {
        CycleKeystream::bit(self, t)
    }
}

fn check_available(source: &(impl KeystreamSource + ?Sized), plan: &ParityCheckPlan, samples: u128) -> Result<()> {
    let needed = plan.keystream_needed(samples);
    let available = source.available();
    if needed > available {
        return Err(Error::KeystreamExhausted { needed, available });
    }
    Ok(())
}

/// Keystream part of `sigma`: `sum_tau S(tD + tau)` for `t < samples`.
pub fn keystream_parity(
    source: &(impl KeystreamSource + ?Sized),
    plan: &ParityCheckPlan,
    samples: usize,
) -> Result<PackedBits> {
    check_available(source, plan, samples as u128)?;
    let offsets = plan.offset_set();
    let d = plan.decimation_factor;
    Ok(PackedBits::from_fn(samples, |t| {
        let base = t as u128 * d;
        offsets.iter().fold(false, |acc, &tau| acc ^ source.bit(base + tau))
    }))
}

/// Contribution `sum_tau x(tD + tau)` of one tabulated register started at
/// `phase`.
pub fn register_parity(cycle: &RegisterCycle, phase: u64, plan: &ParityCheckPlan, samples: usize) -> PackedBits {
    let offsets = plan.offset_set();
    let d = plan.decimation_factor;
    PackedBits::from_fn(samples, |t| {
        let base = t as u128 * d;
        offsets.iter().fold(false, |acc, &tau| acc ^ cycle.bit(phase, base + tau))
    })
}

/// `sigma` for the given target fills, on tabulated registers.
pub fn sigma_bits(
    source: &(impl KeystreamSource + ?Sized),
    plan: &ParityCheckPlan,
    spec: &CipherSpec,
    guesses: &[(usize, u64)],
    samples: usize,
) -> Result<PackedBits> {
    let mut sigma = keystream_parity(source, plan, samples)?;
    for &(label, fill) in guesses {
        let reg = spec
            .register(label)
            .ok_or_else(|| Error::InvalidPlan(format!("no register labelled {label}")))?;
        let cycle = RegisterCycle::new(reg)?;
        let phase = cycle
            .phase_of(fill)
            .ok_or_else(|| Error::InvalidRegister(format!("fill {fill:#x} not on the cycle")))?;
        sigma.xor_assign(&register_parity(&cycle, phase, plan, samples));
    }
    Ok(sigma)
}

/// Streaming `sigma`: one keystream cursor per offset and one register
/// cursor per (offset, guessed register), each advanced by `D` per output.
/// Works for any register with a feedback, tabulable or not.
pub struct SigmaStream<'a, S: KeystreamSource + ?Sized> {
    source: &'a S,
    offsets: Vec<u128>,
    step: u64,
    position: u128,
    cursors: Vec<RegisterState<'a>>,
    remaining: u128,
}

impl<'a, S: KeystreamSource + ?Sized> SigmaStream<'a, S> {
    /// `guesses` pairs a register spec with its guessed fill.
    pub fn new(
        source: &'a S,
        plan: &ParityCheckPlan,
        guesses: &[(&'a NlfsrSpec, u64)],
        samples: u128,
    ) -> Result<Self> {
        check_available(source, plan, samples)?;
        let step = u64::try_from(plan.decimation_factor)
            .map_err(|_| Error::InvalidPlan("decimation factor too large to stream".into()))?;
        let offsets = plan.offset_set();
        let mut cursors = Vec::with_capacity(offsets.len() * guesses.len());
        for &(spec, fill) in guesses {
            let start = RegisterState::new(spec, fill)?;
            for &tau in &offsets {
                let tau = u64::try_from(tau)
                    .map_err(|_| Error::InvalidPlan("offset too large to stream".into()))?;
                cursors.push(start.clock(tau + spec.output_shift));
            }
        }
        Ok(SigmaStream { source, offsets, step, position: 0, cursors, remaining: samples })
    }
}

impl<S: KeystreamSource + ?Sized> Iterator for SigmaStream<'_, S> {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let mut bit = false;
        for &tau in &self.offsets {
            bit ^= self.source.bit(self.position + tau);
        }
        for c in &mut self.cursors {
            bit ^= c.output();
            *c = c.clock(self.step);
        }
        self.position += self.step as u128;
        Some(bit)
    }
}
