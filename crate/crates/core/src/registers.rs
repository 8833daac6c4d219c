//! NLFSR simulation.
//!
//! Registers are Fibonacci style: cell 0 is the output cell, each clock
//! shifts every cell one place toward cell 0 and writes the feedback value,
//! computed from the pre-clock state, into cell `L - 1`. A fill is a `u64`
//! whose bit `i` is cell `i`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::boolfn::Anf;
use crate::error::{Error, Result};

/// Longest register whose period may be found by walking its cycle.
pub const MAX_WALK_LENGTH: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlfsrSpec {
    /// Register number in the cipher description (e.g. 10 for `R10`).
    pub label: usize,
    pub length: u32,
    /// `None` for a register whose feedback is unknown; such a register can
    /// take part in complexity estimates but cannot be clocked.
    pub feedback: Option<Anf>,
    pub output_shift: u64,
    pub declared_period: Option<u64>,
}

impl NlfsrSpec {
    /// A register with a concrete feedback given as ANF over its cells.
    pub fn new(label: usize, length: u32, feedback: &str) -> Result<Self> {
        check_length(length)?;
        let anf = Anf::parse(feedback, length as usize)?;
        Self::with_feedback(label, length, anf)
    }

    pub fn with_feedback(label: usize, length: u32, feedback: Anf) -> Result<Self> {
        check_length(length)?;
        if feedback.n() != length as usize {
            return Err(Error::InvalidRegister(format!(
                "feedback ranges over {} cells but register {label} has {length}",
                feedback.n()
            )));
        }
        // The all-zero state must stay fixed so that nonzero fills never
        // collapse into it.
        if feedback.eval(0) {
            return Err(Error::InvalidRegister(format!(
                "feedback of register {label} has a constant term"
            )));
        }
        Ok(NlfsrSpec {
            label,
            length,
            feedback: Some(feedback),
            output_shift: 0,
            declared_period: None,
        })
    }

    /// A full-size register known only by its length; its period is declared
    /// as `2^L - 1`.
    pub fn declared(label: usize, length: u32) -> Result<Self> {
        check_length(length)?;
        Ok(NlfsrSpec {
            label,
            length,
            feedback: None,
            output_shift: 0,
            declared_period: Some(max_period(length)),
        })
    }

    pub fn with_shift(mut self, shift: u64) -> Self {
        self.output_shift = shift;
        self
    }

    pub fn with_declared_period(mut self, period: u64) -> Self {
        self.declared_period = Some(period);
        self
    }

    pub fn feedback(&self) -> Result<&Anf> {
        self.feedback
            .as_ref()
            .ok_or(Error::MissingFeedback { label: self.label })
    }

    pub fn has_feedback(&self) -> bool {
        self.feedback.is_some()
    }

    #[inline]
    fn cell_mask(&self) -> u64 {
        if self.length == 64 {
            u64::MAX
        } else {
            (1u64 << self.length) - 1
        }
    }

    /// One clock of a raw fill, XORing `inject` into the feedback value.
    /// Panics if the register has no feedback.
    #[inline]
    pub fn step_raw(&self, fill: u64, inject: bool) -> u64 {
        let fb = self
            .feedback
            .as_ref()
            .expect("register without feedback cannot be clocked")
            .eval(fill)
            ^ inject;
        (fill >> 1) | ((fb as u64) << (self.length - 1))
    }

    pub fn state(&self, fill: u64) -> Result<RegisterState<'_>> {
        RegisterState::new(self, fill)
    }
}

fn check_length(length: u32) -> Result<()> {
    if length == 0 || length > 64 {
        return Err(Error::InvalidRegister(format!("length {length} not in 1..=64")));
    }
    Ok(())
}

/// `2^L - 1`.
pub fn max_period(length: u32) -> u64 {
    if length >= 64 {
        u64::MAX
    } else {
        (1u64 << length) - 1
    }
}

/// A concrete register fill. The all-zero fill is excluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterState<'a> {
    spec: &'a NlfsrSpec,
    fill: u64,
}

impl<'a> RegisterState<'a> {
    pub fn new(spec: &'a NlfsrSpec, fill: u64) -> Result<Self> {
        spec.feedback()?;
        if fill == 0 || fill & !spec.cell_mask() != 0 {
            return Err(Error::InvalidRegister(format!(
                "fill {fill:#x} invalid for register {} of length {}",
                spec.label, spec.length
            )));
        }
        Ok(RegisterState { spec, fill })
    }

    pub fn spec(&self) -> &'a NlfsrSpec {
        self.spec
    }

    pub fn fill(&self) -> u64 {
        self.fill
    }

    /// Bit currently in the output cell.
    pub fn output(&self) -> bool {
        self.fill & 1 == 1
    }

    pub fn clock(&self, steps: u64) -> Self {
        let mut fill = self.fill;
        for _ in 0..steps {
            fill = self.spec.step_raw(fill, false);
        }
        RegisterState { spec: self.spec, fill }
    }

    /// The shifted output sequence `x(t0), x(t0 + 1), ...` where `x(t)` is the
    /// output cell after `t + output_shift` clocks.
    pub fn stream(&self, t0: u64) -> RegisterStream<'a> {
        let start = self.clock(t0.saturating_add(self.spec.output_shift));
        RegisterStream { spec: self.spec, fill: start.fill }
    }

    pub fn output_sequence(&self, t0: u64, count: usize) -> Vec<bool> {
        self.stream(t0).take(count).collect()
    }
}

/// Endless output stream of one register; O(1) memory.
#[derive(Clone, Debug)]
pub struct RegisterStream<'a> {
    spec: &'a NlfsrSpec,
    fill: u64,
}

impl Iterator for RegisterStream<'_> {
    type Item = bool;

    #[inline]
    fn next(&mut self) -> Option<bool> {
        let bit = self.fill & 1 == 1;
        self.fill = self.spec.step_raw(self.fill, false);
        Some(bit)
    }
}

/// Cycle length through the fill `0...01`, or the declared period for long
/// registers.
pub fn period(spec: &NlfsrSpec) -> Result<u64> {
    if spec.length > MAX_WALK_LENGTH || spec.feedback.is_none() {
        return spec.declared_period.ok_or(Error::PeriodUnavailable {
            label: spec.label,
            length: spec.length,
        });
    }
    let start = 1u64;
    let mut fill = spec.step_raw(start, false);
    let mut t = 1u64;
    let limit = 1u64 << spec.length;
    while fill != start {
        fill = spec.step_raw(fill, false);
        t += 1;
        if t > limit {
            // the start fill lies on a tail, not a cycle
            return Err(Error::InvalidRegister(format!(
                "register {} is not invertible; fill 1 is not periodic",
                spec.label
            )));
        }
    }
    Ok(t)
}

/// Exact least common multiple of a set of periods together with its log2.
#[derive(Clone, Debug, PartialEq)]
pub struct LcmPeriod {
    pub value: BigUint,
    pub log2: f64,
}

pub fn lcm_period(periods: &[u64]) -> Result<LcmPeriod> {
    if periods.contains(&0) {
        return Err(Error::InvalidParameter("period 0".into()));
    }
    let value = periods
        .iter()
        .fold(BigUint::one(), |acc, &p| acc.lcm(&BigUint::from(p)));
    Ok(LcmPeriod { log2: big_log2(&value), value })
}

pub(crate) fn big_log2(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().map(|x| (x as f64).log2()).unwrap_or(0.0);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// Samples `s(0), s(factor), s(2 factor), ...`, `count` of them, pulling from
/// `seq` without buffering it.
pub fn decimate<I>(seq: I, factor: usize, count: usize) -> Result<std::iter::Take<std::iter::StepBy<I>>>
where
    I: Iterator<Item = bool>,
{
    if factor == 0 {
        return Err(Error::InvalidParameter("decimation factor must be >= 1".into()));
    }
    Ok(seq.step_by(factor).take(count))
}

/// One full cycle of a maximal-period register, tabulated so that the output
/// of any fill at any time is a table lookup.
///
/// Phase `p` is the reference fill (all ones) clocked `p` times.
#[derive(Clone, Debug)]
pub struct RegisterCycle {
    length: u32,
    shift: u64,
    period: u64,
    seq: Vec<u64>,
    fills: Vec<u32>,
    phases: Vec<u32>,
}

impl RegisterCycle {
    /// Fails unless the register has feedback, `L <= 24`, and period `2^L - 1`.
    pub fn new(spec: &NlfsrSpec) -> Result<Self> {
        spec.feedback()?;
        if spec.length > MAX_WALK_LENGTH {
            return Err(Error::InvalidRegister(format!(
                "register {} too long to tabulate",
                spec.label
            )));
        }
        let period = max_period(spec.length);
        let reference = spec.cell_mask();
        let mut seq = vec![0u64; (period as usize).div_ceil(64)];
        let mut fills = Vec::with_capacity(period as usize);
        let mut phases = vec![u32::MAX; 1 << spec.length];
        let mut fill = reference;
        for p in 0..period {
            if phases[fill as usize] != u32::MAX || fill == 0 {
                return Err(Error::InvalidRegister(format!(
                    "register {} does not have maximal period",
                    spec.label
                )));
            }
            phases[fill as usize] = p as u32;
            fills.push(fill as u32);
            if fill & 1 == 1 {
                seq[(p / 64) as usize] |= 1 << (p % 64);
            }
            fill = spec.step_raw(fill, false);
        }
        if fill != reference {
            return Err(Error::InvalidRegister(format!(
                "register {} does not have maximal period",
                spec.label
            )));
        }
        Ok(RegisterCycle {
            length: spec.length,
            shift: spec.output_shift,
            period,
            seq,
            fills,
            phases,
        })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn phase_of(&self, fill: u64) -> Option<u64> {
        self.phases
            .get(fill as usize)
            .filter(|&&p| p != u32::MAX)
            .map(|&p| p as u64)
    }

    pub fn fill_at(&self, phase: u64) -> u64 {
        self.fills[(phase % self.period) as usize] as u64
    }

    /// Raw output cell after `clocks` clocks from phase 0.
    #[inline]
    pub fn raw_bit(&self, clocks: u128) -> bool {
        let p = (clocks % self.period as u128) as usize;
        (self.seq[p / 64] >> (p % 64)) & 1 == 1
    }

    /// Shifted output `x(t)` of the register started at phase `phase`.
    #[inline]
    pub fn bit(&self, phase: u64, t: u128) -> bool {
        self.raw_bit(phase as u128 + self.shift as u128 + t)
    }
}
