use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::boolfn::LinearMask;
use crate::cipher::CipherSpec;
use crate::error::{Error, Result};
use crate::registers::{lcm_period, period, NlfsrSpec};

/// Length and period of one register, as the plan sees it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanRegister {
    pub label: usize,
    pub length: u32,
    pub period: u64,
}

/// One basis offset and the registers whose contribution it cancels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisOffset {
    pub labels: Vec<usize>,
    /// lcm of the periods of `labels`.
    pub offset: u128,
}

/// Everything needed to evaluate the parity check
/// `sigma(t) = sum_{tau in <basis>} [S(tD + tau) + sum_targets x_j(tD + tau)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCheckPlan {
    pub name: String,
    /// Registers in combiner-input order.
    pub registers: Vec<PlanRegister>,
    /// Linear approximation over register positions.
    pub approximation: LinearMask,
    pub basis: Vec<BasisOffset>,
    pub decimation: Vec<usize>,
    /// Product of the periods of the decimation registers (1 if none).
    pub decimation_factor: u128,
    pub targets: Vec<usize>,
}

/// Labels-only description of a plan, resolved against a register list by
/// [`make_plan`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlanRequest {
    pub name: String,
    pub approximation: Vec<usize>,
    /// Each set of labels is cancelled by one basis offset.
    pub pairing: Vec<Vec<usize>>,
    pub decimation: Vec<usize>,
    pub targets: Vec<usize>,
}

pub fn make_plan(spec: &CipherSpec, request: &PlanRequest) -> Result<ParityCheckPlan> {
    make_plan_over(&spec.registers, request, spec.keystream_limit)
}

/// Builds and validates a plan over an explicit register list. `limit` bounds
/// the largest keystream position an offset may reach.
pub fn make_plan_over(
    registers: &[NlfsrSpec],
    request: &PlanRequest,
    limit: Option<u128>,
) -> Result<ParityCheckPlan> {
    let plan_regs: Vec<PlanRegister> = registers
        .iter()
        .map(|r| {
            Ok(PlanRegister { label: r.label, length: r.length, period: period(r)? })
        })
        .collect::<Result<_>>()?;
    let position = |label: usize| -> Result<usize> {
        plan_regs
            .iter()
            .position(|r| r.label == label)
            .ok_or_else(|| Error::InvalidPlan(format!("no register labelled {label}")))
    };

    let approx_pos: Vec<usize> = request
        .approximation
        .iter()
        .map(|&l| position(l))
        .collect::<Result<_>>()?;
    let approximation = LinearMask::from_vars(plan_regs.len(), &approx_pos)?;
    let in_approx: BTreeSet<usize> = request.approximation.iter().copied().collect();

    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut claim = |label: usize, role: &str| -> Result<()> {
        if !in_approx.contains(&label) {
            return Err(Error::InvalidPlan(format!(
                "register {label} is a {role} register but not part of the approximation"
            )));
        }
        if !covered.insert(label) {
            return Err(Error::InvalidPlan(format!("register {label} has more than one role")));
        }
        Ok(())
    };

    let mut basis = Vec::with_capacity(request.pairing.len());
    for set in &request.pairing {
        if set.is_empty() {
            return Err(Error::InvalidPlan("empty register set in pairing".into()));
        }
        let mut periods = Vec::with_capacity(set.len());
        for &l in set {
            claim(l, "cancelled")?;
            periods.push(plan_regs[position(l)?].period);
        }
        let lcm = lcm_period(&periods)?.value;
        let offset = to_u128(&lcm)?;
        basis.push(BasisOffset { labels: set.clone(), offset });
    }

    let mut decimation_factor: u128 = 1;
    for &l in &request.decimation {
        claim(l, "decimation")?;
        decimation_factor = decimation_factor
            .checked_mul(plan_regs[position(l)?].period as u128)
            .ok_or_else(|| Error::InvalidPlan("decimation factor overflows".into()))?;
    }
    for &l in &request.targets {
        claim(l, "target")?;
    }
    for &l in &request.approximation {
        if !covered.contains(&l) {
            return Err(Error::UncancelledRegister { label: l });
        }
    }

    let plan = ParityCheckPlan {
        name: request.name.clone(),
        registers: plan_regs,
        approximation,
        basis,
        decimation: request.decimation.clone(),
        decimation_factor,
        targets: request.targets.clone(),
    };
    if let Some(limit) = limit {
        let reach = plan.offset_span();
        if reach >= limit {
            return Err(Error::InvalidPlan(format!(
                "offsets reach position {reach}, beyond the keystream limit {limit}"
            )));
        }
    }
    Ok(plan)
}

fn to_u128(v: &BigUint) -> Result<u128> {
    v.to_u128()
        .ok_or_else(|| Error::InvalidPlan("offset does not fit 128 bits".into()))
}

impl ParityCheckPlan {
    /// `m`, the number of basis offsets.
    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn parity_terms(&self) -> u64 {
        1u64 << self.m()
    }

    /// All `2^m` 0-1 combinations of the basis; entry `c` has bit `i` of `c`
    /// selecting basis offset `i`.
    pub fn offset_set(&self) -> Vec<u128> {
        (0..1usize << self.m())
            .map(|c| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| c >> i & 1 == 1)
                    .map(|(_, b)| b.offset)
                    .sum()
            })
            .collect()
    }

    /// Largest offset, the sum of the basis.
    pub fn offset_span(&self) -> u128 {
        self.basis.iter().map(|b| b.offset).sum()
    }

    pub fn register(&self, label: usize) -> Option<&PlanRegister> {
        self.registers.iter().find(|r| r.label == label)
    }

    pub fn position_of(&self, label: usize) -> Option<usize> {
        self.registers.iter().position(|r| r.label == label)
    }

    pub fn approximation_labels(&self) -> Vec<usize> {
        self.approximation
            .vars()
            .into_iter()
            .map(|p| self.registers[p].label)
            .collect()
    }

    /// The labels-only description this plan was built from.
    pub fn request(&self) -> PlanRequest {
        PlanRequest {
            name: self.name.clone(),
            approximation: self.approximation_labels(),
            pairing: self.basis.iter().map(|b| b.labels.clone()).collect(),
            decimation: self.decimation.clone(),
            targets: self.targets.clone(),
        }
    }

    /// Keystream bits needed for `samples` values of the decimated check.
    pub fn keystream_needed(&self, samples: u128) -> u128 {
        if samples == 0 {
            return 0;
        }
        (samples - 1) * self.decimation_factor + self.offset_span() + 1
    }

    /// Whether `label`'s contribution vanishes from every parity check, i.e.
    /// some basis offset is a multiple of its period.
    pub fn cancels(&self, label: usize) -> bool {
        let Some(r) = self.register(label) else { return false };
        self.basis.iter().any(|b| b.offset % r.period as u128 == 0)
    }
}

impl fmt::Display for ParityCheckPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let approx: Vec<String> = self
            .approximation_labels()
            .iter()
            .map(|l| format!("x{l}"))
            .collect();
        write!(f, "{}: l = {}; basis <", self.name, approx.join("+"))?;
        let basis: Vec<String> = self
            .basis
            .iter()
            .map(|b| {
                let l: Vec<String> = b.labels.iter().map(|l| l.to_string()).collect();
                format!("T_{{{}}}", l.join(","))
            })
            .collect();
        write!(f, "{}>; decimate {:?}; targets {:?}", basis.join(", "), self.decimation, self.targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::{achterbahn128_spec, achterbahn80_spec, toy_spec};

    fn req(approx: &[usize], pairing: &[&[usize]], dec: &[usize], targets: &[usize]) -> PlanRequest {
        PlanRequest {
            name: "t".into(),
            approximation: approx.to_vec(),
            pairing: pairing.iter().map(|s| s.to_vec()).collect(),
            decimation: dec.to_vec(),
            targets: targets.to_vec(),
        }
    }

    #[test]
    fn achterbahn80_plan() {
        let plan = make_plan(
            &achterbahn80_spec(),
            &req(&[1, 3, 4, 5, 6, 7, 10], &[&[4, 7], &[5, 6]], &[10], &[1, 3]),
        )
        .unwrap();
        let t = |l: u32| (1u128 << l) - 1;
        assert_eq!(plan.basis[0].offset, t(25) * t(28));
        assert_eq!(plan.basis[1].offset, t(26) * t(27));
        assert_eq!(plan.decimation_factor, t(31));
        let offsets = plan.offset_set();
        assert_eq!(offsets, vec![0, t(25) * t(28), t(26) * t(27), t(25) * t(28) + t(26) * t(27)]);
        for l in [4, 5, 6, 7] {
            assert!(plan.cancels(l));
        }
        assert!(!plan.cancels(1));
    }

    #[test]
    fn achterbahn128_plan_uses_lcm() {
        let plan = make_plan(
            &achterbahn128_spec(),
            &req(&[0, 1, 2, 3, 4, 7, 8, 9, 10], &[&[0, 3, 7], &[4, 10], &[8, 9]], &[], &[1, 2]),
        )
        .unwrap();
        let t037 = plan.basis[0].offset;
        for l in [21u32, 24, 28] {
            assert_eq!(t037 % ((1u128 << l) - 1), 0);
        }
        assert!(t037 < ((1u128 << 21) - 1) * ((1u128 << 24) - 1) * ((1u128 << 28) - 1));
        assert_eq!(plan.offset_set().len(), 8);
    }

    #[test]
    fn empty_basis_has_single_zero_offset() {
        let plan = make_plan(&toy_spec(), &req(&[0, 1, 2, 3], &[], &[], &[0, 1, 2, 3])).unwrap();
        assert_eq!(plan.offset_set(), vec![0]);
        assert_eq!(plan.decimation_factor, 1);
    }

    #[test]
    fn uncancelled_register_is_rejected() {
        let err = make_plan(&toy_spec(), &req(&[0, 1, 2, 3], &[&[3]], &[], &[1, 2])).unwrap_err();
        assert_eq!(err, Error::UncancelledRegister { label: 0 });
    }

    #[test]
    fn roles_must_be_disjoint_and_inside_the_mask() {
        assert!(make_plan(&toy_spec(), &req(&[0, 1, 2], &[&[0]], &[0], &[1, 2])).is_err());
        assert!(make_plan(&toy_spec(), &req(&[0, 1, 2], &[&[3]], &[0], &[1, 2])).is_err());
        assert!(make_plan(&toy_spec(), &req(&[0, 1, 9], &[], &[], &[])).is_err());
    }

    #[test]
    fn offsets_beyond_keystream_limit_are_rejected() {
        let spec = toy_spec().with_keystream_limit(1000);
        let err = make_plan(&spec, &req(&[0, 1, 2, 3], &[&[3]], &[0], &[1, 2])).unwrap_err();
        assert!(matches!(err, Error::InvalidPlan(_)));
    }
}
