//! Cipher-spec and plan files, TOML or JSON (chosen by the `.json` extension).
//!
//! Cipher spec:
//! ```toml
//! name = "toy-variant"
//! base = "toy"                      # optional built-in to start from
//! combiner = "x_0 + x_3 + x_1x_2"   # ANF over the registers, in order
//! keystream_limit = 1000000
//!
//! [[registers]]
//! label = 2
//! length = 10
//! feedback = "x_0 + x_8 + x_9 + x_1x_2"
//! shift = 3
//! period = 1023                     # declared period, optional
//! ```
//! With a `base`, register entries replace fields of the base register with
//! the same label; without one they list every register.
//!
//! Plan:
//! ```toml
//! name = "toy"
//! cipher = "toy"            # built-in cipher or register bank, optional
//! approximation = [0, 1, 2, 3]
//! pairing = [[3]]
//! decimation = [0]
//! targets = [1, 2]
//! bias = -0.5               # optional; default from the combiner
//! ```

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::attack::PlanRequest;
use crate::boolfn::{parse_anf, Anf, Bias};
use crate::cipher::{builtin_spec, CipherSpec};
use crate::error::{Error, Result};
use crate::registers::NlfsrSpec;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegisterEntry {
    pub label: usize,
    pub length: Option<u32>,
    pub feedback: Option<String>,
    pub shift: Option<u64>,
    pub period: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CipherFile {
    pub name: Option<String>,
    pub base: Option<String>,
    pub combiner: Option<String>,
    pub keystream_limit: Option<u128>,
    #[serde(default)]
    pub registers: Vec<RegisterEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub name: Option<String>,
    pub cipher: Option<String>,
    pub approximation: Vec<usize>,
    #[serde(default)]
    pub pairing: Vec<Vec<usize>>,
    #[serde(default)]
    pub decimation: Vec<usize>,
    #[serde(default)]
    pub targets: Vec<usize>,
    pub bias: Option<f64>,
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_text(&text, is_json(path))
}

/// Parses a config document; `json` selects JSON over TOML.
pub fn parse_text<T: for<'de> Deserialize<'de>>(text: &str, json: bool) -> Result<T> {
    if json {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

pub fn load_cipher(path: &Path) -> Result<Arc<CipherSpec>> {
    let file: CipherFile = read(path)?;
    Ok(Arc::new(file.build()?))
}

pub fn load_plan(path: &Path) -> Result<PlanFile> {
    read(path)
}

fn apply(entry: &RegisterEntry, base: Option<&NlfsrSpec>) -> Result<NlfsrSpec> {
    let length = entry
        .length
        .or(base.map(|b| b.length))
        .ok_or_else(|| Error::Config(format!("register {} needs a length", entry.label)))?;
    let mut reg = match (&entry.feedback, base) {
        (Some(fb), _) => NlfsrSpec::with_feedback(entry.label, length, Anf::parse(fb, length as usize)?)?,
        (None, Some(b)) if b.length == length => b.clone(),
        (None, _) => NlfsrSpec::declared(entry.label, length)?,
    };
    if let Some(s) = entry.shift.or(base.map(|b| b.output_shift)) {
        reg = reg.with_shift(s);
    }
    if let Some(p) = entry.period {
        reg = reg.with_declared_period(p);
    } else if let (Some(b), true) = (base, entry.feedback.is_some() && length > 24) {
        reg.declared_period = b.declared_period;
    }
    Ok(reg)
}

impl CipherFile {
    pub fn build(&self) -> Result<CipherSpec> {
        let base = match &self.base {
            Some(name) => Some(
                builtin_spec(name).ok_or_else(|| Error::Config(format!("unknown base cipher {name:?}")))?,
            ),
            None => None,
        };
        let registers = match &base {
            Some(b) => {
                for e in &self.registers {
                    if b.register(e.label).is_none() {
                        return Err(Error::Config(format!("base has no register {}", e.label)));
                    }
                }
                b.registers
                    .iter()
                    .map(|r| match self.registers.iter().find(|e| e.label == r.label) {
                        Some(e) => apply(e, Some(r)),
                        None => Ok(r.clone()),
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            None => self
                .registers
                .iter()
                .map(|e| apply(e, None))
                .collect::<Result<Vec<_>>>()?,
        };
        let combiner = match (&self.combiner, &base) {
            (Some(text), _) => parse_anf(text, registers.len())?,
            (None, Some(b)) => b.combiner.clone(),
            (None, None) => return Err(Error::Config("cipher needs a combiner".into())),
        };
        let name = self
            .name
            .clone()
            .or_else(|| base.as_ref().map(|b| b.name.clone()))
            .unwrap_or_else(|| "custom".into());
        let mut spec = CipherSpec::new(name, registers, combiner)?;
        spec.keystream_limit = self.keystream_limit.or(base.and_then(|b| b.keystream_limit));
        Ok(spec)
    }
}

impl PlanFile {
    pub fn request(&self) -> PlanRequest {
        PlanRequest {
            name: self.name.clone().unwrap_or_else(|| "custom".into()),
            approximation: self.approximation.clone(),
            pairing: self.pairing.clone(),
            decimation: self.decimation.clone(),
            targets: self.targets.clone(),
        }
    }

    pub fn bias(&self) -> Result<Option<Bias>> {
        self.bias.map(Bias::new).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::toy_spec;

    #[test]
    fn override_toy_shift() {
        let file: CipherFile = parse_text(
            "base = \"toy\"\n[[registers]]\nlabel = 2\nshift = 7\n",
            false,
        )
        .unwrap();
        let spec = file.build().unwrap();
        let toy = toy_spec();
        assert_eq!(spec.registers[2].output_shift, 7);
        assert_eq!(spec.registers[2].feedback, toy.registers[2].feedback);
        assert_eq!(spec.combiner, toy.combiner);
    }

    #[test]
    fn standalone_json() {
        let text = r#"{"name": "two", "combiner": "x_0 + x_1",
            "registers": [{"label": 0, "length": 3, "feedback": "x_0 + x_1"},
                          {"label": 1, "length": 4, "feedback": "x_0 + x_1"}]}"#;
        let spec = parse_text::<CipherFile>(text, true).unwrap().build().unwrap();
        assert_eq!(spec.registers.len(), 2);
        assert_eq!(spec.name, "two");
    }

    #[test]
    fn unknown_field_is_rejected() {
        assert!(parse_text::<CipherFile>("colour = 1", false).is_err());
    }

    #[test]
    fn real_feedback_injected_into_named_spec() {
        let file: CipherFile = parse_text(
            "base = \"a128\"\n[[registers]]\nlabel = 0\nfeedback = \"x_0 + x_2\"\n",
            false,
        )
        .unwrap();
        let spec = file.build().unwrap();
        assert!(spec.registers[0].has_feedback());
        assert!(!spec.registers[1].has_feedback());
    }
}
