use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use super::table::Table;
use super::{resolve_cipher, to_json, Report};
use crate::cipher::{key_load, CipherState, KeyIv, ScheduleVariant};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    #[default]
    Recompute,
    HoldFirst,
}

impl From<Schedule> for ScheduleVariant {
    fn from(s: Schedule) -> Self {
        match s {
            Schedule::Recompute => ScheduleVariant::Recompute,
            Schedule::HoldFirst => ScheduleVariant::HoldFirst,
        }
    }
}

#[derive(Args, Debug)]
pub struct KeystreamArgs {
    /// Built-in cipher (toy, a80, a128); default toy.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Key as hex, most significant bit first.
    #[arg(long)]
    pub key: Option<String>,
    #[arg(long, default_value = "")]
    pub iv: String,
    /// Use only the first bits of the key.
    #[arg(long)]
    pub key_bits: Option<usize>,
    #[arg(long)]
    pub iv_bits: Option<usize>,
    /// Start from these register fills instead of key loading.
    #[arg(long, value_delimiter = ',', conflicts_with = "key")]
    pub fills: Option<Vec<String>>,
    #[arg(long, default_value_t = 64)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub t0: u64,
    #[arg(long, value_enum, default_value_t = Schedule::Recompute)]
    pub schedule: Schedule,
}

#[derive(Serialize)]
struct KeystreamReport {
    cipher: String,
    fills: Vec<u64>,
    t0: u64,
    count: usize,
    /// Bits packed most significant first, zero padded to whole bytes.
    keystream: String,
}

fn parse_fill(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x") {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| Error::InvalidParameter(format!("bad fill {s:?}: {e}")))
}

pub fn pack_hex(bits: &[bool]) -> String {
    let bytes: Vec<u8> = bits
        .chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |b, (i, &x)| b | ((x as u8) << (7 - i))))
        .collect();
    hex::encode(bytes)
}

pub fn run(args: &KeystreamArgs) -> Result<Report> {
    let spec = resolve_cipher(args.builtin.as_deref(), args.spec.as_deref())?;
    let state = match (&args.fills, &args.key) {
        (Some(fills), _) => CipherState::new(spec.clone(), fills.iter().map(|f| parse_fill(f)).collect::<Result<_>>()?)?,
        (None, Some(key)) => {
            let keyiv = KeyIv::from_hex(key, &args.iv, args.key_bits, args.iv_bits)?;
            key_load(spec.clone(), &keyiv, args.schedule.into())?
        }
        (None, None) => return Err(Error::Config("give --key or --fills".into())),
    };
    let bits = state.keystream(args.t0, args.count)?;
    let report = KeystreamReport {
        cipher: spec.name.clone(),
        fills: state.fills().to_vec(),
        t0: args.t0,
        count: args.count,
        keystream: pack_hex(&bits),
    };
    let mut csv = Table::new(["t", "bit"]);
    for (i, b) in bits.iter().enumerate() {
        csv.row([(args.t0 + i as u64).to_string(), (*b as u8).to_string()]);
    }
    Ok(Report { json: to_json(&report), text: format!("{}\n", report.keystream), csv: csv.csv(), status: 0 })
}
