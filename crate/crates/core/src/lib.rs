//! Achterbahn-128/80 keystream generators and a workbench for their
//! linear-approximation / parity-check cryptanalysis.
//!
//! * [`boolfn`]: truth tables, Walsh spectra, ANF and function profiles.
//! * [`registers`]: NLFSR clocking, periods and decimation.
//! * [`cipher`]: keystream generation, key loading, built-in instances.
//! * [`attack`]: parity-check plans, complexity estimates, distinguishers and
//!   initial-state recovery.

pub mod attack;
pub mod boolfn;
pub mod cipher;
pub mod cli;
pub mod config;
pub mod error;
pub mod registers;

pub use error::{Error, Result};
