pub mod approximate;
pub mod experiment;
pub mod forecast;
pub mod rankprofile;
pub mod simulate;

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::config::Effective;
use crate::error::CliResult;
use crate::io;

/// Envelope shared by every JSON report.
#[derive(Debug, Serialize)]
pub struct Report<'a, C: Serialize, R: Serialize> {
    pub schema: &'static str,
    pub config: &'a Effective<C>,
    #[serde(flatten)]
    pub result: R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseChoice {
    None,
    White,
    Alternating,
    Red,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Cadzow,
    Apbr,
    /// One Cadzow iteration.
    Ssa,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Cadzow => "cadzow",
            Self::Apbr => "apbr",
            Self::Ssa => "ssa",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossChoice {
    Unsquared,
    Squared,
}

impl From<LossChoice> for hslra::Loss {
    fn from(l: LossChoice) -> Self {
        match l {
            LossChoice::Unsquared => Self::Unsquared,
            LossChoice::Squared => Self::Squared,
        }
    }
}

/// Seed for stream `stream`, item `index` under `base`; a SplitMix64
/// finalizer keeps neighbouring indices decorrelated.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn load_series(path: &str, column: usize) -> CliResult<Vec<f64>> {
    io::read_series(Path::new(path), column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..3 {
            for i in 0..100 {
                assert!(seen.insert(derive_seed(7, s, i)));
            }
        }
        assert_eq!(derive_seed(7, 1, 2), derive_seed(7, 1, 2));
    }
}
