use hslra::{detect_plateau, rank_profile, TimeSeries64};
use serde::Serialize;

use super::{load_series, Report};
use crate::config::{settings, Effective};
use crate::error::{arg_error, CliResult};
use crate::Context;

pub const SCHEMA: &str = "hslra.rankprofile/1";

settings! {
    RankProfileArgs => RankProfileSettings {
        /// Series CSV (one sample per line, optional header).
        input: String = String::new(), "HSLRA_INPUT";
        /// 0-based column to read.
        column: usize = 0, "HSLRA_COLUMN";
        /// Singular values above tol·σ₁ count towards the rank.
        tol: f64 = 1e-8, "HSLRA_TOL";
    }
}

impl RankProfileSettings {
    pub fn validate(&self) -> CliResult<()> {
        if self.input.is_empty() {
            return arg_error("rankprofile needs --input");
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return arg_error("tol must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Outcome {
    n: usize,
    plateau: Option<usize>,
    max_rank: usize,
}

pub fn run(ctx: &Context, settings: RankProfileSettings) -> CliResult<()> {
    let cfg = Effective::new("rankprofile", ctx.seed, settings);
    let s = cfg.settings();
    let series = TimeSeries64::new(load_series(&s.input, s.column)?)?;
    let profile = rank_profile(&series, s.tol)?;
    let plateau = detect_plateau(&profile);
    let rows = profile
        .iter()
        .enumerate()
        .map(|(i, r)| vec![(i + 1).to_string(), r.to_string()]);
    ctx.out.csv("rankprofile.csv", &["L", "rank"], rows)?;
    ctx.out.json(
        "rankprofile.json",
        &Report {
            schema: SCHEMA,
            config: &cfg,
            result: Outcome {
                n: series.len(),
                plateau,
                max_rank: profile.iter().copied().max().unwrap_or(0),
            },
        },
    )?;
    Ok(())
}
