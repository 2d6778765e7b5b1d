use hslra::{generate_damped, generate_noise, DampedSinusoidModel, NoiseKind, NoiseModel, TimeSeries64};
use serde::Serialize;

use super::{NoiseChoice, Report};
use crate::config::{settings, Effective};
use crate::error::{arg_error, CliResult};
use crate::io::num;
use crate::Context;

pub const SCHEMA: &str = "hslra.simulate/1";

settings! {
    SimulateArgs => SimulateSettings {
        /// Number of samples.
        n: usize = 20, "HSLRA_N";
        /// Signal is exp(damping·j)·sin(2π·frequency·j), j = 1…n.
        damping: f64 = 0.05, "HSLRA_DAMPING";
        frequency: f64 = 0.2, "HSLRA_FREQUENCY";
        noise: NoiseChoice = NoiseChoice::White, "HSLRA_NOISE";
        /// White or red noise level.
        sigma: f64 = 0.3, "HSLRA_SIGMA";
        /// Amplitude of the alternating pattern c·(−1)^j.
        c: f64 = 0.2, "HSLRA_C";
        /// AR(1) coefficient for red noise.
        alpha: f64 = 0.5, "HSLRA_ALPHA";
    }
}

impl SimulateSettings {
    pub fn validate(&self) -> CliResult<()> {
        if self.n < 2 {
            return arg_error("n must be at least 2");
        }
        self.noise_kind().map(|_| ())
    }

    fn noise_kind(&self) -> CliResult<Option<NoiseKind<f64>>> {
        let kind = match self.noise {
            NoiseChoice::None => return Ok(None),
            NoiseChoice::White => NoiseKind::White { sigma: self.sigma },
            NoiseChoice::Alternating => NoiseKind::Alternating { c: self.c },
            NoiseChoice::Red => NoiseKind::Red {
                sigma: self.sigma,
                alpha: self.alpha,
            },
        };
        NoiseModel::new(kind, 0)?;
        Ok(Some(kind))
    }

    /// Signal and noise under `seed`.
    pub fn generate(&self, seed: u64) -> CliResult<(TimeSeries64, TimeSeries64)> {
        let model = DampedSinusoidModel::single(self.damping, self.frequency)?;
        let signal = generate_damped(&model, self.n)?;
        let noise = match self.noise_kind()? {
            Some(kind) => generate_noise(&NoiseModel::new(kind, seed)?, self.n)?,
            None => TimeSeries64::new(vec![0.0; self.n])?,
        };
        Ok((signal, noise))
    }
}

#[derive(Serialize)]
struct Outcome {
    n: usize,
    files: Vec<&'static str>,
}

pub fn run(ctx: &Context, settings: SimulateSettings) -> CliResult<()> {
    let cfg = Effective::new("simulate", ctx.seed, settings);
    let (signal, noise) = cfg.settings().generate(ctx.seed)?;
    let sum = signal.add(&noise)?;
    let rows = (0..signal.len()).map(|i| {
        vec![
            (i + 1).to_string(),
            num(signal.values()[i]),
            num(noise.values()[i]),
            num(sum.values()[i]),
        ]
    });
    ctx.out.csv("series.csv", &["k", "signal", "noise", "series"], rows)?;
    ctx.out.json(
        "simulate.json",
        &Report {
            schema: SCHEMA,
            config: &cfg,
            result: Outcome {
                n: signal.len(),
                files: vec!["series.csv"],
            },
        },
    )?;
    Ok(())
}
