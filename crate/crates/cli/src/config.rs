//! Run configuration: flags and `HSLRA_*` variables override the config
//! file, which overrides built-in defaults.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::commands::{
    approximate::ApproximateSettings, experiment::ExperimentSettings, forecast::ForecastSettings,
    rankprofile::RankProfileSettings, simulate::SimulateSettings,
};
use crate::error::{arg_error, CliError, CliResult};

pub const CONFIG_SCHEMA: &str = "hslra.config/1";
pub const DEFAULT_SEED: u64 = 1;

/// Declares a command's clap arguments (all optional, each with an
/// `HSLRA_` variable) next to the resolved settings struct and its defaults.
macro_rules! settings {
    (
        $(#[$meta:meta])*
        $args:ident => $settings:ident {
            $( $(#[doc = $doc:literal])* $field:ident : $ty:ty = $default:expr, $env:literal; )*
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, clap::Args)]
        pub struct $args {
            $(
                $(#[doc = $doc])*
                #[arg(long, env = $env)]
                pub $field: Option<$ty>,
            )*
        }

        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
        #[serde(default, deny_unknown_fields)]
        pub struct $settings {
            $( $(#[doc = $doc])* pub $field: $ty, )*
        }

        impl Default for $settings {
            fn default() -> Self {
                Self { $( $field: $default, )* }
            }
        }

        impl $args {
            /// Overlays every explicitly given flag onto `base`.
            pub fn apply(&self, mut base: $settings) -> $settings {
                $( if let Some(v) = &self.$field { base.$field = v.clone(); } )*
                base
            }
        }
    };
}
pub(crate) use settings;

/// Contents of a `--config` file (TOML, or JSON by extension). A report's
/// `config` object has the same shape and can be fed back verbatim.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: Option<String>,
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub simulate: Option<SimulateSettings>,
    pub approximate: Option<ApproximateSettings>,
    pub forecast: Option<ForecastSettings>,
    pub experiment: Option<ExperimentSettings>,
    pub rankprofile: Option<RankProfileSettings>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed: Result<Self, String> = if is_json {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        let file = parsed.map_err(|e| CliError::Argument(format!("{}: {e}", path.display())))?;
        if let Some(schema) = &file.schema {
            if schema != CONFIG_SCHEMA {
                return arg_error(format!(
                    "{}: unsupported config schema {schema:?} (expected {CONFIG_SCHEMA:?})",
                    path.display()
                ));
            }
        }
        Ok(file)
    }
}

/// Fully resolved configuration echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct Effective<S: Serialize> {
    pub schema: &'static str,
    pub command: &'static str,
    pub seed: u64,
    #[serde(flatten)]
    pub section: Section<S>,
}

/// Settings keyed by command name, as in the config file.
#[derive(Debug, Clone)]
pub struct Section<S> {
    pub name: &'static str,
    pub settings: S,
}

impl<S: Serialize> Serialize for Section<S> {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry(self.name, &self.settings)?;
        map.end()
    }
}

impl<S: Serialize> Effective<S> {
    pub fn new(command: &'static str, seed: u64, settings: S) -> Self {
        Self {
            schema: CONFIG_SCHEMA,
            command,
            seed,
            section: Section { name: command, settings },
        }
    }

    pub fn settings(&self) -> &S {
        &self.section.settings
    }
}

/// Parses a list of values: comma-separated numbers and ranges
/// `lin:start:stop:count` or `log:start:stop:count` (geometric spacing).
pub fn parse_values(spec: &str, what: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_f64(single, what)?),
            [kind @ ("lin" | "log"), a, b, n] => {
                let (a, b) = (parse_f64(a, what)?, parse_f64(b, what)?);
                let n: usize = n
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| CliError::Argument(format!("{what}: bad count in {item:?}")))?;
                if *kind == "log" && !(a > 0.0 && b > 0.0) {
                    return arg_error(format!("{what}: log range needs positive endpoints in {item:?}"));
                }
                for i in 0..n {
                    let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                    let x = if *kind == "lin" {
                        a + (b - a) * t
                    } else {
                        let (la, lb) = (a.log10(), b.log10());
                        10f64.powf(la + (lb - la) * t)
                    };
                    out.push(if i == n - 1 { b } else { x });
                }
            }
            _ => return arg_error(format!("{what}: cannot parse {item:?}")),
        }
    }
    if out.is_empty() {
        return arg_error(format!("{what}: empty value list"));
    }
    Ok(out)
}

fn parse_f64(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Argument(format!("{what}: {s:?} is not a finite number")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("1, 2.5", "x").unwrap(), vec![1.0, 2.5]);
        assert_eq!(parse_values("lin:0:1:5", "x").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let log = parse_values("log:1e-4:1e-1:7", "x").unwrap();
        assert_eq!(log.len(), 7);
        assert_eq!(log[0], 1e-4);
        assert!((log[2] - 1e-3).abs() < 1e-18);
        assert_eq!(log[6], 1e-1);
        assert!(parse_values("", "x").is_err());
        assert!(parse_values("log:0:1:3", "x").is_err());
        assert!(parse_values("lin:0:1", "x").is_err());
        assert!(parse_values("nan", "x").is_err());
    }
}
