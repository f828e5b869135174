//! Mixture files.
//!
//! ```json
//! {"M": 2, "weights": [1, 0.01, 1]}
//! {"M": 3.5, "knots": [0, 1.5, 3.5], "log_alpha": [-1, 0, "-inf"]}
//! ```

use std::path::Path;

use betamix::{
    ContinuousEvaluator, ContinuousMixture, Density, DiscreteMixture, EvalResult, QuadratureConfig,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixtureFile {
    #[serde(rename = "M")]
    m: f64,
    weights: Option<Vec<f64>>,
    knots: Option<Vec<f64>>,
    log_alpha: Option<Vec<LogValue>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LogValue {
    Number(f64),
    Text(String),
}

impl LogValue {
    fn value(&self) -> Result<f64, CliError> {
        match self {
            LogValue::Number(v) => Ok(*v),
            LogValue::Text(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
            LogValue::Text(t) => Err(CliError::Input(format!(
                "log_alpha entry {t:?} is not a number or \"-inf\""
            ))),
        }
    }
}

pub enum Mixture {
    Discrete(DiscreteMixture),
    Continuous(Box<ContinuousEvaluator>),
}

/// A parsed input file with what the reports need to echo it.
pub struct Loaded {
    pub mixture: Mixture,
    pub echo: serde_json::Value,
    pub sha256: String,
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn load(path: Option<&Path>, quad: QuadratureConfig) -> Result<Loaded, CliError> {
    let path = path.ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let echo: serde_json::Value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("{}: not valid JSON: {e}", path.display())))?;
    let file: MixtureFile = serde_json::from_value(echo.clone())
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mixture = parse(file, quad)?;
    Ok(Loaded {
        mixture,
        echo,
        sha256: digest(&bytes),
    })
}

fn parse(file: MixtureFile, quad: QuadratureConfig) -> Result<Mixture, CliError> {
    let invalid = |e: betamix::Error| CliError::Input(e.to_string());
    match (file.weights, file.knots, file.log_alpha) {
        (Some(weights), None, None) => {
            if file.m != (weights.len() as f64 - 1.0) {
                return Err(CliError::Input(format!(
                    "M = {} but {} weights were given (need M + 1)",
                    file.m,
                    weights.len()
                )));
            }
            DiscreteMixture::new(weights)
                .map(Mixture::Discrete)
                .map_err(invalid)
        }
        (None, Some(knots), Some(log_alpha)) => {
            let values = log_alpha
                .iter()
                .map(LogValue::value)
                .collect::<Result<Vec<_>, _>>()?;
            let mix = ContinuousMixture::new(file.m, knots, values).map_err(invalid)?;
            Ok(Mixture::Continuous(Box::new(ContinuousEvaluator::new(
                mix, quad,
            ))))
        }
        _ => Err(CliError::Input(
            "expected either \"weights\" or both \"knots\" and \"log_alpha\"".into(),
        )),
    }
}

impl Mixture {
    pub fn kind(&self) -> &'static str {
        match self {
            Mixture::Discrete(_) => "discrete",
            Mixture::Continuous(_) => "continuous",
        }
    }

    fn inner(&self) -> &dyn Density {
        match self {
            Mixture::Discrete(d) => d,
            Mixture::Continuous(c) => c.as_ref(),
        }
    }
}

impl Density for Mixture {
    fn order(&self) -> f64 {
        self.inner().order()
    }
    fn is_identically_zero(&self) -> bool {
        self.inner().is_identically_zero()
    }
    fn density(&self, x: f64) -> betamix::Result<f64> {
        self.inner().density(x)
    }
    fn derivatives(&self, x: f64) -> betamix::Result<EvalResult> {
        self.inner().derivatives(x)
    }
    fn normalization(&self) -> betamix::Result<f64> {
        self.inner().normalization()
    }
    fn cdf(&self, x: f64) -> betamix::Result<f64> {
        self.inner().cdf(x)
    }
}
