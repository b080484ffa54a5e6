//! JSON run configuration. Reals travel as decimal strings and are parsed
//! only after the working precision is set.

use serde::{Deserialize, Serialize};
use sobolev_core::jacobi::JacobiParams;
use sobolev_core::numkernel::{set_working_precision, BigReal, DEFAULT_PRECISION};
use sobolev_core::sobolev::{MassPoint, SobolevProduct};

use crate::CliError;

pub const MIN_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub alpha: String,
    pub beta: String,
    #[serde(default)]
    pub points: Vec<RawPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPoint {
    pub c: String,
    pub terms: Vec<RawTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub k: usize,
    pub lambda: String,
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

/// A validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub product: SobolevProduct,
    pub n: Option<usize>,
    pub precision_bits: u32,
}

/// 1-based line of the first occurrence of `needle` in `text`.
fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.lines().position(|l| l.contains(needle)).map(|i| i + 1)
}

fn config_error(text: &str, field: &str, value: Option<&str>, message: String) -> CliError {
    CliError::Config {
        line: value.and_then(|v| line_of(text, &format!("\"{v}\""))),
        field: field.to_string(),
        message,
    }
}

impl RunConfig {
    /// Parses `text`, sets the working precision (`precision` overrides the
    /// file) and builds the product.
    pub fn parse(text: &str, precision: Option<u32>) -> Result<Self, CliError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Config {
            line: Some(e.line()),
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        let bits = precision.unwrap_or(raw.precision_bits);
        if !(MIN_PRECISION..=MAX_PRECISION).contains(&bits) {
            return Err(CliError::Config {
                line: line_of(text, "\"precision_bits\""),
                field: "precision_bits".into(),
                message: format!("{bits} bits outside [{MIN_PRECISION}, {MAX_PRECISION}]"),
            });
        }
        set_working_precision(bits);

        let real = |field: &str, s: &str| {
            BigReal::parse(s).map_err(|e| config_error(text, field, Some(s), e.to_string()))
        };
        let alpha = real("alpha", &raw.alpha)?;
        let beta = real("beta", &raw.beta)?;
        let params = JacobiParams::new(alpha, beta)
            .map_err(|e| config_error(text, "alpha/beta", Some(&raw.alpha), e.to_string()))?;
        let mut points = Vec::with_capacity(raw.points.len());
        for (j, p) in raw.points.iter().enumerate() {
            let c = real(&format!("points[{j}].c"), &p.c)?;
            let mut terms = Vec::with_capacity(p.terms.len());
            for (i, t) in p.terms.iter().enumerate() {
                terms.push((t.k, real(&format!("points[{j}].terms[{i}].lambda"), &t.lambda)?));
            }
            let point = MassPoint::new(c, terms)
                .map_err(|e| config_error(text, &format!("points[{j}]"), Some(&p.c), e.to_string()))?;
            points.push(point);
        }
        let product = SobolevProduct::new(params, points)
            .map_err(|e| config_error(text, "points", None, e.to_string()))?;
        Ok(RunConfig {
            product,
            n: raw.n,
            precision_bits: bits,
        })
    }

    /// Canonical form: points sorted by location, shortest round-trip decimals.
    pub fn to_raw(&self) -> RawConfig {
        let p = &self.product;
        RawConfig {
            alpha: p.jacobi().alpha().to_shortest_decimal(),
            beta: p.jacobi().beta().to_shortest_decimal(),
            points: p
                .points()
                .iter()
                .map(|m| RawPoint {
                    c: m.c().to_shortest_decimal(),
                    terms: m
                        .terms()
                        .iter()
                        .map(|(k, l)| RawTerm {
                            k: *k,
                            lambda: l.to_shortest_decimal(),
                        })
                        .collect(),
                })
                .collect(),
            n: self.n,
            precision_bits: self.precision_bits,
        }
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("config serializes") + "\n"
    }
}
