//! Run configuration and on-disk formats.
//!
//! Rationals are strings (`"l/p^s"` or `"u*p^e"`), complex numbers are
//! `[re, im]` pairs, and every emitted report carries the configuration that
//! produced it.

use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::TrigPolynomial;
use crate::oracle::ExactMask;
use crate::padic::PAdicRational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub max_support: i64,
    pub seed: u64,
    pub exact: bool,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_support: 20,
            seed: 0,
            exact: false,
            output_format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Precondition(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_support < 0 {
            return Err(Error::Precondition(format!(
                "max_support must be nonnegative, got {}",
                self.max_support
            )));
        }
        Ok(())
    }
}

/// A report body together with the configuration that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub config: RunConfig,
    #[serde(flatten)]
    pub body: T,
}

/// A mask given by coefficients, by a zero set, or both.
///
/// When `zeros` is present the mask is rebuilt from it and an exact
/// counterpart with the same zeros is available.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskFile {
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

impl MaskFile {
    pub fn from_mask(
        m: &TrigPolynomial,
        zeros: Option<&[PAdicRational]>,
        degree: Option<usize>,
    ) -> Self {
        Self {
            p: m.p(),
            coeffs: Some(m.coeffs().to_vec()),
            zeros: zeros.map(|z| z.iter().map(ToString::to_string).collect()),
            degree,
        }
    }

    pub fn zero_points(&self) -> Result<Option<Vec<PAdicRational>>> {
        self.zeros
            .as_ref()
            .map(|z| parse_points(self.p, z))
            .transpose()
    }

    pub fn mask(&self) -> Result<TrigPolynomial> {
        match (&self.coeffs, self.zero_points()?) {
            (Some(c), _) => TrigPolynomial::new(self.p, c.clone()),
            (None, Some(z)) => {
                TrigPolynomial::from_zeros(self.p, self.degree.unwrap_or(z.len()), &z)
            }
            (None, None) => Err(Error::Parse(
                "mask file needs \"coeffs\" or \"zeros\"".into(),
            )),
        }
    }

    /// Exact counterpart: from rational coefficients, else from a zero set that
    /// determines the mask up to scale.
    pub fn exact(&self) -> Result<Option<ExactMask>> {
        let m = self.mask()?;
        if let Some(e) = ExactMask::from_trig(&m) {
            return Ok(Some(e));
        }
        if let Some(z) = self.zero_points()? {
            let e = ExactMask::from_roots(self.p, &dedup(&z));
            if e.degree() == m.degree() {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }
}

fn dedup(z: &[PAdicRational]) -> Vec<PAdicRational> {
    let mut out: Vec<PAdicRational> = Vec::new();
    for x in z {
        let f = x.frac_part();
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

pub fn parse_points(p: u32, items: &[String]) -> Result<Vec<PAdicRational>> {
    items
        .iter()
        .map(|s| PAdicRational::parse(s, Some(p)))
        .collect()
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let c = RunConfig::default();
        assert_eq!(
            (c.tol, c.max_support, c.seed, c.exact),
            (1e-9, 20, 0, false)
        );
        assert!(c.validate().is_ok());
        assert!(RunConfig {
            tol: 0.0,
            ..c.clone()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            max_support: -1,
            ..c
        }
        .validate()
        .is_err());
    }

    #[test]
    fn report_embeds_config() {
        let r = Report {
            config: RunConfig::default(),
            body: serde_json::json!({"is_mra": true}),
        };
        let v: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(v["config"]["tol"], 1e-9);
        assert_eq!(v["config"]["output_format"], "json");
        assert_eq!(v["is_mra"], true);
    }

    #[test]
    fn mask_file_from_zeros_has_exact_form() {
        let f: MaskFile =
            serde_json::from_str(r#"{"p":2,"degree":4,"zeros":["1/2^2","3/2^3","7/2^4","15/16"]}"#)
                .unwrap();
        let m = f.mask().unwrap();
        assert_eq!(m.degree(), 4);
        let e = f.exact().unwrap().unwrap();
        assert!(e.eval(1, 2).is_zero());
        let haar: MaskFile = serde_json::from_str(r#"{"p":2,"coeffs":[[1,0],[1,0]]}"#).unwrap();
        assert!(haar.exact().unwrap().is_some());
        assert!(serde_json::from_str::<MaskFile>(r#"{"p":2}"#)
            .unwrap()
            .mask()
            .is_err());
    }
}
