//! JSON documents.
//!
//! Flux data: `{"ends":[{"v":[x,y,z],"a":w},...]}`.
//! Configurations: `{"p":[[re,im],...],"q":[[re,im],...],"b":[[re,im],...]}`;
//! extra fields are ignored on input. Floats are written in shortest
//! round-trip form, so write-then-read is bit-identical.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::{EndConfiguration, FluxData};

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses flux data and checks only its shape; balance and unit length are the caller's policy.
pub fn parse_flux_data(text: &str) -> Result<FluxData> {
    let data: FluxData = from_json(text)?;
    if data.ends.iter().any(|e| e.v.iter().chain(std::iter::once(&e.a)).any(|x| !x.is_finite())) {
        return Err(Error::Parse("non-finite value in flux data".into()));
    }
    Ok(data)
}

pub fn parse_configuration(text: &str) -> Result<EndConfiguration> {
    #[derive(Deserialize)]
    struct Raw {
        p: Vec<crate::C64>,
        q: Vec<crate::C64>,
        b: Vec<crate::C64>,
    }
    let raw: Raw = from_json(text)?;
    if raw.p.iter().chain(&raw.q).chain(&raw.b).any(|z| !z.is_finite()) {
        return Err(Error::Parse("non-finite value in configuration".into()));
    }
    EndConfiguration::new(raw.p, raw.q, raw.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::symmetric_configuration;

    #[test]
    fn configuration_schema() {
        let (cfg, _) = symmetric_configuration(3, 2.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&cfg).unwrap()).unwrap();
        assert_eq!(v["p"][0], serde_json::json!([2.0, 0.0]));
        assert_eq!(v["b"][3], serde_json::json!([3.0, 0.0]));
    }

    #[test]
    fn flux_schema() {
        let d = parse_flux_data(r#"{"ends":[{"v":[0,0,-1],"a":1},{"v":[1,0,0],"a":2}]}"#).unwrap();
        assert_eq!(d.ends[1].a, 2.0);
        assert!(matches!(parse_flux_data(r#"{"ends":[{"v":[0,0],"a":1}]}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let text = r#"{"p":[[1,0]],"q":[[0,0],[1,0]],"b":[[1,0]]}"#;
        assert!(parse_configuration(text).is_err());
    }
}
