use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub group: String,
    pub name: String,
    pub passed: bool,
    /// `null` when the check could not be evaluated.
    pub measured: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the canonical input, hex.
    pub input_digest: String,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
    pub wall_time_s: f64,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
