//! Envelope for machine-readable command output.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, contents: &[u8]) -> Self {
        InputDigest {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(contents)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub wall_ms: u64,
}

/// One command run: what went in, what came out and how long it took.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub result: serde_json::Value,
    pub timings: Timings,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<InputDigest>, result: serde_json::Value, started: Instant) -> Self {
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            result,
            timings: Timings {
                wall_ms: started.elapsed().as_millis() as u64,
            },
        }
    }
}
