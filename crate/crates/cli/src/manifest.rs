use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cli_error::{CliError, CliResult};

/// Provenance block embedded in every emitted report. `created_unix` is the
/// only field that varies between identical runs; determinism checks strip
/// exactly that key.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub created_unix: u64,
    pub master_seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub digest: String,
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

pub fn digest_file(path: impl AsRef<Path>) -> CliResult<InputDigest> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(InputDigest {
        path: path.display().to_string(),
        digest: format!("fnv1a64:{:016x}", fnv1a64(&bytes)),
    })
}

impl RunManifest {
    pub fn new(
        master_seed: Option<u64>,
        inputs: Vec<InputDigest>,
        config: serde_json::Value,
    ) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix,
            master_seed,
            inputs,
            config,
        }
    }
}
