use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct Timings {
    pub elapsed_ms: f64,
}

/// Machine-readable record of one run. Everything except `timings` is a
/// function of the command line and the input files; `digest` hashes exactly
/// that part.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input_hash: String,
    pub exhausted: Option<bool>,
    pub result: Value,
    pub outputs: Vec<String>,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Serialize)]
struct Stable<'a> {
    command: &'a [String],
    input_hash: &'a str,
    exhausted: Option<bool>,
    result: &'a Value,
    outputs: &'a [String],
}

impl RunReport {
    pub fn new(
        command: Vec<String>,
        input_hash: String,
        exhausted: Option<bool>,
        result: Value,
        outputs: Vec<String>,
        timings: Option<Timings>,
    ) -> Self {
        let stable = Stable { command: &command, input_hash: &input_hash, exhausted, result: &result, outputs: &outputs };
        let digest = hex(&Sha256::digest(serde_json::to_vec(&stable).expect("report serializes")));
        RunReport { command, input_hash, exhausted, result, outputs, digest, timings }
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the command words followed by the contents of every input file.
pub fn input_hash(command: &[String], files: &[PathBuf]) -> std::io::Result<String> {
    let mut h = Sha256::new();
    for w in command {
        h.update(w.as_bytes());
        h.update([0]);
    }
    for f in files {
        h.update(fs::read(f)?);
        h.update([0]);
    }
    Ok(hex(&h.finalize()))
}

/// Writes through a sibling temporary file so a failed run leaves nothing behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
