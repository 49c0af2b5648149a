use std::fmt;
use std::path::{Path, PathBuf};

use nilk::codec::{decode_ring, DecodeError};
use nilk::ring_core::{PrimeField, RingDescriptor};
use serde_json::Value;

/// Input or usage problem; exit status 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl<E: fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn parse_ring_flag(text: &str) -> std::result::Result<RingDescriptor, String> {
    match text {
        "Z" => Ok(RingDescriptor::Integers),
        "Q" => Ok(RingDescriptor::Rationals),
        _ => {
            let p = text
                .strip_prefix('F')
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| format!("expected Z, Q or F<p>, got {text:?}"))?;
            PrimeField::new(p).map_err(|e| e.to_string())?;
            Ok(RingDescriptor::PrimeField(p))
        }
    }
}

pub struct InputFile {
    pub path: PathBuf,
    pub value: Value,
}

impl InputFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        let value =
            serde_json::from_str(&text).map_err(|e| CliError(format!("{}: invalid JSON ({e})", path.display())))?;
        Ok(InputFile { path: path.to_path_buf(), value })
    }

    pub fn load_optional(path: &Path) -> Result<Option<Self>> {
        if path.exists() {
            Self::load(path).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Prefixes a decode error with the file name.
    pub fn err(&self, e: DecodeError) -> CliError {
        CliError(format!("{}: {e}", self.path.display()))
    }

    pub fn field(&self, key: &str) -> Result<&Value> {
        nilk::codec::field(&self.value, key, "$").map_err(|e| self.err(e))
    }

    /// The ring named in the file: either flat (`"ring": "Fp", "p": 5`) or
    /// nested as in ledger files (`"ring": {"ring": "Z"}`).
    pub fn ring(&self) -> Result<Option<RingDescriptor>> {
        match self.value.get("ring") {
            None => Ok(None),
            Some(Value::Object(_)) => decode_ring(&self.value["ring"], "$.ring").map(Some).map_err(|e| self.err(e)),
            Some(_) => decode_ring(&self.value, "$").map(Some).map_err(|e| self.err(e)),
        }
    }
}

/// The flag and every file that names a ring must agree; the default is Z.
pub fn resolve_ring(flag: Option<RingDescriptor>, files: &[&InputFile]) -> Result<RingDescriptor> {
    let mut chosen = flag.map(|d| (d, "--ring".to_string()));
    for f in files {
        if let Some(d) = f.ring()? {
            match &chosen {
                Some((c, from)) if *c != d => {
                    return Err(CliError(format!("{}: ring {d} conflicts with {c} from {from}", f.path.display())));
                }
                Some(_) => {}
                None => chosen = Some((d, f.path.display().to_string())),
            }
        }
    }
    Ok(chosen.map_or(RingDescriptor::Integers, |(d, _)| d))
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}
