//! Frozen numerical values: a JSON map from name to value, stored with the
//! exact bit pattern so round trips are lossless.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Entry {
    /// human-readable copy
    value: f64,
    /// `f64::to_bits` as 16 hex digits; authoritative
    bits: String,
}

impl Entry {
    fn new(value: f64) -> Self {
        Entry {
            value,
            bits: hex::encode(value.to_bits().to_be_bytes()),
        }
    }

    fn decode(&self, name: &str) -> Result<f64> {
        let bad = || Error::Fixture {
            name: name.to_string(),
            message: format!("has malformed bits `{}`", self.bits),
        };
        let bytes: [u8; 8] = hex::decode(&self.bits)
            .map_err(|_| bad())?
            .try_into()
            .map_err(|_| bad())?;
        Ok(f64::from_bits(u64::from_be_bytes(bytes)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureCheck {
    pub stored: f64,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl std::fmt::Display for FixtureCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "stored {:e}, got {:e}, |Δ| = {:e}, tol {:e}",
            self.stored,
            self.value,
            (self.stored - self.value).abs(),
            self.tol
        )
    }
}

#[derive(Debug, Clone)]
pub struct FixtureStore {
    path: PathBuf,
    entries: BTreeMap<String, Entry>,
}

impl FixtureStore {
    /// Opens the store; a missing file is an empty store.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let entries = if path.exists() {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
        } else {
            BTreeMap::new()
        };
        Ok(FixtureStore { path, entries })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Result<Option<f64>> {
        self.entries.get(name).map(|e| e.decode(name)).transpose()
    }

    pub fn freeze(&mut self, name: &str, value: f64) {
        self.entries.insert(name.to_string(), Entry::new(value));
    }

    pub fn check(&self, name: &str, value: f64, tol: f64) -> Result<FixtureCheck> {
        let stored = self.get(name)?.ok_or_else(|| Error::Fixture {
            name: name.to_string(),
            message: "is missing from the store".into(),
        })?;
        Ok(FixtureCheck {
            stored,
            value,
            tol,
            passed: (stored - value).abs() <= tol,
        })
    }

    /// Checks against the stored value, or freezes `value` if there is none.
    pub fn record_or_check(&mut self, name: &str, value: f64, tol: f64) -> Result<FixtureCheck> {
        if self.entries.contains_key(name) {
            self.check(name, value, tol)
        } else {
            self.freeze(name, value);
            Ok(FixtureCheck {
                stored: value,
                value,
                tol,
                passed: true,
            })
        }
    }

    pub fn save(&self) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
        }
        let text = serde_json::to_string_pretty(&self.entries).map_err(|e| Error::Format(e.to_string()))?;
        fs::write(&self.path, text + "\n").map_err(|e| Error::io(&self.path, e))
    }
}
