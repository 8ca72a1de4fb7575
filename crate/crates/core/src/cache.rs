//! Memo cache for correlator values with an optional append-only NDJSON
//! store, one file per model.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use log::warn;
use num_rational::BigRational;
use parking_lot::{Mutex, RwLock};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, parse_rational};
use crate::error::Result;
use crate::model::{CorrelatorSpec, Model};

pub const ENGINE_TAG: &str = "vsc-residue-1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub value: String,
    pub engine: String,
}

#[derive(Debug, Default)]
pub struct VscCache {
    mem: RwLock<FxHashMap<String, BigRational>>,
    dir: Option<PathBuf>,
    loaded: Mutex<HashSet<String>>,
    append: Mutex<()>,
}

impl VscCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(VscCache {
            dir: Some(dir),
            ..Self::default()
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn file_for(&self, model: &Model) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.ndjson", model.key())))
    }

    fn ensure_loaded(&self, model: &Model) {
        let Some(path) = self.file_for(model) else {
            return;
        };
        let mut loaded = self.loaded.lock();
        if !loaded.insert(model.key()) {
            return;
        }
        let Ok(file) = File::open(&path) else {
            return;
        };
        let mut mem = self.mem.write();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let Ok(line) = line else {
                warn!("{}: unreadable line {}", path.display(), lineno + 1);
                continue;
            };
            if line.trim().is_empty() {
                continue;
            }
            let parsed = serde_json::from_str::<CacheEntry>(&line)
                .ok()
                .and_then(|e| parse_rational(&e.value).map(|v| (e, v)));
            match parsed {
                Some((e, v)) if e.engine == ENGINE_TAG => {
                    mem.insert(e.key, v);
                }
                Some(_) => {}
                None => warn!("{}: skipping corrupt line {}", path.display(), lineno + 1),
            }
        }
    }

    pub fn get(&self, spec: &CorrelatorSpec) -> Option<BigRational> {
        self.ensure_loaded(&spec.model);
        self.mem.read().get(&spec.canonical()).cloned()
    }

    pub fn put(&self, spec: &CorrelatorSpec, value: &BigRational) -> Result<()> {
        self.ensure_loaded(&spec.model);
        let key = spec.canonical();
        {
            let mut mem = self.mem.write();
            if mem.contains_key(&key) {
                return Ok(());
            }
            mem.insert(key.clone(), value.clone());
        }
        if let Some(path) = self.file_for(&spec.model) {
            let entry = CacheEntry {
                key,
                value: format_rational(value),
                engine: ENGINE_TAG.to_string(),
            };
            let mut line = serde_json::to_string(&entry).expect("entry serializes");
            line.push('\n');
            let _guard = self.append.lock();
            let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
            f.lock()?;
            f.write_all(line.as_bytes())?;
            f.unlock()?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.mem.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.mem.read().is_empty()
    }
}
