//! Sources of enumerated meanders and open shapes, optionally backed by a
//! directory of line-delimited JSON files.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{enumerate_meanders, enumerate_partial_shapes, Meander, PartialShape};
use crate::error::{Error, Result};

/// Bumped whenever the on-disk record format changes; files written under
/// another version are treated as missing.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Where meanders and open shapes of a given half-size come from.
pub trait ShapeSource: Sync {
    fn meanders(&self, k: usize) -> Result<Vec<Meander>>;
    fn partial_shapes(&self, k: usize) -> Result<Vec<PartialShape>>;
}

/// Enumerates on every request.
#[derive(Clone, Copy, Debug, Default)]
pub struct InMemory;

impl ShapeSource for InMemory {
    fn meanders(&self, k: usize) -> Result<Vec<Meander>> {
        enumerate_meanders(k)
    }

    fn partial_shapes(&self, k: usize) -> Result<Vec<PartialShape>> {
        enumerate_partial_shapes(k)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    /// Record count per file name.
    pub entries: BTreeMap<String, usize>,
}

/// A cache directory holding `meanders-k{k}.jsonl`, `open-k{k}.jsonl` and a
/// `manifest.json`.
#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
    build_missing: bool,
}

impl DiskCache {
    /// With `build_missing`, absent files are enumerated and written;
    /// otherwise they are a resource error.
    pub fn new(dir: impl Into<PathBuf>, build_missing: bool) -> Self {
        DiskCache {
            dir: dir.into(),
            build_missing,
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn manifest_path(&self) -> PathBuf {
        self.dir.join("manifest.json")
    }

    pub fn manifest(&self) -> Result<Manifest> {
        match fs::read_to_string(self.manifest_path()) {
            Ok(s) => {
                let m: Manifest = serde_json::from_str(&s)?;
                if m.format_version != CACHE_FORMAT_VERSION {
                    return Ok(Manifest {
                        format_version: CACHE_FORMAT_VERSION,
                        entries: BTreeMap::new(),
                    });
                }
                Ok(m)
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Manifest {
                format_version: CACHE_FORMAT_VERSION,
                entries: BTreeMap::new(),
            }),
            Err(e) => Err(e.into()),
        }
    }

    fn write_manifest(&self, m: &Manifest) -> Result<()> {
        let tmp = self.dir.join("manifest.json.tmp");
        fs::write(&tmp, serde_json::to_string_pretty(m)? + "\n")?;
        fs::rename(tmp, self.manifest_path())?;
        Ok(())
    }

    fn load_or_build<T, F>(&self, name: String, build: F) -> Result<Vec<T>>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<Vec<T>>,
    {
        let path = self.dir.join(&name);
        let manifest = self.manifest()?;
        if let Some(&count) = manifest.entries.get(&name) {
            if path.exists() {
                let file = BufReader::new(fs::File::open(&path)?);
                let mut out = Vec::with_capacity(count);
                for line in file.lines() {
                    let line = line?;
                    if !line.is_empty() {
                        out.push(serde_json::from_str(&line)?);
                    }
                }
                if out.len() != count {
                    return Err(Error::invariant(format!(
                        "{} holds {} records, manifest says {count}",
                        path.display(),
                        out.len()
                    )));
                }
                return Ok(out);
            }
        }
        if !self.build_missing {
            return Err(Error::resource(format!(
                "{} is not cached in {}; build it with `noodle cache build`",
                name,
                self.dir.display()
            )));
        }
        let items = build()?;
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{name}.tmp"));
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            for item in &items {
                serde_json::to_writer(&mut w, item)?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        let mut manifest = self.manifest()?;
        manifest.entries.insert(name, items.len());
        self.write_manifest(&manifest)?;
        Ok(items)
    }
}

impl ShapeSource for DiskCache {
    fn meanders(&self, k: usize) -> Result<Vec<Meander>> {
        self.load_or_build(format!("meanders-k{k}.jsonl"), || enumerate_meanders(k))
    }

    fn partial_shapes(&self, k: usize) -> Result<Vec<PartialShape>> {
        self.load_or_build(format!("open-k{k}.jsonl"), || enumerate_partial_shapes(k))
    }
}
