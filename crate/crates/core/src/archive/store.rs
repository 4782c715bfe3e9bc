//! Byte storage under an archive root, on disk or in memory.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) enum Storage {
    Disk(PathBuf),
    Memory(Mutex<BTreeMap<String, Vec<u8>>>),
}

impl Storage {
    pub(crate) fn root(&self) -> Option<&Path> {
        match self {
            Storage::Disk(root) => Some(root),
            Storage::Memory(_) => None,
        }
    }

    fn path(root: &Path, rel: &str) -> PathBuf {
        rel.split('/')
            .fold(root.to_path_buf(), |p, part| p.join(part))
    }

    pub(crate) fn read(&self, rel: &str) -> Result<Vec<u8>> {
        match self {
            Storage::Disk(root) => {
                let path = Self::path(root, rel);
                fs::read(&path).map_err(|e| Error::io(path, e))
            }
            Storage::Memory(files) => files
                .lock()
                .expect("storage lock")
                .get(rel)
                .cloned()
                .ok_or_else(|| {
                    Error::io(
                        rel,
                        std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
                    )
                }),
        }
    }

    pub(crate) fn exists(&self, rel: &str) -> bool {
        match self {
            Storage::Disk(root) => Self::path(root, rel).is_file(),
            Storage::Memory(files) => files.lock().expect("storage lock").contains_key(rel),
        }
    }

    /// Writes through a temporary sibling and a rename, so readers never see
    /// a half-written file.
    pub(crate) fn write(&self, rel: &str, bytes: &[u8]) -> Result<()> {
        match self {
            Storage::Disk(root) => {
                let path = Self::path(root, rel);
                if let Some(dir) = path.parent() {
                    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                }
                let tmp = path.with_extension("tmp~");
                let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
                file.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
                file.sync_all().map_err(|e| Error::io(&tmp, e))?;
                fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
            }
            Storage::Memory(files) => {
                files
                    .lock()
                    .expect("storage lock")
                    .insert(rel.to_string(), bytes.to_vec());
                Ok(())
            }
        }
    }

    pub(crate) fn remove(&self, rel: &str) -> Result<()> {
        match self {
            Storage::Disk(root) => {
                let path = Self::path(root, rel);
                match fs::remove_file(&path) {
                    Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(Error::io(path, e)),
                    _ => Ok(()),
                }
            }
            Storage::Memory(files) => {
                files.lock().expect("storage lock").remove(rel);
                Ok(())
            }
        }
    }

    /// Names of the entries directly under directory `rel`.
    pub(crate) fn list(&self, rel: &str) -> Result<Vec<String>> {
        match self {
            Storage::Disk(root) => {
                let dir = Self::path(root, rel);
                if !dir.is_dir() {
                    return Ok(Vec::new());
                }
                let mut names = Vec::new();
                for entry in fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))? {
                    let entry = entry.map_err(|e| Error::io(&dir, e))?;
                    names.push(entry.file_name().to_string_lossy().into_owned());
                }
                names.sort();
                Ok(names)
            }
            Storage::Memory(files) => {
                let prefix = format!("{rel}/");
                let mut names: Vec<String> = files
                    .lock()
                    .expect("storage lock")
                    .keys()
                    .filter_map(|k| k.strip_prefix(&prefix))
                    .map(|rest| rest.split('/').next().unwrap_or(rest).to_string())
                    .collect();
                names.dedup();
                Ok(names)
            }
        }
    }
}
