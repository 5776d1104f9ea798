//! On-disk result cache: one file per key, written by atomic rename.

use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use wml_core::Error;

pub struct Cache {
    dir: PathBuf,
}

fn io(e: std::io::Error) -> Error {
    Error::Internal(format!("cache: {e}"))
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache, Error> {
        std::fs::create_dir_all(dir).map_err(io)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    /// Hex SHA-256 of the version stamp and the given parts, newline separated.
    pub fn key(kind: &str, parts: &[String]) -> String {
        let mut h = Sha256::new();
        h.update(wml_core::CACHE_STAMP.as_bytes());
        h.update(b"\n");
        h.update(kind.as_bytes());
        for p in parts {
            h.update(b"\n");
            h.update(p.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Vec<u8>> {
        std::fs::read(self.path(key)).ok()
    }

    pub fn put(&self, key: &str, bytes: &[u8]) -> Result<(), Error> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(bytes).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(self.path(key)).map_err(|e| io(e.error))?;
        Ok(())
    }
}
