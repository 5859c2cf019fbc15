use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use sha2::{Digest, Sha256};

use crate::dsbk::Library;
use crate::term::Ty;

use super::persist::{decode_space, encode_space, PersistError};
use super::space::{enumerate_with, CandidateSpace, EnumError, EnumOptions};

type Slot = Arc<OnceLock<Result<Arc<CandidateSpace>, EnumError>>>;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache directory {path}: {reason}")]
    Io { path: PathBuf, reason: String },
    #[error(transparent)]
    Persist(#[from] PersistError),
}

/// Concurrent map of candidate spaces. Concurrent requests for the same key
/// build the space once; the others wait for it.
#[derive(Default)]
pub struct SpaceCache {
    slots: Mutex<HashMap<String, Slot>>,
    dir: Option<PathBuf>,
}

impl SpaceCache {
    pub fn new() -> SpaceCache {
        SpaceCache::default()
    }

    /// A cache that also reads and writes blobs under `dir`.
    pub fn with_dir(dir: impl Into<PathBuf>) -> Result<SpaceCache, CacheError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CacheError::Io {
            path: dir.clone(),
            reason: e.to_string(),
        })?;
        Ok(SpaceCache {
            slots: Mutex::default(),
            dir: Some(dir),
        })
    }

    pub fn global() -> &'static SpaceCache {
        static GLOBAL: OnceLock<SpaceCache> = OnceLock::new();
        GLOBAL.get_or_init(SpaceCache::new)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn len(&self) -> usize {
        self.slots.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.slots.lock().unwrap().clear();
    }

    fn key(library: &Library, target: &Ty, d_max: u32, options: &EnumOptions) -> String {
        let mut h = Sha256::new();
        h.update(library.fingerprint().as_bytes());
        h.update(format!("|{target}|{d_max}|{}", options.cache_key()).as_bytes());
        crate::catalog::hex(&h.finalize())
    }

    pub fn get_or_build(
        &self,
        library: &Library,
        target: &Ty,
        d_max: u32,
        options: &EnumOptions,
    ) -> Result<Arc<CandidateSpace>, EnumError> {
        let key = SpaceCache::key(library, target, d_max, options);
        let slot = self
            .slots
            .lock()
            .unwrap()
            .entry(key.clone())
            .or_default()
            .clone();
        slot.get_or_init(|| {
            if let Some(space) = self.load(&key, library) {
                return Ok(Arc::new(space));
            }
            let space = enumerate_with(library, target, d_max, options)?;
            self.store(&key, &space);
            Ok(Arc::new(space))
        })
        .clone()
    }

    fn blob_path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.space")))
    }

    fn load(&self, key: &str, library: &Library) -> Option<CandidateSpace> {
        let bytes = fs::read(self.blob_path(key)?).ok()?;
        decode_space(&bytes, library).ok()
    }

    fn store(&self, key: &str, space: &CandidateSpace) {
        if let Some(path) = self.blob_path(key) {
            let tmp = path.with_extension("tmp");
            if fs::write(&tmp, encode_space(space)).is_ok() {
                let _ = fs::rename(&tmp, &path);
            }
        }
    }
}
