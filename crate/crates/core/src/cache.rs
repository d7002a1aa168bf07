use crate::error::Result;
use serde::{de::DeserializeOwned, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// On-disk JSON memo keyed by a canonical descriptor string.  Corrupt or
/// unreadable entries are recomputed with a warning.
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        std::fs::create_dir_all(dir.as_ref())?;
        Ok(Cache {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    fn path_for(&self, key: &str) -> PathBuf {
        let mut h = Sha256::new();
        h.update(key.as_bytes());
        let digest = h.finalize();
        let mut name = String::with_capacity(32);
        for b in digest.iter().take(16) {
            name.push_str(&format!("{b:02x}"));
        }
        self.dir.join(format!("{name}.json"))
    }

    /// Fetch-or-compute.  The key must encode every input that affects the
    /// value (group id, prime, bounds, functor descriptor, ...).
    pub fn memo<T, F>(&self, key: &str, producer: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        let path = self.path_for(key);
        if path.exists() {
            match std::fs::read_to_string(&path)
                .ok()
                .and_then(|s| serde_json::from_str::<T>(&s).ok())
            {
                Some(v) => return Ok(v),
                None => {
                    eprintln!("warning: cache entry for '{key}' is corrupt; recomputing");
                }
            }
        }
        let value = producer()?;
        let text = serde_json::to_string(&value).expect("cache value serializes");
        std::fs::write(&path, text)?;
        Ok(value)
    }

    pub fn raw_bytes(&self, key: &str) -> Option<Vec<u8>> {
        std::fs::read(self.path_for(key)).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memo_hit_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let v1: Vec<u64> = cache.memo("k1", || Ok(vec![1, 2, 3])).unwrap();
        let bytes1 = cache.raw_bytes("k1").unwrap();
        let v2: Vec<u64> = cache.memo("k1", || panic!("must hit cache")).unwrap();
        let bytes2 = cache.raw_bytes("k1").unwrap();
        assert_eq!(v1, v2);
        assert_eq!(bytes1, bytes2);
    }

    #[test]
    fn different_key_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let _: u64 = cache.memo("bound=64", || Ok(1)).unwrap();
        let v: u64 = cache.memo("bound=128", || Ok(2)).unwrap();
        assert_eq!(v, 2);
    }

    #[test]
    fn corrupt_entry_recomputes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let _: u64 = cache.memo("k", || Ok(7)).unwrap();
        // corrupt it
        let path = dir.path().read_dir().unwrap().next().unwrap().unwrap().path();
        std::fs::write(&path, b"{not json").unwrap();
        let v: u64 = cache.memo("k", || Ok(7)).unwrap();
        assert_eq!(v, 7);
    }
}
