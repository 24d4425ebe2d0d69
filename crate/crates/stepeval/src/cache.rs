//! Content-addressed cache of backend interactions.
//!
//! Every entry is keyed by a digest of the canonicalized request envelope
//! (object keys sorted recursively; payload strings byte-preserved). Entries
//! are write-once: a second put with different bytes is a conflict, never a
//! silent overwrite. The directory layout is two levels of digest prefix, so
//! the whole cache can be copied to another machine and replayed.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Canonicalizes a JSON value: object keys sorted, arrays and scalars as-is.
pub fn canonicalize(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut sorted: Vec<(&String, &Value)> = map.iter().collect();
            sorted.sort_by(|a, b| a.0.cmp(b.0));
            let mut out = serde_json::Map::new();
            for (k, v) in sorted {
                out.insert(k.clone(), canonicalize(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(canonicalize).collect()),
        other => other.clone(),
    }
}

/// Digest of a canonicalized request envelope.
pub fn request_key(request: &Value) -> String {
    let canonical = serde_json::to_vec(&canonicalize(request)).expect("json is serializable");
    hex::encode(Sha256::digest(&canonical))
}

pub struct CacheStore {
    root: PathBuf,
    write_lock: Mutex<()>,
}

impl CacheStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Self {
            root,
            write_lock: Mutex::new(()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn entry_dir(&self, digest: &str) -> PathBuf {
        self.root.join(&digest[0..2]).join(&digest[2..4]).join(digest)
    }

    pub fn get(&self, digest: &str) -> Result<Option<Vec<u8>>> {
        let path = self.entry_dir(digest).join("response.json");
        match fs::read(&path) {
            Ok(bytes) => Ok(Some(bytes)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Write-once put. A concurrent put of identical bytes is a no-op;
    /// different bytes for the same digest is a `CacheConflict`.
    pub fn put(&self, digest: &str, request: &Value, response: &[u8], backend: &str) -> Result<()> {
        let _guard = self.write_lock.lock().expect("cache lock poisoned");
        let dir = self.entry_dir(digest);
        let response_path = dir.join("response.json");
        if let Ok(existing) = fs::read(&response_path) {
            if existing == response {
                return Ok(());
            }
            return Err(Error::CacheConflict {
                digest: digest.to_string(),
            });
        }
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("request.json"), serde_json::to_vec_pretty(request)?)?;
        fs::write(
            dir.join("meta.json"),
            serde_json::to_vec_pretty(&serde_json::json!({
                "backend": backend,
                "stored_at": now_rfc3339(),
            }))?,
        )?;
        fs::write(response_path, response)?;
        Ok(())
    }

    /// Explicit refresh: replaces an entry and logs the override to stderr.
    pub fn put_override(
        &self,
        digest: &str,
        request: &Value,
        response: &[u8],
        backend: &str,
    ) -> Result<()> {
        let _guard = self.write_lock.lock().expect("cache lock poisoned");
        let dir = self.entry_dir(digest);
        if dir.join("response.json").exists() {
            eprintln!("cache: overriding entry {digest}");
            fs::remove_dir_all(&dir)?;
        }
        drop(_guard);
        self.put(digest, request, response, backend)
    }
}

pub fn now_rfc3339() -> String {
    // Seconds since epoch rendered as a UTC timestamp without pulling in a
    // date-time crate; civil conversion per Howard Hinnant's algorithm.
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs() as i64)
        .unwrap_or(0);
    let days = secs.div_euclid(86_400);
    let rem = secs.rem_euclid(86_400);
    let (h, m, s) = (rem / 3600, (rem % 3600) / 60, rem % 60);
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let mo = if mp < 10 { mp + 3 } else { mp - 9 };
    let y = if mo <= 2 { y + 1 } else { y };
    format!("{y:04}-{mo:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn field_order_permutations_share_a_digest() {
        let a = json!({"backend": "m1", "kind": "generate", "payload": {"prompt": "hi", "temperature": 0.0}});
        let b = json!({"payload": {"temperature": 0.0, "prompt": "hi"}, "kind": "generate", "backend": "m1"});
        assert_eq!(request_key(&a), request_key(&b));
    }

    #[test]
    fn model_name_participates_in_key() {
        let a = json!({"backend": "m1", "kind": "generate", "payload": {"prompt": "hi"}});
        let b = json!({"backend": "m2", "kind": "generate", "payload": {"prompt": "hi"}});
        assert_ne!(request_key(&a), request_key(&b));
    }

    #[test]
    fn payload_bytes_are_preserved_in_key() {
        let a = json!({"payload": {"prompt": "a  b"}});
        let b = json!({"payload": {"prompt": "a b"}});
        assert_ne!(request_key(&a), request_key(&b));
    }

    #[test]
    fn put_get_round_trip_and_write_once() {
        let dir = tempfile::tempdir().unwrap();
        let store = CacheStore::open(dir.path()).unwrap();
        let req = json!({"kind": "generate", "payload": {"prompt": "x"}});
        let digest = request_key(&req);

        assert!(store.get(&digest).unwrap().is_none());
        store.put(&digest, &req, b"reply-bytes", "mock").unwrap();
        assert_eq!(store.get(&digest).unwrap().unwrap(), b"reply-bytes");

        // identical second put is a no-op
        store.put(&digest, &req, b"reply-bytes", "mock").unwrap();
        // different bytes conflict
        let err = store.put(&digest, &req, b"other", "mock").unwrap_err();
        assert!(matches!(err, Error::CacheConflict { .. }));

        // explicit override replaces
        store.put_override(&digest, &req, b"other", "mock").unwrap();
        assert_eq!(store.get(&digest).unwrap().unwrap(), b"other");
    }

    #[test]
    fn timestamp_renders_utc() {
        let ts = now_rfc3339();
        assert_eq!(ts.len(), 20);
        assert!(ts.ends_with('Z'));
    }
}
