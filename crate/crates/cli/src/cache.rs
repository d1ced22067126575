//! On-disk cache of expanded series, keyed by the SHA-256 of the canonical
//! product spec.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use anyhow::Context;
use borwein_core::qproducts::ProductSpec;
use borwein_core::ring::Ring;
use borwein_core::series::TruncatedSeries;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const CACHE_FORMAT_VERSION: u32 = 1;

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn key(spec: &ProductSpec) -> String {
        let mut h = Sha256::new();
        h.update(format!("cache-v{CACHE_FORMAT_VERSION}:"));
        h.update(spec.canonical_string());
        hex::encode(h.finalize())
    }

    fn path(dir: &Path, spec: &ProductSpec) -> PathBuf {
        dir.join(format!("{}.json", Self::key(spec)))
    }

    /// A cached series, if present and written for exactly this spec and
    /// ring. Unreadable entries count as misses.
    pub fn load<R: Ring>(&self, spec: &ProductSpec, ring: &R) -> Option<TruncatedSeries<R>> {
        let path = Self::path(self.dir.as_ref()?, spec);
        let text = fs::read_to_string(path).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v["cache_version"] != json!(CACHE_FORMAT_VERSION)
            || v["spec"] != spec.to_json()
            || v["ring"] != json!(ring.describe())
        {
            return None;
        }
        TruncatedSeries::from_json(ring.clone(), &v["series"]).ok()
    }

    /// Write via a uniquely named temporary file and an atomic rename, so
    /// concurrent writers never expose a partial entry.
    pub fn store<R: Ring>(&self, spec: &ProductSpec, series: &TruncatedSeries<R>) -> anyhow::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let entry = json!({
            "cache_version": CACHE_FORMAT_VERSION,
            "spec": spec.to_json(),
            "ring": series.ring().describe(),
            "series": series.to_json(),
        });
        let target = Self::path(dir, spec);
        let tmp = dir.join(format!(
            ".{}.{}.{}.tmp",
            Self::key(spec),
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut f = fs::File::create(&tmp).with_context(|| format!("writing {}", tmp.display()))?;
        f.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &target).with_context(|| format!("renaming into {}", target.display()))?;
        Ok(())
    }

    /// Expand `(q, q²; q³)_∞^d` through `order`, reusing a cached copy.
    pub fn fractional<R: Ring>(&self, ring: &R, d: &R::Elem, order: usize) -> anyhow::Result<TruncatedSeries<R>> {
        let spec = ProductSpec::borwein_fractional(ring.to_json(d), order);
        if let Some(s) = self.load(&spec, ring) {
            return Ok(s);
        }
        let s = spec.expand(ring)?;
        self.store(&spec, &s)?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use borwein_core::ring::Rationals;
    use num_rational::BigRational;

    #[test]
    fn keys_depend_on_order_and_exponent() {
        let a = ProductSpec::borwein_fractional(json!("1/2"), 10);
        let b = ProductSpec::borwein_fractional(json!("1/2"), 11);
        let c = ProductSpec::borwein_fractional(json!("1/3"), 10);
        assert_ne!(Cache::key(&a), Cache::key(&b));
        assert_ne!(Cache::key(&a), Cache::key(&c));
        assert_eq!(Cache::key(&a), Cache::key(&a.clone()));
        assert_eq!(Cache::key(&a).len(), 64);
    }

    #[test]
    fn round_trip_and_disabled_cache() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().join("nested")));
        let d = BigRational::new(1.into(), 2.into());
        let cold = cache.fractional(&Rationals, &d, 12).unwrap();
        let spec = ProductSpec::borwein_fractional(json!("1/2"), 12);
        assert_eq!(cache.load(&spec, &Rationals), Some(cold.clone()));
        assert_eq!(cache.fractional(&Rationals, &d, 12).unwrap(), cold);
        assert!(Cache::default().load(&spec, &Rationals).is_none());
        Cache::default().store(&spec, &cold).unwrap();
    }

    #[test]
    fn corrupt_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let spec = ProductSpec::borwein_fractional(json!("1"), 5);
        fs::write(Cache::path(dir.path(), &spec), "{not json").unwrap();
        assert!(cache.load(&spec, &Rationals).is_none());
    }
}
