//! Disk cache for computed envelopes and differential matrices, keyed by
//! the `(schema version, command, config)` hash.

use std::path::PathBuf;

use serde_json::Value;

use crate::envelope::{self, Envelope, SCHEMA_VERSION};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// Cache directory from `--cache` or the `KLIM_CACHE_DIR` environment
    /// variable; `None` disables caching.
    pub fn resolve(flag: Option<PathBuf>) -> Option<Cache> {
        let dir = flag.or_else(|| std::env::var_os("KLIM_CACHE_DIR").map(PathBuf::from))?;
        Some(Cache { dir })
    }

    fn envelope_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn matrices_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.matrices.txt"))
    }

    /// Loads a cached envelope when it exists and matches the schema
    /// version, command, and config hash. Corrupt or mismatched entries are
    /// ignored with a warning and recomputed.
    pub fn load(&self, command: &str, config: &Value) -> Option<Envelope> {
        let key = envelope::config_hash(command, config);
        let path = self.envelope_path(&key);
        if !path.exists() {
            return None;
        }
        let text = match std::fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) => {
                eprintln!("warning: unreadable cache entry {}: {e}; recomputing", path.display());
                return None;
            }
        };
        let cached: Envelope = match serde_json::from_str(&text) {
            Ok(cached) => cached,
            Err(e) => {
                eprintln!("warning: corrupt cache entry {}: {e}; recomputing", path.display());
                return None;
            }
        };
        if cached.schema_version != SCHEMA_VERSION
            || cached.command != command
            || cached.config_hash != key
            || cached.config != *config
        {
            eprintln!(
                "warning: stale cache entry {} (schema/config mismatch); recomputing",
                path.display()
            );
            return None;
        }
        Some(cached)
    }

    /// Stores an envelope; errors only warn (the result is still printed).
    pub fn store(&self, envelope: &Envelope) {
        if let Err(e) = std::fs::create_dir_all(&self.dir) {
            eprintln!("warning: cannot create cache dir {}: {e}", self.dir.display());
            return;
        }
        let path = self.envelope_path(&envelope.config_hash);
        let body = serde_json::to_string_pretty(envelope).expect("envelope serializes");
        if let Err(e) = std::fs::write(&path, body) {
            eprintln!("warning: cannot write cache entry {}: {e}", path.display());
        }
    }

    /// Writes the differential matrices of a finite complex in the triplet
    /// text layout:
    ///
    /// ```text
    /// # klim sparse matrix cache v1
    /// # complex k=.. l=.. max_atoms=..
    /// # matrix degree=<t> nrows=<r> ncols=<c>   (map from degree t to t+1)
    /// <row> <col> <numerator>/<denominator>
    /// ```
    pub fn store_matrices(&self, key: &str, complex: &klim::atomic::FiniteComplex) {
        if std::fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let mut body = String::from("# klim sparse matrix cache v1\n");
        body.push_str(&format!(
            "# complex k={} l={} max_atoms={}\n",
            complex.k(),
            complex.l(),
            complex
                .max_atoms()
                .map_or("none".to_string(), |b| b.to_string())
        ));
        for degree in complex.degrees() {
            let matrix = complex.differential_matrix(degree);
            body.push_str(&format!(
                "# matrix degree={degree} nrows={} ncols={}\n",
                matrix.nrows(),
                matrix.ncols()
            ));
            for (row, col, value) in matrix.entries() {
                body.push_str(&format!("{row} {col} {}/{}\n", value.numer(), value.denom()));
            }
        }
        let path = self.matrices_path(key);
        if let Err(e) = std::fs::write(&path, body) {
            eprintln!("warning: cannot write matrix cache {}: {e}", path.display());
        }
    }
}
