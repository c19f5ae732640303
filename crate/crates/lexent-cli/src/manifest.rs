//! Run manifests: enough of the configuration, seeds and input checksums
//! to reproduce a run byte for byte.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use lexent::vsm::io::write_atomic;

use crate::fail::{CliError, CliResult};

/// FNV-1a over the raw file bytes; cheap and stable across platforms.
pub fn checksum_file(path: &Path) -> CliResult<u64> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    Ok(hash)
}

/// Accumulates manifest lines, then writes them atomically.
pub struct Manifest {
    lines: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest {
            lines: vec![
                format!("command={command}"),
                format!("version={}", env!("CARGO_PKG_VERSION")),
            ],
        }
    }

    pub fn set(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}={value}"));
    }

    /// Record a path and its content checksum.
    pub fn input(&mut self, key: &str, path: &Path) -> CliResult<()> {
        self.set(key, path.display());
        self.set(
            &format!("{key}_fnv64"),
            format!("{:016x}", checksum_file(path)?),
        );
        Ok(())
    }

    /// Record the three files of a matrix bundle.
    pub fn input_bundle(&mut self, key: &str, prefix: &Path) -> CliResult<()> {
        let (m, v, c) = lexent::vsm::io::bundle_paths(prefix);
        self.set(key, prefix.display());
        for (suffix, path) in [("matrix", &m), ("vocab", &v), ("contexts", &c)] {
            self.set(
                &format!("{key}_{suffix}_fnv64"),
                format!("{:016x}", checksum_file(path)?),
            );
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        write_atomic(path, &out)?;
        Ok(())
    }
}

/// Create `<out_dir>/<timestamp>-seed<seed>/`, or the explicit override.
pub fn create_run_dir(out_dir: &Path, seed: u64, explicit: Option<&Path>) -> CliResult<PathBuf> {
    let dir = match explicit {
        Some(d) => d.to_path_buf(),
        None => {
            let now = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .expect("clock before epoch");
            out_dir.join(format!(
                "{}.{:09}-seed{seed}",
                now.as_secs(),
                now.subsec_nanos()
            ))
        }
    };
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::usage(format!("cannot create run dir {}: {e}", dir.display())))?;
    Ok(dir)
}

pub fn require_exists(path: &Path, what: &str) -> CliResult<()> {
    if !path.exists() {
        return Err(CliError::usage(format!(
            "{what} not found: {}",
            path.display()
        )));
    }
    Ok(())
}

pub fn require_bundle_exists(prefix: &Path, what: &str) -> CliResult<()> {
    let (m, v, c) = lexent::vsm::io::bundle_paths(prefix);
    for path in [m, v, c] {
        require_exists(&path, what)?;
    }
    Ok(())
}
