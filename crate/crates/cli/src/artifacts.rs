//! Output directory handling: lockfile, CSV formatting, manifests.

use std::fmt::Write as _;
use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Exclusive ownership of an output directory for the lifetime of the guard.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    lock: PathBuf,
}

impl OutputDir {
    pub fn acquire(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let lock = root.join(".lock");
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => Ok(Self { root: root.to_path_buf(), lock }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(CliError::Locked(root.to_path_buf())),
            Err(e) => Err(CliError::io(&lock, e)),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let p = self.path(name);
        fs::write(&p, contents).map_err(|e| CliError::io(&p, e))?;
        Ok(p)
    }

    /// Fails with a pointer to the producing subcommand when `name` is absent.
    pub fn require(&self, name: &str, producer: &'static str) -> Result<PathBuf, CliError> {
        let p = self.path(name);
        if p.exists() {
            Ok(p)
        } else {
            Err(CliError::MissingArtifact { path: p, producer })
        }
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}

/// Round-trip decimal with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Minimal CSV writer; all fields are numbers or plain identifiers.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { text: format!("{}\n", header.join(",")), columns: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `key = value` manifest written next to a subcommand's outputs.
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(subcommand: &str, config_text: &str) -> Self {
        let mut m = Self { entries: Vec::new() };
        m.add("subcommand", subcommand);
        m.add("version", env!("CARGO_PKG_VERSION"));
        m.add("core_version", beurling_core::VERSION);
        m.add("config_sha256", sha256_hex(config_text.as_bytes()));
        m
    }

    pub fn add(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn add_output(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        self.add("output", format!("{name} sha256={}", sha256_hex(&bytes)));
        Ok(())
    }

    /// Writes `manifest-<subcommand>.txt`; the timestamp line is last.
    pub fn write(mut self, out: &OutputDir) -> Result<PathBuf, CliError> {
        let name = format!("manifest-{}.txt", self.entries[0].1);
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        self.add("timestamp_unix", secs);
        let mut text = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(text, "{k} = {v}");
        }
        out.write(&name, &text)
    }
}
