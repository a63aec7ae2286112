//! CSV formatting and run manifests.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// `x` with `digits` significant digits, without an exponent.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes `contents` to `dir/name` and returns the path.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// A CSV written one row at a time and flushed after every row, so an
/// interrupted run leaves only complete rows behind.
pub struct CsvAppender {
    file: File,
}

impl CsvAppender {
    pub fn create(path: &Path, header: &str) -> Result<Self, CliError> {
        let mut file = File::create(path)?;
        writeln!(file, "{header}")?;
        file.sync_data()?;
        Ok(Self { file })
    }

    pub fn append(&mut self, rows: &[String]) -> Result<(), CliError> {
        let mut chunk = String::new();
        for row in rows {
            chunk += row;
            chunk.push('\n');
        }
        self.file.write_all(chunk.as_bytes())?;
        self.file.sync_data()?;
        Ok(())
    }
}

/// `manifest.toml`: tool version, command, seed, the resolved command
/// configuration and any run facts.
pub fn write_manifest<C: Serialize>(
    dir: &Path,
    command: &str,
    seed: u64,
    config: &C,
    run: toml::Table,
) -> Result<(), CliError> {
    let mut table = toml::Table::new();
    table.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    table.insert("command".into(), command.into());
    let seed = i64::try_from(seed).map_or_else(|_| seed.to_string().into(), toml::Value::Integer);
    table.insert("seed".into(), seed);
    let config = toml::Table::try_from(config).map_err(|e| CliError::Runtime(e.to_string()))?;
    table.insert("config".into(), config.into());
    if !run.is_empty() {
        table.insert("run".into(), run.into());
    }
    let text = toml::to_string(&table).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(dir, "manifest.toml", &text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.143203123, 6), "0.143203");
        assert_eq!(sig(1.45301234, 6), "1.45301");
        assert_eq!(sig(12.0, 6), "12.0000");
        assert_eq!(sig(0.0, 6), "0");
        assert_eq!(sig(-0.00123456789, 6), "-0.00123457");
    }
}
