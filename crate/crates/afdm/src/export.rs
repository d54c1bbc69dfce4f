//! CSV tables with `#` metadata lines, written atomically.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use tempfile::NamedTempFile;

use crate::config::config_hash;
use crate::error::{CliError, CliResult};

const CONFIG_PREFIX: &str = "# config:";

/// A long-format table plus its metadata block.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), ..Self::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Writes metadata, the embedded config and the CSV body.
    pub fn write_to<W: Write>(&self, config_toml: &str, out: W) -> CliResult<()> {
        let mut out = out;
        writeln!(out, "# config_hash: {}", config_hash(config_toml))?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        for line in config_toml.lines() {
            if line.is_empty() {
                writeln!(out, "{CONFIG_PREFIX}")?;
            } else {
                writeln!(out, "{CONFIG_PREFIX} {line}")?;
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes to a temporary file beside `path`, then renames it into place.
    pub fn save(&self, config_toml: &str, path: &Path) -> CliResult<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        fs::create_dir_all(dir)?;
        let mut tmp = NamedTempFile::new_in(dir)?;
        self.write_to(config_toml, tmp.as_file_mut())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| CliError::Runtime(format!("cannot move output into place: {}", e.error)))?;
        Ok(())
    }
}

/// Metadata block of a written table.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub config_hash: String,
    pub metadata: Vec<(String, String)>,
    pub config_toml: String,
}

impl Header {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// True when the embedded config re-hashes to the recorded hash.
    pub fn verify(&self) -> bool {
        config_hash(&self.config_toml) == self.config_hash
    }
}

pub fn read_header(path: &Path) -> CliResult<Header> {
    let mut hash = None;
    let mut metadata = Vec::new();
    let mut config = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        let Some(rest) = line.strip_prefix('#') else { break };
        if let Some(c) = line.strip_prefix(CONFIG_PREFIX) {
            config.push(c.strip_prefix(' ').unwrap_or(c).to_string());
        } else if let Some((k, v)) = rest.trim_start().split_once(": ") {
            if k == "config_hash" {
                hash = Some(v.to_string());
            } else {
                metadata.push((k.to_string(), v.to_string()));
            }
        }
    }
    let config_hash = hash.ok_or_else(|| CliError::Runtime(format!("{}: no config_hash line", path.display())))?;
    Ok(Header { config_hash, metadata, config_toml: config.join("\n") })
}

/// Reads the CSV body, skipping the metadata block.
pub fn read_table(path: &Path) -> CliResult<Table> {
    let header = read_header(path)?;
    let text = fs::read_to_string(path)?;
    let body: String = text.lines().skip_while(|l| l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let mut table = Table {
        metadata: header.metadata,
        header: r.headers()?.iter().map(String::from).collect(),
        rows: Vec::new(),
    };
    for rec in r.records() {
        table.rows.push(rec?.iter().map(String::from).collect());
    }
    Ok(table)
}

/// Shortest representation that round-trips.
pub fn num(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["tau", "nu", "value"]);
        t.meta("mu4", 1.32);
        t.push(vec!["0".into(), "0".into(), num(16424.96)]);
        t.push(vec!["1".into(), "-0.5".into(), num(128.0)]);
        t
    }

    #[test]
    fn header_rehash_matches() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let toml = "a = 1\n\n[b]\nc = \"x\"\n";
        sample().save(toml, &path).unwrap();
        let h = read_header(&path).unwrap();
        assert!(h.verify());
        assert_eq!(h.get("mu4"), Some("1.32"));
        assert_eq!(h.config_toml, toml.trim_end());
        let back = read_table(&path).unwrap();
        assert_eq!(back.header, sample().header);
        assert_eq!(back.rows, sample().rows);
    }

    #[test]
    fn tampered_config_fails_verification() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        sample().save("seed = 1\n", &path).unwrap();
        let text = fs::read_to_string(&path).unwrap().replace("seed = 1", "seed = 2");
        fs::write(&path, text).unwrap();
        assert!(!read_header(&path).unwrap().verify());
    }

    #[test]
    fn save_leaves_no_temporaries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("t.csv");
        sample().save("x = 1\n", &path).unwrap();
        let names: Vec<_> = fs::read_dir(path.parent().unwrap()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, vec![std::ffi::OsString::from("t.csv")]);
    }
}
