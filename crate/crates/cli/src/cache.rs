//! On-disk JSON-lines cache of enumerated tables, one file per case and N.

use std::fs;
use std::path::{Path, PathBuf};

use isofam::families::enumerate_phi;
use isofam::{PhiTable, Setup};
use serde_json::json;

pub const SCHEMA: &str = "isofam-phi/1";

pub fn cache_path(dir: &Path, setup: &Setup) -> PathBuf {
    dir.join(format!("phi-{}-{}.jsonl", setup.case().tag(), setup.n()))
}

fn header(setup: &Setup, records: usize) -> String {
    json!({ "schema": SCHEMA, "case": setup.case().tag(), "n": setup.n(), "records": records }).to_string()
}

/// Reads a cached table. `Err` carries the reason the file was rejected.
pub fn read(path: &Path, setup: &Setup) -> Result<PhiTable, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let (first, body) = text.split_once('\n').ok_or("cache file has no header")?;
    let head: serde_json::Value = serde_json::from_str(first).map_err(|e| format!("bad header: {e}"))?;
    if head["schema"] != SCHEMA {
        return Err(format!("schema tag {} does not match {SCHEMA}", head["schema"]));
    }
    if head["case"] != setup.case().tag() || head["n"] != setup.n() {
        return Err("header names a different case or N".into());
    }
    let table = PhiTable::from_json_lines(setup, body).map_err(|e| e.to_string())?;
    if head["records"] != table.len() {
        return Err("record count does not match the header".into());
    }
    Ok(table)
}

pub fn write(path: &Path, setup: &Setup, table: &PhiTable) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("jsonl.tmp");
    fs::write(&tmp, format!("{}\n{}", header(setup, table.len()), table.to_json_lines()))?;
    fs::rename(tmp, path)
}

/// Loads the table from the cache when possible, otherwise enumerates it
/// and refreshes the cache. Warnings go to `warn`.
pub fn load_or_enumerate(dir: Option<&Path>, setup: &Setup, warn: &mut dyn FnMut(String)) -> PhiTable {
    let Some(dir) = dir else {
        return enumerate_phi(setup);
    };
    let path = cache_path(dir, setup);
    if path.exists() {
        match read(&path, setup) {
            Ok(table) => return table,
            Err(reason) => warn(format!("ignoring cache {}: {reason}; recomputing", path.display())),
        }
    }
    let table = enumerate_phi(setup);
    if let Err(e) = write(&path, setup, &table) {
        warn(format!("could not write cache {}: {e}", path.display()));
    }
    table
}
