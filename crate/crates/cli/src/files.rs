//! Reading inputs and writing outputs. Files are written to a `.partial`
//! sibling first and renamed into place.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use numeral_core::records::{read_jsonl, write_jsonl};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::Builder;

use crate::error::CliError;

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_error(path))
}

pub fn read_records<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let file = fs::File::open(path).map_err(io_error(path))?;
    read_jsonl(BufReader::new(file)).map_err(|source| CliError::Records {
        path: path.to_path_buf(),
        source,
    })
}

/// Concatenates the records of several files.
pub fn read_all_records<T: DeserializeOwned>(paths: &[PathBuf]) -> Result<Vec<T>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        out.extend(read_records(p)?);
    }
    Ok(out)
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut tmp = Builder::new()
        .prefix(&format!(".{name}."))
        .suffix(".partial")
        .tempfile_in(dir)
        .map_err(io_error(path))?;
    tmp.write_all(bytes).map_err(io_error(path))?;
    tmp.as_file().sync_all().map_err(io_error(path))?;
    tmp.persist(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => atomic_write(p, bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(io_error(Path::new("<stdout>")))
        }
    }
}

pub fn jsonl_bytes<T: Serialize>(items: &[T]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_jsonl(&mut buf, items).expect("records serialize to memory");
    buf
}

pub fn emit_records<T: Serialize>(out: Option<&Path>, items: &[T]) -> Result<(), CliError> {
    emit(out, &jsonl_bytes(items))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_and_leaves_no_partials() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out.jsonl");
        atomic_write(&target, b"one\n").unwrap();
        atomic_write(&target, b"two\n").unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "two\n");
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 1);
    }

    #[test]
    fn record_errors_carry_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.jsonl");
        fs::write(&p, "{\"a\":1}\nnot json\n").unwrap();
        let err = read_records::<serde_json::Value>(&p).unwrap_err();
        assert!(err.to_string().contains("bad.jsonl"));
        assert!(err.to_string().contains("line 2"));
    }
}
