//! Output plumbing: serialize rows to CSV or JSON and write results
//! atomically (temp file + rename) so no command leaves a partial file.

use anyhow::Context;
use clap::ValueEnum;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Renders serializable rows in the requested tabular format.
pub fn render_rows<T: Serialize>(rows: &[T], format: Format) -> anyhow::Result<String> {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in rows {
                writer.serialize(row)?;
            }
            let bytes = writer.into_inner()?;
            Ok(String::from_utf8(bytes)?)
        }
        Format::Json => {
            let mut doc = serde_json::to_string_pretty(rows)?;
            doc.push('\n');
            Ok(doc)
        }
    }
}

/// Writes `contents` to `path` atomically, or to stdout when no path is
/// given. The content is fully materialized before any file is touched.
pub fn emit(out: Option<&PathBuf>, contents: &str) -> anyhow::Result<()> {
    match out {
        None => {
            print!("{contents}");
            Ok(())
        }
        Some(path) => {
            write_atomic(path, contents).with_context(|| format!("writing {}", path.display()))
        }
    }
}

fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)?;
    Ok(())
}
