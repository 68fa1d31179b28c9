//! CSV assembly and atomic output.
//!
//! Numbers are written with Rust's shortest round-trip `Display` for
//! f64, rows end in a single LF, and files are written via a temp file
//! plus rename so a crashed run never leaves a half-written CSV behind.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Shortest decimal that parses back to the same f64.
pub fn format_f64(v: f64) -> String {
    v.to_string()
}

/// A CSV document under construction.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn with_header(names: &[String]) -> Csv {
        let mut text = names.join(",");
        text.push('\n');
        Csv {
            text,
            columns: names.len(),
        }
    }

    /// Append one row; `None` cells are left empty.
    pub fn push_row(&mut self, cells: &[Option<f64>]) {
        assert_eq!(cells.len(), self.columns, "row width mismatch");
        let row = cells
            .iter()
            .map(|c| c.map(format_f64).unwrap_or_default())
            .collect::<Vec<_>>()
            .join(",");
        self.text.push_str(&row);
        self.text.push('\n');
    }

    pub fn into_text(self) -> String {
        self.text
    }
}

/// Write to a file atomically (temp in the same directory, then rename);
/// the path "-" selects stdout.
pub fn write_output(path: &str, contents: &str) -> io::Result<()> {
    if path == "-" {
        return io::stdout().write_all(contents.as_bytes());
    }
    let target = Path::new(path);
    let dir = target.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = target
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = match dir {
        Some(d) => d.join(&tmp_name),
        None => Path::new(&tmp_name).to_path_buf(),
    };
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, target)
}
