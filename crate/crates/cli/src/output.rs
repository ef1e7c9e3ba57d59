//! Buffered command output. Commands assemble every file in memory and the
//! bundle is written only after all computation succeeded, so a failing run
//! leaves nothing behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Named files destined for one output directory.
#[derive(Debug, Default)]
pub struct Bundle {
    files: Vec<(String, Vec<u8>)>,
}

impl Bundle {
    pub fn add(&mut self, name: &str, contents: impl Into<Vec<u8>>) {
        self.files.push((name.to_owned(), contents.into()));
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.add(name, text);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_slice())
    }

    /// Writes every file into `dir` (created if missing) and returns the paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        for (name, contents) in &self.files {
            let path = dir.join(name);
            let mut f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            f.write_all(contents)
                .with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Appends one compact JSON value and a newline.
pub fn push_json_line<T: Serialize>(buf: &mut Vec<u8>, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *buf, value)?;
    buf.push(b'\n');
    Ok(())
}

/// Left-aligned plain-text table with a dashed rule under the header.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_owned() + "\n"
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out += &line(rule.iter().map(String::as_str).collect());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment() {
        let t = table(&["a", "value"], &[vec!["long name".into(), "1".into()]]);
        assert_eq!(t, "a          value\n---------  -----\nlong name  1\n");
    }

    #[test]
    fn json_lines() {
        let mut buf = Vec::new();
        push_json_line(&mut buf, &[1, 2]).unwrap();
        push_json_line(&mut buf, &"x").unwrap();
        assert_eq!(buf, b"[1,2]\n\"x\"\n");
    }

    #[test]
    fn bundle_writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = Bundle::default();
        b.add("x.txt", "hi");
        b.add_json("y.json", &[1, 2]).unwrap();
        let paths = b.write_to(&dir.path().join("sub")).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(fs::read_to_string(&paths[0]).unwrap(), "hi");
        assert_eq!(b.get("y.json").unwrap(), b"[\n  1,\n  2\n]\n");
    }
}
