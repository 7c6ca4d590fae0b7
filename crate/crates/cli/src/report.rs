use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "ramiforge.report/1";

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(role: &str, source: &str, bytes: &[u8]) -> Self {
        InputDigest {
            role: role.into(),
            source: source.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub result: Value,
    pub caveats: Vec<String>,
}

impl Report {
    pub fn add_caveats<'a>(&mut self, more: impl IntoIterator<Item = &'a String>) {
        for c in more {
            if !self.caveats.contains(c) {
                self.caveats.push(c.clone());
            }
        }
    }
}

/// Fixed-column rendering: a header row, data rows, then `#`-prefixed caveats.
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render(&self, caveats: &[String]) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for r in &self.rows {
            debug_assert_eq!(r.len(), self.columns.len());
            let cells: Vec<String> = r.iter().map(|c| c.replace(['\t', '\n'], " ")).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        for c in caveats {
            out.push_str("# caveat: ");
            out.push_str(c);
            out.push('\n');
        }
        out
    }
}
