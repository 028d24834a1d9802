//! Line-oriented report documents: ordered `key = value` pairs with an
//! optional JSON mirror. Keys prefixed `exec.` carry run-environment data
//! (thread count, timing) and are excluded from golden comparisons.

use std::fmt::Display;

#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

/// Prefix for keys that may differ between otherwise identical runs.
pub const EXEC_PREFIX: &str = "exec.";

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// `key = value` lines in insertion order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// JSON object mirroring the entries; insertion order preserved.
    pub fn render_json(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&serde_json::Value::String(k.clone()).to_string());
            out.push(':');
            out.push_str(&serde_json::Value::String(v.clone()).to_string());
        }
        out.push('}');
        out
    }

    /// The render with all `exec.`-prefixed lines removed — the form used
    /// for byte-identity comparisons.
    pub fn render_golden(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            if k.starts_with(EXEC_PREFIX) {
                continue;
            }
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}
