//! Run reports: every command returns one, carrying the payload, the
//! warnings (never dropped in either output format) and the legend that
//! decodes canonical class tokens.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub result: serde_json::Value,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub legend: Vec<String>,
    /// Text body of the result; not serialized, the JSON mirror carries
    /// the same information in `result`.
    #[serde(skip)]
    pub text: String,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            result: serde_json::Value::Null,
            warnings: Vec::new(),
            notes: Vec::new(),
            legend: Vec::new(),
            text: String::new(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.text);
        if !out.ends_with('\n') {
            out.push('\n');
        }
        if !self.warnings.is_empty() {
            out.push_str("warnings:\n");
            for w in &self.warnings {
                out.push_str("  - ");
                out.push_str(w);
                out.push('\n');
            }
        }
        if !self.notes.is_empty() {
            out.push_str("notes:\n");
            for n in &self.notes {
                out.push_str("  - ");
                out.push_str(n);
                out.push('\n');
            }
        }
        if !self.legend.is_empty() {
            out.push_str("legend:\n");
            for l in &self.legend {
                out.push_str("  ");
                out.push_str(l);
                out.push('\n');
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
