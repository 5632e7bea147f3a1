use std::fmt::{Display, Write as _};
use std::io::Write;

/// Writes to stdout, ignoring a closed pipe.
pub fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// Ordered key/value lines, printed as `key=value` in machine mode and as
/// aligned columns otherwise.
#[derive(Default)]
pub struct Lines {
    entries: Vec<(String, String)>,
}

impl Lines {
    pub fn push(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn print(&self, machine: bool) {
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut text = String::new();
        for (k, v) in &self.entries {
            if machine {
                let _ = writeln!(text, "{k}={v}");
            } else {
                let _ = writeln!(text, "{k:<width$}  {v}");
            }
        }
        emit(&text);
    }
}
