use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Window,
}

/// One nonzero residual: the argument pattern, the residual itself, and
/// for window runs the parameter values that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub pattern: String,
    pub residual: Element,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bindings: Option<BTreeMap<String, String>>,
}

/// Result of an identity check. Violations are kept in a deterministic
/// order (pattern enumeration order).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub algebra: String,
    pub twist: Option<String>,
    pub mode: Mode,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Symbolic => "symbolic",
            Mode::Window => "window",
        };
        writeln!(f, "algebra: {}", self.algebra)?;
        if let Some(t) = &self.twist {
            writeln!(f, "twist:   {t}")?;
        }
        writeln!(f, "mode:    {mode}")?;
        writeln!(f, "checked: {}", self.checked)?;
        if self.violations.is_empty() {
            return writeln!(f, "violations: none");
        }
        writeln!(f, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            write!(f, "  {}  =>  {}", v.pattern, v.residual)?;
            if let Some(b) = v.bindings.as_ref().filter(|b| !b.is_empty()) {
                let parts: Vec<String> = b.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "  [{}]", parts.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
