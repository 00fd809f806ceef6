use std::fmt;

use serde::{Deserialize, Serialize};

/// The outcome of one command, printed as text or as JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Named results in the order they were computed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub facts: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str, input: impl Into<String>) -> Report {
        Report {
            command: command.to_string(),
            input: input.into(),
            passed: true,
            witnesses: Vec::new(),
            decomposition: None,
            window: None,
            depth: None,
            seed: None,
            facts: Vec::new(),
        }
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) {
        self.facts.push((key.to_string(), value.to_string()));
    }

    /// Record a failed check.
    pub fn fail(&mut self, witness: impl Into<String>) {
        self.passed = false;
        self.witnesses.push(witness.into());
    }

    pub fn fail_all(&mut self, witnesses: impl IntoIterator<Item = String>) {
        for w in witnesses {
            self.fail(w);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.command, self.input)?;
        if let Some(w) = &self.window {
            writeln!(f, "  window: {w}")?;
        }
        if let Some(d) = self.depth {
            writeln!(f, "  depth: {d}")?;
        }
        if let Some(s) = self.seed {
            writeln!(f, "  seed: {s}")?;
        }
        for (k, v) in &self.facts {
            if v.contains('\n') {
                writeln!(f, "  {k}:")?;
                for line in v.lines() {
                    writeln!(f, "    {line}")?;
                }
            } else {
                writeln!(f, "  {k}: {v}")?;
            }
        }
        if let Some(d) = &self.decomposition {
            writeln!(f, "  layers: [{}]", d.join(", "))?;
        }
        for w in &self.witnesses {
            let mut lines = w.lines();
            writeln!(f, "  witness: {}", lines.next().unwrap_or_default())?;
            for line in lines {
                writeln!(f, "    {line}")?;
            }
        }
        write!(f, "{}", if self.passed { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("decompose", "wedge.hs");
        r.decomposition = Some(vec!["Krasner".into()]);
        r.window = Some("-8..8".into());
        r.fact("classes", 2);
        r.fail("x");
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let minimal: Report =
            serde_json::from_str(r#"{"command":"c","input":"i","passed":true,"witnesses":[]}"#)
                .unwrap();
        assert_eq!(minimal, Report::new("c", "i"));
    }
}
