use nonstd_core::verdict::{Record, Status, Verdict};
use serde::Serialize;

/// One command's result in the stable output schema.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: Record,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl Report {
    pub fn new(command: &str, input: Record, verdict: Verdict) -> Report {
        Report {
            command: command.into(),
            input,
            verdict,
        }
    }

    pub fn exit_code(&self) -> i32 {
        status_code(self.verdict.status)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let v = &self.verdict;
        let mut lines = vec![format!("{} {}: {}", self.command, self.input, v.status)];
        if let Some(x) = &v.value {
            lines.push(format!("  value: {}", x));
        }
        if let Some(e) = &v.enclosure {
            lines.push(format!("  enclosure: {}", e));
        }
        if let Some(w) = &v.witness {
            lines.push(format!("  witness: {}", w));
        }
        if let Some(c) = &v.certificate {
            lines.push(format!("  certificate: {}", c));
        }
        if !v.note.is_empty() {
            lines.push(format!("  note: {}", v.note));
        }
        lines.join("\n")
    }
}

pub fn status_code(s: Status) -> i32 {
    match s {
        Status::Proved => 0,
        Status::Refuted => 1,
        Status::Undecided => 2,
    }
}
