use std::fmt::Write as _;

use ramify::planner::BreakSequence;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Exit};

/// What a command prints, and the status it exits with.
#[derive(Debug)]
pub struct Reply {
    pub body: String,
    pub exit: Exit,
}

impl Reply {
    pub fn json(v: impl Serialize) -> Result<Self, CliError> {
        Ok(Reply {
            body: to_line(&v),
            exit: Exit::Ok,
        })
    }

    pub fn csv(text: String) -> Result<Self, CliError> {
        Ok(Reply {
            body: text,
            exit: Exit::Ok,
        })
    }

    pub fn with_exit(mut self, exit: Exit) -> Self {
        self.exit = exit;
        self
    }
}

pub fn to_line(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

pub fn no_csv(command: &str) -> CliError {
    CliError::malformed(
        "unsupported-format",
        format!("{command} has no CSV form"),
        "--format",
    )
}

/// Two-column table with a header.
pub fn csv_pairs<'a>(
    header: (&str, &str),
    rows: impl IntoIterator<Item = (String, String)> + 'a,
) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (a, b) in rows {
        writeln!(out, "{a},{b}").unwrap();
    }
    out
}

/// Summary line printed after a break table.
pub fn verdict_json(seq: &BreakSequence) -> Value {
    json!({
        "verdict": seq.verdict,
        "certificate": seq.certificate,
        "description": seq.certificate.describe(),
        "limit_bound": seq.limit_bound,
    })
}

/// `n, lower_break, upper_break, flag` rows followed by the verdict line.
/// `prefix` adds a leading plan column for sweeps.
pub fn break_table(seq: &BreakSequence, prefix: Option<usize>, header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str(if prefix.is_some() {
            "plan,n,lower_break,upper_break,flag\n"
        } else {
            "n,lower_break,upper_break,flag\n"
        });
    }
    for (k, u) in seq.upper.iter().enumerate() {
        let n = k + 1;
        if let Some(p) = prefix {
            write!(out, "{p},").unwrap();
        }
        let lower = seq.lower.get(k).map(|t| t.to_string()).unwrap_or_default();
        let flag = match seq.flag {
            Some(f) if seq.flagged.contains(&n) => f.name(),
            _ => "",
        };
        writeln!(out, "{n},{lower},{u},{flag}").unwrap();
    }
    out
}

pub fn sequence_csv(seq: &BreakSequence) -> String {
    let mut out = break_table(seq, None, true);
    out.push_str(&to_line(&verdict_json(seq)));
    out
}

pub fn sequence_json(seq: &BreakSequence) -> Value {
    let mut v = serde_json::to_value(seq).expect("serializable");
    v["description"] = Value::String(seq.certificate.describe());
    v
}
