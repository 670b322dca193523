use std::fmt::Write as _;

use serde_json::{json, Value};

/// Why a command could not reach a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// schema or semantic problems with the input (exit 2)
    Invalid,
    /// ill-conditioned or inconsistent numerics (exit 3)
    Numerical,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub class: ErrorClass,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { class: ErrorClass::Invalid, message: message.into() }
    }
}

impl From<gb_core::Error> for CliError {
    fn from(e: gb_core::Error) -> Self {
        let class = match e {
            gb_core::Error::NumericalFailure { .. } | gb_core::Error::InternalInconsistency(_) => ErrorClass::Numerical,
            _ => ErrorClass::Invalid,
        };
        CliError { class, message: e.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error(ErrorClass),
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error(ErrorClass::Invalid) => 2,
            Verdict::Error(ErrorClass::Numerical) => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error(_) => "ERROR",
        }
    }
}

/// The outcome of one command: an echo of the command, summary lines, a
/// certificate and the verdict. Contains nothing run-dependent, so equal
/// inputs give byte-identical renderings.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub lines: Vec<String>,
    pub certificate: Value,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), verdict: Verdict::Pass, lines: Vec::new(), certificate: json!({}) }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn cert(&mut self, key: &str, value: Value) {
        self.certificate.as_object_mut().expect("certificate is an object").insert(key.to_string(), value);
    }

    pub fn error(command: impl Into<String>, e: CliError) -> Self {
        let mut r = Report::new(command);
        r.verdict = Verdict::Error(e.class);
        let kind = match e.class {
            ErrorClass::Invalid => "invalid input",
            ErrorClass::Numerical => "numerical failure",
        };
        r.line(format!("{kind}: {}", e.message));
        r.cert("error", json!({ "class": kind, "message": e.message }));
        r
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "$ {}", self.command).unwrap();
        for l in &self.lines {
            writeln!(out, "{l}").unwrap();
        }
        writeln!(out, "{}", self.verdict.label()).unwrap();
        out
    }

    pub fn render_json(&self) -> String {
        let v = json!({
            "command": self.command,
            "verdict": self.verdict.label(),
            "exit_code": self.exit_code(),
            "summary": self.lines,
            "certificate": self.certificate,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_verdict() {
        assert_eq!(Verdict::Pass.exit_code(), 0);
        assert_eq!(Verdict::Fail.exit_code(), 1);
        let num: CliError = gb_core::Error::NumericalFailure { message: "x".into(), condition: 1.0 }.into();
        assert_eq!(Report::error("gb", num).exit_code(), 3);
        assert_eq!(Report::error("gb", CliError::invalid("bad")).exit_code(), 2);
    }

    #[test]
    fn renderings() {
        let mut r = Report::new("gb cohomology f.json");
        r.line("H1 = Z2");
        r.cert("degree", json!(1));
        assert_eq!(r.render_text(), "$ gb cohomology f.json\nH1 = Z2\nPASS\n");
        let v: Value = serde_json::from_str(&r.render_json()).unwrap();
        assert_eq!(v["verdict"], "PASS");
        assert_eq!(v["certificate"]["degree"], 1);
    }
}
