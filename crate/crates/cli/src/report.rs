use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    MathFailure,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InputError => 1,
            Status::MathFailure => 2,
        }
    }
}

/// A numeric claim and the tolerance it was checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// `value <= tol`.
    pub fn at_most(name: &str, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tol,
            pass: value <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub divisor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub column: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<usize>,
    pub checks: Vec<Check>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorInfo>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            status: Status::Ok,
            exit_code: 0,
            order: None,
            checks: Vec::new(),
            result: Value::Null,
            error: None,
            notes: Vec::new(),
            wall_time_s: None,
        }
    }

    pub fn fail(mut self, status: Status, error: ErrorInfo) -> Self {
        self.status = status;
        self.exit_code = status.exit_code();
        self.error = Some(error);
        self
    }

    /// A failed check turns an ok report into a mathematical failure.
    pub fn settle(mut self) -> Self {
        if self.status == Status::Ok {
            if let Some(c) = self.checks.iter().find(|c| !c.pass) {
                let msg = format!("{} = {:e} exceeds {:e}", c.name, c.value, c.tol);
                self = self.fail(
                    Status::MathFailure,
                    ErrorInfo {
                        kind: "check_failed".into(),
                        message: msg,
                        n: None,
                        divisor: None,
                        line: None,
                        column: None,
                    },
                );
            }
        }
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
