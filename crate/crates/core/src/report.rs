use serde::Serialize;

/// One named verification step inside a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
