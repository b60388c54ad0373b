use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Mismatch,
    Skipped,
}

/// One line of the report stream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub cmd: String,
    pub inputs: Value,
    pub result: Value,
    pub status: Status,
    pub runtime_ms: u64,
}

impl Record {
    pub fn new(cmd: &str, inputs: Value, result: Value, status: Status, started: Instant) -> Self {
        Record {
            cmd: cmd.to_string(),
            inputs,
            result,
            status,
            runtime_ms: started.elapsed().as_millis() as u64,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// `Mismatch` if any record mismatched, else `Ok`.
pub fn overall(records: &[Record]) -> Status {
    if records.iter().any(|r| r.status == Status::Mismatch) {
        Status::Mismatch
    } else {
        Status::Ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn rec(status: Status) -> Record {
        Record::new("t", json!({}), json!(null), status, Instant::now())
    }

    #[test]
    fn any_mismatch_wins() {
        assert_eq!(overall(&[]), Status::Ok);
        assert_eq!(
            overall(&[rec(Status::Ok), rec(Status::Skipped)]),
            Status::Ok
        );
        assert_eq!(
            overall(&[rec(Status::Ok), rec(Status::Mismatch)]),
            Status::Mismatch
        );
    }

    #[test]
    fn line_has_fixed_key_order() {
        let line = rec(Status::Skipped).to_line();
        assert!(line.starts_with(
            r#"{"cmd":"t","inputs":{},"result":null,"status":"skipped","runtime_ms":"#
        ));
    }
}
