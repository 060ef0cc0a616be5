//! Run reports and their canonical JSON form.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, details: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            details: details.into(),
        }
    }

    /// Passes iff `got == want`; the details show both on failure.
    pub fn expect<T: PartialEq + std::fmt::Debug>(name: impl Into<String>, got: &T, want: &T) -> Self {
        let pass = got == want;
        let details = if pass {
            format!("{got:?}")
        } else {
            format!("expected {want:?}, got {got:?}")
        };
        Check::new(name, pass, details)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub seed: u64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Pretty JSON with every object's keys sorted, newline terminated.
    pub fn to_json(&self) -> String {
        // Going through `Value` sorts keys, struct fields included.
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
        text.push('\n');
        text
    }

    /// One line per check.
    pub fn check_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {}: {}\n", c.name, c.details));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted() {
        let r = RunReport {
            command: "x".into(),
            inputs: json!({"zeta": 1, "alpha": 2}),
            results: json!({}),
            checks: vec![Check::new("c", true, "")],
            seed: 42,
        };
        let text = r.to_json();
        let order: Vec<usize> = ["\"checks\"", "\"command\"", "\"inputs\"", "\"alpha\"", "\"zeta\"", "\"results\"", "\"seed\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]), "{text}");
        let c = text.find("\"details\"").unwrap();
        assert!(c < text.find("\"name\"").unwrap() && text.find("\"name\"").unwrap() < text.find("\"pass\"").unwrap());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn failures_set_the_exit_code() {
        let c = Check::expect("eq", &vec![1, 2], &vec![1, 3]);
        assert!(!c.pass);
        assert_eq!(c.details, "expected [1, 3], got [1, 2]");
        let r = RunReport {
            command: "x".into(),
            inputs: Value::Null,
            results: Value::Null,
            checks: vec![Check::new("a", true, ""), c],
            seed: 0,
        };
        assert_eq!(r.exit_code(), 1);
        assert!(r.check_lines().contains("FAIL eq: expected"));
    }
}
