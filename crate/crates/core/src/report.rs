use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::exactpoly::{rational_string, Rational};

/// One compared quantity in a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub j: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(serialize_with = "ser_rational")]
    pub expected: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub computed: Rational,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(j: usize, expected: Rational, computed: Rational) -> Self {
        let pass = expected == computed;
        ReportRow {
            j,
            label: None,
            expected,
            computed,
            pass,
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

/// Expected-versus-computed comparison for one theorem instance. `pass` holds
/// exactly when every row passes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub params: BTreeMap<String, i64>,
    pub rows: Vec<ReportRow>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(theorem: &str, params: &[(&str, i64)], rows: Vec<ReportRow>) -> Self {
        let pass = rows.iter().all(|r| r.pass);
        VerificationReport {
            theorem: theorem.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            rows,
            pass,
        }
    }

    pub fn summary(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let ok = self.rows.iter().filter(|r| r.pass).count();
        format!(
            "{} {}: {} ({}/{} rows)",
            self.theorem,
            params,
            if self.pass { "PASS" } else { "FAIL" },
            ok,
            self.rows.len()
        )
    }

    /// Fixed-width table, one line per row, summary last.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>4}  {:<18} {:<28} {:<28} pass",
            "j", "label", "expected", "computed"
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:>4}  {:<18} {:<28} {:<28} {}",
                row.j,
                row.label.as_deref().unwrap_or("sigma"),
                rational_string(&row.expected),
                rational_string(&row.computed),
                if row.pass { "ok" } else { "MISMATCH" }
            );
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn json_shape() {
        let report = VerificationReport::new(
            "t1",
            &[("r", 3), ("n", 2)],
            vec![
                ReportRow::new(0, q(1, 1), q(1, 1)),
                ReportRow::new(1, q(-4, 1), q(-4, 1)),
            ],
        );
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"theorem":"t1","params":{"n":2,"r":3},"rows":[{"j":0,"expected":"1/1","computed":"1/1","pass":true},{"j":1,"expected":"-4/1","computed":"-4/1","pass":true}],"pass":true}"#
        );
    }

    #[test]
    fn overall_pass_requires_every_row() {
        let report = VerificationReport::new(
            "t4",
            &[],
            vec![
                ReportRow::new(0, q(1, 1), q(1, 1)),
                ReportRow::new(1, q(2, 3), q(-2, 3)),
            ],
        );
        assert!(!report.pass);
        assert!(report.summary().contains("FAIL (1/2 rows)"));
    }
}
