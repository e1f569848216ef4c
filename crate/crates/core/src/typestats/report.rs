use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Pass,
    Fail,
}

/// How a report's decision follows from its statistic and threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Pass iff `statistic <= threshold`.
    AtMost,
    /// Pass iff `statistic > threshold`.
    Above,
}

/// Outcome of one statistical or exact test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test: String,
    /// Non-finite statistics serialize as `null`.
    pub statistic: f64,
    pub threshold: f64,
    pub rule: Rule,
    pub decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_value: Option<f64>,
    pub params: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl TestReport {
    pub fn new(test: impl Into<String>, statistic: f64, threshold: f64, rule: Rule) -> Self {
        let pass = match rule {
            Rule::AtMost => statistic <= threshold,
            Rule::Above => statistic > threshold,
        };
        Self {
            test: test.into(),
            statistic,
            threshold,
            rule,
            decision: if pass { Decision::Pass } else { Decision::Fail },
            p_value: None,
            params: Map::new(),
            detail: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.decision == Decision::Pass
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_p_value(mut self, p: f64) -> Self {
        self.p_value = Some(p);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for TestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.decision {
            Decision::Pass => "PASS",
            Decision::Fail => "FAIL",
        };
        let op = match self.rule {
            Rule::AtMost => "<=",
            Rule::Above => ">",
        };
        write!(
            f,
            "{verdict} {}: statistic {:.4} (pass if {op} {:.4})",
            self.test, self.statistic, self.threshold
        )?;
        if let Some(p) = self.p_value {
            write!(f, ", p = {p:.4}")?;
        }
        if let Some(d) = &self.detail {
            write!(f, "; {d}")?;
        }
        Ok(())
    }
}
