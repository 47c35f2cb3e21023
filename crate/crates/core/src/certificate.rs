//! Machine-checkable certificates: claims, hypothesis ledgers, verdicts, and
//! work logs, all serializable so a certification run can be audited or
//! replayed.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// What a certificate asserts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    /// N(λ) ≤ (1+ε)·W(λ) for every λ up to the certified range (and beyond
    /// the threshold Λ(ε) by the closed-form bound).
    EpsilonPolya { epsilon: f64 },
    /// k ≤ W(λ_k) for the first k0 eigenvalue indices.
    PolyaFirstK0 { k0: u64 },
    /// The eigenvalue-counting conjecture holds on a removed-cube family
    /// domain, by the named checker variant.
    AdmissiblePolya { variant: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisStatus {
    /// Verified computationally in this run (witness recorded when numeric).
    Checked,
    /// Taken on trust and surfaced to the consumer.
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypothesisStatus,
    /// Numeric witness of the check (a margin, a radius, …) when one exists.
    pub witness: Option<f64>,
    pub note: String,
}

impl Hypothesis {
    pub fn checked(name: impl Into<String>, witness: Option<f64>, note: impl Into<String>) -> Self {
        Hypothesis {
            name: name.into(),
            status: HypothesisStatus::Checked,
            witness,
            note: note.into(),
        }
    }

    pub fn assumed(name: impl Into<String>, note: impl Into<String>) -> Self {
        Hypothesis {
            name: name.into(),
            status: HypothesisStatus::Assumed,
            witness: None,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    /// A concrete counterexample: the k-th eigenvalue lies in the stated
    /// interval and violates the claim there.
    Refuted {
        k: u64,
        lambda_lo: f64,
        lambda_hi: f64,
    },
    Inconclusive {
        reason: String,
    },
}

/// Accounting of the computational effort behind a verdict.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WorkLog {
    pub count_evaluations: u64,
    pub interval_steps: u64,
    pub pointwise_steps: u64,
    /// Largest λ through which the claim was verified against the oracle.
    pub lambda_reached: f64,
    /// The λ the run aimed for (the closed-form threshold, possibly capped).
    pub lambda_target: f64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: Claim,
    pub hypotheses: Vec<Hypothesis>,
    pub verdict: Verdict,
    pub work_log: Option<WorkLog>,
    /// Named quantities backing the verdict (thresholds, volumes, margins…).
    pub numbers: BTreeMap<String, f64>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self.verdict, Verdict::Certified)
    }

    /// Hypotheses the consumer still has to discharge themselves.
    pub fn assumed_hypotheses(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses
            .iter()
            .filter(|h| h.status == HypothesisStatus::Assumed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut numbers = BTreeMap::new();
        numbers.insert("lambda_epsilon".to_string(), 2.2e9);
        let cert = Certificate {
            claim: Claim::EpsilonPolya { epsilon: 0.5 },
            hypotheses: vec![
                Hypothesis::checked("volume-positive", Some(1.0), "exact rational volume"),
                Hypothesis::assumed("user-metrics", "metrics supplied, not derived"),
            ],
            verdict: Verdict::Certified,
            work_log: Some(WorkLog {
                count_evaluations: 123,
                interval_steps: 7,
                pointwise_steps: 2,
                lambda_reached: 2.2e9,
                lambda_target: 2.2e9,
                elapsed_ms: 1500,
            }),
            numbers,
        };
        let json = serde_json::to_string_pretty(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(cert, back);
        assert!(cert.is_certified());
        assert_eq!(cert.assumed_hypotheses().count(), 1);
    }

    #[test]
    fn refuted_round_trip() {
        let cert = Certificate {
            claim: Claim::PolyaFirstK0 { k0: 10 },
            hypotheses: vec![],
            verdict: Verdict::Refuted {
                k: 11,
                lambda_lo: 90.0,
                lambda_hi: 90.1,
            },
            work_log: None,
            numbers: BTreeMap::new(),
        };
        let json = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(cert, back);
        assert!(!back.is_certified());
    }
}
