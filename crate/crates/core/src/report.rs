//! Structured pass/fail reports shared by every validator.

use serde::{Deserialize, Serialize};

/// Cap on stored witnesses per rule; counts keep going past it.
const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTally {
    pub rule: String,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub subject: String,
    pub rules: Vec<RuleTally>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            ..Self::default()
        }
    }

    fn tally(&mut self, rule: &str) -> &mut RuleTally {
        if let Some(i) = self.rules.iter().position(|r| r.rule == rule) {
            &mut self.rules[i]
        } else {
            self.rules.push(RuleTally {
                rule: rule.to_string(),
                ..RuleTally::default()
            });
            self.rules.last_mut().unwrap()
        }
    }

    /// Record one evaluation of `rule`; the witness closure only runs on failure.
    pub fn check(&mut self, rule: &str, ok: bool, witness: impl FnOnce() -> String) -> bool {
        let t = self.tally(rule);
        t.checked += 1;
        if !ok {
            t.failed += 1;
            let failed = t.failed;
            if failed <= MAX_WITNESSES {
                self.violations.push(Violation {
                    rule: rule.to_string(),
                    witness: witness(),
                });
            }
        }
        ok
    }

    pub fn fail(&mut self, rule: &str, witness: impl Into<String>) {
        let w = witness.into();
        self.check(rule, false, || w);
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failures<'a>(&'a self, rule: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.rule == rule)
    }

    pub fn has_failure(&self, rule: &str) -> bool {
        self.failures(rule).next().is_some()
    }

    pub fn total_checked(&self) -> usize {
        self.rules.iter().map(|r| r.checked).sum()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for r in other.rules {
            let t = self.tally(&r.rule);
            t.checked += r.checked;
            t.failed += r.failed;
        }
        self.violations.extend(other.violations);
    }

    pub fn summary(&self) -> String {
        if self.is_valid() {
            format!("{}: valid ({} checks)", self.subject, self.total_checked())
        } else {
            let first = &self.violations[0];
            format!(
                "{}: {} violation(s), first {} at {}",
                self.subject,
                self.rules.iter().map(|r| r.failed).sum::<usize>(),
                first.rule,
                first.witness
            )
        }
    }
}
