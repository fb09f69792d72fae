//! Pass/fail reporting for the acceptance run.

use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{mark}  {:<34} {} ({:.0?})",
            self.name, self.detail, self.elapsed
        )
    }
}

/// Collects outcomes and prints each as soon as it is known.
#[derive(Debug, Default)]
pub struct Report {
    outcomes: Vec<Outcome>,
    started: Option<Instant>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Marks the start of the next check.
    pub fn begin(&mut self) {
        self.started = Some(Instant::now());
    }

    pub fn record(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        let elapsed = self.started.take().map_or(Duration::ZERO, |t| t.elapsed());
        let outcome = Outcome {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
            elapsed,
        };
        println!("{outcome}");
        self.outcomes.push(outcome);
        passed
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        format!("{} passed, {failed} failed", self.outcomes.len() - failed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_formats() {
        let mut r = Report::new();
        r.begin();
        assert!(r.record("one", true, "ok"));
        assert!(!r.record("two", false, "got 2"));
        assert_eq!(r.summary(), "1 passed, 1 failed");
        assert_eq!(r.failures().next().unwrap().name, "two");
        assert!(r.outcomes()[1].to_string().starts_with("FAIL  two "));
    }
}
