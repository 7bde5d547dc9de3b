use serde::Serialize;

/// One failed check, tagged with the check's short name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

/// Outcome of a validation pass. Empty `violations` means valid; `warnings`
/// carry checks that were downgraded by the caller.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

/// Per-check cap on recorded violations; the remainder is summarized.
const MAX_PER_CHECK: usize = 50;

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    pub fn push(&mut self, check: &str, detail: impl Into<String>) {
        self.violations.push(Violation {
            check: check.to_string(),
            detail: detail.into(),
        });
    }

    pub fn warn(&mut self, check: &str, detail: impl Into<String>) {
        self.warnings.push(Violation {
            check: check.to_string(),
            detail: detail.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| format!("{}: {}", v.check, v.detail))
            .collect()
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(crate::Error::Invalid(self.messages()))
        }
    }
}

/// Collects failures for one named check, keeping at most `MAX_PER_CHECK`
/// detailed entries and summarizing the rest.
pub(crate) struct CheckSink<'a> {
    report: &'a mut ValidationReport,
    check: &'static str,
    count: usize,
}

impl<'a> CheckSink<'a> {
    pub(crate) fn new(report: &'a mut ValidationReport, check: &'static str) -> Self {
        Self {
            report,
            check,
            count: 0,
        }
    }

    pub(crate) fn fail(&mut self, detail: impl FnOnce() -> String) {
        self.count += 1;
        if self.count <= MAX_PER_CHECK {
            self.report.push(self.check, detail());
        }
    }
}

impl Drop for CheckSink<'_> {
    fn drop(&mut self) {
        if self.count > MAX_PER_CHECK {
            let extra = self.count - MAX_PER_CHECK;
            self.report
                .push(self.check, format!("... and {extra} further violations"));
        }
    }
}
