use serde::Serialize;

/// One checked claim in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    /// The mathematical statement being checked.
    pub reference: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Checklist(Vec<Assertion>);

impl Checklist {
    pub fn new() -> Self {
        Checklist(Vec::new())
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        reference: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> bool {
        self.0.push(Assertion {
            name: name.into(),
            reference: reference.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.0.iter().filter(|a| !a.passed)
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
