use serde::Serialize;

/// Outcome of one exact identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// 1-based frame indices of the first failing entry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Self { name: name.into(), passed: true, witness: None, detail: None }
    }

    pub fn fail(name: impl Into<String>, witness: Vec<usize>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed: false, witness: Some(witness), detail: Some(detail.into()) }
    }

    /// Pass unless `first_failure` found something; indices are shifted to 1-based.
    pub fn from_search(name: impl Into<String>, first_failure: Option<(Vec<usize>, String)>) -> Self {
        match first_failure {
            None => Self::pass(name),
            Some((idx, detail)) => Self::fail(name, idx.into_iter().map(|i| i + 1).collect(), detail),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// A list of named checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CheckList {
    pub checks: Vec<Check>,
}

impl CheckList {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }
}

impl FromIterator<Check> for CheckList {
    fn from_iter<I: IntoIterator<Item = Check>>(iter: I) -> Self {
        Self { checks: iter.into_iter().collect() }
    }
}
