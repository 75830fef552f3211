//! JSON manifold-spec documents.
//!
//! Indices in documents are 1-based; coefficients are exact rational strings
//! such as `"3"` or `"-1/2"`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::frame::{FramePresentation, ParacontactStructure};
use crate::linalg::{FrameVector, Matrix};
use crate::scalar::parse_exact;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coefficient: Rational,
}

/// Claimed value of `∇_{E_i} E_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionClaim {
    pub i: usize,
    pub j: usize,
    pub value: FrameVector<Rational>,
}

/// Claimed value of `R(E_i, E_j) E_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureClaim {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: FrameVector<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureClaims {
    pub entries: Vec<CurvatureClaim>,
    /// Every `R(E_i,E_j)E_k` with `i < j` not listed is claimed to vanish.
    pub others_zero: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expected {
    pub nabla: Option<Vec<ConnectionClaim>>,
    pub nabla_tilde: Option<Vec<ConnectionClaim>>,
    pub curvature_lc: Option<CurvatureClaims>,
    pub curvature_qsmc: Option<CurvatureClaims>,
    pub ricci_qsmc_diag: Option<Vec<Rational>>,
    pub l_ricci: Option<Rational>,
    pub einstein_qsmc: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldSpec {
    pub name: String,
    pub dimension: usize,
    /// Entries with `i < j`, 1-based, in document order.
    pub brackets: Vec<Bracket>,
    /// `None` means the identity metric.
    pub metric: Option<Matrix<Rational>>,
    /// Column convention: `phi[(k, i)]` is the `E_k`-component of `φE_i`.
    pub phi: Matrix<Rational>,
    pub xi: FrameVector<Rational>,
    pub eta: Option<FrameVector<Rational>>,
    pub expected: Option<Expected>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SpecErrors(pub Vec<SpecError>);

impl fmt::Display for SpecErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, e) in self.0.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SpecErrors {}

type Coeff = String;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: String,
    dimension: usize,
    brackets: Vec<(usize, usize, usize, Coeff)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<Vec<(usize, usize, Coeff)>>,
    phi: Vec<(usize, usize, Coeff)>,
    xi: Vec<Coeff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<Vec<Coeff>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<RawExpected>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nabla: Option<Vec<(usize, usize, Vec<Coeff>)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nabla_tilde: Option<Vec<(usize, usize, Vec<Coeff>)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    curvature_lc: Option<RawCurvature>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    curvature_qsmc: Option<RawCurvature>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ricci_qsmc_diag: Option<Vec<Coeff>>,
    #[serde(default, rename = "L_ricci", skip_serializing_if = "Option::is_none")]
    l_ricci: Option<Coeff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    einstein_qsmc: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurvature {
    entries: Vec<(usize, usize, usize, Vec<Coeff>)>,
    #[serde(default)]
    others_zero: bool,
}

// Accumulates located errors while converting a raw document.
struct Validator {
    n: usize,
    errors: Vec<SpecError>,
}

impl Validator {
    fn err(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.errors.push(SpecError { location: location.into(), message: message.into() });
    }

    fn index(&mut self, location: &str, value: usize) -> bool {
        if (1..=self.n).contains(&value) {
            true
        } else {
            self.err(location, format!("index {value} out of range 1..={}", self.n));
            false
        }
    }

    fn coeff(&mut self, location: &str, text: &str) -> Rational {
        parse_exact(text).unwrap_or_else(|_| {
            self.err(location, format!("malformed rational {text:?}"));
            Rational::from_integer(0.into())
        })
    }

    fn vector(&mut self, location: &str, items: &[Coeff]) -> FrameVector<Rational> {
        if items.len() != self.n {
            self.err(location, format!("expected {} coefficients, got {}", self.n, items.len()));
        }
        let mut v = FrameVector::zeros(self.n);
        for (a, text) in items.iter().enumerate() {
            let c = self.coeff(&format!("{location}[{a}]"), text);
            if a < self.n {
                v.0[a] = c;
            }
        }
        v
    }

    fn connection(&mut self, field: &str, raw: &[(usize, usize, Vec<Coeff>)]) -> Vec<ConnectionClaim> {
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        for (pos, (i, j, coeffs)) in raw.iter().enumerate() {
            let loc = format!("expected.{field}[{pos}]");
            let ok = self.index(&loc, *i) & self.index(&loc, *j);
            let value = self.vector(&loc, coeffs);
            if seen.insert((*i, *j), pos).is_some() {
                self.err(&loc, format!("duplicate entry for ({i},{j})"));
            }
            if ok {
                out.push(ConnectionClaim { i: *i, j: *j, value });
            }
        }
        out
    }

    fn curvature(&mut self, field: &str, raw: &RawCurvature) -> CurvatureClaims {
        let mut seen = BTreeMap::new();
        let mut entries = Vec::new();
        for (pos, (i, j, k, coeffs)) in raw.entries.iter().enumerate() {
            let loc = format!("expected.{field}.entries[{pos}]");
            let ok = self.index(&loc, *i) & self.index(&loc, *j) & self.index(&loc, *k);
            if ok && i >= j {
                self.err(&loc, "curvature claim requires i<j");
            }
            let value = self.vector(&loc, coeffs);
            if seen.insert((*i, *j, *k), pos).is_some() {
                self.err(&loc, format!("duplicate entry for ({i},{j},{k})"));
            }
            if ok {
                entries.push(CurvatureClaim { i: *i, j: *j, k: *k, value });
            }
        }
        CurvatureClaims { entries, others_zero: raw.others_zero }
    }
}

/// Parses and validates a spec document.
pub fn parse_spec(document: &str) -> Result<ManifoldSpec, SpecErrors> {
    let raw: RawSpec = serde_json::from_str(document).map_err(|e| {
        SpecErrors(vec![SpecError {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        }])
    })?;
    let n = raw.dimension;
    let mut v = Validator { n, errors: Vec::new() };
    if n == 0 {
        v.err("dimension", "dimension must be at least 1");
        return Err(SpecErrors(v.errors));
    }

    let mut brackets = Vec::new();
    let mut seen = BTreeMap::new();
    for (pos, (i, j, k, c)) in raw.brackets.iter().enumerate() {
        let loc = format!("brackets[{pos}]");
        let ok = v.index(&loc, *i) & v.index(&loc, *j) & v.index(&loc, *k);
        let coefficient = v.coeff(&loc, c);
        if i >= j {
            v.err(&loc, "bracket requires i<j");
            continue;
        }
        if seen.insert((*i, *j, *k), pos).is_some() {
            v.err(&loc, format!("duplicate bracket entry ({i},{j},{k})"));
        }
        if ok {
            brackets.push(Bracket { i: *i, j: *j, k: *k, coefficient });
        }
    }

    let metric = raw.metric.as_ref().map(|entries| {
        let mut given: BTreeMap<(usize, usize), (usize, Rational)> = BTreeMap::new();
        for (pos, (i, j, c)) in entries.iter().enumerate() {
            let loc = format!("metric[{pos}]");
            let ok = v.index(&loc, *i) & v.index(&loc, *j);
            let value = v.coeff(&loc, c);
            if !ok {
                continue;
            }
            if given.contains_key(&(*i, *j)) {
                v.err(&loc, format!("duplicate metric entry ({i},{j})"));
                continue;
            }
            if let Some((_, other)) = given.get(&(*j, *i)) {
                if *other != value {
                    v.err(&loc, format!("non-symmetric metric: ({i},{j}) = {value} but ({j},{i}) = {other}"));
                }
            }
            given.insert((*i, *j), (pos, value));
        }
        let mut m = Matrix::zeros(n);
        for ((i, j), (_, value)) in given {
            m[(i - 1, j - 1)] = value.clone();
            m[(j - 1, i - 1)] = value;
        }
        m
    });

    let mut phi = Matrix::zeros(n);
    let mut seen = BTreeMap::new();
    for (pos, (i, k, c)) in raw.phi.iter().enumerate() {
        let loc = format!("phi[{pos}]");
        let ok = v.index(&loc, *i) & v.index(&loc, *k);
        let value = v.coeff(&loc, c);
        if seen.insert((*i, *k), pos).is_some() {
            v.err(&loc, format!("duplicate phi entry ({i},{k})"));
        }
        if ok {
            phi[(k - 1, i - 1)] = value;
        }
    }

    let xi = v.vector("xi", &raw.xi);
    let eta = raw.eta.as_ref().map(|e| v.vector("eta", e));

    let expected = raw.expected.as_ref().map(|e| Expected {
        nabla: e.nabla.as_ref().map(|t| v.connection("nabla", t)),
        nabla_tilde: e.nabla_tilde.as_ref().map(|t| v.connection("nabla_tilde", t)),
        curvature_lc: e.curvature_lc.as_ref().map(|c| v.curvature("curvature_lc", c)),
        curvature_qsmc: e.curvature_qsmc.as_ref().map(|c| v.curvature("curvature_qsmc", c)),
        ricci_qsmc_diag: e.ricci_qsmc_diag.as_ref().map(|d| v.vector("expected.ricci_qsmc_diag", d).0),
        l_ricci: e.l_ricci.as_ref().map(|l| v.coeff("expected.L_ricci", l)),
        einstein_qsmc: e.einstein_qsmc,
    });

    if !v.errors.is_empty() {
        return Err(SpecErrors(v.errors));
    }
    Ok(ManifoldSpec { name: raw.name, dimension: n, brackets, metric, phi, xi, eta, expected })
}

fn coeffs(v: &FrameVector<Rational>) -> Vec<Coeff> {
    v.0.iter().map(ToString::to_string).collect()
}

/// Renders a spec as a JSON document that `parse_spec` reads back unchanged.
pub fn render_spec(spec: &ManifoldSpec) -> String {
    let n = spec.dimension;
    let metric = spec.metric.as_ref().map(|m| {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if !m[(i, j)].is_zero() {
                    out.push((i + 1, j + 1, m[(i, j)].to_string()));
                }
            }
        }
        out
    });
    let mut phi = Vec::new();
    for i in 0..n {
        for k in 0..n {
            if !spec.phi[(k, i)].is_zero() {
                phi.push((i + 1, k + 1, spec.phi[(k, i)].to_string()));
            }
        }
    }
    let conn = |t: &Vec<ConnectionClaim>| t.iter().map(|c| (c.i, c.j, coeffs(&c.value))).collect();
    let curv = |c: &CurvatureClaims| RawCurvature {
        entries: c.entries.iter().map(|e| (e.i, e.j, e.k, coeffs(&e.value))).collect(),
        others_zero: c.others_zero,
    };
    let raw = RawSpec {
        name: spec.name.clone(),
        dimension: n,
        brackets: spec.brackets.iter().map(|b| (b.i, b.j, b.k, b.coefficient.to_string())).collect(),
        metric,
        phi,
        xi: coeffs(&spec.xi),
        eta: spec.eta.as_ref().map(coeffs),
        expected: spec.expected.as_ref().map(|e| RawExpected {
            nabla: e.nabla.as_ref().map(conn),
            nabla_tilde: e.nabla_tilde.as_ref().map(conn),
            curvature_lc: e.curvature_lc.as_ref().map(curv),
            curvature_qsmc: e.curvature_qsmc.as_ref().map(curv),
            ricci_qsmc_diag: e.ricci_qsmc_diag.as_ref().map(|d| d.iter().map(ToString::to_string).collect()),
            l_ricci: e.l_ricci.as_ref().map(ToString::to_string),
            einstein_qsmc: e.einstein_qsmc,
        }),
    };
    serde_json::to_string_pretty(&raw).expect("spec documents always serialize")
}

impl ManifoldSpec {
    pub fn metric_matrix(&self) -> Matrix<Rational> {
        self.metric.clone().unwrap_or_else(|| Matrix::identity(self.dimension))
    }

    pub fn presentation(&self) -> crate::Result<FramePresentation<Rational>> {
        let brackets: Vec<_> =
            self.brackets.iter().map(|b| (b.i - 1, b.j - 1, b.k - 1, b.coefficient.clone())).collect();
        FramePresentation::from_brackets(self.dimension, &brackets, self.metric_matrix())
    }

    pub fn structure(&self, p: &FramePresentation<Rational>) -> crate::Result<ParacontactStructure<Rational>> {
        let s = ParacontactStructure::new(p, self.phi.clone(), self.xi.clone())?;
        match &self.eta {
            Some(eta) => s.with_supplied_eta(eta.clone()),
            None => Ok(s),
        }
    }
}
