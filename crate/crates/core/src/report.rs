//! End-to-end pipeline over a spec, the discrepancy engine, and the two
//! report renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::check::{Check, CheckList};
use crate::connection::{connection_checks, levi_civita, quarter_symmetric, quarter_symmetric_checks, Connection};
use crate::curvature::{
    check_curvature_relation, check_ricci_relation, curvature, identity_suite, projective, ricci_diag, symmetry_checks,
    CurvatureBundle,
};
use crate::frame::{validate_paracontact, validate_presentation};
use crate::linalg::FrameVector;
use crate::spec_file::{ConnectionClaim, CurvatureClaims, ManifoldSpec};
use crate::symmetry::{
    classify_family, full_classification, ConnectionClassification, FamilyVerdict, FullClassification, TensorFamily,
    TheoremCheck, Verdict,
};
use crate::tensor::TensorDense;
use crate::Rational;

/// Everything computed for one connection.
#[derive(Debug, Clone)]
pub struct ConnectionResult {
    pub connection: Connection<Rational>,
    pub checks: CheckList,
    pub bundle: CurvatureBundle<Rational>,
    pub projective: TensorDense<Rational>,
    pub curvature_checks: CheckList,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub spec: ManifoldSpec,
    pub presentation_checks: CheckList,
    pub paracontact_checks: CheckList,
    pub levi_civita: ConnectionResult,
    pub quarter_symmetric: ConnectionResult,
    pub identities: CheckList,
    pub relations: CheckList,
    pub classification: FullClassification<Rational>,
    pub discrepancies: Option<DiscrepancyReport>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid frame presentation: {}", failed_names(.0))]
    InvalidPresentation(CheckList),
    #[error(transparent)]
    Compute(#[from] crate::Error),
}

fn failed_names(checks: &CheckList) -> String {
    checks.failures().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
}

fn connection_result(
    connection: Connection<Rational>,
    checks: CheckList,
    p: &crate::frame::FramePresentation<Rational>,
) -> crate::Result<ConnectionResult> {
    let bundle = curvature(&connection, p)?;
    let projective = projective(&bundle, p)?;
    let curvature_checks = symmetry_checks(&bundle)?;
    Ok(ConnectionResult { connection, checks, bundle, projective, curvature_checks })
}

/// Runs every computation on a spec.
///
/// An invalid presentation (bracket antisymmetry, Jacobi, metric) aborts the
/// run; failed paracontact axioms are reported and the run continues.
pub fn run_pipeline(spec: &ManifoldSpec) -> Result<PipelineReport, PipelineError> {
    let (p, s) = checked_structure(spec)?;
    let presentation_checks = validate_presentation(&p);
    let paracontact_checks = validate_paracontact(&p, &s)?;

    let lc_connection = levi_civita(&p)?;
    let lc_checks = connection_checks(&lc_connection, &p)?;
    let lc = connection_result(lc_connection, lc_checks, &p)?;
    let qs_connection = quarter_symmetric(&lc.connection, &s, &p)?;
    let qs_checks = quarter_symmetric_checks(&qs_connection, &s, &p)?;
    let qs = connection_result(qs_connection, qs_checks, &p)?;

    let identities = identity_suite(&lc.connection, &lc.bundle, &s, &p)?;
    let relations = CheckList::from_iter([
        check_curvature_relation(&lc.bundle, &qs.bundle, &s, &p)?.to_check("curvature_relation"),
        check_ricci_relation(&lc.bundle, &qs.bundle, &s, &p)?.to_check("ricci_relation"),
    ]);
    let classification = full_classification(&p, &s, &lc.bundle, &qs.bundle)?;
    let discrepancies = spec.expected.as_ref().map(|e| {
        let mut d = DiscrepancyReport::default();
        if let Some(t) = &e.nabla {
            d.connection_claims("nabla", "nabla", t, &lc.connection);
        }
        if let Some(t) = &e.nabla_tilde {
            d.connection_claims("nabla_tilde", "nabla~", t, &qs.connection);
        }
        if let Some(c) = &e.curvature_lc {
            d.curvature_claims("curvature_lc", "R", c, &lc.bundle);
        }
        if let Some(c) = &e.curvature_qsmc {
            d.curvature_claims("curvature_qsmc", "R~", c, &qs.bundle);
        }
        if let Some(diag) = &e.ricci_qsmc_diag {
            for (a, (claimed, computed)) in diag.iter().zip(ricci_diag(&qs.bundle)).enumerate() {
                d.push(
                    "ricci_qsmc_diag",
                    format!("S~(E{0},E{0})", a + 1),
                    Claim::Scalar(claimed.clone()),
                    Claim::Scalar(computed),
                );
            }
        }
        let qsc = &classification.quarter_symmetric;
        if let Some(l) = &e.l_ricci {
            let computed = qsc.family(TensorFamily::Ricci).full.factor().map_or(Claim::Absent, Claim::Scalar);
            d.push("L_ricci", "L(S~)".into(), Claim::Scalar(l.clone()), computed);
        }
        if let Some(flag) = e.einstein_qsmc {
            d.push("einstein_qsmc", "S~ = lambda g".into(), Claim::Flag(flag), Claim::Flag(qsc.einstein.is_some()));
        }
        d
    });

    Ok(PipelineReport {
        spec: spec.clone(),
        presentation_checks,
        paracontact_checks,
        levi_civita: lc,
        quarter_symmetric: qs,
        identities,
        relations,
        classification,
        discrepancies,
    })
}

/// Presentation and paracontact checks only.
pub fn validate_spec(spec: &ManifoldSpec) -> crate::Result<(CheckList, CheckList)> {
    let p = spec.presentation()?;
    let presentation = validate_presentation(&p);
    let s = spec.structure(&p)?;
    Ok((presentation, validate_paracontact(&p, &s)?))
}

/// The structure identities followed by the two connection relations.
pub fn identity_checks(spec: &ManifoldSpec) -> Result<CheckList, PipelineError> {
    let (p, s) = checked_structure(spec)?;
    let lc = levi_civita(&p)?;
    let lc_bundle = curvature(&lc, &p)?;
    let qs_bundle = curvature(&quarter_symmetric(&lc, &s, &p)?, &p)?;
    let mut checks = identity_suite(&lc, &lc_bundle, &s, &p)?;
    checks.push(check_curvature_relation(&lc_bundle, &qs_bundle, &s, &p)?.to_check("curvature_relation"));
    checks.push(check_ricci_relation(&lc_bundle, &qs_bundle, &s, &p)?.to_check("ricci_relation"));
    Ok(checks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    LeviCivita,
    QuarterSymmetric,
}

/// Full and ξ-slice verdicts for one tensor family of one connection.
pub fn classify_spec(
    spec: &ManifoldSpec,
    family: TensorFamily,
    which: Which,
) -> Result<FamilyVerdict<Rational>, PipelineError> {
    let (p, s) = checked_structure(spec)?;
    let lc = levi_civita(&p)?;
    let connection = match which {
        Which::LeviCivita => lc,
        Which::QuarterSymmetric => quarter_symmetric(&lc, &s, &p)?,
    };
    Ok(classify_family(family, &curvature(&connection, &p)?, &s, &p)?)
}

fn checked_structure(
    spec: &ManifoldSpec,
) -> Result<(crate::frame::FramePresentation<Rational>, crate::frame::ParacontactStructure<Rational>), PipelineError> {
    let p = spec.presentation()?;
    let checks = validate_presentation(&p);
    if !checks.all_passed() {
        return Err(PipelineError::InvalidPresentation(checks));
    }
    let s = spec.structure(&p)?;
    Ok((p, s))
}

/// A claimed or computed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    Scalar(Rational),
    Vector(FrameVector<Rational>),
    Flag(bool),
    /// Nothing was computed, e.g. no proportionality factor exists.
    Absent,
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Claim::Scalar(v) => write!(f, "{v}"),
            Claim::Vector(v) => write!(f, "{v}"),
            Claim::Flag(b) => write!(f, "{b}"),
            Claim::Absent => f.write_str("none"),
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Claim::Scalar(v) => s.serialize_str(&v.to_string()),
            Claim::Vector(v) => s.collect_seq(v.0.iter().map(ToString::to_string)),
            Claim::Flag(b) => s.serialize_bool(*b),
            Claim::Absent => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimVerdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyEntry {
    pub section: &'static str,
    pub location: String,
    pub claimed: Claim,
    pub computed: Claim,
    pub verdict: ClaimVerdict,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiscrepancySummary {
    pub claims: usize,
    pub matches: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub entries: Vec<DiscrepancyEntry>,
}

impl DiscrepancyReport {
    pub fn push(&mut self, section: &'static str, location: String, claimed: Claim, computed: Claim) {
        let verdict = if claimed == computed { ClaimVerdict::Match } else { ClaimVerdict::Mismatch };
        self.entries.push(DiscrepancyEntry { section, location, claimed, computed, verdict });
    }

    fn connection_claims(
        &mut self,
        section: &'static str,
        symbol: &str,
        claims: &[ConnectionClaim],
        c: &Connection<Rational>,
    ) {
        for claim in claims {
            let computed = c.nabla(claim.i - 1, claim.j - 1);
            self.push(
                section,
                format!("{symbol}(E{},E{})", claim.i, claim.j),
                Claim::Vector(claim.value.clone()),
                Claim::Vector(computed),
            );
        }
    }

    /// Expands claims to every ordered plane: `i > j` by antisymmetry,
    /// `i = j` as zero, and unlisted `i < j` as zero when `others_zero`.
    fn curvature_claims(
        &mut self,
        section: &'static str,
        symbol: &str,
        claims: &CurvatureClaims,
        bundle: &CurvatureBundle<Rational>,
    ) {
        let n = bundle.dim();
        let listed = |i: usize, j: usize, k: usize| {
            claims.entries.iter().find(|e| (e.i, e.j, e.k) == (i + 1, j + 1, k + 1)).map(|e| e.value.clone())
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let claimed = match i.cmp(&j) {
                        std::cmp::Ordering::Less => listed(i, j, k),
                        std::cmp::Ordering::Greater => {
                            listed(j, i, k).map(|v| v.scaled(&Rational::from_integer((-1).into())))
                        }
                        std::cmp::Ordering::Equal => None,
                    };
                    let claimed = match claimed {
                        Some(v) => v,
                        None if i == j || claims.others_zero => FrameVector::zeros(n),
                        None if listed(i.min(j), i.max(j), k).is_none() => continue,
                        None => FrameVector::zeros(n),
                    };
                    self.push(
                        section,
                        format!("{symbol}(E{},E{})E{}", i + 1, j + 1, k + 1),
                        Claim::Vector(claimed),
                        Claim::Vector(bundle.r(i, j, k)),
                    );
                }
            }
        }
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &DiscrepancyEntry> {
        self.entries.iter().filter(|e| e.verdict == ClaimVerdict::Mismatch)
    }

    pub fn summary(&self) -> DiscrepancySummary {
        let mismatches = self.mismatches().count();
        DiscrepancySummary { claims: self.entries.len(), matches: self.entries.len() - mismatches, mismatches }
    }
}

impl PipelineReport {
    /// Every check in the report, each name prefixed by its section.
    pub fn all_checks(&self) -> Vec<(String, &Check)> {
        let sections: [(&str, &CheckList); 8] = [
            ("presentation", &self.presentation_checks),
            ("paracontact", &self.paracontact_checks),
            ("levi_civita", &self.levi_civita.checks),
            ("levi_civita.curvature", &self.levi_civita.curvature_checks),
            ("quarter_symmetric", &self.quarter_symmetric.checks),
            ("quarter_symmetric.curvature", &self.quarter_symmetric.curvature_checks),
            ("identities", &self.identities),
            ("relations", &self.relations),
        ];
        sections
            .into_iter()
            .flat_map(|(section, list)| list.checks.iter().map(move |c| (format!("{section}.{}", c.name), c)))
            .collect()
    }

    pub fn failed_checks(&self) -> Vec<String> {
        self.all_checks().into_iter().filter(|(_, c)| !c.passed).map(|(name, _)| name).collect()
    }

    pub fn mismatch_count(&self) -> usize {
        self.discrepancies.as_ref().map_or(0, |d| d.summary().mismatches)
    }

    /// `0` when every check passes and no claim mismatches, else `1`.
    /// Theorem consistency entries are advisory and never affect it.
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.failed_checks().is_empty() || self.mismatch_count() > 0)
    }

    /// Validation-only status: presentation and paracontact axioms.
    pub fn validation_passed(&self) -> bool {
        self.presentation_checks.all_passed() && self.paracontact_checks.all_passed()
    }

    pub fn machine(&self) -> MachineReport {
        let failed_checks = self.failed_checks();
        MachineReport {
            name: self.spec.name.clone(),
            dimension: self.spec.dimension,
            status: Status { exit_code: self.exit_code(), mismatches: self.mismatch_count(), failed_checks },
            validation: Validation {
                presentation: self.presentation_checks.clone(),
                paracontact: self.paracontact_checks.clone(),
            },
            levi_civita: connection_section(&self.levi_civita, &self.classification.levi_civita),
            quarter_symmetric: connection_section(&self.quarter_symmetric, &self.classification.quarter_symmetric),
            identities: self.identities.clone(),
            relations: self.relations.clone(),
            theorems: self.classification.theorems.clone(),
            discrepancies: self
                .discrepancies
                .as_ref()
                .map(|d| DiscrepancySection { summary: d.summary(), entries: d.entries.clone() }),
        }
    }

    /// Pretty JSON; byte-identical across runs for the same spec.
    pub fn render_machine(&self) -> String {
        serde_json::to_string_pretty(&self.machine()).expect("reports always serialize") + "\n"
    }

    pub fn render_human(&self) -> String {
        human(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MachineReport {
    pub name: String,
    pub dimension: usize,
    pub status: Status,
    pub validation: Validation,
    pub levi_civita: ConnectionSection,
    pub quarter_symmetric: ConnectionSection,
    pub identities: CheckList,
    pub relations: CheckList,
    pub theorems: Vec<TheoremCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancies: Option<DiscrepancySection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Status {
    pub exit_code: i32,
    pub failed_checks: Vec<String>,
    pub mismatches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub presentation: CheckList,
    pub paracontact: CheckList,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectionSection {
    /// `nabla[i][j]` lists the components of `∇_{E_i} E_j`.
    pub nabla: Vec<Vec<Vec<String>>>,
    pub checks: CheckList,
    pub curvature: CurvatureSection,
    pub classification: ClassificationSection,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureComponent {
    /// 1-based `[i, j, k]` for `R(E_i, E_j) E_k`.
    pub index: [usize; 3],
    pub value: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureSection {
    /// Nonzero components with `i < j`.
    pub riemann: Vec<CurvatureComponent>,
    pub ricci: Vec<Vec<String>>,
    pub scalar: String,
    pub projective: Vec<CurvatureComponent>,
    pub checks: CheckList,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictSection {
    pub kind: &'static str,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
    /// 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl From<&Verdict<Rational>> for VerdictSection {
    fn from(v: &Verdict<Rational>) -> Self {
        Self {
            kind: v.kind(),
            factor: v.factor().map(|l| l.to_string()),
            witness: v.witness().map(|w| w.iter().map(|i| i + 1).collect()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilySection {
    pub tensor: TensorFamily,
    pub full: VerdictSection,
    pub xi_slice: VerdictSection,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationSection {
    pub families: Vec<FamilySection>,
    pub einstein: Option<String>,
    pub projectively_flat: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancySection {
    pub summary: DiscrepancySummary,
    pub entries: Vec<DiscrepancyEntry>,
}

fn strings(v: &FrameVector<Rational>) -> Vec<String> {
    v.0.iter().map(ToString::to_string).collect()
}

fn components(t: &TensorDense<Rational>) -> Vec<CurvatureComponent> {
    let n = t.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let v = crate::curvature::component_vector(t, i, j, k);
                if !v.is_zero() {
                    out.push(CurvatureComponent { index: [i + 1, j + 1, k + 1], value: strings(&v) });
                }
            }
        }
    }
    out
}

fn connection_section(r: &ConnectionResult, c: &ConnectionClassification<Rational>) -> ConnectionSection {
    let n = r.connection.dim();
    let b = &r.bundle;
    ConnectionSection {
        nabla: (0..n).map(|i| (0..n).map(|j| strings(&r.connection.nabla(i, j))).collect()).collect(),
        checks: r.checks.clone(),
        curvature: CurvatureSection {
            riemann: components(&b.riemann),
            ricci: (0..n).map(|j| (0..n).map(|k| b.ricci.get(&[j, k]).to_string()).collect()).collect(),
            scalar: b.scalar.to_string(),
            projective: components(&r.projective),
            checks: r.curvature_checks.clone(),
        },
        classification: ClassificationSection {
            families: c
                .families
                .iter()
                .map(|f| FamilySection { tensor: f.family, full: (&f.full).into(), xi_slice: (&f.xi_slice).into() })
                .collect(),
            einstein: c.einstein.as_ref().map(ToString::to_string),
            projectively_flat: c.projectively_flat,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Align {
    Left,
    /// Right-aligned except the first column, for numeric tables.
    Right,
}

/// Columns separated by two spaces, indented by two.
pub fn format_table(rows: &[Vec<String>], align: Align) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::from("  ");
        for (c, cell) in row.iter().enumerate() {
            let sep = if c == 0 { "" } else { "  " };
            if c == 0 || align == Align::Left {
                let _ = write!(line, "{sep}{cell:<w$}", w = widths[c]);
            } else {
                let _ = write!(line, "{sep}{cell:>w$}", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn check_rows(section: &str, list: &CheckList) -> Vec<Vec<String>> {
    list.checks
        .iter()
        .map(|c| {
            let mut row = vec![section.to_string(), c.name.clone(), if c.passed { "pass" } else { "FAIL" }.to_string()];
            let mut note = String::new();
            if let Some(w) = &c.witness {
                let idx: Vec<String> = w.iter().map(ToString::to_string).collect();
                let _ = write!(note, "at ({}) ", idx.join(","));
            }
            if let Some(d) = &c.detail {
                note.push_str(d);
            }
            row.push(note.trim_end().to_string());
            row
        })
        .collect()
}

fn connection_table(c: &Connection<Rational>) -> String {
    let n = c.dim();
    let mut rows = vec![std::iter::once(String::new()).chain((1..=n).map(|j| format!("E{j}"))).collect::<Vec<_>>()];
    for i in 0..n {
        let mut row = vec![format!("E{}", i + 1)];
        row.extend((0..n).map(|j| c.nabla(i, j).to_string()));
        rows.push(row);
    }
    format_table(&rows, Align::Right)
}

fn curvature_listing(symbol: &str, t: &TensorDense<Rational>) -> String {
    let rows: Vec<Vec<String>> = components(t)
        .into_iter()
        .map(|c| {
            let v = FrameVector(c.value.iter().map(|s| s.parse::<Rational>().expect("rendered rational")).collect());
            vec![format!("{symbol}(E{},E{})E{}", c.index[0], c.index[1], c.index[2]), "=".into(), v.to_string()]
        })
        .collect();
    if rows.is_empty() {
        "  all components vanish\n".to_string()
    } else {
        format_table(&rows, Align::Left)
    }
}

fn matrix_table(t: &TensorDense<Rational>) -> String {
    let n = t.dim();
    let mut rows = vec![std::iter::once(String::new()).chain((1..=n).map(|j| format!("E{j}"))).collect::<Vec<_>>()];
    for j in 0..n {
        let mut row = vec![format!("E{}", j + 1)];
        row.extend((0..n).map(|k| t.get(&[j, k]).to_string()));
        rows.push(row);
    }
    format_table(&rows, Align::Right)
}

fn classification_rows(label: &str, c: &ConnectionClassification<Rational>) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = c
        .families
        .iter()
        .map(|f| vec![label.to_string(), f.family.name().to_string(), f.full.to_string(), f.xi_slice.to_string()])
        .collect();
    let einstein = c.einstein.as_ref().map_or("no".to_string(), |l| format!("yes, lambda = {l}"));
    rows.push(vec![label.to_string(), "einstein".into(), einstein, String::new()]);
    rows.push(vec![label.to_string(), "projectively flat".into(), c.projectively_flat.to_string(), String::new()]);
    rows
}

fn human(r: &PipelineReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} (n = {})\n", r.spec.name, r.spec.dimension);

    let mut rows = check_rows("presentation", &r.presentation_checks);
    rows.extend(check_rows("paracontact", &r.paracontact_checks));
    let _ = writeln!(out, "Validation\n{}", format_table(&rows, Align::Left));

    for (title, symbol, res) in [
        ("Levi-Civita connection", "R", &r.levi_civita),
        ("Quarter-symmetric metric connection", "R~", &r.quarter_symmetric),
    ] {
        let _ = writeln!(out, "{title}: nabla_(E_i) E_j, row i, column j\n{}", connection_table(&res.connection));
        let _ =
            writeln!(out, "{title}: curvature, nonzero components\n{}", curvature_listing(symbol, &res.bundle.riemann));
        let _ = writeln!(
            out,
            "{title}: Ricci tensor (scalar curvature {})\n{}",
            res.bundle.scalar,
            matrix_table(&res.bundle.ricci)
        );
        let mut rows = check_rows("connection", &res.checks);
        rows.extend(check_rows("curvature", &res.curvature_checks));
        let _ = writeln!(out, "{title}: checks\n{}", format_table(&rows, Align::Left));
    }

    let mut rows = check_rows("identity", &r.identities);
    rows.extend(check_rows("relation", &r.relations));
    let _ = writeln!(out, "Structure identities and connection relations\n{}", format_table(&rows, Align::Left));

    let mut rows = vec![vec!["connection".to_string(), "tensor".into(), "full".into(), "xi-slice".into()]];
    rows.extend(classification_rows("qsmc", &r.classification.quarter_symmetric));
    rows.extend(classification_rows("lc", &r.classification.levi_civita));
    let _ = writeln!(out, "Classification\n{}", format_table(&rows, Align::Left));

    let rows: Vec<Vec<String>> = r
        .classification
        .theorems
        .iter()
        .map(|t| {
            let status =
                serde_json::to_value(t.status).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            vec![t.statement.to_string(), status, t.detail.clone()]
        })
        .collect();
    let _ = writeln!(out, "Theorem consistency (advisory)\n{}", format_table(&rows, Align::Left));

    if let Some(d) = &r.discrepancies {
        let s = d.summary();
        let _ = writeln!(out, "Claimed values: {} checked, {} match, {} mismatch", s.claims, s.matches, s.mismatches);
        let rows: Vec<Vec<String>> = d
            .mismatches()
            .map(|e| vec![e.location.clone(), format!("claimed {}", e.claimed), format!("computed {}", e.computed)])
            .collect();
        if !rows.is_empty() {
            out.push_str(&format_table(&rows, Align::Left));
        }
        out.push('\n');
    }

    let failed = r.failed_checks();
    if failed.is_empty() && r.mismatch_count() == 0 {
        out.push_str("status: ok\n");
    } else {
        let _ = writeln!(out, "status: {} failed check(s), {} mismatch(es)", failed.len(), r.mismatch_count());
        for name in failed {
            let _ = writeln!(out, "  failed: {name}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;

    fn run(name: &str) -> PipelineReport {
        run_pipeline(&fixture(name).unwrap()).unwrap()
    }

    fn flagged(r: &PipelineReport, section: &str) -> Vec<String> {
        r.discrepancies
            .as_ref()
            .unwrap()
            .mismatches()
            .filter(|e| e.section == section)
            .map(|e| e.location.clone())
            .collect()
    }

    #[test]
    fn corrected_ex1_has_no_discrepancies() {
        let r = run("ex1-corrected");
        assert!(r.validation_passed());
        let d = r.discrepancies.as_ref().unwrap();
        assert_eq!(d.summary().mismatches, 0, "{:?}", d.mismatches().collect::<Vec<_>>());
        assert_eq!(ricci_diag(&r.quarter_symmetric.bundle), [-6, -6, -4].map(|v| Rational::from_integer(v.into())));
    }

    #[test]
    fn ex1_printed_flags_the_second_row() {
        let r = run("ex1-printed");
        assert_eq!(flagged(&r, "nabla_tilde"), ["nabla~(E2,E2)", "nabla~(E2,E3)"]);
        assert!(flagged(&r, "nabla").is_empty());
    }

    #[test]
    fn ex3_flags_planes_without_xi() {
        let r = run("ex3");
        let curv = flagged(&r, "curvature_qsmc");
        assert_eq!(curv.len(), 24);
        for loc in &curv {
            assert!(!loc.contains("E1,") && !loc.contains(",E1)"), "{loc}");
        }
        assert_eq!(flagged(&r, "ricci_qsmc_diag"), ["S~(E2,E2)", "S~(E3,E3)", "S~(E4,E4)", "S~(E5,E5)"]);
        assert_eq!(r.mismatch_count(), 28);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn flat_abelian_is_flat_and_unengaged() {
        let r = run("flat-abelian");
        assert!(r.quarter_symmetric.bundle.riemann.is_zero());
        for c in [&r.classification.quarter_symmetric, &r.classification.levi_civita] {
            for f in &c.families {
                assert_eq!(f.full, Verdict::BothZero);
                assert_eq!(f.xi_slice, Verdict::BothZero);
            }
        }
        assert!(r.discrepancies.is_none());
    }

    #[test]
    fn invalid_presentation_aborts() {
        let mut spec = fixture("flat-abelian").unwrap();
        spec.metric = Some(crate::linalg::Matrix::zeros(2));
        match run_pipeline(&spec) {
            Err(PipelineError::InvalidPresentation(checks)) => {
                assert!(!checks.get("metric_invertible").unwrap().passed);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn machine_report_is_deterministic_and_exact() {
        let a = run("ex2").render_machine();
        let b = run("ex2").render_machine();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        let ricci = &v["quarter_symmetric"]["classification"]["families"][1];
        assert_eq!(ricci["tensor"], "ricci");
        assert_eq!(ricci["full"]["kind"], "proportional");
        assert_eq!(ricci["full"]["L"], "-2");
        assert_eq!(v["quarter_symmetric"]["curvature"]["ricci"][4][4], "-8");
        let bytes = a.as_bytes();
        let decimal = bytes.windows(3).any(|w| w[0].is_ascii_digit() && w[1] == b'.' && w[2].is_ascii_digit());
        assert!(!decimal, "no decimal numbers in exact output");
    }

    #[test]
    fn human_report_has_tables() {
        let text = run("ex1-corrected").render_human();
        assert!(text.contains("R~(E1,E2)E1  =  4E2"), "{text}");
        assert!(text.contains("proportional, L = -2"));
        assert!(text.contains("failed: identities.eta_derivative"));
    }

    #[test]
    fn light_entry_points() {
        let spec = fixture("ex2").unwrap();
        let (pres, para) = validate_spec(&spec).unwrap();
        assert!(pres.all_passed() && para.all_passed());
        let ids = identity_checks(&spec).unwrap();
        assert_eq!(ids.failures().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["eta_derivative"]);
        let v = classify_spec(&spec, TensorFamily::Ricci, Which::QuarterSymmetric).unwrap();
        assert_eq!(v.full.to_string(), "proportional, L = -2");
        let v = classify_spec(&spec, TensorFamily::Riemann, Which::LeviCivita).unwrap();
        assert_eq!(v.full, Verdict::BothZero);
    }

    #[test]
    fn table_alignment() {
        let rows = [vec!["a".into(), "1".into()], vec!["bbb".into(), "-22".into()]];
        assert_eq!(format_table(&rows, Align::Right), "  a      1\n  bbb  -22\n");
        assert_eq!(format_table(&rows, Align::Left), "  a    1\n  bbb  -22\n");
    }
}
