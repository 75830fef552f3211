//! Curvature-derivation actions, the Tachibana tensor and the exact
//! proportionality classifier behind the pseudosymmetry verdicts.
//!
//! An endomorphism field assigns to every frame plane `(E_i, E_j)` a linear
//! map `A_ij`: either the curvature operator `R(E_i,E_j)` or the wedge
//! `(E_i ∧_g E_j)Z = g(E_j,Z)E_i - g(E_i,Z)E_j`. It acts on tensors as a
//! derivation with a minus sign on every argument slot:
//!
//! ```text
//! (A·T)(Z,W)     = -T(AZ,W) - T(Z,AW)
//! (A·T)(U,V)W    = A(T(U,V)W) - T(AU,V)W - T(U,AV)W - T(U,V)AW
//! ```
//!
//! The expanded Ricci condition `S(R(X,Y)Z,W) + S(Z,R(X,Y)W)` is therefore
//! `-(R·S)(X,Y,Z,W)`; since both sides of a pseudosymmetry condition pick up
//! the same sign, the factor `L` is unaffected.
//!
//! Outputs put the plane slots first: `[i, j, k, l]` for the `(0,2)` action
//! and `[i, j, u, v, w, q]` (value lowered into `q`) for the `(1,3)` action.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{endomorphism_valued, CurvatureBundle};
use crate::error::{Error, Result};
use crate::frame::{FramePresentation, ParacontactStructure};
use crate::linalg::{FrameVector, Matrix};
use crate::scalar::Scalar;
use crate::tensor::{TensorDense, Variance};

pub const ACTION_02_CONVENTION: &str = "(A_ij·T)(E_k,E_l) : [i,j,k,l]";
pub const ACTION_13_CONVENTION: &str = "g((A_ij·T)(E_u,E_v)E_w, E_q) : [i,j,u,v,w,q]";

/// One `n × n` matrix per ordered frame plane, column convention.
#[derive(Debug, Clone, PartialEq)]
pub struct EndomorphismField<T> {
    dim: usize,
    maps: Vec<Matrix<T>>,
}

impl<T: Scalar> EndomorphismField<T> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Matrix<T>) -> Self {
        let mut maps = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                maps.push(f(i, j));
            }
        }
        Self { dim, maps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.maps[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    /// `A_ij = -A_ji` for all planes.
    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j).plus(self.get(j, i)).is_zero()))
    }

    /// `A_ijᵀ G + G A_ij = 0` for all planes.
    pub fn is_skew_adjoint(&self, metric: &Matrix<T>) -> bool {
        self.maps.iter().all(|a| a.transpose().mul(metric).plus(&metric.mul(a)).is_zero())
    }
}

/// `(E_i ∧_g E_j) E_k = g(E_j,E_k) E_i - g(E_i,E_k) E_j`
pub fn wedge_field<T: Scalar>(p: &FramePresentation<T>) -> EndomorphismField<T> {
    let g = p.metric();
    let n = p.dim();
    EndomorphismField::from_fn(n, |i, j| {
        Matrix::from_fn(n, |l, k| {
            let mut v = T::zero();
            if l == i {
                v = v + g[(j, k)].clone();
            }
            if l == j {
                v = v - g[(i, k)].clone();
            }
            v
        })
    })
}

/// `A_ij = R(E_i, E_j)` as a matrix acting on the third slot.
pub fn curvature_operator_field<T: Scalar>(bundle: &CurvatureBundle<T>) -> EndomorphismField<T> {
    let n = bundle.dim();
    EndomorphismField::from_fn(n, |i, j| Matrix::from_fn(n, |l, k| bundle.riemann.get(&[i, j, k, l]).clone()))
}

fn check_field<T: Scalar>(field: &EndomorphismField<T>, t: &TensorDense<T>) -> Result<()> {
    if field.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), found: t.dim() });
    }
    Ok(())
}

/// Derivation action of `field` on a `(0,2)` tensor.
pub fn derive_02<T: Scalar>(field: &EndomorphismField<T>, t: &TensorDense<T>) -> Result<TensorDense<T>> {
    if t.variance() != [Variance::Covector, Variance::Covector] {
        return Err(Error::ShapeMismatch(format!("derive_02 needs a (0,2) tensor, got {:?}", t.variance())));
    }
    check_field(field, t)?;
    let n = t.dim();
    TensorDense::from_fn(n, vec![Variance::Covector; 4], ACTION_02_CONVENTION, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        let a = field.get(i, j);
        let mut acc = T::zero();
        for m in 0..n {
            acc = acc - a[(m, k)].clone() * t.get(&[m, l]).clone() - t.get(&[k, m]).clone() * a[(m, l)].clone();
        }
        acc
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluation {
    #[default]
    Serial,
    /// Plane pairs are evaluated on the rayon pool; the result is identical
    /// to serial evaluation.
    Parallel,
}

/// Derivation action of `field` on a `(1,3)` tensor indexed `[u,v,w,value]`,
/// lowered to a `(0,6)` tensor with `G`.
pub fn derive_13<T: Scalar>(
    field: &EndomorphismField<T>,
    t: &TensorDense<T>,
    p: &FramePresentation<T>,
) -> Result<TensorDense<T>> {
    derive_13_with(field, t, p, Evaluation::Serial)
}

pub fn derive_13_with<T: Scalar>(
    field: &EndomorphismField<T>,
    t: &TensorDense<T>,
    p: &FramePresentation<T>,
    mode: Evaluation,
) -> Result<TensorDense<T>> {
    if t.variance() != endomorphism_valued().as_slice() {
        return Err(Error::ShapeMismatch(format!(
            "derive_13 needs a (1,3) tensor [u,v,w,value], got {:?}",
            t.variance()
        )));
    }
    check_field(field, t)?;
    let n = t.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    crate::tensor::checked_len(n, 6)?;

    let g = p.metric();
    let support: Vec<(Vec<usize>, &T)> = t.nonzero_entries().collect();
    let block = |plane: usize| plane_block(field.get(plane / n, plane % n), &support, n, g);
    let blocks: Vec<Vec<T>> = match mode {
        Evaluation::Serial => (0..n * n).map(block).collect(),
        Evaluation::Parallel => (0..n * n).into_par_iter().map(block).collect(),
    };
    TensorDense::from_entries(n, vec![Variance::Covector; 6], ACTION_13_CONVENTION, blocks.concat())
}

// Entries `[u,v,w,q]` of `g((A·T)(E_u,E_v)E_w, E_q)` for one plane, lexicographic.
// Scatters each nonzero `T[a,b,c,d]` into the four derivation terms.
fn plane_block<T: Scalar>(a: &Matrix<T>, support: &[(Vec<usize>, &T)], n: usize, g: &Matrix<T>) -> Vec<T> {
    let len = n.pow(4);
    if a.is_zero() {
        return vec![T::zero(); len];
    }
    // rows[m] = nonzero (r, A[r][m]); cols[m] = nonzero (c, A[m][c]).
    let rows: Vec<Vec<(usize, T)>> =
        (0..n).map(|m| (0..n).filter(|&r| !a[(r, m)].is_zero()).map(|r| (r, a[(r, m)].clone())).collect()).collect();
    let cols: Vec<Vec<(usize, T)>> =
        (0..n).map(|m| (0..n).filter(|&c| !a[(m, c)].is_zero()).map(|c| (c, a[(m, c)].clone())).collect()).collect();
    let at = |u: usize, v: usize, w: usize, x: usize| ((u * n + v) * n + w) * n + x;

    let mut d = vec![T::zero(); len];
    for (ix, t) in support {
        let (u, v, w, x) = (ix[0], ix[1], ix[2], ix[3]);
        for (r, c) in &rows[x] {
            d[at(u, v, w, *r)] = d[at(u, v, w, *r)].clone() + c.clone() * (*t).clone();
        }
        for (c, coef) in &cols[u] {
            d[at(*c, v, w, x)] = d[at(*c, v, w, x)].clone() - coef.clone() * (*t).clone();
        }
        for (c, coef) in &cols[v] {
            d[at(u, *c, w, x)] = d[at(u, *c, w, x)].clone() - coef.clone() * (*t).clone();
        }
        for (c, coef) in &cols[w] {
            d[at(u, v, *c, x)] = d[at(u, v, *c, x)].clone() - coef.clone() * (*t).clone();
        }
    }
    let mut out = vec![T::zero(); len];
    for (offset, value) in d.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        let base = offset - offset % n;
        for q in 0..n {
            let gq = &g[(offset % n, q)];
            if !gq.is_zero() {
                out[base + q] = out[base + q].clone() + value.clone() * gq.clone();
            }
        }
    }
    out
}

/// Tachibana tensor `Q(g, T) = (X ∧_g Y)·T`.
///
/// Accepts a `(0,2)` tensor, a `(1,3)` tensor `[u,v,w,value]`, or a fully
/// lowered `(0,4)` tensor whose last slot is raised with `G^{-1}` first.
pub fn tachibana<T: Scalar>(p: &FramePresentation<T>, t: &TensorDense<T>) -> Result<TensorDense<T>> {
    let wedge = wedge_field(p);
    match t.arity() {
        2 => derive_02(&wedge, t),
        4 if t.variance() == endomorphism_valued().as_slice() => derive_13(&wedge, t, p),
        4 if t.variance().iter().all(|v| *v == Variance::Covector) => {
            let raised = raise_last(t, p)?;
            derive_13(&wedge, &raised, p)
        }
        a => Err(Error::UnsupportedArity(a)),
    }
}

fn raise_last<T: Scalar>(t: &TensorDense<T>, p: &FramePresentation<T>) -> Result<TensorDense<T>> {
    let ginv = p.metric_inverse()?;
    let n = t.dim();
    TensorDense::from_fn(n, endomorphism_valued(), format!("raised({})", t.convention()), |ix| {
        (0..n).fold(T::zero(), |acc, q| acc + t.get(&[ix[0], ix[1], ix[2], q]).clone() * ginv[(q, ix[3])].clone())
    })
}

/// Result of comparing `A` against `L·B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<T> {
    BothZero,
    /// `A = 0` while `B ≠ 0`: the `L = 0` case.
    Semisymmetric,
    Proportional {
        factor: T,
    },
    /// 0-based multi-index where `A ≠ L·B` for the pivot-defined `L`.
    NotProportional {
        witness: Vec<usize>,
    },
    /// `A ≠ 0` but `B = 0`; 0-based multi-index of a nonzero `A` entry.
    NoAdmissibleFactor {
        witness: Vec<usize>,
    },
}

impl<T: Scalar> Verdict<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::BothZero => "both_zero",
            Verdict::Semisymmetric => "semisymmetric",
            Verdict::Proportional { .. } => "proportional",
            Verdict::NotProportional { .. } => "not_proportional",
            Verdict::NoAdmissibleFactor { .. } => "no_admissible_L",
        }
    }

    /// The factor `L`, if one exists (`0` for semisymmetric).
    pub fn factor(&self) -> Option<T> {
        match self {
            Verdict::Semisymmetric => Some(T::zero()),
            Verdict::Proportional { factor } => Some(factor.clone()),
            _ => None,
        }
    }

    /// Whether `A = L·B` holds for some constant `L`.
    pub fn condition_holds(&self) -> bool {
        !matches!(self, Verdict::NotProportional { .. } | Verdict::NoAdmissibleFactor { .. })
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            Verdict::NotProportional { witness } | Verdict::NoAdmissibleFactor { witness } => Some(witness),
            _ => None,
        }
    }
}

impl<T: Scalar> fmt::Display for Verdict<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proportional { factor } => write!(f, "proportional, L = {factor}"),
            Verdict::Semisymmetric => f.write_str("semisymmetric, L = 0"),
            Verdict::BothZero => f.write_str("both_zero"),
            Verdict::NotProportional { witness } | Verdict::NoAdmissibleFactor { witness } => {
                let idx: Vec<String> = witness.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "{} at ({})", self.kind(), idx.join(","))
            }
        }
    }
}

/// Decides whether `A = L·B` for a single exact constant `L`.
///
/// `L` is read off at the lexicographically first index where `B ≠ 0` and
/// then verified at every index, including `A = 0` wherever `B = 0`.
pub fn classify_proportionality<T: Scalar>(a: &TensorDense<T>, b: &TensorDense<T>) -> Result<Verdict<T>> {
    a.check_shape(b)?;
    let a_nonzero = a.first_nonzero();
    let Some(pivot) = b.first_nonzero() else {
        return Ok(match a_nonzero {
            None => Verdict::BothZero,
            Some(witness) => Verdict::NoAdmissibleFactor { witness },
        });
    };
    if a_nonzero.is_none() {
        return Ok(Verdict::Semisymmetric);
    }
    let factor = a.get(&pivot).checked_quotient(b.get(&pivot))?;
    let mismatch = a.entries().iter().zip(b.entries()).position(|(x, y)| *x != factor.clone() * y.clone());
    Ok(match mismatch {
        None => Verdict::Proportional { factor },
        Some(offset) => Verdict::NotProportional { witness: a.multi_index(offset) },
    })
}

/// `Some(λ)` if `S = λ G` exactly.
pub fn einstein_check<T: Scalar>(s: &TensorDense<T>, p: &FramePresentation<T>) -> Result<Option<T>> {
    let n = p.dim();
    if s.arity() != 2 || s.dim() != n {
        return Err(Error::ShapeMismatch("einstein_check needs an n×n (0,2) tensor".into()));
    }
    let g = p.metric();
    let Some((r0, c0)) = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).find(|&(r, c)| !g[(r, c)].is_zero()) else {
        return Err(Error::SingularMetric);
    };
    let lambda = s.get(&[r0, c0]).checked_quotient(&g[(r0, c0)])?;
    let all = (0..n).all(|r| (0..n).all(|c| *s.get(&[r, c]) == lambda.clone() * g[(r, c)].clone()));
    Ok(all.then_some(lambda))
}

pub fn projectively_flat_check<T: Scalar>(projective: &TensorDense<T>) -> bool {
    projective.is_zero()
}

/// Contracts the listed slots of `t` with `v`, one after another, highest
/// slot first so the remaining slot numbers stay valid.
pub fn contract_with_vector<T: Scalar>(
    t: &TensorDense<T>,
    slots: &[usize],
    v: &FrameVector<T>,
) -> Result<TensorDense<T>> {
    let mut sorted = slots.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.dedup();
    let mut cur = t.clone();
    for slot in sorted {
        if slot >= cur.arity() {
            return Err(Error::SlotOutOfRange { slot, arity: cur.arity() });
        }
        let n = cur.dim();
        let mut variance = cur.variance().to_vec();
        variance.remove(slot);
        let convention = format!("{}|{slot}=v", cur.convention());
        let mut full = vec![0; cur.arity()];
        let next = TensorDense::from_fn(n, variance, convention, |ix| {
            let mut pos = 0;
            for (s, f) in full.iter_mut().enumerate() {
                if s != slot {
                    *f = ix[pos];
                    pos += 1;
                }
            }
            let mut acc = T::zero();
            for a in (0..n).filter(|&a| !v[a].is_zero()) {
                full[slot] = a;
                acc = acc + v[a].clone() * cur.get(&full).clone();
            }
            acc
        })?;
        cur = next;
    }
    Ok(cur)
}

/// Which pseudosymmetry condition a comparison belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorFamily {
    Riemann,
    Ricci,
    Projective,
}

impl TensorFamily {
    pub const ALL: [TensorFamily; 3] = [TensorFamily::Riemann, TensorFamily::Ricci, TensorFamily::Projective];

    pub fn name(self) -> &'static str {
        match self {
            TensorFamily::Riemann => "riemann",
            TensorFamily::Ricci => "ricci",
            TensorFamily::Projective => "projective",
        }
    }

    /// Slots of the derivation output contracted with `ξ` for the
    /// ξ-restricted form of the condition:
    /// riemann `R(ξ,Y)·R`, ricci plane `(X,ξ)` with `W = ξ`, projective plane
    /// `(X,ξ)` with `W = ξ`.
    pub fn xi_slots(self) -> &'static [usize] {
        match self {
            TensorFamily::Riemann => &[0],
            TensorFamily::Ricci => &[1, 3],
            TensorFamily::Projective => &[1, 4],
        }
    }
}

/// The two sides of one pseudosymmetry condition, `R·T` and `Q(g,T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSides<T> {
    pub curvature_action: TensorDense<T>,
    pub tachibana: TensorDense<T>,
}

pub fn condition_sides<T: Scalar>(
    family: TensorFamily,
    bundle: &CurvatureBundle<T>,
    p: &FramePresentation<T>,
    mode: Evaluation,
) -> Result<ConditionSides<T>> {
    let field = curvature_operator_field(bundle);
    let wedge = wedge_field(p);
    let (lhs, rhs) = match family {
        TensorFamily::Ricci => (derive_02(&field, &bundle.ricci)?, derive_02(&wedge, &bundle.ricci)?),
        TensorFamily::Riemann => {
            (derive_13_with(&field, &bundle.riemann, p, mode)?, derive_13_with(&wedge, &bundle.riemann, p, mode)?)
        }
        TensorFamily::Projective => {
            let proj = crate::curvature::projective(bundle, p)?;
            (derive_13_with(&field, &proj, p, mode)?, derive_13_with(&wedge, &proj, p, mode)?)
        }
    };
    Ok(ConditionSides { curvature_action: lhs, tachibana: rhs })
}

/// Full and ξ-restricted verdicts for one tensor family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyVerdict<T> {
    pub family: TensorFamily,
    pub full: Verdict<T>,
    pub xi_slice: Verdict<T>,
}

pub fn classify_family<T: Scalar>(
    family: TensorFamily,
    bundle: &CurvatureBundle<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<FamilyVerdict<T>> {
    let sides = condition_sides(family, bundle, p, Evaluation::Parallel)?;
    let full = classify_proportionality(&sides.curvature_action, &sides.tachibana)?;
    let a = contract_with_vector(&sides.curvature_action, family.xi_slots(), s.xi())?;
    let b = contract_with_vector(&sides.tachibana, family.xi_slots(), s.xi())?;
    let xi_slice = classify_proportionality(&a, &b)?;
    Ok(FamilyVerdict { family, full, xi_slice })
}

/// Every verdict for the curvature of one connection.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionClassification<T> {
    pub families: Vec<FamilyVerdict<T>>,
    pub einstein: Option<T>,
    pub projectively_flat: bool,
}

impl<T: Scalar> ConnectionClassification<T> {
    pub fn family(&self, family: TensorFamily) -> &FamilyVerdict<T> {
        self.families.iter().find(|f| f.family == family).expect("all families are classified")
    }
}

pub fn classify_connection<T: Scalar>(
    bundle: &CurvatureBundle<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<ConnectionClassification<T>> {
    let families = TensorFamily::ALL.iter().map(|&f| classify_family(f, bundle, s, p)).collect::<Result<Vec<_>>>()?;
    let einstein = einstein_check(&bundle.ricci, p)?;
    let projectively_flat = projectively_flat_check(&crate::curvature::projective(bundle, p)?);
    Ok(ConnectionClassification { families, einstein, projectively_flat })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremStatus {
    Consistent,
    Inconsistent,
    PremiseNotEngaged,
}

/// Whether one instance agrees with one of the dichotomies for the
/// quarter-symmetric connection. Advisory only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub statement: &'static str,
    pub status: TheoremStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullClassification<T> {
    pub quarter_symmetric: ConnectionClassification<T>,
    pub levi_civita: ConnectionClassification<T>,
    pub theorems: Vec<TheoremCheck>,
}

fn dichotomy<T: Scalar>(
    statement: &'static str,
    verdict: &Verdict<T>,
    alternative: bool,
    alternative_name: &str,
) -> TheoremCheck {
    let minus_two = T::from_int(-2);
    let (status, detail) = match verdict.factor() {
        Some(l) if alternative => (TheoremStatus::Consistent, format!("L = {l}; {alternative_name}")),
        Some(l) if l == minus_two => (TheoremStatus::Consistent, format!("L = {l}; not {alternative_name}")),
        Some(l) => (TheoremStatus::Inconsistent, format!("L = {l} and not {alternative_name}")),
        None => (TheoremStatus::PremiseNotEngaged, format!("condition verdict: {verdict}")),
    };
    let status = if matches!(verdict, Verdict::BothZero) { TheoremStatus::PremiseNotEngaged } else { status };
    TheoremCheck { statement, status, detail }
}

/// Runs every classifier on both connections and checks the instance against
/// the four implications for the quarter-symmetric connection.
pub fn full_classification<T: Scalar>(
    p: &FramePresentation<T>,
    s: &ParacontactStructure<T>,
    lc_bundle: &CurvatureBundle<T>,
    qs_bundle: &CurvatureBundle<T>,
) -> Result<FullClassification<T>> {
    let qs = classify_connection(qs_bundle, s, p)?;
    let lc = classify_connection(lc_bundle, s, p)?;
    let einstein = qs.einstein.is_some();
    let flat = qs.projectively_flat;
    let theorems = vec![
        dichotomy(
            "pseudosymmetric => Einstein or L = -2",
            &qs.family(TensorFamily::Riemann).full,
            einstein,
            "Einstein",
        ),
        dichotomy(
            "Ricci-pseudosymmetric => Einstein or L = -2",
            &qs.family(TensorFamily::Ricci).full,
            einstein,
            "Einstein",
        ),
        TheoremCheck {
            statement: "projectively flat => Einstein",
            status: match (flat, einstein) {
                (false, _) => TheoremStatus::PremiseNotEngaged,
                (true, true) => TheoremStatus::Consistent,
                (true, false) => TheoremStatus::Inconsistent,
            },
            detail: format!("projectively flat: {flat}, Einstein: {einstein}"),
        },
        dichotomy(
            "projectively pseudosymmetric => projectively flat or L = -2",
            &qs.family(TensorFamily::Projective).full,
            flat,
            "projectively flat",
        ),
    ];
    Ok(FullClassification { quarter_symmetric: qs, levi_civita: lc, theorems })
}
