//! Linear connections on a frame presentation.
//!
//! A connection is stored by its frame coefficients, `Γ^k_ij` with
//! `∇_{E_i} E_j = Σ_k Γ^k_ij E_k`, indexed `[i, j, k]`. All coefficients are
//! constant, so covariant derivatives of frame-expanded fields reduce to
//! finite sums.

use serde::Serialize;

use crate::check::{Check, CheckList};
use crate::error::{Error, Result};
use crate::frame::{FramePresentation, ParacontactStructure};
use crate::linalg::FrameVector;
use crate::scalar::Scalar;
use crate::tensor::{TensorDense, Variance};

pub const CONNECTION_CONVENTION: &str = "nabla_{E_i} E_j = Γ^k_ij E_k : [i,j,k]";
pub const TORSION_CONVENTION: &str = "T(E_i,E_j) = T^k_ij E_k : [i,j,k]";
pub const METRIC_DEFECT_CONVENTION: &str = "Γ_{ij,k} + Γ_{ik,j} : [i,j,k]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectionKind {
    LeviCivita,
    QuarterSymmetric,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connection<T> {
    gamma: TensorDense<T>,
    kind: ConnectionKind,
}

impl<T: Scalar> Connection<T> {
    /// Wraps arbitrary coefficients. No invariant is enforced; use
    /// [`connection_checks`] to audit them.
    pub fn custom(gamma: TensorDense<T>) -> Result<Self> {
        if gamma.variance() != [Variance::Covector, Variance::Covector, Variance::Vector] {
            return Err(Error::ShapeMismatch("connection coefficients must be indexed [i,j,k]".into()));
        }
        Ok(Self { gamma: gamma.with_convention(CONNECTION_CONVENTION), kind: ConnectionKind::Custom })
    }

    pub fn kind(&self) -> ConnectionKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    pub fn coefficients(&self) -> &TensorDense<T> {
        &self.gamma
    }

    /// `Γ^k_ij`
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &T {
        self.gamma.get(&[i, j, k])
    }

    /// `∇_{E_i} E_j`
    pub fn nabla(&self, i: usize, j: usize) -> FrameVector<T> {
        FrameVector((0..self.dim()).map(|k| self.gamma(i, j, k).clone()).collect())
    }

    /// `∇_X Y` for constant-coefficient fields `X`, `Y`.
    pub fn derivative(&self, x: &FrameVector<T>, y: &FrameVector<T>) -> FrameVector<T> {
        let n = self.dim();
        FrameVector(
            (0..n)
                .map(|k| {
                    let mut acc = T::zero();
                    for i in 0..n {
                        if x[i].is_zero() {
                            continue;
                        }
                        for j in 0..n {
                            acc = acc + x[i].clone() * y[j].clone() * self.gamma(i, j, k).clone();
                        }
                    }
                    acc
                })
                .collect(),
        )
    }
}

/// Levi-Civita connection from the Koszul formula.
///
/// With a constant metric the derivative terms drop out and
/// `2 Γ_{ij,k} = -g(E_i,[E_j,E_k]) - g(E_j,[E_i,E_k]) + g(E_k,[E_i,E_j])`,
/// then `Γ^l_ij = Σ_k G^{lk} Γ_{ij,k}`.
pub fn levi_civita<T: Scalar>(p: &FramePresentation<T>) -> Result<Connection<T>> {
    let n = p.dim();
    let ginv = p.metric_inverse()?;
    let g = p.metric();
    let two = T::from_int(2);
    // g(E_a, [E_b, E_c])
    let gc =
        |a: usize, b: usize, c: usize| (0..n).fold(T::zero(), |acc, m| acc + g[(a, m)].clone() * p.c(b, c, m).clone());
    let lowered = TensorDense::from_fn(n, vec![Variance::Covector; 3], "Γ_{ij,k}", |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        (-gc(i, j, k) - gc(j, i, k) + gc(k, i, j)) / two.clone()
    })?;
    let gamma = TensorDense::from_fn(
        n,
        vec![Variance::Covector, Variance::Covector, Variance::Vector],
        CONNECTION_CONVENTION,
        |ix| {
            let (i, j, l) = (ix[0], ix[1], ix[2]);
            (0..n).fold(T::zero(), |acc, k| acc + ginv[(l, k)].clone() * lowered.get(&[i, j, k]).clone())
        },
    )?;
    Ok(Connection { gamma, kind: ConnectionKind::LeviCivita })
}

/// `∇̃_X Y = ∇_X Y + η(Y) φX - g(φX, Y) ξ`, i.e.
/// `Γ̃^k_ij = Γ^k_ij + η_j φ^k_i - g(φE_i, E_j) ξ^k`.
pub fn quarter_symmetric<T: Scalar>(
    lc: &Connection<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<Connection<T>> {
    let n = p.dim();
    for found in [lc.dim(), s.dim()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    let phi = s.phi();
    let g = p.metric();
    // g(φE_i, E_j)
    let g_phi = |i: usize, j: usize| (0..n).fold(T::zero(), |acc, m| acc + phi[(m, i)].clone() * g[(m, j)].clone());
    let gamma = TensorDense::from_fn(
        n,
        vec![Variance::Covector, Variance::Covector, Variance::Vector],
        CONNECTION_CONVENTION,
        |ix| {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            lc.gamma(i, j, k).clone() + s.eta_at(j).clone() * phi[(k, i)].clone() - g_phi(i, j) * s.xi()[k].clone()
        },
    )?;
    Ok(Connection { gamma, kind: ConnectionKind::QuarterSymmetric })
}

/// `T^k_ij = Γ^k_ij - Γ^k_ji - C^k_ij`
pub fn torsion<T: Scalar>(c: &Connection<T>, p: &FramePresentation<T>) -> Result<TensorDense<T>> {
    check_dim(c, p)?;
    TensorDense::from_fn(
        p.dim(),
        vec![Variance::Covector, Variance::Covector, Variance::Vector],
        TORSION_CONVENTION,
        |ix| {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            c.gamma(i, j, k).clone() - c.gamma(j, i, k).clone() - p.c(i, j, k).clone()
        },
    )
}

/// Torsion the quarter-symmetric connection must have:
/// `T(X,Y) = η(Y)φX - η(X)φY`.
pub fn quarter_symmetric_torsion<T: Scalar>(s: &ParacontactStructure<T>) -> Result<TensorDense<T>> {
    let phi = s.phi();
    TensorDense::from_fn(
        s.dim(),
        vec![Variance::Covector, Variance::Covector, Variance::Vector],
        TORSION_CONVENTION,
        |ix| {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            s.eta_at(j).clone() * phi[(k, i)].clone() - s.eta_at(i).clone() * phi[(k, j)].clone()
        },
    )
}

/// `Γ_{ij,k} + Γ_{ik,j}`, which vanishes iff `∇g = 0` (the metric is
/// constant in the frame).
pub fn metric_defect<T: Scalar>(c: &Connection<T>, p: &FramePresentation<T>) -> Result<TensorDense<T>> {
    check_dim(c, p)?;
    let n = p.dim();
    let g = p.metric();
    let low = |i: usize, j: usize, k: usize| {
        (0..n).fold(T::zero(), |acc, l| acc + c.gamma(i, j, l).clone() * g[(l, k)].clone())
    };
    TensorDense::from_fn(n, vec![Variance::Covector; 3], METRIC_DEFECT_CONVENTION, |ix| {
        low(ix[0], ix[1], ix[2]) + low(ix[0], ix[2], ix[1])
    })
}

/// Torsion-freeness and metric compatibility as exact checks.
pub fn connection_checks<T: Scalar>(c: &Connection<T>, p: &FramePresentation<T>) -> Result<CheckList> {
    let tor = torsion(c, p)?;
    let defect = metric_defect(c, p)?;
    let describe = |t: &TensorDense<T>| {
        t.first_nonzero().map(|ix| {
            let v = t.get(&ix).to_string();
            (ix, format!("residual {v}"))
        })
    };
    Ok([Check::from_search("torsion_free", describe(&tor)), Check::from_search("metric_compatible", describe(&defect))]
        .into_iter()
        .collect())
}

/// Metric compatibility plus the exact quarter-symmetric torsion form, the
/// checks that apply to [`quarter_symmetric`] output.
pub fn quarter_symmetric_checks<T: Scalar>(
    c: &Connection<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<CheckList> {
    let residual = torsion(c, p)?.sub(&quarter_symmetric_torsion(s)?)?;
    let defect = metric_defect(c, p)?;
    let describe = |t: &TensorDense<T>| {
        t.first_nonzero().map(|ix| {
            let v = t.get(&ix).to_string();
            (ix, format!("residual {v}"))
        })
    };
    Ok([
        Check::from_search("quarter_symmetric_torsion", describe(&residual)),
        Check::from_search("metric_compatible", describe(&defect)),
    ]
    .into_iter()
    .collect())
}

fn check_dim<T: Scalar>(c: &Connection<T>, p: &FramePresentation<T>) -> Result<()> {
    if c.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: c.dim() });
    }
    Ok(())
}
