//! Curvature of a constant-coefficient connection and the closed-form
//! identities a para-Sasakian structure predicts for it.
//!
//! Conventions: `R(X,Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_{[X,Y]}`, stored as
//! `[i, j, k, l]` = `E_l` component of `R(E_i,E_j)E_k` (plane slots first,
//! value last). The Ricci tensor is the trace of `X ↦ R(X,Y)Z`, which equals
//! `Σ_i g(R(E_i,Y)Z, E_i)` in an orthonormal frame and needs no metric.

use crate::check::{Check, CheckList};
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::frame::{FramePresentation, ParacontactStructure};
use crate::linalg::FrameVector;
use crate::scalar::Scalar;
use crate::tensor::{Pairing, TensorDense, Variance};

pub const RIEMANN_CONVENTION: &str = "R(E_i,E_j)E_k = R^l_kij E_l : [i,j,k,l]";
pub const LOWERED_CONVENTION: &str = "g(R(E_i,E_j)E_k, E_m) : [i,j,k,m]";
pub const RICCI_CONVENTION: &str = "S(E_j,E_k) : [j,k]";
pub const PROJECTIVE_CONVENTION: &str = "P(E_i,E_j)E_k = P^l_kij E_l : [i,j,k,l]";

pub(crate) fn endomorphism_valued() -> Vec<Variance> {
    vec![Variance::Covector, Variance::Covector, Variance::Covector, Variance::Vector]
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBundle<T> {
    pub riemann: TensorDense<T>,
    pub lowered: TensorDense<T>,
    pub ricci: TensorDense<T>,
    pub scalar: T,
}

impl<T: Scalar> CurvatureBundle<T> {
    pub fn dim(&self) -> usize {
        self.riemann.dim()
    }

    /// `R(E_i, E_j) E_k`
    pub fn r(&self, i: usize, j: usize, k: usize) -> FrameVector<T> {
        component_vector(&self.riemann, i, j, k)
    }

    /// `R(X, Y) Z` for arbitrary frame vectors.
    pub fn apply(&self, x: &FrameVector<T>, y: &FrameVector<T>, z: &FrameVector<T>) -> FrameVector<T> {
        apply_13(&self.riemann, x, y, z)
    }

    pub fn ricci_of(&self, y: &FrameVector<T>, z: &FrameVector<T>) -> T {
        bilinear(&self.ricci, y, z)
    }
}

pub(crate) fn component_vector<T: Scalar>(t: &TensorDense<T>, i: usize, j: usize, k: usize) -> FrameVector<T> {
    FrameVector((0..t.dim()).map(|l| t.get(&[i, j, k, l]).clone()).collect())
}

pub(crate) fn apply_13<T: Scalar>(
    t: &TensorDense<T>,
    x: &FrameVector<T>,
    y: &FrameVector<T>,
    z: &FrameVector<T>,
) -> FrameVector<T> {
    let n = t.dim();
    let mut out = vec![T::zero(); n];
    for i in (0..n).filter(|&i| !x[i].is_zero()) {
        for j in (0..n).filter(|&j| !y[j].is_zero()) {
            for k in (0..n).filter(|&k| !z[k].is_zero()) {
                let w = x[i].clone() * y[j].clone() * z[k].clone();
                for (l, slot) in out.iter_mut().enumerate() {
                    *slot = slot.clone() + w.clone() * t.get(&[i, j, k, l]).clone();
                }
            }
        }
    }
    FrameVector(out)
}

pub(crate) fn bilinear<T: Scalar>(t: &TensorDense<T>, y: &FrameVector<T>, z: &FrameVector<T>) -> T {
    let n = t.dim();
    let mut acc = T::zero();
    for a in 0..n {
        for b in 0..n {
            acc = acc + y[a].clone() * z[b].clone() * t.get(&[a, b]).clone();
        }
    }
    acc
}

/// Riemann, lowered Riemann, Ricci and scalar curvature of `c`.
pub fn curvature<T: Scalar>(c: &Connection<T>, p: &FramePresentation<T>) -> Result<CurvatureBundle<T>> {
    let n = p.dim();
    if c.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
    }
    let riemann = TensorDense::from_fn(n, endomorphism_valued(), RIEMANN_CONVENTION, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        let mut acc = T::zero();
        for m in 0..n {
            acc = acc + c.gamma(j, k, m).clone() * c.gamma(i, m, l).clone()
                - c.gamma(i, k, m).clone() * c.gamma(j, m, l).clone()
                - p.c(i, j, m).clone() * c.gamma(m, k, l).clone();
        }
        acc
    })?;
    bundle_from_riemann(riemann, p)
}

/// Completes a bundle from a given `(1,3)` curvature tensor.
pub fn bundle_from_riemann<T: Scalar>(riemann: TensorDense<T>, p: &FramePresentation<T>) -> Result<CurvatureBundle<T>> {
    let n = p.dim();
    if riemann.dim() != n || riemann.variance() != endomorphism_valued().as_slice() {
        return Err(Error::ShapeMismatch("curvature must be a (1,3) tensor indexed [i,j,k,l]".into()));
    }
    let g = p.metric();
    let lowered = TensorDense::from_fn(n, vec![Variance::Covector; 4], LOWERED_CONVENTION, |ix| {
        (0..n).fold(T::zero(), |acc, l| acc + riemann.get(&[ix[0], ix[1], ix[2], l]).clone() * g[(l, ix[3])].clone())
    })?;
    let ricci = riemann.contract(3, 0, Pairing::Identity)?.with_convention(RICCI_CONVENTION);
    let scalar = ricci.contract(0, 1, Pairing::Metric(p.metric_inverse()?))?.entries()[0].clone();
    Ok(CurvatureBundle { riemann, lowered, ricci, scalar })
}

pub fn ricci_diag<T: Scalar>(bundle: &CurvatureBundle<T>) -> Vec<T> {
    (0..bundle.dim()).map(|i| bundle.ricci.get(&[i, i]).clone()).collect()
}

/// `P(X,Y)Z = R(X,Y)Z - [S(Y,Z)X - S(X,Z)Y] / (n-1)`
pub fn projective<T: Scalar>(bundle: &CurvatureBundle<T>, p: &FramePresentation<T>) -> Result<TensorDense<T>> {
    let n = p.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall { dim: n, min: 2 });
    }
    if bundle.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: bundle.dim() });
    }
    let denom = T::from_int(n as i64 - 1);
    let s = &bundle.ricci;
    TensorDense::from_fn(n, endomorphism_valued(), PROJECTIVE_CONVENTION, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        let mut correction = T::zero();
        if l == i {
            correction = correction + s.get(&[j, k]).clone();
        }
        if l == j {
            correction = correction - s.get(&[i, k]).clone();
        }
        bundle.riemann.get(ix).clone() - correction / denom.clone()
    })
}

/// Residual of an exact tensor identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<T> {
    pub residual: TensorDense<T>,
}

impl<T: Scalar> Residual<T> {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn to_check(&self, name: &str) -> Check {
        Check::from_search(
            name,
            self.residual.first_nonzero().map(|ix| {
                let v = self.residual.get(&ix).to_string();
                (ix, format!("residual {v}"))
            }),
        )
    }
}

fn structure_dims<T: Scalar>(
    lc: &CurvatureBundle<T>,
    qs: &CurvatureBundle<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<usize> {
    let n = p.dim();
    for found in [lc.dim(), qs.dim(), s.dim()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    Ok(n)
}

/// Curvature of the quarter-symmetric connection predicted from the
/// Levi-Civita curvature:
/// `R + 3g(φX,Z)φY - 3g(φY,Z)φX + (η(X)Y - η(Y)X)η(Z) - (g(Y,Z)η(X) - η(Y)g(X,Z))ξ`.
pub fn predicted_quarter_symmetric_curvature<T: Scalar>(
    lc: &CurvatureBundle<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<TensorDense<T>> {
    let n = p.dim();
    let g = p.metric();
    let phi = s.phi();
    let eta = s.eta();
    let xi = s.xi();
    let three = T::from_int(3);
    // g(φE_a, E_b)
    let g_phi = |a: usize, b: usize| (0..n).fold(T::zero(), |acc, m| acc + phi[(m, a)].clone() * g[(m, b)].clone());
    let delta = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    TensorDense::from_fn(n, endomorphism_valued(), RIEMANN_CONVENTION, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        lc.riemann.get(ix).clone() + three.clone() * g_phi(i, k) * phi[(l, j)].clone()
            - three.clone() * g_phi(j, k) * phi[(l, i)].clone()
            + (eta[i].clone() * delta(j, l) - eta[j].clone() * delta(i, l)) * eta[k].clone()
            - (g[(j, k)].clone() * eta[i].clone() - eta[j].clone() * g[(i, k)].clone()) * xi[l].clone()
    })
}

/// Residual of the computed quarter-symmetric curvature against the closed
/// form in [`predicted_quarter_symmetric_curvature`].
pub fn check_curvature_relation<T: Scalar>(
    lc: &CurvatureBundle<T>,
    qs: &CurvatureBundle<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<Residual<T>> {
    structure_dims(lc, qs, s, p)?;
    let predicted = predicted_quarter_symmetric_curvature(lc, s, p)?;
    Ok(Residual { residual: qs.riemann.sub(&predicted)? })
}

/// Ricci tensor of the quarter-symmetric connection predicted from the
/// Levi-Civita one: `S + 2g - (n+1) η⊗η - 3 tr(φ) g(φ·,·)`.
pub fn predicted_quarter_symmetric_ricci<T: Scalar>(
    lc: &CurvatureBundle<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<TensorDense<T>> {
    let n = p.dim();
    let g = p.metric();
    let phi = s.phi();
    let eta = s.eta();
    let tr3 = T::from_int(3) * s.trace_phi();
    let two = T::from_int(2);
    let n_plus_one = T::from_int(n as i64 + 1);
    TensorDense::from_fn(n, vec![Variance::Covector; 2], RICCI_CONVENTION, |ix| {
        let (j, k) = (ix[0], ix[1]);
        let g_phi = (0..n).fold(T::zero(), |acc, m| acc + phi[(m, j)].clone() * g[(m, k)].clone());
        lc.ricci.get(ix).clone() + two.clone() * g[(j, k)].clone()
            - n_plus_one.clone() * eta[j].clone() * eta[k].clone()
            - tr3.clone() * g_phi
    })
}

pub fn check_ricci_relation<T: Scalar>(
    lc: &CurvatureBundle<T>,
    qs: &CurvatureBundle<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<Residual<T>> {
    structure_dims(lc, qs, s, p)?;
    let predicted = predicted_quarter_symmetric_ricci(lc, s, p)?;
    Ok(Residual { residual: qs.ricci.sub(&predicted)? })
}

/// Cyclic sum `R(X,Y)Z + R(Y,Z)X + R(Z,X)Y`.
pub fn bianchi_first<T: Scalar>(bundle: &CurvatureBundle<T>) -> Result<Residual<T>> {
    let r = &bundle.riemann;
    let residual = TensorDense::from_fn(r.dim(), endomorphism_valued(), RIEMANN_CONVENTION, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        r.get(&[i, j, k, l]).clone() + r.get(&[j, k, i, l]).clone() + r.get(&[k, i, j, l]).clone()
    })?;
    Ok(Residual { residual })
}

/// Classical symmetries of a curvature bundle as exact checks.
///
/// `plane_skew` and `first_bianchi` hold for every torsion-free connection;
/// `metric_skew` for every metric connection; `pair_symmetry` and
/// `ricci_symmetric` for Levi-Civita.
pub fn symmetry_checks<T: Scalar>(bundle: &CurvatureBundle<T>) -> Result<CheckList> {
    let n = bundle.dim();
    let r = &bundle.riemann;
    let low = &bundle.lowered;
    let first = |f: &dyn Fn(&[usize]) -> Option<String>, arity: usize| -> Option<(Vec<usize>, String)> {
        let total = n.pow(arity as u32);
        let mut idx = vec![0; arity];
        for offset in 0..total {
            let mut o = offset;
            for s in idx.iter_mut().rev() {
                *s = o % n;
                o /= n;
            }
            if let Some(d) = f(&idx) {
                return Some((idx.clone(), d));
            }
        }
        None
    };
    let diff = |a: T, b: T| if a == b { None } else { Some(format!("{a} != {b}")) };

    let mut out = CheckList::default();
    out.push(Check::from_search(
        "plane_skew",
        first(
            &|ix| diff(r.get(&[ix[0], ix[1], ix[2], ix[3]]).clone(), -r.get(&[ix[1], ix[0], ix[2], ix[3]]).clone()),
            4,
        ),
    ));
    out.push(Check::from_search(
        "metric_skew",
        first(
            &|ix| diff(low.get(&[ix[0], ix[1], ix[2], ix[3]]).clone(), -low.get(&[ix[0], ix[1], ix[3], ix[2]]).clone()),
            4,
        ),
    ));
    out.push(Check::from_search(
        "pair_symmetry",
        first(
            &|ix| diff(low.get(&[ix[0], ix[1], ix[2], ix[3]]).clone(), low.get(&[ix[2], ix[3], ix[0], ix[1]]).clone()),
            4,
        ),
    ));
    out.push(bianchi_first(bundle)?.to_check("first_bianchi"));
    out.push(Check::from_search(
        "ricci_symmetric",
        first(&|ix| diff(bundle.ricci.get(&[ix[0], ix[1]]).clone(), bundle.ricci.get(&[ix[1], ix[0]]).clone()), 2),
    ));
    Ok(out)
}

/// Names of the identities checked by [`identity_suite`], in report order.
pub const IDENTITY_NAMES: [&str; 9] = [
    "phi_derivative",
    "xi_derivative",
    "eta_closed",
    "eta_derivative",
    "eta_of_curvature",
    "curvature_on_xi",
    "curvature_from_xi",
    "ricci_on_xi",
    "ricci_phi_invariance",
];

/// The para-Sasakian structure equations and the curvature identities they
/// imply, each evaluated exactly on frame fields:
///
/// * `phi_derivative`: `(∇_Xφ)Y = -g(X,Y)ξ - η(Y)X + 2η(X)η(Y)ξ`
/// * `xi_derivative`: `∇_Xξ = φX`
/// * `eta_closed`: `dη = 0`, i.e. `η([E_i,E_j]) = 0`
/// * `eta_derivative`: `(∇_Xη)Y = -g(X,Y) + η(X)η(Y)`
/// * `eta_of_curvature`: `η(R(X,Y)Z) = g(X,Z)η(Y) - g(Y,Z)η(X)`
/// * `curvature_on_xi`: `R(X,Y)ξ = η(X)Y - η(Y)X`
/// * `curvature_from_xi`: `R(ξ,X)Y = η(Y)X - g(X,Y)ξ`
/// * `ricci_on_xi`: `S(X,ξ) = -(n-1)η(X)`
/// * `ricci_phi_invariance`: `S(φX,φY) = S(X,Y) + (n-1)η(X)η(Y)`
///
/// `φ` has constant coefficients, so `(∇_Xφ)Y = ∇_X(φY) - φ(∇_X Y)`.
/// Every identity is evaluated even if others fail.
pub fn identity_suite<T: Scalar>(
    lc: &Connection<T>,
    lc_bundle: &CurvatureBundle<T>,
    s: &ParacontactStructure<T>,
    p: &FramePresentation<T>,
) -> Result<CheckList> {
    let n = p.dim();
    for found in [lc.dim(), lc_bundle.dim(), s.dim()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    let e = |i: usize| FrameVector::<T>::basis(n, i);
    let g = |a: &FrameVector<T>, b: &FrameVector<T>| p.g(a, b);
    let eta = |v: &FrameVector<T>| s.eta().dot(v);
    let xi = s.xi();
    let phi = |v: &FrameVector<T>| s.phi_of(v);
    let n_minus_one = T::from_int(n as i64 - 1);
    let vec_mismatch =
        |lhs: FrameVector<T>, rhs: FrameVector<T>| (lhs != rhs).then(|| format!("lhs {lhs} != rhs {rhs}"));
    let scalar_mismatch = |lhs: T, rhs: T| (lhs != rhs).then(|| format!("lhs {lhs} != rhs {rhs}"));

    let search = |arity: usize, f: &dyn Fn(&[usize]) -> Option<String>| -> Option<(Vec<usize>, String)> {
        let mut idx = vec![0; arity];
        for offset in 0..n.pow(arity as u32) {
            let mut o = offset;
            for slot in idx.iter_mut().rev() {
                *slot = o % n;
                o /= n;
            }
            if let Some(d) = f(&idx) {
                return Some((idx.clone(), d));
            }
        }
        None
    };

    let mut out = CheckList::default();

    out.push(Check::from_search(
        "phi_derivative",
        search(2, &|ix| {
            let (x, y) = (e(ix[0]), e(ix[1]));
            let lhs = lc.derivative(&x, &phi(&y)).minus(&phi(&lc.derivative(&x, &y)));
            let rhs = xi
                .scaled(&-g(&x, &y))
                .minus(&x.scaled(&eta(&y)))
                .plus(&xi.scaled(&(T::from_int(2) * eta(&x) * eta(&y))));
            vec_mismatch(lhs, rhs)
        }),
    ));

    out.push(Check::from_search(
        "xi_derivative",
        search(1, &|ix| vec_mismatch(lc.derivative(&e(ix[0]), xi), phi(&e(ix[0])))),
    ));

    out.push(Check::from_search(
        "eta_closed",
        search(2, &|ix| scalar_mismatch(eta(&p.bracket(ix[0], ix[1])), T::zero())),
    ));

    out.push(Check::from_search(
        "eta_derivative",
        search(2, &|ix| {
            let (x, y) = (e(ix[0]), e(ix[1]));
            // η(Y) is constant on frame fields, so (∇_Xη)Y = -η(∇_X Y).
            let lhs = -eta(&lc.derivative(&x, &y));
            let rhs = -g(&x, &y) + eta(&x) * eta(&y);
            scalar_mismatch(lhs, rhs)
        }),
    ));

    out.push(Check::from_search(
        "eta_of_curvature",
        search(3, &|ix| {
            let (x, y, z) = (e(ix[0]), e(ix[1]), e(ix[2]));
            let lhs = eta(&lc_bundle.apply(&x, &y, &z));
            let rhs = g(&x, &z) * eta(&y) - g(&y, &z) * eta(&x);
            scalar_mismatch(lhs, rhs)
        }),
    ));

    out.push(Check::from_search(
        "curvature_on_xi",
        search(2, &|ix| {
            let (x, y) = (e(ix[0]), e(ix[1]));
            let rhs = y.scaled(&eta(&x)).minus(&x.scaled(&eta(&y)));
            vec_mismatch(lc_bundle.apply(&x, &y, xi), rhs)
        }),
    ));

    out.push(Check::from_search(
        "curvature_from_xi",
        search(2, &|ix| {
            let (x, y) = (e(ix[0]), e(ix[1]));
            let rhs = x.scaled(&eta(&y)).minus(&xi.scaled(&g(&x, &y)));
            vec_mismatch(lc_bundle.apply(xi, &x, &y), rhs)
        }),
    ));

    out.push(Check::from_search(
        "ricci_on_xi",
        search(1, &|ix| {
            let x = e(ix[0]);
            scalar_mismatch(lc_bundle.ricci_of(&x, xi), -n_minus_one.clone() * eta(&x))
        }),
    ));

    out.push(Check::from_search(
        "ricci_phi_invariance",
        search(2, &|ix| {
            let (x, y) = (e(ix[0]), e(ix[1]));
            let lhs = lc_bundle.ricci_of(&phi(&x), &phi(&y));
            let rhs = lc_bundle.ricci_of(&x, &y) + n_minus_one.clone() * eta(&x) * eta(&y);
            scalar_mismatch(lhs, rhs)
        }),
    ));

    debug_assert_eq!(out.checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), IDENTITY_NAMES);
    Ok(out)
}
