//! Manifolds presented by a frame with constant structure constants and a
//! constant metric, plus the almost paracontact data `(phi, xi, eta, g)`.

use crate::check::{Check, CheckList};
use crate::error::{Error, Result};
use crate::linalg::{FrameVector, Matrix};
use crate::scalar::Scalar;
use crate::tensor::{TensorDense, Variance};

pub const BRACKET_CONVENTION: &str = "[E_i,E_j] = C^k_ij E_k : [i,j,k]";

#[derive(Debug, Clone, PartialEq)]
pub struct FramePresentation<T> {
    dim: usize,
    structure: TensorDense<T>,
    metric: Matrix<T>,
    metric_inverse: Option<Matrix<T>>,
}

impl<T: Scalar> FramePresentation<T> {
    /// `structure` is indexed `[i, j, k] = C^k_ij`. Only shapes are checked
    /// here; see [`validate_presentation`] for the algebraic invariants.
    pub fn new(structure: TensorDense<T>, metric: Matrix<T>) -> Result<Self> {
        let dim = metric.dim();
        if structure.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: structure.dim() });
        }
        if structure.variance() != [Variance::Covector, Variance::Covector, Variance::Vector] {
            return Err(Error::ShapeMismatch("structure constants must be a (1,2) tensor".into()));
        }
        let structure = structure.with_convention(BRACKET_CONVENTION);
        let metric_inverse = metric.inverse().ok();
        Ok(Self { dim, structure, metric, metric_inverse })
    }

    /// Builds a presentation from `(i, j, k, c)` meaning `[E_i, E_j]` has
    /// `E_k`-coefficient `c` (0-based). The antisymmetric partner is filled in.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, usize, T)], metric: Matrix<T>) -> Result<Self> {
        let mut c: TensorDense<T> = TensorDense::zeros(dim, structure_variance(), BRACKET_CONVENTION)?;
        for (i, j, k, v) in brackets {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch { expected: dim, found: i.max(j).max(k) + 1 });
            }
            let cur = c.get(&[i, j, k]).clone();
            c.set(&[i, j, k], cur + v.clone());
            let cur = c.get(&[j, i, k]).clone();
            c.set(&[j, i, k], cur - v.clone());
        }
        Self::new(c, metric)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> &Matrix<T> {
        &self.metric
    }

    pub fn metric_inverse(&self) -> Result<&Matrix<T>> {
        self.metric_inverse.as_ref().ok_or(Error::SingularMetric)
    }

    pub fn structure(&self) -> &TensorDense<T> {
        &self.structure
    }

    /// `C^k_ij`
    pub fn c(&self, i: usize, j: usize, k: usize) -> &T {
        self.structure.get(&[i, j, k])
    }

    pub fn bracket(&self, i: usize, j: usize) -> FrameVector<T> {
        FrameVector((0..self.dim).map(|k| self.c(i, j, k).clone()).collect())
    }

    pub fn g(&self, a: &FrameVector<T>, b: &FrameVector<T>) -> T {
        a.dot(&self.metric.apply(b))
    }

    /// Lowers a vector to its metric dual covector `G v`.
    pub fn lower(&self, v: &FrameVector<T>) -> FrameVector<T> {
        self.metric.apply(v)
    }
}

pub(crate) fn structure_variance() -> Vec<Variance> {
    vec![Variance::Covector, Variance::Covector, Variance::Vector]
}

/// Checks antisymmetry and the Jacobi identity of the brackets and symmetry
/// and invertibility of the metric. Failures are entries, not errors.
pub fn validate_presentation<T: Scalar>(p: &FramePresentation<T>) -> CheckList {
    let n = p.dim();
    let mut out = CheckList::default();

    let mut antisym = None;
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if *p.c(i, j, k) != -p.c(j, i, k).clone() {
                    antisym = Some((vec![i, j, k], format!("C^k_ij = {}, C^k_ji = {}", p.c(i, j, k), p.c(j, i, k))));
                    break 'outer;
                }
            }
        }
    }
    out.push(Check::from_search("bracket_antisymmetry", antisym));

    let mut jacobi = None;
    'jac: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut sum = T::zero();
                    for m in 0..n {
                        sum = sum
                            + p.c(i, j, m).clone() * p.c(m, k, l).clone()
                            + p.c(j, k, m).clone() * p.c(m, i, l).clone()
                            + p.c(k, i, m).clone() * p.c(m, j, l).clone();
                    }
                    if !sum.is_zero() {
                        jacobi = Some((vec![i, j, k, l], format!("cyclic sum = {sum}")));
                        break 'jac;
                    }
                }
            }
        }
    }
    out.push(Check::from_search("jacobi", jacobi));

    let asym = p
        .metric()
        .first_asymmetry()
        .map(|(r, c)| (vec![r, c], format!("g_rc = {}, g_cr = {}", p.metric()[(r, c)], p.metric()[(c, r)])));
    out.push(Check::from_search("metric_symmetric", asym));

    let det = p.metric().determinant();
    out.push(if det.is_zero() {
        Check { name: "metric_invertible".into(), passed: false, witness: None, detail: Some("det G = 0".into()) }
    } else {
        Check::pass("metric_invertible").with_detail(format!("det G = {det}"))
    });
    out
}

/// The `(phi, xi, eta)` part of an almost paracontact metric structure.
///
/// `phi` follows the column convention: column `i` is `phi E_i`. `eta` is
/// always derived as `G xi`; an externally supplied `eta` is only
/// cross-checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ParacontactStructure<T> {
    phi: Matrix<T>,
    xi: FrameVector<T>,
    eta: FrameVector<T>,
    supplied_eta: Option<FrameVector<T>>,
}

impl<T: Scalar> ParacontactStructure<T> {
    pub fn new(p: &FramePresentation<T>, phi: Matrix<T>, xi: FrameVector<T>) -> Result<Self> {
        let n = p.dim();
        for found in [phi.dim(), xi.dim()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        let eta = p.lower(&xi);
        Ok(Self { phi, xi, eta, supplied_eta: None })
    }

    pub fn with_supplied_eta(mut self, eta: FrameVector<T>) -> Result<Self> {
        if eta.dim() != self.xi.dim() {
            return Err(Error::DimensionMismatch { expected: self.xi.dim(), found: eta.dim() });
        }
        self.supplied_eta = Some(eta);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn phi(&self) -> &Matrix<T> {
        &self.phi
    }

    pub fn xi(&self) -> &FrameVector<T> {
        &self.xi
    }

    pub fn eta(&self) -> &FrameVector<T> {
        &self.eta
    }

    pub fn supplied_eta(&self) -> Option<&FrameVector<T>> {
        self.supplied_eta.as_ref()
    }

    /// `eta(E_i)`
    pub fn eta_at(&self, i: usize) -> &T {
        &self.eta[i]
    }

    pub fn phi_of(&self, v: &FrameVector<T>) -> FrameVector<T> {
        self.phi.apply(v)
    }

    pub fn trace_phi(&self) -> T {
        self.phi.trace()
    }
}

pub fn trace_phi<T: Scalar>(s: &ParacontactStructure<T>) -> T {
    s.trace_phi()
}

fn first_matrix_difference<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Option<(Vec<usize>, String)> {
    let n = a.dim();
    for r in 0..n {
        for c in 0..n {
            if a[(r, c)] != b[(r, c)] {
                return Some((vec![r, c], format!("lhs {} != rhs {}", a[(r, c)], b[(r, c)])));
            }
        }
    }
    None
}

fn first_vector_difference<T: Scalar>(a: &FrameVector<T>, b: &FrameVector<T>) -> Option<(Vec<usize>, String)> {
    (0..a.dim()).find(|&i| a[i] != b[i]).map(|i| (vec![i], format!("lhs {} != rhs {}", a[i], b[i])))
}

/// Checks the almost paracontact axioms as exact matrix identities.
pub fn validate_paracontact<T: Scalar>(p: &FramePresentation<T>, s: &ParacontactStructure<T>) -> Result<CheckList> {
    let n = p.dim();
    if s.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
    }
    let phi = s.phi();
    let xi = s.xi();
    let eta = s.eta();
    let g = p.metric();
    let mut out = CheckList::default();

    let eta_xi = eta.dot(xi);
    out.push(if eta_xi.is_one() {
        Check::pass("eta_xi_unit")
    } else {
        Check { name: "eta_xi_unit".into(), passed: false, witness: None, detail: Some(format!("eta(xi) = {eta_xi}")) }
    });

    let rhs = Matrix::identity(n).minus(&Matrix::outer(xi, eta));
    out.push(Check::from_search("phi_squared", first_matrix_difference(&phi.mul(phi), &rhs)));

    out.push(Check::from_search("phi_xi_zero", first_vector_difference(&phi.apply(xi), &FrameVector::zeros(n))));

    let eta_phi = phi.transpose().apply(eta);
    out.push(Check::from_search("eta_phi_zero", first_vector_difference(&eta_phi, &FrameVector::zeros(n))));

    let lhs = phi.transpose().mul(g).mul(phi);
    let rhs = g.minus(&Matrix::outer(eta, eta));
    out.push(Check::from_search("metric_phi_compatible", first_matrix_difference(&lhs, &rhs)));

    let dual = match s.supplied_eta() {
        Some(supplied) => Check::from_search("eta_metric_dual", first_vector_difference(supplied, eta)),
        None => Check::pass("eta_metric_dual").with_detail("eta derived from G xi"),
    };
    out.push(dual);
    Ok(out)
}
