//! Random valid frame presentations.
//!
//! Two templates satisfy Jacobi by construction: almost-abelian algebras
//! `R^{n-1} ⋊ R` and 2-step nilpotent algebras whose brackets land in a
//! central subspace. An optional unit-triangular basis change mixes the
//! frame, and the metric is `Mᵀ D M` with `D` positive diagonal and `M` unit
//! upper-triangular, so it is positive definite.

#![allow(dead_code, clippy::needless_range_loop)]

use num_traits::Zero;
use proptest::prelude::*;
use qsmc::frame::{FramePresentation, ParacontactStructure};
use qsmc::linalg::{FrameVector, Matrix};
use qsmc::Rational;

pub fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

#[derive(Debug, Clone)]
pub struct Recipe {
    pub n: usize,
    pub almost_abelian: bool,
    pub coefficients: Vec<i64>,
    pub center: usize,
    pub basis_change: Option<Vec<i64>>,
    pub diagonal: Vec<i64>,
    pub shear: Option<Vec<i64>>,
}

pub fn recipe() -> impl Strategy<Value = Recipe> {
    (2usize..=5).prop_flat_map(|n| {
        (
            Just(n),
            any::<bool>(),
            prop::collection::vec(-2i64..=2, n * n * n),
            1..n,
            prop::option::of(prop::collection::vec(-1i64..=1, n * n)),
            prop::collection::vec(1i64..=4, n),
            prop::option::of(prop::collection::vec(-1i64..=1, n * n)),
        )
            .prop_map(|(n, almost_abelian, coefficients, center, basis_change, diagonal, shear)| Recipe {
                n,
                almost_abelian,
                coefficients,
                center,
                basis_change,
                diagonal,
                shear,
            })
    })
}

/// Dense `C[i][j][k]` before the basis change.
fn template(rc: &Recipe) -> Vec<Vec<Vec<Rational>>> {
    let n = rc.n;
    let mut c = vec![vec![vec![r(0); n]; n]; n];
    let coeff = |i: usize, j: usize, k: usize| r(rc.coefficients[(i * n + j) * n + k]);
    if rc.almost_abelian {
        let last = n - 1;
        for i in 0..last {
            for k in 0..last {
                c[i][last][k] = coeff(i, last, k);
                c[last][i][k] = -coeff(i, last, k);
            }
        }
    } else {
        let first_central = n - rc.center;
        for i in 0..first_central {
            for j in i + 1..first_central {
                for k in first_central..n {
                    c[i][j][k] = coeff(i, j, k);
                    c[j][i][k] = -coeff(i, j, k);
                }
            }
        }
    }
    c
}

fn unit_triangular(n: usize, vals: &[i64], lower: bool) -> Matrix<Rational> {
    Matrix::from_fn(n, |a, b| match (a == b, (a > b) == lower) {
        (true, _) => r(1),
        (false, true) => r(vals[a * n + b]),
        (false, false) => r(0),
    })
}

pub fn build(rc: &Recipe) -> FramePresentation<Rational> {
    let n = rc.n;
    let mut c = template(rc);
    if let Some(vals) = &rc.basis_change {
        // F_b = Σ_a P[a][b] E_a, so C'^c_ab = Σ P_ia P_jb C^k_ij Q_ck with Q = P⁻¹.
        let p = unit_triangular(n, vals, true);
        let q = p.inverse().expect("unit triangular");
        let mut out = vec![vec![vec![r(0); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    let mut acc = r(0);
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                if !c[i][j][k].is_zero() {
                                    acc +=
                                        p[(i, a)].clone() * p[(j, b)].clone() * c[i][j][k].clone() * q[(cc, k)].clone();
                                }
                            }
                        }
                    }
                    out[a][b][cc] = acc;
                }
            }
        }
        c = out;
    }
    let d = Matrix::diagonal(&rc.diagonal.iter().map(|&v| r(v)).collect::<Vec<_>>());
    let metric = match &rc.shear {
        Some(vals) => {
            let m = unit_triangular(n, vals, false);
            m.transpose().mul(&d).mul(&m)
        }
        None => d,
    };
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if c[i][j][k] != r(0) {
                    brackets.push((i, j, k, c[i][j][k].clone()));
                }
            }
        }
    }
    FramePresentation::from_brackets(n, &brackets, metric).expect("consistent dimensions")
}

pub fn presentation() -> impl Strategy<Value = FramePresentation<Rational>> {
    recipe().prop_map(|rc| build(&rc))
}

/// A presentation with a nonzero `ξ` and a `φ` for which `g(φ·,·)` is
/// symmetric, as compatibility forces; the remaining paracontact axioms need
/// not hold.
pub fn presentation_with_structure(
) -> impl Strategy<Value = (FramePresentation<Rational>, ParacontactStructure<Rational>)> {
    presentation().prop_flat_map(|p| {
        let n = p.dim();
        (
            Just(p),
            prop::collection::vec(-2i64..=2, n * n),
            prop::collection::vec(-2i64..=2, n).prop_filter("nonzero xi", |v| v.iter().any(|&x| x != 0)),
        )
            .prop_map(|(p, phi, xi)| {
                let n = p.dim();
                let sym = Matrix::from_fn(n, |a, b| r(phi[a.min(b) * n + a.max(b)]));
                let phi = p.metric_inverse().expect("positive definite").mul(&sym);
                let xi = FrameVector(xi.into_iter().map(r).collect());
                let s = ParacontactStructure::new(&p, phi, xi).expect("dimensions agree");
                (p, s)
            })
    })
}
