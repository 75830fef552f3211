//! Square matrices and frame vectors over an exact field.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coefficients of a vector in the frame `E_1, ..., E_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrameVector<T>(pub Vec<T>);

impl<T: Scalar> FrameVector<T> {
    pub fn zeros(n: usize) -> Self {
        Self(vec![T::zero(); n])
    }

    /// The frame field `E_{index+1}` (0-based index).
    pub fn basis(n: usize, index: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[index] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(T::is_zero)
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0.iter().zip(&other.0).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scaled(&self, c: &T) -> Self {
        Self(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<T> Index<usize> for FrameVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

/// Renders `a_1 E_1 + ... + a_n E_n` the way the frame tables are printed,
/// e.g. `-2E3`, `E1 - 1/2E2`, `0`.
impl<T: Scalar> fmt::Display for FrameVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            let negative = c.is_negative();
            match (wrote, negative) {
                (false, true) => f.write_str("-")?,
                (true, true) => f.write_str(" - ")?,
                (true, false) => f.write_str(" + ")?,
                (false, false) => {}
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            write!(f, "E{}", k + 1)?;
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Dense square matrix, row-major.
///
/// For linear maps on the frame the convention is column `i` = image of
/// `E_i`, so `m[(k, i)]` is the `E_k` component of `A E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, |r, c| if r == c { entries[r].clone() } else { T::zero() })
    }

    /// `a bᵀ`
    pub fn outer(a: &FrameVector<T>, b: &FrameVector<T>) -> Self {
        Self::from_fn(a.dim(), |r, c| a[r].clone() * b[c].clone())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_fn(self.n, |r, c| {
            (0..self.n).fold(T::zero(), |acc, m| acc + self[(r, m)].clone() * rhs[(m, c)].clone())
        })
    }

    pub fn apply(&self, v: &FrameVector<T>) -> FrameVector<T> {
        FrameVector(
            (0..self.n)
                .map(|r| (0..self.n).fold(T::zero(), |acc, c| acc + self[(r, c)].clone() * v[c].clone()))
                .collect(),
        )
    }

    pub fn plus(&self, rhs: &Self) -> Self {
        Self::from_fn(self.n, |r, c| self[(r, c)].clone() + rhs[(r, c)].clone())
    }

    pub fn minus(&self, rhs: &Self) -> Self {
        Self::from_fn(self.n, |r, c| self[(r, c)].clone() - rhs[(r, c)].clone())
    }

    pub fn scaled(&self, s: &T) -> Self {
        Self::from_fn(self.n, |r, c| self[(r, c)].clone() * s.clone())
    }

    pub fn column(&self, c: usize) -> FrameVector<T> {
        FrameVector((0..self.n).map(|r| self[(r, c)].clone()).collect())
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    /// First `(r, c)` with `r < c` and `m[r][c] != m[c][r]`.
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for r in 0..self.n {
            for c in r + 1..self.n {
                if self[(r, c)] != self[(c, r)] {
                    return Some((r, c));
                }
            }
        }
        None
    }

    pub fn determinant(&self) -> T {
        match self.eliminate(false) {
            Some((det, _)) => det,
            None => T::zero(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        self.eliminate(true).map(|(_, inv)| inv).ok_or(Error::SingularMetric)
    }

    // Gauss-Jordan with first-nonzero pivoting; exact arithmetic needs no
    // magnitude-based pivot choice.
    fn eliminate(&self, want_inverse: bool) -> Option<(T, Self)> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                if want_inverse {
                    inv.swap_rows(pivot, col);
                }
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / p.clone();
                if want_inverse {
                    inv[(col, c)] = inv[(col, c)].clone() / p.clone();
                }
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in 0..n {
                    let sub = factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = a[(r, c)].clone() - sub;
                    if want_inverse {
                        let sub = factor.clone() * inv[(col, c)].clone();
                        inv[(r, c)] = inv[(r, c)].clone() - sub;
                    }
                }
            }
        }
        Some((det, inv))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.n {
            self.data.swap(a * self.n + c, b * self.n + c);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.n + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.n + c]
    }
}
