//! Dense multi-index tensors over the frame.
//!
//! Every tensor carries a slot-convention string describing what each index
//! means (e.g. `"R(E_i,E_j)E_k -> E_l : [i,j,k,l]"`). Binary operations refuse
//! to mix tensors whose conventions differ, since a silently transposed index
//! is the classic way tensor code goes wrong.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Largest dimension accepted for six-slot tensors.
pub const MAX_DIM_ARITY_SIX: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    /// Vector-valued (upper) slot.
    Vector,
    /// Covector (lower) slot, i.e. a vector argument.
    Covector,
}

/// How two slots are paired in a contraction.
#[derive(Debug, Clone, Copy)]
pub enum Pairing<'a, T> {
    /// Natural pairing of a vector slot with a covector slot.
    Identity,
    /// Pair two slots of equal variance through the given matrix
    /// (`G` for two vector slots, `G^{-1}` for two covector slots).
    Metric(&'a Matrix<T>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorDense<T> {
    dim: usize,
    variance: Vec<Variance>,
    convention: String,
    entries: Vec<T>,
}

impl<T: Scalar> TensorDense<T> {
    pub fn zeros(dim: usize, variance: Vec<Variance>, convention: impl Into<String>) -> Result<Self> {
        let len = checked_len(dim, variance.len())?;
        Ok(Self { dim, variance, convention: convention.into(), entries: vec![T::zero(); len] })
    }

    pub fn from_fn(
        dim: usize,
        variance: Vec<Variance>,
        convention: impl Into<String>,
        mut f: impl FnMut(&[usize]) -> T,
    ) -> Result<Self> {
        let len = checked_len(dim, variance.len())?;
        let arity = variance.len();
        let mut idx = vec![0usize; arity];
        let mut entries = Vec::with_capacity(len);
        for offset in 0..len {
            decode(offset, dim, &mut idx);
            entries.push(f(&idx));
        }
        Ok(Self { dim, variance, convention: convention.into(), entries })
    }

    /// Builds a tensor from entries already in lexicographic order.
    pub fn from_entries(
        dim: usize,
        variance: Vec<Variance>,
        convention: impl Into<String>,
        entries: Vec<T>,
    ) -> Result<Self> {
        let len = checked_len(dim, variance.len())?;
        if entries.len() != len {
            return Err(Error::ShapeMismatch(format!("expected {len} entries, got {}", entries.len())));
        }
        Ok(Self { dim, variance, convention: convention.into(), entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn convention(&self) -> &str {
        &self.convention
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn with_convention(mut self, convention: impl Into<String>) -> Self {
        self.convention = convention.into();
        self
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.entries[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: T) {
        let o = self.offset(idx);
        self.entries[o] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(T::is_zero)
    }

    /// Multi-index of the entry stored at `offset`.
    pub fn multi_index(&self, offset: usize) -> Vec<usize> {
        let mut idx = vec![0; self.arity()];
        decode(offset, self.dim, &mut idx);
        idx
    }

    /// Lexicographically first index whose entry is nonzero.
    pub fn first_nonzero(&self) -> Option<Vec<usize>> {
        self.entries.iter().position(|x| !x.is_zero()).map(|o| self.multi_index(o))
    }

    /// `(index, value)` for every nonzero entry, in lexicographic order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Vec<usize>, &T)> + '_ {
        self.entries.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(o, v)| (self.multi_index(o), v))
    }

    pub fn scaled(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Self {
            dim: self.dim,
            variance: self.variance.clone(),
            convention: self.convention.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    /// Exact entrywise equality. Shapes and conventions must agree.
    pub fn exactly_equals(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.entries == other.entries)
    }

    /// Contracts `slot_a` against `slot_b`, removing both.
    pub fn contract(&self, slot_a: usize, slot_b: usize, pairing: Pairing<'_, T>) -> Result<Self> {
        let arity = self.arity();
        for slot in [slot_a, slot_b] {
            if slot >= arity {
                return Err(Error::SlotOutOfRange { slot, arity });
            }
        }
        if slot_a == slot_b {
            return Err(Error::IncompatibleSlots(slot_a, slot_b));
        }
        let (va, vb) = (self.variance[slot_a], self.variance[slot_b]);
        match pairing {
            Pairing::Identity if va == vb => return Err(Error::IncompatibleSlots(slot_a, slot_b)),
            Pairing::Metric(_) if va != vb => return Err(Error::IncompatibleSlots(slot_a, slot_b)),
            Pairing::Metric(m) if m.dim() != self.dim => {
                return Err(Error::DimensionMismatch { expected: self.dim, found: m.dim() })
            }
            _ => {}
        }

        let kept: Vec<usize> = (0..arity).filter(|&s| s != slot_a && s != slot_b).collect();
        let variance = kept.iter().map(|&s| self.variance[s]).collect();
        let convention = format!("tr[{slot_a},{slot_b}]({})", self.convention);
        let n = self.dim;
        let mut full = vec![0usize; arity];
        Self::from_fn(n, variance, convention, |out| {
            for (pos, &s) in kept.iter().enumerate() {
                full[s] = out[pos];
            }
            let mut acc = T::zero();
            for p in 0..n {
                full[slot_a] = p;
                match pairing {
                    Pairing::Identity => {
                        full[slot_b] = p;
                        acc = acc + self.get(&full).clone();
                    }
                    Pairing::Metric(m) => {
                        for q in 0..n {
                            let w = &m[(p, q)];
                            if w.is_zero() {
                                continue;
                            }
                            full[slot_b] = q;
                            acc = acc + w.clone() * self.get(&full).clone();
                        }
                    }
                }
            }
            acc
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            dim: self.dim,
            variance: self.variance.clone(),
            convention: self.convention.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub(crate) fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.variance != other.variance {
            return Err(Error::ShapeMismatch(format!(
                "dim {} {:?} vs dim {} {:?}",
                self.dim, self.variance, other.dim, other.variance
            )));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.check_shape(other)?;
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch { left: self.convention.clone(), right: other.convention.clone() });
        }
        Ok(())
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.arity());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }
}

/// Free-function form of [`TensorDense::exactly_equals`].
pub fn tensor_equal<T: Scalar>(a: &TensorDense<T>, b: &TensorDense<T>) -> Result<bool> {
    a.exactly_equals(b)
}

pub(crate) fn checked_len(dim: usize, arity: usize) -> Result<usize> {
    if arity >= 6 && dim > MAX_DIM_ARITY_SIX {
        return Err(Error::TooLarge { dim, arity, limit: MAX_DIM_ARITY_SIX });
    }
    u32::try_from(arity).ok().and_then(|a| dim.checked_pow(a)).ok_or(Error::TooLarge {
        dim,
        arity,
        limit: MAX_DIM_ARITY_SIX,
    })
}

fn decode(mut offset: usize, dim: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = offset % dim;
        offset /= dim;
    }
}
