//! The N-th diagonal algebra: N-tuples of exact rationals under
//! componentwise addition and multiplication.
//!
//! The dimension N is a runtime value carried on every scalar. Binary
//! operations never broadcast; a dimension mismatch is an error. The
//! invertible subset consists of the tuples with every component nonzero,
//! and inversion reports the first offending component (1-based) otherwise.

use std::fmt;

use thiserror::Error;

use crate::rational::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DalgError {
    #[error("dimension mismatch: {left} vs {right} components")]
    DimensionMismatch { left: usize, right: usize },
    #[error("not invertible: component {component} is zero")]
    NotInvertible { component: usize },
    #[error("a diagonal scalar needs at least one component")]
    Empty,
}

/// An element of the N-th diagonal algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagonalScalar {
    entries: Vec<Rat>,
}

impl DiagonalScalar {
    pub fn new(entries: Vec<Rat>) -> Result<Self, DalgError> {
        if entries.is_empty() {
            return Err(DalgError::Empty);
        }
        Ok(DiagonalScalar { entries })
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(n, Rat::zero())
    }

    /// The unit `(1, ..., 1)`.
    pub fn one(n: usize) -> Self {
        Self::constant(n, Rat::one())
    }

    pub fn constant(n: usize, value: Rat) -> Self {
        assert!(n > 0, "a diagonal scalar needs at least one component");
        DiagonalScalar {
            entries: vec![value; n],
        }
    }

    /// Test/fixture convenience.
    pub fn from_ints(values: &[i64]) -> Self {
        DiagonalScalar {
            entries: values.iter().map(|&v| Rat::from_int(v)).collect(),
        }
    }

    pub fn n_components(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn entry(&self, index: usize) -> &Rat {
        &self.entries[index]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    /// True when every component is nonzero, i.e. the scalar is a unit.
    pub fn is_invertible(&self) -> bool {
        self.entries.iter().all(|e| !e.is_zero())
    }

    fn check_dims(&self, other: &Self) -> Result<(), DalgError> {
        if self.n_components() != other.n_components() {
            return Err(DalgError::DimensionMismatch {
                left: self.n_components(),
                right: other.n_components(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, DalgError> {
        self.check_dims(other)?;
        Ok(DiagonalScalar {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DalgError> {
        self.check_dims(other)?;
        Ok(DiagonalScalar {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, DalgError> {
        self.check_dims(other)?;
        Ok(DiagonalScalar {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        DiagonalScalar {
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        DiagonalScalar {
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    /// Componentwise reciprocal. Fails on the first zero component,
    /// reported with its 1-based index.
    pub fn invert(&self) -> Result<Self, DalgError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (i, e) in self.entries.iter().enumerate() {
            match e.invert() {
                Some(inv) => entries.push(inv),
                None => return Err(DalgError::NotInvertible { component: i + 1 }),
            }
        }
        Ok(DiagonalScalar { entries })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.n_components());
        for _ in 0..exp {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    /// Extracts component `index` as a 1-component scalar.
    pub fn component(&self, index: usize) -> Self {
        DiagonalScalar {
            entries: vec![self.entries[index].clone()],
        }
    }

    /// Zips 1-component scalars into an N-component one.
    pub fn zip(parts: &[DiagonalScalar]) -> Result<Self, DalgError> {
        if parts.is_empty() {
            return Err(DalgError::Empty);
        }
        let mut entries = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            if part.n_components() != 1 {
                return Err(DalgError::DimensionMismatch {
                    left: 1,
                    right: parts[i].n_components(),
                });
            }
            entries.push(part.entries[0].clone());
        }
        Ok(DiagonalScalar { entries })
    }
}

impl fmt::Display for DiagonalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DiagonalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
