//! Truncated formal series with diagonal-algebra coefficients.
//!
//! A series tracks coefficients for degrees `0..=order` only; binary
//! operations truncate to the smaller order. On top of the ring operations
//! this module provides composition, compositional inverse by triangular
//! solve, the boxed convolution driven by the noncrossing-partition lattice,
//! and the Zeta/Mob pair that are mutually inverse under that convolution.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::dalg::{DalgError, DiagonalScalar};
use crate::ncpart::{self, NcError, NoncrossingPartition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error(transparent)]
    Scalar(#[from] DalgError),
    #[error(transparent)]
    Lattice(#[from] NcError),
    #[error("series dimension mismatch: {left} vs {right} components")]
    DimensionMismatch { left: usize, right: usize },
    #[error("truncation order must be at least 1")]
    OrderZero,
    #[error("degree {degree} exceeds truncation order {order}")]
    DegreeOutOfRange { degree: usize, order: usize },
    #[error("constant term must be zero")]
    NonzeroConstantTerm,
    #[error("coefficient at degree {degree} is not invertible: component {component} is zero")]
    NotInvertible { degree: usize, component: usize },
    #[error("coefficient at degree {degree} unavailable: series truncated at order {order}")]
    MissingCoefficient { degree: usize, order: usize },
}

/// A formal series truncated at a fixed order. Zero coefficients are not
/// stored, so structural equality is value equality at equal orders.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    n_components: usize,
    order: usize,
    coeffs: BTreeMap<usize, DiagonalScalar>,
}

impl TruncatedSeries {
    pub fn zero(n_components: usize, order: usize) -> Result<Self, SeriesError> {
        if order == 0 {
            return Err(SeriesError::OrderZero);
        }
        if n_components == 0 {
            return Err(SeriesError::Scalar(DalgError::Empty));
        }
        Ok(TruncatedSeries {
            n_components,
            order,
            coeffs: BTreeMap::new(),
        })
    }

    /// The series `1 * z`, the boxed-convolution identity.
    pub fn identity(n_components: usize, order: usize) -> Result<Self, SeriesError> {
        let mut s = Self::zero(n_components, order)?;
        s.set_coeff(1, DiagonalScalar::one(n_components))?;
        Ok(s)
    }

    /// A constant series `d + 0z + ...`.
    pub fn constant(
        value: &DiagonalScalar,
        order: usize,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(value.n_components(), order)?;
        s.set_coeff(0, value.clone())?;
        Ok(s)
    }

    pub fn from_coeffs(
        n_components: usize,
        order: usize,
        coeffs: Vec<(usize, DiagonalScalar)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(n_components, order)?;
        for (degree, value) in coeffs {
            s.set_coeff(degree, value)?;
        }
        Ok(s)
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient at `degree`; zero when not stored. Degrees past the
    /// truncation order are unknown rather than zero, so asking for one is a
    /// caller bug.
    pub fn coeff(&self, degree: usize) -> DiagonalScalar {
        assert!(
            degree <= self.order,
            "degree {} beyond truncation order {}",
            degree,
            self.order
        );
        self.coeffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| DiagonalScalar::zero(self.n_components))
    }

    /// Stored nonzero coefficients, ascending by degree.
    pub fn nonzero_coeffs(&self) -> impl Iterator<Item = (usize, &DiagonalScalar)> {
        self.coeffs.iter().map(|(&d, v)| (d, v))
    }

    pub fn set_coeff(&mut self, degree: usize, value: DiagonalScalar) -> Result<(), SeriesError> {
        if degree > self.order {
            return Err(SeriesError::DegreeOutOfRange {
                degree,
                order: self.order,
            });
        }
        if value.n_components() != self.n_components {
            return Err(SeriesError::DimensionMismatch {
                left: self.n_components,
                right: value.n_components(),
            });
        }
        if value.is_zero() {
            self.coeffs.remove(&degree);
        } else {
            self.coeffs.insert(degree, value);
        }
        Ok(())
    }

    /// True when the constant term vanishes, i.e. the series lies in Theta.
    pub fn has_zero_constant_term(&self) -> bool {
        !self.coeffs.contains_key(&0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: usize) -> Result<Self, SeriesError> {
        if order == 0 {
            return Err(SeriesError::OrderZero);
        }
        if order > self.order {
            return Err(SeriesError::DegreeOutOfRange {
                degree: order,
                order: self.order,
            });
        }
        Ok(TruncatedSeries {
            n_components: self.n_components,
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&d, _)| d <= order)
                .map(|(&d, v)| (d, v.clone()))
                .collect(),
        })
    }

    fn check_dims(&self, other: &Self) -> Result<(), SeriesError> {
        if self.n_components != other.n_components {
            return Err(SeriesError::DimensionMismatch {
                left: self.n_components,
                right: other.n_components,
            });
        }
        Ok(())
    }

    /// Degreewise sum, truncated to the smaller order.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_dims(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.n_components, order)?;
        for degree in 0..=order {
            out.set_coeff(degree, self.coeff(degree).add(&other.coeff(degree))?)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            n_components: self.n_components,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&d, v)| (d, v.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_dims(other)?;
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<usize, DiagonalScalar> = BTreeMap::new();
        for (da, a) in &self.coeffs {
            if *da > order {
                continue;
            }
            for (db, b) in &other.coeffs {
                let degree = da + db;
                if degree > order {
                    break;
                }
                let term = a.mul(b)?;
                match acc.get_mut(&degree) {
                    Some(existing) => *existing = existing.add(&term)?,
                    None => {
                        acc.insert(degree, term);
                    }
                }
            }
        }
        let mut out = Self::zero(self.n_components, order)?;
        for (degree, value) in acc {
            out.set_coeff(degree, value)?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &DiagonalScalar) -> Result<Self, SeriesError> {
        if factor.n_components() != self.n_components {
            return Err(SeriesError::DimensionMismatch {
                left: self.n_components,
                right: factor.n_components(),
            });
        }
        let mut out = Self::zero(self.n_components, self.order)?;
        for (&degree, value) in &self.coeffs {
            out.set_coeff(degree, value.mul(factor)?)?;
        }
        Ok(out)
    }

    /// Composition `self(inner)`; `inner` must have no constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        self.check_dims(inner)?;
        if !inner.has_zero_constant_term() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order.min(inner.order);
        let mut acc = Self::zero(self.n_components, order)?;
        for degree in (0..=order).rev() {
            acc = acc.mul(inner)?;
            let constant = acc.coeff(0).add(&self.coeff(degree))?;
            acc.set_coeff(0, constant)?;
        }
        Ok(acc)
    }

    /// Compositional inverse: the unique `h` with `self(h(z)) = z` up to the
    /// truncation order. Requires a vanishing constant term and an
    /// invertible degree-1 coefficient; each new coefficient then appears
    /// linearly with an invertible factor, so the solve is triangular.
    pub fn comp_inverse(&self) -> Result<Self, SeriesError> {
        if !self.has_zero_constant_term() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let linear_inv = self.coeff(1).invert().map_err(|err| match err {
            DalgError::NotInvertible { component } => SeriesError::NotInvertible {
                degree: 1,
                component,
            },
            other => SeriesError::Scalar(other),
        })?;
        let one = DiagonalScalar::one(self.n_components);
        let mut inverse = Self::zero(self.n_components, self.order)?;
        for degree in 1..=self.order {
            // `inverse` holds the solved coefficients below `degree`; the
            // degree-`degree` coefficient of the composition picks up the
            // unknown only through the linear term of `self`.
            let composed = self.compose(&inverse)?;
            let target = if degree == 1 {
                one.clone()
            } else {
                DiagonalScalar::zero(self.n_components)
            };
            let residual = target.sub(&composed.coeff(degree))?;
            inverse.set_coeff(degree, linear_inv.mul(&residual)?)?;
        }
        Ok(inverse)
    }

    /// Multiplication by `z`: degrees shift up, the order grows by one.
    pub fn shift_up(&self) -> Self {
        TruncatedSeries {
            n_components: self.n_components,
            order: self.order + 1,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&d, v)| (d + 1, v.clone()))
                .collect(),
        }
    }

    /// Division by `z`: requires a vanishing constant term; the order drops
    /// by one and must stay positive.
    pub fn shift_down(&self) -> Result<Self, SeriesError> {
        if !self.has_zero_constant_term() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        if self.order <= 1 {
            return Err(SeriesError::OrderZero);
        }
        Ok(TruncatedSeries {
            n_components: self.n_components,
            order: self.order - 1,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&d, v)| (d - 1, v.clone()))
                .collect(),
        })
    }

    /// Boxed convolution: the degree-n coefficient sums, over the
    /// noncrossing partitions of n points, the multiplicative extension of
    /// `self` at the partition times that of `other` at its Kreweras
    /// complement. Both operands must lie in Theta.
    pub fn boxed_convolve(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_dims(other)?;
        if !self.has_zero_constant_term() || !other.has_zero_constant_term() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.n_components, order)?;
        for degree in 1..=order {
            let partitions = ncpart::noncrossing_partitions(degree)?;
            let mut sum = DiagonalScalar::zero(self.n_components);
            for pi in partitions.iter() {
                let left = multiplicative_extension(self, pi)?;
                let right = multiplicative_extension(other, &pi.kreweras())?;
                sum = sum.add(&left.mul(&right)?)?;
            }
            out.set_coeff(degree, sum)?;
        }
        Ok(out)
    }

    /// Splits into N one-component series.
    pub fn split(&self) -> Vec<TruncatedSeries> {
        (0..self.n_components)
            .map(|i| TruncatedSeries {
                n_components: 1,
                order: self.order,
                coeffs: self
                    .coeffs
                    .iter()
                    .filter(|(_, v)| !v.entry(i).is_zero())
                    .map(|(&d, v)| (d, v.component(i)))
                    .collect(),
            })
            .collect()
    }

    /// Zips one-component series of equal order back together.
    pub fn zip(parts: &[TruncatedSeries]) -> Result<TruncatedSeries, SeriesError> {
        if parts.is_empty() {
            return Err(SeriesError::Scalar(DalgError::Empty));
        }
        let order = parts[0].order;
        for part in parts {
            if part.n_components != 1 {
                return Err(SeriesError::DimensionMismatch {
                    left: 1,
                    right: part.n_components,
                });
            }
            if part.order != order {
                return Err(SeriesError::DegreeOutOfRange {
                    degree: part.order,
                    order,
                });
            }
        }
        let mut out = Self::zero(parts.len(), order)?;
        for degree in 0..=order {
            let slices: Vec<DiagonalScalar> = parts.iter().map(|p| p.coeff(degree)).collect();
            out.set_coeff(degree, DiagonalScalar::zip(&slices)?)?;
        }
        Ok(out)
    }

    /// Inverse under boxed convolution, solved degree by degree. The
    /// degree-n unknown enters only through the all-singletons partition,
    /// whose factor is the n-th power of the (invertible) linear coefficient.
    pub fn boxed_inverse(&self) -> Result<Self, SeriesError> {
        if !self.has_zero_constant_term() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let linear_inv = self.coeff(1).invert().map_err(|err| match err {
            DalgError::NotInvertible { component } => SeriesError::NotInvertible {
                degree: 1,
                component,
            },
            other => SeriesError::Scalar(other),
        })?;
        let mut inverse = Self::zero(self.n_components, self.order)?;
        inverse.set_coeff(1, linear_inv.clone())?;
        for degree in 2..=self.order {
            let partitions = ncpart::noncrossing_partitions(degree)?;
            let mut sum = DiagonalScalar::zero(self.n_components);
            for pi in partitions.iter() {
                if pi.is_singletons() {
                    continue;
                }
                // For any other partition the complement has only blocks of
                // size < degree, all already solved.
                let left = multiplicative_extension(self, pi)?;
                let right = multiplicative_extension(&inverse, &pi.kreweras())?;
                sum = sum.add(&left.mul(&right)?)?;
            }
            inverse.set_coeff(degree, linear_inv.pow(degree as u32).mul(&sum)?.neg())?;
        }
        Ok(inverse)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (degree, value)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:?}", value)?;
            match degree {
                0 => {}
                1 => write!(f, " z")?,
                d => write!(f, " z^{}", d)?,
            }
        }
        write!(f, " (order {})", self.order)
    }
}

/// Product over the blocks of `partition` of the coefficient of `series` at
/// the block size.
pub fn multiplicative_extension(
    series: &TruncatedSeries,
    partition: &NoncrossingPartition,
) -> Result<DiagonalScalar, SeriesError> {
    let mut acc = DiagonalScalar::one(series.n_components());
    for block in partition.blocks() {
        let size = block.len();
        if size > series.order() {
            return Err(SeriesError::MissingCoefficient {
                degree: size,
                order: series.order(),
            });
        }
        acc = acc.mul(&series.coeff(size))?;
    }
    Ok(acc)
}

/// `Zeta(z)`: every coefficient from degree 1 on is the unit.
pub fn zeta_series(n_components: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::zero(n_components, order)?;
    for degree in 1..=order {
        s.set_coeff(degree, DiagonalScalar::one(n_components))?;
    }
    Ok(s)
}

/// `Mob(z)`: the degree-n coefficient is `mu(0_n, 1_n)` times the unit.
pub fn mob_series(n_components: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::zero(n_components, order)?;
    for degree in 1..=order {
        let bottom = NoncrossingPartition::singletons(degree)?;
        let mu = ncpart::mobius_full(&bottom).into_rat();
        s.set_coeff(degree, DiagonalScalar::constant(n_components, mu))?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpart::{catalan, mobius_brute, NoncrossingPartition};
    use crate::rational::Rat;

    fn d(values: &[i64]) -> DiagonalScalar {
        DiagonalScalar::from_ints(values)
    }

    fn scalar_series(order: usize, coeffs: &[(usize, i64)]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(
            1,
            order,
            coeffs
                .iter()
                .map(|&(deg, v)| (deg, DiagonalScalar::from_ints(&[v])))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn add_examples() {
        let f = TruncatedSeries::from_coeffs(2, 3, vec![(1, d(&[1, 2])), (2, d(&[0, 1]))]).unwrap();
        let zero = TruncatedSeries::zero(2, 3).unwrap();
        assert_eq!(f.add(&zero).unwrap(), f);
        let z = TruncatedSeries::identity(1, 4).unwrap();
        assert_eq!(z.add(&z).unwrap(), scalar_series(4, &[(1, 2)]));
        let g = TruncatedSeries::from_coeffs(2, 3, vec![(1, d(&[1, 0]))]).unwrap();
        let expected =
            TruncatedSeries::from_coeffs(2, 3, vec![(1, d(&[2, 2])), (2, d(&[0, 1]))]).unwrap();
        assert_eq!(f.add(&g).unwrap(), expected);
    }

    #[test]
    fn add_truncates_to_smaller_order() {
        let f = scalar_series(5, &[(1, 1), (5, 7)]);
        let g = scalar_series(3, &[(1, 1)]);
        let sum = f.add(&g).unwrap();
        assert_eq!(sum.order(), 3);
        assert_eq!(sum.coeff(1), d(&[2]));
    }

    #[test]
    fn mul_examples() {
        let f = TruncatedSeries::from_coeffs(2, 4, vec![(1, d(&[1, 2])), (3, d(&[5, 0]))]).unwrap();
        let unit = TruncatedSeries::constant(&DiagonalScalar::one(2), 4).unwrap();
        assert_eq!(f.mul(&unit).unwrap(), f);
        let z = TruncatedSeries::identity(1, 4).unwrap();
        assert_eq!(z.mul(&z).unwrap(), scalar_series(4, &[(2, 1)]));
        // (1 + z)(1 - z) = 1 - z^2, expanded by hand
        let a = scalar_series(4, &[(0, 1), (1, 1)]);
        let b = scalar_series(4, &[(0, 1), (1, -1)]);
        assert_eq!(a.mul(&b).unwrap(), scalar_series(4, &[(0, 1), (2, -1)]));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f = TruncatedSeries::identity(1, 3).unwrap();
        let g = TruncatedSeries::identity(2, 3).unwrap();
        assert!(matches!(
            f.add(&g),
            Err(SeriesError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            f.mul(&g),
            Err(SeriesError::DimensionMismatch { .. })
        ));
    }

    /// Dense polynomial product over the rationals, used as the independent
    /// expansion oracle for composition.
    fn poly_mul(a: &[Rat], b: &[Rat], order: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); order + 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if i + j <= order {
                    out[i + j] = &out[i + j] + &(ai * bj);
                }
            }
        }
        out
    }

    #[test]
    fn compose_examples() {
        let f = scalar_series(5, &[(1, 3), (2, -1), (4, 2)]);
        let identity = TruncatedSeries::identity(1, 5).unwrap();
        assert_eq!(f.compose(&identity).unwrap(), f);

        let sq = scalar_series(4, &[(2, 1)]);
        let double = scalar_series(4, &[(1, 2)]);
        assert_eq!(sq.compose(&double).unwrap(), scalar_series(4, &[(2, 4)]));

        // (z + z^2) o (z - z^2), against a dense polynomial expansion
        let outer = scalar_series(4, &[(1, 1), (2, 1)]);
        let inner = scalar_series(4, &[(1, 1), (2, -1)]);
        let composed = outer.compose(&inner).unwrap();
        let g = vec![
            Rat::zero(),
            Rat::from_int(1),
            Rat::from_int(-1),
            Rat::zero(),
            Rat::zero(),
        ];
        let g2 = poly_mul(&g, &g, 4);
        for degree in 0..=4 {
            let expected = &g[degree] + &g2[degree];
            assert_eq!(
                composed.coeff(degree),
                DiagonalScalar::new(vec![expected]).unwrap(),
                "degree {}",
                degree
            );
        }
        assert_eq!(composed.coeff(2), d(&[0]));
        assert_eq!(composed.coeff(3), d(&[-2]));
    }

    #[test]
    fn compose_rejects_nonzero_constant_inner() {
        let f = scalar_series(3, &[(1, 1)]);
        let g = scalar_series(3, &[(0, 1), (1, 1)]);
        assert_eq!(
            f.compose(&g).unwrap_err(),
            SeriesError::NonzeroConstantTerm
        );
    }

    #[test]
    fn comp_inverse_linear_case() {
        let c = DiagonalScalar::new(vec![Rat::from_int(2), Rat::ratio(-1, 3)]).unwrap();
        let g = TruncatedSeries::from_coeffs(2, 4, vec![(1, c.clone())]).unwrap();
        let inv = g.comp_inverse().unwrap();
        let expected =
            TruncatedSeries::from_coeffs(2, 4, vec![(1, c.invert().unwrap())]).unwrap();
        assert_eq!(inv, expected);
    }

    #[test]
    fn comp_inverse_of_z_plus_z_squared_is_signed_catalan() {
        let order = 7;
        let g = scalar_series(order, &[(1, 1), (2, 1)]);
        let h = g.comp_inverse().unwrap();
        // substitution both ways
        let identity = TruncatedSeries::identity(1, order).unwrap();
        assert_eq!(g.compose(&h).unwrap(), identity);
        assert_eq!(h.compose(&g).unwrap(), identity);
        // coefficients follow the signed Catalan pattern
        for degree in 1..=order {
            let mut expected = Rat::from_bigint(catalan(degree - 1));
            if degree % 2 == 0 {
                expected = -expected;
            }
            assert_eq!(
                h.coeff(degree),
                DiagonalScalar::new(vec![expected]).unwrap(),
                "degree {}",
                degree
            );
        }
    }

    #[test]
    fn comp_inverse_of_geometric_series_times_lambda() {
        // g = lambda z / (1 - z) truncated: all coefficients lambda;
        // the inverse is the expansion of z / (lambda + z).
        let order = 6;
        for lambda in [Rat::from_int(3), Rat::ratio(1, 2)] {
            let coeffs: Vec<(usize, DiagonalScalar)> = (1..=order)
                .map(|deg| (deg, DiagonalScalar::new(vec![lambda.clone()]).unwrap()))
                .collect();
            let g = TruncatedSeries::from_coeffs(1, order, coeffs).unwrap();
            let h = g.comp_inverse().unwrap();
            let lambda_inv = lambda.invert().unwrap();
            for degree in 1..=order {
                let mut expected = lambda_inv.pow(degree as u32);
                if degree % 2 == 0 {
                    expected = -expected;
                }
                assert_eq!(
                    h.coeff(degree),
                    DiagonalScalar::new(vec![expected]).unwrap(),
                    "lambda={} degree={}",
                    lambda,
                    degree
                );
            }
        }
    }

    #[test]
    fn comp_inverse_requires_invertible_linear_coefficient() {
        let g = TruncatedSeries::from_coeffs(2, 3, vec![(1, d(&[1, 0]))]).unwrap();
        assert_eq!(
            g.comp_inverse().unwrap_err(),
            SeriesError::NotInvertible {
                degree: 1,
                component: 2
            }
        );
    }

    #[test]
    fn multiplicative_extension_examples() {
        let g =
            TruncatedSeries::from_coeffs(2, 4, vec![(1, d(&[1, 2])), (2, d(&[3, 4])), (3, d(&[5, 6])), (4, d(&[7, 8]))])
                .unwrap();
        let full = NoncrossingPartition::full(4).unwrap();
        assert_eq!(multiplicative_extension(&g, &full).unwrap(), d(&[7, 8]));
        let bottom = NoncrossingPartition::singletons(3).unwrap();
        assert_eq!(
            multiplicative_extension(&g, &bottom).unwrap(),
            d(&[1, 8]) // (1,2)^3 componentwise
        );
        let mixed: NoncrossingPartition = "{{1,2},{3}}".parse().unwrap();
        assert_eq!(multiplicative_extension(&g, &mixed).unwrap(), d(&[3, 8]));
    }

    #[test]
    fn multiplicative_extension_truncation_error() {
        let g = TruncatedSeries::identity(1, 2).unwrap();
        let full = NoncrossingPartition::full(3).unwrap();
        assert_eq!(
            multiplicative_extension(&g, &full).unwrap_err(),
            SeriesError::MissingCoefficient {
                degree: 3,
                order: 2
            }
        );
    }

    #[test]
    fn boxed_identity_series() {
        let g =
            TruncatedSeries::from_coeffs(2, 5, vec![(1, d(&[1, -2])), (2, d(&[3, 1])), (4, d(&[0, 7]))])
                .unwrap();
        let e = TruncatedSeries::identity(2, 5).unwrap();
        assert_eq!(g.boxed_convolve(&e).unwrap(), g);
        assert_eq!(e.boxed_convolve(&g).unwrap(), g);
    }

    #[test]
    fn boxed_degree_two_coefficient() {
        // NC(2) = {0_2, 1_2} and Kreweras swaps them:
        // degree-2 coefficient is a_2 b_1^2 + a_1^2 b_2.
        let a1 = d(&[1, 2]);
        let a2 = d(&[3, -1]);
        let b1 = d(&[2, 5]);
        let b2 = d(&[-4, 1]);
        let g1 =
            TruncatedSeries::from_coeffs(2, 2, vec![(1, a1.clone()), (2, a2.clone())]).unwrap();
        let g2 =
            TruncatedSeries::from_coeffs(2, 2, vec![(1, b1.clone()), (2, b2.clone())]).unwrap();
        let conv = g1.boxed_convolve(&g2).unwrap();
        assert_eq!(conv.coeff(1), a1.mul(&b1).unwrap());
        let expected = a2
            .mul(&b1.pow(2))
            .unwrap()
            .add(&a1.pow(2).mul(&b2).unwrap())
            .unwrap();
        assert_eq!(conv.coeff(2), expected);
    }

    #[test]
    fn boxed_rejects_nonzero_constant() {
        let g = scalar_series(3, &[(0, 1), (1, 1)]);
        let e = TruncatedSeries::identity(1, 3).unwrap();
        assert_eq!(
            g.boxed_convolve(&e).unwrap_err(),
            SeriesError::NonzeroConstantTerm
        );
    }

    #[test]
    fn zeta_and_mob_coefficients() {
        let zeta = zeta_series(3, 4).unwrap();
        assert!(zeta.has_zero_constant_term());
        for degree in 1..=4 {
            assert_eq!(zeta.coeff(degree), DiagonalScalar::one(3));
        }
        let mob = mob_series(2, 6).unwrap();
        assert_eq!(mob.coeff(1), d(&[1, 1]));
        assert_eq!(mob.coeff(2), d(&[-1, -1]));
        assert_eq!(mob.coeff(4), d(&[-5, -5]));
        // cross-check every degree against the brute-force recursion
        for degree in 1..=6 {
            let bottom = NoncrossingPartition::singletons(degree).unwrap();
            let top = NoncrossingPartition::full(degree).unwrap();
            let mu = mobius_brute(&bottom, &top).unwrap().into_rat();
            assert_eq!(mob.coeff(degree), DiagonalScalar::constant(2, mu));
        }
    }

    #[test]
    fn zeta_mob_are_mutually_inverse_under_boxed_convolution() {
        let order = 6;
        let zeta = zeta_series(2, order).unwrap();
        let mob = mob_series(2, order).unwrap();
        let identity = TruncatedSeries::identity(2, order).unwrap();
        assert_eq!(zeta.boxed_convolve(&mob).unwrap(), identity);
        assert_eq!(mob.boxed_convolve(&zeta).unwrap(), identity);
    }

    #[test]
    fn boxed_inverse_roundtrip() {
        let g = TruncatedSeries::from_coeffs(
            2,
            5,
            vec![(1, d(&[2, -1])), (2, d(&[1, 3])), (3, d(&[0, 2])), (5, d(&[1, 1]))],
        )
        .unwrap();
        let inv = g.boxed_inverse().unwrap();
        let identity = TruncatedSeries::identity(2, 5).unwrap();
        assert_eq!(g.boxed_convolve(&inv).unwrap(), identity);
        assert_eq!(inv.boxed_convolve(&g).unwrap(), identity);
    }

    #[test]
    fn boxed_inverse_requires_invertible_linear_coefficient() {
        let g = TruncatedSeries::from_coeffs(2, 3, vec![(1, d(&[0, 1]))]).unwrap();
        assert_eq!(
            g.boxed_inverse().unwrap_err(),
            SeriesError::NotInvertible {
                degree: 1,
                component: 1
            }
        );
    }

    #[test]
    fn shift_up_and_down() {
        let f = scalar_series(3, &[(0, 4), (2, 1)]);
        let up = f.shift_up();
        assert_eq!(up.order(), 4);
        assert_eq!(up.coeff(1), d(&[4]));
        assert_eq!(up.coeff(3), d(&[1]));
        let down = up.shift_down().unwrap();
        assert_eq!(down, f);
        assert_eq!(
            f.shift_down().unwrap_err(),
            SeriesError::NonzeroConstantTerm
        );
    }

    #[test]
    fn order_zero_is_rejected() {
        assert_eq!(
            TruncatedSeries::zero(1, 0).unwrap_err(),
            SeriesError::OrderZero
        );
    }
}
