//! Moment/cumulant calculus: moment series, R-transform, S-transform, and
//! free additive/multiplicative convolution, componentwise over the
//! diagonal algebra.
//!
//! Freeness of the operands is a hypothesis of the convolution operations,
//! not something they verify; the verification machinery lives in
//! [`crate::stardist`]. Multiplicative convolution deliberately ships three
//! routes that must agree coefficient for coefficient: the direct
//! product-cumulant sum, the boxed convolution of R-transforms, and the
//! S-transform product.

use thiserror::Error;

use crate::dalg::{DalgError, DiagonalScalar};
use crate::ncpart::{self, NcError};
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Scalar(#[from] DalgError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Lattice(#[from] NcError),
    #[error("dimension mismatch: {left} vs {right} components")]
    DimensionMismatch { left: usize, right: usize },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("order must be at least 1")]
    OrderZero,
    #[error("moment list holds {got} entries but the order is {order}")]
    WrongMomentCount { order: usize, got: usize },
    #[error("mean is not invertible: component {component} is zero")]
    MeanNotInvertible { component: usize },
    #[error("order {order} too small: at least {needed} required")]
    OrderTooSmall { order: usize, needed: usize },
    #[error("cannot divide a distribution by zero parts")]
    ZeroParts,
}

/// The per-degree moments `E(x^k)`, `k = 1..=order`, of a diagonal-valued
/// random variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Distribution {
    n_components: usize,
    order: usize,
    moments: Vec<DiagonalScalar>,
}

/// The per-degree free cumulants `k_k(x, ..., x)`, `k = 1..=order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CumulantSequence {
    n_components: usize,
    order: usize,
    cumulants: Vec<DiagonalScalar>,
}

fn validate_degree_table(
    n_components: usize,
    order: usize,
    values: &[DiagonalScalar],
) -> Result<(), TransformError> {
    if order == 0 {
        return Err(TransformError::OrderZero);
    }
    if n_components == 0 {
        return Err(TransformError::Scalar(DalgError::Empty));
    }
    if values.len() != order {
        return Err(TransformError::WrongMomentCount {
            order,
            got: values.len(),
        });
    }
    for value in values {
        if value.n_components() != n_components {
            return Err(TransformError::DimensionMismatch {
                left: n_components,
                right: value.n_components(),
            });
        }
    }
    Ok(())
}

impl Distribution {
    pub fn new(
        n_components: usize,
        order: usize,
        moments: Vec<DiagonalScalar>,
    ) -> Result<Self, TransformError> {
        validate_degree_table(n_components, order, &moments)?;
        Ok(Distribution {
            n_components,
            order,
            moments,
        })
    }

    pub fn zero(n_components: usize, order: usize) -> Result<Self, TransformError> {
        Self::new(
            n_components,
            order,
            vec![DiagonalScalar::zero(n_components); order],
        )
    }

    /// Point mass: the variable whose only nonvanishing cumulant is the
    /// first, equal to `value`.
    pub fn point_mass(value: &DiagonalScalar, order: usize) -> Result<Self, TransformError> {
        let n = value.n_components();
        let mut cumulants = vec![DiagonalScalar::zero(n); order];
        if order == 0 {
            return Err(TransformError::OrderZero);
        }
        cumulants[0] = value.clone();
        cumulants_to_moments(&CumulantSequence::new(n, order, cumulants)?)
    }

    /// Semicircular law with the given variance: only the second cumulant
    /// survives.
    pub fn semicircular(variance: &DiagonalScalar, order: usize) -> Result<Self, TransformError> {
        let n = variance.n_components();
        if order == 0 {
            return Err(TransformError::OrderZero);
        }
        let mut cumulants = vec![DiagonalScalar::zero(n); order];
        if order >= 2 {
            cumulants[1] = variance.clone();
        }
        cumulants_to_moments(&CumulantSequence::new(n, order, cumulants)?)
    }

    /// Free Poisson law: every cumulant equals the rate.
    pub fn free_poisson(rate: &DiagonalScalar, order: usize) -> Result<Self, TransformError> {
        let n = rate.n_components();
        if order == 0 {
            return Err(TransformError::OrderZero);
        }
        let cumulants = vec![rate.clone(); order];
        cumulants_to_moments(&CumulantSequence::new(n, order, cumulants)?)
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The degree-k moment, `1 <= k <= order`.
    pub fn moment(&self, degree: usize) -> &DiagonalScalar {
        assert!(
            degree >= 1 && degree <= self.order,
            "moment degree {} outside 1..={}",
            degree,
            self.order
        );
        &self.moments[degree - 1]
    }

    pub fn moments(&self) -> &[DiagonalScalar] {
        &self.moments
    }

    pub fn is_zero(&self) -> bool {
        self.moments.iter().all(DiagonalScalar::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Result<Self, TransformError> {
        if order == 0 {
            return Err(TransformError::OrderZero);
        }
        if order > self.order {
            return Err(TransformError::OrderTooSmall {
                order: self.order,
                needed: order,
            });
        }
        Ok(Distribution {
            n_components: self.n_components,
            order,
            moments: self.moments[..order].to_vec(),
        })
    }

    /// Splits into N one-component distributions.
    pub fn split(&self) -> Vec<Distribution> {
        (0..self.n_components)
            .map(|i| Distribution {
                n_components: 1,
                order: self.order,
                moments: self.moments.iter().map(|m| m.component(i)).collect(),
            })
            .collect()
    }

    /// Zips one-component distributions of equal order back together.
    pub fn zip(parts: &[Distribution]) -> Result<Distribution, TransformError> {
        if parts.is_empty() {
            return Err(TransformError::Scalar(DalgError::Empty));
        }
        let order = parts[0].order;
        for part in parts {
            if part.n_components != 1 {
                return Err(TransformError::DimensionMismatch {
                    left: 1,
                    right: part.n_components,
                });
            }
            if part.order != order {
                return Err(TransformError::OrderMismatch {
                    left: order,
                    right: part.order,
                });
            }
        }
        let mut moments = Vec::with_capacity(order);
        for degree in 1..=order {
            let slices: Vec<DiagonalScalar> =
                parts.iter().map(|p| p.moment(degree).clone()).collect();
            moments.push(DiagonalScalar::zip(&slices)?);
        }
        Distribution::new(parts.len(), order, moments)
    }
}

impl CumulantSequence {
    pub fn new(
        n_components: usize,
        order: usize,
        cumulants: Vec<DiagonalScalar>,
    ) -> Result<Self, TransformError> {
        validate_degree_table(n_components, order, &cumulants)?;
        Ok(CumulantSequence {
            n_components,
            order,
            cumulants,
        })
    }

    /// Reads cumulants off a series in Theta.
    pub fn from_series(series: &TruncatedSeries) -> Result<Self, TransformError> {
        if !series.has_zero_constant_term() {
            return Err(TransformError::Series(SeriesError::NonzeroConstantTerm));
        }
        let cumulants = (1..=series.order()).map(|d| series.coeff(d)).collect();
        CumulantSequence::new(series.n_components(), series.order(), cumulants)
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The degree-k cumulant, `1 <= k <= order`.
    pub fn cumulant(&self, degree: usize) -> &DiagonalScalar {
        assert!(
            degree >= 1 && degree <= self.order,
            "cumulant degree {} outside 1..={}",
            degree,
            self.order
        );
        &self.cumulants[degree - 1]
    }

    pub fn cumulants(&self) -> &[DiagonalScalar] {
        &self.cumulants
    }

    pub fn split(&self) -> Vec<CumulantSequence> {
        (0..self.n_components)
            .map(|i| CumulantSequence {
                n_components: 1,
                order: self.order,
                cumulants: self.cumulants.iter().map(|k| k.component(i)).collect(),
            })
            .collect()
    }

    pub fn zip(parts: &[CumulantSequence]) -> Result<CumulantSequence, TransformError> {
        if parts.is_empty() {
            return Err(TransformError::Scalar(DalgError::Empty));
        }
        let order = parts[0].order;
        for part in parts {
            if part.n_components != 1 {
                return Err(TransformError::DimensionMismatch {
                    left: 1,
                    right: part.n_components,
                });
            }
            if part.order != order {
                return Err(TransformError::OrderMismatch {
                    left: order,
                    right: part.order,
                });
            }
        }
        let mut cumulants = Vec::with_capacity(order);
        for degree in 1..=order {
            let slices: Vec<DiagonalScalar> =
                parts.iter().map(|p| p.cumulant(degree).clone()).collect();
            cumulants.push(DiagonalScalar::zip(&slices)?);
        }
        CumulantSequence::new(parts.len(), order, cumulants)
    }
}

/// Möbius inversion over the noncrossing lattice:
/// `k_n = sum over NC(n) of (product of m_(block size)) * mu(pi, 1_n)`.
pub fn moments_to_cumulants(d: &Distribution) -> Result<CumulantSequence, TransformError> {
    let n = d.n_components();
    let mut cumulants = Vec::with_capacity(d.order());
    for degree in 1..=d.order() {
        let partitions = ncpart::noncrossing_partitions(degree)?;
        let mut sum = DiagonalScalar::zero(n);
        for pi in partitions.iter() {
            let mut product = DiagonalScalar::one(n);
            for block in pi.blocks() {
                product = product.mul(d.moment(block.len()))?;
            }
            let mu = ncpart::mobius_full(pi).into_rat();
            sum = sum.add(&product.scale(&mu))?;
        }
        cumulants.push(sum);
    }
    CumulantSequence::new(n, d.order(), cumulants)
}

/// The moment-cumulant formula:
/// `m_n = sum over NC(n) of product of k_(block size)`.
pub fn cumulants_to_moments(k: &CumulantSequence) -> Result<Distribution, TransformError> {
    let n = k.n_components();
    let mut moments = Vec::with_capacity(k.order());
    for degree in 1..=k.order() {
        let partitions = ncpart::noncrossing_partitions(degree)?;
        let mut sum = DiagonalScalar::zero(n);
        for pi in partitions.iter() {
            let mut product = DiagonalScalar::one(n);
            for block in pi.blocks() {
                product = product.mul(k.cumulant(block.len()))?;
            }
            sum = sum.add(&product)?;
        }
        moments.push(sum);
    }
    Distribution::new(n, k.order(), moments)
}

/// Packs the moments as series coefficients 1..=order.
pub fn moment_series(d: &Distribution) -> Result<TruncatedSeries, TransformError> {
    let mut series = TruncatedSeries::zero(d.n_components(), d.order())?;
    for degree in 1..=d.order() {
        series.set_coeff(degree, d.moment(degree).clone())?;
    }
    Ok(series)
}

/// The R-transform: the generating series of the cumulants; lies in Theta.
pub fn r_transform(d: &Distribution) -> Result<TruncatedSeries, TransformError> {
    let cumulants = moments_to_cumulants(d)?;
    let mut series = TruncatedSeries::zero(d.n_components(), d.order())?;
    for degree in 1..=d.order() {
        series.set_coeff(degree, cumulants.cumulant(degree).clone())?;
    }
    Ok(series)
}

fn check_pair(x: &Distribution, y: &Distribution) -> Result<(), TransformError> {
    if x.n_components() != y.n_components() {
        return Err(TransformError::DimensionMismatch {
            left: x.n_components(),
            right: y.n_components(),
        });
    }
    if x.order() != y.order() {
        return Err(TransformError::OrderMismatch {
            left: x.order(),
            right: y.order(),
        });
    }
    Ok(())
}

/// Free additive convolution: cumulants add degreewise. The operands are
/// assumed free.
pub fn free_add_convolve(x: &Distribution, y: &Distribution) -> Result<Distribution, TransformError> {
    check_pair(x, y)?;
    let kx = moments_to_cumulants(x)?;
    let ky = moments_to_cumulants(y)?;
    let mut cumulants = Vec::with_capacity(x.order());
    for degree in 1..=x.order() {
        cumulants.push(kx.cumulant(degree).add(ky.cumulant(degree))?);
    }
    cumulants_to_moments(&CumulantSequence::new(x.n_components(), x.order(), cumulants)?)
}

/// The product-cumulant formula: the degree-n cumulant of `xy` sums, over
/// the noncrossing partitions, the partition-dependent cumulant of `x`
/// times the complement-dependent cumulant of `y`. Direct implementation,
/// independent of the boxed-convolution route.
pub fn product_cumulants(
    x: &Distribution,
    y: &Distribution,
) -> Result<CumulantSequence, TransformError> {
    check_pair(x, y)?;
    let n = x.n_components();
    let kx = moments_to_cumulants(x)?;
    let ky = moments_to_cumulants(y)?;
    let block_product = |k: &CumulantSequence,
                         pi: &ncpart::NoncrossingPartition|
     -> Result<DiagonalScalar, TransformError> {
        let mut product = DiagonalScalar::one(n);
        for block in pi.blocks() {
            product = product.mul(k.cumulant(block.len()))?;
        }
        Ok(product)
    };
    let mut cumulants = Vec::with_capacity(x.order());
    for degree in 1..=x.order() {
        let partitions = ncpart::noncrossing_partitions(degree)?;
        let mut sum = DiagonalScalar::zero(n);
        for pi in partitions.iter() {
            let left = block_product(&kx, pi)?;
            let right = block_product(&ky, &pi.kreweras())?;
            sum = sum.add(&left.mul(&right)?)?;
        }
        cumulants.push(sum);
    }
    CumulantSequence::new(n, x.order(), cumulants)
}

/// Route selector for [`free_mult_convolve`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MultMethod {
    /// Direct product-cumulant sum.
    ProductFormula,
    /// Boxed convolution of the two R-transforms.
    Boxed,
    /// S-transform product, unwound back through the compositional inverse.
    STransform,
}

impl MultMethod {
    pub const ALL: [MultMethod; 3] = [
        MultMethod::ProductFormula,
        MultMethod::Boxed,
        MultMethod::STransform,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MultMethod::ProductFormula => "product-formula",
            MultMethod::Boxed => "boxed",
            MultMethod::STransform => "s-transform",
        }
    }
}

/// Free multiplicative convolution by the chosen route. All routes must
/// produce identical distributions; [`free_mult_convolve_all`] checks that.
pub fn free_mult_convolve(
    x: &Distribution,
    y: &Distribution,
    method: MultMethod,
) -> Result<Distribution, TransformError> {
    check_pair(x, y)?;
    match method {
        MultMethod::ProductFormula => {
            let cumulants = product_cumulants(x, y)?;
            cumulants_to_moments(&cumulants)
        }
        MultMethod::Boxed => {
            let r_xy = r_transform(x)?.boxed_convolve(&r_transform(y)?)?;
            cumulants_to_moments(&CumulantSequence::from_series(&r_xy)?)
        }
        MultMethod::STransform => {
            let s_xy = s_transform(x)?.mul(&s_transform(y)?)?;
            // Unwind the definition: z * S(z) is the compositional inverse
            // of the R-transform.
            let r_xy = s_xy.shift_up().comp_inverse()?;
            cumulants_to_moments(&CumulantSequence::from_series(&r_xy)?)
        }
    }
}

/// Outcome of running every multiplicative route.
#[derive(Clone, Debug)]
pub struct MultConvolutionReport {
    pub by_method: Vec<(MultMethod, Distribution)>,
    pub agreement: bool,
}

impl MultConvolutionReport {
    pub fn distribution(&self) -> &Distribution {
        &self.by_method[0].1
    }
}

/// Runs all three multiplicative routes and reports whether they coincide.
pub fn free_mult_convolve_all(
    x: &Distribution,
    y: &Distribution,
) -> Result<MultConvolutionReport, TransformError> {
    let mut by_method = Vec::with_capacity(3);
    for method in MultMethod::ALL {
        by_method.push((method, free_mult_convolve(x, y, method)?));
    }
    let agreement = by_method.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(MultConvolutionReport {
        by_method,
        agreement,
    })
}

/// The S-transform `(1/z) R^{<-1>}(z)`. Requires an invertible mean; the
/// constant term of the result is the inverse of the mean.
pub fn s_transform(d: &Distribution) -> Result<TruncatedSeries, TransformError> {
    if let Err(DalgError::NotInvertible { component }) = d.moment(1).invert() {
        return Err(TransformError::MeanNotInvertible { component });
    }
    if d.order() < 2 {
        return Err(TransformError::OrderTooSmall {
            order: d.order(),
            needed: 2,
        });
    }
    let r = r_transform(d)?;
    Ok(r.comp_inverse()?.shift_down()?)
}

/// The homomorphism from the boxed-convolution group into the multiplicative
/// group of series with invertible constant term: `g -> (1/z) g^{<-1>}(z)`.
pub fn f_homomorphism(g: &TruncatedSeries) -> Result<TruncatedSeries, TransformError> {
    if g.order() < 2 {
        return Err(TransformError::OrderTooSmall {
            order: g.order(),
            needed: 2,
        });
    }
    Ok(g.comp_inverse()?.shift_down()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpart::catalan;
    use crate::rational::Rat;

    fn d(values: &[i64]) -> DiagonalScalar {
        DiagonalScalar::from_ints(values)
    }

    fn dist(n: usize, moments: Vec<DiagonalScalar>) -> Distribution {
        let order = moments.len();
        Distribution::new(n, order, moments).unwrap()
    }

    #[test]
    fn low_degree_cumulants_match_hand_formulas() {
        // k_1 = m_1; k_2 = m_2 - m_1^2; k_3 = m_3 - 3 m_1 m_2 + 2 m_1^3
        let m1 = d(&[2, -1]);
        let m2 = d(&[5, 3]);
        let m3 = d(&[-7, 4]);
        let x = dist(2, vec![m1.clone(), m2.clone(), m3.clone()]);
        let k = moments_to_cumulants(&x).unwrap();
        assert_eq!(k.cumulant(1), &m1);
        let k2 = m2.sub(&m1.pow(2)).unwrap();
        assert_eq!(k.cumulant(2), &k2);
        let k3 = m3
            .sub(&m1.mul(&m2).unwrap().scale(&Rat::from_int(3)))
            .unwrap()
            .add(&m1.pow(3).scale(&Rat::from_int(2)))
            .unwrap();
        assert_eq!(k.cumulant(3), &k3);
    }

    #[test]
    fn semicircular_moments_invert_to_pure_second_cumulant() {
        let moments = vec![
            d(&[0]),
            d(&[1]),
            d(&[0]),
            d(&[2]),
            d(&[0]),
            d(&[5]),
        ];
        let x = dist(1, moments);
        let k = moments_to_cumulants(&x).unwrap();
        let expected: Vec<DiagonalScalar> = (1..=6)
            .map(|deg| if deg == 2 { d(&[1]) } else { d(&[0]) })
            .collect();
        assert_eq!(k.cumulants(), &expected[..]);
        // roundtrip back
        assert_eq!(cumulants_to_moments(&k).unwrap(), x);
    }

    #[test]
    fn pure_second_cumulant_gives_catalan_moments() {
        for variance in [Rat::from_int(1), Rat::ratio(1, 2), Rat::from_int(3)] {
            let sigma2 = DiagonalScalar::new(vec![variance.clone()]).unwrap();
            let x = Distribution::semicircular(&sigma2, 10).unwrap();
            for n in 1..=5usize {
                let expected = Rat::from_bigint(catalan(n)) * variance.pow(n as u32);
                assert_eq!(
                    x.moment(2 * n),
                    &DiagonalScalar::new(vec![expected]).unwrap(),
                    "m_{} at variance {}",
                    2 * n,
                    variance
                );
                assert!(x.moment(2 * n - 1).is_zero());
            }
        }
    }

    #[test]
    fn free_poisson_moments_are_catalan() {
        let x = Distribution::free_poisson(&DiagonalScalar::one(1), 6).unwrap();
        for degree in 1..=6 {
            assert_eq!(
                x.moment(degree),
                &DiagonalScalar::new(vec![Rat::from_bigint(catalan(degree))]).unwrap()
            );
        }
        assert_eq!(x.moment(3), &d(&[5]));
    }

    #[test]
    fn point_mass_moments_are_powers() {
        let c = DiagonalScalar::new(vec![Rat::from_int(2), Rat::ratio(-1, 2)]).unwrap();
        let x = Distribution::point_mass(&c, 5).unwrap();
        for degree in 1..=5 {
            assert_eq!(x.moment(degree), &c.pow(degree as u32), "degree {}", degree);
        }
    }

    #[test]
    fn moment_and_r_series_packing() {
        let zero = Distribution::zero(2, 4).unwrap();
        assert!(moment_series(&zero).unwrap().is_zero());
        assert!(r_transform(&zero).unwrap().is_zero());

        let c = d(&[3, -2]);
        let x = Distribution::point_mass(&c, 4).unwrap();
        let m = moment_series(&x).unwrap();
        for degree in 1..=4 {
            assert_eq!(m.coeff(degree), c.pow(degree as u32));
        }
        // R-transform of a point mass is exactly c z
        let r = r_transform(&x).unwrap();
        let expected = TruncatedSeries::from_coeffs(2, 4, vec![(1, c)]).unwrap();
        assert_eq!(r, expected);

        let semi = Distribution::semicircular(&DiagonalScalar::one(1), 6).unwrap();
        let r = r_transform(&semi).unwrap();
        let expected =
            TruncatedSeries::from_coeffs(1, 6, vec![(2, DiagonalScalar::one(1))]).unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn series_routes_match_direct_routes() {
        let x = dist(2, vec![d(&[1, -1]), d(&[2, 3]), d(&[0, 1]), d(&[4, -2]), d(&[1, 0])]);
        let m = moment_series(&x).unwrap();
        let r = r_transform(&x).unwrap();
        let zeta = crate::series::zeta_series(2, 5).unwrap();
        let mob = crate::series::mob_series(2, 5).unwrap();
        assert_eq!(r.boxed_convolve(&zeta).unwrap(), m);
        assert_eq!(m.boxed_convolve(&mob).unwrap(), r);
    }

    #[test]
    fn additive_convolution_examples() {
        let x = dist(1, vec![d(&[1]), d(&[3]), d(&[2]), d(&[9])]);
        let zero = Distribution::zero(1, 4).unwrap();
        assert_eq!(free_add_convolve(&x, &zero).unwrap(), x);

        let semi1 = Distribution::semicircular(&DiagonalScalar::one(1), 4).unwrap();
        let sum = free_add_convolve(&semi1, &semi1).unwrap();
        let semi2 = Distribution::semicircular(&d(&[2]), 4).unwrap();
        assert_eq!(sum, semi2);
        assert_eq!(sum.moment(2), &d(&[2]));
        assert_eq!(sum.moment(4), &d(&[8]));

        let fp1 = Distribution::free_poisson(&DiagonalScalar::one(1), 5).unwrap();
        let fp2 = Distribution::free_poisson(&d(&[2]), 5).unwrap();
        assert_eq!(free_add_convolve(&fp1, &fp1).unwrap(), fp2);
    }

    #[test]
    fn additive_convolution_checks_shapes() {
        let x = Distribution::zero(1, 3).unwrap();
        let y = Distribution::zero(2, 3).unwrap();
        assert!(matches!(
            free_add_convolve(&x, &y),
            Err(TransformError::DimensionMismatch { .. })
        ));
        let z = Distribution::zero(1, 4).unwrap();
        assert!(matches!(
            free_add_convolve(&x, &z),
            Err(TransformError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn product_cumulants_examples() {
        let x = dist(2, vec![d(&[1, 2]), d(&[3, -1]), d(&[0, 4]), d(&[2, 2])]);
        // y = point mass at one: xy has the cumulants of x
        let delta_one = Distribution::point_mass(&DiagonalScalar::one(2), 4).unwrap();
        let kx = moments_to_cumulants(&x).unwrap();
        let kxy = product_cumulants(&x, &delta_one).unwrap();
        assert_eq!(kxy, kx);

        let y = dist(2, vec![d(&[2, -1]), d(&[1, 1]), d(&[5, 0]), d(&[0, 3])]);
        let ky = moments_to_cumulants(&y).unwrap();
        let k = product_cumulants(&x, &y).unwrap();
        // degree 1: k_1(xy) = k_1(x) k_1(y)
        assert_eq!(
            k.cumulant(1),
            &kx.cumulant(1).mul(ky.cumulant(1)).unwrap()
        );
        // degree 2: k_2(xy) = k_2(x) k_1(y)^2 + k_1(x)^2 k_2(y)
        let expected = kx
            .cumulant(2)
            .mul(&ky.cumulant(1).pow(2))
            .unwrap()
            .add(&kx.cumulant(1).pow(2).mul(ky.cumulant(2)).unwrap())
            .unwrap();
        assert_eq!(k.cumulant(2), &expected);
    }

    #[test]
    fn multiplicative_convolution_point_masses() {
        let a = DiagonalScalar::new(vec![Rat::from_int(2), Rat::ratio(1, 3)]).unwrap();
        let b = DiagonalScalar::new(vec![Rat::from_int(-3), Rat::ratio(3, 2)]).unwrap();
        let x = Distribution::point_mass(&a, 5).unwrap();
        let y = Distribution::point_mass(&b, 5).unwrap();
        let expected = Distribution::point_mass(&a.mul(&b).unwrap(), 5).unwrap();
        for method in MultMethod::ALL {
            assert_eq!(
                free_mult_convolve(&x, &y, method).unwrap(),
                expected,
                "method {}",
                method.name()
            );
        }
    }

    #[test]
    fn multiplicative_identity_element() {
        let x = dist(1, vec![d(&[2]), d(&[5]), d(&[14]), d(&[42]), d(&[132])]);
        let delta_one = Distribution::point_mass(&DiagonalScalar::one(1), 5).unwrap();
        for method in MultMethod::ALL {
            assert_eq!(free_mult_convolve(&x, &delta_one, method).unwrap(), x);
            assert_eq!(free_mult_convolve(&delta_one, &x, method).unwrap(), x);
        }
    }

    #[test]
    fn multiplicative_routes_agree_on_free_poisson() {
        let fp = Distribution::free_poisson(&DiagonalScalar::one(1), 5).unwrap();
        let report = free_mult_convolve_all(&fp, &fp).unwrap();
        assert!(report.agreement);
        let reference = report.distribution().clone();
        for (method, value) in &report.by_method {
            assert_eq!(value, &reference, "route {}", method.name());
        }
    }

    #[test]
    fn s_transform_of_point_mass_is_constant_inverse() {
        let c = DiagonalScalar::new(vec![Rat::from_int(2), Rat::ratio(-1, 3)]).unwrap();
        let x = Distribution::point_mass(&c, 5).unwrap();
        let s = s_transform(&x).unwrap();
        let expected = TruncatedSeries::constant(&c.invert().unwrap(), 4).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn s_transform_of_free_poisson_expands_geometric_reciprocal() {
        // S(z) must truncate 1/(lambda + z); the expansion, derived from the
        // geometric series, has degree-k coefficient (-1)^k / lambda^(k+1).
        for lambda in [Rat::from_int(1), Rat::from_int(3), Rat::ratio(1, 2)] {
            let rate = DiagonalScalar::new(vec![lambda.clone()]).unwrap();
            let x = Distribution::free_poisson(&rate, 6).unwrap();
            let s = s_transform(&x).unwrap();
            assert_eq!(s.order(), 5);
            let lambda_inv = lambda.invert().unwrap();
            for degree in 0..=5usize {
                let mut expected = lambda_inv.pow(degree as u32 + 1);
                if degree % 2 == 1 {
                    expected = -expected;
                }
                assert_eq!(
                    s.coeff(degree),
                    DiagonalScalar::new(vec![expected]).unwrap(),
                    "lambda {} degree {}",
                    lambda,
                    degree
                );
            }
        }
    }

    #[test]
    fn s_transform_constant_term_is_inverse_mean() {
        let x = dist(2, vec![d(&[3, -2]), d(&[1, 1]), d(&[0, 5])]);
        let s = s_transform(&x).unwrap();
        assert_eq!(s.coeff(0), x.moment(1).invert().unwrap());
    }

    #[test]
    fn s_transform_componentwise_pairing() {
        let fp = Distribution::free_poisson(&DiagonalScalar::one(1), 6).unwrap();
        let pm = Distribution::point_mass(&d(&[2]), 6).unwrap();
        let zipped = Distribution::zip(&[fp.clone(), pm.clone()]).unwrap();
        let s = s_transform(&zipped).unwrap();
        let s_parts = [s_transform(&fp).unwrap(), s_transform(&pm).unwrap()];
        let expected = TruncatedSeries::zip(&s_parts).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn scalar_s_transform_agrees_with_moment_series_route() {
        // at N = 1 the S-transform can also be computed from the moment
        // series as (1 + z)/z * M^{<-1>}(z); both routes must coincide
        let mut one_plus_z = TruncatedSeries::zero(1, 5).unwrap();
        one_plus_z.set_coeff(0, DiagonalScalar::one(1)).unwrap();
        one_plus_z.set_coeff(1, DiagonalScalar::one(1)).unwrap();
        let samples = [
            dist(1, vec![d(&[2]), d(&[1]), d(&[-3]), d(&[5]), d(&[0]), d(&[7])]),
            Distribution::free_poisson(&DiagonalScalar::one(1), 6).unwrap(),
            Distribution::point_mass(&d(&[-3]), 6).unwrap(),
        ];
        for x in samples {
            let via_r = s_transform(&x).unwrap();
            let m_inverse = moment_series(&x).unwrap().comp_inverse().unwrap();
            let via_m = m_inverse.shift_down().unwrap().mul(&one_plus_z).unwrap();
            assert_eq!(via_r, via_m);
        }
    }

    #[test]
    fn s_transform_rejects_non_invertible_mean() {
        let x = dist(2, vec![d(&[1, 0]), d(&[1, 1])]);
        assert_eq!(
            s_transform(&x).unwrap_err(),
            TransformError::MeanNotInvertible { component: 2 }
        );
    }

    #[test]
    fn f_homomorphism_examples() {
        let identity = TruncatedSeries::identity(2, 5).unwrap();
        let f_id = f_homomorphism(&identity).unwrap();
        assert_eq!(
            f_id,
            TruncatedSeries::constant(&DiagonalScalar::one(2), 4).unwrap()
        );

        let c = DiagonalScalar::new(vec![Rat::from_int(5), Rat::ratio(2, 7)]).unwrap();
        let g = TruncatedSeries::from_coeffs(2, 5, vec![(1, c.clone())]).unwrap();
        assert_eq!(
            f_homomorphism(&g).unwrap(),
            TruncatedSeries::constant(&c.invert().unwrap(), 4).unwrap()
        );
    }

    #[test]
    fn f_homomorphism_multiplies_boxed_convolutions() {
        let g1 = TruncatedSeries::from_coeffs(
            2,
            5,
            vec![(1, d(&[2, 1])), (2, d(&[-1, 3])), (3, d(&[1, 0]))],
        )
        .unwrap();
        let g2 = TruncatedSeries::from_coeffs(
            2,
            5,
            vec![(1, d(&[1, -2])), (2, d(&[4, 1])), (4, d(&[0, 2]))],
        )
        .unwrap();
        let lhs = f_homomorphism(&g1.boxed_convolve(&g2).unwrap()).unwrap();
        let rhs = f_homomorphism(&g1)
            .unwrap()
            .mul(&f_homomorphism(&g2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn componentwise_split_zip_roundtrip() {
        let x = dist(3, vec![d(&[1, 2, 3]), d(&[4, 5, 6]), d(&[7, 8, 9])]);
        assert_eq!(Distribution::zip(&x.split()).unwrap(), x);
        let k = moments_to_cumulants(&x).unwrap();
        assert_eq!(CumulantSequence::zip(&k.split()).unwrap(), k);
    }

    #[test]
    fn pipeline_commutes_with_components() {
        let x = dist(3, vec![d(&[1, 0, 2]), d(&[2, 1, 5]), d(&[3, 0, 14])]);
        let whole = moments_to_cumulants(&x).unwrap();
        let parts: Vec<CumulantSequence> = x
            .split()
            .iter()
            .map(|p| moments_to_cumulants(p).unwrap())
            .collect();
        assert_eq!(CumulantSequence::zip(&parts).unwrap(), whole);
    }
}
