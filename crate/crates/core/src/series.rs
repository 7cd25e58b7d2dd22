//! Dense truncated power series over arbitrary-precision integers.
//!
//! A series of order `N` stores the coefficients of `x^0..=x^N`; every
//! operation truncates back to the common order.  All the generating
//! functions used by the counting code live in the subring generated by the
//! Catalan series and `1/sqrt(1-4x)`, so the arithmetic stays in integers:
//! division by `sqrt(1-4x)` is always expressed as multiplication by the
//! inverse square root series, and `1/(1-4x)` as the geometric series in
//! `4x`.

use num::{BigInt, One};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
}

/// Coefficients of `x^0..=x^order`, dense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Order is `coeffs.len() - 1`; an empty vector gives the zero series of
    /// order 0.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigInt::ZERO);
        }
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![BigInt::ZERO; order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigInt::one();
        }
        s
    }

    /// `sum_n ratio^n x^n`, the expansion of `1/(1 - ratio*x)`.
    pub fn geometric(ratio: i64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut acc = BigInt::one();
        for _ in 0..=order {
            coeffs.push(acc.clone());
            acc *= ratio;
        }
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        assert!(i <= self.order(), "coefficient {i} beyond order {}", self.order());
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "series arithmetic requires equal orders"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        TruncatedSeries { coeffs }
    }

    /// Convolution truncated to the common order.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_order(other);
        let order = self.order();
        let mut coeffs = vec![BigInt::ZERO; order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a == &BigInt::ZERO {
                continue;
            }
            for (b, c) in other.coeffs[..=order - i].iter().zip(&mut coeffs[i..]) {
                *c += a * b;
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `x^p`: shift coefficients up, dropping overflow past the
    /// order.
    pub fn mul_xpow(&self, p: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![BigInt::ZERO; order + 1];
        for i in p..=order {
            coeffs[i] = self.coeffs[i - p].clone();
        }
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, factor: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * factor).collect();
        TruncatedSeries { coeffs }
    }

    /// Restrict to a lower order.
    pub fn truncate(&self, new_order: usize) -> Self {
        assert!(new_order <= self.order(), "truncate cannot raise the order");
        TruncatedSeries { coeffs: self.coeffs[..=new_order].to_vec() }
    }

    /// Coefficientwise comparison of series of equal order.
    pub fn leq(&self, other: &Self) -> Result<bool, SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b))
    }
}

/// Catalan generating function `C(x) = sum C_n x^n`, computed through the
/// convolution recurrence `C_{n+1} = sum_i C_i C_{n-i}`.
pub fn catalan_series(order: usize) -> TruncatedSeries {
    let mut coeffs = vec![BigInt::ZERO; order + 1];
    coeffs[0] = BigInt::one();
    for n in 1..=order {
        let mut acc = BigInt::ZERO;
        for i in 0..n {
            acc += &coeffs[i] * &coeffs[n - 1 - i];
        }
        coeffs[n] = acc;
    }
    TruncatedSeries { coeffs }
}

/// `1/sqrt(1-4x) = sum binom(2n,n) x^n`, via the coefficient ratio
/// `2(2n-1)/n`, which is exact in integers.
pub fn inv_sqrt_series(order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(BigInt::one());
    for n in 1..=order as u64 {
        let prev = coeffs.last().expect("nonempty");
        coeffs.push(prev * (2 * (2 * n - 1)) / n);
    }
    TruncatedSeries { coeffs }
}

/// `F(x) = x C(x) / sqrt(1-4x) = sum binom(2n-1, n-1) x^n`, the transfer
/// factor between consecutive levels of the occurrence series.
pub fn f_series(order: usize) -> TruncatedSeries {
    catalan_series(order).mul(&inv_sqrt_series(order)).mul_xpow(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{binomial, catalan};
    use proptest::prelude::*;

    fn s(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(v.iter().map(|&a| BigInt::from(a)).collect())
    }

    #[test]
    fn constructors() {
        assert_eq!(TruncatedSeries::zero(3), s(&[0, 0, 0, 0]));
        assert_eq!(TruncatedSeries::one(2), s(&[1, 0, 0]));
        assert_eq!(TruncatedSeries::x(3), s(&[0, 1, 0, 0]));
        assert_eq!(TruncatedSeries::geometric(4, 4), s(&[1, 4, 16, 64, 256]));
        assert_eq!(TruncatedSeries::from_coeffs(vec![]), s(&[0]));
    }

    #[test]
    fn ring_operations() {
        let a = s(&[1, 1, 0, 0]);
        assert_eq!(a.mul(&a), s(&[1, 2, 1, 0]));
        assert_eq!(a.pow(3), s(&[1, 3, 3, 1]));
        assert_eq!(a.add(&s(&[0, 0, 5, 0])), s(&[1, 1, 5, 0]));
        assert_eq!(a.sub(&a), TruncatedSeries::zero(3));
        assert_eq!(a.mul_xpow(2), s(&[0, 0, 1, 1]));
        assert_eq!(a.scale(-3), s(&[-3, -3, 0, 0]));
        assert_eq!(a.truncate(1), s(&[1, 1]));
        // truncation drops the overflowing part of a shift
        assert_eq!(s(&[1, 2, 3]).mul_xpow(1), s(&[0, 1, 2]));
    }

    #[test]
    fn comparison() {
        assert_eq!(s(&[1, 2, 3]).leq(&s(&[1, 2, 3])), Ok(true));
        assert_eq!(s(&[1, 2, 3]).leq(&s(&[1, 5, 3])), Ok(true));
        assert_eq!(s(&[1, 2, 3]).leq(&s(&[1, 1, 9])), Ok(false));
        assert_eq!(
            s(&[1, 2]).leq(&s(&[1, 2, 0])),
            Err(SeriesError::OrderMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn catalan_series_values() {
        let c = catalan_series(10);
        let expect: Vec<i64> = vec![1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        assert_eq!(c, s(&expect));
        for n in 0..=10u64 {
            assert_eq!(c.coeff(n as usize), &catalan(n));
        }
    }

    #[test]
    fn inv_sqrt_is_central_binomials() {
        let b = inv_sqrt_series(100);
        for n in 0..=100u64 {
            assert_eq!(b.coeff(n as usize), &binomial(2 * n, n), "n = {n}");
        }
    }

    #[test]
    fn inv_sqrt_squares_to_geometric() {
        let order = 80;
        assert_eq!(
            inv_sqrt_series(order).mul(&inv_sqrt_series(order)),
            TruncatedSeries::geometric(4, order)
        );
    }

    #[test]
    fn catalan_functional_equation() {
        // C = 1 + x C^2
        let order = 60;
        let c = catalan_series(order);
        assert_eq!(c, TruncatedSeries::one(order).add(&c.mul(&c).mul_xpow(1)));
        // 1 - 2xC = sqrt(1-4x), so (1 - 2xC) / sqrt(1-4x) = 1
        let sqrt = TruncatedSeries::one(order).sub(&c.mul_xpow(1).scale(2));
        assert_eq!(sqrt.mul(&inv_sqrt_series(order)), TruncatedSeries::one(order));
    }

    #[test]
    fn f_series_values() {
        let f = f_series(100);
        assert_eq!(f.coeff(0), &BigInt::ZERO);
        for n in 1..=100u64 {
            assert_eq!(f.coeff(n as usize), &binomial(2 * n - 1, n - 1), "n = {n}");
        }
        // low order: F = x + 3x^2 + 10x^3 + 35x^4
        assert_eq!(f.truncate(4), s(&[0, 1, 3, 10, 35]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        // multiplying preserves coefficientwise order when everything is
        // nonnegative
        #[test]
        fn nonnegative_mul_is_monotone(
            base in prop::collection::vec(0i64..100, 13),
            bump in prop::collection::vec(0i64..100, 13),
            w in prop::collection::vec(0i64..100, 13),
        ) {
            let a = s(&base);
            let b = a.add(&s(&bump));
            let w = s(&w);
            prop_assert_eq!(a.leq(&b), Ok(true));
            prop_assert_eq!(a.mul(&w).leq(&b.mul(&w)), Ok(true));
        }

        #[test]
        fn mul_is_commutative_and_associative(
            a in prop::collection::vec(-50i64..50, 9),
            b in prop::collection::vec(-50i64..50, 9),
            c in prop::collection::vec(-50i64..50, 9),
        ) {
            let (a, b, c) = (s(&a), s(&b), s(&c));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
