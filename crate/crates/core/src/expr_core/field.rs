use std::fmt;

use num_traits::{One, Signed, Zero};

use super::gaussian::GaussianRational;
use super::rational::{int, Rational};

/// Exact field arithmetic, shared by pointwise values and symbolic rational functions.
///
/// `zero_like`/`one_like` take a receiver so that symbolic values can carry their variable table.
pub trait Field: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

/// Polynomial coefficients: an exact field that knows about rationals and conjugation.
pub trait Coeff: Field + Eq + fmt::Display + Send + Sync + 'static {
    fn from_rational(r: Rational) -> Self;
    fn conj(&self) -> Self;
    fn imaginary_unit() -> Option<Self>;
    /// True when the printer should emit the coefficient with a leading minus sign.
    fn prints_negative(&self) -> bool;
    /// True when the printed coefficient is a sum and must be parenthesized before `*`.
    fn needs_parens(&self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }
    fn is_one(&self) -> bool {
        *self == Self::from_int(1)
    }
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Coeff for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn imaginary_unit() -> Option<Self> {
        None
    }
    fn prints_negative(&self) -> bool {
        self.is_negative()
    }
    fn needs_parens(&self) -> bool {
        false
    }
}

impl Field for GaussianRational {
    fn zero_like(&self) -> Self {
        GaussianRational::real(Rational::zero())
    }
    fn one_like(&self) -> Self {
        GaussianRational::real(Rational::one())
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        GaussianRational::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussianRational::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        GaussianRational::mul(self, o)
    }
    fn neg(&self) -> Self {
        GaussianRational::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        GaussianRational::inv(self)
    }
}

impl Coeff for GaussianRational {
    fn from_rational(r: Rational) -> Self {
        GaussianRational::real(r)
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn imaginary_unit() -> Option<Self> {
        Some(GaussianRational::i())
    }
    fn prints_negative(&self) -> bool {
        self.re.is_negative() || (Zero::is_zero(&self.re) && self.im.is_negative())
    }
    fn needs_parens(&self) -> bool {
        !Zero::is_zero(&self.re) && !Zero::is_zero(&self.im)
    }
}
