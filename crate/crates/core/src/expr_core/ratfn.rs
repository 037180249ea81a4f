use std::fmt;

use super::field::{Coeff, Field};
use super::poly::Polynomial;
use super::vars::VarTable;
use super::ExprError;

/// Quotient of polynomials. Only monomial content and exactly dividing denominators are
/// cancelled; equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction<C: Coeff> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

impl<C: Coeff> RationalFunction<C> {
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZeroFunction);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Polynomial<C>) -> Self {
        let den = Polynomial::one(p.vars());
        Self { num: p, den }
    }

    pub fn zero(vars: &VarTable) -> Self {
        Self::from_poly(Polynomial::zero(vars))
    }

    pub fn constant(vars: &VarTable, c: C) -> Self {
        Self::from_poly(Polynomial::constant(vars, c))
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn vars(&self) -> &VarTable {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    fn normalized(num: Polynomial<C>, den: Polynomial<C>) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        let (mut num, mut den) = (num, den);
        let mc = num.monomial_content();
        let dc = den.monomial_content();
        let common = super::poly::Monomial::from_exponents(
            mc.exponents().iter().zip(dc.exponents()).map(|(a, b)| *a.min(b)).collect(),
        );
        if !common.is_one() {
            num = num.divide_by_monomial(&common);
            den = den.divide_by_monomial(&common);
        }
        if !den.is_constant() {
            if let Some(q) = num.div_exact(&den) {
                return Self::from_poly(q);
            }
        }
        let lc = den.leading_term().map(|(_, c)| c.clone()).expect("nonzero denominator");
        let inv = lc.inv().expect("nonzero leading coefficient");
        if !lc.is_one() {
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        if let Some(q) = o.den.div_exact(&self.den) {
            return Self::normalized(self.num.mul(&q).add(&o.num), o.den.clone());
        }
        if let Some(q) = self.den.div_exact(&o.den) {
            return Self::normalized(self.num.add(&o.num.mul(&q)), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.vars());
        }
        let (mut n1, mut d1, mut n2, mut d2) =
            (self.num.clone(), self.den.clone(), o.num.clone(), o.den.clone());
        if !d2.is_constant() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = Polynomial::one(self.vars());
            }
        }
        if !d1.is_constant() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = Polynomial::one(self.vars());
            }
        }
        Self::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Result<Self, ExprError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, ExprError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Exact equality by cross-multiplication.
    pub fn equal(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    /// Quotient rule.
    pub fn differentiate(&self, var: usize) -> Self {
        if self.den.is_constant() {
            return Self::normalized(self.num.differentiate(var), self.den.clone());
        }
        let dn = self.num.differentiate(var);
        let dd = self.den.differentiate(var);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        Self::normalized(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    pub fn evaluate(&self, point: &[C]) -> Result<C, ExprError> {
        let d = self.den.evaluate(point)?;
        let n = self.num.evaluate(point)?;
        n.div(&d).ok_or(ExprError::PoleAtPoint)
    }

    /// Value of the partial derivative at a point without building the symbolic derivative.
    pub fn derivative_at(&self, var: usize, point: &[C]) -> Result<C, ExprError> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(ExprError::PoleAtPoint);
        }
        let n = self.num.evaluate(point)?;
        let dn = self.num.differentiate(var).evaluate(point)?;
        let dd = self.den.differentiate(var).evaluate(point)?;
        let top = dn.mul(&d).sub(&n.mul(&dd));
        Ok(top.div(&d.mul(&d)).expect("nonzero denominator"))
    }

    pub fn compose(&self, images: &[Polynomial<C>], target: &VarTable) -> Result<Self, ExprError> {
        Self::new(self.num.compose(images, target), self.den.compose(images, target))
    }
}

impl<C: Coeff> PartialEq for RationalFunction<C> {
    fn eq(&self, o: &Self) -> bool {
        self.equal(o)
    }
}

impl<C: Coeff> From<Polynomial<C>> for RationalFunction<C> {
    fn from(p: Polynomial<C>) -> Self {
        Self::from_poly(p)
    }
}

impl<C: Coeff> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl<C: Coeff> Field for RationalFunction<C> {
    fn zero_like(&self) -> Self {
        Self::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        Self::constant(self.vars(), C::from_int(1))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        RationalFunction::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RationalFunction::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::mul(self, o)
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        RationalFunction::inv(self).ok()
    }
}
