use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Coeff, Field};
use super::vars::VarTable;
use super::ExprError;

/// Exponent vector ordered graded-lexicographically: total degree first, then the
/// earliest variable of the table with the larger exponent wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    fn quotient(&self, d: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(d.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact coefficients. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<C: Coeff> {
    vars: VarTable,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(vars: &VarTable) -> Self {
        Self { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarTable, c: C) -> Self {
        let mut p = Self::zero(vars);
        p.insert(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(vars: &VarTable) -> Self {
        Self::constant(vars, C::from_int(1))
    }

    pub fn var(vars: &VarTable, index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        let mut p = Self::zero(vars);
        p.insert(Monomial::from_exponents(e), C::from_int(1));
        p
    }

    pub fn var_named(vars: &VarTable, name: &str) -> Result<Self, ExprError> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| ExprError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, i))
    }

    pub fn from_terms(vars: &VarTable, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length must match the table");
            p.add_term(Monomial::from_exponents(e), c);
        }
        p
    }

    fn insert(&mut self, m: Monomial, c: C) {
        if !c.is_zero() {
            self.terms.insert(m, c);
        }
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant term (zero when absent).
    pub fn constant_term(&self) -> C {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(|| C::from_int(0))
    }

    pub fn coeff(&self, exponents: &[u32]) -> C {
        self.terms
            .get(&Monomial::from_exponents(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(|| C::from_int(0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    fn check_table(&self, o: &Self) {
        assert!(self.vars == o.vars, "polynomials over different variable tables");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_table(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_table(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_table(o);
        let mut r = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to the variable at `var`.
    pub fn differentiate(&self, var: usize) -> Self {
        let mut r = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut d = m.0.to_vec();
            d[var] -= 1;
            r.add_term(Monomial::from_exponents(d), c.mul(&C::from_int(i64::from(e))));
        }
        r
    }

    pub fn differentiate_by_name(&self, name: &str) -> Result<Self, ExprError> {
        let i = self
            .vars
            .index_of(name)
            .ok_or_else(|| ExprError::UnknownVariable(name.to_string()))?;
        Ok(self.differentiate(i))
    }

    pub fn evaluate(&self, point: &[C]) -> Result<C, ExprError> {
        if point.len() != self.vars.len() {
            return Err(ExprError::DimensionMismatch { expected: self.vars.len(), got: point.len() });
        }
        let mut powers: Vec<Vec<C>> = point.iter().map(|x| vec![C::from_int(1), x.clone()]).collect();
        let mut acc = C::from_int(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table[table.len() - 1].mul(&table[1]);
                    table.push(next);
                }
                t = t.mul(&table[e as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` (polynomials over `target`) for variable `i`.
    pub fn compose(&self, images: &[Polynomial<C>], target: &VarTable) -> Polynomial<C> {
        assert_eq!(images.len(), self.vars.len());
        let mut powers: Vec<Vec<Polynomial<C>>> =
            images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table[table.len() - 1].mul(&table[1]);
                    table.push(next);
                }
                t = t.mul(&table[e as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Re-expresses the polynomial over a table containing all of its variables.
    pub fn embed(&self, target: &VarTable) -> Result<Self, ExprError> {
        let map = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or_else(|| ExprError::UnknownVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.rename(&map, target))
    }

    /// Moves variable `i` to position `map[i]` of `target`.
    pub fn rename(&self, map: &[usize], target: &VarTable) -> Self {
        let mut r = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[map[i]] += x;
                }
            }
            r.add_term(Monomial::from_exponents(e), c.clone());
        }
        r
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut r = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }

    /// Componentwise minimum of all exponent vectors (the monomial content).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.vars.len());
        };
        let mut e = first.0.to_vec();
        for m in it {
            for (a, b) in e.iter_mut().zip(m.0.iter()) {
                *a = (*a).min(*b);
            }
        }
        Monomial::from_exponents(e)
    }

    pub fn divide_by_monomial(&self, m: &Monomial) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.quotient(m), c.clone())).collect(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check_table(d);
        let (dm, dc) = d.leading_term()?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = Self::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term() {
            if !dm.divides(m) {
                return None;
            }
            let qm = m.quotient(dm);
            let qc = c.mul(&dc_inv);
            let mut t = Self::zero(&self.vars);
            t.insert(qm.clone(), qc.clone());
            rem = rem.sub(&t.mul(d));
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Swaps z↔zb and w↔wb (all jet orders) and conjugates the coefficients.
    pub fn conjugate_involution(&self) -> Result<Self, ExprError> {
        let map = self
            .vars
            .names()
            .iter()
            .map(|n| {
                conjugate_name(n)
                    .and_then(|c| self.vars.index_of(&c))
                    .ok_or(ExprError::NotComplexifiedMode)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut r = self.rename(&map, &self.vars);
        for c in r.terms.values_mut() {
            *c = c.conj();
        }
        r.terms.retain(|_, c| !c.is_zero());
        Ok(r)
    }
}

/// Name of the conjugate complexified variable (`z3`↔`zb3`, `w1_2`↔`wb1_2`).
pub fn conjugate_name(name: &str) -> Option<String> {
    let swap = |barred: &str, plain: &str| -> Option<String> {
        if let Some(rest) = name.strip_prefix(barred) {
            return starts_with_digit(rest).then(|| format!("{plain}{rest}"));
        }
        if let Some(rest) = name.strip_prefix(plain) {
            return starts_with_digit(rest).then(|| format!("{barred}{rest}"));
        }
        None
    };
    swap("zb", "z").or_else(|| swap("wb", "w"))
}

fn starts_with_digit(s: &str) -> bool {
    s.bytes().next().is_some_and(|b| b.is_ascii_digit())
}

impl<C: Coeff> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, o: Self) -> Polynomial<C> {
        Polynomial::add(self, o)
    }
}

impl<C: Coeff> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, o: Self) -> Polynomial<C> {
        Polynomial::sub(self, o)
    }
}

impl<C: Coeff> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, o: Self) -> Polynomial<C> {
        Polynomial::mul(self, o)
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::neg(self)
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.prints_negative();
            let c = if negative { c.neg() } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !c.is_one() || m.is_one() {
                factors.push(if c.needs_parens() { format!("({c})") } else { c.to_string() });
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{e}", self.vars.name(i))),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Coeff> Field for Polynomial<C> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.vars)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.vars)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        Polynomial::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Polynomial::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Polynomial::mul(self, o)
    }
    fn neg(&self) -> Self {
        Polynomial::neg(self)
    }
    /// Only nonzero constants are invertible.
    fn inv(&self) -> Option<Self> {
        if self.is_constant() && !self.is_zero() {
            Some(Self::constant(&self.vars, self.constant_term().inv()?))
        } else {
            None
        }
    }
}
