//! Sparse bivariate polynomials in `x, y`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::scalar::{is_one, Scalar};

/// Exponent pair `x^x * y^y`.
///
/// Ordered by graded reverse lexicographic order with `x > y`. In two
/// variables this is total degree first, then the exponent of `x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub const fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(self, other: Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial::new(other.x - self.x, other.y - self.y)
    }

    pub fn lcm(self, other: Monomial) -> Monomial {
        Monomial::new(self.x.max(other.x), self.y.max(other.y))
    }

    pub fn is_coprime(self, other: Monomial) -> bool {
        (self.x == 0 || other.x == 0) && (self.y == 0 || other.y == 0)
    }

    /// All monomials of total degree at most `deg`, ascending.
    pub fn up_to_degree(deg: u32) -> Vec<Monomial> {
        let mut out = Vec::with_capacity(((deg + 1) * (deg + 2) / 2) as usize);
        for total in 0..=deg {
            for x in 0..=total {
                out.push(Monomial::new(x, total - x));
            }
        }
        out
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.x {
            0 => {}
            1 => parts.push("x".to_string()),
            e => parts.push(format!("x^{e}")),
        }
        match self.y {
            0 => {}
            1 => parts.push("y".to_string()),
            e => parts.push(format!("y^{e}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Total degree with an explicit value for the zero polynomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Panics on the zero sentinel. Only for call sites that already know the
    /// operand is nonzero.
    pub fn unwrap(self) -> u32 {
        self.finite().expect("degree of the zero polynomial")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial in `x, y` stored as a map from monomial to nonzero coefficient.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> Default for Poly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> Poly<F> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: F, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn x() -> Self {
        Self::term(F::one(), Monomial::new(1, 0))
    }

    pub fn y() -> Self {
        Self::term(F::one(), Monomial::new(0, 1))
    }

    /// `a*x + b*y + c`.
    pub fn linear(a: F, b: F, c: F) -> Self {
        Self::from_terms([
            (a, Monomial::new(1, 0)),
            (b, Monomial::new(0, 1)),
            (c, Monomial::ONE),
        ])
    }

    /// Sums repeated monomials and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (F, Monomial)>) -> Self {
        let mut p = Self::zero();
        for (c, m) in terms {
            p.add_term(c, m);
        }
        p
    }

    /// Convenience for small literals: `(coefficient, x-exp, y-exp)`.
    pub fn from_ints(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(c, i, j)| (F::from_int(c), Monomial::new(i, j))),
        )
    }

    pub fn add_term(&mut self, c: F, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            Some(m) => Degree::Finite(m.degree()),
            None => Degree::NegInfinity,
        }
    }

    pub fn coeff(&self, m: Monomial) -> F {
        self.terms.get(&m).cloned().unwrap_or_else(F::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + '_ {
        self.terms.iter()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_term(&self) -> Option<(Monomial, &F)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_term(&self, c: &F, m: Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (*k * m, a.clone() * c.clone()))
                .collect(),
        }
    }

    /// `self += c * m * other`, in place.
    pub fn add_scaled(&mut self, c: &F, m: Monomial, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (k, a) in &other.terms {
            self.add_term(a.clone() * c.clone(), *k * m);
        }
    }

    /// Scale so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !is_one(lc) => self.scale(&(F::one() / lc.clone())),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(m, _)| m.x > 0).map(|(m, c)| {
            (
                c.clone() * F::from_int(m.x as i64),
                Monomial::new(m.x - 1, m.y),
            )
        }))
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(m, _)| m.y > 0).map(|(m, c)| {
            (
                c.clone() * F::from_int(m.y as i64),
                Monomial::new(m.x, m.y - 1),
            )
        }))
    }

    /// Antiderivative in `x` with zero integration constant.
    pub fn integrate_x(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            (
                c.clone() / F::from_int(m.x as i64 + 1),
                Monomial::new(m.x + 1, m.y),
            )
        }))
    }

    pub fn integrate_y(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            (
                c.clone() / F::from_int(m.y as i64 + 1),
                Monomial::new(m.x, m.y + 1),
            )
        }))
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        // Horner would need a dense layout; powers are cached instead.
        let max_x = self.terms.keys().map(|m| m.x).max().unwrap_or(0) as usize;
        let max_y = self.terms.keys().map(|m| m.y).max().unwrap_or(0) as usize;
        let xs = powers(x, max_x);
        let ys = powers(y, max_y);
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            acc + c.clone() * xs[m.x as usize].clone() * ys[m.y as usize].clone()
        })
    }

    /// Homogeneous component of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading_term()?;
        let lc = lc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = c.clone() / lc.clone();
            rem = &rem - &divisor.mul_term(&qc, qm);
            quot.add_term(qc, qm);
        }
        Some(quot)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Apply `g` to every coefficient. Zero images are dropped.
    pub fn map_coeffs<G: Scalar>(&self, g: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (g(c), *m)))
    }
}

fn powers<F: Scalar>(base: &F, n: usize) -> Vec<F> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(F::one());
    for i in 0..n {
        let next = out[i].clone() * base.clone();
        out.push(next);
    }
    out
}

impl<F: Scalar> fmt::Display for Poly<F> {
    /// Terms in descending grevlex order, e.g. `x^2*y - 1/2*x + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if *m == Monomial::ONE {
                write!(f, "{abs}")?;
            } else if is_one(&abs) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<F: Scalar> Add<&Poly<F>> for &Poly<F> {
    type Output = Poly<F>;

    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<F: Scalar> Sub<&Poly<F>> for &Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<F: Scalar> AddAssign<&Poly<F>> for Poly<F> {
    fn add_assign(&mut self, rhs: &Poly<F>) {
        for (m, c) in &rhs.terms {
            self.add_term(c.clone(), *m);
        }
    }
}

impl<F: Scalar> SubAssign<&Poly<F>> for Poly<F> {
    fn sub_assign(&mut self, rhs: &Poly<F>) {
        for (m, c) in &rhs.terms {
            self.add_term(-c.clone(), *m);
        }
    }
}

impl<F: Scalar> Mul<&Poly<F>> for &Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ca.clone() * cb.clone(), *ma * *mb);
            }
        }
        out
    }
}

impl<F: Scalar> Neg for &Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<F: Scalar> $tr<Poly<F>> for Poly<F> {
            type Output = Poly<F>;

            fn $method(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$method(&rhs)
            }
        }

        impl<F: Scalar> $tr<&Poly<F>> for Poly<F> {
            type Output = Poly<F>;

            fn $method(self, rhs: &Poly<F>) -> Poly<F> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Scalar> Neg for Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: Scalar> Zero for Poly<F> {
    fn zero() -> Self {
        Poly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Scalar> One for Poly<F> {
    fn one() -> Self {
        Poly::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    type P = Poly<Rational>;

    #[test]
    fn grevlex_order() {
        let mut ms = vec![
            Monomial::new(0, 2),
            Monomial::new(2, 0),
            Monomial::new(1, 1),
            Monomial::new(3, 0),
            Monomial::ONE,
            Monomial::new(0, 1),
        ];
        ms.sort();
        assert_eq!(
            ms,
            vec![
                Monomial::ONE,
                Monomial::new(0, 1),
                Monomial::new(0, 2),
                Monomial::new(1, 1),
                Monomial::new(2, 0),
                Monomial::new(3, 0),
            ]
        );
    }

    #[test]
    fn arithmetic_and_display() {
        let x = P::x();
        let y = P::y();
        let f = &(&x * &y) * &(&(&x + &y) - &P::one());
        assert_eq!(f.to_string(), "x^2*y + x*y^2 - x*y");
        assert_eq!(f.degree(), Degree::Finite(3));
        assert_eq!(P::zero().degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        let g = P::from_terms([(q(-1, 2), Monomial::new(1, 0)), (q(3, 1), Monomial::ONE)]);
        assert_eq!(g.to_string(), "-1/2*x + 3");
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn derivatives_and_eval() {
        let f = P::from_ints(&[(1, 3, 0), (1, 1, 2), (-1, 1, 0)]);
        assert_eq!(f.dx(), P::from_ints(&[(3, 2, 0), (1, 0, 2), (-1, 0, 0)]));
        assert_eq!(f.dy(), P::from_ints(&[(2, 1, 1)]));
        assert_eq!(f.eval(&q(1, 2), &q(1, 1)), q(1, 8) + q(1, 2) - q(1, 2));
        assert_eq!(f.integrate_x().dx(), f);
        assert_eq!(f.integrate_y().dy(), f);
    }

    #[test]
    fn exact_division() {
        let l = P::linear(q(1, 1), q(1, 1), q(-1, 1));
        let x = P::x();
        let f = &x * &l;
        assert_eq!(f.div_exact(&l), Some(x.clone()));
        assert!(l.divides(&f));
        assert_eq!((&f + &P::one()).div_exact(&l), None);
        assert_eq!(x.pow(3), P::from_ints(&[(1, 3, 0)]));
    }

    #[test]
    fn monomials_up_to_degree() {
        let ms = Monomial::up_to_degree(3);
        assert_eq!(ms.len(), 10);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }
}
