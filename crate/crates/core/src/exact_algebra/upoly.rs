//! Dense univariate polynomials in `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use super::poly::{Degree, Poly};
use crate::scalar::{is_one, Scalar};

/// Coefficients stored low to high, with no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| F::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    /// `t - root`.
    pub fn linear(root: F) -> Self {
        Self::new(vec![-root, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n as u32 - 1),
        }
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !is_one(lc) => self.scale(&(F::one() / lc.clone())),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, t: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dl = divisor
            .leading_coeff()
            .expect("division by the zero polynomial")
            .clone();
        let dn = divisor.coeffs.len();
        if self.coeffs.len() < dn {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); rem.len() - dn + 1];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dn - 1].clone() / dl.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * d.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dn - 1);
        (Self::new(quot), Self::new(rem))
    }

    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        (self * &other.div_exact(&g).expect("gcd divides")).monic()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Yun's square-free factorization: `(factor, multiplicity)` pairs with
    /// monic, pairwise coprime, square-free factors. The leading coefficient
    /// is dropped.
    pub fn squarefree_factorization(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if matches!(self.degree(), Degree::NegInfinity | Degree::Finite(0)) {
            return out;
        }
        let a0 = self.monic();
        let d0 = a0.derivative();
        let g = a0.gcd(&d0);
        let mut b = a0.div_exact(&g).expect("gcd divides");
        let mut c = d0.div_exact(&g).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut k = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() != Degree::Finite(0) {
                out.push((a.clone(), k));
            }
            b = b.div_exact(&a).expect("gcd divides");
            if b.degree() == Degree::Finite(0) {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// Substitute a bivariate polynomial for `t`, e.g. `q(f)`.
    pub fn compose(&self, f: &Poly<F>) -> Poly<F> {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| {
            &(&acc * f) + &Poly::constant(c.clone())
        })
    }

    /// Multiplicity of `root` as a zero.
    pub fn root_multiplicity(&self, root: &F) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let lin = Self::linear(root.clone());
        let mut p = self.clone();
        let mut k = 0;
        while let Some(next) = p.div_exact(&lin) {
            p = next;
            k += 1;
        }
        k
    }
}

impl<F: Scalar> fmt::Display for UPoly<F> {
    /// Descending powers of `t`, e.g. `t^3 - 4/27*t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if is_one(&abs) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<F: Scalar> Add<&UPoly<F>> for &UPoly<F> {
    type Output = UPoly<F>;

    fn add(self, rhs: &UPoly<F>) -> UPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<F: Scalar> Sub<&UPoly<F>> for &UPoly<F> {
    type Output = UPoly<F>;

    fn sub(self, rhs: &UPoly<F>) -> UPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<F: Scalar> Mul<&UPoly<F>> for &UPoly<F> {
    type Output = UPoly<F>;

    fn mul(self, rhs: &UPoly<F>) -> UPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(out)
    }
}

impl<F: Scalar> Neg for &UPoly<F> {
    type Output = UPoly<F>;

    fn neg(self) -> UPoly<F> {
        UPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    type U = UPoly<Rational>;

    #[test]
    fn display_and_degree() {
        let p = U::new(vec![q(0, 1), q(-4, 27), q(0, 1), q(1, 1)]);
        assert_eq!(p.to_string(), "t^3 - 4/27*t");
        assert_eq!(p.degree(), Degree::Finite(3));
        assert_eq!(U::zero().degree(), Degree::NegInfinity);
        assert_eq!(U::zero().to_string(), "0");
    }

    #[test]
    fn division_gcd_lcm() {
        let a = &U::linear(q(1, 1)) * &U::linear(q(2, 1));
        let b = &U::linear(q(1, 1)) * &U::linear(q(-3, 1));
        assert_eq!(a.gcd(&b), U::linear(q(1, 1)));
        let l = a.lcm(&b);
        assert_eq!(l.degree(), Degree::Finite(3));
        assert!(l.div_exact(&a).is_some() && l.div_exact(&b).is_some());
        let (qq, r) = U::from_ints(&[1, 0, 1]).div_rem(&U::from_ints(&[1, 1]));
        assert_eq!(&(&qq * &U::from_ints(&[1, 1])) + &r, U::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn squarefree() {
        // t^2 (t^2 - 4/27)
        let p = U::new(vec![q(0, 1), q(0, 1), q(-4, 27), q(0, 1), q(1, 1)]);
        assert_eq!(
            p.squarefree_part(),
            U::new(vec![q(0, 1), q(-4, 27), q(0, 1), q(1, 1)])
        );
        let fac = p.squarefree_factorization();
        assert_eq!(
            fac,
            vec![
                (U::new(vec![q(-4, 27), q(0, 1), q(1, 1)]), 1),
                (U::t(), 2)
            ]
        );
        assert_eq!(p.root_multiplicity(&q(0, 1)), 2);
    }

    #[test]
    fn compose_into_bivariate() {
        let f = Poly::<Rational>::from_ints(&[(1, 1, 1)]);
        let p = U::from_ints(&[1, 0, 2]);
        assert_eq!(
            p.compose(&f),
            Poly::from_ints(&[(2, 2, 2), (1, 0, 0)])
        );
    }
}
