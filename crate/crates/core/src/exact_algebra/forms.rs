//! Polynomial differential forms on the plane.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::poly::{Degree, Poly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `dx * dx + dy * dy` with polynomial coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct OneForm<F> {
    pub dx: Poly<F>,
    pub dy: Poly<F>,
}

/// `g dx^dy`.
#[derive(Clone, PartialEq, Debug)]
pub struct TwoForm<F> {
    pub g: Poly<F>,
}

impl<F: Scalar> OneForm<F> {
    pub fn new(dx: Poly<F>, dy: Poly<F>) -> Self {
        OneForm { dx, dy }
    }

    pub fn zero() -> Self {
        OneForm::new(Poly::zero(), Poly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.dx.is_zero() && self.dy.is_zero()
    }

    /// `max(deg a, deg b)` for `a dx + b dy`.
    pub fn degree(&self) -> Degree {
        self.dx.degree().max(self.dy.degree())
    }

    pub fn mul_poly(&self, p: &Poly<F>) -> Self {
        OneForm::new(&self.dx * p, &self.dy * p)
    }

    pub fn scale(&self, c: &F) -> Self {
        OneForm::new(self.dx.scale(c), self.dy.scale(c))
    }

    /// Pole order along the line at infinity, minus two.
    ///
    /// With `n = deg(self)` and top homogeneous parts `a_n, b_n`, the form
    /// pulled back to homogeneous coordinates is `N / z^(n+2)`. The `dz`
    /// coefficient of `N` has constant term `-(x a_n + y b_n)` in `z`, while
    /// the `dx, dy` coefficients are divisible by `z` exactly once. So the pole
    /// order is `n + 2` unless the Euler contraction `x a_n + y b_n` vanishes,
    /// in which case it is `n + 1`.
    pub fn deg1(&self) -> Result<u32> {
        let n = self
            .degree()
            .finite()
            .ok_or_else(|| Error::validation("undefined degree: deg1 of the zero form"))?;
        let euler =
            &(&Poly::x() * &self.dx.homogeneous_part(n)) + &(&Poly::y() * &self.dy.homogeneous_part(n));
        if euler.is_zero() {
            // n >= 1 here: a nonzero constant form has a nonzero Euler contraction.
            Ok(n - 1)
        } else {
            Ok(n)
        }
    }

    /// A potential `P` with `dP = self`, if the form is closed.
    pub fn potential(&self) -> Option<Poly<F>> {
        if !exterior_derivative_1(self).g.is_zero() {
            return None;
        }
        let px = self.dx.integrate_x();
        let rest = &self.dy - &px.dy();
        // `rest` depends on y only when the form is closed.
        Some(&px + &rest.integrate_y())
    }

    pub fn map_coeffs<G: Scalar>(&self, g: impl Fn(&F) -> G + Copy) -> OneForm<G> {
        OneForm::new(self.dx.map_coeffs(g), self.dy.map_coeffs(g))
    }
}

impl<F: Scalar> TwoForm<F> {
    pub fn new(g: Poly<F>) -> Self {
        TwoForm { g }
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero()
    }
}

/// The exterior derivative on 0- and 1-forms.
pub trait ExteriorDerivative {
    type Output;

    fn d(&self) -> Self::Output;
}

impl<F: Scalar> ExteriorDerivative for Poly<F> {
    type Output = OneForm<F>;

    fn d(&self) -> OneForm<F> {
        OneForm::new(self.dx(), self.dy())
    }
}

impl<F: Scalar> ExteriorDerivative for OneForm<F> {
    type Output = TwoForm<F>;

    fn d(&self) -> TwoForm<F> {
        exterior_derivative_1(self)
    }
}

fn exterior_derivative_1<F: Scalar>(w: &OneForm<F>) -> TwoForm<F> {
    TwoForm::new(&w.dy.dx() - &w.dx.dy())
}

/// `(a1 dx + b1 dy) ^ (a2 dx + b2 dy) = (a1 b2 - b1 a2) dx^dy`.
pub fn wedge<F: Scalar>(u: &OneForm<F>, v: &OneForm<F>) -> TwoForm<F> {
    TwoForm::new(&(&u.dx * &v.dy) - &(&u.dy * &v.dx))
}

impl<F: Scalar> Add<&OneForm<F>> for &OneForm<F> {
    type Output = OneForm<F>;

    fn add(self, rhs: &OneForm<F>) -> OneForm<F> {
        OneForm::new(&self.dx + &rhs.dx, &self.dy + &rhs.dy)
    }
}

impl<F: Scalar> Sub<&OneForm<F>> for &OneForm<F> {
    type Output = OneForm<F>;

    fn sub(self, rhs: &OneForm<F>) -> OneForm<F> {
        OneForm::new(&self.dx - &rhs.dx, &self.dy - &rhs.dy)
    }
}

impl<F: Scalar> Neg for &OneForm<F> {
    type Output = OneForm<F>;

    fn neg(self) -> OneForm<F> {
        OneForm::new(-&self.dx, -&self.dy)
    }
}

impl<F: Scalar> Add<&TwoForm<F>> for &TwoForm<F> {
    type Output = TwoForm<F>;

    fn add(self, rhs: &TwoForm<F>) -> TwoForm<F> {
        TwoForm::new(&self.g + &rhs.g)
    }
}

impl<F: Scalar> Sub<&TwoForm<F>> for &TwoForm<F> {
    type Output = TwoForm<F>;

    fn sub(self, rhs: &TwoForm<F>) -> TwoForm<F> {
        TwoForm::new(&self.g - &rhs.g)
    }
}

impl<F: Scalar> fmt::Display for OneForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx + ({}) dy", self.dx, self.dy)
    }
}

impl<F: Scalar> fmt::Display for TwoForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx^dy", self.g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Poly<Rational>;
    type W = OneForm<Rational>;

    #[test]
    fn d_of_product() {
        let xy = P::from_ints(&[(1, 1, 1)]);
        assert_eq!(xy.d(), W::new(P::y(), P::x()));
    }

    #[test]
    fn d_of_y_dx() {
        let w = W::new(P::y(), P::zero());
        assert_eq!(w.d().g, P::from_ints(&[(-1, 0, 0)]));
    }

    #[test]
    fn dd_is_zero() {
        let p = P::from_ints(&[(1, 3, 2), (-7, 1, 0)]);
        assert!(p.d().d().is_zero());
    }

    #[test]
    fn wedge_basics() {
        let dx = W::new(P::one(), P::zero());
        let dy = W::new(P::zero(), P::one());
        assert_eq!(wedge(&dx, &dy).g, P::one());
        let w = W::new(P::from_ints(&[(2, 1, 3)]), P::from_ints(&[(1, 0, 1), (5, 0, 0)]));
        assert!(wedge(&w, &w).is_zero());
        // f = xy: df ^ (-f_y dx + f_x dy) = (f_x^2 + f_y^2) dx^dy = (y^2 + x^2) dx^dy
        let f = P::from_ints(&[(1, 1, 1)]);
        let rot = W::new(-&f.dy(), f.dx());
        assert_eq!(wedge(&f.d(), &rot).g, P::from_ints(&[(1, 2, 0), (1, 0, 2)]));
    }

    #[test]
    fn deg1_examples() {
        // x dy
        assert_eq!(W::new(P::zero(), P::x()).deg1(), Ok(1));
        // x dy - y dx
        assert_eq!(W::new(-&P::y(), P::x()).deg1(), Ok(0));
        // df with deg f = 4
        let f = P::from_ints(&[(1, 4, 0), (3, 1, 2), (1, 0, 1)]);
        assert_eq!(f.d().deg1(), Ok(3));
        assert!(W::zero().deg1().is_err());
        // a nonzero constant form
        assert_eq!(W::new(P::one(), P::zero()).deg1(), Ok(0));
    }

    #[test]
    fn potential_of_exact_form() {
        let p = P::from_ints(&[(1, 3, 2), (-7, 1, 0), (2, 0, 4)]);
        let back = p.d().potential().unwrap();
        assert_eq!(back.d(), p.d());
        assert!(W::new(P::y(), P::zero()).potential().is_none());
    }
}
