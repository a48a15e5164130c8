//! Milnor algebra `V = Q[x,y] / <f_x, f_y>` and the multiplication-by-`f`
//! operator on it.

mod groebner;

use std::collections::HashMap;

use serde::Serialize;

pub use groebner::{GroebnerBasis, Reduction};

use crate::error::{Error, Result};
use crate::exact_algebra::{sturm_sign_counts, Matrix, Monomial, Poly, SignCounts, UPoly};
use crate::scalar::Scalar;

/// The Jacobian ideal `<f_x, f_y>` with its reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianIdeal<F> {
    pub fx: Poly<F>,
    pub fy: Poly<F>,
    groebner: GroebnerBasis<F>,
}

/// `g = remainder + a f_x + b f_y`, with the remainder on standard monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<F> {
    pub remainder: Poly<F>,
    pub a: Poly<F>,
    pub b: Poly<F>,
}

/// Reduced Gröbner basis of the Jacobian ideal of `f`. Errors on constant `f`.
pub fn jacobian_groebner<F: Scalar>(f: &Poly<F>) -> Result<JacobianIdeal<F>> {
    if f.is_constant() {
        return Err(Error::validation("constant polynomial has no Jacobian ideal"));
    }
    let (fx, fy) = (f.dx(), f.dy());
    let groebner = GroebnerBasis::new(vec![fx.clone(), fy.clone()]);
    Ok(JacobianIdeal { fx, fy, groebner })
}

impl<F: Scalar> JacobianIdeal<F> {
    pub fn basis(&self) -> &[Poly<F>] {
        self.groebner.basis()
    }

    /// `(a, b)` with `basis()[i] = a f_x + b f_y`.
    pub fn cofactor(&self, i: usize) -> (&Poly<F>, &Poly<F>) {
        let c = &self.groebner.cofactors()[i];
        (&c[0], &c[1])
    }

    pub fn groebner(&self) -> &GroebnerBasis<F> {
        &self.groebner
    }

    pub fn normal_form(&self, g: &Poly<F>) -> NormalForm<F> {
        let Reduction {
            remainder,
            mut cofactors,
        } = self.groebner.reduce(g);
        let b = cofactors.pop().unwrap();
        let a = cofactors.pop().unwrap();
        NormalForm { remainder, a, b }
    }

    pub fn standard_monomials(&self) -> Result<Vec<Monomial>> {
        self.groebner.standard_monomials()
    }
}

/// `V` with its monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MilnorAlgebra<F> {
    pub f: Poly<F>,
    pub ideal: JacobianIdeal<F>,
    pub basis: Vec<Monomial>,
    pub mu: usize,
    index: HashMap<Monomial, usize>,
}

pub fn milnor_algebra<F: Scalar>(f: &Poly<F>) -> Result<MilnorAlgebra<F>> {
    let ideal = jacobian_groebner(f)?;
    let basis = ideal.standard_monomials()?;
    let index = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    Ok(MilnorAlgebra {
        f: f.clone(),
        ideal,
        mu: basis.len(),
        basis,
        index,
    })
}

impl<F: Scalar> MilnorAlgebra<F> {
    /// Coordinates of the class of `g` in the standard-monomial basis.
    pub fn coordinates(&self, g: &Poly<F>) -> Vec<F> {
        let r = self.ideal.normal_form(g).remainder;
        let mut v = vec![F::zero(); self.mu];
        for (m, c) in r.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    pub fn from_coordinates(&self, v: &[F]) -> Poly<F> {
        Poly::from_terms(v.iter().cloned().zip(self.basis.iter().copied()))
    }

    /// Matrix of `[g] -> [f g]`; column `j` is the image of `basis[j]`.
    pub fn multiplication_matrix(&self) -> Matrix<F> {
        let mut a = Matrix::zeros(self.mu, self.mu);
        for (j, m) in self.basis.iter().enumerate() {
            let col = self.coordinates(&self.f.mul_term(&F::one(), *m));
            for (i, c) in col.into_iter().enumerate() {
                a[(i, j)] = c;
            }
        }
        a
    }

    pub fn spectral_data(&self) -> Result<SpectralData<F>> {
        multiplication_matrix(self)
    }
}

/// The operator `A` and its characteristic, minimal and square-free
/// polynomials. Roots of `min_poly` are the critical values of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData<F> {
    pub a_matrix: Matrix<F>,
    pub char_poly: UPoly<F>,
    pub min_poly: UPoly<F>,
    pub squarefree_part: UPoly<F>,
}

/// Build `A` and its spectral polynomials, checking `min_poly(A) = 0` and the
/// divisibility chain `squarefree | min_poly | char_poly`.
pub fn multiplication_matrix<F: Scalar>(ma: &MilnorAlgebra<F>) -> Result<SpectralData<F>> {
    let a = ma.multiplication_matrix();
    let char_poly = a.char_poly();
    let min_poly = a.min_poly();
    if !a.eval_poly(&min_poly).is_zero() {
        return Err(Error::invariant("minimal polynomial does not annihilate A"));
    }
    if char_poly.div_exact(&min_poly).is_none() {
        return Err(Error::invariant("minimal polynomial does not divide the characteristic polynomial"));
    }
    let squarefree_part = min_poly.squarefree_part();
    Ok(SpectralData {
        a_matrix: a,
        char_poly,
        min_poly,
        squarefree_part,
    })
}

/// Distinct critical values by sign.
pub fn critical_value_signs<F: Scalar>(sd: &SpectralData<F>) -> SignCounts {
    sturm_sign_counts(&sd.squarefree_part)
}

/// Serializable summary of a Milnor algebra and its spectrum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MilnorReport {
    pub mu: usize,
    pub basis: Vec<String>,
    pub char_poly: String,
    pub min_poly: String,
    pub signs: SignCounts,
}

impl MilnorReport {
    pub fn new<F: Scalar>(ma: &MilnorAlgebra<F>, sd: &SpectralData<F>) -> Self {
        MilnorReport {
            mu: ma.mu,
            basis: ma.basis.iter().map(ToString::to_string).collect(),
            char_poly: sd.char_poly.to_string(),
            min_poly: sd.min_poly.to_string(),
            signs: critical_value_signs(sd),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    type P = Poly<Rational>;
    type U = UPoly<Rational>;

    #[test]
    fn morse_quadratic() {
        let f = P::from_ints(&[(1, 2, 0), (1, 0, 2)]);
        let ideal = jacobian_groebner(&f).unwrap();
        assert_eq!(ideal.basis(), &[P::y(), P::x()]);
        assert_eq!(ideal.cofactor(0), (&P::zero(), &P::constant(q(1, 2))));
        assert_eq!(ideal.cofactor(1), (&P::constant(q(1, 2)), &P::zero()));
        let nf = ideal.normal_form(&P::one());
        assert_eq!(nf.remainder, P::one());
        assert!(nf.a.is_zero() && nf.b.is_zero());
        let ma = milnor_algebra(&f).unwrap();
        let sd = ma.spectral_data().unwrap();
        assert_eq!(ma.mu, 1);
        assert!(sd.a_matrix.is_zero());
        assert_eq!(sd.min_poly, U::t());
    }

    #[test]
    fn circle_times_line_spectrum() {
        let f = P::from_ints(&[(1, 3, 0), (1, 1, 2), (-1, 1, 0)]);
        let ma = milnor_algebra(&f).unwrap();
        let sd = ma.spectral_data().unwrap();
        assert_eq!(ma.mu, 4);
        // x^2 is a leading term in grevlex, but {1, x, y, x^2} is still a basis of V.
        let alt = [(0, 0), (1, 0), (0, 1), (2, 0)]
            .map(|(i, j)| ma.coordinates(&P::term(q(1, 1), Monomial::new(i, j))));
        assert_eq!(Matrix::from_rows(alt.to_vec()).rank(), 4);
        let quad = U::new(vec![q(-4, 27), q(0, 1), q(1, 1)]);
        assert_eq!(sd.char_poly, &(&U::t() * &U::t()) * &quad);
        assert_eq!(sd.min_poly, &U::t() * &quad);
        let s = critical_value_signs(&sd);
        assert_eq!((s.negative, s.zero, s.positive), (1, 1, 1));
    }

    #[test]
    fn triangle_spectrum() {
        // xy(x+y-1) = x^2 y + x y^2 - x y
        let f = P::from_ints(&[(1, 2, 1), (1, 1, 2), (-1, 1, 1)]);
        let ma = milnor_algebra(&f).unwrap();
        let sd = ma.spectral_data().unwrap();
        assert_eq!(ma.mu, 4);
        assert_eq!(sd.min_poly, U::new(vec![q(0, 1), q(1, 27), q(1, 1)]));
        let s = critical_value_signs(&sd);
        assert_eq!((s.negative, s.zero, s.positive), (1, 1, 0));
    }

    #[test]
    fn non_isolated_is_rejected() {
        let f = P::from_ints(&[(1, 2, 2)]);
        let err = milnor_algebra(&f).unwrap_err();
        assert!(err.to_string().contains("non-isolated singularities"));
    }
}
