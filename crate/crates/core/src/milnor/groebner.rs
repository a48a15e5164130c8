//! Buchberger's algorithm with cofactor tracking, grevlex `x > y`.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::exact_algebra::{Monomial, Poly};
use crate::scalar::Scalar;

/// A reduced Gröbner basis together with, for each element, its expression
/// as a combination of the original generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<F> {
    generators: Vec<Poly<F>>,
    basis: Vec<Poly<F>>,
    cofactors: Vec<Vec<Poly<F>>>,
}

/// Result of a full reduction: `g = remainder + sum cofactors[i] * generators[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<F> {
    pub remainder: Poly<F>,
    pub cofactors: Vec<Poly<F>>,
}

/// Reduce `p` fully against `basis`, trying divisors in order. Returns the
/// remainder and the quotient attached to each basis element.
fn reduce<F: Scalar>(p: &Poly<F>, basis: &[Poly<F>]) -> (Poly<F>, Vec<Poly<F>>) {
    let leads: Vec<(Monomial, F)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term().expect("basis elements are nonzero");
            (m, c.clone())
        })
        .collect();
    let mut quotients = vec![Poly::zero(); basis.len()];
    let mut work = p.clone();
    let mut rem = Poly::zero();
    while let Some((m, c)) = work.leading_term() {
        let c = c.clone();
        match leads.iter().position(|(lm, _)| lm.divides(m)) {
            Some(k) => {
                let qm = leads[k].0.quotient_of(m);
                let qc = c / leads[k].1.clone();
                work.add_scaled(&(-qc.clone()), qm, &basis[k]);
                quotients[k].add_term(qc, qm);
            }
            None => {
                work.add_term(-c.clone(), m);
                rem.add_term(c, m);
            }
        }
    }
    (rem, quotients)
}

fn combine<F: Scalar>(quotients: &[Poly<F>], cofactors: &[Vec<Poly<F>>], n: usize) -> Vec<Poly<F>> {
    let mut out = vec![Poly::zero(); n];
    for (q, cof) in quotients.iter().zip(cofactors) {
        if q.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(cof) {
            if !c.is_zero() {
                *o += &(q * c);
            }
        }
    }
    out
}

impl<F: Scalar> GroebnerBasis<F> {
    /// Reduced, monic Gröbner basis of the ideal generated by `generators`,
    /// sorted by ascending leading monomial.
    pub fn new(generators: Vec<Poly<F>>) -> Self {
        let n = generators.len();
        let mut basis: Vec<Poly<F>> = Vec::new();
        let mut cofactors: Vec<Vec<Poly<F>>> = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            let Some(lc) = g.leading_coeff() else {
                continue;
            };
            let inv = F::one() / lc.clone();
            let mut cof = vec![Poly::zero(); n];
            cof[i] = Poly::constant(inv.clone());
            basis.push(g.scale(&inv));
            cofactors.push(cof);
        }

        let lm = |p: &Poly<F>| p.leading_monomial().unwrap();
        let mut queue: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        for j in 0..basis.len() {
            for i in 0..j {
                queue.insert((lm(&basis[i]).lcm(lm(&basis[j])), i, j));
                pending.insert((i, j));
            }
        }

        while let Some((lcm, i, j)) = queue.pop_first() {
            pending.remove(&(i, j));
            let (mi, mj) = (lm(&basis[i]), lm(&basis[j]));
            if mi.is_coprime(mj) {
                continue;
            }
            let key = |a: usize, b: usize| (a.min(b), a.max(b));
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && lm(&basis[k]).divides(lcm)
                    && !pending.contains(&key(i, k))
                    && !pending.contains(&key(j, k))
            });
            if chain {
                continue;
            }
            let (ui, uj) = (mi.quotient_of(lcm), mj.quotient_of(lcm));
            let mut s = basis[i].mul_term(&F::one(), ui);
            s.add_scaled(&(-F::one()), uj, &basis[j]);
            let mut s_cof: Vec<Poly<F>> = cofactors[i]
                .iter()
                .map(|c| c.mul_term(&F::one(), ui))
                .collect();
            for (sc, c) in s_cof.iter_mut().zip(&cofactors[j]) {
                sc.add_scaled(&(-F::one()), uj, c);
            }
            let (rem, quotients) = reduce(&s, &basis);
            if rem.is_zero() {
                continue;
            }
            let sub = combine(&quotients, &cofactors, n);
            let inv = F::one() / rem.leading_coeff().unwrap().clone();
            let cof: Vec<Poly<F>> = s_cof
                .iter()
                .zip(&sub)
                .map(|(a, b)| (a - b).scale(&inv))
                .collect();
            let new = basis.len();
            let m_new = lm(&rem);
            basis.push(rem.scale(&inv));
            cofactors.push(cof);
            for k in 0..new {
                queue.insert((lm(&basis[k]).lcm(m_new), k, new));
                pending.insert((k, new));
            }
        }

        // Minimize: drop elements whose leading monomial is a multiple of
        // another kept element's.
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..basis.len() {
            let mi = lm(&basis[i]);
            let redundant = (0..basis.len()).any(|j| {
                j != i && {
                    let mj = lm(&basis[j]);
                    mj.divides(mi) && (mj != mi || j < i)
                }
            });
            if !redundant {
                keep.push(i);
            }
        }
        keep.sort_by_key(|&i| lm(&basis[i]));
        let mut red_basis: Vec<Poly<F>> = keep.iter().map(|&i| basis[i].clone()).collect();
        let mut red_cof: Vec<Vec<Poly<F>>> = keep.iter().map(|&i| cofactors[i].clone()).collect();

        // Inter-reduce tails.
        for i in 0..red_basis.len() {
            let others: Vec<Poly<F>> = red_basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let other_cof: Vec<Vec<Poly<F>>> = red_cof
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, c)| c.clone())
                .collect();
            let (rem, quotients) = reduce(&red_basis[i], &others);
            if quotients.iter().all(Poly::is_zero) {
                continue;
            }
            let sub = combine(&quotients, &other_cof, n);
            red_cof[i] = red_cof[i].iter().zip(&sub).map(|(a, b)| a - b).collect();
            red_basis[i] = rem;
        }

        GroebnerBasis {
            generators,
            basis: red_basis,
            cofactors: red_cof,
        }
    }

    pub fn generators(&self) -> &[Poly<F>] {
        &self.generators
    }

    pub fn basis(&self) -> &[Poly<F>] {
        &self.basis
    }

    /// `cofactors()[i][k]` multiplies `generators()[k]` in the expansion of
    /// `basis()[i]`.
    pub fn cofactors(&self) -> &[Vec<Poly<F>>] {
        &self.cofactors
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .map(|g| g.leading_monomial().unwrap())
            .collect()
    }

    /// Full reduction of `g` with cofactors against the original generators.
    pub fn reduce(&self, g: &Poly<F>) -> Reduction<F> {
        let (remainder, quotients) = reduce(g, &self.basis);
        Reduction {
            remainder,
            cofactors: combine(&quotients, &self.cofactors, self.generators.len()),
        }
    }

    pub fn contains(&self, g: &Poly<F>) -> bool {
        reduce(g, &self.basis).0.is_zero()
    }

    /// Exponents `(a, b)` of the pure powers `x^a`, `y^b` among the leading
    /// monomials, when both exist (the ideal is then zero-dimensional).
    pub fn pure_power_bounds(&self) -> Option<(u32, u32)> {
        let lms = self.leading_monomials();
        let a = lms.iter().filter(|m| m.y == 0).map(|m| m.x).min()?;
        let b = lms.iter().filter(|m| m.x == 0).map(|m| m.y).min()?;
        Some((a, b))
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.pure_power_bounds().is_some()
    }

    /// Monomials outside the leading-term ideal, ascending.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>> {
        let (a, b) = self.pure_power_bounds().ok_or_else(|| {
            Error::validation("non-isolated singularities: the quotient algebra is infinite-dimensional")
        })?;
        let lms = self.leading_monomials();
        let mut out: Vec<Monomial> = (0..a)
            .flat_map(|i| (0..b).map(move |j| Monomial::new(i, j)))
            .filter(|m| !lms.iter().any(|l| l.divides(*m)))
            .collect();
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Poly<Rational>;

    fn check_cofactors(gb: &GroebnerBasis<Rational>) {
        for (g, cof) in gb.basis().iter().zip(gb.cofactors()) {
            let mut sum = P::zero();
            for (c, gen) in cof.iter().zip(gb.generators()) {
                sum += &(c * gen);
            }
            assert_eq!(&sum, g);
        }
    }

    #[test]
    fn circle_times_line() {
        // f = x^3 + x y^2 - x
        let f = P::from_ints(&[(1, 3, 0), (1, 1, 2), (-1, 1, 0)]);
        let gb = GroebnerBasis::new(vec![f.dx(), f.dy()]);
        check_cofactors(&gb);
        assert_eq!(
            gb.standard_monomials().unwrap(),
            vec![
                Monomial::new(0, 0),
                Monomial::new(0, 1),
                Monomial::new(1, 0),
                Monomial::new(0, 2)
            ]
        );
        for g in gb.basis() {
            assert_eq!(g.leading_coeff(), Some(&Rational::from_integer(1.into())));
        }
    }

    #[test]
    fn reduction_reexpands() {
        let f = P::from_ints(&[(1, 3, 0), (1, 1, 2), (-1, 1, 0)]);
        let gb = GroebnerBasis::new(vec![f.dx(), f.dy()]);
        let g = P::from_ints(&[(1, 3, 0)]);
        let r = gb.reduce(&g);
        let back = &(&r.remainder + &(&r.cofactors[0] * &f.dx())) + &(&r.cofactors[1] * &f.dy());
        assert_eq!(back, g);
    }

    #[test]
    fn non_isolated() {
        // f = x^2 y^2: the axes are critical
        let f = P::from_ints(&[(1, 2, 2)]);
        let gb = GroebnerBasis::new(vec![f.dx(), f.dy()]);
        assert!(!gb.is_zero_dimensional());
        assert!(gb.standard_monomials().is_err());
    }
}
