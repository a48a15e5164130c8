//! Linear systems of the form `sum c_i column_i = target` over polynomials
//! and 1-forms, one equation per monomial.

use std::collections::BTreeMap;

use super::forms::OneForm;
use super::linalg::SparseSystem;
use super::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// Equation keys: `(component, monomial)`, component 0 for polynomials and
/// the `dx` part of forms, 1 for the `dy` part.
type Key = (u8, Monomial);

fn assemble<F: Scalar>(columns: Vec<Vec<(Key, F)>>, target: Vec<(Key, F)>) -> SparseSystem<F> {
    let ncols = columns.len();
    let mut rows: BTreeMap<Key, (Vec<(usize, F)>, F)> = BTreeMap::new();
    for (j, col) in columns.into_iter().enumerate() {
        for (k, c) in col {
            rows.entry(k).or_insert_with(|| (Vec::new(), F::zero())).0.push((j, c));
        }
    }
    for (k, c) in target {
        rows.entry(k).or_insert_with(|| (Vec::new(), F::zero())).1 = c;
    }
    let mut sys = SparseSystem::new(ncols);
    // Highest monomials first tends to keep the echelon rows short.
    for (_, (row, rhs)) in rows.into_iter().rev() {
        sys.push(row, rhs);
    }
    sys
}

fn poly_entries<F: Scalar>(p: &Poly<F>, comp: u8) -> impl Iterator<Item = (Key, F)> + '_ {
    p.terms().map(move |(m, c)| ((comp, *m), c.clone()))
}

fn form_entries<F: Scalar>(w: &OneForm<F>) -> Vec<(Key, F)> {
    poly_entries(&w.dx, 0).chain(poly_entries(&w.dy, 1)).collect()
}

/// System for `sum c_i columns[i] = target`, one unknown per column.
pub fn poly_system<F: Scalar>(columns: &[Poly<F>], target: &Poly<F>) -> SparseSystem<F> {
    assemble(
        columns.iter().map(|c| poly_entries(c, 0).collect()).collect(),
        poly_entries(target, 0).collect(),
    )
}

pub fn form_system<F: Scalar>(columns: &[OneForm<F>], target: &OneForm<F>) -> SparseSystem<F> {
    assemble(columns.iter().map(form_entries).collect(), form_entries(target))
}

/// Coefficients `c` with `sum c_i columns[i] = target`, free variables zero.
pub fn poly_combination<F: Scalar>(columns: &[Poly<F>], target: &Poly<F>) -> Option<Vec<F>> {
    poly_system(columns, target).particular()
}

pub fn form_combination<F: Scalar>(columns: &[OneForm<F>], target: &OneForm<F>) -> Option<Vec<F>> {
    form_system(columns, target).particular()
}

/// Dimension of the span of `columns`.
pub fn form_span_rank<F: Scalar>(columns: &[OneForm<F>]) -> usize {
    form_system(columns, &OneForm::zero()).rank()
}

pub fn poly_span_rank<F: Scalar>(columns: &[Poly<F>]) -> usize {
    poly_system(columns, &Poly::zero()).rank()
}

/// `sum c_i columns[i]`.
pub fn combine_polys<F: Scalar>(coeffs: &[F], columns: &[Poly<F>]) -> Poly<F> {
    let mut out = Poly::zero();
    for (c, p) in coeffs.iter().zip(columns) {
        out.add_scaled(c, Monomial::ONE, p);
    }
    out
}

pub fn combine_forms<F: Scalar>(coeffs: &[F], columns: &[OneForm<F>]) -> OneForm<F> {
    let mut out = OneForm::zero();
    for (c, w) in coeffs.iter().zip(columns) {
        out.dx.add_scaled(c, Monomial::ONE, &w.dx);
        out.dy.add_scaled(c, Monomial::ONE, &w.dy);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    type P = Poly<Rational>;

    #[test]
    fn recovers_combination() {
        let cols = vec![P::x(), P::y(), &P::x() * &P::y(), P::zero()];
        let target = P::from_ints(&[(3, 1, 0), (-2, 1, 1)]);
        let c = poly_combination(&cols, &target).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(combine_polys(&c, &cols), target);
        assert!(poly_combination(&cols, &P::one()).is_none());
        assert_eq!(poly_span_rank(&cols), 3);
    }

    #[test]
    fn forms() {
        let dx = OneForm::new(P::one(), P::zero());
        let ydy = OneForm::new(P::zero(), P::y());
        let target = OneForm::new(P::constant(q(2, 1)), P::y().scale(&q(-1, 3)));
        let c = form_combination(&[dx.clone(), ydy.clone()], &target).unwrap();
        assert_eq!(c, vec![q(2, 1), q(-1, 3)]);
        assert_eq!(form_span_rank(&[dx.clone(), dx]), 1);
    }
}
