//! Exact dense and sparse linear algebra over a [`Scalar`] field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_traits::Zero;

use super::upoly::UPoly;
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut sys = SparseSystem::new(self.cols);
        for i in 0..self.rows {
            sys.push_dense(self.row(i), F::zero());
        }
        sys.rank()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        match solve_linear(self, &vec![F::zero(); self.rows]) {
            LinearSolution::Solved { nullspace, .. } => nullspace,
            LinearSolution::Infeasible => unreachable!("homogeneous systems are feasible"),
        }
    }

    /// Determinant by Gaussian elimination. Panics if not square.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let factor = m[(r, c)].clone() / pivot.clone();
                for j in c..n {
                    let v = m[(r, j)].clone() - factor.clone() * m[(c, j)].clone();
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `det(t I - A)` by reduction to Hessenberg form.
    pub fn char_poly(&self) -> UPoly<F> {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            h.swap_rows(i, m);
            h.swap_cols(i, m);
            let pivot = h[(m, m - 1)].clone();
            for i in m + 1..n {
                if h[(i, m - 1)].is_zero() {
                    continue;
                }
                let u = h[(i, m - 1)].clone() / pivot.clone();
                for j in 0..n {
                    let v = h[(i, j)].clone() - u.clone() * h[(m, j)].clone();
                    h[(i, j)] = v;
                }
                for j in 0..n {
                    let v = h[(j, m)].clone() + u.clone() * h[(j, i)].clone();
                    h[(j, m)] = v;
                }
            }
        }
        // p[k] is the characteristic polynomial of the leading k x k block.
        let mut p: Vec<UPoly<F>> = vec![UPoly::one()];
        for m in 0..n {
            let mut next = &UPoly::linear(h[(m, m)].clone()) * &p[m];
            let mut prod = F::one();
            for i in (0..m).rev() {
                prod = prod * h[(i + 1, i)].clone();
                if prod.is_zero() {
                    break;
                }
                let c = prod.clone() * h[(i, m)].clone();
                if !c.is_zero() {
                    next = &next - &p[i].scale(&c);
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &UPoly<F>) -> Self {
        let n = self.rows;
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::zeros(n, n), |acc, c| {
                (&acc * self).add(&Self::identity(n).scale(c))
            })
    }

    /// Monic polynomial `q` of least degree with `q(A) v = 0`.
    pub fn vector_annihilator(&self, v: &[F]) -> UPoly<F> {
        let mut echelon: Vec<(usize, Vec<F>, UPoly<F>)> = Vec::new();
        let mut current = v.to_vec();
        let mut power = UPoly::one();
        loop {
            let mut w = current.clone();
            let mut poly = power.clone();
            for (pivot, row, rpoly) in &echelon {
                if w[*pivot].is_zero() {
                    continue;
                }
                let c = w[*pivot].clone() / row[*pivot].clone();
                for (wi, ri) in w.iter_mut().zip(row) {
                    if !ri.is_zero() {
                        *wi = wi.clone() - c.clone() * ri.clone();
                    }
                }
                poly = &poly - &rpoly.scale(&c);
            }
            match w.iter().position(|x| !x.is_zero()) {
                None => return poly.monic(),
                Some(pivot) => echelon.push((pivot, w, poly)),
            }
            current = self.mul_vec(&current);
            power = &power * &UPoly::t();
        }
    }

    /// Minimal polynomial: least common multiple of the annihilators of the
    /// standard basis vectors.
    pub fn min_poly(&self) -> UPoly<F> {
        let n = self.rows;
        let mut acc = UPoly::one();
        for i in 0..n {
            let mut e = vec![F::zero(); n];
            e[i] = F::one();
            let q = self.vector_annihilator(&e);
            acc = acc.lcm(&q);
        }
        acc
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;

    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Scalar> Mul<&Matrix<F>> for &Matrix<F> {
    type Output = Matrix<F>;

    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows);
        let mut out: Matrix<F> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<F: Scalar> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Solution set of `A x = b`.
#[derive(Clone, PartialEq, Debug)]
pub enum LinearSolution<F> {
    Solved {
        particular: Vec<F>,
        nullspace: Vec<Vec<F>>,
    },
    Infeasible,
}

impl<F> LinearSolution<F> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LinearSolution::Solved { .. })
    }

    pub fn particular(&self) -> Option<&[F]> {
        match self {
            LinearSolution::Solved { particular, .. } => Some(particular),
            LinearSolution::Infeasible => None,
        }
    }
}

/// Solve `a x = rhs` exactly.
///
/// Forward elimination is fraction-free (Bareiss): every update is
/// `(p * a_ij - a_ic * a_rj) / p_prev`, which stays integral on integral
/// input. The pivot is the first nonzero entry in the leftmost remaining
/// column, lowest row index first. Free variables are zero in the particular
/// solution; the nullspace has one vector per free column, in column order.
pub fn solve_linear<F: Scalar>(a: &Matrix<F>, rhs: &[F]) -> LinearSolution<F> {
    assert_eq!(a.rows(), rhs.len(), "right-hand side length mismatch");
    let (n, m) = (a.rows(), a.cols());
    let mut aug = Matrix::zeros(n, m + 1);
    for i in 0..n {
        for j in 0..m {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, m)] = rhs[i].clone();
    }

    let mut prev = F::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..m {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !aug[(i, c)].is_zero()) else {
            continue;
        };
        aug.swap_rows(p, r);
        let pv = aug[(r, c)].clone();
        for i in r + 1..n {
            let lead = aug[(i, c)].clone();
            for j in c + 1..=m {
                let v = (pv.clone() * aug[(i, j)].clone() - lead.clone() * aug[(r, j)].clone())
                    / prev.clone();
                aug[(i, j)] = v;
            }
            aug[(i, c)] = F::zero();
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }

    if (r..n).any(|i| !aug[(i, m)].is_zero()) {
        return LinearSolution::Infeasible;
    }

    let back_substitute = |x: &mut Vec<F>, with_rhs: bool| {
        for (k, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = if with_rhs { aug[(k, m)].clone() } else { F::zero() };
            for j in pc + 1..m {
                if !aug[(k, j)].is_zero() && !x[j].is_zero() {
                    acc = acc - aug[(k, j)].clone() * x[j].clone();
                }
            }
            x[pc] = acc / aug[(k, pc)].clone();
        }
    };

    let mut particular = vec![F::zero(); m];
    back_substitute(&mut particular, true);

    let mut is_pivot = vec![false; m];
    for &pc in &pivots {
        is_pivot[pc] = true;
    }
    let nullspace = (0..m)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![F::zero(); m];
            x[free] = F::one();
            back_substitute(&mut x, false);
            x
        })
        .collect();

    LinearSolution::Solved {
        particular,
        nullspace,
    }
}

/// Row-sparse incremental elimination for large, sparse systems.
///
/// Rows are reduced against the current pivot rows as they are pushed, so
/// the structure stays in echelon form throughout.
#[derive(Clone, Debug)]
pub struct SparseSystem<F> {
    cols: usize,
    // pivot column -> (normalized row with leading 1 at the pivot, rhs)
    pivots: BTreeMap<usize, (Vec<(usize, F)>, F)>,
    infeasible: bool,
}

impl<F: Scalar> SparseSystem<F> {
    pub fn new(cols: usize) -> Self {
        SparseSystem {
            cols,
            pivots: BTreeMap::new(),
            infeasible: false,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push_dense(&mut self, row: &[F], rhs: F) {
        let sparse = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        self.push(sparse, rhs);
    }

    /// Add the equation `sum row[j].1 * x[row[j].0] = rhs`. Column indices
    /// may repeat; repeated entries are summed.
    pub fn push(&mut self, row: Vec<(usize, F)>, rhs: F) {
        let mut work: BTreeMap<usize, F> = BTreeMap::new();
        for (j, v) in row {
            assert!(j < self.cols, "column index out of range");
            let e = work.entry(j).or_insert_with(F::zero);
            *e = e.clone() + v;
        }
        work.retain(|_, v| !v.is_zero());
        let mut rhs = rhs;
        loop {
            let Some((&lead, _)) = work.iter().find(|(j, _)| self.pivots.contains_key(j)) else {
                break;
            };
            let c = work.remove(&lead).unwrap();
            let (prow, prhs) = &self.pivots[&lead];
            for (j, v) in prow.iter().skip(1) {
                let e = work.entry(*j).or_insert_with(F::zero);
                *e = e.clone() - c.clone() * v.clone();
                if e.is_zero() {
                    work.remove(j);
                }
            }
            rhs = rhs - c * prhs.clone();
        }
        match work.iter().next() {
            None => {
                if !rhs.is_zero() {
                    self.infeasible = true;
                }
            }
            Some((&lead, lc)) => {
                let inv = F::one() / lc.clone();
                let row: Vec<(usize, F)> =
                    work.into_iter().map(|(j, v)| (j, v * inv.clone())).collect();
                self.pivots.insert(lead, (row, rhs * inv));
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_feasible(&self) -> bool {
        !self.infeasible
    }

    fn back_substitute(&self, x: &mut [F], with_rhs: bool) {
        for (&pc, (row, rhs)) in self.pivots.iter().rev() {
            let mut acc = if with_rhs { rhs.clone() } else { F::zero() };
            for (j, v) in row.iter().skip(1) {
                if !x[*j].is_zero() {
                    acc = acc - v.clone() * x[*j].clone();
                }
            }
            x[pc] = acc;
        }
    }

    /// Particular solution with free variables set to zero.
    pub fn particular(&self) -> Option<Vec<F>> {
        if self.infeasible {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        self.back_substitute(&mut x, true);
        Some(x)
    }

    pub fn nullspace(&self) -> Vec<Vec<F>> {
        (0..self.cols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut x = vec![F::zero(); self.cols];
                x[free] = F::one();
                self.back_substitute(&mut x, false);
                x
            })
            .collect()
    }

    pub fn solution(&self) -> LinearSolution<F> {
        match self.particular() {
            Some(particular) => LinearSolution::Solved {
                particular,
                nullspace: self.nullspace(),
            },
            None => LinearSolution::Infeasible,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    type M = Matrix<Rational>;

    #[test]
    fn identity_system() {
        let a = M::identity(2);
        let sol = solve_linear(&a, &[q(2, 1), q(3, 1)]);
        assert_eq!(
            sol,
            LinearSolution::Solved {
                particular: vec![q(2, 1), q(3, 1)],
                nullspace: vec![]
            }
        );
    }

    #[test]
    fn underdetermined_system() {
        let a = M::from_ints(&[&[1, 1]]);
        let sol = solve_linear(&a, &[q(0, 1)]);
        assert_eq!(
            sol,
            LinearSolution::Solved {
                particular: vec![q(0, 1), q(0, 1)],
                nullspace: vec![vec![q(-1, 1), q(1, 1)]]
            }
        );
    }

    #[test]
    fn inconsistent_system() {
        let a = M::from_ints(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve_linear(&a, &[q(1, 1), q(3, 1)]), LinearSolution::Infeasible);
        let mut s = SparseSystem::new(2);
        s.push_dense(&[q(1, 1), q(1, 1)], q(1, 1));
        s.push_dense(&[q(2, 1), q(2, 1)], q(3, 1));
        assert!(!s.is_feasible());
    }

    #[test]
    fn sparse_matches_dense_on_rank_deficient() {
        let a = M::from_ints(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let b = vec![q(1, 1), q(2, 1), q(5, 1)];
        let dense = solve_linear(&a, &b);
        let mut s = SparseSystem::new(4);
        for i in 0..3 {
            s.push_dense(a.row(i), b[i].clone());
        }
        assert_eq!(s.rank(), 2);
        assert_eq!(a.rank(), 2);
        let x = s.particular().unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert_eq!(a.mul_vec(dense.particular().unwrap()), b);
        for v in s.nullspace() {
            assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn det_and_char_poly() {
        let a = M::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), q(18, 1));
        let cp = a.char_poly();
        // t^3 - 9 t^2 + 24 t - 18
        assert_eq!(cp, UPoly::from_ints(&[-18, 24, -9, 1]));
        assert!(a.eval_poly(&cp).is_zero());
        assert_eq!(a.min_poly(), cp);
    }

    #[test]
    fn min_poly_of_non_derogatory_and_derogatory() {
        let a = M::from_ints(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 5]]);
        assert_eq!(a.char_poly(), UPoly::from_ints(&[0, 0, -5, 1]));
        assert_eq!(a.min_poly(), UPoly::from_ints(&[0, -5, 1]));
        let v = vec![q(1, 1), q(0, 1), q(0, 1)];
        assert_eq!(a.vector_annihilator(&v), UPoly::t());
    }

    #[test]
    fn generic_over_f64() {
        let a = Matrix::<f64>::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.det(), -2.0);
        let sol = solve_linear(&a, &[5.0, 6.0]);
        let x = sol.particular().unwrap();
        assert!((x[0] + 4.0).abs() < 1e-12 && (x[1] - 4.5).abs() < 1e-12);
    }
}
