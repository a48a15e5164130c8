//! Randomized invariants of the exact layer, with a naive Gaussian
//! elimination as the oracle for the linear solvers.

use num_traits::Zero;
use pencillab::exact_algebra::{solve_linear, wedge, ExteriorDerivative, LinearSolution, Matrix, SparseSystem};
use pencillab::petrov::relative_exact_decompose;
use pencillab::{q, ROneForm, RPoly, Rational};
use proptest::prelude::*;

fn poly_strategy(max_deg: u32) -> impl Strategy<Value = RPoly> {
    prop::collection::vec((-6i64..=6, 0..=max_deg, 0..=max_deg), 0..8).prop_map(move |terms| {
        let terms: Vec<(i64, u32, u32)> = terms.into_iter().filter(|&(_, i, j)| i + j <= max_deg).collect();
        RPoly::from_ints(&terms)
    })
}

fn form_strategy(max_deg: u32) -> impl Strategy<Value = ROneForm> {
    (poly_strategy(max_deg), poly_strategy(max_deg)).prop_map(|(a, b)| ROneForm::new(a, b))
}

/// Reduced row echelon form by the textbook algorithm; returns the rank of
/// `a` and of `[a | b]`, and a solution when they agree.
fn oracle_solve(a: &[Vec<Rational>], b: &[Rational]) -> (usize, usize, Option<Vec<Rational>>) {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| r.iter().cloned().chain(std::iter::once(v.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..=m {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..=m {
                    let t = &rows[r][j] * &factor;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == n {
            break;
        }
    }
    let rank_aug = pivots.len();
    let rank_a = pivots.iter().filter(|&&c| c < m).count();
    if rank_a != rank_aug {
        return (rank_a, rank_aug, None);
    }
    let mut x = vec![Rational::zero(); m];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][m].clone();
    }
    (rank_a, rank_aug, Some(x))
}

fn system_strategy() -> impl Strategy<Value = (Vec<Vec<Rational>>, Vec<Rational>)> {
    (1usize..=20, 1usize..=20).prop_flat_map(|(n, m)| {
        let entry = prop_oneof![3 => Just(0i64), 5 => -4i64..=4];
        (
            prop::collection::vec(prop::collection::vec(entry, m), n),
            prop::collection::vec(-4i64..=4, n),
            any::<bool>(),
        )
            .prop_map(|(a, b, consistent)| {
                let a: Vec<Vec<Rational>> = a.into_iter().map(|r| r.into_iter().map(|v| q(v, 1)).collect()).collect();
                let b: Vec<Rational> = if consistent {
                    // b = A * (1, 2, ..., m) keeps half the systems feasible.
                    a.iter()
                        .map(|r| r.iter().enumerate().map(|(j, v)| v * q(j as i64 + 1, 1)).sum())
                        .collect()
                } else {
                    b.into_iter().map(|v| q(v, 1)).collect()
                };
                (a, b)
            })
    })
}

fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|r| r.iter().zip(x).map(|(u, v)| u * v).sum()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn solvers_agree_with_oracle((a, b) in system_strategy()) {
        let (rank_a, rank_aug, oracle) = oracle_solve(&a, &b);
        let mat = Matrix::from_rows(a.clone());
        prop_assert_eq!(mat.rank(), rank_a);
        match solve_linear(&mat, &b) {
            LinearSolution::Solved { particular, nullspace } => {
                prop_assert!(oracle.is_some());
                prop_assert_eq!(mat_vec(&a, &particular), b.clone());
                prop_assert_eq!(nullspace.len(), mat.cols() - rank_a);
                for v in &nullspace {
                    prop_assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
                }
            }
            LinearSolution::Infeasible => prop_assert!(rank_a != rank_aug),
        }
        let mut sparse = SparseSystem::new(mat.cols());
        for (row, rhs) in a.iter().zip(&b) {
            sparse.push_dense(row, rhs.clone());
        }
        prop_assert_eq!(sparse.rank(), rank_a);
        prop_assert_eq!(sparse.is_feasible(), oracle.is_some());
        if let Some(x) = sparse.particular() {
            prop_assert_eq!(mat_vec(&a, &x), b);
        }
    }

    #[test]
    fn leibniz(p in poly_strategy(4), r in poly_strategy(4)) {
        let lhs = (&p * &r).d();
        let rhs = &r.d().mul_poly(&p) + &p.d().mul_poly(&r);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_is_zero(p in poly_strategy(5)) {
        prop_assert!(p.d().d().is_zero());
    }

    #[test]
    fn wedge_antisymmetric(u in form_strategy(3), v in form_strategy(3)) {
        let uv = wedge(&u, &v);
        let vu = wedge(&v, &u);
        prop_assert_eq!(uv.g.clone(), -&vu.g);
        prop_assert!(wedge(&u, &u).is_zero());
    }

    #[test]
    fn deg1_brackets_degree(w in form_strategy(4)) {
        prop_assume!(!w.is_zero());
        let deg = w.degree().unwrap();
        let deg1 = w.deg1().unwrap();
        prop_assert!(deg1 == deg || deg1 + 1 == deg);
        // The Euler form x dy - y dx of a homogeneous h lowers deg1 by one.
        let h = RPoly::from_ints(&[(1, 2, 0), (-3, 1, 1)]);
        let euler = ROneForm::new(-&(&h * &RPoly::y()), &h * &RPoly::x());
        prop_assert_eq!(euler.deg1().unwrap(), 2);
    }

    #[test]
    fn potential_round_trip(p in poly_strategy(5)) {
        let w = p.d();
        let back = w.potential().unwrap_or_else(RPoly::zero);
        prop_assert_eq!(back.d(), w);
        prop_assert_eq!(back.coeff(pencillab::exact_algebra::Monomial::ONE), Rational::zero());
    }

    #[test]
    fn relative_exact_round_trip(pp in poly_strategy(5), qq in poly_strategy(2)) {
        let f = RPoly::from_ints(&[(1, 2, 1), (1, 1, 2), (-1, 1, 1)]);
        let w = &pp.d() + &f.d().mul_poly(&qq);
        let wit = relative_exact_decompose(&w, &f);
        prop_assert!(wit.is_some());
        prop_assert_eq!(wit.unwrap().expand(&f), w);
    }
}

#[test]
fn oracle_self_check() {
    let a = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
    assert_eq!(oracle_solve(&a, &[q(1, 1), q(2, 1)]).2.map(|x| mat_vec(&a, &x)), Some(vec![q(1, 1), q(2, 1)]));
    assert!(oracle_solve(&a, &[q(1, 1), q(3, 1)]).2.is_none());
}
