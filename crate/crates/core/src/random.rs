//! Seeded generators for property tests and `selftest`. The same seed gives
//! the same objects on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_algebra::Monomial;
use crate::melnikov::LogDecomposition;
use crate::{ROneForm, RPoly, Rational};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n / m` with `|n| <= bound`, `1 <= m <= 3`.
pub fn rational(rng: &mut Rng64, bound: i64) -> Rational {
    let n = rng.gen_range(-bound..=bound);
    let m = rng.gen_range(1..=3i64);
    Rational::new(n.into(), m.into())
}

pub fn nonzero_rational(rng: &mut Rng64, bound: i64) -> Rational {
    loop {
        let r = rational(rng, bound);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

/// Dense random polynomial of degree at most `deg`.
pub fn poly(rng: &mut Rng64, deg: u32) -> RPoly {
    RPoly::from_terms(
        Monomial::up_to_degree(deg)
            .into_iter()
            .map(|m| (rational(rng, 5), m))
            .collect::<Vec<_>>(),
    )
}

/// Random polynomial of degree exactly `deg`.
pub fn poly_of_degree(rng: &mut Rng64, deg: u32) -> RPoly {
    let mut p = poly(rng, deg);
    let top = Monomial::new(rng.gen_range(0..=deg), 0);
    let top = Monomial::new(top.x, deg - top.x);
    p.add_term(nonzero_rational(rng, 5) - p.coeff(top), top);
    p
}

pub fn form(rng: &mut Rng64, deg: u32) -> ROneForm {
    ROneForm::new(poly(rng, deg), poly(rng, deg))
}

/// Normalized `(lambda, P)` for `d + 1` lines: `sum lambda = 0`, `deg P <= d + 1`,
/// `P(0, 0) = 0`.
pub fn log_decomposition(rng: &mut Rng64, d: usize) -> LogDecomposition {
    let mut lambdas: Vec<Rational> = (0..=d).map(|_| rational(rng, 5)).collect();
    let mean = lambdas.iter().sum::<Rational>() / Rational::from_integer((d as i64 + 1).into());
    for l in &mut lambdas {
        *l -= &mean;
    }
    let mut p = poly(rng, d as u32 + 1);
    p.add_term(-p.coeff(Monomial::ONE), Monomial::ONE);
    LogDecomposition { lambdas, p }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = form(&mut rng(7), 3);
        let b = form(&mut rng(7), 3);
        assert_eq!(a, b);
        assert_ne!(a, form(&mut rng(8), 3));
        assert_eq!(poly_of_degree(&mut rng(1), 4).degree().unwrap(), 4);
        assert!(log_decomposition(&mut rng(3), 3).is_normalized());
    }
}
