//! Real-root sign counts by Sturm sequences.

use serde::Serialize;

use super::upoly::UPoly;
use crate::scalar::Scalar;

/// Distinct real roots by sign, plus the multiplicity of `0` as a root.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SignCounts {
    #[serde(rename = "neg")]
    pub negative: usize,
    pub zero: usize,
    #[serde(rename = "pos")]
    pub positive: usize,
    #[serde(skip)]
    pub zero_multiplicity: u32,
}

fn sturm_sequence<F: Scalar>(p: &UPoly<F>) -> Vec<UPoly<F>> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        seq.push(-&r);
    }
    seq.pop();
    seq
}

fn sign_changes<F: Scalar>(signs: impl Iterator<Item = F>) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for s in signs {
        if s.is_zero() {
            continue;
        }
        let pos = s.is_positive();
        if last.is_some_and(|l| l != pos) {
            changes += 1;
        }
        last = Some(pos);
    }
    changes
}

/// Count distinct real roots of `p` in `(-inf, 0)`, `{0}` and `(0, inf)`.
///
/// Works on the square-free part, so multiplicities are stripped; the
/// multiplicity of the root `0` in `p` itself is returned alongside.
/// Panics on the zero polynomial.
pub fn sturm_sign_counts<F: Scalar>(p: &UPoly<F>) -> SignCounts {
    assert!(!p.is_zero(), "sign counts of the zero polynomial");
    let zero_multiplicity = p.root_multiplicity(&F::zero());
    let mut s = p.squarefree_part();
    let zero = usize::from(zero_multiplicity > 0);
    if zero == 1 {
        s = s.div_exact(&UPoly::t()).expect("t divides");
    }
    let seq = sturm_sequence(&s);
    let at_neg_inf = sign_changes(seq.iter().map(|q| {
        let lc = q.leading_coeff().unwrap().clone();
        if q.degree().unwrap() % 2 == 1 {
            -lc
        } else {
            lc
        }
    }));
    let at_zero = sign_changes(seq.iter().map(|q| q.coeff(0)));
    let at_pos_inf = sign_changes(seq.iter().map(|q| q.leading_coeff().unwrap().clone()));
    SignCounts {
        negative: at_neg_inf - at_zero,
        zero,
        positive: at_zero - at_pos_inf,
        zero_multiplicity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    type U = UPoly<Rational>;

    fn counts(p: &U) -> (usize, usize, usize) {
        let s = sturm_sign_counts(p);
        (s.negative, s.zero, s.positive)
    }

    #[test]
    fn example_spectra() {
        let p = U::new(vec![q(0, 1), q(0, 1), q(-4, 27), q(0, 1), q(1, 1)]);
        assert_eq!(counts(&p), (1, 1, 1));
        assert_eq!(sturm_sign_counts(&p).zero_multiplicity, 2);
        let p = U::new(vec![q(0, 1), q(1, 27), q(1, 1)]);
        assert_eq!(counts(&p), (1, 1, 0));
        assert_eq!(counts(&U::from_ints(&[1, 0, 1])), (0, 0, 0));
    }

    #[test]
    fn product_of_known_roots() {
        // (t+3)^2 (t+1) (t-2) (t-5) (t^2+1)
        let roots = [-3, -3, -1, 2, 5];
        let p = roots
            .iter()
            .fold(U::from_ints(&[1, 0, 1]), |acc, &r| &acc * &U::linear(q(r, 1)));
        assert_eq!(counts(&p), (2, 0, 2));
    }
}
