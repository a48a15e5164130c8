//! Wire formats shared by every report: rationals as `"p/q"` strings,
//! polynomials as term lists in descending grevlex order.

use serde::{Deserialize, Serialize};

use crate::arrangement::{canonical_arrangement, Arrangement};
use crate::error::{Error, Result};
use crate::exact_algebra::Monomial;
use crate::scalar::parse_rational;
use crate::{ROneForm, RPoly, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub x: u32,
    pub y: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFormJson {
    pub dx: PolyJson,
    pub dy: PolyJson,
}

pub fn rational_from_str(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::validation(format!("not a rational: {s:?}")))
}

impl From<&RPoly> for PolyJson {
    fn from(p: &RPoly) -> Self {
        PolyJson {
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    c: c.to_string(),
                    x: m.x,
                    y: m.y,
                })
                .collect(),
        }
    }
}

impl PolyJson {
    pub fn to_poly(&self) -> Result<RPoly> {
        self.terms
            .iter()
            .map(|t| Ok((rational_from_str(&t.c)?, Monomial::new(t.x, t.y))))
            .collect::<Result<Vec<_>>>()
            .map(RPoly::from_terms)
    }
}

impl From<&ROneForm> for OneFormJson {
    fn from(w: &ROneForm) -> Self {
        OneFormJson {
            dx: (&w.dx).into(),
            dy: (&w.dy).into(),
        }
    }
}

impl OneFormJson {
    pub fn to_form(&self) -> Result<ROneForm> {
        Ok(ROneForm::new(self.dx.to_poly()?, self.dy.to_poly()?))
    }
}

pub fn rationals_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinesJson {
    pub lines: Vec<[String; 3]>,
}

/// `{"arrangement": {"lines": [["a","b","c"], ...]}}` or `{"canonical_d": d}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArrangementInput {
    Lines { arrangement: LinesJson },
    Canonical { canonical_d: usize },
}

impl ArrangementInput {
    pub fn build(&self) -> Result<Arrangement> {
        match self {
            ArrangementInput::Canonical { canonical_d } => canonical_arrangement(*canonical_d),
            ArrangementInput::Lines { arrangement } => {
                let coeffs = arrangement
                    .lines
                    .iter()
                    .map(|[a, b, c]| {
                        Ok([rational_from_str(a)?, rational_from_str(b)?, rational_from_str(c)?])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Arrangement::new(coeffs)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn poly_round_trip() {
        let p = RPoly::from_terms([(q(-1, 2), Monomial::new(2, 1)), (q(3, 1), Monomial::ONE)]);
        let j = PolyJson::from(&p);
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"terms":[{"c":"-1/2","x":2,"y":1},{"c":"3","x":0,"y":0}]}"#
        );
        assert_eq!(j.to_poly().unwrap(), p);
    }

    #[test]
    fn arrangement_inputs() {
        let a: ArrangementInput = serde_json::from_str(r#"{"canonical_d":3}"#).unwrap();
        assert_eq!(a.build().unwrap().lines.len(), 4);
        let b: ArrangementInput =
            serde_json::from_str(r#"{"arrangement":{"lines":[["1","0","0"],["0","1","0"],["1","1","-1"]]}}"#)
                .unwrap();
        assert_eq!(b.build().unwrap().d, 2);
        let bad: ArrangementInput =
            serde_json::from_str(r#"{"arrangement":{"lines":[["1","x","0"],["0","1","0"]]}}"#).unwrap();
        assert!(bad.build().is_err());
    }
}
