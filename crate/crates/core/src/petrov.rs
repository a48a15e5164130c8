//! The Petrov module `H = Omega^1 / (d Omega^0 + Omega^0 df)`, its
//! localization `H~` and the Gauss-Manin connection.
//!
//! Classes are never normalized; equality is decided by solving a
//! membership system for `dP + Q df` with degree bounds from `deg1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::combination::{combine_polys, poly_combination, poly_system};
use crate::exact_algebra::{wedge, Degree, ExteriorDerivative, Monomial};
use crate::json::OneFormJson;
use crate::milnor::{milnor_algebra, MilnorAlgebra, SpectralData};
use crate::{ROneForm, RPoly, RUPoly, Rational};

/// `omega = dP + Q df`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelExactWitness {
    pub p: RPoly,
    pub q: RPoly,
}

impl RelExactWitness {
    pub fn expand(&self, f: &RPoly) -> ROneForm {
        &self.p.d() + &f.d().mul_poly(&self.q)
    }
}

fn degree_of(p: &RPoly) -> i64 {
    match p.degree() {
        Degree::Finite(n) => n as i64,
        Degree::NegInfinity => -1,
    }
}

/// Bound on `deg Q` for a form of the given `deg1`.
fn q_bound(deg1: u32, f: &RPoly) -> i64 {
    deg1 as i64 + 2 - degree_of(f)
}

/// Solve `d(omega) = dQ ^ df` for `Q` with `deg Q <= q_deg`; then
/// `omega - Q df` is closed and `P` is its potential.
pub fn relative_exact_with_bound(w: &ROneForm, f: &RPoly, q_deg: i64) -> Option<RelExactWitness> {
    let target = w.d().g;
    let q = if q_deg < 0 {
        if !target.is_zero() {
            return None;
        }
        RPoly::zero()
    } else {
        let df = f.d();
        let monos = Monomial::up_to_degree(q_deg as u32);
        let columns: Vec<RPoly> = monos
            .iter()
            .map(|m| wedge(&RPoly::term(Rational::from_integer(1.into()), *m).d(), &df).g)
            .collect();
        let coeffs = poly_combination(&columns, &target)?;
        RPoly::from_terms(coeffs.into_iter().zip(monos))
    };
    let rest = w - &f.d().mul_poly(&q);
    let p = rest
        .potential()
        .expect("a form with d(omega - Q df) = 0 is closed, hence exact");
    Some(RelExactWitness { p, q })
}

/// Membership of `w` in `d Omega^0 + Omega^0 df`, with a witness.
///
/// Assumes `f` has connected generic fibers, which makes the bound
/// `deg Q <= deg1(w) + 2 - deg f` complete.
pub fn relative_exact_decompose(w: &ROneForm, f: &RPoly) -> Option<RelExactWitness> {
    if w.is_zero() {
        return Some(RelExactWitness {
            p: RPoly::zero(),
            q: RPoly::zero(),
        });
    }
    let deg1 = w.deg1().expect("nonzero form");
    relative_exact_with_bound(w, f, q_bound(deg1, f))
}

pub fn is_relatively_exact(w: &ROneForm, f: &RPoly) -> bool {
    relative_exact_decompose(w, f).is_some()
}

/// `w` modulo `span(generators) + d Omega^0 + Omega^0 df`: coefficients `c`
/// with `w - sum c_i generators[i]` relatively exact.
pub fn combination_in_h(w: &ROneForm, generators: &[ROneForm], f: &RPoly) -> Option<Vec<Rational>> {
    let deg1 = std::iter::once(w)
        .chain(generators)
        .filter(|g| !g.is_zero())
        .map(|g| g.deg1().unwrap())
        .max();
    let Some(deg1) = deg1 else {
        return Some(vec![Rational::from_integer(0.into()); generators.len()]);
    };
    let df = f.d();
    let qb = q_bound(deg1, f);
    let monos = if qb < 0 {
        Vec::new()
    } else {
        Monomial::up_to_degree(qb as u32)
    };
    // d(w) = sum c_i d(g_i) + dQ ^ df
    let mut columns: Vec<RPoly> = generators.iter().map(|g| g.d().g).collect();
    columns.extend(
        monos
            .iter()
            .map(|m| wedge(&RPoly::term(Rational::from_integer(1.into()), *m).d(), &df).g),
    );
    let sol = poly_system(&columns, &w.d().g).particular()?;
    Some(sol[..generators.len()].to_vec())
}

/// `numerator / denominator(t)`, an element of `H~`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSection {
    pub numerator: ROneForm,
    pub denominator: RUPoly,
}

impl RationalSection {
    pub fn new(numerator: ROneForm, denominator: RUPoly) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        RationalSection {
            numerator,
            denominator,
        }
    }

    pub fn from_form(w: ROneForm) -> Self {
        Self::new(w, RUPoly::one())
    }

    /// `p(t) * self`.
    pub fn mul_t(&self, p: &RUPoly, f: &RPoly) -> Self {
        Self::new(self.numerator.mul_poly(&p.compose(f)), self.denominator.clone())
    }

    pub fn add(&self, other: &Self, f: &RPoly) -> Self {
        let g = self.denominator.gcd(&other.denominator);
        let u = self.denominator.div_exact(&g).unwrap();
        let v = other.denominator.div_exact(&g).unwrap();
        let num = &self.numerator.mul_poly(&v.compose(f)) + &other.numerator.mul_poly(&u.compose(f));
        Self::new(num, &(&u * &v) * &g)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.numerator.scale(c), self.denominator.clone())
    }
}

/// `omega1 / a1 == omega2 / a2` in `H~`: clear denominators by `t -> f`
/// and test membership of the difference.
pub fn htilde_equal(s1: &RationalSection, s2: &RationalSection, f: &RPoly) -> bool {
    let g = s1.denominator.gcd(&s2.denominator);
    let u1 = s2.denominator.div_exact(&g).unwrap();
    let u2 = s1.denominator.div_exact(&g).unwrap();
    let diff = &s1.numerator.mul_poly(&u1.compose(f)) - &s2.numerator.mul_poly(&u2.compose(f));
    is_relatively_exact(&diff, f)
}

/// `p(f) d(omega) = df ^ eta`; the connection is `eta / p`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussManinResult {
    pub eta: ROneForm,
    /// Monic annihilator of the class of `d(omega)` under `A`; it divides
    /// the minimal polynomial of `A`.
    pub p: RUPoly,
}

impl GaussManinResult {
    pub fn section(&self) -> RationalSection {
        RationalSection::new(self.eta.clone(), self.p.clone())
    }
}

/// Cofactors `(a, b)` with `a f_x + b f_y = g`, preferring the lowest degree
/// bound `deg g - deg f + 1` that works.
fn low_degree_cofactors(g: &RPoly, f: &RPoly) -> Option<(RPoly, RPoly)> {
    let k = degree_of(g) - degree_of(f) + 1;
    if k < 0 {
        return None;
    }
    let (fx, fy) = (f.dx(), f.dy());
    let monos = Monomial::up_to_degree(k as u32);
    let one = Rational::from_integer(1.into());
    let mut columns: Vec<RPoly> = monos.iter().map(|m| fx.mul_term(&one, *m)).collect();
    columns.extend(monos.iter().map(|m| fy.mul_term(&one, *m)));
    let c = poly_combination(&columns, g)?;
    let n = monos.len();
    let basis: Vec<RPoly> = monos.iter().map(|m| RPoly::term(one.clone(), *m)).collect();
    Some((combine_polys(&c[..n], &basis), combine_polys(&c[n..], &basis)))
}

/// Gauss-Manin connection of `w`.
///
/// Uses the annihilator `q` of the class of `d(w)` in `V` rather than the
/// full minimal polynomial: `q` divides it, so `eta / q` is the same element
/// of `H~` with a smaller denominator.
pub fn gauss_manin(
    w: &ROneForm,
    ma: &MilnorAlgebra<Rational>,
    sd: &SpectralData<Rational>,
) -> Result<GaussManinResult> {
    let g = w.d().g;
    let coords = ma.coordinates(&g);
    let q = sd.a_matrix.vector_annihilator(&coords);
    if sd.min_poly.div_exact(&q).is_none() {
        return Err(Error::invariant("class annihilator does not divide the minimal polynomial"));
    }
    gauss_manin_with(w, ma, &q)
}

/// Gauss-Manin connection with a caller-chosen annihilating polynomial,
/// e.g. the minimal polynomial of `A`.
pub fn gauss_manin_with(
    w: &ROneForm,
    ma: &MilnorAlgebra<Rational>,
    p: &RUPoly,
) -> Result<GaussManinResult> {
    let f = &ma.f;
    let big_g = &p.compose(f) * &w.d().g;
    let nf = ma.ideal.normal_form(&big_g);
    if !nf.remainder.is_zero() {
        return Err(Error::invariant("nonzero remainder: p(f) d(omega) is not in the Jacobian ideal"));
    }
    let (a, b) = low_degree_cofactors(&big_g, f).unwrap_or((nf.a, nf.b));
    let eta = ROneForm::new(-&b, a);
    if wedge(&f.d(), &eta).g != big_g {
        return Err(Error::invariant("p(f) d(omega) != df ^ eta"));
    }
    Ok(GaussManinResult { eta, p: p.clone() })
}

/// `f` with its Milnor algebra and spectrum: everything needed to apply the
/// connection repeatedly.
#[derive(Clone, Debug)]
pub struct PetrovModule {
    pub f: RPoly,
    pub algebra: MilnorAlgebra<Rational>,
    pub spectral: SpectralData<Rational>,
}

impl PetrovModule {
    pub fn new(f: &RPoly) -> Result<Self> {
        let algebra = milnor_algebra(f)?;
        let spectral = algebra.spectral_data()?;
        Ok(PetrovModule {
            f: f.clone(),
            algebra,
            spectral,
        })
    }

    pub fn gauss_manin(&self, w: &ROneForm) -> Result<GaussManinResult> {
        gauss_manin(w, &self.algebra, &self.spectral)
    }

    pub fn nabla(&self, w: &ROneForm) -> Result<RationalSection> {
        Ok(self.gauss_manin(w)?.section())
    }

    /// `nabla(omega / q) = (q nabla(omega) - q' omega) / q^2`.
    pub fn nabla_tilde(&self, s: &RationalSection) -> Result<RationalSection> {
        let inner = self.gauss_manin(&s.numerator)?;
        let q = &s.denominator;
        let (eta, q2) = (&inner.eta, &inner.p);
        let f = &self.f;
        let num = &eta.mul_poly(&q.compose(f))
            - &s.numerator.mul_poly(&(&q.derivative() * q2).compose(f));
        Ok(RationalSection::new(num, &(q * q) * q2))
    }

    /// `nabla^n (w)`, `n >= 1`.
    pub fn nabla_power(&self, w: &ROneForm, n: u32) -> Result<RationalSection> {
        if n == 0 {
            return Err(Error::validation("nabla power must be at least 1"));
        }
        let mut s = self.nabla(w)?;
        for _ in 1..n {
            s = self.nabla_tilde(&s)?;
        }
        Ok(s)
    }

    pub fn equal(&self, s1: &RationalSection, s2: &RationalSection) -> bool {
        htilde_equal(s1, s2, &self.f)
    }

    pub fn is_zero(&self, s: &RationalSection) -> bool {
        is_relatively_exact(&s.numerator, &self.f)
    }
}

/// Checks the caller's factorization: every factor nonconstant and dividing
/// `f`, and the product equal to `f` up to a nonzero constant.
pub fn check_factorization(f: &RPoly, factors: &[RPoly]) -> Result<()> {
    let mut prod = RPoly::one();
    for g in factors {
        if g.is_constant() || !g.divides(f) {
            return Err(Error::unsupported(format!(
                "unsupported fiber structure: factor {g} does not divide f"
            )));
        }
        prod = &prod * g;
    }
    let ratio = f.div_exact(&prod).filter(RPoly::is_constant);
    if ratio.is_none() {
        return Err(Error::unsupported(
            "unsupported fiber structure: factors do not multiply to f",
        ));
    }
    Ok(())
}

/// Generators of `ker nabla^n` on `H` when the only reducible critical fiber
/// is `f = 0`, without verification: `(f / g_i) dg_i` for all but the last
/// factor (they sum to a multiple of `df`), and for `n = 3` also `f` times
/// those.
pub fn kernel_generators(f: &RPoly, n: u32, factors: &[RPoly]) -> Result<Vec<ROneForm>> {
    if !(1..=3).contains(&n) {
        return Err(Error::unsupported(format!("kernel of nabla^{n}: only n = 1, 2, 3 are supported")));
    }
    check_factorization(f, factors)?;
    if n == 1 {
        return Ok(Vec::new());
    }
    let r = factors.len();
    let base: Vec<ROneForm> = factors[..r - 1]
        .iter()
        .map(|g| g.d().mul_poly(&f.div_exact(g).unwrap()))
        .collect();
    let mut out = base.clone();
    if n == 3 {
        out.extend(base.iter().map(|w| w.mul_poly(f)));
    }
    Ok(out)
}

/// [`kernel_generators`], each checked to satisfy `nabla^n = 0` in `H~`.
pub fn kernel_basis(pm: &PetrovModule, n: u32, factors: &[RPoly]) -> Result<Vec<ROneForm>> {
    let gens = kernel_generators(&pm.f, n, factors)?;
    for g in &gens {
        if !pm.is_zero(&pm.nabla_power(g, n)?) {
            return Err(Error::invariant(format!("kernel generator {g} is not killed by nabla^{n}")));
        }
    }
    Ok(gens)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerAnnihilation {
    pub n: u32,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectionReport {
    pub eta: OneFormJson,
    pub p: String,
    pub power_annihilation: PowerAnnihilation,
}

impl ConnectionReport {
    pub fn new(pm: &PetrovModule, w: &ROneForm, n: u32) -> Result<Self> {
        let gm = pm.gauss_manin(w)?;
        let holds = pm.is_zero(&pm.nabla_power(w, n)?);
        Ok(ConnectionReport {
            eta: (&gm.eta).into(),
            p: gm.p.to_string(),
            power_annihilation: PowerAnnihilation { n, holds },
        })
    }
}

/// Relative-exactness report: membership and, if a member, one witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelExactReport {
    pub member: bool,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<crate::json::PolyJson>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<crate::json::PolyJson>,
}

impl RelExactReport {
    pub fn new(w: &ROneForm, f: &RPoly) -> Self {
        match relative_exact_decompose(w, f) {
            Some(wit) => RelExactReport {
                member: true,
                p: Some((&wit.p).into()),
                q: Some((&wit.q).into()),
            },
            None => RelExactReport {
                member: false,
                p: None,
                q: None,
            },
        }
    }
}

/// Span of `forms` in `H`: rank of `forms` modulo relatively exact forms.
pub fn rank_in_h(forms: &[ROneForm], f: &RPoly) -> usize {
    let mut kept: Vec<ROneForm> = Vec::new();
    for w in forms {
        if combination_in_h(w, &kept, f).is_none() {
            kept.push(w.clone());
        }
    }
    kept.len()
}

/// `span(a) == span(b)` in `H`.
pub fn same_span_in_h(a: &[ROneForm], b: &[ROneForm], f: &RPoly) -> bool {
    a.iter().all(|w| combination_in_h(w, b, f).is_some())
        && b.iter().all(|w| combination_in_h(w, a, f).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = RPoly;
    type W = ROneForm;

    fn circle_line() -> P {
        P::from_ints(&[(1, 3, 0), (1, 1, 2), (-1, 1, 0)])
    }

    fn triangle() -> P {
        P::from_ints(&[(1, 2, 1), (1, 1, 2), (-1, 1, 1)])
    }

    fn omega1() -> W {
        W::new(P::from_ints(&[(1, 2, 0), (1, 0, 2), (-1, 0, 0)]), P::zero())
    }

    #[test]
    fn constructed_member() {
        let f = triangle();
        let p = P::from_ints(&[(1, 3, 2)]);
        let qq = P::from_ints(&[(1, 2, 0), (2, 0, 0)]);
        let w = &p.d() + &f.d().mul_poly(&qq);
        let wit = relative_exact_decompose(&w, &f).unwrap();
        assert_eq!(wit.expand(&f), w);
        let wit = relative_exact_decompose(&f.d(), &f).unwrap();
        assert_eq!(wit.expand(&f), f.d());
    }

    #[test]
    fn omega1_is_not_member() {
        assert!(relative_exact_decompose(&omega1(), &circle_line()).is_none());
    }

    #[test]
    fn circle_line_connection() {
        let pm = PetrovModule::new(&circle_line()).unwrap();
        let nabla = pm.nabla(&omega1()).unwrap();
        let expected = RationalSection::new(omega1(), RUPoly::t());
        assert!(pm.equal(&nabla, &expected));
        assert!(pm.is_zero(&pm.nabla_power(&omega1(), 2).unwrap()));
        assert!(!pm.is_zero(&nabla));
        // omega1 = t nabla(omega1)
        let t_nabla = nabla.mul_t(&RUPoly::t(), &pm.f);
        assert!(pm.equal(&RationalSection::from_form(omega1()), &t_nabla));
        assert!(!pm.equal(&RationalSection::from_form(omega1()), &RationalSection::from_form(W::zero())));
    }

    #[test]
    fn min_poly_and_class_annihilator_agree() {
        let pm = PetrovModule::new(&circle_line()).unwrap();
        let a = pm.gauss_manin(&omega1()).unwrap();
        let b = gauss_manin_with(&omega1(), &pm.algebra, &pm.spectral.min_poly).unwrap();
        assert!(pm.equal(&a.section(), &b.section()));
    }

    #[test]
    fn exact_forms_have_zero_connection() {
        let pm = PetrovModule::new(&triangle()).unwrap();
        let w = P::from_ints(&[(3, 2, 2), (-1, 0, 3)]).d();
        assert!(pm.is_zero(&pm.nabla(&w).unwrap()));
        assert!(pm.is_zero(&pm.nabla(&pm.f.d()).unwrap()));
    }

    #[test]
    fn triangle_kernel() {
        let pm = PetrovModule::new(&triangle()).unwrap();
        let factors = vec![P::x(), P::y(), P::from_ints(&[(1, 1, 0), (1, 0, 1), (-1, 0, 0)])];
        let k = kernel_basis(&pm, 2, &factors).unwrap();
        assert_eq!(k.len(), 2);
        let line = &factors[2];
        let expected = vec![
            W::new(P::zero(), &P::x() * line),
            W::new(&P::y() * line, P::zero()),
        ];
        assert!(same_span_in_h(&k, &expected, &pm.f));
        assert_eq!(rank_in_h(&k, &pm.f), 2);
        assert!(kernel_basis(&pm, 1, &factors).unwrap().is_empty());
    }

    #[test]
    fn circle_line_kernel() {
        let pm = PetrovModule::new(&circle_line()).unwrap();
        let factors = vec![P::from_ints(&[(1, 2, 0), (1, 0, 2), (-1, 0, 0)]), P::x()];
        let k = kernel_basis(&pm, 2, &factors).unwrap();
        assert_eq!(k.len(), 1);
        assert!(same_span_in_h(&k, &[omega1()], &pm.f));
        let bad = kernel_generators(&pm.f, 2, &[P::y()]);
        assert!(matches!(bad, Err(Error::Unsupported(_))));
    }

    #[test]
    fn leibniz() {
        let pm = PetrovModule::new(&triangle()).unwrap();
        let w = W::new(P::from_ints(&[(1, 0, 2), (2, 1, 0)]), P::from_ints(&[(-1, 1, 1)]));
        let lhs = pm.nabla(&w.mul_poly(&pm.f)).unwrap();
        let rhs = RationalSection::from_form(w.clone()).add(&pm.nabla(&w).unwrap().mul_t(&RUPoly::t(), &pm.f), &pm.f);
        assert!(pm.equal(&lhs, &rhs));
    }
}
