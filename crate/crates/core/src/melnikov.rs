//! Logarithmic deformations of `f = l_0 ... l_d`: decomposition
//! `omega = f sum lambda_p dl_p / l_p + dP`, grouping of equal residues, the
//! structure of `P_k`, the order-`k..2k` Melnikov recursion and the
//! codimension counts.
//!
//! The recursion is algebraic: `M_k` vanishes on the monodromy orbit of a
//! vanishing cycle exactly when `omega_k` is logarithmic in the above sense,
//! so every step is a membership test and no period is integrated.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, Point};
use crate::error::{Error, Result};
use crate::exact_algebra::combination::{combine_forms, combine_polys, form_system, poly_span_rank};
use crate::exact_algebra::{Degree, ExteriorDerivative, Monomial, SparseSystem};
use crate::json::{rationals_to_strings, OneFormJson, PolyJson};
use crate::petrov::kernel_generators;
use crate::{ROneForm, RPoly, Rational};

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn monomial_polys(deg: u32) -> Vec<RPoly> {
    Monomial::up_to_degree(deg)
        .into_iter()
        .map(|m| RPoly::term(one(), m))
        .collect()
}

fn form_degree(w: &ROneForm) -> i64 {
    match w.degree() {
        Degree::Finite(n) => n as i64,
        Degree::NegInfinity => -1,
    }
}

/// `(f / l_p) dl_p` for every line.
pub fn log_generators(arr: &Arrangement) -> Vec<ROneForm> {
    arr.forms
        .iter()
        .map(|l| l.d().mul_poly(&arr.f.div_exact(l).unwrap()))
        .collect()
}

/// `omega = f sum lambda_p dl_p / l_p + dP`, normalized by `sum lambda_p = 0`
/// and `P(0, 0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDecomposition {
    pub lambdas: Vec<Rational>,
    pub p: RPoly,
}

impl LogDecomposition {
    /// `f alpha = sum lambda_p (f / l_p) dl_p`.
    pub fn f_alpha(&self, arr: &Arrangement) -> ROneForm {
        combine_forms(&self.lambdas, &log_generators(arr))
    }

    pub fn expand(&self, arr: &Arrangement) -> ROneForm {
        &self.f_alpha(arr) + &self.p.d()
    }

    pub fn is_normalized(&self) -> bool {
        self.lambdas.iter().sum::<Rational>() == zero() && self.p.coeff(Monomial::ONE) == zero()
    }
}

/// Decomposes a form of degree at most `d`; `None` if it is not logarithmic.
pub fn log_decompose(w: &ROneForm, arr: &Arrangement) -> Result<Option<LogDecomposition>> {
    let d = arr.d;
    if form_degree(w) > d as i64 {
        return Err(Error::validation(format!(
            "form of degree {} exceeds d = {d}",
            form_degree(w)
        )));
    }
    let gens = log_generators(arr);
    let r = gens.len();
    let monos: Vec<Monomial> = Monomial::up_to_degree(d as u32 + 1).into_iter().skip(1).collect();
    let mut columns = gens;
    columns.extend(monos.iter().map(|m| RPoly::term(one(), *m).d()));
    let mut sys = form_system(&columns, w);
    sys.push((0..r).map(|i| (i, one())).collect(), zero());
    let Some(sol) = sys.particular() else {
        return Ok(None);
    };
    if sys.rank() != columns.len() {
        return Err(Error::invariant("logarithmic decomposition is not unique"));
    }
    Ok(Some(LogDecomposition {
        lambdas: sol[..r].to_vec(),
        p: RPoly::from_terms(sol[r..].iter().cloned().zip(monos)),
    }))
}

/// Partition of the lines by equal `lambda`, in order of first occurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct Grouping {
    pub groups: Vec<Vec<usize>>,
    /// `f_i`: product of the forms in group `i`.
    pub polys: Vec<RPoly>,
}

impl Grouping {
    pub fn from_groups(groups: Vec<Vec<usize>>, arr: &Arrangement) -> Self {
        let polys = groups
            .iter()
            .map(|g| g.iter().fold(RPoly::one(), |acc, &p| &acc * &arr.forms[p]))
            .collect();
        Grouping { groups, polys }
    }

    /// Consecutive lines in blocks of the given sizes.
    pub fn from_partition(partition: &[usize], arr: &Arrangement) -> Result<Self> {
        if partition.iter().sum::<usize>() != arr.num_lines() || partition.contains(&0) {
            return Err(Error::validation(format!(
                "partition {partition:?} does not split {} lines",
                arr.num_lines()
            )));
        }
        let mut next = 0;
        let groups = partition
            .iter()
            .map(|&n| {
                next += n;
                (next - n..next).collect()
            })
            .collect();
        Ok(Self::from_groups(groups, arr))
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Intersection points of lines lying in different groups.
    pub fn cross_points(&self, arr: &Arrangement) -> Vec<Point> {
        let mut group_of = vec![0; arr.num_lines()];
        for (gi, g) in self.groups.iter().enumerate() {
            for &p in g {
                group_of[p] = gi;
            }
        }
        let mut out: Vec<Point> = Vec::new();
        for i in 0..arr.num_lines() {
            for j in i + 1..arr.num_lines() {
                if group_of[i] == group_of[j] {
                    continue;
                }
                if let Some(pt) = arr.lines[i].intersect(&arr.lines[j]) {
                    if !out.contains(&pt) {
                        out.push(pt);
                    }
                }
            }
        }
        out
    }
}

pub fn group_lambdas(lambdas: &[Rational], arr: &Arrangement) -> Result<Grouping> {
    if lambdas.len() != arr.num_lines() {
        return Err(Error::validation(format!(
            "{} residues for {} lines",
            lambdas.len(),
            arr.num_lines()
        )));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (p, l) in lambdas.iter().enumerate() {
        match groups.iter_mut().find(|g| &lambdas[g[0]] == l) {
            Some(g) => g.push(p),
            None => groups.push(vec![p]),
        }
    }
    Ok(Grouping::from_groups(groups, arr))
}

#[derive(Clone, Debug, PartialEq)]
pub enum PkStructure {
    /// `P = f sum A_i / f_i` with the coefficient of `LM(f_i)` in `A_i`
    /// zero for every group but the first.
    Cofactors(Vec<RPoly>),
    /// Cross-group intersection points where `P` does not vanish.
    Violation(Vec<Point>),
}

pub fn pk_structure(p: &RPoly, grouping: &Grouping, arr: &Arrangement) -> Result<PkStructure> {
    let d = arr.d;
    if let Degree::Finite(n) = p.degree() {
        if n as usize > d + 1 {
            return Err(Error::validation(format!("deg P = {n} exceeds d + 1 = {}", d + 1)));
        }
    }
    let bad: Vec<Point> = grouping
        .cross_points(arr)
        .into_iter()
        .filter(|pt| p.eval(&pt.x, &pt.y) != zero())
        .collect();
    if !bad.is_empty() {
        return Ok(PkStructure::Violation(bad));
    }
    // Unknowns: coefficients of each A_i, group by group.
    let mut columns = Vec::new();
    let mut owners = Vec::new();
    for (i, fi) in grouping.polys.iter().enumerate() {
        let cof = arr.f.div_exact(fi).unwrap();
        let lm = fi.leading_monomial().unwrap();
        for m in Monomial::up_to_degree(grouping.groups[i].len() as u32) {
            if i > 0 && m == lm {
                continue;
            }
            columns.push(cof.mul_term(&one(), m));
            owners.push((i, m));
        }
    }
    let sys = crate::exact_algebra::combination::poly_system(&columns, p);
    let Some(sol) = sys.particular() else {
        return Err(Error::invariant(
            "P vanishes on every cross-group point but is not of the form f sum A_i / f_i",
        ));
    };
    let mut cofactors = vec![RPoly::zero(); grouping.len()];
    for (c, (i, m)) in sol.into_iter().zip(owners) {
        cofactors[i].add_term(c, m);
    }
    Ok(PkStructure::Cofactors(cofactors))
}

/// Exact dimensions behind the structure of `P_k` for one partition of the
/// lines of an arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PkDimensionAudit {
    pub d: usize,
    pub partition: Vec<usize>,
    /// `dim {P in P_{d+1} : P = 0 on cross-group points}`, by rank.
    pub vanishing_rank: usize,
    /// `dim span {m f / f_i : deg m <= d_i}`, by rank.
    pub structured_rank: usize,
    /// `(d+2)(d+3)/2 - sum_{i<j} d_i d_j`.
    pub point_count_formula: usize,
    /// `sum (d_i+1)(d_i+2)/2 - (s-1)`.
    pub group_formula: usize,
    /// `sum (d_i+1)(d_i+2)/2 - 1`, the count as usually quoted; only right
    /// for two groups.
    pub quoted_formula: usize,
    pub quoted_matches: bool,
}

impl PkDimensionAudit {
    pub fn consistent(&self) -> bool {
        self.vanishing_rank == self.structured_rank
            && self.vanishing_rank == self.point_count_formula
            && self.vanishing_rank == self.group_formula
    }
}

pub fn pk_dimension_audit(arr: &Arrangement, partition: &[usize]) -> Result<PkDimensionAudit> {
    let grouping = Grouping::from_partition(partition, arr)?;
    let d = arr.d;
    let monos = Monomial::up_to_degree(d as u32 + 1);
    let points = grouping.cross_points(arr);
    let mut sys = SparseSystem::new(monos.len());
    for pt in &points {
        let row = monos
            .iter()
            .enumerate()
            .map(|(j, m)| (j, RPoly::term(one(), *m).eval(&pt.x, &pt.y)))
            .collect();
        sys.push(row, zero());
    }
    let vanishing_rank = monos.len() - sys.rank();
    let mut columns = Vec::new();
    for fi in &grouping.polys {
        let cof = arr.f.div_exact(fi).unwrap();
        let deg = fi.degree().unwrap();
        columns.extend(monomial_polys(deg).iter().map(|m| m * &cof));
    }
    let structured_rank = poly_span_rank(&columns);
    let s = partition.len();
    let cross: usize = (0..s)
        .flat_map(|i| (i + 1..s).map(move |j| (i, j)))
        .map(|(i, j)| partition[i] * partition[j])
        .sum();
    let tri: usize = partition.iter().map(|&di| (di + 1) * (di + 2) / 2).sum();
    Ok(PkDimensionAudit {
        d,
        partition: partition.to_vec(),
        vanishing_rank,
        structured_rank,
        point_count_formula: (d + 2) * (d + 3) / 2 - cross,
        group_formula: tri - (s - 1),
        quoted_formula: tri - 1,
        quoted_matches: tri - 1 == vanishing_rank,
    })
}

/// Integer partitions of `n`, parts in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `omega_eps = df + eps^k omega_k + ... + eps^{2k} omega_{2k}`; absent
/// orders are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Deformation {
    pub k: u32,
    pub forms: BTreeMap<u32, ROneForm>,
}

impl Deformation {
    pub fn new(k: u32, forms: BTreeMap<u32, ROneForm>) -> Self {
        Deformation { k, forms }
    }

    pub fn form(&self, i: u32) -> ROneForm {
        self.forms.get(&i).cloned().unwrap_or_else(ROneForm::zero)
    }

    pub fn validate(&self, arr: &Arrangement) -> Result<()> {
        let k = self.k;
        if k == 0 {
            return Err(Error::validation("k must be positive"));
        }
        if let Some(i) = self.forms.keys().find(|i| !(k..=2 * k).contains(*i)) {
            return Err(Error::validation(format!("order {i} outside the window {k}..{}", 2 * k)));
        }
        if self.form(k).is_zero() {
            return Err(Error::validation(format!("omega_{k} is zero")));
        }
        for (i, w) in &self.forms {
            if form_degree(w) > arr.d as i64 {
                return Err(Error::validation(format!(
                    "omega_{i} has degree {} > d = {}",
                    form_degree(w),
                    arr.d
                )));
            }
        }
        Ok(())
    }
}

/// Deformation of the first integral `prod f_i^{lambda_i}` with
/// `f_i -> f_i + e h_i` and `lambda_i = 1 + e mu_i`, `e = eps^k`:
/// `omega_k` and `omega_{2k}` are the `e` and `e^2` coefficients of
/// `sum lambda_i (prod_{j != i} F_j) dF_i`.
pub fn logarithmic_deformation(
    arr: &Arrangement,
    grouping: &Grouping,
    mu: &[Rational],
    h: &[RPoly],
    k: u32,
) -> Result<Deformation> {
    let s = grouping.len();
    if mu.len() != s || h.len() != s {
        return Err(Error::validation("one mu and one h per group"));
    }
    for (hi, fi) in h.iter().zip(&grouping.polys) {
        if !hi.is_zero() && hi.degree().unwrap() > fi.degree().unwrap() {
            return Err(Error::validation("deg h_i must not exceed deg f_i"));
        }
    }
    // Truncated series in e: index = power of e.
    type Series = [RPoly; 3];
    let mul = |a: &Series, b: &Series| -> Series {
        [
            &a[0] * &b[0],
            &(&a[0] * &b[1]) + &(&a[1] * &b[0]),
            &(&(&a[0] * &b[2]) + &(&a[1] * &b[1])) + &(&a[2] * &b[0]),
        ]
    };
    let big_f: Vec<Series> = grouping
        .polys
        .iter()
        .zip(h)
        .map(|(fi, hi)| [fi.clone(), hi.clone(), RPoly::zero()])
        .collect();
    let mut out = [ROneForm::zero(), ROneForm::zero(), ROneForm::zero()];
    for i in 0..s {
        let lam: Series = [RPoly::one(), RPoly::constant(mu[i].clone()), RPoly::zero()];
        let mut coef = lam;
        for (j, fj) in big_f.iter().enumerate() {
            if j != i {
                coef = mul(&coef, fj);
            }
        }
        let dfi = [big_f[i][0].d(), big_f[i][1].d()];
        for (a, ca) in coef.iter().enumerate() {
            for (b, db) in dfi.iter().enumerate() {
                if a + b <= 2 {
                    out[a + b] = &out[a + b] + &db.mul_poly(ca);
                }
            }
        }
    }
    debug_assert_eq!(out[0], arr.f.d());
    let mut forms = BTreeMap::new();
    let [_, wk, w2k] = out;
    forms.insert(k, wk);
    if !w2k.is_zero() {
        forms.insert(2 * k, w2k);
    }
    Ok(Deformation::new(k, forms))
}

/// A logarithmic `omega_k` together with its residue grouping and the
/// cofactors of `P_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogCertificate {
    pub lambdas: Vec<Rational>,
    pub p: RPoly,
    pub grouping: Grouping,
    pub group_cofactors: Vec<RPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MelnikovOutcome {
    /// `M_k = ... = M_{2k} = 0`.
    ObstructionFree { through: u32, certificate: LogCertificate },
    /// First nonzero `M_m`. For `m < 2k` the residual is `omega_m`; for
    /// `m = 2k` it is `W = f omega_{2k} - P_k f alpha_k`.
    Obstructed { order: u32, residual: ROneForm },
}

impl MelnikovOutcome {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, MelnikovOutcome::Obstructed { .. })
    }
}

/// Membership of `w` in `{alpha_1 f + alpha_2 f^2 + d(f g) + p df}` with
/// `alpha_1, alpha_2` in the span of the `nabla^2` kernel generators and
/// `deg g, deg p <= cap`.
pub fn order_2k_membership(w: &ROneForm, arr: &Arrangement, cap: u32) -> Result<bool> {
    let f = &arr.f;
    let gens = kernel_generators(f, 2, &arr.forms)?;
    let f2 = f * f;
    let df = f.d();
    let mut columns: Vec<ROneForm> = gens.iter().map(|g| g.mul_poly(f)).collect();
    columns.extend(gens.iter().map(|g| g.mul_poly(&f2)));
    for m in monomial_polys(cap) {
        columns.push((f * &m).d());
        columns.push(df.mul_poly(&m));
    }
    Ok(form_system(&columns, w).is_feasible())
}

pub fn francoise_recursion(def: &Deformation, arr: &Arrangement) -> Result<MelnikovOutcome> {
    def.validate(arr)?;
    let k = def.k;
    let mut first: Option<LogDecomposition> = None;
    for i in k..2 * k {
        let w = def.form(i);
        match log_decompose(&w, arr)? {
            Some(dec) => {
                if first.is_none() {
                    first = Some(dec);
                }
            }
            None => return Ok(MelnikovOutcome::Obstructed { order: i, residual: w }),
        }
    }
    let dec = first.expect("window k..2k is nonempty");
    let f = &arr.f;
    let w = &def.form(2 * k).mul_poly(f) - &dec.f_alpha(arr).mul_poly(&dec.p);
    let d = arr.d as u32;
    let mut member = order_2k_membership(&w, arr, d + 2)?;
    if !member {
        log::info!("order {}: raising the membership degree cap from {} to {}", 2 * k, d + 2, 2 * d + 3);
        member = order_2k_membership(&w, arr, 2 * d + 3)?;
    }
    if !member {
        return Ok(MelnikovOutcome::Obstructed {
            order: 2 * k,
            residual: w,
        });
    }
    let grouping = group_lambdas(&dec.lambdas, arr)?;
    // P_k is only defined up to a constant; pick the one vanishing on the
    // cross-group points.
    let mut p = dec.p.clone();
    if let Some(pt) = grouping.cross_points(arr).first() {
        p -= &RPoly::constant(p.eval(&pt.x, &pt.y));
    }
    match pk_structure(&p, &grouping, arr)? {
        PkStructure::Cofactors(group_cofactors) => Ok(MelnikovOutcome::ObstructionFree {
            through: 2 * k,
            certificate: LogCertificate {
                lambdas: dec.lambdas,
                p,
                grouping,
                group_cofactors,
            },
        }),
        PkStructure::Violation(points) => Err(Error::invariant(format!(
            "order-{} membership holds but P_{k} is nonzero at {} cross-group points",
            2 * k,
            points.len()
        ))),
    }
}

/// `(codim - 1, cyclicity lower bound)` of the component of logarithmic
/// foliations with polar degrees `partition`, in degree-`d` foliations.
/// A single part is the Hamiltonian component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub d: usize,
    pub partition: Vec<usize>,
    pub codim_minus_one: usize,
    pub cyclicity_lower_bound: usize,
}

pub fn codim_and_cyclicity(d: usize, partition: &[usize]) -> Result<Bounds> {
    if partition.is_empty() || partition.contains(&0) || partition.iter().sum::<usize>() != d + 1 {
        return Err(Error::validation(format!(
            "partition {partition:?} does not sum to d + 1 = {}",
            d + 1
        )));
    }
    let value = if partition.len() == 1 {
        (d + 2) * (d - 1) / 2
    } else {
        let tri: usize = partition.iter().map(|&di| (di + 1) * (di + 2) / 2).sum();
        (d + 1) * (d + 2) - tri - 1
    };
    Ok(Bounds {
        d,
        partition: partition.to_vec(),
        codim_minus_one: value,
        cyclicity_lower_bound: value,
    })
}

/// Wire format of a [`MelnikovOutcome`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub status: String,
    pub order: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grouping: Option<Vec<Vec<usize>>>,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none", default)]
    pub p: Option<PolyJson>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none", default)]
    pub a: Option<Vec<PolyJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<OneFormJson>,
}

impl From<&MelnikovOutcome> for CertificateJson {
    fn from(o: &MelnikovOutcome) -> Self {
        match o {
            MelnikovOutcome::ObstructionFree { through, certificate: c } => CertificateJson {
                status: "log_certificate".into(),
                order: *through,
                lambda: Some(rationals_to_strings(&c.lambdas)),
                grouping: Some(c.grouping.groups.clone()),
                p: Some((&c.p).into()),
                a: Some(c.group_cofactors.iter().map(PolyJson::from).collect()),
                residual: None,
            },
            MelnikovOutcome::Obstructed { order, residual } => CertificateJson {
                status: "obstructed".into(),
                order: *order,
                lambda: None,
                grouping: None,
                p: None,
                a: None,
                residual: Some(residual.into()),
            },
        }
    }
}

/// `P = f sum A_i / f_i`.
pub fn assemble_pk(grouping: &Grouping, cofactors: &[RPoly], arr: &Arrangement) -> RPoly {
    let parts: Vec<RPoly> = grouping
        .polys
        .iter()
        .zip(cofactors)
        .map(|(fi, a)| a * &arr.f.div_exact(fi).unwrap())
        .collect();
    combine_polys(&vec![one(); parts.len()], &parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::canonical_arrangement;
    use crate::scalar::q;

    type P = RPoly;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| q(n, 1)).collect()
    }

    #[test]
    fn decompose_constructed() {
        let arr = canonical_arrangement(2).unwrap();
        let gens = log_generators(&arr);
        let x2 = P::from_ints(&[(1, 2, 0)]);
        let w = &combine_forms(&ints(&[2, -1, -1]), &gens) + &x2.d();
        let dec = log_decompose(&w, &arr).unwrap().unwrap();
        assert_eq!(dec.lambdas, ints(&[2, -1, -1]));
        assert_eq!(dec.p, x2);
        assert!(dec.is_normalized());
        assert_eq!(dec.expand(&arr), w);

        let p = P::from_ints(&[(3, 3, 0), (-1, 1, 1), (5, 0, 0)]);
        let dec = log_decompose(&p.d(), &arr).unwrap().unwrap();
        assert_eq!(dec.lambdas, ints(&[0, 0, 0]));
        assert_eq!(&dec.p + &P::constant(q(5, 1)), p);

        let w = ROneForm::new(P::from_ints(&[(1, 0, 2)]), P::from_ints(&[(1, 1, 0)]));
        assert!(log_decompose(&w, &arr).unwrap().is_none());
        let high = ROneForm::new(P::from_ints(&[(1, 3, 0)]), P::zero());
        assert!(log_decompose(&high, &arr).is_err());
    }

    #[test]
    fn grouping() {
        let arr = canonical_arrangement(2).unwrap();
        let g = group_lambdas(&ints(&[2, -1, -1]), &arr).unwrap();
        assert_eq!(g.groups, vec![vec![0], vec![1, 2]]);
        assert_eq!(g.degrees(), vec![1, 2]);
        assert_eq!(&g.polys[0] * &g.polys[1], arr.f);
        assert_eq!(group_lambdas(&ints(&[0, 0, 0]), &arr).unwrap().len(), 1);
        assert_eq!(group_lambdas(&ints(&[1, 0, -1]), &arr).unwrap().len(), 3);
    }

    #[test]
    fn pk_cases() {
        let arr = canonical_arrangement(3).unwrap();
        let g = Grouping::from_partition(&[1, 3], &arr).unwrap();
        let a = P::from_ints(&[(2, 1, 0), (-1, 0, 0)]);
        let p = &g.polys[1] * &a;
        let PkStructure::Cofactors(c) = pk_structure(&p, &g, &arr).unwrap() else {
            panic!("expected cofactors");
        };
        assert_eq!(c, vec![a, P::zero()]);
        let PkStructure::Cofactors(c) = pk_structure(&arr.f, &g, &arr).unwrap() else {
            panic!("expected cofactors");
        };
        assert_eq!(c, vec![g.polys[0].clone(), P::zero()]);
        assert_eq!(assemble_pk(&g, &c, &arr), arr.f);
        assert!(matches!(
            pk_structure(&P::one(), &g, &arr).unwrap(),
            PkStructure::Violation(pts) if pts.len() == 3
        ));
    }

    #[test]
    fn dimension_audit_small() {
        let arr = canonical_arrangement(3).unwrap();
        for part in partitions(4) {
            let a = pk_dimension_audit(&arr, &part).unwrap();
            assert!(a.consistent(), "{a:?}");
            assert_eq!(a.quoted_matches, part.len() == 2, "{part:?}");
        }
        assert_eq!(partitions(4).len(), 5);
    }

    #[test]
    fn recursion_cases() {
        let arr = canonical_arrangement(2).unwrap();
        let p = P::from_ints(&[(1, 3, 0), (-2, 1, 2), (1, 0, 1)]);
        let def = Deformation::new(1, BTreeMap::from([(1, p.d())]));
        let out = francoise_recursion(&def, &arr).unwrap();
        let MelnikovOutcome::ObstructionFree { certificate, .. } = out else {
            panic!("{out:?}");
        };
        assert_eq!(certificate.lambdas, ints(&[0, 0, 0]));

        let w = combine_forms(&ints(&[1, 2, -3]), &log_generators(&arr));
        let def = Deformation::new(1, BTreeMap::from([(1, w.clone())]));
        let MelnikovOutcome::ObstructionFree { certificate, .. } = francoise_recursion(&def, &arr).unwrap() else {
            panic!();
        };
        assert_eq!(certificate.grouping.len(), 3);
        assert!(certificate.p.is_zero());

        // A generic P spoils the order-2 condition.
        let def = Deformation::new(1, BTreeMap::from([(1, &w + &P::from_ints(&[(1, 2, 0), (1, 0, 0)]).d())]));
        let out = francoise_recursion(&def, &arr).unwrap();
        assert!(matches!(out, MelnikovOutcome::Obstructed { order: 2, .. }), "{out:?}");

        let bad = ROneForm::new(P::from_ints(&[(1, 0, 2)]), P::from_ints(&[(1, 1, 0)]));
        let def = Deformation::new(1, BTreeMap::from([(1, bad)]));
        assert!(matches!(
            francoise_recursion(&def, &arr).unwrap(),
            MelnikovOutcome::Obstructed { order: 1, .. }
        ));
    }

    #[test]
    fn constructed_deformations() {
        for (d, part, k) in [(2, vec![1, 2], 1), (3, vec![2, 2], 2), (3, vec![1, 1, 2], 1)] {
            let arr = canonical_arrangement(d).unwrap();
            let g = Grouping::from_partition(&part, &arr).unwrap();
            let mu: Vec<Rational> = (0..g.len()).map(|i| q(i as i64 * 2 - 1, 1)).collect();
            let h: Vec<P> = part
                .iter()
                .enumerate()
                .map(|(i, &di)| P::from_ints(&[(1 + i as i64, di as u32, 0), (-1, 0, di as u32 - 1), (3, 0, 0)]))
                .collect();
            let def = logarithmic_deformation(&arr, &g, &mu, &h, k).unwrap();
            let out = francoise_recursion(&def, &arr).unwrap();
            let MelnikovOutcome::ObstructionFree { certificate, through } = out else {
                panic!("d = {d}, {part:?}: {out:?}");
            };
            assert_eq!(through, 2 * k);
            assert_eq!(certificate.grouping.groups, g.groups);
            assert_eq!(assemble_pk(&certificate.grouping, &certificate.group_cofactors, &arr), certificate.p);
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(codim_and_cyclicity(2, &[3]).unwrap().codim_minus_one, 2);
        assert_eq!(codim_and_cyclicity(2, &[1, 2]).unwrap().codim_minus_one, 2);
        for d in 2..7 {
            assert_eq!(codim_and_cyclicity(d, &vec![1; d + 1]).unwrap().codim_minus_one, d * d - 2);
        }
        assert!(codim_and_cyclicity(2, &[1, 1]).is_err());
    }

    #[test]
    fn certificate_json() {
        let o = MelnikovOutcome::Obstructed {
            order: 1,
            residual: ROneForm::zero(),
        };
        let s = serde_json::to_string(&CertificateJson::from(&o)).unwrap();
        assert!(s.starts_with(r#"{"status":"obstructed","order":1"#), "{s}");
        let back: CertificateJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, CertificateJson::from(&o));
    }
}
