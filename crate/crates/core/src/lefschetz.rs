//! Vanishing-cycle lattice of a line-arrangement Hamiltonian: the
//! Gusein-Zade / A'Campo intersection form, Picard-Lefschetz monodromy and
//! orbit spans over Q.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arrangement::Combinatorics;
use crate::error::{Error, Result};
use crate::{RMatrix, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    /// Center with negative critical value (`f < 0` on the face).
    CenterMin,
    Saddle,
    /// Center with positive critical value.
    CenterMax,
}

/// A basis cycle: its kind and the face or vertex it vanishes at.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Label {
    pub kind: CycleKind,
    pub index: usize,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CycleKind::CenterMin => write!(f, "min:face{}", self.index),
            CycleKind::Saddle => write!(f, "saddle:vertex{}", self.index),
            CycleKind::CenterMax => write!(f, "max:face{}", self.index),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub type Cycle = Vec<Rational>;

#[derive(Clone, Debug, PartialEq)]
pub struct CycleLattice {
    /// Basis order: all `CenterMin`, then all `Saddle`, then all `CenterMax`.
    pub labels: Vec<Label>,
    /// `form[(i, j)] = <delta_i, delta_j>`, integral and antisymmetric.
    pub form: RMatrix,
    pub mu: usize,
    pub d: usize,
    /// True when the max-min block had to be negated to pass the audit.
    pub flipped: bool,
    /// Sign-adjusted line cycles found by the audit.
    pub line_cycles: Vec<Cycle>,
    pub line_signs: Vec<i8>,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn unit(n: usize, i: usize) -> Cycle {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `<a, b> = a^T B b`.
pub fn pairing(form: &RMatrix, a: &[Rational], b: &[Rational]) -> Rational {
    let bb = form.mul_vec(b);
    a.iter()
        .zip(&bb)
        .filter(|(x, _)| !x.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn build_form(comb: &Combinatorics, flip: bool) -> (Vec<Label>, RMatrix) {
    let mins: Vec<usize> = (0..comb.faces.len()).filter(|&i| comb.face_sign[i] < 0).collect();
    let maxs: Vec<usize> = (0..comb.faces.len()).filter(|&i| comb.face_sign[i] > 0).collect();
    let nv = comb.vertices.len();
    let mut labels = Vec::new();
    labels.extend(mins.iter().map(|&i| Label {
        kind: CycleKind::CenterMin,
        index: i,
    }));
    labels.extend((0..nv).map(|j| Label {
        kind: CycleKind::Saddle,
        index: j,
    }));
    labels.extend(maxs.iter().map(|&k| Label {
        kind: CycleKind::CenterMax,
        index: k,
    }));
    let mu = labels.len();
    let (s0, s2) = (0, mins.len() + nv);
    let s1 = mins.len();
    let mut b = RMatrix::zeros(mu, mu);
    let mut set = |i: usize, j: usize, v: i64| {
        b[(i, j)] = int(v);
        b[(j, i)] = int(-v);
    };
    for (a, &i) in mins.iter().enumerate() {
        for j in 0..nv {
            let v = comb.incidence_v[i][j] as i64;
            if v != 0 {
                set(s0 + a, s1 + j, v);
            }
        }
    }
    for (c, &k) in maxs.iter().enumerate() {
        for j in 0..nv {
            let w = comb.incidence_v[k][j] as i64;
            if w != 0 {
                set(s1 + j, s2 + c, w);
            }
        }
        for (a, &i) in mins.iter().enumerate() {
            let e = comb.incidence_e[k][i] as i64;
            if e != 0 {
                set(s2 + c, s0 + a, if flip { -e } else { e });
            }
        }
    }
    (labels, b)
}

/// Alternating sums `sum_j (-1)^j delta_j` of the saddle cycles along each
/// line, `j = 1..d` in the line's vertex order.
fn raw_line_cycles(comb: &Combinatorics, labels: &[Label]) -> Vec<Cycle> {
    let mu = labels.len();
    let saddle_offset = labels
        .iter()
        .position(|l| l.kind == CycleKind::Saddle)
        .unwrap_or(0);
    comb.per_line_order
        .iter()
        .map(|order| {
            let mut v = vec![Rational::zero(); mu];
            for (j, &vert) in order.iter().enumerate() {
                v[saddle_offset + vert] = if (j + 1) % 2 == 0 { int(1) } else { int(-1) };
            }
            v
        })
        .collect()
}

/// Signs `eps` with `eps_0 = 1` and `sum eps_p c_p = 0`, by exhaustive search.
fn coherent_signs(cycles: &[Cycle]) -> Option<Vec<i8>> {
    let n = cycles.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mu = cycles[0].len();
    (0u64..1 << (n - 1)).find_map(|mask| {
        let signs: Vec<i8> = (0..n)
            .map(|p| if p > 0 && mask >> (p - 1) & 1 == 1 { -1 } else { 1 })
            .collect();
        let zero = (0..mu).all(|i| {
            cycles
                .iter()
                .zip(&signs)
                .fold(Rational::zero(), |acc, (c, &s)| acc + &c[i] * int(s as i64))
                .is_zero()
        });
        zero.then_some(signs)
    })
}

struct Audit {
    line_cycles: Vec<Cycle>,
    signs: Vec<i8>,
}

fn audit(comb: &Combinatorics, labels: &[Label], form: &RMatrix, d: usize) -> Option<Audit> {
    let mu = labels.len();
    if mu - form.rank() != d {
        return None;
    }
    let raw = raw_line_cycles(comb, labels);
    if raw.iter().any(|c| !is_zero_vec(&form.mul_vec(c))) {
        return None;
    }
    let signs = coherent_signs(&raw)?;
    let line_cycles = raw
        .iter()
        .zip(&signs)
        .map(|(c, &s)| c.iter().map(|v| v * int(s as i64)).collect())
        .collect();
    Some(Audit { line_cycles, signs })
}

/// Intersection form with cyclic-positive blocks
/// `<min, saddle> = v`, `<saddle, max> = w`, `<max, min> = e`.
///
/// The result must have radical of rank `d`, and the line cycles must lie in
/// the radical with a coherent choice of signs summing to zero. If that
/// audit fails the max-min block is negated once and the audit rerun.
pub fn intersection_form(comb: &Combinatorics, d: usize) -> Result<CycleLattice> {
    for flip in [false, true] {
        let (labels, form) = build_form(comb, flip);
        if let Some(a) = audit(comb, &labels, &form, d) {
            return Ok(CycleLattice {
                mu: labels.len(),
                labels,
                form,
                d,
                flipped: flip,
                line_cycles: a.line_cycles,
                line_signs: a.signs,
            });
        }
    }
    Err(Error::invariant("orientation audit failed"))
}

/// A named integer monodromy matrix acting on coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyOperator {
    pub label: String,
    pub matrix: RMatrix,
    pub inverse: RMatrix,
}

impl MonodromyOperator {
    pub fn apply(&self, c: &[Rational]) -> Cycle {
        self.matrix.mul_vec(c)
    }

    pub fn apply_inverse(&self, c: &[Rational]) -> Cycle {
        self.inverse.mul_vec(c)
    }

    pub fn is_unimodular(&self) -> bool {
        let det = self.matrix.det();
        det.is_integer() && det.abs().is_one()
    }
}

/// `c -> c - s <c, delta_v> delta_v` as a matrix; `s = 1` is the
/// Picard-Lefschetz transvection, `s = -1` its inverse.
fn transvection(form: &RMatrix, v: usize, s: i64) -> RMatrix {
    let mu = form.rows();
    let mut m = RMatrix::identity(mu);
    for i in 0..mu {
        // <e_i, delta_v> = B[i][v]
        let c = &form[(i, v)];
        if !c.is_zero() {
            m[(v, i)] = &m[(v, i)] - c * int(s);
        }
    }
    m
}

impl CycleLattice {
    pub fn basis_index(&self, kind: CycleKind, index: usize) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l.kind == kind && l.index == index)
    }

    /// Basis position of the center cycle of face `face`.
    pub fn face_index(&self, face: usize) -> Option<usize> {
        self.basis_index(CycleKind::CenterMin, face)
            .or_else(|| self.basis_index(CycleKind::CenterMax, face))
    }

    pub fn saddle_indices(&self) -> Vec<usize> {
        (0..self.mu)
            .filter(|&i| self.labels[i].kind == CycleKind::Saddle)
            .collect()
    }

    pub fn center_indices(&self) -> Vec<usize> {
        (0..self.mu)
            .filter(|&i| self.labels[i].kind != CycleKind::Saddle)
            .collect()
    }

    pub fn pairing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        pairing(&self.form, a, b)
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    /// Entries as machine integers, for reports.
    pub fn form_rows(&self) -> Vec<Vec<i64>> {
        to_int_rows(&self.form)
    }
}

pub fn to_int_rows(m: &RMatrix) -> Vec<Vec<i64>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.iter().map(|v| v.to_integer().to_i64().expect("small integer entry")).collect())
        .collect()
}

/// Monodromy around the critical value 0: the product of the transvections
/// of all saddle cycles. They commute since saddles pair to zero.
pub fn monodromy_h0(lat: &CycleLattice) -> MonodromyOperator {
    let mu = lat.mu;
    let mut m = RMatrix::identity(mu);
    let mut inv = RMatrix::identity(mu);
    for v in lat.saddle_indices() {
        m = &m * &transvection(&lat.form, v, 1);
        inv = &inv * &transvection(&lat.form, v, -1);
    }
    MonodromyOperator {
        label: "h0".to_string(),
        matrix: m,
        inverse: inv,
    }
}

/// Transvection around the critical value of the center cycle at basis
/// position `center`.
pub fn monodromy_center(lat: &CycleLattice, center: usize) -> MonodromyOperator {
    MonodromyOperator {
        label: format!("center {}", lat.labels[center]),
        matrix: transvection(&lat.form, center, 1),
        inverse: transvection(&lat.form, center, -1),
    }
}

/// `h0` followed by one transvection per center cycle.
pub fn monodromy_generators(lat: &CycleLattice) -> Vec<MonodromyOperator> {
    let mut out = vec![monodromy_h0(lat)];
    out.extend(lat.center_indices().into_iter().map(|c| monodromy_center(lat, c)));
    out
}

/// `M^T B M = B` and `M M^{-1} = I`.
pub fn preserves_form(lat: &CycleLattice, op: &MonodromyOperator) -> bool {
    let m = &op.matrix;
    &(&m.transpose() * &lat.form) * m == lat.form
        && &op.matrix * &op.inverse == RMatrix::identity(lat.mu)
}

/// Integer basis of `{c in Z^mu : B c = 0}` via unimodular column reduction.
pub fn radical_basis(lat: &CycleLattice) -> Vec<Cycle> {
    let m = lat.mu;
    let mut a: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| lat.form[(i, j)].to_integer()).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let col_op = |mat: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in mat.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    };
    let swap = |mat: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut k = 0;
    for r in 0..m {
        if k == m {
            break;
        }
        loop {
            let best = (k..m)
                .filter(|&j| !a[r][j].is_zero())
                .min_by(|&i, &j| a[r][i].abs().cmp(&a[r][j].abs()));
            let Some(best) = best else { break };
            swap(&mut a, k, best);
            swap(&mut u, k, best);
            let mut done = true;
            for j in k + 1..m {
                if a[r][j].is_zero() {
                    continue;
                }
                let q = a[r][j].div_floor(&a[r][k]);
                col_op(&mut a, j, k, &q);
                col_op(&mut u, j, k, &q);
                if !a[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[r][k].is_zero() {
            k += 1;
        }
    }
    (k..m)
        .map(|j| (0..m).map(|i| Rational::from_integer(u[i][j].clone())).collect())
        .collect()
}

/// `delta^i = sum_j <delta_i, delta_j> delta_j` over saddles, for every
/// center cycle in basis order, checked against `delta_i - h0(delta_i)`.
pub fn face_cycles(lat: &CycleLattice) -> Result<Vec<Cycle>> {
    let h0 = monodromy_h0(lat);
    let saddles = lat.saddle_indices();
    let mut out = Vec::new();
    for c in lat.center_indices() {
        let mut v = vec![Rational::zero(); lat.mu];
        for &j in &saddles {
            v[j] = lat.form[(c, j)].clone();
        }
        let e = unit(lat.mu, c);
        let hc = h0.apply(&e);
        let diff: Cycle = e.iter().zip(&hc).map(|(a, b)| a - b).collect();
        if diff != v {
            return Err(Error::invariant(format!(
                "face cycle of {} differs from delta - h0(delta)",
                lat.labels[c]
            )));
        }
        out.push(v);
    }
    Ok(out)
}

/// Line cycles after sign adjustment, with the chosen signs.
pub fn line_cycles(lat: &CycleLattice) -> (Vec<Cycle>, Vec<i8>) {
    (lat.line_cycles.clone(), lat.line_signs.clone())
}

/// Rank of a set of vectors over Q.
pub fn span_rank(vectors: &[Cycle]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RMatrix::from_rows(vectors.to_vec()).rank()
}

/// `{eps_p delta^{l_p}}_{p=1..d}` together with all face cycles are
/// independent and span the saddle coordinates.
pub fn saddle_span_certificate(lat: &CycleLattice) -> Result<bool> {
    let mut vs: Vec<Cycle> = lat.line_cycles.iter().skip(1).cloned().collect();
    vs.extend(face_cycles(lat)?);
    let saddles = lat.saddle_indices();
    let in_saddle_space = vs.iter().all(|v| {
        v.iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || lat.labels[i].kind == CycleKind::Saddle)
    });
    Ok(in_saddle_space && vs.len() == saddles.len() && span_rank(&vs) == saddles.len())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitStep {
    /// Index of the spanning vector the generator was applied to.
    pub parent: usize,
    pub generator: String,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitSpan {
    pub start: String,
    pub rank_total: usize,
    pub rank_mod_radical: usize,
    pub radical_rank: usize,
    /// `rank_mod_radical == mu - d`.
    pub theorem_2_3: bool,
    /// How each spanning vector after the first was produced.
    pub word_log: Vec<OrbitStep>,
}

/// Incremental echelon basis over Q.
struct Echelon {
    rows: Vec<(usize, Cycle)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Adds `v` if it is independent of the current rows.
    fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let c = &w[*p] / &row[*p];
            for (wi, ri) in w.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *wi -= &c * ri;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// Closure of `span{start}` under all monodromy generators and their
/// inverses, over Q.
pub fn orbit_span(
    lat: &CycleLattice,
    generators: &[MonodromyOperator],
    radical: &[Cycle],
    start: &[Rational],
    start_name: &str,
) -> OrbitSpan {
    let mut span = Echelon::new();
    let mut vectors: Vec<Cycle> = Vec::new();
    let mut log = Vec::new();
    let mut queue = VecDeque::new();
    if span.insert(start) {
        vectors.push(start.to_vec());
        queue.push_back(0);
    }
    while let Some(i) = queue.pop_front() {
        for g in generators {
            for inverse in [false, true] {
                let img = if inverse {
                    g.apply_inverse(&vectors[i])
                } else {
                    g.apply(&vectors[i])
                };
                if span.insert(&img) {
                    queue.push_back(vectors.len());
                    vectors.push(img);
                    log.push(OrbitStep {
                        parent: i,
                        generator: g.label.clone(),
                        inverse,
                    });
                }
            }
        }
    }
    let mut with_radical = Echelon::new();
    for r in radical {
        with_radical.insert(r);
    }
    let radical_rank = with_radical.len();
    for v in &vectors {
        with_radical.insert(v);
    }
    let rank_mod_radical = with_radical.len() - radical_rank;
    OrbitSpan {
        start: start_name.to_string(),
        rank_total: span.len(),
        rank_mod_radical,
        radical_rank,
        theorem_2_3: rank_mod_radical == lat.mu - lat.d,
        word_log: log,
    }
}

/// Orbit span starting from basis cycle `i`.
pub fn orbit_of_basis_cycle(
    lat: &CycleLattice,
    generators: &[MonodromyOperator],
    radical: &[Cycle],
    i: usize,
) -> OrbitSpan {
    orbit_span(lat, generators, radical, &unit(lat.mu, i), &lat.labels[i].to_string())
}
