//! Real line arrangements in general position: vertices, bounded faces and
//! their incidences, all by exact rational predicates.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_algebra::{Poly, UPoly};
use crate::milnor::milnor_algebra;
use crate::{Rational, RPoly};

/// `a x + b y + c = 0`, normalized so the first nonzero of `(a, b)` is 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Line {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let lead = if !a.is_zero() {
            a.clone()
        } else if !b.is_zero() {
            b.clone()
        } else {
            return Err(Error::validation("line with a = b = 0"));
        };
        Ok(Line {
            a: a / &lead,
            b: b / &lead,
            c: c / &lead,
        })
    }

    pub fn eval(&self, p: &Point) -> Rational {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    pub fn is_parallel(&self, other: &Line) -> bool {
        (&self.a * &other.b - &self.b * &other.a).is_zero()
    }

    pub fn intersect(&self, other: &Line) -> Option<Point> {
        let det = &self.a * &other.b - &self.b * &other.a;
        if det.is_zero() {
            return None;
        }
        let x = (&self.b * &other.c - &self.c * &other.b) / &det;
        let y = (&self.c * &other.a - &self.a * &other.c) / &det;
        Some(Point { x, y })
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// Coordinate used to order points along the line: `x`, or `y` for
    /// vertical lines.
    fn parameter<'a>(&self, p: &'a Point) -> &'a Rational {
        if self.is_vertical() {
            &p.y
        } else {
            &p.x
        }
    }

    /// Direction of increasing parameter.
    fn forward(&self) -> (Rational, Rational) {
        if self.is_vertical() {
            (Rational::zero(), Rational::one())
        } else if self.b.is_positive() {
            (self.b.clone(), -self.a.clone())
        } else {
            (-self.b.clone(), self.a.clone())
        }
    }
}

/// A list of affine lines together with the product of their defining forms.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    pub lines: Vec<Line>,
    pub d: usize,
    /// Defining forms as given, before normalization.
    pub forms: Vec<RPoly>,
    pub f: RPoly,
}

impl Arrangement {
    /// Needs at least two lines.
    pub fn new(coeffs: Vec<[Rational; 3]>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::validation("an arrangement needs at least two lines"));
        }
        let lines = coeffs
            .iter()
            .map(|[a, b, c]| Line::new(a.clone(), b.clone(), c.clone()))
            .collect::<Result<Vec<_>>>()?;
        let forms: Vec<RPoly> = coeffs
            .into_iter()
            .map(|[a, b, c]| Poly::linear(a, b, c))
            .collect();
        let f = forms.iter().fold(RPoly::one(), |acc, l| &acc * l);
        Ok(Arrangement {
            d: lines.len() - 1,
            lines,
            forms,
            f,
        })
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }
}

/// The `d + 1` lines `l_p = (d - p) x + p y - p (d - p)`, `p = 0..d`.
pub fn canonical_arrangement(d: usize) -> Result<Arrangement> {
    if d == 0 {
        return Err(Error::validation("canonical arrangement needs d >= 1"));
    }
    let d = d as i64;
    let coeffs = (0..=d)
        .map(|p| {
            [
                Rational::from_integer((d - p).into()),
                Rational::from_integer(p.into()),
                Rational::from_integer((-p * (d - p)).into()),
            ]
        })
        .collect();
    Arrangement::new(coeffs)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    Duplicate(usize, usize),
    Parallel(usize, usize),
    TriplePoint(Point, Vec<usize>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Duplicate(i, j) => write!(f, "duplicate lines {i} and {j}"),
            Violation::Parallel(i, j) => write!(f, "parallel pair ({i}, {j})"),
            Violation::TriplePoint(p, lines) => {
                write!(f, "triple point at {p} on lines {lines:?}")
            }
        }
    }
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct Validation {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Distinctness, non-parallelism and absence of triple points.
pub fn validate_geometry(arr: &Arrangement) -> Vec<Violation> {
    let n = arr.lines.len();
    let mut out = Vec::new();
    let mut points: Vec<(Point, Vec<usize>)> = Vec::new();
    // Repeated lines are reported once and then ignored for triple points.
    let repeated: Vec<bool> = (0..n)
        .map(|j| (0..j).any(|i| arr.lines[i] == arr.lines[j]))
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            let (li, lj) = (&arr.lines[i], &arr.lines[j]);
            if li == lj {
                out.push(Violation::Duplicate(i, j));
            } else if li.is_parallel(lj) {
                out.push(Violation::Parallel(i, j));
            } else if !(repeated[i] || repeated[j]) {
                let p = li.intersect(lj).unwrap();
                match points.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, ls)) => {
                        for k in [i, j] {
                            if !ls.contains(&k) {
                                ls.push(k);
                            }
                        }
                    }
                    None => points.push((p, vec![i, j])),
                }
            }
        }
    }
    for (p, mut ls) in points {
        if ls.len() > 2 {
            ls.sort_unstable();
            out.push(Violation::TriplePoint(p, ls));
        }
    }
    out
}

/// Geometric validation plus the distinct-center-values check, which only
/// produces a warning.
pub fn validate(arr: &Arrangement) -> Validation {
    let violations = validate_geometry(arr);
    let mut warnings = Vec::new();
    if violations.is_empty() && arr.d >= 2 {
        let faces = arr.d * (arr.d - 1) / 2;
        match milnor_algebra(&arr.f).and_then(|ma| ma.spectral_data()) {
            Ok(sd) => {
                let mut sq = sd.squarefree_part.clone();
                if let Some(q) = sq.div_exact(&UPoly::t()) {
                    sq = q;
                }
                let distinct = sq.degree().unwrap() as usize;
                if distinct != faces {
                    warnings.push(format!(
                        "center values not distinct: {distinct} distinct nonzero critical values for {faces} bounded faces"
                    ));
                }
            }
            Err(e) => warnings.push(format!("spectral check skipped: {e}")),
        }
    }
    Validation {
        violations,
        warnings,
    }
}

/// A boundary edge of a face: the supporting line and its two endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub line: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Face {
    /// Counter-clockwise cycle of vertex indices.
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Vertex {
    pub point: Point,
    pub lines: (usize, usize),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Combinatorics {
    pub vertices: Vec<Vertex>,
    pub faces: Vec<Face>,
    /// Sign of `f` inside each face, `-1` or `1`.
    pub face_sign: Vec<i8>,
    /// `incidence_v[face][vertex]`.
    pub incidence_v: Vec<Vec<u32>>,
    /// `incidence_e[face][face]`: number of common edges.
    pub incidence_e: Vec<Vec<u32>>,
    /// For each line, its vertices in ascending parameter order.
    pub per_line_order: Vec<Vec<usize>>,
}

fn half_plane(v: &(Rational, Rational)) -> u8 {
    if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) {
        0
    } else {
        1
    }
}

/// Counter-clockwise angular order of direction vectors starting at angle 0.
fn angle_cmp(u: &(Rational, Rational), v: &(Rational, Rational)) -> Ordering {
    half_plane(u).cmp(&half_plane(v)).then_with(|| {
        let cross = &u.0 * &v.1 - &u.1 * &v.0;
        Rational::zero().cmp(&cross)
    })
}

/// Half-edge along `line` from position `pos` in the line's vertex order,
/// pointing forward or backward.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct HalfEdge {
    line: usize,
    pos: usize,
    forward: bool,
}

pub fn build_combinatorics(arr: &Arrangement) -> Result<Combinatorics> {
    let violations = validate_geometry(arr);
    if !violations.is_empty() {
        let msgs: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::validation(msgs.join("; ")));
    }
    let n = arr.lines.len();
    let (fx, fy) = (arr.f.dx(), arr.f.dy());

    let mut vertices = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let point = arr.lines[i].intersect(&arr.lines[j]).unwrap();
            let crit = [&arr.f, &fx, &fy]
                .iter()
                .all(|g| g.eval(&point.x, &point.y).is_zero());
            if !crit {
                return Err(Error::invariant(format!(
                    "vertex {point} is not a critical point of f with value 0"
                )));
            }
            vertices.push(Vertex {
                point,
                lines: (i, j),
            });
        }
    }

    let mut per_line_order: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, vert) in vertices.iter().enumerate() {
        per_line_order[vert.lines.0].push(v);
        per_line_order[vert.lines.1].push(v);
    }
    for (l, order) in per_line_order.iter_mut().enumerate() {
        let line = &arr.lines[l];
        order.sort_by(|&u, &v| {
            line.parameter(&vertices[u].point)
                .cmp(line.parameter(&vertices[v].point))
        });
    }
    // position of each vertex on each of its lines
    let mut position: HashMap<(usize, usize), usize> = HashMap::new();
    for (l, order) in per_line_order.iter().enumerate() {
        for (k, &v) in order.iter().enumerate() {
            position.insert((l, v), k);
        }
    }

    // Outgoing directions at each vertex, counter-clockwise. `None` marks
    // a ray to infinity.
    let target = |h: HalfEdge| -> Option<usize> {
        let order = &per_line_order[h.line];
        if h.forward {
            order.get(h.pos + 1).copied()
        } else {
            h.pos.checked_sub(1).map(|k| order[k])
        }
    };
    let mut around: Vec<Vec<HalfEdge>> = Vec::with_capacity(vertices.len());
    for (v, vert) in vertices.iter().enumerate() {
        let mut outs: Vec<(HalfEdge, (Rational, Rational))> = Vec::new();
        for l in [vert.lines.0, vert.lines.1] {
            let (dx, dy) = arr.lines[l].forward();
            let pos = position[&(l, v)];
            outs.push((
                HalfEdge {
                    line: l,
                    pos,
                    forward: true,
                },
                (dx.clone(), dy.clone()),
            ));
            outs.push((
                HalfEdge {
                    line: l,
                    pos,
                    forward: false,
                },
                (-dx, -dy),
            ));
        }
        outs.sort_by(|a, b| angle_cmp(&a.1, &b.1));
        around.push(outs.into_iter().map(|(h, _)| h).collect());
    }

    // Traverse faces keeping them on the left: after arriving at `v` along
    // `h`, leave along the direction immediately clockwise of the reverse
    // of `h`.
    let mut visited: HashMap<HalfEdge, usize> = HashMap::new();
    let mut faces: Vec<Face> = Vec::new();
    let mut leaked = 0usize;
    for start_v in 0..vertices.len() {
        for &start in &around[start_v] {
            if target(start).is_none() || visited.contains_key(&start) {
                continue;
            }
            let mut cycle: Vec<(usize, HalfEdge)> = Vec::new();
            let (mut v, mut h) = (start_v, start);
            let closed = loop {
                if visited.contains_key(&h) {
                    break false;
                }
                visited.insert(h, usize::MAX);
                cycle.push((v, h));
                let Some(w) = target(h) else {
                    break false;
                };
                let back = HalfEdge {
                    line: h.line,
                    pos: position[&(h.line, w)],
                    forward: !h.forward,
                };
                let ring = &around[w];
                let k = ring.iter().position(|x| *x == back).unwrap();
                let next = ring[(k + ring.len() - 1) % ring.len()];
                v = w;
                h = next;
                if h == start {
                    break true;
                }
            };
            if !closed {
                continue;
            }
            let face = Face {
                vertices: cycle.iter().map(|(v, _)| *v).collect(),
                edges: cycle
                    .iter()
                    .map(|(v, h)| Edge {
                        line: h.line,
                        from: *v,
                        to: target(*h).unwrap(),
                    })
                    .collect(),
            };
            let area2 = signed_area2(&face.vertices, &vertices);
            if !area2.is_positive() {
                leaked += 1;
                continue;
            }
            let id = faces.len();
            for (_, h) in &cycle {
                visited.insert(*h, id);
            }
            faces.push(face);
        }
    }

    let expected = arr.d * arr.d.saturating_sub(1) / 2;
    if faces.len() != expected || leaked > 0 {
        return Err(Error::invariant(format!(
            "unbounded-face leak: traversal found {} bounded faces, expected {expected}",
            faces.len()
        )));
    }

    let mut face_sign = Vec::with_capacity(faces.len());
    for face in &faces {
        let p = fan_centroid(face, &vertices, 1);
        let val = arr.f.eval(&p.x, &p.y);
        if val.is_zero() {
            return Err(Error::invariant(format!("f vanishes at interior sample {p}")));
        }
        face_sign.push(if val.is_positive() { 1 } else { -1 });
    }

    let mut incidence_v = vec![vec![0u32; vertices.len()]; faces.len()];
    for (i, face) in faces.iter().enumerate() {
        for &v in &face.vertices {
            incidence_v[i][v] += 1;
        }
    }
    let mut incidence_e = vec![vec![0u32; faces.len()]; faces.len()];
    for (i, face) in faces.iter().enumerate() {
        for e in &face.edges {
            let twin = HalfEdge {
                line: e.line,
                pos: position[&(e.line, e.to)],
                forward: position[&(e.line, e.to)] < position[&(e.line, e.from)],
            };
            if let Some(&j) = visited.get(&twin) {
                if j != usize::MAX && j != i {
                    incidence_e[i][j] += 1;
                }
            }
        }
    }

    Ok(Combinatorics {
        vertices,
        faces,
        face_sign,
        incidence_v,
        incidence_e,
        per_line_order,
    })
}

fn signed_area2(cycle: &[usize], vertices: &[Vertex]) -> Rational {
    let n = cycle.len();
    (0..n).fold(Rational::zero(), |acc, i| {
        let p = &vertices[cycle[i]].point;
        let q = &vertices[cycle[(i + 1) % n]].point;
        acc + &p.x * &q.y - &p.y * &q.x
    })
}

/// Centroid of the fan triangle `(v_0, v_k, v_{k+1})`; `k = 1` is the first
/// ear. Interior for the convex faces of a simple arrangement.
pub fn fan_centroid(face: &Face, vertices: &[Vertex], k: usize) -> Point {
    let pts = [0, k, k + 1].map(|i| &vertices[face.vertices[i]].point);
    let three = Rational::from_integer(3.into());
    Point {
        x: (&pts[0].x + &pts[1].x + &pts[2].x) / &three,
        y: (&pts[0].y + &pts[1].y + &pts[2].y) / &three,
    }
}

/// `(a1, a2, a3)`: negative faces, vertices, positive faces.
pub fn counts(comb: &Combinatorics) -> (usize, usize, usize) {
    let neg = comb.face_sign.iter().filter(|s| **s < 0).count();
    (neg, comb.vertices.len(), comb.faces.len() - neg)
}

/// Closed-form counts for the canonical arrangement:
/// `a1 = sum_{i=2}^{d} ceil((i - 1) / 2)`, `a2 = d (d + 1) / 2`,
/// `a3 = d (d - 1) / 2 - a1`.
pub fn canonical_counts(d: usize) -> (usize, usize, usize) {
    let a1: usize = (2..=d).map(|i| i / 2).sum();
    (a1, d * (d + 1) / 2, d * d.saturating_sub(1) / 2 - a1)
}
