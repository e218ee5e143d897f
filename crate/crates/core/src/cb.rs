//! Iterated Campedelli-Burniat configurations.
//!
//! Start from the complete quadrangle on `e1, e2, e3` and `e4 = (1,1,1)`:
//! the sides `L_i = {x_i = 0}` and the medians `Λ_i = {x_j = x_k}`. The
//! contraction `A` maps each `e_i` to the midpoint of the opposite side and
//! fixes `e4`; `C(n)` is the union of `A^m L_i` for `m <= n` and the
//! medians. Everything is computed in exact homogeneous integer
//! coordinates.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Point,
    Line,
}

/// A point, or a line given by the coefficients of its linear form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjectiveElement {
    pub kind: ElementKind,
    pub coords: [i64; 3],
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CbError {
    #[error("zero vector is not a projective element")]
    Zero,
    #[error("lines {0} and {1} coincide")]
    DuplicateLine(String, String),
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn normalize_wide(c: [i128; 3]) -> Option<[i64; 3]> {
    let g = c.iter().fold(0, |g, &x| gcd(g, x));
    if g == 0 {
        return None;
    }
    let sign = if c.iter().find(|&&x| x != 0).copied().unwrap_or(1) < 0 { -1 } else { 1 };
    Some(c.map(|x| i64::try_from(sign * x / g).expect("coordinates fit in i64")))
}

/// Divides by the gcd and makes the first nonzero entry positive.
pub fn normalize(c: [i64; 3]) -> Option<[i64; 3]> {
    normalize_wide(c.map(i128::from))
}

fn cross(u: [i64; 3], v: [i64; 3]) -> [i128; 3] {
    let [a, b, c] = u.map(i128::from);
    let [x, y, z] = v.map(i128::from);
    [b * z - c * y, c * x - a * z, a * y - b * x]
}

impl ProjectiveElement {
    pub fn point(coords: [i64; 3]) -> Result<Self, CbError> {
        Ok(ProjectiveElement { kind: ElementKind::Point, coords: normalize(coords).ok_or(CbError::Zero)? })
    }

    pub fn line(coords: [i64; 3]) -> Result<Self, CbError> {
        Ok(ProjectiveElement { kind: ElementKind::Line, coords: normalize(coords).ok_or(CbError::Zero)? })
    }

    /// Point-line incidence; `false` for two elements of the same kind.
    pub fn incident(&self, other: &ProjectiveElement) -> bool {
        self.kind != other.kind
            && self.coords.iter().zip(&other.coords).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>() == 0
    }

    /// Intersection of two distinct lines, or the line through two distinct
    /// points.
    pub fn meet(&self, other: &ProjectiveElement) -> Option<ProjectiveElement> {
        if self.kind != other.kind {
            return None;
        }
        let kind = match self.kind {
            ElementKind::Line => ElementKind::Point,
            ElementKind::Point => ElementKind::Line,
        };
        normalize_wide(cross(self.coords, other.coords)).map(|coords| ProjectiveElement { kind, coords })
    }
}

impl fmt::Debug for ProjectiveElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coords;
        match self.kind {
            ElementKind::Point => write!(f, "({a},{b},{c})"),
            ElementKind::Line => write!(f, "[{a},{b},{c}]"),
        }
    }
}

impl fmt::Display for ProjectiveElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The contraction `A`: on points the matrix with zero diagonal and ones
/// elsewhere, on linear forms `x_i -> -x_i + x_j + x_k`.
pub fn contract(e: &ProjectiveElement) -> ProjectiveElement {
    let [x, y, z] = e.coords;
    let coords = match e.kind {
        ElementKind::Point => [y + z, x + z, x + y],
        ElementKind::Line => [-x + y + z, x - y + z, x + y - z],
    };
    ProjectiveElement { kind: e.kind, coords: normalize(coords).expect("A is invertible") }
}

pub fn contract_pow(e: &ProjectiveElement, m: u32) -> ProjectiveElement {
    (0..m).fold(*e, |acc, _| contract(&acc))
}

/// `a_n = 1 - (-2)^(n+1)`, defined for `n >= -1`.
pub fn a_seq(n: i64) -> i64 {
    assert!(n >= -1, "a_n needs n >= -1");
    1 - (-2i64).pow((n + 1) as u32)
}

/// `(a_n, b_n, c_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceTriple {
    pub n: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// The triple for `n >= 0`. (`b_{-1} = 1/2` is not an integer; only
/// `a_{-1} = 0` is used below level 0.)
pub fn sequence(n: i64) -> SequenceTriple {
    assert!(n >= 0, "b_n and c_n are integers only for n >= 0");
    let b = (1 - (-2i64).pow(n as u32)).abs() / 3;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    SequenceTriple { n, a: a_seq(n), b, c: b + sign }
}

/// `L_i(m) = {a_m x_i + a_{m-1} (x_j + x_k) = 0}`.
pub fn line_at_level(i: usize, m: u32) -> ProjectiveElement {
    assert!((1..=3).contains(&i), "side index {i} out of range");
    let (am, am1) = (a_seq(m as i64), a_seq(m as i64 - 1));
    let mut c = [am1; 3];
    c[i - 1] = am;
    ProjectiveElement::line(c).expect("a_m and a_(m-1) never both vanish")
}

/// The median `Λ_i = {x_j = x_k}`.
pub fn median(i: usize) -> ProjectiveElement {
    let mut c = [1i64; 3];
    c[i - 1] = 0;
    let k = (0..3).rev().find(|&k| k != i - 1).expect("two other coordinates");
    c[k] = -1;
    ProjectiveElement::line(c).expect("nonzero")
}

/// The vertex `e_i` (`i = 4` gives the barycentre).
pub fn vertex(i: usize) -> ProjectiveElement {
    let coords = match i {
        1 => [1, 0, 0],
        2 => [0, 1, 0],
        3 => [0, 0, 1],
        4 => [1, 1, 1],
        _ => panic!("vertex index {i} out of range"),
    };
    ProjectiveElement::point(coords).expect("nonzero")
}

/// `ê_i`, the common point of all the `L_i(m)`.
pub fn hat_point(i: usize) -> ProjectiveElement {
    let mut c = [1i64; 3];
    c[i - 1] = 0;
    let k = (0..3).rev().find(|&k| k != i - 1).expect("two other coordinates");
    c[k] = -1;
    ProjectiveElement::point(c).expect("nonzero")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigLine {
    pub label: String,
    pub line: ProjectiveElement,
}

/// The `3(n+2)` lines of `C(n)`: `L_i(m)` for `i = 1..3`, `m = 0..n`, then
/// `Λ_1, Λ_2, Λ_3`.
pub fn build_configuration(n: u32) -> Result<Vec<ConfigLine>, CbError> {
    let mut lines = Vec::with_capacity(3 * (n as usize + 2));
    for m in 0..=n {
        for i in 1..=3 {
            lines.push(ConfigLine { label: format!("L{i}({m})"), line: line_at_level(i, m) });
        }
    }
    for i in 1..=3 {
        lines.push(ConfigLine { label: format!("Λ{i}"), line: median(i) });
    }
    let mut seen: BTreeMap<ProjectiveElement, &str> = BTreeMap::new();
    for l in &lines {
        if let Some(prev) = seen.insert(l.line, &l.label) {
            return Err(CbError::DuplicateLine(prev.to_string(), l.label.clone()));
        }
    }
    Ok(lines)
}

/// Where a point of the census comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFamily {
    /// `e_1, .., e_4`.
    Vertex,
    /// `e_i(m)` with `1 <= m <= n`.
    Orbit,
    /// `ê_i`.
    Hat,
    /// Any other intersection point.
    Other,
}

impl PointFamily {
    /// Number of points and their valency according to the closed formulas.
    pub fn expected(&self, n: u32) -> (usize, usize) {
        let n = n as usize;
        match self {
            PointFamily::Vertex => (4, 3),
            PointFamily::Orbit => (3 * n, 4),
            PointFamily::Hat => (3, n + 1),
            PointFamily::Other => (3 * n * n.saturating_sub(1) + 3, 2),
        }
    }

    pub const ALL: [PointFamily; 4] = [PointFamily::Vertex, PointFamily::Orbit, PointFamily::Hat, PointFamily::Other];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusPoint {
    pub point: ProjectiveElement,
    pub valency: usize,
    pub family: PointFamily,
    /// Indices into the line list.
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceCensus {
    pub n: u32,
    pub lines: Vec<ConfigLine>,
    pub points: Vec<CensusPoint>,
    /// Number of points per valency.
    pub tally: BTreeMap<usize, usize>,
    /// Number of points per family and valency.
    pub by_family: BTreeMap<PointFamily, BTreeMap<usize, usize>>,
}

impl IncidenceCensus {
    /// `Sum_P C(v_P, 2)`.
    pub fn pair_count(&self) -> usize {
        self.points.iter().map(|p| p.valency * (p.valency - 1) / 2).sum()
    }

    /// Every pair of lines meets exactly once.
    pub fn pair_identity(&self) -> bool {
        let l = self.lines.len();
        self.pair_count() == l * (l - 1) / 2
    }

    /// Tally predicted by the closed formulas, valencies below 2 omitted and
    /// colliding valencies merged.
    pub fn formula_tally(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in PointFamily::ALL {
            let (count, valency) = f.expected(self.n);
            if valency >= 2 && count > 0 {
                *out.entry(valency).or_default() += count;
            }
        }
        out
    }

    /// Every family has the predicted size and valency.
    pub fn families_match(&self) -> bool {
        PointFamily::ALL.iter().all(|f| {
            let (count, valency) = f.expected(self.n);
            let got = self.by_family.get(f).cloned().unwrap_or_default();
            if valency < 2 || count == 0 {
                got.is_empty()
            } else {
                got == BTreeMap::from([(valency, count)])
            }
        })
    }
}

fn family_table(n: u32) -> BTreeMap<ProjectiveElement, PointFamily> {
    let mut table = BTreeMap::new();
    for i in 1..=3 {
        let mut p = vertex(i);
        for _ in 1..=n {
            p = contract(&p);
            table.insert(p, PointFamily::Orbit);
        }
        table.insert(hat_point(i), PointFamily::Hat);
    }
    for i in 1..=4 {
        table.insert(vertex(i), PointFamily::Vertex);
    }
    table
}

/// Intersects all pairs of lines of `C(n)` and counts the lines through
/// each resulting point.
pub fn census(n: u32) -> Result<IncidenceCensus, CbError> {
    let lines = build_configuration(n)?;
    let mut through: BTreeMap<ProjectiveElement, Vec<usize>> = BTreeMap::new();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let p = lines[a].line.meet(&lines[b].line).expect("distinct lines meet in a point");
            through.entry(p).or_default();
        }
    }
    for (p, members) in through.iter_mut() {
        members.extend((0..lines.len()).filter(|&k| lines[k].line.incident(p)));
    }
    let families = family_table(n);
    let mut tally = BTreeMap::new();
    let mut by_family: BTreeMap<PointFamily, BTreeMap<usize, usize>> = BTreeMap::new();
    let points: Vec<CensusPoint> = through
        .into_iter()
        .map(|(point, members)| {
            let family = families.get(&point).copied().unwrap_or(PointFamily::Other);
            let valency = members.len();
            *tally.entry(valency).or_default() += 1;
            *by_family.entry(family).or_default().entry(valency).or_default() += 1;
            CensusPoint { point, valency, family, lines: members }
        })
        .collect();
    Ok(IncidenceCensus { n, lines, points, tally, by_family })
}

/// Checks of the closed formulas at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbCheck {
    pub n: u32,
    pub line_count_ok: bool,
    /// `e_i(n) = A^n e_i` has the pattern `(c_n, b_n, b_n)`.
    pub orbit_points_ok: bool,
    pub pair_identity_ok: bool,
    pub tally_ok: bool,
    pub families_ok: bool,
    /// `Λ_2 ∩ L_1(n) = (b_n, 2 b_(n-1), b_n)`.
    pub median2_meets_l1_ok: bool,
    /// `Λ_1 ∩ L_1(n)` equals `e_1(n+1)`.
    pub median1_meets_l1_is_next_orbit_point: bool,
    /// `Λ_1 ∩ L_1(n)` equals `e_1(n)`.
    pub median1_meets_l1_is_orbit_point: bool,
    /// `L_j ∩ L_i(n)` is `(b_n, 0, b_(n+1))` up to permuting coordinates.
    pub side_meets_level_ok: bool,
    /// `L_1 ∩ L_1(n) = ê_1`.
    pub side_meets_own_level_is_hat: bool,
}

impl CbCheck {
    pub fn pass(&self) -> bool {
        self.line_count_ok
            && self.orbit_points_ok
            && self.pair_identity_ok
            && self.tally_ok
            && self.families_ok
            && self.median2_meets_l1_ok
            && self.median1_meets_l1_is_next_orbit_point
            && self.side_meets_level_ok
            && self.side_meets_own_level_is_hat
    }
}

fn same_up_to_permutation(p: [i64; 3], q: [i64; 3]) -> bool {
    let (mut a, mut b) = (p.map(i64::abs), q.map(i64::abs));
    a.sort();
    b.sort();
    a == b && p.iter().filter(|&&x| x < 0).count() == 0
}

pub fn check_level(n: u32) -> Result<CbCheck, CbError> {
    let c = census(n)?;
    let s = sequence(n as i64);
    let s_next = sequence(n as i64 + 1);
    let orbit_points_ok = (1..=3).all(|i| {
        let mut expected = [s.b; 3];
        expected[i - 1] = s.c;
        contract_pow(&vertex(i), n).coords == normalize(expected).expect("nonzero")
    });
    let meet = |x: &ProjectiveElement, y: &ProjectiveElement| x.meet(y).expect("distinct lines").coords;
    let l1n = line_at_level(1, n);
    let median2_meets_l1_ok = n == 0 || {
        let prev = sequence(n as i64 - 1);
        meet(&median(2), &l1n) == normalize([s.b, 2 * prev.b, s.b]).expect("nonzero")
    };
    let m1 = meet(&median(1), &l1n);
    let next_orbit = contract_pow(&vertex(1), n + 1).coords;
    let orbit = contract_pow(&vertex(1), n).coords;
    let side_meets_level_ok = (1..=3).all(|i| {
        (1..=3).filter(|&j| j != i).all(|j| {
            let p = meet(&line_at_level(j, 0), &line_at_level(i, n));
            n == 0 || same_up_to_permutation(p, normalize([s.b, 0, s_next.b]).expect("nonzero"))
        })
    });
    let side_meets_own_level_is_hat = n == 0 || meet(&line_at_level(1, 0), &l1n) == hat_point(1).coords;
    Ok(CbCheck {
        n,
        line_count_ok: c.lines.len() == 3 * (n as usize + 2),
        orbit_points_ok,
        pair_identity_ok: c.pair_identity(),
        tally_ok: c.tally == c.formula_tally(),
        families_ok: c.families_match(),
        median2_meets_l1_ok,
        median1_meets_l1_is_next_orbit_point: m1 == next_orbit,
        median1_meets_l1_is_orbit_point: m1 == orbit,
        side_meets_level_ok,
        side_meets_own_level_is_hat,
    })
}

/// Runs [`check_level`] for `n = 0..=max_n`.
pub fn verify_cb_formulas(max_n: u32) -> Result<Vec<CbCheck>, CbError> {
    (0..=max_n).map(check_level).collect()
}

const CORNERS: [(f64, f64); 3] = [(0.0, 0.0), (10.0, 0.0), (5.0, 8.660254)];

fn barycentric(p: [f64; 3]) -> Option<(f64, f64)> {
    let s: f64 = p.iter().sum();
    if s.abs() < 1e-12 {
        return None;
    }
    let w = p.map(|x| x / s);
    if w.iter().any(|&x| x < -1e-9) {
        return None;
    }
    Some((w.iter().zip(&CORNERS).map(|(a, c)| a * c.0).sum(), w.iter().zip(&CORNERS).map(|(a, c)| a * c.1).sum()))
}

/// The part of the line inside the reference triangle, in drawing
/// coordinates.
fn clip(line: &ProjectiveElement) -> Option<((f64, f64), (f64, f64))> {
    let mut ends: Vec<(f64, f64)> = Vec::new();
    for side in 1..=3 {
        let Some(p) = line.meet(&line_at_level(side, 0)) else {
            continue;
        };
        if let Some(q) = barycentric(p.coords.map(|x| x as f64)) {
            if ends.iter().all(|e| (e.0 - q.0).hypot(e.1 - q.1) > 1e-9) {
                ends.push(q);
            }
        }
    }
    (ends.len() >= 2).then(|| (ends[0], ends[1]))
}

/// SVG drawing of `C(n)` in the reference triangle `e1 e2 e3`, with the
/// points of valency at least 3 marked.
pub fn to_svg(c: &IncidenceCensus) -> String {
    let scale = 60.0;
    let pad = 30.0;
    let (w, h) = (10.0 * scale + 2.0 * pad, 8.660254 * scale + 2.0 * pad);
    let tx = |p: (f64, f64)| (pad + p.0 * scale, h - pad - p.1 * scale);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n"
    );
    out.push_str(&format!("<title>Campedelli-Burniat configuration C({})</title>\n", c.n));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let last_level = format!("({})", c.n);
    for l in &c.lines {
        let Some((a, b)) = clip(&l.line) else {
            continue;
        };
        let ((x1, y1), (x2, y2)) = (tx(a), tx(b));
        let colour = if c.n > 0 && l.label.ends_with(&last_level) { "#c0392b" } else { "#222" };
        out.push_str(&format!(
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{colour}\" stroke-width=\"1.2\"><title>{}</title></line>\n",
            l.label
        ));
    }
    for p in c.points.iter().filter(|p| p.valency >= 3) {
        let Some(q) = barycentric(p.point.coords.map(|x| x as f64)) else {
            continue;
        };
        let (x, y) = tx(q);
        out.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{}\" fill=\"#2c6fbb\"><title>{} valency {}</title></circle>\n",
            1.5 + p.valency as f64,
            p.point,
            p.valency
        ));
    }
    for (i, (x, y)) in CORNERS.iter().enumerate() {
        let (x, y) = tx((*x, *y));
        let dy = if i == 2 { -10.0 } else { 18.0 };
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"serif\" font-size=\"14\" text-anchor=\"middle\">e{}</text>\n",
            y + dy,
            i + 1
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_examples() {
        assert_eq!(a_seq(-1), 0);
        let s0 = sequence(0);
        assert_eq!((s0.a, s0.b, s0.c), (3, 0, 1));
        let s1 = sequence(1);
        assert_eq!((s1.a, s1.b, s1.c), (-3, 1, 0));
        let s4 = sequence(4);
        assert_eq!((s4.a, s4.b, s4.c), (33, 5, 6));
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(contract(&vertex(1)).coords, [0, 1, 1]);
        assert_eq!(contract(&vertex(4)), vertex(4));
        for i in 1..=3 {
            assert_eq!(contract(&median(i)), median(i));
        }
        assert_eq!(contract_pow(&vertex(1), 2).coords, [2, 1, 1]);
    }

    #[test]
    fn levels() {
        assert_eq!(line_at_level(1, 0).coords, [1, 0, 0]);
        assert_eq!(line_at_level(1, 1).coords, [1, -1, -1]);
        for i in 1..=3 {
            for m in 0..=10 {
                assert_eq!(line_at_level(i, m), contract_pow(&line_at_level(i, 0), m));
            }
        }
    }

    #[test]
    fn normalization_is_idempotent() {
        for c in [[2, -4, 6], [0, -3, 3], [-1, 0, 0], [5, 7, 11]] {
            let once = normalize(c).unwrap();
            assert_eq!(normalize(once), Some(once));
            assert!(once.iter().find(|&&x| x != 0).unwrap() > &0);
        }
        assert_eq!(normalize([0, 0, 0]), None);
        assert_eq!(ProjectiveElement::point([0, 0, 0]), Err(CbError::Zero));
    }

    #[test]
    fn census_examples() {
        assert_eq!(census(0).unwrap().tally, BTreeMap::from([(2, 3), (3, 4)]));
        assert_eq!(census(1).unwrap().tally, BTreeMap::from([(2, 6), (3, 4), (4, 3)]));
        assert_eq!(census(2).unwrap().tally, BTreeMap::from([(2, 9), (3, 7), (4, 6)]));
        assert_eq!(census(3).unwrap().tally, BTreeMap::from([(2, 21), (3, 4), (4, 12)]));
        assert_eq!(census(4).unwrap().tally, BTreeMap::from([(2, 39), (3, 4), (4, 12), (5, 3)]));
    }

    #[test]
    fn level_two_intersections() {
        assert_eq!(contract_pow(&vertex(1), 2).coords, [2, 1, 1]);
        assert_eq!(median(2).meet(&line_at_level(1, 2)).unwrap().coords, [1, 2, 1]);
    }

    #[test]
    fn median_meets_side_at_the_next_orbit_point() {
        for n in 0..=8 {
            let c = check_level(n).unwrap();
            assert!(c.pass(), "{c:?}");
            assert!(c.median1_meets_l1_is_next_orbit_point);
            assert!(!c.median1_meets_l1_is_orbit_point);
        }
    }

    #[test]
    fn svg_has_every_line() {
        let c = census(3).unwrap();
        let svg = to_svg(&c);
        assert_eq!(svg.matches("<line ").count(), c.lines.len());
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn formulas_hold_up_to_level_eight() {
        let checks = verify_cb_formulas(8).unwrap();
        assert_eq!(checks.len(), 9);
        assert!(checks.iter().all(CbCheck::pass));
        assert!(checks.iter().all(|c| !c.median1_meets_l1_is_orbit_point));
    }
}
