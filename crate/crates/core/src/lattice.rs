//! The Picard lattice of the quartic blow-up `Y = Bl_{p1..p4} P^2`.
//!
//! Classes are integer 5-vectors in the basis `(L, E1, E2, E3, E4)` with the
//! intersection form `diag(1, -1, -1, -1, -1)`. The ten lines of `Y` are
//! indexed by unordered pairs `{i, j}` of `{1, .., 5}`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// An element of `Pic(Y) = Z^5`, stored as `(ell; e1, e2, e3, e4)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass(pub [i64; 5]);

impl DivisorClass {
    pub const ZERO: DivisorClass = DivisorClass([0; 5]);
    /// Pull-back of a line of the plane.
    pub const L: DivisorClass = DivisorClass([1, 0, 0, 0, 0]);

    pub const fn new(ell: i64, e: [i64; 4]) -> Self {
        DivisorClass([ell, e[0], e[1], e[2], e[3]])
    }

    /// Exceptional curve over `p_i`, `i` in `1..=4`.
    pub fn exceptional(i: usize) -> Self {
        assert!((1..=4).contains(&i), "exceptional index out of range: {i}");
        let mut v = [0; 5];
        v[i] = 1;
        DivisorClass(v)
    }

    /// The canonical class `K_Y = -3L + E1 + E2 + E3 + E4`.
    pub const fn canonical() -> Self {
        DivisorClass([-3, 1, 1, 1, 1])
    }

    pub fn ell(&self) -> i64 {
        self.0[0]
    }

    /// Coefficient of `E_i`, `i` in `1..=4`.
    pub fn e(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn coords(&self) -> [i64; 5] {
        self.0
    }

    pub fn self_intersection(&self) -> i64 {
        pairing(*self, *self)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [l, a, b, c, d] = self.0;
        write!(f, "({l};{a},{b},{c},{d})")
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(mut self, rhs: DivisorClass) -> DivisorClass {
        self += rhs;
        self
    }
}

impl AddAssign for DivisorClass {
    fn add_assign(&mut self, rhs: DivisorClass) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(mut self, rhs: DivisorClass) -> DivisorClass {
        self -= rhs;
        self
    }
}

impl SubAssign for DivisorClass {
    fn sub_assign(&mut self, rhs: DivisorClass) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.map(|x| -x))
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass(rhs.0.map(|x| self * x))
    }
}

impl std::iter::Sum for DivisorClass {
    fn sum<I: Iterator<Item = DivisorClass>>(iter: I) -> DivisorClass {
        iter.fold(DivisorClass::ZERO, |acc, c| acc + c)
    }
}

/// The intersection pairing `diag(1, -1, -1, -1, -1)`.
pub fn pairing(a: DivisorClass, b: DivisorClass) -> i64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3] - a.0[4] * b.0[4]
}

/// One of the ten lines of `Y`, named by an unordered pair of `{1, .., 5}`.
///
/// The pairs are numbered `0..10` in lexicographic order
/// (`{1,2}, {1,3}, {1,4}, {1,5}, {2,3}, ..., {4,5}`); that index is also the
/// bit position used by [`crate::LineSet`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinePair {
    lo: u8,
    hi: u8,
}

const PAIR_TABLE: [(u8, u8); 10] = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)];

impl LinePair {
    /// Builds `{i, j}`; `None` unless `i != j` are both in `1..=5`.
    pub fn new(i: u8, j: u8) -> Option<Self> {
        if i == j || !(1..=5).contains(&i) || !(1..=5).contains(&j) {
            return None;
        }
        Some(LinePair { lo: i.min(j), hi: i.max(j) })
    }

    /// Like [`LinePair::new`] but panics on invalid input. For literals.
    pub fn of(i: u8, j: u8) -> Self {
        Self::new(i, j).unwrap_or_else(|| panic!("invalid line pair {{{i},{j}}}"))
    }

    pub fn from_index(idx: usize) -> Self {
        let (lo, hi) = PAIR_TABLE[idx];
        LinePair { lo, hi }
    }

    pub fn index(&self) -> usize {
        // rows of the lexicographic table start at 0, 4, 7, 9
        let start = [0usize, 0, 4, 7, 9][self.lo as usize];
        start + (self.hi - self.lo - 1) as usize
    }

    pub fn all() -> impl Iterator<Item = LinePair> + Clone {
        (0..10).map(LinePair::from_index)
    }

    pub fn indices(&self) -> (u8, u8) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, i: u8) -> bool {
        self.lo == i || self.hi == i
    }

    /// `|self ∩ other|`.
    pub fn overlap(&self, other: &LinePair) -> usize {
        [self.lo, self.hi].iter().filter(|&&x| other.contains(x)).count()
    }

    pub fn permuted(&self, t: &Permutation5) -> LinePair {
        LinePair::of(t.apply(self.lo), t.apply(self.hi))
    }
}

impl fmt::Debug for LinePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}{}", self.lo, self.hi)
    }
}

impl Serialize for LinePair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for LinePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}{}", self.lo, self.hi)
    }
}

/// Divisor class of a line.
///
/// `{i, 5}` is the exceptional curve `E_i`; `{i, j} ⊂ {1..4}` is the strict
/// transform `L - E_h - E_k` of the line through the two remaining points.
pub fn class_of(p: LinePair) -> DivisorClass {
    let (i, j) = p.indices();
    if j == 5 {
        return DivisorClass::exceptional(i as usize);
    }
    let mut v = [1, -1, -1, -1, -1];
    v[i as usize] = 0;
    v[j as usize] = 0;
    DivisorClass(v)
}

fn line_classes() -> &'static [DivisorClass; 10] {
    static CLASSES: OnceLock<[DivisorClass; 10]> = OnceLock::new();
    CLASSES.get_or_init(|| std::array::from_fn(|k| class_of(LinePair::from_index(k))))
}

/// Class of the line with lexicographic index `idx`.
pub fn line_class(idx: usize) -> DivisorClass {
    line_classes()[idx]
}

/// Fibre class of the conic bundle `X_i`.
///
/// `X_i = L - E_i` for `i <= 4`, and `X_5 = 2L - E1 - E2 - E3 - E4`.
pub fn pencil_class(i: u8) -> DivisorClass {
    match i {
        1..=4 => DivisorClass::L - DivisorClass::exceptional(i as usize),
        5 => DivisorClass([2, -1, -1, -1, -1]),
        _ => panic!("pencil index out of range: {i}"),
    }
}

/// The three reducible fibres of `X_i`, one per (2,2)-partition of
/// `{1..5} \ {i}`.
pub fn pencil_fibres(i: u8) -> [(LinePair, LinePair); 3] {
    let rest: Vec<u8> = (1..=5).filter(|&x| x != i).collect();
    let (a, b, c, d) = (rest[0], rest[1], rest[2], rest[3]);
    [
        (LinePair::of(a, b), LinePair::of(c, d)),
        (LinePair::of(a, c), LinePair::of(b, d)),
        (LinePair::of(a, d), LinePair::of(b, c)),
    ]
}

/// Rank over `Q` of the subgroup spanned by `classes`.
pub fn rank_of<I>(classes: I) -> usize
where
    I: IntoIterator<Item = DivisorClass>,
{
    let mut rows: Vec<[i64; 5]> = classes.into_iter().map(|c| c.0).collect();
    integer_rank(&mut rows)
}

/// Fraction-free row reduction; rows are rescaled by their content to keep
/// entries small.
pub(crate) fn integer_rank(rows: &mut [[i64; 5]]) -> usize {
    let mut rank = 0;
    for col in 0..5 {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let p = rows[rank];
        for r in rows.iter_mut().skip(rank + 1) {
            let x = r[col];
            if x == 0 {
                continue;
            }
            for k in 0..5 {
                r[k] = r[k] * p[col] - p[k] * x;
            }
            let g = r.iter().fold(0i64, |g, &v| gcd(g, v));
            if g > 1 {
                for v in r.iter_mut() {
                    *v /= g;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A permutation of `{1, .., 5}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation5([u8; 5]);

impl Permutation5 {
    pub const IDENTITY: Permutation5 = Permutation5([1, 2, 3, 4, 5]);

    /// `images[k]` is the image of `k + 1`.
    pub fn from_images(images: [u8; 5]) -> Option<Self> {
        let mut seen = [false; 6];
        for &x in &images {
            if !(1..=5).contains(&x) || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Permutation5(images))
    }

    /// The transposition `(i j)`.
    pub fn transposition(i: u8, j: u8) -> Self {
        let mut im = [1, 2, 3, 4, 5];
        im.swap(i as usize - 1, j as usize - 1);
        Permutation5::from_images(im).expect("valid transposition")
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.0[i as usize - 1]
    }

    pub fn images(&self) -> [u8; 5] {
        self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation5) -> Permutation5 {
        Permutation5(other.0.map(|x| self.apply(x)))
    }

    pub fn inverse(&self) -> Permutation5 {
        let mut inv = [0u8; 5];
        for (k, &x) in self.0.iter().enumerate() {
            inv[x as usize - 1] = k as u8 + 1;
        }
        Permutation5(inv)
    }

    /// Position in the lexicographic enumeration returned by [`Permutation5::all`].
    pub fn rank(&self) -> usize {
        let mut r = 0;
        for k in 0..5 {
            let smaller_later = self.0[k + 1..].iter().filter(|&&x| x < self.0[k]).count();
            r = r * (5 - k) + smaller_later;
        }
        r
    }

    /// All 120 permutations in lexicographic order of their image tuples.
    pub fn all() -> &'static [Permutation5] {
        static ALL: OnceLock<Vec<Permutation5>> = OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = Vec::with_capacity(120);
            let mut cur = [1u8, 2, 3, 4, 5];
            permute_lex(&mut cur, 0, &mut out);
            out.sort();
            out
        })
    }

    /// Word in the adjacent transpositions `s_k = (k k+1)`, `k` in `1..=4`,
    /// such that the product (leftmost applied last) equals `self`.
    pub fn adjacent_word(&self) -> Vec<u8> {
        // bubble sort the image tuple; each swap of positions k,k+1 is a
        // right multiplication by s_k
        let mut im = self.0;
        let mut word = Vec::new();
        while let Some(k) = (0..4).find(|&k| im[k] > im[k + 1]) {
            im.swap(k, k + 1);
            word.push(k as u8 + 1);
        }
        word.reverse();
        word
    }
}

fn permute_lex(cur: &mut [u8; 5], k: usize, out: &mut Vec<Permutation5>) {
    if k == 5 {
        out.push(Permutation5(*cur));
        return;
    }
    for i in k..5 {
        cur.swap(k, i);
        permute_lex(cur, k + 1, out);
        cur.swap(k, i);
    }
}

impl fmt::Debug for Permutation5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.0;
        write!(f, "[{a}{b}{c}{d}{e}]")
    }
}

/// Integer matrix acting on column vectors of class coordinates.
pub type LatticeMatrix = [[i64; 5]; 5];

fn mat_mul(a: &LatticeMatrix, b: &LatticeMatrix) -> LatticeMatrix {
    let mut out = [[0; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = (0..5).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

const IDENTITY_MATRIX: LatticeMatrix =
    [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]];

/// Matrix of the automorphism induced by `t` read off from the images of
/// the basis: `L = E12 + E35 + E45` and `E_i = E_{i5}`.
pub fn matrix_from_line_images(t: &Permutation5) -> LatticeMatrix {
    let img = |i: u8, j: u8| class_of(LinePair::of(i, j).permuted(t));
    let cols = [img(1, 2) + img(3, 5) + img(4, 5), img(1, 5), img(2, 5), img(3, 5), img(4, 5)];
    let mut m = [[0; 5]; 5];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..5 {
            m[i][j] = c.0[i];
        }
    }
    m
}

/// Matrices of the four adjacent transpositions `s_1..s_4`.
pub fn adjacent_generators() -> &'static [LatticeMatrix; 4] {
    static GENS: OnceLock<[LatticeMatrix; 4]> = OnceLock::new();
    GENS.get_or_init(|| {
        std::array::from_fn(|k| matrix_from_line_images(&Permutation5::transposition(k as u8 + 1, k as u8 + 2)))
    })
}

fn transform_table() -> &'static [LatticeMatrix] {
    static TABLE: OnceLock<Vec<LatticeMatrix>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let gens = adjacent_generators();
        Permutation5::all()
            .iter()
            .map(|t| t.adjacent_word().iter().fold(IDENTITY_MATRIX, |acc, &s| mat_mul(&acc, &gens[s as usize - 1])))
            .collect()
    })
}

/// Lattice automorphism of `Pic(Y)` determined by `t`, as a matrix.
pub fn transform_matrix(t: &Permutation5) -> &'static LatticeMatrix {
    &transform_table()[t.rank()]
}

/// Image of `c` under the automorphism sending the line `{i,j}` to
/// `{t(i), t(j)}`.
pub fn s5_transform(t: &Permutation5, c: DivisorClass) -> DivisorClass {
    let m = transform_matrix(t);
    DivisorClass(std::array::from_fn(|i| (0..5).map(|k| m[i][k] * c.0[k]).sum()))
}

/// Outcome of the exhaustive rank census over subsets of the ten lines.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DependencyReport {
    pub subsets_checked: usize,
    pub deficient_size5: usize,
    pub deficient_size6: usize,
    pub counterexamples: Vec<Vec<LinePair>>,
}

impl DependencyReport {
    pub fn pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Two reducible fibres of one pencil plus any fifth line.
pub fn is_two_fibre_pattern(pairs: &[LinePair]) -> bool {
    if pairs.len() != 5 {
        return false;
    }
    (1..=5u8).any(|j| {
        let fibres = pencil_fibres(j);
        let full: Vec<_> = fibres.iter().filter(|(a, b)| pairs.contains(a) && pairs.contains(b)).collect();
        full.len() >= 2
    })
}

/// All six lines avoid a common index.
pub fn is_missing_index_pattern(pairs: &[LinePair]) -> bool {
    pairs.len() == 6 && (1..=5u8).any(|j| pairs.iter().all(|p| !p.contains(j)))
}

/// The six lines meeting `{i, j}` in exactly one index.
pub fn is_half_meeting_pattern(pairs: &[LinePair]) -> bool {
    if pairs.len() != 6 {
        return false;
    }
    LinePair::all().any(|ij| pairs.iter().all(|p| p.overlap(&ij) == 1))
}

/// Checks every subset of the ten lines of size at least five against the
/// predicted rank-deficiency patterns.
pub fn verify_dependencies() -> DependencyReport {
    verify_dependencies_with(|set| rank_of(set.iter().map(|&p| class_of(p))))
}

/// Same census with a caller-supplied rank function (used for fault injection).
pub fn verify_dependencies_with<F>(rank: F) -> DependencyReport
where
    F: Fn(&[LinePair]) -> usize,
{
    let mut report = DependencyReport::default();
    for mask in 0u16..1024 {
        let size = mask.count_ones() as usize;
        if size < 5 {
            continue;
        }
        let pairs: Vec<LinePair> = (0..10).filter(|k| mask >> k & 1 == 1).map(LinePair::from_index).collect();
        let r = rank(&pairs);
        report.subsets_checked += 1;
        let ok = match size {
            5 => {
                if r < 5 {
                    report.deficient_size5 += 1;
                }
                (r < 5) == is_two_fibre_pattern(&pairs) && r >= 4
            }
            6 => {
                if r < 5 {
                    report.deficient_size6 += 1;
                }
                let predicted = is_missing_index_pattern(&pairs) || is_half_meeting_pattern(&pairs);
                (r < 5) == predicted && (r == 5 || r == 4)
            }
            _ => r == 5,
        };
        if !ok {
            report.counterexamples.push(pairs);
        }
    }
    report
}
