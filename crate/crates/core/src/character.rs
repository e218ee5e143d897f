//! Characters of `G = (Z/n)^5` and the data they induce on `Y`.
//!
//! A character is given by its values `(a1, .., a5)` on the basis of `G`; its
//! loop value on a line is the character applied to the local monodromy of
//! that line. From the loop values one reads off the eigensheaf class
//! `L_psi`, the twist `Delta = K_Y + L_psi`, and the set of lines carrying
//! logarithmic poles.

use std::fmt;

use serde::Serialize;

use crate::error::CharacterError;
use crate::lattice::{class_of, pairing, pencil_class, rank_of, DivisorClass, LinePair, Permutation5};
use crate::lineset::LineSet;

/// Monodromy of each line (lexicographic pair order) as a linear form in
/// the basis `e1..e5` of `G`.
const LOOP_FORMS: [[i64; 5]; 10] = [
    [-1, -1, -1, -1, -1], // {1,2}
    [0, 0, 0, 0, 1],      // {1,3}
    [1, 0, 0, 0, 0],      // {1,4}
    [0, 1, 1, 1, 0],      // {1,5}
    [0, 0, 0, 1, 0],      // {2,3}
    [0, 1, 0, 0, 0],      // {2,4}
    [1, 0, 1, 0, 1],      // {2,5}
    [0, 0, 1, 0, 0],      // {3,4}
    [0, 0, -1, -1, -1],   // {3,5}
    [-1, -1, -1, 0, 0],   // {4,5}
];

/// Lines whose loops map to `e1, .., e5`.
const BASIS_LINES: [(u8, u8); 5] = [(1, 4), (2, 4), (3, 4), (2, 3), (1, 3)];

/// Remainder in `{0, .., n-1}`.
pub fn bracket(x: i64, n: u32) -> i64 {
    x.rem_euclid(n as i64)
}

/// A character `psi = (a1, .., a5)` of `(Z/n)^5`, residues in `[0, n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Character {
    n: u32,
    a: [u32; 5],
}

impl Character {
    /// Reduces the given values mod `n`.
    pub fn new(n: u32, a: [i64; 5]) -> Result<Self, CharacterError> {
        if n < 2 {
            return Err(CharacterError::Modulus(n));
        }
        Ok(Character { n, a: a.map(|x| bracket(x, n) as u32) })
    }

    pub fn zero(n: u32) -> Self {
        Character { n, a: [0; 5] }
    }

    /// The character with lexicographic code `code` (`a1` most significant).
    pub fn from_code(n: u32, mut code: u64) -> Self {
        let mut a = [0u32; 5];
        for k in (0..5).rev() {
            a[k] = (code % n as u64) as u32;
            code /= n as u64;
        }
        Character { n, a }
    }

    pub fn code(&self) -> u64 {
        self.a.iter().fold(0u64, |acc, &x| acc * self.n as u64 + x as u64)
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn residues(&self) -> [u32; 5] {
        self.a
    }

    /// The sixth symbol `a6 = [-(a1 + .. + a5)]`.
    pub fn a6(&self) -> u32 {
        bracket(-self.a.iter().map(|&x| x as i64).sum::<i64>(), self.n) as u32
    }

    pub fn is_zero(&self) -> bool {
        self.a == [0; 5]
    }

    /// Number of characters of `(Z/n)^5`.
    pub fn count(n: u32) -> u64 {
        (n as u64).pow(5)
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.a;
        write!(f, "({a},{b},{c},{d},{e})/{}", self.n)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.a;
        write!(f, "({a},{b},{c},{d},{e})")
    }
}

/// `psi(phi(eps_p))`, the value of the character on the loop around `p`.
pub fn loop_value(psi: &Character, p: LinePair) -> u32 {
    loop_value_by_index(psi, p.index())
}

pub(crate) fn loop_value_by_index(psi: &Character, idx: usize) -> u32 {
    let form = &LOOP_FORMS[idx];
    let s: i64 = (0..5).map(|k| form[k] * psi.a[k] as i64).sum();
    bracket(s, psi.n) as u32
}

/// All ten loop values in lexicographic line order.
pub fn loop_values(psi: &Character) -> [u32; 10] {
    std::array::from_fn(|k| loop_value_by_index(psi, k))
}

/// Lines with loop value different from `n - 1`.
pub fn logset(psi: &Character) -> LineSet {
    let top = psi.n - 1;
    loop_values(psi).iter().enumerate().filter(|(_, &v)| v != top).map(|(k, _)| k).collect()
}

/// Pulls `psi` back along `t`: the result takes on `{i,j}` the value `psi`
/// takes on `{t(i), t(j)}`.
pub fn s5_act(t: &Permutation5, psi: &Character) -> Character {
    let a = BASIS_LINES.map(|(i, j)| loop_value(psi, LinePair::of(i, j).permuted(t)));
    Character { n: psi.n, a }
}

/// Position of the twist `K_Y + L_psi` in the seventeen-case classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseId {
    Trivial,
    Numbered(u8),
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseId::Trivial => write!(f, "trivial"),
            CaseId::Numbered(k) => write!(f, "({k})"),
        }
    }
}

/// Everything the covering attaches to one character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterGeometry {
    pub character: Character,
    /// `F`, `lambda_1..4`, `S` as integers (all multiples of `n`).
    pub f: i64,
    pub lambda: [i64; 4],
    pub s: i64,
    pub eigenclass: DivisorClass,
    pub twist: DivisorClass,
    pub logset: LineSet,
    pub case_id: CaseId,
}

/// Computes `F`, the `lambda_i`, `S`, `L_psi`, `Delta`, the log set and the
/// case of `psi`.
pub fn geometry_of(psi: &Character) -> Result<CharacterGeometry, CharacterError> {
    let n = psi.n;
    let b = |x: i64| bracket(x, n);
    let [a1, a2, a3, a4, a5] = psi.a.map(|x| x as i64);
    let a6 = psi.a6() as i64;

    let f = a1 + a2 + a3 + a4 + a5 + a6;
    let lambda = [
        a2 + a3 + a4 - b(a2 + a3 + a4),
        a1 + a3 + a5 - b(a1 + a3 + a5),
        a1 + a2 + a6 - b(-(a3 + a4 + a5)),
        a4 + a5 + a6 - b(-(a1 + a2 + a3)),
    ];
    let s = b(-(a1 + a2 + a3)) + b(a2 + a3 + a4) + b(a1 + a3 + a5) + b(-(a3 + a4 + a5));

    let nn = n as i64;
    if f % nn != 0 || s % nn != 0 || lambda.iter().any(|l| l % nn != 0) {
        return Err(CharacterError::Inconsistent {
            character: *psi,
            detail: "F, lambda or S not divisible by n".into(),
        });
    }
    let eigenclass = DivisorClass::new(f / nn, lambda.map(|l| -l / nn));
    let twist = DivisorClass::canonical() + eigenclass;

    let case_id = if psi.is_zero() {
        CaseId::Trivial
    } else {
        let by_vector = case_of_twist(twist).ok_or_else(|| CharacterError::Inconsistent {
            character: *psi,
            detail: format!("twist {twist} outside the seventeen cases"),
        })?;
        let by_table = case_of_invariants(f / nn, s / nn, lambda.map(|l| l / nn));
        if by_table != Some(by_vector) {
            return Err(CharacterError::Inconsistent {
                character: *psi,
                detail: format!("twist gives case {by_vector}, F/S/lambda table gives {by_table:?}"),
            });
        }
        CaseId::Numbered(by_vector)
    };

    Ok(CharacterGeometry { character: *psi, f, lambda, s, eigenclass, twist, logset: logset(psi), case_id })
}

/// Case number read off the twist vector `(ell; e1..e4)`.
pub fn case_of_twist(twist: DivisorClass) -> Option<u8> {
    let ell = twist.ell();
    let mut e: Vec<i64> = (1..=4).map(|i| twist.e(i)).collect();
    e.sort_unstable();
    let count = |v: i64| e.iter().filter(|&&x| x == v).count();
    let (ones, zeros, neg) = (count(1), count(0), count(-1));
    if ones + zeros + neg != 4 {
        return None;
    }
    let case = match (ell, neg, zeros, ones) {
        (-2, 0, 1, 3) => 1,
        (-2, 0, 0, 4) => 2,
        (-1, 1, 0, 3) => 3,
        (-1, 0, 4, 0) => 4,
        (-1, 0, 3, 1) => 5,
        (-1, 0, 2, 2) => 6,
        (-1, 0, 1, 3) => 7,
        (0, 1, 3, 0) => 8,
        (0, 1, 2, 1) => 9,
        (0, 0, 4, 0) => 10,
        (0, 1, 1, 2) => 11,
        (0, 0, 3, 1) => 12,
        (1, 4, 0, 0) => 13,
        (1, 3, 1, 0) => 14,
        (1, 2, 2, 0) => 15,
        (1, 1, 3, 0) => 16,
        (2, 4, 0, 0) => 17,
        _ => return None,
    };
    Some(case)
}

/// Case number from `F/n`, `S/n` and the multiset of `lambda_i/n`.
///
/// This table enumerates the subcases by `F` first, then by `S`, then by the
/// pattern of the `lambda_i`, independently of the twist vector.
pub fn case_of_invariants(f: i64, s: i64, lambda: [i64; 4]) -> Option<u8> {
    let mut l = lambda;
    l.sort_unstable();
    let case = match (f, s, l) {
        (1, 1, [0, 0, 0, 1]) => 1,
        (1, 2, [0, 0, 0, 0]) => 2,
        (2, 2, [0, 0, 0, 2]) => 3,
        (2, 0, [1, 1, 1, 1]) => 4,
        (2, 1, [0, 1, 1, 1]) => 5,
        (2, 2, [0, 0, 1, 1]) => 6,
        (2, 3, [0, 0, 0, 1]) => 7,
        (3, 1, [1, 1, 1, 2]) => 8,
        (3, 2, [0, 1, 1, 2]) => 9,
        (3, 2, [1, 1, 1, 1]) => 10,
        (3, 3, [0, 0, 1, 2]) => 11,
        (3, 3, [0, 1, 1, 1]) => 12,
        (4, 0, [2, 2, 2, 2]) => 13,
        (4, 1, [1, 2, 2, 2]) => 14,
        (4, 2, [1, 1, 2, 2]) => 15,
        (4, 3, [1, 1, 1, 2]) => 16,
        (5, 2, [2, 2, 2, 2]) => 17,
        _ => return None,
    };
    Some(case)
}

/// One representative per orbit of the symmetric group on the characters,
/// with the orbit size. The representative is the lexicographically least
/// residue tuple in its orbit; output is in increasing order.
pub fn orbit_representatives(n: u32) -> Vec<(Character, usize)> {
    let total = Character::count(n) as usize;
    let mut seen = vec![false; total];
    let mut out = Vec::new();
    for code in 0..total {
        if seen[code] {
            continue;
        }
        let psi = Character::from_code(n, code as u64);
        let mut size = 0;
        for t in Permutation5::all() {
            let c = s5_act(t, &psi).code() as usize;
            if !seen[c] {
                seen[c] = true;
                size += 1;
            }
        }
        out.push((psi, size));
    }
    out
}

/// Lexicographically least element of the orbit of `psi`.
pub fn canonical_character(psi: &Character) -> Character {
    Permutation5::all().iter().map(|t| s5_act(t, psi)).min().expect("nonempty group")
}

/// Shape of a rank-deficient log set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RankException {
    /// The log set spans `Pic(Y) ⊗ Q`.
    None,
    /// `{A; B1, B2, B3}` with `A.Bi = 1` and the `Bi` pairwise disjoint;
    /// predicted twist `A`.
    Claw { a: LinePair, b: [LinePair; 3] },
    /// All four lines through one index; predicted twist the pencil `X_i`.
    Star { center: u8 },
    /// Five lines avoiding the index `missing`; predicted twist `A - B` with
    /// `B` in the log set, `A` outside it, `A.B = 0` and `A.(sum) = 2`.
    Fiber5 { missing: u8 },
    /// The triangle on the complement of `{i,j}`; predicted twist `E_ij`.
    Triangle { avoided: LinePair },
}

impl RankException {
    pub fn kind(&self) -> &'static str {
        match self {
            RankException::None => "none",
            RankException::Claw { .. } => "claw",
            RankException::Star { .. } => "star",
            RankException::Fiber5 { .. } => "fiber5",
            RankException::Triangle { .. } => "triangle",
        }
    }

    /// Whether `twist` is the class this pattern predicts for `logset`.
    pub fn predicts(&self, logset: LineSet, twist: DivisorClass) -> bool {
        match self {
            RankException::None => true,
            RankException::Claw { a, .. } => twist == class_of(*a),
            RankException::Star { center } => twist == pencil_class(*center),
            RankException::Triangle { avoided } => twist == class_of(*avoided),
            RankException::Fiber5 { .. } => {
                let total = logset.class_sum();
                logset.iter().any(|b| {
                    LinePair::all().filter(|a| !logset.contains(*a)).any(|a| {
                        pairing(class_of(a), class_of(b)) == 0
                            && pairing(class_of(a), total) == 2
                            && twist == class_of(a) - class_of(b)
                    })
                })
            }
        }
    }
}

/// The exception shapes that can occur at modulus `n >= 4`.
pub fn allowed_exceptions(n: u32) -> &'static [&'static str] {
    match n {
        4 => &["fiber5", "triangle"],
        6 => &["claw", "star"],
        _ => &["claw"],
    }
}

/// Matches a rank-deficient set of lines against the known shapes.
pub fn match_exception_shape(set: LineSet) -> Option<RankException> {
    let lines: Vec<LinePair> = set.iter().collect();
    match lines.len() {
        3 => {
            let avoided = LinePair::all().find(|ij| {
                let (i, j) = ij.indices();
                lines.iter().all(|p| !p.contains(i) && !p.contains(j))
            })?;
            Some(RankException::Triangle { avoided })
        }
        4 => {
            if let Some(center) = (1..=5u8).find(|&i| lines.iter().all(|p| p.contains(i))) {
                return Some(RankException::Star { center });
            }
            lines.iter().find_map(|&a| {
                let rest: Vec<LinePair> = lines.iter().copied().filter(|&p| p != a).collect();
                let meets = rest.iter().all(|&b| pairing(class_of(a), class_of(b)) == 1);
                let disjoint = (0..3).all(|x| (x + 1..3).all(|y| pairing(class_of(rest[x]), class_of(rest[y])) == 0));
                (meets && disjoint).then(|| RankException::Claw { a, b: [rest[0], rest[1], rest[2]] })
            })
        }
        5 => {
            let missing = (1..=5u8).find(|&j| lines.iter().all(|p| !p.contains(j)))?;
            Some(RankException::Fiber5 { missing })
        }
        _ => None,
    }
}

/// Classifies the rank defect of the log set of `psi` (nonzero).
pub fn rank_exception_classify(psi: &Character) -> Result<RankException, CharacterError> {
    let set = logset(psi);
    if rank_of(set.iter().map(class_of)) == 5 {
        return Ok(RankException::None);
    }
    match_exception_shape(set).ok_or(CharacterError::Unclassified { character: *psi, logset: set })
}

/// Result of classifying every rank-deficient log set at one modulus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RankExceptionCensus {
    pub n: u32,
    pub characters: u64,
    pub deficient: u64,
    /// Deficient characters per shape.
    pub by_kind: std::collections::BTreeMap<String, u64>,
    /// Shapes that occurred although they are not expected at this modulus.
    pub unexpected_kinds: Vec<String>,
    /// Characters whose twist is not the predicted class.
    pub mispredicted: Vec<Character>,
    /// Characters whose deficient log set matches no shape.
    pub unclassified: Vec<Character>,
}

impl RankExceptionCensus {
    pub fn pass(&self) -> bool {
        self.unexpected_kinds.is_empty() && self.mispredicted.is_empty() && self.unclassified.is_empty()
    }
}

/// Classifies the log sets of all nonzero characters modulo `n` and checks
/// each deficient one against the allowed shapes and predicted twist.
pub fn rank_exception_census(n: u32) -> Result<RankExceptionCensus, CharacterError> {
    let mut census = RankExceptionCensus { n, ..Default::default() };
    let allowed = allowed_exceptions(n);
    for code in 1..Character::count(n) {
        let psi = Character::from_code(n, code);
        census.characters += 1;
        let shape = match rank_exception_classify(&psi) {
            Ok(RankException::None) => continue,
            Ok(shape) => shape,
            Err(CharacterError::Unclassified { .. }) => {
                census.deficient += 1;
                census.unclassified.push(psi);
                continue;
            }
            Err(e) => return Err(e),
        };
        census.deficient += 1;
        *census.by_kind.entry(shape.kind().to_string()).or_default() += 1;
        let g = geometry_of(&psi)?;
        if !shape.predicts(g.logset, g.twist) {
            census.mispredicted.push(psi);
        }
    }
    census.unexpected_kinds = census.by_kind.keys().filter(|k| !allowed.contains(&k.as_str())).cloned().collect();
    Ok(census)
}
