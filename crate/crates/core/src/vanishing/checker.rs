//! Certificate replay that shares nothing with the search code.
//!
//! The checker rebuilds the ten line classes from point-line incidences of
//! four points in the plane, tabulates their intersection numbers, audits
//! that table, and then re-evaluates every claim of a certificate from raw
//! data. Ranks are computed modulo a large prime; the minors involved are
//! far smaller than the prime, so the result equals the rank over `Q`.

use crate::error::ReplayError;
use crate::lattice::DivisorClass;
use crate::lineset::LineSet;

use super::certificate::Certificate;
use super::problem::VanishingProblem;
use super::registry::Registry;

const PRIME: i64 = 2_147_483_647;
const POINTS: [[i64; 3]; 4] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];

type Vec5 = [i64; 5];

fn pair_of(k: usize) -> (u8, u8) {
    let mut idx = 0;
    for i in 1..=5u8 {
        for j in i + 1..=5 {
            if idx == k {
                return (i, j);
            }
            idx += 1;
        }
    }
    unreachable!("line index {k} out of range")
}

fn index_of(i: u8, j: u8) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    (0..10).find(|&k| pair_of(k) == (i, j)).expect("valid pair")
}

fn cross(u: [i64; 3], v: [i64; 3]) -> [i64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn form(u: &Vec5, v: &Vec5) -> i64 {
    u[0] * v[0] - u[1..].iter().zip(&v[1..]).map(|(a, b)| a * b).sum::<i64>()
}

fn rank_mod_p(rows: &[Vec5]) -> usize {
    let mut m: Vec<Vec5> = rows.iter().map(|r| r.map(|x| x.rem_euclid(PRIME))).collect();
    let mut rank = 0;
    for col in 0..5 {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][col], PRIME - 2);
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col] * inv % PRIME;
                for c in 0..5 {
                    m[r][c] = (m[r][c] - factor * m[rank][c]).rem_euclid(PRIME);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut acc = 1;
    b %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    acc
}

fn members(s: LineSet) -> Vec<usize> {
    (0..10).filter(|&k| s.bits() >> k & 1 == 1).collect()
}

fn set_of(ks: impl IntoIterator<Item = usize>) -> LineSet {
    LineSet::from_bits(ks.into_iter().fold(0u16, |acc, k| acc | 1 << k))
}

/// Independent replay engine.
#[derive(Clone, Debug)]
pub struct Checker {
    classes: [Vec5; 10],
    table: [[i64; 10]; 10],
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new()
    }
}

impl Checker {
    pub fn new() -> Self {
        let mut classes = [[0i64; 5]; 10];
        for (k, class) in classes.iter_mut().enumerate() {
            let (i, j) = pair_of(k);
            if j == 5 {
                class[i as usize] = 1;
                continue;
            }
            // the line through the two points not named by the pair
            let rest: Vec<usize> = (1..=4).filter(|&x| x != i as usize && x != j as usize).collect();
            let line = cross(POINTS[rest[0] - 1], POINTS[rest[1] - 1]);
            class[0] = 1;
            for (p, pt) in POINTS.iter().enumerate() {
                if line.iter().zip(pt).map(|(a, b)| a * b).sum::<i64>() == 0 {
                    class[p + 1] = -1;
                }
            }
        }
        let mut table = [[0i64; 10]; 10];
        for a in 0..10 {
            for b in 0..10 {
                table[a][b] = form(&classes[a], &classes[b]);
            }
        }
        Checker { classes, table }
    }

    /// A checker whose table has entry `(row, col)` shifted by `delta`.
    pub fn with_fault(row: usize, col: usize, delta: i64) -> Self {
        let mut c = Checker::new();
        c.table[row][col] += delta;
        c
    }

    pub fn table(&self) -> &[[i64; 10]; 10] {
        &self.table
    }

    /// Verifies the intersection table against the class vectors and the
    /// combinatorics of index pairs.
    pub fn audit(&self) -> Result<(), ReplayError> {
        let canonical: Vec5 = [-3, 1, 1, 1, 1];
        for a in 0..10 {
            if form(&self.classes[a], &canonical) != -1 || form(&self.classes[a], &self.classes[a]) != -1 {
                return Err(ReplayError::Table(format!("line {a} is not a (-1)-curve")));
            }
            let mut ones = 0;
            for b in 0..10 {
                let t = self.table[a][b];
                if t != self.table[b][a] {
                    return Err(ReplayError::Table(format!("asymmetric entry ({a},{b})")));
                }
                if t != form(&self.classes[a], &self.classes[b]) {
                    return Err(ReplayError::Table(format!("entry ({a},{b}) disagrees with the classes")));
                }
                let (p, q) = (pair_of(a), pair_of(b));
                let shared = [p.0, p.1].iter().filter(|&&x| x == q.0 || x == q.1).count() as i64;
                if t != 1 - shared {
                    return Err(ReplayError::Table(format!("entry ({a},{b}) breaks the overlap rule")));
                }
                ones += (t == 1) as usize;
            }
            if ones != 3 {
                return Err(ReplayError::Table(format!("line {a} meets {ones} lines")));
            }
        }
        let basis_l = self.classes[index_of(1, 2)]
            .iter()
            .zip(&self.classes[index_of(3, 5)])
            .zip(&self.classes[index_of(4, 5)])
            .map(|((x, y), z)| x + y + z)
            .collect::<Vec<_>>();
        if basis_l != vec![1, 0, 0, 0, 0] {
            return Err(ReplayError::Table("E12 + E35 + E45 is not the line class".into()));
        }
        Ok(())
    }

    fn dot_twist(&self, k: usize, twist: &Vec5) -> i64 {
        form(&self.classes[k], twist)
    }

    fn sum_classes(&self, s: LineSet) -> Vec5 {
        members(s).iter().fold([0; 5], |mut acc, &k| {
            for c in 0..5 {
                acc[c] += self.classes[k][c];
            }
            acc
        })
    }

    fn chi(&self, logset: LineSet, twist: &Vec5) -> i64 {
        form(twist, twist) - 5 + members(logset).iter().map(|&k| 1 + self.dot_twist(k, twist)).sum::<i64>()
    }

    fn dropped(&self, logset: LineSet, twist: &Vec5) -> LineSet {
        set_of(members(logset).into_iter().filter(|&k| self.dot_twist(k, twist) != -1))
    }

    /// Image of `(T, Delta)` under the permutation `images` of `{1..5}`.
    fn permute(&self, images: &[u8; 5], logset: LineSet, twist: &Vec5) -> (LineSet, Vec5) {
        let img = |k: usize| {
            let (i, j) = pair_of(k);
            index_of(images[i as usize - 1], images[j as usize - 1])
        };
        let moved = set_of(members(logset).into_iter().map(img));
        // Delta = l (E12 + E35 + E45) + sum e_i E_i5
        let mut out = [0i64; 5];
        let mut add = |coef: i64, k: usize| {
            for c in 0..5 {
                out[c] += coef * self.classes[img(k)][c];
            }
        };
        add(twist[0], index_of(1, 2));
        add(twist[0], index_of(3, 5));
        add(twist[0], index_of(4, 5));
        for i in 1..=4u8 {
            add(twist[i as usize], index_of(i, 5));
        }
        (moved, out)
    }

    fn equivalent(&self, a: (LineSet, Vec5), b: (LineSet, Vec5)) -> bool {
        let mut found = false;
        for_each_permutation(|images| {
            if !found && self.permute(images, a.0, &a.1) == b {
                found = true;
            }
        });
        found
    }

    /// Re-validates `cert` as a proof about `prob`.
    pub fn replay(&self, prob: &VanishingProblem, cert: &Certificate, registry: &Registry) -> Result<(), ReplayError> {
        self.audit()?;
        self.replay_inner(prob.logset, prob.twist.0, prob.h2_zero, cert, registry)
    }

    fn replay_inner(
        &self,
        logset: LineSet,
        twist: Vec5,
        h2_zero: bool,
        cert: &Certificate,
        registry: &Registry,
    ) -> Result<(), ReplayError> {
        let reject = |msg: String| Err(ReplayError::Rejected(msg));
        match cert {
            Certificate::Unresolved => reject("no claim to replay".into()),
            Certificate::NonVanishing { chi, h1_lower_bound } => {
                let actual = self.chi(logset, &twist);
                if !h2_zero {
                    return reject("non-vanishing needs H^2 = 0".into());
                }
                if actual != *chi || actual >= 0 || *h1_lower_bound != -actual {
                    return reject(format!("chi is {actual}, certificate says {chi}"));
                }
                Ok(())
            }
            Certificate::Drop { removed, inner } => {
                if !removed.is_subset(logset) {
                    return reject(format!("dropped lines {removed} not in {logset}"));
                }
                if let Some(k) = members(*removed).into_iter().find(|&k| self.dot_twist(k, &twist) != -1) {
                    return reject(format!("line {k} has E.Delta != -1"));
                }
                self.replay_inner(logset.difference(*removed), twist, h2_zero, inner, registry)
            }
            Certificate::Superset { added, slack, inner } => {
                if !h2_zero {
                    return reject("superset transfer needs H^2 = 0".into());
                }
                if !added.is_disjoint(logset) {
                    return reject("added lines already in the log set".into());
                }
                let bigger = logset.union(*added);
                let actual = self.chi(bigger, &twist) - self.chi(logset, &twist);
                if actual != *slack || actual > 0 {
                    return reject(format!("slack is {actual}, certificate says {slack}"));
                }
                if matches!(**inner, Certificate::NonVanishing { .. }) {
                    return reject("inner certificate is not a vanishing proof".into());
                }
                self.replay_inner(bigger, twist, h2_zero, inner, registry)
            }
            Certificate::Registry { id } => {
                let Some(entry) = registry.get(id) else {
                    return reject(format!("unknown registry id {id}"));
                };
                let entry_set = set_of(entry.logset.iter().map(|&[i, j]| index_of(i, j)));
                let ours = (self.dropped(logset, &twist), twist);
                let theirs = (self.dropped(entry_set, &entry.twist), entry.twist);
                if !self.equivalent(theirs, ours) {
                    return reject(format!("problem is not equivalent to registry entry {id}"));
                }
                Ok(())
            }
            Certificate::Gvt { a, b, report } => {
                if !h2_zero {
                    return reject("condition (1) fails".into());
                }
                if !a.is_disjoint(*b) || !b.is_subset(logset) {
                    return reject("A and B are not a valid split".into());
                }
                let (sa, sb) = (self.sum_classes(*a), self.sum_classes(*b));
                let diff: Vec5 = std::array::from_fn(|c| sa[c] - sb[c]);
                if diff != twist {
                    return reject(format!("A - B = {} but Delta = {}", DivisorClass(diff), DivisorClass(twist)));
                }
                let t = members(logset);
                let am = members(*a);
                let bm = members(*b);
                if am.iter().filter(|k| t.contains(k)).any(|&k| self.dot_twist(k, &twist) < -1) {
                    return reject("condition (2) fails".into());
                }
                let support = members(logset.union(*a).difference(*b));
                if am.iter().any(|&e| support.iter().map(|&f| self.table[e][f]).sum::<i64>() < 1) {
                    return reject("condition (3) fails".into());
                }
                let correction: i64 = support
                    .iter()
                    .map(|&f| bm.iter().map(|&g| self.table[f][g]).sum::<i64>())
                    .filter(|&x| x > 0)
                    .map(|x| x - 1)
                    .sum();
                let rank_rows: Vec<Vec5> = members(logset.union(*a))
                    .into_iter()
                    .filter(|&f| bm.iter().all(|&g| self.table[f][g] == 0))
                    .map(|f| self.classes[f])
                    .collect();
                let rank = rank_mod_p(&rank_rows) as i64;
                let required = 5 - bm.len() as i64 + correction;
                if rank < required {
                    return reject(format!("condition (4) fails: rank {rank} < {required}"));
                }
                if report.rank as i64 != rank || report.required_rank != required || report.correction != correction {
                    return reject("condition report disagrees with recomputation".into());
                }
                Ok(())
            }
        }
    }
}

fn for_each_permutation(mut f: impl FnMut(&[u8; 5])) {
    for a in 1..=5u8 {
        for b in 1..=5u8 {
            for c in 1..=5u8 {
                for d in 1..=5u8 {
                    let Some(e) = 15u8.checked_sub(a + b + c + d) else {
                        continue;
                    };
                    let p = [a, b, c, d, e];
                    let mut seen = 0u8;
                    for &x in &p {
                        if (1..=5).contains(&x) {
                            seen |= 1 << x;
                        }
                    }
                    if seen == 0b111110 {
                        f(&p);
                    }
                }
            }
        }
    }
}
