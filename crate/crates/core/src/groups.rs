//! Permutations, signed permutations and their descent statistics.
//!
//! Composition is `(p q)(i) = p(q(i))` everywhere in the crate.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{check_cap, invalid, Error, Result};

/// Largest `n` for which `S_n` is enumerated exhaustively.
pub const MAX_N_TYPE_A: usize = 8;
/// Largest `n` for which `B_n` is enumerated exhaustively.
pub const MAX_N_TYPE_B: usize = 6;

/// A permutation of `{1, ..., n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{word:?}")));
            }
            seen[v] = true;
        }
        Ok(Self { word })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            word: (1..=n).collect(),
        }
    }

    /// `n, n-1, ..., 1`.
    pub fn reversal(n: usize) -> Self {
        Self {
            word: (1..=n).rev().collect(),
        }
    }

    pub(crate) fn from_word_unchecked(word: Vec<usize>) -> Self {
        Self { word }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation {
            word: other.word.iter().map(|&v| self.word[v - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut word = vec![0; self.len()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v - 1] = i + 1;
        }
        Permutation { word }
    }

    pub fn descent_set(&self) -> DescentSet {
        let mut set = DescentSet::empty();
        for i in 1..self.len() {
            if self.word[i - 1] > self.word[i] {
                set.insert(i);
            }
        }
        set
    }

    pub fn descent_number(&self) -> usize {
        self.word.windows(2).filter(|w| w[0] > w[1]).count()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A subset of `{1, ..., 63}` stored as a bitmask; bit `i` marks position `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescentSet(u64);

impl DescentSet {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn from_positions(positions: &[usize]) -> Self {
        let mut s = Self::empty();
        for &p in positions {
            s.insert(p);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        assert!((1..64).contains(&i));
        self.0 |= 1 << i;
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn positions(&self) -> Vec<usize> {
        (1..64).filter(|&i| self.contains(i)).collect()
    }
}

impl fmt::Display for DescentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A signed permutation: `|word|` is a permutation of `{1, ..., n}`.
///
/// Descents use the order `1 < 2 < ... < n < -n < ... < -2 < -1`, and position
/// `n` counts as a descent when the last entry is negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    word: Vec<i64>,
}

impl SignedPermutation {
    pub fn new(word: Vec<i64>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return Err(Error::InvalidPermutation(format!("{word:?}")));
            }
            seen[a] = true;
        }
        Ok(Self { word })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            word: (1..=n as i64).collect(),
        }
    }

    pub(crate) fn from_word_unchecked(word: Vec<i64>) -> Self {
        Self { word }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[i64] {
        &self.word
    }

    // Rank in the order 1 < ... < n < -n < ... < -1.
    fn key(&self, v: i64) -> i64 {
        if v > 0 {
            v
        } else {
            2 * self.len() as i64 + 1 + v
        }
    }

    /// `self ∘ other` with `self(-k) = -self(k)`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.len(), other.len(), "composing signed permutations of different sizes");
        SignedPermutation {
            word: other
                .word
                .iter()
                .map(|&v| v.signum() * self.word[v.unsigned_abs() as usize - 1])
                .collect(),
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut word = vec![0; self.len()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v.unsigned_abs() as usize - 1] = v.signum() * (i as i64 + 1);
        }
        SignedPermutation { word }
    }

    pub fn descent_set(&self) -> DescentSet {
        let mut set = DescentSet::empty();
        let n = self.len();
        for i in 1..n {
            if self.key(self.word[i - 1]) > self.key(self.word[i]) {
                set.insert(i);
            }
        }
        if n > 0 && self.word[n - 1] < 0 {
            set.insert(n);
        }
        set
    }

    pub fn descent_number(&self) -> usize {
        self.descent_set().len()
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// All of `S_n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut word: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Permutation::from_word_unchecked(word.clone()));
        if !next_permutation(&mut word) {
            return out;
        }
    }
}

/// All of `B_n`: every permutation crossed with every sign pattern.
pub fn all_signed_permutations(n: usize) -> Vec<SignedPermutation> {
    let perms = all_permutations(n);
    let mut out = Vec::with_capacity(perms.len() << n);
    for p in &perms {
        for signs in 0u32..(1 << n) {
            let word = p
                .word()
                .iter()
                .enumerate()
                .map(|(k, &v)| if signs & (1 << k) != 0 { -(v as i64) } else { v as i64 })
                .collect();
            out.push(SignedPermutation::from_word_unchecked(word));
        }
    }
    out
}

fn next_permutation(w: &mut [usize]) -> bool {
    let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
        return false;
    };
    let pivot = i - 1;
    let j = (i..w.len()).rev().find(|&j| w[j] > w[pivot]).expect("successor exists");
    w.swap(pivot, j);
    w[i..].reverse();
    true
}

/// Which group a descent table refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// The symmetric group `S_n`.
    A,
    /// The hyperoctahedral group `B_n`.
    B,
}

impl GroupKind {
    /// Number of descent values, `n` for `S_n` and `n + 1` for `B_n`.
    pub fn states(self, n: usize) -> usize {
        match self {
            GroupKind::A => n,
            GroupKind::B => n + 1,
        }
    }

    pub fn cap(self) -> usize {
        match self {
            GroupKind::A => MAX_N_TYPE_A,
            GroupKind::B => MAX_N_TYPE_B,
        }
    }
}

/// `c_{ij}^d`: ordered pairs `(τ, μ)` with `τ μ = σ`, `d(τ) = i`, `d(μ) = j`,
/// for a fixed `σ` with `d` descents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentTable {
    pub group: GroupKind,
    pub n: usize,
    pub d: usize,
    entries: Vec<Vec<u64>>,
}

impl DescentTable {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries
            .get(i)
            .and_then(|row| row.get(j))
            .copied()
            .unwrap_or(0)
    }

    pub fn states(&self) -> usize {
        self.entries.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().flatten().sum()
    }
}

/// A permutation with exactly `d` descents: `d+1, d, ..., 1, d+2, ..., n`.
pub fn canonical_with_descents(n: usize, d: usize) -> Result<Permutation> {
    if n == 0 || d >= n {
        return Err(invalid(format!("no permutation of {n} letters has {d} descents")));
    }
    let mut word: Vec<usize> = (1..=n).collect();
    word[..=d].reverse();
    Ok(Permutation::from_word_unchecked(word))
}

/// A signed permutation with exactly `d` descents:
/// `1, ..., n-d, -(n-d+1), ..., -n`.
pub fn canonical_signed_with_descents(n: usize, d: usize) -> Result<SignedPermutation> {
    if n == 0 || d > n {
        return Err(invalid(format!(
            "no signed permutation of {n} letters has {d} descents"
        )));
    }
    let word = (1..=n as i64)
        .map(|v| if v as usize > n - d { -v } else { v })
        .collect();
    Ok(SignedPermutation::from_word_unchecked(word))
}

/// Brute-force `c_{ij}^d` from a canonical `σ` with `d` descents.
pub fn descent_table(group: GroupKind, n: usize, d: usize) -> Result<DescentTable> {
    check_cap("n", n, group.cap())?;
    match group {
        GroupKind::A => descent_table_for(&canonical_with_descents(n, d)?),
        GroupKind::B => descent_table_for_signed(&canonical_signed_with_descents(n, d)?),
    }
}

/// `c_{ij}` for an explicit `σ ∈ S_n`.
pub fn descent_table_for(sigma: &Permutation) -> Result<DescentTable> {
    let n = sigma.len();
    check_cap("n", n, MAX_N_TYPE_A)?;
    let states = n;
    let entries = all_permutations(n)
        .par_iter()
        .fold(
            || vec![vec![0u64; states]; states],
            |mut acc, tau| {
                let mu = tau.inverse().compose(sigma);
                acc[tau.descent_number()][mu.descent_number()] += 1;
                acc
            },
        )
        .reduce(|| vec![vec![0u64; states]; states], add_tables);
    Ok(DescentTable {
        group: GroupKind::A,
        n,
        d: sigma.descent_number(),
        entries,
    })
}

/// `c_{ij}` for an explicit `σ ∈ B_n`.
pub fn descent_table_for_signed(sigma: &SignedPermutation) -> Result<DescentTable> {
    let n = sigma.len();
    check_cap("n", n, MAX_N_TYPE_B)?;
    let states = n + 1;
    let entries = all_signed_permutations(n)
        .par_iter()
        .fold(
            || vec![vec![0u64; states]; states],
            |mut acc, tau| {
                let mu = tau.inverse().compose(sigma);
                acc[tau.descent_number()][mu.descent_number()] += 1;
                acc
            },
        )
        .reduce(|| vec![vec![0u64; states]; states], add_tables);
    Ok(DescentTable {
        group: GroupKind::B,
        n,
        d: sigma.descent_number(),
        entries,
    })
}

fn add_tables(mut a: Vec<Vec<u64>>, b: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y;
        }
    }
    a
}

/// A (standard) Young tableau stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Row index of each entry `1..=size`, assuming a standard filling.
    fn row_of(&self) -> Vec<usize> {
        let mut at = vec![0; self.size() + 1];
        for (r, row) in self.rows.iter().enumerate() {
            for &v in row {
                at[v] = r;
            }
        }
        at
    }

    /// `i` is a descent when `i + 1` sits in a strictly lower row than `i`.
    pub fn descent_set(&self) -> DescentSet {
        let at = self.row_of();
        let mut set = DescentSet::empty();
        for i in 1..self.size() {
            if at[i + 1] > at[i] {
                set.insert(i);
            }
        }
        set
    }

    pub fn is_standard(&self) -> bool {
        let n = self.size();
        let mut seen = vec![false; n + 1];
        for row in &self.rows {
            for &v in row {
                if v == 0 || v > n || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let cols_ok = self.rows.windows(2).all(|pair| {
            pair[1].len() <= pair[0].len() && pair[1].iter().zip(&pair[0]).all(|(lo, hi)| lo > hi)
        });
        rows_ok && cols_ok
    }
}

/// Robinson–Schensted row insertion; returns `(insertion, recording)`.
pub fn rsk(p: &Permutation) -> (Tableau, Tableau) {
    let mut insertion: Vec<Vec<usize>> = Vec::new();
    let mut recording: Vec<Vec<usize>> = Vec::new();
    for (step, &value) in p.word().iter().enumerate() {
        let mut x = value;
        let mut r = 0;
        loop {
            if r == insertion.len() {
                insertion.push(vec![x]);
                recording.push(vec![step + 1]);
                break;
            }
            let row = &mut insertion[r];
            match row.iter().position(|&y| y > x) {
                Some(k) => {
                    std::mem::swap(&mut row[k], &mut x);
                    r += 1;
                }
                None => {
                    row.push(x);
                    recording[r].push(step + 1);
                    break;
                }
            }
        }
    }
    (Tableau::from_rows(insertion), Tableau::from_rows(recording))
}

/// `β_n(S)`: the number of permutations of `n` letters with descent set `S`.
pub fn descent_set_counts(n: usize) -> Result<BTreeMap<DescentSet, u64>> {
    check_cap("n", n, MAX_N_TYPE_A)?;
    let mut counts = BTreeMap::new();
    for p in all_permutations(n) {
        *counts.entry(p.descent_set()).or_insert(0) += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perm(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    fn signed(w: &[i64]) -> SignedPermutation {
        SignedPermutation::new(w.to_vec()).unwrap()
    }

    #[test]
    fn descent_examples() {
        let p = perm(&[5, 1, 3, 2, 4]);
        assert_eq!(p.descent_number(), 2);
        assert_eq!(p.descent_set(), DescentSet::from_positions(&[1, 3]));
        assert_eq!(perm(&[2, 1, 4, 3]).descent_set(), DescentSet::from_positions(&[1, 3]));
        assert_eq!(Permutation::identity(7).descent_number(), 0);
        assert!(Permutation::identity(7).descent_set().is_empty());
        assert_eq!(Permutation::reversal(7).descent_number(), 6);
    }

    #[test]
    fn signed_descent_examples() {
        assert_eq!(signed(&[-1, -2, -3]).descent_number(), 3);
        assert_eq!(SignedPermutation::identity(4).descent_number(), 0);
        assert_eq!(signed(&[2, 1]).descent_number(), 1);
        assert_eq!(signed(&[-1]).descent_number(), 1);
        assert_eq!(signed(&[1, -2]).descent_set(), DescentSet::from_positions(&[2]));
    }

    #[test]
    fn rejects_invalid_words() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(SignedPermutation::new(vec![1, -1]).is_err());
        assert!(SignedPermutation::new(vec![3, 1]).is_err());
    }

    #[test]
    fn group_laws_exhaustive_small() {
        for n in 1..=4 {
            let all = all_permutations(n);
            let id = Permutation::identity(n);
            for p in &all {
                assert_eq!(p.compose(&p.inverse()), id);
                assert_eq!(p.inverse().compose(p), id);
                for q in &all {
                    for r in &all {
                        assert_eq!(p.compose(q).compose(r), p.compose(&q.compose(r)));
                    }
                }
            }
            let signed_all = all_signed_permutations(n.min(3));
            let sid = SignedPermutation::identity(n.min(3));
            for p in &signed_all {
                assert_eq!(p.compose(&p.inverse()), sid);
                for q in &signed_all {
                    assert_eq!(p.compose(q).inverse(), q.inverse().compose(&p.inverse()));
                }
            }
        }
    }

    #[test]
    fn group_laws_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for n in 5..=8usize {
            for _ in 0..1000 {
                let mut pick = || {
                    let mut w: Vec<usize> = (1..=n).collect();
                    w.shuffle(&mut rng);
                    perm(&w)
                };
                let (p, q, r) = (pick(), pick(), pick());
                assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
                assert_eq!(p.compose(&p.inverse()), Permutation::identity(n));
            }
        }
    }

    #[test]
    fn composition_convention() {
        // (p q)(i) = p(q(i))
        let p = perm(&[2, 3, 1]);
        let q = perm(&[1, 3, 2]);
        let pq = p.compose(&q);
        for i in 1..=3 {
            assert_eq!(pq.at(i), p.at(q.at(i)));
        }
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(all_permutations(5).len(), 120);
        assert_eq!(all_permutations(5).iter().collect::<HashSet<_>>().len(), 120);
        assert_eq!(all_signed_permutations(3).len(), 48);
        assert_eq!(all_signed_permutations(3).iter().collect::<HashSet<_>>().len(), 48);
    }

    #[test]
    fn descent_number_is_set_size() {
        for n in 1..=6 {
            for p in all_permutations(n) {
                assert_eq!(p.descent_number(), p.descent_set().len());
            }
        }
    }

    #[test]
    fn descent_table_s3_identity() {
        let t = descent_table(GroupKind::A, 3, 0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = match (i, j) {
                    (0, 0) | (2, 2) => 1,
                    (1, 1) => 4,
                    _ => 0,
                };
                assert_eq!(t.get(i, j), expected, "c_{i}{j}");
            }
        }
    }

    #[test]
    fn descent_table_totals() {
        for n in 1..=6 {
            for d in 0..n {
                let t = descent_table(GroupKind::A, n, d).unwrap();
                assert_eq!(t.total(), (1..=n as u64).product::<u64>());
            }
        }
        let b = descent_table(GroupKind::B, 2, 0).unwrap();
        assert_eq!(b.total(), 8);
    }

    #[test]
    fn descent_table_rejects_bad_input() {
        assert!(matches!(
            descent_table(GroupKind::A, 9, 0),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            descent_table(GroupKind::B, 7, 0),
            Err(Error::CapExceeded { .. })
        ));
        assert!(descent_table(GroupKind::A, 3, 3).is_err());
        assert!(descent_table(GroupKind::B, 3, 4).is_err());
    }

    #[test]
    fn canonical_representatives_have_requested_descents() {
        for n in 1..=6 {
            for d in 0..n {
                assert_eq!(canonical_with_descents(n, d).unwrap().descent_number(), d);
            }
            for d in 0..=n {
                assert_eq!(canonical_signed_with_descents(n, d).unwrap().descent_number(), d);
            }
        }
    }

    #[test]
    fn descent_table_depends_only_on_descent_number_type_a() {
        for n in 1..=5 {
            let mut seen: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
            for sigma in all_permutations(n) {
                let t = descent_table_for(&sigma).unwrap();
                let prev = seen.entry(t.d).or_insert_with(|| t.rows().to_vec());
                assert_eq!(prev, &t.rows().to_vec(), "sigma = {sigma}");
            }
        }
    }

    #[test]
    fn descent_table_depends_only_on_descent_number_type_b() {
        for n in 1..=4 {
            let mut seen: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
            for sigma in all_signed_permutations(n) {
                let t = descent_table_for_signed(&sigma).unwrap();
                let prev = seen.entry(t.d).or_insert_with(|| t.rows().to_vec());
                assert_eq!(prev, &t.rows().to_vec(), "sigma = {sigma}");
            }
        }
    }

    #[test]
    fn descent_table_marginals_are_eulerian() {
        for n in 1..=5 {
            for d in 0..n {
                let t = descent_table(GroupKind::A, n, d).unwrap();
                for i in 0..n {
                    let row: u64 = (0..n).map(|j| t.get(i, j)).sum();
                    let col: u64 = (0..n).map(|j| t.get(j, i)).sum();
                    let a = crate::exact::eulerian(n as u32, i as i64);
                    assert_eq!(num_bigint::BigInt::from(row), a);
                    assert_eq!(num_bigint::BigInt::from(col), a);
                }
            }
        }
    }

    #[test]
    fn rsk_small_cases() {
        let (p, q) = rsk(&Permutation::identity(4));
        assert_eq!(p.rows(), &[vec![1, 2, 3, 4]]);
        assert_eq!(q.rows(), &[vec![1, 2, 3, 4]]);
        let (p, q) = rsk(&perm(&[2, 1]));
        assert_eq!(p.rows(), &[vec![1], vec![2]]);
        assert_eq!(q.rows(), &[vec![1], vec![2]]);
        assert_eq!(q.descent_set(), DescentSet::from_positions(&[1]));
    }

    #[test]
    fn rsk_is_a_descent_preserving_bijection() {
        for n in 1..=5 {
            let mut pairs = HashSet::new();
            let mut shape_counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for p in all_permutations(n) {
                let (ins, rec) = rsk(&p);
                assert!(ins.is_standard() && rec.is_standard());
                assert_eq!(ins.shape(), rec.shape());
                assert_eq!(p.descent_set(), rec.descent_set(), "p = {p}");
                *shape_counts.entry(rec.shape()).or_insert(0) += 1;
                assert!(pairs.insert((ins, rec)));
            }
            let total: u64 = (1..=n as u64).product();
            assert_eq!(pairs.len() as u64, total);
            // each shape λ is hit f_λ^2 times; distinct recording tableaux per shape give f_λ
            assert_eq!(shape_counts.values().sum::<u64>(), total);
        }
    }

    #[test]
    fn descent_set_counts_small() {
        let two = descent_set_counts(2).unwrap();
        assert_eq!(two[&DescentSet::empty()], 1);
        assert_eq!(two[&DescentSet::from_positions(&[1])], 1);
        let three = descent_set_counts(3).unwrap();
        assert_eq!(three[&DescentSet::empty()], 1);
        assert_eq!(three[&DescentSet::from_positions(&[1])], 2);
        assert_eq!(three[&DescentSet::from_positions(&[2])], 2);
        assert_eq!(three[&DescentSet::from_positions(&[1, 2])], 1);
        for n in 1..=7 {
            let counts = descent_set_counts(n).unwrap();
            assert_eq!(counts.values().sum::<u64>(), (1..=n as u64).product::<u64>());
            for j in 0..n {
                let marginal: u64 = counts
                    .iter()
                    .filter(|(s, _)| s.len() == j)
                    .map(|(_, c)| c)
                    .sum();
                assert_eq!(
                    num_bigint::BigInt::from(marginal),
                    crate::exact::eulerian(n as u32, j as i64)
                );
            }
        }
        assert!(descent_set_counts(9).is_err());
    }
}
