//! Root systems, Weyl group elements, Bott-Samelson words and subword indices.
//!
//! All root and letter indices exposed by this module are 1-based, matching the
//! usual labelling α_1, …, α_r of simple roots. Cartan matrices follow the
//! orientation `entry(i, j) = (α_j, α_i^∨)`.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of roots generated before a Cartan matrix is
/// declared to be of infinite type. E8 has 240 roots.
pub const ROOT_CLOSURE_BOUND: usize = 4096;

/// Largest supported word length (subword indices are packed into a `u64`).
pub const MAX_WORD_LEN: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let rank = entries.len();
        if rank == 0 {
            return Err(Error::InvalidCartan("rank must be positive".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidCartan(format!(
                    "row {} has {} entries, expected {rank}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..rank {
            if entries[i][i] != 2 {
                return Err(Error::InvalidCartan(format!(
                    "diagonal entry ({0},{0}) is {1}, expected 2",
                    i + 1,
                    entries[i][i]
                )));
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                if entries[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "off-diagonal entry ({},{}) is positive",
                        i + 1,
                        j + 1
                    )));
                }
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "entries ({0},{1}) and ({1},{0}) must vanish together",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Builds a preset such as `A2`, `B3`, `D4`, `E8`, `F4` or `G2` (Bourbaki numbering).
    pub fn preset(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownPreset(name.to_string());
        let trimmed = name.trim();
        let mut chars = trimmed.chars();
        let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest.parse().map_err(|_| unknown())?;
        let edges: Vec<(usize, usize, i64, i64)> = match (family, rank) {
            ('A', r) if r >= 1 => chain(r),
            ('B', r) if r >= 2 => {
                let mut e = chain(r);
                let last = e.last_mut().expect("rank >= 2");
                // α_r is short
                *last = (r - 1, r, -1, -2);
                e
            }
            ('C', r) if r >= 2 => {
                let mut e = chain(r);
                let last = e.last_mut().expect("rank >= 2");
                *last = (r - 1, r, -2, -1);
                e
            }
            ('D', r) if r >= 3 => {
                let mut e = chain(r - 1);
                e.push((r - 2, r, -1, -1));
                e
            }
            ('E', r @ 6..=8) => {
                let mut e = vec![(1, 3, -1, -1), (2, 4, -1, -1)];
                for k in 3..r {
                    e.push((k, k + 1, -1, -1));
                }
                e
            }
            ('F', 4) => vec![(1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)],
            ('G', 2) => vec![(1, 2, -3, -1)],
            _ => return Err(unknown()),
        };
        let mut entries = vec![vec![0i64; rank]; rank];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j, ij, ji) in edges {
            entries[i - 1][j - 1] = ij;
            entries[j - 1][i - 1] = ji;
        }
        Self::new(entries)
    }

    /// Parses the plain-text format: a rank line followed by `rank` rows of
    /// integers. Blank lines and `#` comments are ignored; commas are accepted
    /// as separators.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let rank_line = lines
            .next()
            .ok_or_else(|| Error::Parse("empty Cartan matrix file".into()))?;
        let rank: usize = rank_line
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rank line `{rank_line}`")))?;
        let mut entries = Vec::with_capacity(rank);
        for line in lines {
            let row = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("invalid integer `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            entries.push(row);
        }
        if entries.len() != rank {
            return Err(Error::Parse(format!(
                "expected {rank} rows, found {}",
                entries.len()
            )));
        }
        Self::new(entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.rank());
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// `entry(i, j) = (α_j, α_i^∨)`, 1-based. Panics on an invalid index.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.rank() {
            Err(Error::IndexOutOfRange {
                index,
                rank: self.rank(),
            })
        } else {
            Ok(())
        }
    }

    /// Integers `d_i` with `d_i·entry(i,j) = d_j·entry(j,i)`, proportional to
    /// the squared root lengths, normalized to be coprime.
    pub fn symmetrizer(&self) -> Result<Vec<i64>> {
        let r = self.rank();
        let mut d: Vec<Option<Ratio<i64>>> = vec![None; r];
        for start in 0..r {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(Ratio::one());
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let di = d[i].expect("visited");
                for j in 0..r {
                    if i == j || self.entries[i][j] == 0 {
                        continue;
                    }
                    let want = di * Ratio::from(self.entries[i][j]) / Ratio::from(self.entries[j][i]);
                    match d[j] {
                        None => {
                            d[j] = Some(want);
                            queue.push_back(j);
                        }
                        Some(dj) if dj != want => {
                            return Err(Error::InvalidCartan("matrix is not symmetrizable".into()));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let d: Vec<Ratio<i64>> = d.into_iter().map(|x| x.expect("all visited")).collect();
        let lcm = d
            .iter()
            .fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
        let ints: Vec<i64> = d.iter().map(|x| (x * Ratio::from(lcm)).to_integer()).collect();
        let g = ints.iter().fold(0i64, |acc, x| num_integer::gcd(acc, *x));
        Ok(ints.into_iter().map(|x| x / g).collect())
    }
}

impl FromStr for CartanMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl TryFrom<Vec<Vec<i64>>> for CartanMatrix {
    type Error = Error;
    fn try_from(entries: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<CartanMatrix> for Vec<Vec<i64>> {
    fn from(c: CartanMatrix) -> Self {
        c.entries
    }
}

fn chain(r: usize) -> Vec<(usize, usize, i64, i64)> {
    (1..r).map(|i| (i, i + 1, -1, -1)).collect()
}

/// Integer coordinates in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    /// The simple root α_i (1-based).
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        Self(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Sign of the first nonzero coordinate; meaningful for roots, whose
    /// coordinates never change sign.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn positive_representative(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", cells.join(","))
    }
}

/// A Weyl group element as an integer matrix acting on the root lattice;
/// column `c` holds the image of α_{c+1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut m = vec![vec![0; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        Self { matrix: m }
    }

    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Self {
        Self { matrix }
    }

    /// The simple reflection s_j.
    pub fn simple_reflection(cartan: &CartanMatrix, j: usize) -> Self {
        let r = cartan.rank();
        let mut m = Self::identity(r).matrix;
        for c in 0..r {
            m[j - 1][c] -= cartan.entry(j, c + 1);
        }
        Self { matrix: m }
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    pub fn apply(&self, v: &RootVector) -> RootVector {
        RootVector(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let r = self.rank();
        let mut m = vec![vec![0; r]; r];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..r).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        Self { matrix: m }
    }

    /// Exact inverse by rational Gauss-Jordan elimination. Weyl group
    /// elements are unimodular, so the result is integral.
    pub fn inverse(&self) -> Self {
        let r = self.rank();
        let mut a: Vec<Vec<Ratio<i64>>> = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut ext: Vec<Ratio<i64>> = row.iter().map(|&x| Ratio::from(x)).collect();
                ext.extend((0..r).map(|j| if i == j { Ratio::one() } else { Ratio::zero() }));
                ext
            })
            .collect();
        for col in 0..r {
            let pivot = (col..r)
                .find(|&i| !a[i][col].is_zero())
                .expect("Weyl group elements are invertible");
            a.swap(col, pivot);
            let p = a[col][col];
            for x in a[col].iter_mut() {
                *x /= p;
            }
            for i in 0..r {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col];
                    for k in 0..2 * r {
                        let sub = f * a[col][k];
                        a[i][k] -= sub;
                    }
                }
            }
        }
        let m = a
            .into_iter()
            .map(|row| {
                row[r..]
                    .iter()
                    .map(|x| {
                        assert!(x.is_integer(), "inverse of a Weyl element is integral");
                        x.to_integer()
                    })
                    .collect()
            })
            .collect();
        Self { matrix: m }
    }
}

/// Positive roots and the invariant form of a finite-type Cartan matrix.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: CartanMatrix,
    positive: Vec<RootVector>,
    symmetrizer: Vec<i64>,
}

impl RootSystem {
    pub fn new(cartan: &CartanMatrix) -> Result<Self> {
        let r = cartan.rank();
        let symmetrizer = cartan.symmetrizer()?;
        let mut seen: HashSet<RootVector> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 1..=r {
            let a = RootVector::simple(r, i);
            seen.insert(a.clone());
            queue.push_back(a);
        }
        while let Some(v) = queue.pop_front() {
            for j in 1..=r {
                let w = reflect_with(cartan, j, &v);
                if seen.insert(w.clone()) {
                    if seen.len() > ROOT_CLOSURE_BOUND {
                        return Err(Error::NotFiniteType {
                            bound: ROOT_CLOSURE_BOUND,
                        });
                    }
                    queue.push_back(w);
                }
            }
        }
        let mut positive: Vec<RootVector> = seen.into_iter().filter(|v| v.is_positive()).collect();
        positive.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.cmp(a)));
        Ok(Self {
            cartan: cartan.clone(),
            positive,
            symmetrizer,
        })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    /// Positive roots ordered by height, simple roots first.
    pub fn positive_roots(&self) -> &[RootVector] {
        &self.positive
    }

    pub fn is_root(&self, v: &RootVector) -> bool {
        self.positive.contains(&v.positive_representative()) && !v.is_zero()
    }

    /// The Weyl-invariant symmetric form, scaled so that `(α_i, α_i) = 2 d_i`.
    pub fn form(&self, u: &RootVector, v: &RootVector) -> i64 {
        let r = self.cartan.rank();
        let mut total = 0;
        for i in 0..r {
            if u.0[i] == 0 {
                continue;
            }
            for j in 0..r {
                total += u.0[i] * v.0[j] * self.cartan.entry(i + 1, j + 1) * self.symmetrizer[i];
            }
        }
        total
    }

    /// `(v, γ^∨) = 2(v, γ)/(γ, γ)` for a root γ.
    pub fn coroot_pairing(&self, v: &RootVector, gamma: &RootVector) -> i64 {
        let num = 2 * self.form(v, gamma);
        let den = self.form(gamma, gamma);
        debug_assert!(num % den == 0, "pairing with a coroot is integral");
        num / den
    }

    /// The reflection s_γ as a Weyl element.
    pub fn reflection(&self, gamma: &RootVector) -> WeylElement {
        let r = self.cartan.rank();
        let mut m = WeylElement::identity(r).matrix;
        for c in 0..r {
            let k = self.coroot_pairing(&RootVector::simple(r, c + 1), gamma);
            for (row, g) in m.iter_mut().zip(&gamma.0) {
                row[c] -= k * g;
            }
        }
        WeylElement::from_matrix(m)
    }

    /// The positive root γ with s_γ = u, if u is a reflection.
    pub fn reflection_root(&self, u: &WeylElement) -> Option<RootVector> {
        if u.is_identity() {
            return None;
        }
        self.positive
            .iter()
            .find(|g| self.reflection(g) == *u)
            .cloned()
    }
}

fn reflect_with(cartan: &CartanMatrix, j: usize, v: &RootVector) -> RootVector {
    let k: i64 = v
        .0
        .iter()
        .enumerate()
        .map(|(i, x)| x * cartan.entry(j, i + 1))
        .sum();
    let mut out = v.clone();
    out.0[j - 1] -= k;
    out
}

/// A Bott-Samelson word: a Cartan matrix and a sequence of simple-root indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    cartan: CartanMatrix,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(cartan: CartanMatrix, letters: Vec<usize>) -> Result<Self> {
        for &a in &letters {
            cartan.check_index(a)?;
        }
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::Unsupported(format!(
                "word length {} exceeds {MAX_WORD_LEN}",
                letters.len()
            )));
        }
        Ok(Self { cartan, letters })
    }

    /// Parses a comma-separated letter list such as `1,2,1`.
    pub fn parse_letters(text: &str) -> Result<Vec<usize>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid letter `{t}`")))
            })
            .collect()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// The k-th letter a_k (1-based).
    pub fn letter(&self, k: usize) -> usize {
        self.letters[k - 1]
    }

    /// The word formed by the first `m` letters.
    pub fn prefix(&self, m: usize) -> Self {
        Self {
            cartan: self.cartan.clone(),
            letters: self.letters[..m].to_vec(),
        }
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        RootSystem::new(&self.cartan)
    }

    /// `(α_i, α_j^∨)`.
    pub fn cartan_pairing(&self, i: usize, j: usize) -> Result<i64> {
        self.cartan.check_index(i)?;
        self.cartan.check_index(j)?;
        Ok(self.cartan.entry(j, i))
    }

    /// `s_j(v) = v − (v, α_j^∨) α_j`.
    pub fn reflect(&self, j: usize, v: &RootVector) -> Result<RootVector> {
        self.cartan.check_index(j)?;
        if v.0.len() != self.rank() {
            return Err(Error::WordMismatch(format!(
                "root vector has {} coordinates, rank is {}",
                v.0.len(),
                self.rank()
            )));
        }
        Ok(reflect_with(&self.cartan, j, v))
    }

    fn check_eps(&self, eps: &SubwordIndex, k: usize) -> Result<()> {
        if eps.len() != self.len() {
            return Err(Error::WordMismatch(format!(
                "subword index {eps} has length {}, word has length {}",
                eps.len(),
                self.len()
            )));
        }
        if k > self.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                rank: self.len(),
            });
        }
        Ok(())
    }

    /// w_k(ε): the product of s_{a_i} over i ≤ k with ε_i = 1, in increasing order.
    pub fn weyl_prefix(&self, eps: &SubwordIndex, k: usize) -> Result<WeylElement> {
        self.check_eps(eps, k)?;
        let mut w = WeylElement::identity(self.rank());
        for i in 1..=k {
            if eps.bit(i) {
                w = w.compose(&WeylElement::simple_reflection(&self.cartan, self.letter(i)));
            }
        }
        Ok(w)
    }

    /// w(ε) = w_n(ε).
    pub fn weyl_element(&self, eps: &SubwordIndex) -> Result<WeylElement> {
        self.weyl_prefix(eps, self.len())
    }

    /// ε(α_k) = w_k(ε)·α_{a_k}.
    pub fn root_at(&self, eps: &SubwordIndex, k: usize) -> Result<RootVector> {
        self.check_eps(eps, k)?;
        if k == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                rank: self.len(),
            });
        }
        let mut v = RootVector::simple(self.rank(), self.letter(k));
        for i in (1..=k).rev() {
            if eps.bit(i) {
                v = reflect_with(&self.cartan, self.letter(i), &v);
            }
        }
        Ok(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.letters.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", cells.join(","))
    }
}

/// A 0/1 sequence ε indexing T-fixed points and the classes σ_ε, [Z_ε].
///
/// Position `i` (1-based) is stored in bit `i-1`. Ordering is lexicographic
/// on the bit string, so `"001" < "010"`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SubwordIndex {
    mask: u64,
    len: u8,
}

impl SubwordIndex {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_WORD_LEN, "subword index too long");
        Self {
            mask: 0,
            len: n as u8,
        }
    }

    pub fn ones(n: usize) -> Self {
        assert!(n <= MAX_WORD_LEN, "subword index too long");
        Self {
            mask: (1u64 << n) - 1,
            len: n as u8,
        }
    }

    /// The index (i) with a single one at position `i` (1-based).
    pub fn unit(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "position out of range");
        Self::zeros(n).with_bit(i, true)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut e = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                e.mask |= 1 << i;
            }
        }
        e
    }

    pub fn from_support(n: usize, support: &[usize]) -> Self {
        support
            .iter()
            .fold(Self::zeros(n), |e, &i| e.with_bit(i, true))
    }

    /// Raw mask with position i in bit i-1.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut e = Self::zeros(n);
        e.mask = mask & Self::ones(n).mask;
        e
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Value at position `i` (1-based).
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.len());
        self.mask >> (i - 1) & 1 == 1
    }

    pub fn with_bit(&self, i: usize, value: bool) -> Self {
        let mut e = *self;
        if value {
            e.mask |= 1 << (i - 1);
        } else {
            e.mask &= !(1 << (i - 1));
        }
        e
    }

    /// ℓ(ε): the number of ones.
    pub fn ell(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Positions holding a one, ascending.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.bit(i)).collect()
    }

    pub fn is_transverse(&self, other: &Self) -> bool {
        self.mask & other.mask == 0
    }

    /// Whether the support of `self` is contained in that of `other`.
    pub fn is_below(&self, other: &Self) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            mask: self.mask | other.mask,
            len: self.len.max(other.len),
        }
    }

    pub fn complement(&self) -> Self {
        Self::from_mask(self.len(), !self.mask)
    }

    /// Appends one position: `false` gives ε⁰, `true` gives ε^∞.
    pub fn extend(&self, bit: bool) -> Self {
        let n = self.len() + 1;
        let mut e = Self::from_mask(n, self.mask);
        if bit {
            e.mask |= 1 << (n - 1);
        }
        e
    }

    /// The first `m` positions.
    pub fn prefix(&self, m: usize) -> Self {
        Self::from_mask(m, self.mask)
    }

    /// First position where the two indices differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let diff = self.mask ^ other.mask;
        (diff != 0).then(|| diff.trailing_zeros() as usize + 1)
    }

    /// All 2^n indices in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut v: Vec<Self> = (0..1u64 << n).map(|m| Self::from_mask(n, m)).collect();
        v.sort();
        v
    }

    /// All 2^n indices ordered by ℓ, then reverse-lexicographically
    /// (for n = 3: 000, 100, 010, 001, 110, 101, 011, 111).
    pub fn basis_order(n: usize) -> Vec<Self> {
        let mut v: Vec<Self> = (0..1u64 << n).map(|m| Self::from_mask(n, m)).collect();
        v.sort_by(|a, b| a.ell().cmp(&b.ell()).then_with(|| b.cmp(a)));
        v
    }

    pub fn to_bit_string(&self) -> String {
        (1..=self.len())
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }
}

impl Ord for SubwordIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len().min(other.len());
        for i in 1..=common {
            match self.bit(i).cmp(&other.bit(i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for SubwordIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubwordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for SubwordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ε{}", self.to_bit_string())
    }
}

impl FromStr for SubwordIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_WORD_LEN {
            return Err(Error::Parse(format!("subword index `{s}` too long")));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("invalid subword index `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }
}

impl TryFrom<String> for SubwordIndex {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SubwordIndex> for String {
    fn from(e: SubwordIndex) -> Self {
        e.to_bit_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(s: &str) -> SubwordIndex {
        s.parse().unwrap()
    }

    fn a2_word(letters: &[usize]) -> Word {
        Word::new(CartanMatrix::preset("A2").unwrap(), letters.to_vec()).unwrap()
    }

    #[test]
    fn pairing_a2() {
        let w = a2_word(&[1, 2, 1]);
        assert_eq!(w.cartan_pairing(1, 1).unwrap(), 2);
        assert_eq!(w.cartan_pairing(1, 2).unwrap(), -1);
        assert_eq!(w.cartan_pairing(2, 1).unwrap(), -1);
        assert!(matches!(
            w.cartan_pairing(3, 1),
            Err(Error::IndexOutOfRange { index: 3, rank: 2 })
        ));
    }

    #[test]
    fn pairing_orientation_b2() {
        // α_2 is short in B2, so (α_2, α_1^∨) = -1 and (α_1, α_2^∨) = -2.
        let w = Word::new(CartanMatrix::preset("B2").unwrap(), vec![1, 2]).unwrap();
        assert_eq!(w.cartan_pairing(1, 2).unwrap(), -2);
        assert_eq!(w.cartan_pairing(2, 1).unwrap(), -1);
    }

    #[test]
    fn reflections_a2() {
        let w = a2_word(&[1]);
        let a1 = RootVector::simple(2, 1);
        assert_eq!(w.reflect(1, &a1).unwrap(), a1.neg());
        assert_eq!(w.reflect(2, &a1).unwrap(), RootVector(vec![1, 1]));
        assert_eq!(w.reflect(1, &RootVector(vec![1, 1])).unwrap(), RootVector(vec![0, 1]));
    }

    #[test]
    fn prefixes() {
        let w = a2_word(&[1, 2, 1]);
        let c = w.cartan().clone();
        for k in 0..=3 {
            assert!(w.weyl_prefix(&eps("000"), k).unwrap().is_identity());
        }
        let s1 = WeylElement::simple_reflection(&c, 1);
        let s2 = WeylElement::simple_reflection(&c, 2);
        assert_eq!(w.weyl_prefix(&eps("110"), 3).unwrap(), s1.compose(&s2));
        assert!(w.weyl_prefix(&eps("101"), 3).unwrap().is_identity());
    }

    #[test]
    fn roots_at_positions() {
        let w = a2_word(&[1, 2, 1]);
        assert_eq!(w.root_at(&eps("000"), 2).unwrap(), RootVector(vec![0, 1]));
        assert_eq!(w.root_at(&eps("010"), 3).unwrap(), RootVector(vec![1, 1]));
        assert_eq!(w.root_at(&eps("110"), 3).unwrap(), RootVector(vec![0, 1]));
        assert!(w.root_at(&eps("00"), 1).is_err());
    }

    #[test]
    fn positive_root_counts() {
        let expected = [
            ("A1", 1),
            ("A2", 3),
            ("A4", 10),
            ("B3", 9),
            ("C4", 16),
            ("D4", 12),
            ("D5", 20),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("F4", 24),
            ("G2", 6),
        ];
        for (name, count) in expected {
            let rs = RootSystem::new(&CartanMatrix::preset(name).unwrap()).unwrap();
            assert_eq!(rs.positive_roots().len(), count, "{name}");
        }
    }

    #[test]
    fn affine_matrix_is_rejected() {
        let affine = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(matches!(
            RootSystem::new(&affine),
            Err(Error::NotFiniteType { .. })
        ));
    }

    #[test]
    fn reflection_roots() {
        let c = CartanMatrix::preset("A2").unwrap();
        let rs = RootSystem::new(&c).unwrap();
        let s1 = WeylElement::simple_reflection(&c, 1);
        let s2 = WeylElement::simple_reflection(&c, 2);
        assert_eq!(rs.reflection_root(&s1), Some(RootVector(vec![1, 0])));
        let u = s2.compose(&s1).compose(&s2);
        assert_eq!(rs.reflection_root(&u), Some(RootVector(vec![1, 1])));
        assert_eq!(rs.reflection_root(&WeylElement::identity(2)), None);
        assert_eq!(rs.reflection_root(&s1.compose(&s2)), None);
    }

    #[test]
    fn reflection_of_long_root_g2() {
        let c = CartanMatrix::preset("G2").unwrap();
        let rs = RootSystem::new(&c).unwrap();
        for g in rs.positive_roots() {
            let s = rs.reflection(g);
            assert_eq!(s.apply(g), g.neg());
            assert!(s.compose(&s).is_identity());
            assert_eq!(rs.reflection_root(&s).as_ref(), Some(g));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let c = CartanMatrix::preset("B3").unwrap();
        let w = WeylElement::simple_reflection(&c, 1)
            .compose(&WeylElement::simple_reflection(&c, 3))
            .compose(&WeylElement::simple_reflection(&c, 2));
        assert!(w.compose(&w.inverse()).is_identity());
    }

    #[test]
    fn text_format_roundtrip() {
        let c = CartanMatrix::preset("F4").unwrap();
        assert_eq!(CartanMatrix::parse(&c.to_text()).unwrap(), c);
        let parsed = CartanMatrix::parse("# G2\n2\n2, -3\n-1 2\n").unwrap();
        assert_eq!(parsed, CartanMatrix::preset("G2").unwrap());
        assert!(CartanMatrix::parse("2\n2 1\n-1 2\n").is_err());
        assert!(CartanMatrix::parse("2\n2 -1\n").is_err());
    }

    #[test]
    fn unknown_presets() {
        for name in ["X3", "E5", "G3", "B1", "A0", ""] {
            assert!(CartanMatrix::preset(name).is_err(), "{name}");
        }
    }

    #[test]
    fn subword_ordering_and_ops() {
        let all: Vec<String> = SubwordIndex::all(3).iter().map(|e| e.to_string()).collect();
        assert_eq!(all, ["000", "001", "010", "011", "100", "101", "110", "111"]);
        let basis: Vec<String> = SubwordIndex::basis_order(3)
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(basis, ["000", "100", "010", "001", "110", "101", "011", "111"]);
        let e = eps("101");
        assert_eq!(e.ell(), 2);
        assert_eq!(e.support(), vec![1, 3]);
        assert!(e.is_transverse(&eps("010")));
        assert!(eps("100").is_below(&e));
        assert_eq!(e.extend(true).to_string(), "1011");
        assert_eq!(e.prefix(2).to_string(), "10");
        assert_eq!(eps("0101").first_difference(&eps("0110")), Some(3));
        assert_eq!(e.complement().to_string(), "010");
        assert!("10a".parse::<SubwordIndex>().is_err());
    }
}
