//! Small quantum cohomology through Chevalley matrices.
//!
//! Quantum multiplication by each divisor σ_(j) is written as a matrix whose
//! quantum corrections are Gromov-Witten invariants. Invariants fixed by the
//! axioms or known geometry are seeded; the rest become unknown symbols that
//! are then determined by requiring the matrices to commute.

pub mod poly;
pub mod reference;
pub mod ring;
pub mod solve;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cohomology::{deg_q, integrate, multiplication_matrix, multiply, pair_curve, subvariety_class, CohClass};
use crate::effcone::{certified_components, gw_vanishes, EffectiveCone};
use crate::error::{Error, Result};
use crate::momentgraph::CurveClass;
use crate::rootsys::{CartanMatrix, SubwordIndex, Word};

pub use poly::{Monomial, Poly, QExp, QPoly, Sym};

/// Number of unknown invariants for the word (1,2,1) over A₂.
pub const CERTIFIED_UNKNOWN_COUNT: usize = 111;

/// Whether `word` is (1,2,1) over A₂, the only word whose quantum pipeline is certified.
pub fn is_certified(word: &Word) -> bool {
    word.letters() == [1, 2, 1] && CartanMatrix::preset("A2").is_ok_and(|c| *word.cartan() == c)
}

/// A two-point or (divisor-reduced) one-point Gromov-Witten invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum InvariantKey {
    /// ⟨[Z_target]⟩_β
    OnePoint { beta: CurveClass, target: SubwordIndex },
    /// ⟨σ_insertion, [Z_target]⟩_β
    TwoPoint {
        beta: CurveClass,
        insertion: SubwordIndex,
        target: SubwordIndex,
    },
}

impl InvariantKey {
    pub fn beta(&self) -> &CurveClass {
        match self {
            Self::OnePoint { beta, .. } | Self::TwoPoint { beta, .. } => beta,
        }
    }

    pub fn target(&self) -> SubwordIndex {
        match self {
            Self::OnePoint { target, .. } | Self::TwoPoint { target, .. } => *target,
        }
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OnePoint { beta, target } => write!(f, "<[Z_{target}]>_{beta}"),
            Self::TwoPoint {
                beta,
                insertion,
                target,
            } => write!(f, "<σ{insertion},[Z_{target}]>_{beta}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TableEntry {
    Known { value: i64, provenance: String },
    Unknown(Sym),
}

/// Invariant keys with their known values or symbol ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnknownTable {
    entries: BTreeMap<InvariantKey, TableEntry>,
    names: Vec<String>,
    keys: Vec<InvariantKey>,
}

impl UnknownTable {
    pub fn insert_known(&mut self, key: InvariantKey, value: i64, provenance: &str) {
        self.entries.insert(
            key,
            TableEntry::Known {
                value,
                provenance: provenance.to_string(),
            },
        );
    }

    /// Returns the entry for `key`, creating the symbol `name()` if it is new.
    fn entry_or_symbol(&mut self, key: &InvariantKey, name: impl FnOnce() -> String) -> TableEntry {
        if let Some(e) = self.entries.get(key) {
            return e.clone();
        }
        let sym = self.names.len() as Sym;
        self.names.push(name());
        self.keys.push(key.clone());
        self.entries.insert(key.clone(), TableEntry::Unknown(sym));
        TableEntry::Unknown(sym)
    }

    pub fn get(&self, key: &InvariantKey) -> Option<&TableEntry> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> &BTreeMap<InvariantKey, TableEntry> {
        &self.entries
    }

    /// Number of unknown symbols.
    pub fn unknown_count(&self) -> usize {
        self.names.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> {
        0..self.names.len() as Sym
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn key(&self, s: Sym) -> &InvariantKey {
        &self.keys[s as usize]
    }

    pub fn symbol(&self, name: &str) -> Option<Sym> {
        self.names.iter().position(|n| n == name).map(|i| i as Sym)
    }

    pub fn namer(&self) -> impl Fn(Sym) -> String + '_ {
        move |s| self.names[s as usize].clone()
    }

    fn value_poly(entry: &TableEntry) -> Poly {
        match entry {
            TableEntry::Known { value, .. } => Poly::constant(*value),
            TableEntry::Unknown(s) => Poly::var(*s),
        }
    }
}

/// Square matrix of [`QPoly`] entries; column ε holds the image of σ_ε.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    entries: Vec<Vec<QPoly>>,
}

pub type ChevalleyMatrix = QMatrix;

impl QMatrix {
    pub fn zero(size: usize) -> Self {
        Self {
            entries: vec![vec![QPoly::zero(); size]; size],
        }
    }

    pub fn identity(size: usize, ngens: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.entries[i][i] = QPoly::constant(ngens, 1);
        }
        m
    }

    pub fn from_entries(entries: Vec<Vec<QPoly>>) -> Self {
        Self { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> &QPoly {
        &self.entries[row][col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut QPoly {
        &mut self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<QPoly>] {
        &self.entries
    }

    pub fn column(&self, col: usize) -> Vec<QPoly> {
        self.entries.iter().map(|r| r[col].clone()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] = out.entries[i][j].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, QPoly::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, QPoly::sub)
    }

    pub fn scale_by(&self, q: &QPoly) -> Self {
        self.map(|x| q.mul(x))
    }

    pub fn map(&self, f: impl Fn(&QPoly) -> QPoly) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&QPoly, &QPoly) -> QPoly) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(QPoly::is_zero)
    }

    /// The matrix with all quantum parameters set to zero.
    pub fn classical(&self) -> Vec<Vec<Poly>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(QPoly::classical_part).collect())
            .collect()
    }

    /// Integer matrix at q = 1; `None` if any entry still involves unknowns.
    pub fn at_q_one(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| x.at_q_one().as_constant()).collect())
            .collect()
    }

    pub fn display_with(&self, names: &dyn Fn(Sym) -> String) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| x.display_with(names)).collect())
            .collect()
    }
}

/// Shared data for the quantum computations on one word.
#[derive(Debug, Clone)]
pub struct QhContext {
    word: Word,
    cone: EffectiveCone,
    basis: Vec<SubwordIndex>,
    gen_degrees: Vec<i64>,
}

/// One quantum correction term `factor · ⟨…⟩_β · q^β σ_row` in column `col`
/// of the matrix of σ_(j).
#[derive(Debug, Clone)]
struct Correction {
    col: SubwordIndex,
    row: SubwordIndex,
    qexp: QExp,
    factor: i64,
    key: InvariantKey,
}

impl QhContext {
    /// Requires cone generators of positive degree that are linearly
    /// independent, so each effective class has a unique q-monomial.
    pub fn new(word: &Word) -> Result<Self> {
        let cone = EffectiveCone::build(word)?;
        let gen_degrees: Vec<i64> = cone.generators().iter().map(|g| deg_q(word, g)).collect();
        if let Some(g) = cone.generators().iter().find(|g| deg_q(word, g) <= 0) {
            return Err(Error::Unsupported(format!(
                "cone generator {g} has non-positive degree; the variety is not Fano"
            )));
        }
        if rank_of(cone.generators()) != cone.generators().len() {
            return Err(Error::Unsupported(
                "cone generators are linearly dependent".into(),
            ));
        }
        Ok(Self {
            word: word.clone(),
            cone,
            basis: SubwordIndex::basis_order(word.len()),
            gen_degrees,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn cone(&self) -> &EffectiveCone {
        &self.cone
    }

    pub fn basis(&self) -> &[SubwordIndex] {
        &self.basis
    }

    pub fn ngens(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn position(&self, eps: &SubwordIndex) -> usize {
        self.basis.iter().position(|e| e == eps).expect("basis element")
    }

    /// dim Z + deg q^β − 2, the expected dimension of one-pointed stable maps.
    pub fn expected_dim(&self, beta: &CurveClass) -> i64 {
        self.word.len() as i64 + deg_q(&self.word, beta) - 2
    }

    /// Nonzero effective classes of degree at most `max_deg`, in naming order.
    pub fn classes_up_to(&self, max_deg: i64) -> Vec<(QExp, CurveClass)> {
        let mut out = Vec::new();
        let mut exp = vec![0u32; self.ngens()];
        self.collect_exponents(0, max_deg, &mut exp, &mut out);
        out.sort_by_key(|(a, _)| class_order_key(a, &self.gen_degrees));
        out
    }

    fn collect_exponents(&self, idx: usize, budget: i64, exp: &mut QExp, out: &mut Vec<(QExp, CurveClass)>) {
        if idx == exp.len() {
            if exp.iter().any(|&x| x > 0) {
                out.push((exp.clone(), self.cone.combine(&exp.iter().map(|&x| x as u64).collect::<Vec<_>>())));
            }
            return;
        }
        let d = self.gen_degrees[idx];
        let mut k = 0;
        while k * d <= budget {
            exp[idx] = k as u32;
            self.collect_exponents(idx + 1, budget - k * d, exp, out);
            k += 1;
        }
        exp[idx] = 0;
    }

    pub fn qexp(&self, beta: &CurveClass) -> Option<QExp> {
        self.cone
            .is_effective(beta)
            .map(|v| v.into_iter().map(|x| x as u32).collect())
    }

    /// Classes that can contribute to σ_(j) ∗ σ_ε with ℓ(ε) = `ell`.
    pub fn admissible_classes(&self, j: usize, ell: usize) -> Result<Vec<CurveClass>> {
        let n = self.word.len() as i64;
        let mut out = Vec::new();
        for (_, beta) in self.classes_up_to(ell as i64 + 1) {
            if pair_curve(&self.word, j, &beta)? == 0 {
                continue;
            }
            let target_len = ell as i64 + 1 - deg_q(&self.word, &beta);
            if target_len == n {
                // only the fundamental class could appear
                continue;
            }
            out.push(beta);
        }
        Ok(out)
    }

    /// All quantum correction terms of the matrix of σ_(j), in naming order.
    fn corrections(&self, j: usize) -> Result<Vec<Correction>> {
        let n = self.word.len();
        let full = SubwordIndex::ones(n);
        let mut out = Vec::new();
        for ell in 1..=n {
            let group: Vec<SubwordIndex> = self.basis.iter().copied().filter(|e| e.ell() == ell).collect();
            for (qexp, beta) in self.classes_up_to(ell as i64 + 1) {
                let fj = pair_curve(&self.word, j, &beta)?;
                if fj == 0 {
                    continue;
                }
                let target_len = ell as i64 + 1 - deg_q(&self.word, &beta);
                if target_len < 0 {
                    continue;
                }
                let targets: Vec<SubwordIndex> = self
                    .basis
                    .iter()
                    .copied()
                    .filter(|e| e.ell() as i64 == target_len && *e != full)
                    .collect();
                for eps in &group {
                    if ell == 1 {
                        let i = eps.support()[0];
                        let fi = pair_curve(&self.word, i, &beta)?;
                        if fi == 0 {
                            continue;
                        }
                        for t in &targets {
                            out.push(Correction {
                                col: *eps,
                                row: *t,
                                qexp: qexp.clone(),
                                factor: fj * fi,
                                key: InvariantKey::OnePoint {
                                    beta: beta.clone(),
                                    target: *t,
                                },
                            });
                        }
                    } else {
                        for t in &targets {
                            out.push(Correction {
                                col: *eps,
                                row: *t,
                                qexp: qexp.clone(),
                                factor: fj,
                                key: InvariantKey::TwoPoint {
                                    beta: beta.clone(),
                                    insertion: *eps,
                                    target: *t,
                                },
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Known invariants: one-point values along the θ-fiber class, the point
    /// class invariant in the fiber class of the last letter, and two-point
    /// vanishing decided from curve neighborhoods. Empty for uncertified words.
    pub fn seed_known_invariants(&self) -> Result<Vec<(InvariantKey, i64, String)>> {
        if !is_certified(&self.word) {
            return Ok(Vec::new());
        }
        let w = &self.word;
        let e = |s: &str| s.parse::<SubwordIndex>().expect("valid index");
        let b2 = CurveClass(vec![0, 0, 1]);
        let b3 = CurveClass(vec![1, 0, -1]);
        let mut out = Vec::new();
        // ev: M̄_{0,1}(Z, β₃) → Z_101 is an isomorphism, so ⟨[Z_ε]⟩_{β₃} = ∫_{Z_101} PD[Z_ε].
        let pd101 = subvariety_class(w, &e("101"))?;
        for t in ["100", "010", "001"] {
            let pd = subvariety_class(w, &e(t))?;
            let value = integrate(w, &multiply(w, &pd, &pd101)?);
            out.push((
                InvariantKey::OnePoint {
                    beta: b3.clone(),
                    target: e(t),
                },
                value,
                "evaluation map onto Z_101 is an isomorphism".to_string(),
            ));
        }
        out.push((
            InvariantKey::OnePoint {
                beta: b2,
                target: e("000"),
            },
            1,
            "one fiber curve of the last letter through a general point".to_string(),
        ));
        let table = certified_components();
        for j in 1..=w.len() {
            for c in self.corrections(j)? {
                if let InvariantKey::TwoPoint { beta, insertion, target } = &c.key {
                    if let Some(comps) = table.get(&(*target, beta.clone())) {
                        if gw_vanishes(w, insertion, target, beta, comps)?.vanishes() {
                            out.push((c.key.clone(), 0, "curve neighborhood".to_string()));
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Assigns symbols to all remaining invariants, matrix by matrix.
    pub fn enumerate_unknowns(&self) -> Result<UnknownTable> {
        let mut table = UnknownTable::default();
        for (key, value, provenance) in self.seed_known_invariants()? {
            table.insert_known(key, value, &provenance);
        }
        let mut counters = vec![0usize; self.word.len() + 1];
        for j in 1..=self.word.len() {
            for c in self.corrections(j)? {
                table.entry_or_symbol(&c.key, || {
                    counters[j] += 1;
                    symbol_name(j, self.word.len(), counters[j])
                });
            }
        }
        if is_certified(&self.word) && table.unknown_count() != CERTIFIED_UNKNOWN_COUNT {
            return Err(Error::UnknownCount {
                expected: CERTIFIED_UNKNOWN_COUNT,
                found: table.unknown_count(),
            });
        }
        Ok(table)
    }

    /// The matrix of quantum multiplication by σ_(j) with symbolic corrections.
    pub fn build_chevalley(&self, table: &UnknownTable, j: usize) -> Result<ChevalleyMatrix> {
        let n = self.word.len();
        let classical = multiplication_matrix(&self.word, &CohClass::divisor(n, j))?;
        let size = self.basis.len();
        let mut m = QMatrix::zero(size);
        for (r, row) in classical.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                *m.get_mut(r, c) = QPoly::constant(self.ngens(), x);
            }
        }
        for c in self.corrections(j)? {
            let deg: i64 = c.qexp.iter().zip(&self.gen_degrees).map(|(&k, d)| k as i64 * d).sum();
            if c.row.ell() as i64 + deg != c.col.ell() as i64 + 1 {
                return Err(Error::Grading(format!(
                    "term q^{:?} σ_{} in column σ_{} of σ_({j})",
                    c.qexp, c.row, c.col
                )));
            }
            let entry = table
                .get(&c.key)
                .ok_or_else(|| Error::Grading(format!("no table entry for {}", c.key)))?;
            let coeff = UnknownTable::value_poly(entry).scale(c.factor);
            let (r, col) = (self.position(&c.row), self.position(&c.col));
            let cell = m.get_mut(r, col);
            *cell = cell.add(&QPoly::term(c.qexp, coeff));
        }
        Ok(m)
    }

    pub fn build_all(&self, table: &UnknownTable) -> Result<Vec<ChevalleyMatrix>> {
        (1..=self.word.len()).map(|j| self.build_chevalley(table, j)).collect()
    }
}

/// Commutator entries and the scalar equations they impose.
#[derive(Debug, Clone)]
pub struct CommutatorSystem {
    /// Number of matrix entries of all commutators [M_j, M_k], j < k.
    pub entry_count: usize,
    /// Entries that are not identically zero.
    pub nonzero_entries: usize,
    /// One equation per nonzero (entry, q-monomial) coefficient.
    pub equations: Vec<Poly>,
}

pub fn commutator_system(mats: &[ChevalleyMatrix]) -> CommutatorSystem {
    let mut sys = CommutatorSystem {
        entry_count: 0,
        nonzero_entries: 0,
        equations: Vec::new(),
    };
    for a in 0..mats.len() {
        for b in a + 1..mats.len() {
            let d = mats[a].mul(&mats[b]).sub(&mats[b].mul(&mats[a]));
            for row in d.rows() {
                for x in row {
                    sys.entry_count += 1;
                    if !x.is_zero() {
                        sys.nonzero_entries += 1;
                    }
                    sys.equations.extend(x.terms().values().cloned());
                }
            }
        }
    }
    sys
}

fn symbol_name(j: usize, n: usize, k: usize) -> String {
    const LETTERS: [&str; 3] = ["x", "y", "z"];
    if n <= 3 {
        format!("{}{k}", LETTERS[j - 1])
    } else {
        format!("t{j}_{k}")
    }
}

/// Ordering used when naming invariants: by degree, then by the number of
/// generators involved (two before one before three or more), then by the
/// smallest involved generator, then by the largest one (descending), then by
/// exponents in descending order.
fn class_order_key(exp: &QExp, degrees: &[i64]) -> (i64, u8, usize, std::cmp::Reverse<usize>, std::cmp::Reverse<QExp>) {
    let deg = exp.iter().zip(degrees).map(|(&k, d)| k as i64 * d).sum();
    let support: Vec<usize> = (0..exp.len()).filter(|&i| exp[i] > 0).collect();
    let size_rank = match support.len() {
        2 => 0,
        1 => 1,
        _ => 2,
    };
    (
        deg,
        size_rank,
        support[0],
        std::cmp::Reverse(*support.last().expect("nonzero exponent")),
        std::cmp::Reverse(exp.clone()),
    )
}

/// Rank over ℚ of a list of integer vectors (fraction-free elimination).
fn rank_of(vectors: &[CurveClass]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.0.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let (a, b) = (rows[rank][c], rows[r][c]);
                for k in 0..cols {
                    rows[r][k] = rows[r][k] * a - rows[rank][k] * b;
                }
            }
        }
        rank += 1;
    }
    rank
}
