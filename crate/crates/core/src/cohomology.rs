//! Integral cohomology of a Bott-Samelson variety in the basis σ_ε dual to the
//! subvariety classes [Z_ε].
//!
//! σ_ε is the product of the divisor classes σ_(j) over the support of ε, and
//! products are reduced with the quadratic relations
//! `σ_(j)² = Σ_{i<j} −(α_{a_i}, α_{a_j}^∨) σ_(i)σ_(j)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::momentgraph::CurveClass;
use crate::rootsys::{SubwordIndex, Word};

/// An integer combination of the classes σ_ε.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CohClass {
    terms: BTreeMap<SubwordIndex, i64>,
}

impl CohClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit σ_{0…0}.
    pub fn one(n: usize) -> Self {
        Self::basis(SubwordIndex::zeros(n))
    }

    pub fn basis(eps: SubwordIndex) -> Self {
        Self::from_terms([(eps, 1)])
    }

    /// The divisor class σ_(j) (1-based).
    pub fn divisor(n: usize, j: usize) -> Self {
        Self::basis(SubwordIndex::unit(n, j))
    }

    pub fn from_terms<I: IntoIterator<Item = (SubwordIndex, i64)>>(terms: I) -> Self {
        let mut c = Self::zero();
        for (e, x) in terms {
            c.add_term(e, x);
        }
        c
    }

    pub fn add_term(&mut self, eps: SubwordIndex, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(eps).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&eps);
        }
    }

    pub fn coeff(&self, eps: &SubwordIndex) -> i64 {
        self.terms.get(eps).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<SubwordIndex, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.clone();
        for (e, x) in &other.terms {
            c.add_term(*e, *x);
        }
        c
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (*e, x * k)))
    }

    /// Common length of the indices, if the class is nonzero.
    fn word_len(&self) -> Option<usize> {
        self.terms.keys().next().map(|e| e.len())
    }

    /// ℓ-degree of a homogeneous class.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|e| e.ell());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // basis order: by length, then reverse-lexicographic
        let mut terms: Vec<(&SubwordIndex, &i64)> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.ell().cmp(&b.0.ell()).then_with(|| b.0.cmp(a.0)));
        let mut first = true;
        for (e, &x) in terms {
            let sign = if x < 0 { "-" } else if first { "" } else { "+" };
            let mag = x.abs();
            if mag == 1 {
                write!(f, "{sign}σ{e}")?;
            } else {
                write!(f, "{sign}{mag}σ{e}")?;
            }
            first = false;
        }
        Ok(())
    }
}

fn check_len(word: &Word, c: &CohClass) -> Result<()> {
    match c.word_len() {
        Some(m) if m != word.len() => Err(Error::WordMismatch(format!(
            "class over a word of length {m}, expected {}",
            word.len()
        ))),
        _ => Ok(()),
    }
}

/// Reduces the monomial Π σ_(i)^{exps[i]} to the σ_ε basis.
pub fn reduce_monomial(word: &Word, exps: &[u32]) -> CohClass {
    let n = word.len();
    let mut out = CohClass::zero();
    let mut stack: Vec<(Vec<u32>, i64)> = vec![(exps.to_vec(), 1)];
    while let Some((ex, c)) = stack.pop() {
        match (0..n).rev().find(|&j| ex[j] >= 2) {
            None => {
                let bits: Vec<bool> = ex.iter().map(|&x| x == 1).collect();
                out.add_term(SubwordIndex::from_bits(&bits), c);
            }
            Some(j) => {
                let aj = word.letter(j + 1);
                for i in 0..j {
                    let k = -word.cartan().entry(aj, word.letter(i + 1));
                    if k == 0 {
                        continue;
                    }
                    let mut next = ex.clone();
                    next[j] -= 1;
                    next[i] += 1;
                    stack.push((next, c * k));
                }
            }
        }
    }
    out
}

/// σ_a · σ_b for basis indices.
pub fn multiply_basis(word: &Word, a: &SubwordIndex, b: &SubwordIndex) -> CohClass {
    let exps: Vec<u32> = (1..=word.len())
        .map(|i| a.bit(i) as u32 + b.bit(i) as u32)
        .collect();
    reduce_monomial(word, &exps)
}

pub fn multiply(word: &Word, a: &CohClass, b: &CohClass) -> Result<CohClass> {
    check_len(word, a)?;
    check_len(word, b)?;
    let mut out = CohClass::zero();
    for (ea, xa) in &a.terms {
        for (eb, xb) in &b.terms {
            out = out.add(&multiply_basis(word, ea, eb).scale(xa * xb));
        }
    }
    Ok(out)
}

/// Degree-zero part: the coefficient of the point class σ_{1…1}.
pub fn integrate(word: &Word, a: &CohClass) -> i64 {
    a.coeff(&SubwordIndex::ones(word.len()))
}

/// ∫ a ∩ [Z_ε], which by duality is the ε-coefficient of a.
pub fn pair_subvariety(a: &CohClass, eps: &SubwordIndex) -> i64 {
    a.coeff(eps)
}

/// ∫_β σ_(j).
pub fn pair_curve(word: &Word, j: usize, beta: &CurveClass) -> Result<i64> {
    if j == 0 || j > word.len() || beta.len() != word.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            rank: word.len(),
        });
    }
    Ok(beta.0[j - 1])
}

/// Coefficients of c₁(T_Z) on σ_(1), …, σ_(n):
/// `2 + Σ_{j>i} (α_{a_j}, α_{a_i}^∨)`.
pub fn first_chern_coeffs(word: &Word) -> Vec<i64> {
    let n = word.len();
    (1..=n)
        .map(|i| {
            let ai = word.letter(i);
            2 + (i + 1..=n)
                .map(|j| word.cartan().entry(ai, word.letter(j)))
                .sum::<i64>()
        })
        .collect()
}

pub fn first_chern(word: &Word) -> CohClass {
    let n = word.len();
    CohClass::from_terms(
        first_chern_coeffs(word)
            .into_iter()
            .enumerate()
            .map(|(i, c)| (SubwordIndex::unit(n, i + 1), c)),
    )
}

/// deg q^β = ∫_β c₁(T_Z).
pub fn deg_q(word: &Word, beta: &CurveClass) -> i64 {
    first_chern_coeffs(word)
        .iter()
        .zip(&beta.0)
        .map(|(a, b)| a * b)
        .sum()
}

/// Matrix of multiplication by `c` in the basis order of
/// [`SubwordIndex::basis_order`]; column ε holds `c · σ_ε`.
pub fn multiplication_matrix(word: &Word, c: &CohClass) -> Result<Vec<Vec<i64>>> {
    let basis = SubwordIndex::basis_order(word.len());
    let pos: BTreeMap<SubwordIndex, usize> = basis.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut m = vec![vec![0; basis.len()]; basis.len()];
    for (col, e) in basis.iter().enumerate() {
        let prod = multiply(word, c, &CohClass::basis(*e))?;
        for (t, x) in prod.terms() {
            m[pos[t]][col] = *x;
        }
    }
    Ok(m)
}

/// The cohomology class Poincaré dual to [Z_ε], characterized by
/// `∫ PD[Z_ε] · σ_ε' = δ_{ε,ε'}` for all ε' with ℓ(ε') = ℓ(ε).
pub fn subvariety_class(word: &Word, eps: &SubwordIndex) -> Result<CohClass> {
    let n = word.len();
    if eps.len() != n {
        return Err(Error::WordMismatch(format!(
            "subword index {eps} over a word of length {n}"
        )));
    }
    let same: Vec<SubwordIndex> = SubwordIndex::all(n).into_iter().filter(|e| e.ell() == eps.ell()).collect();
    let dual: Vec<SubwordIndex> = SubwordIndex::all(n)
        .into_iter()
        .filter(|e| e.ell() == n - eps.ell())
        .collect();
    let m = same.len();
    // Solve Σ_d c_d ∫ σ_d σ_s = δ_{s,eps} for s in `same`.
    let mut a: Vec<Vec<Ratio<i64>>> = same
        .iter()
        .map(|s| {
            let mut row: Vec<Ratio<i64>> = dual
                .iter()
                .map(|d| Ratio::from(integrate(word, &multiply_basis(word, d, s))))
                .collect();
            row.push(if s == eps { Ratio::one() } else { Ratio::zero() });
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&i| !a[i][col].is_zero())
            .ok_or_else(|| Error::InvalidCartan("degenerate intersection pairing".into()))?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for i in 0..m {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col];
                for k in 0..=m {
                    let sub = f * a[col][k];
                    a[i][k] -= sub;
                }
            }
        }
    }
    let mut out = CohClass::zero();
    for (i, d) in dual.iter().enumerate() {
        let x = a[i][m];
        if !x.is_integer() {
            return Err(Error::NonInteger(format!("Poincaré dual of [Z_{eps}]")));
        }
        out.add_term(*d, x.to_integer());
    }
    Ok(out)
}
