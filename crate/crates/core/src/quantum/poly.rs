//! Integer polynomials in unknown symbols, and polynomials in the quantum
//! parameters with such coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_integer::Integer;

/// Identifier of an unknown symbol (index into a name table).
pub type Sym = u32;

/// A monomial Π s^e as (symbol, exponent) pairs sorted by symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Sym, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(s: Sym) -> Self {
        Self(vec![(s, 1)])
    }

    pub fn factors(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Sym) -> u32 {
        self.0
            .iter()
            .find(|(t, _)| *t == s)
            .map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<Sym, u32> = self.0.iter().copied().collect();
        for (s, e) in &other.0 {
            *m.entry(*s).or_insert(0) += e;
        }
        Self(m.into_iter().collect())
    }

    /// The monomial with `s` removed, and the exponent it had.
    pub fn without(&self, s: Sym) -> (Self, u32) {
        let e = self.exponent(s);
        (Self(self.0.iter().copied().filter(|(t, _)| *t != s).collect()), e)
    }
}

/// A polynomial with `i64` coefficients in unknown symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(s: Sym) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(s), 1);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert(0);
        *slot = slot.checked_add(c).expect("coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&Monomial::one()).copied(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), *c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c.checked_mul(k).expect("coefficient overflow"))),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                p.add_term(ma.mul(mb), ca.checked_mul(*cb).expect("coefficient overflow"));
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| acc.mul(self))
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(s, _)| *s))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: Sym) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    /// Replaces `s` by `value`.
    pub fn substitute(&self, s: Sym, value: &Poly) -> Self {
        if !self.terms.keys().any(|m| m.exponent(s) > 0) {
            return self.clone();
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(s);
            let base = Self::from_terms([(rest, *c)]);
            out = out.add(&if e == 0 { base } else { base.mul(&value.pow(e)) });
        }
        out
    }

    /// Substitutes every assigned symbol.
    pub fn substitute_all(&self, values: &BTreeMap<Sym, Poly>) -> Self {
        let hit: Vec<Sym> = self.vars().into_iter().filter(|s| values.contains_key(s)).collect();
        hit.iter().fold(self.clone(), |p, s| p.substitute(*s, &values[s]))
    }

    /// If `s` occurs only in the single term `c·s`, returns `(c, rest)` with
    /// `self = c·s + rest`.
    pub fn linear_in(&self, s: Sym) -> Option<(i64, Poly)> {
        let var = Monomial::var(s);
        let c = *self.terms.get(&var)?;
        let others_free = self
            .terms
            .keys()
            .all(|m| *m == var || m.exponent(s) == 0);
        if !others_free {
            return None;
        }
        let mut rest = self.clone();
        rest.terms.remove(&var);
        Some((c, rest))
    }

    /// gcd of all coefficients (0 for the zero polynomial).
    pub fn content(&self) -> i64 {
        self.terms.values().fold(0i64, |g, c| g.gcd(c))
    }

    /// Divides by the content and fixes the sign so the first term is positive.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g == 0 {
            return Self::zero();
        }
        let sign = if *self.terms.values().next().expect("nonzero") < 0 { -1 } else { 1 };
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), sign * c / g)))
    }

    /// Coefficients of a univariate polynomial in `s`, lowest degree first.
    pub fn univariate_coeffs(&self, s: Sym) -> Option<Vec<i64>> {
        if self.vars().iter().any(|&t| t != s) {
            return None;
        }
        let mut out = vec![0i64; self.degree_in(s) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exponent(s) as usize] += c;
        }
        Some(out)
    }

    pub fn display_with(&self, names: &dyn Fn(Sym) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in &self.terms {
            write_term(&mut out, *c, "", m, names);
        }
        out
    }
}

fn write_term(out: &mut String, c: i64, prefix: &str, m: &Monomial, names: &dyn Fn(Sym) -> String) {
    if c < 0 {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
    let bare = prefix.is_empty() && m.is_one();
    if c.abs() != 1 || bare {
        let _ = write!(out, "{}", c.abs());
    }
    out.push_str(prefix);
    for (s, e) in &m.0 {
        out.push_str(&names(*s));
        if *e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

/// Exponent vector of a q-monomial over the effective-cone generators.
pub type QExp = Vec<u32>;

/// A polynomial in the quantum parameters with [`Poly`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QPoly {
    terms: BTreeMap<QExp, Poly>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(ngens: usize, c: i64) -> Self {
        Self::term(vec![0; ngens], Poly::constant(c))
    }

    pub fn term(exp: QExp, coeff: Poly) -> Self {
        let mut q = Self::zero();
        q.add_term(exp, coeff);
        q
    }

    pub fn add_term(&mut self, exp: QExp, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp.clone()).or_default();
        *slot = slot.add(&coeff);
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> &BTreeMap<QExp, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut q = self.clone();
        for (e, c) in &other.terms {
            q.add_term(e.clone(), c.clone());
        }
        q
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        self.map_coeffs(|c| c.scale(k))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut q = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: QExp = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                q.add_term(e, ca.mul(cb));
            }
        }
        q
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut q = Self::zero();
        for (e, c) in &self.terms {
            q.add_term(e.clone(), f(c));
        }
        q
    }

    /// The q⁰ part.
    pub fn classical_part(&self) -> Poly {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    /// Specialization with every quantum parameter equal to one.
    pub fn at_q_one(&self) -> Poly {
        self.terms.values().fold(Poly::zero(), |acc, c| acc.add(c))
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        self.terms.values().flat_map(|c| c.vars()).collect()
    }

    pub fn display_with(&self, names: &dyn Fn(Sym) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            let mut prefix = String::new();
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    let _ = write!(prefix, "q{}", k + 1);
                    if x > 1 {
                        let _ = write!(prefix, "^{x}");
                    }
                }
            }
            for (m, coeff) in c.terms() {
                write_term(&mut out, *coeff, &prefix, m, names);
            }
        }
        out
    }
}
