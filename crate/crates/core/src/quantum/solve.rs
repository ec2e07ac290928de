//! Integer constraint propagation for polynomial systems.
//!
//! The loop repeatedly picks an equation that is linear in one unknown with
//! an integer coefficient dividing every other coefficient, solves for that
//! unknown and substitutes, preferring the smallest resulting value. Equations are kept primitive, deduplicated and
//! canonically sorted, so the outcome does not depend on input order.
//! Univariate equations of higher degree are resolved by trying their
//! integer roots.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::quantum::poly::{Poly, Sym};

/// A univariate equation resolved by trying integer roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub symbol: Sym,
    pub equation: Poly,
    /// Integer roots that led to a consistent system.
    pub consistent_roots: Vec<i64>,
    pub chosen: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Solved unknowns as polynomials in the free ones.
    pub values: BTreeMap<Sym, Poly>,
    /// Unknowns left undetermined.
    pub free: Vec<Sym>,
    pub branches: Vec<Branch>,
    /// Number of distinct primitive equations before propagation.
    pub distinct_equations: usize,
}

#[derive(Debug, Clone)]
pub struct Solver {
    unknowns: Vec<Sym>,
    preferred_free: BTreeSet<Sym>,
}

impl Solver {
    /// `unknowns` fixes the order in which pivots are tried. Symbols in
    /// `preferred_free` are only solved for when nothing else is possible.
    pub fn new(unknowns: Vec<Sym>, preferred_free: BTreeSet<Sym>) -> Self {
        Self {
            unknowns,
            preferred_free,
        }
    }

    pub fn solve(&self, equations: &[Poly]) -> Result<Solution> {
        let eqs = canonical(equations.iter().cloned())?;
        let distinct_equations = eqs.len();
        let mut state = State {
            values: BTreeMap::new(),
            eqs,
            branches: Vec::new(),
        };
        self.propagate(&mut state)?;
        let free = self
            .unknowns
            .iter()
            .copied()
            .filter(|s| !state.values.contains_key(s))
            .collect();
        Ok(Solution {
            values: state.values,
            free,
            branches: state.branches,
            distinct_equations,
        })
    }

    fn propagate(&self, state: &mut State) -> Result<()> {
        loop {
            if state.eqs.is_empty() {
                return Ok(());
            }
            if let Some((s, value)) = self
                .find_pivot(&state.eqs, false)
                .or_else(|| self.find_pivot(&state.eqs, true))
            {
                state.assign(s, value)?;
                continue;
            }
            if let Some((s, eq)) = self.find_univariate(&state.eqs) {
                let coeffs = eq.univariate_coeffs(s).expect("univariate");
                if coeffs.len() == 2 {
                    return Err(Error::NonInteger(format!(
                        "{}·s{} + {} = 0",
                        coeffs[1], s, coeffs[0]
                    )));
                }
                let mut consistent = Vec::new();
                let mut first_ok: Option<State> = None;
                for r in integer_roots(&coeffs) {
                    let mut trial = state.clone();
                    if trial.assign(s, Poly::constant(r)).is_ok() && self.propagate(&mut trial).is_ok() {
                        consistent.push(r);
                        if first_ok.is_none() {
                            first_ok = Some(trial);
                        }
                    }
                }
                let Some(mut chosen) = first_ok else {
                    return Err(Error::Inconsistent(format!(
                        "no integer root of a univariate equation in s{s} is consistent"
                    )));
                };
                chosen.branches.insert(
                    state.branches.len(),
                    Branch {
                        symbol: s,
                        equation: eq,
                        chosen: consistent[0],
                        consistent_roots: consistent,
                    },
                );
                *state = chosen;
                return Ok(());
            }
            let mut residual: BTreeSet<Sym> = BTreeSet::new();
            for e in &state.eqs {
                residual.extend(e.vars());
            }
            return Err(Error::MultiParameter(
                residual.iter().map(|s| format!("s{s}")).collect(),
            ));
        }
    }

    fn rank(&self, s: Sym) -> usize {
        self.unknowns.iter().position(|&t| t == s).unwrap_or(usize::MAX)
    }

    /// Among all admissible (equation, unknown) pairs, picks the one whose
    /// solved value is smallest, breaking ties by unknown order.
    fn find_pivot(&self, eqs: &BTreeSet<Poly>, allow_preferred: bool) -> Option<(Sym, Poly)> {
        let mut best: Option<((usize, u32, usize), Sym, Poly)> = None;
        for eq in eqs {
            for s in eq.vars() {
                if !allow_preferred && self.preferred_free.contains(&s) {
                    continue;
                }
                let Some((c, rest)) = eq.linear_in(s) else {
                    continue;
                };
                if !rest.terms().values().all(|x| x % c == 0) {
                    continue;
                }
                let key = (rest.terms().len(), rest.total_degree(), self.rank(s));
                if best.as_ref().is_some_and(|(k, _, _)| *k <= key) {
                    continue;
                }
                let value = Poly::from_terms(rest.terms().iter().map(|(m, x)| (m.clone(), -x / c)));
                best = Some((key, s, value));
            }
        }
        best.map(|(_, s, v)| (s, v))
    }

    fn find_univariate(&self, eqs: &BTreeSet<Poly>) -> Option<(Sym, Poly)> {
        eqs.iter().find_map(|e| {
            let vars = e.vars();
            (vars.len() == 1).then(|| (*vars.iter().next().expect("one var"), e.clone()))
        })
    }
}

#[derive(Debug, Clone)]
struct State {
    values: BTreeMap<Sym, Poly>,
    eqs: BTreeSet<Poly>,
    branches: Vec<Branch>,
}

impl State {
    fn assign(&mut self, s: Sym, value: Poly) -> Result<()> {
        for v in self.values.values_mut() {
            *v = v.substitute(s, &value);
        }
        self.values.insert(s, value.clone());
        let eqs = std::mem::take(&mut self.eqs);
        self.eqs = canonical(eqs.into_iter().map(|e| e.substitute(s, &value)))?;
        Ok(())
    }
}

/// Primitive, deduplicated, sorted equations; fails on a nonzero constant.
fn canonical(eqs: impl Iterator<Item = Poly>) -> Result<BTreeSet<Poly>> {
    let mut out = BTreeSet::new();
    for e in eqs {
        if e.is_zero() {
            continue;
        }
        if let Some(c) = e.as_constant() {
            return Err(Error::Inconsistent(format!("equation reduces to {c} = 0")));
        }
        out.insert(e.primitive());
    }
    Ok(out)
}

/// Integer roots of Σ coeffs[k] t^k, ascending.
pub fn integer_roots(coeffs: &[i64]) -> Vec<i64> {
    let eval = |t: i64| {
        coeffs
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * t as i128 + c as i128)
    };
    let mut candidates = BTreeSet::new();
    let Some(low) = coeffs.iter().position(|&c| c != 0) else {
        return Vec::new();
    };
    if low > 0 {
        candidates.insert(0);
    }
    let c = coeffs[low].unsigned_abs() as i64;
    let mut d = 1;
    while d * d <= c {
        if c % d == 0 {
            for x in [d, c / d] {
                candidates.insert(x);
                candidates.insert(-x);
            }
        }
        d += 1;
    }
    candidates.into_iter().filter(|&t| eval(t) == 0).collect()
}
