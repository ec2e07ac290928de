//! Solving the commutator system and the resulting quantum ring: operator
//! matrices for every basis class, Giambelli polynomials, the presentation
//! relations and exhaustive ring checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cohomology::CohClass;
use crate::error::{Error, Result};
use crate::quantum::poly::{Poly, QPoly, Sym};
use crate::quantum::reference::printed_matrices;
use crate::quantum::solve::{Solution, Solver};
use crate::quantum::{commutator_system, is_certified, ChevalleyMatrix, QMatrix, QhContext, TableEntry, UnknownTable};
use crate::rootsys::SubwordIndex;

/// Name of the invariant left free by the commutator system.
pub const FREE_INVARIANT: &str = "y3";

/// The commutator system for one word together with its solution.
#[derive(Debug, Clone)]
pub struct SolvedSystem {
    pub table: UnknownTable,
    /// Matrices with every unknown still symbolic.
    pub symbolic: Vec<ChevalleyMatrix>,
    pub entry_count: usize,
    pub nonzero_entries: usize,
    pub equation_count: usize,
    pub solution: Solution,
    /// Matrices with solved unknowns substituted; only free symbols remain.
    pub reduced: Vec<ChevalleyMatrix>,
}

pub fn solve_system(ctx: &QhContext) -> Result<SolvedSystem> {
    let table = ctx.enumerate_unknowns()?;
    let symbolic = ctx.build_all(&table)?;
    let sys = commutator_system(&symbolic);
    let preferred: BTreeSet<Sym> = table.symbol(FREE_INVARIANT).into_iter().collect();
    let solver = Solver::new(table.symbols().collect(), preferred);
    let solution = solver.solve(&sys.equations).map_err(|e| rename(e, &table))?;
    if let Some(b) = solution.branches.first() {
        if b.consistent_roots.len() > 1 {
            return Err(Error::MultiParameter(vec![table.name(b.symbol).to_string()]));
        }
    }
    let reduced = symbolic
        .iter()
        .map(|m| m.map(|x| x.map_coeffs(|c| c.substitute_all(&solution.values))))
        .collect();
    Ok(SolvedSystem {
        table,
        entry_count: sys.entry_count,
        nonzero_entries: sys.nonzero_entries,
        equation_count: sys.equations.len(),
        symbolic,
        solution,
        reduced,
    })
}

/// Replaces internal symbol ids in solver errors by table names.
fn rename(e: Error, table: &UnknownTable) -> Error {
    match e {
        Error::MultiParameter(v) => Error::MultiParameter(
            v.iter()
                .map(|s| {
                    s.strip_prefix('s')
                        .and_then(|k| k.parse::<Sym>().ok())
                        .map_or(s.clone(), |k| table.name(k).to_string())
                })
                .collect(),
        ),
        other => other,
    }
}

impl SolvedSystem {
    pub fn free_names(&self) -> Vec<String> {
        self.solution.free.iter().map(|&s| self.table.name(s).to_string()).collect()
    }

    /// Substitutes integer values for the free invariants.
    pub fn finalize(&self, values: &BTreeMap<String, i64>) -> Result<Vec<ChevalleyMatrix>> {
        let mut subst = BTreeMap::new();
        for &s in &self.solution.free {
            let name = self.table.name(s);
            let v = values
                .get(name)
                .ok_or_else(|| Error::MultiParameter(vec![name.to_string()]))?;
            subst.insert(s, Poly::constant(*v));
        }
        let out: Vec<ChevalleyMatrix> = self
            .reduced
            .iter()
            .map(|m| m.map(|x| x.map_coeffs(|c| c.substitute_all(&subst))))
            .collect();
        if let Some(s) = out.iter().flat_map(|m| m.rows().iter().flatten()).flat_map(QPoly::vars).next() {
            return Err(Error::MultiParameter(vec![self.table.name(s).to_string()]));
        }
        Ok(out)
    }

    /// Value of every unknown after solving, as a polynomial in the free ones.
    pub fn assignment(&self, s: Sym) -> Poly {
        self.solution.values.get(&s).cloned().unwrap_or_else(|| Poly::var(s))
    }

    /// Compares the reduced matrices with the published ones, symbolically in
    /// the free invariant.
    pub fn check_reference(&self) -> Result<()> {
        let printed = printed_matrices(&|name| self.table.symbol(name))?;
        let names = self.table.namer();
        for (j, (ours, theirs)) in self.reduced.iter().zip(&printed).enumerate() {
            for r in 0..ours.size() {
                for c in 0..ours.size() {
                    if ours.get(r, c) != theirs.get(r, c) {
                        return Err(Error::ReferenceMismatch(format!(
                            "matrix {} entry ({}, {}): computed {}, published {}",
                            j + 1,
                            r,
                            c,
                            ours.get(r, c).display_with(&names),
                            theirs.get(r, c).display_with(&names)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A polynomial in the divisor generators σ_(1), …, σ_(n) with coefficients
/// in the quantum parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GenPoly {
    terms: BTreeMap<Vec<u32>, QPoly>,
}

impl GenPoly {
    pub fn generator(n: usize, ngens: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Self::term(e, QPoly::constant(ngens, 1))
    }

    pub fn term(exps: Vec<u32>, coeff: QPoly) -> Self {
        let mut p = Self::default();
        p.add_term(exps, coeff);
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: QPoly) {
        let sum = self.terms.get(&exps).map_or(coeff.clone(), |c| c.add(&coeff));
        if sum.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, QPoly> {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.scale(-1));
        }
        out
    }

    pub fn scale(&self, q: &QPoly) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(q));
        }
        out
    }

    pub fn mul_generator(&self, i: usize) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i - 1] += 1;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Substitutes a matrix for each generator.
    pub fn evaluate(&self, gens: &[QMatrix], ngens: usize) -> QMatrix {
        let size = gens[0].size();
        let mut out = QMatrix::zero(size);
        for (e, c) in &self.terms {
            let mut m = QMatrix::identity(size, ngens);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = m.mul(&gens[i]);
                }
            }
            out = out.add(&m.scale_by(c));
        }
        out
    }

    /// Writes generators as `σ100`, with terms of higher total degree first.
    pub fn display(&self) -> String {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by_key(|e| (std::cmp::Reverse(e.iter().sum::<u32>()), std::cmp::Reverse((*e).clone())));
        let mut out = String::new();
        for e in keys {
            let mono: String = e
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    let g = format!("σ{}", SubwordIndex::unit(e.len(), i + 1));
                    match k {
                        0 => String::new(),
                        1 => g,
                        k => format!("{g}^{k}"),
                    }
                })
                .collect();
            push_scaled(&mut out, &self.terms[e], &mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn no_names(s: Sym) -> String {
    format!("s{s}")
}

/// Appends `coeff·label` to a signed sum.
fn push_scaled(out: &mut String, coeff: &QPoly, label: &str) {
    let c = coeff.display_with(&no_names);
    let single = coeff.terms().len() == 1 && coeff.terms().values().all(|p| p.terms().len() == 1);
    let body = if label.is_empty() {
        c
    } else if c == "1" {
        label.to_string()
    } else if c == "-1" {
        format!("-{label}")
    } else if single {
        format!("{c}{label}")
    } else {
        format!("({c}){label}")
    };
    if !out.is_empty() && !body.starts_with('-') {
        out.push('+');
    }
    out.push_str(&body);
}

/// An element of the quantum ring in the σ basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QClass {
    terms: Vec<(SubwordIndex, QPoly)>,
}

impl QClass {
    pub fn from_vector(basis: &[SubwordIndex], coeffs: &[QPoly]) -> Self {
        Self {
            terms: basis
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(SubwordIndex, QPoly)] {
        &self.terms
    }

    pub fn coeff(&self, eps: &SubwordIndex) -> QPoly {
        self.terms
            .iter()
            .find(|(e, _)| e == eps)
            .map_or_else(QPoly::zero, |(_, c)| c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for QClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (e, c) in &self.terms {
            let label = if e.is_empty() || e.ell() == 0 { String::new() } else { format!("σ{e}") };
            push_scaled(&mut out, c, &label);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// σ_(j)² written in the σ basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub generator: usize,
    pub rhs: QClass,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.rhs.terms.first().map_or(0, |(e, _)| e.len());
        write!(f, "σ{}^2 = {}", SubwordIndex::unit(n, self.generator), self.rhs)
    }
}

/// Counts of the identities checked by [`QuantumRing::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingReport {
    pub commutativity_pairs: usize,
    pub associativity_triples: usize,
    pub giambelli_identities: usize,
    pub presentation_relations: usize,
    pub unit_checks: usize,
}

/// The quantum ring determined by integer Chevalley matrices.
#[derive(Debug, Clone)]
pub struct QuantumRing {
    basis: Vec<SubwordIndex>,
    ngens: usize,
    gens: Vec<QMatrix>,
    giambelli: Vec<GenPoly>,
    ops: Vec<QMatrix>,
}

impl QuantumRing {
    /// Builds operators for every basis class from the divisor matrices.
    /// σ_ε is obtained as σ_(i) ∗ σ_{ε−(i)} minus the other terms of that
    /// product, with i the first letter in the support of ε.
    pub fn new(ctx: &QhContext, gens: Vec<ChevalleyMatrix>) -> Result<Self> {
        if let Some(s) = gens.iter().flat_map(|m| m.rows().iter().flatten()).flat_map(QPoly::vars).next() {
            return Err(Error::MultiParameter(vec![format!("s{s}")]));
        }
        let basis = ctx.basis().to_vec();
        let n = ctx.word().len();
        let ngens = ctx.ngens();
        let mut giambelli: Vec<Option<GenPoly>> = vec![None; basis.len()];
        giambelli[0] = Some(GenPoly::term(vec![0; n], QPoly::constant(ngens, 1)));
        for (pos, eps) in basis.iter().enumerate().skip(1) {
            let i = eps.support()[0];
            let rest = eps.with_bit(i, false);
            let rest_pos = ctx.position(&rest);
            let mut poly = giambelli[rest_pos]
                .as_ref()
                .ok_or_else(|| Error::RingIdentity(format!("σ{rest} needed before σ{eps}")))?
                .mul_generator(i);
            for (t, c) in gens[i - 1].column(rest_pos).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if t == pos {
                    if *c != QPoly::constant(ngens, 1) {
                        return Err(Error::RingIdentity(format!(
                            "σ{eps} has coefficient {} in σ_({i}) ∗ σ{rest}",
                            c.display_with(&no_names)
                        )));
                    }
                    continue;
                }
                let g = giambelli[t].as_ref().ok_or_else(|| {
                    Error::RingIdentity(format!("σ{} needed before σ{eps}", basis[t]))
                })?;
                poly = poly.sub(&g.scale(c));
            }
            giambelli[pos] = Some(poly);
        }
        let giambelli: Vec<GenPoly> = giambelli.into_iter().map(|g| g.expect("filled")).collect();
        let ops = giambelli.iter().map(|g| g.evaluate(&gens, ngens)).collect();
        Ok(Self {
            basis,
            ngens,
            gens,
            giambelli,
            ops,
        })
    }

    pub fn basis(&self) -> &[SubwordIndex] {
        &self.basis
    }

    pub fn generators(&self) -> &[QMatrix] {
        &self.gens
    }

    fn pos(&self, eps: &SubwordIndex) -> usize {
        self.basis.iter().position(|e| e == eps).expect("basis element")
    }

    /// The Giambelli polynomial of σ_ε.
    pub fn giambelli(&self, eps: &SubwordIndex) -> &GenPoly {
        &self.giambelli[self.pos(eps)]
    }

    /// Matrix of quantum multiplication by σ_ε.
    pub fn operator(&self, eps: &SubwordIndex) -> &QMatrix {
        &self.ops[self.pos(eps)]
    }

    pub fn product_basis(&self, a: &SubwordIndex, b: &SubwordIndex) -> QClass {
        QClass::from_vector(&self.basis, &self.operator(a).column(self.pos(b)))
    }

    pub fn quantum_product(&self, a: &CohClass, b: &CohClass) -> QClass {
        let mut out = vec![QPoly::zero(); self.basis.len()];
        for (ea, ca) in a.terms() {
            let op = self.operator(ea);
            for (eb, cb) in b.terms() {
                let col = op.column(self.pos(eb));
                for (o, x) in out.iter_mut().zip(col) {
                    *o = o.add(&x.scale(ca * cb));
                }
            }
        }
        QClass::from_vector(&self.basis, &out)
    }

    /// Full product table, indexed by basis positions.
    pub fn product_table(&self) -> Vec<Vec<QClass>> {
        self.basis
            .iter()
            .map(|a| self.basis.iter().map(|b| self.product_basis(a, b)).collect())
            .collect()
    }

    pub fn presentation(&self) -> Vec<Relation> {
        let n = self.basis[0].len();
        (1..=n)
            .map(|j| Relation {
                generator: j,
                rhs: self.product_basis(&SubwordIndex::unit(n, j), &SubwordIndex::unit(n, j)),
            })
            .collect()
    }

    /// Checks unit, commutativity, associativity, the Giambelli identities and
    /// the presentation relations exhaustively over the basis.
    pub fn verify(&self) -> Result<RingReport> {
        let size = self.basis.len();
        let identity = QMatrix::identity(size, self.ngens);
        if self.ops[0] != identity {
            return Err(Error::RingIdentity("σ of the empty subword is not the unit".into()));
        }
        let mut unit_checks = 1;
        for (k, op) in self.ops.iter().enumerate() {
            for (r, x) in op.column(0).iter().enumerate() {
                let want = QPoly::constant(self.ngens, i64::from(r == k));
                if *x != want {
                    return Err(Error::RingIdentity(format!("σ{} ∗ 1 ≠ σ{}", self.basis[k], self.basis[k])));
                }
            }
            unit_checks += 1;
        }
        let table = self.product_table();
        let mut commutativity_pairs = 0;
        for a in 0..size {
            for b in 0..size {
                if table[a][b] != table[b][a] {
                    return Err(Error::RingIdentity(format!(
                        "σ{} ∗ σ{} is not commutative",
                        self.basis[a], self.basis[b]
                    )));
                }
                commutativity_pairs += 1;
            }
        }
        let times = |x: &QClass, c: usize| -> Vec<QPoly> {
            let mut out = vec![QPoly::zero(); size];
            for (e, coeff) in x.terms() {
                for (o, y) in out.iter_mut().zip(self.ops[self.pos(e)].column(c)) {
                    *o = o.add(&coeff.mul(&y));
                }
            }
            out
        };
        let mut associativity_triples = 0;
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    // (a∗b)∗c against (b∗c)∗a, which equals a∗(b∗c) by commutativity
                    let left = times(&table[a][b], c);
                    let right = times(&table[b][c], a);
                    if left != right {
                        return Err(Error::RingIdentity(format!(
                            "associativity fails for (σ{}, σ{}, σ{})",
                            self.basis[a], self.basis[b], self.basis[c]
                        )));
                    }
                    associativity_triples += 1;
                }
            }
        }
        let mut giambelli_identities = 0;
        for (k, g) in self.giambelli.iter().enumerate() {
            if g.evaluate(&self.gens, self.ngens) != self.ops[k] {
                return Err(Error::RingIdentity(format!("Giambelli formula for σ{}", self.basis[k])));
            }
            if self.basis[k].ell() >= 2 {
                giambelli_identities += 1;
            }
        }
        let mut presentation_relations = 0;
        for rel in self.presentation() {
            let g = &self.gens[rel.generator - 1];
            let mut rhs = QMatrix::zero(size);
            for (e, c) in rel.rhs.terms() {
                rhs = rhs.add(&self.operator(e).scale_by(c));
            }
            if g.mul(g) != rhs {
                return Err(Error::RingIdentity(format!("relation {rel}")));
            }
            presentation_relations += 1;
        }
        Ok(RingReport {
            commutativity_pairs,
            associativity_triples,
            giambelli_identities,
            presentation_relations,
            unit_checks,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssignmentRow {
    pub name: String,
    pub invariant: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedRow {
    pub invariant: String,
    pub value: i64,
    pub provenance: String,
}

/// Everything the `qh` command reports.
#[derive(Debug, Clone, Serialize)]
pub struct QhReport {
    pub word: String,
    pub certified: bool,
    pub unknown_count: usize,
    pub commutator_entries: usize,
    pub nonzero_commutator_entries: usize,
    pub equation_count: usize,
    pub distinct_equations: usize,
    pub free: Vec<String>,
    pub free_values: BTreeMap<String, i64>,
    pub branches: Vec<String>,
    pub seeds: Vec<SeedRow>,
    pub assignments: Vec<AssignmentRow>,
    pub reference_match: Option<bool>,
    pub matrices: Vec<Vec<Vec<String>>>,
    pub presentation: Vec<String>,
    pub giambelli: Vec<String>,
    pub product_table: Vec<Vec<String>>,
    pub checks: RingReport,
}

/// Solves the system, fixes the free invariants and verifies the ring.
pub fn run_pipeline(ctx: &QhContext, free_values: &BTreeMap<String, i64>) -> Result<(QhReport, QuantumRing)> {
    let solved = solve_system(ctx)?;
    let reference_match = if is_certified(ctx.word()) {
        solved.check_reference()?;
        Some(true)
    } else {
        None
    };
    let mats = solved.finalize(free_values)?;
    let ring = QuantumRing::new(ctx, mats)?;
    let checks = ring.verify()?;
    let names = solved.table.namer();
    let seeds = solved
        .table
        .entries()
        .iter()
        .filter_map(|(k, e)| match e {
            TableEntry::Known { value, provenance } => Some(SeedRow {
                invariant: k.to_string(),
                value: *value,
                provenance: provenance.clone(),
            }),
            TableEntry::Unknown(_) => None,
        })
        .collect();
    let assignments = solved
        .table
        .symbols()
        .map(|s| AssignmentRow {
            name: solved.table.name(s).to_string(),
            invariant: solved.table.key(s).to_string(),
            value: solved.assignment(s).display_with(&names),
        })
        .collect();
    let branches = solved
        .solution
        .branches
        .iter()
        .map(|b| format!("{} = 0 gives {} = {}", b.equation.display_with(&names), names(b.symbol), b.chosen))
        .collect();
    let used: BTreeMap<String, i64> = solved
        .free_names()
        .into_iter()
        .filter_map(|n| free_values.get(&n).map(|v| (n, *v)))
        .collect();
    let basis = ring.basis().to_vec();
    let report = QhReport {
        word: ctx.word().to_string(),
        certified: is_certified(ctx.word()),
        unknown_count: solved.table.unknown_count(),
        commutator_entries: solved.entry_count,
        nonzero_commutator_entries: solved.nonzero_entries,
        equation_count: solved.equation_count,
        distinct_equations: solved.solution.distinct_equations,
        free: solved.free_names(),
        free_values: used,
        branches,
        seeds,
        assignments,
        reference_match,
        matrices: ring.generators().iter().map(|m| m.display_with(&no_names)).collect(),
        presentation: ring.presentation().iter().map(ToString::to_string).collect(),
        giambelli: basis
            .iter()
            .filter(|e| e.ell() >= 2)
            .map(|e| format!("σ{e} = {}", ring.giambelli(e).display()))
            .collect(),
        product_table: ring
            .product_table()
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect(),
        checks,
    };
    Ok((report, ring))
}

impl QhReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |t: String| {
            s.push_str(&t);
            s.push('\n');
        };
        line(format!("word {}", self.word));
        line(format!("unknowns {}", self.unknown_count));
        line(format!(
            "commutator entries {} ({} nonzero), equations {} ({} distinct)",
            self.commutator_entries, self.nonzero_commutator_entries, self.equation_count, self.distinct_equations
        ));
        line(format!("free {}", self.free.join(", ")));
        for (k, v) in &self.free_values {
            line(format!("  {k} = {v}"));
        }
        if let Some(m) = self.reference_match {
            line(format!("published matrices match: {m}"));
        }
        line("presentation".into());
        for r in &self.presentation {
            line(format!("  {r}"));
        }
        line("giambelli".into());
        for g in &self.giambelli {
            line(format!("  {g}"));
        }
        line(format!(
            "checks: {} unit, {} commutativity, {} associativity, {} giambelli, {} relations",
            self.checks.unit_checks,
            self.checks.commutativity_pairs,
            self.checks.associativity_triples,
            self.checks.giambelli_identities,
            self.checks.presentation_relations
        ));
        s
    }
}
