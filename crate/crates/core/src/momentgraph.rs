//! Inductive construction of Bott-Samelson moment graphs.
//!
//! The graph of `(a_1, …, a_n)` is obtained from the graph of the prefix
//! `(a_1, …, a_{n-1})`: every prefix vertex ε yields two vertices ε⁰, ε^∞
//! joined by a vertical fiber edge, and every prefix edge is lifted according
//! to one of four cases decided by comparing tangent roots.
//!
//! The position `k` used by the case test is the first index where the two
//! endpoints of the parent edge differ.
//!
//! Note: on `(1,2,1,2)` over A₂ the fixed points 0000, 1010, 0001, 1011 span
//! exactly four edges and no family edge. Their parent 000–101 falls in Case I
//! with equal Weyl elements, so its lifts are two parallel copies of the
//! parent class.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{CartanMatrix, RootSystem, SubwordIndex, WeylElement, Word};

/// Integer coordinates in the basis [Z_(1)], …, [Z_(n)] of curve classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The class [Z_(i)] (1-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        Self(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Pushforward along the inclusion of the prefix variety (zero extension).
    pub fn extend(&self) -> Self {
        let mut v = self.0.clone();
        v.push(0);
        Self(v)
    }

    pub fn truncate(&self) -> Self {
        Self(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CurveClass {
    type Output = CurveClass;
    fn sub(self, rhs: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CurveClass {
    type Output = CurveClass;
    fn neg(self) -> CurveClass {
        self.scale(-1)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", cells.join(","))
    }
}

impl FromStr for CurveClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("invalid curve class `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(CurveClass)
    }
}

/// A T-stable curve (or a one-dimensional family of them) between two fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: SubwordIndex,
    pub v: SubwordIndex,
    #[serde(rename = "class")]
    pub cls: CurveClass,
    pub family: bool,
}

impl Edge {
    /// Builds an edge with endpoints stored in lexicographic order.
    pub fn new(a: SubwordIndex, b: SubwordIndex, cls: CurveClass, family: bool) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Self { u, v, cls, family }
    }

    pub fn touches(&self, e: &SubwordIndex) -> bool {
        self.u == *e || self.v == *e
    }

    pub fn other(&self, e: &SubwordIndex) -> SubwordIndex {
        if self.u == *e {
            self.v
        } else {
            self.u
        }
    }

    /// Whether the edge joins two vertices differing only in the last position.
    pub fn is_vertical(&self) -> bool {
        let n = self.u.len();
        n > 0 && self.u.prefix(n - 1) == self.v.prefix(n - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LiftCase {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for LiftCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LiftCase::I => "I",
            LiftCase::II => "II",
            LiftCase::III => "III",
            LiftCase::IV => "IV",
        };
        f.write_str(s)
    }
}

/// Case tag of a parent edge together with the data used to decide it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftData {
    pub case: LiftCase,
    /// First position where the parent endpoints differ.
    pub k: usize,
    /// w(ε_x⁰) and w(ε_y⁰), where x = parent.u and y = parent.v.
    pub w_x: WeylElement,
    pub w_y: WeylElement,
}

/// Decides the lift case of an edge of the prefix graph of `word`.
pub fn classify_lift(word: &Word, parent: &Edge) -> Result<LiftData> {
    let n = word.len();
    if n == 0 || parent.u.len() + 1 != n || parent.v.len() + 1 != n {
        return Err(Error::WordMismatch(format!(
            "parent edge {}–{} does not belong to the prefix of a word of length {n}",
            parent.u, parent.v
        )));
    }
    let k = parent.u.first_difference(&parent.v).ok_or_else(|| {
        Error::Lift(format!("parent edge joins {} to itself", parent.u))
    })?;
    let x0 = parent.u.extend(false);
    let y0 = parent.v.extend(false);
    let x_holds = word.root_at(&x0, k)? == word.root_at(&x0, n)?;
    let y_holds = word.root_at(&y0, k)? == word.root_at(&y0, n)?;
    let case = match (x_holds, y_holds) {
        (false, false) => LiftCase::I,
        (true, true) => LiftCase::II,
        (true, false) => LiftCase::III,
        (false, true) => LiftCase::IV,
    };
    Ok(LiftData {
        case,
        k,
        w_x: word.weyl_element(&x0)?,
        w_y: word.weyl_element(&y0)?,
    })
}

/// Lifts a prefix edge to the edges among ε_x⁰, ε_x^∞, ε_y⁰, ε_y^∞.
/// Vertical fiber edges are not produced here.
pub fn lift_edge(word: &Word, roots: &RootSystem, parent: &Edge, data: &LiftData) -> Result<Vec<Edge>> {
    let n = word.len();
    let (x, y) = (parent.u, parent.v);
    let (x0, xi, y0, yi) = (x.extend(false), x.extend(true), y.extend(false), y.extend(true));
    let base = parent.cls.extend();
    let h = CurveClass::unit(n, n);
    let edges = match data.case {
        LiftCase::I => {
            let top = if data.w_x == data.w_y {
                base.clone()
            } else {
                let quotient = data.w_x.inverse().compose(&data.w_y);
                let gamma = roots.reflection_root(&quotient).ok_or_else(|| {
                    Error::Lift(format!(
                        "w({x0})⁻¹·w({y0}) is not a reflection for parent edge {x}–{y}"
                    ))
                })?;
                let last = crate::rootsys::RootVector::simple(word.rank(), word.letter(n));
                let pairing = roots.coroot_pairing(&gamma, &last);
                &base - &h.scale(pairing)
            };
            vec![Edge::new(x0, y0, base, false), Edge::new(xi, yi, top, false)]
        }
        LiftCase::II => {
            let diag = &base - &h;
            vec![
                Edge::new(x0, y0, base, true),
                Edge::new(x0, yi, diag.clone(), false),
                Edge::new(xi, y0, diag, false),
            ]
        }
        LiftCase::III => {
            let diag = &base + &h;
            vec![
                Edge::new(x0, y0, base.clone(), false),
                Edge::new(xi, yi, base, false),
                Edge::new(x0, yi, diag, true),
            ]
        }
        LiftCase::IV => {
            let diag = &base + &h;
            vec![
                Edge::new(x0, y0, base.clone(), false),
                Edge::new(xi, yi, base, false),
                Edge::new(xi, y0, diag, true),
            ]
        }
    };
    Ok(edges)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentGraph {
    word: Word,
    vertices: Vec<SubwordIndex>,
    edges: Vec<Edge>,
}

impl MomentGraph {
    /// Builds the moment graph level by level. Requires a finite-type Cartan matrix.
    pub fn build(word: &Word) -> Result<Self> {
        let roots = word.root_system()?;
        let mut edges: Vec<Edge> = Vec::new();
        for m in 1..=word.len() {
            let level = word.prefix(m);
            let mut next: BTreeMap<(SubwordIndex, SubwordIndex, CurveClass), bool> = BTreeMap::new();
            for parent in &edges {
                let data = classify_lift(&level, parent)?;
                for e in lift_edge(&level, &roots, parent, &data)? {
                    *next.entry((e.u, e.v, e.cls)).or_default() |= e.family;
                }
            }
            for eps in SubwordIndex::all(m - 1) {
                let e = Edge::new(eps.extend(false), eps.extend(true), CurveClass::unit(m, m), false);
                next.entry((e.u, e.v, e.cls)).or_default();
            }
            edges = next
                .into_iter()
                .map(|((u, v, cls), family)| Edge { u, v, cls, family })
                .collect();
        }
        Ok(Self {
            word: word.clone(),
            vertices: SubwordIndex::all(word.len()),
            edges,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// All 2^n vertices in lexicographic order.
    pub fn vertices(&self) -> &[SubwordIndex] {
        &self.vertices
    }

    /// Edges sorted by (u, v, class).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn family_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.family)
    }

    /// Distinct edge classes in sorted order.
    pub fn edge_classes(&self) -> Vec<CurveClass> {
        let mut v: Vec<CurveClass> = self.edges.iter().map(|e| e.cls.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Dot => self.to_dot(),
            ExportFormat::Json => self.to_json(),
            ExportFormat::Text => self.to_text(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            word: self.word.letters().to_vec(),
            cartan: self.word.cartan().rows().to_vec(),
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes")
    }

    /// Parses the JSON produced by [`MomentGraph::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let word = Word::new(CartanMatrix::new(doc.cartan)?, doc.word)?;
        let n = word.len();
        if doc.vertices.iter().any(|v| v.len() != n)
            || doc.edges.iter().any(|e| e.u.len() != n || e.v.len() != n || e.cls.len() != n)
        {
            return Err(Error::Parse("vertex or edge length disagrees with word".into()));
        }
        Ok(Self {
            word,
            vertices: doc.vertices,
            edges: doc.edges,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("graph \"{}\" {{\n", self.word);
        for v in &self.vertices {
            out.push_str(&format!("  \"{v}\";\n"));
        }
        for e in &self.edges {
            let style = if e.family { ", penwidth=3" } else { "" };
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"{style}];\n",
                e.u, e.v, e.cls
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "word {} ({} vertices, {} edges)\n",
            self.word,
            self.vertices.len(),
            self.edges.len()
        );
        for e in &self.edges {
            let tag = if e.family { "  family" } else { "" };
            out.push_str(&format!("{} -- {}  {}{tag}\n", e.u, e.v, e.cls));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    word: Vec<usize>,
    cartan: Vec<Vec<i64>>,
    vertices: Vec<SubwordIndex>,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
    Text,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(Self::Dot),
            "json" => Ok(Self::Json),
            "text" => Ok(Self::Text),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Pushforward to the flag variety: the component for simple root j sums the
/// coordinates at positions whose letter is j.
pub fn push_theta(word: &Word, cls: &CurveClass) -> Vec<i64> {
    let mut out = vec![0; word.rank()];
    for (i, &a) in word.letters().iter().enumerate() {
        out[a - 1] += cls.0[i];
    }
    out
}
