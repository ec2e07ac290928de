//! Effective curve classes, curve neighborhoods and the Gromov-Witten
//! vanishing filter.
//!
//! Bounded searches rely on two facts about effective classes β on a
//! Bott-Samelson variety of length n:
//!
//! * every *level sum* `L_m(β) = Σ_{i≤m, a_i=a_m} β_i` is nonnegative (it is a
//!   coordinate of the pushforward of β to the flag variety through the
//!   m-th prefix), and
//! * the *height* `f(β) = Σ_i (n−i+1) β_i`, which is a sum of such
//!   coordinates, is at least 1 unless β = 0.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cohomology::pair_subvariety;
use crate::cohomology::{deg_q, CohClass};
use crate::error::{Error, Result};
use crate::momentgraph::{CurveClass, Edge, MomentGraph};
use crate::rootsys::{SubwordIndex, Word};

/// `f(β) = Σ_i (n−i+1) β_i`.
pub fn height(beta: &CurveClass) -> i64 {
    let n = beta.len() as i64;
    beta.0
        .iter()
        .enumerate()
        .map(|(i, x)| (n - i as i64) * x)
        .sum()
}

/// The level sums `L_m(β)` for m = 1..n.
pub fn level_sums(word: &Word, beta: &CurveClass) -> Vec<i64> {
    (1..=word.len())
        .map(|m| {
            let a = word.letter(m);
            (1..=m)
                .filter(|&i| word.letter(i) == a)
                .map(|i| beta.0[i - 1])
                .sum()
        })
        .collect()
}

/// Necessary condition for effectivity: all level sums are nonnegative.
pub fn passes_level_test(word: &Word, beta: &CurveClass) -> bool {
    level_sums(word, beta).iter().all(|&x| x >= 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveCone {
    #[serde(skip)]
    word: Option<Word>,
    generators: Vec<CurveClass>,
}

impl EffectiveCone {
    /// Minimal generators of the monoid spanned by the moment-graph edge classes.
    ///
    /// Generators are ordered by the position of their last nonzero
    /// coordinate, then by height, then lexicographically.
    pub fn from_graph(graph: &MomentGraph) -> Self {
        let word = graph.word().clone();
        let mut classes = graph.edge_classes();
        classes.retain(|c| !c.is_zero());
        classes.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
        let mut generators: Vec<CurveClass> = Vec::new();
        for c in classes {
            if decompose(&word, &generators, &c).is_none() {
                generators.push(c);
            }
        }
        generators.sort_by(|a, b| {
            last_nonzero(a)
                .cmp(&last_nonzero(b))
                .then_with(|| height(a).cmp(&height(b)))
                .then_with(|| a.cmp(b))
        });
        Self {
            word: Some(word),
            generators,
        }
    }

    pub fn build(word: &Word) -> Result<Self> {
        Ok(Self::from_graph(&MomentGraph::build(word)?))
    }

    pub fn word(&self) -> &Word {
        self.word.as_ref().expect("cone built from a word")
    }

    pub fn generators(&self) -> &[CurveClass] {
        &self.generators
    }

    /// Nonnegative integer coefficients expressing β in the generators, if any.
    pub fn is_effective(&self, beta: &CurveClass) -> Option<Vec<u64>> {
        decompose(self.word(), &self.generators, beta)
    }

    /// Generators that are not a sum of two nonzero effective classes.
    pub fn indecomposables(&self) -> Vec<CurveClass> {
        self.generators
            .iter()
            .filter(|g| self.split(g).is_none())
            .cloned()
            .collect()
    }

    /// A splitting β = β' + β'' into nonzero effective classes, if one exists.
    pub fn split(&self, beta: &CurveClass) -> Option<(CurveClass, CurveClass)> {
        let mut found = None;
        search(
            self.word(),
            &self.generators,
            beta,
            0,
            &mut vec![0; self.generators.len()],
            &mut |coeffs| {
                if coeffs.iter().sum::<u64>() < 2 {
                    return false;
                }
                let first = coeffs.iter().position(|&c| c > 0).expect("nonzero");
                let head = self.generators[first].clone();
                found = Some((head.clone(), beta - &head));
                true
            },
        );
        found
    }

    pub fn combine(&self, coeffs: &[u64]) -> CurveClass {
        let n = self.word().len();
        coeffs
            .iter()
            .zip(&self.generators)
            .fold(CurveClass::zero(n), |acc, (&c, g)| &acc + &g.scale(c as i64))
    }
}

fn last_nonzero(c: &CurveClass) -> usize {
    c.0.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1)
}

/// First ℕ-combination of `gens` equal to `target`, searching larger
/// coefficients of earlier generators first.
fn decompose(word: &Word, gens: &[CurveClass], target: &CurveClass) -> Option<Vec<u64>> {
    let mut found = None;
    search(word, gens, target, 0, &mut vec![0; gens.len()], &mut |c| {
        found = Some(c.to_vec());
        true
    });
    found
}

/// Depth-first enumeration of ℕ-combinations; `visit` returns true to stop.
fn search(
    word: &Word,
    gens: &[CurveClass],
    target: &CurveClass,
    idx: usize,
    coeffs: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) -> bool {
    if idx == gens.len() {
        return target.is_zero() && visit(coeffs);
    }
    let g = &gens[idx];
    let hg = height(g);
    let ht = height(target);
    if hg <= 0 || ht < 0 {
        return false;
    }
    for c in (0..=ht / hg).rev() {
        let rest = target - &g.scale(c);
        if !passes_level_test(word, &rest) {
            continue;
        }
        coeffs[idx] = c as u64;
        if search(word, gens, &rest, idx + 1, coeffs, visit) {
            return true;
        }
    }
    coeffs[idx] = 0;
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodResult {
    pub fixed_points: BTreeSet<SubwordIndex>,
    /// Set when `fixed_points` is exactly the fixed-point set of some Z_ε.
    pub matched_subvariety: Option<SubwordIndex>,
}

/// Fixed points of Z_ε: the indices whose support lies in that of ε.
pub fn subvariety_fixed_points(eps: &SubwordIndex) -> BTreeSet<SubwordIndex> {
    SubwordIndex::all(eps.len())
        .into_iter()
        .filter(|e| e.is_below(eps))
        .collect()
}

/// The subvariety Z_ε whose fixed points are exactly `points`, if any.
pub fn match_subvariety(points: &BTreeSet<SubwordIndex>) -> Option<SubwordIndex> {
    let top = points.iter().copied().reduce(|a, b| a.union(&b))?;
    (subvariety_fixed_points(&top) == *points).then_some(top)
}

/// Fixed points covered by connected configurations of T-stable curves of
/// total class β meeting `start`.
///
/// A configuration is a multiset of moment-graph edges whose classes, counted
/// with multiplicity, sum to β exactly; it must be connected and touch
/// `start`. The result is the union of the vertices of all configurations.
pub fn curve_neighborhood(
    graph: &MomentGraph,
    start: &[SubwordIndex],
    beta: &CurveClass,
) -> Result<NeighborhoodResult> {
    let word = graph.word();
    if beta.len() != word.len() || start.iter().any(|e| e.len() != word.len()) {
        return Err(Error::WordMismatch("curve class or start set length".into()));
    }
    let cone = EffectiveCone::from_graph(graph);
    if cone.is_effective(beta).is_none() {
        return Err(Error::NotEffective(beta.to_string()));
    }
    let start: BTreeSet<SubwordIndex> = start.iter().copied().collect();
    let edges: Vec<&Edge> = graph.edges().iter().filter(|e| !e.cls.is_zero()).collect();
    let mut covered = BTreeSet::new();
    let mut mult = vec![0u32; edges.len()];
    enumerate_configurations(word, &edges, beta, 0, &mut mult, &mut |m| {
        let chosen: Vec<&Edge> = edges
            .iter()
            .zip(m)
            .filter(|(_, &k)| k > 0)
            .map(|(e, _)| *e)
            .collect();
        let verts: BTreeSet<SubwordIndex> = chosen.iter().flat_map(|e| [e.u, e.v]).collect();
        if verts.iter().any(|v| start.contains(v)) && is_connected(&verts, &chosen) {
            covered.extend(verts);
        }
    });
    let matched_subvariety = match_subvariety(&covered);
    Ok(NeighborhoodResult {
        fixed_points: covered,
        matched_subvariety,
    })
}

fn enumerate_configurations(
    word: &Word,
    edges: &[&Edge],
    target: &CurveClass,
    idx: usize,
    mult: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]),
) {
    if target.is_zero() {
        visit(mult);
        return;
    }
    if idx == edges.len() {
        return;
    }
    let cls = &edges[idx].cls;
    let h = height(cls);
    let max = if h > 0 { height(target) / h } else { 0 };
    for k in 0..=max.max(0) {
        let rest = target - &cls.scale(k);
        if k > 0 && !passes_level_test(word, &rest) {
            continue;
        }
        mult[idx] = k as u32;
        enumerate_configurations(word, edges, &rest, idx + 1, mult, visit);
    }
    mult[idx] = 0;
}

fn is_connected(verts: &BTreeSet<SubwordIndex>, edges: &[&Edge]) -> bool {
    let Some(&first) = verts.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([first]);
    let mut stack = vec![first];
    while let Some(v) = stack.pop() {
        for e in edges.iter().filter(|e| e.touches(&v)) {
            let w = e.other(&v);
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == verts.len()
}

/// An irreducible component of a curve neighborhood, described by data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    /// The Bott-Samelson subvariety Z_ε this component equals, if any.
    pub subvariety: Option<SubwordIndex>,
    pub dim: usize,
    pub fixed_points: BTreeSet<SubwordIndex>,
}

impl Component {
    pub fn subvariety(eps: SubwordIndex) -> Self {
        Self {
            label: format!("Z_{eps}"),
            subvariety: Some(eps),
            dim: eps.ell(),
            fixed_points: subvariety_fixed_points(&eps),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Vanishing {
    /// Every component has dimension below the codimension of the insertion.
    DimensionShortfall,
    /// The insertion pairs to zero with every top-dimensional component.
    PairingsVanish,
    Inconclusive,
}

impl Vanishing {
    pub fn vanishes(self) -> bool {
        !matches!(self, Vanishing::Inconclusive)
    }
}

/// Decides whether ⟨σ_γ, [Z_Ω]⟩_β vanishes from the components of Γ_β(Z_Ω).
pub fn gw_vanishes(
    word: &Word,
    gamma: &SubwordIndex,
    omega: &SubwordIndex,
    beta: &CurveClass,
    components: &[Component],
) -> Result<Vanishing> {
    let n = word.len() as i64;
    if gamma.len() != word.len() || omega.len() != word.len() {
        return Err(Error::WordMismatch("insertion length".into()));
    }
    let lhs = gamma.ell() as i64 + (n - omega.ell() as i64);
    let rhs = n + deg_q(word, beta) - 1;
    if lhs != rhs {
        return Err(Error::Codimension(format!(
            "codim σ_{gamma} + codim [Z_{omega}] = {lhs}, expected {rhs}"
        )));
    }
    if components.is_empty() {
        return Err(Error::MalformedComponents("empty component list".into()));
    }
    for c in components {
        if c.dim > word.len() {
            return Err(Error::MalformedComponents(format!(
                "component {} has dimension {} > {}",
                c.label, c.dim, n
            )));
        }
        if let Some(e) = c.subvariety {
            if e.len() != word.len() || e.ell() != c.dim {
                return Err(Error::MalformedComponents(format!(
                    "component {} does not match Z_{e}",
                    c.label
                )));
            }
        }
    }
    let codim = gamma.ell();
    let top = components.iter().map(|c| c.dim).max().expect("nonempty");
    if top < codim {
        return Ok(Vanishing::DimensionShortfall);
    }
    if top > codim {
        return Ok(Vanishing::Inconclusive);
    }
    let sigma = CohClass::basis(*gamma);
    let all_zero = components.iter().filter(|c| c.dim == codim).all(|c| {
        c.subvariety
            .is_some_and(|e| pair_subvariety(&sigma, &e) == 0)
    });
    Ok(if all_zero {
        Vanishing::PairingsVanish
    } else {
        Vanishing::Inconclusive
    })
}

/// Known curve neighborhoods of Z(α₁,α₂,α₁) over A₂ in the basis
/// β₁ = (0,1,0), β₂ = (0,0,1), β₃ = (1,0,−1): keyed by (Ω, β).
pub fn certified_components() -> BTreeMap<(SubwordIndex, CurveClass), Vec<Component>> {
    let e = |s: &str| s.parse::<SubwordIndex>().expect("valid index");
    let b1 = CurveClass(vec![0, 1, 0]);
    let b3 = CurveClass(vec![1, 0, -1]);
    let z101 = Component::subvariety(e("101"));
    let fiber = Component {
        label: "theta^-1(x_e)".into(),
        subvariety: None,
        dim: 1,
        fixed_points: [e("000"), e("101")].into_iter().collect(),
    };
    let mut m = BTreeMap::new();
    for omega in ["100", "001", "110", "101", "011"] {
        m.insert((e(omega), b3.clone()), vec![z101.clone()]);
    }
    m.insert((e("010"), b3), vec![fiber]);
    m.insert((e("100"), b1), vec![Component::subvariety(e("110"))]);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanMatrix;

    fn word(letters: &[usize]) -> Word {
        Word::new(CartanMatrix::preset("A2").unwrap(), letters.to_vec()).unwrap()
    }

    fn cls(v: &[i64]) -> CurveClass {
        CurveClass(v.to_vec())
    }

    fn eps(s: &str) -> SubwordIndex {
        s.parse().unwrap()
    }

    #[test]
    fn generators() {
        let cone = EffectiveCone::build(&word(&[1, 2, 1])).unwrap();
        assert_eq!(cone.generators(), &[cls(&[0, 1, 0]), cls(&[0, 0, 1]), cls(&[1, 0, -1])]);
        let cone = EffectiveCone::build(&word(&[1, 2])).unwrap();
        assert_eq!(cone.generators(), &[cls(&[1, 0]), cls(&[0, 1])]);
        let cone = EffectiveCone::build(&word(&[1])).unwrap();
        assert_eq!(cone.generators(), &[cls(&[1])]);
    }

    #[test]
    fn effectivity() {
        let cone = EffectiveCone::build(&word(&[1, 2, 1])).unwrap();
        assert_eq!(cone.is_effective(&cls(&[1, 0, 0])), Some(vec![0, 1, 1]));
        assert_eq!(cone.is_effective(&cls(&[1, 1, -2])), None);
        assert_eq!(cone.is_effective(&cls(&[0, 0, 0])), Some(vec![0, 0, 0]));
    }

    #[test]
    fn decompositions() {
        let cone = EffectiveCone::build(&word(&[1, 2, 1])).unwrap();
        assert_eq!(cone.indecomposables(), cone.generators().to_vec());
        let (a, b) = cone.split(&cls(&[1, 0, 0])).unwrap();
        assert_eq!((a, b), (cls(&[0, 0, 1]), cls(&[1, 0, -1])));
        let cone1 = EffectiveCone::build(&word(&[1])).unwrap();
        assert_eq!(cone1.indecomposables(), vec![cls(&[1])]);
    }

    #[test]
    fn neighborhoods() {
        let g = MomentGraph::build(&word(&[1, 2, 1])).unwrap();
        let b3 = cls(&[1, 0, -1]);
        let fp = |s: &str| subvariety_fixed_points(&eps(s)).into_iter().collect::<Vec<_>>();

        let r = curve_neighborhood(&g, &fp("100"), &b3).unwrap();
        assert_eq!(r.matched_subvariety, Some(eps("101")));
        let r = curve_neighborhood(&g, &fp("010"), &b3).unwrap();
        assert_eq!(r.fixed_points, [eps("000"), eps("101")].into_iter().collect());
        assert_eq!(r.matched_subvariety, None);
        let r = curve_neighborhood(&g, &fp("001"), &b3).unwrap();
        assert_eq!(r.matched_subvariety, Some(eps("101")));
        let r = curve_neighborhood(&g, &fp("100"), &cls(&[0, 1, 0])).unwrap();
        assert_eq!(r.matched_subvariety, Some(eps("110")));
        assert!(matches!(
            curve_neighborhood(&g, &fp("100"), &cls(&[1, 1, -2])),
            Err(Error::NotEffective(_))
        ));
    }

    #[test]
    fn vanishing_filter() {
        let w = word(&[1, 2, 1]);
        let b3 = cls(&[1, 0, -1]);
        let comps = vec![Component::subvariety(eps("101"))];
        assert_eq!(
            gw_vanishes(&w, &eps("110"), &eps("110"), &b3, &comps).unwrap(),
            Vanishing::PairingsVanish
        );
        assert_eq!(
            gw_vanishes(&w, &eps("101"), &eps("110"), &b3, &comps).unwrap(),
            Vanishing::Inconclusive
        );
        let curve = vec![Component {
            label: "curve".into(),
            subvariety: None,
            dim: 1,
            fixed_points: BTreeSet::new(),
        }];
        assert_eq!(
            gw_vanishes(&w, &eps("011"), &eps("110"), &b3, &curve).unwrap(),
            Vanishing::DimensionShortfall
        );
        assert!(matches!(
            gw_vanishes(&w, &eps("101"), &eps("110"), &b3, &[]),
            Err(Error::MalformedComponents(_))
        ));
        assert!(matches!(
            gw_vanishes(&w, &eps("100"), &eps("110"), &b3, &comps),
            Err(Error::Codimension(_))
        ));
    }

    #[test]
    fn certified_table_matches_combinatorics() {
        let g = MomentGraph::build(&word(&[1, 2, 1])).unwrap();
        for ((omega, beta), comps) in certified_components() {
            let start: Vec<SubwordIndex> = subvariety_fixed_points(&omega).into_iter().collect();
            let r = curve_neighborhood(&g, &start, &beta).unwrap();
            let union: BTreeSet<SubwordIndex> =
                comps.iter().flat_map(|c| c.fixed_points.iter().copied()).collect();
            assert_eq!(r.fixed_points, union, "Γ_{beta}(Z_{omega})");
        }
    }
}
