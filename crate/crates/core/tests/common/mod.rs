#![allow(dead_code)]

use std::collections::BTreeSet;

use bsqh::cohomology::{multiply_basis, reduce_monomial};
use bsqh::momentgraph::{classify_lift, push_theta, CurveClass, LiftCase, MomentGraph};
use bsqh::rootsys::{CartanMatrix, RootVector, SubwordIndex, WeylElement, Word};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const PRESETS: [&str; 3] = ["A2", "A3", "D4"];

pub fn word(preset: &str, letters: &[usize]) -> Word {
    Word::new(CartanMatrix::preset(preset).unwrap(), letters.to_vec()).unwrap()
}

pub fn a2(letters: &[usize]) -> Word {
    word("A2", letters)
}

pub fn eps(s: &str) -> SubwordIndex {
    s.parse().unwrap()
}

pub fn cls(v: &[i64]) -> CurveClass {
    CurveClass(v.to_vec())
}

/// Random words of length 1..=max_len over the A2, A3 and D4 presets.
pub fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    (0..PRESETS.len(), 1..=max_len).prop_flat_map(|(p, n)| {
        let rank = CartanMatrix::preset(PRESETS[p]).unwrap().rank();
        proptest::collection::vec(1..=rank, n).prop_map(move |letters| word(PRESETS[p], &letters))
    })
}

/// Every word of length 1..=max_len over a preset.
pub fn all_words(preset: &str, max_len: usize) -> Vec<Word> {
    let rank = CartanMatrix::preset(preset).unwrap().rank();
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w| {
                (1..=rank).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(level.iter().map(|l| word(preset, l)));
    }
    out
}

/// deg q^β by peeling off the last ℙ¹-bundle: the relative tangent bundle of
/// Z → Z' pairs with β through θ_*β against the coroots, and the rest is the
/// degree of the truncated class on the prefix variety.
pub fn deg_oracle(word: &Word, beta: &CurveClass) -> i64 {
    let n = word.len();
    if n == 0 {
        return 0;
    }
    let last = word.letter(n);
    let mut theta = vec![0i64; word.rank()];
    for k in 1..=n {
        theta[word.letter(k) - 1] += beta.0[k - 1];
    }
    let relative: i64 = theta
        .iter()
        .enumerate()
        .map(|(b, x)| x * word.cartan().entry(b + 1, last))
        .sum();
    relative + deg_oracle(&word.prefix(n - 1), &beta.truncate())
}

/// Determinant by fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

/// det(tI − M) for an integer t.
pub fn det_shifted(m: &[Vec<i64>], t: i64) -> BigInt {
    let a = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| BigInt::from(if i == j { t - x } else { -x }))
                .collect()
        })
        .collect();
    bareiss_det(a)
}

/// Evaluates a highest-first integer polynomial.
pub fn eval_poly(p: &[BigInt], t: i64) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc * t + c)
}

pub fn check_reflection_involution(word: &Word) -> Result<(), TestCaseError> {
    let roots = word.root_system().unwrap();
    let rank = word.rank();
    for v in roots.positive_roots() {
        for j in 1..=rank {
            let once = word.reflect(j, v).unwrap();
            prop_assert!(roots.is_root(&once), "s_{j}({v}) = {once} is not a root");
            prop_assert_eq!(&word.reflect(j, &once).unwrap(), v);
        }
        let s = roots.reflection(v);
        prop_assert!(s.compose(&s).is_identity());
        prop_assert!(!s.is_identity());
    }
    Ok(())
}

pub fn check_roots_at(word: &Word) -> Result<(), TestCaseError> {
    let roots = word.root_system().unwrap();
    for e in SubwordIndex::all(word.len()) {
        for k in 1..=word.len() {
            let r = word.root_at(&e, k).unwrap();
            prop_assert!(roots.is_root(&r), "root_at({e}, {k}) = {r}");
        }
        let w = word.weyl_element(&e).unwrap();
        for i in 1..=word.rank() {
            let image = w.apply(&RootVector::simple(word.rank(), i));
            prop_assert!(roots.is_root(&image));
        }
    }
    Ok(())
}

/// Right-to-left lexicographic comparison of exponent vectors.
fn rl_less_eq(a: &[u32], b: &[u32]) -> bool {
    a.iter().rev().cmp(b.iter().rev()) != std::cmp::Ordering::Greater
}

pub fn check_normal_form(word: &Word, exps: &[u32]) -> Result<(), TestCaseError> {
    let total: u32 = exps.iter().sum();
    let c = reduce_monomial(word, exps);
    if total as usize > word.len() {
        prop_assert!(c.is_zero());
    }
    for e in c.terms().keys() {
        prop_assert_eq!(e.ell() as u32, total);
        let as_exps: Vec<u32> = (1..=word.len()).map(|i| e.bit(i) as u32).collect();
        prop_assert!(rl_less_eq(&as_exps, exps), "{e} above {exps:?}");
    }
    if exps.iter().all(|&x| x <= 1) {
        let bits: Vec<bool> = exps.iter().map(|&x| x == 1).collect();
        prop_assert_eq!(c, bsqh::cohomology::CohClass::basis(SubwordIndex::from_bits(&bits)));
    }
    Ok(())
}

pub fn check_grading(word: &Word) -> Result<(), TestCaseError> {
    let all = SubwordIndex::all(word.len());
    for a in &all {
        for b in &all {
            let p = multiply_basis(word, a, b);
            for e in p.terms().keys() {
                prop_assert_eq!(e.ell(), a.ell() + b.ell());
            }
        }
    }
    Ok(())
}

pub fn check_projection(word: &Word) -> Result<(), TestCaseError> {
    let n = word.len();
    let g = MomentGraph::build(word).unwrap();
    let keys: BTreeSet<_> = g.edges().iter().map(|e| (e.u, e.v, e.cls.clone())).collect();
    prop_assert_eq!(keys.len(), g.edges().len(), "duplicate edges");
    let vertical = g.edges().iter().filter(|e| e.is_vertical()).count();
    prop_assert_eq!(vertical, 1 << (n - 1));
    for e in g.edges().iter().filter(|e| e.is_vertical()) {
        prop_assert_eq!(&e.cls, &CurveClass::unit(n, n));
        prop_assert!(!e.family);
    }
    if n == 1 {
        prop_assert_eq!(g.edges().len(), 1);
        return Ok(());
    }
    let parent = MomentGraph::build(&word.prefix(n - 1)).unwrap();
    let below: BTreeSet<_> = parent.edges().iter().map(|e| (e.u, e.v, e.cls.clone())).collect();
    for e in g.edges().iter().filter(|e| !e.is_vertical()) {
        let key = (e.u.prefix(n - 1), e.v.prefix(n - 1), e.cls.truncate());
        prop_assert!(below.contains(&key), "{}–{} {} has no parent", e.u, e.v, e.cls);
    }
    let mut expected = 1usize << (n - 1);
    for p in parent.edges() {
        expected += match classify_lift(word, p).unwrap().case {
            LiftCase::I => 2,
            _ => 3,
        };
    }
    prop_assert_eq!(g.edges().len(), expected);
    Ok(())
}

pub fn check_effectivity(word: &Word) -> Result<(), TestCaseError> {
    let g = MomentGraph::build(word).unwrap();
    for e in g.edges() {
        prop_assert!(e.u != e.v);
        let theta = push_theta(word, &e.cls);
        prop_assert!(theta.iter().all(|&x| x >= 0), "{}–{} {} pushes to {theta:?}", e.u, e.v, e.cls);
        prop_assert!(!e.cls.is_zero());
    }
    Ok(())
}

/// Elements of the Weyl group of A2 that are products of at most three
/// simple reflections.
pub fn short_a2_elements() -> Vec<WeylElement> {
    let c = CartanMatrix::preset("A2").unwrap();
    let s = [WeylElement::simple_reflection(&c, 1), WeylElement::simple_reflection(&c, 2)];
    let mut out = vec![WeylElement::identity(2)];
    let mut frontier = out.clone();
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for r in &s {
                let x = w.compose(r);
                if !out.contains(&x) {
                    out.push(x.clone());
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    out
}
