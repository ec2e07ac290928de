mod common;

use std::collections::{BTreeMap, BTreeSet};

use bsqh::cohomology::{integrate, multiplication_matrix, multiply, multiply_basis, CohClass};
use bsqh::conjo::{approximate_roots, char_poly, inclusion_radii, is_squarefree};
use bsqh::effcone::{curve_neighborhood, subvariety_fixed_points, EffectiveCone};
use bsqh::momentgraph::{CurveClass, MomentGraph};
use bsqh::quantum::poly::{Poly, Sym};
use bsqh::quantum::ring::solve_system;
use bsqh::quantum::solve::Solver;
use bsqh::quantum::{commutator_system, QhContext};
use bsqh::rootsys::{SubwordIndex, Word};
use common::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn reflections_are_involutions(w in word_strategy(5)) {
        check_reflection_involution(&w)?;
    }

    #[test]
    fn roots_at_positions_are_roots(w in word_strategy(5)) {
        check_roots_at(&w)?;
    }

    #[test]
    fn normal_form_moves_mass_left(
        (w, exps) in word_strategy(5).prop_flat_map(|w| {
            let n = w.len();
            (Just(w), proptest::collection::vec(0u32..=3, n))
        })
    ) {
        check_normal_form(&w, &exps)?;
    }

    #[test]
    fn products_are_graded(w in word_strategy(4)) {
        check_grading(&w)?;
    }

    #[test]
    fn graphs_project_to_prefix_graphs(w in word_strategy(5)) {
        check_projection(&w)?;
    }

    #[test]
    fn edge_classes_push_forward_effectively(w in word_strategy(5)) {
        check_effectivity(&w)?;
    }

    #[test]
    fn effective_classes_are_closed_under_sums(
        a in proptest::collection::vec(-2i64..=3, 3),
        b in proptest::collection::vec(-2i64..=3, 3),
    ) {
        let cone = EffectiveCone::build(&a2(&[1, 2, 1])).unwrap();
        let (a, b) = (CurveClass(a), CurveClass(b));
        if cone.is_effective(&a).is_some() && cone.is_effective(&b).is_some() {
            prop_assert!(cone.is_effective(&(&a + &b)).is_some());
        }
    }

    #[test]
    fn deg_q_matches_the_recursion(
        (w, beta) in word_strategy(5).prop_flat_map(|w| {
            let n = w.len();
            (Just(w), proptest::collection::vec(-3i64..=3, n))
        })
    ) {
        let beta = CurveClass(beta);
        prop_assert_eq!(bsqh::cohomology::deg_q(&w, &beta), deg_oracle(&w, &beta));
    }

    #[test]
    fn char_poly_matches_elimination(m in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 5), 5)) {
        let p = char_poly(&m);
        for t in -3..=3 {
            prop_assert_eq!(eval_poly(&p, t), det_shifted(&m, t));
        }
        let transposed: Vec<Vec<i64>> = (0..5).map(|c| (0..5).map(|r| m[r][c]).collect()).collect();
        prop_assert_eq!(is_squarefree(&p), is_squarefree(&char_poly(&transposed)));
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant(
        m in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 4), 4)
    ) {
        let p = char_poly(&m);
        prop_assume!(is_squarefree(&p));
        let roots = approximate_roots(&p, 400);
        let radii = inclusion_radii(&p, &roots);
        let slack: f64 = radii.iter().sum::<f64>() + 1e-9;
        let trace: i64 = (0..4).map(|i| m[i][i]).sum();
        let sum: Complex64 = roots.iter().sum();
        prop_assert!((sum.re - trace as f64).abs() <= slack, "sum {sum} vs trace {trace}");
        prop_assert!(sum.im.abs() <= slack);
        let det = det_shifted(&m, 0).to_f64().unwrap();
        let product: Complex64 = roots.iter().product();
        // det(0·I − M) = det(M) for even size
        let scale = roots.iter().map(|z| z.norm() + 1.0).product::<f64>();
        prop_assert!((product.re - det).abs() <= slack * scale, "product {product} vs det {det}");
    }

    #[test]
    fn solver_ignores_equation_order(seed in any::<u64>(), size in 2usize..6) {
        let (unknowns, eqs) = triangular_system(seed, size);
        let solver = Solver::new(unknowns, BTreeSet::new());
        let reference = solver.solve(&eqs).unwrap();
        let mut shuffled = eqs.clone();
        shuffle(&mut shuffled, seed);
        let other = solver.solve(&shuffled).unwrap();
        prop_assert_eq!(&reference.values, &other.values);
        prop_assert_eq!(&reference.free, &other.free);
    }
}

/// x_i + Σ_{j>i} c_ij x_j = v_i with small coefficients derived from `seed`.
fn triangular_system(seed: u64, size: usize) -> (Vec<Sym>, Vec<Poly>) {
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 7) as i64 - 3
    };
    let unknowns: Vec<Sym> = (0..size as Sym).collect();
    let eqs = (0..size)
        .map(|i| {
            let mut p = Poly::var(i as Sym).sub(&Poly::constant(next()));
            for j in i + 1..size {
                p = p.add(&Poly::var(j as Sym).scale(next()));
            }
            p
        })
        .collect();
    (unknowns, eqs)
}

fn shuffle<T>(v: &mut [T], seed: u64) {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    for i in (1..v.len()).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        v.swap(i, (state % (i as u64 + 1)) as usize);
    }
}

#[test]
fn reflection_roots_are_exactly_the_involutions() {
    let roots = a2(&[]).root_system().unwrap();
    for u in short_a2_elements() {
        let involution = !u.is_identity() && u.compose(&u).is_identity();
        assert_eq!(roots.reflection_root(&u).is_some(), involution, "{:?}", u.matrix());
    }
}

fn exhaustive_ring_axioms(w: &Word) {
    let all = SubwordIndex::all(w.len());
    let products: BTreeMap<(SubwordIndex, SubwordIndex), CohClass> = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| ((*a, *b), multiply_basis(w, a, b))))
        .collect();
    for a in &all {
        for b in &all {
            assert_eq!(products[&(*a, *b)], products[&(*b, *a)], "{w}: σ{a}σ{b}");
            for c in &all {
                let left = multiply(w, &products[&(*a, *b)], &CohClass::basis(*c)).unwrap();
                let right = multiply(w, &CohClass::basis(*a), &products[&(*b, *c)]).unwrap();
                assert_eq!(left, right, "{w}: σ{a}σ{b}σ{c}");
            }
        }
    }
}

#[test]
fn multiplication_is_commutative_and_associative() {
    for preset in ["A2", "B2", "G2"] {
        for w in all_words(preset, 4) {
            exhaustive_ring_axioms(&w);
        }
    }
    for w in all_words("A3", 3) {
        exhaustive_ring_axioms(&w);
    }
}

#[test]
fn complementary_classes_pair_to_one() {
    for preset in ["A2", "A3", "G2"] {
        for w in all_words(preset, 4) {
            for e in SubwordIndex::all(w.len()) {
                let c = e.complement();
                assert!(e.is_transverse(&c));
                let p = multiply_basis(&w, &e, &c);
                assert_eq!(integrate(&w, &p), 1, "{w}: σ{e}·σ{c}");
            }
        }
    }
}

#[test]
fn cone_generators_reconstruct_edge_classes() {
    for w in all_words("A2", 4) {
        let g = MomentGraph::build(&w).unwrap();
        let cone = EffectiveCone::from_graph(&g);
        for e in g.edges() {
            let coeffs = cone.is_effective(&e.cls).unwrap_or_else(|| panic!("{w}: {} not effective", e.cls));
            assert_eq!(cone.combine(&coeffs), e.cls);
        }
        assert_eq!(cone.indecomposables(), cone.generators().to_vec(), "{w}");
    }
}

#[test]
fn neighborhoods_grow_with_the_start_set() {
    let w = a2(&[1, 2, 1]);
    let g = MomentGraph::build(&w).unwrap();
    let cone = EffectiveCone::from_graph(&g);
    let all = SubwordIndex::all(3);
    for beta in cone.generators().iter().chain([&cls(&[1, 0, 0]), &cls(&[1, 1, -1])]) {
        for small in &all {
            for big in all.iter().filter(|b| small.is_below(b)) {
                let a = curve_neighborhood(&g, &subvariety_fixed_points(small).into_iter().collect::<Vec<_>>(), beta).unwrap();
                let b = curve_neighborhood(&g, &subvariety_fixed_points(big).into_iter().collect::<Vec<_>>(), beta).unwrap();
                assert!(a.fixed_points.is_subset(&b.fixed_points), "Z_{small} ⊂ Z_{big}, {beta}");
            }
        }
    }
}

/// Neighborhoods of an exact class need not grow with the class: the fiber
/// curve 010–011 of class β2 meets Z_010, but no connected configuration of
/// class β2+β3 passes through 011.
#[test]
fn neighborhoods_can_shrink_as_the_class_grows() {
    let w = a2(&[1, 2, 1]);
    let g = MomentGraph::build(&w).unwrap();
    let cone = EffectiveCone::from_graph(&g);
    let mut failures = Vec::new();
    let classes: Vec<CurveClass> = (0..3u64)
        .flat_map(|a| (0..3u64).flat_map(move |b| (0..3u64).map(move |c| vec![a, b, c])))
        .map(|k| cone.combine(&k))
        .filter(|c| !c.is_zero())
        .collect();
    for omega in SubwordIndex::all(3) {
        let start: Vec<_> = subvariety_fixed_points(&omega).into_iter().collect();
        for beta in &classes {
            let base = curve_neighborhood(&g, &start, beta).unwrap();
            for gen in cone.generators() {
                let grown = curve_neighborhood(&g, &start, &(beta + gen)).unwrap();
                if !base.fixed_points.is_subset(&grown.fixed_points) {
                    failures.push(format!("Z_{omega}: {beta} then +{gen}"));
                }
            }
        }
    }
    assert_eq!(failures.len(), 16, "{failures:?}");
    assert!(failures.contains(&"Z_010: (0,0,1) then +(1,0,-1)".to_string()));
    let r = curve_neighborhood(&g, &[eps("000"), eps("010")], &cls(&[1, 0, 0])).unwrap();
    assert!(!r.fixed_points.contains(&eps("011")));
}

#[test]
fn quantum_matrices_are_graded_and_reduce_to_classical() {
    let w = a2(&[1, 2, 1]);
    let ctx = QhContext::new(&w).unwrap();
    let solved = solve_system(&ctx).unwrap();
    let mats = solved.finalize(&BTreeMap::from([("y3".to_string(), 1)])).unwrap();
    let basis = ctx.basis().to_vec();
    let degs: Vec<i64> = ctx.cone().generators().iter().map(|b| bsqh::cohomology::deg_q(&w, b)).collect();
    for (j, m) in mats.iter().enumerate() {
        for (col, e) in basis.iter().enumerate() {
            for (row, f) in basis.iter().enumerate() {
                for exp in m.get(row, col).terms().keys() {
                    let d: i64 = exp.iter().zip(&degs).map(|(k, d)| *k as i64 * d).sum();
                    assert_eq!(f.ell() as i64 + d, e.ell() as i64 + 1, "matrix {j} entry ({row}, {col})");
                }
            }
        }
        let classical = multiplication_matrix(&w, &CohClass::divisor(3, j + 1)).unwrap();
        for (row, r) in m.classical().iter().enumerate() {
            for (col, x) in r.iter().enumerate() {
                assert_eq!(x.as_constant(), Some(classical[row][col]), "matrix {j} entry ({row}, {col})");
            }
        }
    }
}

#[test]
fn commutator_solution_ignores_equation_order() {
    let ctx = QhContext::new(&a2(&[1, 2, 1])).unwrap();
    let solved = solve_system(&ctx).unwrap();
    let sys = commutator_system(&solved.symbolic);
    let preferred: BTreeSet<Sym> = solved.table.symbol("y3").into_iter().collect();
    let solver = Solver::new(solved.table.symbols().collect(), preferred);
    for seed in [3u64, 11] {
        let mut eqs = sys.equations.clone();
        shuffle(&mut eqs, seed);
        let s = solver.solve(&eqs).unwrap();
        assert_eq!(s.values, solved.solution.values);
        assert_eq!(s.free, solved.solution.free);
    }
}

#[test]
fn char_poly_of_known_matrices() {
    let p = char_poly(&[vec![2, 1], vec![1, 2]]);
    assert_eq!(p, [1, -4, 3].map(BigInt::from));
    let companion = vec![vec![0, 0, -6], vec![1, 0, 11], vec![0, 1, -6]];
    assert_eq!(char_poly(&companion), [1, 6, -11, 6].map(BigInt::from));
    assert!(!is_squarefree(&char_poly(&[vec![1, 0], vec![0, 1]])));
}

#[test]
fn first_chern_matches_the_recursion_in_every_type() {
    for preset in ["A2", "B2", "G2", "D4"] {
        for w in all_words(preset, 4) {
            let n = w.len();
            for i in 1..=n {
                let c = bsqh::cohomology::first_chern_coeffs(&w)[i - 1];
                assert_eq!(c, deg_oracle(&w, &CurveClass::unit(n, i)), "{preset} {w}: coefficient {i}");
            }
        }
    }
}
