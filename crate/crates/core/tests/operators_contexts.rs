mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use topos_core::{
    build_poset, context_from_projectors, intersect_contexts, is_subcontext, projector_leq,
    spectral_decomposition, spectral_order_leq, Closure, Complex64, Context, Intersection,
    Operator, StateVector,
};

fn diag_pool() -> Vec<Vec<f64>> {
    let vals = [-1.0, 0.0, 1.0];
    let mut out = Vec::new();
    for a in vals {
        for b in vals {
            for c in vals {
                out.push(vec![a, b, c, 0.5]);
            }
        }
    }
    out
}

fn conjugate(u: &nalgebra::DMatrix<Complex64>, d: &[f64]) -> Operator {
    let m = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        d.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let a = u * m * u.adjoint();
    Operator::from_matrix((&a + a.adjoint()) * Complex64::new(0.5, 0.0)).unwrap()
}

/// For commuting operators the spectral order is the entrywise order of the
/// common eigenvalues.
#[test]
fn spectral_order_on_commuting_operators() {
    let mut rng = rng(1);
    let u = random_unitary(&mut rng, 4);
    let pool = diag_pool();
    let ops: Vec<Operator> = pool.iter().map(|d| conjugate(&u, d)).collect();
    let t = tol();
    let mut related = 0;
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate() {
            let oracle = pool[i].iter().zip(&pool[j]).all(|(x, y)| x <= y);
            let got = spectral_order_leq(a, b, &t).unwrap();
            assert_eq!(got, oracle, "{:?} vs {:?}", pool[i], pool[j]);
            related += got as usize;
        }
    }
    assert!(related > ops.len());
}

#[test]
fn spectral_order_is_a_partial_order() {
    let mut rng = rng(2);
    let u = random_unitary(&mut rng, 4);
    let v = random_unitary(&mut rng, 4);
    let pool = diag_pool();
    // Mix two eigenbases so that non-commuting pairs also occur.
    let ops: Vec<Operator> = pool
        .iter()
        .enumerate()
        .map(|(k, d)| conjugate(if k % 2 == 0 { &u } else { &v }, d))
        .collect();
    let t = tol();
    let n = ops.len();
    let rel: Vec<bool> = (0..n * n)
        .map(|k| spectral_order_leq(&ops[k / n], &ops[k % n], &t).unwrap())
        .collect();
    for i in 0..n {
        assert!(rel[i * n + i]);
        for j in 0..n {
            if rel[i * n + j] && rel[j * n + i] {
                assert!(ops[i].approx_eq(&ops[j], 1e-7));
            }
            for k in 0..n {
                if rel[i * n + j] && rel[j * n + k] {
                    assert!(rel[i * n + k]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_order_implies_operator_order(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (a, _) = random_selfadjoint(&mut rng);
        let (b, _) = random_selfadjoint(&mut rng);
        let t = tol();
        if spectral_order_leq(&a, &b, &t).unwrap() {
            prop_assert!(psd(&(&b - &a)));
        }
        let shifted = &a + &Operator::identity(4).scale(rng.gen_range(0.0..2.0));
        prop_assert!(spectral_order_leq(&a, &shifted, &t).unwrap());
    }

    #[test]
    fn spectral_order_agrees_with_projector_order(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let r1 = rng.gen_range(1..=3);
        let r2 = rng.gen_range(1..=3);
        let p = random_projector(&mut rng, r1);
        let q = if rng.gen_bool(0.5) {
            random_projector(&mut rng, r2)
        } else {
            // A projector above p: p plus a piece of its complement.
            let c = &Operator::identity(4) - &p;
            let w = random_vector(&mut rng, &[0, 1, 2, 3]);
            let cw: StateVector = c.matrix() * &w;
            let n = cw.norm();
            &p + &Operator::ket_bra(&(cw / Complex64::new(n, 0.0)))
        };
        let t = tol();
        prop_assert_eq!(spectral_order_leq(&p, &q, &t).unwrap(), projector_leq(&p, &q, &t).unwrap());
        prop_assert_eq!(projector_leq(&p, &q, &t).unwrap(), below(&p, &q));
    }

    #[test]
    fn spectral_family_is_monotone_and_reconstructs(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (a, grid) = random_selfadjoint(&mut rng);
        let t = tol();
        let d = spectral_decomposition(&a, &t).unwrap();
        prop_assert!(d.reconstruct().approx_eq(&a, 1e-8));
        let fam = d.family();
        let cum = fam.cumulative();
        for w in cum.windows(2) {
            prop_assert!(below(&w[0], &w[1]));
        }
        prop_assert!(cum.last().unwrap().approx_eq(&Operator::identity(4), 1e-8));
        prop_assert_eq!(grid.len(), d.eigenvalues().len());
        for (x, y) in grid.iter().zip(d.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-8);
        }
        // Probe below the spectrum, just right of each jump and between jumps.
        let mut probes = vec![grid[0] - 1.0];
        for (i, &r) in grid.iter().enumerate() {
            probes.push(r + 1e-6);
            let next = grid.get(i + 1).copied().unwrap_or(r + 2.0);
            probes.push(0.5 * (r + next));
        }
        for r in probes {
            prop_assert!(fam.at(r).approx_eq(&spectral_projector(&a, &grid, r), 1e-7));
        }
    }
}

fn basis_of(u: &nalgebra::DMatrix<Complex64>) -> Vec<StateVector> {
    (0..u.ncols()).map(|j| u.column(j).into_owned()).collect()
}

/// Every atom of `sub` is a sum of a subset of atoms of `sup`.
fn subset_sum_oracle(sub: &Context, sup: &Context) -> bool {
    let sums = all_projections(sup);
    sub.atoms()
        .iter()
        .all(|a| sums.iter().any(|(_, s)| s.approx_eq(a, 1e-7)))
}

/// Intersection atoms computed from all common atom-subset sums.
fn intersection_oracle(v1: &Context, v2: &Context) -> Vec<Operator> {
    let s2 = all_projections(v2);
    let common: Vec<Operator> = all_projections(v1)
        .into_iter()
        .map(|(_, s)| s)
        .filter(|s| !s.is_zero(1e-7) && s2.iter().any(|(_, r)| r.approx_eq(s, 1e-7)))
        .collect();
    common
        .iter()
        .filter(|c| !common.iter().any(|d| !d.approx_eq(c, 1e-7) && below(d, c)))
        .cloned()
        .collect()
}

fn sharing_bases(rng: &mut impl Rng, shared: usize) -> (Context, Context) {
    let t = tol();
    let u = random_unitary(rng, 4);
    let mut b1 = basis_of(&u);
    let w = random_unitary(rng, 4 - shared);
    // Rotate the unshared vectors of b1 among themselves.
    let rest: Vec<StateVector> = (0..4 - shared)
        .map(|j| {
            (0..4 - shared).fold(StateVector::zeros(4), |acc, k| {
                acc + &b1[shared + k] * w[(k, j)]
            })
        })
        .collect();
    let mut b2 = b1[..shared].to_vec();
    b2.extend(rest);
    b1.rotate_left(1);
    (
        Context::from_basis(&b1, &t).unwrap().with_label("x"),
        Context::from_basis(&b2, &t).unwrap().with_label("y"),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subcontext_matches_subset_sums(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let shared = rng.gen_range(0..=2);
        let (x, y) = sharing_bases(&mut rng, shared);
        let t = tol();
        let poset = build_poset(&[x.clone(), y.clone()], Closure::Complete, &t).unwrap();
        for a in poset.contexts() {
            for b in poset.contexts() {
                prop_assert_eq!(is_subcontext(a, b, &t).unwrap(), subset_sum_oracle(a, b));
            }
        }
    }

    #[test]
    fn intersections_match_subset_sums(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let shared = rng.gen_range(0..=3);
        let (x, y) = sharing_bases(&mut rng, shared);
        let t = tol();
        let oracle = intersection_oracle(&x, &y);
        match intersect_contexts(&x, &y, &t).unwrap() {
            Intersection::Trivial => prop_assert!(oracle.len() <= 1),
            Intersection::Context(c) => {
                prop_assert_eq!(c.len(), oracle.len());
                for a in c.atoms() {
                    prop_assert!(oracle.iter().any(|o| o.approx_eq(a, 1e-7)));
                }
            }
        }
    }

    #[test]
    fn complete_closure_is_intersection_closed(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let shared = rng.gen_range(1..=2);
        let (x, y) = sharing_bases(&mut rng, shared);
        let t = tol();
        let poset = build_poset(&[x, y], Closure::Complete, &t).unwrap();
        for a in poset.contexts() {
            for b in poset.contexts() {
                if let Intersection::Context(c) = intersect_contexts(a, b, &t).unwrap() {
                    prop_assert!(poset.find(&c).is_some());
                }
            }
        }
    }

    #[test]
    fn dedup_ignores_order_and_phases(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = tol();
        let u = random_unitary(&mut rng, 4);
        let b = basis_of(&u);
        let mut shuffled: Vec<StateVector> = b
            .iter()
            .map(|v| v * Complex64::from_polar(1.0, rng.gen_range(0.0..6.3)))
            .collect();
        shuffled.reverse();
        let c1 = Context::from_basis(&b, &t).unwrap();
        let c2 = Context::from_basis(&shuffled, &t).unwrap();
        prop_assert!(c1.same_algebra(&c2, &t));
        let poset = build_poset(&[c1.with_label("a"), c2.with_label("b")], Closure::Generated, &t).unwrap();
        prop_assert_eq!(poset.len(), 11);
    }
}

#[test]
fn restriction_maps_compose_and_are_surjective() {
    let poset = poset_of("two_basis.json");
    for v in poset.ids() {
        for v1 in poset.down_set(v) {
            let outer = poset.restriction_map(v, v1).unwrap();
            let mut hit = vec![false; poset.context(v1).len()];
            for &j in outer {
                hit[j] = true;
            }
            assert!(hit.iter().all(|&h| h));
            for v2 in poset.down_set(v1) {
                let direct = poset.restriction_map(v, v2).unwrap();
                let inner = poset.restriction_map(v1, v2).unwrap();
                let composed: Vec<usize> = outer.iter().map(|&j| inner[j]).collect();
                assert_eq!(direct, composed.as_slice());
            }
        }
    }
}

#[test]
fn projector_generated_contexts() {
    let t = tol();
    // Two commuting rank-2 projectors refine into four atoms.
    let c = context_from_projectors(&[ps(&[0, 1]), ps(&[1, 2])], &t).unwrap();
    assert_eq!(c.len(), 4);
    let c = context_from_projectors(&[ps(&[0, 1])], &t).unwrap();
    assert_eq!(c.ranks(), vec![2, 2]);
}
