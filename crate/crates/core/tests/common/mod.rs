#![allow(dead_code)]

use std::path::Path;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topos_core::{
    build_poset, load_problem, ClopenSubobject, Closure, Complex64, Context, ContextId,
    ContextPoset, Operator, Problem, StateVector, Tolerances,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn problem(name: &str) -> Problem {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    load_problem(path).unwrap()
}

pub fn poset_of(name: &str) -> ContextPoset {
    problem(name).poset(Closure::Generated).unwrap()
}

pub fn p(i: usize) -> Operator {
    Operator::basis_projector(4, i)
}

/// Sum of standard-basis projectors `P_{i+1}` for the listed zero-based `i`.
pub fn ps(idx: &[usize]) -> Operator {
    idx.iter().fold(Operator::zeros(4), |acc, &i| &acc + &p(i))
}

pub fn e(i: usize) -> StateVector {
    let mut v = StateVector::zeros(4);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

pub fn standard_poset() -> ContextPoset {
    let atoms = (0..4).map(p).collect();
    let v = Context::from_atoms(atoms, &tol()).unwrap().with_label("b0");
    build_poset(&[v], Closure::Generated, &tol()).unwrap()
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    // Box-Muller; quality is irrelevant here.
    let u: f64 = rng.gen_range(1e-12..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u.ln()).sqrt();
    Complex64::new(r * v.cos(), r * v.sin())
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    m.qr().q()
}

pub fn random_vector(rng: &mut impl Rng, support: &[usize]) -> StateVector {
    let mut v = StateVector::zeros(4);
    for &i in support {
        v[i] = gaussian(rng);
    }
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

pub fn random_support(rng: &mut impl Rng) -> Vec<usize> {
    let mut idx = vec![0, 1, 2, 3];
    idx.shuffle(rng);
    let k = rng.gen_range(1..=4);
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

/// Random projector of the given rank whose range is spanned by vectors with
/// random coordinate supports, so that it often meets the standard contexts
/// non-generically.
pub fn random_projector(rng: &mut impl Rng, rank: usize) -> Operator {
    loop {
        let cols: Vec<StateVector> = (0..rank)
            .map(|_| {
                let support = random_support(rng);
                random_vector(rng, &support)
            })
            .collect();
        let m = DMatrix::from_columns(&cols);
        let qr = m.clone().qr();
        let r = qr.r();
        if (0..rank).any(|i| r[(i, i)].norm() < 1e-3) {
            continue;
        }
        let q = qr.q();
        return Operator::from_matrix(&q * q.adjoint()).unwrap();
    }
}

/// `U diag(d) U†` with eigenvalues drawn from a small integer set, so that
/// degenerate spectra occur. Returns the operator and its distinct
/// eigenvalues, ascending.
pub fn random_selfadjoint(rng: &mut impl Rng) -> (Operator, Vec<f64>) {
    let d: Vec<f64> = (0..4)
        .map(|_| rng.gen_range(-3i32..=3) as f64 * 0.5)
        .collect();
    let u = if rng.gen_bool(0.5) {
        random_unitary(rng, 4)
    } else {
        // A unitary acting on a random pair of coordinates only.
        let mut u = DMatrix::identity(4, 4);
        let mut idx = [0, 1, 2, 3];
        idx.shuffle(rng);
        let w = random_unitary(rng, 2);
        for a in 0..2 {
            for b in 0..2 {
                u[(idx[a], idx[b])] = w[(a, b)];
            }
        }
        u
    };
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        d.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let m = &u * diag * u.adjoint();
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut spectrum = d;
    spectrum.sort_by(|x, y| x.partial_cmp(y).unwrap());
    spectrum.dedup();
    (Operator::from_matrix(m).unwrap(), spectrum)
}

/// `B ≥ 0`, via a Cholesky factorisation of `B + 1e-9·1`.
pub fn psd(b: &Operator) -> bool {
    let shifted =
        b.matrix() + DMatrix::<Complex64>::identity(b.dim(), b.dim()) * Complex64::new(1e-9, 0.0);
    shifted.cholesky().is_some()
}

/// `sp(B) ⊆ S` for a normal `B`: `Π_{s∈S} (B − s) = 0`.
pub fn spectrum_within(b: &Operator, s: &[f64]) -> bool {
    let one = Operator::identity(b.dim());
    let prod = s
        .iter()
        .fold(one.clone(), |acc, &x| &acc * &(b - &one.scale(x)));
    prod.frobenius_norm() <= 1e-6
}

/// `E^A_r` by Lagrange interpolation over the known distinct spectrum:
/// `Σ_{λ_k ≤ r} Π_{j≠k} (A − λ_j)/(λ_k − λ_j)`.
pub fn spectral_projector(a: &Operator, spectrum: &[f64], r: f64) -> Operator {
    let one = Operator::identity(a.dim());
    let mut acc = Operator::zeros(a.dim());
    for (k, &lk) in spectrum.iter().enumerate() {
        if lk > r {
            continue;
        }
        let mut term = one.clone();
        for (j, &lj) in spectrum.iter().enumerate() {
            if j != k {
                term = (&term * &(a - &one.scale(lj))).scale(1.0 / (lk - lj));
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// `P ≤ R` for projectors via `‖RP − P‖ ≤ 1e-7`.
pub fn below(p: &Operator, r: &Operator) -> bool {
    (r * p).distance(p) <= 1e-7
}

/// Every element of `P(V)` as an atom-subset sum, with its mask.
pub fn all_projections(v: &Context) -> Vec<(u64, Operator)> {
    let k = v.len();
    (0..1u64 << k)
        .map(|mask| {
            let op = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .fold(Operator::zeros(v.dim()), |acc, i| &acc + &v.atoms()[i]);
            (mask, op)
        })
        .collect()
}

/// Brute-force `δ^o(P)_V`: the element of `P(V)` above `P` lying below every
/// other such element.
pub fn brute_outer(p: &Operator, v: &Context) -> Operator {
    let above: Vec<Operator> = all_projections(v)
        .into_iter()
        .map(|(_, r)| r)
        .filter(|r| below(p, r))
        .collect();
    above
        .iter()
        .find(|r| above.iter().all(|s| below(r, s)))
        .expect("a least upper element exists")
        .clone()
}

/// Brute-force `δ^i(P)_V`: the largest element of `P(V)` below `P`.
pub fn brute_inner(p: &Operator, v: &Context) -> Operator {
    let under: Vec<Operator> = all_projections(v)
        .into_iter()
        .map(|(_, r)| r)
        .filter(|r| below(r, p))
        .collect();
    under
        .iter()
        .find(|r| under.iter().all(|s| below(s, r)))
        .expect("a greatest lower element exists")
        .clone()
}

/// Stieltjes sum `Σ r_i (F(r_i) − F(r_{i−1}))` of a projector-valued family
/// sampled at the points of `spectrum`.
pub fn stieltjes(dim: usize, spectrum: &[f64], family: impl Fn(f64) -> Operator) -> Operator {
    let mut acc = Operator::zeros(dim);
    let mut prev = Operator::zeros(dim);
    for &r in spectrum {
        let f = family(r);
        acc = &acc + &(&f - &prev).scale(r);
        prev = f;
    }
    acc
}

/// Oracle for `δ^o(A)_V = ∫ λ d(δ^i(E_λ)_V)`.
pub fn oracle_outer_selfadjoint(a: &Operator, spectrum: &[f64], v: &Context) -> Operator {
    stieltjes(a.dim(), spectrum, |r| {
        brute_inner(&spectral_projector(a, spectrum, r), v)
    })
}

/// Oracle for `δ^i(A)_V = ∫ λ d(⋀_{μ>λ} δ^o(E_μ)_V)`, evaluating the meet at
/// a point just to the right of each grid value.
pub fn oracle_inner_selfadjoint(a: &Operator, spectrum: &[f64], v: &Context) -> Operator {
    stieltjes(a.dim(), spectrum, |r| {
        brute_outer(&spectral_projector(a, spectrum, r + 1e-7), v)
    })
}

/// A random subobject: contexts are visited from finest to coarsest, each
/// given random characters plus the restrictions of everything above.
pub fn random_subobject(rng: &mut impl Rng, poset: &ContextPoset) -> ClopenSubobject {
    let mut order: Vec<ContextId> = poset.ids().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(poset.context(v).len()));
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); poset.len()];
    for &v in &order {
        let k = poset.context(v).len();
        let density = rng.gen_range(0.0..0.6);
        let mut set: Vec<usize> = (0..k).filter(|_| rng.gen_bool(density)).collect();
        for (sub, sup) in poset.inclusions() {
            if sub == v && sup != v {
                let map = poset.restriction_map(sup, sub).unwrap();
                set.extend(sets[sup.0].iter().map(|&i| map[i]));
            }
        }
        set.sort_unstable();
        set.dedup();
        sets[v.0] = set;
    }
    ClopenSubobject::from_sets(&sets)
}
