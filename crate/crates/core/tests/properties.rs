//! Property tests for the intertwiner calculus and the Q-system pipeline.

use std::f64::consts::PI;
use std::sync::OnceLock;

use ctps::alpha::{simple_current, Induction, Sign};
use ctps::catalog;
use ctps::category::Tree;
use ctps::checks::verify_category;
use ctps::ctps::{assemble_w1, build_ctps, build_from_bases, Ctps, CtpsReport, Extension, PhiBases};
use ctps::fusion::compute_qdims;
use ctps::linalg::{c, zeros, CMatrix, C64};
use ctps::qsystem::validate_qsystem;
use ctps::{CategoryModel, Label, Morphism, SumObject};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn models() -> &'static [CategoryModel] {
    static M: OnceLock<Vec<CategoryModel>> = OnceLock::new();
    M.get_or_init(|| {
        vec![
            catalog::fibonacci().unwrap(),
            catalog::ising().unwrap(),
            catalog::su2(4).unwrap(),
        ]
    })
}

fn d4() -> &'static (Ctps, CtpsReport) {
    static D4: OnceLock<(Ctps, CtpsReport)> = OnceLock::new();
    D4.get_or_init(|| {
        let m = catalog::su2(4).unwrap();
        let a = simple_current(&m, 4).unwrap();
        build_ctps(&m, Some(&a), Extension::Plus, Extension::Minus, 1e-9).unwrap()
    })
}

fn word(m: &CategoryModel, raw: &[usize]) -> Vec<Label> {
    raw.iter().map(|&x| x % m.rank()).collect()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_morphism(m: &CategoryModel, rng: &mut ChaCha8Rng, src: &[Label], tgt: &[Label]) -> Morphism {
    let mut f = m.zero(&SumObject::word(src.to_vec()), &SumObject::word(tgt.to_vec()));
    for b in f.blocks.iter_mut() {
        *b = random_matrix(rng, b.nrows(), b.ncols());
    }
    f
}

fn dist(a: &Morphism, b: &Morphism) -> f64 {
    a.sub(b).unwrap().norm()
}

/// Cayley transform of a random Hermitian matrix scaled by `eps`.
fn near_identity_unitary(rng: &mut ChaCha8Rng, n: usize, eps: f64) -> CMatrix {
    let a = random_matrix(rng, n, n);
    let h = (&a + a.adjoint()) * c(eps / 2.0, 0.0);
    let i = CMatrix::identity(n, n);
    let plus = &i + &h * c(0.0, 1.0);
    let minus = &i - &h * c(0.0, 1.0);
    minus.try_inverse().unwrap() * plus
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    random_matrix(rng, n, n).qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interchange_law(k in 0usize..3, x in prop::collection::vec(0usize..5, 1..3), y in prop::collection::vec(0usize..5, 1..3), seed: u64) {
        let m = &models()[k];
        let (x, y) = (word(m, &x), word(m, &y));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_morphism(m, &mut rng, &x, &x);
        let g = random_morphism(m, &mut rng, &y, &y);
        let ix = m.identity(&SumObject::word(x.clone()));
        let iy = m.identity(&SumObject::word(y.clone()));
        let fg = m.tensor(&f, &g);
        let a = m.compose(&m.tensor(&f, &iy), &m.tensor(&ix, &g)).unwrap();
        let b = m.compose(&m.tensor(&ix, &g), &m.tensor(&f, &iy)).unwrap();
        let scale = 1.0 + fg.norm();
        prop_assert!(dist(&a, &fg) < 1e-12 * scale);
        prop_assert!(dist(&b, &fg) < 1e-12 * scale);
        prop_assert!(dist(&m.tensor(&f.adjoint(), &g.adjoint()), &fg.adjoint()) < 1e-12 * scale);
    }

    #[test]
    fn tensor_is_functorial_and_associative(k in 0usize..3, x in prop::collection::vec(0usize..5, 1..3), y in prop::collection::vec(0usize..5, 1..2), seed: u64) {
        let m = &models()[k];
        let (x, y) = (word(m, &x), word(m, &y));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f1, f2) = (random_morphism(m, &mut rng, &x, &x), random_morphism(m, &mut rng, &x, &x));
        let (g1, g2) = (random_morphism(m, &mut rng, &y, &y), random_morphism(m, &mut rng, &y, &y));
        let lhs = m.tensor(&m.compose(&f1, &f2).unwrap(), &m.compose(&g1, &g2).unwrap());
        let rhs = m.compose(&m.tensor(&f1, &g1), &m.tensor(&f2, &g2)).unwrap();
        prop_assert!(dist(&lhs, &rhs) < 1e-11 * (1.0 + lhs.norm()));
        let h = random_morphism(m, &mut rng, &y, &y);
        let left = m.tensor(&m.tensor(&f1, &g1), &h);
        let right = m.tensor(&f1, &m.tensor(&g1, &h));
        prop_assert!(dist(&left, &right) < 1e-11 * (1.0 + left.norm()));
    }

    /// `1_a × g` on `Hom(d, abc)` against `conj(F) G Fᵀ`, with `G` acting on
    /// the `(bc→f)(af→d)` trees.
    #[test]
    fn identity_tensor_matches_f_move(k in 0usize..3, a in 1usize..5, b in 1usize..5, cc in 1usize..5, seed: u64) {
        let m = &models()[k];
        let (a, b, cc) = (a % m.rank(), b % m.rank(), cc % m.rank());
        prop_assume!(a != 0 && b != 0 && cc != 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_morphism(m, &mut rng, &[b, cc], &[b, cc]);
        let out = m.tensor(&m.identity(&SumObject::simple(a)), &g);
        let basis = m.word_basis(&[a, b, cc]);
        for d in 0..m.rank() {
            let Some(blk) = m.f_block(a, b, cc, d) else {
                prop_assert_eq!(out.blocks[d].nrows(), 0);
                continue;
            };
            let n = blk.right.len();
            let mut gm = zeros(n, n);
            for (i, &(f, k1, l1)) in blk.right.iter().enumerate() {
                for (j, &(f2, k2, l2)) in blk.right.iter().enumerate() {
                    if f == f2 && l1 == l2 {
                        gm[(i, j)] = g.blocks[f][(k1, k2)];
                    }
                }
            }
            let oracle = blk.mat.conjugate() * gm * blk.mat.transpose();
            for (i, &(e, mu, nu)) in blk.left.iter().enumerate() {
                let pi = basis.position(d, &Tree { labels: vec![a, e, d], mults: vec![mu, nu] });
                for (j, &(e2, mu2, nu2)) in blk.left.iter().enumerate() {
                    let pj = basis.position(d, &Tree { labels: vec![a, e2, d], mults: vec![mu2, nu2] });
                    prop_assert!((out.blocks[d][(pi, pj)] - oracle[(i, j)]).norm() < 1e-12 * (1.0 + g.norm()));
                }
            }
        }
    }

    #[test]
    fn braiding_is_natural(k in 0usize..3, x in prop::collection::vec(0usize..5, 1..3), y in prop::collection::vec(0usize..5, 1..3), seed: u64) {
        let m = &models()[k];
        let (x, y) = (word(m, &x), word(m, &y));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_morphism(m, &mut rng, &x, &x);
        let g = random_morphism(m, &mut rng, &y, &y);
        let e = m.braid_word(&x, &y).unwrap();
        let lhs = m.compose(&e, &m.tensor(&f, &g)).unwrap();
        let rhs = m.compose(&m.tensor(&g, &f), &e).unwrap();
        prop_assert!(dist(&lhs, &rhs) < 1e-11 * (1.0 + lhs.norm()));
        let ei = m.braid_word_inverse(&x, &y).unwrap();
        let lhs = m.compose(&ei, &m.tensor(&f, &g)).unwrap();
        let rhs = m.compose(&m.tensor(&g, &f), &ei).unwrap();
        prop_assert!(dist(&lhs, &rhs) < 1e-11 * (1.0 + lhs.norm()));
    }

    #[test]
    fn left_inverse_trace_property(k in 0usize..3, r in 1usize..5, t in 1usize..5, seed: u64) {
        let m = &models()[k];
        let (r, t) = (r % m.rank(), t % m.rank());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_morphism(m, &mut rng, &[r], &[t]);
        let tt = random_morphism(m, &mut rng, &[r], &[t]);
        let lhs = m.left_inverse(&[r], &m.compose(&s.adjoint(), &tt).unwrap()).unwrap().scalar().unwrap() * m.fusion.d(r);
        let rhs = m.left_inverse(&[t], &m.compose(&tt, &s.adjoint()).unwrap()).unwrap().scalar().unwrap() * m.fusion.d(t);
        let tr = m.trace(&m.compose(&s.adjoint(), &tt).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-11 * (1.0 + tr.norm()));
        prop_assert!((lhs - tr).norm() < 1e-11 * (1.0 + tr.norm()));
    }

    #[test]
    fn left_inverses_compose(k in 0usize..3, r in 1usize..5, t in 1usize..5, seed: u64) {
        let m = &models()[k];
        let (r, t) = (r % m.rank(), t % m.rank());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_morphism(m, &mut rng, &[r, t], &[r, t]);
        let inner = m.left_inverse(&[r], &x).unwrap();
        let two = m.left_inverse(&[t], &inner).unwrap().scalar().unwrap();
        let want = m.trace(&x).unwrap() / (m.fusion.d(r) * m.fusion.d(t));
        prop_assert!((two - want).norm() < 1e-11 * (1.0 + want.norm()));
        let word = m.left_inverse(&[r, t], &x).unwrap().scalar().unwrap();
        prop_assert!((word - want).norm() < 1e-11 * (1.0 + want.norm()));
    }

    #[test]
    fn pointed_cyclic_is_coherent(n in 1usize..7, p in 0i64..12) {
        prop_assume!((n as i64 * p) % 2 == 0);
        let m = catalog::pointed_cyclic(n, p).unwrap();
        prop_assert!(verify_category(&m, 1e-9).unwrap().passes(1e-9));
    }

    #[test]
    fn su2_quantum_dimensions(k in 1u32..7) {
        let m = catalog::su2(k).unwrap();
        let q = PI / (k as f64 + 2.0);
        let dims = compute_qdims(&m.fusion).unwrap();
        for (j, d) in dims.iter().enumerate() {
            let want = ((j as f64 + 1.0) * q).sin() / q.sin();
            prop_assert!((d - want).abs() < 1e-12);
            prop_assert!((m.fusion.d(j) - want).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn zeta_perturbations_are_rejected(pick: prop::sample::Index, size in 1e-3f64..1e-1, phase in 0.0f64..(2.0 * PI)) {
        let (ctps, rep) = d4();
        prop_assert!(rep.passed);
        let keys: Vec<_> = ctps.zeta.entries.keys().copied().collect();
        let key = keys[pick.index(keys.len())];
        let mut zeta = ctps.zeta.clone();
        *zeta.entries.get_mut(&key).unwrap() += C64::from_polar(size, phase);
        let q = assemble_w1(&ctps.product, ctps.n2, ctps.q.theta.clone(), &zeta);
        prop_assert!(!validate_qsystem(&ctps.product, &q, 1e-9).unwrap().passed);
    }

    #[test]
    fn unitary_perturbations_of_w1_are_rejected(seed: u64) {
        let (ctps, _) = d4();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut q = ctps.q.clone();
        for b in q.w1.blocks.iter_mut() {
            if b.nrows() > 0 {
                *b = near_identity_unitary(&mut rng, b.nrows(), 1e-3) * &*b;
            }
        }
        let r = validate_qsystem(&ctps.product, &q, 1e-9).unwrap();
        prop_assert!(r.isometry < 1e-9);
        prop_assert!(!r.passed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn phi_basis_rotation_is_a_gauge(seed: u64) {
        let m = catalog::su2(4).unwrap();
        let a = simple_current(&m, 4).unwrap();
        let ind = Induction::new(&m, &a).unwrap();
        let mut phi = PhiBases::solve(&ind, Sign::Plus, Sign::Minus).unwrap();
        // φ for (0, 0) is pinned to the identity by the unit.
        let unit = phi.bases[0][0].clone();
        let rng = std::cell::RefCell::new(ChaCha8Rng::seed_from_u64(seed));
        phi.rotate(|k| {
            let u = random_unitary(&mut rng.borrow_mut(), k);
            (0..k).map(|i| (0..k).map(|j| u[(i, j)]).collect()).collect()
        })
        .unwrap();
        phi.bases[0][0] = unit;
        let (_, rep) = build_from_bases(&ind, &phi, Extension::Plus, Extension::Minus, 1e-9).unwrap();
        prop_assert!(rep.passed, "{:?}", rep);
        prop_assert!((rep.d_theta - 12.0).abs() < 1e-9);
    }
}
