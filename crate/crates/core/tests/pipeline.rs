//! Bundled data against the built-in catalog, and the α-induction pipeline
//! on every bundled algebra.

use std::path::{Path, PathBuf};

use ctps::alpha::{internal_end, simple_current, verify_algebra, AlgebraObject, CouplingMatrix, Induction, Sign};
use ctps::bundle::{read_algebra, read_category, read_matrix, same_model, write_algebra, write_category};
use ctps::catalog;
use ctps::ctps::{build_ctps, Extension};
use ctps::modular::{check_modular_invariant, compute_st, enumerate_commutant};
use ctps::qsystem::{lr_qsystem, validate_qsystem};
use ctps::CategoryModel;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn bundled() -> Vec<(&'static str, CategoryModel)> {
    vec![
        ("trivial.cat", catalog::trivial().unwrap()),
        ("fib.cat", catalog::fibonacci().unwrap()),
        ("ising.cat", catalog::ising().unwrap()),
        ("su2k4.cat", catalog::su2(4).unwrap()),
        ("z2.cat", catalog::pointed_cyclic(2, 0).unwrap()),
        ("z4.cat", catalog::pointed_cyclic(4, 1).unwrap()),
    ]
}

/// `(category file, algebra file, in-memory algebra)`.
fn algebras() -> Vec<(&'static str, &'static str, AlgebraObject)> {
    let su = catalog::su2(4).unwrap();
    let z4 = catalog::pointed_cyclic(4, 1).unwrap();
    let fib = catalog::fibonacci().unwrap();
    vec![
        ("su2k4.cat", "z2.alg", simple_current(&su, 4).unwrap()),
        ("z4.cat", "z4.alg", simple_current(&z4, 2).unwrap()),
        ("fib.cat", "fib_end.alg", internal_end(&fib, 1).unwrap()),
    ]
}

#[test]
fn bundled_categories_match_catalog() {
    for (file, model) in bundled() {
        let read = read_category(&data(file)).unwrap();
        assert!(same_model(&read, &model), "{file}");
    }
}

#[test]
fn category_bundles_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (file, model) in bundled() {
        let path = dir.path().join(file);
        write_category(&path, &model, &["round trip"]).unwrap();
        assert!(same_model(&read_category(&path).unwrap(), &model), "{file}");
        let again = dir.path().join("again.cat");
        write_category(&again, &read_category(&path).unwrap(), &["round trip"]).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap(), "{file}");
    }
}

#[test]
fn algebra_bundles_match_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (cat, file, alg) in algebras() {
        let model = read_category(&data(cat)).unwrap();
        let read = read_algebra(&data(file), &model).unwrap();
        assert_eq!(read.q.theta, alg.q.theta, "{file}");
        for (a, b) in read.mult_entries(&model).iter().zip(alg.mult_entries(&model)) {
            assert_eq!((a.0, a.1, a.2, a.3), (b.0, b.1, b.2, b.3));
            assert!((a.4 - b.4).norm() < 1e-15, "{file}");
        }
        let rep = verify_algebra(&model, &read, 1e-9).unwrap();
        assert!(rep.passed, "{file}: {rep:?}");
        let path = dir.path().join(file);
        write_algebra(&path, &model, &read, &["round trip"]).unwrap();
        assert_eq!(read_algebra(&path, &model).unwrap().q.w1, read.q.w1);
    }
}

#[test]
fn algebra_bundle_rejects_other_category() {
    let fib = read_category(&data("fib.cat")).unwrap();
    assert!(read_algebra(&data("z2.alg"), &fib).is_err());
}

#[test]
fn bundled_matrices_are_invariants() {
    let su = read_category(&data("su2k4.cat")).unwrap();
    let st = compute_st(&su).unwrap().unwrap();
    let r = check_modular_invariant(&read_matrix(&data("d4.mat")).unwrap(), &st);
    assert!(r.zs < 1e-9 && r.zt < 1e-9);
    let z = read_matrix(&data("fib_identity.mat")).unwrap();
    assert_eq!(z, CouplingMatrix::identity(2));
}

#[test]
fn induced_coupling_matrices_are_enumerated() {
    for (cat, file, _) in algebras() {
        let model = read_category(&data(cat)).unwrap();
        let alg = read_algebra(&data(file), &model).unwrap();
        let z = Induction::new(&model, &alg).unwrap().coupling_matrix().unwrap();
        let st = compute_st(&model).unwrap().unwrap();
        let all = enumerate_commutant(&st, 3).unwrap();
        assert!(all.contains(&z), "{file}:\n{z}");
    }
    for (_, model) in bundled().into_iter().filter(|(f, _)| *f != "z2.cat") {
        let alg = AlgebraObject::trivial(&model).unwrap();
        let z = Induction::new(&model, &alg).unwrap().coupling_matrix().unwrap();
        assert_eq!(z, CouplingMatrix::identity(model.rank()), "{}", model.name);
    }
}

#[test]
fn z4_fermion_gives_charge_conjugation() {
    let z4 = read_category(&data("z4.cat")).unwrap();
    let alg = read_algebra(&data("z4.alg"), &z4).unwrap();
    let z = Induction::new(&z4, &alg).unwrap().coupling_matrix().unwrap();
    let mut want = CouplingMatrix { z: vec![vec![0; 4]; 4] };
    for a in 0..4 {
        want.z[a][(4 - a) % 4] = 1;
    }
    assert_eq!(z, want);
}

#[test]
fn induction_preserves_fusion_rules() {
    for (cat, file, _) in algebras() {
        let model = read_category(&data(cat)).unwrap();
        let alg = read_algebra(&data(file), &model).unwrap();
        let ind = Induction::new(&model, &alg).unwrap();
        let n = model.rank();
        for l in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let want = model.fusion.n(l, m, v);
                    let got = ind.hom((&[v], Sign::Plus), (&[l, m], Sign::Plus)).unwrap().len();
                    assert!(got >= want, "{file}: Hom(α_{v}, α_{l}α_{m}) = {got} < {want}");
                }
            }
        }
    }
    let fib = catalog::fibonacci().unwrap();
    let alg = AlgebraObject::trivial(&fib).unwrap();
    let ind = Induction::new(&fib, &alg).unwrap();
    for l in 0..2 {
        for m in 0..2 {
            for v in 0..2 {
                for sign in [Sign::Plus, Sign::Minus] {
                    let got = ind.hom((&[v], sign), (&[l, m], sign)).unwrap().len();
                    assert_eq!(got, fib.fusion.n(l, m, v));
                }
            }
        }
    }
}

#[test]
fn lifted_trees_are_bimodule_maps() {
    let su = catalog::su2(4).unwrap();
    let alg = simple_current(&su, 4).unwrap();
    let ind = Induction::new(&su, &alg).unwrap();
    for l in 0..5 {
        for m in 0..5 {
            for v in su.fusion.channels(l, m).collect::<Vec<_>>() {
                for sign in [Sign::Plus, Sign::Minus] {
                    let r = ind.e2_residual(l, m, v, sign).unwrap();
                    assert!(r < 1e-9, "({l},{m},{v},{sign}): {r:.3e}");
                }
            }
        }
    }
}

#[test]
fn degenerate_braiding_skips_modular_checks() {
    let z2 = read_category(&data("z2.cat")).unwrap();
    assert!(compute_st(&z2).unwrap().is_none());
    let lr = lr_qsystem(&z2).unwrap();
    assert!(validate_qsystem(&lr.product, &lr.q, 1e-9).unwrap().passed);
    let (_, rep) = build_ctps(&z2, None, Extension::Trivial, Extension::Trivial, 1e-9).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!(rep.modular.is_none());
    assert!((rep.d_theta - z2.fusion.global_dim_sq()).abs() < 1e-12);
}

#[test]
fn mixed_extensions_are_unsupported() {
    let fib = catalog::fibonacci().unwrap();
    let alg = AlgebraObject::trivial(&fib).unwrap();
    assert!(build_ctps(&fib, Some(&alg), Extension::Trivial, Extension::Minus, 1e-9).is_err());
    assert!(build_ctps(&fib, None, Extension::Plus, Extension::Minus, 1e-9).is_err());
}

#[test]
fn lr_matches_trivial_algebra_pipeline() {
    let ising = catalog::ising().unwrap();
    let lr = lr_qsystem(&ising).unwrap();
    let (ctps, rep) = build_ctps(&ising, None, Extension::Trivial, Extension::Trivial, 1e-9).unwrap();
    assert!(rep.passed);
    assert!((rep.d_theta - lr.q.theta.d_theta).abs() < 1e-12);
    assert_eq!(ctps.q.theta.multiplicities, lr.q.theta.multiplicities);
}
