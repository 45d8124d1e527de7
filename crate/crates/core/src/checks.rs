//! Coherence checks for a category model: pentagon, hexagons, unitarity of
//! the F/R blocks and the conjugate equations.

use std::collections::HashMap;

use serde::Serialize;

use crate::category::CategoryModel;
use crate::error::Result;
use crate::fusion::{validate_fusion, Label, ValidationReport};
use crate::linalg::{identity, max_abs, zeros, CMatrix};
use crate::morphism::SumObject;

#[derive(Clone, Debug, Serialize)]
pub struct CategoryReport {
    pub fusion: ValidationReport,
    pub pentagon: f64,
    pub f_unitarity: f64,
    /// `None` when the model is not braided.
    pub hexagon: Option<f64>,
    pub r_unitarity: Option<f64>,
    pub conjugate: f64,
}

impl CategoryReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.fusion.is_valid()
            && self.pentagon < tol
            && self.f_unitarity < tol
            && self.hexagon.is_none_or(|h| h < tol)
            && self.r_unitarity.is_none_or(|r| r < tol)
            && self.conjugate < tol
    }
}

pub fn verify_category(model: &CategoryModel, tol: f64) -> Result<CategoryReport> {
    let fusion = validate_fusion(&model.fusion, tol)?;
    let f_unitarity = model
        .f_blocks()
        .map(|(_, b)| max_abs(&(b.mat.adjoint() * &b.mat - identity(b.mat.nrows()))))
        .fold(0.0, f64::max);
    let pentagon = pentagon_residual(model);
    let (hexagon, r_unitarity) = if model.is_braided() {
        let n = model.rank();
        let mut ru = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in model.fusion.channels(a, b) {
                    let r = model.r_block(a, b, c).unwrap();
                    ru = ru.max(max_abs(&(r.adjoint() * r - identity(r.ncols()))));
                }
            }
        }
        (Some(hexagon_residual(model)?), Some(ru))
    } else {
        (None, None)
    };
    let mut conjugate = 0.0f64;
    for l in 0..model.rank() {
        let (e1, e2) = model.conjugate_residuals(l)?;
        conjugate = conjugate.max(e1).max(e2);
    }
    Ok(CategoryReport {
        fusion,
        pentagon,
        f_unitarity,
        hexagon,
        r_unitarity,
        conjugate,
    })
}

type Vertex = (Label, Label, Label, usize); // (in1, in2, out, mult)
type Basis4 = Vec<Vec<Vertex>>;

/// Max entry of the difference between the two F-move paths from
/// `((ab)c)d` to `a(b(cd))` over all labels.
pub fn pentagon_residual(model: &CategoryModel) -> f64 {
    let n = model.rank();
    let mut worst = 0.0f64;
    for a in 1..n {
        for b in 1..n {
            for c in 1..n {
                for d in 1..n {
                    for x in 0..n {
                        worst = worst.max(pentagon_at(model, a, b, c, d, x));
                    }
                }
            }
        }
    }
    worst
}

fn vertices(model: &CategoryModel, a: Label, b: Label, out: Label) -> Vec<Vertex> {
    (0..model.fusion.n(a, b, out)).map(|m| (a, b, out, m)).collect()
}

fn index_of(basis: &Basis4) -> HashMap<Vec<Vertex>, usize> {
    basis.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect()
}

fn pentagon_at(model: &CategoryModel, a: Label, b: Label, c: Label, d: Label, x: Label) -> f64 {
    let n = model.rank();
    // Vertex lists, in the order the moves address them.
    // S1 ((ab)c)d: [ab→e, ec→g, gd→x]
    let mut s1 = Vec::new();
    // S2 (ab)(cd): [ab→e, cd→l, el→x]
    let mut s2 = Vec::new();
    // S3 a(b(cd)): [cd→l, bl→k, ak→x]
    let mut s3 = Vec::new();
    // S4 (a(bc))d: [bc→h, ah→g, gd→x]
    let mut s4 = Vec::new();
    // S5 a((bc)d): [bc→h, hd→k, ak→x]
    let mut s5 = Vec::new();
    for e in 0..n {
        for g in 0..n {
            for v1 in vertices(model, a, b, e) {
                for v2 in vertices(model, e, c, g) {
                    for v3 in vertices(model, g, d, x) {
                        s1.push(vec![v1, v2, v3]);
                    }
                }
            }
        }
        for l in 0..n {
            for v1 in vertices(model, a, b, e) {
                for v2 in vertices(model, c, d, l) {
                    for v3 in vertices(model, e, l, x) {
                        s2.push(vec![v1, v2, v3]);
                    }
                }
            }
        }
    }
    for l in 0..n {
        for k in 0..n {
            for v1 in vertices(model, c, d, l) {
                for v2 in vertices(model, b, l, k) {
                    for v3 in vertices(model, a, k, x) {
                        s3.push(vec![v1, v2, v3]);
                    }
                }
            }
        }
    }
    for h in 0..n {
        for g in 0..n {
            for v1 in vertices(model, b, c, h) {
                for v2 in vertices(model, a, h, g) {
                    for v3 in vertices(model, g, d, x) {
                        s4.push(vec![v1, v2, v3]);
                    }
                }
            }
        }
        for k in 0..n {
            for v1 in vertices(model, b, c, h) {
                for v2 in vertices(model, h, d, k) {
                    for v3 in vertices(model, a, k, x) {
                        s5.push(vec![v1, v2, v3]);
                    }
                }
            }
        }
    }
    if s1.is_empty() {
        return 0.0;
    }
    // S1 -> S2: F^{ecd}_x on (ec→g)(gd→x) gives (cd→l)(el→x).
    let m12 = f_move_relabel(model, &s1, &s2, 1, 2, |t, (q, r, f, kappa), (p, ff, dd, lambda)| {
        vec![t[0], (q, r, f, kappa), (p, ff, dd, lambda)]
    });
    // S2 -> S3: F^{abl}_x on (ab→e)(el→x) gives (bl→k)(ak→x); (cd→l) stays.
    let m23 = f_move_relabel(model, &s2, &s3, 0, 2, |t, inner, outer| vec![t[1], inner, outer]);
    // S1 -> S4: F^{abc}_g on (ab→e)(ec→g) gives (bc→h)(ah→g).
    let m14 = f_move_relabel(model, &s1, &s4, 0, 1, |t, inner, outer| vec![inner, outer, t[2]]);
    // S4 -> S5: F^{ahd}_x on (ah→g)(gd→x) gives (hd→k)(ak→x).
    let m45 = f_move_relabel(model, &s4, &s5, 1, 2, |t, inner, outer| vec![t[0], inner, outer]);
    // S5 -> S3: F^{bcd}_k on (bc→h)(hd→k) gives (cd→l)(bl→k).
    let m53 = f_move_relabel(model, &s5, &s3, 0, 1, |t, inner, outer| vec![inner, outer, t[2]]);
    let p1 = &m12 * &m23;
    let p2 = &m14 * &m45 * &m53;
    max_abs(&(p1 - p2))
}

fn f_move_relabel<G>(model: &CategoryModel, from: &Basis4, to: &Basis4, i: usize, j: usize, build: G) -> CMatrix
where
    G: Fn(&Vec<Vertex>, Vertex, Vertex) -> Vec<Vertex>,
{
    let idx = index_of(to);
    let mut m = zeros(from.len(), to.len());
    for (row, t) in from.iter().enumerate() {
        let (p, q, e, mu) = t[i];
        let (_, r, d, nu) = t[j];
        let blk = model.f_block(p, q, r, d).expect("admissible F block");
        let li = blk.left_index(e, mu, nu);
        for (col, &(f, kappa, lambda)) in blk.right.iter().enumerate() {
            let nt = build(t, (q, r, f, kappa), (p, f, d, lambda));
            let k = *idx.get(&nt).expect("F move lands in target basis");
            m[(row, k)] += blk.mat[(li, col)];
        }
    }
    m
}

/// Max deviation in both hexagon identities over all label triples,
/// comparing crossings of composite words (built from the engine) with the
/// direct action of R on a fused charge.
pub fn hexagon_residual(model: &CategoryModel) -> Result<f64> {
    let n = model.rank();
    let fus = &model.fusion;
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // ε(a, bc) = (1_b × ε(a,c))(ε(a,b) × 1_c)
                let lhs = model.compose(
                    &model.tensor(&model.identity(&SumObject::simple(b)), &model.braiding(a, c)?),
                    &model.tensor(&model.braiding(a, b)?, &model.identity(&SumObject::simple(c))),
                )?;
                // ε(ab, c) = (ε(a,c) × 1_b)(1_a × ε(b,c))
                let lhs2 = model.compose(
                    &model.tensor(&model.braiding(a, c)?, &model.identity(&SumObject::simple(b))),
                    &model.tensor(&model.identity(&SumObject::simple(a)), &model.braiding(b, c)?),
                )?;
                let src = model.word_basis(&[a, b, c]);
                let tgt1 = model.word_basis(&[b, c, a]);
                let tgt2 = model.word_basis(&[c, a, b]);
                for d in 0..n {
                    let dim = src.dim(d);
                    if dim == 0 {
                        continue;
                    }
                    // Direct route 1: F^{abc}_d to (bc→f)(af→d), braid a with f.
                    let mut rhs = zeros(tgt1.dim(d), dim);
                    let blk = model.f_block(a, b, c, d).unwrap();
                    for (col, t) in src.trees[d].iter().enumerate() {
                        let li = blk.left_index(t.labels[1], t.mults[0], t.mults[1]);
                        for (j, &(f, kappa, lambda)) in blk.right.iter().enumerate() {
                            let r = model.r_block(a, f, d).unwrap();
                            for lp in 0..fus.n(f, a, d) {
                                let out = crate::category::Tree {
                                    labels: vec![b, f, d],
                                    mults: vec![kappa, lp],
                                };
                                rhs[(tgt1.position(d, &out), col)] += blk.mat[(li, j)] * r[(lp, lambda)];
                            }
                        }
                    }
                    worst = worst.max(max_abs(&(&lhs.blocks[d] - rhs)));

                    // Direct route 2: braid the fused charge e of (ab→e) with c,
                    // giving the right tree (ab→e)(ce→d) of [c,a,b]; back to
                    // canonical with the adjoint of F^{cab}_d.
                    let mut rhs2 = zeros(tgt2.dim(d), dim);
                    let blk2 = model.f_block(c, a, b, d).unwrap();
                    for (col, t) in src.trees[d].iter().enumerate() {
                        let (e, mu, nu) = (t.labels[1], t.mults[0], t.mults[1]);
                        let r = model.r_block(e, c, d).unwrap();
                        for np in 0..fus.n(c, e, d) {
                            let rj = blk2.right_index(e, mu, np);
                            for (i, &(g, gm, gn)) in blk2.left.iter().enumerate() {
                                let out = crate::category::Tree {
                                    labels: vec![c, g, d],
                                    mults: vec![gm, gn],
                                };
                                rhs2[(tgt2.position(d, &out), col)] += blk2.mat[(i, rj)].conj() * r[(np, nu)];
                            }
                        }
                    }
                    worst = worst.max(max_abs(&(&lhs2.blocks[d] - rhs2)));
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::c;

    #[test]
    fn bundled_models_pass() {
        for m in [
            catalog::trivial().unwrap(),
            catalog::fibonacci().unwrap(),
            catalog::ising().unwrap(),
        ] {
            let rep = verify_category(&m, 1e-9).unwrap();
            assert!(rep.passes(1e-9), "{}: {rep:?}", m.name);
        }
    }

    #[test]
    fn corrupted_f_entry_breaks_pentagon() {
        let mut fib = catalog::fibonacci().unwrap();
        let v = fib.f_block(1, 1, 1, 1).unwrap().mat[(0, 1)];
        fib.set_f_entry((1, 1, 1, 1), 0, 1, v + c(1e-2, 0.0));
        let rep = verify_category(&fib, 1e-9).unwrap();
        assert!(rep.pentagon > 1e-3, "{}", rep.pentagon);
        assert!(!rep.passes(1e-9));
    }

    #[test]
    fn wrong_braiding_breaks_hexagon() {
        let fib = catalog::fibonacci().unwrap();
        let ising = catalog::ising().unwrap();
        // Fibonacci fusion with the braiding phases of a different theory.
        let wrong = CategoryModel::from_fn(
            "fib-wrong-r",
            fib.fusion.clone(),
            |a, b, cc, d, l, r| {
                let blk = fib.f_block(a, b, cc, d).unwrap();
                blk.mat[(blk.left_index(l.0, l.1, l.2), blk.right_index(r.0, r.1, r.2))]
            },
            Some(|a: Label, b: Label, x: Label, _, _| {
                if (a, b) == (1, 1) {
                    ising.r_block(1, 1, x.min(1) * 2).unwrap()[(0, 0)]
                } else {
                    c(1.0, 0.0)
                }
            }),
        )
        .unwrap();
        let rep = verify_category(&wrong, 1e-9).unwrap();
        assert!(rep.pentagon < 1e-12);
        assert!(rep.hexagon.unwrap() > 1e-2);
    }

    #[test]
    fn unbraided_model_skips_hexagon() {
        let fib = catalog::fibonacci().unwrap();
        let plain = CategoryModel::from_fn(
            "plain",
            fib.fusion.clone(),
            |a, b, cc, d, l, r| {
                let blk = fib.f_block(a, b, cc, d).unwrap();
                blk.mat[(blk.left_index(l.0, l.1, l.2), blk.right_index(r.0, r.1, r.2))]
            },
            None::<fn(Label, Label, Label, usize, usize) -> crate::linalg::C64>,
        )
        .unwrap();
        let rep = verify_category(&plain, 1e-9).unwrap();
        assert!(rep.hexagon.is_none() && rep.passes(1e-9));
    }
}
