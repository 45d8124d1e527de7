//! Modular data `S`, `T` from a braided model, Verlinde fusion rules and
//! modular invariants.

use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::CouplingMatrix;
use crate::category::CategoryModel;
use crate::error::{Error, Result};
use crate::linalg::{c, op_norm, CMatrix, C64};

#[derive(Clone, Debug)]
pub struct ModularPair {
    pub s: CMatrix,
    /// Diagonal of `T`.
    pub t: Vec<C64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularResiduals {
    pub zs: f64,
    pub zt: f64,
}

/// Twist `θ_λ = d(λ)^{-1} Σ_c d(c) tr R^{λλ}_c`.
pub fn twist(model: &CategoryModel, l: usize) -> Result<C64> {
    let mut acc = c(0.0, 0.0);
    for x in model.fusion.channels(l, l) {
        let r = model
            .r_block(l, l, x)
            .ok_or_else(|| Error::Unsupported(format!("{} carries no braiding", model.name)))?;
        acc += r.trace() * model.fusion.d(x);
    }
    Ok(acc / model.fusion.d(l))
}

/// `S_{λμ} = Tr(ε(μ,λ̄)ε(λ̄,μ))/D` and `T_{λλ} = θ_λ`. Returns `None` when
/// `S` is singular (degenerate braiding).
pub fn compute_st(model: &CategoryModel) -> Result<Option<ModularPair>> {
    if !model.is_braided() {
        return Err(Error::Unsupported(format!("{} carries no braiding", model.name)));
    }
    let n = model.rank();
    let big_d = model.fusion.global_dim_sq().sqrt();
    let mut s = CMatrix::zeros(n, n);
    for a in 0..n {
        let a_bar = model.fusion.dual(a);
        for b in 0..n {
            let double = model.compose(&model.braiding(b, a_bar)?, &model.braiding(a_bar, b)?)?;
            s[(a, b)] = model.trace(&double)? / big_d;
        }
    }
    let t = (0..n).map(|l| twist(model, l)).collect::<Result<Vec<_>>>()?;
    let smallest = s
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if smallest < 1e-9 {
        return Ok(None);
    }
    Ok(Some(ModularPair { s, t }))
}

impl ModularPair {
    pub fn t_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.t.clone()))
    }

    /// Residuals of the modular relations: `S` symmetric, `S` unitary,
    /// `S²` a permutation, `(ST)³ ∝ S²`.
    pub fn relation_residuals(&self) -> [f64; 4] {
        let n = self.s.nrows();
        let s = &self.s;
        let sym = op_norm(&(s - s.transpose()));
        let unit = op_norm(&(s.adjoint() * s - CMatrix::identity(n, n)));
        let s2 = s * s;
        let mut perm = 0.0f64;
        for i in 0..n {
            let row: Vec<f64> = (0..n).map(|j| s2[(i, j)].norm()).collect();
            let ones = row.iter().filter(|&&x| (x - 1.0).abs() < 1e-9).count();
            let zeros = row.iter().filter(|&&x| x < 1e-9).count();
            if ones != 1 || zeros != n - 1 {
                perm = 1.0;
            }
        }
        let st = s * self.t_matrix();
        let st3 = &st * &st * &st;
        // Find the proportionality constant from the largest entry of S².
        let (mut bi, mut bj) = (0, 0);
        for i in 0..n {
            for j in 0..n {
                if s2[(i, j)].norm() > s2[(bi, bj)].norm() {
                    bi = i;
                    bj = j;
                }
            }
        }
        let k = st3[(bi, bj)] / s2[(bi, bj)];
        let prop = op_norm(&(st3 - s2 * k));
        [sym, unit, perm, prop]
    }
}

/// `N^ν_{λμ} = Σ_σ S_{λσ} S_{μσ} conj(S_{νσ}) / S_{0σ}`.
pub fn verlinde(st: &ModularPair) -> Vec<Vec<Vec<C64>>> {
    let s = &st.s;
    let n = s.nrows();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..n)
                        .map(|x| {
                            (0..n)
                                .map(|sg| s[(a, sg)] * s[(b, sg)] * s[(x, sg)].conj() / s[(0, sg)])
                                .sum()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Largest deviation between the Verlinde numbers and the model's fusion
/// rules, and whether all of them round to the stored integers.
pub fn verlinde_check(model: &CategoryModel, st: &ModularPair) -> (f64, bool) {
    let v = verlinde(st);
    let n = model.rank();
    let mut worst = 0.0f64;
    let mut exact = true;
    for a in 0..n {
        for b in 0..n {
            for x in 0..n {
                let want = model.fusion.n(a, b, x) as f64;
                let z = v[a][b][x];
                worst = worst.max((z - c(want, 0.0)).norm());
                exact &= z.re.round() == want && z.im.abs() < 0.5;
            }
        }
    }
    (worst, exact)
}

pub fn check_modular_invariant(z: &CouplingMatrix, st: &ModularPair) -> ModularResiduals {
    let zc = z.to_complex();
    let t = st.t_matrix();
    ModularResiduals {
        zs: op_norm(&(&zc * &st.s - &st.s * &zc)),
        zt: op_norm(&(&zc * &t - &t * &zc)),
    }
}

/// All non-negative integer matrices with entries `≤ bound` and `Z₀₀ = 1`
/// commuting with `S` and `T` to within `1e-9`.
pub fn enumerate_commutant(st: &ModularPair, bound: u32) -> Result<Vec<CouplingMatrix>> {
    let n = st.s.nrows();
    // ZT = TZ forces Z_{λμ} = 0 unless θ_λ = θ_μ.
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| (i, j) != (0, 0) && (st.t[i] - st.t[j]).norm() < 1e-9)
        .collect();
    let base = bound as u64 + 1;
    let total = base
        .checked_pow(free.len() as u32)
        .filter(|&t| t <= 200_000_000)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "{} free entries up to {bound} is too many to enumerate",
                free.len()
            ))
        })?;
    let found: Vec<CouplingMatrix> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut z = vec![vec![0u32; n]; n];
            z[0][0] = 1;
            for &(i, j) in &free {
                z[i][j] = (code % base) as u32;
                code /= base;
            }
            let m = CouplingMatrix { z };
            let r = check_modular_invariant(&m, st);
            (r.zs < 1e-9 && r.zt < 1e-9).then_some(m)
        })
        .collect();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn trivial_st() {
        let st = compute_st(&catalog::trivial().unwrap()).unwrap().unwrap();
        assert!((st.s[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((st.t[0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fibonacci_s00() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let st = compute_st(&catalog::fibonacci().unwrap()).unwrap().unwrap();
        assert!((st.s[(0, 0)].re - 1.0 / (1.0 + phi * phi).sqrt()).abs() < 1e-12);
        assert!((st.s[(0, 0)].re - 0.5257).abs() < 1e-4);
    }

    #[test]
    fn modular_relations_hold() {
        for m in [
            catalog::fibonacci().unwrap(),
            catalog::ising().unwrap(),
            catalog::su2(4).unwrap(),
            catalog::pointed_cyclic(4, 1).unwrap(),
        ] {
            let st = compute_st(&m).unwrap().unwrap();
            for r in st.relation_residuals() {
                assert!(r < 1e-9, "{}: {:?}", m.name, st.relation_residuals());
            }
            let (dev, exact) = verlinde_check(&m, &st);
            assert!(exact && dev < 1e-9, "{}", m.name);
        }
    }

    #[test]
    fn symmetric_z2_is_degenerate() {
        assert!(compute_st(&catalog::pointed_cyclic(2, 0).unwrap()).unwrap().is_none());
    }

    #[test]
    fn ising_twists() {
        let st = compute_st(&catalog::ising().unwrap()).unwrap().unwrap();
        let want = [
            c(1.0, 0.0),
            C64::from_polar(1.0, std::f64::consts::PI / 8.0),
            c(-1.0, 0.0),
        ];
        for (a, b) in st.t.iter().zip(want) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn identity_is_invariant_and_random_is_not() {
        let st = compute_st(&catalog::su2(4).unwrap()).unwrap().unwrap();
        let r = check_modular_invariant(&CouplingMatrix::identity(5), &st);
        assert!(r.zs < 1e-12 && r.zt < 1e-12);
        let mut z = CouplingMatrix::identity(5);
        z.z[0][2] = 1;
        z.z[3][1] = 1;
        let r = check_modular_invariant(&z, &st);
        assert!(r.zs.max(r.zt) > 0.1);
    }

    #[test]
    fn small_commutants() {
        let fib = compute_st(&catalog::fibonacci().unwrap()).unwrap().unwrap();
        assert_eq!(enumerate_commutant(&fib, 3).unwrap(), vec![CouplingMatrix::identity(2)]);
        let ising = compute_st(&catalog::ising().unwrap()).unwrap().unwrap();
        assert_eq!(
            enumerate_commutant(&ising, 3).unwrap(),
            vec![CouplingMatrix::identity(3)]
        );
        let su = compute_st(&catalog::su2(4).unwrap()).unwrap().unwrap();
        let all = enumerate_commutant(&su, 3).unwrap();
        let d4 = CouplingMatrix {
            z: vec![
                vec![1, 0, 0, 0, 1],
                vec![0, 0, 0, 0, 0],
                vec![0, 0, 2, 0, 0],
                vec![0, 0, 0, 0, 0],
                vec![1, 0, 0, 0, 1],
            ],
        };
        assert!(all.contains(&d4));
        assert!(all.contains(&CouplingMatrix::identity(5)));
    }
}
