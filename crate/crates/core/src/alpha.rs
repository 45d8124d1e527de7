//! Algebra objects `Θ` and α-induction.
//!
//! `α^±_λ` is realised as the `Θ`-`Θ` bimodule with underlying object `Θλ`,
//! left action `m × 1_λ` and right action `(m × 1_λ)(1_Θ × c^±)` where
//! `c⁺ = ε(λ, Θ)` and `c⁻ = ε(Θ, λ)*` move the right-hand `Θ` across `λ`.
//! Words `λ₁…λₖ` stand for the product `α_{λ₁}⋯α_{λₖ}`, identified with
//! `Θλ₁…λₖ`.

use std::fmt;

use nalgebra::linalg::Cholesky;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::category::CategoryModel;
use crate::error::{Error, Result};
use crate::fusion::{Label, UNIT};
use crate::linalg::{c, fix_phase, null_space, zeros, CMatrix, C64};
use crate::morphism::{Morphism, SumObject};
use crate::qsystem::{validate_qsystem, QReport, QSystem, ThetaSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// An algebra object given by its Q-system: unit `w`, multiplication
/// `m = √d(Θ)·w₁*`.
#[derive(Clone, Debug)]
pub struct AlgebraObject {
    pub q: QSystem,
}

impl AlgebraObject {
    pub fn theta(&self) -> &SumObject {
        &self.q.theta.object
    }

    pub fn dim(&self) -> f64 {
        self.q.theta.d_theta
    }

    pub fn unit(&self) -> &Morphism {
        &self.q.w
    }

    pub fn mult(&self) -> Morphism {
        self.q.w1.adjoint().scale(c(self.dim().sqrt(), 0.0))
    }

    /// `Θ = id`.
    pub fn trivial(model: &CategoryModel) -> Result<AlgebraObject> {
        let mut mult = vec![0; model.rank()];
        mult[UNIT] = 1;
        let theta = ThetaSpec::new(model, mult)?;
        Ok(AlgebraObject {
            q: QSystem::from_coefficients(model, theta, |_, _, _, _| c(1.0, 0.0)),
        })
    }

    /// Builds the algebra from multiplication coefficients: `mult(l, m, n, v)`
    /// is the entry of `m ∈ Hom(Θ², Θ)` from the tree `v` of
    /// `Hom(λ_n, λ_l λ_m)` to summand `n`.
    pub fn from_mult<F>(model: &CategoryModel, multiplicities: Vec<usize>, mult: F) -> Result<AlgebraObject>
    where
        F: Fn(usize, usize, usize, usize) -> C64,
    {
        let theta = ThetaSpec::new(model, multiplicities)?;
        let s = 1.0 / theta.d_theta.sqrt();
        let q = QSystem::from_coefficients(model, theta, |n, l, m, v| mult(l, m, n, v).conj() * s);
        Ok(AlgebraObject { q })
    }

    /// Inverse of [`AlgebraObject::from_mult`]: all structurally allowed
    /// entries `(l, m, n, v, value)`.
    pub fn mult_entries(&self, model: &CategoryModel) -> Vec<(usize, usize, usize, usize, C64)> {
        let th = &self.q.theta;
        let s = self.dim().sqrt();
        let mut out = Vec::new();
        for l in 0..th.len() {
            for m in 0..th.len() {
                for n in 0..th.len() {
                    for v in 0..model.fusion.n(th.label(l), th.label(m), th.label(n)) {
                        out.push((l, m, n, v, self.q.coefficient(model, n, l, m, v).conj() * s));
                    }
                }
            }
        }
        out
    }

    /// Transports the algebra along a unitary `u ∈ End(Θ)`.
    pub fn regauge(&self, model: &CategoryModel, u: &Morphism) -> Result<AlgebraObject> {
        let w = model.compose(u, &self.q.w)?;
        let w1 = model.compose(&model.tensor(u, u), &model.compose(&self.q.w1, &u.adjoint())?)?;
        Ok(AlgebraObject {
            q: QSystem {
                theta: self.q.theta.clone(),
                w,
                w1,
            },
        })
    }
}

pub fn verify_algebra(model: &CategoryModel, a: &AlgebraObject, tol: f64) -> Result<QReport> {
    validate_qsystem(model, &a.q, tol)
}

/// `Θ = 0 ⊕ g` for an invertible `g` with `g·g = 0`; all coefficients equal.
pub fn simple_current(model: &CategoryModel, g: Label) -> Result<AlgebraObject> {
    let fus = &model.fusion;
    if g == UNIT || (fus.d(g) - 1.0).abs() > 1e-9 || fus.n(g, g, UNIT) != 1 {
        return Err(Error::InvalidInput(format!(
            "{} is not a simple current of order two",
            fus.name(g)
        )));
    }
    let mut mult = vec![0; model.rank()];
    mult[UNIT] = 1;
    mult[g] = 1;
    let theta = ThetaSpec::new(model, mult)?;
    let s = c(1.0 / theta.d_theta.sqrt(), 0.0);
    Ok(AlgebraObject {
        q: QSystem::from_coefficients(model, theta, |_, _, _, _| s),
    })
}

/// The algebra `X X̄` with `w = R̄_X` and `w₁ = 1_X × R_X × 1_X̄`, moved onto
/// the decomposition `⊕_c N^c_{XX̄} c`.
pub fn internal_end(model: &CategoryModel, x: Label) -> Result<AlgebraObject> {
    let xb = model.fusion.dual(x);
    let word = SumObject::word(vec![x, xb]);
    let pair = model.conjugate_pair(x);
    let w = pair.rbar.clone();
    let w1 = model.tensor_all(&[
        &model.identity(&SumObject::simple(x)),
        &pair.r,
        &model.identity(&SumObject::simple(xb)),
    ]);
    let mult: Vec<usize> = (0..model.rank()).map(|c| model.fusion.n(x, xb, c)).collect();
    let theta = ThetaSpec::new(model, mult)?;
    let u = model.retype(&model.identity(&word), word.clone(), theta.object.clone())?;
    let w = model.compose(&u, &w)?;
    let w1 = model.compose(&model.tensor(&u, &u), &model.compose(&w1, &u.adjoint())?)?;
    Ok(AlgebraObject {
        q: QSystem { theta, w, w1 },
    })
}

/// Diagonal unitary on `Θ` acting on summand `i` by `phases[i]`.
pub fn phase_gauge(model: &CategoryModel, a: &AlgebraObject, phases: &[C64]) -> Morphism {
    let obj = a.theta();
    let mut u = model.identity(obj);
    for cc in 0..model.rank() {
        let offs = model.offsets(cc, obj);
        for (i, w) in obj.summands.iter().enumerate() {
            for k in 0..model.word_basis(w).dim(cc) {
                u.blocks[cc][(offs[i] + k, offs[i] + k)] = phases[i];
            }
        }
    }
    u
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    pub z: Vec<Vec<u32>>,
}

impl CouplingMatrix {
    pub fn identity(n: usize) -> CouplingMatrix {
        CouplingMatrix {
            z: (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.z.len()
    }

    pub fn cols(&self) -> usize {
        self.z.first().map_or(0, |r| r.len())
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.z[i][j]
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.rows(), self.cols(), |i, j| c(self.z[i][j] as f64, 0.0))
    }

    /// `Σ Z_{λμ} d₁(λ) d₂(μ)`.
    pub fn weighted_dim(&self, d1: &[f64], d2: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.z.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                s += v as f64 * d1[i] * d2[j];
            }
        }
        s
    }
}

impl fmt::Display for CouplingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.z {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// α-induction for one algebra object in a braided model.
pub struct Induction<'a> {
    pub model: &'a CategoryModel,
    pub alg: &'a AlgebraObject,
    mult: Morphism,
    cutoff: f64,
}

impl<'a> Induction<'a> {
    pub fn new(model: &'a CategoryModel, alg: &'a AlgebraObject) -> Result<Induction<'a>> {
        if !model.is_braided() {
            return Err(Error::Unsupported(format!(
                "α-induction needs a braiding; {} has none",
                model.name
            )));
        }
        Ok(Induction {
            model,
            alg,
            mult: alg.mult(),
            cutoff: 1e-8,
        })
    }

    fn theta(&self) -> &SumObject {
        self.alg.theta()
    }

    /// Underlying object `Θ·word`.
    pub fn object(&self, word: &[Label]) -> SumObject {
        self.theta().tensor(&SumObject::word(word.to_vec()))
    }

    /// `c^± ∈ Hom(word·Θ, Θ·word)`.
    pub fn crossing(&self, word: &[Label], sign: Sign) -> Result<Morphism> {
        let w = SumObject::word(word.to_vec());
        self.model.braid_sum(&w, self.theta(), sign == Sign::Minus)
    }

    /// `m × 1 : Θ Θ word → Θ word`.
    pub fn left_action(&self, word: &[Label]) -> Morphism {
        self.model
            .tensor(&self.mult, &self.model.identity(&SumObject::word(word.to_vec())))
    }

    /// `Θ word Θ → Θ word`.
    pub fn right_action(&self, word: &[Label], sign: Sign) -> Result<Morphism> {
        let m = self.model;
        let cross = m.tensor(&m.identity(self.theta()), &self.crossing(word, sign)?);
        m.compose(&self.left_action(word), &cross)
    }

    /// Size of the failure of `t: Θλ → Θμ` to intertwine the left actions
    /// and the `(s₁, s₂)`-twisted right actions.
    pub fn intertwining_residual(&self, t: &Morphism, src: (&[Label], Sign), tgt: (&[Label], Sign)) -> Result<f64> {
        let (a, b) = self.constraints(t, src, tgt)?;
        Ok(a.norm().max(b.norm()))
    }

    fn constraints(&self, t: &Morphism, src: (&[Label], Sign), tgt: (&[Label], Sign)) -> Result<(Morphism, Morphism)> {
        let m = self.model;
        let id_t = m.identity(self.theta());
        let left = m
            .compose(t, &self.left_action(src.0))?
            .sub(&m.compose(&self.left_action(tgt.0), &m.tensor(&id_t, t))?)?;
        let right = m
            .compose(t, &self.right_action(src.0, src.1)?)?
            .sub(&m.compose(&self.right_action(tgt.0, tgt.1)?, &m.tensor(t, &id_t))?)?;
        Ok((left, right))
    }

    /// `(φ, φ') = Tr(φ*φ') / (d(Θ) d(λ))`.
    pub fn inner(&self, phi: &Morphism, psi: &Morphism, src: &[Label]) -> Result<C64> {
        let d: f64 = src.iter().map(|&l| self.model.fusion.d(l)).product();
        let tr = self.model.trace(&self.model.compose(&phi.adjoint(), psi)?)?;
        Ok(tr / (self.alg.dim() * d))
    }

    /// Orthonormal basis of `Hom(α^{s₁}_λ, α^{s₂}_μ)` for words `λ, μ`.
    pub fn hom(&self, src: (&[Label], Sign), tgt: (&[Label], Sign)) -> Result<Vec<Morphism>> {
        let m = self.model;
        let template = m.zero(&self.object(src.0), &self.object(tgt.0));
        let n = template.coeff_len();
        if n == 0 {
            return Ok(Vec::new());
        }
        let columns: Vec<Vec<C64>> = (0..n)
            .into_par_iter()
            .map(|k| {
                let mut v = vec![c(0.0, 0.0); n];
                v[k] = c(1.0, 0.0);
                let t = template.with_coefficients(&v);
                let (a, b) = self.constraints(&t, src, tgt)?;
                let mut col = a.coefficients();
                col.extend(b.coefficients());
                Ok(col)
            })
            .collect::<Result<_>>()?;
        let rows = columns[0].len();
        let a = CMatrix::from_fn(rows, n, |i, j| columns[j][i]);
        let ns = null_space(&a, self.cutoff);
        let raw: Vec<Morphism> = (0..ns.ncols())
            .map(|j| template.with_coefficients(ns.column(j).as_slice()))
            .collect();
        self.orthonormalize(raw, src.0)
    }

    fn orthonormalize(&self, raw: Vec<Morphism>, src: &[Label]) -> Result<Vec<Morphism>> {
        let k = raw.len();
        if k == 0 {
            return Ok(raw);
        }
        let mut g = zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.inner(&raw[i], &raw[j], src)?;
            }
        }
        let chol = Cholesky::new(g).ok_or_else(|| Error::Structure("degenerate Gram matrix".into()))?;
        let l_inv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| Error::Structure("singular Cholesky factor".into()))?;
        // Columns of raw · L^{-*} are orthonormal.
        let coeffs: Vec<Vec<C64>> = raw.iter().map(|m| m.coefficients()).collect();
        let n = coeffs[0].len();
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let mut v = vec![c(0.0, 0.0); n];
            for (i, ci) in coeffs.iter().enumerate() {
                let s = l_inv[(j, i)].conj();
                if s.norm() == 0.0 {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(ci) {
                    *x += s * y;
                }
            }
            fix_phase(&mut v);
            out.push(raw[0].with_coefficients(&v));
        }
        Ok(out)
    }

    /// `Z_{λμ} = dim Hom(α⁺_λ, α⁻_μ)`.
    pub fn coupling_matrix(&self) -> Result<CouplingMatrix> {
        let n = self.model.rank();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let dims: Vec<u32> = pairs
            .par_iter()
            .map(|&(i, j)| {
                self.hom((&[i], Sign::Plus), (&[j], Sign::Minus))
                    .map(|b| b.len() as u32)
            })
            .collect::<Result<_>>()?;
        Ok(CouplingMatrix {
            z: dims.chunks(n).map(|r| r.to_vec()).collect(),
        })
    }

    /// `1_Θ × f`, the image of `f` under `ι`.
    pub fn lift(&self, f: &Morphism) -> Morphism {
        self.model.tensor(&self.model.identity(self.theta()), f)
    }

    /// Monoidal product of bimodule maps `φ: α_λ → α_λ'`, `ψ: α_μ → α_μ'`,
    /// realised on `Θλμ → Θλ'μ'` as `(ρ_{λ'} × 1)(φ × ψ)(1_{Θλ} × w × 1_μ)`.
    /// `sign` is the twist of the right action of `α_λ'`.
    pub fn product(
        &self,
        phi: &Morphism,
        psi: &Morphism,
        lam: &[Label],
        mu: &[Label],
        lam_t: &[Label],
        mu_t: &[Label],
        sign: Sign,
    ) -> Result<Morphism> {
        let m = self.model;
        let insert = m.tensor_all(&[
            &m.identity(&self.object(lam)),
            self.alg.unit(),
            &m.identity(&SumObject::word(mu.to_vec())),
        ]);
        let mid = m.tensor(phi, psi);
        let act = m.tensor(
            &self.right_action(lam_t, sign)?,
            &m.identity(&SumObject::word(mu_t.to_vec())),
        );
        m.compose_all(&[&act, &mid, &insert])
    }

    /// Bimodule dimensions `Tr(p)/d(Θ)` of the minimal projections of
    /// `End(α^s_λ)`, found as spectral projections of a generic self-adjoint
    /// element. Sums to `d(α_λ)`.
    pub fn decompose(&self, word: &[Label], sign: Sign) -> Result<Vec<f64>> {
        let basis = self.hom((word, sign), (word, sign))?;
        let obj = self.object(word);
        let mut h = self.model.zero(&obj, &obj);
        for (k, b) in basis.iter().enumerate() {
            let x = 1.0 + (k as f64 + 1.0).sqrt() * 0.37;
            let y = 0.5 + (k as f64 + 2.0).ln() * 0.23;
            h = h.add(&b.scale(c(x, y)))?.add(&b.adjoint().scale(c(x, -y)))?;
        }
        let mut eig: Vec<(f64, f64)> = Vec::new();
        for (cc, blk) in h.blocks.iter().enumerate() {
            if blk.nrows() == 0 {
                continue;
            }
            let e = blk.clone().symmetric_eigen();
            for &x in e.eigenvalues.iter() {
                eig.push((x, self.model.fusion.d(cc)));
            }
        }
        eig.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut dims: Vec<f64> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for (x, d) in eig {
            if x - last > 1e-7 {
                dims.push(0.0);
            }
            *dims.last_mut().unwrap() += d / self.alg.dim();
            last = x;
        }
        Ok(dims)
    }

    /// Bimodule dimension of `α^s_λ`: `Tr(1_{Θλ})/d(Θ)`.
    pub fn dimension(&self, word: &[Label]) -> f64 {
        self.model.object_dim(&self.object(word)) / self.alg.dim()
    }

    /// Max residual of `1_Θ × T_e` as a bimodule map `α_ν → α_λ α_μ` over
    /// the tree basis of `Hom(ν, λμ)`.
    pub fn e2_residual(&self, lam: Label, mu: Label, nu: Label, sign: Sign) -> Result<f64> {
        let mut worst = 0.0f64;
        for t in self.model.hom_basis(nu, &[lam, mu]) {
            let r = self.intertwining_residual(&self.lift(&t), (&[nu], sign), (&[lam, mu], sign))?;
            worst = worst.max(r);
        }
        Ok(worst)
    }
}
