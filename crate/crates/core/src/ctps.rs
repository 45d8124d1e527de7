//! Canonical tensor product subfactors: `θ = ⊕ Z_{λ₁λ₂} λ₁ ⊠ λ₂ᵒᵖᵖ` with
//! `w₁` assembled from the ζ coefficients
//!
//! ```text
//! ζ^n_{lm,e₁e₂} = √(d(λ₂)d(μ₂)/(d(θ)d(ν₂))) Φ_{ν₁}[ι(T_{e₁}*)(φ_l* × φ_m*)ι(T_{e₂})φ_n]
//! ```
//!
//! where `φ_l` runs over orthonormal bases of `Hom(α^{s₁}_{λ₁}, α^{s₂}_{λ₂})`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::{AlgebraObject, CouplingMatrix, Induction, Sign};
use crate::category::CategoryModel;
use crate::error::{Error, Result};
use crate::fusion::{FusionData, Label, UNIT};
use crate::linalg::{c, C64};
use crate::modular::{check_modular_invariant, compute_st, ModularResiduals};
use crate::morphism::Morphism;
use crate::qsystem::{
    check_commutativity, product_category, theta_braiding, validate_qsystem, QReport, QSystem, ThetaSpec,
};

/// `(λ₁, λ₂, l)` with `l < Z_{λ₁λ₂}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MultiIndex {
    pub lambda1: Label,
    pub lambda2: Label,
    pub copy: usize,
}

/// Non-zero-pattern ζ entries keyed by `(n, l, m, e₁, e₂)` (summand
/// positions of θ and tree indices).
#[derive(Clone, Debug, Default)]
pub struct ZetaTensor {
    pub entries: BTreeMap<(usize, usize, usize, usize, usize), C64>,
}

impl ZetaTensor {
    pub fn get(&self, n: usize, l: usize, m: usize, e1: usize, e2: usize) -> C64 {
        self.entries.get(&(n, l, m, e1, e2)).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// θ over `C ⊠ C̄` for a coupling matrix, with the multi-index of each
/// summand.
pub fn build_theta(product: &CategoryModel, n2: usize, z: &CouplingMatrix) -> Result<(ThetaSpec, Vec<MultiIndex>)> {
    if z.rows() == 0 || z.get(0, 0) != 1 {
        return Err(Error::InvalidInput("coupling matrix must have Z₀₀ = 1".into()));
    }
    if z.rows() * z.cols() != product.rank() || z.cols() != n2 {
        return Err(Error::InvalidInput(format!(
            "coupling matrix is {}×{}, product category has rank {}",
            z.rows(),
            z.cols(),
            product.rank()
        )));
    }
    let mut mult = vec![0; product.rank()];
    for i in 0..z.rows() {
        for j in 0..z.cols() {
            mult[CategoryModel::pair_label(i, j, n2)] = z.get(i, j) as usize;
        }
    }
    let theta = ThetaSpec::new(product, mult)?;
    let idx = theta
        .summands
        .iter()
        .map(|&(x, copy)| MultiIndex {
            lambda1: x / n2,
            lambda2: x % n2,
            copy,
        })
        .collect();
    Ok((theta, idx))
}

/// Orthonormal bases `φ` of `Hom(α^{s₁}_{λ₁}, α^{s₂}_{λ₂})` for all pairs.
pub struct PhiBases {
    pub s1: Sign,
    pub s2: Sign,
    pub bases: Vec<Vec<Vec<Morphism>>>,
}

impl PhiBases {
    pub fn solve(ind: &Induction, s1: Sign, s2: Sign) -> Result<PhiBases> {
        let n = ind.model.rank();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let flat: Vec<Vec<Morphism>> = pairs
            .par_iter()
            .map(|&(i, j)| ind.hom((&[i], s1), (&[j], s2)))
            .collect::<Result<_>>()?;
        let mut bases = vec![Vec::new(); n];
        for (k, b) in flat.into_iter().enumerate() {
            bases[k / n].push(b);
        }
        Ok(PhiBases { s1, s2, bases })
    }

    pub fn coupling_matrix(&self) -> CouplingMatrix {
        CouplingMatrix {
            z: self
                .bases
                .iter()
                .map(|row| row.iter().map(|b| b.len() as u32).collect())
                .collect(),
        }
    }

    pub fn get(&self, i: &MultiIndex) -> &Morphism {
        &self.bases[i.lambda1][i.lambda2][i.copy]
    }

    /// Applies a unitary `u` (row-major, `k × k`) to the basis of every pair
    /// with `k` elements. Used for gauge tests.
    pub fn rotate(&mut self, u: impl Fn(usize) -> Vec<Vec<C64>>) -> Result<()> {
        for row in self.bases.iter_mut() {
            for b in row.iter_mut() {
                let k = b.len();
                if k == 0 {
                    continue;
                }
                let m = u(k);
                let old = b.clone();
                for (i, slot) in b.iter_mut().enumerate() {
                    let mut acc = old[0].scale(m[i][0]);
                    for (j, o) in old.iter().enumerate().skip(1) {
                        acc = acc.add(&o.scale(m[i][j]))?;
                    }
                    *slot = acc;
                }
            }
        }
        Ok(())
    }
}

/// Evaluates all ζ coefficients.
pub fn zeta_tensor(ind: &Induction, phi: &PhiBases, theta: &ThetaSpec, idx: &[MultiIndex]) -> Result<ZetaTensor> {
    let model = ind.model;
    let fus = &model.fusion;
    let d = |l: Label| fus.d(l);
    let k = idx.len();
    let d_theta = theta.d_theta;
    let d_alg = ind.alg.dim();

    // (φ_l* × φ_m*) for every pair of summands.
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|l| (0..k).map(move |m| (l, m))).collect();
    let products: Vec<Morphism> = pairs
        .par_iter()
        .map(|&(l, m)| {
            let (a, b) = (&idx[l], &idx[m]);
            ind.product(
                &phi.get(a).adjoint(),
                &phi.get(b).adjoint(),
                &[a.lambda2],
                &[b.lambda2],
                &[a.lambda1],
                &[b.lambda1],
                phi.s1,
            )
        })
        .collect::<Result<_>>()?;

    let triples: Vec<(usize, usize, usize)> = (0..k)
        .flat_map(|n| pairs.iter().map(move |&(l, m)| (n, l, m)))
        .filter(|&(n, l, m)| {
            fus.n(idx[l].lambda1, idx[m].lambda1, idx[n].lambda1) > 0
                && fus.n(idx[l].lambda2, idx[m].lambda2, idx[n].lambda2) > 0
        })
        .collect();
    let chunks: Vec<Vec<((usize, usize, usize, usize, usize), C64)>> = triples
        .par_iter()
        .map(|&(n, l, m)| {
            let (nn, ll, mm) = (&idx[n], &idx[l], &idx[m]);
            let pre = (d(ll.lambda2) * d(mm.lambda2) / (d_theta * d(nn.lambda2))).sqrt();
            let t1 = model.hom_basis(nn.lambda1, &[ll.lambda1, mm.lambda1]);
            let t2 = model.hom_basis(nn.lambda2, &[ll.lambda2, mm.lambda2]);
            let right: Vec<Morphism> = t2
                .iter()
                .map(|t| model.compose_all(&[&products[l * k + m], &ind.lift(t), phi.get(nn)]))
                .collect::<Result<_>>()?;
            let mut out = Vec::new();
            for (e1, ta) in t1.iter().enumerate() {
                let left = ind.lift(ta).adjoint();
                for (e2, r) in right.iter().enumerate() {
                    let x = model.compose(&left, r)?;
                    let z = model.trace(&x)? / (d_alg * d(nn.lambda1)) * pre;
                    out.push(((n, l, m, e1, e2), z));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(ZetaTensor {
        entries: chunks.into_iter().flatten().collect(),
    })
}

/// `w₁ = Σ (W_l × W_m) T^n_{lm} W_n*` with
/// `T^n_{lm} = Σ ζ^n_{lm,e₁e₂} T_{e₁} ⊗ (T_{e₂}*)ᵒᵖᵖ`.
pub fn assemble_w1(product: &CategoryModel, n2: usize, theta: ThetaSpec, zeta: &ZetaTensor) -> QSystem {
    let labels: Vec<Label> = theta.summands.iter().map(|&(x, _)| x).collect();
    // Product vertices are (e₁, e₂) with e₂ fastest; the second-factor
    // multiplicity is N^{(0,ν₂)}_{(0,λ₂)(0,μ₂)}.
    let second = |a: Label, b: Label, x: Label| product.fusion.n(a % n2, b % n2, x % n2);
    QSystem::from_coefficients(product, theta, |n, l, m, v| {
        let k2 = second(labels[l], labels[m], labels[n]);
        zeta.get(n, l, m, v / k2, v % k2)
    })
}

/// `‖(ψ × φ) ι(ε(λ₁,μ₁)) − ι(ε(λ₂,μ₂)) (φ × ψ)‖` maximised over all pairs
/// of basis elements.
pub fn check_e3(ind: &Induction, phi: &PhiBases, idx: &[MultiIndex]) -> Result<f64> {
    let model = ind.model;
    let k = idx.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|l| (0..k).map(move |m| (l, m))).collect();
    let res: Vec<f64> = pairs
        .par_iter()
        .map(|&(l, m)| {
            let (a, b) = (&idx[l], &idx[m]);
            let (f, g) = (phi.get(a), phi.get(b));
            let lhs = model.compose(
                &ind.product(g, f, &[b.lambda1], &[a.lambda1], &[b.lambda2], &[a.lambda2], phi.s2)?,
                &ind.lift(&model.braiding(a.lambda1, b.lambda1)?),
            )?;
            let rhs = model.compose(
                &ind.lift(&model.braiding(a.lambda2, b.lambda2)?),
                &ind.product(f, g, &[a.lambda1], &[b.lambda1], &[a.lambda2], &[b.lambda2], phi.s2)?,
            )?;
            Ok(lhs.sub(&rhs)?.norm())
        })
        .collect::<Result<_>>()?;
    Ok(res.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normality {
    pub n2: bool,
    pub n3: bool,
    /// `π(α) = β` with `Z_{αβ} = 1`, when `Z` is a fusion-preserving
    /// permutation.
    pub pi: Option<Vec<Label>>,
}

pub fn check_normality(z: &CouplingMatrix, f1: &FusionData, f2: &FusionData) -> Normality {
    let (r, cc) = (z.rows(), z.cols());
    let n2 = z.get(0, 0) == 1 && (1..r).all(|a| z.get(a, 0) == 0) && (1..cc).all(|b| z.get(0, b) == 0);
    let pi = permutation_of(z).filter(|pi| {
        (0..r).all(|a| (f1.d(a) - f2.d(pi[a])).abs() < 1e-9)
            && (0..r).all(|a| (0..r).all(|b| (0..r).all(|x| f1.n(a, b, x) == f2.n(pi[a], pi[b], pi[x]))))
    });
    Normality {
        n2,
        n3: pi.is_some(),
        pi,
    }
}

fn permutation_of(z: &CouplingMatrix) -> Option<Vec<Label>> {
    if z.rows() != z.cols() {
        return None;
    }
    let n = z.rows();
    let mut pi = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for (a, slot) in pi.iter_mut().enumerate() {
        let ones: Vec<usize> = (0..n).filter(|&b| z.get(a, b) != 0).collect();
        match ones.as_slice() {
            [b] if z.get(a, *b) == 1 && !hit[*b] => {
                *slot = *b;
                hit[*b] = true;
            }
            _ => return None,
        }
    }
    Some(pi)
}

/// Which extension sits on each tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    Trivial,
    Plus,
    Minus,
}

impl FromStr for Extension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Extension::Trivial),
            "plus" => Ok(Extension::Plus),
            "minus" => Ok(Extension::Minus),
            other => Err(Error::InvalidInput(format!("unknown extension {other:?}"))),
        }
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extension::Trivial => "trivial",
            Extension::Plus => "plus",
            Extension::Minus => "minus",
        })
    }
}

/// Everything the pipeline produces.
pub struct Ctps {
    pub product: CategoryModel,
    pub n2: usize,
    pub z: CouplingMatrix,
    pub index: Vec<MultiIndex>,
    pub zeta: ZetaTensor,
    pub q: QSystem,
}

#[derive(Clone, Debug, Serialize)]
pub struct CtpsReport {
    pub category: String,
    pub ext1: Extension,
    pub ext2: Extension,
    pub tolerance: f64,
    pub z: Vec<Vec<u32>>,
    pub d_theta: f64,
    /// `|Σ Z d d / d(θ) − 1|`.
    pub multiplicity_identity: f64,
    pub qsystem: QReport,
    pub e3: f64,
    /// `None` when E3 fails, so Prop 1 does not apply.
    pub commutativity: Option<f64>,
    /// `None` when the braiding is degenerate.
    pub modular: Option<ModularResiduals>,
    pub normality: Normality,
    pub passed: bool,
}

/// The Theorem's construction end to end for `(α^{s₁}, α^{s₂})` of one
/// algebra, or for two trivial extensions.
pub fn build_ctps(
    model: &CategoryModel,
    alg: Option<&AlgebraObject>,
    ext1: Extension,
    ext2: Extension,
    tol: f64,
) -> Result<(Ctps, CtpsReport)> {
    let trivial;
    let (alg, s1, s2) = match (ext1, ext2) {
        (Extension::Trivial, Extension::Trivial) => {
            trivial = AlgebraObject::trivial(model)?;
            (&trivial, Sign::Plus, Sign::Minus)
        }
        (Extension::Trivial, _) | (_, Extension::Trivial) => {
            return Err(Error::Unsupported(
                "a trivial extension can only be paired with another trivial extension".into(),
            ))
        }
        (a, b) => {
            let alg = alg.ok_or_else(|| Error::InvalidInput("α-induction needs an algebra object".into()))?;
            let sign = |e| if e == Extension::Plus { Sign::Plus } else { Sign::Minus };
            (alg, sign(a), sign(b))
        }
    };
    let ind = Induction::new(model, alg)?;
    let phi = PhiBases::solve(&ind, s1, s2)?;
    build_from_bases(&ind, &phi, ext1, ext2, tol)
}

/// Same as [`build_ctps`] with the φ bases supplied.
pub fn build_from_bases(
    ind: &Induction,
    phi: &PhiBases,
    ext1: Extension,
    ext2: Extension,
    tol: f64,
) -> Result<(Ctps, CtpsReport)> {
    let model = ind.model;
    let z = phi.coupling_matrix();
    let n = model.rank();
    let product = product_category(model, model)?;
    let (theta, index) = build_theta(&product, n, &z)?;
    let zeta = zeta_tensor(ind, phi, &theta, &index)?;
    let q = assemble_w1(&product, n, theta, &zeta);
    let qrep = validate_qsystem(&product, &q, tol)?;

    let dims: Vec<f64> = (0..n).map(|l| model.fusion.d(l)).collect();
    let weighted = z.weighted_dim(&dims, &dims);
    let multiplicity_identity = (weighted / q.theta.d_theta - 1.0).abs();
    let e3 = check_e3(ind, phi, &index)?;
    let commutativity = if e3 < tol {
        let eps = theta_braiding(&product, &q)?;
        Some(check_commutativity(&product, &q, &eps)?)
    } else {
        None
    };
    let st = compute_st(model)?;
    let modular = st.as_ref().map(|st| check_modular_invariant(&z, st));
    let normality = check_normality(&z, &model.fusion, &model.fusion);

    let passed = qrep.passed
        && multiplicity_identity < tol
        && e3 < tol
        && commutativity.is_none_or(|r| r < tol)
        && modular.as_ref().is_none_or(|m| m.zs.max(m.zt) < tol);
    let report = CtpsReport {
        category: model.name.clone(),
        ext1,
        ext2,
        tolerance: tol,
        z: z.z.clone(),
        d_theta: q.theta.d_theta,
        multiplicity_identity,
        qsystem: qrep,
        e3,
        commutativity,
        modular,
        normality,
        passed,
    };
    Ok((
        Ctps {
            product,
            n2: n,
            z,
            index,
            zeta,
            q,
        },
        report,
    ))
}

/// `‖ε(θ,θ)w₁ − w₁‖` evaluated in `product`.
pub fn commutativity_in(product: &CategoryModel, ctps: &Ctps) -> Result<f64> {
    let eps = theta_braiding(product, &ctps.q)?;
    check_commutativity(product, &ctps.q, &eps)
}

/// Identity multi-index sanity: `√d(θ) ζ^n_{0m} = δ_{mn}`.
pub fn unit_row_residual(ctps: &Ctps) -> f64 {
    let s = ctps.q.theta.d_theta.sqrt();
    let k = ctps.index.len();
    let mut worst = 0.0f64;
    for n in 0..k {
        for m in 0..k {
            let want = if n == m { 1.0 } else { 0.0 };
            let z = ctps.zeta.get(n, UNIT, m, 0, 0) * s;
            let compatible =
                ctps.index[n].lambda1 == ctps.index[m].lambda1 && ctps.index[n].lambda2 == ctps.index[m].lambda2;
            if compatible {
                worst = worst.max((z - c(want, 0.0)).norm());
            }
        }
    }
    worst
}
