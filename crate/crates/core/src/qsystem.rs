//! Q-systems `(θ, w, w₁)`: construction from coefficients, the Longo relations
//! and the commutativity test `ε(θ,θ)w₁ = w₁`.

use serde::Serialize;

use crate::category::CategoryModel;
use crate::error::{Error, Result};
use crate::fusion::{Label, UNIT};
use crate::linalg::{c, C64};
use crate::morphism::{Morphism, SumObject};

/// `θ = ⊕ mult(λ)·λ`, summands ordered by label and then copy index.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSpec {
    pub multiplicities: Vec<usize>,
    /// `(label, copy)` of every summand of `object`.
    pub summands: Vec<(Label, usize)>,
    pub object: SumObject,
    pub d_theta: f64,
}

impl ThetaSpec {
    pub fn new(model: &CategoryModel, multiplicities: Vec<usize>) -> Result<ThetaSpec> {
        if multiplicities.len() != model.rank() {
            return Err(Error::InvalidInput(format!(
                "theta has {} multiplicities for {} labels",
                multiplicities.len(),
                model.rank()
            )));
        }
        if multiplicities[UNIT] != 1 {
            return Err(Error::InvalidInput(format!(
                "identity occurs {} times in theta; it must occur once",
                multiplicities[UNIT]
            )));
        }
        let mut summands = Vec::new();
        for (l, &m) in multiplicities.iter().enumerate() {
            for k in 0..m {
                summands.push((l, k));
            }
        }
        let object = SumObject::sum(summands.iter().map(|&(l, _)| vec![l]).collect());
        let d_theta = summands.iter().map(|&(l, _)| model.fusion.d(l)).sum();
        Ok(ThetaSpec {
            multiplicities,
            summands,
            object,
            d_theta,
        })
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn label(&self, i: usize) -> Label {
        self.summands[i].0
    }
}

#[derive(Clone, Debug)]
pub struct QSystem {
    pub theta: ThetaSpec,
    /// `w ∈ Hom(id, θ)`.
    pub w: Morphism,
    /// `w₁ ∈ Hom(θ, θ²)`.
    pub w1: Morphism,
}

impl QSystem {
    /// Assembles `w = W₀` and `w₁ = Σ (W_l × W_m) T^n_{lm} W_n*` where
    /// `T^n_{lm} = Σ_v coeff(n, l, m, v) T_v` runs over the tree basis of
    /// `Hom(λ_n, λ_l λ_m)`.
    pub fn from_coefficients<F>(model: &CategoryModel, theta: ThetaSpec, coeff: F) -> QSystem
    where
        F: Fn(usize, usize, usize, usize) -> C64,
    {
        let obj = &theta.object;
        let obj2 = obj.tensor(obj);
        let mut w = model.zero(&SumObject::unit(), obj);
        w.blocks[UNIT][(model.offsets(UNIT, obj)[0], 0)] = c(1.0, 0.0);
        let mut w1 = model.zero(obj, &obj2);
        let k = theta.len();
        for n in 0..k {
            let nu = theta.label(n);
            let src = model.offsets(nu, obj)[n];
            let offs = model.offsets(nu, &obj2);
            for l in 0..k {
                for m in 0..k {
                    let dim = model.fusion.n(theta.label(l), theta.label(m), nu);
                    for v in 0..dim {
                        w1.blocks[nu][(offs[l * k + m] + v, src)] = coeff(n, l, m, v);
                    }
                }
            }
        }
        QSystem { theta, w, w1 }
    }

    /// Entry of `w₁` at `(n; l, m, v)`, the inverse of
    /// [`QSystem::from_coefficients`].
    pub fn coefficient(&self, model: &CategoryModel, n: usize, l: usize, m: usize, v: usize) -> C64 {
        let obj = &self.theta.object;
        let nu = self.theta.label(n);
        let k = self.theta.len();
        let src = model.offsets(nu, obj)[n];
        let off = model.offsets(nu, &obj.tensor(obj))[l * k + m];
        self.w1.blocks[nu][(off + v, src)]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QReport {
    pub d_theta: f64,
    /// `Tr(1_θ)`, to be compared with `d_theta`.
    pub trace_dim: f64,
    pub unit_multiplicity: usize,
    /// `‖(w* × 1)w₁ − d(θ)^{-1/2}‖`.
    pub q1_left: f64,
    /// `‖(1 × w*)w₁ − d(θ)^{-1/2}‖`.
    pub q1_right: f64,
    pub q2: f64,
    pub q3: f64,
    /// `‖w₁*w₁ − 1‖`.
    pub isometry: f64,
    /// `‖w*w − 1‖`.
    pub w_isometry: f64,
    pub passed: bool,
}

impl QReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.q1_left,
            self.q1_right,
            self.q2,
            self.q3,
            self.isometry,
            self.w_isometry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn validate_qsystem(model: &CategoryModel, q: &QSystem, tol: f64) -> Result<QReport> {
    let obj = &q.theta.object;
    let obj2 = obj.tensor(obj);
    let check = |m: &Morphism, source: &SumObject, target: &SumObject, what: &str| {
        if &m.source != source || &m.target != target {
            Err(Error::ObjectMismatch(format!("{what} has the wrong source or target")))
        } else {
            Ok(())
        }
    };
    check(&q.w, &SumObject::unit(), obj, "w")?;
    check(&q.w1, obj, &obj2, "w1")?;

    let id = model.identity(obj);
    let d = q.theta.d_theta;
    let inv_sqrt_d = id.scale(c(1.0 / d.sqrt(), 0.0));
    let ws = q.w.adjoint();
    let w1s = q.w1.adjoint();

    let q1_left = model.compose(&model.tensor(&ws, &id), &q.w1)?.sub(&inv_sqrt_d)?.norm();
    let q1_right = model.compose(&model.tensor(&id, &ws), &q.w1)?.sub(&inv_sqrt_d)?.norm();
    let w1_id = model.tensor(&q.w1, &id);
    let id_w1 = model.tensor(&id, &q.w1);
    let q2 = model
        .compose(&w1_id, &q.w1)?
        .sub(&model.compose(&id_w1, &q.w1)?)?
        .norm();
    let q3 = model
        .compose(&q.w1, &w1s)?
        .sub(&model.compose(&model.tensor(&id, &w1s), &w1_id)?)?
        .norm();
    let isometry = model.compose(&w1s, &q.w1)?.sub(&id)?.norm();
    let unit = model.identity(&SumObject::unit());
    let w_isometry = model.compose(&ws, &q.w)?.sub(&unit)?.norm();
    let unit_multiplicity = model.dim(UNIT, obj);
    let trace_dim = model.trace(&id)?.re;

    let mut rep = QReport {
        d_theta: d,
        trace_dim,
        unit_multiplicity,
        q1_left,
        q1_right,
        q2,
        q3,
        isometry,
        w_isometry,
        passed: false,
    };
    rep.passed = rep.max_residual() < tol && unit_multiplicity == 1 && (trace_dim - d).abs() < tol.max(1e-9);
    Ok(rep)
}

/// A Q-system living in the product category `C ⊠ C̄` together with that
/// category.
#[derive(Clone, Debug)]
pub struct ProductQSystem {
    pub product: CategoryModel,
    /// Rank of the second factor, for decoding pair labels.
    pub n2: usize,
    pub q: QSystem,
}

/// `C ⊠ C̄`, the second factor carrying the conjugated F- and R-symbols.
pub fn product_category(c1: &CategoryModel, c2: &CategoryModel) -> Result<CategoryModel> {
    CategoryModel::deligne(c1, &c2.opposite()?)
}

/// The Longo–Rehren Q-system `θ = ⊕_λ λ ⊠ λᵒᵖᵖ` with
/// `ζ = √(d(λ)d(μ)/(d(θ)d(ν)))·δ_{e₁e₂}`.
pub fn lr_qsystem(model: &CategoryModel) -> Result<ProductQSystem> {
    let n = model.rank();
    let product = product_category(model, model)?;
    let mut mult = vec![0; n * n];
    for l in 0..n {
        mult[CategoryModel::pair_label(l, l, n)] = 1;
    }
    let theta = ThetaSpec::new(&product, mult)?;
    let fus = &model.fusion;
    let d_theta = theta.d_theta;
    let labels: Vec<Label> = theta.summands.iter().map(|&(x, _)| x / n).collect();
    let q = QSystem::from_coefficients(&product, theta, |nn, l, m, v| {
        let (lam, mu, nu) = (labels[l], labels[m], labels[nn]);
        let k = fus.n(lam, mu, nu);
        let (e1, e2) = (v / k, v % k);
        if e1 != e2 {
            return c(0.0, 0.0);
        }
        c((fus.d(lam) * fus.d(mu) / (d_theta * fus.d(nu))).sqrt(), 0.0)
    });
    Ok(ProductQSystem { product, n2: n, q })
}

/// `ε(θ, θ)` of the model, summand by summand.
pub fn theta_braiding(model: &CategoryModel, q: &QSystem) -> Result<Morphism> {
    model.braid_sum(&q.theta.object, &q.theta.object, false)
}

/// `‖ε(θ,θ)w₁ − w₁‖`.
pub fn check_commutativity(model: &CategoryModel, q: &QSystem, eps: &Morphism) -> Result<f64> {
    if !model.is_braided() {
        return Err(Error::Unsupported(format!("{} carries no braiding", model.name)));
    }
    Ok(model.compose(eps, &q.w1)?.sub(&q.w1)?.norm())
}

/// Negative control for the commutativity test: the same Q-system read in a
/// product whose second factor keeps the unconjugated braiding.
pub fn unconjugated_product(c1: &CategoryModel, c2: &CategoryModel) -> Result<CategoryModel> {
    CategoryModel::deligne(c1, &c2.opposite()?.with_braiding_of(c2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    #[test]
    fn trivial_system_has_zero_residuals() {
        let lr = lr_qsystem(&catalog::trivial().unwrap()).unwrap();
        let rep = validate_qsystem(&lr.product, &lr.q, 1e-12).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.max_residual(), 0.0);
        assert_eq!(lr.q.coefficient(&lr.product, 0, 0, 0, 0), c(1.0, 0.0));
    }

    #[test]
    fn fibonacci_lr_passes() {
        let lr = lr_qsystem(&catalog::fibonacci().unwrap()).unwrap();
        let rep = validate_qsystem(&lr.product, &lr.q, 1e-9).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!((rep.d_theta - 3.6180339887).abs() < 1e-8);
        assert!((rep.trace_dim - rep.d_theta).abs() < 1e-9);
        // ζ for (τ, τ; 1) and (τ, τ; τ)
        let tau = 1;
        let z = lr.q.coefficient(&lr.product, 0, tau, tau, 0);
        assert!((z.re - (phi() * phi() / (1.0 + phi() * phi())).sqrt()).abs() < 1e-12);
        assert!((z.re - 0.85065).abs() < 1e-5);
        let z = lr.q.coefficient(&lr.product, tau, tau, tau, 0);
        assert!((z.re - 0.6687).abs() < 1e-4);
    }

    #[test]
    fn ising_lr_passes() {
        let lr = lr_qsystem(&catalog::ising().unwrap()).unwrap();
        let rep = validate_qsystem(&lr.product, &lr.q, 1e-9).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!((rep.d_theta - 4.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_coefficient_is_rejected() {
        let lr = lr_qsystem(&catalog::fibonacci().unwrap()).unwrap();
        let mut q = lr.q.clone();
        let (l, m, n) = (1, 1, 1);
        let old = q.coefficient(&lr.product, n, l, m, 0);
        let q2 = QSystem::from_coefficients(&lr.product, q.theta.clone(), |nn, ll, mm, v| {
            let z = lr.q.coefficient(&lr.product, nn, ll, mm, v);
            if (nn, ll, mm) == (n, l, m) {
                old + c(1e-3, 0.0)
            } else {
                z
            }
        });
        q.w1 = q2.w1;
        let rep = validate_qsystem(&lr.product, &q, 1e-9).unwrap();
        assert!(!rep.passed);
        assert!(rep.q2.max(rep.q3) > 1e-9);
    }

    #[test]
    fn lr_systems_commute() {
        for m in [
            catalog::trivial().unwrap(),
            catalog::fibonacci().unwrap(),
            catalog::ising().unwrap(),
        ] {
            let lr = lr_qsystem(&m).unwrap();
            let eps = theta_braiding(&lr.product, &lr.q).unwrap();
            let r = check_commutativity(&lr.product, &lr.q, &eps).unwrap();
            assert!(r < 1e-9, "{}: {r}", m.name);
        }
    }

    #[test]
    fn unconjugated_braiding_breaks_commutativity() {
        let fib = catalog::fibonacci().unwrap();
        let lr = lr_qsystem(&fib).unwrap();
        let bad = unconjugated_product(&fib, &fib).unwrap();
        let eps = theta_braiding(&bad, &lr.q).unwrap();
        let r = check_commutativity(&bad, &lr.q, &eps).unwrap();
        assert!(r > 0.1, "{r}");
    }

    #[test]
    fn theta_must_contain_identity_once() {
        let fib = catalog::fibonacci().unwrap();
        assert!(ThetaSpec::new(&fib, vec![2, 1]).is_err());
        assert!(ThetaSpec::new(&fib, vec![0, 1]).is_err());
        assert!(ThetaSpec::new(&fib, vec![1]).is_err());
    }
}
