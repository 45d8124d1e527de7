//! Combinatorial fusion data of a closed system of sectors.
//!
//! Labels are indexed `0..n` and label `0` is always the identity sector.
//! Multiplicities are stored densely: `N^ν_{λμ} = dim Hom(ν, λμ)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Index of a simple object (sector) in its category.
pub type Label = usize;

/// Identity sector.
pub const UNIT: Label = 0;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SectorLabel {
    pub index: Label,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FusionData {
    pub labels: Vec<SectorLabel>,
    /// `dual[λ] = λ̄`.
    pub dual: Vec<Label>,
    /// Flattened `N[(λ * n + μ) * n + ν] = N^ν_{λμ}`.
    pub mult: Vec<u32>,
    /// Quantum dimensions `d(λ)`.
    pub qdim: Vec<f64>,
}

/// One violated axiom, with the indices involved.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, axiom: &'static str, detail: String) {
        self.violations.push(Violation { axiom, detail });
    }
}

impl FusionData {
    /// Builds fusion data from names, duals and a nested multiplicity table
    /// `n[λ][μ][ν]`. When `qdim` is `None` the dimensions are computed from
    /// the fusion rules.
    pub fn new(names: &[&str], dual: Vec<Label>, n: Vec<Vec<Vec<u32>>>, qdim: Option<Vec<f64>>) -> Result<Self> {
        let rank = names.len();
        if n.len() != rank || n.iter().any(|r| r.len() != rank || r.iter().any(|s| s.len() != rank)) {
            return Err(Error::Structure(format!("fusion tensor must be {rank}x{rank}x{rank}")));
        }
        let mult = n.into_iter().flatten().flatten().collect();
        Self::from_flat(names.iter().map(|s| s.to_string()).collect(), dual, mult, qdim)
    }

    pub fn from_flat(names: Vec<String>, dual: Vec<Label>, mult: Vec<u32>, qdim: Option<Vec<f64>>) -> Result<Self> {
        let labels = names
            .into_iter()
            .enumerate()
            .map(|(index, name)| SectorLabel { index, name })
            .collect();
        let mut data = FusionData {
            labels,
            dual,
            mult,
            qdim: Vec::new(),
        };
        data.check_shape()?;
        data.qdim = match qdim {
            Some(d) => d,
            None => compute_qdims(&data)?,
        };
        data.check_shape()?;
        Ok(data)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn n(&self, a: Label, b: Label, c: Label) -> usize {
        let r = self.rank();
        self.mult[(a * r + b) * r + c] as usize
    }

    pub fn d(&self, a: Label) -> f64 {
        self.qdim[a]
    }

    pub fn dual(&self, a: Label) -> Label {
        self.dual[a]
    }

    pub fn name(&self, a: Label) -> &str {
        &self.labels[a].name
    }

    pub fn label_by_name(&self, name: &str) -> Option<Label> {
        self.labels.iter().position(|l| l.name == name)
    }

    /// Labels `c` with `N^c_{ab} > 0`.
    pub fn channels(&self, a: Label, b: Label) -> impl Iterator<Item = Label> + '_ {
        (0..self.rank()).filter(move |&c| self.n(a, b, c) > 0)
    }

    /// `Σ_λ d(λ)²`.
    pub fn global_dim_sq(&self) -> f64 {
        self.qdim.iter().map(|d| d * d).sum()
    }

    fn check_shape(&self) -> Result<()> {
        let r = self.rank();
        if r == 0 {
            return Err(Error::Structure("no labels".into()));
        }
        if self.dual.len() != r {
            return Err(Error::Structure(format!(
                "dual map has {} entries, expected {r}",
                self.dual.len()
            )));
        }
        if self.dual.iter().any(|&d| d >= r) {
            return Err(Error::Structure("dual map refers to unknown label".into()));
        }
        if self.mult.len() != r * r * r {
            return Err(Error::Structure(format!(
                "fusion tensor has {} entries, expected {}",
                self.mult.len(),
                r * r * r
            )));
        }
        if !self.qdim.is_empty() && self.qdim.len() != r {
            return Err(Error::Structure(format!(
                "{} quantum dimensions for {r} labels",
                self.qdim.len()
            )));
        }
        Ok(())
    }
}

/// Checks the closure axioms exactly and the dimension equations to `tol`.
pub fn validate_fusion(data: &FusionData, tol: f64) -> Result<ValidationReport> {
    data.check_shape()?;
    if data.qdim.len() != data.rank() {
        return Err(Error::Structure("missing quantum dimensions".into()));
    }
    let r = data.rank();
    let name = |a: Label| data.name(a).to_string();
    let mut rep = ValidationReport::default();

    for a in 0..r {
        if data.dual(data.dual(a)) != a {
            rep.push("dual involution", format!("dual(dual({})) != {}", name(a), name(a)));
        }
        for c in 0..r {
            let delta = u32::from(a == c) as usize;
            if data.n(a, UNIT, c) != delta || data.n(UNIT, a, c) != delta {
                rep.push(
                    "identity",
                    format!(
                        "N^{}_{{{},0}} or N^{}_{{0,{}}} != δ",
                        name(c),
                        name(a),
                        name(c),
                        name(a)
                    ),
                );
            }
        }
        for b in 0..r {
            let want = usize::from(b == data.dual(a));
            if data.n(a, b, UNIT) != want {
                rep.push(
                    "conjugate",
                    format!(
                        "N^0_{{{},{}}} = {} but dual({}) = {}",
                        name(a),
                        name(b),
                        data.n(a, b, UNIT),
                        name(a),
                        name(data.dual(a))
                    ),
                );
            }
            for c in 0..r {
                let v = data.n(a, b, c);
                if v != data.n(data.dual(a), c, b) || v != data.n(c, data.dual(b), a) {
                    rep.push(
                        "frobenius reciprocity",
                        format!("N^{}_{{{},{}}}", name(c), name(a), name(b)),
                    );
                }
            }
        }
    }

    for a in 0..r {
        for b in 0..r {
            for k in 0..r {
                for v in 0..r {
                    let lhs: usize = (0..r).map(|s| data.n(a, b, s) * data.n(s, k, v)).sum();
                    let rhs: usize = (0..r).map(|s| data.n(a, s, v) * data.n(b, k, s)).sum();
                    if lhs != rhs {
                        rep.push(
                            "associativity",
                            format!(
                                "(({} {}) {}) -> {}: {} != {}",
                                name(a),
                                name(b),
                                name(k),
                                name(v),
                                lhs,
                                rhs
                            ),
                        );
                    }
                }
            }
        }
    }

    if (data.d(UNIT) - 1.0).abs() > tol {
        rep.push("dimension", format!("d(0) = {}", data.d(UNIT)));
    }
    for a in 0..r {
        if data.d(a) <= 0.0 {
            rep.push("dimension", format!("d({}) = {} is not positive", name(a), data.d(a)));
        }
        if (data.d(a) - data.d(data.dual(a))).abs() > tol {
            rep.push("dimension", format!("d({}) != d(dual)", name(a)));
        }
        for b in 0..r {
            let rhs: f64 = (0..r).map(|c| data.n(a, b, c) as f64 * data.d(c)).sum();
            let res = (data.d(a) * data.d(b) - rhs).abs();
            if res > tol * rhs.max(1.0) {
                rep.push("dimension", format!("d({})d({}) - Σ N d = {:e}", name(a), name(b), res));
            }
        }
    }
    Ok(rep)
}

/// Perron–Frobenius dimensions from the fusion rules, normalised `d(0) = 1`.
pub fn compute_qdims(data: &FusionData) -> Result<Vec<f64>> {
    let r = data.rank();
    if data.mult.len() != r * r * r {
        return Err(Error::Structure("fusion tensor shape".into()));
    }
    // d is a common right eigenvector of every fusion matrix (N_λ)_{μν}; power
    // iteration on Σ_λ N_λ + 1 converges to it.
    let mut v = vec![1.0; r];
    let mut converged = false;
    for _ in 0..100_000 {
        let mut w = v.clone();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    w[b] += data.n(a, b, c) as f64 * v[c];
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if delta < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged || v[UNIT] <= 0.0 {
        return Err(Error::InvalidFusion(
            "Perron-Frobenius iteration did not converge".into(),
        ));
    }
    let scale = v[UNIT];
    let d: Vec<f64> = v.iter().map(|x| x / scale).collect();
    if d.iter().any(|&x| x <= 0.0) {
        return Err(Error::InvalidFusion("non-positive Perron-Frobenius entry".into()));
    }
    for a in 0..r {
        for b in 0..r {
            let rhs: f64 = (0..r).map(|c| data.n(a, b, c) as f64 * d[c]).sum();
            if (d[a] * d[b] - rhs).abs() > 1e-9 * rhs.max(1.0) {
                return Err(Error::InvalidFusion(format!(
                    "dimension equations fail for ({}, {})",
                    data.name(a),
                    data.name(b)
                )));
            }
        }
    }
    Ok(d)
}
