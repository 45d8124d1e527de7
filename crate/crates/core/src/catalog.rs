//! Concrete categories built from closed-form symbols. These generate the
//! bundled data files and serve as independent references for them.

use std::f64::consts::PI;

use crate::category::CategoryModel;
use crate::error::Result;
use crate::fusion::{FusionData, Label};
use crate::linalg::{c, C64, ONE};

fn fusion_from_rules(
    names: &[&str],
    dual: Vec<Label>,
    rules: &[(Label, Label, Label)],
    qdim: Option<Vec<f64>>,
) -> Result<FusionData> {
    let n = names.len();
    let mut t = vec![vec![vec![0u32; n]; n]; n];
    for &(a, b, x) in rules {
        t[a][b][x] = 1;
    }
    FusionData::new(names, dual, t, qdim)
}

fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// `Vec` with a single label: fusion `1·1 = 1`.
pub fn trivial() -> Result<CategoryModel> {
    let fusion = FusionData::new(&["1"], vec![0], vec![vec![vec![1]]], Some(vec![1.0]))?;
    CategoryModel::from_fn("trivial", fusion, |_, _, _, _, _, _| ONE, Some(|_, _, _, _, _| ONE))
}

/// Fibonacci: `τ·τ = 1 + τ`.
pub fn fibonacci() -> Result<CategoryModel> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let fusion = fusion_from_rules(
        &["1", "tau"],
        vec![0, 1],
        &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)],
        Some(vec![1.0, phi]),
    )?;
    let f = move |a, b, cc, d, l: (Label, usize, usize), r: (Label, usize, usize)| {
        if (a, b, cc, d) == (1, 1, 1, 1) {
            let (e, f) = (l.0, r.0);
            match (e, f) {
                (0, 0) => c(1.0 / phi, 0.0),
                (1, 1) => c(-1.0 / phi, 0.0),
                _ => c(1.0 / phi.sqrt(), 0.0),
            }
        } else {
            ONE
        }
    };
    let r = |a, b, x, _i, _j| match (a, b, x) {
        (1, 1, 0) => phase(-4.0 * PI / 5.0),
        (1, 1, 1) => phase(3.0 * PI / 5.0),
        _ => ONE,
    };
    CategoryModel::from_fn("fibonacci", fusion, f, Some(r))
}

/// Ising: labels `1, σ, ψ`.
pub fn ising() -> Result<CategoryModel> {
    let s2 = 2f64.sqrt();
    let fusion = fusion_from_rules(
        &["1", "sigma", "psi"],
        vec![0, 1, 2],
        &[
            (0, 0, 0),
            (0, 1, 1),
            (0, 2, 2),
            (1, 0, 1),
            (2, 0, 2),
            (1, 1, 0),
            (1, 1, 2),
            (1, 2, 1),
            (2, 1, 1),
            (2, 2, 0),
        ],
        Some(vec![1.0, s2, 1.0]),
    )?;
    let f = move |a, b, cc, d, l: (Label, usize, usize), r: (Label, usize, usize)| match (a, b, cc, d) {
        (1, 1, 1, 1) => {
            if l.0 == 2 && r.0 == 2 {
                c(-1.0 / s2, 0.0)
            } else {
                c(1.0 / s2, 0.0)
            }
        }
        (1, 2, 1, 2) | (2, 1, 2, 1) => c(-1.0, 0.0),
        _ => ONE,
    };
    let r = |a, b, x, _i, _j| match (a, b, x) {
        (1, 1, 0) => phase(-PI / 8.0),
        (1, 1, 2) => phase(3.0 * PI / 8.0),
        (1, 2, 1) | (2, 1, 1) => c(0.0, -1.0),
        (2, 2, 0) => c(-1.0, 0.0),
        _ => ONE,
    };
    CategoryModel::from_fn("ising", fusion, f, Some(r))
}

/// q-number `[n]` at `q = e^{iπ/(k+2)}`.
fn qnum(n: i64, k: u32) -> f64 {
    let h = PI / (k as f64 + 2.0);
    (n as f64 * h).sin() / h.sin()
}

fn qfact(n: i64, k: u32) -> f64 {
    (1..=n).map(|m| qnum(m, k)).product()
}

/// Triangle coefficient with doubled spins.
fn triangle(a: i64, b: i64, x: i64, k: u32) -> f64 {
    (qfact((a + b - x) / 2, k) * qfact((a - b + x) / 2, k) * qfact((-a + b + x) / 2, k) / qfact((a + b + x) / 2 + 1, k))
        .sqrt()
}

/// Quantum 6j symbol `{a b e; c d f}_q` with doubled spins (Racah formula).
fn six_j(a: i64, b: i64, e: i64, cc: i64, d: i64, f: i64, k: u32) -> f64 {
    let pre = triangle(a, b, e, k) * triangle(a, d, f, k) * triangle(cc, b, f, k) * triangle(cc, d, e, k);
    let lo = [a + b + e, a + d + f, cc + b + f, cc + d + e]
        .into_iter()
        .max()
        .unwrap()
        / 2;
    let hi = [a + b + cc + d, a + e + cc + f, b + e + d + f]
        .into_iter()
        .min()
        .unwrap()
        / 2;
    let mut sum = 0.0;
    for z in lo..=hi {
        let den = qfact(z - (a + b + e) / 2, k)
            * qfact(z - (a + d + f) / 2, k)
            * qfact(z - (cc + b + f) / 2, k)
            * qfact(z - (cc + d + e) / 2, k)
            * qfact((a + b + cc + d) / 2 - z, k)
            * qfact((a + e + cc + f) / 2 - z, k)
            * qfact((b + e + d + f) / 2 - z, k);
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * qfact(z + 1, k) / den;
    }
    pre * sum
}

/// `SU(2)_k`; label `a` is twice the spin.
pub fn su2(k: u32) -> Result<CategoryModel> {
    let n = k as usize + 1;
    let names: Vec<String> = (0..n).map(|a| a.to_string()).collect();
    let names_ref: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut rules = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for x in 0..n {
                let (ai, bi, xi, ki) = (a as i64, b as i64, x as i64, k as i64);
                if (ai - bi).abs() <= xi && xi <= (ai + bi).min(2 * ki - ai - bi) && (ai + bi + xi) % 2 == 0 {
                    rules.push((a, b, x));
                }
            }
        }
    }
    let qdim = (0..n).map(|a| qnum(a as i64 + 1, k)).collect();
    let fusion = fusion_from_rules(&names_ref, (0..n).collect(), &rules, Some(qdim))?;
    let f = move |a: Label, b: Label, cc: Label, d: Label, l: (Label, usize, usize), r: (Label, usize, usize)| {
        let (a, b, cc, d, e, f) = (a as i64, b as i64, cc as i64, d as i64, l.0 as i64, r.0 as i64);
        let sign = if ((a + b + cc + d) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let v = sign * (qnum(e + 1, k) * qnum(f + 1, k)).sqrt() * six_j(a, b, e, cc, d, f, k);
        c(v, 0.0)
    };
    let r = move |a: Label, b: Label, x: Label, _i, _j| {
        let (a, b, x) = (a as f64 / 2.0, b as f64 / 2.0, x as f64 / 2.0);
        let sign = if ((x - a - b).round() as i64).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        let h = x * (x + 1.0) - a * (a + 1.0) - b * (b + 1.0);
        phase(PI * h / (k as f64 + 2.0)) * sign
    };
    CategoryModel::from_fn(&format!("su2_{k}"), fusion, f, Some(r))
}

/// Pointed braided `ℤ_n` with quadratic form `q(a) = e^{iπ p a²/n}`.
/// For even `n` and odd `p` the associator is the nontrivial cocycle.
pub fn pointed_cyclic(n: usize, p: i64) -> Result<CategoryModel> {
    let names: Vec<String> = (0..n).map(|a| a.to_string()).collect();
    let names_ref: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut rules = Vec::new();
    for a in 0..n {
        for b in 0..n {
            rules.push((a, b, (a + b) % n));
        }
    }
    let dual = (0..n).map(|a| (n - a) % n).collect();
    let fusion = fusion_from_rules(&names_ref, dual, &rules, Some(vec![1.0; n]))?;
    let nf = n as f64;
    let f = move |a: Label, b: Label, cc: Label, _d, _l, _r| {
        let carry = (b + cc) - (b + cc) % n;
        phase(PI * (p as f64) * (a as f64) * (carry as f64) / nf)
    };
    let r = move |a: Label, b: Label, _x, _i, _j| phase(PI * (p as f64) * (a * b) as f64 / nf);
    CategoryModel::from_fn(&format!("z{n}"), fusion, f, Some(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::verify_category;

    fn assert_coherent(m: &CategoryModel) {
        let rep = verify_category(m, 1e-9).unwrap();
        assert!(rep.passes(1e-9), "{}: {:?}", m.name, rep);
    }

    #[test]
    fn catalog_models_are_coherent() {
        for m in [
            trivial(),
            fibonacci(),
            ising(),
            pointed_cyclic(2, 0),
            pointed_cyclic(4, 1),
        ] {
            assert_coherent(&m.unwrap());
        }
    }

    #[test]
    fn su2_levels_are_coherent() {
        for k in 1..=4 {
            assert_coherent(&su2(k).unwrap());
        }
    }

    #[test]
    fn su2_4_dimensions() {
        let m = su2(4).unwrap();
        let d: Vec<f64> = m.fusion.qdim.clone();
        let want = [1.0, 3f64.sqrt(), 2.0, 3f64.sqrt(), 1.0];
        for (x, y) in d.iter().zip(want) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
