use ctps::alpha::{internal_end, simple_current, CouplingMatrix};
use ctps::bundle::*;
use ctps::catalog;
use std::path::Path;
/// Regenerates the files in `data/` from the built-in catalog.
fn main() {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data").to_string());
    let d = Path::new(&dir);
    write_category(
        &d.join("trivial.cat"),
        &catalog::trivial().unwrap(),
        &["Trivial system {id}: a single label, all symbols 1."],
    )
    .unwrap();
    write_category(
        &d.join("fib.cat"),
        &catalog::fibonacci().unwrap(),
        &[
            "Fibonacci category {1, τ}, τ τ = 1 + τ.",
            "F^{τττ}_τ = [[φ⁻¹, φ^{-1/2}], [φ^{-1/2}, -φ⁻¹]] in the basis (e = 1, e = τ).",
            "R^{ττ}_1 = exp(-4πi/5), R^{ττ}_τ = exp(3πi/5).",
        ],
    )
    .unwrap();
    write_category(
        &d.join("ising.cat"),
        &catalog::ising().unwrap(),
        &[
            "Ising category {1, σ, ψ}.",
            "F^{σσσ}_σ = (1/√2)[[1, 1], [1, -1]], F^{σψσ}_ψ = F^{ψσψ}_σ = -1.",
            "R^{σσ}_1 = exp(-πi/8), R^{σσ}_ψ = exp(3πi/8), R^{σψ}_σ = R^{ψσ}_σ = -i, R^{ψψ}_1 = -1.",
        ],
    )
    .unwrap();
    write_category(
        &d.join("su2k4.cat"),
        &catalog::su2(4).unwrap(),
        &[
            "SU(2) at level 4, labels 2j = 0..4, q = exp(iπ/6).",
            "F from the Kirillov-Reshetikhin q-6j symbols, F = (-1)^{(a+b+c+d)/2} √([e+1][f+1]) {a b e; c d f}_q.",
            "R^{ab}_c = (-1)^{(c-a-b)/2} q^{(c(c+2) - a(a+2) - b(b+2))/4}.",
        ],
    )
    .unwrap();
    write_category(
        &d.join("z2.cat"),
        &catalog::pointed_cyclic(2, 0).unwrap(),
        &[
            "Pointed ℤ₂ with trivial associator and the symmetric (trivial) braiding.",
            "Degenerate: S is singular, modular checks are skipped.",
        ],
    )
    .unwrap();
    write_category(
        &d.join("z4.cat"),
        &catalog::pointed_cyclic(4, 1).unwrap(),
        &[
            "Pointed ℤ₄ with F^{abc} = exp(iπ a ⌊(b+c)/4⌋) and R^{ab} = exp(iπ ab/4).",
            "Twists θ_a = exp(iπ a²/4); the label 2 is a fermion.",
        ],
    )
    .unwrap();
    let su = catalog::su2(4).unwrap();
    write_algebra(
        &d.join("z2.alg"),
        &su,
        &simple_current(&su, 4).unwrap(),
        &["Simple-current algebra Θ = 0 ⊕ 4 over SU(2)₄; induces the D₄ invariant."],
    )
    .unwrap();
    let z4 = catalog::pointed_cyclic(4, 1).unwrap();
    write_algebra(
        &d.join("z4.alg"),
        &z4,
        &simple_current(&z4, 2).unwrap(),
        &["Simple-current algebra Θ = 0 ⊕ 2 over ℤ₄; induces the charge-conjugation permutation."],
    )
    .unwrap();
    let fib = catalog::fibonacci().unwrap();
    write_algebra(
        &d.join("fib_end.alg"),
        &fib,
        &internal_end(&fib, 1).unwrap(),
        &["Internal end τ τ̄ = 1 ⊕ τ over Fibonacci."],
    )
    .unwrap();
    let d4 = CouplingMatrix {
        z: vec![
            vec![1, 0, 0, 0, 1],
            vec![0; 5],
            vec![0, 0, 2, 0, 0],
            vec![0; 5],
            vec![1, 0, 0, 0, 1],
        ],
    };
    std::fs::write(
        d.join("d4.mat"),
        format!("# D4 invariant of SU(2)4\n{}", format_matrix(&d4)),
    )
    .unwrap();
    std::fs::write(d.join("fib_identity.mat"), format_matrix(&CouplingMatrix::identity(2))).unwrap();
}
