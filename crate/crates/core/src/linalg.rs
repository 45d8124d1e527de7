//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest singular value. Empty matrices have norm zero.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    // Cheap path for vectors and scalars.
    if m.nrows() == 1 || m.ncols() == 1 {
        return m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Orthonormal basis (as columns) of the null space of `m`, using a full SVD
/// with a relative rank cutoff.
pub fn null_space(m: &CMatrix, rel_cutoff: f64) -> CMatrix {
    let n = m.ncols();
    if n == 0 {
        return zeros(0, 0);
    }
    // Pad with zero rows so the SVD returns a full right factor.
    let rows = m.nrows().max(n);
    let mut padded = zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = if smax > 0.0 { rel_cutoff * smax } else { 0.0 };
    let cols: Vec<usize> = (0..n).filter(|&k| svd.singular_values[k] <= cutoff).collect();
    let mut out = zeros(n, cols.len());
    for (j, &k) in cols.iter().enumerate() {
        for i in 0..n {
            out[(i, j)] = v_t[(k, i)].conj();
        }
    }
    out
}

/// Multiply by a phase so that the first entry of significant magnitude is
/// real and positive.
pub fn fix_phase(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-6 * scale) {
        let ph = first.conj() / first.norm();
        for z in v.iter_mut() {
            *z *= ph;
        }
    }
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs(&(m.adjoint() * m - identity(m.nrows()))) < tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let m = CMatrix::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&m * &ns)) < 1e-12);
        assert!(max_abs(&(ns.adjoint() * &ns - identity(2))) < 1e-12);
    }

    #[test]
    fn op_norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(0.0, -3.0)]));
        assert!((op_norm(&m) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn phase_fixing() {
        let mut v = vec![ZERO, c(0.0, 2.0), c(1.0, 0.0)];
        fix_phase(&mut v);
        assert!((v[1] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((v[2] - c(0.0, -1.0)).norm() < 1e-12);
    }
}
