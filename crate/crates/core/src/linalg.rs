//! Small dense complex helpers shared by the model, metrics and optimizers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// `(A + A^H) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Eigen-decomposition of the Hermitian part of `a`, eigenvalues ascending.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(a).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `U diag(f(lambda)) U^H`, symmetrized.
pub fn reassemble(values: &[f64], vectors: &CMatrix) -> CMatrix {
    let n = values.len();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lam) in values.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        let u = vectors.column(k);
        out += (u * u.adjoint()).scale(lam);
    }
    hermitian_part(&out)
}

/// `Re tr(A B)` without forming the product.
pub fn re_trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..a.ncols() {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// `Re(v^H A v)` for Hermitian `A`.
pub fn quad_form(a: &CMatrix, v: &CVector) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for j in 0..n {
        let vj = v[j];
        if vj == C64::new(0.0, 0.0) {
            continue;
        }
        let mut col = C64::new(0.0, 0.0);
        for i in 0..n {
            col += v[i].conj() * a[(i, j)];
        }
        acc += (col * vj).re;
    }
    acc
}

/// `tr(v v^H) = ||v||^2`.
pub fn power(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Rescales `v` so that `tr(v v^H) = budget`. The zero vector is returned unchanged.
pub fn rescale_power(v: &CVector, budget: f64) -> CVector {
    let p = power(v);
    if p == 0.0 {
        return v.clone();
    }
    v.scale((budget / p).sqrt())
}

/// `log2(sum exp(x_i))` with max-shifting.
pub fn log2_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    (max + s.ln()) / std::f64::consts::LN_2
}

/// Overwrites `xs` with the softmax weights and returns `log2(sum exp(x_i))`.
pub fn softmax_in_place(xs: &mut [f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for x in xs.iter_mut() {
        *x = (*x - max).exp();
        s += *x;
    }
    for x in xs.iter_mut() {
        *x /= s;
    }
    (max + s.ln()) / std::f64::consts::LN_2
}
