//! The oracle sums regrouped into matrix chains. Each function computes the
//! same finite sum as its counterpart in `direct`.

use ndarray::Array2;
use num_complex::Complex64;

use super::{DiscreteModel, Tables};
use crate::linalg::CMat;

fn cmat(a: &Array2<Complex64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

fn conj(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|z| z.conj()).collect()
}

/// `tr(U S_b Uᴴ S_aᵀ)` with `U = diag(n_a) G diag(n_b)`.
pub(crate) fn r2(t: &Tables) -> f64 {
    let u = cmat(&t.g).scale_rows(&t.na).scale_columns(&t.nb);
    let v = u.matmul(&cmat(&t.sb)).matmul(&u.conj_transpose());
    v.bilinear_sum(&cmat(&t.sa)).re
}

/// Six-cycle `ã → b̃ → a → a' → b' → b → ã`.
pub(crate) fn r42(t: &Tables) -> Complex64 {
    let g = cmat(&t.g);
    let gc = CMat::from_fn(t.g.nrows(), t.g.ncols(), |i, j| t.g[[i, j]].conj());
    let chain = gc
        .scale_rows(&t.wa)
        .scale_columns(&t.wb)
        .matmul(&g.transpose())
        .scale_columns(&t.na)
        .matmul(&cmat(&t.sa))
        .scale_columns(&conj(&t.na))
        .matmul(&gc)
        .scale_columns(&conj(&t.nb))
        .matmul(&cmat(&t.sb))
        .scale_columns(&t.nb);
    // Closing edge G(ã, b): tr(X Gᵀ) = Σ X ∘ G.
    chain.bilinear_sum(&g)
}

/// Two independent triangles `(ã, b', b)` and `(a', b̃, a)`.
pub(crate) fn r43(t: &Tables) -> Complex64 {
    let g = cmat(&t.g);
    let gc = CMat::from_fn(t.g.nrows(), t.g.ncols(), |i, j| t.g[[i, j]].conj());
    let first = gc
        .scale_rows(&t.wa)
        .scale_columns(&conj(&t.nb))
        .matmul(&cmat(&t.sb))
        .scale_columns(&t.nb)
        .bilinear_sum(&g);
    let second = gc
        .scale_rows(&conj(&t.na))
        .scale_columns(&t.wb)
        .matmul(&g.transpose())
        .scale_columns(&t.na)
        .bilinear_sum(&cmat(&t.sa));
    first * second
}

/// `J_4 = 2 Re Σ w_x w_y F_A F_B g*(x,y) M(x,y)` with
/// `M = g W_b gᴴ W_a g`.
pub(crate) fn j4(dm: &DiscreteModel) -> f64 {
    let g = cmat(&dm.g_matrix);
    let real = |v: &[f64]| {
        v.iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect::<Vec<_>>()
    };
    let (wa, wb) = (real(&dm.weights_a), real(&dm.weights_b));
    let m = g
        .scale_columns(&wb)
        .matmul(&g.conj_transpose())
        .scale_columns(&wa)
        .matmul(&g);
    let a = CMat::from_fn(dm.len_a(), dm.len_b(), |i, j| {
        dm.g_matrix[[i, j]].conj()
            * (dm.weights_a[i] * dm.weights_b[j] * dm.fa_vec[i] * dm.fb_vec[j])
    });
    2.0 * a.bilinear_sum(&m).re
}
