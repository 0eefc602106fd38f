//! Literal nested-loop sums. The outermost index is spread over threads and
//! the partial sums are added back in index order.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{DiscreteModel, Tables};

fn ordered_sum(parts: Vec<Complex64>) -> Complex64 {
    parts
        .into_iter()
        .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
}

/// `[J, J_A, J_B, J_AB]` by a plain double loop.
pub(crate) fn two_dim_sums(dm: &DiscreteModel) -> [f64; 4] {
    let mut acc = [0.0; 4];
    for i in 0..dm.len_a() {
        for j in 0..dm.len_b() {
            let p = dm.weights_a[i] * dm.weights_b[j] * dm.g_matrix[[i, j]].norm_sqr();
            acc[0] += p;
            acc[1] += dm.fa_vec[i] * p;
            acc[2] += dm.fb_vec[j] * p;
            acc[3] += dm.fa_vec[i] * dm.fb_vec[j] * p;
        }
    }
    acc
}

/// `J_4 = 2 Re Σ F_A(x) F_B(y) g*(x,y) g*(x',y') g(x,y') g(x',y)` over four
/// indices.
pub(crate) fn j4_sum(dm: &DiscreteModel) -> f64 {
    let (na, nb) = (dm.len_a(), dm.len_b());
    let g = &dm.g_matrix;
    let parts: Vec<Complex64> = (0..na)
        .into_par_iter()
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..nb {
                let outer = dm.weights_a[x]
                    * dm.weights_b[y]
                    * dm.fa_vec[x]
                    * dm.fb_vec[y]
                    * g[[x, y]].conj();
                for xp in 0..na {
                    for yp in 0..nb {
                        acc += outer
                            * (dm.weights_a[xp] * dm.weights_b[yp])
                            * g[[xp, yp]].conj()
                            * g[[x, yp]]
                            * g[[xp, y]];
                    }
                }
            }
            acc
        })
        .collect();
    2.0 * ordered_sum(parts).re
}

/// `Σ u(a,b) u*(a',b') S_a(a,a') S_b(b,b')` with `u = n_a G n_b`.
pub(crate) fn r2(t: &Tables) -> f64 {
    let (na, nb) = t.g.dim();
    let u = |a: usize, b: usize| t.na[a] * t.g[[a, b]] * t.nb[b];
    let parts: Vec<Complex64> = (0..na)
        .into_par_iter()
        .map(|a| {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..nb {
                let uab = u(a, b);
                for ap in 0..na {
                    for bp in 0..nb {
                        acc += uab * u(ap, bp).conj() * t.sa[[a, ap]] * t.sb[[b, bp]];
                    }
                }
            }
            acc
        })
        .collect();
    ordered_sum(parts).re
}

/// Six-index sum of
/// `G*(ã,b̃) G*(a',b') G(ã,b) G(a,b̃)` with node and window factors.
pub(crate) fn r42(t: &Tables) -> Complex64 {
    let (na, nb) = t.g.dim();
    let g = &t.g;
    let parts: Vec<Complex64> = (0..na)
        .into_par_iter()
        .map(|at| {
            let mut acc = Complex64::new(0.0, 0.0);
            for bt in 0..nb {
                let p1 = t.wa[at] * t.wb[bt] * g[[at, bt]].conj();
                for a in 0..na {
                    let p2 = p1 * g[[a, bt]] * t.na[a];
                    for ap in 0..na {
                        let p3 = p2 * t.sa[[a, ap]] * t.na[ap].conj();
                        for b in 0..nb {
                            let p4 = p3 * g[[at, b]] * t.nb[b];
                            for bp in 0..nb {
                                acc += p4 * g[[ap, bp]].conj() * t.nb[bp].conj() * t.sb[[b, bp]];
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();
    ordered_sum(parts)
}

/// Six-index sum of
/// `G*(ã,b') G*(a',b̃) G(ã,b) G(a,b̃)` with node and window factors.
pub(crate) fn r43(t: &Tables) -> Complex64 {
    let (na, nb) = t.g.dim();
    let g = &t.g;
    let parts: Vec<Complex64> = (0..na)
        .into_par_iter()
        .map(|at| {
            let mut acc = Complex64::new(0.0, 0.0);
            for bt in 0..nb {
                let p1 = t.wa[at] * t.wb[bt];
                for a in 0..na {
                    let p2 = p1 * g[[a, bt]] * t.na[a];
                    for ap in 0..na {
                        let p3 = p2 * t.sa[[a, ap]] * t.na[ap].conj() * g[[ap, bt]].conj();
                        for b in 0..nb {
                            let p4 = p3 * g[[at, b]] * t.nb[b];
                            for bp in 0..nb {
                                acc += p4 * g[[at, bp]].conj() * t.nb[bp].conj() * t.sb[[b, bp]];
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();
    ordered_sum(parts)
}
