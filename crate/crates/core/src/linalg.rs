//! Dense complex matrices stored as split real/imaginary `f64` arrays so the
//! products go through ndarray's real GEMM. Single-threaded and therefore
//! bit-reproducible.

use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub(crate) struct CMat {
    re: Array2<f64>,
    /// `None` when the matrix is exactly real.
    im: Option<Array2<f64>>,
}

impl CMat {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut re = Array2::zeros((rows, cols));
        let mut im = Array2::zeros((rows, cols));
        let mut any_im = false;
        for i in 0..rows {
            for j in 0..cols {
                let z = f(i, j);
                re[[i, j]] = z.re;
                im[[i, j]] = z.im;
                any_im |= z.im != 0.0;
            }
        }
        CMat {
            re,
            im: any_im.then_some(im),
        }
    }

    pub fn rows(&self) -> usize {
        self.re.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[[i, j]], self.im.as_ref().map_or(0.0, |m| m[[i, j]]))
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        let rr = self.re.dot(&other.re);
        match (&self.im, &other.im) {
            (None, None) => CMat { re: rr, im: None },
            (Some(ai), None) => CMat {
                re: rr,
                im: Some(ai.dot(&other.re)),
            },
            (None, Some(bi)) => CMat {
                re: rr,
                im: Some(self.re.dot(bi)),
            },
            (Some(ai), Some(bi)) => CMat {
                re: rr - ai.dot(bi),
                im: Some(self.re.dot(bi) + ai.dot(&other.re)),
            },
        }
    }

    pub fn conj_transpose(&self) -> CMat {
        CMat {
            re: self.re.t().to_owned(),
            im: self.im.as_ref().map(|m| -m.t().to_owned()),
        }
    }

    pub fn transpose(&self) -> CMat {
        CMat {
            re: self.re.t().to_owned(),
            im: self.im.as_ref().map(|m| m.t().to_owned()),
        }
    }

    /// `self · diag(d)`.
    pub fn scale_columns(&self, d: &[Complex64]) -> CMat {
        let n = self.rows();
        let m = self.re.ncols();
        CMat::from_fn(n, m, |i, j| self.get(i, j) * d[j])
    }

    /// `diag(d) · self`.
    pub fn scale_rows(&self, d: &[Complex64]) -> CMat {
        let n = self.rows();
        let m = self.re.ncols();
        CMat::from_fn(n, m, |i, j| d[i] * self.get(i, j))
    }

    /// `Σ_ij self_ij · other_ij`, without conjugation.
    pub fn bilinear_sum(&self, other: &CMat) -> Complex64 {
        let rr = Zip::from(&self.re)
            .and(&other.re)
            .fold(0.0, |acc, a, b| acc + a * b);
        let zero = Array2::zeros(self.re.raw_dim());
        let ai = self.im.as_ref().unwrap_or(&zero);
        let bi = other.im.as_ref().unwrap_or(&zero);
        let ii = Zip::from(ai).and(bi).fold(0.0, |acc, a, b| acc + a * b);
        let ri = Zip::from(&self.re)
            .and(bi)
            .fold(0.0, |acc, a, b| acc + a * b);
        let ir = Zip::from(ai)
            .and(&other.re)
            .fold(0.0, |acc, a, b| acc + a * b);
        Complex64::new(rr - ii, ri + ir)
    }
}

pub(crate) fn real_diag(v: &Array1<f64>) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
