//! Small dense linear-algebra helpers shared by the solvers.
//!
//! Everything is built on `nalgebra` dynamic matrices over `Complex64`.
//! Vectorization is column-major, matching the storage order of `DMatrix`,
//! so `vec(A)` is a plain copy of the backing slice.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[inline]
pub fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

pub fn frob_sq(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

pub fn vec_of(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvec(v: &CVec, rows: usize, cols: usize) -> CMat {
    assert_eq!(v.len(), rows * cols, "unvec length");
    CMat::from_column_slice(rows, cols, v.as_slice())
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for q in 0..bc {
                for p in 0..br {
                    out[(i * br + p, j * bc + q)] = s * b[(p, q)];
                }
            }
        }
    }
    out
}

/// Largest entry of |M - M^H|.
pub fn hermitian_asymmetry(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn ensure_square(m: &CMat, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Embeds a complex Hermitian matrix as the real symmetric `[Re, -Im; Im, Re]`.
pub fn realify(m: &CMat) -> RMat {
    let n = m.nrows();
    let mut r = RMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            r[(i, j)] = z.re;
            r[(i + n, j + n)] = z.re;
            r[(i, j + n)] = -z.im;
            r[(i + n, j)] = z.im;
        }
    }
    r
}

/// Inverse of [`realify`] that also averages out any unstructured part.
pub fn complexify(r: &RMat) -> CMat {
    let n = r.nrows() / 2;
    CMat::from_fn(n, n, |i, j| {
        let re = 0.5 * (r[(i, j)] + r[(i + n, j + n)]);
        let im = 0.5 * (r[(i + n, j)] - r[(i, j + n)]);
        C64::new(re, im)
    })
}

/// Rotates `v` so that its largest-magnitude entry is real and positive.
pub fn fix_phase(v: &mut [C64]) {
    let pivot = v
        .iter()
        .copied()
        .enumerate()
        .fold((0usize, -1.0f64), |best, (i, z)| {
            // strict > keeps the first index on ties
            if z.norm() > best.1 + 1e-12 {
                (i, z.norm())
            } else {
                best
            }
        })
        .0;
    let z = v[pivot];
    if z.norm() == 0.0 {
        return;
    }
    let rot = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= rot;
    }
}

/// Thin SVD with singular values sorted in descending order.
///
/// Columns of `u` and `v` are phase-fixed so that the largest-magnitude entry
/// of each right singular vector is real positive (the left vector absorbs
/// the matching rotation so that `u diag(s) v^H` is unchanged).
pub struct SortedSvd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

impl SortedSvd {
    pub fn new(m: &CMat) -> Self {
        let svd = m.clone().svd(true, true);
        let u = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v_t requested");
        let k = svd.singular_values.len();
        let mut order: Vec<usize> = (0..k).collect();
        // stable sort: ties keep decomposition order
        order.sort_by(|&a, &b| {
            svd.singular_values[b]
                .partial_cmp(&svd.singular_values[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut uo = CMat::zeros(m.nrows(), k);
        let mut vo = CMat::zeros(m.ncols(), k);
        let mut s = Vec::with_capacity(k);
        for (dst, &src) in order.iter().enumerate() {
            let mut vcol: Vec<C64> = vt.row(src).iter().map(|z| z.conj()).collect();
            let before = vcol.clone();
            fix_phase(&mut vcol);
            // rotation applied to v: r = vcol[i]/before[i] for any nonzero entry
            let rot = before
                .iter()
                .zip(&vcol)
                .find(|(b, _)| b.norm() > 1e-300)
                .map(|(b, a)| a / b)
                .unwrap_or(ONE);
            for (i, z) in vcol.iter().enumerate() {
                vo[(i, dst)] = *z;
            }
            for i in 0..m.nrows() {
                uo[(i, dst)] = u[(i, src)] * rot;
            }
            s.push(svd.singular_values[src]);
        }
        SortedSvd {
            u: uo,
            singular_values: s,
            v: vo,
        }
    }

    pub fn rank(&self, tol: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > tol * top).count()
    }
}

/// Moore-Penrose pseudoinverse; singular values below `rcond * s_max` are dropped.
pub fn pinv(m: &CMat, rcond: f64) -> CMat {
    let svd = SortedSvd::new(m);
    let top = svd.singular_values.first().copied().unwrap_or(0.0);
    let mut out = CMat::zeros(m.ncols(), m.nrows());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= rcond * top || s == 0.0 {
            continue;
        }
        let vk = svd.v.column(k);
        let uk = svd.u.column(k);
        out += (vk * uk.adjoint()) * C64::new(1.0 / s, 0.0);
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in descending order.
pub fn hermitian_eigen_desc(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(r: usize, c: usize, salt: f64) -> CMat {
        CMat::from_fn(r, c, |i, j| {
            C64::new(
                ((i * 7 + j * 3) as f64 + salt).sin(),
                ((i * 5 + j * 11) as f64 * 0.7 + salt).cos(),
            )
        })
    }

    #[test]
    fn realify_round_trip() {
        let a = sample(4, 4, 0.3);
        let h = &a + a.adjoint();
        let back = complexify(&realify(&h));
        assert!((back - &h).norm() < 1e-14);
    }

    #[test]
    fn realified_trace_doubles() {
        let a = sample(3, 3, 1.0);
        let b = sample(3, 3, 2.0);
        let ha = &a + a.adjoint();
        let hb = &b * b.adjoint();
        let tc = (&ha * &hb).trace().re;
        let tr = (realify(&ha) * realify(&hb)).trace();
        assert!((tr - 2.0 * tc).abs() < 1e-10);
    }

    #[test]
    fn vec_identity_for_kron() {
        // vec(A X B) = (B^T kron A) vec(X)
        let a = sample(3, 4, 0.1);
        let x = sample(4, 2, 0.2);
        let b = sample(2, 5, 0.4);
        let lhs = vec_of(&(&a * &x * &b));
        let rhs = kron(&b.transpose(), &a) * vec_of(&x);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn sorted_svd_reconstructs() {
        let m = sample(5, 7, 0.9);
        let svd = SortedSvd::new(&m);
        for w in svd.singular_values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let s = CMat::from_diagonal(&CVec::from_iterator(
            svd.singular_values.len(),
            svd.singular_values.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let rec = &svd.u * s * svd.v.adjoint();
        assert!((rec - &m).norm() / m.norm() < 1e-12);
    }

    #[test]
    fn pinv_of_tall_full_rank() {
        let m = sample(6, 3, 0.5);
        let p = pinv(&m, 1e-12);
        let eye = &p * &m;
        assert!((eye - CMat::identity(3, 3)).norm() < 1e-10);
    }
}
