//! Null spaces and orthonormal bases with a declared numerical rank cutoff.

use crate::tensor::{CMat, C64};

/// Singular values at or below `REL_CUTOFF × max(σ_max, 1)` count as zero in
/// kernel computations; rank and span computations use `REL_CUTOFF × σ_max`.
pub const REL_CUTOFF: f64 = 1e-9;

/// Orthonormal basis (as columns) of the kernel of `a`.
///
/// The cutoff is `rel_tol × max(σ_max, 1)`: callers pass operators whose
/// natural scale is 1, and an operator that vanishes up to roundoff must
/// have a full kernel.
///
/// Tall inputs are first reduced by a QR factorization, so the SVD only sees a
/// square `cols × cols` factor with the same singular values.
pub fn null_space(a: &CMat, rel_tol: f64) -> CMat {
    let cols = a.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    let square = if a.nrows() >= cols {
        a.clone().qr().r()
    } else {
        let mut padded = CMat::zeros(cols, cols);
        padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        padded
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thr = rel_tol * smax.max(1.0);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= thr).collect();
    CMat::from_fn(cols, keep.len(), |r, k| v_t[(keep[k], r)].conj())
}

/// Orthonormal basis (as columns) of the column span of `a`.
pub fn column_span(a: &CMat, rel_tol: f64) -> CMat {
    if a.ncols() == 0 || a.nrows() == 0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > rel_tol * smax).collect();
    CMat::from_fn(a.nrows(), keep.len(), |r, k| u[(r, keep[k])])
}

/// Numerical rank with the relative cutoff.
pub fn rank(a: &CMat, rel_tol: f64) -> usize {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Euclidean distance from `v` to the span of the orthonormal columns `q`.
pub fn distance_to_span(q: &CMat, v: &[C64]) -> f64 {
    let mut r: Vec<C64> = v.to_vec();
    for k in 0..q.ncols() {
        let col = q.column(k);
        let coef: C64 = col.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
        for (ri, ai) in r.iter_mut().zip(col.iter()) {
            *ri -= coef * ai;
        }
    }
    r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Incrementally grown orthonormal family of vectors (modified Gram–Schmidt
/// with one reorthogonalization pass).
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    pub dim: usize,
    pub vectors: Vec<Vec<C64>>,
}

impl OrthoBasis {
    pub fn new(dim: usize) -> Self {
        Self { dim, vectors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn project_out(&self, r: &mut [C64]) {
        for _ in 0..2 {
            for q in &self.vectors {
                let coef: C64 = q.iter().zip(r.iter()).map(|(a, b)| a.conj() * b).sum();
                for (ri, qi) in r.iter_mut().zip(q.iter()) {
                    *ri -= coef * qi;
                }
            }
        }
    }

    /// Relative distance of `v` from the current span.
    pub fn residual(&self, v: &[C64]) -> f64 {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let mut r = v.to_vec();
        self.project_out(&mut r);
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / norm
    }

    /// Adds `v` if its relative residual exceeds `tol`; returns whether it was added.
    pub fn push(&mut self, v: &[C64], tol: f64) -> bool {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        self.push_above(v, tol * norm)
    }

    /// Adds `v` if the norm of its component outside the span exceeds `abs_tol`.
    pub fn push_above(&mut self, v: &[C64], abs_tol: f64) -> bool {
        let mut r = v.to_vec();
        self.project_out(&mut r);
        let rn = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if rn == 0.0 || rn <= abs_tol {
            return false;
        }
        for z in r.iter_mut() {
            *z /= rn;
        }
        self.vectors.push(r);
        true
    }

    pub fn as_columns(&self) -> CMat {
        CMat::from_fn(self.dim, self.vectors.len(), |r, k| self.vectors[k][r])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::c;

    #[test]
    fn null_space_of_rank_one() {
        let a = CMat::from_fn(5, 3, |i, j| c((i + 1) as f64 * (j + 1) as f64, 0.0));
        let n = null_space(&a, REL_CUTOFF);
        assert_eq!(n.ncols(), 2);
        assert!((&a * &n).norm() < 1e-12);
        let wide = CMat::from_fn(1, 3, |_, j| c(j as f64, 1.0));
        assert_eq!(null_space(&wide, REL_CUTOFF).ncols(), 2);
    }

    #[test]
    fn ortho_basis_rejects_dependent() {
        let mut b = OrthoBasis::new(3);
        assert!(b.push(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 1e-9));
        assert!(b.push(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], 1e-9));
        assert!(!b.push(&[c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0)], 1e-9));
        assert_eq!(b.len(), 2);
        assert_eq!(rank(&b.as_columns(), REL_CUTOFF), 2);
    }
}
