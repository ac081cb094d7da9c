//! Dense complex matrix kernel for the tensor algebra `M_d^{⊗n}`.
//!
//! Slot 1 is the leftmost Kronecker factor. The canonical shift `φ` prepends an
//! identity on the left, embeddings append identities on the right. Traces
//! crossing a module boundary are always normalized.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

/// Shorthand for a complex number.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Unit complex number `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn ipow(d: usize, n: usize) -> usize {
    d.checked_pow(n as u32).expect("dimension overflow")
}

/// Kronecker product; the first factor occupies the leftmost slot.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn frobenius_norm(a: &CMat) -> f64 {
    a.norm()
}

/// Largest singular value.
pub fn operator_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// `‖x*x − I‖_F ≤ tol`.
pub fn is_unitary(x: &CMat, tol: f64) -> bool {
    x.is_square() && unitarity_residual(x) <= tol
}

pub fn unitarity_residual(x: &CMat) -> f64 {
    (x.adjoint() * x - identity(x.nrows())).norm()
}

/// Normalized Hilbert–Schmidt inner product `τ(a*b)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    let s: C64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(s / a.nrows() as f64)
}

/// Commutator `ab − ba`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// An element of `F_d^n ≅ M_{d^n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub d: usize,
    pub level: usize,
    pub matrix: CMat,
}

impl AlgebraElement {
    pub fn new(d: usize, level: usize, matrix: CMat) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("local dimension must be positive".into()));
        }
        let size = ipow(d, level);
        if matrix.nrows() != size || matrix.ncols() != size {
            return Err(Error::Shape(format!(
                "level {level} over d={d} needs {size}x{size}, got {:?}",
                matrix.shape()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("non-finite matrix entry".into()));
        }
        Ok(Self { d, level, matrix })
    }

    /// Unchecked constructor for internal use where the shape is known.
    pub(crate) fn from_parts(d: usize, level: usize, matrix: CMat) -> Self {
        debug_assert_eq!(matrix.nrows(), ipow(d, level));
        Self { d, level, matrix }
    }

    pub fn identity(d: usize, level: usize) -> Self {
        Self::from_parts(d, level, identity(ipow(d, level)))
    }

    pub fn scalar(d: usize, z: C64) -> Self {
        Self::from_parts(d, 0, CMat::from_element(1, 1, z))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.d, self.level, self.matrix.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d || self.level != other.level {
            return Err(Error::Level(format!("cannot multiply level {} by level {}", self.level, other.level)));
        }
        Ok(Self::from_parts(self.d, self.level, &self.matrix * &other.matrix))
    }

    pub fn embed(&self, target: usize) -> Result<Self> {
        embed(self, target)
    }

    pub fn shift(&self, k: usize) -> Self {
        shift(self, k)
    }

    pub fn trace(&self) -> C64 {
        normalized_trace(self)
    }
}

/// `x ⊗ 1` at level `target`.
pub fn embed(x: &AlgebraElement, target: usize) -> Result<AlgebraElement> {
    if target < x.level {
        return Err(Error::Level(format!("cannot embed level {} into level {target}", x.level)));
    }
    let pad = identity(ipow(x.d, target - x.level));
    Ok(AlgebraElement::from_parts(x.d, target, kron(&x.matrix, &pad)))
}

/// `φ^k(x) = 1_{d^k} ⊗ x`.
pub fn shift(x: &AlgebraElement, k: usize) -> AlgebraElement {
    let pad = identity(ipow(x.d, k));
    AlgebraElement::from_parts(x.d, x.level + k, kron(&pad, &x.matrix))
}

/// `Tr(x)/d^n`.
pub fn normalized_trace(x: &AlgebraElement) -> C64 {
    x.matrix.trace() / x.dim() as f64
}

/// `(1/d)(Tr ⊗ id)`: traces out the first slot.
pub fn partial_trace_left(x: &AlgebraElement) -> Result<AlgebraElement> {
    if x.level == 0 {
        return Err(Error::Level("partial trace of a scalar".into()));
    }
    let d = x.d;
    let m = ipow(d, x.level - 1);
    let mut out = CMat::zeros(m, m);
    for i in 0..d {
        out += x.matrix.view((i * m, i * m), (m, m));
    }
    out /= C64::from(d as f64);
    Ok(AlgebraElement::from_parts(d, x.level - 1, out))
}

/// `(1/d)(id ⊗ Tr)`: traces out the last slot.
pub fn partial_trace_right(x: &AlgebraElement) -> Result<AlgebraElement> {
    if x.level == 0 {
        return Err(Error::Level("partial trace of a scalar".into()));
    }
    let d = x.d;
    let m = ipow(d, x.level - 1);
    let scale = 1.0 / d as f64;
    let out = CMat::from_fn(m, m, |a, b| {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..d {
            s += x.matrix[(a * d + i, b * d + i)];
        }
        s * scale
    });
    Ok(AlgebraElement::from_parts(d, x.level - 1, out))
}

/// The trace-preserving conditional expectation `E_n` onto level `n`.
pub fn expectation_to_level(x: &AlgebraElement, n: usize) -> Result<AlgebraElement> {
    if n > x.level {
        return Err(Error::Level(format!("cannot take E_{n} of a level-{} element", x.level)));
    }
    let mut y = x.clone();
    while y.level > n {
        y = partial_trace_right(&y)?;
    }
    Ok(y)
}

/// Multiplies `a` on the right by `1 ⊗ g ⊗ 1`, where `g` acts on `width`
/// consecutive slots starting at slot `first` (0-based) of an `n`-slot space.
/// Costs `O(D² d^width)` rather than a dense product.
pub fn mul_right_local(a: &CMat, g: &CMat, d: usize, n: usize, first: usize, width: usize) -> CMat {
    let gw = ipow(d, width);
    let post = ipow(d, n - first - width);
    let pre = ipow(d, first);
    debug_assert_eq!(g.nrows(), gw);
    let rows = a.nrows();
    let mut out = CMat::zeros(rows, a.ncols());
    for p in 0..pre {
        for q in 0..post {
            for m in 0..gw {
                let col = (p * gw + m) * post + q;
                for mp in 0..gw {
                    let gv = g[(mp, m)];
                    if gv == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let src = (p * gw + mp) * post + q;
                    for r in 0..rows {
                        out[(r, col)] += a[(r, src)] * gv;
                    }
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(h.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// One eigenvalue of a normal matrix with its multiplicity and eigenprojection.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub value: C64,
    pub multiplicity: usize,
    pub projection: CMat,
}

/// Groups indices whose values lie within `radius` of each other (single linkage).
pub fn cluster_values(values: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_slot[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_slot[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Spectral decomposition of a normal matrix.
///
/// Eigenvectors come from a Hermitian combination `A + cB` of the real and
/// imaginary parts; eigenvalues are Rayleigh quotients clustered at relative
/// radius `tol`. The result is sorted by argument, then modulus.
pub fn eig_normal(x: &CMat, tol: f64) -> Result<Vec<Eigenspace>> {
    if !x.is_square() {
        return Err(Error::Shape(format!("eig_normal needs a square matrix, got {:?}", x.shape())));
    }
    let n = x.nrows();
    let scale = x.norm();
    if scale == 0.0 {
        return Ok(vec![Eigenspace { value: C64::new(0.0, 0.0), multiplicity: n, projection: identity(n) }]);
    }
    let xs = x.adjoint();
    let comm = (x * &xs - &xs * x).norm();
    if comm > tol * scale * scale {
        return Err(Error::NotNormal { residual: comm });
    }
    let re = (x + &xs) * C64::new(0.5, 0.0);
    let im = (x - &xs) * C64::new(0.0, -0.5);
    let radius = tol * scale.max(1.0) / (n as f64).sqrt().max(1.0);
    let radius = radius.max(tol);
    let weights = [0.618_033_988_749_894_9, 0.414_213_562_373_095_1, 1.732_050_807_568_877_2, 0.271_828_182_845_904_5];
    for &w in &weights {
        let h = &re + &im * C64::new(w, 0.0);
        let (_, v) = hermitian_eigen(&h);
        let lambdas: Vec<C64> = (0..n)
            .map(|k| {
                let col = v.column(k);
                (col.adjoint() * x * col)[(0, 0)]
            })
            .collect();
        let groups = cluster_values(&lambdas, radius);
        let mut spaces: Vec<Eigenspace> = groups
            .iter()
            .map(|g| {
                let value = g.iter().map(|&k| lambdas[k]).sum::<C64>() / g.len() as f64;
                let mut p = CMat::zeros(n, n);
                for &k in g {
                    let col = v.column(k);
                    p += col * col.adjoint();
                }
                Eigenspace { value, multiplicity: g.len(), projection: p }
            })
            .collect();
        let mut recon = CMat::zeros(n, n);
        for s in &spaces {
            recon += &s.projection * s.value;
        }
        if (recon - x).norm() <= 1e-10 * scale.max(1e-300) {
            spaces.sort_by(|a, b| {
                let ka = (a.value.arg(), a.value.norm());
                let kb = (b.value.arg(), b.value.norm());
                ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
            });
            return Ok(spaces);
        }
    }
    Err(Error::Numerical {
        message: "could not simultaneously diagonalize the normal matrix".into(),
        retries: weights.len(),
    })
}

/// Eigenvalues of a normal matrix with multiplicity, clustered at `tol`.
pub fn spectrum(x: &CMat, tol: f64) -> Result<Vec<(C64, usize)>> {
    Ok(eig_normal(x, tol)?.into_iter().map(|s| (s.value, s.multiplicity)).collect())
}

/// Row-major flattening.
pub fn vec_rowmajor(x: &CMat) -> Vec<C64> {
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            out.push(x[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vec_rowmajor`] for square matrices.
pub fn unvec_rowmajor(v: &[C64], n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| v[i * n + j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip(d: usize) -> CMat {
        CMat::from_fn(d * d, d * d, |r, s| {
            let (i, j) = (r / d, r % d);
            let (k, l) = (s / d, s % d);
            if i == l && j == k {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    #[test]
    fn kron_matches_index_loop() {
        let f = flip(2);
        let k = kron(&f, &identity(2));
        for a in 0..8 {
            for b in 0..8 {
                let (a12, a3) = (a / 2, a % 2);
                let (b12, b3) = (b / 2, b % 2);
                let expect = f[(a12, b12)] * if a3 == b3 { 1.0 } else { 0.0 };
                assert_eq!(k[(a, b)], expect);
            }
        }
        let diag = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        let k2 = kron(&diag, &identity(2));
        let expect: Vec<f64> = vec![1.0, 1.0, 2.0, 2.0];
        for i in 0..4 {
            assert_eq!(k2[(i, i)].re, expect[i]);
        }
    }

    #[test]
    fn shift_of_flip_matches_oracle() {
        let f = AlgebraElement::new(2, 2, flip(2)).unwrap();
        let s = shift(&f, 1);
        for r in 0..8 {
            for col in 0..8 {
                let (a1, a2, a3) = (r / 4, (r / 2) % 2, r % 2);
                let (b1, b2, b3) = (col / 4, (col / 2) % 2, col % 2);
                let v = if a1 == b1 && a2 == b3 && a3 == b2 { 1.0 } else { 0.0 };
                assert_eq!(s.matrix[(r, col)].re, v);
            }
        }
    }

    #[test]
    fn traces_of_flip() {
        let f = AlgebraElement::new(2, 2, flip(2)).unwrap();
        assert!((normalized_trace(&f) - c(0.5, 0.0)).norm() < 1e-15);
        let l = partial_trace_left(&f).unwrap();
        let r = expectation_to_level(&f, 1).unwrap();
        assert!((l.matrix - identity(2) * c(0.5, 0.0)).norm() < 1e-15);
        assert!((r.matrix - identity(2) * c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eig_normal_of_flip() {
        let sp = eig_normal(&flip(2), 1e-9).unwrap();
        assert_eq!(sp.len(), 2);
        let plus = sp.iter().find(|s| (s.value - c(1.0, 0.0)).norm() < 1e-9).unwrap();
        let minus = sp.iter().find(|s| (s.value + c(1.0, 0.0)).norm() < 1e-9).unwrap();
        assert_eq!((plus.multiplicity, minus.multiplicity), (3, 1));
    }

    #[test]
    fn eig_normal_rejects_non_normal() {
        let mut x = CMat::zeros(2, 2);
        x[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(eig_normal(&x, 1e-9), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn mul_right_local_matches_dense() {
        let d = 2;
        let a = CMat::from_fn(8, 8, |i, j| c((i * 3 + j) as f64, (i as f64) - (j as f64)));
        let g = flip(2);
        let dense = &a * kron(&identity(2), &g);
        let fast = mul_right_local(&a, &g, d, 3, 1, 2);
        assert!((dense - fast).norm() < 1e-12);
    }

    #[test]
    fn embed_level_error() {
        let x = AlgebraElement::identity(2, 2);
        assert!(matches!(embed(&x, 1), Err(Error::Level(_))));
        assert!(partial_trace_left(&AlgebraElement::scalar(2, c(1.0, 0.0))).is_err());
    }
}
