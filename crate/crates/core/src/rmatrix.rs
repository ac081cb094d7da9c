//! Unitary solutions of the Yang–Baxter equation: verification, the standard
//! constructors and the algebraic operations on R-matrices.
//!
//! Matrix-element convention: entry `((i−1)d+j, (k−1)d+l)` of the `d²×d²`
//! matrix is `R^{ij}_{kl} = ⟨e_i⊗e_j, R(e_k⊗e_l)⟩`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::tensor::{self, c, ipow, kron, AlgebraElement, CMat, C64};

/// Default verification tolerance on both residuals.
pub const VERIFY_TOL: f64 = 1e-10;

/// Largest matrix (in bytes) that [`cabling_power`] will allocate.
pub const CABLING_BUDGET_BYTES: usize = 256 << 20;

/// A verified R-matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    pub d: usize,
    pub matrix: CMat,
    pub ybe_residual: f64,
    pub unitarity_residual: f64,
    pub label: String,
}

impl RMatrix {
    /// `R` as an element of level 2.
    pub fn element(&self) -> AlgebraElement {
        AlgebraElement::from_parts(self.d, 2, self.matrix.clone())
    }

    /// `R^{ij}_{kl}` with 0-based indices.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.matrix[(i * self.d + j, k * self.d + l)]
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// `‖(R⊗1)(1⊗R)(R⊗1) − (1⊗R)(R⊗1)(1⊗R)‖_F` starting from Kronecker products.
pub fn ybe_residual(m: &CMat, d: usize) -> f64 {
    let id = tensor::identity(d);
    let lhs = kron(m, &id);
    let lhs = tensor::mul_right_local(&lhs, m, d, 3, 1, 2);
    let lhs = tensor::mul_right_local(&lhs, m, d, 3, 0, 2);
    let rhs = kron(&id, m);
    let rhs = tensor::mul_right_local(&rhs, m, d, 3, 0, 2);
    let rhs = tensor::mul_right_local(&rhs, m, d, 3, 1, 2);
    (lhs - rhs).norm()
}

/// `‖Rφ(R)R − φ(R)Rφ(R)‖_F` at level 3.
pub fn cuntz_residual(m: &CMat, d: usize) -> f64 {
    let r = AlgebraElement::from_parts(d, 2, m.clone());
    let e = tensor::embed(&r, 3).expect("level 2 embeds into level 3");
    let s = tensor::shift(&r, 1);
    if d <= 4 {
        return (&e.matrix * &s.matrix * &e.matrix - &s.matrix * &e.matrix * &s.matrix).norm();
    }
    let lhs = tensor::mul_right_local(&tensor::mul_right_local(&e.matrix, m, d, 3, 1, 2), m, d, 3, 0, 2);
    let rhs = tensor::mul_right_local(&tensor::mul_right_local(&s.matrix, m, d, 3, 0, 2), m, d, 3, 1, 2);
    (lhs - rhs).norm()
}

/// Checks unitarity and the braid relation, returning the verified R-matrix.
pub fn verify(matrix: &CMat, d: usize, tol: f64) -> Result<RMatrix> {
    verify_labeled(matrix, d, tol, "input")
}

pub fn verify_labeled(matrix: &CMat, d: usize, tol: f64, label: &str) -> Result<RMatrix> {
    let n = d * d;
    if d == 0 || matrix.nrows() != n || matrix.ncols() != n {
        return Err(Error::Shape(format!("an R-matrix over d={d} must be {n}x{n}, got {:?}", matrix.shape())));
    }
    if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain("non-finite matrix entry".into()));
    }
    let ybe = ybe_residual(matrix, d);
    let cuntz = cuntz_residual(matrix, d);
    if (ybe - cuntz).abs() > 1e-12 * (1.0 + ybe) {
        return Err(Error::Internal(format!("Kronecker and Cuntz-form residuals disagree: {ybe:e} vs {cuntz:e}")));
    }
    let unitarity = tensor::unitarity_residual(matrix);
    if ybe > tol || unitarity > tol {
        return Err(Error::NotRMatrix { ybe, unitarity });
    }
    Ok(RMatrix {
        d,
        matrix: matrix.clone(),
        ybe_residual: ybe,
        unitarity_residual: unitarity,
        label: label.to_string(),
    })
}

/// Re-verifies the output of an operation that provably preserves the YBE.
fn certify(matrix: CMat, d: usize, label: String) -> Result<RMatrix> {
    verify_labeled(&matrix, d, VERIFY_TOL, &label).map_err(|e| match e {
        Error::NotRMatrix { ybe, unitarity } => {
            Error::Internal(format!("{label}: construction produced residuals {ybe:e}/{unitarity:e}"))
        }
        other => other,
    })
}

fn check_unit(q: C64, what: &str) -> Result<()> {
    if (q.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("{what} must have modulus 1, got |{q}| = {}", q.norm())));
    }
    Ok(())
}

/// The flip `F(v⊗w) = w⊗v` as a matrix.
pub fn flip_matrix(d: usize) -> CMat {
    let mut f = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = c(1.0, 0.0);
        }
    }
    f
}

/// `q·1`.
pub fn make_trivial(d: usize, q: C64) -> Result<RMatrix> {
    check_unit(q, "q")?;
    certify(tensor::identity(d * d) * q, d, format!("trivial(d={d})"))
}

/// The flip `F_d`.
pub fn make_flip(d: usize) -> Result<RMatrix> {
    certify(flip_matrix(d), d, format!("flip(d={d})"))
}

/// Data of a simple R-matrix: orthogonal projections summing to 1 and a
/// matrix of unit-modulus parameters.
#[derive(Debug, Clone)]
pub struct SimpleRSpec {
    pub projections: Vec<CMat>,
    pub phases: CMat,
}

impl SimpleRSpec {
    pub fn validate(&self, tol: f64) -> Result<usize> {
        let n = self.projections.len();
        if n == 0 {
            return Err(Error::Domain("a simple R-matrix needs at least one projection".into()));
        }
        let d = self.projections[0].nrows();
        if self.phases.shape() != (n, n) {
            return Err(Error::Domain(format!("phase matrix must be {n}x{n}")));
        }
        let mut sum = CMat::zeros(d, d);
        for (i, p) in self.projections.iter().enumerate() {
            if p.shape() != (d, d) {
                return Err(Error::Domain("projections must share one size".into()));
            }
            if (p - p.adjoint()).norm() > tol || (p * p - p).norm() > tol {
                return Err(Error::Domain(format!("p_{} is not an orthogonal projection", i + 1)));
            }
            for (j, q) in self.projections.iter().enumerate().skip(i + 1) {
                if (p * q).norm() > tol {
                    return Err(Error::Domain(format!("p_{} and p_{} are not orthogonal", i + 1, j + 1)));
                }
            }
            if p.trace().re < 0.5 {
                return Err(Error::Domain(format!("p_{} is zero", i + 1)));
            }
            sum += p;
        }
        if (sum - tensor::identity(d)).norm() > tol {
            return Err(Error::Domain("projections do not sum to the identity".into()));
        }
        for z in self.phases.iter() {
            check_unit(*z, "c_ij")?;
        }
        Ok(d)
    }

    /// Coordinate projections onto consecutive blocks of the given sizes.
    pub fn coordinate_blocks(dims: &[usize], phases: CMat) -> Self {
        let d: usize = dims.iter().sum();
        let mut projections = Vec::new();
        let mut start = 0;
        for &k in dims {
            let mut p = CMat::zeros(d, d);
            for t in start..start + k {
                p[(t, t)] = c(1.0, 0.0);
            }
            projections.push(p);
            start += k;
        }
        Self { projections, phases }
    }

    /// Conjugates every projection by `u`.
    pub fn rotated(&self, u: &CMat) -> Self {
        Self {
            projections: self.projections.iter().map(|p| u * p * u.adjoint()).collect(),
            phases: self.phases.clone(),
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.projections.iter().map(|p| p.trace().re.round() as usize).collect()
    }
}

/// `Σ_i c_ii p_i⊗p_i + Σ_{i≠j} c_ij (p_i⊗p_j)F`.
pub fn make_simple(spec: &SimpleRSpec) -> Result<RMatrix> {
    let d = spec.validate(1e-10)?;
    let f = flip_matrix(d);
    let mut r = CMat::zeros(d * d, d * d);
    for (i, p) in spec.projections.iter().enumerate() {
        for (j, q) in spec.projections.iter().enumerate() {
            let term = kron(p, q) * spec.phases[(i, j)];
            if i == j {
                r += term;
            } else {
                r += term * &f;
            }
        }
    }
    certify(r, d, format!("simple(d={d}, N={})", spec.projections.len()))
}

/// Diagonal R-matrix `Σ c_ij (e_ii⊗e_jj)F`.
pub fn make_diagonal(phases: &CMat) -> Result<RMatrix> {
    let d = phases.nrows();
    let spec = SimpleRSpec::coordinate_blocks(&vec![1; d], phases.clone());
    make_simple(&spec).map(|r| r.with_label(format!("diagonal(d={d})")))
}

/// `(u⊗1)F`, a simple R-matrix for every unitary `u`.
pub fn make_twisted_flip(u: &CMat) -> Result<RMatrix> {
    if !tensor::is_unitary(u, 1e-10) {
        return Err(Error::Domain("u must be unitary".into()));
    }
    let d = u.nrows();
    certify(kron(u, &tensor::identity(d)) * flip_matrix(d), d, format!("uF(d={d})"))
}

/// Signed block list `(d_i, ε_i)` of an involutive normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalFormSpec {
    blocks: Vec<(usize, i8)>,
}

impl NormalFormSpec {
    /// Builds a canonical spec (sorted by sign descending, then size descending).
    pub fn new(blocks: Vec<(usize, i8)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Domain("normal form needs at least one block".into()));
        }
        for &(k, s) in &blocks {
            if k == 0 || (s != 1 && s != -1) {
                return Err(Error::Domain(format!("invalid block ({k}, {s})")));
            }
        }
        let mut blocks = blocks;
        blocks.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[(usize, i8)] {
        &self.blocks
    }

    pub fn d(&self) -> usize {
        self.blocks.iter().map(|b| b.0).sum()
    }

    /// Thoma parameters `α_i = d_i/d` of the positive blocks.
    pub fn alphas(&self) -> Vec<f64> {
        let d = self.d() as f64;
        self.blocks.iter().filter(|b| b.1 > 0).map(|b| b.0 as f64 / d).collect()
    }

    /// Thoma parameters `β_j = d_j/d` of the negative blocks.
    pub fn betas(&self) -> Vec<f64> {
        let d = self.d() as f64;
        self.blocks.iter().filter(|b| b.1 < 0).map(|b| b.0 as f64 / d).collect()
    }

    /// Parses `dim:sign` lists such as `2:+,1:-`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, sign) =
                item.split_once(':').ok_or_else(|| Error::Parse(format!("block '{item}' is not dim:sign")))?;
            let k: usize = k.trim().parse().map_err(|_| Error::Parse(format!("bad block size '{k}'")))?;
            let sign = match sign.trim() {
                "+" | "+1" | "1" => 1,
                "-" | "-1" => -1,
                other => return Err(Error::Parse(format!("bad block sign '{other}'"))),
            };
            blocks.push((k, sign));
        }
        Self::new(blocks).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl std::fmt::Display for NormalFormSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> =
            self.blocks.iter().map(|(k, s)| format!("{k}:{}", if *s > 0 { '+' } else { '-' })).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `⊞_i ε_i 1_{d_i}` on consecutive coordinate blocks.
pub fn make_normal_form(spec: &NormalFormSpec) -> Result<RMatrix> {
    let dims: Vec<usize> = spec.blocks.iter().map(|b| b.0).collect();
    let n = dims.len();
    let phases = CMat::from_fn(n, n, |i, j| if i == j { c(spec.blocks[i].1 as f64, 0.0) } else { c(1.0, 0.0) });
    let r = make_simple(&SimpleRSpec::coordinate_blocks(&dims, phases))?;
    Ok(r.with_label(format!("normal({spec})")))
}

/// Family 2 of the two-dimensional classification: `diag(p,q,r,s)·F`.
pub fn make_r2(p: C64, q: C64, r: C64, s: C64) -> Result<RMatrix> {
    for (z, n) in [(p, "p"), (q, "q"), (r, "r"), (s, "s")] {
        check_unit(z, n)?;
    }
    let mut m = CMat::zeros(4, 4);
    m[(0, 0)] = p;
    m[(1, 2)] = q;
    m[(2, 1)] = r;
    m[(3, 3)] = s;
    certify(m, 2, "r2".into())
}

/// Family 3: antidiagonal corners `p, r` with `q` in the middle block.
pub fn make_r3(p: C64, q: C64, r: C64) -> Result<RMatrix> {
    for (z, n) in [(p, "p"), (q, "q"), (r, "r")] {
        check_unit(z, n)?;
    }
    let mut m = CMat::zeros(4, 4);
    m[(0, 3)] = p;
    m[(1, 1)] = q;
    m[(2, 2)] = q;
    m[(3, 0)] = r;
    certify(m, 2, "r3".into())
}

/// The unnormalized pattern of family 4.
pub fn r4_pattern() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(
        4,
        4,
        &[
            c(s, 0.0),
            c(s, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-s, 0.0),
            c(s, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(s, 0.0),
            c(-s, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(s, 0.0),
            c(s, 0.0),
        ],
    )
}

/// Family 4: `(q/√2)(1 + iσ₃⊗σ₂)`.
pub fn make_r4(q: C64) -> Result<RMatrix> {
    check_unit(q, "q")?;
    certify(r4_pattern() * q, 2, "r4".into())
}

pub fn adjoint(r: &RMatrix) -> Result<RMatrix> {
    certify(r.matrix.adjoint(), r.d, format!("adjoint({})", r.label))
}

pub fn scalar_multiple(r: &RMatrix, z: C64) -> Result<RMatrix> {
    check_unit(z, "c")?;
    certify(&r.matrix * z, r.d, format!("scalar({})", r.label))
}

/// `FRF`.
pub fn flip_conjugate(r: &RMatrix) -> Result<RMatrix> {
    let f = flip_matrix(r.d);
    certify(&f * &r.matrix * &f, r.d, format!("flip_conjugate({})", r.label))
}

/// `λ_u(R) = (u⊗u)R(u*⊗u*)`.
pub fn quasifree_conjugate(r: &RMatrix, u: &CMat) -> Result<RMatrix> {
    if u.shape() != (r.d, r.d) || !tensor::is_unitary(u, 1e-10) {
        return Err(Error::Domain("conjugator must be a d×d unitary".into()));
    }
    let uu = kron(u, u);
    certify(&uu * &r.matrix * uu.adjoint(), r.d, format!("quasifree({})", r.label))
}

/// `R ⊠ S = F₂₃(R⊗S)F₂₃` on `ℂ^{dd'}⊗ℂ^{dd'}`.
pub fn tensor_product(r: &RMatrix, s: &RMatrix) -> Result<RMatrix> {
    let (d, e) = (r.d, s.d);
    let big = kron(&r.matrix, &s.matrix);
    // Index of (a,b,i,j) in R⊗S is ((a d + b) e² + i e + j); the middle flip
    // sends it to ((a e + i) de + b e + j).
    let perm = |x: usize| -> usize {
        let (ab, ij) = (x / (e * e), x % (e * e));
        let (a, b) = (ab / d, ab % d);
        let (i, j) = (ij / e, ij % e);
        (a * e + i) * (d * e) + b * e + j
    };
    let n = d * d * e * e;
    let mut out = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            out[(perm(x), perm(y))] = big[(x, y)];
        }
    }
    certify(out, d * e, format!("({}) ⊠ ({})", r.label, s.label))
}

/// `R ⊞ S`: `R` on the first block squared, `S` on the second, flip on mixed tensors.
pub fn box_sum(r: &RMatrix, s: &RMatrix) -> Result<RMatrix> {
    let (d, e) = (r.d, s.d);
    let n = d + e;
    let mut out = CMat::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let col = a * n + b;
            match (a < d, b < d) {
                (true, true) => {
                    for x in 0..d {
                        for y in 0..d {
                            out[(x * n + y, col)] = r.matrix[(x * d + y, a * d + b)];
                        }
                    }
                }
                (false, false) => {
                    let (a2, b2) = (a - d, b - d);
                    for x in 0..e {
                        for y in 0..e {
                            out[((x + d) * n + (y + d), col)] = s.matrix[(x * e + y, a2 * e + b2)];
                        }
                    }
                }
                _ => out[(b * n + a, col)] = c(1.0, 0.0),
            }
        }
    }
    certify(out, n, format!("({}) ⊞ ({})", r.label, s.label))
}

/// `ₙR = φ^{n−1}(R)⋯φ(R)R` at level `n+1`.
pub fn left_chain(r: &RMatrix, n: usize) -> AlgebraElement {
    let el = r.element();
    let mut acc = AlgebraElement::identity(r.d, n + 1);
    for k in (0..n).rev() {
        let g = tensor::embed(&tensor::shift(&el, k), n + 1).expect("fits");
        acc = AlgebraElement::from_parts(r.d, n + 1, acc.matrix * g.matrix);
    }
    acc
}

/// `R_n = Rφ(R)⋯φ^{n−1}(R)` at level `n+1`.
pub fn right_chain(r: &RMatrix, n: usize) -> AlgebraElement {
    let el = r.element();
    let mut acc = AlgebraElement::identity(r.d, n + 1);
    for k in 0..n {
        let g = tensor::embed(&tensor::shift(&el, k), n + 1).expect("fits");
        acc = AlgebraElement::from_parts(r.d, n + 1, acc.matrix * g.matrix);
    }
    acc
}

/// The cabling power `R^{(n)}` on `ℂ^{d^n}`.
///
/// `ₙRₙ = ₙR·φ(ₙR)⋯φ^{n−1}(ₙR)` lives at level `2n`. Grouping slots in
/// consecutive blocks of `n` leaves the row-major linear index unchanged, so
/// the cabling map is the identity on the stored matrix.
pub fn cabling_power(r: &RMatrix, n: usize) -> Result<RMatrix> {
    if n == 0 {
        return Err(Error::Domain("cabling power needs n ≥ 1".into()));
    }
    let side = r.d.checked_pow(2 * n as u32).ok_or_else(|| Error::Resource("cabling dimension overflows".into()))?;
    let bytes = side.saturating_mul(side).saturating_mul(std::mem::size_of::<C64>());
    if bytes > CABLING_BUDGET_BYTES {
        return Err(Error::Resource(format!("cabling power {n} of a d={} R-matrix needs {bytes} bytes", r.d)));
    }
    let chain = left_chain(r, n);
    let mut acc = AlgebraElement::identity(r.d, 2 * n);
    for k in 0..n {
        let g = tensor::embed(&tensor::shift(&chain, k), 2 * n)?;
        acc = AlgebraElement::from_parts(r.d, 2 * n, acc.matrix * g.matrix);
    }
    certify(acc.matrix, ipow(r.d, n), format!("cabling({}, {n})", r.label))
}

pub fn is_involutive(r: &RMatrix, tol: f64) -> bool {
    (&r.matrix * &r.matrix - tensor::identity(r.d * r.d)).norm() <= tol
}

pub fn is_trivial(r: &RMatrix, tol: f64) -> bool {
    let q = r.matrix[(0, 0)];
    (&r.matrix - tensor::identity(r.d * r.d) * q).norm() <= tol
}

/// Serializes `{"d", "entries", "meta"}` with entries row-major as `[re, im]`.
pub fn to_json(r: &RMatrix) -> Value {
    let entries: Vec<Value> = tensor::vec_rowmajor(&r.matrix).into_iter().map(|z| json!([z.re, z.im])).collect();
    json!({
        "d": r.d,
        "entries": entries,
        "meta": {
            "label": r.label,
            "ybe_residual": r.ybe_residual,
            "unitarity_residual": r.unitarity_residual,
        }
    })
}

/// Reads the matrix part of the JSON format; `meta` is ignored.
pub fn matrix_from_json(v: &Value) -> Result<(usize, CMat)> {
    let d =
        v.get("d").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing integer field 'd'".into()))? as usize;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field 'entries'".into()))?;
    let n = d * d;
    if d == 0 || entries.len() != n * n {
        return Err(Error::Parse(format!("expected {} entries for d={d}, got {}", n * n, entries.len())));
    }
    let mut vals = Vec::with_capacity(n * n);
    for (k, e) in entries.iter().enumerate() {
        let pair = e.as_array().filter(|p| p.len() == 2);
        let z = pair.and_then(|p| Some(c(p[0].as_f64()?, p[1].as_f64()?)));
        vals.push(z.ok_or_else(|| Error::Parse(format!("entry {k} is not [re, im]")))?);
    }
    Ok((d, tensor::unvec_rowmajor(&vals, n)))
}

/// Parses and verifies an R-matrix from its JSON form.
pub fn from_json(v: &Value, tol: f64) -> Result<RMatrix> {
    let (d, m) = matrix_from_json(v)?;
    let label = v.get("meta").and_then(|m| m.get("label")).and_then(Value::as_str).unwrap_or("json");
    verify_labeled(&m, d, tol, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_unitary, rng};

    #[test]
    fn flips_and_trivials_verify() {
        for d in 1..=4 {
            let f = make_flip(d).unwrap();
            assert!(f.ybe_residual < 1e-14);
            assert!(is_involutive(&f, 1e-13));
        }
        let t = make_trivial(2, c(0.0, 1.0)).unwrap();
        assert_eq!(t.matrix[(3, 3)], c(0.0, 1.0));
        assert!(is_trivial(&t, 1e-14));
        assert!(make_trivial(2, c(2.0, 0.0)).is_err());
    }

    #[test]
    fn perturbed_identity_is_rejected() {
        let mut m = tensor::identity(4);
        let v = [c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        for i in 0..4 {
            m[(i, 0)] += v[i] * 0.1;
        }
        assert!(matches!(verify(&m, 2, 1e-10), Err(Error::NotRMatrix { .. })));
    }

    #[test]
    fn normal_form_examples() {
        let f2 = make_normal_form(&NormalFormSpec::new(vec![(1, 1), (1, 1)]).unwrap()).unwrap();
        assert!((f2.matrix - flip_matrix(2)).norm() < 1e-15);
        let id = make_normal_form(&NormalFormSpec::new(vec![(3, 1)]).unwrap()).unwrap();
        assert!(is_trivial(&id, 1e-15));
        let spec = NormalFormSpec::parse("1:+, 2:+").unwrap();
        assert_eq!(spec.blocks(), &[(2, 1), (1, 1)]);
        let n = make_normal_form(&spec).unwrap();
        let one2 = make_trivial(2, c(1.0, 0.0)).unwrap();
        let one1 = make_trivial(1, c(1.0, 0.0)).unwrap();
        let boxed = box_sum(&one2, &one1).unwrap();
        assert!((n.matrix - boxed.matrix).norm() < 1e-15);
    }

    #[test]
    fn box_and_tensor_identities() {
        let one1 = make_trivial(1, c(1.0, 0.0)).unwrap();
        let b = box_sum(&one1, &one1).unwrap();
        assert!((b.matrix - flip_matrix(2)).norm() == 0.0);
        let f2 = make_flip(2).unwrap();
        let f3 = make_flip(3).unwrap();
        assert!((box_sum(&f2, &f3).unwrap().matrix - flip_matrix(5)).norm() == 0.0);
        assert!((tensor_product(&f2, &f3).unwrap().matrix - flip_matrix(6)).norm() == 0.0);
        let one3 = make_trivial(3, c(1.0, 0.0)).unwrap();
        let t = tensor_product(&make_trivial(2, c(1.0, 0.0)).unwrap(), &one3).unwrap();
        assert!(is_trivial(&t, 0.0));
    }

    #[test]
    fn cabling_of_flip() {
        let f2 = make_flip(2).unwrap();
        assert!((cabling_power(&f2, 2).unwrap().matrix - flip_matrix(4)).norm() == 0.0);
        assert_eq!(cabling_power(&f2, 1).unwrap().matrix, f2.matrix);
        let huge = make_flip(4).unwrap();
        assert!(matches!(cabling_power(&huge, 4), Err(Error::Resource(_))));
    }

    #[test]
    fn flip_conjugation_of_families() {
        let (p, q, r, s) = (c(0.0, 1.0), c(-1.0, 0.0), c(0.6, 0.8), c(0.0, -1.0));
        let r3 = make_r3(p, q, r).unwrap();
        assert_eq!(flip_conjugate(&r3).unwrap().matrix, r3.matrix);
        let m = flip_conjugate(&make_r2(p, q, r, s).unwrap()).unwrap();
        assert_eq!(m.matrix, make_r2(p, r, q, s).unwrap().matrix);
    }

    #[test]
    fn quasifree_keeps_trivial() {
        let mut g = rng(1);
        let u = random_unitary(3, &mut g);
        let t = make_trivial(3, c(0.0, -1.0)).unwrap();
        let tu = quasifree_conjugate(&t, &u).unwrap();
        assert!((tu.matrix - t.matrix).norm() < 1e-13);
    }

    #[test]
    fn json_round_trip() {
        let r = make_r4(c(0.6, 0.8)).unwrap();
        let v = to_json(&r);
        let back = from_json(&v, VERIFY_TOL).unwrap();
        assert_eq!(back.matrix, r.matrix);
        assert_eq!(back.label, "r4");
    }
}
