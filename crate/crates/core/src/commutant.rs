//! Finite-level relative commutants `M_{R,n}`, `N_{R,n}`, `L_{R,n}`, fixed
//! points of `λ_R`, and Wedderburn block profiles of finite-dimensional
//! *-algebras.
//!
//! Subspaces of `M_{d^n}` are stored as orthonormal columns of row-major
//! vectorizations; elements handed out are normalized so that
//! `τ(x_i* x_j) = δ_ij`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, OrthoBasis, REL_CUTOFF};
use crate::random;
use crate::rmatrix::{self, RMatrix};
use crate::tensor::{self, ipow, AlgebraElement, CMat, C64};

/// Closure residual above which a span is not accepted as an algebra.
pub const CLOSURE_TOL: f64 = 1e-9;

/// Wedderburn block sizes, or the reason they could not be determined.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockProfile {
    Resolved(Vec<usize>),
    Unresolved(String),
}

impl BlockProfile {
    pub fn blocks(&self) -> Option<&[usize]> {
        match self {
            BlockProfile::Resolved(b) => Some(b),
            BlockProfile::Unresolved(_) => None,
        }
    }
}

/// Renders a profile like `C^2 (+) M_2`.
pub fn profile_string(blocks: &[usize]) -> String {
    let ones = blocks.iter().filter(|&&k| k == 1).count();
    let mut parts = Vec::new();
    match ones {
        0 => {}
        1 => parts.push("C".to_string()),
        k => parts.push(format!("C^{k}")),
    }
    let mut big: Vec<usize> = blocks.iter().cloned().filter(|&k| k > 1).collect();
    big.sort_unstable();
    for k in big {
        parts.push(format!("M_{k}"));
    }
    parts.join(" (+) ")
}

impl std::fmt::Display for BlockProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockProfile::Resolved(b) => write!(f, "{}", profile_string(b)),
            BlockProfile::Unresolved(why) => write!(f, "unresolved ({why})"),
        }
    }
}

/// An orthonormal basis of a unital *-subalgebra of `M_{d^n}`.
#[derive(Debug, Clone)]
pub struct SubalgebraBasis {
    pub d: usize,
    pub level: usize,
    pub basis: Vec<AlgebraElement>,
    pub profile: BlockProfile,
    pub converged: bool,
    columns: CMat,
}

impl SubalgebraBasis {
    /// Wraps orthonormal row-major columns and computes the block profile.
    fn from_columns(d: usize, level: usize, columns: CMat, seed: u64) -> Self {
        let side = ipow(d, level);
        let scale = C64::new((side as f64).sqrt(), 0.0);
        let basis: Vec<AlgebraElement> = (0..columns.ncols())
            .map(|k| {
                let v: Vec<C64> = columns.column(k).iter().cloned().collect();
                AlgebraElement::from_parts(d, level, tensor::unvec_rowmajor(&v, side) * scale)
            })
            .collect();
        let mats: Vec<CMat> = basis.iter().map(|b| b.matrix.clone()).collect();
        let profile = match wedderburn_decompose_seeded(&mats, seed) {
            Ok(b) => BlockProfile::Resolved(b),
            Err(e) => BlockProfile::Unresolved(e.to_string()),
        };
        Self { d, level, basis, profile, converged: true, columns }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Only multiples of the identity.
    pub fn is_trivial(&self) -> bool {
        self.dim() == 1
    }

    pub fn is_full(&self) -> bool {
        self.dim() == ipow(self.d, 2 * self.level)
    }

    pub fn profile_string(&self) -> String {
        self.profile.to_string()
    }

    /// Relative distance of `x` from the span.
    pub fn residual(&self, x: &CMat) -> f64 {
        let v = tensor::vec_rowmajor(x);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        linalg::distance_to_span(&self.columns, &v) / norm
    }

    /// Largest residual of `self`'s basis against `other`'s span.
    pub fn inclusion_residual(&self, other: &SubalgebraBasis) -> f64 {
        self.basis.iter().map(|b| other.residual(&b.matrix)).fold(0.0, f64::max)
    }

    /// Orthonormal row-major vectorizations as columns.
    pub fn columns(&self) -> &CMat {
        &self.columns
    }
}

/// `R_k·(x⊗1)·R_k*` with `R_k = Rφ(R)⋯φ^{k−1}(R)`; this is `λ_R` on level `k`.
pub fn apply_endo(r: &RMatrix, x: &AlgebraElement) -> Result<AlgebraElement> {
    if x.d != r.d {
        return Err(Error::Shape(format!("element over d={} vs R over d={}", x.d, r.d)));
    }
    let k = x.level;
    let rk = rmatrix::right_chain(r, k);
    let ex = tensor::embed(x, k + 1)?;
    Ok(AlgebraElement::from_parts(r.d, k + 1, &rk.matrix * ex.matrix * rk.matrix.adjoint()))
}

/// Row-major vectorization of `U·(E_ab ⊗ 1_d)·V` for all units, as columns.
fn conj_embedded_units(u: &CMat, v: &CMat, d: usize, side: usize) -> CMat {
    let big = side * d;
    let mut out = CMat::zeros(big * big, side * side);
    for a in 0..side {
        for b in 0..side {
            let col = a * side + b;
            for k in 0..d {
                let uc = u.column(a * d + k);
                let vr = v.row(b * d + k);
                for i in 0..big {
                    let ui = uc[i];
                    if ui == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in 0..big {
                        out[(i * big + j, col)] += ui * vr[j];
                    }
                }
            }
        }
    }
    out
}

/// Row-major vectorization of `U·(1_d ⊗ E_ab)·V` for all units, as columns.
fn conj_shifted_units(u: &CMat, v: &CMat, d: usize, side: usize) -> CMat {
    let big = side * d;
    let mut out = CMat::zeros(big * big, side * side);
    for a in 0..side {
        for b in 0..side {
            let col = a * side + b;
            for k in 0..d {
                let uc = u.column(k * side + a);
                let vr = v.row(k * side + b);
                for i in 0..big {
                    let ui = uc[i];
                    if ui == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in 0..big {
                        out[(i * big + j, col)] += ui * vr[j];
                    }
                }
            }
        }
    }
    out
}

/// The embedding `x ↦ x⊗1_d` on row-major vectorizations.
fn embedding_operator(d: usize, side: usize) -> CMat {
    let id = tensor::identity(side * d);
    conj_embedded_units(&id, &id, d, side)
}

/// The shift `x ↦ 1_d⊗x` on row-major vectorizations.
fn shift_operator(d: usize, side: usize) -> CMat {
    let id = tensor::identity(side * d);
    conj_shifted_units(&id, &id, d, side)
}

fn kernel_subalgebra(d: usize, level: usize, op: &CMat, seed: u64) -> SubalgebraBasis {
    let cols = linalg::null_space(op, REL_CUTOFF);
    SubalgebraBasis::from_columns(d, level, cols, seed)
}

/// `M_{R,n} = {x : (ₙR)*(x⊗1)(ₙR) = 1⊗x}` at level `n`.
pub fn relative_commutant_m(r: &RMatrix, n: usize) -> Result<SubalgebraBasis> {
    relative_commutant_m_seeded(r, n, random::DEFAULT_SEED)
}

pub fn relative_commutant_m_seeded(r: &RMatrix, n: usize, seed: u64) -> Result<SubalgebraBasis> {
    check_level(n)?;
    let side = ipow(r.d, n);
    let chain = rmatrix::left_chain(r, n).matrix;
    let lhs = conj_embedded_units(&chain.adjoint(), &chain, r.d, side);
    let op = lhs - shift_operator(r.d, side);
    Ok(kernel_subalgebra(r.d, n, &op, seed))
}

/// Fixed points of `λ_R` at level `n`: `R_n(x⊗1)R_n* = x⊗1`.
pub fn fixed_subalgebra(r: &RMatrix, n: usize) -> Result<SubalgebraBasis> {
    fixed_subalgebra_seeded(r, n, random::DEFAULT_SEED)
}

pub fn fixed_subalgebra_seeded(r: &RMatrix, n: usize, seed: u64) -> Result<SubalgebraBasis> {
    check_level(n)?;
    let side = ipow(r.d, n);
    let chain = rmatrix::right_chain(r, n).matrix;
    let lhs = conj_embedded_units(&chain, &chain.adjoint(), r.d, side);
    let op = lhs - embedding_operator(r.d, side);
    Ok(kernel_subalgebra(r.d, n, &op, seed))
}

/// `N_{R,n}`: the largest subspace `V` of level `n` with `T(V) ⊆ V⊗1`, where
/// `T = ad ₙR ∘ φ`. Computed by the decreasing iteration
/// `V_{j+1} = {x ∈ V_j : T(x) ∈ V_j⊗1}`.
pub fn relative_commutant_n(r: &RMatrix, n: usize) -> Result<SubalgebraBasis> {
    let (basis, _) = relative_commutant_n_traced(r, n, random::DEFAULT_SEED)?;
    Ok(basis)
}

/// Same as [`relative_commutant_n`], also returning the dimension sequence.
pub fn relative_commutant_n_traced(r: &RMatrix, n: usize, seed: u64) -> Result<(SubalgebraBasis, Vec<usize>)> {
    check_level(n)?;
    let d = r.d;
    let side = ipow(d, n);
    let chain = rmatrix::left_chain(r, n).matrix;
    let t_op = conj_shifted_units(&chain, &chain.adjoint(), d, side);
    let e_op = embedding_operator(d, side) * C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut q = tensor::identity(side * side);
    let mut dims = vec![q.ncols()];
    let max_iter = side * side + 1;
    for _ in 0..max_iter {
        let w = &t_op * &q;
        let e = &e_op * &q;
        let resid = &w - &e * (e.adjoint() * &w);
        let c = linalg::null_space(&resid, REL_CUTOFF);
        let next = &q * c;
        let k = next.ncols();
        q = next;
        if k == *dims.last().unwrap() {
            break;
        }
        dims.push(k);
    }
    // Re-orthonormalize against accumulated roundoff.
    let q = linalg::column_span(&q, REL_CUTOFF);
    Ok((SubalgebraBasis::from_columns(d, n, q, seed), dims))
}

/// Commutant of `{φ^k(R) : k ≤ n−2}` inside level `n`.
pub fn braid_image_commutant(r: &RMatrix, n: usize) -> Result<SubalgebraBasis> {
    if n < 2 {
        return Err(Error::Level("braid_image_commutant needs n ≥ 2".into()));
    }
    let d = r.d;
    let side = ipow(d, n);
    let el = r.element();
    let gens: Vec<CMat> =
        (0..n - 1).map(|k| tensor::embed(&tensor::shift(&el, k), n).map(|g| g.matrix)).collect::<Result<_>>()?;
    let blocks = side * side;
    let mut op = CMat::zeros(blocks * gens.len(), blocks);
    for (gi, g) in gens.iter().enumerate() {
        let off = gi * blocks;
        for a in 0..side {
            for b in 0..side {
                let col = a * side + b;
                // E_ab G has row a equal to row b of G; G E_ab has column b equal to column a of G.
                for j in 0..side {
                    op[(off + a * side + j, col)] += g[(b, j)];
                }
                for i in 0..side {
                    op[(off + i * side + b, col)] -= g[(i, a)];
                }
            }
        }
    }
    Ok(kernel_subalgebra(d, n, &op, random::DEFAULT_SEED))
}

/// Budget for the `L_{R,n}` truncation schedule.
#[derive(Debug, Clone, Copy)]
pub struct LBudget {
    pub max_strands: usize,
    pub max_len: usize,
    /// Largest matrix side `d^m` a step may use.
    pub max_side: usize,
    /// Largest word-span dimension a step may build.
    pub max_span: usize,
}

impl LBudget {
    pub fn default_for(n: usize) -> Self {
        Self { max_strands: n + 3, max_len: 6, max_side: 81, max_span: 1500 }
    }
}

/// Words `ρ_R(w)` of length `≤ len` in `B_m` that are linearly independent
/// of the shorter ones, found breadth-first.
fn word_span(r: &RMatrix, m: usize, len: usize, max_span: usize) -> Option<Vec<CMat>> {
    let d = r.d;
    let side = ipow(d, m);
    let adj = r.matrix.adjoint();
    let mut basis = OrthoBasis::new(side * side);
    let id = tensor::identity(side);
    basis.push(&tensor::vec_rowmajor(&id), REL_CUTOFF);
    let mut words = vec![id.clone()];
    let mut frontier = vec![id];
    for _ in 0..len {
        let mut next = Vec::new();
        for f in &frontier {
            for k in 1..m {
                for g in [&r.matrix, &adj] {
                    let cand = tensor::mul_right_local(f, g, d, m, k - 1, 2);
                    if basis.push(&tensor::vec_rowmajor(&cand), WORD_TOL) {
                        words.push(cand.clone());
                        next.push(cand);
                        if basis.len() > max_span {
                            return None;
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Some(words)
}

/// Relative residual below which a new word or product counts as dependent.
const WORD_TOL: f64 = 1e-8;

/// Closes an orthonormal family of level-`n` matrices under multiplication.
fn close_under_products(mut basis: OrthoBasis, side: usize) -> OrthoBasis {
    loop {
        let mats: Vec<CMat> = basis.vectors.iter().map(|v| tensor::unvec_rowmajor(v, side)).collect();
        let mut grew = false;
        for a in &mats {
            for b in &mats {
                // Basis elements have unit Frobenius norm, so products are at most 1.
                if basis.push_above(&tensor::vec_rowmajor(&(a * b)), WORD_TOL) {
                    grew = true;
                }
            }
        }
        if !grew {
            return basis;
        }
    }
}

/// Truncated `L_{R,n}`: the algebra generated by `E_n(ρ_R(w))`, grown in
/// lockstep over `(m, len) = (n+1, 4), (n+2, 5), …` until the dimension is
/// unchanged for two consecutive increments or the budget is reached.
/// Since `L_{R,n} ⊆ M_{R,n}`, reaching `dim M_{R,n}` also ends the schedule
/// and counts as converged.
pub fn relative_commutant_l(r: &RMatrix, n: usize, budget: LBudget) -> Result<SubalgebraBasis> {
    check_level(n)?;
    let d = r.d;
    let side = ipow(d, n);
    let ceiling = relative_commutant_m(r, n)?.dim();
    let mut dims: Vec<usize> = Vec::new();
    let mut last: Option<OrthoBasis> = None;
    let mut converged = false;
    let scale = (side as f64).sqrt();
    let mut j = 0;
    loop {
        let (m, len) = (n + 1 + j, 4 + j);
        if m > budget.max_strands || len > budget.max_len || ipow(d, m) > budget.max_side {
            break;
        }
        let Some(words) = word_span(r, m, len, budget.max_span) else { break };
        let mut b = OrthoBasis::new(side * side);
        b.push(&tensor::vec_rowmajor(&tensor::identity(side)), REL_CUTOFF);
        for w in words {
            let e = tensor::expectation_to_level(&AlgebraElement::from_parts(d, m, w), n)?;
            b.push_above(&tensor::vec_rowmajor(&e.matrix), WORD_TOL * scale);
        }
        let b = close_under_products(b, side);
        dims.push(b.len());
        last = Some(b);
        let stable = dims.len() >= 3 && dims[dims.len() - 3..].iter().all(|&x| x == dims[dims.len() - 1]);
        if stable || dims[dims.len() - 1] >= ceiling {
            converged = true;
            break;
        }
        j += 1;
    }
    let basis = last.unwrap_or_else(|| {
        let mut b = OrthoBasis::new(side * side);
        b.push(&tensor::vec_rowmajor(&tensor::identity(side)), REL_CUTOFF);
        b
    });
    let mut out = SubalgebraBasis::from_columns(d, n, basis.as_columns(), random::DEFAULT_SEED);
    out.converged = converged;
    Ok(out)
}

fn check_level(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Level("relative commutants start at level 1".into()));
    }
    Ok(())
}

/// Block profile of a *-algebra spanned by the given square matrices.
pub fn wedderburn_decompose(span: &[AlgebraElement]) -> Result<Vec<usize>> {
    let mats: Vec<CMat> = span.iter().map(|x| x.matrix.clone()).collect();
    wedderburn_decompose_seeded(&mats, random::DEFAULT_SEED)
}

const WEDDERBURN_RETRIES: usize = 6;

/// Wedderburn block sizes of the algebra spanned by `span`.
///
/// The center is solved inside the span; a random real combination of its
/// Hermitian elements is diagonalized and each spectral projection `P` gives a
/// block of size `√dim(P·A)`. Collisions between central eigenvalues are
/// detected by comparing the cluster count with the center dimension and
/// retried with a bumped seed.
pub fn wedderburn_decompose_seeded(span: &[CMat], seed: u64) -> Result<Vec<usize>> {
    if span.is_empty() {
        return Err(Error::Domain("empty span".into()));
    }
    let side = span[0].nrows();
    let mut ob = OrthoBasis::new(side * side);
    for x in span {
        if x.shape() != (side, side) {
            return Err(Error::Shape("span elements differ in size".into()));
        }
        ob.push(&tensor::vec_rowmajor(x), REL_CUTOFF);
    }
    let k = ob.len();
    if k == side * side {
        return Ok(vec![side]);
    }
    let basis: Vec<CMat> = ob.vectors.iter().map(|v| tensor::unvec_rowmajor(v, side)).collect();
    let mut g = random::rng(seed);
    check_closure(&ob, &basis, side, &mut g)?;

    for attempt in 0..WEDDERBURN_RETRIES {
        let mut g = random::rng(seed.wrapping_add(attempt as u64 * 0x9e37_79b9));
        let center = center_of(&basis, side, &mut g);
        let zdim = center.len();
        let mut h = CMat::zeros(side, side);
        for z in &center {
            let re = (z + z.adjoint()) * C64::new(0.5, 0.0);
            let im = (z - z.adjoint()) * C64::new(0.0, -0.5);
            h += re * C64::new(g.gen_range(-1.0..1.0), 0.0);
            h += im * C64::new(g.gen_range(-1.0..1.0), 0.0);
        }
        let (vals, vecs) = tensor::hermitian_eigen(&h);
        let spread = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let cvals: Vec<C64> = vals.iter().map(|&v| C64::new(v, 0.0)).collect();
        let groups = tensor::cluster_values(&cvals, 1e-7 * spread);
        if groups.len() != zdim {
            continue;
        }
        let mut blocks = Vec::with_capacity(zdim);
        let mut ok = true;
        for grp in &groups {
            let mut p = CMat::zeros(side, side);
            for &i in grp {
                let col = vecs.column(i);
                p += col * col.adjoint();
            }
            let compressed = CMat::from_fn(side * side, k, |row, col| {
                let prod = &p * &basis[col];
                prod[(row / side, row % side)]
            });
            let dim = linalg::rank(&compressed, REL_CUTOFF);
            let root = (dim as f64).sqrt().round() as usize;
            if root * root != dim {
                ok = false;
                break;
            }
            blocks.push(root);
        }
        if ok && blocks.iter().map(|b| b * b).sum::<usize>() == k {
            blocks.sort_unstable();
            return Ok(blocks);
        }
    }
    Err(Error::Numerical {
        message: "could not separate the minimal central projections".into(),
        retries: WEDDERBURN_RETRIES,
    })
}

/// Checks unitality, *-closure and multiplicative closure of the span.
fn check_closure(ob: &OrthoBasis, basis: &[CMat], side: usize, g: &mut impl Rng) -> Result<()> {
    let mut worst = ob.residual(&tensor::vec_rowmajor(&tensor::identity(side)));
    for b in basis {
        worst = worst.max(ob.residual(&tensor::vec_rowmajor(&b.adjoint())));
    }
    // Products are measured against ‖a‖‖b‖, since `ab` itself may vanish up to roundoff.
    let product_residual = |a: &CMat, b: &CMat| {
        let ab = a * b;
        ob.residual(&tensor::vec_rowmajor(&ab)) * ab.norm() / (a.norm() * b.norm()).max(f64::MIN_POSITIVE)
    };
    if basis.len() <= 40 {
        for a in basis {
            for b in basis {
                worst = worst.max(product_residual(a, b));
            }
        }
    } else {
        for _ in 0..24 {
            let a = random_combination(basis, g);
            let b = random_combination(basis, g);
            worst = worst.max(product_residual(&a, &b));
        }
    }
    if worst > CLOSURE_TOL {
        return Err(Error::Domain(format!("span is not a *-algebra (closure residual {worst:e})")));
    }
    Ok(())
}

fn random_combination(basis: &[CMat], g: &mut impl Rng) -> CMat {
    let side = basis[0].nrows();
    let mut x = CMat::zeros(side, side);
    for b in basis {
        x += b * random::gaussian(g);
    }
    x
}

/// Center of the algebra spanned by the orthonormal `basis`.
///
/// Small algebras test commutation with every basis element; larger ones with
/// three random elements, which generate the algebra almost surely.
fn center_of(basis: &[CMat], side: usize, g: &mut impl Rng) -> Vec<CMat> {
    let tests: Vec<CMat> =
        if basis.len() <= 40 { basis.to_vec() } else { (0..3).map(|_| random_combination(basis, g)).collect() };
    let blocks = side * side;
    let mut op = CMat::zeros(blocks * tests.len(), basis.len());
    for (ti, t) in tests.iter().enumerate() {
        for (k, b) in basis.iter().enumerate() {
            let comm = tensor::commutator(b, t);
            for i in 0..side {
                for j in 0..side {
                    op[(ti * blocks + i * side + j, k)] = comm[(i, j)];
                }
            }
        }
    }
    let coeffs = linalg::null_space(&op, REL_CUTOFF);
    (0..coeffs.ncols())
        .map(|c| {
            let mut z = CMat::zeros(side, side);
            for (k, b) in basis.iter().enumerate() {
                z += b * coeffs[(k, c)];
            }
            z
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{make_flip, make_r4, make_trivial};
    use crate::tensor::c;

    fn el(m: CMat) -> AlgebraElement {
        let side = m.nrows();
        AlgebraElement::from_parts(side, 1, m)
    }

    #[test]
    fn wedderburn_small_examples() {
        assert_eq!(wedderburn_decompose(&[el(tensor::identity(2))]).unwrap(), vec![1]);
        let full: Vec<AlgebraElement> = (0..4)
            .map(|k| {
                let mut m = CMat::zeros(2, 2);
                m[(k / 2, k % 2)] = c(1.0, 0.0);
                el(m)
            })
            .collect();
        assert_eq!(wedderburn_decompose(&full).unwrap(), vec![2]);
        let diag: Vec<AlgebraElement> = vec![full[0].clone(), full[3].clone()];
        assert_eq!(wedderburn_decompose(&diag).unwrap(), vec![1, 1]);
        let not_alg = vec![el(tensor::identity(2)), full[1].clone()];
        assert!(matches!(wedderburn_decompose(&not_alg), Err(Error::Domain(_))));
    }

    #[test]
    fn profile_strings() {
        assert_eq!(profile_string(&[1, 1, 2]), "C^2 (+) M_2");
        assert_eq!(profile_string(&[1]), "C");
        assert_eq!(profile_string(&[3]), "M_3");
    }

    #[test]
    fn flip_commutants() {
        let f = make_flip(2).unwrap();
        let m = relative_commutant_m(&f, 1).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.profile, BlockProfile::Resolved(vec![2]));
        assert_eq!(relative_commutant_n(&f, 1).unwrap().dim(), 4);
        assert!(fixed_subalgebra(&f, 1).unwrap().is_trivial());
    }

    #[test]
    fn trivial_commutants() {
        let t = make_trivial(2, c(0.0, 1.0)).unwrap();
        assert!(relative_commutant_m(&t, 1).unwrap().is_trivial());
        assert!(relative_commutant_n(&t, 1).unwrap().is_trivial());
        assert_eq!(fixed_subalgebra(&t, 2).unwrap().dim(), 16);
        assert_eq!(braid_image_commutant(&t, 3).unwrap().dim(), 64);
    }

    #[test]
    fn r4_fixed_points_double() {
        let r = make_r4(c(1.0, 0.0)).unwrap();
        for n in 1..=3 {
            assert_eq!(fixed_subalgebra(&r, n).unwrap().dim(), 1 << n);
        }
    }

    #[test]
    fn apply_endo_of_flip_is_shift() {
        let f = make_flip(3).unwrap();
        let x = AlgebraElement::from_parts(3, 1, CMat::from_fn(3, 3, |i, j| c(i as f64, j as f64)));
        let y = apply_endo(&f, &x).unwrap();
        assert!((y.matrix - tensor::shift(&x, 1).matrix).norm() < 1e-13);
    }
}
