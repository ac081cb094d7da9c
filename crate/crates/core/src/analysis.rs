//! Invariants and verdicts derived from an R-matrix: the partial-trace
//! invariant, ergodicity, irreducibility, index bounds, spectral
//! concentration, and normal forms of involutive R-matrices.

use rand::Rng;

use crate::commutant;
use crate::error::{Error, Result};
use crate::random;
use crate::rmatrix::{self, NormalFormSpec, RMatrix};
use crate::tensor::{self, ipow, AlgebraElement, CMat, C64};

/// Spectral clustering radius used for eigenvalue counts.
pub const SPECTRAL_TOL: f64 = 1e-9;

/// `φ_R(R)` together with its consistency residuals.
#[derive(Debug, Clone)]
pub struct PartialTraceInvariant {
    pub element: AlgebraElement,
    pub left_right_discrepancy: f64,
    pub normality_residual: f64,
    pub operator_norm: f64,
}

/// Left partial trace of `R`, checked against the right partial trace and for normality.
pub fn partial_trace_invariant(r: &RMatrix) -> Result<PartialTraceInvariant> {
    let el = r.element();
    let left = tensor::partial_trace_left(&el)?;
    let right = tensor::partial_trace_right(&el)?;
    let a = &left.matrix;
    let inv = PartialTraceInvariant {
        left_right_discrepancy: (a - &right.matrix).norm(),
        normality_residual: (a * a.adjoint() - a.adjoint() * a).norm(),
        operator_norm: tensor::operator_norm(a),
        element: left,
    };
    if inv.left_right_discrepancy > 1e-10 || inv.normality_residual > 1e-10 {
        return Err(Error::Internal(format!(
            "partial trace of a verified R-matrix is inconsistent: left/right {:e}, normality {:e}",
            inv.left_right_discrepancy, inv.normality_residual
        )));
    }
    Ok(inv)
}

/// Result of the ergodicity test with the worst-violating index.
#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicityVerdict {
    pub ergodic: bool,
    pub max_deviation: f64,
    /// `(i, j, k, l)` 0-based, at which the deviation is largest.
    pub witness: (usize, usize, usize, usize),
}

pub const ERGODIC_TOL: f64 = 1e-10;

/// Checks `Σ_{n,m} R^{im}_{kn} conj(R^{jm}_{ln}) = δ_ij δ_kl` entrywise.
pub fn is_ergodic(r: &RMatrix, tol: f64) -> ErgodicityVerdict {
    let d = r.d;
    let mut worst = (0.0, (0, 0, 0, 0));
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut s = C64::new(0.0, 0.0);
                    for m in 0..d {
                        for n in 0..d {
                            s += r.entry(i, m, k, n) * r.entry(j, m, l, n).conj();
                        }
                    }
                    if i == j && k == l {
                        s -= C64::new(1.0, 0.0);
                    }
                    if s.norm() > worst.0 {
                        worst = (s.norm(), (i, j, k, l));
                    }
                }
            }
        }
    }
    ErgodicityVerdict { ergodic: worst.0 <= tol, max_deviation: worst.0, witness: worst.1 }
}

/// `τ(R*φ(R))`.
pub fn trace_r_star_phi_r(r: &RMatrix) -> C64 {
    let el = r.element();
    let a = tensor::embed(&el.adjoint(), 3).expect("level 2 embeds into level 3");
    let b = tensor::shift(&el, 1);
    let n = a.dim();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += a.matrix[(i, j)] * b.matrix[(j, i)];
        }
    }
    s / n as f64
}

/// `|τ(R*φ(R)) − 1/d²|`; zero for every ergodic R-matrix.
pub fn ergodicity_necessary_check(r: &RMatrix) -> f64 {
    let d2 = (r.d * r.d) as f64;
    (trace_r_star_phi_r(r) - C64::new(1.0 / d2, 0.0)).norm()
}

/// Irreducible means `M_{R,1} = ℂ`.
pub fn is_irreducible(r: &RMatrix) -> Result<bool> {
    Ok(commutant::relative_commutant_m(r, 1)?.is_trivial())
}

/// Interval for the index of `λ_R` obtained from spectral data.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexBounds {
    pub lower_minimal: f64,
    pub upper_jones: f64,
    pub sources: Vec<String>,
    pub distinct_eigenvalues_r: usize,
    pub distinct_eigenvalues_phi: usize,
    /// Smallest distance between distinct eigenvalues of `R` and of `φ_R(R)`.
    pub spectral_gaps: (f64, f64),
}

fn min_gap(values: &[C64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            g = g.min((values[i] - values[j]).norm());
        }
    }
    g
}

/// `max(|σ(R)|, |σ(φ_R(R))|², 1) ≤ Ind ≤ min(d², ‖φ_R(R)^{-1}‖⁴)`.
pub fn index_bounds(r: &RMatrix) -> Result<IndexBounds> {
    let d2 = (r.d * r.d) as f64;
    let sr = tensor::spectrum(&r.matrix, SPECTRAL_TOL)?;
    let phi = partial_trace_invariant(r)?.element.matrix;
    let sp = tensor::spectrum(&phi, SPECTRAL_TOL)?;
    let nr = sr.len();
    let np = sp.len();
    let mut sources = Vec::new();
    let mut lower = 1.0f64;
    if nr as f64 > lower {
        lower = nr as f64;
    }
    if (np * np) as f64 > lower {
        lower = (np * np) as f64;
    }
    if nr as f64 == lower && nr > 1 {
        sources.push("lower: distinct eigenvalues of R".to_string());
    }
    if (np * np) as f64 == lower && np > 1 {
        sources.push("lower: squared count of distinct eigenvalues of the partial trace".to_string());
    }
    let mut upper = d2;
    sources.push("upper: d^2".to_string());
    let smallest = sp.iter().map(|(v, _)| v.norm()).fold(f64::INFINITY, f64::min);
    if smallest > 1e-9 {
        let inv_norm = 1.0 / smallest;
        let bound = inv_norm.powi(4);
        if bound < upper {
            upper = bound;
            sources.push("upper: fourth power of the inverse partial-trace norm".to_string());
        }
    }
    let rv: Vec<C64> = sr.iter().map(|s| s.0).collect();
    let pv: Vec<C64> = sp.iter().map(|s| s.0).collect();
    Ok(IndexBounds {
        lower_minimal: lower,
        upper_jones: upper,
        sources,
        distinct_eigenvalues_r: nr,
        distinct_eigenvalues_phi: np,
        spectral_gaps: (min_gap(&rv), min_gap(&pv)),
    })
}

/// `1 − 2^{−1/4}`.
pub fn concentration_threshold() -> f64 {
    1.0 - 2f64.powf(-0.25)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationVerdict {
    /// `min_{|μ|=1} ‖R − μ‖`.
    pub min_distance: f64,
    pub threshold: f64,
    /// `min_distance − threshold`.
    pub margin: f64,
    pub concluded_trivial: bool,
}

/// Smallest operator-norm distance from `R` to a unit scalar, and the
/// triviality conclusion when it falls below `1 − 2^{−1/4}`.
///
/// For eigenvalues on the circle, `max_k |λ_k − μ|` is minimized at the
/// midpoint of the shortest arc containing the spectrum.
pub fn triviality_by_concentration(r: &RMatrix) -> Result<ConcentrationVerdict> {
    let spec = tensor::spectrum(&r.matrix, SPECTRAL_TOL)?;
    let mut args: Vec<f64> = spec.iter().map(|(v, _)| v.arg()).collect();
    args.sort_by(f64::total_cmp);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut best_gap = two_pi - (args[args.len() - 1] - args[0]);
    let mut gap_end = args[0];
    for w in args.windows(2) {
        if w[1] - w[0] > best_gap {
            best_gap = w[1] - w[0];
            gap_end = w[1];
        }
    }
    let arc = two_pi - best_gap;
    let mu = tensor::cis(gap_end + arc / 2.0);
    let dist = spec.iter().map(|(v, _)| (v - mu).norm()).fold(0.0, f64::max);
    let threshold = concentration_threshold();
    let concluded = dist < threshold;
    if concluded && !rmatrix::is_trivial(r, 1e-8) {
        return Err(Error::Internal(format!("spectrum within {dist} of a scalar but R is not trivial")));
    }
    Ok(ConcentrationVerdict { min_distance: dist, threshold, margin: dist - threshold, concluded_trivial: concluded })
}

/// Recovers the normal form of an involutive R-matrix from the spectrum of
/// its partial trace: eigenvalue `±k/d` with multiplicity `m` gives `m/k`
/// blocks of size `k` and that sign.
pub fn normal_form_of_involutive(r: &RMatrix, tol: f64) -> Result<NormalFormSpec> {
    if !rmatrix::is_involutive(r, tol.max(1e-10)) {
        return Err(Error::NotNormalForm("R is not involutive".into()));
    }
    let d = r.d as f64;
    let phi = partial_trace_invariant(r)?.element.matrix;
    let mut blocks = Vec::new();
    for (v, mult) in tensor::spectrum(&phi, SPECTRAL_TOL)? {
        if v.im.abs() > 1e-8 {
            return Err(Error::NotNormalForm(format!("non-real partial-trace eigenvalue {v}")));
        }
        let k = d * v.re.abs();
        let kr = k.round();
        if kr < 1.0 || (k - kr).abs() > 1e-6 {
            return Err(Error::NotNormalForm(format!("eigenvalue {} is not ±k/d", v.re)));
        }
        let count = mult as f64 / kr;
        let cr = count.round();
        if cr < 1.0 || (count - cr).abs() > 1e-9 {
            return Err(Error::NotNormalForm(format!(
                "eigenvalue {} has multiplicity {mult}, not a multiple of {kr}",
                v.re
            )));
        }
        let sign = if v.re > 0.0 { 1 } else { -1 };
        for _ in 0..cr as usize {
            blocks.push((kr as usize, sign));
        }
    }
    NormalFormSpec::new(blocks)
}

/// Restriction tree of an involutive R-matrix.
#[derive(Debug, Clone)]
pub enum ReductionTree {
    /// Irreducible piece: `sign·1_d` (`flip_like = false`) or equivalent to `sign·F_d`.
    Leaf {
        d: usize,
        sign: i8,
        flip_like: bool,
    },
    Split {
        d: usize,
        projection_rank: usize,
        first: Box<ReductionTree>,
        second: Box<ReductionTree>,
    },
}

impl ReductionTree {
    /// Normal-form blocks contributed by the leaves.
    pub fn leaf_blocks(&self) -> Vec<(usize, i8)> {
        match self {
            ReductionTree::Leaf { d, sign, flip_like: false } => vec![(*d, *sign)],
            ReductionTree::Leaf { d, sign, flip_like: true } => vec![(1, *sign); *d],
            ReductionTree::Split { first, second, .. } => {
                let mut v = first.leaf_blocks();
                v.extend(second.leaf_blocks());
                v
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ReductionTree::Leaf { .. } => 1,
            ReductionTree::Split { first, second, .. } => first.leaf_count() + second.leaf_count(),
        }
    }

    pub fn spec(&self) -> Result<NormalFormSpec> {
        NormalFormSpec::new(self.leaf_blocks())
    }
}

/// Unitary whose first columns span the range of the Hermitian projection `p`.
fn adapted_basis(p: &CMat) -> (CMat, usize) {
    let (vals, vecs) = tensor::hermitian_eigen(p);
    let n = p.nrows();
    // Eigenvalues ascend, so the range (eigenvalue 1) comes last.
    let rank = vals.iter().filter(|&&v| v > 0.5).count();
    let order: Vec<usize> = ((n - rank)..n).chain(0..(n - rank)).collect();
    (CMat::from_fn(n, n, |i, k| vecs[(i, order[k])]), rank)
}

/// Restriction of `R` (already rotated) to the coordinate block `[start, start+k)`.
fn restrict(m: &CMat, d: usize, start: usize, k: usize) -> CMat {
    CMat::from_fn(k * k, k * k, |row, col| {
        let (a, b) = (row / k + start, row % k + start);
        let (c, e) = (col / k + start, col % k + start);
        m[(a * d + b, c * d + e)]
    })
}

/// A nontrivial projection in the algebra spanned by `basis`, as an
/// eigenprojection of a random Hermitian element.
fn nontrivial_projection(basis: &[AlgebraElement], seed: u64) -> Option<CMat> {
    let side = basis[0].dim();
    let mut g = random::rng(seed);
    let mut h = CMat::zeros(side, side);
    for b in basis {
        let x = &b.matrix;
        h += (x + x.adjoint()) * C64::new(g.gen_range(-1.0..1.0) * 0.5, 0.0);
        h += (x - x.adjoint()) * C64::new(0.0, -0.5 * g.gen_range(-1.0..1.0));
    }
    let spaces = tensor::eig_normal(&h, 1e-8).ok()?;
    if spaces.len() < 2 {
        return None;
    }
    spaces.into_iter().min_by_key(|s| s.multiplicity).map(|s| s.projection)
}

/// Splits an involutive R-matrix along projections of `M_{R,1}` until every
/// piece is irreducible, and checks that each piece is `±1` or `∼ ±F`.
pub fn reduce_involutive(r: &RMatrix, tol: f64) -> Result<ReductionTree> {
    if !rmatrix::is_involutive(r, tol.max(1e-10)) {
        return Err(Error::NotNormalForm("R is not involutive".into()));
    }
    reduce_rec(r, 0)
}

fn reduce_rec(r: &RMatrix, depth: usize) -> Result<ReductionTree> {
    let d = r.d;
    let scalar_sign = |r: &RMatrix| -> Option<i8> {
        if rmatrix::is_trivial(r, 1e-8) {
            Some(if r.matrix[(0, 0)].re > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    };
    if d == 1 {
        let sign = scalar_sign(r).ok_or_else(|| Error::Internal("1×1 involution is not ±1".into()))?;
        return Ok(ReductionTree::Leaf { d: 1, sign, flip_like: false });
    }
    let m = commutant::relative_commutant_m(r, 1)?;
    let proj = if m.is_trivial() { None } else { nontrivial_projection(&m.basis, random::DEFAULT_SEED + depth as u64) };
    match proj {
        None => {
            if let Some(sign) = scalar_sign(r) {
                return Ok(ReductionTree::Leaf { d, sign, flip_like: false });
            }
            let phi = partial_trace_invariant(r)?.element.matrix;
            for sign in [1i8, -1] {
                let target = tensor::identity(d) * C64::new(sign as f64 / d as f64, 0.0);
                if (&phi - target).norm() <= 1e-8 {
                    return Ok(ReductionTree::Leaf { d, sign, flip_like: true });
                }
            }
            Err(Error::NotNormalForm(format!(
                "irreducible involutive piece of dimension {d} is neither ±1 nor flip-like"
            )))
        }
        Some(p) => {
            let (w, rank) = adapted_basis(&p);
            let ww = tensor::kron(&w, &w);
            let rotated = ww.adjoint() * &r.matrix * &ww;
            let s = restrict(&rotated, d, 0, rank);
            let t = restrict(&rotated, d, rank, d - rank);
            let s = rmatrix::verify_labeled(&s, rank, 1e-8, "restriction")?;
            let t = rmatrix::verify_labeled(&t, d - rank, 1e-8, "restriction")?;
            Ok(ReductionTree::Split {
                d,
                projection_rank: rank,
                first: Box::new(reduce_rec(&s, depth + 1)?),
                second: Box::new(reduce_rec(&t, depth + 1)?),
            })
        }
    }
}

/// The known index for families where it is available, with a short source tag.
pub fn known_index(r: &RMatrix) -> Option<(f64, &'static str)> {
    if rmatrix::is_trivial(r, 1e-10) {
        return Some((1.0, "automorphism"));
    }
    let d = r.d;
    // Diagonal in the computational basis: R·F is diagonal.
    let rf = &r.matrix * rmatrix::flip_matrix(d);
    let off: f64 = (0..d * d)
        .flat_map(|i| (0..d * d).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| rf[(i, j)].norm_sqr())
        .sum::<f64>()
        .sqrt();
    if off < 1e-10 {
        return Some(((d * d) as f64, "diagonal"));
    }
    None
}

/// Dimension of level-`n` matrices `d^{2n}`, used for caps.
pub fn level_dim(d: usize, n: usize) -> usize {
    ipow(d, 2 * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{make_flip, make_normal_form, make_r3, make_r4, make_trivial, scalar_multiple};
    use crate::tensor::c;

    #[test]
    fn ergodicity_basics() {
        assert!(is_ergodic(&make_flip(3).unwrap(), ERGODIC_TOL).ergodic);
        assert!(!is_ergodic(&make_trivial(2, c(1.0, 0.0)).unwrap(), ERGODIC_TOL).ergodic);
        assert!(ergodicity_necessary_check(&make_flip(2).unwrap()) < 1e-15);
        assert!(!is_ergodic(&make_r4(c(1.0, 0.0)).unwrap(), ERGODIC_TOL).ergodic);
    }

    #[test]
    fn r3_partial_trace_is_scalar() {
        let (p, q, r) = (c(0.0, 1.0), tensor::cis(0.3), tensor::cis(-1.1));
        let inv = partial_trace_invariant(&make_r3(p, q, r).unwrap()).unwrap();
        assert!((inv.element.matrix - tensor::identity(2) * (q / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn index_bounds_examples() {
        let f = index_bounds(&make_flip(2).unwrap()).unwrap();
        assert_eq!((f.lower_minimal, f.upper_jones), (2.0, 4.0));
        let t = index_bounds(&make_trivial(2, c(0.0, 1.0)).unwrap()).unwrap();
        assert_eq!((t.lower_minimal, t.upper_jones), (1.0, 1.0));
        let r4 = index_bounds(&make_r4(c(1.0, 0.0)).unwrap()).unwrap();
        assert!(r4.lower_minimal <= 2.0 && 2.0 <= r4.upper_jones);
    }

    #[test]
    fn concentration() {
        let f = triviality_by_concentration(&make_flip(2).unwrap()).unwrap();
        assert!((f.min_distance - 2f64.sqrt()).abs() < 1e-12 || (f.min_distance - 1.0).abs() < 1e-12);
        let t = triviality_by_concentration(&make_trivial(2, c(0.0, 1.0)).unwrap()).unwrap();
        assert!(t.concluded_trivial && t.min_distance < 1e-12);
    }

    #[test]
    fn normal_forms() {
        let f = make_flip(3).unwrap();
        assert_eq!(normal_form_of_involutive(&f, 1e-10).unwrap().blocks(), &[(1, 1), (1, 1), (1, 1)]);
        let mf = scalar_multiple(&make_flip(2).unwrap(), c(-1.0, 0.0)).unwrap();
        assert_eq!(normal_form_of_involutive(&mf, 1e-10).unwrap().blocks(), &[(1, -1), (1, -1)]);
        let spec = NormalFormSpec::parse("2:+,1:+").unwrap();
        let n = make_normal_form(&spec).unwrap();
        let tree = reduce_involutive(&n, 1e-10).unwrap();
        assert_eq!(tree.spec().unwrap(), spec);
    }
}
