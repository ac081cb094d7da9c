//! Classification of two-dimensional R-matrices into the four families up
//! to quasifree conjugation `λ_u`.

use std::fmt;

use rand::Rng;

use crate::commutant;
use crate::error::{Error, Result};
use crate::random;
use crate::rmatrix::{self, RMatrix};
use crate::tensor::{self, c, cis, kron, CMat, C64};

pub const CLASSIFY_TOL: f64 = 1e-8;
pub const DEFAULT_STARTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    One,
    Two,
    Three,
    Four,
    Unclassified,
}

impl Family {
    pub fn number(self) -> Option<u8> {
        match self {
            Family::One => Some(1),
            Family::Two => Some(2),
            Family::Three => Some(3),
            Family::Four => Some(4),
            Family::Unclassified => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number() {
            Some(k) => write!(f, "{k}"),
            None => f.write_str("unclassified"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dim2Classification {
    pub family: Family,
    /// `[q]`, `[p,q,r,s]`, `[p,q,r]` or `[q]` by family.
    pub parameters: Vec<C64>,
    /// `u` with `R = λ_u(R_family(parameters))`.
    pub conjugator: Option<CMat>,
    /// Frobenius reconstruction error, or the best residual found when unclassified.
    pub residual: f64,
    /// Other families that also fit within the tolerance (the family sets
    /// intersect at special parameters).
    pub alternatives: Vec<Family>,
    /// Family with the smallest residual, also when it exceeds the tolerance.
    pub nearest: Option<Family>,
}

impl Dim2Classification {
    /// Whether `family` is the reported family or one of the alternatives.
    pub fn admits(&self, family: Family) -> bool {
        self.family == family || self.alternatives.contains(&family)
    }
}

/// Matrix of a family representative from raw (possibly non-unit) parameters.
pub fn family_matrix(family: Family, params: &[C64]) -> Option<CMat> {
    let mut m = CMat::zeros(4, 4);
    match (family, params) {
        (Family::One, [q]) => return Some(tensor::identity(4) * *q),
        (Family::Two, [p, q, r, s]) => {
            m[(0, 0)] = *p;
            m[(1, 2)] = *q;
            m[(2, 1)] = *r;
            m[(3, 3)] = *s;
        }
        (Family::Three, [p, q, r]) => {
            m[(0, 3)] = *p;
            m[(1, 1)] = *q;
            m[(2, 2)] = *q;
            m[(3, 0)] = *r;
        }
        (Family::Four, [q]) => return Some(rmatrix::r4_pattern() * *q),
        _ => return None,
    }
    Some(m)
}

fn reconstruction_residual(r: &CMat, family: Family, params: &[C64], u: &CMat) -> f64 {
    let uu = kron(u, u);
    let m = family_matrix(family, params).expect("parameter count matches family");
    (&uu * m * uu.adjoint() - r).norm()
}

fn unit(z: C64) -> C64 {
    if z.norm() > 0.0 {
        z / z.norm()
    } else {
        c(1.0, 0.0)
    }
}

/// Unitary with first column `(cos θ/2, e^{iφ} sin θ/2)`.
fn sphere_unitary(theta: f64, phi: f64) -> CMat {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = cis(phi);
    CMat::from_row_slice(2, 2, &[c(ct, 0.0), -e.conj() * st, e * st, c(ct, 0.0)])
}

fn sphere_coords(a: &[C64]) -> (f64, f64) {
    let theta = 2.0 * a[0].norm().clamp(0.0, 1.0).acos();
    (theta, a[1].arg() - a[0].arg())
}

const PATTERN2: [(usize, usize); 4] = [(0, 0), (1, 2), (2, 1), (3, 3)];
const PATTERN3: [(usize, usize); 4] = [(0, 3), (1, 1), (2, 2), (3, 0)];

fn off_pattern(m: &CMat, pattern: &[(usize, usize)]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if !pattern.contains(&(i, j)) {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn shape_residual(r: &CMat, family: Family, theta: f64, phi: f64) -> f64 {
    let u = sphere_unitary(theta, phi);
    let uu = kron(&u, &u);
    let m = uu.adjoint() * r * uu;
    match family {
        Family::Two => off_pattern(&m, &PATTERN2).sqrt(),
        Family::Three => (off_pattern(&m, &PATTERN3) + (m[(1, 1)] - m[(2, 2)]).norm_sqr()).sqrt(),
        _ => unreachable!("shape search is only for families 2 and 3"),
    }
}

/// The entries that must vanish, split into real and imaginary parts.
fn shape_vector(r: &CMat, family: Family, theta: f64, phi: f64) -> Vec<f64> {
    let u = sphere_unitary(theta, phi);
    let uu = kron(&u, &u);
    let m = uu.adjoint() * r * uu;
    let pattern = if family == Family::Two { &PATTERN2 } else { &PATTERN3 };
    let mut out = Vec::with_capacity(26);
    for i in 0..4 {
        for j in 0..4 {
            if !pattern.contains(&(i, j)) {
                out.extend([m[(i, j)].re, m[(i, j)].im]);
            }
        }
    }
    if family == Family::Three {
        let z = m[(1, 1)] - m[(2, 2)];
        out.extend([z.re, z.im]);
    }
    out
}

/// Levenberg–Marquardt on [`shape_vector`] with a central-difference Jacobian.
fn shape_polish(r: &CMat, family: Family, start: (f64, f64)) -> ((f64, f64), f64) {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (mut t, mut p) = start;
    let mut res = shape_vector(r, family, t, p);
    let mut f = norm(&res);
    let mut mu = 1e-8;
    let h = 1e-7;
    for _ in 0..60 {
        if f < 1e-15 {
            break;
        }
        let jt: Vec<f64> = shape_vector(r, family, t + h, p)
            .iter()
            .zip(shape_vector(r, family, t - h, p))
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        let jp: Vec<f64> = shape_vector(r, family, t, p + h)
            .iter()
            .zip(shape_vector(r, family, t, p - h))
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (a11, a12, a22) = (dot(&jt, &jt), dot(&jt, &jp), dot(&jp, &jp));
        let (g1, g2) = (dot(&jt, &res), dot(&jp, &res));
        let mut improved = false;
        for _ in 0..20 {
            let (b11, b22) = (a11 + mu * (a11 + 1e-30), a22 + mu * (a22 + 1e-30));
            let det = b11 * b22 - a12 * a12;
            if det.abs() < 1e-300 {
                mu *= 10.0;
                continue;
            }
            let dt = -(b22 * g1 - a12 * g2) / det;
            let dp = -(b11 * g2 - a12 * g1) / det;
            let cand = shape_vector(r, family, t + dt, p + dp);
            let cf = norm(&cand);
            if cf < f {
                t += dt;
                p += dp;
                res = cand;
                f = cf;
                mu = (mu * 0.1).max(1e-15);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    ((t, p), f)
}

fn read_parameters(r: &CMat, family: Family, u: &CMat) -> Vec<C64> {
    let uu = kron(u, u);
    let m = uu.adjoint() * r * uu;
    match family {
        Family::Two => PATTERN2.iter().map(|&ij| unit(m[ij])).collect(),
        Family::Three => vec![unit(m[(0, 3)]), unit((m[(1, 1)] + m[(2, 2)]) * 0.5), unit(m[(3, 0)])],
        _ => unreachable!(),
    }
}

/// Minimal Nelder–Mead in two variables; returns the best vertex and value.
fn nelder_mead(f: impl Fn(f64, f64) -> f64, start: (f64, f64), scale: f64, max_iter: usize) -> ((f64, f64), f64) {
    let mut pts = [start, (start.0 + scale, start.1), (start.0, start.1 + scale)];
    let mut vals = pts.map(|p| f(p.0, p.1));
    for _ in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);
        let size = ((pts[1].0 - pts[0].0).abs() + (pts[1].1 - pts[0].1).abs())
            .max((pts[2].0 - pts[0].0).abs() + (pts[2].1 - pts[0].1).abs());
        if size < 1e-15 || vals[0] < 1e-15 {
            break;
        }
        let cen = ((pts[0].0 + pts[1].0) / 2.0, (pts[0].1 + pts[1].1) / 2.0);
        let at = |t: f64| (cen.0 + t * (pts[2].0 - cen.0), cen.1 + t * (pts[2].1 - cen.1));
        let xr = at(-1.0);
        let fr = f(xr.0, xr.1);
        if fr < vals[0] {
            let xe = at(-2.0);
            let fe = f(xe.0, xe.1);
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
        } else {
            let xc = if fr < vals[2] { at(-0.5) } else { at(0.5) };
            let fc = f(xc.0, xc.1);
            if fc < vals[2].min(fr) {
                pts[2] = xc;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    pts[k] = ((pts[0].0 + pts[k].0) / 2.0, (pts[0].1 + pts[k].1) / 2.0);
                    vals[k] = f(pts[k].0, pts[k].1);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    (pts[best], vals[best])
}

/// Starting points: eigenvectors of Hermitian parts of the partial traces of
/// `R` and `R²`, leading singular vectors of the eigenvectors of `RF` read as
/// 2×2 matrices, then random draws.
fn seeds(r: &RMatrix, starts: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let push_eigvecs = |x: &CMat, out: &mut Vec<(f64, f64)>| {
        let herm = [(x + x.adjoint()) * c(0.5, 0.0), (x - x.adjoint()) * c(0.0, -0.5)];
        for h in herm {
            let (_, v) = tensor::hermitian_eigen(&h);
            for k in 0..v.ncols() {
                out.push(sphere_coords(&[v[(0, k)], v[(1, k)]]));
            }
        }
    };
    let el = r.element();
    if let Ok(p) = tensor::partial_trace_left(&el) {
        push_eigvecs(&p.matrix, &mut out);
    }
    let sq = el.mul(&el).expect("same level");
    if let Ok(p) = tensor::partial_trace_left(&sq) {
        push_eigvecs(&p.matrix, &mut out);
    }
    let rf = &r.matrix * rmatrix::flip_matrix(2);
    let hs = [(&rf + rf.adjoint()) * c(0.5, 0.0), (&rf - rf.adjoint()) * c(0.0, -0.5)];
    for h in hs {
        let (_, v) = tensor::hermitian_eigen(&h);
        for k in 0..4 {
            let col: Vec<C64> = (0..4).map(|i| v[(i, k)]).collect();
            let m = tensor::unvec_rowmajor(&col, 2);
            let svd = m.svd(true, false);
            if let Some(uu) = svd.u {
                for j in 0..2 {
                    out.push(sphere_coords(&[uu[(0, j)], uu[(1, j)]]));
                }
            }
        }
    }
    let mut g = random::rng(seed);
    while out.len() < starts {
        let a = [random::gaussian(&mut g), random::gaussian(&mut g)];
        let n = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
        out.push(sphere_coords(&[a[0] / n, a[1] / n]));
    }
    out.truncate(starts.max(1));
    // Jitter keeps the simplex off exact stationary points of the seeds.
    for p in out.iter_mut() {
        p.0 += g.gen_range(-1e-3..1e-3);
        p.1 += g.gen_range(-1e-3..1e-3);
    }
    out
}

fn search_family(r: &RMatrix, family: Family, starts: &[(f64, f64)]) -> (Vec<C64>, CMat, f64) {
    let mut best: Option<(Vec<C64>, CMat, f64)> = None;
    for &s in starts {
        let (mut p, mut v) = nelder_mead(|t, f| shape_residual(&r.matrix, family, t, f), s, 0.3, 400);
        if v < 1e-2 {
            (p, v) = shape_polish(&r.matrix, family, p);
        }
        if best.as_ref().is_some_and(|b| b.2 <= v) {
            continue;
        }
        let u = sphere_unitary(p.0, p.1);
        let params = read_parameters(&r.matrix, family, &u);
        let res = reconstruction_residual(&r.matrix, family, &params, &u);
        if best.as_ref().is_none_or(|b| res < b.2) {
            best = Some((params, u, res));
        }
        if res < 1e-13 {
            break;
        }
    }
    best.expect("at least one start")
}

fn try_family4(r: &RMatrix) -> Result<Option<(Vec<C64>, CMat, f64)>> {
    let fixed = commutant::fixed_subalgebra(r, 1)?;
    if fixed.dim() <= 1 {
        return Ok(None);
    }
    // A non-scalar Hermitian element of the fixed algebra.
    let mut h = None;
    for b in &fixed.basis {
        for cand in [(&b.matrix + b.matrix.adjoint()), (&b.matrix - b.matrix.adjoint()) * c(0.0, 1.0)] {
            let tr = cand.trace() / 2.0;
            let dev = &cand - tensor::identity(2) * tr;
            if dev.norm() > 1e-6 {
                h = Some(cand);
                break;
            }
        }
        if h.is_some() {
            break;
        }
    }
    let Some(h) = h else { return Ok(None) };
    let (_, v) = tensor::hermitian_eigen(&h);
    let mut best: Option<(Vec<C64>, CMat, f64)> = None;
    for order in [[0usize, 1], [1, 0]] {
        let u0 = CMat::from_fn(2, 2, |i, k| v[(i, order[k])]);
        let uu = kron(&u0, &u0);
        let m = uu.adjoint() * &r.matrix * uu;
        if m[(0, 0)].norm() < 1e-6 || m[(0, 1)].norm() < 1e-6 {
            continue;
        }
        let e = unit(m[(0, 1)] / m[(0, 0)]);
        for ph in [e, e.conj()] {
            let u = CMat::from_fn(2, 2, |i, k| if k == 1 { u0[(i, k)] * ph } else { u0[(i, k)] });
            let uu = kron(&u, &u);
            let m = uu.adjoint() * &r.matrix * uu;
            let q = unit(m[(0, 0)] * std::f64::consts::SQRT_2);
            let params = vec![q];
            let res = reconstruction_residual(&r.matrix, Family::Four, &params, &u);
            if best.as_ref().is_none_or(|b| res < b.2) {
                best = Some((params, u, res));
            }
        }
    }
    Ok(best)
}

/// Classifies a two-dimensional R-matrix with the default start count and seed.
pub fn classify_dim2(r: &RMatrix, tol: f64) -> Result<Dim2Classification> {
    classify_dim2_with(r, tol, DEFAULT_STARTS, random::DEFAULT_SEED)
}

pub fn classify_dim2_with(r: &RMatrix, tol: f64, starts: usize, seed: u64) -> Result<Dim2Classification> {
    if r.d != 2 {
        return Err(Error::Domain(format!("classification needs d = 2, got d = {}", r.d)));
    }
    if rmatrix::is_trivial(r, tol) {
        let q = r.matrix[(0, 0)];
        return Ok(Dim2Classification {
            family: Family::One,
            residual: (&r.matrix - tensor::identity(4) * q).norm(),
            parameters: vec![q],
            conjugator: Some(tensor::identity(2)),
            alternatives: Vec::new(),
            nearest: Some(Family::One),
        });
    }
    let mut best_res = f64::INFINITY;
    let mut nearest = None;
    if let Some((params, u, res)) = try_family4(r)? {
        if res <= tol {
            return Ok(Dim2Classification {
                family: Family::Four,
                parameters: params,
                conjugator: Some(u),
                residual: res,
                alternatives: Vec::new(),
                nearest: Some(Family::Four),
            });
        }
        best_res = res;
        nearest = Some(Family::Four);
    }
    let starts = seeds(r, starts, seed);
    let mut found = Vec::new();
    for family in [Family::Two, Family::Three] {
        let (params, u, res) = search_family(r, family, &starts);
        if res < best_res {
            best_res = res;
            nearest = Some(family);
        }
        if res <= tol {
            found.push((family, params, u, res));
        }
    }
    // Both shapes can fit at special parameters; report the smaller residual.
    found.sort_by(|a, b| a.3.total_cmp(&b.3));
    let alternatives: Vec<Family> = found.iter().skip(1).map(|f| f.0).collect();
    Ok(match found.into_iter().next() {
        Some((family, parameters, u, residual)) => Dim2Classification {
            family,
            parameters,
            conjugator: Some(u),
            residual,
            alternatives,
            nearest: Some(family),
        },
        None => Dim2Classification {
            family: Family::Unclassified,
            parameters: Vec::new(),
            conjugator: None,
            residual: best_res,
            alternatives,
            nearest,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{make_r2, make_r3, make_r4, make_trivial, quasifree_conjugate};

    #[test]
    fn normal_position_inputs() {
        let i = c(0.0, 1.0);
        let r2 = make_r2(c(1.0, 0.0), i, c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(classify_dim2(&r2, CLASSIFY_TOL).unwrap().family, Family::Two);
        let r4 = make_r4(cis(0.4)).unwrap();
        let cl = classify_dim2(&r4, CLASSIFY_TOL).unwrap();
        assert_eq!(cl.family, Family::Four);
        assert!((cl.parameters[0] - cis(0.4)).norm() < 1e-9);
        let t = make_trivial(2, i).unwrap();
        assert_eq!(classify_dim2(&t, CLASSIFY_TOL).unwrap().family, Family::One);
    }

    #[test]
    fn conjugated_inputs() {
        let mut g = random::rng(11);
        let u = random::random_unitary(2, &mut g);
        let r3 = make_r3(cis(0.3), cis(1.9), cis(-2.2)).unwrap();
        let cl = classify_dim2(&quasifree_conjugate(&r3, &u).unwrap(), CLASSIFY_TOL).unwrap();
        assert_eq!(cl.family, Family::Three);
        assert!(cl.residual <= CLASSIFY_TOL);
        let r4 = make_r4(cis(2.0)).unwrap();
        let cl = classify_dim2(&quasifree_conjugate(&r4, &u).unwrap(), CLASSIFY_TOL).unwrap();
        assert_eq!(cl.family, Family::Four);
    }
}
