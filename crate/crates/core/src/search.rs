//! Numerical search for unitary Yang–Baxter solutions by Riemannian descent
//! on the unitary group, plus character fingerprints for deduplication.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis;
use crate::braid::{self, BraidWord};
use crate::canon;
use crate::classify::{self, Family};
use crate::error::{Error, Result};
use crate::random;
use crate::rmatrix::{self, RMatrix};
use crate::tensor::{self, c, kron, CMat, C64};

/// Unnormalized partial trace over the last `d`-dimensional factor of a `d³` matrix.
fn trace_last(x: &CMat, d: usize) -> CMat {
    let n = d * d;
    CMat::from_fn(n, n, |i, j| (0..d).map(|k| x[(i * d + k, j * d + k)]).sum())
}

/// Unnormalized partial trace over the first factor.
fn trace_first(x: &CMat, d: usize) -> CMat {
    let n = d * d;
    CMat::from_fn(n, n, |i, j| (0..d).map(|k| x[(k * n + i, k * n + j)]).sum())
}

fn sides(u: &CMat, d: usize) -> (CMat, CMat) {
    let id = tensor::identity(d);
    (kron(u, &id), kron(&id, u))
}

fn ybe_difference(u12: &CMat, u23: &CMat) -> CMat {
    u12 * u23 * u12 - u23 * u12 * u23
}

fn dim_of(u: &CMat) -> Result<usize> {
    let n = u.nrows();
    let d = (n as f64).sqrt().round() as usize;
    if u.ncols() != n || d * d != n || d == 0 {
        return Err(Error::Shape(format!("expected a d²×d² matrix, got {}×{}", u.nrows(), u.ncols())));
    }
    Ok(d)
}

/// `‖U₁₂U₂₃U₁₂ − U₂₃U₁₂U₂₃‖²` only.
pub fn ybe_value(u: &CMat) -> Result<f64> {
    let d = dim_of(u)?;
    let (u12, u23) = sides(u, d);
    Ok(ybe_difference(&u12, &u23).norm_squared())
}

/// Objective value and Euclidean gradient `E` with `df = Re tr(E* dU)`.
pub fn ybe_objective(u: &CMat) -> Result<(f64, CMat)> {
    let d = dim_of(u)?;
    let (u12, u23) = sides(u, d);
    let a = ybe_difference(&u12, &u23);
    let (p12, p23) = (u12.adjoint(), u23.adjoint());
    let g12 = &a * &p12 * &p23 + &p23 * &p12 * &a - &p23 * &a * &p23;
    let g23 = &p12 * &a * &p12 - &a * &p23 * &p12 - &p12 * &p23 * &a;
    let grad = (trace_last(&g12, d) + trace_first(&g23, d)) * c(2.0, 0.0);
    Ok((a.norm_squared(), grad))
}

fn skew(x: &CMat) -> CMat {
    (x - x.adjoint()) * c(0.5, 0.0)
}

/// `exp(Ω)` for skew-Hermitian `Ω`, through the eigendecomposition of `−iΩ`.
fn expm_skew(omega: &CMat) -> CMat {
    let h = omega * c(0.0, -1.0);
    let h = (&h + h.adjoint()) * c(0.5, 0.0);
    let (vals, v) = tensor::hermitian_eigen(&h);
    let n = vals.len();
    let mut scaled = v.clone();
    for (k, &l) in vals.iter().enumerate() {
        let e = tensor::cis(l);
        for i in 0..n {
            scaled[(i, k)] *= e;
        }
    }
    scaled * v.adjoint()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub d: usize,
    pub seed: u64,
    /// Starting point; a Haar-random unitary from `seed` when absent.
    pub initial: Option<CMat>,
    pub max_iterations: usize,
    /// First trial step of each Armijo backtracking.
    pub initial_step: f64,
    pub armijo_c: f64,
    pub backtrack: f64,
    /// Success needs `‖U₁₂U₂₃U₁₂ − U₂₃U₁₂U₂₃‖_F` below this.
    pub target_residual: f64,
    /// Tolerance handed to `verify` after polishing.
    pub polish_tolerance: f64,
    pub polish_iterations: usize,
}

impl SearchConfig {
    pub fn new(d: usize, seed: u64) -> Self {
        Self {
            d,
            seed,
            initial: None,
            max_iterations: 3000,
            initial_step: 1.0,
            armijo_c: 1e-4,
            backtrack: 0.5,
            target_residual: 1e-8,
            polish_tolerance: rmatrix::VERIFY_TOL,
            polish_iterations: 40,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.d) {
            return Err(Error::Domain(format!("search supports 1 ≤ d ≤ 3, got {}", self.d)));
        }
        if self.target_residual <= 0.0 || self.max_iterations == 0 {
            return Err(Error::Domain("target residual must be positive and max_iterations ≥ 1".into()));
        }
        if let Some(u) = &self.initial {
            if u.shape() != (self.d * self.d, self.d * self.d) || !tensor::is_unitary(u, 1e-8) {
                return Err(Error::Domain("initial point must be a d²×d² unitary".into()));
            }
        }
        Ok(())
    }

    /// Short stable digest of the parameters that shape a run.
    pub fn hash(&self) -> String {
        let v = json!({
            "d": self.d,
            "seed": self.seed,
            "initial": self.initial.as_ref().map(|u| tensor::vec_rowmajor(u).iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>()),
            "max_iterations": self.max_iterations,
            "initial_step": self.initial_step,
            "armijo_c": self.armijo_c,
            "backtrack": self.backtrack,
            "target_residual": self.target_residual,
            "polish_tolerance": self.polish_tolerance,
            "polish_iterations": self.polish_iterations,
        });
        let digest = Sha256::digest(canon::to_canonical_string(&v).as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SearchSuccess {
    pub rmatrix: RMatrix,
    /// `‖U₁₂U₂₃U₁₂ − U₂₃U₁₂U₂₃‖_F` at the returned point.
    pub residual: f64,
    pub iterations: usize,
    pub polish_iterations: usize,
    /// Objective value after every accepted descent step, starting value first.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SearchFailure {
    pub best_residual: f64,
    pub best_iterate: CMat,
    pub iterations: usize,
    pub reason: String,
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(SearchSuccess),
    Failed(SearchFailure),
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn residual(&self) -> f64 {
        match self {
            SearchOutcome::Found(s) => s.residual,
            SearchOutcome::Failed(f) => f.best_residual,
        }
    }
}

/// Riemannian gradient descent with Armijo backtracking, then a damped
/// Gauss–Newton polish, then verification.
pub fn search(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let d = config.d;
    let mut u = match &config.initial {
        Some(u) => u.clone(),
        None => random::random_unitary(d * d, &mut random::rng(config.seed)),
    };
    let (mut f, mut grad) = ybe_objective(&u)?;
    let mut trace = vec![f];
    let mut iterations = 0;
    // Descend until well inside the basin; the polish handles the rest.
    let descent_target = (config.target_residual * 1e-2).powi(2).max(1e-28);
    while iterations < config.max_iterations && f > descent_target {
        let omega = skew(&(u.adjoint() * &grad));
        let slope = omega.norm_squared();
        if slope < 1e-30 {
            break;
        }
        let mut t = config.initial_step;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = &u * expm_skew(&(&omega * c(-t, 0.0)));
            let fc = ybe_value(&cand)?;
            if fc <= f - config.armijo_c * t * slope {
                u = cand;
                f = fc;
                accepted = true;
                break;
            }
            t *= config.backtrack;
        }
        if !accepted {
            break;
        }
        iterations += 1;
        trace.push(f);
        grad = ybe_objective(&u)?.1;
        // Stalled far from zero: stop spending the budget.
        if iterations > 500 && iterations % 250 == 0 {
            let old = trace[trace.len() - 251];
            if f > 1e-6 && f > 0.999 * old {
                break;
            }
        }
    }
    let mut polish_iterations = 0;
    if f.sqrt() < 1e-2 {
        let (v, it) = polish(&u, d, config.polish_iterations)?;
        polish_iterations = it;
        let fv = ybe_value(&v)?;
        if fv <= f {
            u = v;
            f = fv;
        }
    }
    let residual = f.sqrt();
    if residual < config.target_residual {
        // Re-unitarize the last few ulps of drift before the verification gate.
        let svd = u.clone().svd(true, true);
        let unitary = svd.u.unwrap() * svd.v_t.unwrap();
        match rmatrix::verify_labeled(&unitary, d, config.polish_tolerance, "search") {
            Ok(r) => {
                return Ok(SearchOutcome::Found(SearchSuccess {
                    residual: ybe_value(&r.matrix)?.sqrt(),
                    rmatrix: r,
                    iterations,
                    polish_iterations,
                    trace,
                }))
            }
            Err(e) => {
                return Ok(SearchOutcome::Failed(SearchFailure {
                    best_residual: residual,
                    best_iterate: u,
                    iterations,
                    reason: format!("verification rejected the polished point: {e}"),
                    trace,
                }))
            }
        }
    }
    Ok(SearchOutcome::Failed(SearchFailure {
        best_residual: residual,
        best_iterate: u,
        iterations,
        reason: "iteration budget exhausted above the target residual".into(),
        trace,
    }))
}

/// Skew-Hermitian basis element `k` of `u(n)`.
fn skew_basis(n: usize, k: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    let pairs = n * (n - 1) / 2;
    if k < n {
        m[(k, k)] = c(0.0, 1.0);
        return m;
    }
    let mut idx = k - n;
    let imaginary = idx >= pairs;
    if imaginary {
        idx -= pairs;
    }
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if count == idx {
                if imaginary {
                    m[(i, j)] = c(0.0, 1.0);
                    m[(j, i)] = c(0.0, 1.0);
                } else {
                    m[(i, j)] = c(1.0, 0.0);
                    m[(j, i)] = c(-1.0, 0.0);
                }
                return m;
            }
            count += 1;
        }
    }
    unreachable!("index within dimension of u(n)")
}

fn residual_vector(u: &CMat, d: usize) -> Vec<f64> {
    let (u12, u23) = sides(u, d);
    ybe_difference(&u12, &u23).iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Levenberg–Marquardt in exponential coordinates around the current point.
fn polish(u0: &CMat, d: usize, max_iter: usize) -> Result<(CMat, usize)> {
    let n = d * d;
    let dim = n * n;
    let basis: Vec<CMat> = (0..dim).map(|k| skew_basis(n, k)).collect();
    let mut u = u0.clone();
    let mut res = residual_vector(&u, d);
    let mut f: f64 = res.iter().map(|x| x * x).sum();
    let mut mu = 1e-6;
    let mut it = 0;
    while it < max_iter && f > 1e-30 {
        it += 1;
        let h = 1e-7;
        let m = res.len();
        let mut jac = nalgebra::DMatrix::<f64>::zeros(m, dim);
        for (k, b) in basis.iter().enumerate() {
            let plus = residual_vector(&(&u * expm_skew(&(b * c(h, 0.0)))), d);
            let minus = residual_vector(&(&u * expm_skew(&(b * c(-h, 0.0)))), d);
            for i in 0..m {
                jac[(i, k)] = (plus[i] - minus[i]) / (2.0 * h);
            }
        }
        let r = nalgebra::DVector::from_vec(res.clone());
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..dim {
                a[(i, i)] += mu * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = a.cholesky().map(|ch| ch.solve(&(-&jtr))) else {
                mu *= 10.0;
                continue;
            };
            let mut omega = CMat::zeros(n, n);
            for (k, b) in basis.iter().enumerate() {
                omega += b * c(step[k], 0.0);
            }
            let cand = &u * expm_skew(&omega);
            let cres = residual_vector(&cand, d);
            let cf: f64 = cres.iter().map(|x| x * x).sum();
            if cf < f {
                u = cand;
                res = cres;
                f = cf;
                mu = (mu / 10.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok((u, it))
}

/// Character data that is constant on equivalence classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub spectrum_r: Vec<C64>,
    pub spectrum_phi: Vec<C64>,
    /// `τ(b_1⋯b_n)` for `n = 1..=4`.
    pub cycle_values: Vec<C64>,
    /// Values on [`FINGERPRINT_WORDS`].
    pub word_values: Vec<C64>,
}

pub const FINGERPRINT_WORDS: [&str; 3] = ["1,1", "1,-2", "1,1,2,2"];
pub const FINGERPRINT_CYCLES: usize = 4;

fn expanded_spectrum(x: &CMat) -> Result<Vec<C64>> {
    let mut out = Vec::new();
    for (v, m) in tensor::spectrum(x, analysis::SPECTRAL_TOL)? {
        out.extend(std::iter::repeat_n(v, m));
    }
    Ok(out)
}

pub fn fingerprint(r: &RMatrix) -> Result<Fingerprint> {
    let phi = analysis::partial_trace_invariant(r)?.element.matrix;
    let cycle_values = (1..=FINGERPRINT_CYCLES).map(|n| braid::character(r, &BraidWord::cycle(n))).collect();
    let word_values = FINGERPRINT_WORDS
        .iter()
        .map(|w| BraidWord::parse(w).map(|w| braid::character(r, &w)))
        .collect::<Result<_>>()?;
    Ok(Fingerprint {
        spectrum_r: expanded_spectrum(&r.matrix)?,
        spectrum_phi: expanded_spectrum(&phi)?,
        cycle_values,
        word_values,
    })
}

/// Greedy multiset matching distance between two spectra.
fn spectrum_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, dist) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[k] = true;
        worst = worst.max(dist);
    }
    worst
}

impl Fingerprint {
    /// Largest componentwise deviation, spectra compared as multisets.
    pub fn distance(&self, other: &Fingerprint) -> f64 {
        let vals = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        spectrum_distance(&self.spectrum_r, &other.spectrum_r)
            .max(spectrum_distance(&self.spectrum_phi, &other.spectrum_phi))
            .max(vals(&self.cycle_values, &other.cycle_values))
            .max(vals(&self.word_values, &other.word_values))
    }

    pub fn to_json(&self) -> Value {
        let list = |v: &[C64]| Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect());
        json!({
            "spectrum_r": list(&self.spectrum_r),
            "spectrum_phi": list(&self.spectrum_phi),
            "cycle_values": list(&self.cycle_values),
            "word_values": list(&self.word_values),
        })
    }
}

/// One restart's outcome together with its index and seed.
#[derive(Debug, Clone)]
pub struct RestartResult {
    pub index: usize,
    pub seed: u64,
    pub outcome: SearchOutcome,
}

/// Seed of restart `k` derived from a base seed.
pub fn restart_seed(base: u64, k: usize) -> u64 {
    random::derive_seed(base, &[k as u64])
}

/// Runs `restarts` independent searches from random starting points on up to
/// `jobs` threads. Results come back ordered by restart index.
pub fn search_restarts(template: &SearchConfig, restarts: usize, jobs: usize) -> Result<Vec<RestartResult>> {
    template.validate()?;
    let jobs = jobs.max(1).min(restarts.max(1));
    let run = |k: usize| -> Result<RestartResult> {
        let mut cfg = template.clone();
        cfg.seed = restart_seed(template.seed, k);
        cfg.initial = None;
        Ok(RestartResult { index: k, seed: cfg.seed, outcome: search(&cfg)? })
    };
    let mut results: Vec<Option<Result<RestartResult>>> = (0..restarts).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let run = &run;
                scope.spawn(move || (j..restarts).step_by(jobs).map(|k| (k, run(k))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("search worker panicked") {
                results[k] = Some(r);
            }
        }
    });
    results.into_iter().map(|r| r.expect("every restart ran")).collect()
}

/// Best outcome by residual, ties broken by the lowest restart index.
pub fn best_restart(results: &[RestartResult]) -> Option<&RestartResult> {
    results.iter().min_by(|a, b| a.outcome.residual().total_cmp(&b.outcome.residual()).then(a.index.cmp(&b.index)))
}

/// JSON-lines record for a verified solution.
pub fn solution_record(success: &SearchSuccess, config_hash: &str, seed: u64) -> Result<Value> {
    let fp = fingerprint(&success.rmatrix)?;
    let family = if success.rmatrix.d == 2 {
        let cl = classify::classify_dim2(&success.rmatrix, classify::CLASSIFY_TOL)?;
        json!({
            "family": cl.family.to_string(),
            "residual": cl.residual,
            "nearest": cl.nearest.map(|f| f.to_string()),
        })
    } else {
        json!({ "family": Family::Unclassified.to_string(), "residual": Value::Null, "nearest": Value::Null })
    };
    Ok(json!({
        "matrix": rmatrix::to_json(&success.rmatrix),
        "residuals": {
            "objective": success.residual,
            "ybe": success.rmatrix.ybe_residual,
            "unitarity": success.rmatrix.unitarity_residual,
        },
        "fingerprint": fp.to_json(),
        "classification": family,
        "iterations": success.iterations,
        "seed": seed,
        "config_hash": config_hash,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{make_flip, make_trivial};

    #[test]
    fn objective_vanishes_on_solutions() {
        assert!(ybe_value(&make_flip(2).unwrap().matrix).unwrap() < 1e-28);
        assert!(ybe_value(&make_trivial(3, tensor::cis(0.2)).unwrap().matrix).unwrap() < 1e-28);
    }

    #[test]
    fn exponential_is_unitary() {
        let mut g = random::rng(5);
        let h = random::random_hermitian(4, &mut g);
        let u = expm_skew(&(h * c(0.0, 1.0)));
        assert!(tensor::unitarity_residual(&u) < 1e-13);
    }

    #[test]
    fn exact_seed_succeeds_immediately() {
        let mut cfg = SearchConfig::new(2, 1);
        cfg.initial = Some(rmatrix::flip_matrix(2));
        match search(&cfg).unwrap() {
            SearchOutcome::Found(s) => assert_eq!(s.iterations, 0),
            SearchOutcome::Failed(f) => panic!("{}", f.reason),
        }
    }

    #[test]
    fn flip_fingerprint() {
        let fp = fingerprint(&make_flip(2).unwrap()).unwrap();
        for (n, v) in fp.cycle_values.iter().enumerate() {
            assert!((v - c(0.5f64.powi(n as i32 + 1), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn skew_basis_spans() {
        let n = 3;
        let cols: Vec<Vec<C64>> = (0..n * n).map(|k| tensor::vec_rowmajor(&skew_basis(n, k))).collect();
        let m = CMat::from_fn(n * n, n * n, |i, k| cols[k][i]);
        assert_eq!(crate::linalg::rank(&m, 1e-12), n * n);
    }
}
