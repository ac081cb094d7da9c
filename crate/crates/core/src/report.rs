//! Aggregated analysis reports and the two-dimensional summary table.

use std::collections::BTreeMap;
use std::fmt::Write;

use rand::Rng;
use serde_json::{json, Value};

use crate::analysis::{self, ConcentrationVerdict, ErgodicityVerdict, IndexBounds};
use crate::classify::{self, Dim2Classification, Family};
use crate::commutant::{self, LBudget, SubalgebraBasis};
use crate::error::Result;
use crate::random;
use crate::rmatrix::{self, NormalFormSpec, RMatrix};
use crate::tensor::{self, ipow, CMat, C64};

/// Size limits for the level-dependent sections of a report.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Largest commutant level; levels with `d^{n+1} > max_commutant_side` are skipped.
    pub commutant_levels: usize,
    pub max_commutant_side: usize,
    /// Largest fixed-point level; levels with `d^n > max_fixed_side` are skipped.
    pub fixed_levels: usize,
    pub max_fixed_side: usize,
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            commutant_levels: 2,
            max_commutant_side: 64,
            fixed_levels: 4,
            max_fixed_side: 16,
            seed: random::DEFAULT_SEED,
        }
    }
}

impl Caps {
    /// Default caps with every level bound set to `n`.
    pub fn with_n_cap(n: usize) -> Self {
        Self { commutant_levels: n.min(2), fixed_levels: n, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct CommutantEntry {
    pub kind: &'static str,
    pub level: usize,
    pub dim: usize,
    pub profile: Option<Vec<usize>>,
    pub profile_string: String,
    pub converged: bool,
}

impl CommutantEntry {
    fn from_basis(kind: &'static str, b: &SubalgebraBasis) -> Self {
        Self {
            kind,
            level: b.level,
            dim: b.dim(),
            profile: b.profile.blocks().map(|x| x.to_vec()),
            profile_string: b.profile_string(),
            converged: b.converged,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PartialTraceSection {
    pub matrix: CMat,
    pub spectrum: Vec<(C64, usize)>,
    pub normality_residual: f64,
    pub left_right_discrepancy: f64,
    pub operator_norm: f64,
}

/// Everything [`analyze`] computes; sections that failed are `None` and
/// their error message is listed in `errors`.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub d: usize,
    pub label: String,
    pub ybe_residual: f64,
    pub unitarity_residual: f64,
    pub trivial: bool,
    pub involutive: bool,
    pub spectrum: Option<Vec<(C64, usize)>>,
    pub partial_trace: Option<PartialTraceSection>,
    pub commutants: Vec<CommutantEntry>,
    pub fixed_point_dims: Vec<(usize, usize)>,
    pub ergodicity: ErgodicityVerdict,
    /// `|τ(R*φ(R)) − 1/d²|`.
    pub ergodicity_trace_gap: f64,
    pub irreducible: Option<bool>,
    pub index_bounds: Option<IndexBounds>,
    pub known_index: Option<(f64, String)>,
    pub concentration: Option<ConcentrationVerdict>,
    pub normal_form: Option<NormalFormSpec>,
    pub reduction_leaves: Option<Vec<(usize, i8)>>,
    pub classification: Option<Dim2Classification>,
    pub errors: SectionErrors,
    /// Violated cross-section consistency checks.
    pub inconsistencies: Vec<String>,
}

/// `(section, message)` pairs for analyses that failed.
pub type SectionErrors = Vec<(String, String)>;

fn record<T>(errors: &mut SectionErrors, section: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push((section.to_string(), e.to_string()));
            None
        }
    }
}

fn commutant_section(r: &RMatrix, caps: &Caps) -> (Vec<CommutantEntry>, SectionErrors) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for n in 1..=caps.commutant_levels {
        if ipow(r.d, n + 1) > caps.max_commutant_side {
            break;
        }
        let section = format!("commutants level {n}");
        if let Some(b) = record(&mut errors, &section, commutant::relative_commutant_l(r, n, LBudget::default_for(n))) {
            out.push(CommutantEntry::from_basis("L", &b));
        }
        if let Some(b) = record(&mut errors, &section, commutant::relative_commutant_m_seeded(r, n, caps.seed)) {
            out.push(CommutantEntry::from_basis("M", &b));
        }
        if let Some(b) = record(&mut errors, &section, commutant::relative_commutant_n_traced(r, n, caps.seed)) {
            out.push(CommutantEntry::from_basis("N", &b.0));
        }
    }
    (out, errors)
}

fn fixed_section(r: &RMatrix, caps: &Caps) -> (Vec<(usize, usize)>, SectionErrors) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for n in 1..=caps.fixed_levels {
        if ipow(r.d, n) > caps.max_fixed_side {
            break;
        }
        if let Some(b) = record(&mut errors, "fixed points", commutant::fixed_subalgebra_seeded(r, n, caps.seed)) {
            out.push((n, b.dim()));
        }
    }
    (out, errors)
}

/// Runs every analysis on `R`. Independent sections run on separate threads;
/// the assembled report depends only on `(R, caps)`.
pub fn analyze(r: &RMatrix, caps: &Caps) -> AnalysisReport {
    let mut errors = Vec::new();
    let ((commutants, cerr), (fixed, ferr), classification) = std::thread::scope(|s| {
        let hc = s.spawn(|| commutant_section(r, caps));
        let hf = s.spawn(|| fixed_section(r, caps));
        let hk = s.spawn(|| {
            (r.d == 2)
                .then(|| classify::classify_dim2_with(r, classify::CLASSIFY_TOL, classify::DEFAULT_STARTS, caps.seed))
        });
        (
            hc.join().expect("commutant worker"),
            hf.join().expect("fixed-point worker"),
            hk.join().expect("classifier worker"),
        )
    });
    errors.extend(cerr);
    errors.extend(ferr);
    let classification = classification.and_then(|c| record(&mut errors, "classification", c));

    let spectrum = record(&mut errors, "spectrum", tensor::spectrum(&r.matrix, analysis::SPECTRAL_TOL));
    let partial_trace = record(&mut errors, "partial trace", analysis::partial_trace_invariant(r)).and_then(|inv| {
        let spec = record(&mut errors, "partial trace", tensor::spectrum(&inv.element.matrix, analysis::SPECTRAL_TOL))?;
        Some(PartialTraceSection {
            spectrum: spec,
            normality_residual: inv.normality_residual,
            left_right_discrepancy: inv.left_right_discrepancy,
            operator_norm: inv.operator_norm,
            matrix: inv.element.matrix,
        })
    });
    let ergodicity = analysis::is_ergodic(r, analysis::ERGODIC_TOL);
    let ergodicity_trace_gap = analysis::ergodicity_necessary_check(r);
    let irreducible = commutants.iter().find(|c| c.kind == "M" && c.level == 1).map(|c| c.dim == 1);
    let index_bounds = record(&mut errors, "index bounds", analysis::index_bounds(r));
    let known_index = analysis::known_index(r).map(|(v, s)| (v, s.to_string())).or_else(|| {
        classification.as_ref().and_then(|c| match c.family {
            Family::Two | Family::Three => Some((4.0, format!("family {}", c.family))),
            Family::Four => Some((2.0, "family 4".to_string())),
            _ => None,
        })
    });
    let concentration = record(&mut errors, "concentration", analysis::triviality_by_concentration(r));
    let involutive = rmatrix::is_involutive(r, 1e-10);
    let (normal_form, reduction_leaves) = if involutive {
        let nf = record(&mut errors, "normal form", analysis::normal_form_of_involutive(r, 1e-9));
        let leaves = record(&mut errors, "reduction", analysis::reduce_involutive(r, 1e-9)).map(|t| {
            let mut v = t.leaf_blocks();
            v.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
            v
        });
        (nf, leaves)
    } else {
        (None, None)
    };

    let mut report = AnalysisReport {
        d: r.d,
        label: r.label.clone(),
        ybe_residual: r.ybe_residual,
        unitarity_residual: r.unitarity_residual,
        trivial: rmatrix::is_trivial(r, 1e-10),
        involutive,
        spectrum,
        partial_trace,
        commutants,
        fixed_point_dims: fixed,
        ergodicity,
        ergodicity_trace_gap,
        irreducible,
        index_bounds,
        known_index,
        concentration,
        normal_form,
        reduction_leaves,
        classification,
        errors,
        inconsistencies: Vec::new(),
    };
    report.inconsistencies = consistency_checks(&report);
    report
}

fn consistency_checks(rep: &AnalysisReport) -> Vec<String> {
    let mut out = Vec::new();
    if rep.ergodicity.ergodic {
        for &(n, dim) in &rep.fixed_point_dims {
            if dim != 1 {
                out.push(format!("ergodic but the level-{n} fixed-point algebra has dimension {dim}"));
            }
        }
        if rep.ergodicity_trace_gap > 1e-10 {
            out.push(format!("ergodic but |τ(R*φ(R)) − 1/d²| = {:e}", rep.ergodicity_trace_gap));
        }
    }
    let dim_of =
        |kind: &str, level: usize| rep.commutants.iter().find(|c| c.kind == kind && c.level == level).map(|c| c.dim);
    for level in 1..=2 {
        if let (Some(l), Some(m), Some(n)) = (dim_of("L", level), dim_of("M", level), dim_of("N", level)) {
            if l > m || m > n {
                out.push(format!("level {level}: dimensions L={l}, M={m}, N={n} are not increasing"));
            }
        }
    }
    if let Some(b) = &rep.index_bounds {
        if let Some((v, _)) = &rep.known_index {
            if *v < b.lower_minimal - 1e-9 || *v > b.upper_jones + 1e-9 {
                out.push(format!("known index {v} outside [{}, {}]", b.lower_minimal, b.upper_jones));
            }
        }
    }
    if let (Some(nf), Some(leaves)) = (&rep.normal_form, &rep.reduction_leaves) {
        if nf.blocks() != leaves.as_slice() {
            out.push(format!("reduction leaves {leaves:?} differ from the normal form {nf}"));
        }
    }
    out
}

fn cjson(z: C64) -> Value {
    json!([z.re, z.im])
}

fn spectrum_json(s: &[(C64, usize)]) -> Value {
    Value::Array(s.iter().map(|(v, m)| json!({"value": cjson(*v), "multiplicity": m})).collect())
}

fn matrix_json(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| cjson(m[(i, j)])).collect())).collect())
}

fn classification_json(c: &Dim2Classification) -> Value {
    json!({
        "family": c.family.to_string(),
        "parameters": c.parameters.iter().map(|z| cjson(*z)).collect::<Vec<_>>(),
        "conjugator": c.conjugator.as_ref().map(matrix_json),
        "residual": c.residual,
        "alternatives": c.alternatives.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "nearest": c.nearest.map(|f| f.to_string()),
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        let (i, j, k, l) = self.ergodicity.witness;
        json!({
            "rmatrix": {
                "d": self.d,
                "label": self.label,
                "ybe_residual": self.ybe_residual,
                "unitarity_residual": self.unitarity_residual,
                "trivial": self.trivial,
                "involutive": self.involutive,
            },
            "spectrum": self.spectrum.as_deref().map(spectrum_json),
            "partial_trace": self.partial_trace.as_ref().map(|p| json!({
                "matrix": matrix_json(&p.matrix),
                "spectrum": spectrum_json(&p.spectrum),
                "normality_residual": p.normality_residual,
                "left_right_discrepancy": p.left_right_discrepancy,
                "operator_norm": p.operator_norm,
            })),
            "commutants": self.commutants.iter().map(|c| json!({
                "kind": c.kind,
                "level": c.level,
                "dim": c.dim,
                "profile": c.profile,
                "profile_string": c.profile_string,
                "converged": c.converged,
            })).collect::<Vec<_>>(),
            "fixed_point_dims": self.fixed_point_dims.iter().map(|(n, k)| json!({"level": n, "dim": k})).collect::<Vec<_>>(),
            "ergodic": self.ergodicity.ergodic,
            "ergodicity": {
                "max_deviation": self.ergodicity.max_deviation,
                "witness": [i, j, k, l],
                "trace_gap": self.ergodicity_trace_gap,
            },
            "irreducible": self.irreducible,
            "index_bounds": self.index_bounds.as_ref().map(|b| json!({
                "lower_minimal": b.lower_minimal,
                "upper_jones": b.upper_jones,
                "sources": b.sources,
                "distinct_eigenvalues_r": b.distinct_eigenvalues_r,
                "distinct_eigenvalues_phi": b.distinct_eigenvalues_phi,
                "spectral_gaps": [b.spectral_gaps.0, b.spectral_gaps.1],
            })),
            "known_index": self.known_index.as_ref().map(|(v, s)| json!({"value": v, "source": s})),
            "concentration": self.concentration.as_ref().map(|c| json!({
                "min_distance": c.min_distance,
                "threshold": c.threshold,
                "margin": c.margin,
                "concluded_trivial": c.concluded_trivial,
            })),
            "normal_form": self.normal_form.as_ref().map(|n| n.to_string()),
            "reduction_leaves": self.reduction_leaves.as_ref().map(|v| v.iter().map(|(k, s)| json!([k, s])).collect::<Vec<_>>()),
            "classification": self.classification.as_ref().map(classification_json),
            "errors": self.errors.iter().map(|(s, e)| json!({"section": s, "message": e})).collect::<Vec<_>>(),
            "inconsistencies": self.inconsistencies,
        })
    }

    fn m1_profile(&self) -> String {
        self.commutants
            .iter()
            .find(|c| c.kind == "M" && c.level == 1)
            .map(|c| c.profile_string.clone())
            .unwrap_or_else(|| "n/a".into())
    }

    fn index_cell(&self) -> String {
        let mut s = match &self.index_bounds {
            Some(b) => format!("[{}, {}]", fmt_num(b.lower_minimal), fmt_num(b.upper_jones)),
            None => "n/a".into(),
        };
        if let Some((v, src)) = &self.known_index {
            write!(s, "; known {} ({src})", fmt_num(*v)).unwrap();
        }
        s
    }

    fn fixed_cell(&self) -> String {
        if self.fixed_point_dims.is_empty() {
            return "n/a".into();
        }
        let dims: Vec<String> = self.fixed_point_dims.iter().map(|(_, k)| k.to_string()).collect();
        format!("dims n=1..{}: ({})", self.fixed_point_dims.len(), dims.join(", "))
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# Analysis of {} (d = {})\n", self.label, self.d).unwrap();
        writeln!(s, "| Representative | M_{{R,1}} | Ergodic | Index | Fixed points |").unwrap();
        writeln!(s, "|---|---|---|---|---|").unwrap();
        let automorphism = if self.trivial { " (automorphism)" } else { "" };
        writeln!(
            s,
            "| {} | {}{} | {} | {} | {} |\n",
            self.label,
            self.m1_profile(),
            automorphism,
            self.ergodicity.ergodic,
            self.index_cell(),
            self.fixed_cell()
        )
        .unwrap();
        writeln!(s, "## Details\n").unwrap();
        writeln!(s, "- residuals: ybe {:.3e}, unitarity {:.3e}", self.ybe_residual, self.unitarity_residual).unwrap();
        if let Some(sp) = &self.spectrum {
            writeln!(s, "- spectrum of R: {}", fmt_spectrum(sp)).unwrap();
        }
        if let Some(p) = &self.partial_trace {
            writeln!(
                s,
                "- partial trace spectrum: {} (normality residual {:.1e}, left/right {:.1e}, norm {:.6})",
                fmt_spectrum(&p.spectrum),
                p.normality_residual,
                p.left_right_discrepancy,
                p.operator_norm
            )
            .unwrap();
        }
        let (i, j, k, l) = self.ergodicity.witness;
        writeln!(
            s,
            "- ergodic: {} (max deviation {:.3e} at ({i},{j},{k},{l}); trace gap {:.3e})",
            self.ergodicity.ergodic, self.ergodicity.max_deviation, self.ergodicity_trace_gap
        )
        .unwrap();
        if let Some(irr) = self.irreducible {
            writeln!(s, "- irreducible: {irr}").unwrap();
        }
        writeln!(s, "- involutive: {}", self.involutive).unwrap();
        for c in &self.commutants {
            let note = if c.converged { "" } else { ", truncated" };
            writeln!(s, "- {}_{{R,{}}}: dim {}, {}{note}", c.kind, c.level, c.dim, c.profile_string).unwrap();
        }
        if let Some(c) = &self.concentration {
            writeln!(
                s,
                "- distance to the scalars: {:.6} (threshold {:.6}, margin {:.6})",
                c.min_distance, c.threshold, c.margin
            )
            .unwrap();
        }
        if let Some(b) = &self.index_bounds {
            writeln!(s, "- index bounds from: {}", b.sources.join("; ")).unwrap();
        }
        if let Some(nf) = &self.normal_form {
            writeln!(s, "- normal form: {nf}").unwrap();
        }
        if let Some(c) = &self.classification {
            let params: Vec<String> = c.parameters.iter().map(|z| fmt_c(*z)).collect();
            writeln!(s, "- family: {} [{}] (residual {:.1e})", c.family, params.join(", "), c.residual).unwrap();
        }
        for (sec, e) in &self.errors {
            writeln!(s, "- error in {sec}: {e}").unwrap();
        }
        for msg in &self.inconsistencies {
            writeln!(s, "- inconsistency: {msg}").unwrap();
        }
        s
    }
}

fn fmt_num(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.4}")
    }
}

fn fmt_c(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{:.4}{:+.4}i", clean(z.re), clean(z.im))
}

fn fmt_spectrum(s: &[(C64, usize)]) -> String {
    let parts: Vec<String> = s.iter().map(|(v, m)| format!("{}×{m}", fmt_c(*v))).collect();
    format!("{{{}}}", parts.join(", "))
}

/// One random member `λ_u(R_i(params))` of a two-dimensional family, with
/// everything observed about it.
#[derive(Debug, Clone)]
pub struct FamilySample {
    pub family: Family,
    pub parameters: Vec<C64>,
    pub conjugator: CMat,
    pub rmatrix: RMatrix,
    pub special: bool,
    pub expected_profile: Vec<usize>,
    pub observed_profile: Option<Vec<usize>>,
    pub expected_ergodic: bool,
    pub ergodic: bool,
    pub fixed_dims: Vec<usize>,
    pub expected_fixed_dims: Option<Vec<usize>>,
    pub classification: Dim2Classification,
}

impl FamilySample {
    pub fn classified_correctly(&self) -> bool {
        self.classification.admits(self.family) && self.classification.residual <= classify::CLASSIFY_TOL
    }

    pub fn matches_table(&self) -> bool {
        self.observed_profile.as_deref() == Some(self.expected_profile.as_slice())
            && self.ergodic == self.expected_ergodic
            && self.expected_fixed_dims.as_ref().is_none_or(|e| *e == self.fixed_dims)
    }
}

/// Draw `index` of `family`. Every fourth draw of families 2 and 3 sits on
/// the special locus (`p=r, q=s` or `q²=pr`).
pub fn family_sample(family: Family, index: usize, seed: u64) -> Result<FamilySample> {
    let mut g = random::rng(random::derive_seed(seed, &[family.number().unwrap_or(0) as u64, index as u64]));
    let ph = |g: &mut random::SeededRng| random::random_phase(g);
    let special = index.is_multiple_of(4) && matches!(family, Family::Two | Family::Three);
    let parameters = match family {
        Family::One | Family::Four => vec![ph(&mut g)],
        Family::Two => {
            let (p, q) = (ph(&mut g), ph(&mut g));
            if special {
                vec![p, q, p, q]
            } else {
                vec![p, q, ph(&mut g), ph(&mut g)]
            }
        }
        Family::Three => {
            let (p, q) = (ph(&mut g), ph(&mut g));
            let r = if special { q * q / p } else { ph(&mut g) };
            vec![p, q, r]
        }
        Family::Unclassified => unreachable!("samples are drawn from the four families"),
    };
    let base = match family {
        Family::One => rmatrix::make_trivial(2, parameters[0])?,
        Family::Two => rmatrix::make_r2(parameters[0], parameters[1], parameters[2], parameters[3])?,
        Family::Three => rmatrix::make_r3(parameters[0], parameters[1], parameters[2])?,
        Family::Four => rmatrix::make_r4(parameters[0])?,
        Family::Unclassified => unreachable!(),
    };
    let u = random::random_unitary(2, &mut g);
    let r = rmatrix::quasifree_conjugate(&base, &u)?.with_label(format!("family {family}"));
    let close = |a: C64, b: C64| (a - b).norm() < 1e-12;
    let (expected_profile, expected_ergodic, expected_fixed_dims) = match family {
        Family::One => (vec![1], false, Some(vec![4, 16, 64, 256])),
        Family::Two => {
            let eq = close(parameters[0], parameters[2]) && close(parameters[1], parameters[3]);
            (if eq { vec![2] } else { vec![1, 1] }, true, Some(vec![1, 1, 1, 1]))
        }
        Family::Three => {
            let eq = close(parameters[1] * parameters[1], parameters[0] * parameters[2]);
            (if eq { vec![1, 1] } else { vec![1] }, true, Some(vec![1, 1, 1, 1]))
        }
        Family::Four => (vec![1], false, Some(vec![2, 4, 8, 16])),
        Family::Unclassified => unreachable!(),
    };
    let m1 = commutant::relative_commutant_m(&r, 1)?;
    let fixed_dims =
        (1..=4).map(|n| commutant::fixed_subalgebra(&r, n).map(|b| b.dim())).collect::<Result<Vec<_>>>()?;
    let classification = classify::classify_dim2_with(&r, classify::CLASSIFY_TOL, classify::DEFAULT_STARTS, g.gen())?;
    Ok(FamilySample {
        family,
        parameters,
        conjugator: u,
        special,
        expected_profile,
        observed_profile: m1.profile.blocks().map(|b| b.to_vec()),
        expected_ergodic,
        ergodic: analysis::is_ergodic(&r, analysis::ERGODIC_TOL).ergodic,
        fixed_dims,
        expected_fixed_dims,
        classification,
        rmatrix: r,
    })
}

pub const FAMILIES: [Family; 4] = [Family::One, Family::Two, Family::Three, Family::Four];

/// `samples` draws per family, computed on up to `jobs` threads, ordered by
/// family then draw index.
pub fn table9_samples(samples: usize, seed: u64, jobs: usize) -> Result<Vec<FamilySample>> {
    let tasks: Vec<(Family, usize)> = FAMILIES.iter().flat_map(|&f| (0..samples).map(move |i| (f, i))).collect();
    let jobs = jobs.max(1).min(tasks.len().max(1));
    let mut slots: Vec<Option<Result<FamilySample>>> = (0..tasks.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let tasks = &tasks;
                s.spawn(move || {
                    (j..tasks.len())
                        .step_by(jobs)
                        .map(|t| (t, family_sample(tasks[t].0, tasks[t].1, seed)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (t, r) in h.join().expect("table worker panicked") {
                slots[t] = Some(r);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every task ran")).collect()
}

const REPRESENTATIVES: [&str; 4] = ["q·1", "diag-type (p, q, r, s)", "antidiagonal (p, q, r)", "(q/√2)(1 + iσ₃⊗σ₂)"];

/// Markdown summary with one row per family.
pub fn table9_markdown(samples: &[FamilySample]) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "| # | Representative | M_{{R,1}} | Ergodic | Index | Fixed points (dims n=1..4) | Classified | Matches |"
    )
    .unwrap();
    writeln!(s, "|---|---|---|---|---|---|---|---|").unwrap();
    for (fi, &family) in FAMILIES.iter().enumerate() {
        let rows: Vec<&FamilySample> = samples.iter().filter(|x| x.family == family).collect();
        if rows.is_empty() {
            continue;
        }
        let mut profiles: BTreeMap<String, usize> = BTreeMap::new();
        for r in &rows {
            let p = r.observed_profile.as_deref().map(commutant::profile_string).unwrap_or_else(|| "unresolved".into());
            *profiles.entry(p).or_default() += 1;
        }
        let profile_cell: Vec<String> = profiles.iter().map(|(p, k)| format!("{p} ×{k}")).collect();
        let mut profile_cell = profile_cell.join(", ");
        if family == Family::One {
            profile_cell.push_str(" (automorphism)");
        }
        let ergodic = rows.iter().filter(|r| r.ergodic).count();
        let index = match family {
            Family::One => "1",
            Family::Two | Family::Three => "4",
            Family::Four => "2",
            Family::Unclassified => "",
        };
        let mut dims: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for r in &rows {
            *dims.entry(r.fixed_dims.clone()).or_default() += 1;
        }
        let dims_cell: Vec<String> = dims
            .iter()
            .map(|(d, k)| format!("({}) ×{k}", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        let classified = rows.iter().filter(|r| r.classified_correctly()).count();
        let matches = rows.iter().filter(|r| r.matches_table()).count();
        writeln!(
            s,
            "| {} | {} | {} | {}/{} | {} | {} | {}/{} | {}/{} |",
            fi + 1,
            REPRESENTATIVES[fi],
            profile_cell,
            ergodic,
            rows.len(),
            index,
            dims_cell.join(", "),
            classified,
            rows.len(),
            matches,
            rows.len()
        )
        .unwrap();
    }
    s
}
