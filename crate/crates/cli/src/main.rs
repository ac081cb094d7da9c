use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rmlab::braid::{self, BraidWord, CharacterVerdict};
use rmlab::builtin::{self, BuiltinSpec};
use rmlab::classify::{self, Family};
use rmlab::report::{self, Caps};
use rmlab::rmatrix::{self, RMatrix, VERIFY_TOL};
use rmlab::search::{self, SearchConfig, SearchOutcome};
use rmlab::tensor::{self, C64};
use rmlab::{canon, random, Error, NormalFormSpec};

/// Like `println!`, but a closed stdout (for example `rmlab … | head`) is not an error.
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "rmlab", version, about = "Unitary Yang-Baxter solutions and their invariants")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "RMLAB_SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check unitarity and the braid relation.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = VERIFY_TOL)]
        tol: f64,
    },
    /// Full invariant report.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Highest level for the level-dependent sections.
        #[arg(long)]
        n_cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Place a d=2 R-matrix in one of the four families.
    Classify2 {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = classify::CLASSIFY_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the character on a braid word.
    Character {
        #[command(flatten)]
        input: Input,
        /// Signed generator list, e.g. `1,2,-1`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Compare two characters on all short words.
    Equivalent {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = braid::DEFAULT_MAX_STRANDS)]
        max_strands: usize,
        #[arg(long, default_value_t = braid::DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long, default_value_t = braid::DEFAULT_CHAR_TOL)]
        tol: f64,
    },
    /// Write a builtin as matrix JSON.
    Export {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for new solutions by descent from random unitaries.
    Search {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// JSON-lines file that verified solutions are appended to.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 1e-8)]
        target: f64,
    },
    /// Sample the four two-dimensional families and tabulate their invariants.
    Table9 {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Args)]
struct Input {
    /// Matrix JSON file.
    path: Option<PathBuf>,
    /// One of: trivial, flip, simple, diagonal, normal, r2, r3, r4, box, twisted.
    #[arg(long, conflicts_with = "path")]
    builtin: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Normal-form blocks such as `2:+,1:-`.
    #[arg(long)]
    blocks: Option<String>,
}

/// A failure with its exit status: 1 for verdicts and domain errors, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn verdict(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { 2 } else { 1 };
        Self { code, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

impl Input {
    fn spec(&self, seed: u64) -> Result<BuiltinSpec, Failure> {
        let name = self.builtin.as_deref().ok_or_else(|| Failure::input("give a matrix file or --builtin NAME"))?;
        let mut spec = BuiltinSpec::new(name)?.with_seed(seed);
        if let Some(d) = self.d {
            spec = spec.with_d(d);
        }
        for (key, val) in [("p", &self.p), ("q", &self.q), ("r", &self.r), ("s", &self.s)] {
            if let Some(v) = val {
                spec = spec.with_param(key, builtin::parse_complex(v)?);
            }
        }
        if let Some(b) = &self.blocks {
            spec = spec.with_blocks(NormalFormSpec::parse(b)?);
        }
        Ok(spec)
    }

    fn load(&self, seed: u64, tol: f64) -> Result<RMatrix, Failure> {
        match &self.path {
            Some(p) => {
                let v = read_json(p)?;
                let r = rmatrix::from_json(&v, tol)?;
                Ok(if r.label == "json" { r.with_label(p.display().to_string()) } else { r })
            }
            None => Ok(self.spec(seed)?.build()?),
        }
    }
}

fn cmd_verify(input: &Input, tol: f64, seed: u64) -> CmdResult {
    let (d, m, label) = match &input.path {
        Some(p) => {
            let (d, m) = rmatrix::matrix_from_json(&read_json(p)?)?;
            (d, m, p.display().to_string())
        }
        None => {
            let r = input.spec(seed)?.build()?;
            (r.d, r.matrix, r.label)
        }
    };
    if m.nrows() != d * d {
        return Err(Failure::input(format!("matrix side {} does not match d={d}", m.nrows())));
    }
    let ybe = rmatrix::ybe_residual(&m, d);
    let unitarity = tensor::unitarity_residual(&m);
    out!("{label} (d = {d})");
    out!("  ybe residual        {ybe:.3e}");
    out!("  unitarity residual  {unitarity:.3e}");
    if ybe <= tol && unitarity <= tol {
        out!("verified at tolerance {tol:e}");
        Ok(())
    } else {
        Err(Failure::verdict(format!("not an R-matrix at tolerance {tol:e}")))
    }
}

fn cmd_analyze(input: &Input, n_cap: Option<usize>, format: Format, out: Option<&Path>, seed: u64) -> CmdResult {
    let r = input.load(seed, VERIFY_TOL)?;
    let mut caps = n_cap.map(Caps::with_n_cap).unwrap_or_default();
    caps.seed = seed;
    let rep = report::analyze(&r, &caps);
    let text = match format {
        Format::Json => canon::to_canonical_pretty(&rep.to_json()) + "\n",
        Format::Md => rep.to_markdown(),
    };
    write_output(out, &text)?;
    if rep.inconsistencies.is_empty() {
        Ok(())
    } else {
        Err(Failure::verdict(format!("report has {} internal inconsistencies", rep.inconsistencies.len())))
    }
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn fmt_real(x: f64) -> String {
    if x.abs() < 1e-13 {
        return "0".into();
    }
    let t = format!("{x:.12}");
    let t = t.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

fn fmt_complex(z: C64) -> String {
    match (fmt_real(z.re), fmt_real(z.im.abs())) {
        (re, im) if im == "0" => re,
        (re, im) if re == "0" => format!("{}{im}i", if z.im < 0.0 { "-" } else { "" }),
        (re, im) => format!("{re} {} {im}i", if z.im < 0.0 { '-' } else { '+' }),
    }
}

fn cmd_classify2(input: &Input, tol: f64, as_json: bool, seed: u64) -> CmdResult {
    let r = input.load(seed, VERIFY_TOL)?;
    if r.d != 2 {
        return Err(Failure::verdict(format!("classify2 needs d = 2, got d = {}", r.d)));
    }
    let cl = classify::classify_dim2_with(&r, tol, classify::DEFAULT_STARTS, seed)?;
    if as_json {
        let u = cl
            .conjugator
            .as_ref()
            .map(|u| Value::Array(tensor::vec_rowmajor(u).into_iter().map(complex_json).collect()));
        let v = json!({
            "family": cl.family.to_string(),
            "parameters": cl.parameters.iter().copied().map(complex_json).collect::<Vec<_>>(),
            "conjugator": u,
            "residual": cl.residual,
            "alternatives": cl.alternatives.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "nearest": cl.nearest.map(|f| f.to_string()),
        });
        out!("{}", canon::to_canonical_pretty(&v));
    } else {
        out!("family      {}", cl.family);
        let params: Vec<String> = cl.parameters.iter().map(|z| fmt_complex(*z)).collect();
        out!("parameters  [{}]", params.join(", "));
        out!("residual    {:.3e}", cl.residual);
        if !cl.alternatives.is_empty() {
            let alts: Vec<String> = cl.alternatives.iter().map(Family::to_string).collect();
            out!("also fits   {}", alts.join(", "));
        }
        if let Some(u) = &cl.conjugator {
            out!("u =");
            for i in 0..u.nrows() {
                let row: Vec<String> = (0..u.ncols()).map(|j| format!("{:>24}", fmt_complex(u[(i, j)]))).collect();
                out!("  {}", row.join(" "));
            }
        }
    }
    if cl.family == Family::Unclassified {
        let hint = cl.nearest.map(|f| format!(" (nearest: family {f})")).unwrap_or_default();
        return Err(Failure::verdict(format!("no family fits within {tol:e}{hint}")));
    }
    Ok(())
}

fn cmd_character(input: &Input, word: &str, seed: u64) -> CmdResult {
    let r = input.load(seed, VERIFY_TOL)?;
    let w = BraidWord::parse(word)?;
    out!("{}", fmt_complex(braid::character(&r, &w)));
    Ok(())
}

fn cmd_equivalent(a: &Path, b: &Path, max_strands: usize, max_len: usize, tol: f64) -> CmdResult {
    let ra = rmatrix::from_json(&read_json(a)?, VERIFY_TOL)?;
    let rb = rmatrix::from_json(&read_json(b)?, VERIFY_TOL)?;
    if ra.d != rb.d {
        out!("note: dimensions differ ({} vs {})", ra.d, rb.d);
    }
    match braid::characters_equal(&ra, &rb, max_strands, max_len, tol) {
        CharacterVerdict::EqualUpToTruncation { max_strands, max_len, words_checked } => {
            out!("equal up to truncation: {words_checked} words in B_{max_strands} of length ≤ {max_len}");
            Ok(())
        }
        CharacterVerdict::Distinct { witness, left, right } => {
            let w: Vec<String> = witness.to_signed().iter().map(i64::to_string).collect();
            out!("distinct on word [{}]: {} vs {}", w.join(","), fmt_complex(left), fmt_complex(right));
            Err(Failure::verdict("characters differ"))
        }
    }
}

fn cmd_export(input: &Input, out: Option<&Path>, seed: u64) -> CmdResult {
    let r = input.load(seed, VERIFY_TOL)?;
    write_output(out, &(canon::to_canonical_pretty(&rmatrix::to_json(&r)) + "\n"))
}

fn cmd_search(d: usize, restarts: usize, out: Option<&Path>, jobs: usize, target: f64, seed: u64) -> CmdResult {
    let mut config = SearchConfig::new(d, seed);
    config.target_residual = target;
    let hash = config.hash();
    let results = search::search_restarts(&config, restarts, jobs.max(1))?;
    let mut lines = String::new();
    let mut found = 0;
    for res in &results {
        match &res.outcome {
            SearchOutcome::Found(s) => {
                found += 1;
                let rec = search::solution_record(s, &hash, res.seed)?;
                out!(
                    "restart {:>3}: residual {:.2e}, family {}",
                    res.index,
                    s.residual,
                    rec["classification"]["family"].as_str().unwrap_or("?")
                );
                lines.push_str(&canon::to_canonical_string(&rec));
                lines.push('\n');
            }
            SearchOutcome::Failed(f) => {
                out!("restart {:>3}: no solution (best residual {:.2e}): {}", res.index, f.best_residual, f.reason);
            }
        }
    }
    if let Some(p) = out {
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(p)
            .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
        file.write_all(lines.as_bytes()).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
    }
    out!("{found}/{restarts} restarts found a verified solution (config {hash})");
    if found == 0 {
        let best = search::best_restart(&results)
            .map(|b| format!("; best residual {:.3e} at restart {}", b.outcome.residual(), b.index))
            .unwrap_or_default();
        return Err(Failure::verdict(format!("search failed{best}")));
    }
    Ok(())
}

fn cmd_table9(samples: usize, jobs: usize, out: Option<&Path>, seed: u64) -> CmdResult {
    let rows = report::table9_samples(samples, seed, jobs.max(1))?;
    write_output(out, &report::table9_markdown(&rows))?;
    let bad: Vec<&report::FamilySample> = rows.iter().filter(|s| !s.matches_table()).collect();
    for s in &bad {
        eprintln!(
            "mismatch: family {} profile {:?} ergodic {} fixed {:?}",
            s.family, s.observed_profile, s.ergodic, s.fixed_dims
        );
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::verdict(format!("{} of {} samples disagree with the table", bad.len(), rows.len())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or(random::DEFAULT_SEED);
    let result = match &cli.command {
        Command::Verify { input, tol } => cmd_verify(input, *tol, seed),
        Command::Analyze { input, n_cap, format, out } => cmd_analyze(input, *n_cap, *format, out.as_deref(), seed),
        Command::Classify2 { input, tol, json } => cmd_classify2(input, *tol, *json, seed),
        Command::Character { input, word } => cmd_character(input, word, seed),
        Command::Equivalent { a, b, max_strands, max_len, tol } => cmd_equivalent(a, b, *max_strands, *max_len, *tol),
        Command::Export { input, out } => cmd_export(input, out.as_deref(), seed),
        Command::Search { d, restarts, out, jobs, target } => {
            cmd_search(*d, *restarts, out.as_deref(), *jobs, *target, seed)
        }
        Command::Table9 { samples, jobs, out } => cmd_table9(*samples, *jobs, out.as_deref(), seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
