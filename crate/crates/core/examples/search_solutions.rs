//! Searches for two-dimensional R-matrices from random unitary starting
//! points and classifies every solution found.
//!
//! ```text
//! cargo run --release -p rmlab --example search_solutions -- 16 42
//! ```

use rmlab::classify;
use rmlab::search::{self, SearchConfig, SearchOutcome};

fn main() -> rmlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let restarts: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let config = SearchConfig::new(2, seed);
    let started = std::time::Instant::now();
    let results = search::search_restarts(&config, restarts, 1)?;
    let mut found = 0;
    for r in &results {
        match &r.outcome {
            SearchOutcome::Found(s) => {
                found += 1;
                let cl = classify::classify_dim2(&s.rmatrix, classify::CLASSIFY_TOL)?;
                let nearest = match (cl.family, cl.nearest) {
                    (classify::Family::Unclassified, Some(f)) => format!(", nearest {f}"),
                    _ => String::new(),
                };
                println!(
                    "restart {:>3}: residual {:.2e} after {} steps (+{} polish), family {} (fit {:.1e}{nearest})",
                    r.index, s.residual, s.iterations, s.polish_iterations, cl.family, cl.residual
                );
            }
            SearchOutcome::Failed(f) => {
                println!("restart {:>3}: failed at residual {:.2e}: {}", r.index, f.best_residual, f.reason);
            }
        }
    }
    println!("{found}/{restarts} restarts converged in {:.1?}", started.elapsed());
    Ok(())
}
