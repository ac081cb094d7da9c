//! Samples random members of the four two-dimensional families, conjugated by
//! random unitaries, and prints the summary table.
//!
//! ```text
//! cargo run --release -p rmlab --example family_table -- 20 7
//! ```

use rmlab::report;

fn main() -> rmlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let rows = report::table9_samples(samples, seed, jobs)?;
    print!("{}", report::table9_markdown(&rows));
    for r in rows.iter().filter(|r| !r.classified_correctly() || !r.matches_table()) {
        eprintln!(
            "family {} special={} classified as {} (residual {:.2e}); profile {:?} expected {:?}; fixed {:?}",
            r.family,
            r.special,
            r.classification.family,
            r.classification.residual,
            r.observed_profile,
            r.expected_profile,
            r.fixed_dims
        );
    }
    Ok(())
}
