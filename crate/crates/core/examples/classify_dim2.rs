//! Hides family representatives behind random conjugations and recovers the
//! family, parameters and conjugator.
//!
//! ```text
//! cargo run --release -p rmlab --example classify_dim2
//! ```

use rmlab::classify::{self, Family};
use rmlab::random;
use rmlab::rmatrix;
use rmlab::tensor::cis;

fn main() -> rmlab::Result<()> {
    let mut g = random::rng(21);
    let hidden = [
        (Family::One, rmatrix::make_trivial(2, cis(0.8))?),
        (Family::Two, rmatrix::make_r2(cis(0.1), cis(0.7), cis(2.2), cis(-1.0))?),
        (Family::Three, rmatrix::make_r3(cis(0.5), cis(1.4), cis(-2.3))?),
        (Family::Four, rmatrix::make_r4(cis(0.6))?),
    ];
    for (family, r) in hidden {
        let u = random::random_unitary(2, &mut g);
        let conj = rmatrix::quasifree_conjugate(&r, &u)?;
        let cl = classify::classify_dim2(&conj, classify::CLASSIFY_TOL)?;
        let params: Vec<String> = cl.parameters.iter().map(|z| format!("{:.3}∠{:.3}", z.norm(), z.arg())).collect();
        println!(
            "hidden family {family}: found {} (residual {:.1e}) parameters [{}]",
            cl.family,
            cl.residual,
            params.join(", ")
        );
    }
    Ok(())
}
