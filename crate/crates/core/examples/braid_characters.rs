//! Braid group representations and their characters: cycle words against
//! powers of the partial trace, the Thoma formula for involutive R-matrices,
//! and truncated character comparison.
//!
//! ```text
//! cargo run --release -p rmlab --example braid_characters
//! ```

use rmlab::analysis;
use rmlab::braid::{self, BraidWord};
use rmlab::rmatrix;
use rmlab::tensor::{self, cis};
use rmlab::{random, NormalFormSpec};

fn main() -> rmlab::Result<()> {
    let r = rmatrix::make_r2(cis(0.3), cis(1.1), cis(-0.4), cis(2.0))?;
    let phi = analysis::partial_trace_invariant(&r)?;
    println!("{}: τ(cycle_n) vs τ(φ_R(R)^n)", r.label);
    let mut pow = tensor::identity(r.d);
    for n in 1..=5 {
        pow = &pow * &phi.element.matrix;
        let lhs = braid::character(&r, &BraidWord::cycle(n));
        let rhs = pow.trace() / r.d as f64;
        println!("  n={n}: {lhs:.6} vs {rhs:.6}");
    }

    let spec = NormalFormSpec::parse("2:+,1:-")?;
    let mut g = random::rng(3);
    let inv = rmatrix::quasifree_conjugate(&rmatrix::make_normal_form(&spec)?, &random::random_unitary(3, &mut g))?;
    println!("\nThoma character of {spec} on S_4 cycle types");
    for perm in [[0, 1, 2, 3], [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0]] {
        let ct = braid::cycle_type(&perm);
        let direct = braid::character(&inv, &braid::permutation_word(&perm));
        println!("  {ct:?}: trace {:.6}, formula {:.6}", direct.re, braid::thoma_character(&spec, &ct));
    }

    let flipped = rmatrix::flip_conjugate(&r)?;
    let verdict = braid::characters_equal(&r, &flipped, 3, 5, braid::DEFAULT_CHAR_TOL);
    println!("\nR vs FRF: {verdict:?}");
    let other = rmatrix::make_r2(cis(0.3), cis(1.1), cis(-0.4), cis(2.1))?;
    println!("R vs R':  {:?}", braid::characters_equal(&r, &other, 3, 5, braid::DEFAULT_CHAR_TOL));
    Ok(())
}
