//! Involutive R-matrices: recovers the signed block normal form from a
//! randomly conjugated representative and shows the reduction into leaves.
//!
//! ```text
//! cargo run --release -p rmlab --example normal_forms -- 3:+,2:-,1:+
//! ```

use rmlab::analysis;
use rmlab::rmatrix;
use rmlab::{random, NormalFormSpec};

fn main() -> rmlab::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "2:+,1:-,1:-".into());
    let spec = NormalFormSpec::parse(&text)?;
    let d = spec.d();
    let mut g = random::rng(5);
    let r = rmatrix::quasifree_conjugate(&rmatrix::make_normal_form(&spec)?, &random::random_unitary(d, &mut g))?;
    println!("input spec       {spec}  (d = {d}, α = {:?}, β = {:?})", spec.alphas(), spec.betas());

    let phi = analysis::partial_trace_invariant(&r)?;
    let spectrum = rmlab::tensor::spectrum(&phi.element.matrix, analysis::SPECTRAL_TOL)?;
    let eig: Vec<String> = spectrum.iter().map(|(z, m)| format!("{:+.4}×{m}", z.re)).collect();
    println!("φ_R(R) spectrum  {}", eig.join(", "));

    let nf = analysis::normal_form_of_involutive(&r, 1e-9)?;
    println!("normal form      {nf}");
    let tree = analysis::reduce_involutive(&r, 1e-9)?;
    println!("reduction leaves {:?} ({} leaves)", tree.leaf_blocks(), tree.leaf_count());
    Ok(())
}
