//! The three relative commutant towers and the fixed-point algebras at low
//! levels, with their Wedderburn block profiles.
//!
//! ```text
//! cargo run --release -p rmlab --example commutant_towers
//! ```

use rmlab::commutant::{self, LBudget};
use rmlab::random;
use rmlab::rmatrix::{self, RMatrix};
use rmlab::tensor::cis;
use rmlab::NormalFormSpec;

fn tower(r: &RMatrix) -> rmlab::Result<()> {
    println!("{}", r.label);
    for n in 1..=2 {
        let l = commutant::relative_commutant_l(r, n, LBudget::default_for(n))?;
        let m = commutant::relative_commutant_m(r, n)?;
        let nn = commutant::relative_commutant_n(r, n)?;
        let f = commutant::fixed_subalgebra(r, n)?;
        println!(
            "  n={n}: L {:<18} M {:<18} N {:<18} fixed points {}{}",
            l.profile_string(),
            m.profile_string(),
            nn.profile_string(),
            f.profile_string(),
            if l.converged { "" } else { "  (L truncated)" }
        );
    }
    Ok(())
}

fn main() -> rmlab::Result<()> {
    let mut g = random::rng(11);
    let u = random::random_unitary(2, &mut g);
    for r in [
        rmatrix::make_flip(2)?,
        rmatrix::make_twisted_flip(&u)?,
        rmatrix::make_r3(cis(0.2), cis(0.9), cis(1.6))?,
        rmatrix::make_r4(cis(0.0))?,
        rmatrix::make_normal_form(&NormalFormSpec::parse("2:+,1:+")?)?,
    ] {
        tower(&r)?;
    }

    let r4 = rmatrix::make_r4(cis(0.0))?;
    let dims: Vec<usize> =
        (1..=4).map(|n| commutant::fixed_subalgebra(&r4, n).map(|b| b.dim())).collect::<rmlab::Result<_>>()?;
    println!("\nfixed points of R4 at levels 1..4: {dims:?}");
    Ok(())
}
