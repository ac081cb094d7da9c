//! Builds the named R-matrices, verifies them, combines them with ⊠, ⊞ and
//! cabling, and round-trips one through the JSON format.
//!
//! ```text
//! cargo run --release -p rmlab --example constructors
//! ```

use rmlab::rmatrix::{self, RMatrix, VERIFY_TOL};
use rmlab::tensor::{c, cis};
use rmlab::{canon, NormalFormSpec};

fn show(r: &RMatrix) {
    println!("{:<28} d={}  ybe {:.1e}  unitarity {:.1e}", r.label, r.d, r.ybe_residual, r.unitarity_residual);
}

fn main() -> rmlab::Result<()> {
    let flip2 = rmatrix::make_flip(2)?;
    let named = [
        rmatrix::make_trivial(3, cis(0.4))?,
        flip2.clone(),
        rmatrix::make_r2(c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), cis(0.3))?,
        rmatrix::make_r3(cis(0.1), cis(1.2), cis(-0.7))?,
        rmatrix::make_r4(c(1.0, 0.0))?,
        rmatrix::make_normal_form(&NormalFormSpec::parse("2:+,1:-")?)?,
    ];
    for r in &named {
        show(r);
    }

    println!();
    let one = rmatrix::make_trivial(1, c(1.0, 0.0))?;
    let sum = rmatrix::box_sum(&one, &one)?;
    println!("1_1 ⊞ 1_1 == F_2: {}", sum.matrix == flip2.matrix);
    let prod = rmatrix::tensor_product(&flip2, &rmatrix::make_flip(3)?)?;
    println!("F_2 ⊠ F_3 == F_6: {}", prod.matrix == rmatrix::make_flip(6)?.matrix);
    let cabled = rmatrix::cabling_power(&flip2, 2)?;
    println!("F_2^(2) == F_4:   {}", (&cabled.matrix - rmatrix::make_flip(4)?.matrix).norm() < 1e-13);

    println!();
    let json = rmatrix::to_json(&named[2]);
    let text = canon::to_canonical_string(&json);
    let back = rmatrix::from_json(&serde_json::from_str(&text).expect("canonical JSON parses"), VERIFY_TOL)?;
    println!("JSON round trip ({} bytes) deviation {:.1e}", text.len(), (&back.matrix - &named[2].matrix).norm());

    let mut noisy = flip2.matrix.clone();
    noisy[(0, 0)] += c(1e-3, 0.0);
    match rmatrix::verify(&noisy, 2, VERIFY_TOL) {
        Ok(_) => println!("perturbed flip accepted?!"),
        Err(e) => println!("perturbed flip rejected: {e}"),
    }
    Ok(())
}
