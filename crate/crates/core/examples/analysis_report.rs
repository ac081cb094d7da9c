//! Full invariant report for a builtin, in markdown or canonical JSON.
//!
//! ```text
//! cargo run --release -p rmlab --example analysis_report -- r4
//! cargo run --release -p rmlab --example analysis_report -- normal 2:+,1:- json
//! ```

use rmlab::builtin::BuiltinSpec;
use rmlab::report::{self, Caps};
use rmlab::{canon, NormalFormSpec};

fn main() -> rmlab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = args.first().map(String::as_str).unwrap_or("r4");
    let mut spec = BuiltinSpec::new(name)?;
    let mut rest = &args[1.min(args.len())..];
    if name == "normal" {
        let blocks = rest.first().map(String::as_str).unwrap_or("2:+,1:-");
        spec = spec.with_blocks(NormalFormSpec::parse(blocks)?);
        rest = &rest[1.min(rest.len())..];
    }
    let r = spec.build()?;
    let rep = report::analyze(&r, &Caps::default());
    if rest.first().map(String::as_str) == Some("json") {
        println!("{}", canon::to_canonical_pretty(&rep.to_json()));
    } else {
        print!("{}", rep.to_markdown());
    }
    Ok(())
}
