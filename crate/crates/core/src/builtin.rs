//! Named example R-matrices and the parameter syntax used to select them.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::random::{self, SeededRng};
use crate::rmatrix::{self, NormalFormSpec, RMatrix, SimpleRSpec};
use crate::tensor::{c, cis, CMat, C64};

pub const BUILTIN_NAMES: [&str; 10] =
    ["trivial", "flip", "simple", "diagonal", "normal", "r2", "r3", "r4", "box", "twisted"];

/// Parses a complex parameter: `re,im`, `arg:θ`, `i`, `-i`, or a real number.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t = s.trim();
    let bad = || Error::Parse(format!("cannot read complex value {s:?}"));
    if let Some(theta) = t.strip_prefix("arg:") {
        return Ok(cis(theta.trim().parse::<f64>().map_err(|_| bad())?));
    }
    match t {
        "i" | "+i" => return Ok(c(0.0, 1.0)),
        "-i" => return Ok(c(0.0, -1.0)),
        _ => {}
    }
    if let Some((re, im)) = t.split_once(',') {
        let re = re.trim().parse::<f64>().map_err(|_| bad())?;
        let im = im.trim().parse::<f64>().map_err(|_| bad())?;
        return Ok(c(re, im));
    }
    t.parse::<f64>().map(|x| c(x, 0.0)).map_err(|_| bad())
}

/// A builtin name with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltinSpec {
    pub name: String,
    pub d: Option<usize>,
    pub params: BTreeMap<String, C64>,
    pub blocks: Option<NormalFormSpec>,
    /// Used by the randomized builtins (`simple`, `diagonal`, `twisted`).
    pub seed: u64,
}

impl BuiltinSpec {
    pub fn new(name: &str) -> Result<Self> {
        if !BUILTIN_NAMES.contains(&name) {
            return Err(Error::Parse(format!(
                "unknown builtin {name:?}; expected one of {}",
                BUILTIN_NAMES.join(", ")
            )));
        }
        Ok(Self { name: name.to_string(), d: None, params: BTreeMap::new(), blocks: None, seed: random::DEFAULT_SEED })
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_param(mut self, key: &str, z: C64) -> Self {
        self.params.insert(key.to_string(), z);
        self
    }

    pub fn with_blocks(mut self, blocks: NormalFormSpec) -> Self {
        self.blocks = Some(blocks);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn param(&self, key: &str) -> C64 {
        self.params.get(key).copied().unwrap_or(c(1.0, 0.0))
    }

    pub fn build(&self) -> Result<RMatrix> {
        let d = self.d.unwrap_or(2);
        if d == 0 {
            return Err(Error::Domain("d must be positive".into()));
        }
        let mut g = random::rng(self.seed);
        match self.name.as_str() {
            "trivial" => rmatrix::make_trivial(d, self.param("q")),
            "flip" => rmatrix::make_flip(d),
            "simple" => rmatrix::make_simple(&random_simple_spec(d, &mut g)),
            "diagonal" => rmatrix::make_diagonal(&random_phases(d, &mut g)),
            "normal" => {
                let spec = self
                    .blocks
                    .clone()
                    .ok_or_else(|| Error::Parse("builtin normal needs --blocks, e.g. 2:+,1:-".into()))?;
                rmatrix::make_normal_form(&spec)
            }
            "r2" => rmatrix::make_r2(self.param("p"), self.param("q"), self.param("r"), self.param("s")),
            "r3" => rmatrix::make_r3(self.param("p"), self.param("q"), self.param("r")),
            "r4" => rmatrix::make_r4(self.param("q")),
            "box" => {
                let a = rmatrix::make_trivial(2, c(1.0, 0.0))?;
                let b = rmatrix::make_trivial(1, c(1.0, 0.0))?;
                Ok(rmatrix::box_sum(&a, &b)?.with_label("1_2 ⊞ 1_1"))
            }
            "twisted" => rmatrix::make_twisted_flip(&random::random_unitary(d, &mut g)),
            other => Err(Error::Parse(format!("unknown builtin {other:?}"))),
        }
    }
}

impl FromStr for BuiltinSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.trim())
    }
}

/// `d×d` matrix of random unit-modulus entries.
pub fn random_phases(d: usize, g: &mut SeededRng) -> CMat {
    CMat::from_fn(d, d, |_, _| random::random_phase(g))
}

/// Random composition of `d` into positive parts.
pub fn random_partition(d: usize, g: &mut SeededRng) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = d;
    while left > 0 {
        let k = g.gen_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts
}

/// Random simple spec: random block sizes, phases and a Haar-random rotation.
pub fn random_simple_spec(d: usize, g: &mut SeededRng) -> SimpleRSpec {
    let dims = random_partition(d, g);
    let phases = random_phases(dims.len(), g);
    let u = random::random_unitary(d, g);
    SimpleRSpec::coordinate_blocks(&dims, phases).rotated(&u)
}

/// Random canonical normal-form spec with total dimension `d`.
pub fn random_normal_spec(d: usize, g: &mut SeededRng) -> NormalFormSpec {
    let mut dims = random_partition(d, g);
    dims.shuffle(g);
    let blocks = dims.into_iter().map(|k| (k, if g.gen_bool(0.5) { 1 } else { -1 })).collect();
    NormalFormSpec::new(blocks).expect("positive block sizes")
}

/// A deterministic corpus covering every builtin kind, used by tests and examples.
pub fn corpus(seed: u64) -> Result<Vec<RMatrix>> {
    let mut g = random::rng(seed);
    let mut out = Vec::new();
    for d in 1..=3 {
        out.push(rmatrix::make_trivial(d, random::random_phase(&mut g))?);
        out.push(rmatrix::make_flip(d)?);
    }
    out.push(rmatrix::scalar_multiple(&rmatrix::make_flip(2)?, c(-1.0, 0.0))?);
    for d in 2..=3 {
        out.push(rmatrix::make_simple(&random_simple_spec(d, &mut g))?);
        out.push(rmatrix::make_diagonal(&random_phases(d, &mut g))?);
        out.push(rmatrix::make_normal_form(&random_normal_spec(d, &mut g))?);
        out.push(rmatrix::make_twisted_flip(&random::random_unitary(d, &mut g))?);
    }
    let ph = |g: &mut SeededRng| random::random_phase(g);
    out.push(rmatrix::make_r2(ph(&mut g), ph(&mut g), ph(&mut g), ph(&mut g))?);
    out.push(rmatrix::make_r3(ph(&mut g), ph(&mut g), ph(&mut g))?);
    out.push(rmatrix::make_r4(ph(&mut g))?);
    out.push(BuiltinSpec::new("box")?.build()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_syntax() {
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(parse_complex("0.6,0.8").unwrap(), c(0.6, 0.8));
        assert!((parse_complex("arg:3.141592653589793").unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn every_name_builds() {
        for name in BUILTIN_NAMES {
            let mut spec = BuiltinSpec::new(name).unwrap();
            if name == "normal" {
                spec = spec.with_blocks(NormalFormSpec::parse("2:+,1:-").unwrap());
            }
            spec.build().unwrap();
        }
        assert!(BuiltinSpec::new("nope").is_err());
    }
}
