//! Braid words, the representations `ρ_R(b_k) = φ^{k−1}(R)`, characters
//! `τ_R = τ∘ρ_R`, fundamental braids, intertwiners and the Thoma formula.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rmatrix::{self, NormalFormSpec, RMatrix};
use crate::tensor::{self, ipow, AlgebraElement, CMat, C64};

/// A freely reduced word in the generators `b_1, …, b_{n−1}` of `B_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<(usize, i8)>,
}

impl BraidWord {
    /// Builds a word and applies free reduction.
    pub fn new(strands: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        let strands = strands.max(1);
        let mut reduced: Vec<(usize, i8)> = Vec::with_capacity(letters.len());
        for (k, e) in letters {
            if k == 0 || k >= strands {
                return Err(Error::Domain(format!("generator b_{k} does not exist in B_{strands}")));
            }
            if e != 1 && e != -1 {
                return Err(Error::Domain(format!("exponent {e} is not ±1")));
            }
            match reduced.last() {
                Some(&(k0, e0)) if k0 == k && e0 == -e => {
                    reduced.pop();
                }
                _ => reduced.push((k, e)),
            }
        }
        Ok(Self { strands, letters: reduced })
    }

    pub fn empty(strands: usize) -> Self {
        Self { strands: strands.max(1), letters: Vec::new() }
    }

    /// From a signed integer list such as `[1, 2, -1]`.
    pub fn from_signed(strands: usize, word: &[i64]) -> Result<Self> {
        let letters = word
            .iter()
            .map(|&x| {
                if x == 0 {
                    Err(Error::Domain("generator index 0".into()))
                } else {
                    Ok((x.unsigned_abs() as usize, if x > 0 { 1 } else { -1 }))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, letters)
    }

    /// Parses `"1,2,-1"`; the strand count is the least one that fits.
    pub fn parse(s: &str) -> Result<Self> {
        let mut word = Vec::new();
        for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            word.push(t.parse::<i64>().map_err(|_| Error::Parse(format!("bad braid letter '{t}'")))?);
        }
        let strands = word.iter().map(|x| x.unsigned_abs() as usize + 1).max().unwrap_or(1);
        Self::from_signed(strands, &word).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|&(k, e)| e as i64 * k as i64).collect()
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The same word viewed in `B_m`, `m ≥ strands`.
    pub fn with_strands(&self, m: usize) -> Result<Self> {
        if m < self.strands {
            return Err(Error::Domain(format!("cannot view a B_{} word in B_{m}", self.strands)));
        }
        Ok(Self { strands: m, letters: self.letters.clone() })
    }

    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|&(k, e)| (k, -e)).collect();
        Self { strands: self.strands, letters }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let strands = self.strands.max(other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self::new(strands, letters).expect("letters already valid")
    }

    /// `b_1 b_2 ⋯ b_n` in `B_{n+1}`.
    pub fn cycle(n: usize) -> Self {
        Self { strands: n + 1, letters: (1..=n).map(|k| (k, 1)).collect() }
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.to_signed().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `ρ_R(w)` at level `w.strands`.
pub fn represent(r: &RMatrix, w: &BraidWord) -> AlgebraElement {
    represent_at(r, w, w.strands).expect("word fits its own strand count")
}

/// `ρ_R(w)` embedded at a level `≥ w.strands`.
pub fn represent_at(r: &RMatrix, w: &BraidWord, level: usize) -> Result<AlgebraElement> {
    if level < w.strands {
        return Err(Error::Level(format!("a B_{} word needs level ≥ {}", w.strands, w.strands)));
    }
    let d = r.d;
    let adj = r.matrix.adjoint();
    let mut acc = tensor::identity(ipow(d, level));
    for &(k, e) in &w.letters {
        let g = if e > 0 { &r.matrix } else { &adj };
        acc = tensor::mul_right_local(&acc, g, d, level, k - 1, 2);
    }
    Ok(AlgebraElement::from_parts(d, level, acc))
}

/// `τ(ρ_R(w))`.
pub fn character(r: &RMatrix, w: &BraidWord) -> C64 {
    represent(r, w).trace()
}

/// `Δ_1 = e`, `Δ_{n+1} = b_1⋯b_n Δ_n`, as a word in `B_n`.
pub fn fundamental_braid(n: usize) -> Result<BraidWord> {
    if n == 0 {
        return Err(Error::Domain("fundamental braids start at n = 1".into()));
    }
    let mut letters: Vec<(usize, i8)> = Vec::new();
    for m in 1..n {
        let mut next: Vec<(usize, i8)> = (1..=m).map(|k| (k, 1)).collect();
        next.extend_from_slice(&letters);
        letters = next;
    }
    BraidWord::new(n, letters)
}

/// `Y_n = ρ_{FRF}(Δ_n)ρ_F(Δ_n)`, checked to intertwine `ρ_R` with `ρ_{FRF}`.
pub fn intertwiner_y(r: &RMatrix, n: usize) -> Result<AlgebraElement> {
    let delta = fundamental_braid(n)?;
    let frf = rmatrix::flip_conjugate(r)?;
    let f = rmatrix::make_flip(r.d)?;
    let y = represent(&frf, &delta).mul(&represent(&f, &delta))?;
    for k in 1..n {
        let b = BraidWord::new(n, vec![(k, 1)])?;
        let lhs = &y.matrix * represent(r, &b).matrix * y.matrix.adjoint();
        let res = (lhs - represent(&frf, &b).matrix).norm();
        if res > 1e-10 {
            return Err(Error::Internal(format!("Y_{n} fails to intertwine b_{k}: residual {res:e}")));
        }
    }
    Ok(y)
}

/// Cycle multiplicities `length ↦ count`.
pub type CycleType = BTreeMap<usize, usize>;

/// Cycle type of a permutation of `0..n` given in one-line notation.
pub fn cycle_type(perm: &[usize]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut ct = CycleType::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        *ct.entry(len).or_insert(0) += 1;
    }
    ct
}

/// A positive braid word whose image in `S_n` is `perm` (bubble-sort reduced word).
pub fn permutation_word(perm: &[usize]) -> BraidWord {
    let n = perm.len();
    let mut a = perm.to_vec();
    let mut letters = Vec::new();
    loop {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1) {
            if a[k] > a[k + 1] {
                a.swap(k, k + 1);
                letters.push((k + 1, 1));
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    letters.reverse();
    BraidWord::new(n, letters).expect("bubble-sort letters are valid")
}

/// `Π_n (Σ α_i^n + (−1)^{n+1} Σ β_j^n)^{m_n}`.
pub fn thoma_character(spec: &NormalFormSpec, ct: &CycleType) -> f64 {
    let (alphas, betas) = (spec.alphas(), spec.betas());
    ct.iter()
        .filter(|(&len, _)| len >= 1)
        .map(|(&len, &mult)| {
            let sign = if len % 2 == 1 { 1.0 } else { -1.0 };
            let a: f64 = alphas.iter().map(|x| x.powi(len as i32)).sum();
            let b: f64 = betas.iter().map(|x| x.powi(len as i32)).sum();
            (a + sign * b).powi(mult as i32)
        })
        .product()
}

/// Outcome of a truncated character comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum CharacterVerdict {
    EqualUpToTruncation { max_strands: usize, max_len: usize, words_checked: usize },
    Distinct { witness: BraidWord, left: C64, right: C64 },
}

impl CharacterVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, CharacterVerdict::EqualUpToTruncation { .. })
    }
}

pub const DEFAULT_MAX_STRANDS: usize = 4;
pub const DEFAULT_MAX_LEN: usize = 6;
pub const DEFAULT_CHAR_TOL: f64 = 1e-9;

/// `τ(a·(1⊗g⊗1))` without forming the product.
fn trace_mul_local(a: &CMat, g: &CMat, d: usize, n: usize, first: usize) -> C64 {
    let gw = d * d;
    let post = ipow(d, n - first - 2);
    let pre = ipow(d, first);
    let mut s = C64::new(0.0, 0.0);
    for p in 0..pre {
        for q in 0..post {
            for m in 0..gw {
                let col = (p * gw + m) * post + q;
                for mp in 0..gw {
                    let row = (p * gw + mp) * post + q;
                    s += a[(col, row)] * g[(mp, m)];
                }
            }
        }
    }
    s / a.nrows() as f64
}

struct CharState<'a> {
    r: &'a RMatrix,
    radj: CMat,
    level: usize,
}

impl CharState<'_> {
    fn gen(&self, e: i8) -> &CMat {
        if e > 0 {
            &self.r.matrix
        } else {
            &self.radj
        }
    }
}

/// Compares `τ_R` and `τ_S` on all freely reduced words of length `≤ max_len`
/// in `B_{max_strands}`, in shortlex order with letters ordered
/// `b_1 < b_1^{-1} < b_2 < …`. The first mismatch is the witness.
pub fn characters_equal(r: &RMatrix, s: &RMatrix, max_strands: usize, max_len: usize, tol: f64) -> CharacterVerdict {
    let level = max_strands.max(2);
    let gens: Vec<(usize, i8)> = (1..level).flat_map(|k| [(k, 1i8), (k, -1i8)]).collect();
    let states =
        [CharState { r, radj: r.matrix.adjoint(), level }, CharState { r: s, radj: s.matrix.adjoint(), level }];
    let mut checked = 1usize;
    for len in 1..=max_len {
        let start = [tensor::identity(ipow(r.d, level)), tensor::identity(ipow(s.d, level))];
        let mut prefix: Vec<(usize, i8)> = Vec::new();
        if let Some(v) = dfs(&states, &gens, &start, &mut prefix, len, tol, &mut checked) {
            return v;
        }
    }
    CharacterVerdict::EqualUpToTruncation { max_strands: level, max_len, words_checked: checked }
}

fn dfs(
    states: &[CharState; 2],
    gens: &[(usize, i8)],
    mats: &[CMat; 2],
    prefix: &mut Vec<(usize, i8)>,
    remaining: usize,
    tol: f64,
    checked: &mut usize,
) -> Option<CharacterVerdict> {
    for &(k, e) in gens {
        if let Some(&(k0, e0)) = prefix.last() {
            if k0 == k && e0 == -e {
                continue;
            }
        }
        if remaining == 1 {
            *checked += 1;
            let vals: Vec<C64> = (0..2)
                .map(|i| {
                    let st = &states[i];
                    trace_mul_local(&mats[i], st.gen(e), st.r.d, st.level, k - 1)
                })
                .collect();
            if (vals[0] - vals[1]).norm() > tol {
                let mut letters = prefix.clone();
                letters.push((k, e));
                let witness = BraidWord::new(states[0].level, letters).expect("valid letters");
                return Some(CharacterVerdict::Distinct { witness, left: vals[0], right: vals[1] });
            }
        } else {
            let next = [0, 1].map(|i| {
                let st = &states[i];
                tensor::mul_right_local(&mats[i], st.gen(e), st.r.d, st.level, k - 1, 2)
            });
            prefix.push((k, e));
            let found = dfs(states, gens, &next, prefix, remaining - 1, tol, checked);
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{make_flip, make_r4, make_trivial};
    use crate::tensor::c;

    #[test]
    fn free_reduction() {
        let w = BraidWord::from_signed(3, &[1, 2, -2, -1, 2]).unwrap();
        assert_eq!(w.to_signed(), vec![2]);
        assert!(BraidWord::from_signed(2, &[2]).is_err());
        assert_eq!(BraidWord::parse("1, 2,-1").unwrap().strands(), 3);
    }

    #[test]
    fn fundamental_braid_unfolds() {
        assert_eq!(fundamental_braid(2).unwrap().to_signed(), vec![1]);
        assert_eq!(fundamental_braid(3).unwrap().to_signed(), vec![1, 2, 1]);
        assert!(fundamental_braid(1).unwrap().is_empty());
    }

    #[test]
    fn flip_character() {
        let f = make_flip(2).unwrap();
        let w = BraidWord::parse("1").unwrap();
        assert!((character(&f, &w) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trivial_vs_flip_witness() {
        let one = make_trivial(2, c(1.0, 0.0)).unwrap();
        let f = make_flip(2).unwrap();
        match characters_equal(&one, &f, 4, 6, 1e-9) {
            CharacterVerdict::Distinct { witness, .. } => assert_eq!(witness.to_signed(), vec![1]),
            v => panic!("expected distinct, got {v:?}"),
        }
    }

    #[test]
    fn y2_is_frf_times_f() {
        let r = make_r4(c(0.0, 1.0)).unwrap();
        let y = intertwiner_y(&r, 2).unwrap();
        let frf = crate::rmatrix::flip_conjugate(&r).unwrap();
        let f = crate::rmatrix::flip_matrix(2);
        assert!((y.matrix - &frf.matrix * f).norm() < 1e-13);
    }

    #[test]
    fn thoma_small_cases() {
        let spec = NormalFormSpec::new(vec![(2, 1), (1, 1)]).unwrap();
        let mut ct = CycleType::new();
        ct.insert(2, 1);
        assert!((thoma_character(&spec, &ct) - 5.0 / 9.0).abs() < 1e-15);
        assert_eq!(thoma_character(&spec, &CycleType::new()), 1.0);
    }
}
