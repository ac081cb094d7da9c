//! Cross-checks of the library against direct dense computations written out
//! with explicit Kronecker products and index loops.

use nalgebra::DMatrix;
use rmlab::braid::{self, BraidWord};
use rmlab::commutant;
use rmlab::random;
use rmlab::rmatrix::{self, RMatrix};
use rmlab::tensor::{self, c, cis};
use rmlab::{analysis, CMat, NormalFormSpec, C64};

fn eye(n: usize) -> CMat {
    DMatrix::identity(n, n)
}

fn unit(n: usize, a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(a, b)] = c(1.0, 0.0);
    m
}

/// `R` acting on slots `k, k+1` of an `n`-slot space, built by Kronecker products.
fn slot(r: &CMat, d: usize, n: usize, k: usize) -> CMat {
    eye(d.pow(k as u32)).kronecker(r).kronecker(&eye(d.pow((n - k - 2) as u32)))
}

/// Dimension of the kernel of a linear map given by its action on matrix units.
fn kernel_dim(side: usize, map: impl Fn(&CMat) -> CMat) -> usize {
    let images: Vec<CMat> = (0..side * side).map(|k| map(&unit(side, k / side, k % side))).collect();
    let rows = images[0].len();
    let op = CMat::from_fn(rows, side * side, |i, j| images[j][i]);
    let sv = op.singular_values();
    let cutoff = 1e-9 * sv.max().max(1.0);
    side * side - sv.iter().filter(|&&s| s > cutoff).count()
}

fn samples() -> Vec<RMatrix> {
    let mut g = random::rng(77);
    let u = random::random_unitary(2, &mut g);
    vec![
        rmatrix::make_flip(2).unwrap(),
        rmatrix::make_trivial(2, cis(0.3)).unwrap(),
        rmatrix::make_r2(cis(0.2), cis(1.0), cis(-0.5), cis(2.4)).unwrap(),
        rmatrix::make_r3(cis(0.4), cis(-1.1), cis(0.9)).unwrap(),
        rmatrix::make_r4(cis(0.7)).unwrap(),
        rmatrix::make_twisted_flip(&u).unwrap(),
        rmatrix::make_normal_form(&NormalFormSpec::parse("2:+,1:-").unwrap()).unwrap(),
    ]
}

#[test]
fn braid_relation_by_kronecker_products() {
    for r in samples() {
        let d = r.d;
        let a = r.matrix.kronecker(&eye(d));
        let b = eye(d).kronecker(&r.matrix);
        let gap = (&a * &b * &a - &b * &a * &b).norm();
        assert!(gap < 1e-12, "{}: {gap}", r.label);
        assert!((rmatrix::ybe_residual(&r.matrix, d) - gap).abs() < 1e-12);
    }
}

#[test]
fn entry_convention() {
    let r = rmatrix::make_r2(c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), cis(0.4)).unwrap();
    assert_eq!(r.entry(0, 0, 0, 0), c(1.0, 0.0));
    assert_eq!(r.entry(0, 1, 1, 0), c(0.0, 1.0));
    assert_eq!(r.entry(1, 0, 0, 1), c(-1.0, 0.0));
    assert_eq!(r.entry(1, 1, 1, 1), cis(0.4));
    assert_eq!(r.matrix[(1, 2)], c(0.0, 1.0));
}

#[test]
fn partial_trace_by_index_sums() {
    for r in samples() {
        let d = r.d;
        let phi = analysis::partial_trace_invariant(&r).unwrap().element.matrix;
        for j in 0..d {
            for l in 0..d {
                let direct: C64 = (0..d).map(|i| r.entry(i, j, i, l)).sum::<C64>() / d as f64;
                assert!((phi[(j, l)] - direct).norm() < 1e-13, "{}", r.label);
            }
        }
    }
}

#[test]
fn braid_representation_by_kronecker_products() {
    let words: [Vec<i64>; 3] = [vec![1, 2, -1], vec![2, 2, 1, -2, 1], vec![1, 3, -2, 3]];
    for r in samples().into_iter().filter(|r| r.d <= 2) {
        for w in &words {
            let n = 4;
            let bw = BraidWord::from_signed(n, w).unwrap();
            let mut direct = eye(r.d.pow(n as u32));
            for &x in w {
                let g = slot(&r.matrix, r.d, n, x.unsigned_abs() as usize - 1);
                direct *= if x > 0 { g } else { g.adjoint() };
            }
            assert!((braid::represent(&r, &bw).matrix - &direct).norm() < 1e-12);
            let tau = direct.trace() / direct.nrows() as f64;
            assert!((braid::character(&r, &bw) - tau).norm() < 1e-13);
        }
    }
}

#[test]
fn local_multiplication_matches_dense() {
    let mut g = random::rng(3);
    let (d, n) = (2usize, 4usize);
    let a = random::ginibre(d.pow(n as u32), &mut g);
    let gate = random::random_unitary(d * d, &mut g);
    for first in 0..n - 1 {
        let dense = &a * slot(&gate, d, n, first);
        assert!((tensor::mul_right_local(&a, &gate, d, n, first, 2) - dense).norm() < 1e-12);
    }
}

#[test]
fn relative_commutant_m_dimensions() {
    for r in samples() {
        let d = r.d;
        let one = kernel_dim(d, |x| r.matrix.adjoint() * x.kronecker(&eye(d)) * &r.matrix - eye(d).kronecker(x));
        assert_eq!(commutant::relative_commutant_m(&r, 1).unwrap().dim(), one, "{} n=1", r.label);

        let chain = slot(&r.matrix, d, 3, 1) * slot(&r.matrix, d, 3, 0);
        let two = kernel_dim(d * d, |x| chain.adjoint() * x.kronecker(&eye(d)) * &chain - eye(d).kronecker(x));
        assert_eq!(commutant::relative_commutant_m(&r, 2).unwrap().dim(), two, "{} n=2", r.label);
    }
}

#[test]
fn fixed_point_dimensions() {
    for r in samples() {
        let d = r.d;
        let one = kernel_dim(d, |x| &r.matrix * x.kronecker(&eye(d)) * r.matrix.adjoint() - x.kronecker(&eye(d)));
        assert_eq!(commutant::fixed_subalgebra(&r, 1).unwrap().dim(), one, "{} n=1", r.label);

        let chain = slot(&r.matrix, d, 3, 0) * slot(&r.matrix, d, 3, 1);
        let two = kernel_dim(d * d, |x| &chain * x.kronecker(&eye(d)) * chain.adjoint() - x.kronecker(&eye(d)));
        assert_eq!(commutant::fixed_subalgebra(&r, 2).unwrap().dim(), two, "{} n=2", r.label);
    }
}

#[test]
fn known_commutants() {
    let flip = rmatrix::make_flip(3).unwrap();
    assert!(commutant::relative_commutant_m(&flip, 1).unwrap().is_full());
    let trivial = rmatrix::make_trivial(3, cis(1.3)).unwrap();
    assert!(commutant::relative_commutant_m(&trivial, 1).unwrap().is_trivial());
    let r4 = rmatrix::make_r4(c(1.0, 0.0)).unwrap();
    let dims: Vec<usize> = (1..=3).map(|n| commutant::fixed_subalgebra(&r4, n).unwrap().dim()).collect();
    assert_eq!(dims, [2, 4, 8]);
}

#[test]
fn box_sum_on_mixed_vectors_is_the_flip() {
    let r = rmatrix::make_r3(cis(0.4), cis(-1.1), cis(0.9)).unwrap();
    let s = rmatrix::make_trivial(1, cis(2.0)).unwrap();
    let sum = rmatrix::box_sum(&r, &s).unwrap();
    let n = 3;
    let e = |k: usize| CMat::from_fn(n, 1, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) });
    for a in 0..n {
        for b in 0..n {
            let v = sum.matrix.clone() * e(a).kronecker(&e(b));
            let expect = match (a < 2, b < 2) {
                (true, true) => {
                    let local = r.matrix.column(a * 2 + b);
                    CMat::from_fn(n * n, 1, |i, _| {
                        let (x, y) = (i / n, i % n);
                        if x < 2 && y < 2 {
                            local[x * 2 + y]
                        } else {
                            c(0.0, 0.0)
                        }
                    })
                }
                (false, false) => e(a).kronecker(&e(b)) * cis(2.0),
                _ => e(b).kronecker(&e(a)),
            };
            assert!((v - expect).norm() < 1e-14, "({a},{b})");
        }
    }
}

#[test]
fn cabling_square_of_flip_is_flip() {
    for d in 2..=3 {
        let f = rmatrix::make_flip(d).unwrap();
        let cabled = rmatrix::cabling_power(&f, 2).unwrap();
        assert!((cabled.matrix - rmatrix::flip_matrix(d * d)).norm() < 1e-13);
    }
}

#[test]
fn thoma_on_flip() {
    // The flip represents permutations, so the character is d^(cycles - n).
    let spec = NormalFormSpec::parse("1:+,1:+,1:+").unwrap();
    let f = rmatrix::make_normal_form(&spec).unwrap();
    for perm in [[0, 1, 2], [1, 0, 2], [1, 2, 0]] {
        let ct = braid::cycle_type(&perm);
        let cycles: usize = ct.values().sum();
        let expect = 3f64.powi(cycles as i32 - 3);
        assert!((braid::thoma_character(&spec, &ct) - expect).abs() < 1e-14);
        assert!((braid::character(&f, &braid::permutation_word(&perm)).re - expect).abs() < 1e-13);
    }
}
