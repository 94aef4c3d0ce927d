//! Exact checks of the root enumeration and the structure constants.

use std::collections::HashSet;

use weinorman::{LieAlgebra, RootSystem};

const TYPES: &[&str] = &[
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D3", "D4", "G2", "F4",
];

/// Highest-root coefficients, hard-coded from the standard tables.
fn highest_root(family: char, n: usize) -> Vec<i64> {
    match (family, n) {
        ('A', n) => vec![1; n],
        ('B', n) => std::iter::once(1).chain(std::iter::repeat(2).take(n - 1)).collect(),
        ('C', n) => std::iter::repeat(2).take(n - 1).chain(std::iter::once(1)).collect(),
        ('D', n) => {
            let mut v = vec![2; n];
            v[0] = 1;
            v[n - 2] = 1;
            v[n - 1] = 1;
            v
        }
        ('E', 6) => vec![1, 2, 2, 3, 2, 1],
        ('E', 7) => vec![2, 2, 3, 4, 3, 2, 1],
        ('E', 8) => vec![2, 3, 4, 6, 5, 4, 3, 2],
        ('F', 4) => vec![2, 3, 4, 2],
        ('G', 2) => vec![3, 2],
        _ => unreachable!(),
    }
}

/// Brute force: lattice points in the box under θ with a root's length that
/// descend to a simple root by height-lowering simple reflections.
fn brute_force_positive(rs: &RootSystem, theta: &[i64]) -> HashSet<Vec<i64>> {
    let n = theta.len();
    let lengths: HashSet<i64> = (0..n).map(|i| rs.gram()[i][i]).collect();
    fn reduces(rs: &RootSystem, v: &[i64], lengths: &HashSet<i64>) -> bool {
        if v.iter().any(|&c| c < 0) || !lengths.contains(&rs.inner(v, v)) {
            return false;
        }
        if v.iter().sum::<i64>() == 1 {
            return true;
        }
        (0..v.len()).any(|i| {
            let k = rs.pairing(v, i);
            if k <= 0 {
                return false;
            }
            let mut w = v.to_vec();
            w[i] -= k;
            reduces(rs, &w, lengths)
        })
    }
    let mut out = HashSet::new();
    let mut v = vec![0i64; n];
    loop {
        let mut i = 0;
        while i < n {
            if v[i] < theta[i] {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        if reduces(rs, &v, &lengths) {
            out.insert(v.clone());
        }
    }
    out
}

#[test]
fn positive_root_counts_match_brute_force() {
    let cases: Vec<(char, usize, usize)> = vec![
        ('A', 1, 1), ('A', 4, 10), ('A', 7, 28), ('B', 2, 4), ('B', 5, 25), ('C', 3, 9),
        ('C', 6, 36), ('D', 4, 12), ('D', 6, 30), ('G', 2, 6), ('F', 4, 24), ('E', 6, 36),
        ('E', 7, 63), ('E', 8, 120),
    ];
    for (f, n, count) in cases {
        let rs = RootSystem::from_spec(&format!("{f}{n}")).unwrap();
        assert_eq!(rs.positive_roots().len(), count, "{f}{n}");
        let enumerated: HashSet<Vec<i64>> =
            rs.positive_roots().iter().map(|r| r.coords.clone()).collect();
        let theta = highest_root(f, n);
        assert_eq!(rs.highest_root(0).coords, theta, "{f}{n}");
        if count <= 63 {
            assert_eq!(brute_force_positive(&rs, &theta), enumerated, "{f}{n}");
        }
    }
}

fn jacobi_exact(alg: &LieAlgebra, sample_stride: usize) {
    let d = alg.dim();
    let unit = |i: usize| {
        let mut v = vec![0i64; d];
        v[i] = 1;
        v
    };
    for i in (0..d).step_by(sample_stride) {
        for j in 0..d {
            let ij = alg.bracket_int(&unit(i), &unit(j));
            let ji = alg.bracket_int(&unit(j), &unit(i));
            assert!(ij.iter().zip(&ji).all(|(a, b)| a + b == 0), "antisymmetry {i},{j}");
            for k in j..d {
                let a = alg.bracket_int(&ij, &unit(k));
                let jk = alg.bracket_int(&unit(j), &unit(k));
                let b = alg.bracket_int(&jk, &unit(i));
                let ki = alg.bracket_int(&unit(k), &unit(i));
                let c = alg.bracket_int(&ki, &unit(j));
                for m in 0..d {
                    assert_eq!(a[m] + b[m] + c[m], 0, "Jacobi fails on ({i},{j},{k})");
                }
            }
        }
    }
}

#[test]
fn jacobi_and_antisymmetry_exact() {
    for t in TYPES {
        jacobi_exact(&LieAlgebra::from_spec(t).unwrap(), 1);
    }
}

#[test]
fn chevalley_integrality() {
    for t in TYPES.iter().chain(["E6"].iter()) {
        let alg = LieAlgebra::from_spec(t).unwrap();
        let rs = alg.root_system();
        for a in rs.roots() {
            for b in rs.roots() {
                let sum: Vec<i64> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
                if !rs.is_root(&sum) {
                    continue;
                }
                // p: largest k with b - k a a root, counted independently here
                let mut p = 0;
                while rs.is_root(
                    &b.coords.iter().zip(&a.coords).map(|(y, x)| y - (p + 1) * x).collect::<Vec<_>>(),
                ) {
                    p += 1;
                }
                let i = alg.basis_index_of_root(&a.coords).unwrap();
                let j = alg.basis_index_of_root(&b.coords).unwrap();
                let k = alg.basis_index_of_root(&sum).unwrap();
                let s = alg.structure(i, j);
                assert_eq!(s.len(), 1);
                assert_eq!(s[0].0, k);
                assert_eq!(s[0].1.abs(), p + 1, "{t}: {:?} {:?}", a.coords, b.coords);
            }
        }
    }
}

#[test]
fn jacobi_e6_sample() {
    jacobi_exact(&LieAlgebra::from_spec("E6").unwrap(), 7);
}

#[test]
fn jacobi_products_and_center() {
    jacobi_exact(&LieAlgebra::from_spec("A2xB2+T1").unwrap(), 1);
}
