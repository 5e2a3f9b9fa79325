//! Oracles shared by the integration tests. Nothing here calls into the
//! library's algorithms; inputs and outputs are plain integers.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `(e, σ)` of each block, `B` at genus `g`.
pub fn block_es(name: char, g: i64) -> (i64, i64) {
    match name {
        'A' => (5, -1),
        'B' => (6 + 4 * g, -2),
        'C' => (7, -3),
        'D' => (8, -4),
        'F' => (10, -6),
        _ => panic!("no block {name}"),
    }
}

/// The two summand letters of family `k`.
pub fn family_blocks(k: u8) -> (char, Option<char>) {
    match k {
        1 => ('A', None),
        2 => ('C', None),
        3 => ('D', None),
        4 => ('F', None),
        5 => ('B', None),
        6 => ('A', Some('B')),
        7 => ('A', Some('C')),
        8 => ('A', Some('D')),
        9 => ('A', Some('F')),
        10 => ('B', Some('C')),
        11 => ('B', Some('D')),
        12 => ('B', Some('F')),
        13 => ('C', Some('D')),
        14 => ('C', Some('F')),
        15 => ('D', Some('F')),
        _ => panic!("no family {k}"),
    }
}

/// `(e, σ)` of a family member by adding block values.
pub fn family_es(k: u8, n: i64, m: i64, g: i64) -> (i64, i64) {
    let (a, b) = family_blocks(k);
    let (ea, sa) = block_es(a, g);
    let (eb, sb) = b.map(|b| block_es(b, g)).unwrap_or((0, 0));
    (n * ea + m * eb, n * sa + m * sb)
}

/// `(c1², χ_h)` from `(e, σ)`.
pub fn char_point(e: i64, sigma: i64) -> (i64, i64) {
    assert_eq!((e + sigma) % 4, 0, "e + sigma not divisible by 4");
    (2 * e + 3 * sigma, (e + sigma) / 4)
}

pub fn odd_primes_upto(n: u32) -> Vec<u32> {
    (3..=n)
        .filter(|&p| p % 2 == 1 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

/// Torsion of `Z_q ⊕ Z_p` in invariant-factor form for primes `p`, `q`.
pub fn zq_zp_torsion(p: u64, q: u64) -> Vec<u64> {
    if p == q {
        vec![p, p]
    } else {
        vec![p * q]
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i64(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors `d_k = D_k / D_{k-1}`, where `D_k` is the gcd of all
/// `k × k` minors, listed up to the rank.
pub fn invariant_factors_by_minors(a: &[Vec<i64>], rows: usize, cols: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut prev = 1i64;
    for k in 1..=rows.min(cols) {
        let mut g = 0i64;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                g = g.gcd(&det_i64(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

pub type BigMat = Vec<Vec<BigInt>>;

pub fn big(a: &[Vec<i64>]) -> BigMat {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn matmul(a: &BigMat, b: &BigMat) -> BigMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|t| &row[t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

/// Fraction-free Gaussian elimination.
pub fn det_big(m: &BigMat) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

pub fn is_unimodular(m: &BigMat) -> bool {
    det_big(m).abs().is_one()
}
