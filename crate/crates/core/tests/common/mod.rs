//! Reference computations that share no code with the library: dense
//! integer matrices, Gaussian elimination over ℚ or 𝔽_p, and a word-sorting
//! multiplication for the Grassmann algebra with `z`.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use peirce_lie::{Element, FieldSpec};

pub fn q() -> FieldSpec {
    FieldSpec::Rational
}

pub fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

/// Integer coefficients of an element whose coordinates are integral
/// (residues are returned as-is over 𝔽_p).
pub fn ints(x: &Element) -> Vec<i64> {
    x.coeffs().iter().map(|c| c.to_string().parse::<i64>().expect("integral coefficient")).collect()
}

pub fn elem(field: FieldSpec, v: &[i64]) -> Element {
    Element::from_vec(v.iter().map(|&c| field.from_i64(c)).collect())
}

/// Rank of integer rows over ℚ (`p = None`) or 𝔽_p.
pub fn oracle_rank(rows: &[Vec<i64>], p: Option<i64>) -> usize {
    match p {
        None => {
            let mut m: Vec<Vec<BigRational>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect();
            let cols = m.first().map_or(0, Vec::len);
            let mut rank = 0;
            for c in 0..cols {
                let Some(pr) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
                m.swap(rank, pr);
                for i in 0..m.len() {
                    if i != rank && !m[i][c].is_zero() {
                        let f = &m[i][c] / &m[rank][c];
                        let pivot = m[rank].clone();
                        for (x, y) in m[i].iter_mut().zip(&pivot) {
                            *x -= &f * y;
                        }
                    }
                }
                rank += 1;
            }
            rank
        }
        Some(p) => {
            let md = |x: i64| x.rem_euclid(p);
            let inv = |x: i64| {
                let mut r = 1i64;
                let (mut b, mut e) = (md(x), p - 2);
                while e > 0 {
                    if e & 1 == 1 {
                        r = r * b % p;
                    }
                    b = b * b % p;
                    e >>= 1;
                }
                r
            };
            let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| md(x)).collect()).collect();
            let cols = m.first().map_or(0, Vec::len);
            let mut rank = 0;
            for c in 0..cols {
                let Some(pr) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
                m.swap(rank, pr);
                let iv = inv(m[rank][c]);
                for i in 0..m.len() {
                    if i != rank && m[i][c] != 0 {
                        let f = m[i][c] * iv % p;
                        let pivot = m[rank].clone();
                        for (x, y) in m[i].iter_mut().zip(&pivot) {
                            *x = md(*x - f * y);
                        }
                    }
                }
                rank += 1;
            }
            rank
        }
    }
}

/// Dense n×n integer matrices, row-major.
pub fn mat_unit(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    m[i * n + j] = 1;
    m
}

pub fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += a[i * n + k] * b[k * n + j];
            }
        }
    }
    c
}

pub fn mat_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mat_commutator(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    mat_sub(&mat_mul(n, a, b), &mat_mul(n, b, a))
}

/// Rank of the span of all commutators of matrix units of M_n.
pub fn oracle_sl_rank(n: usize, p: Option<i64>) -> usize {
    let units: Vec<Vec<i64>> = (0..n).flat_map(|i| (0..n).map(move |j| mat_unit(n, i, j))).collect();
    let mut rows = Vec::new();
    for a in &units {
        for b in &units {
            rows.push(mat_commutator(n, a, b));
        }
    }
    oracle_rank(&rows, p)
}

/// A monomial of the Grassmann algebra with `z`: (power of z, generator word).
pub type GzMonomial = (u32, Vec<usize>);

/// Multiplies two normal-form monomials by concatenating and bubble
/// sorting, counting swaps; returns `None` for zero.
pub fn gz_mul(a: &GzMonomial, b: &GzMonomial) -> Option<(i64, GzMonomial)> {
    let zp = a.0 + b.0;
    if zp > 1 {
        return None;
    }
    let mut w: Vec<usize> = a.1.iter().chain(&b.1).copied().collect();
    let mut sign = 1i64;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    if zp == 1 && w.len() >= 3 {
        return None;
    }
    Some((sign, (zp, w)))
}

/// The basis of B_n listed directly from its description.
pub fn gz_basis(n: usize) -> Vec<GzMonomial> {
    fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            subsets(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in 0..=n {
        let mut s = Vec::new();
        subsets(n, k, 0, &mut Vec::new(), &mut s);
        out.extend(s.into_iter().map(|w| (0, w)));
    }
    for k in 0..=2 {
        let mut s = Vec::new();
        subsets(n, k, 0, &mut Vec::new(), &mut s);
        out.extend(s.into_iter().map(|w| (1, w)));
    }
    out
}
