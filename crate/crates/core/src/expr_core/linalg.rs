use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::Field;
use super::rational::{common_denominator, Rational};

pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref<F: Field>(m: &[Vec<F>]) -> (Matrix<F>, Vec<usize>) {
    let mut a: Matrix<F> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = a[r][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel, one vector per free column.
pub fn nullspace<F: Field>(m: &[Vec<F>], cols: usize, zero: &F) -> Vec<Vec<F>> {
    let (a, pivots) = rref(m);
    let one = zero.one_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = b`; `None` when inconsistent. Free variables of the particular solution are zero.
pub fn solve_affine<F: Field>(m: &[Vec<F>], b: &[F], cols: usize, zero: &F) -> Option<Vec<F>> {
    let aug: Matrix<F> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (a, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![zero.clone(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = a[r][cols].clone();
    }
    Some(x)
}

/// Determinant by Gaussian elimination over a field.
pub fn det<F: Field>(m: &[Vec<F>], zero: &F) -> F {
    let n = m.len();
    let mut a: Matrix<F> = m.to_vec();
    let mut d = zero.one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return zero.clone();
        };
        if p != c {
            a.swap(p, c);
            d = d.neg();
        }
        d = d.mul(&a[c][c]);
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let t = a[c][j].mul(&f);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    d
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>], zero: &F) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(zero.clone(), |acc, (x, brow)| acc.add(&x.mul(&brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &[Vec<F>], v: &[F], zero: &F) -> Vec<F> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(zero.clone(), |acc, (x, y)| acc.add(&x.mul(y))))
        .collect()
}

pub fn vec_mat<F: Field>(v: &[F], a: &[Vec<F>], zero: &F) -> Vec<F> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| v.iter().zip(a).fold(zero.clone(), |acc, (x, row)| acc.add(&x.mul(&row[j]))))
        .collect()
}

fn integer_rows(m: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = common_denominator(row.iter());
            row.iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) elimination on the row-scaled integer matrix; returns the rank and
/// the last nonzero leading minor.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> (usize, BigInt, bool) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut negated = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            negated = !negated;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero());
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, prev, negated)
}

/// Exact rank of a rational matrix by fraction-free elimination.
pub fn rational_rank(m: &[Vec<Rational>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    bareiss(integer_rows(m)).0
}

/// Exact determinant of a square rational matrix by fraction-free elimination.
pub fn rational_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let scale = m
        .iter()
        .fold(BigInt::one(), |acc, row| acc * common_denominator(row.iter()));
    let (r, last, negated) = bareiss(integer_rows(m));
    if r < n {
        return Rational::zero();
    }
    let d = Rational::new(last, scale);
    if negated {
        -d
    } else {
        d
    }
}
