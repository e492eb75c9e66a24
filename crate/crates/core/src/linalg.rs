//! Small exact linear algebra over `Q` and `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QMatrix = Vec<Vec<BigRational>>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn identity(n: usize) -> QMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect()
}

/// Gauss–Jordan inverse; `None` if singular.
pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.len();
    let mut a: QMatrix = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pv = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &pv;
            inv[col][j] = &inv[col][j] / &pv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - t;
                    let t = &f * &inv[col][j];
                    inv[r][j] = &inv[r][j] - t;
                }
            }
        }
    }
    Some(inv)
}

pub fn determinant(m: &QMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = q(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return q(0);
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in (col + 1)..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &pv;
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - t;
                }
            }
        }
    }
    det
}

/// Row vector times matrix.
pub fn vec_mat(v: &[BigRational], m: &QMatrix) -> Vec<BigRational> {
    let cols = m[0].len();
    (0..cols).map(|j| v.iter().zip(m.iter()).fold(q(0), |acc, (x, row)| acc + x * &row[j])).collect()
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn transpose(a: &QMatrix) -> QMatrix {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Row-style Hermite normal form basis of the `Z`-lattice spanned by
/// integer row vectors. Zero rows are dropped.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        // Euclid down column c among rows r..
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.len() {
                if !a[i][c].is_zero() && best.is_none_or(|b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in (r + 1)..a.len() {
                if !a[i][c].is_zero() {
                    let f = a[i][c].div_floor(&a[r][c]);
                    for j in 0..cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for j in 0..cols {
                    a[r][j] = -a[r][j].clone();
                }
            }
            for i in 0..r {
                let f = a[i][c].div_floor(&a[r][c]);
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

/// HNF basis of the lattice spanned by rational row vectors.
pub fn rational_hnf(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let d = lcm_denominators(rows.iter().flatten());
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| row.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect())
        .collect();
    hnf(&ints).into_iter().map(|row| row.into_iter().map(|x| BigRational::new(x, d.clone())).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        assert_eq!(determinant(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        let sing = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(inverse(&sing).is_none());
        assert_eq!(determinant(&sing), q(0));
    }

    #[test]
    fn hnf_spans_same_lattice() {
        let rows: Vec<Vec<BigInt>> =
            [[4, 6], [6, 9], [2, 2]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let h = hnf(&rows);
        assert_eq!(h.len(), 2);
        // determinant of the lattice: gcd of 2x2 minors = gcd(0, -4, -6) = 2
        let det = &h[0][0] * &h[1][1] - &h[0][1] * &h[1][0];
        assert_eq!(det.abs(), BigInt::from(2));
    }
}
