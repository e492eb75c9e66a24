//! Exact enumeration of order elements with prescribed norm and trace.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{MaximalOrder, Quaternion};
use crate::linalg::{self, QMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPoint {
    pub coords: [BigInt; 4],
    pub element: Quaternion,
}

fn qi(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// `Q(y) = sum_i d_i (y_i + sum_{j>i} mu_ij y_j)^2`.
struct Ldl {
    d: Vec<BigRational>,
    mu: QMatrix,
}

fn ldl(b: &QMatrix) -> Ldl {
    let m = b.len();
    let mut a = b.clone();
    let mut d = Vec::with_capacity(m);
    let mut mu = vec![vec![BigRational::zero(); m]; m];
    for i in 0..m {
        let di = a[i][i].clone();
        assert!(di.is_positive(), "form must be positive definite");
        for j in (i + 1)..m {
            mu[i][j] = &a[i][j] / &di;
        }
        for r in (i + 1)..m {
            for s in (i + 1)..m {
                let t = &di * &mu[i][r] * &mu[i][s];
                a[r][s] -= t;
            }
        }
        d.push(di);
    }
    Ldl { d, mu }
}

fn floor_sqrt_rational(x: &BigRational) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    x.floor().to_integer().sqrt()
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &n * &n == *x.numer() && &d * &d == *x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// All integer `u` with `(u - center)^T B (u - center) == target`.
fn enumerate_ellipsoid(b: &QMatrix, center: &[BigRational], target: &BigRational) -> Vec<Vec<BigInt>> {
    let m = b.len();
    let mut out = Vec::new();
    if target.is_negative() {
        return out;
    }
    let f = ldl(b);
    let mut y = vec![BigRational::zero(); m];
    let mut u = vec![BigInt::zero(); m];
    descend(&f, center, m - 1, target.clone(), &mut y, &mut u, &mut out);
    out
}

fn descend(
    f: &Ldl,
    center: &[BigRational],
    i: usize,
    rem: BigRational,
    y: &mut [BigRational],
    u: &mut [BigInt],
    out: &mut Vec<Vec<BigInt>>,
) {
    let m = y.len();
    let s = ((i + 1)..m).fold(BigRational::zero(), |acc, j| acc + &f.mu[i][j] * &y[j]);
    // the coordinate term is d_i (u_i - c)^2 with c = center_i - s
    let c = &center[i] - &s;
    if i == 0 {
        let Some(root) = rational_sqrt(&(&rem / &f.d[0])) else { return };
        let mut sols = vec![&c - &root];
        if !root.is_zero() {
            sols.push(&c + &root);
        }
        for v in sols {
            if v.is_integer() {
                u[0] = v.to_integer();
                out.push(u.to_vec());
            }
        }
        return;
    }
    let w = floor_sqrt_rational(&(&rem / &f.d[i])) + BigInt::one();
    let lo = c.floor().to_integer() - &w;
    let hi = c.ceil().to_integer() + &w;
    let mut v = lo;
    while v <= hi {
        let yi = qi(&v) - &center[i];
        let diff = &yi + &s;
        let term = &f.d[i] * &diff * &diff;
        if term <= rem {
            y[i] = yi;
            u[i] = v.clone();
            descend(f, center, i - 1, &rem - &term, y, u, out);
        }
        v += 1;
    }
}

/// Unimodular column operations taking `tau` to `(g, 0, ..., 0)` with
/// `g >= 0`. Returns `g` and the transformed unit columns.
fn column_reduce(tau: &[BigInt]) -> (BigInt, Vec<Vec<BigInt>>) {
    let m = tau.len();
    let mut t = tau.to_vec();
    let mut cols: Vec<Vec<BigInt>> =
        (0..m).map(|r| (0..m).map(|s| if r == s { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    loop {
        let nz: Vec<usize> = (0..m).filter(|&j| !t[j].is_zero()).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&j| t[j].abs()).unwrap();
        for &j in &nz {
            if j != piv {
                let f = t[j].div_floor(&t[piv]);
                let tp = t[piv].clone();
                t[j] -= &f * &tp;
                let cp = cols[piv].clone();
                for (x, y) in cols[j].iter_mut().zip(cp.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    if let Some(j) = (0..m).find(|&j| !t[j].is_zero()) {
        t.swap(0, j);
        cols.swap(0, j);
    }
    if t[0].is_negative() {
        t[0] = -t[0].clone();
        cols[0] = cols[0].iter().map(|x| -x).collect();
    }
    (t[0].clone(), cols)
}

fn dot(x: &[BigRational], y: &[BigRational]) -> BigRational {
    x.iter().zip(y).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

/// Every order element with reduced norm `n` and (if given) reduced trace
/// `t`, sorted by order-basis coordinates.
pub fn enumerate_norm_trace(order: &MaximalOrder, n: &BigInt, t: Option<&BigInt>) -> Vec<OrderPoint> {
    if !n.is_positive() {
        return Vec::new();
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let a: QMatrix = order.gram().iter().map(|r| r.iter().map(|x| qi(x) * &half).collect()).collect();
    let target = qi(n);
    let mut coords: Vec<[BigInt; 4]> = match t {
        None => enumerate_ellipsoid(
            &a,
            &[BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()],
            &target,
        )
        .into_iter()
        .map(|v| [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
        .collect(),
        Some(t) => {
            let tau = order.trace_vector();
            let (g, cols) = column_reduce(&tau);
            if g.is_zero() || !(t % &g).is_zero() {
                return Vec::new();
            }
            let x0: Vec<BigInt> = cols[0].iter().map(|x| x * (t / &g)).collect();
            let x0q: Vec<BigRational> = x0.iter().map(qi).collect();
            let k: QMatrix = cols[1..].iter().map(|c| c.iter().map(qi).collect()).collect();
            // Q(x0 + K^T u) = u^T B u + 2 h.u + Q(x0)
            let ak = linalg::mat_mul(&k, &a);
            let b = linalg::mat_mul(&ak, &linalg::transpose(&k));
            let h = linalg::vec_mat(&x0q, &linalg::transpose(&ak));
            let binv = linalg::inverse(&b).expect("restricted form is definite");
            let center: Vec<BigRational> = linalg::vec_mat(&h, &binv).into_iter().map(|x| -x).collect();
            let q0 = dot(&linalg::vec_mat(&x0q, &a), &x0q);
            let shift = dot(&linalg::vec_mat(&center, &b), &center);
            let rem = &target - &q0 + shift;
            enumerate_ellipsoid(&b, &center, &rem)
                .into_iter()
                .map(|u| std::array::from_fn(|r| (0..3).fold(x0[r].clone(), |acc, s| acc + &u[s] * &cols[s + 1][r])))
                .collect()
        }
    };
    coords.sort();
    coords
        .into_iter()
        .map(|c| {
            let element = order.element(&c);
            OrderPoint { coords: c, element }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::algebra_and_order;
    use super::*;

    /// Independent oracle: scan the box `|c_r| <= sqrt(n * A^{-1}_rr)`.
    fn box_scan(order: &MaximalOrder, n: i64, t: Option<i64>) -> Vec<[BigInt; 4]> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let a: QMatrix = order.gram().iter().map(|r| r.iter().map(|x| qi(x) * &half).collect()).collect();
        let ainv = linalg::inverse(&a).unwrap();
        let bounds: Vec<i64> = (0..4)
            .map(|r| {
                let v = &ainv[r][r] * BigRational::from_integer(BigInt::from(n));
                let b = v.floor().to_integer().sqrt();
                i64::try_from(b).unwrap() + 1
            })
            .collect();
        let mut out = Vec::new();
        for c0 in -bounds[0]..=bounds[0] {
            for c1 in -bounds[1]..=bounds[1] {
                for c2 in -bounds[2]..=bounds[2] {
                    for c3 in -bounds[3]..=bounds[3] {
                        let c = [c0, c1, c2, c3].map(BigInt::from);
                        let (nn, tt) = order.element(&c).norm_trace();
                        if nn == BigRational::from_integer(BigInt::from(n))
                            && t.is_none_or(|t| tt == BigRational::from_integer(BigInt::from(t)))
                        {
                            out.push(c);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn coords(v: &[OrderPoint]) -> Vec<[BigInt; 4]> {
        v.iter().map(|p| p.coords.clone()).collect()
    }

    #[test]
    fn hurwitz_counts() {
        let (_, order) = algebra_and_order(2).unwrap();
        assert_eq!(enumerate_norm_trace(&order, &BigInt::from(1), None).len(), 24);
        assert_eq!(enumerate_norm_trace(&order, &BigInt::from(1), Some(&BigInt::from(-1))).len(), 8);
        assert_eq!(enumerate_norm_trace(&order, &BigInt::from(3), None).len(), 96);
        assert_eq!(enumerate_norm_trace(&order, &BigInt::from(1), Some(&BigInt::from(0))).len(), 6);
        assert!(enumerate_norm_trace(&order, &BigInt::from(1), Some(&BigInt::from(3))).is_empty());
    }

    #[test]
    fn agrees_with_box_scan() {
        for p in [2u64, 3, 5, 7, 13] {
            let (_, order) = algebra_and_order(p).unwrap();
            for n in 1..=10i64 {
                let fast = enumerate_norm_trace(&order, &BigInt::from(n), None);
                assert_eq!(coords(&fast), box_scan(&order, n, None), "p = {p}, n = {n}");
                for t in -3..=3i64 {
                    let fast = enumerate_norm_trace(&order, &BigInt::from(n), Some(&BigInt::from(t)));
                    assert_eq!(coords(&fast), box_scan(&order, n, Some(t)), "p = {p}, n = {n}, t = {t}");
                }
            }
        }
    }

    #[test]
    fn cayley_hamilton() {
        let (alg, order) = algebra_and_order(7).unwrap();
        let found = enumerate_norm_trace(&order, &BigInt::from(8), Some(&BigInt::from(2)));
        assert!(!found.is_empty());
        for pt in found {
            let y = &pt.element;
            let lhs = &(&y.pow(2) - &y.scale(&BigRational::from_integer(BigInt::from(2))))
                + &Quaternion::scalar(&alg, BigRational::from_integer(BigInt::from(8)));
            assert!(lhs.is_zero());
        }
    }
}
