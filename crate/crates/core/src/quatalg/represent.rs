//! Finding one order element of large prescribed norm and trace.
//!
//! With `x = w + x1 i + x2 j + x3 k`, `a = -A` and `b = -B`, the conditions
//! become `A x1^2 + B (x2^2 + A x3^2) = n - t^2/4`. After clearing the order
//! denominator `D`, the outer coordinate is walked outward from zero and the
//! remaining binary form is solved by Cornacchia on the large prime part.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::enumerate::OrderPoint;
use super::{MaximalOrder, Quaternion};
use crate::arith;

const TRIAL_LIMIT: u32 = 2000;
const SMOOTH_LIMIT: u64 = 100_000_000;
const MAX_OUTER_STEPS: u64 = 200_000;

type Residue = [u64; 4];

struct Classes {
    d: BigInt,
    set: BTreeSet<Residue>,
    outer: BTreeSet<(u64, u64)>,
}

fn residue(x: &BigInt, d: &BigInt) -> u64 {
    x.mod_floor(d).to_u64().expect("small modulus")
}

/// Residues mod `D` of `D * O`, as a subgroup of `(Z/D)^4`.
fn classes(order: &MaximalOrder) -> Classes {
    let mut d = crate::linalg::lcm_denominators(order.basis().iter().flatten());
    if d.is_odd() {
        d *= 2;
    }
    let dq = BigRational::from_integer(d.clone());
    let gens: Vec<Residue> =
        order.basis().iter().map(|row| std::array::from_fn(|c| residue(&(&row[c] * &dq).to_integer(), &d))).collect();
    let du = d.to_u64().expect("small modulus");
    let mut set = BTreeSet::from([[0u64; 4]]);
    let mut frontier = vec![[0u64; 4]];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y: Residue = std::array::from_fn(|c| (x[c] + g[c]) % du);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    let outer = set.iter().map(|r| (r[0], r[1])).collect();
    Classes { d, set, outer }
}

/// All `(v, w)` with `v^2 + A w^2 = s` for a small `s`.
fn small_reps(s: u64, a: u64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut w = 0u64;
    while a * w * w <= s {
        let r = s - a * w * w;
        let v = r.isqrt();
        if v * v == r {
            out.push((v as i64, w as i64));
        }
        w += 1;
    }
    out
}

/// Some representations of `m` by `v^2 + A w^2`, closed under signs.
fn binary_reps(m: &BigInt, a: u64) -> Vec<(BigInt, BigInt)> {
    if m.is_zero() {
        return vec![(BigInt::zero(), BigInt::zero())];
    }
    let mu = m.magnitude();
    let (_, cofactor) = arith::trial_factor(mu, TRIAL_LIMIT);
    let smooth = mu / &cofactor;
    let Some(smooth) = smooth.to_u64().filter(|&s| s <= SMOOTH_LIMIT) else { return Vec::new() };
    let big: (BigInt, BigInt) = if cofactor.is_one() {
        (BigInt::one(), BigInt::zero())
    } else if arith::is_probable_prime(&cofactor) {
        match arith::cornacchia(&BigUint::from(a), &cofactor) {
            Some((x, y)) => (x.into(), y.into()),
            None => return Vec::new(),
        }
    } else {
        return Vec::new();
    };
    let ab = BigInt::from(a);
    let mut out = BTreeSet::new();
    for (v1, w1) in small_reps(smooth, a) {
        for (sv, sw) in [(1i64, 1i64), (1, -1)] {
            let (v1, w1) = (BigInt::from(sv * v1), BigInt::from(sw * w1));
            let x2 = &v1 * &big.0 - &ab * &w1 * &big.1;
            let x3 = &v1 * &big.1 + &w1 * &big.0;
            for (s2, s3) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.insert((&x2 * s2, &x3 * s3));
            }
        }
    }
    out.into_iter().collect()
}

/// Outer coordinate `r` walked over; the other two satisfy
/// `g (x_s^2 + d x_t^2) = M - c x_r^2`.
struct Walk {
    r: usize,
    c: BigInt,
    s: usize,
    t: usize,
    g: BigInt,
    d: u64,
}

fn walks(a: u64, b: u64) -> Vec<Walk> {
    let (ab, bb) = (BigInt::from(a), BigInt::from(b));
    let mut out = vec![
        Walk { r: 1, c: ab.clone(), s: 2, t: 3, g: bb.clone(), d: a },
        Walk { r: 2, c: bb.clone(), s: 1, t: 3, g: ab.clone(), d: b },
    ];
    if a == 1 {
        out.push(Walk { r: 3, c: ab * &bb, s: 1, t: 2, g: BigInt::one(), d: b });
    }
    out
}

/// One order element with `N(x) = n` and `Tr(x) = t`, found
/// deterministically; `None` if every walk runs out of budget.
pub fn represent_norm_trace(order: &MaximalOrder, n: &BigInt, t: &BigInt) -> Option<OrderPoint> {
    let alg = order.algebra();
    let (a, b) = (alg.a(), alg.b());
    if !a.is_integer() || !b.is_integer() {
        return None;
    }
    let a_pos = (-a.to_integer()).to_u64()?;
    let b_pos = (-b.to_integer()).to_u64()?;
    let cls = classes(order);
    let d = &cls.d;
    let w0: BigInt = d * t / 2;
    let m_total: BigInt = d * d * n - &w0 * &w0;
    if m_total.is_negative() {
        return None;
    }
    let w0r = residue(&w0, d);
    for walk in walks(a_pos, b_pos) {
        // M = c * square makes every M - c u^2 factor as a difference of squares
        if (&m_total % &walk.c).is_zero() && arith::is_square(&(&m_total / &walk.c)).is_some() {
            continue;
        }
        if let Some(pt) = run_walk(order, &cls, &walk, n, t, &w0, w0r, &m_total) {
            return Some(pt);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn run_walk(
    order: &MaximalOrder,
    cls: &Classes,
    walk: &Walk,
    n: &BigInt,
    t: &BigInt,
    w0: &BigInt,
    w0r: u64,
    m_total: &BigInt,
) -> Option<OrderPoint> {
    let d = &cls.d;
    let target = (BigRational::from_integer(n.clone()), BigRational::from_integer(t.clone()));
    let mut u = BigInt::zero();
    for _ in 0..MAX_OUTER_STEPS {
        let rest = m_total - &walk.c * &u * &u;
        if rest.is_negative() {
            return None;
        }
        let ur = residue(&u, d);
        let outer_ok = walk.r != 1 || cls.outer.contains(&(w0r, ur));
        if outer_ok && (&rest % &walk.g).is_zero() {
            for (xs, xt) in binary_reps(&(&rest / &walk.g), walk.d) {
                let mut big = [w0.clone(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
                big[walk.r] = u.clone();
                big[walk.s] = xs;
                big[walk.t] = xt;
                let r: Residue = std::array::from_fn(|c| residue(&big[c], d));
                if !cls.set.contains(&r) {
                    continue;
                }
                let x = Quaternion::new(order.algebra(), big.map(|x| BigRational::new(x, d.clone())));
                if x.norm_trace() != target {
                    continue;
                }
                let oc = order.order_coords(&x);
                if oc.iter().all(|v| v.is_integer()) {
                    let coords = oc.map(|v| v.to_integer());
                    return Some(OrderPoint { coords, element: x });
                }
            }
        }
        // 0, 1, -1, 2, -2, ...
        u = if u.is_positive() { -u } else { -u + 1 };
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::{algebra_and_order, enumerate_norm_trace};
    use super::*;

    #[test]
    fn small_norms_are_enumerated_points() {
        for p in [2u64, 3, 5, 7, 13] {
            let (_, order) = algebra_and_order(p).unwrap();
            for n in [3i64, 9, 25, 49, 81] {
                for t in [0i64, 1, -2, 4] {
                    let all = enumerate_norm_trace(&order, &BigInt::from(n), Some(&BigInt::from(t)));
                    if let Some(pt) = represent_norm_trace(&order, &BigInt::from(n), &BigInt::from(t)) {
                        assert!(all.contains(&pt), "p = {p}, n = {n}, t = {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn large_norm() {
        for p in [2u64, 3, 5, 13] {
            let (_, order) = algebra_and_order(p).unwrap();
            let ell = if p == 2 { 3i64 } else { 2 };
            // disc = l^116 (c^2 - 4 l^4) must be a non-square at p for x^2 - tx + n
            // to embed in the ramified order
            let c = (1..)
                .step_by(2)
                .find(|&c: &i64| {
                    let d0 = c * c - 4 * ell.pow(4);
                    if p == 2 {
                        d0.rem_euclid(8) != 1
                    } else {
                        arith::legendre_u64(d0.rem_euclid(p as i64) as u64, p) == -1
                    }
                })
                .unwrap();
            let n = BigInt::from(ell).pow(120u32);
            let t = -BigInt::from(ell).pow(58u32) * c;
            let pt = represent_norm_trace(&order, &n, &t).unwrap_or_else(|| panic!("no representation at p = {p}"));
            assert!(order.contains(&pt.element));
            let (nn, tt) = pt.element.norm_trace();
            assert_eq!(nn, BigRational::from_integer(n));
            assert_eq!(tt, BigRational::from_integer(t));
        }
    }
}
