//! Definite rational quaternion algebras ramified at `{p, inf}`, explicit
//! maximal orders, and the norm form machinery built on them.

mod enumerate;
mod represent;

pub use enumerate::{enumerate_norm_trace, OrderPoint};
pub use represent::represent_norm_trace;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::{self, q, qr, QMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    a: BigRational,
    b: BigRational,
    p: u64,
}

impl QuaternionAlgebra {
    /// `i^2 = a`, `j^2 = b`, `ij = -ji = k`. Rejects anything not ramified
    /// exactly at `{p, inf}`.
    pub fn new(a: BigRational, b: BigRational, p: u64) -> Result<Self> {
        if !a.is_negative() || !b.is_negative() {
            return Err(Error::InvalidParameter("a and b must be negative (definite algebra)".into()));
        }
        let alg = QuaternionAlgebra { a, b, p };
        let ram = alg.ramified_primes();
        if ram != vec![p] {
            return Err(Error::InvalidParameter(format!(
                "algebra ({}, {}) is ramified at {:?}, expected [{p}]",
                alg.a, alg.b, ram
            )));
        }
        Ok(alg)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Finite primes where the Hilbert symbol `(a, b)_v` is `-1`.
    pub fn ramified_primes(&self) -> Vec<u64> {
        // same square classes as the integers a*den^2, b*den^2
        let ai = self.a.numer() * self.a.denom();
        let bi = self.b.numer() * self.b.denom();
        let mut candidates = vec![2u64];
        for n in [&ai, &bi] {
            let (factors, rest) = arith::trial_factor(&n.magnitude().clone(), 1 << 16);
            assert!(rest.is_one(), "algebra parameters must be 16-bit smooth");
            candidates.extend(factors.iter().map(|&(f, _)| f as u64));
        }
        candidates.sort_unstable();
        candidates.dedup();
        candidates.into_iter().filter(|&v| hilbert_symbol(&ai, &bi, v) == -1).collect()
    }
}

fn split_valuation(n: &BigInt, v: u64) -> (u32, BigInt) {
    let vv = BigInt::from(v);
    let mut n = n.clone();
    let mut e = 0;
    while (&n % &vv).is_zero() {
        n /= &vv;
        e += 1;
    }
    (e, n)
}

/// Hilbert symbol `(a, b)_v` for nonzero integers at a finite prime `v`.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, v: u64) -> i32 {
    let (alpha, u) = split_valuation(a, v);
    let (beta, w) = split_valuation(b, v);
    if v == 2 {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u64().unwrap();
        let (u8_, w8) = (m8(&u), m8(&w));
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u8_) * eps(w8) + alpha as u64 * omega(w8) + beta as u64 * omega(u8_);
        if e.is_multiple_of(2) {
            1
        } else {
            -1
        }
    } else {
        let leg = |x: &BigInt| arith::legendre_u64(x.mod_floor(&BigInt::from(v)).to_u64().unwrap(), v);
        let mut s = 1;
        if (alpha as u64 * beta as u64) % 2 == 1 && ((v - 1) / 2) % 2 == 1 {
            s = -s;
        }
        if beta % 2 == 1 {
            s *= leg(&u);
        }
        if alpha % 2 == 1 {
            s *= leg(&w);
        }
        s
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Quaternion {
    alg: Arc<QuaternionAlgebra>,
    c: [BigRational; 4],
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

/// `1/2 - i + 3/2k`, omitting zero terms.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, unit) in self.c.iter().zip(["", "i", "j", "k"]) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (mag.is_one(), unit.is_empty()) {
                (true, false) => unit.to_string(),
                _ => format!("{mag}{unit}"),
            };
            if out.is_empty() {
                out = if c.is_negative() { format!("-{body}") } else { body };
            } else {
                out += if c.is_negative() { " - " } else { " + " };
                out += &body;
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Quaternion {
    pub fn new(alg: &Arc<QuaternionAlgebra>, c: [BigRational; 4]) -> Self {
        Quaternion { alg: alg.clone(), c }
    }

    pub fn from_ints(alg: &Arc<QuaternionAlgebra>, c: [i64; 4]) -> Self {
        Quaternion::new(alg, c.map(q))
    }

    pub fn scalar(alg: &Arc<QuaternionAlgebra>, s: BigRational) -> Self {
        Quaternion::new(alg, [s, q(0), q(0), q(0)])
    }

    pub fn one(alg: &Arc<QuaternionAlgebra>) -> Self {
        Quaternion::from_ints(alg, [1, 0, 0, 0])
    }

    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.alg
    }

    /// Coordinates in the basis `1, i, j, k`.
    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// `N(x) = w^2 - a x^2 - b y^2 + ab z^2`.
    pub fn reduced_norm(&self) -> BigRational {
        let (a, b) = (&self.alg.a, &self.alg.b);
        let [w, x, y, z] = &self.c;
        w * w - a * x * x - b * y * y + a * b * z * z
    }

    pub fn reduced_trace(&self) -> BigRational {
        &self.c[0] * q(2)
    }

    pub fn norm_trace(&self) -> (BigRational, BigRational) {
        (self.reduced_norm(), self.reduced_trace())
    }

    pub fn conjugate(&self) -> Quaternion {
        let [w, x, y, z] = &self.c;
        Quaternion::new(&self.alg, [w.clone(), -x, -y, -z])
    }

    pub fn scale(&self, s: &BigRational) -> Quaternion {
        Quaternion::new(&self.alg, self.c.clone().map(|x| x * s))
    }

    pub fn inverse(&self) -> Option<Quaternion> {
        let n = self.reduced_norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conjugate().scale(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> Quaternion {
        let mut acc = Quaternion::one(&self.alg);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `x^2 + alpha x + 1 == 0` exactly.
    pub fn satisfies_minpoly(&self, alpha: &BigRational) -> bool {
        let lhs = &(&self.pow(2) + &self.scale(alpha)) + &Quaternion::one(&self.alg);
        lhs.is_zero()
    }
}

impl<'a> Mul<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        let (a, b) = (&self.alg.a, &self.alg.b);
        let [x0, x1, x2, x3] = &self.c;
        let [y0, y1, y2, y3] = &o.c;
        let ab = a * b;
        let c0 = x0 * y0 + a * x1 * y1 + b * x2 * y2 - &ab * x3 * y3;
        let c1 = x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2;
        let c2 = x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1;
        let c3 = x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1;
        Quaternion::new(&self.alg, [c0, c1, c2, c3])
    }
}

impl<'a> Add<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.alg, std::array::from_fn(|r| &self.c[r] + &o.c[r]))
    }
}

impl<'a> Sub<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.alg, std::array::from_fn(|r| &self.c[r] - &o.c[r]))
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(&self.alg, self.c.clone().map(|x| -x))
    }
}

#[derive(Clone, Debug)]
pub struct MaximalOrder {
    alg: Arc<QuaternionAlgebra>,
    basis: QMatrix,
    inv_basis: QMatrix,
    gram: Vec<Vec<BigInt>>,
}

fn trace_pairing(x: &Quaternion, y: &Quaternion) -> BigRational {
    (x * &y.conjugate()).reduced_trace()
}

fn is_integral(x: &BigRational) -> bool {
    x.is_integer()
}

impl MaximalOrder {
    /// Validates ring closure, integrality and `det(gram) = p^2`.
    pub fn new(alg: &Arc<QuaternionAlgebra>, basis: QMatrix) -> Result<Self> {
        let inv_basis =
            linalg::inverse(&basis).ok_or_else(|| Error::InvalidParameter("order basis is singular".into()))?;
        let elems: Vec<Quaternion> = basis
            .iter()
            .map(|r| Quaternion::new(alg, [r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()]))
            .collect();
        let mut gram = vec![vec![BigInt::zero(); 4]; 4];
        for r in 0..4 {
            for s in 0..4 {
                let t = trace_pairing(&elems[r], &elems[s]);
                if !is_integral(&t) {
                    return Err(Error::InvalidParameter("trace form is not integral".into()));
                }
                gram[r][s] = t.to_integer();
            }
        }
        let order = MaximalOrder { alg: alg.clone(), basis, inv_basis, gram };
        if !order.contains(&Quaternion::one(alg)) {
            return Err(Error::InvalidParameter("order does not contain 1".into()));
        }
        for x in &elems {
            for y in &elems {
                if !order.contains(&(x * y)) {
                    return Err(Error::InvalidParameter("basis is not closed under multiplication".into()));
                }
            }
        }
        let p2 = BigInt::from(alg.p) * BigInt::from(alg.p);
        if order.discriminant_det() != p2 {
            return Err(Error::InvalidParameter(format!(
                "det(gram) = {} but maximality needs {}",
                order.discriminant_det(),
                p2
            )));
        }
        Ok(order)
    }

    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.alg
    }

    pub fn p(&self) -> u64 {
        self.alg.p
    }

    /// Rows are basis elements in `1, i, j, k` coordinates.
    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn basis_element(&self, r: usize) -> Quaternion {
        let row = &self.basis[r];
        Quaternion::new(&self.alg, [row[0].clone(), row[1].clone(), row[2].clone(), row[3].clone()])
    }

    /// `gram[r][s] = Tr(e_r * conj(e_s))`; the norm is `c^T gram c / 2`.
    pub fn gram(&self) -> &Vec<Vec<BigInt>> {
        &self.gram
    }

    pub fn discriminant_det(&self) -> BigInt {
        let m: QMatrix =
            self.gram.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        linalg::determinant(&m).to_integer()
    }

    /// Reduced traces of the basis elements.
    pub fn trace_vector(&self) -> [BigInt; 4] {
        std::array::from_fn(|r| self.basis[r][0].clone() * BigInt::from(2)).map(|t: BigRational| t.to_integer())
    }

    /// Coordinates of `x` with respect to the order basis.
    pub fn order_coords(&self, x: &Quaternion) -> [BigRational; 4] {
        let v = linalg::vec_mat(x.coords(), &self.inv_basis);
        [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]
    }

    pub fn element(&self, coords: &[BigInt; 4]) -> Quaternion {
        let v: Vec<BigRational> = coords.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let x = linalg::vec_mat(&v, &self.basis);
        Quaternion::new(&self.alg, [x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()])
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        self.order_coords(x).iter().all(is_integral)
    }

    /// `(true, k)` with `k` minimal such that `l^k x` lies in the order.
    pub fn is_in_order_localized(&self, x: &Quaternion, ell: u64) -> (bool, u32) {
        let mut d = linalg::lcm_denominators(self.order_coords(x).iter());
        let ell = BigInt::from(ell);
        let mut k = 0;
        while !d.is_one() {
            let g = d.gcd(&ell);
            if g.is_one() {
                return (false, 0);
            }
            d /= g;
            k += 1;
        }
        (true, k)
    }
}

/// Smallest prime `q = 3 mod 4` that is a non-residue modulo `p`.
pub fn auxiliary_prime(p: u64) -> u64 {
    (3u64..)
        .step_by(4)
        .find(|&q| arith::is_prime_u64(q) && arith::legendre_u64(q, p) == -1)
        .expect("infinitely many primes")
}

/// The standard model of `D` ramified at `{p, inf}` with a verified maximal order.
pub fn algebra_and_order(p: u64) -> Result<(Arc<QuaternionAlgebra>, MaximalOrder)> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        let alg = Arc::new(QuaternionAlgebra::new(q(-1), q(-1), 2)?);
        let h = qr(1, 2);
        let basis = vec![
            vec![q(1), q(0), q(0), q(0)],
            vec![q(0), q(1), q(0), q(0)],
            vec![q(0), q(0), q(1), q(0)],
            vec![h.clone(), h.clone(), h.clone(), h],
        ];
        let order = MaximalOrder::new(&alg, basis)?;
        return Ok((alg, order));
    }
    if p % 4 == 3 {
        let alg = Arc::new(QuaternionAlgebra::new(q(-1), q(-(p as i64)), p)?);
        let h = qr(1, 2);
        let basis = vec![
            vec![q(1), q(0), q(0), q(0)],
            vec![q(0), q(1), q(0), q(0)],
            vec![h.clone(), q(0), h.clone(), q(0)],
            vec![q(0), h.clone(), q(0), h],
        ];
        let order = MaximalOrder::new(&alg, basis)?;
        return Ok((alg, order));
    }
    let aux = auxiliary_prime(p);
    let alg = Arc::new(QuaternionAlgebra::new(q(-(aux as i64)), q(-(p as i64)), p)?);
    let basis = saturate_order(&alg, &[2, aux])?;
    let order = MaximalOrder::new(&alg, basis)?;
    Ok((alg, order))
}

fn rows_to_quaternions(alg: &Arc<QuaternionAlgebra>, rows: &[Vec<BigRational>]) -> Vec<Quaternion> {
    rows.iter().map(|r| Quaternion::new(alg, [r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()])).collect()
}

fn lattice_det(alg: &Arc<QuaternionAlgebra>, basis: &[Vec<BigRational>]) -> BigRational {
    let elems = rows_to_quaternions(alg, basis);
    let m: QMatrix = elems.iter().map(|x| elems.iter().map(|y| trace_pairing(x, y)).collect()).collect();
    linalg::determinant(&m)
}

/// Smallest ring containing the generators, or `None` if it stops being
/// integral (non-integral norm or trace) or never becomes rank 4.
fn ring_closure(alg: &Arc<QuaternionAlgebra>, gens: Vec<Vec<BigRational>>) -> Option<QMatrix> {
    let mut gens = gens;
    for _ in 0..12 {
        let basis = linalg::rational_hnf(&gens);
        if basis.len() != 4 {
            return None;
        }
        let elems = rows_to_quaternions(alg, &basis);
        if elems.iter().any(|x| !is_integral(&x.reduced_norm()) || !is_integral(&x.reduced_trace())) {
            return None;
        }
        let inv = linalg::inverse(&basis)?;
        let mut missing = Vec::new();
        for x in &elems {
            for y in &elems {
                let prod = x * y;
                let coords = linalg::vec_mat(prod.coords(), &inv);
                if !coords.iter().all(is_integral) {
                    missing.push(prod.coords().to_vec());
                }
            }
        }
        if missing.is_empty() {
            return Some(basis);
        }
        gens = basis;
        gens.extend(missing);
    }
    None
}

/// Grows `Z<1, i, j, k>` by adjoining elements `(sum c_r e_r)/r` for the
/// given primes `r` until the discriminant drops to `p`.
fn saturate_order(alg: &Arc<QuaternionAlgebra>, primes: &[u64]) -> Result<QMatrix> {
    let target = BigRational::from_integer(BigInt::from(alg.p) * BigInt::from(alg.p));
    let mut basis = linalg::identity(4);
    let mut det = lattice_det(alg, &basis);
    'outer: while det != target {
        for &r in primes {
            let r = r as i64;
            for idx in 1..(r * r * r * r) {
                let digits = [idx % r, (idx / r) % r, (idx / (r * r)) % r, idx / (r * r * r)];
                let v: Vec<BigRational> = (0..4)
                    .map(|col| {
                        (0..4).fold(q(0), |acc, row| acc + &basis[row][col] * q(digits[row]))
                            / BigRational::from_integer(BigInt::from(r))
                    })
                    .collect();
                let cand = Quaternion::new(alg, [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]);
                if !is_integral(&cand.reduced_norm()) || !is_integral(&cand.reduced_trace()) {
                    continue;
                }
                let mut gens = basis.clone();
                gens.push(v);
                if let Some(next) = ring_closure(alg, gens) {
                    let next_det = lattice_det(alg, &next);
                    if next_det < det {
                        basis = next;
                        det = next_det;
                        continue 'outer;
                    }
                }
            }
        }
        return Err(Error::Internal(format!("order saturation stalled at det(gram) = {det}")));
    }
    Ok(basis)
}

/// Element of `Gamma`: `N(x) = l^e` and `l^k x` in the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElement {
    x: Quaternion,
    ell: u64,
    norm_exponent: i64,
    k: u32,
}

impl GammaElement {
    pub fn new(order: &MaximalOrder, x: Quaternion, ell: u64) -> Result<Self> {
        let norm_exponent = ell_exponent(&x.reduced_norm(), ell)
            .ok_or_else(|| Error::Internal(format!("norm {} is not a power of {ell}", x.reduced_norm())))?;
        let (inside, k) = order.is_in_order_localized(&x, ell);
        if !inside {
            return Err(Error::Internal(format!("{x:?} is not in O[1/{ell}]")));
        }
        Ok(GammaElement { x, ell, norm_exponent, k })
    }

    pub fn element(&self) -> &Quaternion {
        &self.x
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `e` with `N(x) = l^e`.
    pub fn norm_exponent(&self) -> i64 {
        self.norm_exponent
    }

    /// Minimal `k` with `l^k x` in the order.
    pub fn denominator_exponent(&self) -> u32 {
        self.k
    }
}

/// `Some(e)` if `r == l^e` exactly.
pub fn ell_exponent(r: &BigRational, ell: u64) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let l = BigInt::from(ell);
    let strip = |mut n: BigInt| {
        let mut e = 0i64;
        while !n.is_one() {
            if !(&n % &l).is_zero() {
                return None;
            }
            n /= &l;
            e += 1;
        }
        Some(e)
    };
    if r.denom().is_one() {
        strip(r.numer().clone())
    } else if r.numer().is_one() {
        strip(r.denom().clone()).map(|e| -e)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q4(alg: &Arc<QuaternionAlgebra>, c: [(i64, i64); 4]) -> Quaternion {
        Quaternion::new(alg, c.map(|(n, d)| qr(n, d)))
    }

    #[test]
    fn hurwitz_model() {
        let (alg, order) = algebra_and_order(2).unwrap();
        assert_eq!(alg.a(), &q(-1));
        assert_eq!(order.discriminant_det(), BigInt::from(4));
        let omega = order.basis_element(3);
        assert_eq!(omega.norm_trace(), (q(1), q(1)));
        // x^2 - x + 1 makes omega a sixth root of unity; -omega is the cube root
        assert_eq!(omega.pow(3), -&Quaternion::one(&alg));
        let zeta = -&omega;
        assert_eq!(zeta.pow(3), Quaternion::one(&alg));
        assert_eq!(zeta.conjugate(), zeta.pow(2));
        assert_eq!(omega.conjugate(), &Quaternion::one(&alg) - &omega);
        let t = &order.basis_element(1) - &order.basis_element(2);
        assert_eq!(t.pow(2), Quaternion::scalar(&alg, q(-2)));
        assert_eq!(t.reduced_norm(), q(2));
        assert_eq!(&t * &zeta, &zeta.pow(2) * &t);
    }

    #[test]
    fn odd_models() {
        let (alg, order) = algebra_and_order(3).unwrap();
        assert_eq!((alg.a(), alg.b()), (&q(-1), &q(-3)));
        assert_eq!(order.discriminant_det(), BigInt::from(9));
        assert_eq!(order.basis_element(2), q4(&alg, [(1, 2), (0, 1), (1, 2), (0, 1)]));
        for p in [5u64, 7, 11, 13, 17, 29, 37, 41] {
            let (_, order) = algebra_and_order(p).unwrap();
            assert_eq!(order.discriminant_det(), BigInt::from(p * p), "p = {p}");
        }
        let (alg5, _) = algebra_and_order(5).unwrap();
        assert_eq!((alg5.a(), alg5.b()), (&q(-3), &q(-5)));
        assert!(algebra_and_order(4).is_err());
    }

    #[test]
    fn ramification_checked() {
        // (-1, -1) is ramified at 2, not 3
        assert!(QuaternionAlgebra::new(q(-1), q(-1), 3).is_err());
        assert!(QuaternionAlgebra::new(q(-2), q(-5), 5).is_ok());
        assert!(QuaternionAlgebra::new(q(1), q(-5), 5).is_err());
        assert_eq!(hilbert_symbol(&BigInt::from(-1), &BigInt::from(-1), 2), -1);
    }

    #[test]
    fn norm_trace_conjugate() {
        let (alg, _) = algebra_and_order(2).unwrap();
        let one = Quaternion::one(&alg);
        assert_eq!(one.norm_trace(), (q(1), q(2)));
        assert_eq!(one.conjugate(), one);
        let i = Quaternion::from_ints(&alg, [0, 1, 0, 0]);
        assert_eq!(i.conjugate(), -&i);
        assert_eq!(&i * &i.conjugate(), one);
        let x = Quaternion::from_ints(&alg, [1, 1, 1, 0]);
        assert_eq!(x.reduced_norm(), q(3));
    }

    #[test]
    fn localized_membership() {
        let (alg, order) = algebra_and_order(2).unwrap();
        assert_eq!(order.is_in_order_localized(&Quaternion::one(&alg), 3), (true, 0));
        let i3 = q4(&alg, [(0, 1), (1, 3), (0, 1), (0, 1)]);
        assert_eq!(order.is_in_order_localized(&i3, 3), (true, 1));
        assert!(!order.is_in_order_localized(&i3, 2).0);
        let i9 = q4(&alg, [(0, 1), (1, 9), (0, 1), (0, 1)]);
        assert_eq!(order.is_in_order_localized(&i9, 6), (true, 2));
    }

    #[test]
    fn ell_exponents() {
        assert_eq!(ell_exponent(&q(9), 3), Some(2));
        assert_eq!(ell_exponent(&qr(1, 27), 3), Some(-3));
        assert_eq!(ell_exponent(&q(1), 3), Some(0));
        assert_eq!(ell_exponent(&q(6), 3), None);
    }
}
