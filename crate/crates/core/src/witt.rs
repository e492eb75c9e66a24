//! Arithmetic in `F_p`, `F_{p^2}`, `Z_p` and the Witt ring `W(F_{p^2})`
//! truncated modulo `p^N`.
//!
//! `F_{p^2}` is `F_p[g]/(g^2 - m1*g - m0)`. For odd `p` the modulus is
//! `g^2 = n` with `n` the smallest non-residue; for `p = 2` it is
//! `g^2 + g + 1`, so `g` is a primitive cube root of unity.
//!
//! A [`WittElement`] is stored as a pair `u + v*G` modulo `p^N`, where `G`
//! is the root of the lifted modulus (`G^2 = n`, or `G^2 + G + 1 = 0`).
//! Teichmüller digits are computed on demand by [`WittElement::digits`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{self, inv_mod, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Default number of Teichmüller digits carried by certificate computations.
pub const DEFAULT_PRECISION: u32 = 4;

const MODULUS_LIMIT: u128 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    p: u64,
    m0: u64,
    m1: u64,
}

impl QuadField {
    pub fn new(p: u64) -> Result<Self> {
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let field = if p == 2 {
            QuadField { p, m0: 1, m1: 1 }
        } else {
            QuadField { p, m0: arith::smallest_nonresidue(p), m1: 0 }
        };
        // g^2 - m1 g - m0 must have no root in F_p
        let has_root = (0..p).any(|x| {
            let x = x as u128;
            let pp = p as u128;
            (x * x + (pp - field.m1 as u128) * x % pp + (pp - field.m0 as u128)).is_multiple_of(pp)
        });
        if has_root {
            return Err(Error::Internal(format!("modulus of F_{{{p}^2}} is reducible")));
        }
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(m0, m1)` with `g^2 = m0 + m1*g`.
    pub fn modulus(&self) -> (u64, u64) {
        (self.m0, self.m1)
    }

    pub fn elem(&self, c0: u64, c1: u64) -> FqElement {
        FqElement { field: *self, c0: c0 % self.p, c1: c1 % self.p }
    }

    pub fn from_int(&self, n: i64) -> FqElement {
        self.elem(n.rem_euclid(self.p as i64) as u64, 0)
    }

    pub fn zero(&self) -> FqElement {
        self.elem(0, 0)
    }

    pub fn one(&self) -> FqElement {
        self.elem(1, 0)
    }

    pub fn generator(&self) -> FqElement {
        self.elem(0, 1)
    }

    pub fn order(&self) -> u64 {
        self.p * self.p
    }

    /// All elements, ordered by index `c0 + c1*p`.
    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn from_index(&self, i: u64) -> FqElement {
        self.elem(i % self.p, i / self.p)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FqElement {
    field: QuadField,
    c0: u64,
    c1: u64,
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}g", self.c0, self.c1)
    }
}

impl FqElement {
    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn coeffs(&self) -> (u64, u64) {
        (self.c0, self.c1)
    }

    pub fn index(&self) -> u64 {
        self.c0 + self.c1 * self.field.p
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn in_prime_field(&self) -> bool {
        self.c1 == 0
    }

    pub fn pow(self, mut e: u128) -> FqElement {
        let mut acc = self.field.one();
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(self) -> FqElement {
        // sigma(g) = m1 - g
        let p = self.field.p;
        let c0 = (self.c0 as u128 + self.c1 as u128 * self.field.m1 as u128) % p as u128;
        self.field.elem(c0 as u64, (p - self.c1) % p)
    }

    /// `N(c) = c^{p+1}`, an element of `F_p`.
    pub fn norm(self) -> u64 {
        let n = self * self.frobenius();
        debug_assert!(n.c1 == 0);
        n.c0
    }

    pub fn trace(self) -> u64 {
        let t = self + self.frobenius();
        debug_assert!(t.c1 == 0);
        t.c0
    }

    pub fn inv(self) -> Option<FqElement> {
        if self.is_zero() {
            return None;
        }
        let n = inv_mod(self.norm() as u128, self.field.p as u128)? as u64;
        Some(self.frobenius() * self.field.elem(n, 0))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let group = self.field.order() - 1;
        let mut ord = group;
        let mut rest = group;
        let mut q = 2;
        while rest > 1 {
            if rest.is_multiple_of(q) {
                while rest.is_multiple_of(q) {
                    rest /= q;
                }
                while ord.is_multiple_of(q) && self.pow((ord / q) as u128) == self.field.one() {
                    ord /= q;
                }
            }
            q += 1;
        }
        Some(ord)
    }
}

impl Add for FqElement {
    type Output = FqElement;
    fn add(self, o: FqElement) -> FqElement {
        self.field.elem(self.c0 + o.c0, self.c1 + o.c1)
    }
}

impl Sub for FqElement {
    type Output = FqElement;
    fn sub(self, o: FqElement) -> FqElement {
        self + (-o)
    }
}

impl Neg for FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        let p = self.field.p;
        self.field.elem((p - self.c0) % p, (p - self.c1) % p)
    }
}

impl Mul for FqElement {
    type Output = FqElement;
    fn mul(self, o: FqElement) -> FqElement {
        let p = self.field.p as u128;
        let (a0, a1, b0, b1) = (self.c0 as u128, self.c1 as u128, o.c0 as u128, o.c1 as u128);
        let hi = a1 * b1 % p;
        let c0 = (a0 * b0 + hi * self.field.m0 as u128) % p;
        let c1 = (a0 * b1 + a1 * b0 + hi * self.field.m1 as u128) % p;
        self.field.elem(c0 as u64, c1 as u64)
    }
}

/// `W(F_{p^2}) / p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WittRing {
    field: QuadField,
    precision: u32,
    modulus: u128,
}

impl WittRing {
    pub fn new(field: QuadField, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InsufficientPrecision { needed: 1, have: 0 });
        }
        let modulus = checked_power(field.p, precision)?;
        Ok(WittRing { field, precision, modulus })
    }

    pub fn for_prime(p: u64, precision: u32) -> Result<Self> {
        WittRing::new(QuadField::new(p)?, precision)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^N`.
    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    fn lifted_modulus(&self) -> (u128, u128) {
        let m = self.modulus;
        if self.field.p == 2 {
            (m - 1, m - 1)
        } else {
            (self.field.m0 as u128 % m, 0)
        }
    }

    pub fn with_precision(&self, precision: u32) -> Result<WittRing> {
        WittRing::new(self.field, precision)
    }

    pub fn elem(&self, u: u128, v: u128) -> WittElement {
        WittElement { ring: *self, u: u % self.modulus, v: v % self.modulus }
    }

    pub fn from_int(&self, n: i128) -> WittElement {
        self.elem(n.rem_euclid(self.modulus as i128) as u128, 0)
    }

    pub fn zero(&self) -> WittElement {
        self.elem(0, 0)
    }

    pub fn one(&self) -> WittElement {
        self.elem(1, 0)
    }

    /// The root `G` of the lifted modulus.
    pub fn generator_lift(&self) -> WittElement {
        self.elem(0, 1)
    }

    pub fn from_zp(&self, z: &ZpElement) -> WittElement {
        self.elem(z.value, 0)
    }

    /// Reduces a rational with denominator prime to `p`.
    pub fn from_rational(&self, q: &BigRational) -> Result<WittElement> {
        let z = ZpElement::from_rational(q, self.field.p, self.precision)?;
        Ok(self.from_zp(&z))
    }

    pub fn teichmuller(&self, c: FqElement) -> WittElement {
        teichmuller(c, self.precision).expect("ring precision already validated")
    }

    /// `sum_k teich(d_k) p^k`.
    pub fn from_digits(&self, digits: &[FqElement]) -> WittElement {
        let mut acc = self.zero();
        let mut scale = 1u128;
        for d in digits.iter().take(self.precision as usize) {
            acc = acc + self.teichmuller(*d).scale(scale);
            scale = scale.saturating_mul(self.field.p as u128);
        }
        acc
    }
}

fn checked_power(p: u64, n: u32) -> Result<u128> {
    let mut m: u128 = 1;
    for _ in 0..n {
        m = m.saturating_mul(p as u128);
        if m >= MODULUS_LIMIT {
            return Err(Error::PrecisionOverflow { p, precision: n });
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WittElement {
    ring: WittRing,
    u: u128,
    v: u128,
}

impl fmt::Debug for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}G mod {}^{})", self.u, self.v, self.ring.p(), self.ring.precision)
    }
}

/// Teichmüller lift of `c` to precision `n`: `c~^{q^{n-1}}` for any lift `c~`.
pub fn teichmuller(c: FqElement, precision: u32) -> Result<WittElement> {
    let ring = WittRing::new(c.field, precision)?;
    let lift = ring.elem(c.c0 as u128, c.c1 as u128);
    let q = (c.field.p as u128) * (c.field.p as u128);
    let mut x = lift;
    for _ in 1..precision {
        x = x.pow(q);
    }
    Ok(x)
}

impl WittElement {
    pub fn ring(&self) -> WittRing {
        self.ring
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    /// Coordinates `(u, v)` of `u + v*G` in `[0, p^N)`.
    pub fn pair(&self) -> (u128, u128) {
        (self.u, self.v)
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }

    pub fn truncate(&self, precision: u32) -> Result<WittElement> {
        if precision > self.ring.precision {
            return Err(Error::InsufficientPrecision { needed: precision, have: self.ring.precision });
        }
        let ring = self.ring.with_precision(precision)?;
        Ok(ring.elem(self.u, self.v))
    }

    fn align(self, o: WittElement) -> (WittElement, WittElement) {
        assert_eq!(self.p(), o.p(), "mismatched primes in Witt arithmetic");
        match self.precision().cmp(&o.precision()) {
            std::cmp::Ordering::Equal => (self, o),
            std::cmp::Ordering::Less => (self, o.truncate(self.precision()).unwrap()),
            std::cmp::Ordering::Greater => (self.truncate(o.precision()).unwrap(), o),
        }
    }

    /// Checked multiplication: fails on mismatched primes.
    pub fn try_mul(self, o: WittElement) -> Result<WittElement> {
        if self.p() != o.p() {
            return Err(Error::MismatchedPrime(self.p(), o.p()));
        }
        Ok(self * o)
    }

    pub fn scale(self, k: u128) -> WittElement {
        let m = self.ring.modulus;
        self.ring.elem(mul_mod(self.u, k % m, m), mul_mod(self.v, k % m, m))
    }

    pub fn pow(self, mut e: u128) -> WittElement {
        let mut acc = self.ring.one();
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Image in the residue field `F_{p^2}`.
    pub fn residue(&self) -> FqElement {
        let p = self.p() as u128;
        self.ring.field.elem((self.u % p) as u64, (self.v % p) as u64)
    }

    pub fn is_unit(&self) -> bool {
        !self.residue().is_zero()
    }

    pub fn frobenius(self) -> WittElement {
        // sigma(G) = l1 - G
        let m = self.ring.modulus;
        let (_, l1) = self.ring.lifted_modulus();
        let u = (self.u + mul_mod(self.v, l1, m)) % m;
        self.ring.elem(u, (m - self.v) % m)
    }

    pub fn inv(self) -> Result<WittElement> {
        let n = self * self.frobenius();
        debug_assert_eq!(n.v, 0);
        let ninv = inv_mod(n.u, self.ring.modulus).ok_or(Error::NonUnit)?;
        Ok(self.frobenius().scale(ninv))
    }

    /// `p`-adic valuation, `None` for zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let p = self.p() as u128;
        let (mut u, mut v, mut k) = (self.u, self.v, 0);
        while u % p == 0 && v % p == 0 {
            u /= p;
            v /= p;
            k += 1;
        }
        Some(k)
    }

    /// Exact division by `p`; the result loses one digit of precision.
    pub fn div_p(&self) -> Result<WittElement> {
        let p = self.p() as u128;
        if !self.u.is_multiple_of(p) || !self.v.is_multiple_of(p) {
            return Err(Error::Internal("division by p of a unit".into()));
        }
        if self.precision() == 1 {
            return Err(Error::InsufficientPrecision { needed: 2, have: 1 });
        }
        let ring = self.ring.with_precision(self.precision() - 1)?;
        Ok(ring.elem(self.u / p, self.v / p))
    }

    /// Teichmüller digit residues `(tau_0, ..., tau_{N-1})`.
    pub fn digits(&self) -> Vec<FqElement> {
        let mut out = Vec::with_capacity(self.precision() as usize);
        let mut x = *self;
        loop {
            let r = x.residue();
            out.push(r);
            if x.precision() == 1 {
                break;
            }
            let tau = x.ring.teichmuller(r);
            x = (x - tau).div_p().expect("remainder is divisible by p");
        }
        out
    }

    /// `(N(x), Tr(x)) = (x*sigma(x), x + sigma(x))`, both in `Z_p`.
    pub fn norm_trace(&self) -> Result<(ZpElement, ZpElement)> {
        let s = self.frobenius();
        let n = *self * s;
        let t = *self + s;
        if n.v != 0 || t.v != 0 {
            return Err(Error::Internal("norm or trace left Z_p".into()));
        }
        let (p, prec) = (self.p(), self.precision());
        Ok((ZpElement { p, precision: prec, value: n.u }, ZpElement { p, precision: prec, value: t.u }))
    }

    pub fn norm(&self) -> ZpElement {
        self.norm_trace().expect("norm of a Witt element lies in Z_p").0
    }

    /// `Some(z)` if the element lies in `Z_p`.
    pub fn as_zp(&self) -> Option<ZpElement> {
        (self.v == 0).then_some(ZpElement { p: self.p(), precision: self.precision(), value: self.u })
    }
}

impl Add for WittElement {
    type Output = WittElement;
    fn add(self, o: WittElement) -> WittElement {
        let (a, b) = self.align(o);
        a.ring.elem(a.u + b.u, a.v + b.v)
    }
}

impl Sub for WittElement {
    type Output = WittElement;
    fn sub(self, o: WittElement) -> WittElement {
        self + (-o)
    }
}

impl Neg for WittElement {
    type Output = WittElement;
    fn neg(self) -> WittElement {
        let m = self.ring.modulus;
        self.ring.elem((m - self.u) % m, (m - self.v) % m)
    }
}

impl Mul for WittElement {
    type Output = WittElement;
    fn mul(self, o: WittElement) -> WittElement {
        let (a, b) = self.align(o);
        let m = a.ring.modulus;
        let (l0, l1) = a.ring.lifted_modulus();
        let hi = mul_mod(a.v, b.v, m);
        let u = (mul_mod(a.u, b.u, m) + mul_mod(hi, l0, m)) % m;
        let v = (mul_mod(a.u, b.v, m) + mul_mod(a.v, b.u, m) + mul_mod(hi, l1, m)) % m;
        a.ring.elem(u, v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZpElement {
    p: u64,
    precision: u32,
    value: u128,
}

impl ZpElement {
    pub fn new(p: u64, precision: u32, value: i128) -> Result<Self> {
        let m = checked_power(p, precision)?;
        Ok(ZpElement { p, precision, value: value.rem_euclid(m as i128) as u128 })
    }

    pub fn from_rational(q: &BigRational, p: u64, precision: u32) -> Result<Self> {
        let m = checked_power(p, precision)?;
        let den = arith::big_mod(q.denom(), m);
        if den.is_multiple_of(p as u128) {
            return Err(Error::NotIntegral);
        }
        let num = arith::big_mod(q.numer(), m);
        let inv = inv_mod(den, m).ok_or(Error::NotIntegral)?;
        Ok(ZpElement { p, precision, value: mul_mod(num, inv, m) })
    }

    pub fn from_bigint(n: &BigInt, p: u64, precision: u32) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(n.clone()), p, precision)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn modulus(&self) -> u128 {
        checked_power(self.p, self.precision).expect("validated at construction")
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.p as u128)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn truncate(&self, precision: u32) -> ZpElement {
        let precision = precision.min(self.precision);
        let m = checked_power(self.p, precision).expect("smaller than a valid modulus");
        ZpElement { p: self.p, precision, value: self.value % m }
    }

    pub fn inv(&self) -> Result<ZpElement> {
        let v = inv_mod(self.value, self.modulus()).ok_or(Error::NonUnit)?;
        Ok(ZpElement { value: v, ..*self })
    }

    /// Teichmüller digit residues in `F_p`.
    pub fn digits(&self) -> Vec<u64> {
        let p = self.p as u128;
        let mut out = Vec::with_capacity(self.precision as usize);
        let mut x = self.value;
        let mut prec = self.precision;
        while prec > 0 {
            let m = checked_power(self.p, prec).unwrap();
            let r = x % p;
            out.push(r as u64);
            if prec == 1 {
                break;
            }
            let tau = pow_mod(r, p.pow(prec - 1), m);
            x = ((x + m - tau) % m) / p;
            prec -= 1;
        }
        out
    }
}

impl Add for ZpElement {
    type Output = ZpElement;
    fn add(self, o: ZpElement) -> ZpElement {
        let (a, b) = (self.truncate(o.precision), o.truncate(self.precision));
        ZpElement { value: (a.value + b.value) % a.modulus(), ..a }
    }
}

impl Sub for ZpElement {
    type Output = ZpElement;
    fn sub(self, o: ZpElement) -> ZpElement {
        self + (-o)
    }
}

impl Neg for ZpElement {
    type Output = ZpElement;
    fn neg(self) -> ZpElement {
        let m = self.modulus();
        ZpElement { value: (m - self.value) % m, ..self }
    }
}

impl Mul for ZpElement {
    type Output = ZpElement;
    fn mul(self, o: ZpElement) -> ZpElement {
        let (a, b) = (self.truncate(o.precision), o.truncate(self.precision));
        ZpElement { value: mul_mod(a.value, b.value, a.modulus()), ..a }
    }
}

/// Solves `w * sigma(w) = target` digit by digit. Units always succeed
/// because the norm on units of an unramified extension is surjective.
pub fn hensel_norm_solve(field: QuadField, target: &ZpElement) -> Result<WittElement> {
    if target.p != field.p {
        return Err(Error::MismatchedPrime(target.p, field.p));
    }
    if !target.is_unit() {
        return Err(Error::NonUnit);
    }
    let n = target.precision;
    let ring = WittRing::new(field, n)?;
    let p = field.p as u128;
    let seed = field
        .elements()
        .find(|c| c.norm() as u128 == target.value % p)
        .ok_or_else(|| Error::Internal("norm map on F_{p^2} not surjective".into()))?;
    let mut w = ring.teichmuller(seed);
    let mut scale = 1u128;
    for k in 1..n {
        scale *= p;
        let m = scale * p;
        if w.norm().value % m == target.value % m {
            continue;
        }
        w = field
            .elements()
            .map(|d| w + ring.teichmuller(d).scale(scale))
            .find(|cand| cand.norm().value % m == target.value % m)
            .ok_or_else(|| Error::Internal(format!("Hensel step {k} failed")))?;
    }
    debug_assert_eq!(w.norm().value, target.value);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> WittRing {
        WittRing::for_prime(p, n).unwrap()
    }

    #[test]
    fn field_models() {
        let f2 = QuadField::new(2).unwrap();
        let w = f2.generator();
        assert_eq!(w * w + w + f2.one(), f2.zero());
        assert_eq!(w.pow(3), f2.one());
        let f3 = QuadField::new(3).unwrap();
        assert_eq!(f3.modulus(), (2, 0));
        assert!(QuadField::new(9).is_err());
    }

    #[test]
    fn teichmuller_basics() {
        let r = ring(3, 3);
        let f = r.field();
        assert_eq!(r.teichmuller(f.zero()).pair(), (0, 0));
        assert_eq!(r.teichmuller(f.one()).pair(), (1, 0));
        // Teichmuller lift of 2 in Z/27 is -1
        assert_eq!(r.teichmuller(f.from_int(2)).pair(), (26, 0));
        // brute-force oracle: iterate x -> x^9 from 2 in Z/27
        let mut x = 2u128;
        for _ in 0..5 {
            x = pow_mod(x, 9, 27);
        }
        assert_eq!(x, 26);
        for c in f.elements() {
            let t = r.teichmuller(c);
            assert_eq!(t.pow(9), t);
            assert_eq!(t.digits()[0], c);
            assert!(t.digits()[1..].iter().all(|d| d.is_zero()));
        }
    }

    #[test]
    fn product_digits_p3() {
        // (1 + 3)(1 + 3) = 16 = 7 mod 9
        let r = ring(3, 2);
        let x = r.from_int(4);
        let y = x * x;
        assert_eq!(y.pair(), (7, 0));
        let d = y.digits();
        assert_eq!(d[0], r.field().one());
        // 7 = 1 + 3*2, and teich(2) = -1 = 8 mod 9: 1 + 3*8 = 25 = 7 mod 9
        assert_eq!(d[1], r.field().from_int(2));
        assert_eq!(r.from_digits(&d), y);
    }

    #[test]
    fn inverse_examples() {
        let r = ring(3, 2);
        assert_eq!(r.from_int(4).inv().unwrap().pair(), (7, 0));
        assert_eq!(r.one().inv().unwrap(), r.one());
        assert_eq!(r.from_int(3).inv(), Err(Error::NonUnit));
        let r = ring(5, 3);
        for c in r.field().elements().skip(1) {
            let t = r.teichmuller(c);
            assert_eq!(t.inv().unwrap(), r.teichmuller(c.pow(23)));
        }
    }

    #[test]
    fn frobenius_examples() {
        let r = ring(7, 3);
        for c in r.field().elements() {
            assert_eq!(r.teichmuller(c).frobenius(), r.teichmuller(c.pow(7)));
        }
        let z = r.from_int(12345);
        assert_eq!(z.frobenius(), z);
    }

    #[test]
    fn norm_trace_examples() {
        let r = ring(5, 3);
        let x = r.from_int(7);
        let (n, t) = x.norm_trace().unwrap();
        assert_eq!(n.value(), 49);
        assert_eq!(t.value(), 14);
        let g = r.field().generator();
        assert_eq!(r.teichmuller(g).norm().value(), r.teichmuller(g.pow(6)).pair().0);
    }

    #[test]
    fn hensel_examples() {
        let f2 = QuadField::new(2).unwrap();
        let minus_one = ZpElement::new(2, 4, -1).unwrap();
        let z = hensel_norm_solve(f2, &minus_one).unwrap();
        assert_eq!(z.norm().value(), 15);
        let z3 = hensel_norm_solve(f2, &ZpElement::new(2, 3, -1).unwrap()).unwrap();
        assert_eq!(z3.norm().value(), 7);
        let f3 = QuadField::new(3).unwrap();
        let w = hensel_norm_solve(f3, &ZpElement::new(3, 3, 2).unwrap()).unwrap();
        assert_eq!(w.norm().value(), 2);
        let one = hensel_norm_solve(f3, &ZpElement::new(3, 3, 1).unwrap()).unwrap();
        assert_eq!(one.norm().value(), 1);
        assert_eq!(hensel_norm_solve(f3, &ZpElement::new(3, 3, 3).unwrap()), Err(Error::NonUnit));
    }

    #[test]
    fn zp_digits() {
        // 9 = 1 + 0*2 + 0*4 + 1*8
        let z = ZpElement::new(2, 4, 9).unwrap();
        assert_eq!(z.digits(), vec![1, 0, 0, 1]);
        let z = ZpElement::new(3, 3, 26).unwrap();
        assert_eq!(z.digits(), vec![2, 0, 0]);
    }

    #[test]
    fn mixed_precision_truncates() {
        let a = ring(3, 4).from_int(40);
        let b = ring(3, 2).from_int(2);
        let c = a * b;
        assert_eq!(c.precision(), 2);
        assert_eq!(c.pair(), (80 % 9, 0));
        assert!(a.try_mul(ring(5, 2).one()).is_err());
    }
}
