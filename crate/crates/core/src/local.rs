//! The local ring `O_p = W<S>/(S^2 = p, S a = sigma(a) S)`, the splitting
//! of the global quaternion algebra into it, and the digit coordinates
//! `t_i`, `s_i` on the strict stabilizer group.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg::{self, q, qr, QMatrix};
use crate::quatalg::{algebra_and_order, MaximalOrder, Quaternion};
use crate::witt::{hensel_norm_solve, FqElement, WittElement, WittRing, ZpElement};

/// `a + b S` with `a`, `b` in `W` at a common precision.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct StabilizerElement {
    a: WittElement,
    b: WittElement,
}

impl fmt::Debug for StabilizerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}S", self.a, self.b)
    }
}

impl StabilizerElement {
    pub fn new(a: WittElement, b: WittElement) -> Result<Self> {
        if a.p() != b.p() {
            return Err(Error::MismatchedPrime(a.p(), b.p()));
        }
        let n = a.precision().min(b.precision());
        Ok(StabilizerElement { a: a.truncate(n)?, b: b.truncate(n)? })
    }

    pub fn from_witt(a: WittElement) -> Self {
        StabilizerElement { a, b: a.ring().zero() }
    }

    pub fn one(ring: WittRing) -> Self {
        StabilizerElement::from_witt(ring.one())
    }

    /// The uniformizer `S`.
    pub fn uniformizer(ring: WittRing) -> Self {
        StabilizerElement { a: ring.zero(), b: ring.one() }
    }

    pub fn a(&self) -> WittElement {
        self.a
    }

    pub fn b(&self) -> WittElement {
        self.b
    }

    pub fn ring(&self) -> WittRing {
        self.a.ring()
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn precision(&self) -> u32 {
        self.a.precision()
    }

    pub fn truncate(&self, precision: u32) -> Result<Self> {
        Ok(StabilizerElement { a: self.a.truncate(precision)?, b: self.b.truncate(precision)? })
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_unit()
    }

    /// `N(a + bS) = N(a) - p N(b)`.
    pub fn norm(&self) -> ZpElement {
        let p = self.p() as i128;
        let pz = ZpElement::new(self.p(), self.precision(), p).expect("precision already validated");
        self.a.norm() - pz * self.b.norm()
    }

    pub fn inv(&self) -> Result<Self> {
        let ninv = self.norm().inv()?;
        let scale = self.ring().from_zp(&ninv);
        Ok(StabilizerElement { a: self.a.frobenius() * scale, b: -(self.b * scale) })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = StabilizerElement::one(self.ring());
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `x` lies in the strict subgroup: `a = 1 mod p`.
    pub fn in_s0(&self) -> bool {
        let r = self.a.residue();
        r == r.field().one()
    }

    pub fn digits(&self) -> Result<DigitVector> {
        if !self.in_s0() {
            return Err(Error::NotInS0);
        }
        let da = self.a.digits();
        let db = self.b.digits();
        let n = self.precision() as usize;
        let mut entries = Vec::with_capacity(2 * n - 1);
        for k in 0..n {
            entries.push(db[k]);
            if k + 1 < n {
                entries.push(da[k + 1]);
            }
        }
        Ok(DigitVector { entries })
    }

    /// `s_1, s_2, ...`: Teichmüller digits of `N(x) = 1 + p s_1 + ...`.
    pub fn norm_digits(&self) -> Result<Vec<u64>> {
        if !self.in_s0() {
            return Err(Error::NotInS0);
        }
        Ok(self.norm().digits()[1..].to_vec())
    }

    /// `N(x) = 1` modulo `p^N`.
    pub fn norm_one_truncated(&self) -> bool {
        self.norm().value() == 1
    }

    /// `t_1` for odd `p`, `(t_1, t_3 + t_1 t_2)` for `p = 2`.
    pub fn frattini_image(&self) -> Result<FrattiniImage> {
        if self.p() == 2 && self.precision() < 2 {
            return Err(Error::InsufficientPrecision { needed: 2, have: self.precision() });
        }
        if !self.norm_one_truncated() {
            return Err(Error::NotNormOne);
        }
        let d = self.digits()?;
        Ok(if self.p() == 2 {
            FrattiniImage::Two(d.t(1), d.t(3) + d.t(1) * d.t(2))
        } else {
            FrattiniImage::Odd(d.t(1))
        })
    }

    /// Membership flags, with the norm decided only up to `p^N`.
    pub fn membership(&self, ell: u64) -> Membership {
        Membership::build(self, self.norm_one_truncated(), None, ell)
    }

    /// Membership flags using the exact rational norm of a global element.
    pub fn membership_exact(&self, exact_norm: &BigRational, ell: u64) -> Membership {
        Membership::build(self, exact_norm.is_one(), Some(exact_norm), ell)
    }
}

impl Add for StabilizerElement {
    type Output = StabilizerElement;
    fn add(self, o: Self) -> Self {
        StabilizerElement::new(self.a + o.a, self.b + o.b).expect("same prime")
    }
}

impl Sub for StabilizerElement {
    type Output = StabilizerElement;
    fn sub(self, o: Self) -> Self {
        StabilizerElement::new(self.a - o.a, self.b - o.b).expect("same prime")
    }
}

impl Neg for StabilizerElement {
    type Output = StabilizerElement;
    fn neg(self) -> Self {
        StabilizerElement { a: -self.a, b: -self.b }
    }
}

impl Mul for StabilizerElement {
    type Output = StabilizerElement;
    fn mul(self, o: Self) -> Self {
        let p = self.p() as u128;
        let a = self.a * o.a + (self.b * o.b.frobenius()).scale(p);
        let b = self.a * o.b + self.b * o.a.frobenius();
        StabilizerElement::new(a, b).expect("same prime")
    }
}

/// `t_1, ..., t_{2N-1}` with `x = (1 + p t_2 + ...) + (t_1 + p t_3 + ...) S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitVector {
    entries: Vec<FqElement>,
}

impl DigitVector {
    pub fn new(entries: Vec<FqElement>) -> Self {
        DigitVector { entries }
    }

    /// `t_i`, 1-indexed.
    pub fn t(&self, i: usize) -> FqElement {
        self.entries[i - 1]
    }

    pub fn entries(&self) -> &[FqElement] {
        &self.entries
    }

    pub fn reassemble(&self, ring: WittRing) -> StabilizerElement {
        let f = ring.field();
        let mut da = vec![f.one()];
        let mut db = Vec::new();
        for (idx, &d) in self.entries.iter().enumerate() {
            if idx % 2 == 0 {
                db.push(d);
            } else {
                da.push(d);
            }
        }
        StabilizerElement { a: ring.from_digits(&da), b: ring.from_digits(&db) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrattiniImage {
    Odd(FqElement),
    Two(FqElement, FqElement),
}

impl FrattiniImage {
    pub fn components(&self) -> Vec<FqElement> {
        match *self {
            FrattiniImage::Odd(t) => vec![t],
            FrattiniImage::Two(t1, t3) => vec![t1, t3],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub in_s0: bool,
    pub norm_one: bool,
    /// Whether `norm_one` came from an exact norm rather than `N mod p^N`.
    pub norm_exact: bool,
    pub in_sl0: bool,
    /// `N(x) mod 8 in {1, l mod 8}`; only defined for `p = 2`, and from a
    /// truncated norm only at precision >= 3.
    pub in_tilde_s2: Option<bool>,
}

impl Membership {
    fn build(x: &StabilizerElement, norm_one: bool, exact: Option<&BigRational>, ell: u64) -> Self {
        let in_s0 = x.in_s0();
        let n8 = match exact {
            Some(n) if !n.denom().is_even() => {
                let n8 = (n.numer() * n.denom()).mod_floor(&BigInt::from(8));
                Some(n8.to_u64().expect("residue mod 8"))
            }
            Some(_) => None,
            None => (x.precision() >= 3).then(|| (x.norm().value() % 8) as u64),
        };
        let in_tilde_s2 = if x.p() == 2 { n8.map(|n8| x.is_unit() && (n8 == 1 || n8 == ell % 8)) } else { None };
        let norm_exact = exact.is_some();
        Membership { in_s0, norm_one, norm_exact, in_sl0: in_s0 && norm_one, in_tilde_s2 }
    }
}

/// `rho: O[1/l] -> O_p` at precision `N`.
#[derive(Clone, Debug)]
pub struct Splitting {
    order: MaximalOrder,
    ring: WittRing,
    ell: u64,
    /// Rows: `1, u0, T0, u0 T0` in `1, i, j, k` coordinates, inverted.
    decompose: QMatrix,
    u0: Quaternion,
    t0: Quaternion,
    u_image: WittElement,
    z_inv: WittElement,
    images: [StabilizerElement; 4],
}

/// The standard splitting for `(p, l)` at precision `N`.
pub fn build_splitting(p: u64, ell: u64, precision: u32) -> Result<Splitting> {
    let (_, order) = algebra_and_order(p)?;
    Splitting::new(&order, ell, precision)
}

/// A root in `W` of `x^2 - t x + n`, Newton-lifted from the first residue
/// root (the fixed generator of `F_{p^2}` when it is one).
fn witt_root(ring: WittRing, t: &BigRational, n: &BigRational) -> Result<WittElement> {
    let f = ring.field();
    let (tw, nw) = (ring.from_rational(t)?, ring.from_rational(n)?);
    let poly = |x: WittElement| x * x - tw * x + nw;
    let gen = f.generator();
    let residue_root = std::iter::once(gen)
        .chain(f.elements())
        .find(|&r| {
            let x = ring.teichmuller(r);
            poly(x).residue().is_zero()
        })
        .ok_or_else(|| Error::Internal("minimal polynomial has no root in F_{p^2}".into()))?;
    let mut x = ring.teichmuller(residue_root);
    for _ in 0..=ring.precision() {
        let d = (x.scale(2) - tw).inv()?;
        x = x - poly(x) * d;
    }
    if !poly(x).is_zero() {
        return Err(Error::Internal("Newton lift did not converge".into()));
    }
    Ok(x)
}

impl Splitting {
    pub fn new(order: &MaximalOrder, ell: u64, precision: u32) -> Result<Self> {
        let p = order.p();
        if precision < 2 {
            return Err(Error::InsufficientPrecision { needed: 2, have: precision });
        }
        if ell < 2 || ell.is_multiple_of(p) {
            return Err(Error::InvalidParameter(format!("l = {ell} must be at least 2 and prime to p = {p}")));
        }
        let alg = order.algebra();
        let ring = WittRing::for_prime(p, precision)?;
        let (u0, t0) = if p == 2 {
            // -omega = (-1 - i - j - k)/2 is a cube root of unity
            let h = qr(-1, 2);
            (Quaternion::new(alg, [h.clone(), h.clone(), h.clone(), h]), Quaternion::from_ints(alg, [0, 1, -1, 0]))
        } else {
            (Quaternion::from_ints(alg, [0, 1, 0, 0]), Quaternion::from_ints(alg, [0, 0, 1, 0]))
        };
        // both choices have T0^2 = -p and T0 u0 = conj(u0) T0
        debug_assert_eq!(t0.pow(2), Quaternion::scalar(alg, q(-(p as i64))));
        let u0t0 = &u0 * &t0;
        let rows: QMatrix =
            [Quaternion::one(alg), u0.clone(), t0.clone(), u0t0].iter().map(|x| x.coords().to_vec()).collect();
        let decompose = linalg::inverse(&rows).ok_or_else(|| Error::Internal("splitting basis is singular".into()))?;
        let (n0, tr0) = u0.norm_trace();
        let u_image = witt_root(ring, &tr0, &n0)?;
        let minus_one = ZpElement::new(p, precision, -1)?;
        let z = hensel_norm_solve(ring.field(), &minus_one)?;
        let z_inv = z.inv()?;
        let mut sp = Splitting {
            order: order.clone(),
            ring,
            ell,
            decompose,
            u0,
            t0,
            u_image,
            z_inv,
            images: [StabilizerElement::one(ring); 4],
        };
        for r in 0..4 {
            sp.images[r] = sp.apply(&order.basis_element(r))?;
        }
        Ok(sp)
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn ring(&self) -> WittRing {
        self.ring
    }

    pub fn order(&self) -> &MaximalOrder {
        &self.order
    }

    /// Images of the order basis.
    pub fn images(&self) -> &[StabilizerElement; 4] {
        &self.images
    }

    /// The global element whose image generates `W` over `Z_p`.
    pub fn unit_generator(&self) -> (&Quaternion, WittElement) {
        (&self.u0, self.u_image)
    }

    /// The global element `T0` with `rho(T0) = z^{-1} S`.
    pub fn t0(&self) -> &Quaternion {
        &self.t0
    }

    /// `rho(x)` for `x` with denominators prime to `p`.
    pub fn apply(&self, x: &Quaternion) -> Result<StabilizerElement> {
        let c = linalg::vec_mat(x.coords(), &self.decompose);
        let w = |r: usize| self.ring.from_rational(&c[r]);
        let a = w(0)? + w(1)? * self.u_image;
        let b = (w(2)? + w(3)? * self.u_image) * self.z_inv;
        StabilizerElement::new(a, b)
    }

    /// `rho` applied to integer order-basis coordinates.
    pub fn apply_coords(&self, coords: &[BigInt; 4]) -> StabilizerElement {
        let zero = StabilizerElement::from_witt(self.ring.zero());
        (0..4).fold(zero, |acc, r| {
            let k = self.ring.from_rational(&BigRational::from_integer(coords[r].clone())).expect("integer");
            acc + StabilizerElement::from_witt(k) * self.images[r]
        })
    }

    /// Checks that the norm of `x` read in `Z_p` matches the image's norm.
    pub fn norm_compatible(&self, x: &Quaternion) -> Result<bool> {
        let img = self.apply(x)?;
        let n = ZpElement::from_rational(&x.reduced_norm(), self.p(), self.precision())?;
        Ok(img.norm() == n)
    }
}
