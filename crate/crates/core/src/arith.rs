//! Integer helpers: primality, modular square roots, Cornacchia, and
//! small-modulus arithmetic on `u128`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // Callers keep m < 2^62, so the product fits.
    (a % m) * (b % m) % m
}

pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u128, m: u128) -> Option<u128> {
    let (a, m) = (a as i128, m as i128);
    let e = (a.rem_euclid(m)).extended_gcd(&m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m) as u128)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a as u128, d as u128, n as u128);
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n as u128);
            if x == (n - 1) as u128 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn legendre_u64(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a as u128, ((p - 1) / 2) as u128, p as u128) == 1 {
        1
    } else {
        -1
    }
}

pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&n| legendre_u64(n, p) == -1).expect("odd prime has a non-residue")
}

const SMALL_PRIMES: [u32; 24] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

/// Miller–Rabin with the first 24 prime bases. A false positive only costs
/// a failed Cornacchia attempt; every witness is re-verified exactly.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &q in SMALL_PRIMES.iter() {
        if (n % q).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for &a in SMALL_PRIMES.iter() {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod_prime(a: &BigUint, p: &BigUint) -> Option<BigUint> {
    let a = a % p;
    if a.is_zero() {
        return Some(a);
    }
    let one = BigUint::one();
    let p1 = p - &one;
    let half = &p1 >> 1u32;
    if a.modpow(&half, p) != one {
        return None;
    }
    let s = p1.trailing_zeros().unwrap_or(0);
    let q = &p1 >> s;
    let mut z = BigUint::from(2u32);
    while z.modpow(&half, p) == one {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1u32), p);
    while t != one {
        let mut i = 0;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = &t2 * &t2 % p;
            i += 1;
            if i == m {
                return None;
            }
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = &b * &b % p;
        }
        m = i;
        c = &b * &b % p;
        t = &t * &c % p;
        r = &r * &b % p;
    }
    Some(r)
}

/// Solves `x^2 + d*y^2 = m` for an odd prime `m` (or `m = 2`) by
/// Cornacchia's algorithm. Returns non-negative `(x, y)`.
pub fn cornacchia(d: &BigUint, m: &BigUint) -> Option<(BigUint, BigUint)> {
    if m.is_zero() {
        return None;
    }
    let neg_d = (m - (d % m)) % m;
    let mut r0 = if m == &BigUint::from(2u32) { neg_d.clone() } else { sqrt_mod_prime(&neg_d, m)? };
    if &r0 * 2u32 < *m {
        r0 = m - &r0;
    }
    let bound = m.sqrt();
    let (mut a, mut b) = (m.clone(), r0);
    while b > bound {
        let r = &a % &b;
        a = b;
        b = r;
    }
    let rest = m - &b * &b;
    if !(&rest % d).is_zero() {
        return None;
    }
    let c = &rest / d;
    let y = c.sqrt();
    if &y * &y == c {
        Some((b, y))
    } else {
        None
    }
}

pub fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut n = n.clone();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// Reduces a big integer into `[0, m)`.
pub fn big_mod(n: &BigInt, m: u128) -> u128 {
    let r = n.mod_floor(&BigInt::from(m));
    match r.to_u128() {
        Some(v) => v,
        None => unreachable!("residue below modulus"),
    }
}

pub fn big_from_sign(neg: bool, mag: BigUint) -> BigInt {
    BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, mag)
}

/// Small prime factors (trial division below `limit`), returning the
/// factorization and the remaining cofactor.
pub fn trial_factor(n: &BigUint, limit: u32) -> (Vec<(u32, u32)>, BigUint) {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut q = 2u32;
    while q < limit {
        if (&n % q).is_zero() {
            let mut e = 0;
            while (&n % q).is_zero() {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    (out, n)
}
