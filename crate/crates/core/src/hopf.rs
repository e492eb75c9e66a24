//! Coproduct formulas, the `p = 2` norm relation, and degree-one cocycles,
//! all checked on finite truncations of `S^0_2`.
//!
//! A degree-one class `[c]` is a cocycle exactly when `c(xy) = c(x) + c(y)`,
//! so every check here is a statement about pairs of group elements.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::error::{Error, Result};
use crate::local::{DigitVector, StabilizerElement};
use crate::witt::{FqElement, WittRing};

/// Pair loops larger than this are sampled.
pub const PAIR_LIMIT: u64 = 1 << 24;
pub const SAMPLE_PAIRS: u64 = 10_000;
pub const SAMPLE_SEED: u64 = 0x5eed_0002;

/// `6` for `p = 2` (digits `t_1..t_5`), `4` otherwise.
pub fn default_depth(p: u64) -> u32 {
    if p == 2 {
        6
    } else {
        4
    }
}

/// `S^0_2` modulo `S^d`, or its norm-one subgroup.
#[derive(Clone, Debug)]
pub struct TruncatedGroup {
    p: u64,
    depth: u32,
    ring: WittRing,
    norm_one: bool,
    /// Teichmüller digits of every element of `W / p^N`, indexed by `u + v m`.
    table: Arc<Vec<Vec<FqElement>>>,
}

impl TruncatedGroup {
    pub fn new(p: u64, depth: u32, norm_one: bool) -> Result<Self> {
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if depth < 2 {
            return Err(Error::InvalidParameter(format!("truncation depth {depth} is below 2")));
        }
        if norm_one && depth % 2 == 1 {
            // the norm is only defined modulo p^(d/2)
            return Err(Error::InvalidParameter("the norm-one truncation needs an even depth".into()));
        }
        let ring = WittRing::for_prime(p, depth.div_ceil(2))?;
        let m = ring.modulus();
        if m * m > 1 << 22 {
            return Err(Error::PrecisionOverflow { p, precision: ring.precision() });
        }
        let table = (0..m * m).map(|i| ring.elem(i % m, i / m).digits()).collect();
        Ok(TruncatedGroup { p, depth, ring, norm_one, table: Arc::new(table) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn is_norm_one(&self) -> bool {
        self.norm_one
    }

    /// Order of the full truncation, `p^(2(d-1))`.
    pub fn full_order(&self) -> u64 {
        (self.p * self.p).pow(self.depth - 1)
    }

    /// Element with digits `t_1, ..., t_{d-1}`.
    pub fn from_digits(&self, t: &[FqElement]) -> StabilizerElement {
        let f = self.ring.field();
        let n = 2 * self.ring.precision() as usize - 1;
        let mut entries = t.to_vec();
        entries.resize(n, f.zero());
        DigitVector::new(entries).reassemble(self.ring)
    }

    /// `t_1, ..., t_{d-1}`.
    pub fn digits(&self, x: &StabilizerElement) -> Vec<FqElement> {
        let m = self.ring.modulus();
        let look = |w: crate::witt::WittElement| {
            let (u, v) = w.pair();
            &self.table[(u + v * m) as usize]
        };
        let (da, db) = (look(x.a()), look(x.b()));
        debug_assert!(da[0] == self.ring.field().one(), "truncated group elements lie in S^0");
        (1..self.depth as usize).map(|i| if i % 2 == 1 { db[i / 2] } else { da[i / 2] }).collect()
    }

    /// Product followed by truncation modulo `S^d`.
    pub fn mul(&self, x: &StabilizerElement, y: &StabilizerElement) -> StabilizerElement {
        let xy = *x * *y;
        self.from_digits(&self.digits(&xy))
    }

    /// `p^(2(d-1))`, divided by `p^(d/2 - 1)` for the norm-one subgroup
    /// (the norm maps onto `1 + p Z_p` modulo `p^(d/2)`).
    pub fn order(&self) -> u64 {
        if self.norm_one {
            self.full_order() / self.p.pow(self.ring.precision() - 1)
        } else {
            self.full_order()
        }
    }

    pub fn contains(&self, x: &StabilizerElement) -> bool {
        x.in_s0() && (!self.norm_one || x.norm_one_truncated())
    }

    /// Element number `idx` of the full truncation in digit order.
    fn nth(&self, mut idx: u64) -> StabilizerElement {
        let f = self.ring.field();
        let q = self.p * self.p;
        let t: Vec<FqElement> = (1..self.depth)
            .map(|_| {
                let e = f.from_index(idx % q);
                idx /= q;
                e
            })
            .collect();
        self.from_digits(&t)
    }

    /// Every element, in digit order.
    pub fn elements(&self) -> Vec<StabilizerElement> {
        (0..self.full_order()).map(|i| self.nth(i)).filter(|x| self.contains(x)).collect()
    }

    /// Uniform element, by rejection for the norm-one subgroup.
    pub fn random<R: Rng>(&self, rng: &mut R) -> StabilizerElement {
        loop {
            let x = self.nth(rng.gen_range(0..self.full_order()));
            if self.contains(&x) {
                return x;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    Exhaustive { pairs: u64 },
    Sampled { pairs: u64, seed: u64 },
}

impl Coverage {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Coverage::Exhaustive { .. })
    }
}

/// Runs `check` over every pair, or over a seeded sample when there are too
/// many; returns the first failing pair.
fn over_pairs<F>(group: &TruncatedGroup, mut check: F) -> (Coverage, Option<(Vec<FqElement>, Vec<FqElement>)>)
where
    F: FnMut(&[FqElement], &[FqElement], &[FqElement]) -> bool,
{
    let n = group.order();
    let exhaustive = n.checked_mul(n).is_some_and(|n2| n2 <= PAIR_LIMIT);
    let mut fail = None;
    let mut run = |x: &StabilizerElement, y: &StabilizerElement, dx: &[FqElement], dy: &[FqElement]| {
        let dxy = group.digits(&(*x * *y));
        if fail.is_none() && !check(dx, dy, &dxy) {
            fail = Some((dx.to_vec(), dy.to_vec()));
        }
    };
    let coverage = if exhaustive {
        let els = group.elements();
        let digits: Vec<Vec<FqElement>> = els.iter().map(|x| group.digits(x)).collect();
        for (x, dx) in els.iter().zip(&digits) {
            for (y, dy) in els.iter().zip(&digits) {
                run(x, y, dx, dy);
            }
        }
        let n = els.len() as u64;
        Coverage::Exhaustive { pairs: n * n }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        for _ in 0..SAMPLE_PAIRS {
            let (x, y) = (group.random(&mut rng), group.random(&mut rng));
            let (dx, dy) = (group.digits(&x), group.digits(&y));
            run(&x, &y, &dx, &dy);
        }
        Coverage::Sampled { pairs: SAMPLE_PAIRS, seed: SAMPLE_SEED }
    };
    (coverage, fail)
}

/// `Delta(t_k)` evaluated on digit vectors `x, y`.
pub fn coproduct_formula(k: u32, p: u64, x: &[FqElement], y: &[FqElement]) -> Result<FqElement> {
    let t = |v: &[FqElement], i: usize| v[i - 1];
    match (k, p) {
        (1, _) => Ok(t(x, 1) + t(y, 1)),
        (2, 2) => Ok(t(x, 2) + t(x, 1) * t(y, 1).pow(2) + t(y, 2)),
        (3, 2) => {
            Ok(t(x, 3) + t(x, 1) * t(y, 2).pow(2) + t(x, 2) * t(y, 1) + t(x, 1).pow(2) * t(y, 1).pow(2) + t(y, 3))
        }
        (2 | 3, _) => Err(Error::InvalidParameter(format!("no coproduct formula for t_{k} at odd p"))),
        _ => Err(Error::InvalidParameter(format!("no coproduct formula for t_{k}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductReport {
    pub k: u32,
    pub p: u64,
    pub depth: u32,
    pub group_order: u64,
    pub holds: bool,
    pub coverage: Coverage,
    pub counterexample: Option<(Vec<FqElement>, Vec<FqElement>)>,
}

/// Checks `t_k(xy) = Delta(t_k)(x, y)` on the full truncation.
///
/// `t_k(xy)` only depends on `x, y` modulo `S^(k+1)`, so any depth above
/// `k` gives a complete check; the depth used is the largest one up to
/// [`default_depth`] that keeps the pair loop exhaustive.
pub fn verify_coproduct(k: u32, p: u64) -> Result<CoproductReport> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let dummy = vec![crate::witt::QuadField::new(p)?.zero(); 3];
    coproduct_formula(k, p, &dummy, &dummy)?;
    let fits = |d: u32| (p * p).checked_pow(2 * (d - 1)).is_some_and(|n2| n2 <= PAIR_LIMIT);
    let depth = (k + 1..=default_depth(p).max(k + 1)).rev().find(|&d| fits(d)).unwrap_or(k + 1);
    verify_coproduct_at(k, &TruncatedGroup::new(p, depth, false)?)
}

pub fn verify_coproduct_at(k: u32, group: &TruncatedGroup) -> Result<CoproductReport> {
    if group.depth() <= k {
        return Err(Error::InsufficientPrecision { needed: k + 1, have: group.depth() });
    }
    let p = group.p();
    let mut err = None;
    let (coverage, counterexample) = over_pairs(group, |x, y, xy| match coproduct_formula(k, p, x, y) {
        Ok(v) => v == xy[k as usize - 1],
        Err(e) => {
            err = Some(e);
            false
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(CoproductReport {
        k,
        p,
        depth: group.depth(),
        group_order: group.order(),
        holds: counterexample.is_none(),
        coverage,
        counterexample,
    })
}

/// `s_1 = t_2 + t_2^2 + t_1^3` on every element of `S^0_2` modulo `S^4` at
/// `p = 2`; returns the number of elements checked.
pub fn verify_s1_relation(p: u64) -> Result<(bool, u64)> {
    if p != 2 {
        return Err(Error::InvalidParameter("the s_1 relation is stated for p = 2".into()));
    }
    let g = TruncatedGroup::new(2, 4, false)?;
    let els = g.elements();
    let ok = els.iter().all(|x| {
        let t = g.digits(x);
        let rhs = t[1] + t[1].pow(2) + t[0].pow(3);
        let s1 = x.norm_digits().expect("in S^0")[0];
        rhs.in_prime_field() && rhs.coeffs().0 == s1
    });
    Ok((ok, els.len() as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigitBase {
    T1,
    /// `t_3 + t_1 t_2`.
    T3PlusT1T2,
}

/// `base^(p^twist)`, a polynomial in the digit coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DigitFunctional {
    pub base: DigitBase,
    pub twist: u32,
}

impl DigitFunctional {
    pub fn new(base: DigitBase, twist: u32) -> Self {
        DigitFunctional { base, twist }
    }

    /// Digits this functional reads.
    pub fn needs(&self) -> u32 {
        match self.base {
            DigitBase::T1 => 1,
            DigitBase::T3PlusT1T2 => 3,
        }
    }

    pub fn eval(&self, t: &[FqElement]) -> FqElement {
        let v = match self.base {
            DigitBase::T1 => t[0],
            DigitBase::T3PlusT1T2 => t[2] + t[0] * t[1],
        };
        (0..self.twist).fold(v, |acc, _| acc.frobenius())
    }

    pub fn name(&self, p: u64) -> String {
        let base = match self.base {
            DigitBase::T1 => "t1",
            DigitBase::T3PlusT1T2 => "t3+t1t2",
        };
        match (self.twist, self.base) {
            (0, _) => base.to_string(),
            (_, DigitBase::T1) => format!("t1^{}", p.pow(self.twist)),
            (_, DigitBase::T3PlusT1T2) => format!("(t3+t1t2)^{}", p.pow(self.twist)),
        }
    }
}

/// The listed `H^1` classes: `t_1, t_1^p`, and at `p = 2` also
/// `t_3 + t_1 t_2` and its square.
pub fn listed_classes(p: u64) -> Vec<DigitFunctional> {
    let mut out = vec![DigitFunctional::new(DigitBase::T1, 0), DigitFunctional::new(DigitBase::T1, 1)];
    if p == 2 {
        out.push(DigitFunctional::new(DigitBase::T3PlusT1T2, 0));
        out.push(DigitFunctional::new(DigitBase::T3PlusT1T2, 1));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub name: String,
    pub additive: bool,
    /// `F_p`-rank of the image of the functional.
    pub image_rank: usize,
    pub coverage: Coverage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub p: u64,
    pub depth: u32,
    pub group_order: u64,
    pub classes: Vec<ClassReport>,
    /// `p = 2`: whether `t_3 + t_1 t_2` fails additivity on the full
    /// truncation, as it must.
    pub negative_control: Option<bool>,
}

impl CocycleReport {
    pub fn all_pass(&self) -> bool {
        self.classes.iter().all(|c| c.additive) && self.negative_control != Some(false)
    }
}

pub fn is_additive(group: &TruncatedGroup, c: &DigitFunctional) -> (bool, Coverage) {
    let (coverage, fail) = over_pairs(group, |x, y, xy| c.eval(xy) == c.eval(x) + c.eval(y));
    (fail.is_none(), coverage)
}

/// `F_p`-rank of `{c(x)}` inside `F_{p^2}`.
pub fn image_rank(group: &TruncatedGroup, c: &DigitFunctional) -> usize {
    let p = group.p();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let values: Vec<FqElement> = if group.full_order() <= PAIR_LIMIT {
        group.elements().iter().map(|x| c.eval(&group.digits(x))).collect()
    } else {
        (0..SAMPLE_PAIRS).map(|_| c.eval(&group.digits(&group.random(&mut rng)))).collect()
    };
    let nonzero: Vec<(u64, u64)> = values.iter().map(|v| v.coeffs()).filter(|&v| v != (0, 0)).collect();
    match nonzero.first() {
        None => 0,
        Some(&(a, b)) => {
            let independent = nonzero.iter().any(|&(c, d)| !(a * d + p * p - b * c % p).is_multiple_of(p));
            if independent {
                2
            } else {
                1
            }
        }
    }
}

/// Additivity of every listed class on the norm-one truncation at the
/// default depth; sampled when exhaustive checking is out of reach.
pub fn verify_cocycles(p: u64) -> Result<CocycleReport> {
    verify_cocycles_at(&TruncatedGroup::new(p, default_depth(p), true)?)
}

pub fn verify_cocycles_at(group: &TruncatedGroup) -> Result<CocycleReport> {
    let p = group.p();
    let classes = listed_classes(p);
    if let Some(c) = classes.iter().find(|c| c.needs() >= group.depth()) {
        return Err(Error::InsufficientPrecision { needed: c.needs() + 1, have: group.depth() });
    }
    let mut additive = vec![true; classes.len()];
    let (coverage, _) = over_pairs(group, |x, y, xy| {
        for (ok, c) in additive.iter_mut().zip(&classes) {
            *ok &= c.eval(xy) == c.eval(x) + c.eval(y);
        }
        true
    });
    let reports = classes
        .iter()
        .zip(additive)
        .map(|(c, additive)| ClassReport { name: c.name(p), additive, image_rank: image_rank(group, c), coverage })
        .collect();
    let negative_control = if p == 2 {
        let full = TruncatedGroup::new(p, group.depth(), false)?;
        Some(!is_additive(&full, &DigitFunctional::new(DigitBase::T3PlusT1T2, 0)).0)
    } else {
        None
    };
    Ok(CocycleReport { p, depth: group.depth(), group_order: group.order(), classes: reports, negative_control })
}
