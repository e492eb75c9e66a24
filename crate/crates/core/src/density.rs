//! Witness searches in `O[1/l]` and the density verdicts assembled from
//! them.
//!
//! [`certify`] searches for witnesses and hands them to [`evaluate`], which
//! re-derives every claim from the bare elements. Replaying a certificate
//! calls [`evaluate`] directly, so a replay performs exactly the checks of
//! the original run without any search.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::q;
use crate::local::{FrattiniImage, Splitting, StabilizerElement};
use crate::quatalg::{
    algebra_and_order, enumerate_norm_trace, represent_norm_trace, GammaElement, MaximalOrder, OrderPoint, Quaternion,
};
use crate::witt::{FqElement, QuadField, ZpElement};

pub const DEFAULT_K_EXTRA: u32 = 6;
pub const DEFAULT_M_MAX: u32 = 6;
/// Norms up to this bound are enumerated exhaustively; larger ones use the
/// Cornacchia walk.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;
const TRACE_ATTEMPTS: i64 = 64;

/// `l` topologically generates `Z_p^x` (`Z_2^x / {+-1}` for `p = 2`).
pub fn is_topological_generator(ell: u64, p: u64) -> bool {
    if ell < 2 || ell.is_multiple_of(p) {
        return false;
    }
    if p == 2 {
        return matches!(ell % 8, 3 | 5);
    }
    let m = (p * p) as u128;
    let target = p * (p - 1);
    let base = ell as u128 % m;
    let mut x = base;
    for k in 1..target {
        if x == 1 {
            return k == target;
        }
        x = x * base % m;
    }
    x == 1
}

fn is_qp_square(x: &BigRational, p: u64) -> bool {
    if x.is_zero() {
        return true;
    }
    let vn = arith::valuation(x.numer(), p) as i64;
    let vd = arith::valuation(x.denom(), p) as i64;
    if (vn - vd) % 2 != 0 {
        return false;
    }
    let pb = BigInt::from(p);
    let strip = |n: &BigInt, v: i64| n / pb.pow(v as u32);
    let unit = strip(x.numer(), vn) * strip(x.denom(), vd);
    if p == 2 {
        arith::big_mod(&unit, 8) == 1
    } else {
        arith::legendre_u64(arith::big_mod(&unit, p as u128) as u64, p) == 1
    }
}

/// `x^2 + alpha x + 1` with `alpha = A / l^e` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPolyTarget {
    alpha: BigRational,
    p: u64,
    ell: u64,
    e: u32,
}

impl MinPolyTarget {
    pub fn new(alpha: BigRational, p: u64, ell: u64) -> Result<Self> {
        let e = crate::quatalg::ell_exponent(&BigRational::from_integer(alpha.denom().clone()), ell)
            .ok_or_else(|| Error::InvalidTarget(format!("denominator of {alpha} is not a power of {ell}")))?;
        let disc = &alpha * &alpha - q(4);
        if !disc.is_negative() {
            return Err(Error::InvalidTarget(format!("discriminant {disc} is not negative")));
        }
        if is_qp_square(&disc, p) {
            return Err(Error::InvalidTarget(format!("discriminant {disc} is a square in Q_{p}")));
        }
        Ok(MinPolyTarget { alpha, p, ell, e: e as u32 })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `e` with `alpha = A / l^e`.
    pub fn ell_exponent(&self) -> u32 {
        self.e
    }
}

fn pow_big(ell: u64, e: u32) -> BigInt {
    BigInt::from(ell).pow(e)
}

/// First order element of norm `n` (and trace `t` if given): the smallest
/// coordinates for enumerable norms, otherwise the deterministic walk.
fn find_order_element(order: &MaximalOrder, n: &BigInt, t: Option<&BigInt>) -> Option<OrderPoint> {
    if n <= &BigInt::from(ENUMERATION_LIMIT) {
        return enumerate_norm_trace(order, n, t).into_iter().next();
    }
    match t {
        Some(t) => represent_norm_trace(order, n, t),
        None => {
            let bound = BigInt::from(2) * n.sqrt();
            (0..TRACE_ATTEMPTS)
                .map(|k| BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }))
                .filter(|t| t.abs() < bound)
                .find_map(|t| represent_norm_trace(order, n, &t))
        }
    }
}

/// `x` in `O[1/l]` with `x^2 + alpha x + 1 = 0`, searching `y = l^k x` for
/// `k = e, ..., e + k_extra`.
pub fn solve_minpoly_in_order(order: &MaximalOrder, target: &MinPolyTarget, k_extra: u32) -> Result<GammaElement> {
    let ell = target.ell;
    let numer = target.alpha.numer().clone();
    for k in target.e..=target.e + k_extra {
        let n = pow_big(ell, 2 * k);
        let t = -&numer * pow_big(ell, k - target.e);
        let Some(pt) = find_order_element(order, &n, Some(&t)) else { continue };
        let scale = BigRational::new(BigInt::one(), pow_big(ell, k));
        let x = pt.element.scale(&scale);
        if !x.satisfies_minpoly(&target.alpha) {
            return Err(Error::Internal(format!("witness for alpha = {} fails its minimal polynomial", target.alpha)));
        }
        return GammaElement::new(order, x, ell);
    }
    Err(Error::SearchExhausted(format!(
        "no y with N(y) = {ell}^(2k), Tr(y) = {}*{ell}^(k-{}) for k <= {}",
        -numer,
        target.e,
        target.e + k_extra
    )))
}

/// `(m, alpha)` with `alpha = (-p r - 2) / l^(m p (p-1))` and `m` minimal
/// such that `alpha^2 < 4`.
pub fn lambda_alpha(p: u64, ell: u64, r: u64) -> (u32, BigRational) {
    let num = BigInt::from(-((p * r) as i64) - 2);
    (0u32..)
        .map(|m| {
            let e = m * (p * (p - 1)) as u32;
            (m, BigRational::new(num.clone(), pow_big(ell, e)))
        })
        .find(|(_, a)| a * a < q(4))
        .expect("alpha shrinks without bound")
}

/// The Hurwitz `p = 2` target `6 / l^4`.
pub fn y_alpha(ell: u64) -> BigRational {
    BigRational::new(BigInt::from(6), pow_big(ell, 4))
}

/// Generator `c` of the norm-one subgroup `C_{p+1}` of `F_{p^2}^x` (first in
/// element order), its lifted coefficient `a~` (symmetric residue of
/// `-Tr(c)`), and `alpha = a~ / l^(m (p-1))` with `m` minimal such that
/// `alpha^2 < 4`.
pub fn torus_alpha(p: u64, ell: u64) -> Result<(FqElement, i64, u32, BigRational)> {
    let f = QuadField::new(p)?;
    let c = f
        .elements()
        .find(|x| x.multiplicative_order() == Some(p + 1))
        .ok_or_else(|| Error::Internal("no generator of C_{p+1}".into()))?;
    let a = (p - c.trace() % p) % p;
    let a_sym = if a > p / 2 { a as i64 - p as i64 } else { a as i64 };
    let (m, alpha) = (0u32..)
        .map(|m| (m, BigRational::new(BigInt::from(a_sym), pow_big(ell, m * (p - 1) as u32))))
        .find(|(_, al)| al * al < q(4))
        .expect("alpha shrinks without bound");
    Ok((c, a_sym, m, alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessRole {
    /// `x_1`, built from the square `r_1 = 1`.
    LambdaSquare,
    /// `x_2`, built from the smallest non-square `r_2`.
    LambdaNonSquare,
    LambdaI,
    LambdaK,
    LambdaY,
    LambdaYPrime,
    TorusLift,
    NormEll,
}

impl WitnessRole {
    pub const ALL: [WitnessRole; 8] = [
        WitnessRole::LambdaSquare,
        WitnessRole::LambdaNonSquare,
        WitnessRole::LambdaI,
        WitnessRole::LambdaK,
        WitnessRole::LambdaY,
        WitnessRole::LambdaYPrime,
        WitnessRole::TorusLift,
        WitnessRole::NormEll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WitnessRole::LambdaSquare => "lambda_x1",
            WitnessRole::LambdaNonSquare => "lambda_x2",
            WitnessRole::LambdaI => "lambda_i",
            WitnessRole::LambdaK => "lambda_k",
            WitnessRole::LambdaY => "lambda_y",
            WitnessRole::LambdaYPrime => "lambda_y_prime",
            WitnessRole::TorusLift => "torus_lift",
            WitnessRole::NormEll => "norm_ell",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        WitnessRole::ALL.into_iter().find(|r| r.name() == s)
    }

    pub fn provenance(self) -> &'static str {
        match self {
            WitnessRole::LambdaSquare => "root of x^2 + alpha x + 1, alpha = (-p r - 2)/l^(m p(p-1)), r = 1",
            WitnessRole::LambdaNonSquare => {
                "root of x^2 + alpha x + 1, alpha = (-p r - 2)/l^(m p(p-1)), r = least non-square mod p"
            }
            WitnessRole::LambdaI => "Hurwitz unit i",
            WitnessRole::LambdaK => "Hurwitz unit k",
            WitnessRole::LambdaY => "root of x^2 + (6/l^4) x + 1",
            WitnessRole::LambdaYPrime => "omega^-1 y omega",
            WitnessRole::TorusLift => "root of x^2 + alpha x + 1 lifting a generator of C_(p+1)",
            WitnessRole::NormEll => "l^-m times an order element of norm l^(2m+1)",
        }
    }

    pub fn is_lambda(self) -> bool {
        !matches!(self, WitnessRole::TorusLift | WitnessRole::NormEll)
    }

    fn expected_norm_exponent(self) -> i64 {
        if self == WitnessRole::NormEll {
            1
        } else {
            0
        }
    }
}

/// The bare data of a witness; everything else is recomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub role: WitnessRole,
    pub element: Quaternion,
    pub alpha: Option<BigRational>,
}

/// The `Lambda` generators: `x_1, x_2` for odd `p`, `i, k, y, y'` for `p = 2`.
pub fn construct_lambda_generators(order: &MaximalOrder, ell: u64, k_extra: u32) -> Result<Vec<Witness>> {
    let p = order.p();
    let alg = order.algebra();
    if p == 2 {
        let y_target = MinPolyTarget::new(y_alpha(ell), p, ell)?;
        let y = solve_minpoly_in_order(order, &y_target, k_extra)?.element().clone();
        let omega = order.basis_element(3);
        let y_prime = &(&omega.conjugate() * &y) * &omega;
        return Ok(vec![
            Witness {
                role: WitnessRole::LambdaI,
                element: Quaternion::from_ints(alg, [0, 1, 0, 0]),
                alpha: Some(q(0)),
            },
            Witness {
                role: WitnessRole::LambdaK,
                element: Quaternion::from_ints(alg, [0, 0, 0, 1]),
                alpha: Some(q(0)),
            },
            Witness { role: WitnessRole::LambdaY, element: y, alpha: Some(y_alpha(ell)) },
            Witness { role: WitnessRole::LambdaYPrime, element: y_prime, alpha: Some(y_alpha(ell)) },
        ]);
    }
    let mut out = Vec::new();
    for (role, r) in [(WitnessRole::LambdaSquare, 1), (WitnessRole::LambdaNonSquare, arith::smallest_nonresidue(p))] {
        let (_, alpha) = lambda_alpha(p, ell, r);
        let target = MinPolyTarget::new(alpha.clone(), p, ell)?;
        let x = solve_minpoly_in_order(order, &target, k_extra)?;
        out.push(Witness { role, element: x.element().clone(), alpha: Some(alpha) });
    }
    Ok(out)
}

/// An element of `Gamma^1` whose residue generates `C_{p+1}`.
pub fn lift_torus_generator(order: &MaximalOrder, ell: u64, k_extra: u32) -> Result<Witness> {
    let (_, _, _, alpha) = torus_alpha(order.p(), ell)?;
    let target = MinPolyTarget::new(alpha.clone(), order.p(), ell)?;
    let x = solve_minpoly_in_order(order, &target, k_extra)?;
    Ok(Witness { role: WitnessRole::TorusLift, element: x.element().clone(), alpha: Some(alpha) })
}

/// `x = l^-m y` with `y` in the order of norm `l^(2m+1)`, so `N(x) = l`.
pub fn find_norm_ell_element(order: &MaximalOrder, ell: u64, m_max: u32) -> Result<GammaElement> {
    for m in 0..=m_max {
        let n = pow_big(ell, 2 * m + 1);
        if let Some(pt) = find_order_element(order, &n, None) {
            let x = pt.element.scale(&BigRational::new(BigInt::one(), pow_big(ell, m)));
            return GammaElement::new(order, x, ell);
        }
    }
    Err(Error::SearchExhausted(format!("no order element of norm {ell}^(2m+1) for m <= {m_max}")))
}

/// `F_p`-rank of the images; full means rank 2 (`p > 2`) or 4 (`p = 2`).
pub fn frattini_span_check(images: &[FrattiniImage], p: u64) -> (bool, usize) {
    let mut rows: Vec<Vec<u64>> = images
        .iter()
        .map(|im| {
            im.components()
                .iter()
                .flat_map(|c| {
                    let (a, b) = c.coeffs();
                    [a, b]
                })
                .collect()
        })
        .collect();
    let full = if p == 2 { 4 } else { 2 };
    let rank = rank_mod_p(&mut rows, p);
    (rank == full, rank)
}

fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else { continue };
        rows.swap(rank, piv);
        let inv = arith::inv_mod(rows[rank][c] as u128, p as u128).expect("nonzero mod p") as u64;
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_multiple_of(p) {
                let f = rows[r][c];
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// `t_1(x) != 0`.
    One,
    /// `t_1(x) = 0`, `t_3(x) != 0`.
    Two,
}

/// The `p = 2` digit claims on `rho(x) = (1 + a) + b S`.
pub fn verify_claims_p2(sp: &Splitting, x: &Quaternion, claim: Claim) -> Result<bool> {
    if sp.p() != 2 {
        return Err(Error::InvalidParameter("digit claims are specific to p = 2".into()));
    }
    if sp.precision() < 2 {
        return Err(Error::InsufficientPrecision { needed: 2, have: sp.precision() });
    }
    let img = sp.apply(x)?;
    if !img.in_s0() {
        return Ok(false);
    }
    let d = img.digits()?;
    Ok(match claim {
        Claim::One => !d.t(1).is_zero(),
        Claim::Two => d.t(1).is_zero() && !d.t(3).is_zero(),
    })
}

/// `x' = omega^-1 x omega` keeps even digits and multiplies odd digits by
/// the residue of `-omega`.
pub fn verify_claim3(sp: &Splitting, x: &Quaternion, x_prime: &Quaternion) -> Result<bool> {
    let (dx, dy) = (sp.apply(x)?.digits()?, sp.apply(x_prime)?.digits()?);
    let w = sp.ring().field().generator();
    Ok(dx.entries().iter().zip(dy.entries()).enumerate().all(|(idx, (a, b))| {
        let i = idx + 1;
        if i % 2 == 0 {
            a == b
        } else {
            *b == w * *a
        }
    }))
}

/// `Tr(a') = (-alpha - 2)/p` and `N(b) = p N(a') - (alpha + 2)/p` at
/// precision `N - 1`, where `rho(x) = (1 + p a') + b S`.
pub fn master_relation(img: &StabilizerElement, alpha: &BigRational) -> Result<bool> {
    let p = img.p();
    let n1 = img.precision() - 1;
    let a_prime = (img.a() - img.ring().one()).div_p()?;
    let (na, ta) = a_prime.norm_trace()?;
    let pq = BigRational::from_integer(BigInt::from(p));
    let shifted = ZpElement::from_rational(&((alpha + q(2)) / &pq), p, n1)?;
    let nb = img.b().truncate(n1)?.norm();
    let pz = ZpElement::new(p, n1, p as i128)?;
    Ok(ta == -shifted && nb == pz * na - shifted)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameters {
    pub p: u64,
    pub ell: u64,
    pub precision: u32,
    pub k_extra: u32,
    pub m_max: u32,
}

impl Parameters {
    pub fn new(p: u64, ell: u64) -> Self {
        Parameters { p, ell, precision: crate::witt::DEFAULT_PRECISION, k_extra: DEFAULT_K_EXTRA, m_max: DEFAULT_M_MAX }
    }

    pub fn validate(&self) -> Result<()> {
        if !arith::is_prime_u64(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        if self.ell < 2 || self.ell.is_multiple_of(self.p) {
            return Err(Error::InvalidParameter(format!(
                "l = {} must be at least 2 and prime to p = {}",
                self.ell, self.p
            )));
        }
        if self.precision < 2 {
            return Err(Error::InsufficientPrecision { needed: 2, have: self.precision });
        }
        crate::witt::WittRing::for_prime(self.p, self.precision).map(|_| ())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
}

/// Local data recomputed from a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub norm: BigRational,
    pub trace: BigRational,
    pub denominator_exponent: Option<u32>,
    /// `t_1, ..., t_{2N-1}` when the image lies in `S^0_2`.
    pub digits: Option<Vec<FqElement>>,
    pub norm_digits: Option<Vec<u64>>,
    pub frattini: Option<FrattiniImage>,
    pub residue_order: Option<u64>,
    pub in_tilde_s2: Option<bool>,
    pub checks: Vec<Check>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.ok).map(|c| c.name).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    HypothesisFailed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub reason: Option<String>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict { status: Status::Pass, reason: None }
    }

    fn with(status: Status, reason: impl Into<String>) -> Self {
        Verdict { status, reason: Some(reason.into()) }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Pass
    }

    /// `pass`, `fail: ...`, `hypothesis_failed: ...` or `inconclusive: ...`.
    pub fn label(&self) -> String {
        let head = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HypothesisFailed => "hypothesis_failed",
            Status::Inconclusive => "inconclusive",
        };
        match &self.reason {
            Some(r) => format!("{head}: {r}"),
            None => head.to_string(),
        }
    }
}

/// A search stage that produced no witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchFailure {
    pub stage: String,
    pub message: String,
    pub inconclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCertificate {
    pub parameters: Parameters,
    pub witnesses: Vec<(Witness, WitnessReport)>,
    pub failures: Vec<SearchFailure>,
    pub span_rank: usize,
    pub topological_generator: bool,
    /// `Lambda` dense in `Sl^0_2`.
    pub thm_lambda: Verdict,
    /// `Gamma^1` dense in `Sl_2`.
    pub cor_gamma1: Verdict,
    /// `Gamma` dense in `S_2` (in `t~S_2` for `p = 2`).
    pub thm_gamma: Verdict,
}

impl DensityCertificate {
    pub fn witness(&self, role: WitnessRole) -> Option<&(Witness, WitnessReport)> {
        self.witnesses.iter().find(|(w, _)| w.role == role)
    }

    pub fn all_pass(&self) -> bool {
        self.thm_lambda.holds() && self.cor_gamma1.holds() && self.thm_gamma.holds()
    }

    pub fn any_inconclusive(&self) -> bool {
        [&self.thm_lambda, &self.cor_gamma1, &self.thm_gamma].iter().any(|v| v.status == Status::Inconclusive)
    }
}

fn failure(stage: &str, e: &Error) -> SearchFailure {
    SearchFailure { stage: stage.into(), message: e.to_string(), inconclusive: matches!(e, Error::SearchExhausted(_)) }
}

/// Runs every search; failures are recorded rather than raised.
pub fn search_witnesses(params: &Parameters) -> Result<(Vec<Witness>, Vec<SearchFailure>)> {
    params.validate()?;
    let (_, order) = algebra_and_order(params.p)?;
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    match construct_lambda_generators(&order, params.ell, params.k_extra) {
        Ok(ws) => witnesses.extend(ws),
        Err(e) => failures.push(failure("lambda", &e)),
    }
    match lift_torus_generator(&order, params.ell, params.k_extra) {
        Ok(w) => witnesses.push(w),
        Err(e) => failures.push(failure("torus_lift", &e)),
    }
    match find_norm_ell_element(&order, params.ell, params.m_max) {
        Ok(x) => witnesses.push(Witness { role: WitnessRole::NormEll, element: x.element().clone(), alpha: None }),
        Err(e) => failures.push(failure("norm_ell", &e)),
    }
    Ok((witnesses, failures))
}

pub fn certify(params: &Parameters) -> Result<DensityCertificate> {
    let (witnesses, failures) = search_witnesses(params)?;
    evaluate(params, witnesses, failures)
}

fn expected_alpha(params: &Parameters, role: WitnessRole) -> Result<Option<BigRational>> {
    let (p, ell) = (params.p, params.ell);
    Ok(match role {
        WitnessRole::LambdaSquare => Some(lambda_alpha(p, ell, 1).1),
        WitnessRole::LambdaNonSquare => Some(lambda_alpha(p, ell, arith::smallest_nonresidue(p)).1),
        WitnessRole::LambdaI | WitnessRole::LambdaK => Some(q(0)),
        WitnessRole::LambdaY | WitnessRole::LambdaYPrime => Some(y_alpha(ell)),
        WitnessRole::TorusLift => Some(torus_alpha(p, ell)?.3),
        WitnessRole::NormEll => None,
    })
}

fn lambda_roles(p: u64) -> Vec<WitnessRole> {
    if p == 2 {
        vec![WitnessRole::LambdaI, WitnessRole::LambdaK, WitnessRole::LambdaY, WitnessRole::LambdaYPrime]
    } else {
        vec![WitnessRole::LambdaSquare, WitnessRole::LambdaNonSquare]
    }
}

fn report(
    params: &Parameters,
    order: &MaximalOrder,
    sp: &Splitting,
    w: &Witness,
    all: &[Witness],
) -> Result<WitnessReport> {
    let (p, ell) = (params.p, params.ell);
    let x = &w.element;
    let (norm, trace) = x.norm_trace();
    let mut checks = Vec::new();
    let mut push = |name: &'static str, ok: bool| checks.push(Check { name, ok });

    let gamma = GammaElement::new(order, x.clone(), ell).ok();
    push("in_gamma", gamma.is_some());
    push("norm", gamma.as_ref().map(|g| g.norm_exponent()) == Some(w.role.expected_norm_exponent()));
    let expected = expected_alpha(params, w.role)?;
    if expected.is_some() || w.alpha.is_some() {
        push("alpha_formula", w.alpha == expected);
        push("minpoly", w.alpha.as_ref().is_some_and(|a| x.satisfies_minpoly(a)));
    }

    let img = sp.apply(x)?;
    let membership = img.membership_exact(&norm, ell);
    let digits = img.digits().ok().map(|d| d.entries().to_vec());
    let norm_digits = img.norm_digits().ok();
    let frattini = if w.role.is_lambda() && membership.in_sl0 { img.frattini_image().ok() } else { None };
    let residue_order = img.a().residue().multiplicative_order();
    let t = |i: usize| digits.as_ref().map(|d| d[i - 1]);

    if w.role.is_lambda() {
        push("in_sl0", membership.in_sl0);
    }
    match w.role {
        WitnessRole::LambdaSquare | WitnessRole::LambdaNonSquare => {
            let r = if w.role == WitnessRole::LambdaSquare { 1 } else { arith::smallest_nonresidue(p) };
            push("t1_norm_residue", t(1).map(|t1| t1.norm()) == Some(r));
            let master = w.alpha.as_ref().map(|a| master_relation(&img, a).unwrap_or(false)).unwrap_or(false);
            push("master_relation", master);
        }
        WitnessRole::LambdaI | WitnessRole::LambdaK => {
            let unit = if w.role == WitnessRole::LambdaI { [0, 1, 0, 0] } else { [0, 0, 0, 1] };
            push("element", *x == Quaternion::from_ints(order.algebra(), unit));
            push("claim1", verify_claims_p2(sp, x, Claim::One)?);
            if w.role == WitnessRole::LambdaK {
                let i = all.iter().find(|v| v.role == WitnessRole::LambdaI);
                let ok = match i {
                    Some(i) => {
                        let ti = sp.apply(&i.element)?.digits().ok().map(|d| d.t(1));
                        let g = sp.ring().field().generator();
                        matches!((ti, t(1)), (Some(a), Some(b)) if b == g * a)
                    }
                    None => false,
                };
                push("t1_twist", ok);
            }
        }
        WitnessRole::LambdaY | WitnessRole::LambdaYPrime => {
            let a16 = ZpElement::from_rational(&y_alpha(ell), 2, 4).map(|z| z.value() == 6).unwrap_or(false);
            push("alpha_6_mod_16", a16);
            push("claim2", verify_claims_p2(sp, x, Claim::Two)?);
            if w.role == WitnessRole::LambdaYPrime {
                let y = all.iter().find(|v| v.role == WitnessRole::LambdaY);
                let (conj_ok, claim3) = match y {
                    Some(y) => {
                        let omega = order.basis_element(3);
                        let expect = &(&omega.conjugate() * &y.element) * &omega;
                        (expect == *x, verify_claim3(sp, &y.element, x)?)
                    }
                    None => (false, false),
                };
                push("conjugate_of_y", conj_ok);
                push("claim3", claim3);
            }
        }
        WitnessRole::TorusLift => {
            push("norm_one", norm.is_one());
            push("residue_order", residue_order == Some(p + 1));
        }
        WitnessRole::NormEll => {
            push("norm_ell", norm == BigRational::from_integer(BigInt::from(ell)));
        }
    }
    if p == 2 {
        push("tilde_s2", membership.in_tilde_s2 == Some(true));
    }
    Ok(WitnessReport {
        norm,
        trace,
        denominator_exponent: gamma.map(|g| g.denominator_exponent()),
        digits,
        norm_digits,
        frattini,
        residue_order,
        in_tilde_s2: membership.in_tilde_s2,
        checks,
    })
}

/// Re-derives every report and verdict from bare witnesses.
pub fn evaluate(
    params: &Parameters,
    witnesses: Vec<Witness>,
    failures: Vec<SearchFailure>,
) -> Result<DensityCertificate> {
    params.validate()?;
    let (p, ell) = (params.p, params.ell);
    let (_, order) = algebra_and_order(p)?;
    let sp = Splitting::new(&order, ell, params.precision)?;
    let mut reports = Vec::new();
    for w in &witnesses {
        if w.element.algebra() != order.algebra() {
            return Err(Error::InvalidParameter(format!("witness {} lives in another algebra", w.role.name())));
        }
        reports.push(report(params, &order, &sp, w, &witnesses)?);
    }
    let pairs: Vec<(Witness, WitnessReport)> = witnesses.into_iter().zip(reports).collect();
    let find = |role: WitnessRole| pairs.iter().find(|(w, _)| w.role == role);
    let failed_stage = |stage: &str| failures.iter().find(|f| f.stage == stage);

    let stage_verdict = |stage: &str, roles: &[WitnessRole]| -> Option<Verdict> {
        if let Some(f) = failed_stage(stage) {
            let status = if f.inconclusive { Status::Inconclusive } else { Status::Fail };
            return Some(Verdict::with(status, f.message.clone()));
        }
        for &role in roles {
            match find(role) {
                None => return Some(Verdict::with(Status::Fail, format!("missing witness {}", role.name()))),
                Some((_, r)) if !r.passed() => {
                    return Some(Verdict::with(
                        Status::Fail,
                        format!("{} failed {}", role.name(), r.failed_checks().join(", ")),
                    ))
                }
                _ => {}
            }
        }
        None
    };

    let roles = lambda_roles(p);
    let images: Vec<FrattiniImage> = roles.iter().filter_map(|&r| find(r).and_then(|(_, rep)| rep.frattini)).collect();
    let (full, span_rank) = frattini_span_check(&images, p);
    let thm_lambda = stage_verdict("lambda", &roles).unwrap_or_else(|| {
        if full {
            Verdict::pass()
        } else {
            Verdict::with(Status::Fail, format!("Frattini images have rank {span_rank}"))
        }
    });

    let cor_gamma1 = if !thm_lambda.holds() {
        Verdict::with(thm_lambda.status, "requires the Lambda certificate")
    } else {
        stage_verdict("torus_lift", &[WitnessRole::TorusLift]).unwrap_or_else(Verdict::pass)
    };

    let topological_generator = is_topological_generator(ell, p);
    let thm_gamma = if !topological_generator {
        Verdict::with(Status::HypothesisFailed, "not a topological generator")
    } else if !cor_gamma1.holds() {
        Verdict::with(cor_gamma1.status, "requires the Gamma^1 certificate")
    } else {
        stage_verdict("norm_ell", &[WitnessRole::NormEll]).unwrap_or_else(Verdict::pass)
    };

    Ok(DensityCertificate {
        parameters: params.clone(),
        witnesses: pairs,
        failures,
        span_rank,
        topological_generator,
        thm_lambda,
        cor_gamma1,
        thm_gamma,
    })
}
