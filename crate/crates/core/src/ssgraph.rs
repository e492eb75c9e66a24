//! Supersingular j-invariants over `F_{p^2}` and their `l`-isogeny graphs
//! for `l` in `{2, 3}`.

use std::collections::VecDeque;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::arith;
use crate::error::{Error, Result};
use crate::witt::{FqElement, QuadField};

/// Upper-triangular coefficients `(i, j, c)`, `i >= j`, of the symmetric
/// classical modular polynomial; `c` multiplies `X^i Y^j + X^j Y^i`
/// (once when `i = j`).
type Table = &'static [(u32, u32, &'static str)];

const PHI_2: Table = &[
    (3, 0, "1"),
    (2, 2, "-1"),
    (2, 1, "1488"),
    (2, 0, "-162000"),
    (1, 1, "40773375"),
    (1, 0, "8748000000"),
    (0, 0, "-157464000000000"),
];

const PHI_3: Table = &[
    (4, 0, "1"),
    (3, 3, "-1"),
    (3, 2, "2232"),
    (3, 1, "-1069956"),
    (3, 0, "36864000"),
    (2, 2, "2587918086"),
    (2, 1, "8900222976000"),
    (2, 0, "452984832000000"),
    (1, 1, "-770845966336000000"),
    (1, 0, "1855425871872000000000"),
];

/// `Phi_l(X, Y)` as a dense integer coefficient matrix `c[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolynomial {
    ell: u64,
    coeffs: Vec<Vec<BigInt>>,
}

impl ModularPolynomial {
    pub fn new(ell: u64) -> Result<Self> {
        let table = match ell {
            2 => PHI_2,
            3 => PHI_3,
            _ => return Err(Error::InvalidParameter(format!("l must be 2 or 3 (got {ell})"))),
        };
        let n = ell as usize + 2;
        let mut coeffs = vec![vec![BigInt::from(0); n]; n];
        for &(i, j, c) in table {
            let c = BigInt::from_str(c).expect("table entries are integers");
            coeffs[i as usize][j as usize] = c.clone();
            coeffs[j as usize][i as usize] = c;
        }
        Ok(ModularPolynomial { ell, coeffs })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn coeffs(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = BigInt::from(0);
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                acc += c * x.pow(i as u32) * y.pow(j as u32);
            }
        }
        acc
    }

    /// Coefficients in `Y` of `Phi_l(j, Y)` over `F_{p^2}`, constant first.
    pub fn specialize(&self, j: FqElement) -> Vec<FqElement> {
        let f = j.field();
        let p = f.p() as u128;
        let reduce = |c: &BigInt| f.from_int(arith::big_mod(c, p) as i64);
        (0..self.coeffs.len())
            .map(|b| {
                (0..self.coeffs.len()).fold(f.zero(), |acc, a| acc + reduce(&self.coeffs[a][b]) * j.pow(a as u128))
            })
            .collect()
    }

    /// Integrity checks on the embedded table: the Kronecker congruence
    /// `Phi_l = (X^l - Y)(X - Y^l) mod l` and factorizations at CM points.
    pub fn checksum(&self) -> bool {
        let l = self.ell;
        let lb = BigInt::from(l);
        let n = self.coeffs.len();
        let mut kron = vec![vec![BigInt::from(0); n]; n];
        // (X^l - Y)(X - Y^l) = X^(l+1) - X^l Y^l - XY + Y^(l+1)
        kron[l as usize + 1][0] += 1;
        kron[l as usize][l as usize] -= 1;
        kron[1][1] -= 1;
        kron[0][l as usize + 1] += 1;
        let congruent = (0..n).all(|i| (0..n).all(|j| ((&self.coeffs[i][j] - &kron[i][j]) % &lb) == BigInt::from(0)));
        let y = |v: i64| BigInt::from(v);
        let cubic_root_at_zero = |r: i64| {
            // Phi_l(0, Y) against its known factorization, at a few sample Y
            (-3..=3).all(|t| {
                let t = y(t);
                let expect = if l == 2 { (&t - y(r)).pow(3) } else { &t * (&t - y(r)).pow(3) };
                self.eval(&y(0), &t) == expect
            })
        };
        let cm_loops: &[i64] = if l == 2 { &[1728, 8000, -3375] } else { &[0, 54000, -32768] };
        congruent
            && cubic_root_at_zero(if l == 2 { 54000 } else { -12288000 })
            && cm_loops.iter().all(|&v| self.eval(&y(v), &y(v)) == y(0))
    }
}

/// General Weierstrass coefficients `[a1, a2, a3, a4, a6]` of the fixed
/// model with invariant `j`.
pub fn curve_model(j: FqElement) -> [FqElement; 5] {
    let f = j.field();
    let (z, o) = (f.zero(), f.one());
    match f.p() {
        2 if j.is_zero() => [z, z, o, z, z],
        2 => [o, z, z, z, j.inv().expect("nonzero")],
        3 if j.is_zero() => [z, z, z, -o, z],
        3 => [z, o, z, z, -j.inv().expect("nonzero")],
        _ => {
            let j1728 = f.from_int(1728);
            if j.is_zero() {
                [z, z, z, z, o]
            } else if j == j1728 {
                [z, z, z, o, z]
            } else {
                let k = j * (j1728 - j).inv().expect("j != 1728");
                [z, z, z, f.from_int(3) * k, f.from_int(2) * k]
            }
        }
    }
}

/// `(j, discriminant)` of a Weierstrass model.
pub fn j_invariant(a: &[FqElement; 5]) -> (Option<FqElement>, FqElement) {
    let f = a[0].field();
    let c = |n: i64| f.from_int(n);
    let [a1, a2, a3, a4, a6] = *a;
    let b2 = a1 * a1 + c(4) * a2;
    let b4 = c(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + c(4) * a6;
    let b8 = a1 * a1 * a6 + c(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = b2 * b2 - c(24) * b4;
    let disc = -b2 * b2 * b8 - c(8) * b4 * b4 * b4 - c(27) * b6 * b6 + c(9) * b2 * b4 * b6;
    (disc.inv().map(|d| c4 * c4 * c4 * d), disc)
}

/// `#E(F_{p^2})`, by a character sum for short models and a full scan in
/// characteristic 2 and 3.
pub fn count_points(a: &[FqElement; 5]) -> u64 {
    let f = a[0].field();
    let els: Vec<FqElement> = f.elements().collect();
    let [a1, a2, a3, a4, a6] = *a;
    if f.p() <= 3 {
        let mut n = 1;
        for &x in &els {
            for &y in &els {
                if y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6 {
                    n += 1;
                }
            }
        }
        return n;
    }
    let mut roots = vec![0u64; els.len()];
    for &y in &els {
        roots[(y * y).index() as usize] += 1;
    }
    1 + els.iter().map(|&x| roots[(x * x * x + a2 * x * x + a4 * x + a6).index() as usize]).sum::<u64>()
}

/// Supersingular iff `#E(F_{p^2}) = 1 mod p`.
pub fn is_supersingular_by_count(j: FqElement) -> bool {
    count_points(&curve_model(j)) % j.field().p() == 1
}

/// Coefficient of `x^(p-1)` in `(x^3 + A x + B)^((p-1)/2)`, for `p >= 5`.
pub fn hasse_invariant(j: FqElement) -> FqElement {
    let f = j.field();
    let p = f.p();
    assert!(p >= 5, "the Hasse coefficient test needs p >= 5");
    let [_, _, _, a, b] = curve_model(j);
    let m = (p - 1) / 2;
    let mut fact = vec![1u64; m as usize + 1];
    for i in 1..=m as usize {
        fact[i] = fact[i - 1] * i as u64 % p;
    }
    let inv = |x: u64| arith::inv_mod(x as u128, p as u128).expect("m < p") as u64;
    let mut acc = f.zero();
    // x-degree 3i + e = p - 1 with i + e + k = m
    for i in 0..=m {
        let Some(e) = (p - 1).checked_sub(3 * i) else { break };
        let Some(k) = m.checked_sub(i + e) else { continue };
        let multinomial =
            fact[m as usize] * inv(fact[i as usize]) % p * inv(fact[e as usize]) % p * inv(fact[k as usize]) % p;
        acc = acc + f.from_int(multinomial as i64) * a.pow(e as u128) * b.pow(k as u128);
    }
    acc
}

/// Number of supersingular j-invariants: `floor(p/12)` plus `0, 1, 1, 2`
/// for `p = 1, 5, 7, 11 mod 12`, and `1` for `p = 2, 3`.
pub fn mass_formula(p: u64) -> u64 {
    if p < 5 {
        return 1;
    }
    p / 12
        + match p % 12 {
            1 => 0,
            5 | 7 => 1,
            _ => 2,
        }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupersingularLocus {
    p: u64,
    js: Vec<FqElement>,
}

impl SupersingularLocus {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Sorted by field index.
    pub fn js(&self) -> &[FqElement] {
        &self.js
    }

    pub fn len(&self) -> usize {
        self.js.len()
    }

    pub fn is_empty(&self) -> bool {
        self.js.is_empty()
    }

    pub fn position(&self, j: FqElement) -> Option<usize> {
        self.js.binary_search_by_key(&j.index(), |x| x.index()).ok()
    }
}

pub fn supersingular_j(p: u64) -> Result<SupersingularLocus> {
    let f = QuadField::new(p)?;
    let js = f
        .elements()
        .filter(|&j| if p < 5 { is_supersingular_by_count(j) } else { hasse_invariant(j).is_zero() })
        .collect();
    Ok(SupersingularLocus { p, js })
}

/// `(#j in F_p, #conjugate pairs)`; `None` if the locus is not Galois
/// stable.
pub fn field_split(locus: &SupersingularLocus) -> Option<(usize, usize)> {
    let rational = locus.js.iter().filter(|j| j.in_prime_field()).count();
    let rest: Vec<&FqElement> = locus.js.iter().filter(|j| !j.in_prime_field()).collect();
    if !rest.iter().all(|j| locus.position(j.frobenius()).is_some()) {
        return None;
    }
    Some((rational, rest.len() / 2))
}

/// Multiplicity of `r` as a root of `poly` (constant term first).
fn root_multiplicity(poly: &[FqElement], r: FqElement) -> u32 {
    let mut cur = poly.to_vec();
    let mut mult = 0;
    while cur.len() > 1 {
        // synthetic division by (Y - r)
        let n = cur.len();
        let mut q = vec![cur[0].field().zero(); n - 1];
        let mut carry = cur[n - 1];
        for i in (0..n - 1).rev() {
            q[i] = carry;
            carry = cur[i] + carry * r;
        }
        if !carry.is_zero() {
            break;
        }
        mult += 1;
        cur = q;
    }
    mult
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyGraph {
    ell: u64,
    locus: SupersingularLocus,
    /// Per vertex: `(target, multiplicity)` sorted by target.
    edges: Vec<Vec<(usize, u32)>>,
}

impl IsogenyGraph {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn locus(&self) -> &SupersingularLocus {
        &self.locus
    }

    pub fn edges(&self) -> &[Vec<(usize, u32)>] {
        &self.edges
    }

    pub fn multiplicity(&self, from: usize, to: usize) -> u32 {
        self.edges[from].iter().find(|e| e.0 == to).map_or(0, |e| e.1)
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        self.edges[v].iter().map(|e| e.1).sum()
    }

    /// Out-degree `l + 1` everywhere, i.e. every root of `Phi_l(j, Y)` is
    /// supersingular.
    pub fn is_regular(&self) -> bool {
        (0..self.edges.len()).all(|v| self.out_degree(v) == self.ell as u32 + 1)
    }

    /// `j -> j'` iff `j' -> j`.
    pub fn support_symmetric(&self) -> bool {
        let n = self.edges.len();
        (0..n).all(|a| (0..n).all(|b| (self.multiplicity(a, b) > 0) == (self.multiplicity(b, a) > 0)))
    }

    /// Frobenius maps edges to edges of equal multiplicity.
    pub fn galois_stable(&self) -> bool {
        let js = self.locus.js();
        let sigma = |v: usize| self.locus.position(js[v].frobenius());
        (0..js.len()).all(|a| {
            self.edges[a].iter().all(|&(b, m)| match (sigma(a), sigma(b)) {
                (Some(sa), Some(sb)) => self.multiplicity(sa, sb) == m,
                _ => false,
            })
        })
    }
}

pub fn isogeny_graph(p: u64, ell: u64) -> Result<IsogenyGraph> {
    if ell == p {
        return Err(Error::InvalidParameter(format!("l = {ell} must differ from p")));
    }
    let phi = ModularPolynomial::new(ell)?;
    let locus = supersingular_j(p)?;
    let edges = locus
        .js()
        .iter()
        .map(|&j| {
            let poly = phi.specialize(j);
            locus
                .js()
                .iter()
                .enumerate()
                .filter_map(|(t, &jj)| Some((t, root_multiplicity(&poly, jj))).filter(|e| e.1 > 0))
                .collect()
        })
        .collect();
    Ok(IsogenyGraph { ell, locus, edges })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KohelReport {
    pub vertices: usize,
    pub connected: bool,
    pub diameter: usize,
    /// Every ordered pair is joined by walks of both parities, hence by
    /// walks of every sufficiently large length.
    pub parity_mix: bool,
    pub regular: bool,
}

pub fn verify_kohel(p: u64, ell: u64) -> Result<KohelReport> {
    Ok(kohel_report(&isogeny_graph(p, ell)?))
}

pub fn kohel_report(g: &IsogenyGraph) -> KohelReport {
    let n = g.edges.len();
    let mut connected = true;
    let mut parity_mix = true;
    let mut diameter = 0;
    for s in 0..n {
        // BFS on (vertex, parity)
        let mut dist = vec![[usize::MAX; 2]; n];
        dist[s][0] = 0;
        let mut queue = VecDeque::from([(s, 0usize)]);
        while let Some((v, par)) = queue.pop_front() {
            for &(w, _) in &g.edges[v] {
                let np = 1 - par;
                if dist[w][np] == usize::MAX {
                    dist[w][np] = dist[v][par] + 1;
                    queue.push_back((w, np));
                }
            }
        }
        for d in &dist {
            let shortest = d[0].min(d[1]);
            if shortest == usize::MAX {
                connected = false;
            } else {
                diameter = diameter.max(shortest);
            }
            parity_mix &= d[0] != usize::MAX && d[1] != usize::MAX;
        }
    }
    KohelReport { vertices: n, connected, diameter, parity_mix, regular: g.is_regular() }
}
