//! Conjugacy-class counts in free groups and zeta functions of finite graphs.
//!
//! Length-indexed sequences use position `r − 1` for length `r` unless they are power series,
//! in which case position `i` holds the coefficient of `zⁱ`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{divisors, mobius, totient};
use crate::error::{invalid, precondition, Error, Result};
use crate::freegroup::{brute_force_cyclic_words, count_cyclically_reduced, FreeRank, Word};
use crate::graph::{char_poly_int, reversed_char_poly, Graph};
use crate::linegraph::line_digraph;
use crate::poly::Poly;

/// Largest length accepted by the totient and Möbius sums.
pub const ARITH_LIMIT: u64 = 1_000_000;
const ORBIT_LIMIT: f64 = 5e8;

/// `det(I − uA)` with rational coefficients.
pub type ZetaPoly = Poly<BigRational>;

/// Element, cyclically reduced element and conjugacy-class counts for lengths `1..=r_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountTriple {
    pub n: Vec<BigInt>,
    pub c: Vec<BigInt>,
    pub cc: Vec<BigInt>,
}

impl CountTriple {
    pub fn max_length(&self) -> usize {
        self.n.len()
    }
}

fn check_length(r_max: u64) -> Result<()> {
    if r_max > ARITH_LIMIT {
        return Err(Error::Guard { what: "divisor sums".into(), required: r_max as f64, limit: ARITH_LIMIT as f64 });
    }
    Ok(())
}

/// `N(r) = 2k(2k − 1)^{r−1}`, `C(r)` by the closed form and `CC(r)` by the totient convolution.
pub fn free_group_counts(k: u32, r_max: u32) -> Result<CountTriple> {
    let rank = FreeRank::new(k)?;
    check_length(r_max as u64)?;
    let a = BigInt::from(rank.degree());
    let n = (1..=r_max).map(|r| BigInt::from(2 * k) * num_traits::pow(a.clone(), r as usize - 1)).collect();
    let c = (1..=r_max).map(|r| count_cyclically_reduced(k, r)).collect::<Result<Vec<_>>>()?;
    let cc = totient_convolution(&c)?;
    Ok(CountTriple { n, c, cc })
}

/// `CC(r) = (1/r) Σ_{d|r} φ(d) C(r/d)` from `c[r − 1] = C(r)`; the division must be exact.
pub fn totient_convolution(c: &[BigInt]) -> Result<Vec<BigInt>> {
    check_length(c.len() as u64)?;
    (1..=c.len() as u64)
        .map(|r| {
            let s: BigInt = divisors(r).into_iter().map(|d| BigInt::from(totient(d)) * &c[(r / d - 1) as usize]).sum();
            let (q, rem) = s.div_rem(&BigInt::from(r));
            if !rem.is_zero() {
                return Err(Error::InexactDivision(format!("totient sum {s} at length {r}")));
            }
            Ok(q)
        })
        .collect()
}

/// Number of rotation orbits of cyclically reduced words of length `r`, counted by generating one
/// least rotation per orbit.
pub fn burnside_oracle(k: u32, r: u32) -> Result<BigInt> {
    FreeRank::new(k)?;
    if r == 0 {
        return Err(invalid("word length must be at least 1"));
    }
    let required = (2.0 * k as f64 - 1.0).powi(r as i32) / r as f64;
    if required > ORBIT_LIMIT {
        return Err(Error::Guard { what: "rotation orbits".into(), required, limit: ORBIT_LIMIT });
    }
    // Letters 0..2k with inverse pairs (2i, 2i + 1); a[0] is a sentinel.
    let n = r as usize;
    let mut a = vec![0u32; n + 1];
    let mut count = 0u64;
    necklaces(1, 1, n, 2 * k, &mut a, &mut count);
    Ok(BigInt::from(count))
}

fn cancels(x: u32, y: u32) -> bool {
    x ^ 1 == y
}

fn necklaces(t: usize, p: usize, n: usize, q: u32, a: &mut [u32], count: &mut u64) {
    if t > n {
        if n % p == 0 && !cancels(a[n], a[1]) {
            *count += 1;
        }
        return;
    }
    let start = a[t - p];
    for j in start..q {
        if t > 1 && cancels(a[t - 1], j) {
            continue;
        }
        a[t] = j;
        necklaces(t + 1, if j == start { p } else { t }, n, q, a, count);
    }
}

/// Rotation orbits of the explicit list of cyclically reduced words, via their least rotations.
pub fn brute_force_orbits(k: u32, r: u32) -> Result<usize> {
    let words = brute_force_cyclic_words(k, r)?;
    let orbits: HashSet<Vec<i32>> = words.iter().map(least_rotation).collect();
    Ok(orbits.len())
}

fn least_rotation(w: &Word) -> Vec<i32> {
    let n = w.len();
    (0..n).map(|s| w.0[s..].iter().chain(&w.0[..s]).copied().collect::<Vec<_>>()).min().unwrap_or_default()
}

fn check_series_length(n_max: usize) -> Result<()> {
    check_length(n_max as u64)
}

/// Coefficients of `1/(1 − (2k−1)z) + 1/(1 − z) + 2(k−1)/(1 − z²) − 2k` through `z^{n_max}`.
pub fn cyclically_reduced_series(k: u32, n_max: usize) -> Result<Vec<BigInt>> {
    let rank = FreeRank::new(k)?;
    check_series_length(n_max)?;
    let q = |v: i64| BigRational::from_integer(v.into());
    let one = Poly::one();
    let len = n_max + 1;
    let a = rank.degree() as i64;
    let t1 = one.series_div(&Poly::new(vec![q(1), q(-a)]), len).expect("nonzero constant term");
    let t2 = one.series_div(&Poly::new(vec![q(1), q(-1)]), len).expect("nonzero constant term");
    let t3 = Poly::constant(q(2 * (k as i64 - 1))).series_div(&Poly::new(vec![q(1), q(0), q(-1)]), len).expect("nonzero constant term");
    Ok((0..len)
        .map(|i| {
            let mut v = t1[i].clone() + &t2[i] + &t3[i];
            if i == 0 {
                v -= q(2 * k as i64);
            }
            v.to_integer()
        })
        .collect())
}

/// Coefficients of `𝓗(z) = 1 + Σ_d φ(d) 𝓕[C](z^d)` through `z^{n_max}` by truncated Lambert
/// summation; the coefficient of `z^r` is `r·CC(r)`.
pub fn cc_gf_coeffs(k: u32, n_max: usize) -> Result<Vec<BigInt>> {
    let c = cyclically_reduced_series(k, n_max)?;
    let mut h = vec![BigInt::zero(); n_max + 1];
    h[0] = BigInt::one();
    for d in 1..=n_max {
        let phi = BigInt::from(totient(d as u64));
        for j in 1..=n_max / d {
            h[d * j] += &phi * &c[j];
        }
    }
    Ok(h)
}

/// Series of `1 + z/(1−z)² + 2(k−1)z²/(1−z²)² + Σ_d φ(d)(1/(1 − (2k−1)z^d) − 1)`.
pub fn cc_gf_closed_form(k: u32, n_max: usize) -> Result<Vec<BigInt>> {
    lambert_closed_form(k, n_max, 1, 2)
}

/// Series of the displayed expansion `1 + (k−1)z²/(1−z²)² + Σ_d φ(d)(1/(1 − (2k−1)z^d) − 1)`,
/// which omits the `z/(1−z)²` term and halves the even-length correction.
pub fn cc_gf_printed_form(k: u32, n_max: usize) -> Result<Vec<BigInt>> {
    lambert_closed_form(k, n_max, 0, 1)
}

fn lambert_closed_form(k: u32, n_max: usize, linear: i64, even: i64) -> Result<Vec<BigInt>> {
    let rank = FreeRank::new(k)?;
    check_series_length(n_max)?;
    let a = BigInt::from(rank.degree());
    let mut h = vec![BigInt::zero(); n_max + 1];
    h[0] = BigInt::one();
    for (n, slot) in h.iter_mut().enumerate().skip(1) {
        *slot += BigInt::from(linear * n as i64);
        if n % 2 == 0 {
            *slot += BigInt::from(even * (k as i64 - 1) * (n as i64 / 2));
        }
        for d in divisors(n as u64) {
            *slot += BigInt::from(totient(d)) * num_traits::pow(a.clone(), n / d as usize);
        }
    }
    Ok(h)
}

/// Series `1 + Σ_{r≥1} CC(r) z^r` for `F_k`.
pub fn free_group_cc_series(k: u32, n_max: u32) -> Result<Vec<BigInt>> {
    let t = free_group_counts(k, n_max)?;
    Ok(std::iter::once(BigInt::one()).chain(t.cc).collect())
}

/// Cauchy product of two class-count series, truncated to the shorter one.
pub fn product_cc_gf(a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>> {
    if !a.first().is_some_and(One::is_one) || !b.first().is_some_and(One::is_one) {
        return Err(precondition("class-count series must start with the identity class 1"));
    }
    let n = a.len().min(b.len());
    Ok((0..n).map(|i| (0..=i).map(|j| &a[j] * &b[i - j]).sum()).collect())
}

/// Number of points of `Zᵈ` with `ℓ¹` norm `r`, for `r = 0..=n_max`, by direct enumeration.
pub fn lattice_sphere_counts(dim: u32, n_max: u32) -> Result<Vec<BigInt>> {
    let side = 2.0 * n_max as f64 + 1.0;
    let required = side.powi(dim as i32);
    if required > 1e8 {
        return Err(Error::Guard { what: "lattice enumeration".into(), required, limit: 1e8 });
    }
    let m = n_max as i64;
    let mut counts = vec![0u64; n_max as usize + 1];
    let mut x = vec![-m; dim as usize];
    loop {
        let norm: i64 = x.iter().map(|v| v.abs()).sum();
        if norm <= m {
            counts[norm as usize] += 1;
        }
        let mut i = 0;
        loop {
            if i == x.len() {
                return Ok(counts.into_iter().map(BigInt::from).collect());
            }
            x[i] += 1;
            if x[i] <= m {
                break;
            }
            x[i] = -m;
            i += 1;
        }
    }
}

/// `ζ_G(u) = det(I − uA(G))`.
pub fn zeta(g: &Graph) -> ZetaPoly {
    reversed_char_poly(&g.adjacency_int())
}

/// `(1 − u²)^{r−1}(1 − u)(1 − (2r − 1)u)`, the zeta function of `G_r`.
pub fn free_group_zeta(r: u32) -> Result<ZetaPoly> {
    let rank = FreeRank::new(r)?;
    let q = |v: i64| BigRational::from_integer(v.into());
    let a = rank.degree() as i64;
    let p = &Poly::new(vec![q(1), q(0), q(-1)]).pow(r - 1) * &Poly::new(vec![q(1), q(-1)]);
    Ok(&p * &Poly::new(vec![q(1), q(-a)]))
}

/// `N_i` for `i = 1..=n_max` from `−u ζ′/ζ = Σ N_i uⁱ` (Newton's identities).
pub fn cycle_counts_from_zeta(z: &ZetaPoly, n_max: usize) -> Result<Vec<BigRational>> {
    if !z.coeff(0).is_one() {
        return Err(precondition("zeta polynomial must have constant term 1"));
    }
    let mut p: Vec<BigRational> = Vec::with_capacity(n_max);
    for i in 1..=n_max {
        let mut v = -z.coeff(i) * BigRational::from_integer(i.into());
        for j in 1..i {
            v -= z.coeff(j) * &p[i - j - 1];
        }
        p.push(v);
    }
    Ok(p)
}

/// Integer cycle counts `N_i = tr(Aⁱ)` for `i = 1..=n_max`, read off the zeta polynomial.
pub fn cycle_counts(g: &Graph, n_max: usize) -> Result<Vec<BigInt>> {
    Ok(cycle_counts_from_zeta(&zeta(g), n_max)?.into_iter().map(|x| x.to_integer()).collect())
}

/// `P_n = (1/n) Σ_{d|n} μ(d) N_{n/d}` from `counts[i − 1] = N_i`; the division must be exact.
pub fn primitive_from_counts(counts: &[BigInt]) -> Result<Vec<BigInt>> {
    check_length(counts.len() as u64)?;
    (1..=counts.len() as u64)
        .map(|n| {
            let s: BigInt = divisors(n).into_iter().map(|d| BigInt::from(mobius(d)) * &counts[(n / d - 1) as usize]).sum();
            let (q, rem) = s.div_rem(&BigInt::from(n));
            if !rem.is_zero() {
                return Err(Error::InexactDivision(format!("Möbius sum {s} at length {n}")));
            }
            Ok(q)
        })
        .collect()
}

/// Number of rotation classes of primitive closed walks of each length `1..=n_max`.
pub fn primitive_cycle_counts(g: &Graph, n_max: usize) -> Result<Vec<BigInt>> {
    primitive_from_counts(&cycle_counts(g, n_max)?)
}

/// `Π_n (1 − uⁿ)^{P_n}` truncated after `u^{n_max}`, with `primitive[n − 1] = P_n ≥ 0`.
pub fn euler_product(primitive: &[BigInt], n_max: usize) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::zero(); n_max + 1];
    out[0] = BigInt::one();
    for (i, p) in primitive.iter().enumerate().take(n_max) {
        if p.is_negative() {
            return Err(invalid("primitive counts must be nonnegative"));
        }
        let n = i + 1;
        // (1 − uⁿ)^P = Σ_j (−1)^j C(P, j) u^{nj}.
        let mut factor = vec![BigInt::zero(); n_max / n + 1];
        let mut c = BigInt::one();
        for (j, slot) in factor.iter_mut().enumerate() {
            *slot = if j % 2 == 0 { c.clone() } else { -c.clone() };
            c = c * (p - BigInt::from(j)) / BigInt::from(j + 1);
        }
        let mut next = vec![BigInt::zero(); n_max + 1];
        for (e, a) in out.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, f) in factor.iter().enumerate() {
                if e + n * j > n_max {
                    break;
                }
                next[e + n * j] += a * f;
            }
        }
        out = next;
    }
    Ok(out)
}

/// Two polynomials expected to coincide.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaIdentity {
    pub left: ZetaPoly,
    pub right: ZetaPoly,
}

impl ZetaIdentity {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// Ihara's form `(1 − u²)^{E−V} det((1 + (r−1)u²)I − uA)` against Bass's `det(I − uM)` with `M`
/// the adjacency matrix of the line digraph, for a connected `r`-regular simple graph, `r ≥ 2`.
pub fn ihara_identity_check(g: &Graph) -> Result<ZetaIdentity> {
    if g.is_directed() || g.has_loops() {
        return Err(precondition("Ihara's formula needs an undirected graph without loops"));
    }
    let r = g.regular_degree().ok_or_else(|| precondition("graph is not regular"))?;
    if r < 2 {
        return Err(precondition("degree must be at least 2"));
    }
    if !g.connectivity().connected {
        return Err(precondition("graph is not connected"));
    }
    let n = g.n();
    let q = |v: i64| BigRational::from_integer(v.into());
    // det(sI − uA) = Σ_j p_j s^j u^{n−j} with det(xI − A) = Σ_j p_j x^j.
    let p = char_poly_int(&g.adjacency_int());
    let s = Poly::new(vec![q(1), q(0), q(r as i64 - 1)]);
    let mut det = Poly::zero();
    for j in 0..=n {
        let term = &s.pow(j as u32) * &Poly::monomial(BigRational::from_integer(p.coeff(j)), n - j);
        det = &det + &term;
    }
    let excess = g.edge_count() as i64 - n as i64;
    let left = &Poly::new(vec![q(1), q(0), q(-1)]).pow(excess as u32) * &det;
    let right = zeta(&line_digraph(g)?.graph);
    Ok(ZetaIdentity { left, right })
}

/// `det(I − uA(G))` against `det(I − uA(𝓛(G)))` for a directed graph; equality means the
/// nonzero spectra coincide with multiplicity.
pub fn directed_zeta_check(g: &Graph) -> Result<ZetaIdentity> {
    if !g.is_directed() {
        return Err(precondition("graph must be directed"));
    }
    Ok(ZetaIdentity { left: zeta(g), right: zeta(&line_digraph(g)?.graph) })
}

/// Connection polynomial `1 + c_1 x + … + c_L x^L` of the shortest linear recurrence generating
/// `seq` (Berlekamp–Massey over the rationals).
pub fn berlekamp_massey(seq: &[BigInt]) -> Poly<BigRational> {
    Poly::new(massey(seq).0)
}

/// Length `L` of the shortest linear recurrence satisfied by `seq`.
pub fn linear_complexity(seq: &[BigInt]) -> usize {
    massey(seq).1
}

fn massey(seq: &[BigInt]) -> (Vec<BigRational>, usize) {
    let s: Vec<BigRational> = seq.iter().cloned().map(BigRational::from_integer).collect();
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let (mut l, mut m, mut bd) = (0usize, 1usize, BigRational::one());
    for i in 0..s.len() {
        let mut d = s[i].clone();
        for j in 1..=l.min(c.len() - 1) {
            d += &c[j] * &s[i - j];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, BigRational::zero());
        }
        for (j, bj) in b.iter().enumerate() {
            c[j + m] -= &coef * bj;
        }
        if 2 * l <= i {
            l = i + 1 - l;
            b = prev;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, BigRational::zero());
    (c, l)
}
