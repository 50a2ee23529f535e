//! Distribution of homology classes of cyclically reduced words: Gaussian limit and residues mod `p`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binomial, is_prime};
use crate::chebyshev::{cheb, ChebKind};
use crate::error::{invalid, Result};
use crate::freegroup::{build_gr, total_exponent_distribution, vertex_letter, FreeRank};
use crate::scalar::ratio_to_f64;
use crate::walks::{closed_walk_residues, exact_moments};

/// Parameters of the Gaussian limit of the `k`-variable coefficient distribution of `R_n(c; ·)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CltParams {
    pub c: f64,
    pub k: u32,
    pub sigma2: f64,
}

impl CltParams {
    /// Uses the variance returned by [`clt_sigma2`].
    pub fn new(c: f64, k: u32) -> Result<Self> {
        Ok(Self { c, k, sigma2: clt_sigma2(c, k)? })
    }
}

fn check_c(c: f64, k: u32) -> Result<()> {
    if !(c > 1.0) || !c.is_finite() {
        return Err(invalid(format!("parameter c = {c} must exceed 1")));
    }
    if k == 0 {
        return Err(invalid("number of variables must be at least 1"));
    }
    Ok(())
}

/// Per-coordinate variance in the closed form `(c/k)[1 + √((c+1)/(c−1))]`.
///
/// The exact coefficient distributions do not converge to this value; see [`limiting_variance`].
pub fn clt_sigma2(c: f64, k: u32) -> Result<f64> {
    check_c(c, k)?;
    Ok(c / k as f64 * (1.0 + ((c + 1.0) / (c - 1.0)).sqrt()))
}

/// Per-coordinate variance `c / (k √(c² − 1))` of the Gaussian limit, from the second-order
/// expansion of `arccosh((c/k) Σ cos θ_j)` at `θ = 0`.
pub fn limiting_variance(c: f64, k: u32) -> Result<f64> {
    check_c(c, k)?;
    Ok(c / (k as f64 * (c * c - 1.0).sqrt()))
}

/// `T_n(y) / T_n(c)` for real `y`, evaluated in log space.
pub fn chebyshev_ratio(n: u32, y: f64, c: f64) -> f64 {
    let nf = n as f64;
    let a0 = c.acosh();
    // 1 / T_n(c) = 2 e^{−n a0} / (1 + e^{−2 n a0})
    let inv_tc_log = std::f64::consts::LN_2 - nf * a0 - (-2.0 * nf * a0).exp().ln_1p();
    if y.abs() <= 1.0 {
        let t = (nf * y.acos()).cos();
        t * inv_tc_log.exp()
    } else {
        let a = y.abs().acosh();
        let log_t = nf * a - std::f64::consts::LN_2 + (-2.0 * nf * a).exp().ln_1p();
        let sign = if y < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        sign * (log_t + inv_tc_log).exp()
    }
}

/// Characteristic function `T_n((c/k) Σ cos θ_j) / T_n(c)` of the normalised coefficients of `R_n(c; ·)`.
pub fn char_fn(n: u32, c: f64, theta: &[f64]) -> Result<Complex64> {
    check_c(c, theta.len() as u32)?;
    let y = c / theta.len() as f64 * theta.iter().map(|t| t.cos()).sum::<f64>();
    Ok(Complex64::new(chebyshev_ratio(n, y, c), 0.0))
}

/// `ψ_n(e^{ix}) = T_n(c cos x) / T_n(c)`, the normalised one-variable generating function on the unit circle.
pub fn psi(n: u32, c: f64, x: f64) -> f64 {
    chebyshev_ratio(n, c * x.cos(), c)
}

/// Exact mean and variance of the total exponent over cyclically reduced words of length `n`.
pub fn total_exponent_moments(r: u32, n: u32) -> Result<(BigRational, BigRational)> {
    let d = total_exponent_distribution(r, n)?;
    exact_moments(&d).ok_or_else(|| invalid("empty distribution"))
}

/// Number of cyclically reduced words of length `n` in `F_r` with trivial abelianisation,
/// from the Chebyshev form of the homology generating function.
pub fn zero_class_count(r: u32, n: u32) -> Result<BigInt> {
    let q = FreeRank::new(r)?.degree();
    if n == 0 {
        return Err(invalid("word length must be at least 1"));
    }
    if n % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let nu = n as usize;
    // z1[j] = [x⁰](x + 1/x)^j, z[j] = [x⁰](Σ_i x_i + 1/x_i)^j by convolution over variables.
    let z1: Vec<BigInt> = (0..=nu).map(|j| if j % 2 == 0 { binomial(j as u64, j as u64 / 2) } else { BigInt::zero() }).collect();
    let mut z = z1.clone();
    for _ in 1..r {
        z = (0..=nu)
            .map(|j| (0..=j).map(|i| binomial(j as u64, i as u64) * &z[i] * &z1[j - i]).sum())
            .collect();
    }
    let t = cheb(ChebKind::T, nu);
    let mut acc = BigRational::zero();
    for j in (0..=nu).step_by(2) {
        if t.coeffs[j].is_zero() {
            continue;
        }
        let num = &t.coeffs[j] * num_traits::pow(BigInt::from(q), (nu - j) / 2) * &z[j] * 2;
        acc += BigRational::new(num, BigInt::one() << j);
    }
    acc += BigRational::from_integer(BigInt::from(2 * (r as i64 - 1)));
    if !acc.is_integer() {
        return Err(crate::error::Error::InexactDivision("zero-class count".into()));
    }
    Ok(acc.to_integer())
}

/// Which exact route computes residue counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModPRoute {
    /// Reduce the exponents of the full total-exponent polynomial.
    Laurent,
    /// Run the `(vertex, residue)` transfer chain with `2r·p` states.
    Transfer,
}

/// Counts of cyclically reduced words of length `n` by total exponent modulo `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModPDistribution {
    pub r: u32,
    pub n: u32,
    pub p: u64,
    pub counts: Vec<BigInt>,
}

impl ModPDistribution {
    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }
}

/// Residue counts by the transfer route.
pub fn modp_counts(r: u32, n: u32, p: u64) -> Result<ModPDistribution> {
    modp_counts_via(r, n, p, ModPRoute::Transfer)
}

pub fn modp_counts_via(r: u32, n: u32, p: u64, route: ModPRoute) -> Result<ModPDistribution> {
    if !is_prime(p) {
        return Err(invalid(format!("modulus {p} is not prime")));
    }
    if n == 0 {
        return Err(invalid("word length must be at least 1"));
    }
    let counts = match route {
        ModPRoute::Laurent => total_exponent_distribution(r, n)?.residues(p),
        ModPRoute::Transfer => {
            let g = build_gr(r)?;
            let f: Vec<i64> = (0..2 * r as usize).map(|v| vertex_letter(r, v).signum() as i64).collect();
            closed_walk_residues(&g.adjacency_int(), &f, p, n as usize)?
        }
    };
    Ok(ModPDistribution { r, n, p, counts })
}

fn odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(invalid("p = 2 is excluded: the total exponent has the parity of the length"));
    }
    if !is_prime(p) {
        return Err(invalid(format!("modulus {p} is not prime")));
    }
    Ok(())
}

/// `max_q |p · N_{n,q} / W − 1|`, the relative distance of the residue counts from uniform.
pub fn equidistribution_gap(r: u32, n: u32, p: u64) -> Result<f64> {
    odd_prime(p)?;
    let d = modp_counts(r, n, p)?;
    let w = d.total();
    let pb = BigInt::from(p);
    let gap = d
        .counts
        .iter()
        .map(|c| {
            let rel = BigRational::new(c * &pb - &w, w.clone());
            ratio_to_f64(&rel).abs()
        })
        .fold(0.0, f64::max);
    Ok(gap)
}

/// Upper bound `Σ_{j≠0} max|F(χ^j)| / F(1)` on [`equidistribution_gap`], where `F` is the
/// one-variable total-exponent generating function and `χ = e^{2πi/p}`.
///
/// Characters with `c |cos(2πj/p)| < 1` contribute through `|T_n| ≤ 1`, so the gap itself
/// oscillates under this envelope.
pub fn equidistribution_envelope(r: u32, n: u32, p: u64) -> Result<f64> {
    odd_prime(p)?;
    let rank = FreeRank::new(r)?;
    let (q, c) = (rank.degree() as f64, rank.c());
    let nf = n as f64;
    let e = (r as f64 - 1.0) * if n % 2 == 0 { 2.0 } else { 0.0 };
    // ε = e / (2 q^{n/2} T_n(c)), with T_n(c) = cosh(n arccosh c)
    let eps = if e == 0.0 { 0.0 } else { (e.ln() - std::f64::consts::LN_2 - nf / 2.0 * q.ln() - log_cosh(nf * c.acosh())).exp() };
    let mut total = 0.0;
    for j in 1..p {
        let y = c * (2.0 * std::f64::consts::PI * j as f64 / p as f64).cos();
        let m = if y.abs() <= 1.0 { chebyshev_ratio(n, 1.0, c) } else { chebyshev_ratio(n, y.abs(), c) };
        total += (m + eps) / (1.0 + eps);
    }
    Ok(total)
}

fn log_cosh(a: f64) -> f64 {
    a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
}

/// Whether some nontrivial character dominates with a fixed sign, i.e. `c cos(π/p) ≥ 1`
/// for `c = r/√(2r−1)`. Without it every nontrivial term oscillates and no persistent
/// ordering of residues exists.
pub fn bias_hypothesis(r: u32, p: u64) -> Result<bool> {
    let c = FreeRank::new(r)?.c();
    Ok(c * (std::f64::consts::PI / p as f64).cos() >= 1.0)
}

/// Residues ranked by descending count, with equal counts grouped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasRanking {
    /// Groups of residues with equal counts, largest count first; residues ascending within a group.
    pub groups: Vec<Vec<u64>>,
    /// The ordering predicted from the dominant character: `{0}, {±2}, {±4}, …` for even `n`,
    /// reversed for odd `n`.
    pub predicted: Vec<Vec<u64>>,
    pub matches_prediction: bool,
    /// Value of [`bias_hypothesis`] for this rank and prime.
    pub hypothesis: bool,
    /// True when some group is larger than the pair `{q, −q}` forced by the symmetry `e ↦ −e`.
    pub unexpected_ties: bool,
}

impl BiasRanking {
    /// Index of the group that contains `q`.
    pub fn rank_of(&self, q: u64) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&q))
    }
}

/// Ranks residues of the total exponent mod `p` by exact count. Ties are reported as groups;
/// `q` and `p − q` always tie by symmetry.
pub fn bias_ranking(r: u32, n: u32, p: u64) -> Result<BiasRanking> {
    odd_prime(p)?;
    let d = modp_counts(r, n, p)?;
    let mut order: Vec<u64> = (0..p).collect();
    order.sort_by(|&a, &b| d.counts[b as usize].cmp(&d.counts[a as usize]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<u64>> = Vec::new();
    for q in order {
        match groups.last_mut() {
            Some(g) if d.counts[g[0] as usize] == d.counts[q as usize] => g.push(q),
            _ => groups.push(vec![q]),
        }
    }
    let unexpected_ties = groups.iter().any(|g| g.len() > 2 || (g.len() == 2 && (g[0] + g[1]) % p != 0));
    let mut predicted: Vec<Vec<u64>> = (0..=(p - 1) / 2)
        .map(|m| {
            let a = (2 * m) % p;
            let b = (p - a) % p;
            let mut g = vec![a.min(b), a.max(b)];
            g.dedup();
            g
        })
        .collect();
    if n % 2 == 1 {
        predicted.reverse();
    }
    Ok(BiasRanking { matches_prediction: groups == predicted, hypothesis: bias_hypothesis(r, p)?, groups, predicted, unexpected_ties })
}

/// Ratio `N_n(0) n^{r/2} / (2r−1)^n` whose limit is the local-limit constant for the trivial class.
pub fn zero_class_scaled(r: u32, n: u32) -> Result<f64> {
    let q = FreeRank::new(r)?.degree();
    let count = zero_class_count(r, n)?;
    let ratio = BigRational::new(count, num_traits::pow(BigInt::from(q), n as usize));
    Ok(ratio_to_f64(&ratio) * (n as f64).powf(r as f64 / 2.0))
}

/// Local-limit prediction for [`zero_class_scaled`]: lattice index `2` times the Gaussian
/// density at the origin with per-coordinate variance `σ²`.
pub fn zero_class_constant(r: u32, sigma2: f64) -> f64 {
    2.0 / (2.0 * std::f64::consts::PI * sigma2).powf(r as f64 / 2.0)
}
