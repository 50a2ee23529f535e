//! Chebyshev polynomials and their symmetrised multivariate compositions.
//!
//! For a rational `c = p/q` and `k` variables, `R_n(c; x) = T_n((c/2k) Σ (x_i + 1/x_i))` and
//! `S_n` is the same with `U_n`. Coefficients are stored as integer numerators over the common
//! denominator `(2kq)^n`, so every computation stays in `ℤ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::binomial;
use crate::error::{invalid, Error, Result};
use crate::laurent::{symmetric_sum, Exponent, Laurent};
use crate::poly::Poly;

/// First kind `T_n` or second kind `U_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChebKind {
    T,
    U,
}

/// Symmetrised first kind `R_n` (from `T_n`) or second kind `S_n` (from `U_n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymKind {
    R,
    S,
}

impl SymKind {
    fn base(self) -> ChebKind {
        match self {
            SymKind::R => ChebKind::T,
            SymKind::S => ChebKind::U,
        }
    }
}

/// `T_n` or `U_n` with exact integer coefficients (`coeffs[j]` multiplies `x^j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebPoly {
    pub kind: ChebKind,
    pub n: usize,
    pub coeffs: Vec<BigInt>,
}

impl ChebPoly {
    pub fn poly(&self) -> Poly<BigInt> {
        Poly::new(self.coeffs.clone())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

/// `T_n` or `U_n` by the three-term recurrence.
pub fn cheb(kind: ChebKind, n: usize) -> ChebPoly {
    cheb_sequence(kind, n).pop().expect("nonempty sequence")
}

/// `[P_0, …, P_n]` for `P = T` or `U`.
pub fn cheb_sequence(kind: ChebKind, n: usize) -> Vec<ChebPoly> {
    let first = vec![BigInt::one()];
    let second = match kind {
        ChebKind::T => vec![BigInt::zero(), BigInt::one()],
        ChebKind::U => vec![BigInt::zero(), BigInt::from(2)],
    };
    let mut out = vec![first, second];
    while out.len() <= n {
        let (prev, cur) = (&out[out.len() - 2], &out[out.len() - 1]);
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += c * 2;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        out.push(next);
    }
    out.truncate(n + 1);
    out.into_iter().enumerate().map(|(n, coeffs)| ChebPoly { kind, n, coeffs }).collect()
}

/// Coefficient of `x^{n−2m}` in `T_n` from the closed form
/// `(−1)^m · n/(n−m) · C(n−m, m) · 2^{n−2m−1}`.
pub fn cheb_coeff_closed_form(n: u64, m: u64) -> Result<BigInt> {
    if m > n / 2 {
        return Err(invalid(format!("m = {m} out of range 0..={} for n = {n}", n / 2)));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let num = BigInt::from(n) * binomial(n - m, m) * (BigInt::one() << (n - 2 * m) as usize);
    let den = BigInt::from(2 * (n - m));
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::InexactDivision(format!("closed-form coefficient ({n}, {m})")));
    }
    Ok(if m % 2 == 1 { -q } else { q })
}

/// Coefficient `t(n, j, c)` of `x^j` in `R_n(c; x)` (one variable) from the direct double-sum
/// expansion over `m`.
pub fn univariate_coefficient(n: u64, j: i64, c: &BigRational) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if n == 0 {
        return if j == 0 { BigRational::one() } else { BigRational::zero() };
    }
    let mut acc = BigRational::zero();
    for m in 0..=n / 2 {
        let d = (n - 2 * m) as i64;
        if j.abs() > d || (d - j) % 2 != 0 {
            continue;
        }
        let weight = BigRational::new(BigInt::from(n) * binomial(n - m, m), BigInt::from(n - m));
        let inner = binomial(d as u64, ((d - j) / 2) as u64);
        let term = weight * BigRational::from_integer(inner) * num_traits::pow(c.clone(), d as usize);
        if m % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc * half
}

/// Exact coefficients of `R_n(c; x_1..x_k)` or `S_n(c; x_1..x_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizedCheb {
    pub kind: SymKind,
    pub n: usize,
    pub c: BigRational,
    pub k: usize,
    numerators: Laurent<BigInt>,
    denominator: BigInt,
}

impl SymmetrizedCheb {
    /// Coefficient of `x^e`.
    pub fn coeff(&self, e: &[i32]) -> BigRational {
        BigRational::new(self.numerators.coeff(e), self.denominator.clone())
    }

    /// Integer numerators over [`Self::denominator`].
    pub fn numerators(&self) -> &Laurent<BigInt> {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// All nonzero coefficients sorted by exponent.
    pub fn terms(&self) -> Vec<(Exponent, BigRational)> {
        self.numerators
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| (e, BigRational::new(c, self.denominator.clone())))
            .collect()
    }

    /// Rational Laurent polynomial.
    pub fn to_laurent(&self) -> Laurent<BigRational> {
        self.numerators.map_coeffs(|c| BigRational::new(c.clone(), self.denominator.clone()))
    }

    /// Dense coefficient vector indexed by exponent `−n..=n` (one variable only).
    pub fn univariate(&self) -> Option<Vec<BigRational>> {
        (self.k == 1).then(|| (-(self.n as i32)..=self.n as i32).map(|j| self.coeff(&[j])).collect())
    }

    /// True when every nonzero exponent `e` has `Σ|e_i| ≤ n` and `Σ|e_i| ≡ n (mod 2)`.
    pub fn parity_support_holds(&self) -> bool {
        self.numerators.iter().all(|(e, _)| {
            let l1: i64 = e.iter().map(|&x| (x as i64).abs()).sum();
            l1 <= self.n as i64 && (self.n as i64 - l1) % 2 == 0
        })
    }
}

fn split_c(c: &BigRational, k: usize) -> Result<(BigInt, BigInt)> {
    if k == 0 {
        return Err(invalid("number of variables must be at least 1"));
    }
    if c.is_negative() {
        return Err(invalid(format!("parameter c = {c} must be nonnegative")));
    }
    let p = c.numer().clone();
    let d = c.denom() * BigInt::from(2 * k);
    Ok((p, d))
}

/// `R_n` or `S_n` by substituting the Laurent expansion of `(c/2k)Σ(x_i + 1/x_i)` into the
/// Chebyshev coefficients. Rejects negative `c` and `k = 0`.
pub fn symmetrized(kind: SymKind, n: usize, c: &BigRational, k: usize) -> Result<SymmetrizedCheb> {
    let (p, d) = split_c(c, k)?;
    let base = cheb(kind.base(), n);
    let s: Laurent<BigInt> = symmetric_sum(k);
    let mut power = Laurent::one(k);
    let mut acc = Laurent::zero(k);
    let mut p_pow = BigInt::one();
    for (j, t) in base.coeffs.iter().enumerate() {
        if !t.is_zero() {
            let scale = t * &p_pow * num_traits::pow(d.clone(), n - j);
            acc = acc.add(&power.scale(&scale));
        }
        if j < n {
            power = power.mul(&s);
            p_pow *= &p;
        }
    }
    Ok(SymmetrizedCheb {
        kind,
        n,
        c: c.clone(),
        k,
        numerators: acc,
        denominator: num_traits::pow(d, n),
    })
}

/// `[R_0, …, R_{n_max}]` (or `S`) by the three-term recurrence in Laurent arithmetic.
pub fn symmetrized_sequence(kind: SymKind, n_max: usize, c: &BigRational, k: usize) -> Result<Vec<SymmetrizedCheb>> {
    let (p, d) = split_c(c, k)?;
    let s: Laurent<BigInt> = symmetric_sum(k);
    let two_p_s = s.scale(&(&p * 2));
    let d2 = &d * &d;
    let mut nums: Vec<Laurent<BigInt>> = vec![Laurent::one(k)];
    let first = match kind {
        SymKind::R => s.scale(&p),
        SymKind::S => two_p_s.clone(),
    };
    nums.push(first);
    while nums.len() <= n_max {
        let len = nums.len();
        let next = two_p_s.mul(&nums[len - 1]).sub(&nums[len - 2].scale(&d2));
        nums.push(next);
    }
    nums.truncate(n_max + 1);
    Ok(nums
        .into_iter()
        .enumerate()
        .map(|(n, numerators)| SymmetrizedCheb {
            kind,
            n,
            c: c.clone(),
            k,
            numerators,
            denominator: num_traits::pow(d.clone(), n),
        })
        .collect())
}

/// Result of [`verify_positivity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub positive: bool,
    /// First violating exponent vector in sorted order.
    pub witness: Option<Vec<i32>>,
}

/// Checks that all coefficients are nonnegative and, for one variable, that every exponent
/// `j` with `|j| ≤ n` and `n − j` even carries a strictly positive coefficient.
pub fn check_positivity(s: &SymmetrizedCheb) -> PositivityReport {
    let negative = s.numerators.sorted_terms().into_iter().find(|(_, c)| c.is_negative());
    if let Some((e, _)) = negative {
        return PositivityReport { positive: false, witness: Some(e.to_vec()) };
    }
    if s.k == 1 {
        let n = s.n as i32;
        for j in (-n..=n).step_by(2) {
            if !s.numerators.coeff(&[j]).is_positive() {
                return PositivityReport { positive: false, witness: Some(vec![j]) };
            }
        }
    }
    PositivityReport { positive: true, witness: None }
}

/// Expands `R_n`/`S_n` and runs [`check_positivity`]. Positivity is only expected for
/// `c > 1`; smaller `c` is accepted and typically yields a witness.
pub fn verify_positivity(kind: SymKind, n: usize, c: &BigRational, k: usize) -> Result<PositivityReport> {
    Ok(check_positivity(&symmetrized(kind, n, c, k)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn first_polynomials() {
        assert_eq!(cheb(ChebKind::T, 0).coeffs, ints(&[1]));
        assert_eq!(cheb(ChebKind::T, 1).coeffs, ints(&[0, 1]));
        assert_eq!(cheb(ChebKind::T, 2).coeffs, ints(&[-1, 0, 2]));
        assert_eq!(cheb(ChebKind::U, 1).coeffs, ints(&[0, 2]));
        assert_eq!(cheb(ChebKind::T, 4).coeffs[2], BigInt::from(-8));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(cheb_coeff_closed_form(2, 0).unwrap(), BigInt::from(2));
        assert_eq!(cheb_coeff_closed_form(2, 1).unwrap(), BigInt::from(-1));
        assert_eq!(cheb_coeff_closed_form(6, 3).unwrap(), BigInt::from(-1));
        assert_eq!(cheb_coeff_closed_form(4, 1).unwrap(), BigInt::from(-8));
        assert!(cheb_coeff_closed_form(5, 3).is_err());
    }

    #[test]
    fn first_degree_symmetrization() {
        let c = q(5, 3);
        let s = symmetrized(SymKind::R, 1, &c, 1).unwrap();
        assert_eq!(s.coeff(&[1]), q(5, 6));
        assert_eq!(s.coeff(&[-1]), q(5, 6));
        assert_eq!(s.terms().len(), 2);
    }

    #[test]
    fn unit_parameter_collapses_to_extremes() {
        for n in 0..12 {
            let s = symmetrized(SymKind::R, n, &q(1, 1), 1).unwrap();
            let terms = s.terms();
            if n == 0 {
                assert_eq!(terms.len(), 1);
                continue;
            }
            assert_eq!(terms.len(), 2, "n = {n}");
            assert_eq!(s.coeff(&[n as i32]), q(1, 2));
            assert_eq!(s.coeff(&[-(n as i32)]), q(1, 2));
        }
    }

    #[test]
    fn degree_three_at_two_is_positive() {
        let s = symmetrized(SymKind::R, 3, &q(2, 1), 1).unwrap();
        let terms = s.terms();
        assert_eq!(terms.len(), 4);
        assert!(terms.iter().all(|(_, c)| c.is_positive()));
    }

    #[test]
    fn positivity_examples() {
        assert!(verify_positivity(SymKind::R, 10, &q(3, 2), 1).unwrap().positive);
        assert!(verify_positivity(SymKind::R, 10, &q(3, 2), 2).unwrap().positive);
        let small = verify_positivity(SymKind::R, 4, &q(1, 2), 1).unwrap();
        assert!(!small.positive);
        let w = small.witness.unwrap();
        assert!(symmetrized(SymKind::R, 4, &q(1, 2), 1).unwrap().coeff(&w).is_negative());
    }

    #[test]
    fn negative_parameter_rejected() {
        assert!(symmetrized(SymKind::R, 3, &q(-1, 2), 1).is_err());
        assert!(symmetrized(SymKind::R, 3, &q(1, 2), 0).is_err());
    }
}
