//! The graph `G_r` of the free group `F_r`, exact word counts, and homology generating functions.
//!
//! Vertices of `G_r` are the letters in the order `a_1, …, a_r, A_r, …, A_1` (`A_i = a_i⁻¹`), so
//! the inverse of vertex `v` is vertex `2r − 1 − v`. Closed walks of length `m` are exactly the
//! cyclically reduced words of length `m`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chebyshev::{cheb, ChebKind};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::laurent::{symmetric_sum, Exponent, Laurent};
use crate::matrix::Matrix;
use crate::walks::{closed_walk_distribution, WalkDistribution};

const BRUTE_FORCE_LIMIT: f64 = 1e7;
const HOMOLOGY_SUPPORT_LIMIT: f64 = 2e6;

/// Rank `r ≥ 1` of a free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeRank(u32);

impl FreeRank {
    pub fn new(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(invalid("rank must be at least 1"));
        }
        Ok(Self(r))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `2r − 1`, the degree of `G_r`.
    pub fn degree(self) -> u64 {
        2 * self.0 as u64 - 1
    }

    /// `c_F = r / √(2r − 1)`.
    pub fn c(self) -> f64 {
        self.0 as f64 / (self.degree() as f64).sqrt()
    }
}

/// A word over `a_1..a_r` and their inverses; generator `i` is `+i`, its inverse `−i` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced() && (self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1])
    }

    /// Total exponent of each generator.
    pub fn abelianization(&self, r: u32) -> Vec<i64> {
        let mut e = vec![0i64; r as usize];
        for &l in &self.0 {
            e[(l.unsigned_abs() - 1) as usize] += l.signum() as i64;
        }
        e
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            let i = l.unsigned_abs();
            if i <= 26 {
                let base = if l > 0 { b'a' } else { b'A' };
                write!(f, "{}", (base + (i - 1) as u8) as char)?;
            } else if l > 0 {
                write!(f, "[x{i}]")?;
            } else {
                write!(f, "[X{i}]")?;
            }
        }
        Ok(())
    }
}

/// Signed letter carried by vertex `v` of `G_r`.
pub fn vertex_letter(r: u32, v: usize) -> i32 {
    let r = r as usize;
    if v < r {
        v as i32 + 1
    } else {
        -((2 * r - v) as i32)
    }
}

/// Vertex of `G_r` carrying the signed letter `l`.
pub fn letter_vertex(r: u32, l: i32) -> usize {
    if l > 0 {
        l as usize - 1
    } else {
        2 * r as usize - l.unsigned_abs() as usize
    }
}

/// The `(2r−1)`-regular graph whose closed walks are the cyclically reduced words.
pub fn build_gr(r: u32) -> Result<Graph> {
    let r = FreeRank::new(r)?.get() as usize;
    let n = 2 * r;
    let adj = Matrix::from_fn(n, n, |i, j| u64::from(j != n - 1 - i));
    Graph::from_adjacency(adj, false)
}

/// `(2r−1)^m + 1 + (r−1)(1 + (−1)^m)`.
pub fn count_cyclically_reduced(r: u32, m: u32) -> Result<BigInt> {
    let q = FreeRank::new(r)?.degree();
    if m == 0 {
        return Err(invalid("word length must be at least 1"));
    }
    let parity = if m % 2 == 0 { 2u64 } else { 0 };
    Ok(num_traits::pow(BigInt::from(q), m as usize) + 1 + BigInt::from((r as u64 - 1) * parity))
}

/// `2r(2r−1)^{m−1}` reduced words of length `m ≥ 1`.
pub fn count_reduced(r: u32, m: u32) -> Result<BigInt> {
    let q = FreeRank::new(r)?.degree();
    if m == 0 {
        return Err(invalid("word length must be at least 1"));
    }
    Ok(BigInt::from(2 * r as u64) * num_traits::pow(BigInt::from(q), m as usize - 1))
}

fn letters_in_order(r: u32) -> Vec<i32> {
    (1..=r as i32).flat_map(|i| [i, -i]).collect()
}

fn enumerate_words(r: u32, m: u32, keep: impl Fn(&Word) -> bool) -> Result<Vec<Word>> {
    FreeRank::new(r)?;
    if m == 0 {
        return Err(invalid("word length must be at least 1"));
    }
    let required = (2.0 * r as f64).powi(m as i32);
    if required > BRUTE_FORCE_LIMIT {
        return Err(Error::Guard { what: "word enumeration".into(), required, limit: BRUTE_FORCE_LIMIT });
    }
    let alphabet = letters_in_order(r);
    let base = alphabet.len();
    let mut digits = vec![0usize; m as usize];
    let mut out = Vec::new();
    loop {
        let w = Word(digits.iter().map(|&d| alphabet[d]).collect());
        if keep(&w) {
            out.push(w);
        }
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Every cyclically reduced word of length `m`, in lexicographic order with `a < A < b < B < …`.
pub fn brute_force_cyclic_words(r: u32, m: u32) -> Result<Vec<Word>> {
    enumerate_words(r, m, Word::is_cyclically_reduced)
}

/// Every reduced word of length `m`, in the same order.
pub fn brute_force_reduced_words(r: u32, m: u32) -> Result<Vec<Word>> {
    enumerate_words(r, m, Word::is_reduced)
}

/// `tr((D_r A_r)^k)` with `D_r = diag(x_1, …, x_r, 1/x_r, …, 1/x_1)`: the coefficient of `x^e`
/// counts cyclically reduced words of length `k` with abelianisation `e`.
pub fn homology_gf(r: u32, k: u32) -> Result<Laurent<BigInt>> {
    FreeRank::new(r)?;
    if k == 0 {
        return Err(invalid("word length must be at least 1"));
    }
    let required = (2.0 * k as f64 + 1.0).powi(r as i32);
    if required > HOMOLOGY_SUPPORT_LIMIT {
        return Err(Error::Guard { what: "homology generating function support".into(), required, limit: HOMOLOGY_SUPPORT_LIMIT });
    }
    let n = 2 * r as usize;
    let rv = r as usize;
    let letter: Vec<Laurent<BigInt>> = (0..n)
        .map(|v| {
            let l = vertex_letter(r, v);
            Laurent::var(rv, l.unsigned_abs() as usize - 1, l.signum())
        })
        .collect();
    let mut total = Laurent::zero(rv);
    for s in 0..n {
        let mut cur: Vec<Laurent<BigInt>> = vec![Laurent::zero(rv); n];
        cur[s] = Laurent::one(rv);
        for _ in 0..k {
            let mut next = vec![Laurent::zero(rv); n];
            for v in 0..n {
                if cur[v].is_empty() {
                    continue;
                }
                let moved = cur[v].mul(&letter[v]);
                for (w, slot) in next.iter_mut().enumerate() {
                    if w != n - 1 - v {
                        *slot = slot.add(&moved);
                    }
                }
            }
            cur = next;
        }
        total = total.add(&cur[s]);
    }
    Ok(total)
}

/// Distribution of the total exponent `e_1 + … + e_r` over cyclically reduced words of length `n`.
pub fn total_exponent_distribution(r: u32, n: u32) -> Result<WalkDistribution<BigInt>> {
    let g = build_gr(r)?;
    if n == 0 {
        return Err(invalid("word length must be at least 1"));
    }
    let f: Vec<i64> = (0..2 * r as usize).map(|v| vertex_letter(r, v).signum() as i64).collect();
    closed_walk_distribution(&g.adjacency_int(), &f, n as usize)
}

/// Image of [`homology_gf`] under `x_i ↦ x`.
pub fn total_exponent_gf(r: u32, n: u32) -> Result<Laurent<BigInt>> {
    Ok(total_exponent_distribution(r, n)?.to_laurent())
}

/// Element `a + b√q` of `ℚ(√q)`. `q = 0` marks a constant not yet tied to a field.
#[derive(Clone, Debug)]
struct Quad {
    a: BigRational,
    b: BigRational,
    q: u64,
}

impl Quad {
    fn new(a: BigRational, b: BigRational, q: u64) -> Self {
        Self { a, b, q }
    }

    fn field(&self, other: &Self) -> u64 {
        match (self.q, other.q) {
            (0, q) | (q, 0) => q,
            (p, q) => {
                assert_eq!(p, q, "mixing quadratic fields");
                p
            }
        }
    }
}

impl PartialEq for Quad {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl Zero for Quad {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero(), 0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Quad {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero(), 0)
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        let q = self.field(&o);
        Quad::new(self.a + o.a, self.b + o.b, q)
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, o: Quad) -> Quad {
        let q = self.field(&o);
        Quad::new(self.a - o.a, self.b - o.b, q)
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, o: Quad) -> Quad {
        let q = self.field(&o);
        let qq = BigRational::from_integer(BigInt::from(q));
        let a = &self.a * &o.a + &self.b * &o.b * qq;
        let b = &self.a * &o.b + &self.b * &o.a;
        Quad::new(a, b, q)
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::new(-self.a, -self.b, self.q)
    }
}

impl<'a> AddAssign<&'a Quad> for Quad {
    fn add_assign(&mut self, o: &'a Quad) {
        *self = self.clone() + o.clone();
    }
}

impl<'a> SubAssign<&'a Quad> for Quad {
    fn sub_assign(&mut self, o: &'a Quad) {
        *self = self.clone() - o.clone();
    }
}

impl<'a> MulAssign<&'a Quad> for Quad {
    fn mul_assign(&mut self, o: &'a Quad) {
        *self = self.clone() * o.clone();
    }
}

/// Outcome of [`homoenum_closed_form_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormCheck {
    pub ok: bool,
    /// First exponent (in sorted order) where the two sides differ, with the closed-form value
    /// as `(rational part, √(2r−1) part)` and the counted value.
    pub mismatch: Option<(Vec<i32>, (BigRational, BigRational), BigInt)>,
}

/// Verifies, exactly in `ℚ(√(2r−1))`, that
/// `homology_gf(r, k) = 2(√(2r−1))^k R_k(r/√(2r−1); x) + (r−1)(1 + (−1)^k)`.
pub fn homoenum_closed_form_check(r: u32, k: u32) -> Result<ClosedFormCheck> {
    let counted = homology_gf(r, k)?;
    let q = FreeRank::new(r)?.degree();
    let rv = r as usize;
    let rat = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    // (c / 2r) with c = r/√q equals √q / (2q).
    let y = symmetric_sum::<BigInt>(rv).map_coeffs(|c| Quad::new(BigRational::zero(), BigRational::from_integer(c.clone()) * rat(1, 2 * q as i64), q));
    let t = cheb(ChebKind::T, k as usize);
    let mut acc: Laurent<Quad> = Laurent::zero(rv);
    for c in t.coeffs.iter().rev() {
        acc = acc.mul(&y);
        acc.add_term(&vec![0; rv], Quad::new(BigRational::from_integer(c.clone()), BigRational::zero(), q));
    }
    let sqrt_q = Quad::new(BigRational::zero(), BigRational::one(), q);
    let mut scale = Quad::new(rat(2, 1), BigRational::zero(), q);
    for _ in 0..k {
        scale = scale * sqrt_q.clone();
    }
    let mut closed = acc.scale(&scale);
    let correction = if k % 2 == 0 { 2 * (r as i64 - 1) } else { 0 };
    closed.add_term(&vec![0; rv], Quad::new(rat(correction, 1), BigRational::zero(), q));

    let mut keys: Vec<Exponent> = closed.iter().map(|(e, _)| e.clone()).chain(counted.iter().map(|(e, _)| e.clone())).collect();
    keys.sort();
    keys.dedup();
    for e in keys {
        let lhs = closed.coeff(&e);
        let rhs = counted.coeff(&e);
        let matches = lhs.b.is_zero() && lhs.a == BigRational::from_integer(rhs.clone());
        if !matches {
            return Ok(ClosedFormCheck { ok: false, mismatch: Some((e.to_vec(), (lhs.a, lhs.b), rhs)) });
        }
    }
    Ok(ClosedFormCheck { ok: true, mismatch: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::trace_power;

    #[test]
    fn rank_one_graph_has_two_loops() {
        let g = build_gr(1).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.adjacency()[(0, 0)], 1);
        assert_eq!(g.adjacency()[(0, 1)], 0);
        assert_eq!(g.adjacency()[(1, 1)], 1);
    }

    #[test]
    fn vertex_letter_order() {
        let letters: Vec<i32> = (0..6).map(|v| vertex_letter(3, v)).collect();
        assert_eq!(letters, vec![1, 2, 3, -3, -2, -1]);
        for v in 0..6 {
            assert_eq!(letter_vertex(3, vertex_letter(3, v)), v);
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_cyclically_reduced(2, 1).unwrap(), BigInt::from(4));
        assert_eq!(count_cyclically_reduced(2, 2).unwrap(), BigInt::from(12));
        assert_eq!(count_cyclically_reduced(1, 2).unwrap(), BigInt::from(2));
        assert!(count_cyclically_reduced(2, 0).is_err());
        assert!(count_cyclically_reduced(0, 3).is_err());
        assert_eq!(trace_power(&build_gr(2).unwrap().adjacency_int(), 2), BigInt::from(12));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_cyclic_words(2, 2).unwrap().len(), 12);
        let w: Vec<String> = brute_force_cyclic_words(1, 3).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(w, vec!["aaa", "AAA"]);
        let w: Vec<String> = brute_force_cyclic_words(2, 1).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(w, vec!["a", "A", "b", "B"]);
        assert!(matches!(brute_force_cyclic_words(4, 9), Err(Error::Guard { .. })));
    }

    #[test]
    fn homology_examples() {
        let h = homology_gf(2, 2).unwrap();
        assert_eq!(h.coeff(&[2, 0]), BigInt::from(1));
        assert_eq!(h.coeff(&[1, 1]), BigInt::from(2));
        assert_eq!(h.coeff(&[0, 0]), BigInt::from(0));
        let h = homology_gf(1, 3).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.coeff(&[3]), BigInt::from(1));
        assert_eq!(h.coeff(&[-3]), BigInt::from(1));
        assert_eq!(homology_gf(2, 5).unwrap().coefficient_sum(), BigInt::from(244));
    }

    #[test]
    fn closed_form_examples() {
        for (r, k) in [(2, 2), (2, 5), (3, 4), (1, 3), (2, 1)] {
            let c = homoenum_closed_form_check(r, k).unwrap();
            assert!(c.ok, "r={r} k={k}: {:?}", c.mismatch);
        }
    }

    #[test]
    fn total_exponent_examples() {
        let t = total_exponent_gf(2, 1).unwrap();
        assert_eq!(t.coeff(&[1]), BigInt::from(2));
        assert_eq!(t.coeff(&[-1]), BigInt::from(2));
        assert_eq!(t.len(), 2);
        assert_eq!(total_exponent_gf(2, 2).unwrap().coeff(&[0]), BigInt::from(4));
        let t = total_exponent_gf(1, 7).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.coeff(&[7]), BigInt::from(1));
    }
}
