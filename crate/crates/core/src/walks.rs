//! Exact transfer-matrix dynamic programmes for additive functionals along walks.
//!
//! A walk `v_0 → v_1 → … → v_N` collects the value `f(v_0) + … + f(v_{N−1})` (the vertex being
//! left at each step). For closed walks this is the sum of `f` over the `N` vertices of the cycle.
//! Each step is weighted by the matrix entry `W[v][w]`, so integer adjacency matrices count walks
//! and stochastic matrices give probabilities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::laurent::Laurent;
use crate::matrix::Matrix;
use crate::scalar::{ratio_to_f64, Ring};

/// Weighted distribution of an integer-valued functional: `counts[i]` is the weight of value `offset + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkDistribution<T> {
    pub offset: i64,
    pub counts: Vec<T>,
}

impl<T: Ring> WalkDistribution<T> {
    pub fn total(&self) -> T {
        let mut acc = T::zero();
        for c in &self.counts {
            acc += c;
        }
        acc
    }

    /// Weight of the value `v`.
    pub fn get(&self, v: i64) -> T {
        let i = v - self.offset;
        if i < 0 || i as usize >= self.counts.len() {
            T::zero()
        } else {
            self.counts[i as usize].clone()
        }
    }

    /// Nonzero `(value, weight)` pairs in increasing order of value.
    pub fn support(&self) -> Vec<(i64, T)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.offset + i as i64, c.clone()))
            .collect()
    }

    /// Weights aggregated by residue modulo `p`.
    pub fn residues(&self, p: u64) -> Vec<T> {
        let mut out = vec![T::zero(); p as usize];
        for (i, c) in self.counts.iter().enumerate() {
            let r = (self.offset + i as i64).rem_euclid(p as i64) as usize;
            out[r] += c;
        }
        out
    }

    /// One-variable Laurent polynomial `Σ weight · x^value`.
    pub fn to_laurent(&self) -> Laurent<T> {
        let mut l = Laurent::zero(1);
        for (v, c) in self.support() {
            l.add_term(&[v as i32], c);
        }
        l
    }
}

/// Exact mean and variance of a counting distribution.
pub fn exact_moments(d: &WalkDistribution<BigInt>) -> Option<(BigRational, BigRational)> {
    let total = d.total();
    if total.is_zero() {
        return None;
    }
    let mut s1 = BigInt::zero();
    let mut s2 = BigInt::zero();
    for (v, c) in d.support() {
        let v = BigInt::from(v);
        s1 += &v * &c;
        s2 += &v * &v * &c;
    }
    let mean = BigRational::new(s1, total.clone());
    let var = BigRational::new(s2, total) - &mean * &mean;
    Some((mean, var))
}

/// Mean and variance as floats for any distribution convertible to `f64`.
pub fn float_moments<T: Ring + ToPrimitive>(d: &WalkDistribution<T>) -> (f64, f64) {
    let w: Vec<f64> = d.counts.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let total: f64 = w.iter().sum();
    let mean = w.iter().enumerate().map(|(i, c)| (d.offset + i as i64) as f64 * c).sum::<f64>() / total;
    let var = w.iter().enumerate().map(|(i, c)| ((d.offset + i as i64) as f64 - mean).powi(2) * c).sum::<f64>() / total;
    (mean, var)
}

/// Exact mean and variance of a counting distribution as floats.
pub fn moments_f64(d: &WalkDistribution<BigInt>) -> Option<(f64, f64)> {
    exact_moments(d).map(|(m, v)| (ratio_to_f64(&m), ratio_to_f64(&v)))
}

fn check(weights: &Matrix<impl Clone>, f: &[i64]) -> Result<()> {
    if !weights.is_square() {
        return Err(invalid("weight matrix must be square"));
    }
    if f.len() != weights.rows() {
        return Err(invalid(format!("functional has {} values for {} vertices", f.len(), weights.rows())));
    }
    Ok(())
}

/// Runs the walk DP from `start` for `n` steps and returns the per-vertex value distributions.
fn propagate<T: Ring>(weights: &Matrix<T>, f: &[i64], n: usize, start: usize, lo: i64, width: usize) -> Vec<Vec<T>> {
    let k = weights.rows();
    let fmin = *f.iter().min().unwrap();
    let fmax = *f.iter().max().unwrap();
    let arcs: Vec<Vec<(usize, T)>> = (0..k)
        .map(|v| (0..k).filter(|&w| !weights[(v, w)].is_zero()).map(|w| (w, weights[(v, w)].clone())).collect())
        .collect();
    let mut cur = vec![vec![T::zero(); width]; k];
    cur[start][(-lo) as usize] = T::one();
    for t in 0..n {
        let band_lo = (t as i64 * fmin - lo) as usize;
        let band_hi = (t as i64 * fmax - lo) as usize;
        let mut next = vec![vec![T::zero(); width]; k];
        for v in 0..k {
            let shift = f[v];
            for (w, weight) in &arcs[v] {
                for idx in band_lo..=band_hi {
                    let c = &cur[v][idx];
                    if c.is_zero() {
                        continue;
                    }
                    let mut p = c.clone();
                    p *= weight;
                    next[*w][(idx as i64 + shift) as usize] += &p;
                }
            }
        }
        cur = next;
    }
    cur
}

fn trimmed<T: Ring>(offset: i64, mut counts: Vec<T>) -> WalkDistribution<T> {
    let first = counts.iter().position(|c| !c.is_zero());
    match first {
        None => WalkDistribution { offset: 0, counts: Vec::new() },
        Some(a) => {
            let b = counts.iter().rposition(|c| !c.is_zero()).unwrap();
            counts.truncate(b + 1);
            counts.drain(..a);
            WalkDistribution { offset: offset + a as i64, counts }
        }
    }
}

fn value_range(f: &[i64], n: usize) -> (i64, usize) {
    let fmin = *f.iter().min().unwrap_or(&0);
    let fmax = *f.iter().max().unwrap_or(&0);
    let lo = (n as i64 * fmin).min(0);
    let hi = (n as i64 * fmax).max(0);
    (lo, (hi - lo + 1) as usize)
}

/// Distribution of `Σ f` over closed walks of length `n`, i.e. the coefficients of
/// `tr((diag(x^f) W)^n)`.
pub fn closed_walk_distribution<T: Ring>(weights: &Matrix<T>, f: &[i64], n: usize) -> Result<WalkDistribution<T>> {
    check(weights, f)?;
    let k = weights.rows();
    let (lo, width) = value_range(f, n);
    let mut total = vec![T::zero(); width];
    for s in 0..k {
        let cur = propagate(weights, f, n, s, lo, width);
        for (t, c) in total.iter_mut().zip(&cur[s]) {
            *t += c;
        }
    }
    Ok(trimmed(lo, total))
}

/// Distribution of `Σ f` over walks of length `n` from `from` to `to`.
pub fn path_distribution<T: Ring>(weights: &Matrix<T>, f: &[i64], n: usize, from: usize, to: usize) -> Result<WalkDistribution<T>> {
    check(weights, f)?;
    if from >= weights.rows() || to >= weights.rows() {
        return Err(invalid("endpoint out of range"));
    }
    let (lo, width) = value_range(f, n);
    let cur = propagate(weights, f, n, from, lo, width);
    Ok(trimmed(lo, cur[to].clone()))
}

/// Residues of `Σ f` modulo `p` over closed walks of length `n`, via the `(vertex, residue)` chain.
pub fn closed_walk_residues<T: Ring>(weights: &Matrix<T>, f: &[i64], p: u64, n: usize) -> Result<Vec<T>> {
    check(weights, f)?;
    if p == 0 {
        return Err(invalid("modulus must be positive"));
    }
    let k = weights.rows();
    let p_us = p as usize;
    let fr: Vec<usize> = f.iter().map(|&x| x.rem_euclid(p as i64) as usize).collect();
    let arcs: Vec<Vec<(usize, T)>> = (0..k)
        .map(|v| (0..k).filter(|&w| !weights[(v, w)].is_zero()).map(|w| (w, weights[(v, w)].clone())).collect())
        .collect();
    let mut total = vec![T::zero(); p_us];
    for s in 0..k {
        let mut cur = vec![vec![T::zero(); p_us]; k];
        cur[s][0] = T::one();
        for _ in 0..n {
            let mut next = vec![vec![T::zero(); p_us]; k];
            for v in 0..k {
                for (w, weight) in &arcs[v] {
                    for q in 0..p_us {
                        let c = &cur[v][q];
                        if c.is_zero() {
                            continue;
                        }
                        let mut prod = c.clone();
                        prod *= weight;
                        next[*w][(q + fr[v]) % p_us] += &prod;
                    }
                }
            }
            cur = next;
        }
        for (t, c) in total.iter_mut().zip(&cur[s]) {
            *t += c;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{trace_power, Graph};

    #[test]
    fn totals_match_trace() {
        let a = Graph::petersen().adjacency_int();
        let f = [1, -2, 0, 3, 1, 1, -1, 0, 2, -3];
        for n in 1..8 {
            let d = closed_walk_distribution(&a, &f, n).unwrap();
            assert_eq!(d.total(), trace_power(&a, n as u64));
            let r = closed_walk_residues(&a, &f, 5, n).unwrap();
            assert_eq!(r, d.residues(5));
        }
    }

    #[test]
    fn path_totals_match_matrix_power() {
        let a = Graph::complete(4).adjacency_int();
        let p = a.pow(6);
        let d = path_distribution(&a, &[1, 0, 0, 2], 6, 0, 3).unwrap();
        assert_eq!(d.total(), p[(0, 3)]);
    }
}
