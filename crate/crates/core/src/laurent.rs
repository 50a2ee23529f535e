//! Sparse multivariate Laurent polynomials.

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::scalar::Ring;

/// Exponent vector of a Laurent monomial.
pub type Exponent = SmallVec<[i32; 4]>;

/// `Σ c_e x^e` over `nvars` variables with integer (possibly negative) exponents.
#[derive(Clone, Debug)]
pub struct Laurent<T> {
    nvars: usize,
    terms: HashMap<Exponent, T>,
}

impl<T: Ring> PartialEq for Laurent<T> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<T: Ring> Laurent<T> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: HashMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(&vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    pub fn monomial(exps: &[i32], c: T) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// `x_i^power`.
    pub fn var(nvars: usize, i: usize, power: i32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = power;
        Self::monomial(&e, T::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i32]) -> T {
        self.terms.get(exps).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, exps: &[i32], c: T) {
        assert_eq!(exps.len(), self.nvars, "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        let key: Exponent = exps.iter().copied().collect();
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    /// Terms sorted by exponent vector.
    pub fn sorted_terms(&self) -> Vec<(Exponent, T)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            t *= s;
            out.add_term(e, t);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        let mut key = vec![0i32; self.nvars];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for i in 0..self.nvars {
                    key[i] = ea[i] + eb[i];
                }
                let mut t = ca.clone();
                t *= cb;
                out.add_term(&key, t);
            }
        }
        out
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &[i32]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, c) in &self.terms {
            let key: Exponent = k.iter().zip(e).map(|(a, b)| a + b).collect();
            out.terms.insert(key, c.clone());
        }
        out
    }

    pub fn map_coeffs<U: Ring>(&self, f: impl Fn(&T) -> U) -> Laurent<U> {
        let mut out = Laurent::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e, f(c));
        }
        out
    }

    /// Image under `x_i ↦ x` for every `i`: a one-variable Laurent polynomial.
    pub fn collapse(&self) -> Laurent<T> {
        let mut out = Laurent::zero(1);
        for (e, c) in &self.terms {
            out.add_term(&[e.iter().sum::<i32>()], c.clone());
        }
        out
    }

    /// Sum of all coefficients (evaluation at `x = 1`).
    pub fn coefficient_sum(&self) -> T {
        let mut acc = T::zero();
        for c in self.terms.values() {
            acc += c;
        }
        acc
    }

    /// Exponent vector of the image under `x_i ↦ x_{σ(i)}` with optional inversion, applied to every term.
    pub fn substitute(&self, perm: &[usize], invert: &[bool]) -> Self {
        let mut out = Self::zero(self.nvars);
        let mut key = vec![0; self.nvars];
        for (e, c) in &self.terms {
            for i in 0..self.nvars {
                key[perm[i]] = if invert[i] { -e[i] } else { e[i] };
            }
            out.add_term(&key, c.clone());
        }
        out
    }
}

/// `x_1 + 1/x_1 + … + x_k + 1/x_k`.
pub fn symmetric_sum<T: Ring>(k: usize) -> Laurent<T> {
    let mut s = Laurent::zero(k);
    for i in 0..k {
        s = s.add(&Laurent::var(k, i, 1)).add(&Laurent::var(k, i, -1));
    }
    s
}
