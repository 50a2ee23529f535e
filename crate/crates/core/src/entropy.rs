//! Topological entropy of vertex-weighted cycle counting.
//!
//! For a nonnegative primitive matrix `A` and positive weights `f`, `M(s, f) = diag(e^{−s fᵢ}) A`
//! has Perron root `ρ(s, f)`. The entropy `s₀(f)` is the unique `s` with `ρ(s₀, f) = 1`; it is the
//! exponential growth rate in `L` of the number of closed walks whose total weight is at most `L`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, precondition, Error, Result};
use crate::graph::Graph;
use crate::linalg::distinct_roots;
use crate::matrix::{dot, Matrix};
use crate::perturbation::{complexify, reduced_resolvent, second_order, PerturbationProblem};
use crate::poly::Poly;

/// Relative tolerance on `|ρ(s₀) − 1|`.
pub const ENTROPY_TOL: f64 = 1e-13;

/// A nonnegative primitive matrix with positive vertex weights.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyProblem {
    pub a: Matrix<f64>,
    pub f: Vec<f64>,
}

/// Perron root of `M(s, f)` with positive right and left eigenvectors, both of unit length.
#[derive(Clone, Debug, PartialEq)]
pub struct PerronData {
    pub rho: f64,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl PerronData {
    /// `πᵢ = wᵢvᵢ / wᵗv`, the weights in `∂ρ/∂fᵢ`; a probability vector.
    pub fn measure(&self) -> Vec<f64> {
        let wv = dot(&self.w, &self.v);
        self.w.iter().zip(&self.v).map(|(a, b)| a * b / wv).collect()
    }
}

fn check_primitive(a: &Matrix<f64>) -> Result<()> {
    if !a.is_square() || a.rows() == 0 {
        return Err(invalid("matrix must be square and nonempty"));
    }
    if a.as_slice().iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(precondition("matrix must have finite nonnegative entries"));
    }
    let pattern = a.map(|&x| u64::from(x > 0.0));
    if !Graph::from_adjacency(pattern, true)?.is_primitive() {
        return Err(precondition("matrix is not primitive"));
    }
    Ok(())
}

/// Collatz–Wielandt bounds `min (Mv)ᵢ/vᵢ ≤ ρ ≤ max (Mv)ᵢ/vᵢ` for positive `v`.
fn cw_bounds(m: &Matrix<f64>, v: &[f64]) -> (f64, f64) {
    let mv = m.mul_vec(v);
    mv.iter().zip(v).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a / b), hi.max(a / b)))
}

fn normalise(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Perron root and unit positive eigenvector of a primitive nonnegative matrix: power iteration
/// on `M + I` to a coarse bracket, then inverse iteration shifted just above the upper
/// Collatz–Wielandt bound.
pub fn perron_vector(m: &Matrix<f64>) -> Result<(f64, Vec<f64>)> {
    let n = m.rows();
    let shifted = Matrix::identity(n).add(m);
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut bounds = cw_bounds(m, &v);
    let mut it = 0;
    while bounds.1 - bounds.0 > 1e-6 * bounds.1 && it < 200_000 {
        v = shifted.mul_vec(&v);
        normalise(&mut v);
        if v.iter().any(|&x| x <= 0.0) {
            v.iter_mut().for_each(|x| *x = x.max(f64::MIN_POSITIVE));
        }
        bounds = cw_bounds(m, &v);
        it += 1;
    }
    for _ in 0..60 {
        let (lo, hi) = bounds;
        if hi - lo <= 4.0 * f64::EPSILON * hi * n as f64 {
            break;
        }
        let mu = hi + (hi - lo).max(f64::EPSILON * hi);
        let shift = Matrix::identity(n).scale(&mu).sub(m);
        let mut x = shift.solve(&v).map_err(|_| Error::Singular)?;
        if x.iter().any(|&y| y <= 0.0) {
            break;
        }
        normalise(&mut x);
        let nb = cw_bounds(m, &x);
        if nb.1 - nb.0 >= hi - lo {
            v = x;
            bounds = nb;
            break;
        }
        v = x;
        bounds = nb;
    }
    let (lo, hi) = bounds;
    if !(lo > 0.0) || hi - lo > 1e-9 * hi {
        return Err(Error::NonConvergence { iterations: it, residual: hi - lo });
    }
    Ok((0.5 * (lo + hi), v))
}

impl EntropyProblem {
    /// Validates primitivity and strict positivity of the weights.
    pub fn new(a: Matrix<f64>, f: Vec<f64>) -> Result<Self> {
        check_primitive(&a)?;
        if f.len() != a.rows() {
            return Err(Error::Dimension { expected: a.rows(), got: f.len() });
        }
        if f.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(precondition("weights must be finite and positive"));
        }
        Ok(Self { a, f })
    }

    /// Problem on a graph's adjacency matrix.
    pub fn from_graph(g: &Graph, f: Vec<f64>) -> Result<Self> {
        Self::new(g.adjacency_f64(), f)
    }

    /// `M(s, f) = diag(e^{−s fᵢ}) A`.
    pub fn matrix(&self, s: f64) -> Matrix<f64> {
        let d: Vec<f64> = self.f.iter().map(|x| (-s * x).exp()).collect();
        self.a.scale_rows(&d)
    }

    pub fn perron(&self, s: f64) -> Result<PerronData> {
        let m = self.matrix(s);
        let (rho, v) = perron_vector(&m)?;
        let (_, w) = perron_vector(&m.transpose())?;
        Ok(PerronData { rho, v, w })
    }

    pub fn rho(&self, s: f64) -> Result<f64> {
        Ok(self.perron(s)?.rho)
    }

    /// `∂ρ/∂s = −ρ Σ fᵢπᵢ`.
    pub fn rho_ds(&self, s: f64) -> Result<f64> {
        let p = self.perron(s)?;
        Ok(-p.rho * dot(&self.f, &p.measure()))
    }

    /// `∂ρ/∂fᵢ = −sρπᵢ`; for symmetric `A` this is `−sρuᵢ²` with `u` the unit Perron vector of
    /// `E^{1/2}AE^{1/2}`.
    pub fn rho_gradient(&self, s: f64) -> Result<Vec<f64>> {
        let p = self.perron(s)?;
        Ok(p.measure().iter().map(|x| -s * p.rho * x).collect())
    }

    /// `d²/dt² ρ(s, f + tg)` at `t = 0` from the second-order perturbation coefficient.
    pub fn rho_second_directional(&self, s: f64, g: &[f64]) -> Result<f64> {
        let n = self.f.len();
        if g.len() != n {
            return Err(Error::Dimension { expected: n, got: g.len() });
        }
        if g.iter().all(|x| *x == 0.0) || s == 0.0 {
            return Ok(0.0);
        }
        let m = self.matrix(s);
        let p = self.perron(s)?;
        let cm = complexify(&m);
        let d1: Vec<Complex64> = g.iter().map(|x| Complex64::new(-s * x, 0.0)).collect();
        let d2: Vec<Complex64> = g.iter().map(|x| Complex64::new(0.5 * s * s * x * x, 0.0)).collect();
        let prob = PerturbationProblem::new(
            cm.clone(),
            Complex64::new(p.rho, 0.0),
            p.v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            cm.scale_rows(&d1),
            cm.scale_rows(&d2),
        )?;
        Ok(2.0 * second_order(&prob)?.re)
    }

    /// The printed simplification `ρs²(Dv)ᵗ(P − ρS)(Dv)` with `P = vwᵗ/wᵗv` and `S` the reduced
    /// resolvent of `M − ρ`.
    pub fn rho_second_printed(&self, s: f64, g: &[f64]) -> Result<f64> {
        let m = self.matrix(s);
        let p = self.perron(s)?;
        let r = reduced_resolvent(&m, p.rho, &p.v)?;
        let dv: Vec<f64> = g.iter().zip(&p.v).map(|(a, b)| a * b).collect();
        let form = r.p.sub(&r.s.scale(&p.rho));
        Ok(p.rho * s * s * dot(&dv, &form.mul_vec(&dv)))
    }
}

/// The entropy `s₀` with `ρ(s₀, f) = 1`, by Newton's method on `log ρ` safeguarded by a bisection
/// bracket.
pub fn entropy(prob: &EntropyProblem) -> Result<f64> {
    let rho0 = prob.rho(0.0)?;
    if rho0 <= 1.0 {
        return Err(precondition(format!("spectral radius {rho0} ≤ 1, so no positive entropy exists")));
    }
    let fmin = prob.f.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = rho0.ln() / fmin;
    while prob.rho(hi)? > 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    let mut s = 0.0;
    for _ in 0..200 {
        let p = prob.perron(s)?;
        let g = p.rho.ln();
        if (p.rho - 1.0).abs() <= ENTROPY_TOL {
            return Ok(s);
        }
        if g > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let dg = -dot(&prob.f, &p.measure());
        let newton = s - g / dg;
        s = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let r = prob.rho(s)?;
    if (r - 1.0).abs() <= 1e-12 {
        Ok(s)
    } else {
        Err(Error::NonConvergence { iterations: 200, residual: r - 1.0 })
    }
}

/// Gradient of the entropy in the weights, `∂s₀/∂fᵢ = −s₀πᵢ / Σⱼ fⱼπⱼ`.
pub fn entropy_gradient(prob: &EntropyProblem) -> Result<(f64, Vec<f64>)> {
    let s0 = entropy(prob)?;
    let pi = prob.perron(s0)?.measure();
    let fp = dot(&prob.f, &pi);
    Ok((s0, pi.iter().map(|x| -s0 * x / fp).collect()))
}

/// A weight vector on the simplex `Σfᵢ = 1` with its entropy.
#[derive(Clone, Debug, PartialEq)]
pub struct MinEntropy {
    pub f: Vec<f64>,
    pub s0: f64,
}

/// The displayed minimiser `fᵢ = log(A1)ᵢ / Σ log(A1)ⱼ` with entropy `Σ log(A1)ᵢ`.
pub fn min_entropy_weights(a: &Matrix<f64>) -> Result<MinEntropy> {
    check_primitive(a)?;
    let logs: Vec<f64> = (0..a.rows()).map(|i| a.row(i).iter().sum::<f64>().ln()).collect();
    if logs.iter().any(|&x| x <= 0.0) {
        return Err(precondition("every row sum must exceed 1"));
    }
    let total: f64 = logs.iter().sum();
    Ok(MinEntropy { f: logs.iter().map(|x| x / total).collect(), s0: total })
}

/// Positive diagonals `r`, `c` with `diag(r) A diag(c)` doubly stochastic, by Sinkhorn iteration.
pub fn sinkhorn(a: &Matrix<f64>, tol: f64, max_iter: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = a.rows();
    let at = a.transpose();
    let mut c = vec![1.0; n];
    let mut r = vec![1.0; n];
    for it in 0..max_iter {
        r = a.mul_vec(&c).iter().map(|x| 1.0 / x).collect();
        c = at.mul_vec(&r).iter().map(|x| 1.0 / x).collect();
        let rows = a.mul_vec(&c);
        let err = rows.iter().zip(&r).map(|(x, ri)| (x * ri - 1.0).abs()).fold(0.0, f64::max);
        if err <= tol {
            return Ok((r, c));
        }
        if !err.is_finite() {
            return Err(Error::NonConvergence { iterations: it, residual: err });
        }
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: f64::NAN })
}

/// Minimiser of `s₀` on the simplex from matrix scaling: the optimum makes the Perron measure
/// uniform, which happens exactly when `diag(e^{−s₀f}) A` is diagonally similar to a doubly
/// stochastic matrix. Fails when the optimum is not in the open simplex.
pub fn sinkhorn_min_entropy(a: &Matrix<f64>) -> Result<MinEntropy> {
    check_primitive(a)?;
    let (r, c) = sinkhorn(a, 1e-15, 1_000_000)?;
    let x: Vec<f64> = r.iter().zip(&c).map(|(a, b)| -(a * b).ln()).collect();
    if x.iter().any(|&v| v <= 0.0) {
        return Err(precondition("the entropy minimiser lies on the boundary of the simplex"));
    }
    let s0: f64 = x.iter().sum();
    Ok(MinEntropy { f: x.iter().map(|v| v / s0).collect(), s0 })
}

/// Minimises `s₀` on the simplex by projected gradient descent with Barzilai–Borwein steps and
/// backtracking, starting from uniform weights.
pub fn numerical_min_entropy(a: &Matrix<f64>, tol: f64, max_iter: usize) -> Result<MinEntropy> {
    check_primitive(a)?;
    let n = a.rows();
    let project = |g: &[f64]| {
        let mean = g.iter().sum::<f64>() / n as f64;
        g.iter().map(|x| x - mean).collect::<Vec<f64>>()
    };
    let eval = |f: &[f64]| -> Result<(f64, Vec<f64>)> {
        let (s0, g) = entropy_gradient(&EntropyProblem::new(a.clone(), f.to_vec())?)?;
        Ok((s0, project(&g)))
    };
    let mut f = vec![1.0 / n as f64; n];
    let (mut s, mut g) = eval(&f)?;
    let mut step = 0.1 / g.iter().map(|x| x.abs()).fold(f64::MIN_POSITIVE, f64::max);
    for _ in 0..max_iter {
        let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gnorm <= tol {
            break;
        }
        let mut t = step;
        let (nf, ns, ng) = loop {
            let cand: Vec<f64> = f.iter().zip(&g).map(|(x, d)| x - t * d).collect();
            if cand.iter().all(|&x| x > 0.0) {
                let (cs, cg) = eval(&cand)?;
                if cs <= s - 1e-4 * t * gnorm * gnorm || t < 1e-300 {
                    break (cand, cs, cg);
                }
            }
            t *= 0.5;
        };
        let sk: Vec<f64> = nf.iter().zip(&f).map(|(a, b)| a - b).collect();
        let yk: Vec<f64> = ng.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&sk, &yk);
        step = if sy > 0.0 { dot(&sk, &sk) / sy } else { 2.0 * t };
        let moved = sk.iter().map(|x| x.abs()).fold(0.0, f64::max);
        f = nf;
        s = ns;
        g = ng;
        if moved <= 1e-16 {
            break;
        }
    }
    Ok(MinEntropy { f, s0: s })
}

/// Number of closed walks (over all starting vertices and lengths `≥ 1`) whose total weight is at
/// most `l`, for an integer matrix and integer weights `≥ 1`.
pub fn cycle_count_up_to(a: &Matrix<BigInt>, f: &[u64], l: u64) -> Result<BigInt> {
    let n = a.rows();
    if !a.is_square() || f.len() != n {
        return Err(Error::Dimension { expected: n, got: f.len() });
    }
    if f.iter().any(|&x| x == 0) {
        return Err(precondition("weights must be at least 1"));
    }
    if a.as_slice().iter().any(|x| x.is_negative()) {
        return Err(precondition("matrix must be nonnegative"));
    }
    let l = l as usize;
    let mut total = BigInt::zero();
    for start in 0..n {
        let mut table = vec![vec![BigInt::zero(); n]; l + 1];
        table[0][start] = BigInt::one();
        for w in 0..=l {
            for v in 0..n {
                if table[w][v].is_zero() {
                    continue;
                }
                let nw = w + f[v] as usize;
                if nw > l {
                    continue;
                }
                let cur = table[w][v].clone();
                for u in 0..n {
                    if !a[(v, u)].is_zero() {
                        let add = &cur * &a[(v, u)];
                        table[nw][u] += add;
                    }
                }
            }
        }
        for row in table.iter().skip(1) {
            total += &row[start];
        }
    }
    Ok(total)
}

/// `det(I − diag(u^{fᵢ}) A)` as an integer polynomial in `u`, by exact interpolation.
pub fn radius_polynomial(a: &Matrix<BigInt>, f: &[u64]) -> Result<Poly<BigInt>> {
    let n = a.rows();
    if !a.is_square() || f.len() != n {
        return Err(Error::Dimension { expected: n, got: f.len() });
    }
    let deg: usize = f.iter().map(|&x| x as usize).sum();
    let ar = a.map(|x| BigRational::from_integer(x.clone()));
    let xs: Vec<BigRational> = (0..=deg).map(|i| BigRational::from_integer(BigInt::from(i))).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|u| {
            let d: Vec<BigRational> = f.iter().map(|&e| num_traits::pow(u.clone(), e as usize)).collect();
            Matrix::identity(n).sub(&ar.scale_rows(&d)).det()
        })
        .collect::<Result<_>>()?;
    let mut coeffs = ys.clone();
    for j in 1..=deg {
        for i in (j..=deg).rev() {
            coeffs[i] = (coeffs[i].clone() - coeffs[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
        }
    }
    let mut p = Poly::constant(coeffs[deg].clone());
    for i in (0..deg).rev() {
        let lin = Poly::new(vec![-xs[i].clone(), BigRational::one()]);
        p = &(&p * &lin) + &Poly::constant(coeffs[i].clone());
    }
    p.to_integer().ok_or_else(|| Error::InexactDivision("interpolated determinant is not integral".into()))
}

/// Smallest positive real root of `det(I − diag(u^{fᵢ}) A)`, the radius of convergence of
/// `Σₙ tr Uⁿ`; equals `e^{−s₀}`.
pub fn convergence_radius(a: &Matrix<BigInt>, f: &[u64]) -> Result<f64> {
    let p = radius_polynomial(a, f)?.to_rational();
    distinct_roots(&p)?
        .into_iter()
        .filter(|z| z.im.abs() < 1e-9 && z.re > 0.0)
        .map(|z| z.re)
        .fold(None, |best: Option<f64>, x| Some(best.map_or(x, |b| b.min(x))))
        .ok_or_else(|| precondition("no positive real root"))
}

/// Natural log of a positive big integer, exact to double precision.
pub fn ln_count(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}
