//! Eigenvalue perturbation of a simple eigenvalue: reduced resolvent and the first two Kato coefficients.
//!
//! For `M(x) = M + M1·x + M2·x² + …` the tracked eigenvalue is `λ(x) = λ + λ1·x + λ2·x² + …` with
//! `λ1 = tr(M1 P)` and `λ2 = tr(M2 P − M1 S M1 P)`, where `P` is the spectral projector and `S` the
//! reduced resolvent at `λ`.

use num_complex::Complex64;

use crate::error::{invalid, precondition, Error, Result};
use crate::graph::Graph;
use crate::linalg::{eigenvalues, norm2};
use crate::matrix::{dot, Matrix};
use crate::scalar::Field;

pub type CMatrix = Matrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Orthogonal projector `v vᵀ` onto the span of a unit vector.
pub fn projector(v: &[f64]) -> Result<Matrix<f64>> {
    let n = norm2(v);
    if (n - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("projector needs a unit vector, got norm {n}")));
    }
    Ok(Matrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j]))
}

/// Spectral projector `v wᵀ / (wᵀ v)` for right eigenvector `v` and left eigenvector `w`.
pub fn spectral_projector<T: Field>(v: &[T], w: &[T]) -> Result<Matrix<T>> {
    let s = dot(w, v);
    if s.magnitude() <= f64::EPSILON * (max_mag(v) * max_mag(w)).max(f64::MIN_POSITIVE) {
        return Err(Error::NotSimple { gap: s.magnitude(), tol: f64::EPSILON });
    }
    Ok(Matrix::from_fn(v.len(), v.len(), |i, j| {
        let mut x = v[i].clone();
        x *= &w[j];
        x / s.clone()
    }))
}

fn max_mag<T: Field>(v: &[T]) -> f64 {
    v.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
}

fn shifted<T: Field>(m: &Matrix<T>, lambda: &T) -> Matrix<T> {
    m.sub(&Matrix::identity(m.rows()).scale(lambda))
}

fn scale_of<T: Field>(m: &Matrix<T>) -> f64 {
    let n = m.rows();
    (0..n).map(|i| (0..n).map(|j| m[(i, j)].magnitude()).sum::<f64>()).fold(1.0, f64::max)
}

/// Reduced resolvent `S` together with the spectral projector `P` it was built from.
#[derive(Clone, Debug)]
pub struct ReducedResolvent<T> {
    pub s: Matrix<T>,
    pub p: Matrix<T>,
    pub lambda: T,
}

impl<T: Field> ReducedResolvent<T> {
    /// Largest entry of the residuals `SP`, `PS`, `(M−λ)S − (I−P)`, `S(M−λ) − (I−P)` and `MS − (I − P + λS)`.
    pub fn residual(&self, m: &Matrix<T>) -> f64 {
        let n = m.rows();
        let q = shifted(m, &self.lambda);
        let comp = Matrix::identity(n).sub(&self.p);
        let resolv2 = m.matmul(&self.s).sub(&comp.add(&self.s.scale(&self.lambda)));
        [
            self.s.matmul(&self.p),
            self.p.matmul(&self.s),
            q.matmul(&self.s).sub(&comp),
            self.s.matmul(&q).sub(&comp),
            resolv2,
        ]
        .iter()
        .map(|r| max_mag(r.as_slice()))
        .fold(0.0, f64::max)
    }
}

/// Left eigenvector for the simple eigenvalue `λ`, from the null space of `(M − λ)ᵀ`.
pub fn left_eigenvector<T: Field>(m: &Matrix<T>, lambda: &T, tol: f64) -> Result<Vec<T>> {
    let qt = shifted(m, lambda).transpose();
    let ns = qt.null_space(tol * scale_of(m));
    match ns.len() {
        1 => Ok(ns.into_iter().next().unwrap()),
        0 => Err(invalid("value is not an eigenvalue within tolerance")),
        k => Err(Error::NotSimple { gap: 0.0, tol: k as f64 }),
    }
}

/// Reduced resolvent `S = (M − λ + P)⁻¹ − P` at a simple eigenvalue with right eigenvector `v`.
pub fn reduced_resolvent<T: Field>(m: &Matrix<T>, lambda: T, v: &[T]) -> Result<ReducedResolvent<T>> {
    reduced_resolvent_tol(m, lambda, v, 1e-9)
}

pub fn reduced_resolvent_tol<T: Field>(m: &Matrix<T>, lambda: T, v: &[T], tol: f64) -> Result<ReducedResolvent<T>> {
    if !m.is_square() || v.len() != m.rows() {
        return Err(Error::Dimension { expected: m.rows(), got: v.len() });
    }
    let scale = scale_of(m);
    let res = shifted(m, &lambda).mul_vec(v);
    if max_mag(&res) > tol * scale * max_mag(v).max(1.0) {
        return Err(invalid(format!("v is not an eigenvector: residual {:e}", max_mag(&res))));
    }
    let w = left_eigenvector(m, &lambda, tol)?;
    let p = spectral_projector(v, &w)?;
    let r = shifted(m, &lambda).add(&p).inverse().map_err(|_| Error::NotSimple { gap: 0.0, tol })?;
    Ok(ReducedResolvent { s: r.sub(&p), p, lambda })
}

/// Analytic family truncated at second order around a simple eigenvalue.
#[derive(Clone, Debug)]
pub struct PerturbationProblem {
    pub m: CMatrix,
    pub lambda: Complex64,
    pub v: Vec<Complex64>,
    pub m1: CMatrix,
    pub m2: CMatrix,
    /// Distance from `λ` to the nearest other eigenvalue.
    pub gap: f64,
}

impl PerturbationProblem {
    pub fn new(m: CMatrix, lambda: Complex64, v: Vec<Complex64>, m1: CMatrix, m2: CMatrix) -> Result<Self> {
        let n = m.rows();
        if !m.is_square() || v.len() != n {
            return Err(Error::Dimension { expected: n, got: v.len() });
        }
        for x in [&m1, &m2] {
            if x.rows() != n || x.cols() != n {
                return Err(Error::Dimension { expected: n, got: x.rows() });
            }
        }
        let tol = 1e-9 * scale_of(&m);
        let res = shifted(&m, &lambda).mul_vec(&v);
        if max_mag(&res) > tol * max_mag(&v).max(1.0) {
            return Err(invalid(format!("v is not an eigenvector: residual {:e}", max_mag(&res))));
        }
        let gap = eigen_gap(&m, lambda)?;
        if gap < tol {
            return Err(Error::NotSimple { gap, tol });
        }
        Ok(Self { m, lambda, v, m1, m2, gap })
    }

    /// Problem for the Perron eigenvalue of a real matrix with nonnegative entries.
    pub fn perron(m: &Matrix<f64>, m1: CMatrix, m2: CMatrix) -> Result<Self> {
        let (lambda, v) = perron_pair(m)?;
        Self::new(complexify(m), Complex64::new(lambda, 0.0), v.iter().map(|&x| Complex64::new(x, 0.0)).collect(), m1, m2)
    }

    /// `M(x) = M + M1 x + M2 x²` at `x`.
    pub fn at(&self, x: f64) -> CMatrix {
        let x = Complex64::new(x, 0.0);
        self.m.add(&self.m1.scale(&x)).add(&self.m2.scale(&(x * x)))
    }
}

fn eigen_gap(m: &CMatrix, lambda: Complex64) -> Result<f64> {
    let mut d: Vec<f64> = eigenvalues(m)?.iter().map(|z| (z - lambda).norm()).collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d.get(1).copied().unwrap_or(f64::INFINITY))
}

pub fn complexify(m: &Matrix<f64>) -> CMatrix {
    m.map(|&x| Complex64::new(x, 0.0))
}

/// Perron root and unit positive eigenvector. Constant row sums give the constant vector directly;
/// otherwise power iteration on `M + I` is refined by inverse iteration at the largest real eigenvalue.
pub fn perron_pair(m: &Matrix<f64>) -> Result<(f64, Vec<f64>)> {
    let n = m.rows();
    if !m.is_square() || n == 0 {
        return Err(invalid("matrix must be square and nonempty"));
    }
    if m.as_slice().iter().any(|&x| x < 0.0) {
        return Err(precondition("matrix has negative entries"));
    }
    let rows: Vec<f64> = (0..n).map(|i| m.row(i).iter().sum()).collect();
    if rows.iter().all(|r| (r - rows[0]).abs() <= 1e-14 * rows[0].abs().max(1.0)) {
        return Ok((rows[0], vec![1.0 / (n as f64).sqrt(); n]));
    }
    let shift = Matrix::<f64>::identity(n).add(m);
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0;
    for it in 0..10_000 {
        let mut w = shift.mul_vec(&v);
        let nw = norm2(&w);
        if nw == 0.0 {
            return Err(Error::Singular);
        }
        w.iter_mut().for_each(|x| *x /= nw);
        let diff = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        lambda = dot(&v, &m.mul_vec(&v)) / dot(&v, &v);
        if diff < 1e-15 && it > 10 {
            break;
        }
    }
    let evs = eigenvalues(m)?;
    let best = evs.iter().filter(|z| z.im.abs() < 1e-9).map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if best.is_finite() {
        lambda = best;
    }
    let mut q = m.sub(&Matrix::identity(n).scale(&lambda));
    let bump = 1e-13 * scale_of(m);
    for i in 0..n {
        q[(i, i)] -= bump;
    }
    if let Ok(lu) = q.lu() {
        if !lu.is_singular() {
            for _ in 0..3 {
                if let Ok(mut w) = lu.solve(&v) {
                    let nw = norm2(&w);
                    let sign = if w.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
                    w.iter_mut().for_each(|x| *x *= sign / nw);
                    v = w;
                }
            }
        }
    }
    Ok((lambda, v))
}

/// `λ1 = tr(M1 P)`.
pub fn first_order(prob: &PerturbationProblem) -> Result<Complex64> {
    let r = reduced_resolvent_tol(&prob.m, prob.lambda, &prob.v, 1e-8)?;
    Ok(prob.m1.matmul(&r.p).trace())
}

/// `λ2 = tr(M2 P − M1 S M1 P)`.
pub fn second_order(prob: &PerturbationProblem) -> Result<Complex64> {
    let r = reduced_resolvent_tol(&prob.m, prob.lambda, &prob.v, 1e-8)?;
    let a = prob.m2.matmul(&r.p).trace();
    let b = prob.m1.matmul(&r.s).matmul(&prob.m1).matmul(&r.p).trace();
    Ok(a - b)
}

/// Family `M(x) = D(x) M` with `D(x) = I + diag(d1)·x + diag(d2)·x² + …`; returns `(M1, M2)`.
pub fn diagonal_family(m: &Matrix<f64>, d1: &[Complex64], d2: &[Complex64]) -> (CMatrix, CMatrix) {
    let cm = complexify(m);
    (cm.scale_rows(d1), cm.scale_rows(d2))
}

/// Problem for `D(x) = diag(e^{i f_j x})` acting on `M`: `M1 = iF M`, `M2 = −½F² M`.
pub fn harmonic_problem(m: &Matrix<f64>, f: &[f64]) -> Result<PerturbationProblem> {
    if f.len() != m.rows() {
        return Err(Error::Dimension { expected: m.rows(), got: f.len() });
    }
    let d1: Vec<Complex64> = f.iter().map(|&x| I * x).collect();
    let d2: Vec<Complex64> = f.iter().map(|&x| Complex64::new(-0.5 * x * x, 0.0)).collect();
    let (m1, m2) = diagonal_family(m, &d1, &d2);
    PerturbationProblem::perron(m, m1, m2)
}

/// Which of the hypotheses behind the nonpositivity of `λ2` hold for `M` and `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Assumptions {
    /// The constant vector spans the eigenspace of a simple eigenvalue.
    pub constant_eigenvector: bool,
    /// `M` is `λ > 0` times a doubly stochastic matrix.
    pub scaled_doubly_stochastic: bool,
    pub mean_zero: bool,
    pub irreducible: bool,
    pub primitive: bool,
    pub normal: bool,
    /// Common row and column sum.
    pub lambda: f64,
}

pub fn check_assumptions(m: &Matrix<f64>, f: &[f64], tol: f64) -> Result<Assumptions> {
    let n = m.rows();
    if !m.is_square() || f.len() != n || n == 0 {
        return Err(Error::Dimension { expected: n, got: f.len() });
    }
    let scale = scale_of(m);
    let rows: Vec<f64> = (0..n).map(|i| m.row(i).iter().sum()).collect();
    let cols: Vec<f64> = (0..n).map(|j| m.column(j).iter().sum()).collect();
    let lambda = rows[0];
    let flat = |v: &[f64]| v.iter().all(|x| (x - lambda).abs() <= tol * scale);
    let nonneg = m.as_slice().iter().all(|&x| x >= -tol * scale);
    let scaled_doubly_stochastic = lambda > 0.0 && nonneg && flat(&rows) && flat(&cols);
    let pattern = m.map(|&x| u64::from(x > tol * scale));
    let g = Graph::from_adjacency(pattern, true)?;
    let irreducible = g.connectivity().strongly_connected;
    let primitive = g.is_primitive();
    let mut constant_eigenvector = flat(&rows);
    if constant_eigenvector {
        let gap = eigen_gap(&complexify(m), Complex64::new(lambda, 0.0))?;
        constant_eigenvector = gap > tol * scale;
    }
    let mt = m.transpose();
    let normal = m.matmul(&mt).max_abs_diff(&mt.matmul(m)) <= tol * scale * scale;
    let mean_zero = f.iter().sum::<f64>().abs() <= tol * f.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    Ok(Assumptions { constant_eigenvector, scaled_doubly_stochastic, mean_zero, irreducible, primitive, normal, lambda })
}

fn require(a: &Assumptions) -> Result<()> {
    if !a.constant_eigenvector {
        return Err(precondition("the constant vector does not span a simple eigenspace"));
    }
    if !a.scaled_doubly_stochastic {
        return Err(precondition("matrix is not a positive multiple of a doubly stochastic matrix"));
    }
    if !a.mean_zero {
        return Err(precondition("weight function does not have mean zero"));
    }
    Ok(())
}

/// `λ2 = −(λ/2k) f₀ᵀ(−I − 2λS) f₀` for `M` a multiple of a doubly stochastic matrix and mean-zero `f`.
pub fn harmonic_second_variation(m: &Matrix<f64>, f: &[f64]) -> Result<f64> {
    let a = check_assumptions(m, f, 1e-9)?;
    require(&a)?;
    harmonic_unchecked(m, f, a.lambda)
}

fn harmonic_unchecked(m: &Matrix<f64>, f: &[f64], lambda: f64) -> Result<f64> {
    let k = f.len();
    let one = vec![1.0 / (k as f64).sqrt(); k];
    let r = reduced_resolvent(m, lambda, &one)?;
    let sf = r.s.mul_vec(f);
    let form = -dot(f, f) - 2.0 * lambda * dot(f, &sf);
    Ok(-lambda / (2.0 * k as f64) * form)
}

/// Second-order coefficient `(λ/k)[Σ d2 − ‖d1₀‖² − λ d1ᵀ S d1]` for a real diagonal family
/// `D(x) = I + diag(d1) x + diag(d2) x²` acting on a matrix with constant eigenvector.
pub fn stochastic_second_variation(m: &Matrix<f64>, d1: &[f64], d2: &[f64]) -> Result<f64> {
    let k = m.rows();
    if d1.len() != k || d2.len() != k {
        return Err(Error::Dimension { expected: k, got: d1.len().min(d2.len()) });
    }
    let a = check_assumptions(m, d1, 1e-9)?;
    if !a.constant_eigenvector {
        return Err(precondition("the constant vector does not span a simple eigenspace"));
    }
    let one = vec![1.0 / (k as f64).sqrt(); k];
    let r = reduced_resolvent(m, a.lambda, &one)?;
    let mean = d1.iter().sum::<f64>() / k as f64;
    let d0: f64 = d1.iter().map(|x| (x - mean).powi(2)).sum();
    let sd = r.s.mul_vec(d1);
    Ok(a.lambda / k as f64 * (d2.iter().sum::<f64>() - d0 - a.lambda * dot(d1, &sd)))
}

/// Outcome of checking the sign of `λ2` for a harmonic perturbation.
#[derive(Clone, Debug, PartialEq)]
pub struct PosthmReport {
    pub lambda2: f64,
    pub nonpositive: bool,
    /// Irreducible, primitive and normal with `f ≠ 0`, so `λ2 < 0` is expected.
    pub strict_expected: bool,
    pub strictly_negative: bool,
    pub assumptions: Assumptions,
}

impl PosthmReport {
    pub fn holds(&self) -> bool {
        self.nonpositive && (!self.strict_expected || self.strictly_negative)
    }
}

/// Checks `λ2 ≤ tol`, and `λ2 < −tol` when `M` is also irreducible, primitive and normal.
pub fn verify_posthm(m: &Matrix<f64>, f: &[f64], tol: f64) -> Result<PosthmReport> {
    let a = check_assumptions(m, f, 1e-9)?;
    require(&a)?;
    let lambda2 = harmonic_unchecked(m, f, a.lambda)?;
    let nonzero = f.iter().any(|x| x.abs() > tol);
    let strict_expected = a.irreducible && a.primitive && a.normal && nonzero;
    Ok(PosthmReport { lambda2, nonpositive: lambda2 <= tol, strict_expected, strictly_negative: lambda2 < -tol, assumptions: a })
}

/// Mean-zero weight functions with `λ2 = 0`: `f = (λ − M)u` for `u ⊥ 1` in the `λ²`-eigenspace of `MᵀM`.
pub fn degenerate_directions(m: &Matrix<f64>, tol: f64) -> Result<Vec<Vec<f64>>> {
    let n = m.rows();
    let zero = vec![0.0; n];
    let a = check_assumptions(m, &zero, 1e-9)?;
    if !a.scaled_doubly_stochastic {
        return Err(precondition("matrix is not a positive multiple of a doubly stochastic matrix"));
    }
    let q = crate::matrix::helmert_basis(n);
    let mq = m.matmul(&q);
    let g = mq.transpose().matmul(&mq);
    let spec = crate::linalg::symmetric_eigen(&g)?;
    let l2 = a.lambda * a.lambda;
    let shift = Matrix::identity(n).scale(&a.lambda).sub(m);
    let mut out = Vec::new();
    for (i, &ev) in spec.values.iter().enumerate() {
        if (ev - l2).abs() <= tol * l2.max(1.0) {
            let u = q.mul_vec(&spec.vector(i));
            out.push(shift.mul_vec(&u));
        }
    }
    Ok(out)
}

/// Finite-difference estimates of the first two Taylor coefficients of the tracked eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdEstimate {
    pub first: Complex64,
    pub second: Complex64,
}

/// Central differences with one Richardson step, following the eigenvalue of `family(x)` nearest `λ`.
/// Fails when the step moves the tracked eigenvalue by more than a tenth of its gap.
pub fn fd_coefficients(family: impl Fn(f64) -> CMatrix, lambda: Complex64, gap: f64, h: f64) -> Result<FdEstimate> {
    let track = |x: f64| -> Result<Complex64> {
        let evs = eigenvalues(&family(x))?;
        let best = evs
            .into_iter()
            .min_by(|a, b| (a - lambda).norm().partial_cmp(&(b - lambda).norm()).unwrap())
            .ok_or_else(|| invalid("empty matrix"))?;
        if (best - lambda).norm() * 10.0 > gap {
            return Err(precondition(format!("step {x} too large for eigenvalue gap {gap}")));
        }
        Ok(best)
    };
    let l0 = track(0.0)?;
    let d = |h: f64| -> Result<(Complex64, Complex64)> {
        let (p, m) = (track(h)?, track(-h)?);
        Ok(((p - m) / (2.0 * h), (p - l0 * 2.0 + m) / (2.0 * h * h)))
    };
    let (f1, s1) = d(h)?;
    let (f2, s2) = d(h / 2.0)?;
    Ok(FdEstimate { first: (f2 * 4.0 - f1) / 3.0, second: (s2 * 4.0 - s1) / 3.0 })
}

/// [`fd_coefficients`] applied to the truncated family of a problem.
pub fn fd_check(prob: &PerturbationProblem, h: f64) -> Result<FdEstimate> {
    fd_coefficients(|x| prob.at(x), prob.lambda, prob.gap, h)
}

/// The exact harmonic family `diag(e^{i f_j x}) M`.
pub fn harmonic_family(m: &Matrix<f64>, f: &[f64]) -> impl Fn(f64) -> CMatrix {
    let cm = complexify(m);
    let f = f.to_vec();
    move |x| {
        let d: Vec<Complex64> = f.iter().map(|&fj| (I * fj * x).exp()).collect();
        cm.scale_rows(&d)
    }
}
