//! Floating-point spectra: Jacobi for symmetric matrices, complex Schur for the rest.

use nalgebra::{DMatrix, Schur};
use num_complex::{Complex, Complex64};

use num_rational::BigRational;

use crate::error::{invalid, Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::{ratio_to_f64, RealFloat};

/// Eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct Spectrum<F> {
    /// Eigenvalues in descending order.
    pub values: Vec<F>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: Matrix<F>,
    /// Tolerance used to group eigenvalues and bound residuals.
    pub tol: F,
}

impl<F: RealFloat> Spectrum<F> {
    /// Distinct eigenvalues (descending) with multiplicities, grouping values closer than `tol`.
    pub fn multiplicities(&self) -> Vec<(F, usize)> {
        let mut out: Vec<(F, usize)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((rep, m)) if (*rep - v).abs() <= self.tol => *m += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub fn vector(&self, i: usize) -> Vec<F> {
        self.vectors.column(i)
    }
}

/// Default spectral tolerance `max(1e-10, 64ε)·‖A‖_∞·n`.
pub fn default_tol<F: RealFloat>(a: &Matrix<F>) -> F {
    let n = a.rows();
    let norm = (0..n)
        .map(|i| a.row(i).iter().fold(F::zero(), |s, x| s + x.abs()))
        .fold(F::zero(), F::max);
    let base = F::lit(1e-10).max(F::epsilon() * F::lit(64.0));
    base * norm.max(F::one()) * F::from_usize(n.max(1)).unwrap()
}

/// Full eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigen<F: RealFloat>(a: &Matrix<F>) -> Result<Spectrum<F>> {
    symmetric_eigen_tol(a, default_tol(a))
}

pub fn symmetric_eigen_tol<F: RealFloat>(a: &Matrix<F>, tol: F) -> Result<Spectrum<F>> {
    if !a.is_square() {
        return Err(Error::Dimension { expected: a.rows(), got: a.cols() });
    }
    let n = a.rows();
    let mut asym = F::zero();
    for i in 0..n {
        for j in 0..i {
            asym = asym.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if asym > tol {
        return Err(Error::NotSymmetric(asym.to_f64().unwrap_or(f64::NAN)));
    }
    let mut m = a.clone();
    let mut v = Matrix::<F>::identity(n);
    let two = F::lit(2.0);
    let max_sweeps = 100;
    let mut converged = n < 2;
    for _ in 0..max_sweeps {
        let mut off = F::zero();
        let mut diag = F::zero();
        for i in 0..n {
            diag = diag + m[(i, i)] * m[(i, i)];
            for j in 0..i {
                off = off + m[(i, j)] * m[(i, j)];
            }
        }
        let nf = F::from_usize(n).unwrap();
        let eps = F::epsilon() * nf;
        if off <= eps * eps * diag.max(F::min_positive_value()) || off == F::zero() {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == F::zero() {
                    continue;
                }
                let small = F::lit(100.0) * apq.abs();
                if m[(p, p)].abs() + small == m[(p, p)].abs() && m[(q, q)].abs() + small == m[(q, q)].abs() {
                    m[(p, q)] = F::zero();
                    m[(q, p)] = F::zero();
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + F::one()).sqrt());
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence { iterations: max_sweeps, residual: f64::NAN });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Spectrum { values, vectors, tol })
}

/// Conversion into a complex matrix for the nonsymmetric solver.
pub trait ToComplex {
    fn to_complex(&self) -> Matrix<Complex64>;
}

impl ToComplex for Matrix<f64> {
    fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|&x| Complex64::new(x, 0.0))
    }
}

impl ToComplex for Matrix<f32> {
    fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|&x| Complex64::new(x as f64, 0.0))
    }
}

impl ToComplex for Matrix<Complex64> {
    fn to_complex(&self) -> Matrix<Complex64> {
        self.clone()
    }
}

impl ToComplex for Matrix<Complex<f32>> {
    fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|z| Complex64::new(z.re as f64, z.im as f64))
    }
}

const SCHUR_MAX_ITER: usize = 20_000;
/// Deflation thresholds tried in turn; the looser ones only matter for highly non-normal input.
const SCHUR_EPS: [f64; 3] = [f64::EPSILON, 1e-14, 1e-12];

/// All eigenvalues of a square matrix via the complex Schur form, sorted by descending real part.
pub fn eigenvalues<M: ToComplex>(a: &M) -> Result<Vec<Complex64>> {
    let c = a.to_complex();
    if !c.is_square() {
        return Err(Error::Dimension { expected: c.rows(), got: c.cols() });
    }
    let n = c.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dm = DMatrix::from_row_slice(n, n, c.as_slice());
    let schur = SCHUR_EPS
        .iter()
        .find_map(|&eps| Schur::try_new(dm.clone(), eps, SCHUR_MAX_ITER))
        .ok_or(Error::NonConvergence { iterations: SCHUR_MAX_ITER, residual: f64::NAN })?;
    let (_, t) = schur.unpack();
    let mut vals: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    vals.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal).then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal)));
    Ok(vals)
}

/// Distinct complex roots of a nonzero rational polynomial, from the companion matrix of its
/// squarefree part.
pub fn distinct_roots(p: &Poly<BigRational>) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(invalid("the zero polynomial has no finite root set"));
    }
    let s = p.squarefree_part();
    let d = s.degree().unwrap_or(0);
    let c: Vec<f64> = s.coeffs().iter().map(ratio_to_f64).collect();
    let companion = Matrix::from_fn(d, d, |i, j| if j == d - 1 { -c[i] } else if i == j + 1 { 1.0 } else { 0.0 });
    eigenvalues(&companion)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius<M: ToComplex>(a: &M) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Operator 2-norm of `A` restricted to the orthogonal complement of the constant vector.
pub fn norm_on_mean_zero(a: &Matrix<f64>) -> Result<f64> {
    let q = crate::matrix::helmert_basis(a.rows());
    let aq = a.matmul(&q);
    let g = aq.transpose().matmul(&aq);
    let s = symmetric_eigen(&g)?;
    Ok(s.values.first().copied().unwrap_or(0.0).max(0.0).sqrt())
}
