//! Directed line graphs, the gradient and lift operators between vertex and edge functions, and
//! variance of sums along closed walks without backtracking.
//!
//! A vertex `x` of the line digraph is a directed edge of the base graph running from `tail(x)` to
//! `head(x)`; an arc `x → y` exists when `head(x) = tail(y)`, except that for an undirected base
//! `y` may not be the reversal of `x`. Closed walks in the line digraph are exactly the closed
//! tailless walks without backtracking in the base.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, precondition, Error, Result};
use crate::graph::{char_poly, Graph};
use crate::linalg::{distinct_roots, norm_on_mean_zero};
use crate::matrix::{dot, helmert_basis, Matrix};
use crate::scalar::Ring;
use crate::walkstats::walk_variance;

/// Which orientation of a base edge a line-digraph vertex represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `e₋` of an undirected edge `{u, v}` with `u < v`: head `u`, tail `v`.
    Minus,
    /// `e₊` of an undirected edge `{u, v}` with `u < v`: head `v`, tail `u`.
    Plus,
    /// An arc of a directed base.
    Arc,
}

/// A base directed edge, identified by its base edge index and orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DirectedEdge {
    pub edge: usize,
    pub orientation: Orientation,
}

/// The line digraph of a base graph together with the head/tail maps.
#[derive(Clone, Debug, PartialEq)]
pub struct LineDigraph {
    pub base: Graph,
    /// The line digraph itself (always directed).
    pub graph: Graph,
    pub head: Vec<usize>,
    pub tail: Vec<usize>,
    /// Line-digraph vertex `i` is the base directed edge `edges[i]`.
    pub edges: Vec<DirectedEdge>,
    /// Index of the reversed orientation, for undirected bases.
    pub reverse: Vec<Option<usize>>,
}

impl LineDigraph {
    /// Number of line-digraph vertices (directed edges of the base).
    pub fn len(&self) -> usize {
        self.head.len()
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty()
    }

    /// Line-digraph vertex for a base directed edge.
    pub fn index_of(&self, e: DirectedEdge) -> Option<usize> {
        self.edges.iter().position(|&x| x == e)
    }

    /// Common in/out degree of the line digraph, when regular.
    pub fn degree(&self) -> Option<u64> {
        self.graph.regular_degree()
    }

    fn vertices(&self) -> usize {
        self.base.n()
    }
}

/// Builds the line digraph. Vertices are ordered by base edge index and then orientation
/// (`Minus` before `Plus`); base edges are ordered lexicographically by endpoints.
pub fn line_digraph(g: &Graph) -> Result<LineDigraph> {
    let n = g.n();
    let adj = g.adjacency();
    let mut head = Vec::new();
    let mut tail = Vec::new();
    let mut edges = Vec::new();
    let mut reverse = Vec::new();
    if g.is_directed() {
        let mut e = 0;
        for u in 0..n {
            for v in 0..n {
                for _ in 0..adj[(u, v)] {
                    tail.push(u);
                    head.push(v);
                    edges.push(DirectedEdge { edge: e, orientation: Orientation::Arc });
                    reverse.push(None);
                    e += 1;
                }
            }
        }
    } else {
        if g.has_loops() {
            return Err(invalid("line digraph of an undirected graph with loops is not defined"));
        }
        let mut e = 0;
        for u in 0..n {
            for v in u + 1..n {
                for _ in 0..adj[(u, v)] {
                    let i = head.len();
                    head.extend([u, v]);
                    tail.extend([v, u]);
                    edges.push(DirectedEdge { edge: e, orientation: Orientation::Minus });
                    edges.push(DirectedEdge { edge: e, orientation: Orientation::Plus });
                    reverse.extend([Some(i + 1), Some(i)]);
                    e += 1;
                }
            }
        }
    }
    let k = head.len();
    let mut ladj = Matrix::filled(k, k, 0u64);
    for x in 0..k {
        for y in 0..k {
            if head[x] == tail[y] && reverse[x] != Some(y) {
                ladj[(x, y)] = 1;
            }
        }
    }
    let graph = Graph::from_adjacency(ladj, true)?;
    Ok(LineDigraph { base: g.clone(), graph, head, tail, edges, reverse })
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension { expected, got });
    }
    Ok(())
}

/// Gradient `∇f(x) = f(head(x)) − f(tail(x))`.
pub fn grad<T: Ring>(ld: &LineDigraph, f: &[T]) -> Result<Vec<T>> {
    check_len(ld.vertices(), f.len())?;
    Ok((0..ld.len()).map(|x| f[ld.head[x]].clone() - f[ld.tail[x]].clone()).collect())
}

/// Lift `𝓛f(x) = f(tail(x))`.
pub fn lift<T: Ring>(ld: &LineDigraph, f: &[T]) -> Result<Vec<T>> {
    check_len(ld.vertices(), f.len())?;
    Ok((0..ld.len()).map(|x| f[ld.tail[x]].clone()).collect())
}

/// `∇ᵗg`: at each base vertex, the sum of `g` over incoming edges minus the sum over outgoing edges.
pub fn grad_adjoint<T: Ring>(ld: &LineDigraph, g: &[T]) -> Result<Vec<T>> {
    check_len(ld.len(), g.len())?;
    let mut out = vec![T::zero(); ld.vertices()];
    for (x, gx) in g.iter().enumerate() {
        out[ld.head[x]] += gx;
        out[ld.tail[x]] -= gx;
    }
    Ok(out)
}

/// Matrix of `∇` (line-digraph vertices × base vertices).
pub fn grad_matrix(ld: &LineDigraph) -> Matrix<BigInt> {
    let mut m = Matrix::zeros(ld.len(), ld.vertices());
    for x in 0..ld.len() {
        m[(x, ld.head[x])] += &BigInt::one();
        m[(x, ld.tail[x])] -= &BigInt::one();
    }
    m
}

/// Matrix of `𝓛` (line-digraph vertices × base vertices).
pub fn lift_matrix(ld: &LineDigraph) -> Matrix<BigInt> {
    let mut m = Matrix::zeros(ld.len(), ld.vertices());
    for x in 0..ld.len() {
        m[(x, ld.tail[x])] = BigInt::one();
    }
    m
}

/// Laplacian `dI − A` of a `d`-regular line digraph.
pub fn line_laplacian(ld: &LineDigraph) -> Result<Matrix<BigInt>> {
    let d = ld.degree().ok_or_else(|| precondition("line digraph is not regular"))?;
    let a = ld.graph.adjacency_int();
    Ok(Matrix::identity(ld.len()).scale(&BigInt::from(d)).sub(&a))
}

/// Degree of a regular base with at least one edge.
fn base_degree(g: &Graph) -> Result<u64> {
    match g.regular_degree() {
        Some(r) if r > 0 => Ok(r),
        Some(_) => Err(precondition("base graph has no edges")),
        None => Err(precondition("base graph is not regular")),
    }
}

fn to_rational(m: &Matrix<BigInt>) -> Matrix<BigRational> {
    m.map(|x| BigRational::from_integer(x.clone()))
}

fn hstack(a: &Matrix<BigRational>, b: &Matrix<BigRational>) -> Matrix<BigRational> {
    Matrix::from_fn(a.rows(), a.cols() + b.cols(), |i, j| {
        if j < a.cols() {
            a[(i, j)].clone()
        } else {
            b[(i, j - a.cols())].clone()
        }
    })
}

fn exact_rank(m: &Matrix<BigRational>) -> usize {
    m.rank(0.0)
}

/// Dimension of the intersection of two column spaces.
fn intersection_dim(a: &Matrix<BigRational>, b: &Matrix<BigRational>) -> usize {
    exact_rank(a) + exact_rank(b) - exact_rank(&hstack(a, b))
}

/// Exact structure of `AᵗA` for the line digraph of a regular base.
#[derive(Clone, Debug, PartialEq)]
pub struct AtaStructure {
    pub ata: Matrix<BigInt>,
    /// Base degree `r`.
    pub base_degree: u64,
    /// Line-digraph degree: `r − 1` for an undirected base, `r` for a directed one.
    pub degree: u64,
    /// `AᵗA` equals the predicted block form: `I + (r−2)J` blocks (undirected) or `rJ` blocks
    /// (directed), one block per base vertex grouping edges with that tail.
    pub block_form: bool,
    /// The top eigenvalue `degree²` and its exact multiplicity.
    pub top: (u64, usize),
    /// The remaining eigenvalue (`1` undirected, `0` directed) and its exact multiplicity.
    pub rest: (u64, usize),
    /// Every lift `𝓛f` is an eigenvector for `degree²`.
    pub lift_in_top_eigenspace: bool,
    /// Operator norm of `A` on mean-zero vectors.
    pub op_norm_a0: f64,
}

/// Computes `AᵗA` exactly and checks its block structure and spectrum.
pub fn ata_structure(ld: &LineDigraph) -> Result<AtaStructure> {
    let r = base_degree(&ld.base)?;
    let directed = ld.base.is_directed();
    let degree = if directed { r } else { r - 1 };
    let a = ld.graph.adjacency_int();
    let ata = a.transpose().matmul(&a);
    let k = ld.len();
    let predicted = Matrix::from_fn(k, k, |i, j| {
        let same = ld.tail[i] == ld.tail[j];
        let v = match (directed, same, i == j) {
            (true, true, _) => r as i64,
            (true, false, _) => 0,
            (false, _, true) => r as i64 - 1,
            (false, true, false) => r as i64 - 2,
            (false, false, false) => 0,
        };
        BigInt::from(v)
    });
    let block_form = predicted == ata;
    let rest_value = if directed { 0 } else { 1 };
    let top_value = degree * degree;
    let rat = to_rational(&ata);
    let multiplicity = |v: u64| {
        let shifted = rat.sub(&Matrix::identity(k).scale(&BigRational::from_integer(BigInt::from(v))));
        k - exact_rank(&shifted)
    };
    let top_mult = multiplicity(top_value);
    let rest_mult = multiplicity(rest_value);
    let lm = lift_matrix(ld);
    let lift_in_top_eigenspace = ata.matmul(&lm) == lm.scale(&BigInt::from(top_value));
    let op_norm_a0 = norm_on_mean_zero(&ld.graph.adjacency_f64())?;
    Ok(AtaStructure {
        ata,
        base_degree: r,
        degree,
        block_form,
        top: (top_value, top_mult),
        rest: (rest_value, rest_mult),
        lift_in_top_eigenspace,
        op_norm_a0,
    })
}

/// The three subspace statements relating lifts, gradients and the top eigenspace of `AᵗA`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImdelReport {
    /// The `degree²` eigenspace of `AᵗA` equals the image of `𝓛`.
    pub eigenspace_is_lift_image: bool,
    /// `Δ_L` maps the image of `𝓛` onto the image of `∇`.
    pub laplacian_maps_onto_gradients: bool,
    /// `dim(∇(V*) ∩ E ∩ 1⊥)` with `E` the `degree²` eigenspace; gradients already sum to zero.
    pub intersection_dim: usize,
    pub bipartite: bool,
}

impl ImdelReport {
    /// All three statements hold (the intersection may be nonzero only for bipartite bases).
    pub fn holds(&self) -> bool {
        self.eigenspace_is_lift_image && self.laplacian_maps_onto_gradients && (self.intersection_dim == 0 || self.bipartite)
    }
}

/// Checks the lift/gradient/eigenspace relations exactly over the rationals.
pub fn imdel(ld: &LineDigraph) -> Result<ImdelReport> {
    let s = ata_structure(ld)?;
    let n = ld.vertices();
    let lm = lift_matrix(ld);
    let lift_rank = exact_rank(&to_rational(&lm));
    let eigenspace_is_lift_image = s.lift_in_top_eigenspace && s.top.1 == lift_rank;
    let lap = line_laplacian(ld)?;
    let image = to_rational(&lap.matmul(&lm));
    let gm = to_rational(&grad_matrix(ld));
    let ri = exact_rank(&image);
    let laplacian_maps_onto_gradients = ri == exact_rank(&gm) && ri == exact_rank(&hstack(&image, &gm));
    let top = BigRational::from_integer(BigInt::from(s.top.0));
    let shifted = to_rational(&s.ata).sub(&Matrix::identity(ld.len()).scale(&top));
    let basis = shifted.null_space(0.0);
    let eigenspace = Matrix::from_fn(ld.len(), basis.len(), |i, j| basis[j][i].clone());
    let intersection_dim = if n > 1 && !basis.is_empty() { intersection_dim(&gm, &eigenspace) } else { 0 };
    let bipartite = !ld.base.is_directed() && ld.base.connectivity().bipartite;
    Ok(ImdelReport { eigenspace_is_lift_image, laplacian_maps_onto_gradients, intersection_dim, bipartite })
}

/// Eigenvalues of the line-digraph adjacency on the circle of radius `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeripheralSpectrum {
    pub degree: u64,
    pub peripheral: Vec<Complex64>,
    /// `degree` is a simple root of the exact characteristic polynomial.
    pub simple_perron_root: bool,
}

impl PeripheralSpectrum {
    /// The only peripheral eigenvalue is `degree` itself, with multiplicity one.
    pub fn is_primitive(&self) -> bool {
        self.simple_perron_root
            && self.peripheral.len() == 1
            && (self.peripheral[0] - Complex64::new(self.degree as f64, 0.0)).norm() < 1e-6
    }
}

/// Finds the distinct eigenvalues of modulus `degree` from the exact characteristic polynomial and checks that `degree` is a simple root of the
/// exact characteristic polynomial.
pub fn peripheral_spectrum(ld: &LineDigraph, tol: f64) -> Result<PeripheralSpectrum> {
    let d = ld.degree().ok_or_else(|| precondition("line digraph is not regular"))?;
    let p = char_poly(&ld.graph.adjacency_int());
    let x = BigRational::from_integer(BigInt::from(d));
    let simple_perron_root = p.eval(&x).is_zero() && !p.derivative().eval(&x).is_zero();
    let peripheral = distinct_roots(&p)?
        .into_iter()
        .filter(|z| (z.norm() - d as f64).abs() <= tol * (1.0 + d as f64))
        .collect();
    Ok(PeripheralSpectrum { degree: d, peripheral, simple_perron_root })
}

/// Orthogonal decomposition of an edge function into a gradient and a circulation.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeDecomposition {
    /// The gradient part `∇φ`.
    pub gradient: Vec<f64>,
    /// The remainder, with `∇ᵗ(circulation) = 0`.
    pub circulation: Vec<f64>,
    /// Mean-zero potential `φ` with `∇φ` equal to the gradient part.
    pub potential: Vec<f64>,
}

/// Least-squares potential `φ` minimising `‖∇φ − g‖`, normalised to mean zero.
fn least_squares_potential(ld: &LineDigraph, g: &[f64]) -> Result<Vec<f64>> {
    check_len(ld.len(), g.len())?;
    let n = ld.vertices();
    if n <= 1 || !ld.base.connectivity().connected {
        return Err(precondition("base graph must be connected with at least two vertices"));
    }
    let d = grad_matrix(ld).map(|x| if x.is_zero() { 0.0 } else if *x > BigInt::zero() { 1.0 } else { -1.0 });
    let q = helmert_basis(n);
    let dq = d.matmul(&q);
    let normal = dq.transpose().matmul(&dq);
    let rhs = dq.transpose().mul_vec(g);
    let y = normal.solve(&rhs).map_err(|_| Error::Singular)?;
    Ok(q.mul_vec(&y))
}

/// Splits `g` into its projection onto gradients and the orthogonal circulation part.
pub fn decompose_edgefn(ld: &LineDigraph, g: &[f64]) -> Result<EdgeDecomposition> {
    let potential = least_squares_potential(ld, g)?;
    let gradient = grad(ld, &potential)?;
    let circulation = g.iter().zip(&gradient).map(|(a, b)| a - b).collect();
    Ok(EdgeDecomposition { gradient, circulation, potential })
}

/// Projection of a lift `𝓛f` onto gradients compared with `∇Δf`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftProjection {
    pub projection: Vec<f64>,
    /// `∇(Δf)` with `Δ = rI − A` the base Laplacian.
    pub grad_laplacian: Vec<f64>,
    pub agrees: bool,
}

/// Computes the orthogonal projection of `𝓛f` onto gradients and reports whether it equals `∇Δf`.
pub fn lift_projection(ld: &LineDigraph, f: &[f64], tol: f64) -> Result<LiftProjection> {
    let r = base_degree(&ld.base)? as f64;
    let lf = lift(ld, f)?;
    let projection = decompose_edgefn(ld, &lf)?.gradient;
    let a = ld.base.adjacency_f64();
    let lap = Matrix::identity(f.len()).scale(&r).sub(&a);
    let grad_laplacian = grad(ld, &lap.mul_vec(f))?;
    let agrees = projection.iter().zip(&grad_laplacian).all(|(x, y)| (x - y).abs() <= tol);
    Ok(LiftProjection { projection, grad_laplacian, agrees })
}

/// Potential `φ` and constant `c` with `𝓛f = ∇φ + c`, when they exist.
pub fn cocycle_potential(ld: &LineDigraph, f: &[f64], tol: f64) -> Result<Option<(Vec<f64>, f64)>> {
    let lf = lift(ld, f)?;
    let c = lf.iter().sum::<f64>() / lf.len().max(1) as f64;
    let centred: Vec<f64> = lf.iter().map(|x| x - c).collect();
    let dec = decompose_edgefn(ld, &centred)?;
    let scale = 1.0 + centred.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let exact = dec.circulation.iter().all(|x| x.abs() <= tol * scale);
    Ok(exact.then_some((dec.potential, c)))
}

/// Variance per step of an edge-function sum along long closed walks in the line digraph.
#[derive(Clone, Debug, PartialEq)]
pub struct LineVariance {
    /// `(1/K)[−‖f₀‖² + 2d f₀ᵗΔ₀⁻¹f₀]` with `K` line-digraph vertices of degree `d`.
    pub sigma2: f64,
    /// `(1/K) uᵗ(d²I − AᵗA)u` with `u = Δ₀⁻¹f₀`.
    pub via_ata: f64,
    /// `(d/(2rk)) f₀ᵗ(I − 2dΔ₀⁻¹)f₀` with `k` base vertices and base degree `r`.
    pub printed: f64,
    pub mean: f64,
}

/// Solves `Δ₀u = f₀` on mean-zero vectors and returns `(u, f₀ᵗΔ₀⁻¹f₀)`.
fn mean_zero_solve(lap: &Matrix<f64>, f0: &[f64]) -> Result<(Vec<f64>, f64)> {
    let q = helmert_basis(f0.len());
    let l0 = q.transpose().matmul(lap).matmul(&q);
    let y = q.transpose().mul_vec(f0);
    let x = l0.solve(&y).map_err(|_| Error::Singular)?;
    Ok((q.mul_vec(&x), dot(&y, &x)))
}

fn line_variance(ld: &LineDigraph, f: &[f64]) -> Result<LineVariance> {
    check_len(ld.len(), f.len())?;
    let r = base_degree(&ld.base)? as f64;
    let wv = walk_variance(&ld.graph, f)?;
    let d = ld.degree().ok_or_else(|| precondition("line digraph is not regular"))? as f64;
    let k = ld.len() as f64;
    let f0: Vec<f64> = f.iter().map(|x| x - wv.mean).collect();
    let a = ld.graph.adjacency_f64();
    let lap = Matrix::identity(ld.len()).scale(&d).sub(&a);
    let (u, quad) = mean_zero_solve(&lap, &f0)?;
    let au = a.mul_vec(&u);
    let via_ata = (d * d * dot(&u, &u) - dot(&au, &au)) / k;
    let printed = d / (2.0 * r * ld.vertices() as f64) * (dot(&f0, &f0) - 2.0 * d * quad);
    Ok(LineVariance { sigma2: wv.sigma2, via_ata, printed, mean: wv.mean })
}

/// Variance of an edge function along closed walks without backtracking in a regular,
/// connected, non-bipartite undirected graph.
pub fn backtrackless_variance(g: &Graph, f: &[f64]) -> Result<LineVariance> {
    check_undirected_base(g)?;
    line_variance(&line_digraph(g)?, f)
}

fn check_undirected_base(g: &Graph) -> Result<()> {
    if g.is_directed() {
        return Err(invalid("backtrackless variance needs an undirected base"));
    }
    let c = g.connectivity();
    if !c.connected {
        return Err(precondition("base graph is not connected"));
    }
    if c.bipartite {
        return Err(precondition("base graph is bipartite"));
    }
    Ok(())
}

/// Variance of a vertex function along closed walks without backtracking, via `𝓛ᵗ(−I + 2dΔ₀⁻¹)𝓛`.
pub fn backtrackless_vertex_variance(g: &Graph, f: &[f64]) -> Result<f64> {
    check_undirected_base(g)?;
    check_len(g.n(), f.len())?;
    let ld = line_digraph(g)?;
    if !ld.graph.is_primitive() {
        return Err(precondition("line digraph is not primitive"));
    }
    let d = ld.degree().ok_or_else(|| precondition("line digraph is not regular"))? as f64;
    let k = ld.len();
    let lap = Matrix::identity(k).scale(&d).sub(&ld.graph.adjacency_f64());
    let q = helmert_basis(k);
    let inv = q.matmul(&q.transpose().matmul(&lap).matmul(&q).inverse().map_err(|_| Error::Singular)?).matmul(&q.transpose());
    let centre = Matrix::identity(k).sub(&Matrix::filled(k, k, 1.0 / k as f64));
    let kernel = centre.matmul(&inv.scale(&(2.0 * d)).sub(&Matrix::identity(k))).matmul(&centre);
    let lm = lift_matrix(&ld).map(|x| if x.is_zero() { 0.0 } else { 1.0 });
    let form = lm.transpose().matmul(&kernel).matmul(&lm);
    Ok(dot(f, &form.mul_vec(f)) / k as f64)
}

/// Variance of an edge function along closed walks in a regular primitive digraph.
pub fn directed_variance(g: &Graph, f: &[f64]) -> Result<LineVariance> {
    if !g.is_directed() {
        return Err(invalid("directed variance needs a directed base"));
    }
    base_degree(g)?;
    if !g.is_primitive() {
        return Err(precondition("base digraph is not primitive"));
    }
    line_variance(&line_digraph(g)?, f)
}
