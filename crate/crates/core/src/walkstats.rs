//! Statistics of vertex-function sums along long closed walks: limiting variance, residues mod `p`
//! and distribution in finite groups.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{invalid, precondition, Error, Result};
use crate::graph::Graph;
use crate::linalg::{norm_on_mean_zero, spectral_radius};
use crate::matrix::{dot, helmert_basis, Matrix};
use crate::scalar::bigint_to_f64;
use crate::walks::{closed_walk_distribution, closed_walk_residues, moments_f64, path_distribution};

/// Limiting mean and variance per step of `Σ f` over closed walks.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkVariance {
    pub sigma2: f64,
    /// Mean drift `μ(f) = (1/k) Σ f`.
    pub mean: f64,
    /// Operator norm of `A` on mean-zero vectors; equal to the degree exactly when some mean-zero
    /// direction has zero variance.
    pub op_norm_a0: f64,
    /// True when `σ² = 0` for a nonconstant `f`.
    pub degenerate: bool,
}

fn regular_degree(g: &Graph) -> Result<u64> {
    let r = g
        .regular_degree()
        .ok_or_else(|| precondition("graph is not regular (in- and out-degrees must all agree)"))?;
    if r == 0 {
        return Err(precondition("graph has no edges"));
    }
    Ok(r)
}

/// Checks the structural hypotheses of the walk CLT: regular, connected and non-bipartite when
/// undirected; regular, strongly connected and aperiodic when directed.
pub fn check_walk_graph(g: &Graph) -> Result<u64> {
    let r = regular_degree(g)?;
    let c = g.connectivity();
    if g.is_directed() {
        if !g.is_primitive() {
            return Err(precondition("directed graph is not strongly connected and aperiodic"));
        }
    } else {
        if !c.connected {
            return Err(precondition("graph is not connected"));
        }
        if c.bipartite {
            return Err(precondition("graph is bipartite"));
        }
    }
    Ok(r)
}

fn centred(f: &[f64]) -> (f64, Vec<f64>) {
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    (mean, f.iter().map(|x| x - mean).collect())
}

/// `(1/k)[−‖f₀‖² + 2c · f₀ᵀ B₀⁻¹ f₀]` with `B₀` restricted to mean-zero vectors through an orthonormal basis.
fn quadratic_variance(b: &Matrix<f64>, f0: &[f64], c: f64) -> Result<f64> {
    let k = f0.len();
    let q = helmert_basis(k);
    let b0 = q.transpose().matmul(b).matmul(&q);
    let y = q.transpose().mul_vec(f0);
    let x = b0.solve(&y).map_err(|_| Error::Singular)?;
    Ok((-dot(f0, f0) + 2.0 * c * dot(&y, &x)) / k as f64)
}

/// `σ²(f) = (1/k)[−‖f₀‖² + 2r f₀ᵀΔ₀⁻¹f₀]` with `Δ = rI − A`.
pub fn walk_variance(g: &Graph, f: &[f64]) -> Result<WalkVariance> {
    let r = check_walk_graph(g)? as f64;
    let k = g.n();
    if f.len() != k {
        return Err(Error::Dimension { expected: k, got: f.len() });
    }
    let a = g.adjacency_f64();
    let lap = Matrix::identity(k).scale(&r).sub(&a);
    let (mean, f0) = centred(f);
    let sigma2 = quadratic_variance(&lap, &f0, r)?;
    let op_norm_a0 = norm_on_mean_zero(&a)?;
    let scale = dot(&f0, &f0).max(f64::MIN_POSITIVE) / k as f64;
    let nonconstant = f0.iter().any(|x| x.abs() > 1e-12);
    Ok(WalkVariance { sigma2, mean, op_norm_a0, degenerate: nonconstant && sigma2.abs() <= 1e-10 * scale })
}

/// Finite Markov chain given by a row-stochastic matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChain {
    pub p: Matrix<f64>,
    pub doubly_stochastic: bool,
}

impl MarkovChain {
    pub fn new(p: Matrix<f64>) -> Result<Self> {
        let n = p.rows();
        if !p.is_square() || n == 0 {
            return Err(invalid("transition matrix must be square and nonempty"));
        }
        let tol = 1e-12 * n as f64;
        if p.as_slice().iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(invalid("transition matrix has negative or non-finite entries"));
        }
        for i in 0..n {
            let s: f64 = p.row(i).iter().sum();
            if (s - 1.0).abs() > tol {
                return Err(invalid(format!("row {i} sums to {s}, not 1")));
            }
        }
        let doubly_stochastic = (0..n).all(|j| (p.column(j).iter().sum::<f64>() - 1.0).abs() <= tol);
        Ok(Self { p, doubly_stochastic })
    }

    /// Simple random walk `A/r` on a regular graph.
    pub fn from_regular_graph(g: &Graph) -> Result<Self> {
        let r = regular_degree(g)? as f64;
        Self::new(g.adjacency_f64().scale(&(1.0 / r)))
    }

    fn support(&self) -> Graph {
        Graph::from_adjacency(self.p.map(|&x| u64::from(x > 0.0)), true).expect("square pattern")
    }
}

/// `σ²(f) = (1/k)[−‖f₀‖² + 2 f₀ᵀ(I₀ − P₀)⁻¹f₀]` for an irreducible, aperiodic, doubly stochastic chain.
pub fn markov_variance(chain: &MarkovChain, f: &[f64]) -> Result<f64> {
    let k = chain.p.rows();
    if f.len() != k {
        return Err(Error::Dimension { expected: k, got: f.len() });
    }
    if !chain.doubly_stochastic {
        return Err(precondition("chain is not doubly stochastic"));
    }
    if !chain.support().is_primitive() {
        return Err(precondition("chain is not irreducible and aperiodic"));
    }
    let b = Matrix::identity(k).sub(&chain.p);
    let (_, f0) = centred(f);
    quadratic_variance(&b, &f0, 1.0)
}

/// Limiting variance per step over walks from `i` to `j`. The endpoints only affect `O(1)` terms,
/// so this equals the closed-walk value.
pub fn path_variance(g: &Graph, f: &[f64], i: usize, j: usize) -> Result<f64> {
    if i >= g.n() || j >= g.n() {
        return Err(invalid("endpoint out of range"));
    }
    Ok(walk_variance(g, f)?.sigma2)
}

/// Exact mean and variance of `Σ f` over closed walks of length `n` (counting measure).
pub fn exact_cycle_moments(g: &Graph, f: &[i64], n: usize) -> Result<(f64, f64)> {
    let d = closed_walk_distribution(&g.adjacency_int(), f, n)?;
    moments_f64(&d).ok_or_else(|| precondition("no closed walks of this length"))
}

/// Exact mean and variance of `Σ f` over walks of length `n` from `i` to `j`.
pub fn exact_path_moments(g: &Graph, f: &[i64], n: usize, i: usize, j: usize) -> Result<(f64, f64)> {
    let d = path_distribution(&g.adjacency_int(), f, n, i, j)?;
    moments_f64(&d).ok_or_else(|| precondition("no walks of this length between the endpoints"))
}

/// Exact mean and variance of `Σ f` under a Markov chain started from the uniform distribution and
/// conditioned to return to its starting state after `n` steps.
pub fn exact_markov_moments(chain: &MarkovChain, f: &[i64], n: usize) -> Result<(f64, f64)> {
    let d = closed_walk_distribution(&chain.p, f, n)?;
    let total = d.total();
    if total <= 0.0 {
        return Err(precondition("no closed orbits of this length"));
    }
    let mean = d.support().iter().map(|(v, w)| *v as f64 * w).sum::<f64>() / total;
    let var = d.support().iter().map(|(v, w)| (*v as f64 - mean).powi(2) * w).sum::<f64>() / total;
    Ok((mean, var))
}

/// Closed-walk counts by `Σ f mod p` and the decay rate of the nonuniform part.
#[derive(Clone, Debug, PartialEq)]
pub struct ModPWalk {
    pub counts: Vec<BigInt>,
    /// `max_{χ ≠ 1} ρ(U(χ)A) / ρ(A)` with `U(χ) = diag(χ^{f_i})`.
    pub gap: f64,
}

impl ModPWalk {
    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }
}

/// Exact residue counts of `Σ f` over closed walks of length `n`, on the `k·p`-state chain.
pub fn modp_walk_distribution(g: &Graph, f: &[i64], p: u64, n: usize) -> Result<ModPWalk> {
    if !crate::arith::is_prime(p) {
        return Err(invalid(format!("modulus {p} is not prime")));
    }
    if !g.is_primitive() {
        return Err(precondition("adjacency matrix is not irreducible and aperiodic"));
    }
    let counts = closed_walk_residues(&g.adjacency_int(), f, p, n)?;
    Ok(ModPWalk { counts, gap: character_gap(g, f, p)? })
}

/// `max_{χ ≠ 1} ρ(U(χ)A) / ρ(A)` over the nontrivial characters of `Z/p`.
pub fn character_gap(g: &Graph, f: &[i64], p: u64) -> Result<f64> {
    let a = g.adjacency_f64();
    let rho = spectral_radius(&a)?;
    let ca = a.map(|&x| Complex64::new(x, 0.0));
    let mut worst: f64 = 0.0;
    for j in 1..p {
        let d: Vec<Complex64> = f
            .iter()
            .map(|&fi| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j as i64 * fi).rem_euclid(p as i64) as f64 / p as f64))
            .collect();
        worst = worst.max(spectral_radius(&ca.scale_rows(&d))? / rho);
    }
    Ok(worst)
}

/// Finite group as a multiplication table with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity `0`, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let g = table.len();
        if g == 0 {
            return Err(invalid("group must be nonempty"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != g {
                return Err(invalid(format!("row {i} has {} entries, expected {g}", row.len())));
            }
            if row.iter().any(|&x| x >= g) {
                return Err(invalid(format!("row {i} has an entry out of range")));
            }
        }
        for a in 0..g {
            if table[0][a] != a || table[a][0] != a {
                return Err(invalid("element 0 is not the identity"));
            }
        }
        let mut inverse = vec![usize::MAX; g];
        for a in 0..g {
            let b = (0..g).find(|&b| table[a][b] == 0).ok_or_else(|| invalid(format!("element {a} has no inverse")))?;
            if table[b][a] != 0 {
                return Err(invalid(format!("element {a} has no two-sided inverse")));
            }
            inverse[a] = b;
        }
        for a in 0..g {
            for b in 0..g {
                let ab = table[a][b];
                for c in 0..g {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(invalid(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(Self { table, inverse })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    /// Symmetric group on three letters, elements listed as permutations in lexicographic order.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        Self::new(table).expect("valid group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Subgroup generated by `gens`, as a membership mask.
    pub fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &s in gens {
                for y in [self.mul(x, s), self.mul(s, x)] {
                    if !inside[y] {
                        inside[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        inside
    }

    fn commutators(&self) -> Vec<usize> {
        let g = self.order();
        let mut out = Vec::new();
        for a in 0..g {
            for b in 0..g {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }
}

/// Finite group with a label on every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLabeling {
    pub group: FiniteGroup,
    pub labels: Vec<usize>,
}

impl GroupLabeling {
    pub fn new(group: FiniteGroup, labels: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= group.order()) {
            return Err(invalid(format!("label {bad} is not a group element")));
        }
        Ok(Self { group, labels })
    }

    /// Parses `group <order>`, `mul <i> <j> <k>` rows for the full table and `vlabel <v> <g>` lines.
    /// Unlabelled vertices carry the identity.
    pub fn parse(text: &str, vertices: usize) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut order = None;
        let mut table: Vec<Vec<Option<usize>>> = Vec::new();
        let mut labels = vec![0usize; vertices];
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| t.parse::<usize>().map_err(|_| err(ln, &format!("bad integer `{t}`")));
            match toks.as_slice() {
                ["group", n] => {
                    if order.is_some() {
                        return Err(err(ln, "duplicate `group` line"));
                    }
                    let n = num(n)?;
                    order = Some(n);
                    table = vec![vec![None; n]; n];
                }
                ["mul", a, b, c] => {
                    let n = order.ok_or_else(|| err(ln, "`mul` before `group`"))?;
                    let (a, b, c) = (num(a)?, num(b)?, num(c)?);
                    if a >= n || b >= n || c >= n {
                        return Err(err(ln, "group element out of range"));
                    }
                    if table[a][b].replace(c).is_some_and(|old| old != c) {
                        return Err(err(ln, "conflicting products"));
                    }
                }
                ["vlabel", v, g] => {
                    let n = order.ok_or_else(|| err(ln, "`vlabel` before `group`"))?;
                    let (v, g) = (num(v)?, num(g)?);
                    if v >= vertices {
                        return Err(err(ln, "vertex index out of range"));
                    }
                    if g >= n {
                        return Err(err(ln, "group element out of range"));
                    }
                    labels[v] = g;
                }
                _ => return Err(err(ln, "unrecognised line")),
            }
        }
        if order.is_none() {
            return Err(err(0, "missing `group` line"));
        }
        let full: Option<Vec<Vec<usize>>> = table.into_iter().map(|row| row.into_iter().collect()).collect();
        let full = full.ok_or_else(|| invalid("multiplication table is incomplete"))?;
        Self::new(FiniteGroup::new(full)?, labels)
    }
}

/// Hypotheses for equidistribution of walk products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHypotheses {
    /// The labels generate the group.
    pub generates: bool,
    /// The labels do not all lie in one coset of a proper normal subgroup with abelian quotient,
    /// i.e. no nontrivial one-dimensional character is constant on them.
    pub not_in_one_coset: bool,
    /// Description of the obstruction when a hypothesis fails.
    pub witness: Option<String>,
}

impl GroupHypotheses {
    pub fn hold(&self) -> bool {
        self.generates && self.not_in_one_coset
    }
}

pub fn group_hypotheses(lab: &GroupLabeling) -> GroupHypotheses {
    let grp = &lab.group;
    let gen = grp.generated(&lab.labels);
    let generates = gen.iter().all(|&b| b);
    let t0 = lab.labels.first().copied().unwrap_or(0);
    let mut h: Vec<usize> = grp.commutators();
    h.extend(lab.labels.iter().map(|&t| grp.mul(t, grp.inv(t0))));
    let sub = grp.generated(&h);
    let size = sub.iter().filter(|&&b| b).count();
    let not_in_one_coset = size == grp.order();
    let witness = if !generates {
        Some(format!("labels generate a subgroup of order {}", gen.iter().filter(|&&b| b).count()))
    } else if !not_in_one_coset {
        Some(format!("labels lie in one coset of a normal subgroup of index {}", grp.order() / size))
    } else {
        None
    };
    GroupHypotheses { generates, not_in_one_coset, witness }
}

/// Closed-walk counts by the product `t_{v_N} ⋯ t_{v_1}` of departed-vertex labels.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupWalk {
    pub counts: Vec<BigInt>,
    /// Total-variation distance `½ Σ_g |counts[g]/W − 1/|G||` to the uniform distribution.
    pub tv_distance: f64,
    /// `ρ` of the lifted walk on mean-zero group functions divided by `ρ(A)`.
    pub rate: f64,
    pub hypotheses: GroupHypotheses,
}

impl GroupWalk {
    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }
}

/// Exact DP over `(vertex, group element)` states.
pub fn group_walk_distribution(g: &Graph, lab: &GroupLabeling, n: usize) -> Result<GroupWalk> {
    let k = g.n();
    if lab.labels.len() != k {
        return Err(Error::Dimension { expected: k, got: lab.labels.len() });
    }
    let c = g.connectivity();
    if !c.connected || (!g.is_directed() && c.bipartite) || (g.is_directed() && !g.is_primitive()) {
        return Err(precondition("graph must be connected and non-bipartite (or primitive when directed)"));
    }
    let grp = &lab.group;
    let order = grp.order();
    let a = g.adjacency();
    let mut counts = vec![BigInt::zero(); order];
    for s in 0..k {
        let mut cur = vec![vec![BigInt::zero(); order]; k];
        cur[s][0] = BigInt::from(1);
        for _ in 0..n {
            let mut next = vec![vec![BigInt::zero(); order]; k];
            for v in 0..k {
                let t = lab.labels[v];
                for w in 0..k {
                    let m = a[(v, w)];
                    if m == 0 {
                        continue;
                    }
                    for (x, cnt) in cur[v].iter().enumerate() {
                        if !cnt.is_zero() {
                            next[w][grp.mul(t, x)] += cnt * m;
                        }
                    }
                }
            }
            cur = next;
        }
        for (t, c) in counts.iter_mut().zip(&cur[s]) {
            *t += c;
        }
    }
    let total: BigInt = counts.iter().sum();
    let w = bigint_to_f64(&total);
    let tv_distance = 0.5 * counts.iter().map(|c| (bigint_to_f64(c) / w - 1.0 / order as f64).abs()).sum::<f64>();
    Ok(GroupWalk { counts, tv_distance, rate: group_rate(g, lab)?, hypotheses: group_hypotheses(lab) })
}

/// Spectral radius of the lifted walk restricted to functions with zero mean over the group,
/// relative to `ρ(A)`. This is the largest `ρ(U(π)A)/ρ(A)` over nontrivial irreducible representations `π`.
pub fn group_rate(g: &Graph, lab: &GroupLabeling) -> Result<f64> {
    let k = g.n();
    let order = lab.group.order();
    if order == 1 {
        return Ok(0.0);
    }
    let a = g.adjacency_f64();
    let dim = k * order;
    let mut lifted = Matrix::<f64>::zeros(dim, dim);
    for v in 0..k {
        for w in 0..k {
            if a[(v, w)] == 0.0 {
                continue;
            }
            for x in 0..order {
                lifted[(w * order + lab.group.mul(lab.labels[v], x), v * order + x)] += a[(v, w)];
            }
        }
    }
    let qg = helmert_basis(order);
    let q = Matrix::from_fn(dim, k * (order - 1), |i, j| if i / order == j / (order - 1) { qg[(i % order, j % (order - 1))] } else { 0.0 });
    Ok(spectral_radius(&q.transpose().matmul(&lifted).matmul(&q))? / spectral_radius(&a)?)
}
