//! Multigraphs with dense adjacency counts, their text format, and exact spectral invariants.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::ratio_to_f64;

/// A finite multigraph. `adj[(i, j)]` counts edges `i → j`; for undirected graphs the matrix is
/// symmetric and a loop contributes 1 to `adj[(i, i)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    directed: bool,
    adj: Matrix<u64>,
    labels: Vec<Option<BigRational>>,
}

/// Flags returned by [`Graph::connectivity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub connected: bool,
    pub bipartite: bool,
    pub strongly_connected: bool,
}

impl Graph {
    /// Graph from an adjacency-count matrix.
    pub fn from_adjacency(adj: Matrix<u64>, directed: bool) -> Result<Self> {
        if !adj.is_square() {
            return Err(Error::Dimension { expected: adj.rows(), got: adj.cols() });
        }
        if !directed {
            let n = adj.rows();
            for i in 0..n {
                for j in 0..i {
                    if adj[(i, j)] != adj[(j, i)] {
                        return Err(invalid(format!("undirected adjacency is asymmetric at ({i}, {j})")));
                    }
                }
            }
        }
        let n = adj.rows();
        Ok(Self { directed, adj, labels: vec![None; n] })
    }

    /// Graph on `n` vertices from an edge list; undirected edges are listed once.
    pub fn from_edges(n: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = Matrix::filled(n, n, 0u64);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            adj[(u, v)] += 1;
            if !directed && u != v {
                adj[(v, u)] += 1;
            }
        }
        Self::from_adjacency(adj, directed)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, false, &edges).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, false, &edges).expect("valid complete graph")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Self::from_edges(10, false, &edges).expect("valid Petersen graph")
    }

    /// Complete bipartite graph `K_{m,m}`.
    pub fn complete_bipartite(m: usize) -> Self {
        let edges: Vec<_> = (0..m).flat_map(|i| (0..m).map(move |j| (i, m + j))).collect();
        Self::from_edges(2 * m, false, &edges).expect("valid bipartite graph")
    }

    pub fn n(&self) -> usize {
        self.adj.rows()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn adjacency(&self) -> &Matrix<u64> {
        &self.adj
    }

    pub fn adjacency_int(&self) -> Matrix<BigInt> {
        self.adj.map(|&x| BigInt::from(x))
    }

    pub fn adjacency_f64(&self) -> Matrix<f64> {
        self.adj.map(|&x| x as f64)
    }

    pub fn labels(&self) -> &[Option<BigRational>] {
        &self.labels
    }

    pub fn set_label(&mut self, v: usize, value: BigRational) -> Result<()> {
        if v >= self.n() {
            return Err(invalid(format!("label index {v} out of range")));
        }
        self.labels[v] = Some(value);
        Ok(())
    }

    /// Vertex labels as floats; fails if any vertex is unlabelled.
    pub fn label_values(&self) -> Result<Vec<f64>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| l.as_ref().map(ratio_to_f64).ok_or_else(|| invalid(format!("vertex {i} has no label"))))
            .collect()
    }

    /// Vertex labels as integers; fails if any label is missing or non-integral.
    pub fn integer_labels(&self) -> Result<Vec<i64>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| match l {
                Some(x) if x.is_integer() => i64::try_from(x.to_integer())
                    .map_err(|_| invalid(format!("label of vertex {i} does not fit in 64 bits"))),
                Some(_) => Err(invalid(format!("label of vertex {i} is not an integer"))),
                None => Err(invalid(format!("vertex {i} has no label"))),
            })
            .collect()
    }

    pub fn out_degree(&self, i: usize) -> u64 {
        self.adj.row(i).iter().sum()
    }

    pub fn in_degree(&self, j: usize) -> u64 {
        (0..self.n()).map(|i| self.adj[(i, j)]).sum()
    }

    /// The common degree when the graph is regular (in- and out-degree for digraphs).
    pub fn regular_degree(&self) -> Option<u64> {
        let n = self.n();
        if n == 0 {
            return None;
        }
        let r = self.out_degree(0);
        let ok = (0..n).all(|i| self.out_degree(i) == r && (!self.directed || self.in_degree(i) == r));
        ok.then_some(r)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n()).any(|i| self.adj[(i, i)] > 0)
    }

    /// Number of edges (arcs for digraphs), counting multiplicity and loops once.
    pub fn edge_count(&self) -> u64 {
        let n = self.n();
        if self.directed {
            self.adj.as_slice().iter().sum()
        } else {
            (0..n).map(|i| (i..n).map(|j| self.adj[(i, j)]).sum::<u64>()).sum()
        }
    }

    fn neighbours_undirected(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&w| self.adj[(v, w)] > 0 || self.adj[(w, v)] > 0)
    }

    fn reachable(&self, start: usize, reverse: bool) -> Vec<bool> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                let e = if reverse { self.adj[(w, v)] } else { self.adj[(v, w)] };
                if e > 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Weak connectivity, bipartiteness of the underlying undirected graph, and strong connectivity.
    pub fn connectivity(&self) -> Connectivity {
        let n = self.n();
        if n == 0 {
            return Connectivity { connected: false, bipartite: false, strongly_connected: false };
        }
        let mut colour: Vec<Option<bool>> = vec![None; n];
        let mut bipartite = true;
        let mut components = 0;
        for s in 0..n {
            if colour[s].is_some() {
                continue;
            }
            components += 1;
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let cv = colour[v].unwrap();
                for w in self.neighbours_undirected(v) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => bipartite = false,
                        _ => {}
                    }
                }
            }
        }
        let connected = components == 1;
        let strongly_connected = connected
            && self.reachable(0, false).iter().all(|&b| b)
            && self.reachable(0, true).iter().all(|&b| b);
        Connectivity { connected, bipartite, strongly_connected }
    }

    /// Period of a strongly connected graph: gcd of all closed-walk lengths.
    pub fn period(&self) -> Option<u64> {
        if !self.connectivity().strongly_connected {
            return None;
        }
        let n = self.n();
        let mut level = vec![u64::MAX; n];
        level[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if self.adj[(v, w)] > 0 && level[w] == u64::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut g = 0u64;
        for v in 0..n {
            for w in 0..n {
                if self.adj[(v, w)] > 0 {
                    let diff = (level[v] as i64 + 1 - level[w] as i64).unsigned_abs();
                    g = g.gcd(&diff);
                }
            }
        }
        Some(g)
    }

    /// Strongly connected with period 1, i.e. the adjacency matrix is primitive.
    pub fn is_primitive(&self) -> bool {
        self.period() == Some(1)
    }

    /// Canonical text form; edges sorted, undirected edges listed once with `u ≤ v`.
    pub fn emit(&self) -> String {
        let n = self.n();
        let mut s = String::new();
        let _ = writeln!(s, "graph {}", if self.directed { "directed" } else { "undirected" });
        let _ = writeln!(s, "vertices {n}");
        for u in 0..n {
            let start = if self.directed { 0 } else { u };
            for v in start..n {
                match self.adj[(u, v)] {
                    0 => {}
                    1 => {
                        let _ = writeln!(s, "edge {u} {v}");
                    }
                    m => {
                        let _ = writeln!(s, "edge {u} {v} {m}");
                    }
                }
            }
        }
        for (v, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                let _ = writeln!(s, "label {v} {l}");
            }
        }
        s
    }

    /// Parses the graph text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let (ln, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
        let directed = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["graph", "directed"] => true,
            ["graph", "undirected"] => false,
            _ => return Err(err(ln, "expected `graph directed` or `graph undirected`")),
        };
        let (ln, vline) = lines.next().ok_or_else(|| err(ln, "missing `vertices` line"))?;
        let n = match vline.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["vertices", k] => k.parse::<usize>().map_err(|_| err(ln, "bad vertex count"))?,
            _ => return Err(err(ln, "expected `vertices <n>`")),
        };
        let mut adj = Matrix::filled(n, n, 0u64);
        let mut labels = vec![None; n];
        let index = |ln: usize, tok: &str| -> Result<usize> {
            let v: usize = tok.parse().map_err(|_| err(ln, "bad vertex index"))?;
            if v >= n {
                return Err(err(ln, &format!("vertex index {v} out of range for {n} vertices")));
            }
            Ok(v)
        };
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["edge", u, v, rest @ ..] => {
                    let (u, v) = (index(ln, u)?, index(ln, v)?);
                    let mult = match rest {
                        [] => 1,
                        [m] => {
                            if m.starts_with('-') {
                                return Err(err(ln, "negative multiplicity"));
                            }
                            m.parse::<u64>().map_err(|_| err(ln, "bad multiplicity"))?
                        }
                        _ => return Err(err(ln, "trailing tokens after edge")),
                    };
                    adj[(u, v)] += mult;
                    if !directed && u != v {
                        adj[(v, u)] += mult;
                    }
                }
                ["label", v, value] => {
                    let v = index(ln, v)?;
                    labels[v] = Some(parse_rational(value).ok_or_else(|| err(ln, "bad label value"))?);
                }
                _ => return Err(err(ln, "unrecognised line")),
            }
        }
        let mut g = Self::from_adjacency(adj, directed)?;
        g.labels = labels;
        Ok(g)
    }
}

impl FromStr for Graph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Parses `p/q`, an integer, or a decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().ok()? / 10;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, denom);
    Some(if neg { -r } else { r })
}

/// `tr(A^m)` exactly.
pub fn trace_power(a: &Matrix<BigInt>, m: u64) -> BigInt {
    a.pow(m).trace()
}

/// `det(uI − A)` by the division-free Berkowitz algorithm.
pub fn char_poly(a: &Matrix<BigInt>) -> Poly<BigRational> {
    char_poly_int(a).to_rational()
}

/// `det(I − uA)`, the coefficient reversal of [`char_poly`].
pub fn reversed_char_poly(a: &Matrix<BigInt>) -> Poly<BigRational> {
    char_poly_int(a).reversed(a.rows()).to_rational()
}

/// Integer coefficients of `det(uI − A)`.
pub fn char_poly_int(a: &Matrix<BigInt>) -> Poly<BigInt> {
    assert!(a.is_square(), "characteristic polynomial of non-square matrix");
    let n = a.rows();
    // Berkowitz: c holds the coefficients of det(uI − A_k) for the leading k×k block,
    // highest degree first.
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for k in 0..n {
        // A_{k+1} = [[A_k, col], [row, a_kk]].
        let akk = a[(k, k)].clone();
        let row: Vec<BigInt> = (0..k).map(|j| a[(k, j)].clone()).collect();
        let col: Vec<BigInt> = (0..k).map(|i| a[(i, k)].clone()).collect();
        // Toeplitz column: 1, −a_kk, −row·col, −row·A·col, …
        let mut t = vec![BigInt::one(), -akk];
        let mut v = col;
        for _ in 0..k {
            let s: BigInt = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            t.push(-s);
            let mut nv = vec![BigInt::zero(); k];
            for (i, slot) in nv.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    *slot += &a[(i, j)] * vj;
                }
            }
            v = nv;
        }
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for j in 0..=i.min(k) {
                if i - j < t.len() {
                    *slot += &t[i - j] * &c[j];
                }
            }
        }
        c = next;
    }
    c.reverse();
    Poly::new(c)
}

/// Exact determinant of an integer matrix via rational elimination.
pub fn det_int(a: &Matrix<BigInt>) -> BigInt {
    let q = a.map(|x| BigRational::from_integer(x.clone()));
    q.det().expect("square matrix").to_integer()
}

/// True when every coefficient of `p` is an integer.
pub fn is_integral(p: &Poly<BigRational>) -> bool {
    p.coeffs().iter().all(|c| c.is_integer())
}
