#![allow(dead_code)]

use fgw::matrix::Matrix;
use fgw::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Convex combination of permutation matrices including the identity and a full cycle, so the
/// result is doubly stochastic, irreducible and aperiodic.
pub fn doubly_stochastic(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> Matrix<f64> {
    let mut m = Matrix::zeros(n, n);
    let mut weights: Vec<f64> = (0..=terms).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    for i in 0..n {
        m[(i, i)] += weights[0];
    }
    for (t, w) in weights[1..].iter().enumerate() {
        let p = if t == 0 { full_cycle(rng, n) } else { permutation(rng, n) };
        for i in 0..n {
            m[(i, p[i])] += w;
        }
    }
    m
}

fn full_cycle(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let order = permutation(rng, n);
    let mut p = vec![0; n];
    for i in 0..n {
        p[order[i]] = order[(i + 1) % n];
    }
    p
}

pub fn symmetric_doubly_stochastic(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> Matrix<f64> {
    let m = doubly_stochastic(rng, n, terms);
    Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

pub fn mean_zero(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = f.iter().sum::<f64>() / n as f64;
    f.iter().map(|x| x - mean).collect()
}

pub fn int_weights(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Union of `d` random permutation digraphs on `n` vertices: a `d`-regular directed multigraph.
pub fn random_regular_digraph(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Graph {
    loop {
        let mut adj = Matrix::filled(n, n, 0u64);
        for _ in 0..d {
            let p = permutation(rng, n);
            for i in 0..n {
                adj[(i, p[i])] += 1;
            }
        }
        let g = Graph::from_adjacency(adj, true).unwrap();
        if g.is_primitive() {
            return g;
        }
    }
}

/// Strongly connected aperiodic digraph with random out-degrees, not regular in general.
pub fn random_primitive_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let adj = Matrix::from_fn(n, n, |_, _| u64::from(rng.gen_bool(p)));
        let g = Graph::from_adjacency(adj, true).unwrap();
        if g.is_primitive() && g.regular_degree().is_none() {
            return g;
        }
    }
}

/// Random undirected simple graph, connected and non-bipartite.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, false, &edges).unwrap();
        let c = g.connectivity();
        if c.connected && !c.bipartite {
            return g;
        }
    }
}

/// Random connected simple cubic graph on `n` vertices (`n` even) from the pairing model.
pub fn random_cubic_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let mut points: Vec<usize> = (0..3 * n).map(|i| i / 3).collect();
        points.shuffle(rng);
        let edges: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        let mut sorted = edges.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() < edges.len() || edges.iter().any(|(u, v)| u == v) {
            continue;
        }
        let g = Graph::from_edges(n, false, &edges).unwrap();
        if g.connectivity().connected {
            return g;
        }
    }
}
