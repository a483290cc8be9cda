//! Standard small graphs and seeded random regular graphs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn complete(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

/// The star K₁,ₙ₋₁ centred at vertex 0.
pub fn star(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (1..n).map(|i| (0, i)))
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i, i+5`.
pub fn petersen() -> Graph {
    let mut e = Vec::with_capacity(15);
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((5 + i, 5 + (i + 2) % 5));
        e.push((i, i + 5));
    }
    Graph::from_edges(10, e).expect("static edge list")
}

/// The `d`-dimensional cube on `2^d` vertices.
pub fn hypercube(d: u32) -> Result<Graph> {
    if d == 0 || d > 20 {
        return Err(Error::InvalidArgument(format!("hypercube dimension {d} out of range")));
    }
    let n = 1usize << d;
    Graph::from_edges(
        n,
        (0..n).flat_map(|u| (0..d).map(move |b| (u, u ^ (1 << b))).filter(|&(u, v)| u < v)),
    )
}

/// Circulant graph on `n` vertices joining `i` to `i ± s` for each offset.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    let mut e = Vec::new();
    for i in 0..n {
        for &s in offsets {
            if s == 0 || 2 * s > n {
                return Err(Error::InvalidArgument(format!("offset {s} invalid for n = {n}")));
            }
            if 2 * s == n {
                if i < n / 2 {
                    e.push((i, i + s));
                }
            } else {
                e.push((i, (i + s) % n));
            }
        }
    }
    Graph::from_edges(n, e)
}

/// Uniform-ish random simple `k`-regular graph by sequential random pairing
/// of vertex stubs, restarting when the pairing gets stuck.
pub fn random_regular<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Graph> {
    if k >= n || (n * k) % 2 == 1 {
        return Err(Error::InvalidArgument(format!("no simple {k}-regular graph on {n} vertices")));
    }
    'restart: loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(k)).collect();
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::with_capacity(n * k / 2);
        while !stubs.is_empty() {
            let mut misses = 0;
            loop {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if u != v && !adj[u][v] {
                    adj[u][v] = true;
                    adj[v][u] = true;
                    edges.push((u, v));
                    let (hi, lo) = (i.max(j), i.min(j));
                    stubs.swap_remove(hi);
                    stubs.swap_remove(lo);
                    break;
                }
                misses += 1;
                if misses > 64 {
                    let any = stubs.iter().enumerate().any(|(a, &u)| {
                        stubs[a + 1..].iter().any(|&v| u != v && !adj[u][v])
                    });
                    if !any {
                        continue 'restart;
                    }
                    misses = 0;
                }
            }
        }
        return Graph::from_edges(n, edges);
    }
}

/// Random connected simple `k`-regular graph (rejection on connectivity).
pub fn random_connected_regular<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Graph> {
    if k < 2 && n > 2 {
        return Err(Error::InvalidArgument(format!("{k}-regular graphs on {n} vertices are disconnected")));
    }
    loop {
        let g = random_regular(n, k, rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
}
