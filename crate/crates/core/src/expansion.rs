//! Exact edge expansion of small graphs by subset enumeration, and the
//! isoperimetric sandwich `(k − λ₂)/2 ≤ h(X) ≤ √(2k(k − λ₂))`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;
use crate::spectral::{self, SpectralConfig};

/// Largest graph handled by exhaustive enumeration.
pub const MAX_EXACT_VERTICES: usize = 24;

/// Slack allowed on both sides of the isoperimetric sandwich.
pub const SANDWICH_SLACK: f64 = 1e-9;

/// Number of edges (with multiplicity) leaving `subset`.
pub fn boundary_size(g: &Graph, subset: &[usize]) -> Result<usize> {
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    for &v in subset {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        inside[v] = true;
    }
    Ok(g.edges().filter(|&(u, v)| inside[u] != inside[v]).count())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub h: f64,
    pub boundary: usize,
    pub size: usize,
    /// Lexicographically least minimizing subset, ascending.
    pub witness: Vec<usize>,
}

#[derive(Clone, Copy)]
struct Candidate {
    boundary: u64,
    size: u64,
    mask: u32,
}

/// Orders sorted vertex lists lexicographically, encoded as bit masks.
fn lex_cmp(a: u32, b: u32) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let x = (a ^ b).trailing_zeros();
    let above = !((1u32 << x) - 1);
    if a & (1 << x) != 0 {
        // `a` continues with x; `b` either continues with something larger
        // or stops, in which case `b` is a prefix of `a`.
        if b & above == 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    } else if a & above == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        let lhs = self.boundary * other.size;
        let rhs = other.boundary * self.size;
        lhs < rhs || (lhs == rhs && lex_cmp(self.mask, other.mask) == Ordering::Less)
    }
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `h(X) = min |∂F| / |F|` over nonempty `F` with `|F| ≤ n/2`.
pub fn expanding_constant_exact(g: &Graph) -> Result<Expansion> {
    let n = g.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(Error::TooLarge { what: "exact expansion", n, limit: MAX_EXACT_VERTICES });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("expansion needs at least two vertices".into()));
    }
    // Neighbour masks split into layers so parallel edges are counted.
    let mut layers: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n {
        for &w in g.neighbors(v) {
            let mut placed = false;
            for layer in layers[v].iter_mut() {
                if *layer & (1 << w) == 0 {
                    *layer |= 1 << w;
                    placed = true;
                    break;
                }
            }
            if !placed {
                layers[v].push(1 << w);
            }
        }
    }
    let half = (n / 2) as u32;
    let prefix_bits = n.min(8);
    let low_bits = n - prefix_bits;
    let chunks = 1usize << prefix_bits;
    let per_chunk = par::map_range(chunks, |c| {
        let mut best: Option<Candidate> = None;
        let base = (c as u32) << low_bits;
        for low in 0..(1u32 << low_bits) {
            let mask = base | low;
            let size = mask.count_ones();
            if size == 0 || size > half {
                continue;
            }
            let mut boundary = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                for layer in &layers[v] {
                    boundary += (layer & !mask).count_ones() as u64;
                }
            }
            let cand = Candidate { boundary, size: size as u64, mask };
            if best.is_none_or(|b| cand.better_than(&b)) {
                best = Some(cand);
            }
        }
        best
    });
    let best = per_chunk.into_iter().fold(None, pick).expect("n >= 2 admits a subset");
    Ok(Expansion {
        h: best.boundary as f64 / best.size as f64,
        boundary: best.boundary as usize,
        size: best.size as usize,
        witness: (0..n).filter(|&v| best.mask & (1 << v) != 0).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoperimetricReport {
    pub k: usize,
    pub lambda2: f64,
    /// `(k − λ₂) / 2`
    pub lower: f64,
    pub h: f64,
    /// `√(2k(k − λ₂))`
    pub upper: f64,
    pub witness: Vec<usize>,
    pub holds: bool,
}

pub fn isoperimetric_check(g: &Graph, config: &SpectralConfig) -> Result<IsoperimetricReport> {
    let k = g.regularity().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let exp = expanding_constant_exact(g)?;
    let lambda2 = spectral::spectrum(g, config)?.values[1];
    let gap = k as f64 - lambda2;
    let lower = gap / 2.0;
    let upper = (2.0 * k as f64 * gap.max(0.0)).sqrt();
    let holds = lower - SANDWICH_SLACK <= exp.h && exp.h <= upper + SANDWICH_SLACK;
    Ok(IsoperimetricReport { k, lambda2, lower, h: exp.h, upper, witness: exp.witness, holds })
}
