//! Ramanujan base graphs: the Lubotzky–Phillips–Sarnak Cayley graphs
//! `X^{p,q}` on `PSL₂(F_q)` or `PGL₂(F_q)`, and a few closed-form Ramanujan
//! graphs for small tests.
//!
//! Group elements are 2×2 invertible matrices over `F_q` taken up to a
//! scalar. Each class is stored in its canonical form, scaled so that the
//! first nonzero entry in row-major order is 1. Vertices are numbered by
//! the ascending order of these canonical forms.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators;
use crate::graph::Graph;
use crate::numtheory::{four_square_generators, is_prime, legendre, pow_mod, sqrt_mod, FourSquareTuple};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "PSL2")]
    Psl2,
    #[serde(rename = "PGL2")]
    Pgl2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpsParams {
    pub p: u64,
    pub q: u64,
    /// Legendre symbol `(p | q)`.
    pub legendre_sign: i8,
    pub group_kind: GroupKind,
    /// Group order, i.e. the vertex count.
    pub n: usize,
    pub bipartite: bool,
}

/// Validates `(p, q)` for the LPS construction.
pub fn lps_params(p: u64, q: u64) -> Result<LpsParams> {
    let bad = |msg: String| Err(Error::InvalidArgument(msg));
    if !is_prime(p) || !is_prime(q) {
        return bad(format!("p = {p} and q = {q} must both be prime"));
    }
    if p == q {
        return bad(format!("p and q must differ (both {p})"));
    }
    if q * q <= 4 * p {
        return bad(format!("q = {q} must exceed 2√p = {:.4}", 2.0 * (p as f64).sqrt()));
    }
    if p % 4 != 1 || q % 4 != 1 {
        return bad(format!("p = {p} and q = {q} must both be 1 mod 4"));
    }
    let legendre_sign = legendre(p as i64, q)?;
    let order = (q * (q * q - 1)) as usize;
    let (group_kind, n) = if legendre_sign == 1 {
        (GroupKind::Psl2, order / 2)
    } else {
        (GroupKind::Pgl2, order)
    };
    Ok(LpsParams { p, q, legendre_sign, group_kind, n, bipartite: legendre_sign == -1 })
}

/// A projective 2×2 matrix over `F_q`, row-major, in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjMatrix(pub [u64; 4]);

impl ProjMatrix {
    fn canonical(m: [u64; 4], q: u64) -> Option<Self> {
        let lead = *m.iter().find(|&&x| x != 0)?;
        let inv = pow_mod(lead, q - 2, q);
        Some(ProjMatrix(m.map(|x| x * inv % q)))
    }

    fn mul(&self, other: &ProjMatrix, q: u64) -> ProjMatrix {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = other.0;
        let m = [(a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q];
        ProjMatrix::canonical(m, q).expect("product of invertible matrices")
    }

    fn det(&self, q: u64) -> u64 {
        let [a, b, c, d] = self.0;
        (a * d % q + q - b * c % q) % q
    }

    fn key(&self, q: u64) -> u64 {
        let [a, b, c, d] = self.0;
        ((a * q + b) * q + c) * q + d
    }

    fn identity() -> Self {
        ProjMatrix([1, 0, 0, 1])
    }

    /// True if the product is a nonzero scalar matrix.
    pub fn is_scalar(&self) -> bool {
        let [a, b, c, d] = self.0;
        b == 0 && c == 0 && a == d && a != 0
    }
}

fn tuple_matrix(t: &FourSquareTuple, i: u64, q: u64) -> [u64; 4] {
    let r = |x: i64| x.rem_euclid(q as i64) as u64;
    let (a0, a1, a2, a3) = (r(t.0), r(t.1), r(t.2), r(t.3));
    [
        (a0 + i * a1) % q,
        (a2 + i * a3) % q,
        (q - a2 + i * a3) % q,
        (a0 + q * q - i * a1 % q) % q,
    ]
}

/// The `p + 1` projective generator matrices, one per four-square tuple,
/// in the tuples' lexicographic order.
pub fn generator_matrices(params: &LpsParams) -> Result<Vec<ProjMatrix>> {
    let q = params.q;
    let i = sqrt_mod(-1, q)?;
    let gens: Vec<ProjMatrix> = four_square_generators(params.p)?
        .iter()
        .map(|t| ProjMatrix::canonical(tuple_matrix(t, i, q), q).expect("det = p is nonzero mod q"))
        .collect();
    let mut sorted = gens.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != gens.len() {
        return Err(Error::InvalidArgument(format!(
            "generators collide modulo scalars for (p, q) = ({}, {})",
            params.p, q
        )));
    }
    Ok(gens)
}

/// How the vertex set is enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Determinant filter for `q ≤ 31`, generator closure above.
    Auto,
    /// All canonical invertible matrices, keeping square determinants for
    /// the `PSL₂` case.
    DeterminantFilter,
    /// Breadth-first closure of the identity under the generators.
    Closure,
}

const FILTER_MAX_Q: u64 = 31;

fn enumerate_by_filter(params: &LpsParams) -> Vec<ProjMatrix> {
    let q = params.q;
    let mut out = Vec::with_capacity(params.n);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = ProjMatrix([a, b, c, d]);
                    if ProjMatrix::canonical(m.0, q) != Some(m) {
                        continue;
                    }
                    let det = m.det(q);
                    if det == 0 {
                        continue;
                    }
                    if params.group_kind == GroupKind::Psl2 && pow_mod(det, (q - 1) / 2, q) != 1 {
                        continue;
                    }
                    out.push(m);
                }
            }
        }
    }
    out
}

fn enumerate_by_closure(params: &LpsParams, gens: &[ProjMatrix]) -> Vec<ProjMatrix> {
    let q = params.q;
    let start = ProjMatrix::identity();
    let mut seen: HashMap<ProjMatrix, ()> = HashMap::with_capacity(params.n);
    seen.insert(start, ());
    let mut frontier = vec![start];
    let mut all = vec![start];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in gens {
                let h = s.mul(g, q);
                if seen.insert(h, ()).is_none() {
                    next.push(h);
                }
            }
        }
        all.extend_from_slice(&next);
        frontier = next;
    }
    all.sort();
    all
}

/// The group elements (vertex labels) in vertex order.
pub fn group_elements(params: &LpsParams, how: Enumeration) -> Result<Vec<ProjMatrix>> {
    let gens = generator_matrices(params)?;
    let use_filter = match how {
        Enumeration::Auto => params.q <= FILTER_MAX_Q,
        Enumeration::DeterminantFilter => true,
        Enumeration::Closure => false,
    };
    let elems = if use_filter {
        enumerate_by_filter(params)
    } else {
        enumerate_by_closure(params, &gens)
    };
    if elems.len() != params.n {
        return Err(Error::InvalidArgument(format!(
            "enumerated {} group elements, expected {}",
            elems.len(),
            params.n
        )));
    }
    Ok(elems)
}

/// `X^{p,q}`: `g` is joined to `s·g` for each generator `s`.
pub fn build_lps(p: u64, q: u64) -> Result<Graph> {
    build_lps_with(p, q, Enumeration::Auto)
}

pub fn build_lps_with(p: u64, q: u64, how: Enumeration) -> Result<Graph> {
    let params = lps_params(p, q)?;
    let gens = generator_matrices(&params)?;
    let elems = group_elements(&params, how)?;
    let index: HashMap<u64, u32> = elems.iter().enumerate().map(|(i, m)| (m.key(q), i as u32)).collect();
    let rows = par::map_range(elems.len(), |u| {
        let mut out = Vec::with_capacity(gens.len());
        for s in &gens {
            let v = *index
                .get(&s.mul(&elems[u], q).key(q))
                .expect("group is closed under the generators");
            if (u as u32) < v {
                out.push((u as u32, v));
            }
        }
        out
    });
    let g = Graph::from_canonical(elems.len(), rows.into_iter().flatten().collect());
    let k = (p + 1) as usize;
    if g.regularity() != Some(k) || !g.is_simple() {
        return Err(Error::InvalidArgument(format!(
            "X^({p},{q}) is not a simple {k}-regular graph"
        )));
    }
    Ok(g)
}

/// Smallest prime `q ≡ 1 (mod 4)`, `q ≠ p`, `q > 2√p`, `q ≤ q_max`, whose
/// LPS graph has at least `min_vertices` vertices.
pub fn smallest_q(p: u64, min_vertices: usize, q_max: u64) -> Result<LpsParams> {
    (5..=q_max)
        .filter(|&q| q % 4 == 1 && is_prime(q))
        .filter_map(|q| lps_params(p, q).ok())
        .find(|params| params.n >= min_vertices)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "no valid q <= {q_max} gives an LPS graph for p = {p} with at least {min_vertices} vertices"
            ))
        })
}

/// Closed-form Ramanujan graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallRamanujan {
    Complete(usize),
    Cycle(usize),
    Petersen,
}

impl FromStr for SmallRamanujan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "petersen" {
            return Ok(SmallRamanujan::Petersen);
        }
        let arg = |prefix: &str| -> Option<Result<usize>> {
            let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(inner.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad size in {s:?}"))))
        };
        if let Some(n) = arg("complete") {
            return Ok(SmallRamanujan::Complete(n?));
        }
        if let Some(n) = arg("cycle") {
            return Ok(SmallRamanujan::Cycle(n?));
        }
        Err(Error::InvalidArgument(format!("unknown graph {s:?}")))
    }
}

impl fmt::Display for SmallRamanujan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmallRamanujan::Complete(n) => write!(f, "complete({n})"),
            SmallRamanujan::Cycle(n) => write!(f, "cycle({n})"),
            SmallRamanujan::Petersen => write!(f, "petersen"),
        }
    }
}

impl SmallRamanujan {
    pub fn build(&self) -> Result<Graph> {
        match *self {
            SmallRamanujan::Complete(n) if n < 2 => {
                Err(Error::InvalidArgument(format!("complete(n) needs n >= 2, got {n}")))
            }
            SmallRamanujan::Complete(n) => generators::complete(n),
            SmallRamanujan::Cycle(n) => generators::cycle(n),
            SmallRamanujan::Petersen => Ok(generators::petersen()),
        }
    }
}

pub fn small_ramanujan(name: &str) -> Result<Graph> {
    name.parse::<SmallRamanujan>()?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{self, SpectralConfig};

    #[test]
    fn params_examples() {
        let a = lps_params(5, 13).unwrap();
        assert_eq!((a.legendre_sign, a.group_kind, a.n, a.bipartite), (-1, GroupKind::Pgl2, 2184, true));
        let b = lps_params(13, 17).unwrap();
        assert_eq!((b.legendre_sign, b.group_kind, b.n, b.bipartite), (1, GroupKind::Psl2, 2448, false));
        let c = lps_params(5, 17).unwrap();
        assert_eq!((c.group_kind, c.n), (GroupKind::Pgl2, 4896));
        assert!(lps_params(5, 3).is_err());
        assert!(lps_params(13, 13).is_err());
        assert!(lps_params(7, 13).is_err());
        assert!(lps_params(5, 19).is_err());
        assert!(lps_params(29, 5).is_err());
    }

    #[test]
    fn generators_are_closed_under_inverse() {
        for (p, q) in [(5, 13), (13, 17), (5, 29), (17, 13)] {
            let params = lps_params(p, q).unwrap();
            let gens = generator_matrices(&params).unwrap();
            assert_eq!(gens.len() as u64, p + 1);
            for s in &gens {
                assert!(gens.iter().any(|t| s.mul(t, q).is_scalar()), "no inverse for {s:?}");
                assert!(!s.is_scalar());
                assert!(!s.mul(s, q).is_scalar(), "generator is an involution");
            }
        }
    }

    #[test]
    fn enumerations_agree() {
        for (p, q) in [(5, 13), (13, 17), (17, 5)] {
            if lps_params(p, q).is_err() {
                continue;
            }
            let a = build_lps_with(p, q, Enumeration::DeterminantFilter).unwrap();
            let b = build_lps_with(p, q, Enumeration::Closure).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn structure_of_x_5_13() {
        let g = build_lps(5, 13).unwrap();
        assert_eq!(g.vertex_count(), 2184);
        assert_eq!(g.edge_count(), 2184 * 6 / 2);
        assert_eq!(g.regularity(), Some(6));
        assert!(g.is_connected() && g.is_bipartite() && g.is_simple());
    }

    #[test]
    fn structure_of_x_13_17() {
        let g = build_lps(13, 17).unwrap();
        assert_eq!(g.vertex_count(), 2448);
        assert_eq!(g.regularity(), Some(14));
        assert!(g.is_connected() && !g.is_bipartite() && g.is_simple());
    }

    #[test]
    fn structure_of_x_5_17() {
        let g = build_lps(5, 17).unwrap();
        assert_eq!(g.vertex_count(), 4896);
        assert_eq!(g.regularity(), Some(6));
        assert!(g.is_connected() && g.is_bipartite());
    }

    #[test]
    fn smallest_q_search() {
        assert_eq!(smallest_q(5, 1000, 101).unwrap().q, 13);
        assert_eq!(smallest_q(5, 100, 101).unwrap().q, 13);
        assert_eq!(smallest_q(5, 3000, 101).unwrap().q, 17);
        assert_eq!(smallest_q(13, 100, 101).unwrap().q, 17);
        assert!(smallest_q(5, 10_000_000, 101).is_err());
    }

    #[test]
    fn small_library_is_ramanujan() {
        let cfg = SpectralConfig::default();
        for name in ["complete(4)", "complete(7)", "cycle(7)", "cycle(12)", "petersen"] {
            let g = small_ramanujan(name).unwrap();
            assert!(spectral::is_ramanujan(&g, &cfg).unwrap(), "{name}");
        }
        let s = spectral::spectrum(&small_ramanujan("complete(4)").unwrap(), &cfg).unwrap();
        assert!((s.values[1] + 1.0).abs() < 1e-12);
        let s = spectral::spectrum(&small_ramanujan("cycle(7)").unwrap(), &cfg).unwrap();
        let expect = 2.0 * (2.0 * std::f64::consts::PI / 7.0).cos();
        assert!((s.values[1] - expect).abs() < 1e-12);
        assert!(small_ramanujan("cube").is_err());
        assert!(small_ramanujan("complete(1)").is_err());
        assert!(small_ramanujan("cycle(2)").is_err());
        assert_eq!(SmallRamanujan::Cycle(5).to_string(), "cycle(5)");
    }
}
