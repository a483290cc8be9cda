//! Loop-free undirected (multi)graphs, perfect matchings, and the
//! regularity-changing constructions: product with K₂, complement, and
//! adding or removing a perfect matching.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected loop-free graph on vertices `0..n`.
///
/// Edges are kept as a sorted multiset of pairs `(u, v)` with `u < v`, so
/// two graphs with the same edge multiset compare equal and serialize to
/// the same bytes. Neighbour lists are materialized once at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.edges.len())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list. Repeated pairs become parallel
    /// edges; loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::TooLarge { what: "vertex count", n, limit: u32::MAX as usize });
        }
        let mut edges = Vec::new();
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            edges.push((u.min(v) as u32, u.max(v) as u32));
        }
        Ok(Self::from_canonical(n, edges))
    }

    /// `edges` must hold in-range pairs with `u < v`; they are sorted here.
    pub(crate) fn from_canonical(n: usize, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(u, v) in &edges {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { n, edges, offsets, neighbors }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (sorted, `u < v`) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    /// Sorted neighbours of `v`, repeated once per parallel edge.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Number of parallel edges joining `u` and `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let nb = self.neighbors(u);
        let v = v as u32;
        let start = nb.partition_point(|&w| w < v);
        let end = nb.partition_point(|&w| w <= v);
        end - start
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// The common degree if every vertex has the same degree.
    pub fn regularity(&self) -> Option<usize> {
        let k = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == k).then_some(k)
    }

    pub fn is_simple(&self) -> bool {
        self.edges.windows(2).all(|w| w[0] != w[1])
    }

    /// Connected component label for every vertex, numbered in order of
    /// their smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        const UNSEEN: usize = usize::MAX;
        let mut label = vec![UNSEEN; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != UNSEEN {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    let w = w as usize;
                    if label[w] == UNSEEN {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Breadth-first 2-colouring.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    let w = w as usize;
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `X □ K₂`: vertex `i` of the second copy is `n + i`, and each `i` is
    /// joined to `n + i`.
    pub fn cartesian_k2(&self) -> Graph {
        let n = self.n as u32;
        let mut edges = Vec::with_capacity(2 * self.edges.len() + self.n);
        for &(u, v) in &self.edges {
            edges.push((u, v));
            edges.push((u + n, v + n));
        }
        edges.extend((0..n).map(|i| (i, i + n)));
        Graph::from_canonical(2 * self.n, edges)
    }

    /// The simple complement. Multigraph input is rejected.
    pub fn complement(&self) -> Result<Graph> {
        if !self.is_simple() {
            return Err(Error::MultiEdge);
        }
        let mut edges = Vec::new();
        for u in 0..self.n {
            let mut nb = self.neighbors(u).iter().peekable();
            for v in (u + 1)..self.n {
                while nb.next_if(|&&w| (w as usize) < v).is_some() {}
                if nb.next_if(|&&w| w as usize == v).is_none() {
                    edges.push((u as u32, v as u32));
                }
            }
        }
        Ok(Graph::from_canonical(self.n, edges))
    }

    fn check_perfect(&self, m: &Matching) -> Result<()> {
        if m.vertex_count() != self.n {
            return Err(Error::InvalidMatching(format!(
                "matching is on {} vertices, graph has {}",
                m.vertex_count(),
                self.n
            )));
        }
        if !m.is_perfect() {
            return Err(Error::InvalidMatching("matching is not perfect".into()));
        }
        Ok(())
    }

    /// Adds a perfect matching whose pairs are all non-edges.
    pub fn add_matching(&self, m: &Matching) -> Result<Graph> {
        self.check_perfect(m)?;
        if let Some(&(u, v)) = m.pairs().iter().find(|&&(u, v)| self.has_edge(u, v)) {
            return Err(Error::EdgeAlreadyPresent(u, v));
        }
        let mut edges = self.edges.clone();
        edges.extend(m.pairs().iter().map(|&(u, v)| (u as u32, v as u32)));
        Ok(Graph::from_canonical(self.n, edges))
    }

    /// Removes one copy of each pair of a perfect matching drawn from the
    /// edge set.
    pub fn remove_matching(&self, m: &Matching) -> Result<Graph> {
        self.check_perfect(m)?;
        if let Some(&(u, v)) = m.pairs().iter().find(|&&(u, v)| !self.has_edge(u, v)) {
            return Err(Error::EdgeMissing(u, v));
        }
        let mut drop: Vec<(u32, u32)> = m.pairs().iter().map(|&(u, v)| (u as u32, v as u32)).collect();
        drop.sort_unstable();
        let mut edges = Vec::with_capacity(self.edges.len() - drop.len());
        let mut di = 0;
        for &e in &self.edges {
            if di < drop.len() && drop[di] == e {
                di += 1;
            } else {
                edges.push(e);
            }
        }
        Ok(Graph::from_canonical(self.n, edges))
    }

    /// Edge-list text: `"n m"` then one `"u v"` line per edge, `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(12 * (self.edges.len() + 1));
        writeln!(s, "{} {}", self.n, self.edges.len()).unwrap();
        for &(u, v) in &self.edges {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate();
        let parse_pair = |line_no: usize, line: &str| -> Result<(usize, usize)> {
            let mut it = line.split(' ');
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or_else(|| Error::Parse { line: line_no, msg: "expected two integers".into() })?
                    .parse::<usize>()
                    .map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })
            };
            let a = next()?;
            let b = next()?;
            if it.next().is_some() {
                return Err(Error::Parse { line: line_no, msg: "trailing fields".into() });
            }
            Ok((a, b))
        };
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, msg: "empty input".into() })?;
        let (n, m) = parse_pair(1, header)?;
        let mut pairs = Vec::with_capacity(m);
        for _ in 0..m {
            let (i, line) = lines
                .next()
                .ok_or_else(|| Error::Parse { line: pairs.len() + 2, msg: "missing edge line".into() })?;
            let (u, v) = parse_pair(i + 1, line)?;
            if u >= v {
                return Err(Error::Parse { line: i + 1, msg: format!("expected u < v, got {u} {v}") });
            }
            pairs.push((u, v));
        }
        if let Some((i, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse { line: i + 1, msg: "more edge lines than declared".into() });
        }
        Graph::from_edges(n, pairs)
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    pub fn read_edge_list<R: Read>(mut r: R) -> Result<Graph> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Graph::parse_edge_list(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Graph> {
        Graph::parse_edge_list(&std::fs::read_to_string(path)?)
    }
}

/// A set of vertex-disjoint pairs on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Validates disjointness; pairs are normalized to `u < v` and sorted.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for (u, v) in pairs {
            if u == v {
                return Err(Error::InvalidMatching(format!("pair ({u}, {v}) is a loop")));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
                if std::mem::replace(&mut seen[w], true) {
                    return Err(Error::InvalidMatching(format!("vertex {w} is covered twice")));
                }
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        Ok(Matching { n, pairs: out })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_perfect(&self) -> bool {
        2 * self.pairs.len() == self.n
    }

    /// Every pair is an edge of `g`.
    pub fn is_within(&self, g: &Graph) -> bool {
        g.vertex_count() == self.n && self.pairs.iter().all(|&(u, v)| g.has_edge(u, v))
    }

    /// `"u v"` lines, ascending.
    pub fn to_lines(&self) -> String {
        self.pairs.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }
}
