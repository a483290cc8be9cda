//! Maximum matchings in general graphs (Edmonds' blossom algorithm) and
//! the regularity increment/decrement by a perfect matching.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, Matching};

const NONE: usize = usize::MAX;

struct Blossom<'g> {
    g: &'g Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'g> Blossom<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    /// Greedy start: each free vertex takes its lowest free neighbour.
    fn greedy(&mut self) {
        for v in 0..self.g.vertex_count() {
            if self.mate[v] != NONE {
                continue;
            }
            if let Some(&w) = self.g.neighbors(v).iter().find(|&&w| self.mate[w as usize] == NONE) {
                self.mate[v] = w as usize;
                self.mate[w as usize] = v;
            }
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Breadth-first search for an augmenting path from `root`, contracting
    /// blossoms. Returns the free endpoint, if any.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            let g = self.g;
            for &to in g.neighbors(v) {
                let to = to as usize;
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    fn run(mut self) -> Vec<usize> {
        self.greedy();
        for root in 0..self.mate.len() {
            if self.mate[root] == NONE {
                if let Some(end) = self.find_path(root) {
                    self.augment(end);
                }
            }
        }
        self.mate
    }
}

/// A maximum-cardinality matching. Vertices are scanned in ascending
/// order, so the result is a function of the canonical edge order.
pub fn maximum_matching(g: &Graph) -> Matching {
    let mate = Blossom::new(g).run();
    let pairs = mate.iter().enumerate().filter(|&(v, &m)| m != NONE && v < m).map(|(v, &m)| (v, m));
    Matching::new(g.vertex_count(), pairs).expect("blossom search yields disjoint pairs")
}

pub fn perfect_matching(g: &Graph) -> Result<Matching> {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let m = maximum_matching(g);
    if !m.is_perfect() {
        return Err(Error::NoPerfectMatching { n, max_matching: m });
    }
    Ok(m)
}

/// Independent recheck of a matching produced by the search.
fn verify_perfect_within(m: &Matching, g: &Graph) -> Result<()> {
    let rebuilt = Matching::new(g.vertex_count(), m.pairs().iter().copied())?;
    if !rebuilt.is_perfect() || !rebuilt.is_within(g) {
        return Err(Error::InvalidMatching("search returned an invalid perfect matching".into()));
    }
    Ok(())
}

fn regular_simple_even(g: &Graph) -> Result<usize> {
    let k = g.regularity().ok_or(Error::NotRegular)?;
    if !g.is_simple() {
        return Err(Error::MultiEdge);
    }
    if g.vertex_count() % 2 == 1 {
        return Err(Error::OddVertexCount(g.vertex_count()));
    }
    Ok(k)
}

/// Raises regularity by one by adding a perfect matching of the complement.
pub fn increment_regularity(g: &Graph) -> Result<(Graph, Matching)> {
    regular_simple_even(g)?;
    let comp = g.complement()?;
    let m = perfect_matching(&comp)?;
    verify_perfect_within(&m, &comp)?;
    Ok((g.add_matching(&m)?, m))
}

/// Lowers regularity by one by removing a perfect matching of the graph.
pub fn decrement_regularity(g: &Graph) -> Result<(Graph, Matching)> {
    let n = g.vertex_count();
    g.regularity().ok_or(Error::NotRegular)?;
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let m = perfect_matching(g)?;
    verify_perfect_within(&m, g)?;
    Ok((g.remove_matching(&m)?, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, petersen, star};

    #[test]
    fn perfect_matching_examples() {
        let c4 = cycle(4).unwrap();
        let m = perfect_matching(&c4).unwrap();
        assert!(m.is_perfect() && m.is_within(&c4));

        let k4_minus = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let m = perfect_matching(&k4_minus).unwrap();
        assert!(m.is_perfect() && m.is_within(&k4_minus));

        match perfect_matching(&star(4).unwrap()) {
            Err(Error::NoPerfectMatching { max_matching, .. }) => assert_eq!(max_matching.len(), 1),
            other => panic!("expected failure, got {other:?}"),
        }
        assert!(matches!(perfect_matching(&cycle(5).unwrap()), Err(Error::OddVertexCount(5))));
    }

    #[test]
    fn blossom_is_needed() {
        // Two triangles joined by a path: greedy alone gets stuck, the
        // blossom search must find the perfect matching.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let m = perfect_matching(&g).unwrap();
        assert!(m.is_within(&g) && m.is_perfect());
        // Odd cycle with a pendant forces contraction.
        let g = Graph::from_edges(
            8,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (2, 6), (6, 7)],
        )
        .unwrap();
        assert_eq!(maximum_matching(&g).len(), 4);
    }

    #[test]
    fn increment_examples() {
        let (g, m) = increment_regularity(&cycle(6).unwrap()).unwrap();
        assert_eq!(g.regularity(), Some(3));
        assert!(g.is_simple());
        assert!(m.is_perfect());
        let (g, _) = increment_regularity(&cycle(4).unwrap()).unwrap();
        assert_eq!(g, complete(4).unwrap());
        assert!(matches!(
            increment_regularity(&complete(4).unwrap()),
            Err(Error::NoPerfectMatching { .. })
        ));
    }

    #[test]
    fn decrement_examples() {
        let (g, _) = decrement_regularity(&complete(4).unwrap()).unwrap();
        assert_eq!(g.regularity(), Some(2));
        assert!(g.is_connected());
        let (g, m) = decrement_regularity(&petersen()).unwrap();
        assert_eq!(g.regularity(), Some(2));
        assert_eq!(m.len(), 5);
        let odd = Graph::from_edges(
            11,
            (0..5).map(|i| (i, (i + 1) % 5)).chain((5..11).map(|i| (i, 5 + (i - 4) % 6))),
        )
        .unwrap();
        assert!(decrement_regularity(&odd).is_err());
    }
}
