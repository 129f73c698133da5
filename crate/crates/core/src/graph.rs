//! Simple undirected graphs, the standard families, and the joined union.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// An undirected simple graph on vertices `0..order`.
///
/// Edges are kept both as a sorted list of `(u, v)` pairs with `u < v` and as
/// sorted per-vertex neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    order: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edge_list(order: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(pairs.len());
        for &(u, v) in pairs {
            for w in [u, v] {
                if w >= order {
                    return Err(Error::VertexOutOfRange { vertex: w, order });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        Ok(Self::from_unique(order, seen.into_iter().collect()))
    }

    /// Trusted constructor: pairs are already normalized and unique.
    fn from_unique(order: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        let mut neighbors = vec![Vec::new(); order];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self {
            order,
            edges,
            neighbors,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order && v < self.order && self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    /// The common degree when every vertex has the same degree.
    pub fn is_regular(&self) -> Option<usize> {
        let mut it = self.neighbors.iter().map(Vec::len);
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    pub fn components(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.order > 0 && self.components() == 1
    }

    /// Per-vertex component id and the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.order];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.order {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.neighbors[v] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartite_components().iter().all(|&b| b)
    }

    /// For each connected component (in label order), whether it is bipartite.
    pub fn bipartite_components(&self) -> Vec<bool> {
        let (label, count) = self.component_labels();
        let mut ok = vec![true; count];
        let mut color = vec![u8::MAX; self.order];
        let mut queue = VecDeque::new();
        for start in 0..self.order {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.neighbors[v] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        ok[label[v]] = false;
                    }
                }
            }
        }
        ok
    }

    /// Reads the edge-list text format: a first line holding the order, then
    /// one `u v` pair per line (0-based). Blank lines and `#` comments are
    /// skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing vertex count".into(),
        })?;
        let order: usize = header.parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad vertex count {header:?}"),
        })?;
        let mut pairs = Vec::new();
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let mut next = || -> Result<usize> {
                let tok = it.next().ok_or(Error::Parse {
                    line,
                    message: "expected two vertex ids".into(),
                })?;
                tok.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad vertex id {tok:?}"),
                })
            };
            let (u, v) = (next()?, next()?);
            if it.next().is_some() {
                return Err(Error::Parse {
                    line,
                    message: "trailing tokens".into(),
                });
            }
            pairs.push((u, v));
        }
        Self::from_edge_list(order, &pairs)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

pub fn make_complete(m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::OutOfRange("complete graph needs m >= 1".into()));
    }
    let edges = (0..m)
        .flat_map(|u| (u + 1..m).map(move |v| (u, v)))
        .collect();
    Ok(Graph::from_unique(m, edges))
}

pub fn make_empty(m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::OutOfRange("empty graph needs m >= 1".into()));
    }
    Ok(Graph::from_unique(m, Vec::new()))
}

pub fn make_cycle(m: usize) -> Result<Graph> {
    if m < 3 {
        return Err(Error::OutOfRange("cycle needs m >= 3".into()));
    }
    let edges = (0..m)
        .map(|u| (u.min((u + 1) % m), u.max((u + 1) % m)))
        .collect();
    Ok(Graph::from_unique(m, edges))
}

/// `K_{1,m-1}` with vertex 0 as the center.
pub fn make_star(m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::OutOfRange("star needs m >= 1".into()));
    }
    Ok(Graph::from_unique(m, (1..m).map(|v| (0, v)).collect()))
}

pub fn make_path(m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::OutOfRange("path needs m >= 1".into()));
    }
    Ok(Graph::from_unique(m, (1..m).map(|v| (v - 1, v)).collect()))
}

/// Uniform-ish random `r`-regular graph on `n` vertices via the pairing model
/// with rejection. Returns `None` when no such graph exists or every attempt
/// produced a loop or a multi-edge.
pub fn random_regular<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> Option<Graph> {
    if n == 0 || r >= n || (n * r) % 2 == 1 {
        return None;
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, r)).collect();
    'attempt: for _ in 0..2000 {
        stubs.shuffle(rng);
        let mut seen = HashSet::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        return Some(Graph::from_unique(n, seen.into_iter().collect()));
    }
    None
}

/// Offsets of each part's vertex block in the joined union.
pub fn block_offsets(orders: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    orders
        .iter()
        .map(|&o| {
            let start = acc;
            acc += o;
            start
        })
        .collect()
}

/// Materializes `outer[parts[0], ..., parts[n-1]]`.
///
/// Block `i` occupies the consecutive vertex range starting at the sum of
/// the orders of parts `0..i`. Every within-part edge is kept and every
/// vertex of block `i` is joined to every vertex of block `j` whenever `i`
/// and `j` are adjacent in `outer`.
pub fn joined_union(outer: &Graph, parts: &[Graph]) -> Result<Graph> {
    if parts.len() != outer.order() {
        return Err(Error::PartCountMismatch {
            expected: outer.order(),
            got: parts.len(),
        });
    }
    if parts.iter().any(|p| p.order() == 0) {
        return Err(Error::OutOfRange("component graphs need order >= 1".into()));
    }
    let orders: Vec<usize> = parts.iter().map(Graph::order).collect();
    let offsets = block_offsets(&orders);
    let total = orders.iter().sum();
    let mut edges = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let base = offsets[i];
        edges.extend(part.edges().iter().map(|&(u, v)| (base + u, base + v)));
    }
    for &(i, j) in outer.edges() {
        for u in 0..orders[i] {
            for v in 0..orders[j] {
                edges.push((offsets[i] + u, offsets[j] + v));
            }
        }
    }
    Ok(Graph::from_unique(total, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        assert_eq!(make_complete(4).unwrap().size(), 6);
        let c5 = make_cycle(5).unwrap();
        assert_eq!(c5.size(), 5);
        assert_eq!(c5.degrees(), vec![2; 5]);
        assert_eq!(make_star(4).unwrap().degrees(), vec![3, 1, 1, 1]);
        assert!(make_cycle(2).is_err());
        assert!(make_complete(0).is_err());
    }

    #[test]
    fn predicates() {
        assert_eq!(make_cycle(6).unwrap().is_regular(), Some(2));
        assert_eq!(make_empty(3).unwrap().components(), 3);
        assert!(!make_cycle(5).unwrap().is_bipartite());
        assert!(make_cycle(6).unwrap().is_bipartite());
        assert_eq!(make_star(4).unwrap().is_regular(), None);
        assert!(make_path(4).unwrap().is_connected());
        assert!(!make_empty(2).unwrap().is_connected());
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange {
                vertex: 3,
                order: 3
            })
        );
        assert_eq!(Graph::from_edge_list(3, &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(1, 0))
        );
    }

    #[test]
    fn edge_list_text_format() {
        let g = Graph::parse_edge_list("4\n0 1\n1 2\n\n2 3\n").unwrap();
        assert_eq!(g, make_path(4).unwrap());
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(matches!(
            Graph::parse_edge_list("3\n0 0\n"),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::parse_edge_list("3\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse_edge_list(""),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn join_of_two_singletons_is_k2() {
        let k1 = make_complete(1).unwrap();
        let g = joined_union(&make_complete(2).unwrap(), &[k1.clone(), k1]).unwrap();
        assert_eq!(g, make_complete(2).unwrap());
    }

    #[test]
    fn join_degrees_and_size() {
        let g1 = make_cycle(5).unwrap();
        let g2 = make_complete(3).unwrap();
        let h = joined_union(&make_complete(2).unwrap(), &[g1.clone(), g2.clone()]).unwrap();
        assert_eq!(h.order(), 8);
        assert_eq!(h.size(), g1.size() + g2.size() + 15);
        assert!(h.degrees()[..5].iter().all(|&d| d == 2 + 3));
        assert!(h.degrees()[5..].iter().all(|&d| d == 2 + 5));
    }

    #[test]
    fn friendship_two() {
        let k1 = make_complete(1).unwrap();
        let k2 = make_complete(2).unwrap();
        let h = joined_union(&make_star(3).unwrap(), &[k1, k2.clone(), k2]).unwrap();
        assert_eq!(h.order(), 5);
        assert_eq!(h.degrees(), vec![4, 2, 2, 2, 2]);
    }

    #[test]
    fn part_count_mismatch() {
        let k1 = make_complete(1).unwrap();
        assert_eq!(
            joined_union(&make_complete(3).unwrap(), &[k1]),
            Err(Error::PartCountMismatch {
                expected: 3,
                got: 1
            })
        );
    }

    #[test]
    fn random_regular_is_regular() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (n, r) in [(6, 3), (6, 2), (5, 4), (8, 3), (4, 1)] {
            let g = random_regular(n, r, &mut rng).unwrap();
            assert_eq!(g.is_regular(), Some(r));
        }
        assert!(random_regular(5, 3, &mut rng).is_none());
    }
}
