//! Graphs on integer intervals and their cluster structure.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Half-open integer range `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    lo: i64,
    hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "interval lower end {lo} exceeds upper end {hi}"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// `[0, n)`.
    pub fn with_len(n: u64) -> Self {
        Self {
            lo: 0,
            hi: n as i64,
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    /// `I ± L = [lo − L, hi + L)`.
    pub fn pad(&self, l: u64) -> Interval {
        Interval {
            lo: self.lo - l as i64,
            hi: self.hi + l as i64,
        }
    }

    pub fn shift(&self, by: i64) -> Interval {
        Interval {
            lo: self.lo + by,
            hi: self.hi + by,
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi).max(lo);
        Interval { lo, hi }
    }

    pub fn iter(&self) -> std::ops::Range<i64> {
        self.lo..self.hi
    }

    pub(crate) fn index(&self, x: i64) -> usize {
        (x - self.lo) as usize
    }

    pub(crate) fn ensure_contains(&self, inner: &Interval) -> Result<()> {
        if self.contains_interval(inner) {
            Ok(())
        } else {
            Err(Error::NotContained {
                inner_lo: inner.lo,
                inner_hi: inner.hi,
                outer_lo: self.lo,
                outer_hi: self.hi,
            })
        }
    }

    /// Number of unordered vertex pairs.
    pub fn pair_count(&self) -> u64 {
        let n = self.len();
        n * n.saturating_sub(1) / 2
    }

    /// All unordered pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (lo, hi) = (self.lo, self.hi);
        (lo..hi).flat_map(move |i| (i + 1..hi).map(move |j| (i, j)))
    }
}

/// An undirected simple graph whose vertex set is an interval.
///
/// Edges are kept as a flat list of `(i, j)` with `i < j`, in the order they
/// were produced (samplers emit distance-major order). Equality compares edge
/// sets, not order.
#[derive(Debug, Clone)]
pub struct Graph {
    vertices: Interval,
    edges: Vec<(i64, i64)>,
}

impl Graph {
    pub fn empty(vertices: Interval) -> Self {
        Self {
            vertices,
            edges: Vec::new(),
        }
    }

    /// Validates endpoints, rejects self-loops and duplicate edges.
    pub fn new(vertices: Interval, edges: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            for x in [a, b] {
                if !vertices.contains(x) {
                    return Err(Error::VertexOutOfDomain {
                        vertex: x,
                        lo: vertices.lo,
                        hi: vertices.hi,
                    });
                }
            }
            out.push((a.min(b), a.max(b)));
        }
        let mut sorted = out.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self {
            vertices,
            edges: out,
        })
    }

    /// Caller guarantees normalized, distinct, in-range edges.
    pub(crate) fn from_trusted(vertices: Interval, edges: Vec<(i64, i64)>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(a, b)| a < b && vertices.contains(a) && vertices.contains(b)));
        Self { vertices, edges }
    }

    pub fn vertices(&self) -> Interval {
        self.vertices
    }

    pub fn edges(&self) -> &[(i64, i64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted lexicographically.
    pub fn sorted_edges(&self) -> Vec<(i64, i64)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// Same edges translated by `by`.
    pub fn shifted(&self, by: i64) -> Graph {
        Graph {
            vertices: self.vertices.shift(by),
            edges: self.edges.iter().map(|&(a, b)| (a + by, b + by)).collect(),
        }
    }

    /// `G[V]`: the graph induced on `v`.
    pub fn induced_subgraph(&self, v: Interval) -> Result<Graph> {
        self.vertices.ensure_contains(&v)?;
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| v.contains(a) && v.contains(b))
            .collect();
        Ok(Graph { vertices: v, edges })
    }

    /// `G ∪ H`. `h`'s vertex interval must lie inside `g`'s; the result uses `g`'s.
    pub fn union(&self, h: &Graph) -> Result<Graph> {
        if !self.vertices.contains_interval(&h.vertices) {
            return Err(Error::IncompatibleVertices);
        }
        let mut edges = Vec::with_capacity(self.edges.len() + h.edges.len());
        edges.extend_from_slice(&self.edges);
        edges.extend_from_slice(&h.edges);
        edges.sort_unstable();
        edges.dedup();
        Ok(Graph {
            vertices: self.vertices,
            edges,
        })
    }

    /// Adjacency lists indexed by `vertex - lo`.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let mut adj = vec![Vec::new(); self.vertices.len() as usize];
        for &(a, b) in &self.edges {
            adj[self.vertices.index(a)].push(b);
            adj[self.vertices.index(b)].push(a);
        }
        adj
    }

    pub fn clusters(&self) -> ClusterPartition {
        ClusterPartition::from_graph(self)
    }

    /// Text form: `vertices <lo> <hi>` then `edge <i> <j>` lines, sorted.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 * (self.edges.len() + 1));
        let _ = writeln!(s, "vertices {} {}", self.vertices.lo, self.vertices.hi);
        for (a, b) in self.sorted_edges() {
            let _ = writeln!(s, "edge {a} {b}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let perr = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let (hl, header) = lines.next().ok_or_else(|| perr(0, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "vertices" {
            return Err(perr(hl, "expected `vertices <lo> <hi>`"));
        }
        let lo = h[1].parse().map_err(|_| perr(hl, "bad lo"))?;
        let hi = h[2].parse().map_err(|_| perr(hl, "bad hi"))?;
        let vertices = Interval::new(lo, hi)?;
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 || t[0] != "edge" {
                return Err(perr(ln, "expected `edge <i> <j>`"));
            }
            let a: i64 = t[1].parse().map_err(|_| perr(ln, "bad endpoint"))?;
            let b: i64 = t[2].parse().map_err(|_| perr(ln, "bad endpoint"))?;
            edges.push((a, b));
        }
        Graph::new(vertices, edges)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges.len() == other.edges.len()
            && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for Graph {}

/// Connected components of a graph.
///
/// Blocks are numbered in order of their minimum vertex, so block 0 contains
/// the domain's first vertex.
#[derive(Debug, Clone)]
pub struct ClusterPartition {
    domain: Interval,
    labels: Vec<u32>,
    sizes: Vec<usize>,
    merges: usize,
}

impl ClusterPartition {
    pub fn from_graph(g: &Graph) -> Self {
        let domain = g.vertices;
        let n = domain.len() as usize;
        let mut uf = UnionFind::new(n);
        let mut merges = 0;
        for &(a, b) in &g.edges {
            if uf.union(domain.index(a), domain.index(b)).is_some() {
                merges += 1;
            }
        }
        Self::from_union_find(domain, &mut uf, merges)
    }

    pub(crate) fn from_union_find(domain: Interval, uf: &mut UnionFind, merges: usize) -> Self {
        let n = domain.len() as usize;
        let mut root_label = vec![u32::MAX; n];
        let mut labels = Vec::with_capacity(n);
        let mut sizes = Vec::new();
        for x in 0..n {
            let r = uf.find(x);
            if root_label[r] == u32::MAX {
                root_label[r] = sizes.len() as u32;
                sizes.push(0);
            }
            let l = root_label[r];
            sizes[l as usize] += 1;
            labels.push(l);
        }
        Self {
            domain,
            labels,
            sizes,
            merges,
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// ω(G), the number of clusters.
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Successful merges during construction; `count() == |V| − merges()`.
    pub fn merges(&self) -> usize {
        self.merges
    }

    pub fn label(&self, v: i64) -> usize {
        self.labels[self.domain.index(v)] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn same_cluster(&self, a: i64, b: i64) -> bool {
        self.label(a) == self.label(b)
    }

    /// All blocks as sorted vertex lists, ordered by minimum vertex.
    pub fn blocks(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (x, &l) in self.domain.iter().zip(&self.labels) {
            out[l as usize].push(x);
        }
        out
    }

    pub fn largest_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Ĉ(G): a block of maximum size, ties going to the smallest minimum vertex.
    pub fn largest_cluster(&self) -> Result<Vec<i64>> {
        if self.domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let best = first_max(&self.sizes);
        Ok(self
            .domain
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l as usize == best)
            .map(|(x, _)| x)
            .collect())
    }

    /// 𝒞_I(G) = {C ∩ I}: nonempty intersections, ordered by minimum vertex.
    pub fn induced_partition(&self, i: Interval) -> Result<Vec<Vec<i64>>> {
        self.domain.ensure_contains(&i)?;
        let mut slot: HashMap<u32, usize> = HashMap::new();
        let mut out: Vec<Vec<i64>> = Vec::new();
        for x in i.iter() {
            let l = self.labels[self.domain.index(x)];
            let k = *slot.entry(l).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[k].push(x);
        }
        Ok(out)
    }

    /// Label and size of Ĉ_I(G), with the same tie-break as [`Self::largest_cluster`].
    pub fn largest_induced_label(&self, i: Interval) -> Result<Option<(usize, usize)>> {
        self.domain.ensure_contains(&i)?;
        if i.is_empty() {
            return Ok(None);
        }
        let range = self.domain.index(i.lo)..self.domain.index(i.lo) + i.len() as usize;
        let labels = &self.labels[range];
        // First-seen order equals order of minimum vertex within I.
        let mut best = (0usize, 0usize);
        if labels.len() * 4 >= self.sizes.len() {
            let mut counts = vec![0usize; self.sizes.len()];
            let mut first = vec![usize::MAX; self.sizes.len()];
            for (pos, &l) in labels.iter().enumerate() {
                let l = l as usize;
                counts[l] += 1;
                if first[l] == usize::MAX {
                    first[l] = pos;
                }
            }
            let mut best_first = usize::MAX;
            for (l, &c) in counts.iter().enumerate() {
                if c > best.1 || (c == best.1 && c > 0 && first[l] < best_first) {
                    best = (l, c);
                    best_first = first[l];
                }
            }
        } else {
            let mut counts: HashMap<u32, (usize, usize)> = HashMap::new();
            for (pos, &l) in labels.iter().enumerate() {
                counts.entry(l).or_insert((0, pos)).0 += 1;
            }
            let mut best_first = usize::MAX;
            for (&l, &(c, f)) in &counts {
                if c > best.1 || (c == best.1 && f < best_first) {
                    best = (l as usize, c);
                    best_first = f;
                }
            }
        }
        Ok(Some(best))
    }

    pub fn largest_induced_size(&self, i: Interval) -> Result<usize> {
        Ok(self.largest_induced_label(i)?.map_or(0, |(_, c)| c))
    }

    /// Ĉ_I(G): a maximum element of 𝒞_I(G).
    pub fn largest_induced(&self, i: Interval) -> Result<Vec<i64>> {
        match self.largest_induced_label(i)? {
            None => Err(Error::EmptyDomain),
            Some((label, _)) => Ok(i
                .iter()
                .filter(|&x| self.labels[self.domain.index(x)] as usize == label)
                .collect()),
        }
    }
}

fn first_max(sizes: &[usize]) -> usize {
    let mut best = 0;
    for (k, &s) in sizes.iter().enumerate() {
        if s > sizes[best] {
            best = k;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn g(lo: i64, hi: i64, e: &[(i64, i64)]) -> Graph {
        Graph::new(iv(lo, hi), e.iter().copied()).unwrap()
    }

    #[test]
    fn clusters_of_edgeless_graph() {
        let p = g(0, 3, &[]).clusters();
        assert_eq!(p.blocks(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(p.count(), 3);
    }

    #[test]
    fn clusters_of_path() {
        let p = g(0, 3, &[(0, 1), (1, 2)]).clusters();
        assert_eq!(p.blocks(), vec![vec![0, 1, 2]]);
        assert_eq!(p.count(), 1);
    }

    #[test]
    fn clusters_long_edges() {
        let p = g(0, 6, &[(0, 5), (2, 5)]).clusters();
        assert_eq!(p.blocks(), vec![vec![0, 2, 5], vec![1], vec![3], vec![4]]);
        assert_eq!(p.count(), 4);
        assert_eq!(p.count(), 6 - p.merges());
    }

    #[test]
    fn largest_cluster_cases() {
        assert_eq!(
            g(0, 3, &[(1, 2)]).clusters().largest_cluster().unwrap(),
            vec![1, 2]
        );
        assert_eq!(
            g(0, 4, &[(0, 1), (2, 3)])
                .clusters()
                .largest_cluster()
                .unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            g(0, 6, &[(0, 5), (2, 5)])
                .clusters()
                .largest_cluster()
                .unwrap(),
            vec![0, 2, 5]
        );
        assert_eq!(
            Graph::empty(iv(4, 4)).clusters().largest_cluster(),
            Err(Error::EmptyDomain)
        );
    }

    #[test]
    fn induced_partition_cases() {
        let p = g(0, 6, &[(0, 5), (2, 5)]).clusters();
        assert_eq!(
            p.induced_partition(iv(0, 3)).unwrap(),
            vec![vec![0, 2], vec![1]]
        );
        assert_eq!(p.largest_induced(iv(0, 3)).unwrap(), vec![0, 2]);
        assert_eq!(p.induced_partition(iv(0, 6)).unwrap(), p.blocks());
        assert_eq!(p.largest_induced(iv(0, 6)).unwrap(), vec![0, 2, 5]);

        let p = g(0, 6, &[(0, 5), (1, 2)]).clusters();
        assert_eq!(
            p.induced_partition(iv(0, 3)).unwrap(),
            vec![vec![0], vec![1, 2]]
        );
        assert_eq!(p.largest_induced(iv(0, 3)).unwrap(), vec![1, 2]);

        assert!(matches!(
            p.induced_partition(iv(3, 8)),
            Err(Error::NotContained { .. })
        ));
    }

    #[test]
    fn induced_tie_break_small_and_large_paths() {
        // Both count paths (dense vector and hash map) must pick the same element.
        let big = g(0, 40, &[(10, 11), (12, 13)]);
        let p = big.clusters();
        assert_eq!(p.largest_induced(iv(10, 14)).unwrap(), vec![10, 11]);
        assert_eq!(p.largest_induced(iv(9, 14)).unwrap(), vec![10, 11]);
    }

    #[test]
    fn induced_subgraph_cases() {
        let g1 = g(0, 6, &[(0, 5), (2, 5)]);
        assert_eq!(
            g1.induced_subgraph(iv(0, 3)).unwrap(),
            Graph::empty(iv(0, 3))
        );
        assert_eq!(g1.induced_subgraph(iv(0, 6)).unwrap(), g1);
        let g2 = g(0, 5, &[(0, 1), (1, 2), (2, 4)]);
        assert_eq!(g2.induced_subgraph(iv(1, 4)).unwrap(), g(1, 4, &[(1, 2)]));
        assert!(g2.induced_subgraph(iv(1, 9)).is_err());
    }

    #[test]
    fn union_cases() {
        let a = g(0, 4, &[(0, 1)]);
        assert_eq!(
            a.union(&g(0, 4, &[(1, 2)])).unwrap(),
            g(0, 4, &[(0, 1), (1, 2)])
        );
        assert_eq!(a.union(&Graph::empty(iv(0, 4))).unwrap(), a);
        let u = a.union(&g(0, 4, &[(0, 1), (2, 3)])).unwrap();
        assert_eq!(u.edge_count(), 2);
        assert_eq!(u, g(0, 4, &[(0, 1), (2, 3)]));
        assert_eq!(
            a.union(&g(0, 9, &[(1, 8)])),
            Err(Error::IncompatibleVertices)
        );
    }

    #[test]
    fn graph_validation() {
        assert_eq!(Graph::new(iv(0, 3), [(1, 1)]), Err(Error::SelfLoop(1)));
        assert!(matches!(
            Graph::new(iv(0, 3), [(1, 3)]),
            Err(Error::VertexOutOfDomain { vertex: 3, .. })
        ));
        assert_eq!(
            Graph::new(iv(0, 3), [(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
    }

    #[test]
    fn text_format() {
        let g1 = g(-2, 3, &[(2, 0), (-2, 1), (-2, 0)]);
        let t = g1.to_text();
        assert_eq!(t, "vertices -2 3\nedge -2 0\nedge -2 1\nedge 0 2\n");
        assert_eq!(Graph::from_text(&t).unwrap(), g1);
        assert!(Graph::from_text("vertices 0 3\nedge 0 0\n").is_err());
        assert!(matches!(
            Graph::from_text("vertices 0 3\nedgy 0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
