//! Immutable simple undirected graphs in compressed adjacency form, plus the
//! edge-list and graph6 text formats.

use std::fmt;

use thiserror::Error;

/// Dense 0-based vertex index.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("bad graph6 input at byte {position}: {reason}")]
    BadGraph6 { position: usize, reason: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// A simple undirected graph. Neighbor lists are strictly increasing and
/// symmetric; the value never changes after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

/// Bookkeeping from building a graph out of a raw edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    /// Input edges that repeated an earlier edge (in either orientation).
    pub duplicate_edges: usize,
}

/// Which operand of [`Graph::disjoint_union`] a vertex came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Origin {
    pub side: Side,
    pub index: Vertex,
}

/// Result of [`Graph::induced_subgraph`]: the subgraph and the vertex maps
/// in both directions.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `original[new] = old`, increasing.
    pub original: Vec<Vertex>,
    /// `local[old] = Some(new)` for retained vertices.
    pub local: Vec<Option<Vertex>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], targets: Vec::new() }
    }

    /// Builds a graph from an edge list, dropping repeated edges.
    pub fn from_edge_list(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        Self::from_edge_list_with_report(n, edges).map(|(g, _)| g)
    }

    pub fn from_edge_list_with_report(
        n: usize,
        edges: &[(Vertex, Vertex)],
    ) -> Result<(Self, BuildReport), GraphError> {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }

        // Sort and dedup each list, compacting in place.
        let mut duplicates2 = 0;
        let mut write = 0;
        let mut new_offsets = Vec::with_capacity(n + 1);
        new_offsets.push(0);
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            targets[lo..hi].sort_unstable();
            let mut last = None;
            for i in lo..hi {
                let w = targets[i];
                if last == Some(w) {
                    duplicates2 += 1;
                    continue;
                }
                last = Some(w);
                targets[write] = w;
                write += 1;
            }
            new_offsets.push(write);
        }
        targets.truncate(write);
        let report = BuildReport { duplicate_edges: duplicates2 / 2 };
        Ok((Graph { offsets: new_offsets, targets }, report))
    }

    /// Builds from per-vertex neighbor lists that are already symmetric.
    /// Lists are sorted here; symmetry is checked in debug builds.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<Vertex>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let g = Graph { offsets, targets };
        debug_assert!(g.validate().is_ok());
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Checks the structural invariants: no loops, strictly increasing and
    /// symmetric neighbor lists, degree sum equal to `2m`.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n();
        if !self.targets.len().is_multiple_of(2) {
            return Err(GraphError::Invariant("odd degree sum".into()));
        }
        for v in 0..n {
            let nb = self.neighbors(v);
            for (i, &w) in nb.iter().enumerate() {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
                if w == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if i > 0 && nb[i - 1] >= w {
                    return Err(GraphError::Invariant(format!("neighbors of {v} not strictly increasing")));
                }
                if !self.has_edge(w, v) {
                    return Err(GraphError::Invariant(format!("edge {v}-{w} not symmetric")));
                }
            }
        }
        Ok(())
    }

    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Result<InducedSubgraph, GraphError> {
        let n = self.n();
        let mut original: Vec<Vertex> = vertices.to_vec();
        if let Some(&bad) = original.iter().find(|&&v| v >= n) {
            return Err(GraphError::OutOfRange { vertex: bad, n });
        }
        original.sort_unstable();
        original.dedup();
        let mut local = vec![None; n];
        for (i, &v) in original.iter().enumerate() {
            local[v] = Some(i);
        }
        let adj = original
            .iter()
            .map(|&v| self.neighbors(v).iter().filter_map(|&w| local[w]).collect())
            .collect();
        Ok(InducedSubgraph { graph: Graph::from_adjacency(adj), original, local })
    }

    /// Places `other` after `self`; the origin map records each vertex's source.
    pub fn disjoint_union(&self, other: &Graph) -> (Graph, Vec<Origin>) {
        let shift = self.n();
        let mut adj: Vec<Vec<Vertex>> = self.vertices().map(|v| self.neighbors(v).to_vec()).collect();
        adj.extend(other.vertices().map(|v| other.neighbors(v).iter().map(|w| w + shift).collect()));
        let origin = self
            .vertices()
            .map(|index| Origin { side: Side::Left, index })
            .chain(other.vertices().map(|index| Origin { side: Side::Right, index }))
            .collect();
        (Graph::from_adjacency(adj), origin)
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|v| {
                let nb = self.neighbors(v);
                let mut k = 0;
                let mut out = Vec::with_capacity(n - 1 - nb.len());
                for w in 0..n {
                    if k < nb.len() && nb[k] == w {
                        k += 1;
                    } else if w != v {
                        out.push(w);
                    }
                }
                out
            })
            .collect();
        Graph::from_adjacency(adj)
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length must equal n");
        let mut adj = vec![Vec::new(); self.n()];
        for v in self.vertices() {
            adj[perm[v]] = self.neighbors(v).iter().map(|&w| perm[w]).collect();
        }
        Graph::from_adjacency(adj)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Parses the edge-list text format: `#` comments, a header line `n m`,
    /// then `m` lines `u v` with 0-based endpoints.
    pub fn parse_edge_list(text: &str) -> Result<(Graph, BuildReport), GraphError> {
        let mut data = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = data.next().ok_or(GraphError::Parse { line: 0, reason: "missing header".into() })?;
        let nums = parse_fields(hline, header)?;
        let [n, m] = nums[..] else {
            return Err(GraphError::Parse { line: hline, reason: "header must be `n m`".into() });
        };
        let mut edges = Vec::with_capacity(m);
        for (line, l) in data {
            let f = parse_fields(line, l)?;
            let [u, v] = f[..] else {
                return Err(GraphError::Parse { line, reason: "edge line must be `u v`".into() });
            };
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: hline,
                reason: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edge_list_with_report(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Decodes one graph6 string (an optional `>>graph6<<` header and
    /// trailing newline are accepted).
    pub fn from_graph6(text: &str) -> Result<Graph, GraphError> {
        let s = text.trim_end_matches(['\n', '\r']);
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        let bad = |position: usize, reason: &str| GraphError::BadGraph6 { position, reason: reason.into() };
        for (i, &b) in bytes.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(bad(i, "byte outside 63..=126"));
            }
        }
        let sixes = |from: usize, count: usize| -> Result<usize, GraphError> {
            if bytes.len() < from + count {
                return Err(bad(bytes.len(), "truncated vertex count"));
            }
            Ok(bytes[from..from + count].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize))
        };
        let (n, body) = match bytes.first() {
            None => return Err(bad(0, "empty input")),
            Some(126) if bytes.get(1) == Some(&126) => (sixes(2, 6)?, 8),
            Some(126) => (sixes(1, 3)?, 4),
            Some(&b) => ((b - 63) as usize, 1),
        };
        let bits = n * n.saturating_sub(1) / 2;
        let expected = bits.div_ceil(6);
        if bytes.len() - body != expected {
            return Err(bad(body, &format!("expected {expected} adjacency bytes, found {}", bytes.len() - body)));
        }
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = bytes[body + k / 6] - 63;
                if byte >> (5 - k % 6) & 1 == 1 {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        if k % 6 != 0 && (bytes[body + k / 6] - 63) & ((1 << (6 - k % 6)) - 1) != 0 {
            return Err(bad(body + k / 6, "nonzero padding bits"));
        }
        Graph::from_edge_list(n, &edges)
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n();
        let mut out: Vec<u8> = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
        } else {
            out.extend([126, 126]);
            out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
        }
        let mut acc = 0u8;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                k += 1;
                if k % 6 == 0 {
                    out.push(acc + 63);
                    acc = 0;
                }
            }
        }
        if k % 6 != 0 {
            out.push((acc << (6 - k % 6)) + 63);
        }
        String::from_utf8(out).expect("graph6 output is ASCII")
    }
}

fn parse_fields(line: usize, text: &str) -> Result<Vec<usize>, GraphError> {
    text.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| GraphError::Parse { line, reason: format!("`{t}`: {e}") }))
        .collect()
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}
