//! Brute-force ground truth for small graphs: automorphism groups,
//! distinguishing and fixing numbers (optionally relative to a partition),
//! labeling counts, and the rooted-tree recursions on explicit trees.
//!
//! Nothing here uses color refinement; automorphisms are found by plain
//! backtracking over bitmask adjacency, pruned only by colors, degrees and
//! adjacency to already-mapped vertices.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cell_structure::{build_cell_graph, CellKind, Component, PairKind};
use crate::graph::{Graph, InducedSubgraph, Vertex};
use crate::refinement::Partition;

/// Hard ceiling from the 64-bit adjacency masks.
pub const MAX_ORACLE_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("{count} distinguishing labelings not divisible by |Aut| = {order}")]
    DivisibilityViolated { count: BigUint, order: u128 },
    #[error("component is not part of an amenable structure: {0}")]
    NotAmenableComponent(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Size guards for the exponential searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Automorphism enumeration and counting.
    pub max_aut_n: usize,
    /// Coloring and subset exhaustion.
    pub max_exhaust_n: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_aut_n: 10, max_exhaust_n: 8 }
    }
}

impl OracleLimits {
    /// The same limit for every search.
    pub fn uniform(n: usize) -> Self {
        OracleLimits { max_aut_n: n, max_exhaust_n: n }
    }
}

fn guard(n: usize, limit: usize) -> Result<(), OracleError> {
    let limit = limit.min(MAX_ORACLE_N);
    if n > limit {
        Err(OracleError::TooLarge { n, limit })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<Vertex>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<Vertex>) -> Result<Self, OracleError> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v >= images.len() || std::mem::replace(&mut seen[v], true) {
                return Err(OracleError::InvalidInput("not a bijection".into()));
            }
        }
        Ok(Permutation(images))
    }

    pub fn images(&self) -> &[Vertex] {
        &self.0
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.0[v]
    }

    /// `self` after `other`: `v -> self(other(v))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(v, &w)| v == w)
    }
}

/// A fully enumerated automorphism group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    /// Sorted.
    pub elements: Vec<Permutation>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }
}

/// Group order plus a generating set, from a point-stabilizer chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutSummary {
    pub order: u128,
    pub generators: Vec<Permutation>,
}

/// Whether `perm` is an automorphism of `g`, preserving the cells of `p`
/// when given.
pub fn is_automorphism(g: &Graph, p: Option<&Partition>, perm: &Permutation) -> bool {
    perm.0.len() == g.n()
        && p.is_none_or(|p| g.vertices().all(|v| p.cell_of(v) == p.cell_of(perm.apply(v))))
        && g.edges().all(|(u, v)| g.has_edge(perm.apply(u), perm.apply(v)))
}

struct Engine {
    n: usize,
    adj: Vec<u64>,
}

impl Engine {
    fn new(g: &Graph) -> Self {
        let adj = g.vertices().map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
        Engine { n: g.n(), adj }
    }

    /// For each vertex, the vertices sharing its color and degree.
    fn classes(&self, colors: &[usize]) -> Vec<u64> {
        (0..self.n)
            .map(|v| {
                (0..self.n)
                    .filter(|&w| colors[w] == colors[v] && self.adj[w].count_ones() == self.adj[v].count_ones())
                    .fold(0u64, |m, w| m | 1 << w)
            })
            .collect()
    }

    /// Visits every color-preserving automorphism that maps each forced
    /// source to its target, until `visit` returns true. Returns whether it
    /// was stopped.
    fn search(&self, colors: &[usize], forced: &[(Vertex, Vertex)], visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        let n = self.n;
        let classes = self.classes(colors);
        let mut target = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut placed = 0u64;
        for &(v, w) in forced {
            if target[v].is_some() {
                if target[v] != Some(w) {
                    return false;
                }
                continue;
            }
            target[v] = Some(w);
            order.push(v);
            placed |= 1 << v;
        }
        // Remaining vertices greedily by number of already-ordered neighbors.
        while order.len() < n {
            let v = (0..n)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| ((self.adj[v] & placed).count_ones(), std::cmp::Reverse(v)))
                .unwrap();
            order.push(v);
            placed |= 1 << v;
        }
        let mut image = vec![usize::MAX; n];
        let mut state = SearchState { order: &order, target: &target, classes: &classes, image: &mut image };
        self.dfs(&mut state, 0, 0, 0, visit)
    }

    fn dfs(
        &self,
        st: &mut SearchState<'_>,
        depth: usize,
        domain: u64,
        used: u64,
        visit: &mut dyn FnMut(&[Vertex]) -> bool,
    ) -> bool {
        if depth == self.n {
            return visit(st.image);
        }
        let v = st.order[depth];
        let earlier = self.adj[v] & domain;
        let mut mapped = 0u64;
        let mut bits = earlier;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            mapped |= 1 << st.image[u];
        }
        let mut candidates = st.classes[v] & !used;
        if let Some(w) = st.target[v] {
            candidates &= 1 << w;
        }
        if earlier != 0 {
            candidates &= self.adj[st.image[earlier.trailing_zeros() as usize]];
        }
        // Try the identity first so fixed structure is found early.
        let first = if candidates >> v & 1 == 1 { Some(v) } else { None };
        let rest = candidates & !(1u64 << v);
        let mut iter_bits = rest;
        let mut next = first;
        loop {
            let w = match next.take() {
                Some(w) => w,
                None if iter_bits != 0 => {
                    let w = iter_bits.trailing_zeros() as usize;
                    iter_bits &= iter_bits - 1;
                    w
                }
                None => return false,
            };
            if self.adj[w] & used != mapped {
                continue;
            }
            st.image[v] = w;
            if self.dfs(st, depth + 1, domain | 1 << v, used | 1 << w, visit) {
                return true;
            }
            st.image[v] = usize::MAX;
        }
    }

    fn exists_nontrivial(&self, colors: &[usize]) -> bool {
        self.search(colors, &[], &mut |img| img.iter().enumerate().any(|(v, &w)| v != w))
    }

    fn exists_with(&self, colors: &[usize], forced: &[(Vertex, Vertex)]) -> Option<Vec<Vertex>> {
        let mut found = None;
        self.search(colors, forced, &mut |img| {
            found = Some(img.to_vec());
            true
        });
        found
    }

    /// Twin pairs `u < v` of the same color: swapping them is an automorphism.
    fn twins(&self, colors: &[usize]) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.n];
        for v in 0..self.n {
            for u in 0..v {
                if colors[u] == colors[v] && self.adj[u] & !(1 << v) == self.adj[v] & !(1 << u) {
                    out[v].push(u);
                }
            }
        }
        out
    }
}

struct SearchState<'a> {
    order: &'a [Vertex],
    target: &'a [Option<Vertex>],
    classes: &'a [u64],
    image: &'a mut [Vertex],
}

fn base_colors(g: &Graph, p: Option<&Partition>) -> Result<Vec<usize>, OracleError> {
    match p {
        Some(p) if p.n() != g.n() => Err(OracleError::InvalidInput("partition size differs from graph".into())),
        Some(p) => Ok(p.colors().to_vec()),
        None => Ok(vec![0; g.n()]),
    }
}

/// Every automorphism of `g` (cell-preserving when `p` is given).
pub fn automorphisms(g: &Graph, p: Option<&Partition>, limits: OracleLimits) -> Result<AutGroup, OracleError> {
    guard(g.n(), limits.max_aut_n)?;
    let colors = base_colors(g, p)?;
    let mut elements = Vec::new();
    Engine::new(g).search(&colors, &[], &mut |img| {
        elements.push(Permutation(img.to_vec()));
        false
    });
    elements.sort();
    Ok(AutGroup { elements })
}

/// `|Aut(g, p)|` and generators via orbits of successive point stabilizers.
pub fn aut_summary(g: &Graph, p: Option<&Partition>, limits: OracleLimits) -> Result<AutSummary, OracleError> {
    guard(g.n(), limits.max_aut_n)?;
    let colors = base_colors(g, p)?;
    let engine = Engine::new(g);
    let mut order: u128 = 1;
    let mut generators = Vec::new();
    let mut prefix: Vec<(Vertex, Vertex)> = Vec::new();
    for b in 0..g.n() {
        let mut orbit = 1u128;
        for w in 0..g.n() {
            if w == b || colors[w] != colors[b] || g.degree(w) != g.degree(b) {
                continue;
            }
            prefix.push((b, w));
            if let Some(img) = engine.exists_with(&colors, &prefix) {
                orbit += 1;
                generators.push(Permutation(img));
            }
            prefix.pop();
        }
        order *= orbit;
        prefix.push((b, b));
    }
    Ok(AutSummary { order, generators })
}

/// Exhaustive isomorphism test.
pub fn isomorphic_bf(g: &Graph, h: &Graph, limits: OracleLimits) -> Result<bool, OracleError> {
    guard(g.n().max(h.n()), limits.max_aut_n)?;
    if g.n() != h.n() || g.m() != h.m() {
        return Ok(false);
    }
    let (a, b) = (Engine::new(g), Engine::new(h));
    let n = g.n();
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let v = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| ((a.adj[v] & placed).count_ones(), std::cmp::Reverse(v)))
            .unwrap();
        order.push(v);
        placed |= 1 << v;
    }
    fn go(a: &Engine, b: &Engine, order: &[Vertex], depth: usize, image: &mut [Vertex], domain: u64, used: u64) -> bool {
        let Some(&v) = order.get(depth) else { return true };
        let mut mapped = 0u64;
        let mut bits = a.adj[v] & domain;
        while bits != 0 {
            mapped |= 1 << image[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        let deg = a.adj[v].count_ones();
        for w in 0..b.n {
            if used >> w & 1 == 0 && b.adj[w].count_ones() == deg && b.adj[w] & used == mapped {
                image[v] = w;
                if go(a, b, order, depth + 1, image, domain | 1 << v, used | 1 << w) {
                    return true;
                }
            }
        }
        false
    }
    Ok(go(&a, &b, &order, 0, &mut vec![0; n], 0, 0))
}

/// Depth-first walk over `c`-colorings, refined by the base colors, in
/// which twins always get different colors (equal colors on twins are never
/// distinguishing).
struct Colorings<'a> {
    engine: &'a Engine,
    base: &'a [usize],
    twins: Vec<Vec<Vertex>>,
    c: usize,
    /// Only colorings whose colors first appear in the order 0, 1, 2, ...
    canonical: bool,
    coloring: Vec<usize>,
    combined: Vec<usize>,
}

impl<'a> Colorings<'a> {
    fn new(engine: &'a Engine, base: &'a [usize], c: usize, canonical: bool) -> Self {
        let n = engine.n;
        Colorings { engine, base, twins: engine.twins(base), c, canonical, coloring: vec![0; n], combined: vec![0; n] }
    }

    /// Calls `leaf` with whether each coloring is distinguishing; stops when
    /// it returns true.
    fn walk(&mut self, v: usize, used: usize, leaf: &mut dyn FnMut(bool) -> bool) -> bool {
        let n = self.engine.n;
        if v == n {
            for u in 0..n {
                self.combined[u] = self.base[u] * self.c + self.coloring[u];
            }
            return leaf(!self.engine.exists_nontrivial(&self.combined));
        }
        let top = if self.canonical { self.c.min(used + 1) } else { self.c };
        for col in 0..top {
            if self.twins[v].iter().any(|&u| self.coloring[u] == col) {
                continue;
            }
            self.coloring[v] = col;
            if self.walk(v + 1, used.max(col + 1), leaf) {
                return true;
            }
        }
        false
    }
}

/// `D(g)`, or `D(g, p)` when `p` is given.
pub fn dist_number_bf(g: &Graph, p: Option<&Partition>, limits: OracleLimits) -> Result<usize, OracleError> {
    guard(g.n(), limits.max_exhaust_n)?;
    let base = base_colors(g, p)?;
    let engine = Engine::new(g);
    Ok((1..=g.n()).find(|&c| Colorings::new(&engine, &base, c, true).walk(0, 0, &mut |d| d)).unwrap_or(0))
}

/// Number of inequivalent distinguishing labelings with colors from
/// `{1..c}`: distinguishing labelings divided by `|Aut(g, p)|`.
pub fn dist_count_bf(g: &Graph, p: Option<&Partition>, c: usize, limits: OracleLimits) -> Result<BigUint, OracleError> {
    guard(g.n(), limits.max_exhaust_n)?;
    let base = base_colors(g, p)?;
    let engine = Engine::new(g);
    let order = aut_summary(g, p, OracleLimits::uniform(g.n()))?.order;
    let mut count = BigUint::zero();
    Colorings::new(&engine, &base, c, false).walk(0, 0, &mut |distinguishing| {
        if distinguishing {
            count += 1u32;
        }
        false
    });
    let order_big = BigUint::from(order);
    if !(&count % &order_big).is_zero() {
        return Err(OracleError::DivisibilityViolated { count, order });
    }
    Ok(count / order_big)
}

/// `Fix(g)`, or `Fix(g, p)` when `p` is given: the smallest vertex set whose
/// pointwise stabilizer in `Aut(g, p)` is trivial.
pub fn fix_number_bf(g: &Graph, p: Option<&Partition>, limits: OracleLimits) -> Result<usize, OracleError> {
    guard(g.n(), limits.max_exhaust_n)?;
    let base = base_colors(g, p)?;
    let engine = Engine::new(g);
    let n = g.n();
    let fresh = base.iter().max().map_or(0, |m| m + 1);
    for k in 0..=n {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let mut colors = base.clone();
            for (i, &v) in subset.iter().enumerate() {
                colors[v] = fresh + i;
            }
            if !engine.exists_nontrivial(&colors) {
                return Ok(k);
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    unreachable!("the full vertex set is always a fixing set")
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in (0..k).rev() {
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A rooted tree given by parent links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    root: usize,
    children: Vec<Vec<usize>>,
}

impl RootedTree {
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self, OracleError> {
        let roots: Vec<usize> = (0..parent.len()).filter(|&v| parent[v].is_none()).collect();
        let [root] = roots[..] else {
            return Err(OracleError::InvalidInput(format!("expected one root, found {}", roots.len())));
        };
        let mut children = vec![Vec::new(); parent.len()];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= parent.len() {
                    return Err(OracleError::InvalidInput(format!("parent {p} out of range")));
                }
                children[p].push(v);
            }
        }
        let tree = RootedTree { parent, root, children };
        if tree.preorder().len() != tree.parent.len() {
            return Err(OracleError::InvalidInput("parent links contain a cycle".into()));
        }
        Ok(tree)
    }

    /// Roots a tree-shaped graph at `root`.
    pub fn from_graph(g: &Graph, root: Vertex) -> Result<Self, OracleError> {
        if root >= g.n() || g.m() + 1 != g.n() || !g.is_connected() {
            return Err(OracleError::InvalidInput("graph is not a tree containing the root".into()));
        }
        let mut parent = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    stack.push(w);
                }
            }
        }
        Self::from_parents(parent)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    /// The tree as a graph plus a partition isolating the root, so rooted
    /// automorphisms are exactly the cell-preserving ones.
    pub fn to_graph(&self) -> (Graph, Partition) {
        let edges: Vec<_> = self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v))).collect();
        let g = Graph::from_edge_list(self.len(), &edges).expect("parent links are valid edges");
        let colors: Vec<bool> = (0..self.len()).map(|v| v == self.root).collect();
        (g, Partition::from_colors(&colors))
    }

    /// Canonical string per node, bottom-up.
    fn codes(&self) -> Vec<String> {
        let mut codes = vec![String::new(); self.len()];
        for &v in self.preorder().iter().rev() {
            let mut kids: Vec<&str> = self.children[v].iter().map(|&c| codes[c].as_str()).collect();
            kids.sort_unstable();
            codes[v] = format!("({})", kids.concat());
        }
        codes
    }

    /// Children of `v` grouped into isomorphism classes: `(representative, copies)`.
    fn classes(&self, v: usize, codes: &[String]) -> Vec<(usize, usize)> {
        let mut groups: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for &c in &self.children[v] {
            groups.entry(&codes[c]).or_insert((c, 0)).1 += 1;
        }
        groups.into_values().collect()
    }
}

/// Inequivalent distinguishing labelings of a rooted tree with `c` colors.
pub fn tree_dist_count(t: &RootedTree, c: u64) -> BigUint {
    let codes = t.codes();
    let mut value = vec![BigUint::zero(); t.len()];
    for &v in t.preorder().iter().rev() {
        let mut acc = BigUint::from(c);
        for (rep, copies) in t.classes(v, &codes) {
            acc *= choose(&value[rep], copies);
        }
        value[v] = acc;
    }
    value.swap_remove(t.root)
}

fn choose(f: &BigUint, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        if *f < BigUint::from(i + 1) {
            return BigUint::zero();
        }
        acc = acc * (f - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Fixing number of a rooted tree (automorphisms fix the root).
pub fn tree_fix(t: &RootedTree) -> usize {
    let codes = t.codes();
    let mut fix = vec![0usize; t.len()];
    for &v in t.preorder().iter().rev() {
        fix[v] = t
            .classes(v, &codes)
            .into_iter()
            .map(|(rep, copies)| if fix[rep] == 0 { copies - 1 } else { copies * fix[rep] })
            .sum();
    }
    fix[t.root]
}

/// `D` of a disjoint union of `r_j` copies of each connected graph `G_j`;
/// the `G_j` must be pairwise non-isomorphic.
pub fn forest_dist(components: &[(Graph, usize)], limits: OracleLimits) -> Result<usize, OracleError> {
    let mut best = 0;
    for (g, r) in components {
        check_component(g, *r)?;
        let need = BigUint::from(*r);
        let mut c = 1;
        while dist_count_bf(g, None, c, limits)? < need {
            c += 1;
        }
        best = best.max(c);
    }
    Ok(best)
}

/// `Fix` of the same kind of disjoint union: non-rigid classes need a fixing
/// set in every copy, rigid classes need a vertex in all copies but one.
pub fn forest_fix(components: &[(Graph, usize)], limits: OracleLimits) -> Result<usize, OracleError> {
    let mut total = 0;
    for (g, r) in components {
        check_component(g, *r)?;
        let fix = fix_number_bf(g, None, limits)?;
        total += if fix == 0 { r - 1 } else { r * fix };
    }
    Ok(total)
}

fn check_component(g: &Graph, r: usize) -> Result<(), OracleError> {
    if r == 0 || g.n() == 0 || !g.is_connected() {
        return Err(OracleError::InvalidInput("components must be nonempty, connected, with r >= 1".into()));
    }
    Ok(())
}

/// Normalizes the subgraph induced by one anisotropic component into its
/// jellyfish form, keeping the cell-preserving automorphisms:
///
/// * the root cell is complemented when it is empty or a matching;
/// * other complete cells are complemented (emptied);
/// * complete isotropic pairs are emptied and co-star pairs become stars.
pub fn materialize_jellyfish(g: &Graph, p: &Partition, component: &Component) -> Result<InducedSubgraph, OracleError> {
    let cg = build_cell_graph(g, p).map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let root = component.root();
    let members: Vec<Vertex> = component.cells.iter().flat_map(|&c| p.cell(c).iter().copied()).collect();
    let sub = g.induced_subgraph(&members).map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let bad = |msg: String| OracleError::NotAmenableComponent(msg);
    for &c in &component.cells {
        let kind = cg.cell_kind[c];
        if kind == CellKind::Other || (c != root && !kind.is_homogeneous()) {
            return Err(bad(format!("cell {c} has kind {kind:?}")));
        }
    }
    let k = sub.original.len();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (u, v) = (sub.original[i], sub.original[j]);
            let (x, y) = (p.cell_of(u), p.cell_of(v));
            let adjacent = g.has_edge(u, v);
            let keep = if x == y {
                let flip = match cg.cell_kind[x] {
                    CellKind::Empty | CellKind::Matching => x == root,
                    CellKind::Complete => x != root,
                    _ => false,
                };
                adjacent != flip
            } else {
                match cg.pair_kind(x, y) {
                    PairKind::IsoEmpty | PairKind::IsoComplete => false,
                    PairKind::AnisoStars => adjacent,
                    PairKind::AnisoCoStars => !adjacent,
                    PairKind::Other => return Err(bad(format!("pair ({x}, {y}) is neither isotropic nor stars"))),
                }
            };
            if keep {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::from_edge_list(k, &edges).expect("indices are local");
    Ok(InducedSubgraph { graph, original: sub.original, local: sub.local })
}
