//! The cell graph over an equitable partition and its anisotropic forest.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::refinement::{is_equitable, Partition, RefineError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellError {
    #[error("partition is not equitable for the graph")]
    NotEquitable,
    #[error(transparent)]
    Partition(#[from] RefineError),
}

/// What a single cell induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CellKind {
    Empty,
    Complete,
    /// `rK2` with `r >= 2`.
    Matching,
    /// Complement of `rK2`, `r >= 2`.
    CoMatching,
    FiveCycle,
    Other,
}

impl CellKind {
    fn classify(size: usize, d: usize) -> Self {
        if d == 0 {
            CellKind::Empty
        } else if d + 1 == size {
            CellKind::Complete
        } else if d == 1 && size >= 4 {
            CellKind::Matching
        } else if d + 2 == size && size >= 4 {
            CellKind::CoMatching
        } else if size == 5 && d == 2 {
            CellKind::FiveCycle
        } else {
            CellKind::Other
        }
    }

    pub fn is_homogeneous(self) -> bool {
        matches!(self, CellKind::Empty | CellKind::Complete)
    }
}

/// What the bipartite graph between two cells looks like. Star centers are
/// always on `small`, the cell with fewer vertices (lower id on ties).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairKind {
    IsoEmpty,
    IsoComplete,
    AnisoStars,
    AnisoCoStars,
    Other,
}

impl PairKind {
    pub fn is_isotropic(self) -> bool {
        matches!(self, PairKind::IsoEmpty | PairKind::IsoComplete)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairInfo {
    pub small: usize,
    pub large: usize,
    /// Neighbors a vertex of `small` has in `large`.
    pub d_small_large: usize,
    /// Neighbors a vertex of `large` has in `small`.
    pub d_large_small: usize,
    pub kind: PairKind,
}

/// Cell sizes, the degree constants `d[i][j]` and the cell/pair taxonomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGraph {
    pub sizes: Vec<usize>,
    /// `d[i][i]` for every cell.
    pub diag: Vec<usize>,
    /// `d[i][j]` for ordered pairs `i != j` joined by at least one edge.
    pub off: BTreeMap<(usize, usize), usize>,
    pub cell_kind: Vec<CellKind>,
    /// Pairs with at least one edge, keyed by `(min id, max id)`. Missing
    /// pairs are [`PairKind::IsoEmpty`].
    pub pairs: BTreeMap<(usize, usize), PairInfo>,
}

impl CellGraph {
    pub fn num_cells(&self) -> usize {
        self.sizes.len()
    }

    pub fn d(&self, i: usize, j: usize) -> usize {
        if i == j {
            self.diag[i]
        } else {
            self.off.get(&(i, j)).copied().unwrap_or(0)
        }
    }

    pub fn pair_kind(&self, i: usize, j: usize) -> PairKind {
        self.pairs.get(&(i.min(j), i.max(j))).map_or(PairKind::IsoEmpty, |p| p.kind)
    }

    /// Anisotropic pairs in key order.
    pub fn anisotropic_pairs(&self) -> impl Iterator<Item = &PairInfo> {
        self.pairs.values().filter(|p| !p.kind.is_isotropic())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<_> = (0..self.num_cells())
            .map(|i| serde_json::json!({ "id": i, "size": self.sizes[i], "d": self.diag[i], "kind": self.cell_kind[i] }))
            .collect();
        let pairs: Vec<_> = self.pairs.values().collect();
        serde_json::json!({ "cells": cells, "pairs": pairs })
    }
}

/// Builds the cell graph of `g` over the equitable partition `p`.
pub fn build_cell_graph(g: &Graph, p: &Partition) -> Result<CellGraph, CellError> {
    if !is_equitable(g, p)? {
        return Err(CellError::NotEquitable);
    }
    let k = p.num_cells();
    let sizes: Vec<usize> = p.cells().iter().map(Vec::len).collect();
    let mut diag = vec![0; k];
    let mut off = BTreeMap::new();
    let mut count = vec![0usize; k];
    for (i, cell) in p.cells().iter().enumerate() {
        let rep = cell[0];
        for &w in g.neighbors(rep) {
            count[p.cell_of(w)] += 1;
        }
        for &w in g.neighbors(rep) {
            let j = p.cell_of(w);
            if count[j] == 0 {
                continue;
            }
            if i == j {
                diag[i] = count[j];
            } else {
                off.insert((i, j), count[j]);
            }
            count[j] = 0;
        }
    }
    let cell_kind = (0..k).map(|i| CellKind::classify(sizes[i], diag[i])).collect();
    let mut pairs = BTreeMap::new();
    for (&(i, j), _) in off.range(..) {
        if i > j {
            continue;
        }
        let (small, large) = if sizes[i] <= sizes[j] { (i, j) } else { (j, i) };
        let d_sl = off[&(small, large)];
        let d_ls = off[&(large, small)];
        let kind = if d_sl == sizes[large] {
            PairKind::IsoComplete
        } else if d_ls == 1 {
            PairKind::AnisoStars
        } else if d_ls + 1 == sizes[small] {
            PairKind::AnisoCoStars
        } else {
            PairKind::Other
        };
        pairs.insert((i, j), PairInfo { small, large, d_small_large: d_sl, d_large_small: d_ls, kind });
    }
    Ok(CellGraph { sizes, diag, off, cell_kind, pairs })
}

/// A rooted tree of cells with cell sizes. Node 0 is the root and nodes are
/// in BFS order, so every parent precedes its children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellTree {
    pub sizes: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    #[serde(skip)]
    pub children: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("anisotropic edges do not form a tree")]
    NotATree,
    #[error("cell size decreases from {parent_size} to {child_size} along a root-to-leaf path")]
    NotMonotone { parent_size: usize, child_size: usize },
    #[error("parent size {parent_size} does not divide child size {child_size}")]
    BadDivisibility { parent_size: usize, child_size: usize },
    #[error("malformed tree: {0}")]
    Malformed(String),
}

impl CellTree {
    /// Builds a tree from BFS-ordered parent links; checks that sizes are
    /// positive, non-decreasing from the root, and divisible along edges.
    pub fn new(sizes: Vec<usize>, parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        if sizes.is_empty() || sizes.len() != parent.len() {
            return Err(TreeError::Malformed("sizes and parents must be nonempty and equally long".into()));
        }
        if parent[0].is_some() || parent[1..].iter().enumerate().any(|(i, p)| !matches!(p, Some(q) if *q <= i)) {
            return Err(TreeError::Malformed("node 0 must be the root and parents must precede children".into()));
        }
        if sizes.contains(&0) {
            return Err(TreeError::Malformed("cell sizes must be positive".into()));
        }
        let mut children = vec![Vec::new(); sizes.len()];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                let (parent_size, child_size) = (sizes[p], sizes[v]);
                if child_size < parent_size {
                    return Err(TreeError::NotMonotone { parent_size, child_size });
                }
                if child_size % parent_size != 0 {
                    return Err(TreeError::BadDivisibility { parent_size, child_size });
                }
                children[p].push(v);
            }
        }
        Ok(CellTree { sizes, parent, children })
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Star fan-out `|child| / |parent|`; 1 for the root.
    pub fn multiplicity(&self, node: usize) -> usize {
        self.parent[node].map_or(1, |p| self.sizes[node] / self.sizes[p])
    }

    /// Total vertex count of the cells.
    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Children before parents.
    pub fn postorder(&self) -> impl Iterator<Item = usize> {
        (0..self.len()).rev()
    }
}

/// One anisotropic component, rooted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// Cell ids of the tree nodes; `cells[0]` is the root `R_i`.
    pub cells: Vec<usize>,
    pub tree: CellTree,
    pub heterogeneous: bool,
}

impl Component {
    pub fn root(&self) -> usize {
        self.cells[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnisotropicForest {
    /// Ordered by lowest cell id.
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("component {component}: {source}")]
    Tree {
        component: usize,
        #[source]
        source: TreeError,
    },
    #[error("component {component} has more than one heterogeneous cell")]
    MultipleHeterogeneous { component: usize },
}

/// Cell sets of the connected components of the anisotropic-edge graph,
/// each sorted, ordered by smallest cell id.
pub fn component_cells(cg: &CellGraph) -> Vec<Vec<usize>> {
    let k = cg.num_cells();
    let adj = aniso_adjacency(cg);
    let mut comp = vec![usize::MAX; k];
    let mut out = Vec::new();
    for start in 0..k {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            let c = members[i];
            for &d in &adj[c] {
                if comp[d] == usize::MAX {
                    comp[d] = id;
                    members.push(d);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

fn aniso_adjacency(cg: &CellGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); cg.num_cells()];
    for p in cg.anisotropic_pairs() {
        adj[p.small].push(p.large);
        adj[p.large].push(p.small);
    }
    adj
}

/// Roots the component with cell set `cells` at `root` and checks the tree
/// shape, monotone sizes and divisibility.
pub fn root_component(cg: &CellGraph, cells: &[usize], root: usize) -> Result<Component, TreeError> {
    let adj = aniso_adjacency(cg);
    let edges = cells.iter().map(|&c| adj[c].len()).sum::<usize>() / 2;
    root_component_with_adj(cg, &adj, cells, root, edges)
}

fn root_component_with_adj(
    cg: &CellGraph,
    adj: &[Vec<usize>],
    cells: &[usize],
    root: usize,
    edge_count: usize,
) -> Result<Component, TreeError> {
    if edge_count + 1 != cells.len() {
        return Err(TreeError::NotATree);
    }
    let mut order = vec![root];
    let mut parent_local = vec![None];
    let mut local: BTreeMap<usize, usize> = BTreeMap::new();
    local.insert(root, 0);
    let mut queue = VecDeque::from([root]);
    while let Some(c) = queue.pop_front() {
        let mut next: Vec<usize> = adj[c].iter().copied().filter(|d| !local.contains_key(d)).collect();
        next.sort_unstable();
        for d in next {
            local.insert(d, order.len());
            parent_local.push(Some(local[&c]));
            order.push(d);
            queue.push_back(d);
        }
    }
    if order.len() != cells.len() {
        return Err(TreeError::NotATree);
    }
    let sizes = order.iter().map(|&c| cg.sizes[c]).collect();
    let tree = CellTree::new(sizes, parent_local)?;
    let heterogeneous = cells.iter().any(|&c| !cg.cell_kind[c].is_homogeneous());
    Ok(Component { cells: order, tree, heterogeneous })
}

/// Preferred root: the heterogeneous cell if any, else a smallest cell
/// (lowest id on ties).
pub(crate) fn default_root(cg: &CellGraph, cells: &[usize]) -> usize {
    cells
        .iter()
        .copied()
        .find(|&c| !cg.cell_kind[c].is_homogeneous())
        .unwrap_or_else(|| min_size_cell(cg, cells))
}

pub(crate) fn min_size_cell(cg: &CellGraph, cells: &[usize]) -> usize {
    *cells.iter().min_by_key(|&&c| (cg.sizes[c], c)).expect("components are nonempty")
}

/// Splits the anisotropic edges into rooted trees.
pub fn anisotropic_components(cg: &CellGraph) -> Result<AnisotropicForest, ForestError> {
    let adj = aniso_adjacency(cg);
    let mut components = Vec::new();
    for (component, cells) in component_cells(cg).into_iter().enumerate() {
        let hetero = cells.iter().filter(|&&c| !cg.cell_kind[c].is_homogeneous()).count();
        if hetero > 1 {
            return Err(ForestError::MultipleHeterogeneous { component });
        }
        let root = default_root(cg, &cells);
        let edges = cells.iter().map(|&c| adj[c].len()).sum::<usize>() / 2;
        let rooted = root_component_with_adj(cg, &adj, &cells, root, edges)
            .map_err(|source| ForestError::Tree { component, source })?;
        components.push(rooted);
    }
    Ok(AnisotropicForest { components })
}

impl AnisotropicForest {
    pub fn to_json(&self) -> serde_json::Value {
        let comps: Vec<_> = self
            .components
            .iter()
            .map(|c| {
                let parent: Vec<Option<usize>> = c.tree.parent.iter().map(|p| p.map(|q| c.cells[q])).collect();
                let m: Vec<usize> = (0..c.tree.len()).map(|i| c.tree.multiplicity(i)).collect();
                serde_json::json!({
                    "root": c.root(),
                    "cells": c.cells,
                    "parent": parent,
                    "sizes": c.tree.sizes,
                    "multiplicity": m,
                    "heterogeneous": c.heterogeneous,
                })
            })
            .collect();
        serde_json::Value::Array(comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named, Family};
    use crate::refinement::stable_partition;

    fn cell_graph(g: &Graph) -> CellGraph {
        build_cell_graph(g, &stable_partition(g)).unwrap()
    }

    #[test]
    fn figure1_cell_graph() {
        let g = named(Family::Figure1).unwrap();
        let cg = cell_graph(&g);
        // Canonical cells: 0={c}, 1={v1,v4,v5,v8}, 2={v2,v3,v6,v7}, 3={v9,v10}.
        assert_eq!(cg.sizes, vec![1, 4, 4, 2]);
        assert_eq!(cg.cell_kind, vec![CellKind::Empty, CellKind::Empty, CellKind::Matching, CellKind::Empty]);
        assert_eq!(cg.pair_kind(1, 3), PairKind::AnisoStars);
        assert_eq!(cg.pairs[&(1, 3)].small, 3);
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)] {
            assert!(cg.pair_kind(i, j).is_isotropic(), "pair {i},{j}");
        }
        let forest = anisotropic_components(&cg).unwrap();
        assert_eq!(forest.components.len(), 3);
        let third = &forest.components[1];
        assert_eq!(third.cells, vec![3, 1]);
        assert_eq!(third.tree.multiplicity(1), 2);
        assert_eq!(forest.components[0].cells, vec![0]);
        assert_eq!(forest.components[2].cells, vec![2]);
        assert!(forest.components[2].heterogeneous);
    }

    #[test]
    fn double_counting_identity() {
        let g = named(Family::Figure1).unwrap();
        let cg = cell_graph(&g);
        for (&(i, j), &d) in &cg.off {
            assert_eq!(cg.sizes[i] * d, cg.sizes[j] * cg.d(j, i));
        }
        for i in 0..cg.num_cells() {
            assert_eq!(cg.diag[i] * cg.sizes[i] % 2, 0);
        }
    }

    #[test]
    fn single_cell_kinds() {
        assert_eq!(cell_graph(&named(Family::Cycle(5)).unwrap()).cell_kind, vec![CellKind::FiveCycle]);
        assert_eq!(cell_graph(&named(Family::CompleteBipartite(3, 3)).unwrap()).cell_kind, vec![CellKind::Other]);
        assert_eq!(cell_graph(&named(Family::Complete(2)).unwrap()).cell_kind, vec![CellKind::Complete]);
        assert_eq!(cell_graph(&named(Family::Matching(2)).unwrap()).cell_kind, vec![CellKind::Matching]);
        assert_eq!(cell_graph(&named(Family::Cycle(4)).unwrap()).cell_kind, vec![CellKind::CoMatching]);
        let k4 = cell_graph(&named(Family::Complete(4)).unwrap());
        let forest = anisotropic_components(&k4).unwrap();
        assert_eq!(forest.components.len(), 1);
        assert_eq!(forest.components[0].cells, vec![0]);
    }

    #[test]
    fn rejects_non_equitable() {
        let p3 = named(Family::Path(3)).unwrap();
        assert_eq!(build_cell_graph(&p3, &Partition::unit(3)), Err(CellError::NotEquitable));
    }

    #[test]
    fn cell_tree_checks() {
        let t = CellTree::new(vec![5, 10, 15, 5, 30, 20, 15], vec![None, Some(0), Some(0), Some(0), Some(1), Some(1), Some(3)])
            .unwrap();
        let m: Vec<_> = (0..7).map(|i| t.multiplicity(i)).collect();
        assert_eq!(m, vec![1, 2, 3, 1, 3, 2, 3]);
        assert_eq!(t.vertex_count(), 100);
        assert_eq!(
            CellTree::new(vec![4, 2], vec![None, Some(0)]),
            Err(TreeError::NotMonotone { parent_size: 4, child_size: 2 })
        );
        assert_eq!(
            CellTree::new(vec![2, 3], vec![None, Some(0)]),
            Err(TreeError::BadDivisibility { parent_size: 2, child_size: 3 })
        );
        assert!(CellTree::new(vec![2, 4], vec![Some(1), None]).is_err());
    }
}
