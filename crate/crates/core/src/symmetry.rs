//! Distinguishing and fixing numbers of amenable graphs.
//!
//! Each anisotropic component, after normalizing its induced subgraph
//! without changing its cell-preserving automorphisms, is a jellyfish: a
//! head on the root cell (complete graph, five-cycle or co-matching) with
//! one tree-shaped leg hanging off every head vertex, all legs
//! cell-isomorphic. The leg shape is the component's cell tree, with every
//! vertex of a cell `X` having `|Y|/|X|` children in each child cell `Y`.
//! Nothing here materializes that graph: the head is determined by the root
//! cell's kind and size, and the leg invariants are computed bottom-up on
//! the cell tree.
//!
//! The graph's distinguishing number is the maximum over components and its
//! fixing number is the sum.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::amenability::{check_amenable, AmenabilityVerdict, Outcome};
use crate::cell_structure::{CellGraph, CellKind, CellTree, Component};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("graph is not amenable")]
    NotAmenable(Box<AmenabilityVerdict>),
    #[error("root cell {cell} has kind {kind:?}, which cannot head a component")]
    UnsupportedRootKind { cell: usize, kind: CellKind },
    #[error("saturation cap {cap} must exceed the component's {vertices} vertices")]
    BadCap { cap: u64, vertices: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// The graph induced on the root cell after normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "param", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HeadKind {
    /// `K_s`.
    Complete(usize),
    FiveCycle,
    /// Complement of `rK2`, `r >= 2`.
    CoMatching(usize),
}

impl HeadKind {
    pub fn size(self) -> usize {
        match self {
            HeadKind::Complete(s) => s,
            HeadKind::FiveCycle => 5,
            HeadKind::CoMatching(r) => 2 * r,
        }
    }
}

/// `(D(H), Fix(H))` for a head.
pub fn head_invariants(head: HeadKind) -> (usize, usize) {
    match head {
        HeadKind::Complete(s) => (s, s.saturating_sub(1)),
        HeadKind::FiveCycle => (3, 2),
        HeadKind::CoMatching(r) => (min_c_binom(r as u64) as usize, r),
    }
}

/// Head of a component: empty and complete roots become complete graphs,
/// matchings become co-matchings.
pub fn head_of_component(cg: &CellGraph, component: &Component) -> Result<HeadKind, SymmetryError> {
    let cell = component.root();
    let size = cg.sizes[cell];
    match cg.cell_kind[cell] {
        CellKind::Empty | CellKind::Complete => Ok(HeadKind::Complete(size)),
        CellKind::FiveCycle => Ok(HeadKind::FiveCycle),
        CellKind::Matching | CellKind::CoMatching => Ok(HeadKind::CoMatching(size / 2)),
        kind @ CellKind::Other => Err(SymmetryError::UnsupportedRootKind { cell, kind }),
    }
}

/// Least `c` with `c(c-1)/2 >= r`.
pub fn min_c_binom(r: u64) -> u64 {
    assert!(r >= 1, "min_c_binom needs r >= 1");
    let pairs = |c: u64| c as u128 * (c as u128 - 1) / 2;
    // c ~ (1 + sqrt(1 + 8r)) / 2
    let mut c = (1 + (1 + 8 * r as u128).isqrt() as u64).div_ceil(2).max(2);
    while pairs(c) < r as u128 {
        c += 1;
    }
    while c > 2 && pairs(c - 1) >= r as u128 {
        c -= 1;
    }
    c
}

/// A count clamped at `cap`. When `saturated`, the true value is at least
/// `cap` and `value == cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SaturatingCount {
    pub value: u64,
    pub cap: u64,
    pub saturated: bool,
}

impl SaturatingCount {
    fn new(value: u128, cap: u64) -> Self {
        if value >= cap as u128 {
            SaturatingCount { value: cap, cap, saturated: true }
        } else {
            SaturatingCount { value: value as u64, cap, saturated: false }
        }
    }

    /// Whether the true count is at least `threshold` (`threshold <= cap`).
    pub fn at_least(&self, threshold: u64) -> bool {
        self.saturated || self.value >= threshold
    }

    fn mul(self, other: SaturatingCount) -> Self {
        if self.value == 0 || other.value == 0 {
            return SaturatingCount::new(0, self.cap);
        }
        if self.saturated || other.saturated {
            return SaturatingCount::new(self.cap as u128, self.cap);
        }
        SaturatingCount::new(self.value as u128 * other.value as u128, self.cap)
    }

    /// `binom(self, k)` for `1 <= k < cap`. A saturated input stays
    /// saturated because `binom(f, k) >= f` whenever `1 <= k < f`.
    fn choose(self, k: u64) -> Self {
        debug_assert!(k >= 1 && k < self.cap);
        if self.saturated {
            return self;
        }
        let f = self.value;
        if k > f {
            return SaturatingCount::new(0, self.cap);
        }
        let k = k.min(f - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (f - i) as u128 / (i + 1) as u128;
            // Partial binomials grow up to the middle, so crossing the cap is final.
            if acc >= self.cap as u128 {
                return SaturatingCount::new(acc, self.cap);
            }
        }
        SaturatingCount::new(acc, self.cap)
    }
}

/// Number of pairwise inequivalent cell-distinguishing labelings of one leg
/// with at most `c` colors, clamped at `cap`. Needs `cap` larger than the
/// tree's total vertex count so every star fan-out is below the cap.
pub fn leg_dist_count(tree: &CellTree, c: u64, cap: u64) -> Result<SaturatingCount, SymmetryError> {
    let vertices = tree.vertex_count();
    if cap as u128 <= vertices as u128 {
        return Err(SymmetryError::BadCap { cap, vertices });
    }
    let leaf = SaturatingCount::new(c as u128, cap);
    let mut value = vec![leaf; tree.len()];
    for x in tree.postorder() {
        let mut acc = leaf;
        for &y in &tree.children[x] {
            acc = acc.mul(value[y].choose(tree.multiplicity(y) as u64));
        }
        value[x] = acc;
    }
    Ok(value[0])
}

/// Exact big-integer version of [`leg_dist_count`].
pub fn leg_dist_count_exact(tree: &CellTree, c: u64) -> BigUint {
    let mut value: Vec<BigUint> = vec![BigUint::zero(); tree.len()];
    for x in tree.postorder() {
        let mut acc = BigUint::from(c);
        for &y in &tree.children[x] {
            acc *= binomial(&value[y], tree.multiplicity(y) as u64);
        }
        value[x] = acc;
    }
    value.swap_remove(0)
}

fn binomial(f: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *f {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (f - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Fixing number of one leg relative to the cells.
pub fn leg_fix(tree: &CellTree) -> usize {
    let mut fix = vec![0usize; tree.len()];
    for x in tree.postorder() {
        fix[x] = tree.children[x]
            .iter()
            .map(|&y| {
                let m = tree.multiplicity(y);
                if fix[y] == 0 {
                    m - 1
                } else {
                    m * fix[y]
                }
            })
            .sum();
    }
    fix[0]
}

/// How leg counts are evaluated during the search for `D(G_i, P_G)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CountMode {
    /// Clamp at `d* + n_i + 1`.
    #[default]
    Saturating,
    /// Arbitrary precision.
    Exact,
}

fn leg_at_least(tree: &CellTree, c: u64, threshold: u64, mode: CountMode) -> Result<bool, SymmetryError> {
    Ok(match mode {
        CountMode::Saturating => {
            let cap = threshold + tree.vertex_count() as u64 + 1;
            leg_dist_count(tree, c, cap)?.at_least(threshold)
        }
        CountMode::Exact => leg_dist_count_exact(tree, c) >= BigUint::from(threshold),
    })
}

/// `D(G_i, P_G)`: least `c` whose leg count reaches the head's
/// distinguishing number, by binary search on `[1, n_i]`.
pub fn component_dist(component: &Component, cg: &CellGraph) -> Result<usize, SymmetryError> {
    component_dist_with(component, cg, CountMode::Saturating)
}

pub fn component_dist_with(component: &Component, cg: &CellGraph, mode: CountMode) -> Result<usize, SymmetryError> {
    let (d_head, _) = head_invariants(head_of_component(cg, component)?);
    let tree = &component.tree;
    let n_i = tree.vertex_count() as u64;
    let threshold = d_head as u64;
    if !leg_at_least(tree, n_i, threshold, mode)? {
        return Err(SymmetryError::Internal(format!("{n_i} colors do not suffice for a component of {n_i} vertices")));
    }
    let (mut lo, mut hi) = (1u64, n_i);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if leg_at_least(tree, mid, threshold, mode)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo as usize)
}

/// `Fix(G_i, P_G)`: the head's fixing number when legs are rigid, else one
/// leg fixing set per head vertex.
pub fn component_fix(component: &Component, cg: &CellGraph) -> Result<usize, SymmetryError> {
    let head = head_of_component(cg, component)?;
    let legs = leg_fix(&component.tree);
    Ok(if legs == 0 { head_invariants(head).1 } else { head.size() * legs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub root_cell: usize,
    pub cells: Vec<usize>,
    pub vertex_count: usize,
    pub head: HeadKind,
    pub d_head: usize,
    pub fix_head: usize,
    pub leg_fix: usize,
    /// `D(G_i, P_G)`.
    pub dist: usize,
    /// `Fix(G_i, P_G)`.
    pub fix: usize,
    /// Leg count at `c = dist`, as a decimal string; exact only in
    /// [`CountMode::Exact`].
    pub leg_count: String,
    pub leg_count_saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub components: Vec<ComponentReport>,
    pub dist_number: usize,
    pub fix_number: usize,
}

/// Runs recognition and evaluates both invariants on every component.
pub fn analyze(g: &Graph, mode: CountMode) -> Result<SymmetryReport, SymmetryError> {
    let verdict = check_amenable(g);
    let forest = match &verdict.outcome {
        Outcome::Amenable(forest) => forest,
        Outcome::NotAmenable(_) => return Err(SymmetryError::NotAmenable(Box::new(verdict))),
    };
    let cg = &verdict.cell_graph;
    let mut components = Vec::with_capacity(forest.components.len());
    for component in &forest.components {
        let head = head_of_component(cg, component)?;
        let (d_head, fix_head) = head_invariants(head);
        let dist = component_dist_with(component, cg, mode)?;
        let leg_fix = leg_fix(&component.tree);
        let fix = component_fix(component, cg)?;
        let (leg_count, leg_count_saturated) = match mode {
            CountMode::Exact => (leg_dist_count_exact(&component.tree, dist as u64).to_string(), false),
            CountMode::Saturating => {
                let cap = d_head as u64 + component.tree.vertex_count() as u64 + 1;
                let count = leg_dist_count(&component.tree, dist as u64, cap)?;
                (count.value.to_string(), count.saturated)
            }
        };
        components.push(ComponentReport {
            root_cell: component.root(),
            cells: component.cells.clone(),
            vertex_count: component.tree.vertex_count(),
            head,
            d_head,
            fix_head,
            leg_fix,
            dist,
            fix,
            leg_count,
            leg_count_saturated,
        });
    }
    let dist_number = components.iter().map(|c| c.dist).max().unwrap_or(0);
    let fix_number = components.iter().map(|c| c.fix).sum();
    Ok(SymmetryReport { components, dist_number, fix_number })
}

/// `D(G)` for an amenable graph.
pub fn dist_number(g: &Graph) -> Result<usize, SymmetryError> {
    analyze(g, CountMode::Saturating).map(|r| r.dist_number)
}

/// `Fix(G)` for an amenable graph.
pub fn fix_number(g: &Graph) -> Result<usize, SymmetryError> {
    analyze(g, CountMode::Saturating).map(|r| r.fix_number)
}

/// Exact leg count as `u128`, if it fits. Test convenience.
pub fn leg_dist_count_u128(tree: &CellTree, c: u64) -> Option<u128> {
    leg_dist_count_exact(tree, c).to_u128()
}
