//! Recognition of amenable graphs: graphs for which color refinement is a
//! complete isomorphism test. A graph is amenable iff its stable partition
//! satisfies four conditions:
//!
//! * (A) every cell induces an empty, complete, matching, co-matching or
//!   five-cycle graph;
//! * (B) every pair of cells induces an empty or complete bipartite graph,
//!   a union of stars centered on the smaller cell, or the bipartite
//!   complement of one;
//! * (C) every anisotropic component is a tree whose cell sizes do not
//!   decrease away from a smallest cell;
//! * (D) every anisotropic component has at most one heterogeneous cell and
//!   that cell is a smallest one.

use serde::Serialize;

use crate::cell_structure::{
    anisotropic_components, build_cell_graph, component_cells, min_size_cell, root_component, AnisotropicForest,
    CellGraph, CellKind, PairKind, TreeError,
};
use crate::graph::Graph;
use crate::refinement::{cr_iso_test, stable_partition, CrOutcome, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum Violation {
    #[serde(rename = "A")]
    CondA { cell: usize, kind: CellKind },
    #[serde(rename = "B")]
    CondB { cells: (usize, usize), d: (usize, usize) },
    #[serde(rename = "C")]
    CondC {
        component: usize,
        #[serde(serialize_with = "display")]
        reason: TreeError,
    },
    #[serde(rename = "D")]
    CondD { component: usize, reason: DReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DReason {
    MultipleHeterogeneous,
    HeterogeneousNotSmallest,
}

fn display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Amenable(AnisotropicForest),
    NotAmenable(Violation),
}

/// Verdict plus the stable partition and cell graph it was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmenabilityVerdict {
    pub partition: Partition,
    pub cell_graph: CellGraph,
    pub outcome: Outcome,
}

impl AmenabilityVerdict {
    pub fn is_amenable(&self) -> bool {
        matches!(self.outcome, Outcome::Amenable(_))
    }

    pub fn forest(&self) -> Option<&AnisotropicForest> {
        match &self.outcome {
            Outcome::Amenable(f) => Some(f),
            Outcome::NotAmenable(_) => None,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match &self.outcome {
            Outcome::Amenable(_) => None,
            Outcome::NotAmenable(v) => Some(v),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.outcome {
            Outcome::Amenable(f) => serde_json::json!({ "amenable": true, "components": f.to_json() }),
            Outcome::NotAmenable(v) => serde_json::json!({ "amenable": false, "failure": v }),
        }
    }
}

/// Checks (A)–(D) in order and reports the first violation.
pub fn check_amenable(g: &Graph) -> AmenabilityVerdict {
    let partition = stable_partition(g);
    let cell_graph = build_cell_graph(g, &partition).expect("stable partitions are equitable");
    let outcome = match violations(&cell_graph, true).into_iter().next() {
        Some(v) => Outcome::NotAmenable(v),
        None => Outcome::Amenable(
            anisotropic_components(&cell_graph).expect("conditions (A)-(D) imply a well-formed forest"),
        ),
    };
    AmenabilityVerdict { partition, cell_graph, outcome }
}

/// Every violation of (A)–(D), in reporting order. Debugging aid.
pub fn all_violations(g: &Graph) -> Vec<Violation> {
    let p = stable_partition(g);
    let cg = build_cell_graph(g, &p).expect("stable partitions are equitable");
    violations(&cg, false)
}

fn violations(cg: &CellGraph, first_only: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    macro_rules! push {
        ($v:expr) => {{
            out.push($v);
            if first_only {
                return out;
            }
        }};
    }
    for (cell, &kind) in cg.cell_kind.iter().enumerate() {
        if kind == CellKind::Other {
            push!(Violation::CondA { cell, kind });
        }
    }
    for (&cells, info) in &cg.pairs {
        if info.kind == PairKind::Other {
            push!(Violation::CondB { cells, d: (cg.d(cells.0, cells.1), cg.d(cells.1, cells.0)) });
        }
    }
    let components = component_cells(cg);
    for (component, cells) in components.iter().enumerate() {
        let smallest = min_size_cell(cg, cells);
        let root = cells
            .iter()
            .copied()
            .find(|&c| !cg.cell_kind[c].is_homogeneous() && cg.sizes[c] == cg.sizes[smallest])
            .unwrap_or(smallest);
        if let Err(reason) = root_component(cg, cells, root) {
            push!(Violation::CondC { component, reason });
        }
    }
    for (component, cells) in components.iter().enumerate() {
        let hetero: Vec<usize> = cells.iter().copied().filter(|&c| !cg.cell_kind[c].is_homogeneous()).collect();
        let smallest = cg.sizes[min_size_cell(cg, cells)];
        if hetero.len() > 1 {
            push!(Violation::CondD { component, reason: DReason::MultipleHeterogeneous });
        } else if hetero.first().is_some_and(|&c| cg.sizes[c] != smallest) {
            push!(Violation::CondD { component, reason: DReason::HeterogeneousNotSmallest });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IsoAnswer {
    Isomorphic,
    NotIsomorphic,
    /// Color refinement cannot tell the graphs apart, but neither is
    /// amenable, so this is not a proof of isomorphism.
    HeuristicEquivalent,
}

/// Isomorphism test that is exact whenever `g` or `h` is amenable.
pub fn amenable_iso(g: &Graph, h: &Graph) -> IsoAnswer {
    match cr_iso_test(g, h).outcome {
        CrOutcome::Distinguished => IsoAnswer::NotIsomorphic,
        CrOutcome::CrEquivalent if check_amenable(g).is_amenable() || check_amenable(h).is_amenable() => {
            IsoAnswer::Isomorphic
        }
        CrOutcome::CrEquivalent => IsoAnswer::HeuristicEquivalent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named, Family};

    #[test]
    fn figure1_is_amenable() {
        let v = check_amenable(&named(Family::Figure1).unwrap());
        assert!(v.is_amenable());
        assert_eq!(v.forest().unwrap().components.len(), 3);
        assert_eq!(v.to_json()["amenable"], true);
    }

    #[test]
    fn c6_fails_condition_a() {
        let v = check_amenable(&named(Family::Cycle(6)).unwrap());
        assert_eq!(v.violation(), Some(&Violation::CondA { cell: 0, kind: CellKind::Other }));
        let json = v.to_json();
        assert_eq!(json["failure"]["condition"], "A");
    }

    #[test]
    fn complete_bipartite_fails_condition_a() {
        let v = check_amenable(&named(Family::CompleteBipartite(3, 3)).unwrap());
        assert!(matches!(v.violation(), Some(Violation::CondA { .. })));
        // K_{1,3} splits into center and leaves, both homogeneous.
        assert!(check_amenable(&named(Family::CompleteBipartite(1, 3)).unwrap()).is_amenable());
    }

    #[test]
    fn condition_b_failure() {
        // Hub 8 over {0,1,2,3}; {0..3} and {4..7} span an 8-cycle, so the
        // pair is 2-regular on both sides: neither isotropic nor stars.
        let edges = [(0, 4), (0, 5), (1, 5), (1, 6), (2, 6), (2, 7), (3, 7), (3, 4), (8, 0), (8, 1), (8, 2), (8, 3)];
        let g = Graph::from_edge_list(9, &edges).unwrap();
        let v = check_amenable(&g);
        assert!(matches!(v.violation(), Some(Violation::CondB { .. })), "{:?}", v.violation());
        assert!(!all_violations(&g).is_empty());
    }

    #[test]
    fn condition_c_failure() {
        // Cells {0,1}, {2,3}, {4,5} joined by matchings into a cycle of
        // cells; 1, 2 and 3 pendants per vertex keep the cells apart.
        let mut edges = vec![(0, 2), (1, 3), (2, 4), (3, 5), (4, 1), (5, 0)];
        let mut next = 6;
        for (cell, pendants) in [([0, 1], 1), ([2, 3], 2), ([4, 5], 3)] {
            for v in cell {
                for _ in 0..pendants {
                    edges.push((v, next));
                    next += 1;
                }
            }
        }
        let g = Graph::from_edge_list(next, &edges).unwrap();
        let v = check_amenable(&g);
        assert!(matches!(v.violation(), Some(Violation::CondC { reason: TreeError::NotATree, .. })), "{:?}", v.violation());
    }

    #[test]
    fn condition_d_failure() {
        // Two heterogeneous cells (2K2 and 2K2) joined by a perfect matching,
        // made distinguishable by one vs two pendants per vertex.
        let mut edges = vec![(0, 1), (2, 3), (4, 5), (6, 7), (0, 4), (1, 5), (2, 6), (3, 7)];
        let mut next = 8;
        for (cells, pendants) in [([0, 1, 2, 3], 1), ([4, 5, 6, 7], 2)] {
            for v in cells {
                for _ in 0..pendants {
                    edges.push((v, next));
                    next += 1;
                }
            }
        }
        let g = Graph::from_edge_list(next, &edges).unwrap();
        let v = check_amenable(&g);
        assert!(
            matches!(v.violation(), Some(Violation::CondD { reason: DReason::MultipleHeterogeneous, .. })),
            "{:?}",
            v.violation()
        );
    }

    #[test]
    fn iso_answers() {
        let fig1 = named(Family::Figure1).unwrap();
        let perm: Vec<usize> = (0..11).rev().collect();
        assert_eq!(amenable_iso(&fig1, &fig1.relabel(&perm)), IsoAnswer::Isomorphic);
        let c6 = named(Family::Cycle(6)).unwrap();
        let k3 = named(Family::Complete(3)).unwrap();
        assert_eq!(amenable_iso(&c6, &k3.disjoint_union(&k3).0), IsoAnswer::HeuristicEquivalent);
        let p4 = named(Family::Path(4)).unwrap();
        let star = named(Family::CompleteBipartite(1, 3)).unwrap();
        assert_eq!(amenable_iso(&p4, &star), IsoAnswer::NotIsomorphic);
    }
}
