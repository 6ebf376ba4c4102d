//! Named test graphs and a synthesizer for amenable graphs described by
//! their anisotropic cell trees.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::refinement::{stable_partition, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bad spec: {0}")]
    BadSpec(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("no valid instance after {attempts} attempts")]
    BudgetExhausted { attempts: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    CompleteBipartite(usize, usize),
    /// `r` disjoint edges.
    Matching(usize),
    Empty(usize),
    /// `K_{1,k}`.
    Star(usize),
    /// The 11-vertex example: center 0 joined to 1..=8, with 9 adjacent to
    /// 1 and 8, 10 adjacent to 4 and 5, and edges 2-3, 6-7.
    Figure1,
    /// Five-cycle head; each head vertex carries a pendant leaf and a child
    /// with two leaves.
    JellyfishFig3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Complete(n) => write!(f, "complete:{n}"),
            Family::Path(n) => write!(f, "path:{n}"),
            Family::Cycle(n) => write!(f, "cycle:{n}"),
            Family::CompleteBipartite(a, b) => write!(f, "bipartite:{a},{b}"),
            Family::Matching(r) => write!(f, "matching:{r}"),
            Family::Empty(n) => write!(f, "empty:{n}"),
            Family::Star(k) => write!(f, "star:{k}"),
            Family::Figure1 => write!(f, "figure1"),
            Family::JellyfishFig3 => write!(f, "jellyfish"),
        }
    }
}

impl FromStr for Family {
    type Err = GenError;

    /// Accepts `name` or `name:a[,b]`, e.g. `complete:5`, `bipartite:3,3`,
    /// `figure1`, `jellyfish`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse().map_err(|_| GenError::BadParams(format!("bad number {a:?}"))))
                .collect::<Result<_, _>>()?
        };
        let one = || match nums[..] {
            [a] => Ok(a),
            _ => Err(GenError::BadParams(format!("{name} takes one parameter"))),
        };
        Ok(match name.to_ascii_lowercase().as_str() {
            "complete" | "k" => Family::Complete(one()?),
            "path" | "p" => Family::Path(one()?),
            "cycle" | "c" => Family::Cycle(one()?),
            "matching" | "rk2" => Family::Matching(one()?),
            "empty" => Family::Empty(one()?),
            "star" => Family::Star(one()?),
            "bipartite" | "kab" => match nums[..] {
                [a, b] => Family::CompleteBipartite(a, b),
                _ => return Err(GenError::BadParams("bipartite takes two parameters".into())),
            },
            "figure1" | "fig1" => Family::Figure1,
            "jellyfish" | "jellyfish_fig3" | "fig3" => Family::JellyfishFig3,
            _ => return Err(GenError::BadParams(format!("unknown family {name:?}"))),
        })
    }
}

pub fn named(family: Family) -> Result<Graph, GenError> {
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let n = match family {
        Family::Complete(n) => {
            edges.extend((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))));
            n
        }
        Family::Path(n) => {
            edges.extend((1..n).map(|v| (v - 1, v)));
            n
        }
        Family::Cycle(n) => {
            if n < 3 {
                return Err(GenError::BadParams(format!("cycle needs at least 3 vertices, got {n}")));
            }
            edges.extend((0..n).map(|v| (v, (v + 1) % n)));
            n
        }
        Family::CompleteBipartite(a, b) => {
            edges.extend((0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))));
            a + b
        }
        Family::Matching(r) => {
            edges.extend((0..r).map(|i| (2 * i, 2 * i + 1)));
            2 * r
        }
        Family::Empty(n) => n,
        Family::Star(k) => {
            edges.extend((1..=k).map(|v| (0, v)));
            k + 1
        }
        Family::Figure1 => {
            edges.extend((1..=8).map(|v| (0, v)));
            edges.extend([(1, 9), (8, 9), (4, 10), (5, 10), (2, 3), (6, 7)]);
            11
        }
        Family::JellyfishFig3 => {
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, 5 + i));
                edges.push((i, 10 + i));
                edges.push((10 + i, 15 + 2 * i));
                edges.push((10 + i, 16 + 2 * i));
            }
            25
        }
    };
    Graph::from_edge_list(n, &edges).map_err(|e| GenError::BadParams(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HeadRequest {
    Complete,
    Empty,
    FiveCycle,
    Matching,
    CoMatching,
}

/// A non-root cell and its subtree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<NodeSpec>,
    /// Cell induces a clique instead of an independent set.
    #[serde(default, skip_serializing_if = "is_false")]
    pub complete: bool,
    /// Join to the parent by the bipartite complement of the stars.
    #[serde(default, skip_serializing_if = "is_false")]
    pub co_stars: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl NodeSpec {
    pub fn leaf(size: usize) -> Self {
        NodeSpec { size, children: Vec::new(), complete: false, co_stars: false }
    }

    pub fn with_children(size: usize, children: Vec<NodeSpec>) -> Self {
        NodeSpec { size, children, complete: false, co_stars: false }
    }

    fn vertex_count(&self) -> usize {
        self.size + self.children.iter().map(NodeSpec::vertex_count).sum::<usize>()
    }

    /// What a single vertex of this cell looks like from its parent:
    /// equal keys on sibling cells make them indistinguishable.
    fn vertex_key(&self) -> String {
        let mut kids: Vec<String> =
            self.children.iter().map(|c| format!("{}x{}", c.size / self.size, c.vertex_key())).collect();
        kids.sort();
        format!("[{}{}|{}]", u8::from(self.complete), u8::from(self.co_stars), kids.concat())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub head: HeadRequest,
    pub root_size: usize,
    /// Children of the root cell.
    #[serde(default)]
    pub tree: Vec<NodeSpec>,
}

impl ComponentSpec {
    pub fn single(head: HeadRequest, root_size: usize) -> Self {
        ComponentSpec { head, root_size, tree: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.root_size + self.tree.iter().map(NodeSpec::vertex_count).sum::<usize>()
    }

    pub fn cell_count(&self) -> usize {
        fn count(n: &NodeSpec) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        1 + self.tree.iter().map(count).sum::<usize>()
    }

    /// Cell sizes in preorder and parent links, the same order used by
    /// `CellRef::cell`.
    pub fn cell_tree(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut sizes = vec![self.root_size];
        let mut parent = vec![None];
        fn walk(node: &NodeSpec, p: usize, sizes: &mut Vec<usize>, parent: &mut Vec<Option<usize>>) {
            let id = sizes.len();
            sizes.push(node.size);
            parent.push(Some(p));
            for c in &node.children {
                walk(c, id, sizes, parent);
            }
        }
        for c in &self.tree {
            walk(c, 0, &mut sizes, &mut parent);
        }
        (sizes, parent)
    }

    /// Canonical description of the component up to isomorphism of its
    /// spec (head, sizes, flags).
    pub fn shape_key(&self) -> String {
        let mut kids: Vec<String> =
            self.tree.iter().map(|c| format!("{}x{}", c.size / self.root_size, c.vertex_key())).collect();
        kids.sort();
        format!("{:?}{}({})", self.head, self.root_size, kids.concat())
    }

    fn check(&self) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::BadSpec(m));
        match (self.head, self.root_size) {
            (_, 0) => return bad("root size must be positive".into()),
            (HeadRequest::FiveCycle, s) if s != 5 => return bad(format!("FIVE_CYCLE root needs size 5, got {s}")),
            (HeadRequest::Matching | HeadRequest::CoMatching, s) if s < 4 || s % 2 == 1 => {
                return bad(format!("{:?} root needs even size >= 4, got {s}", self.head))
            }
            _ => {}
        }
        fn node(n: &NodeSpec, parent: usize) -> Result<(), GenError> {
            if n.size < parent || !n.size.is_multiple_of(parent) {
                return Err(GenError::BadSpec(format!("child size {} is not a multiple of parent size {parent}", n.size)));
            }
            n.children.iter().try_for_each(|c| node(c, n.size))
        }
        self.tree.iter().try_for_each(|c| node(c, self.root_size))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Join {
    Empty,
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRef {
    pub component: usize,
    /// Preorder index within the component; 0 is the root.
    pub cell: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wire {
    pub a: CellRef,
    pub b: CellRef,
    pub join: Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphSpec {
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub wiring: Vec<Wire>,
}

impl GraphSpec {
    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(ComponentSpec::vertex_count).sum()
    }

    pub fn from_json(text: &str) -> Result<Self, GenError> {
        serde_json::from_str(text).map_err(|e| GenError::BadSpec(e.to_string()))
    }
}

/// Sizes 5; 10, 15, 5; 30, 20; 15 under a `K_5` head. The 20-cell is a
/// clique so that it does not merge with its leaf sibling.
pub fn figure5_spec() -> GraphSpec {
    let mut y2 = NodeSpec::leaf(20);
    y2.complete = true;
    let tree = vec![
        NodeSpec::with_children(10, vec![NodeSpec::leaf(30), y2]),
        NodeSpec::leaf(15),
        NodeSpec::with_children(5, vec![NodeSpec::leaf(15)]),
    ];
    GraphSpec { components: vec![ComponentSpec { head: HeadRequest::Complete, root_size: 5, tree }], wiring: Vec::new() }
}

pub fn jellyfish_fig3_spec() -> GraphSpec {
    let tree = vec![NodeSpec::leaf(5), NodeSpec::with_children(5, vec![NodeSpec::leaf(10)])];
    GraphSpec { components: vec![ComponentSpec { head: HeadRequest::FiveCycle, root_size: 5, tree }], wiring: Vec::new() }
}

/// Builds the graph described by `spec` with seeded star assignments and a
/// seeded global relabeling, plus the cells the spec intends.
pub fn generate(spec: &GraphSpec, seed: u64) -> Result<(Graph, Partition), GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<Vec<Vec<Vertex>>> = Vec::with_capacity(spec.components.len());
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut next = 0;
    let mut take = |k: usize| {
        next += k;
        (next - k..next).collect::<Vec<_>>()
    };
    for comp in &spec.components {
        comp.check()?;
        let root = take(comp.root_size);
        let s = root.len();
        match comp.head {
            HeadRequest::Empty => {}
            HeadRequest::Complete => clique(&root, &mut edges),
            HeadRequest::FiveCycle => edges.extend((0..5).map(|i| (root[i], root[(i + 1) % 5]))),
            HeadRequest::Matching => edges.extend((0..s / 2).map(|i| (root[2 * i], root[2 * i + 1]))),
            HeadRequest::CoMatching => {
                for i in 0..s {
                    for j in i + 1..s {
                        if !(i % 2 == 0 && j == i + 1) {
                            edges.push((root[i], root[j]));
                        }
                    }
                }
            }
        }
        let mut comp_cells = vec![root];
        fn grow(
            node: &NodeSpec,
            parent: usize,
            cells: &mut Vec<Vec<Vertex>>,
            edges: &mut Vec<(Vertex, Vertex)>,
            take: &mut dyn FnMut(usize) -> Vec<Vertex>,
            rng: &mut ChaCha8Rng,
        ) {
            let mut members = take(node.size);
            if node.complete {
                clique(&members, edges);
            }
            let id = cells.len();
            cells.push(members.clone());
            let up = &cells[parent];
            let m = node.size / up.len();
            members.shuffle(rng);
            for (i, &p) in up.iter().enumerate() {
                let block = i * m..(i + 1) * m;
                for (j, &v) in members.iter().enumerate() {
                    if block.contains(&j) != node.co_stars {
                        edges.push((p, v));
                    }
                }
            }
            for c in &node.children {
                grow(c, id, cells, edges, take, rng);
            }
        }
        for child in &comp.tree {
            grow(child, 0, &mut comp_cells, &mut edges, &mut take, &mut rng);
        }
        cells.push(comp_cells);
    }
    for w in &spec.wiring {
        let lookup = |r: CellRef| {
            cells
                .get(r.component)
                .and_then(|c| c.get(r.cell))
                .ok_or_else(|| GenError::BadSpec(format!("wire endpoint {r:?} does not exist")))
        };
        let (a, b) = (lookup(w.a)?, lookup(w.b)?);
        if w.a == w.b {
            return Err(GenError::BadSpec("wire joins a cell to itself".into()));
        }
        if w.join == Join::Complete {
            edges.extend(a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v))));
        }
    }
    let n = next;
    let mut relabel: Vec<Vertex> = (0..n).collect();
    relabel.shuffle(&mut rng);
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (relabel[u], relabel[v])).collect();
    let (graph, report) = Graph::from_edge_list_with_report(n, &edges).map_err(|e| GenError::BadSpec(e.to_string()))?;
    if report.duplicate_edges > 0 {
        return Err(GenError::BadSpec("wiring overlaps existing edges".into()));
    }
    let all_cells = cells.into_iter().flatten().map(|c| c.into_iter().map(|v| relabel[v]).collect()).collect();
    let partition = Partition::from_cells(n, all_cells).map_err(|e| GenError::BadSpec(e.to_string()))?;
    Ok((graph, partition))
}

fn clique(vs: &[Vertex], edges: &mut Vec<(Vertex, Vertex)>) {
    for (i, &u) in vs.iter().enumerate() {
        edges.extend(vs[i + 1..].iter().map(|&v| (u, v)));
    }
}

/// True iff color refinement recovers exactly the intended cells.
pub fn validate_spec(g: &Graph, intended: &Partition) -> bool {
    intended.n() == g.n() && stable_partition(g).cells() == intended.cells()
}

/// Knobs for `random_amenable`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    pub max_components: usize,
    pub max_root: usize,
    pub max_children: usize,
    pub max_multiplicity: usize,
    pub max_depth: usize,
    /// Chance that a non-root cell is a clique.
    pub complete_prob: f64,
    /// Chance that a tree edge uses co-stars.
    pub co_stars_prob: f64,
    /// Chance of a complete join between two cells of different components.
    pub join_prob: f64,
    pub attempts: usize,
}

impl Default for ShapeParams {
    fn default() -> Self {
        ShapeParams {
            max_components: 3,
            max_root: 6,
            max_children: 3,
            max_multiplicity: 3,
            max_depth: 3,
            complete_prob: 0.3,
            co_stars_prob: 0.4,
            join_prob: 0.15,
            attempts: 200,
        }
    }
}

/// A random validated instance with at most `n_target` vertices (at least
/// one).
pub fn random_amenable(n_target: usize, shape: &ShapeParams, seed: u64) -> Result<(Graph, Partition, GraphSpec), GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_target = n_target.max(1);
    for _ in 0..shape.attempts.max(1) {
        let spec = random_spec(n_target, shape, &mut rng);
        let (g, p) = generate(&spec, rng.gen())?;
        if validate_spec(&g, &p) {
            return Ok((g, p, spec));
        }
    }
    Err(GenError::BudgetExhausted { attempts: shape.attempts.max(1) })
}

pub fn random_spec(n_target: usize, shape: &ShapeParams, rng: &mut ChaCha8Rng) -> GraphSpec {
    let mut spec = GraphSpec::default();
    let mut keys: Vec<String> = Vec::new();
    let mut budget = n_target;
    while budget > 0 && spec.components.len() < shape.max_components.max(1) {
        let share = if spec.components.is_empty() { rng.gen_range(budget.div_ceil(2)..=budget) } else { rng.gen_range(1..=budget) };
        let comp = random_component(share, shape, rng);
        let key = comp.shape_key();
        if !keys.contains(&key) {
            budget -= comp.vertex_count();
            keys.push(key);
            spec.components.push(comp);
        }
        if rng.gen_bool(0.35) {
            break;
        }
    }
    let counts: Vec<usize> = spec.components.iter().map(ComponentSpec::cell_count).collect();
    for a in 0..counts.len() {
        for b in a + 1..counts.len() {
            if rng.gen_bool(shape.join_prob) {
                let a = CellRef { component: a, cell: rng.gen_range(0..counts[a]) };
                let b = CellRef { component: b, cell: rng.gen_range(0..counts[b]) };
                spec.wiring.push(Wire { a, b, join: Join::Complete });
            }
        }
    }
    spec
}

fn random_component(budget: usize, shape: &ShapeParams, rng: &mut ChaCha8Rng) -> ComponentSpec {
    let cap = budget.min(shape.max_root.max(1));
    let mut options = Vec::new();
    for s in 1..=cap {
        options.push((HeadRequest::Complete, s));
        if s > 1 {
            options.push((HeadRequest::Empty, s));
        }
        if s == 5 {
            options.push((HeadRequest::FiveCycle, s));
        }
        if s >= 4 && s % 2 == 0 {
            options.push((HeadRequest::Matching, s));
            options.push((HeadRequest::CoMatching, s));
        }
    }
    let (head, root_size) = *options.choose(rng).expect("budget is positive");
    let tree = random_children(root_size, budget - root_size, 1, shape, rng).0;
    ComponentSpec { head, root_size, tree }
}

fn random_children(
    parent: usize,
    budget: usize,
    depth: usize,
    shape: &ShapeParams,
    rng: &mut ChaCha8Rng,
) -> (Vec<NodeSpec>, usize) {
    let mut out: Vec<NodeSpec> = Vec::new();
    let mut used = 0;
    if depth > shape.max_depth {
        return (out, 0);
    }
    let wanted = rng.gen_range(0..=shape.max_children);
    for _ in 0..wanted {
        let left = budget - used;
        let max_m = (left / parent).min(shape.max_multiplicity);
        if max_m == 0 {
            break;
        }
        for _retry in 0..3 {
            let size = parent * rng.gen_range(1..=max_m);
            let sub_budget = rng.gen_range(0..=left - size);
            let (children, sub_used) = random_children(size, sub_budget, depth + 1, shape, rng);
            let node = NodeSpec {
                size,
                children,
                complete: size > 1 && rng.gen_bool(shape.complete_prob),
                co_stars: size > parent && rng.gen_bool(shape.co_stars_prob),
            };
            // Sibling vertices that look alike from above would merge.
            if out.iter().all(|o| o.vertex_key() != node.vertex_key()) {
                used += size + sub_used;
                out.push(node);
                break;
            }
        }
    }
    (out, used)
}

/// Scaling instance with about `n_target` vertices and `O(n)` edges: a
/// five-cycle head carrying a chain of 5-vertex cells, each chain cell with
/// a leaf cell of seeded multiplicity hanging off it.
pub fn benchmark_spec(n_target: usize, seed: u64) -> GraphSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ribs = Vec::new();
    let mut total = 5 + 5 + 10;
    while total < n_target {
        let m = rng.gen_range(1..=4);
        ribs.push(m);
        total += 5 + 5 * m;
    }
    // The last chain cell gets a 2-fold leaf so it differs from its sibling rib.
    let mut node = NodeSpec::with_children(5, vec![NodeSpec::leaf(10)]);
    for &m in ribs.iter().rev() {
        node = NodeSpec::with_children(5, vec![node, NodeSpec::leaf(5 * m)]);
    }
    GraphSpec {
        components: vec![ComponentSpec { head: HeadRequest::FiveCycle, root_size: 5, tree: vec![node] }],
        wiring: Vec::new(),
    }
}

pub fn benchmark_instance(n_target: usize, seed: u64) -> Result<(Graph, Partition), GenError> {
    generate(&benchmark_spec(n_target, seed), seed)
}
