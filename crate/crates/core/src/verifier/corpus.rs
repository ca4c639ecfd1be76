//! Deterministic curve families.

use std::collections::BTreeSet;
use std::sync::Arc;

use petgraph::graph::UnGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{BranchPoint, Component, NodalCurve, Node};
use crate::error::{Error, Result};
use crate::geometry::stream_seed;
use crate::scalar::Param;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CorpusSpec {
    /// Two lines meeting in `g + 1` points, one curve per genus.
    Binary { genus_min: i64, genus_max: i64 },
    /// One line per vertex of every connected simple cubic graph.
    Graph { max_vertices: usize },
    /// `components` lines in a row, neighbours glued at `delta` points;
    /// `genera[i]` self-nodes on line `i`.
    Chain {
        components: usize,
        delta: usize,
        #[serde(default)]
        genera: Vec<usize>,
    },
    /// Four components pairwise meeting once, `genera[i]` self-nodes on `X_i`.
    FourComponent { genera: [usize; 4] },
    /// Random connected dual graphs in which every line carries at least
    /// three branch points.
    RandomStable { components: usize, nodes: usize, count: usize },
}

impl CorpusSpec {
    pub fn family(&self) -> &'static str {
        match self {
            CorpusSpec::Binary { .. } => "binary",
            CorpusSpec::Graph { .. } => "graph",
            CorpusSpec::Chain { .. } => "chain",
            CorpusSpec::FourComponent { .. } => "four_component",
            CorpusSpec::RandomStable { .. } => "random_stable",
        }
    }

    /// The default verification corpus.
    pub fn default_corpus() -> Vec<CorpusSpec> {
        vec![
            CorpusSpec::Binary { genus_min: 3, genus_max: 8 },
            CorpusSpec::Graph { max_vertices: 8 },
            CorpusSpec::FourComponent { genera: [1, 0, 0, 0] },
            CorpusSpec::FourComponent { genera: [1, 1, 1, 1] },
            CorpusSpec::Chain { components: 2, delta: 3, genera: vec![1, 1] },
            CorpusSpec::Chain { components: 2, delta: 2, genera: vec![1, 1] },
            CorpusSpec::Chain { components: 3, delta: 3, genera: vec![] },
            CorpusSpec::RandomStable { components: 3, nodes: 6, count: 3 },
        ]
    }
}

#[derive(Clone, Debug)]
pub struct CorpusCurve {
    pub family: String,
    pub index: usize,
    pub label: String,
    pub curve: Arc<NodalCurve>,
}

/// Draws distinct small integer parameters per component.
struct Assembler {
    rng: ChaCha8Rng,
    components: Vec<Component>,
    nodes: Vec<Node>,
    used: Vec<BTreeSet<Param>>,
}

impl Assembler {
    fn new(seed: u64) -> Self {
        Assembler { rng: ChaCha8Rng::seed_from_u64(seed), components: Vec::new(), nodes: Vec::new(), used: Vec::new() }
    }

    fn component(&mut self, id: String) -> usize {
        self.components.push(Component { label: id.clone(), id });
        self.used.push(BTreeSet::new());
        self.components.len() - 1
    }

    fn reserve(&mut self, c: usize, p: Param) -> Param {
        assert!(self.used[c].insert(p.clone()), "parameter reused on a component");
        p
    }

    fn fresh(&mut self, c: usize) -> Param {
        let mut range = 3 * self.used[c].len() as i64 + 6;
        loop {
            let p = Param::int(self.rng.random_range(-range..=range));
            if !self.used[c].contains(&p) {
                return self.reserve(c, p);
            }
            range += 2;
        }
    }

    fn join(&mut self, id: String, a: (usize, Param), b: (usize, Param)) {
        self.nodes.push(Node {
            id,
            a: BranchPoint { component: a.0, param: a.1 },
            b: BranchPoint { component: b.0, param: b.1 },
        });
    }

    fn join_fresh(&mut self, id: String, a: usize, b: usize) {
        let pa = self.fresh(a);
        let pb = self.fresh(b);
        self.join(id, (a, pa), (b, pb));
    }

    fn build(self) -> Result<NodalCurve> {
        NodalCurve::new(self.components, self.nodes)
    }
}

fn family_seed(seed: u64, family: &str, index: usize) -> u64 {
    let tag = family.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    stream_seed(seed, tag, index as u64)
}

pub fn binary_curve(g: i64, seed: u64) -> Result<NodalCurve> {
    if g < 2 {
        return Err(Error::BadParameters(format!("binary curves need genus ≥ 2, got {g}")));
    }
    let mut a = Assembler::new(seed);
    let c1 = a.component("C1".into());
    let c2 = a.component("C2".into());
    for i in 0..=g {
        let p1 = a.reserve(c1, Param::int(i));
        let p2 = a.fresh(c2);
        a.join(format!("n{}", i + 1), (c1, p1), (c2, p2));
    }
    a.build()
}

/// Graph curve of a cubic graph given by its edge list.
pub fn graph_curve(vertices: usize, edges: &[(usize, usize)]) -> Result<NodalCurve> {
    let mut a = Assembler::new(0);
    for v in 0..vertices {
        a.component(format!("V{}", v + 1));
    }
    let mut slot = vec![0usize; vertices];
    let mut next = |v: usize| {
        let p = match slot[v] {
            0 => Param::int(0),
            1 => Param::int(1),
            2 => Param::Infinity,
            _ => return Err(Error::BadParameters(format!("vertex {} has degree above 3", v + 1))),
        };
        slot[v] += 1;
        Ok(p)
    };
    let mut nodes = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        let (pu, pv) = (next(u)?, next(v)?);
        nodes.push((format!("e{}", i + 1), (u, pu), (v, pv)));
    }
    for (id, x, y) in nodes {
        let (px, py) = (a.reserve(x.0, x.1), a.reserve(y.0, y.1));
        a.join(id, (x.0, px), (y.0, py));
    }
    a.build()
}

pub fn chain_curve(components: usize, delta: usize, genera: &[usize], seed: u64) -> Result<NodalCurve> {
    if components == 0 || (components > 1 && delta == 0) {
        return Err(Error::BadParameters("a chain needs components ≥ 1 and delta ≥ 1".into()));
    }
    if !genera.is_empty() && genera.len() != components {
        return Err(Error::BadParameters(format!("genera has {} entries for {components} components", genera.len())));
    }
    let mut a = Assembler::new(seed);
    let ids: Vec<usize> = (0..components).map(|i| a.component(format!("C{}", i + 1))).collect();
    for i in 0..components.saturating_sub(1) {
        for j in 0..delta {
            a.join_fresh(format!("n{}_{}", i + 1, j + 1), ids[i], ids[i + 1]);
        }
    }
    for (i, &g) in genera.iter().enumerate() {
        for j in 0..g {
            a.join_fresh(format!("s{}_{}", i + 1, j + 1), ids[i], ids[i]);
        }
    }
    a.build()
}

pub fn four_component_curve(genera: [usize; 4], seed: u64) -> Result<NodalCurve> {
    let mut a = Assembler::new(seed);
    let ids: Vec<usize> = (0..4).map(|i| a.component(format!("X{}", i + 1))).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            a.join_fresh(format!("p{}{}", i + 1, j + 1), ids[i], ids[j]);
        }
    }
    for (i, &g) in genera.iter().enumerate() {
        for j in 0..g {
            a.join_fresh(format!("s{}_{}", i + 1, j + 1), ids[i], ids[i]);
        }
    }
    a.build()
}

pub fn random_stable_curve(components: usize, nodes: usize, seed: u64) -> Result<NodalCurve> {
    if components == 0 || nodes + 1 < components + 2 || 2 * nodes < 3 * components {
        return Err(Error::BadParameters(format!(
            "no stable curve of genus ≥ 2 with {components} lines and {nodes} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let mut edges = Vec::with_capacity(nodes);
        for v in 1..components {
            edges.push((rng.random_range(0..v), v));
        }
        while edges.len() < nodes {
            edges.push((rng.random_range(0..components), rng.random_range(0..components)));
        }
        let mut deg = vec![0usize; components];
        for &(u, v) in &edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        if deg.iter().all(|&d| d >= 3) {
            let mut a = Assembler::new(rng.random());
            let ids: Vec<usize> = (0..components).map(|i| a.component(format!("R{}", i + 1))).collect();
            for (i, &(u, v)) in edges.iter().enumerate() {
                a.join_fresh(format!("n{}", i + 1), ids[u], ids[v]);
            }
            return a.build();
        }
    }
    Err(Error::BadParameters("could not draw a stable configuration".into()))
}

type Edge = (usize, usize);

/// Connected simple cubic graphs on `n` vertices up to isomorphism, as edge lists.
pub fn cubic_graphs(n: usize) -> Vec<Vec<Edge>> {
    if n < 4 || n % 2 == 1 {
        return Vec::new();
    }
    let mut reps: Vec<(UnGraph<(), ()>, Vec<Edge>)> = Vec::new();
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    extend(n, &mut adj, &mut deg, &mut edges, &mut |edges| {
        if !connected(n, edges) {
            return;
        }
        let g = UnGraph::<(), ()>::from_edges(edges.iter().map(|&(u, v)| (u as u32, v as u32)));
        if !reps.iter().any(|(h, _)| petgraph::algo::is_isomorphic(h, &g)) {
            reps.push((g, edges.to_vec()));
        }
    });
    reps.into_iter().map(|(_, e)| e).collect()
}

/// Labeled cubic graphs, each generated once: the first unsaturated vertex
/// takes new neighbours in increasing order.
fn extend(
    n: usize,
    adj: &mut [Vec<bool>],
    deg: &mut [usize],
    edges: &mut Vec<Edge>,
    emit: &mut dyn FnMut(&[Edge]),
) {
    let Some(v) = (0..n).find(|&v| deg[v] < 3) else {
        emit(edges);
        return;
    };
    let start = (v + 1..n).filter(|&w| adj[v][w]).max().map_or(v + 1, |m| m + 1);
    for w in start..n {
        if deg[w] < 3 {
            adj[v][w] = true;
            adj[w][v] = true;
            deg[v] += 1;
            deg[w] += 1;
            edges.push((v, w));
            extend(n, adj, deg, edges, emit);
            edges.pop();
            deg[v] -= 1;
            deg[w] -= 1;
            adj[v][w] = false;
            adj[w][v] = false;
        }
    }
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            let w = if a == u { b } else if b == u { a } else { continue };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Curves of a family in a fixed order.
pub fn generate(spec: &CorpusSpec, seed: u64) -> Result<Vec<CorpusCurve>> {
    let family = spec.family().to_string();
    let wrap = |index: usize, label: String, curve: NodalCurve| CorpusCurve {
        family: family.clone(),
        index,
        label,
        curve: Arc::new(curve),
    };
    match spec {
        CorpusSpec::Binary { genus_min, genus_max } => {
            if genus_min > genus_max || *genus_min < 2 {
                return Err(Error::BadParameters(format!("bad genus range {genus_min}..{genus_max}")));
            }
            (*genus_min..=*genus_max)
                .enumerate()
                .map(|(i, g)| Ok(wrap(i, format!("binary(g={g})"), binary_curve(g, family_seed(seed, "binary", g as usize))?)))
                .collect()
        }
        CorpusSpec::Graph { max_vertices } => {
            let mut out = Vec::new();
            for n in (4..=*max_vertices).step_by(2) {
                for (j, edges) in cubic_graphs(n).into_iter().enumerate() {
                    let i = out.len();
                    out.push(wrap(i, format!("graph(n={n}, #{})", j + 1), graph_curve(n, &edges)?));
                }
            }
            Ok(out)
        }
        CorpusSpec::Chain { components, delta, genera } => {
            let c = chain_curve(*components, *delta, genera, family_seed(seed, "chain", 0))?;
            if c.arithmetic_genus() < 2 {
                return Err(Error::BadParameters("chain has genus below 2".into()));
            }
            Ok(vec![wrap(0, format!("chain(n={components}, delta={delta}, genera={genera:?})"), c)])
        }
        CorpusSpec::FourComponent { genera } => {
            let c = four_component_curve(*genera, family_seed(seed, "four_component", 0))?;
            Ok(vec![wrap(0, format!("four_component{genera:?}"), c)])
        }
        CorpusSpec::RandomStable { components, nodes, count } => (0..*count)
            .map(|i| {
                let c = random_stable_curve(*components, *nodes, family_seed(seed, "random_stable", i))?;
                Ok(wrap(i, format!("random_stable(c={components}, n={nodes}, #{})", i + 1), c))
            })
            .collect(),
    }
}
