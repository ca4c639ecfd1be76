//! Reduced connected nodal curves whose components have rational
//! normalization, together with subcurves, decompositions and connectivity.
//!
//! A component of positive arithmetic genus is an integral rational curve
//! with self-nodes; its genus is the number of self-nodes. Every point where
//! two components meet is an ordinary node.

mod spec;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::par::{self, Execution};
use crate::scalar::{Param, Scalar};

pub use spec::{BranchSpec, ComponentSpec, CurveSpec, NodeSpec};

/// Default cap on the number of components for subset enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BranchPoint {
    pub component: usize,
    pub param: Param,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub id: String,
    pub a: BranchPoint,
    pub b: BranchPoint,
}

impl Node {
    pub fn is_self_node(&self) -> bool {
        self.a.component == self.b.component
    }

    pub fn branches(&self) -> [&BranchPoint; 2] {
        [&self.a, &self.b]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub id: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodalCurve {
    components: Vec<Component>,
    nodes: Vec<Node>,
}

impl NodalCurve {
    /// Assembles a curve without validating it; see [`NodalCurve::validate`].
    pub fn from_parts(components: Vec<Component>, nodes: Vec<Node>) -> Self {
        NodalCurve { components, nodes }
    }

    /// Assembles and validates.
    pub fn new(components: Vec<Component>, nodes: Vec<Node>) -> Result<Self> {
        let c = NodalCurve { components, nodes };
        c.validate().map_err(Error::InvalidCurve)?;
        Ok(c)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// All branch points on component `c` as `(node index, branch)`.
    pub fn branches_on(&self, c: usize) -> impl Iterator<Item = (usize, &BranchPoint)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.branches().into_iter().map(move |b| (i, b)))
            .filter(move |(_, b)| b.component == c)
    }

    pub fn self_nodes(&self, c: usize) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.is_self_node() && n.a.component == c)
            .count()
    }

    /// Arithmetic genus of a single component (number of self-nodes).
    pub fn component_genus(&self, c: usize) -> usize {
        self.self_nodes(c)
    }

    /// `#nodes - #components + 1`.
    pub fn arithmetic_genus(&self) -> i64 {
        self.nodes.len() as i64 - self.components.len() as i64 + 1
    }

    /// Checks distinct branch parameters, node references and connectedness.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.components.is_empty() {
            return Err(vec![Violation::Empty]);
        }
        let mut ids = BTreeSet::new();
        for c in &self.components {
            if !ids.insert(c.id.as_str()) {
                out.push(Violation::DuplicateId(c.id.clone()));
            }
        }
        let mut node_ids = BTreeSet::new();
        for n in &self.nodes {
            if !node_ids.insert(n.id.as_str()) {
                out.push(Violation::DuplicateId(n.id.clone()));
            }
            for b in n.branches() {
                if b.component >= self.components.len() {
                    out.push(Violation::DanglingBranch {
                        node: n.id.clone(),
                        component: format!("#{}", b.component),
                    });
                }
            }
        }
        if !out.is_empty() {
            return Err(out);
        }
        for (ci, comp) in self.components.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for (_, b) in self.branches_on(ci) {
                if !seen.insert(&b.param) {
                    out.push(Violation::DuplicateBranch {
                        component: comp.id.clone(),
                        param: b.param.to_string(),
                    });
                }
            }
        }
        let all = (0..self.components.len()).collect::<Vec<_>>();
        let pieces = self.connected_pieces(&all);
        if pieces.len() > 1 {
            let unreachable = pieces[1..]
                .iter()
                .flatten()
                .map(|&c| self.components[c].id.clone())
                .collect();
            out.push(Violation::Disconnected { unreachable });
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Connected pieces of the subcurve spanned by `members`, each sorted,
    /// ordered by smallest member.
    pub fn connected_pieces(&self, members: &[usize]) -> Vec<Vec<usize>> {
        let n = self.components.len();
        let mut inside = vec![false; n];
        for &m in members {
            inside[m] = true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for node in &self.nodes {
            let (a, b) = (node.a.component, node.b.component);
            if inside[a] && inside[b] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut pieces: Vec<(usize, Vec<usize>)> = Vec::new();
        for m in sorted {
            let r = find(&mut parent, m);
            match pieces.iter_mut().find(|(root, _)| *root == r) {
                Some((_, v)) => v.push(m),
                None => pieces.push((r, vec![m])),
            }
        }
        pieces.into_iter().map(|(_, v)| v).collect()
    }

    /// Reparameterizes component `c` by `t -> (a t + b)/(c t + d)`.
    pub fn reparameterize(&self, c: usize, m: &[Scalar; 4]) -> NodalCurve {
        let mut out = self.clone();
        for n in &mut out.nodes {
            for b in [&mut n.a, &mut n.b] {
                if b.component == c {
                    b.param = b.param.mobius(m);
                }
            }
        }
        out
    }

    /// Renumbers components: old component `i` becomes `perm[i]`.
    pub fn permute_components(&self, perm: &[usize]) -> NodalCurve {
        let mut comps = self.components.clone();
        for (i, c) in self.components.iter().enumerate() {
            comps[perm[i]] = c.clone();
        }
        let mut nodes = self.nodes.clone();
        for n in &mut nodes {
            n.a.component = perm[n.a.component];
            n.b.component = perm[n.b.component];
        }
        NodalCurve { components: comps, nodes }
    }

    /// Exchanges the two branches of node `i`.
    pub fn swap_branches(&self, i: usize) -> NodalCurve {
        let mut out = self.clone();
        let n = &mut out.nodes[i];
        std::mem::swap(&mut n.a, &mut n.b);
        out
    }

    pub fn is_branch_point(&self, c: usize, p: &Param) -> bool {
        self.branches_on(c).any(|(_, b)| &b.param == p)
    }
}

/// A nonempty union of components of a parent curve.
#[derive(Clone, Debug)]
pub struct Subcurve {
    curve: Arc<NodalCurve>,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PartialEq for Subcurve {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
            && (Arc::ptr_eq(&self.curve, &other.curve) || self.curve == other.curve)
    }
}

impl Eq for Subcurve {}

impl Subcurve {
    pub fn new(curve: Arc<NodalCurve>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = curve.num_components();
        let mut mask = vec![false; n];
        for m in members {
            if m >= n {
                return Err(Error::BadParameters(format!("component index {m} out of range")));
            }
            mask[m] = true;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
        if members.is_empty() {
            return Err(Error::EmptySide);
        }
        Ok(Subcurve { curve, members, mask })
    }

    pub fn whole(curve: Arc<NodalCurve>) -> Self {
        let n = curve.num_components();
        Subcurve { curve, members: (0..n).collect(), mask: vec![true; n] }
    }

    pub fn from_ids(curve: Arc<NodalCurve>, ids: &[&str]) -> Result<Self> {
        let idx = ids
            .iter()
            .map(|id| {
                curve
                    .component_index(id)
                    .ok_or_else(|| Error::BadParameters(format!("unknown component {id}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Subcurve::new(curve, idx)
    }

    pub fn curve(&self) -> &Arc<NodalCurve> {
        &self.curve
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, c: usize) -> bool {
        self.mask.get(c).copied().unwrap_or(false)
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.curve.num_components()
    }

    pub fn ids(&self) -> Vec<String> {
        self.members.iter().map(|&c| self.curve.components()[c].id.clone()).collect()
    }

    /// Position of parent component `c` among the members.
    pub fn local_index(&self, c: usize) -> Option<usize> {
        self.members.binary_search(&c).ok()
    }

    /// Nodes with both branches inside.
    pub fn internal_nodes(&self) -> Vec<usize> {
        self.curve
            .nodes()
            .iter()
            .enumerate()
            .filter(|(_, n)| self.contains(n.a.component) && self.contains(n.b.component))
            .map(|(i, _)| i)
            .collect()
    }

    /// Nodes with exactly one branch inside, paired with that branch.
    pub fn boundary_branches(&self) -> Vec<(usize, BranchPoint)> {
        self.curve
            .nodes()
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match (self.contains(n.a.component), self.contains(n.b.component)) {
                (true, false) => Some((i, n.a.clone())),
                (false, true) => Some((i, n.b.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn boundary_nodes(&self) -> Vec<usize> {
        self.boundary_branches().into_iter().map(|(i, _)| i).collect()
    }

    /// Branch points of internal nodes lying on member `c`.
    pub fn internal_branches_on(&self, c: usize) -> Vec<(usize, Param)> {
        self.curve
            .nodes()
            .iter()
            .enumerate()
            .filter(|(_, n)| self.contains(n.a.component) && self.contains(n.b.component))
            .flat_map(|(i, n)| n.branches().into_iter().map(move |b| (i, b)))
            .filter(|(_, b)| b.component == c)
            .map(|(i, b)| (i, b.param.clone()))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.pieces().len() == 1
    }

    pub fn pieces(&self) -> Vec<Vec<usize>> {
        self.curve.connected_pieces(&self.members)
    }

    /// `p_a(Z) = #internal nodes - #components + 1` (also for disconnected `Z`).
    pub fn arithmetic_genus(&self) -> i64 {
        self.internal_nodes().len() as i64 - self.members.len() as i64 + 1
    }

    pub fn complement(&self) -> Option<Subcurve> {
        let rest: Vec<usize> = (0..self.curve.num_components()).filter(|&c| !self.contains(c)).collect();
        Subcurve::new(self.curve.clone(), rest).ok()
    }

    /// The subcurve as a standalone curve (internal nodes only); component
    /// `i` of the result is member `i`.
    pub fn to_curve(&self) -> NodalCurve {
        let comps = self.members.iter().map(|&c| self.curve.components()[c].clone()).collect();
        let nodes = self
            .internal_nodes()
            .into_iter()
            .map(|i| {
                let n = &self.curve.nodes()[i];
                let map = |b: &BranchPoint| BranchPoint {
                    component: self.local_index(b.component).unwrap(),
                    param: b.param.clone(),
                };
                Node { id: n.id.clone(), a: map(&n.a), b: map(&n.b) }
            })
            .collect();
        NodalCurve::from_parts(comps, nodes)
    }

    /// Bitmask of members (valid for curves with at most 64 components).
    pub fn bits(&self) -> u64 {
        self.members.iter().fold(0u64, |acc, &c| acc | (1 << c))
    }
}

/// A splitting `X = U ∪ V` into subcurves without common components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub u: Subcurve,
    pub v: Subcurve,
    /// Nodes joining `U` and `V`.
    pub boundary: Vec<usize>,
    /// Degree of `U ∩ V`.
    pub delta: usize,
    pub u_connected: bool,
    pub v_connected: bool,
}

impl Decomposition {
    pub fn summary(&self) -> DecompositionSummary {
        let curve = self.u.curve();
        DecompositionSummary {
            u: self.u.ids(),
            v: self.v.ids(),
            boundary: self.boundary.iter().map(|&i| curve.nodes()[i].id.clone()).collect(),
            delta: self.delta,
            u_connected: self.u_connected,
            v_connected: self.v_connected,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct DecompositionSummary {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub boundary: Vec<String>,
    pub delta: usize,
    pub u_connected: bool,
    pub v_connected: bool,
}

pub fn arithmetic_genus(z: &Subcurve) -> i64 {
    z.arithmetic_genus()
}

/// Splits the curve into `subset` and its complement.
pub fn decompose(curve: &Arc<NodalCurve>, subset: &[usize]) -> Result<Decomposition> {
    let u = Subcurve::new(curve.clone(), subset.iter().copied())?;
    let v = u.complement().ok_or(Error::EmptySide)?;
    let boundary = u.boundary_nodes();
    Ok(Decomposition {
        delta: boundary.len(),
        u_connected: u.is_connected(),
        v_connected: v.is_connected(),
        u,
        v,
        boundary,
    })
}

#[derive(Clone, Debug)]
pub struct Connectivity {
    /// `None` for a single component (infinitely connected).
    pub m_max: Option<usize>,
    pub witness: Option<Decomposition>,
}

fn check_bound(curve: &NodalCurve, bound: usize) -> Result<()> {
    let c = curve.num_components();
    if c > bound || c > 63 {
        return Err(Error::TooManyComponents { components: c, bound });
    }
    Ok(())
}

/// Every decomposition once, as the side containing component 0:
/// `2^(c-1) - 1` bitmasks.
pub fn decomposition_masks(c: usize) -> impl Iterator<Item = u64> {
    let half = if c == 0 { 0u64 } else { 1u64 << (c - 1) };
    (0..half.saturating_sub(1)).map(|m| (m << 1) | 1)
}

fn mask_members(mask: u64, c: usize) -> Vec<usize> {
    (0..c).filter(|&i| mask >> i & 1 == 1).collect()
}

fn mask_delta(curve: &NodalCurve, mask: u64) -> usize {
    curve
        .nodes()
        .iter()
        .filter(|n| (mask >> n.a.component & 1) != (mask >> n.b.component & 1))
        .count()
}

/// Minimum over all decompositions of `deg(U ∩ V)`, with the lexicographically
/// smallest minimizing `U` (taken on the side of component 0) as witness.
pub fn connectivity(curve: &Arc<NodalCurve>, bound: usize, exec: Execution) -> Result<Connectivity> {
    check_bound(curve, bound)?;
    let c = curve.num_components();
    if c < 2 {
        return Ok(Connectivity { m_max: None, witness: None });
    }
    let masks: Vec<u64> = decomposition_masks(c).collect();
    let deltas = par::map(exec, &masks, |&m| mask_delta(curve, m));
    let best = masks
        .iter()
        .zip(&deltas)
        .map(|(&m, &d)| (d, mask_members(m, c), m))
        .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)))
        .expect("at least one decomposition");
    let witness = decompose(curve, &best.1)?;
    Ok(Connectivity { m_max: Some(best.0), witness: Some(witness) })
}

/// Minimum over decompositions of `deg ω_X|_U - deg ω_U` (and the same for
/// `V`), computed from component degrees and genera rather than node counts.
pub fn numerical_connectivity(curve: &Arc<NodalCurve>, bound: usize, exec: Execution) -> Result<Option<i64>> {
    check_bound(curve, bound)?;
    let c = curve.num_components();
    if c < 2 {
        return Ok(None);
    }
    let full = (1u64 << c) - 1;
    // deg ω_X on a component: (#branch points) - 2
    let comp_deg: Vec<i64> = (0..c).map(|i| curve.branches_on(i).count() as i64 - 2).collect();
    let side = |mask: u64| -> i64 {
        let members = mask_members(mask, c);
        let deg_restricted: i64 = members.iter().map(|&i| comp_deg[i]).sum();
        let internal = curve
            .nodes()
            .iter()
            .filter(|n| mask >> n.a.component & 1 == 1 && mask >> n.b.component & 1 == 1)
            .count() as i64;
        let genus = internal - members.len() as i64 + 1;
        deg_restricted - (2 * genus - 2)
    };
    let masks: Vec<u64> = decomposition_masks(c).collect();
    let vals = par::map(exec, &masks, |&m| side(m).min(side(full & !m)));
    Ok(vals.into_iter().min())
}

/// All proper nonempty `U` such that `U` and its complement are both
/// connected, in increasing bitmask order.
pub fn connected_decompositions(curve: &Arc<NodalCurve>, bound: usize) -> Result<Vec<Decomposition>> {
    check_bound(curve, bound)?;
    let c = curve.num_components();
    let mut out = Vec::new();
    if c < 2 {
        return Ok(out);
    }
    for mask in 1..(1u64 << c) - 1 {
        let d = decompose(curve, &mask_members(mask, c))?;
        if d.u_connected && d.v_connected {
            out.push(d);
        }
    }
    Ok(out)
}

/// All connected subcurves contained in `within` (bitmask order).
pub fn connected_subcurves(within: &Subcurve, bound: usize) -> Result<Vec<Subcurve>> {
    let curve = within.curve();
    check_bound(curve, bound)?;
    let members = within.members();
    let k = members.len();
    let mut out = Vec::new();
    for mask in 1..(1u64 << k) {
        let chosen: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| members[i]).collect();
        let z = Subcurve::new(curve.clone(), chosen)?;
        if z.is_connected() {
            out.push(z);
        }
    }
    Ok(out)
}

/// Incremental construction of curves with string ids.
#[derive(Clone, Debug, Default)]
pub struct CurveBuilder {
    components: Vec<Component>,
    nodes: Vec<Node>,
}

impl CurveBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn component(&mut self, id: impl Into<String>) -> usize {
        let id = id.into();
        self.components.push(Component { label: id.clone(), id });
        self.components.len() - 1
    }

    pub fn node(&mut self, a: (usize, Param), b: (usize, Param)) -> usize {
        let id = format!("n{}", self.nodes.len() + 1);
        self.nodes.push(Node {
            id,
            a: BranchPoint { component: a.0, param: a.1 },
            b: BranchPoint { component: b.0, param: b.1 },
        });
        self.nodes.len() - 1
    }

    pub fn build(self) -> Result<NodalCurve> {
        NodalCurve::new(self.components, self.nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_comps(nodes: usize) -> NodalCurve {
        let mut b = CurveBuilder::new();
        let c1 = b.component("C1");
        let c2 = b.component("C2");
        for i in 0..nodes as i64 {
            b.node((c1, Param::int(i)), (c2, Param::int(10 + i)));
        }
        NodalCurve::from_parts(b.components, b.nodes)
    }

    #[test]
    fn validate_minimal_gluing() {
        assert!(two_comps(1).validate().is_ok());
    }

    #[test]
    fn validate_detects_disconnection() {
        let err = two_comps(0).validate().unwrap_err();
        assert!(matches!(&err[0], Violation::Disconnected { unreachable } if unreachable == &["C2"]));
    }

    #[test]
    fn validate_detects_duplicate_branch() {
        let mut b = CurveBuilder::new();
        let c = b.component("C1");
        b.node((c, Param::int(0)), (c, Param::int(1)));
        b.node((c, Param::int(0)), (c, Param::int(2)));
        let err = b.build().unwrap_err();
        match err {
            Error::InvalidCurve(v) => assert!(v
                .iter()
                .any(|x| matches!(x, Violation::DuplicateBranch { component, param } if component == "C1" && param == "0"))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn genus_counts() {
        assert_eq!(two_comps(4).arithmetic_genus(), 3);
        let mut b = CurveBuilder::new();
        b.component("P1");
        assert_eq!(b.build().unwrap().arithmetic_genus(), 0);
    }

    #[test]
    fn decompose_binary() {
        let x = Arc::new(two_comps(4));
        let d = decompose(&x, &[0]).unwrap();
        assert_eq!(d.delta, 4);
        assert!(d.u_connected && d.v_connected);
        assert!(matches!(decompose(&x, &[0, 1]), Err(Error::EmptySide)));
        assert!(matches!(decompose(&x, &[]), Err(Error::EmptySide)));
    }

    #[test]
    fn connectivity_of_two_node_curve() {
        let x = Arc::new(two_comps(2));
        let c = connectivity(&x, 16, Execution::Sequential).unwrap();
        assert_eq!(c.m_max, Some(2));
        assert_eq!(numerical_connectivity(&x, 16, Execution::Sequential).unwrap(), Some(2));
    }

    #[test]
    fn enumeration_bound() {
        let mut b = CurveBuilder::new();
        let n = 5;
        let comps: Vec<usize> = (0..n).map(|i| b.component(format!("C{i}"))).collect();
        for w in comps.windows(2) {
            b.node((w[0], Param::int(1)), (w[1], Param::int(0)));
        }
        let x = Arc::new(b.build().unwrap());
        assert!(matches!(connectivity(&x, 4, Execution::Sequential), Err(Error::TooManyComponents { .. })));
        assert_eq!(decomposition_masks(5).count(), 15);
    }

    #[test]
    fn subcurve_to_curve_keeps_internal_nodes() {
        let x = Arc::new(two_comps(3));
        let z = Subcurve::new(x, [1]).unwrap();
        let c = z.to_curve();
        assert_eq!(c.num_components(), 1);
        assert!(c.nodes().is_empty());
        assert_eq!(z.boundary_nodes().len(), 3);
    }
}
