//! Immutable sparse bipartite graphs and the coupled user/object/group dataset.
//!
//! Both orientations are stored in compressed sparse row form with sorted,
//! duplicate-free neighbor lists, so set intersections and equality are cheap
//! and deterministic. Nodes are addressed by dense indices; external string
//! identifiers live in side-car [`Labels`] tables.

use std::fmt;

use indexmap::IndexSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// Dense index of a node within one node class (user, object or group).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which node class of a bipartite graph a query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    /// `edges` must be sorted by (source, target) and duplicate-free.
    fn from_sorted(count: usize, edges: impl Iterator<Item = (u32, u32)>) -> Csr {
        let mut offsets = vec![0usize; count + 1];
        let mut targets = Vec::new();
        for (s, t) in edges {
            offsets[s as usize + 1] += 1;
            targets.push(NodeId(t));
        }
        for i in 0..count {
            offsets[i + 1] += offsets[i];
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, i: usize) -> &[NodeId] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    fn count(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// A binary bipartite adjacency matrix stored in both orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Csr,
    right: Csr,
    max_left_degree: usize,
    max_right_degree: usize,
}

impl BipartiteGraph {
    /// Builds a graph from index pairs. Duplicate pairs collapse to one edge.
    ///
    /// Fails if any index is outside `0..left_count` / `0..right_count`.
    pub fn from_edges<I>(left_count: usize, right_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (l, r) in edges {
            if l.index() >= left_count {
                return Err(Error::Index { side: Side::Left, index: l.index(), count: left_count });
            }
            if r.index() >= right_count {
                return Err(Error::Index { side: Side::Right, index: r.index(), count: right_count });
            }
            pairs.push((l.0, r.0));
        }
        Ok(Self::from_pairs(left_count, right_count, pairs))
    }

    fn from_pairs(left_count: usize, right_count: usize, mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let left = Csr::from_sorted(left_count, pairs.iter().copied());
        let mut flipped: Vec<(u32, u32)> = pairs.iter().map(|&(l, r)| (r, l)).collect();
        flipped.sort_unstable();
        let right = Csr::from_sorted(right_count, flipped.into_iter());
        let max_left_degree = (0..left_count).map(|i| left.degree(i)).max().unwrap_or(0);
        let max_right_degree = (0..right_count).map(|i| right.degree(i)).max().unwrap_or(0);
        BipartiteGraph { left, right, max_left_degree, max_right_degree }
    }

    /// An edgeless graph with the given node counts.
    pub fn empty(left_count: usize, right_count: usize) -> Self {
        Self::from_pairs(left_count, right_count, Vec::new())
    }

    pub fn left_count(&self) -> usize {
        self.left.count()
    }

    pub fn right_count(&self) -> usize {
        self.right.count()
    }

    pub fn count(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_count(),
            Side::Right => self.right_count(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.left.targets.len()
    }

    fn check(&self, side: Side, node: NodeId) -> Result<()> {
        let count = self.count(side);
        if node.index() < count {
            Ok(())
        } else {
            Err(Error::Index { side, index: node.index(), count })
        }
    }

    /// Degree of `node` on `side`.
    pub fn degree(&self, side: Side, node: NodeId) -> Result<usize> {
        self.check(side, node)?;
        Ok(match side {
            Side::Left => self.left.degree(node.index()),
            Side::Right => self.right.degree(node.index()),
        })
    }

    /// Sorted neighbor list of `node` on `side`.
    pub fn neighbors(&self, side: Side, node: NodeId) -> Result<&[NodeId]> {
        self.check(side, node)?;
        Ok(match side {
            Side::Left => self.left.row(node.index()),
            Side::Right => self.right.row(node.index()),
        })
    }

    // Unchecked accessors for the hot loops; they panic on a bad index.

    #[inline]
    pub fn left_neighbors(&self, i: usize) -> &[NodeId] {
        self.left.row(i)
    }

    #[inline]
    pub fn right_neighbors(&self, i: usize) -> &[NodeId] {
        self.right.row(i)
    }

    #[inline]
    pub fn left_degree(&self, i: usize) -> usize {
        self.left.degree(i)
    }

    #[inline]
    pub fn right_degree(&self, i: usize) -> usize {
        self.right.degree(i)
    }

    pub fn max_degree(&self, side: Side) -> usize {
        match side {
            Side::Left => self.max_left_degree,
            Side::Right => self.max_right_degree,
        }
    }

    pub fn degrees(&self, side: Side) -> Vec<usize> {
        (0..self.count(side))
            .map(|i| match side {
                Side::Left => self.left.degree(i),
                Side::Right => self.right.degree(i),
            })
            .collect()
    }

    /// Whether the edge (left, right) exists. Out-of-range indices yield `false`.
    pub fn has_edge(&self, left: NodeId, right: NodeId) -> bool {
        left.index() < self.left_count() && self.left.row(left.index()).binary_search(&right).is_ok()
    }

    /// All edges in canonical (left, right) ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.left_count())
            .flat_map(move |i| self.left.row(i).iter().map(move |&r| (NodeId::from(i), r)))
    }
}

/// Bidirectional map between external string ids and dense indices,
/// in first-insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labels {
    ids: IndexSet<String>,
}

impl Labels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Labels `prefix0`, `prefix1`, ... for `count` nodes.
    pub fn numbered(prefix: &str, count: usize) -> Self {
        Labels { ids: (0..count).map(|i| format!("{prefix}{i}")).collect() }
    }

    /// Returns the index of `id`, inserting it if unseen.
    pub fn intern(&mut self, id: &str) -> NodeId {
        if let Some(i) = self.ids.get_index_of(id) {
            return NodeId::from(i);
        }
        let (i, _) = self.ids.insert_full(id.to_owned());
        NodeId::from(i)
    }

    pub fn get(&self, id: &str) -> Option<NodeId> {
        self.ids.get_index_of(id).map(NodeId::from)
    }

    pub fn label(&self, node: NodeId) -> Option<&str> {
        self.ids.get_index(node.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(String::as_str)
    }
}

/// A graph built from external ids, with the label tables produced along the way.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: BipartiteGraph,
    pub left_labels: Labels,
    pub right_labels: Labels,
    /// Number of input pairs dropped as duplicates.
    pub duplicates: usize,
}

impl LabeledGraph {
    /// Edges as external id pairs, in canonical order.
    pub fn labeled_edges(&self) -> Vec<(String, String)> {
        self.graph
            .edges()
            .map(|(l, r)| {
                (
                    self.left_labels.label(l).unwrap_or_default().to_owned(),
                    self.right_labels.label(r).unwrap_or_default().to_owned(),
                )
            })
            .collect()
    }
}

/// Builds a graph from external id pairs. Ids get dense indices in order of
/// first appearance; duplicate pairs are collapsed and counted.
pub fn build_graph<L, R>(edges: &[(L, R)]) -> LabeledGraph
where
    L: AsRef<str>,
    R: AsRef<str>,
{
    let mut left_labels = Labels::new();
    let mut right_labels = Labels::new();
    let pairs: Vec<(u32, u32)> = edges
        .iter()
        .map(|(l, r)| (left_labels.intern(l.as_ref()).0, right_labels.intern(r.as_ref()).0))
        .collect();
    let raw = pairs.len();
    let graph = BipartiteGraph::from_pairs(left_labels.len(), right_labels.len(), pairs);
    let duplicates = raw - graph.edge_count();
    LabeledGraph { graph, left_labels, right_labels, duplicates }
}

/// A user–object graph and a user–group graph over one shared user index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledDataset {
    user_object: BipartiteGraph,
    user_group: BipartiteGraph,
    users: Labels,
    objects: Labels,
    groups: Labels,
}

impl CoupledDataset {
    pub fn new(
        user_object: BipartiteGraph,
        user_group: BipartiteGraph,
        users: Labels,
        objects: Labels,
        groups: Labels,
    ) -> Result<Self> {
        if user_object.left_count() != user_group.left_count() {
            return Err(Error::InvalidArgument(format!(
                "user counts differ: {} in user-object graph, {} in user-group graph",
                user_object.left_count(),
                user_group.left_count()
            )));
        }
        let checks = [
            ("user", users.len(), user_object.left_count()),
            ("object", objects.len(), user_object.right_count()),
            ("group", groups.len(), user_group.right_count()),
        ];
        for (kind, labels, nodes) in checks {
            if labels != nodes {
                return Err(Error::InvalidArgument(format!(
                    "{labels} {kind} labels for {nodes} {kind}s"
                )));
            }
        }
        Ok(CoupledDataset { user_object, user_group, users, objects, groups })
    }

    /// Dataset with generated labels `u0..`, `o0..`, `g0..`.
    pub fn unlabeled(user_object: BipartiteGraph, user_group: BipartiteGraph) -> Result<Self> {
        let users = Labels::numbered("u", user_object.left_count());
        let objects = Labels::numbered("o", user_object.right_count());
        let groups = Labels::numbered("g", user_group.right_count());
        Self::new(user_object, user_group, users, objects, groups)
    }

    /// Same users, objects and groups with a replacement user–object graph.
    pub fn with_user_object(&self, user_object: BipartiteGraph) -> Result<Self> {
        if user_object.left_count() != self.user_count() || user_object.right_count() != self.object_count() {
            return Err(Error::InvalidArgument(
                "replacement user-object graph has different dimensions".into(),
            ));
        }
        Ok(CoupledDataset { user_object, ..self.clone() })
    }

    pub fn user_object(&self) -> &BipartiteGraph {
        &self.user_object
    }

    pub fn user_group(&self) -> &BipartiteGraph {
        &self.user_group
    }

    pub fn users(&self) -> &Labels {
        &self.users
    }

    pub fn objects(&self) -> &Labels {
        &self.objects
    }

    pub fn groups(&self) -> &Labels {
        &self.groups
    }

    pub fn user_count(&self) -> usize {
        self.user_object.left_count()
    }

    pub fn object_count(&self) -> usize {
        self.user_object.right_count()
    }

    pub fn group_count(&self) -> usize {
        self.user_group.right_count()
    }

    pub fn user_id(&self, label: &str) -> Result<NodeId> {
        self.users
            .get(label)
            .ok_or_else(|| Error::UnknownLabel { kind: "user", id: label.to_owned() })
    }
}
