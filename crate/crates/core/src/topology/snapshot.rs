use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    Satellite,
    GroundStation,
}

impl NodeKind {
    /// Short tag used in the snapshot CSV.
    pub fn tag(self) -> &'static str {
        match self {
            NodeKind::Satellite => "SAT",
            NodeKind::GroundStation => "GS",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "SAT" => Some(NodeKind::Satellite),
            "GS" => Some(NodeKind::GroundStation),
            _ => None,
        }
    }
}

/// A graph vertex. Ordered by id first, so sorting nodes yields the
/// lexicographic order used for routing tie-breaks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeRef {
    pub kind: NodeKind,
    pub id: String,
}

impl NodeRef {
    pub fn satellite(id: impl Into<String>) -> Self {
        Self { kind: NodeKind::Satellite, id: id.into() }
    }

    pub fn ground_station(id: impl Into<String>) -> Self {
        Self { kind: NodeKind::GroundStation, id: id.into() }
    }

    pub fn is_ground_station(&self) -> bool {
        self.kind == NodeKind::GroundStation
    }
}

impl Ord for NodeRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id).then(self.kind.cmp(&other.kind))
    }
}

impl PartialOrd for NodeRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NodeKind::Satellite => f.write_str(&self.id),
            NodeKind::GroundStation => write!(f, "GS {}", self.id),
        }
    }
}

/// Sorted node list shared by every snapshot of one scenario.
#[derive(Debug)]
pub(crate) struct NodeTable {
    pub(crate) nodes: Vec<NodeRef>,
    pub(crate) index: HashMap<NodeRef, usize>,
}

impl NodeTable {
    pub(crate) fn new(mut nodes: Vec<NodeRef>) -> Result<Self> {
        nodes.sort();
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::Config(format!("node id '{}' is not unique", pair[0].id)));
            }
        }
        if let Some(empty) = nodes.iter().find(|n| n.id.is_empty()) {
            return Err(Error::Config(format!("empty {} node id", empty.kind.tag())));
        }
        let index = nodes.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        Ok(Self { nodes, index })
    }
}

/// Undirected edge between node indices `a < b`; length in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub a: usize,
    pub b: usize,
    pub length_m: T,
}

/// The network graph at one time slot.
#[derive(Debug, Clone)]
pub struct TopologySnapshot<T> {
    slot_index: usize,
    table: Arc<NodeTable>,
    edges: Vec<Edge<T>>,
    adjacency: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> TopologySnapshot<T> {
    /// Builds a snapshot from explicit nodes and edges, checking every
    /// structural invariant. Edge endpoints are added to the node set.
    pub fn from_parts(
        slot_index: usize,
        nodes: impl IntoIterator<Item = NodeRef>,
        edges: impl IntoIterator<Item = (NodeRef, NodeRef, T)>,
    ) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut all: Vec<NodeRef> = nodes.into_iter().collect();
        all.extend(edges.iter().flat_map(|(a, b, _)| [a.clone(), b.clone()]));
        all.sort();
        all.dedup();
        let table = Arc::new(NodeTable::new(all)?);
        let mut indexed = Vec::with_capacity(edges.len());
        for (a, b, len) in edges {
            let (ia, ib) = (table.index[&a], table.index[&b]);
            indexed.push(Edge { a: ia.min(ib), b: ia.max(ib), length_m: len });
        }
        Self::with_table(slot_index, table, indexed)
    }

    pub(crate) fn with_table(slot_index: usize, table: Arc<NodeTable>, mut edges: Vec<Edge<T>>) -> Result<Self> {
        if slot_index < 1 {
            return Err(Error::Config("snapshot slot_index must be >= 1".into()));
        }
        let n = table.nodes.len();
        for e in edges.iter_mut() {
            if e.a > e.b {
                std::mem::swap(&mut e.a, &mut e.b);
            }
            if e.a == e.b {
                return Err(Error::Domain(format!("self-loop on node '{}'", table.nodes[e.a].id)));
            }
            if e.b >= n {
                return Err(Error::Lookup(format!("edge endpoint index {} out of range", e.b)));
            }
            if !(e.length_m > T::zero()) || !e.length_m.is_finite() {
                return Err(Error::Domain(format!(
                    "edge {}-{} has non-positive length {}",
                    table.nodes[e.a].id, table.nodes[e.b].id, e.length_m
                )));
            }
        }
        edges.sort_by_key(|e| (e.a, e.b));
        if let Some(dup) = edges.windows(2).find(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b)) {
            return Err(Error::Domain(format!(
                "duplicate edge {}-{}",
                table.nodes[dup[0].a].id, table.nodes[dup[0].b].id
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.a].push((e.b, e.length_m));
            adjacency[e.b].push((e.a, e.length_m));
        }
        Ok(Self { slot_index, table, edges, adjacency })
    }

    pub fn slot_index(&self) -> usize {
        self.slot_index
    }

    /// Nodes in lexicographic id order; a node's position is its index.
    pub fn nodes(&self) -> &[NodeRef] {
        &self.table.nodes
    }

    pub fn node(&self, index: usize) -> &NodeRef {
        &self.table.nodes[index]
    }

    pub fn node_index(&self, node: &NodeRef) -> Option<usize> {
        self.table.index.get(node).copied()
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn neighbors(&self, index: usize) -> &[(usize, T)] {
        &self.adjacency[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adjacency[index].len()
    }

    /// Length of the edge between two nodes in either order.
    pub fn edge_length(&self, a: &NodeRef, b: &NodeRef) -> Option<T> {
        let (ia, ib) = (self.node_index(a)?, self.node_index(b)?);
        self.adjacency[ia].iter().find(|(n, _)| *n == ib).map(|&(_, len)| len)
    }
}

impl<T: PartialEq> PartialEq for TopologySnapshot<T> {
    fn eq(&self, other: &Self) -> bool {
        self.slot_index == other.slot_index
            && self.table.nodes == other.table.nodes
            && self.edges == other.edges
    }
}
