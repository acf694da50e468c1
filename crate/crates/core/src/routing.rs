//! Per-slot shortest paths and path-change detection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{latency_without_setup, LatencyParams};
use crate::scalar::Scalar;
use crate::topology::{NodeRef, TopologySnapshot};

/// A simple path between two nodes with its per-edge lengths (metres).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoutePath<T> {
    pub nodes: Vec<NodeRef>,
    pub edge_lengths: Vec<T>,
    pub total_length: T,
}

impl<T: Scalar> RoutePath<T> {
    /// Number of intermediate nodes, i.e. satellites on a station-to-station path.
    pub fn hop_count(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }

    /// Node-sequence equality; lengths are ignored.
    pub fn same_route(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

#[derive(Clone, Copy)]
struct Queued<T> {
    dist: T,
    node: usize,
}

impl<T: Scalar> PartialEq for Queued<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Queued<T> {}

impl<T: Scalar> Ord for Queued<T> {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl<T: Scalar> PartialOrd for Queued<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const NO_PRED: usize = usize::MAX;

fn chain(pred: &[usize], mut node: usize) -> Vec<usize> {
    let mut seq = vec![node];
    while pred[node] != NO_PRED {
        node = pred[node];
        seq.push(node);
    }
    seq.reverse();
    seq
}

/// Single-source Dijkstra over edge length.
///
/// Ground stations other than the source never relay traffic. Among
/// equal-length paths the one with the lexicographically smallest node-id
/// sequence wins; node indices follow id order, so comparing index
/// sequences is enough.
fn dijkstra<T: Scalar>(snapshot: &TopologySnapshot<T>, src: usize, targets: &[usize]) -> (Vec<T>, Vec<usize>) {
    let n = snapshot.nodes().len();
    let mut dist = vec![T::infinity(); n];
    let mut pred = vec![NO_PRED; n];
    let mut done = vec![false; n];
    let mut remaining = targets.len();
    let mut is_target = vec![false; n];
    for &t in targets {
        is_target[t] = true;
    }

    let mut heap = BinaryHeap::new();
    dist[src] = T::zero();
    heap.push(Queued { dist: T::zero(), node: src });
    while let Some(Queued { dist: d, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if is_target[u] {
            is_target[u] = false;
            remaining -= 1;
            if remaining == 0 {
                break;
            }
        }
        if u != src && snapshot.node(u).is_ground_station() {
            continue;
        }
        for &(v, w) in snapshot.neighbors(u) {
            if done[v] {
                continue;
            }
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = u;
                heap.push(Queued { dist: nd, node: v });
            } else if nd == dist[v] && pred[v] != u {
                let mut via_u = chain(&pred, u);
                via_u.push(v);
                if via_u < chain(&pred, v) {
                    pred[v] = u;
                }
            }
        }
    }
    (dist, pred)
}

fn lookup<T: Scalar>(snapshot: &TopologySnapshot<T>, node: &NodeRef) -> Result<usize> {
    snapshot
        .node_index(node)
        .ok_or_else(|| Error::Lookup(format!("node {node} is not in slot {}", snapshot.slot_index())))
}

fn assemble<T: Scalar>(snapshot: &TopologySnapshot<T>, dist: &[T], pred: &[usize], dst: usize) -> Option<RoutePath<T>> {
    if !dist[dst].is_finite() {
        return None;
    }
    let seq = chain(pred, dst);
    let edge_lengths: Vec<T> = seq
        .windows(2)
        .map(|w| {
            snapshot
                .neighbors(w[0])
                .iter()
                .find(|(n, _)| *n == w[1])
                .map(|&(_, len)| len)
                .expect("predecessor edge exists")
        })
        .collect();
    let total_length = edge_lengths.iter().fold(T::zero(), |acc, &l| acc + l);
    Some(RoutePath {
        nodes: seq.into_iter().map(|i| snapshot.node(i).clone()).collect(),
        edge_lengths,
        total_length,
    })
}

/// Shortest path from `src` to `dst`, or `None` when `dst` is unreachable.
pub fn shortest_path<T: Scalar>(
    snapshot: &TopologySnapshot<T>,
    src: &NodeRef,
    dst: &NodeRef,
) -> Result<Option<RoutePath<T>>> {
    Ok(shortest_paths_from(snapshot, src, std::slice::from_ref(dst))?.pop().flatten())
}

/// Shortest paths from one source to several destinations with a single search.
pub fn shortest_paths_from<T: Scalar>(
    snapshot: &TopologySnapshot<T>,
    src: &NodeRef,
    dsts: &[NodeRef],
) -> Result<Vec<Option<RoutePath<T>>>> {
    let s = lookup(snapshot, src)?;
    let targets = dsts.iter().map(|d| lookup(snapshot, d)).collect::<Result<Vec<_>>>()?;
    if let Some(d) = dsts.iter().find(|d| *d == src) {
        return Err(Error::Domain(format!("source and destination are both {d}")));
    }
    let (dist, pred) = dijkstra(snapshot, s, &targets);
    Ok(targets.iter().map(|&t| assemble(snapshot, &dist, &pred, t)).collect())
}

/// What preceded the slot being classified.
#[derive(Debug, Clone, Copy)]
pub enum PrevSlot<'a, T> {
    /// No earlier slot: the first slot of the window.
    First,
    /// The previous slot's path, `None` if it was unreachable.
    Path(Option<&'a RoutePath<T>>),
}

/// Setup-delay indicator α: 1 when the route differs from the previous slot's.
pub fn path_changed<T: Scalar>(prev: PrevSlot<'_, T>, cur: Option<&RoutePath<T>>) -> u8 {
    match (prev, cur) {
        (PrevSlot::First, _) => 0,
        (PrevSlot::Path(Some(p)), Some(c)) if p.same_route(c) => 0,
        _ => 1,
    }
}

/// α for every slot of a window, in order.
pub fn alpha_sequence<T: Scalar>(paths: &[Option<RoutePath<T>>]) -> Vec<u8> {
    let mut prev = PrevSlot::First;
    paths
        .iter()
        .map(|cur| {
            let alpha = path_changed(prev, cur.as_ref());
            prev = PrevSlot::Path(cur.as_ref());
            alpha
        })
        .collect()
}

/// End-to-end latency of one slot, without and with each setup delay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotLatency<T> {
    pub without_ms: T,
    /// Aligned with [`LatencyParams::setup_delays_ms`].
    pub with_ms: Vec<T>,
}

/// Everything recorded for one slot of one (pair, range) run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotResult<T> {
    pub slot_index: usize,
    pub path: Option<RoutePath<T>>,
    pub alpha: u8,
    /// `None` when the destination was unreachable.
    pub latency: Option<SlotLatency<T>>,
}

impl<T: Scalar> SlotResult<T> {
    pub fn new(slot_index: usize, path: Option<RoutePath<T>>, alpha: u8, params: &LatencyParams<T>) -> Self {
        let latency = path.as_ref().map(|p| {
            let without_ms = latency_without_setup(p, params);
            let a = if alpha == 1 { T::one() } else { T::zero() };
            let with_ms = params.setup_delays_ms.iter().map(|&eta| without_ms + a * eta).collect();
            SlotLatency { without_ms, with_ms }
        });
        Self { slot_index, path, alpha, latency }
    }
}
