//! Snapshot CSV: `slot,node_a,kind_a,node_b,kind_b,length_m`.
//!
//! Every data row is one of
//! * an edge: all six fields set;
//! * an isolated node: `node_b`, `kind_b` and `length_m` empty;
//! * an empty slot: only `slot` set.
//!
//! Slots must be contiguous from 1. Rows may appear in any order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::snapshot::{NodeKind, NodeRef, TopologySnapshot};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const CSV_HEADER: [&str; 6] = ["slot", "node_a", "kind_a", "node_b", "kind_b", "length_m"];

#[derive(Default)]
struct SlotRows<T> {
    nodes: BTreeMap<String, NodeKind>,
    edges: BTreeMap<(String, String), (T, u64)>,
}

impl<T: Scalar> SlotRows<T> {
    fn add_node(&mut self, id: &str, kind: NodeKind, line: u64) -> Result<()> {
        match self.nodes.entry(id.to_owned()) {
            Entry::Vacant(v) => {
                v.insert(kind);
                Ok(())
            }
            Entry::Occupied(o) if *o.get() == kind => Ok(()),
            Entry::Occupied(o) => Err(Error::Consistency {
                line,
                message: format!("node '{id}' declared as both {} and {}", o.get().tag(), kind.tag()),
            }),
        }
    }
}

fn parse_kind(field: &str, line: u64) -> Result<NodeKind> {
    NodeKind::from_tag(field).ok_or_else(|| Error::Parse {
        line,
        message: format!("kind must be SAT or GS, got '{field}'"),
    })
}

/// Reads every snapshot in a CSV stream, sorted by slot.
pub fn read_snapshots<T: Scalar, R: Read>(reader: R) -> Result<Vec<TopologySnapshot<T>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_error(e, 1))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            message: format!("header must be '{}'", CSV_HEADER.join(",")),
        });
    }

    let mut slots: BTreeMap<usize, SlotRows<T>> = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let slot: usize = field(0).parse().map_err(|_| Error::Parse {
            line,
            message: format!("slot must be a positive integer, got '{}'", field(0)),
        })?;
        if slot == 0 {
            return Err(Error::Parse { line, message: "slots are numbered from 1".into() });
        }
        let rows = slots.entry(slot).or_default();

        let (node_a, kind_a, node_b, kind_b, length) = (field(1), field(2), field(3), field(4), field(5));
        if node_a.is_empty() {
            if [kind_a, node_b, kind_b, length].iter().any(|f| !f.is_empty()) {
                return Err(Error::Parse { line, message: "node_a is empty but other fields are set".into() });
            }
            continue;
        }
        let kind_a = parse_kind(kind_a, line)?;
        rows.add_node(node_a, kind_a, line)?;
        if node_b.is_empty() {
            if !kind_b.is_empty() || !length.is_empty() {
                return Err(Error::Parse { line, message: "node_b is empty but kind_b/length_m are set".into() });
            }
            continue;
        }
        let kind_b = parse_kind(kind_b, line)?;
        rows.add_node(node_b, kind_b, line)?;
        if node_a == node_b {
            return Err(Error::Parse { line, message: format!("self-loop on '{node_a}'") });
        }
        let length_m = T::from_str_radix(length, 10)
            .ok()
            .filter(|v| v.is_finite() && *v > T::zero())
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("length_m must be a positive decimal, got '{length}'"),
            })?;
        let key = if node_a < node_b {
            (node_a.to_owned(), node_b.to_owned())
        } else {
            (node_b.to_owned(), node_a.to_owned())
        };
        match rows.edges.entry(key) {
            Entry::Vacant(v) => {
                v.insert((length_m, line));
            }
            Entry::Occupied(o) => {
                let (existing, first_line) = *o.get();
                if existing != length_m {
                    return Err(Error::Consistency {
                        line,
                        message: format!(
                            "edge {node_a}-{node_b} has length {length_m} here but {existing} at line {first_line}"
                        ),
                    });
                }
            }
        }
    }

    if let Some(missing) = (1..).zip(slots.keys()).find(|(want, &got)| *want != got).map(|(want, _)| want) {
        return Err(Error::Input(format!("snapshot file has no rows for slot {missing}")));
    }

    slots
        .into_iter()
        .map(|(slot, rows)| {
            let nodes: Vec<NodeRef> = rows
                .nodes
                .iter()
                .map(|(id, &kind)| NodeRef { kind, id: id.clone() })
                .collect();
            let kind_of = |id: &String| NodeRef { kind: rows.nodes[id], id: id.clone() };
            let edges: Vec<_> = rows
                .edges
                .iter()
                .map(|((a, b), &(len, _))| (kind_of(a), kind_of(b), len))
                .collect();
            TopologySnapshot::from_parts(slot, nodes, edges)
        })
        .collect()
}

fn csv_error(err: csv::Error, fallback_line: u64) -> Error {
    let line = err.position().map_or(fallback_line, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse { line, message: format!("{other:?}") },
    }
}

/// Streams snapshots out in the format accepted by [`read_snapshots`].
pub struct SnapshotCsvWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> SnapshotCsvWriter<W> {
    pub fn new(writer: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(writer);
        inner.write_record(CSV_HEADER).map_err(io_error)?;
        Ok(Self { inner })
    }

    pub fn write<T: Scalar>(&mut self, snapshot: &TopologySnapshot<T>) -> Result<()> {
        let slot = snapshot.slot_index().to_string();
        if snapshot.nodes().is_empty() {
            self.inner.write_record([slot.as_str(), "", "", "", "", ""]).map_err(io_error)?;
            return Ok(());
        }
        for e in snapshot.edges() {
            let (a, b) = (snapshot.node(e.a), snapshot.node(e.b));
            let length = e.length_m.to_string();
            self.inner
                .write_record([slot.as_str(), &a.id, a.kind.tag(), &b.id, b.kind.tag(), &length])
                .map_err(io_error)?;
        }
        for (i, node) in snapshot.nodes().iter().enumerate() {
            if snapshot.degree(i) == 0 {
                self.inner
                    .write_record([slot.as_str(), &node.id, node.kind.tag(), "", "", ""])
                    .map_err(io_error)?;
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| Error::Io(e.into_error()))
    }
}

fn io_error(err: csv::Error) -> Error {
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str) -> Result<Vec<TopologySnapshot<f64>>> {
        read_snapshots(text.as_bytes())
    }

    #[test]
    fn hand_written_three_node_file() {
        let text = "slot,node_a,kind_a,node_b,kind_b,length_m\n\
                    1,New York,GS,P00-S01,SAT,700000.5\n\
                    1,P00-S01,SAT,Istanbul,GS,812000\n";
        let snaps = read(text).unwrap();
        assert_eq!(snaps.len(), 1);
        let expected = TopologySnapshot::from_parts(
            1,
            [],
            [
                (NodeRef::ground_station("New York"), NodeRef::satellite("P00-S01"), 700000.5),
                (NodeRef::satellite("P00-S01"), NodeRef::ground_station("Istanbul"), 812000.0),
            ],
        )
        .unwrap();
        assert_eq!(snaps[0], expected);
    }

    #[test]
    fn empty_slot_and_isolated_nodes() {
        let text = "slot,node_a,kind_a,node_b,kind_b,length_m\n1,,,,,\n2,A,SAT,,,\n";
        let snaps = read(text).unwrap();
        assert!(snaps[0].nodes().is_empty());
        assert_eq!(snaps[1].nodes().len(), 1);
        assert!(snaps[1].edges().is_empty());
    }

    #[test]
    fn slots_are_sorted_and_duplicates_merged() {
        let text = "slot,node_a,kind_a,node_b,kind_b,length_m\n\
                    2,A,SAT,B,SAT,5\n1,A,SAT,B,SAT,4\n1,B,SAT,A,SAT,4\n";
        let snaps = read(text).unwrap();
        assert_eq!(snaps.iter().map(|s| s.slot_index()).collect::<Vec<_>>(), [1, 2]);
        assert_eq!(snaps[0].edges().len(), 1);
    }

    #[test]
    fn malformed_rows_report_line() {
        let bad_len = "slot,node_a,kind_a,node_b,kind_b,length_m\n1,A,SAT,B,SAT,5\n1,A,SAT,C,SAT,-2\n";
        match read(bad_len) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad_kind = "slot,node_a,kind_a,node_b,kind_b,length_m\n1,A,XX,B,SAT,5\n";
        assert!(matches!(read(bad_kind), Err(Error::Parse { line: 2, .. })));
        let bad_header = "slot,a,b\n";
        assert!(matches!(read(bad_header), Err(Error::Parse { line: 1, .. })));
        let short_row = "slot,node_a,kind_a,node_b,kind_b,length_m\n1,A,SAT\n";
        assert!(matches!(read(short_row), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn conflicting_duplicate_edge() {
        let text = "slot,node_a,kind_a,node_b,kind_b,length_m\n1,A,SAT,B,SAT,5\n1,B,SAT,A,SAT,6\n";
        assert!(matches!(read(text), Err(Error::Consistency { line: 3, .. })));
    }

    #[test]
    fn gap_names_missing_slot() {
        let text = "slot,node_a,kind_a,node_b,kind_b,length_m\n1,A,SAT,B,SAT,5\n3,A,SAT,B,SAT,5\n";
        let err = read(text).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        assert!(err.to_string().contains("slot 2"), "{err}");
    }

    #[test]
    fn writer_round_trip() {
        let snaps = vec![
            TopologySnapshot::from_parts(1, [NodeRef::satellite("lonely")], [(NodeRef::satellite("A"), NodeRef::ground_station("G"), 0.1 + 0.2)]).unwrap(),
            TopologySnapshot::from_parts(2, [], []).unwrap(),
        ];
        let mut w = SnapshotCsvWriter::new(Vec::new()).unwrap();
        for s in &snaps {
            w.write(s).unwrap();
        }
        let bytes = w.finish().unwrap();
        assert_eq!(read_snapshots::<f64, _>(&bytes[..]).unwrap(), snaps);
    }
}
