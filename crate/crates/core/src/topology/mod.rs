//! Per-slot LISL topology: node identities, the weighted snapshot graph,
//! geometric construction from positions, and the snapshot CSV format.

mod build;
mod csv_io;
mod snapshot;

pub use build::{build_snapshot, SnapshotBuilder};
pub use csv_io::{read_snapshots, SnapshotCsvWriter, CSV_HEADER};
pub use snapshot::{Edge, NodeKind, NodeRef, TopologySnapshot};
