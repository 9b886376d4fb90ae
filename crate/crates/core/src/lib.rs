//! Qubit routing: map an abstract circuit onto a device whose two-qubit
//! interactions are restricted to the edges of a (possibly directed) graph.

pub mod architecture;
pub mod bench;
pub mod circuit;
pub mod placement;
pub mod router;
pub mod synthesis;
pub mod verify;
