//! Mixed-size VLSI global placement engine.
//!
//! The crate is organized around the placement flow:
//! netlist model and metrics ([`model`]), Bookshelf I/O and synthetic
//! designs ([`bookshelf`]), the sparse signed-graph spectral kernel
//! ([`spectral`]), spectral initialization ([`init`]), signed-graph
//! area-hint refinement ([`hint`]), iteration-scheduled macro charge
//! models ([`schedule`]), the electrostatics placer ([`place`]) and the
//! multi-objective parameter tuner ([`tuner`]).

pub mod bookshelf;
pub mod error;
pub mod hint;
pub mod init;
pub mod model;
pub mod pipeline;
pub mod place;
pub mod plot;
pub mod report;
pub mod schedule;
pub mod spectral;
pub mod tuner;

pub use error::{Error, Result};
pub use model::{DensityGrid, Instance, InstanceKind, Net, Netlist, Pin, PlacementRegion};
pub use spectral::{BandFilterSpec, GraphSignal, SignedGraph};
