//! Finite windows of plane graphs and the coarse-geometry measurements that
//! relate hyperbolicity, isoperimetry and codegree on them.

pub mod cli;
pub mod error;
pub mod export;
pub mod fraction;
pub mod generators;
pub mod hull;
pub mod iso;
pub mod lii;
pub mod map;
pub mod metric;
pub mod pipeline;

pub use error::{Error, Result};
pub use fraction::{Fraction, Rational};
pub use map::{Cycle, CycleRegion, DartId, Face, FaceId, MapSpec, PlanarMap, Region, VertexId};
