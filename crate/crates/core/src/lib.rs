//! Multigraph toolkit for involutions, harmonic morphisms, symmetric planar
//! and toroidal embeddings, and gonality bounds.

pub mod bielliptic;
pub mod bounds;
pub mod catalog;
pub mod drawing;
pub mod embed;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod graph;
pub mod involution;
pub mod hecke;
pub mod inversion;
pub mod io;
pub mod iso;
pub mod morphism;
pub mod rotation;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{EdgeId, GenusReport, MultiGraph, VertexId};
pub use involution::{Detection, Involution, QuotientResult};
pub use morphism::{EdgeImage, GraphMorphism, HarmonicReport};
