//! Auslander-Reiten quivers of Dynkin type A and D, convex orders on positive
//! roots, minimal-pair classification, and the denominator and Dorey-rule
//! predicates of the associated quantum affine algebras.

pub mod ar_quiver;
pub mod cli;
pub mod orders;
pub mod qaffine;
pub mod quiver;
pub mod root_system;
pub mod verify;

pub use ar_quiver::{ARQuiver, RepCoord};
pub use quiver::{DynkinQuiver, HeightFunction, VertexClass};
pub use root_system::{CartanDatum, DiagramType, EpsilonForm, PositiveRoot, SignedRoot};
