//! Exact tropical intersection theory on simplicial cone complexes equipped
//! with affine structures.

pub mod affine;
pub mod cli;
pub mod complex;
pub mod cycles;
pub mod degree;
pub mod error;
pub mod genus_one;
pub mod io;
pub mod lattice;
pub mod moduli;
pub mod morphism;
pub mod rational;

pub use affine::{AffineStructure, AffineSubgroup};
pub use complex::{Cell, Cone, ConeComplex, ConeId, Domain, PLFunction, Ray, RayId};
pub use cycles::{intersect, TropicalCycle};
pub use error::{Error, Result};
pub use morphism::ComplexMorphism;
pub use rational::Q;
