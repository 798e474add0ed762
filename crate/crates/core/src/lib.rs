//! Finite combinatorial laboratory for Coxeter diagrams, Coxeter complexes,
//! ranked posets, bi-Helly graphs and normal forms of paths.

pub mod diagram;
pub mod coxeter;
pub mod taxonomy;
pub mod poset;
pub mod graph;
pub mod complex;
pub mod bihelly;
pub mod normalform;
