//! Path problems in semicomplete multipartite digraphs: linear decompositions, quasi-Hamiltonian
//! paths, class-restricted paths and their SAT reductions, and exact reference solvers.

pub mod cli;
pub mod connectivity;
pub mod error;
pub mod gen;
pub mod oracle;
pub mod pathops;
pub mod qhp;
pub mod satred;
pub mod smd;

pub use error::{Error, Result};
pub use smd::{Digraph, Smd, Vertex, VertexPath, VertexSet};
