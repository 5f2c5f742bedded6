pub mod arcs;
pub mod autiso;
pub mod catalog;
pub mod classify;
pub mod cliques;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod incidence;
pub mod parallel;
pub mod reconstruct;
pub mod srg;

pub use error::{Error, Result};
