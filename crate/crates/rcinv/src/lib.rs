//! Computations with finitely presented special inverse monoids and
//! right-cancellative presentations.

pub mod constructions;
pub mod boundary;
pub mod graphs;
pub mod presentations;
pub mod rc;
pub mod stephen;
pub mod subgroup;
pub mod words;
pub mod zone_graphs;
