//! Weighted chip-firing on graphs.
//!
//! The crate computes, exactly, the Jacobian Pic⁰(G) of a weighted multigraph
//! and its balanced subgroup Pic_b⁰(G); enumerates spanning trees with edge
//! sub-weightings, whose divisors `D_{T,σ}` are canonical representatives of
//! the classes of degree g − 1; reduces arbitrary divisors to those
//! representatives; and lets degree-0 divisors act on them. Special-fiber
//! descriptions of semistable curves are ingested as weighted dual graphs,
//! where Pic_b⁰ is the arithmetic component group.
//!
//! ```
//! use wchip::graph::GraphBuilder;
//! use wchip::picard::{count_pic0, picb0_structure};
//!
//! let g = GraphBuilder::new()
//!     .vertex("v1", 2)
//!     .vertex("v2", 1)
//!     .vertex("v3", 1)
//!     .edge("a", "v1", "v2", 2)
//!     .edge("b", "v1", "v3", 2)
//!     .edge("c", "v2", "v3", 1)
//!     .build()?;
//! assert_eq!(count_pic0(&g), 8.into());
//! assert_eq!(picb0_structure(&g)?.order(), 4.into());
//! # Ok::<(), wchip::Error>(())
//! ```

pub mod arithmetic;
pub mod bernardi;
pub mod divisor;
pub mod error;
pub mod family;
pub mod graph;
pub mod hat;
pub mod io;
pub mod lattice;
pub mod picard;
pub mod rewrite;
pub mod selfcheck;
pub mod trees;

pub use error::{Error, Result};
