//! Exact web vectors for `sl_n` Fontaine webs.
//!
//! The crate evaluates the stranding state sum of a web, checks the result
//! against a composition of CKM maps, builds tableau basis webs and verifies
//! the web relations, all in exact Laurent-polynomial arithmetic.

pub mod ckmoracle;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod invariantvec;
pub mod qlaurent;
pub mod relations;
pub mod stranding;
pub mod tableauweb;
pub mod tensorspace;
pub mod uqaction;
pub mod webgraph;

pub use error::{Error, Result};
