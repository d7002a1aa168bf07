//! Exact computation with fusion systems of finite groups: higher inverse
//! limits over centric orbit categories, Thompson subgroups and offenders,
//! radical p-chains, and explicit centric linking systems.  All arithmetic is
//! integer-exact; there is no floating point anywhere in the kernel.

pub mod error;
pub mod perm;
pub mod group;
pub mod corpus;
pub mod lattice;
pub mod snf;
pub mod modl;
pub mod finab;
pub mod fusion;
pub mod category;
pub mod orbit;
pub mod bar;
pub mod les;
pub mod offenders;
pub mod limits;
pub mod chains;
pub mod linking;
pub mod experiments;
pub mod report;
pub mod cache;

pub use error::{Error, Result};
