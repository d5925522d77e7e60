//! Finite topological spaces, semi-open sets and the so-i-continuity
//! classes, step paths on rational intervals, certified so-i-homotopies and
//! so-i fundamental groups.
#![no_std]

extern crate alloc;

pub mod error;
pub mod group;
pub mod homotopy;
pub mod interval;
pub mod maps;
pub mod paths;
pub mod slices;
pub mod space;

pub use error::{CertError, GroupError, MapError, ParseError, PathError, SliceError, SpaceError};
pub use interval::{Interval, Rat, RatSet};
pub use maps::{Class, SpaceMap};
pub use paths::{Mode, PlMap, StepPath};
pub use space::{FiniteSpace, Subset};
