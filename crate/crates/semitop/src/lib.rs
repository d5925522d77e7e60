//! File formats, parallel search and the command-line front end over
//! [`semitop_core`].

pub mod cli;
pub mod formats;
pub mod search;
pub mod sexpr;
