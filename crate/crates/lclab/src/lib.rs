//! Command-line front end and file formats for `lclab-core`.
//!
//! [`cli::run`] is the whole program; `main` only forwards the process
//! arguments and exit status. [`formats`] holds the JSON and CSV encodings
//! and [`render`] the text and PBM pictures of automaton rows.

pub mod cli;
pub mod formats;
pub mod render;
