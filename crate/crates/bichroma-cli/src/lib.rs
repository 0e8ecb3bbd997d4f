//! Harness around the `bichroma` library: instance generators, file
//! formats, brute-force oracles, SVG rendering, an experiment driver, and
//! the `bichroma` command-line tool built from them.

pub mod commands;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod io;
pub mod oracle;
pub mod svg;
