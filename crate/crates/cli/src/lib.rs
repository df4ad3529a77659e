//! Configuration layer of the `netcorr` binary.

pub mod config;
