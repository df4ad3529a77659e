//! Acceptance checks for `netcorr` live in `tests/acceptance.rs`.
