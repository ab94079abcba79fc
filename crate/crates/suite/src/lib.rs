//! Empty; the suite lives in `tests/acceptance.rs`.
