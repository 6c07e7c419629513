//! Batch front end: scenario parsing, reproduction presets, sweep
//! execution and the verification checklist.

pub mod presets;
pub mod runner;
pub mod scenario;
pub mod verify;
