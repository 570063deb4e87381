//! Std companion of `rico-core`: JSON and CSV formats, a wall-clock solver
//! race with cancellation, the comparison sweep and the `rico` CLI.

pub mod cli;
pub mod compare;
pub mod formats;
pub mod race;
pub mod trace;

pub use formats::{read_instance, read_solution, write_instance, write_solution, FormatError};
pub use race::{race, spawn_race, Applied, RaceReport, WallClock};
