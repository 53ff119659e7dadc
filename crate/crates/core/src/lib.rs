pub mod bohr;
pub mod canonical;
pub mod classical;
pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
pub mod integrate;
pub mod limits;
pub mod phase;
pub mod precision;
pub mod spectrum;
pub mod state;
