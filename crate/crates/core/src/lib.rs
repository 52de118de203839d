pub mod error;
pub mod grid;
pub mod logdomain;
pub mod netcheck;
pub mod patterns;
pub mod constructions;
pub mod probability;
pub mod search;
pub mod experiments;
pub mod cli;
