pub mod algolib;
pub mod anneal;
pub mod counts;
pub mod decode;
pub mod descriptor;
pub mod error;
pub mod exec;
pub mod gate;
mod json;
pub mod rational;
pub mod run;
pub mod validation;
pub use json::to_canonical_string;
