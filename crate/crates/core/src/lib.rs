pub mod action;
pub mod cli;
pub mod config;
pub mod error;
pub mod exec;
pub mod filling;
pub mod groups;
pub mod growth;
pub mod linalg;
pub mod poly;
pub mod quad;
pub mod report;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};
pub use exec::Exec;
