pub mod apps;
pub mod catalog;
pub mod cli;
pub mod dsl;
pub mod endspace;
pub mod error;
pub mod leveling;
pub mod oracle;
pub mod ordinal;
pub mod report;
pub mod stream;
pub mod template;
pub mod tgraph;
pub mod transform;
pub mod treespec;
pub mod truncation;

pub use error::{Error, Result};
