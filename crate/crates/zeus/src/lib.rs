//! Threaded multistart driver, experiment harness, file formats and CLI
//! support for [`zeus_core`].

pub mod audit;
pub mod bench;
pub mod driver;
pub mod error;
pub mod fit;
pub mod output;
pub mod plan;

pub use driver::zeus_run;
pub use error::{Error, Result};
pub use zeus_core;
