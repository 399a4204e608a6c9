//! Decision engine for embedding problems with p-group kernel over étale
//! covers of curves, driven by Hasse–Witt coefficient tables.

pub mod cohomology;
pub mod embedding;
pub mod error;
pub mod field;
pub mod group;
pub mod hasse_witt;
pub mod matrix;
pub mod modrep;
pub mod poly;
pub mod projectives;
pub mod selftest;
pub mod settings;
pub mod text;

pub use error::{Error, Result};
pub use settings::Settings;
