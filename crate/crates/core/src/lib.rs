//! Client toolkit for DSpace-style research data repositories.
//!
//! The crate covers the whole workflow of reusing published research data:
//! federated keyword search ([`federation`]), metadata translation
//! ([`translation`]), head/tail preview of remote tables over byte ranges
//! ([`tabular`]), column profiling ([`profile`]), verified downloads
//! ([`client`]) and format conversion. [`usability`] computes the
//! ISO 9241-11 style metrics (completion rate, time-based efficiency,
//! overall relative efficiency, SUS) used to evaluate such tools.

pub mod client;
pub mod config;
pub mod error;
pub mod federation;
pub mod model;
pub mod profile;
pub mod query;
pub mod render;
pub mod tabular;
pub mod tally;
pub mod translation;
pub mod usability;
pub mod wire;

pub use client::{ByteWindow, DownloadManifest, FileSelector, RepoClient};
pub use error::ClientError;
pub use model::{BitstreamRef, Flavor, Handle, ItemRecord, MetadataField, RepositoryEndpoint};
