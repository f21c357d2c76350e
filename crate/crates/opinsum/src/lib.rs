//! Command-line and HTTP front ends for the `opinsum` summarizer.

pub mod cli;
pub mod http;
pub mod store;
