use thiserror::Error;

use crate::event::EventSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size out of range: {what} = {value}, expected {min}..={max}")]
    Size {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("invalid event subset: {0}")]
    InvalidSubset(String),
    #[error("missing data for subsets {}", fmt_sets(.0))]
    MissingData(Vec<EventSet>),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("unsupported subset order {order}; only singletons and pairs are supported")]
    UnsupportedOrder { order: usize },
    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),
    #[error("no exact value: {0}")]
    Inexact(String),
}

fn fmt_sets(sets: &[EventSet]) -> String {
    sets.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
