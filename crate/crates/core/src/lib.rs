//! Occupational AI exposure from startup descriptions.
//!
//! The crate computes three occupation-level exposure indices:
//!
//! * **AISE**: share of AI-tagged startups whose product an LLM judges able to
//!   replace some of an occupation's tasks.
//! * **RSE**: the same construction over robotics-tagged startups.
//! * **AIOE**: the ability-based exposure index, a level/importance weighted
//!   average of ability exposures derived from an application x ability
//!   relatedness matrix.
//!
//! Scores are then aggregated by employment over metropolitan areas, sectors
//! and projected counties, and compared through correlation, region and
//! skill-frequency analyses.
//!
//! The modules follow the pipeline stages:
//!
//! | module        | stage                                                   |
//! |---------------|---------------------------------------------------------|
//! | [`corpus`]    | O*NET, startup, relatedness and employment loaders      |
//! | [`gateway`]   | prompt rendering, cached LLM classification, mock model |
//! | [`exposure`]  | AISE / RSE / AIOE scores                                |
//! | [`aggregate`] | employment-weighted group and county scores             |
//! | [`analytics`] | correlations, regions, crucial skills, zones, rankings  |
//! | [`pipeline`]  | file-based stages behind the `aise` binary              |
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod aggregate;
pub mod analytics;
pub mod corpus;
pub mod exposure;
pub mod gateway;
pub mod pipeline;

mod numeric;
mod provenance;

pub use provenance::{sha256_hex, sha256_file};
