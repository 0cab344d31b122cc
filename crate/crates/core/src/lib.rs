//! Exact integrality gaps of knapsack programs
//! `min { c.x : a.x = b, x in Z^n_{>=0} }`, Frobenius numbers through group
//! relaxations, closed-form gap bounds, and sampling experiments over random
//! coprime instances.
//!
//! All arithmetic on costs is exact ([`Rational`]). Irrational quantities
//! (roots, powers) are rounded in the direction that keeps the reported bound
//! valid.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod export;
pub mod gap;
pub mod group;
pub mod instances;
pub mod limits;
pub mod lovasz;
pub mod model;
pub mod rational;
pub mod serde_rational;

pub use bounds::{check_bounds, BoundReport, RhoEstimate};
pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, ExperimentSummary, SampleRecord, TailPoint};
pub use gap::{gap_exact, GapReport};
pub use group::{frobenius, group_minima, GroupTable};
pub use instances::SamplerConfig;
pub use limits::Limits;
pub use lovasz::{lovasz_example, LovaszExample};
pub use model::{basis_reduction, BasisReduction, CostVector, KnapsackInstance};
pub use rational::{parse_rational, Rational};
