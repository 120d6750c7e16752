//! Maximal-point search for cone-ordered product spaces.
//!
//! The library carries decidable convex cones and their induced
//! quasi-orders, scaling maps built from weighted power terms, conical
//! gauge functions evaluated as certified enclosures, and
//! certificate-producing solvers for maximal points of the product order
//! over a finite metric carrier. Every solver answer ships with an
//! exhaustive verification transcript, and every algebraic law of the
//! construction has a seeded validator in [`props`].

pub mod cone;
pub mod ekeland;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod gauge;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod metric;
pub mod props;
pub mod report;
pub mod scaling;
pub mod solve;
pub mod vector;
pub mod verify;

pub use cone::{archimedean_falsify, ConeKind, ConvexCone, Pointedness};
pub use ekeland::{ekeland_solve, EkelandCertificate};
pub use error::{Error, Result};
pub use gauge::{gamma_linear_orthant, GaugeContext, GaugeValue};
pub use graph::SuccessorGraph;
pub use instance::{Instance, ProductPoint};
pub use metric::MetricSpace;
pub use props::props_suite;
pub use report::{LawCheck, LawReport, LawStatus, SamplingPolicy};
pub use scaling::{NormalFunction, PowerTerm};
pub use solve::{
    find_maximal_bb, find_maximal_gauge, find_maximal_scc, CheckEntry, CheckStatus,
    MaximalCertificate, Potential, SlackSchedule, SolveMode, SolveOutcome, SolveStats,
};
pub use vector::Vector;
pub use verify::{
    bounded_below_check, check_ascending_cauchy, verify_certificate, BoundedBelowReport,
    CauchyReport, VerifyReport,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
