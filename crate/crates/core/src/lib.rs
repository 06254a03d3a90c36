//! Exact computations on finite metric, partial metric and M-metric spaces.
//!
//! A [`FiniteSpace`] is a labelled symmetric table of nonnegative rationals.
//! On top of it the crate provides:
//!
//! - [`axioms`]: the three axiom systems, with every failing instance reported
//!   as an [`AxiomViolation`] carrying both sides of the inequality.
//! - [`topology`]: p-balls and m-balls, the topologies they generate, and
//!   separation checks.
//! - [`convergence`]: limits and Cauchy checks for rational sequences in the
//!   parametric space `max{x, y}`, and four modes of continuity between finite
//!   spaces.
//! - [`caristi`]: Caristi-type fixed point conditions, the dominated-set walk
//!   and Ekeland-type points.
//! - [`explorer`]: seeded search for separating examples and counterexamples.
//!
//! All arithmetic is exact; see [`Rational`].
//!
//! ```
//! use mmetric::{catalog, classify};
//!
//! let class = classify(&catalog::example_one());
//! assert!(class.is_m_metric && !class.is_partial);
//! ```

pub mod axioms;
pub mod caristi;
pub mod catalog;
pub mod convergence;
pub mod explorer;
pub mod rational;
pub mod space;
pub mod topology;

pub use axioms::{axiom_report, classify, AxiomId, AxiomViolation, Mode, SpaceClassification};
pub use caristi::{
    ekeland_point, CaristiInstance, EkelandCertificate, IterationTrace, Termination, Variant,
};
pub use rational::{q, Rational};
pub use space::{FiniteSpace, PointMap, PointSet, Potential, SpaceError};
pub use topology::{generate_topology, separation_report, FiniteTopology, TopologyKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/spaces.md")]
    pub struct Spaces;
    #[doc = include_str!("../../../book/src/topology.md")]
    pub struct Topology;
    #[doc = include_str!("../../../book/src/convergence.md")]
    pub struct Convergence;
    #[doc = include_str!("../../../book/src/caristi.md")]
    pub struct Caristi;
    #[doc = include_str!("../../../book/src/explorer.md")]
    pub struct Explorer;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
