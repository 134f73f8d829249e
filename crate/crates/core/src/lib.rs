//! Finite metric spaces, Gromov–Hausdorff distance, Cantor-type and
//! telescope constructions, geometric invariants, and branching geodesics
//! in the Gromov–Hausdorff space.

pub mod acceptance;
pub mod analysis;
pub mod constructors;
pub mod geodesics;
pub mod gh;
pub mod io;
pub mod lipschitz;
pub mod oracle;
pub mod random;
pub mod space;

pub use space::{FiniteMetricSpace, MetricError, PseudoMetricSpace};
