//! Solvers for average-case Generalized Subset Sum (GSS): given a bound M,
//! an input vector x in [0:M-1]^n, a coefficient set C and a target tau, find
//! c in C^n with c.x = tau. Provides a representation-technique solver, a
//! meet-in-the-middle baseline, a brute-force oracle, reductions from Subset
//! Sum and Number Balancing, and Monte-Carlo experiments over random inputs.

pub mod coeffs;
pub mod experiments;
pub mod instance;
pub mod mitm;
pub mod oracle;
pub mod reductions;
pub mod repsolver;
pub mod work;

pub use coeffs::{CoefficientSet, Profile, SolverConfig, TranslatedSet};
pub use instance::{GssInstance, Solution};
pub use work::WorkStats;

/// Default memory budget in bytes for DP tables and candidate lists,
/// overridable through the GSSKIT_BUDGET_BYTES environment variable (read by
/// the CLI and passed down explicitly).
pub const DEFAULT_BUDGET_BYTES: u64 = 256 << 20;
