//! Global power allocation for Gaussian interference networks.
//!
//! * [`mm`]: boxes, bisection and mixed-monotonic bounds.
//! * [`network`]: the interference channel, rate/GEE functions and the MM
//!   problem builders.
//! * [`maximize`]: branch-and-bound for throughput and GEE maximization.
//! * [`sit`]: successive incumbent transcending branch-and-bound for transmit
//!   power minimization under a throughput floor.
//! * [`scenario`]: random multi-cell deployments.
//! * [`harness`]: strategies, power sweeps and CSV output.

pub mod error;
pub mod fringe;
pub mod harness;
pub mod maximize;
pub mod mm;
pub mod network;
pub mod scenario;
pub mod sit;
pub mod solution;

pub use error::{Error, Result};
pub use maximize::{maximize, Selection, SolverConfig};
pub use mm::{bisect, lower_bound_min, upper_bound_max, FnPair, Hyperrect, MixedMonotonic, Negated};
pub use network::{build_problem, InterferenceNetwork, PowerModel, Problem, ProblemKind, ProblemSpec};
pub use scenario::{Deployment, ScenarioParams};
pub use sit::{minimize_sit, reduce_box_powersum, PowerSumReducer, SitConfig};
pub use solution::{Solution, Status};
