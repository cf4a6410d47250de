//! Exact dense-statevector simulation of the QAOA ansatz.

mod ansatz;
mod diagonal;
mod lightcone;
mod state;
mod symmetry;

pub use ansatz::{build_qaoa_state, AnsatzParams, QaoaAnsatz};
pub use diagonal::DiagonalOperator;
pub use lightcone::{causal_cone, LightconeEvaluator};
pub use state::{ExpectationMode, StateVector, DEFAULT_QUBIT_CAP};
pub use symmetry::verify_orbit_symmetry;
