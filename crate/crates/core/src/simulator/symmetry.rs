use crate::automorphism::EdgeClassPartition;
use crate::error::{Error, Result};

use super::state::StateVector;

/// Largest gap between `⟨Z_u Z_v⟩` of any edge and that of its class
/// representative. Zero (up to rounding) on any state that is invariant under
/// the automorphisms the classes came from.
pub fn verify_orbit_symmetry(s: &StateVector, classes: &EdgeClassPartition) -> Result<f64> {
    if classes.num_vertices() != s.n() {
        return Err(Error::InvalidArgument(format!(
            "classes describe {} vertices, state has {} qubits",
            classes.num_vertices(),
            s.n()
        )));
    }
    let mut worst: f64 = 0.0;
    for class in classes.classes() {
        let (a, b) = class.representative;
        let reference = s.pauli_z_expectation(&[a, b])?;
        for &(u, v) in &class.edges {
            worst = worst.max((s.pauli_z_expectation(&[u, v])? - reference).abs());
        }
    }
    Ok(worst)
}
