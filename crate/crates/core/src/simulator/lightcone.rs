//! Expectation values evaluated on the reverse causal cone of the measured
//! terms only.
//!
//! After `p` layers, a diagonal observable supported on a qubit set `S`
//! depends only on the qubits within interaction-graph distance `p` of `S`,
//! and only on the ansatz terms supported there. The evaluator simulates the
//! ansatz restricted to the union of those balls over all measured terms,
//! which is exact and costs `2^|cone|` instead of `2^n`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hamiltonian::IsingHamiltonian;

use super::ansatz::{AnsatzParams, QaoaAnsatz};
use super::diagonal::DiagonalOperator;
use super::state::DEFAULT_QUBIT_CAP;

#[derive(Debug, Clone)]
pub struct LightconeEvaluator {
    layers: usize,
    register: Vec<usize>,
    offset: f64,
    ansatz: Option<QaoaAnsatz>,
    measure: Option<DiagonalOperator>,
}

/// Qubits within distance `layers` of any measured term's support, on the
/// coupling graph of `h_ansatz`.
pub fn causal_cone(
    h_ansatz: &IsingHamiltonian,
    h_measure: &IsingHamiltonian,
    layers: usize,
) -> Vec<usize> {
    let coupling = Graph::new(h_ansatz.n(), h_ansatz.quadratic().keys().copied())
        .expect("Hamiltonian couplings are valid edges");
    let mut inside = vec![false; h_ansatz.n()];
    for support in h_measure.supports() {
        for (v, d) in coupling.distances_from(&support).into_iter().enumerate() {
            if d.is_some_and(|d| d <= layers) {
                inside[v] = true;
            }
        }
    }
    (0..h_ansatz.n()).filter(|&v| inside[v]).collect()
}

impl LightconeEvaluator {
    /// Prepares an evaluator valid for any parameter vector with at most
    /// `layers` layers.
    pub fn new(
        h_ansatz: &IsingHamiltonian,
        h_measure: &IsingHamiltonian,
        layers: usize,
    ) -> Result<Self> {
        Self::with_cap(h_ansatz, h_measure, layers, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(
        h_ansatz: &IsingHamiltonian,
        h_measure: &IsingHamiltonian,
        layers: usize,
        cap: usize,
    ) -> Result<Self> {
        if h_ansatz.n() != h_measure.n() {
            return Err(Error::InvalidArgument(format!(
                "ansatz acts on {} qubits, observable on {}",
                h_ansatz.n(),
                h_measure.n()
            )));
        }
        if layers == 0 {
            return Err(Error::InvalidArgument("layers must be >= 1".into()));
        }
        let register = causal_cone(h_ansatz, h_measure, layers);
        if register.is_empty() {
            return Ok(Self {
                layers,
                register,
                offset: h_measure.offset(),
                ansatz: None,
                measure: None,
            });
        }
        let (sub_ansatz, _) = h_ansatz.restricted_to(&register);
        let (sub_measure, _) = h_measure.restricted_to(&register);
        Ok(Self {
            layers,
            offset: h_measure.offset(),
            ansatz: Some(QaoaAnsatz::with_cap(&sub_ansatz, cap)?),
            measure: Some(DiagonalOperator::from_hamiltonian_with_cap(
                &sub_measure,
                cap,
            )?),
            register,
        })
    }

    /// Qubits simulated, in original labels.
    pub fn register(&self) -> &[usize] {
        &self.register
    }

    pub fn expectation(&self, params: &AnsatzParams) -> Result<f64> {
        if params.layers() > self.layers {
            return Err(Error::InvalidArgument(format!(
                "evaluator prepared for {} layers, got {}",
                self.layers,
                params.layers()
            )));
        }
        match (&self.ansatz, &self.measure) {
            (Some(ansatz), Some(measure)) => {
                Ok(ansatz.state(params)?.expectation_diagonal(measure))
            }
            _ => Ok(self.offset),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::edge_classes;
    use crate::graph::{full_rary_tree, star_graph};
    use crate::hamiltonian::{full_hamiltonian, reduced_hamiltonian, Convention};

    #[test]
    fn reduced_cone_is_smaller_on_perfect_tree() {
        let g = full_rary_tree(2, 15).unwrap();
        let full = full_hamiltonian(&g, Convention::MaxCut);
        let red = reduced_hamiltonian(&g, &edge_classes(&g).unwrap(), Convention::MaxCut).unwrap();
        assert_eq!(causal_cone(&full, &full, 1).len(), 15);
        assert_eq!(causal_cone(&full, &red, 1), vec![0, 1, 2, 3, 4, 7, 8]);
    }

    #[test]
    fn star_cone_is_everything() {
        let g = star_graph(9).unwrap();
        let full = full_hamiltonian(&g, Convention::MaxCut);
        let red = reduced_hamiltonian(&g, &edge_classes(&g).unwrap(), Convention::MaxCut).unwrap();
        assert_eq!(causal_cone(&full, &red, 1).len(), 9);
    }

    #[test]
    fn rejects_too_many_layers() {
        let g = full_rary_tree(2, 5).unwrap();
        let h = full_hamiltonian(&g, Convention::MaxCut);
        let ev = LightconeEvaluator::new(&h, &h, 1).unwrap();
        assert!(ev.expectation(&AnsatzParams::zeros(2).unwrap()).is_err());
    }
}
