use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::IsingHamiltonian;

use super::diagonal::DiagonalOperator;
use super::state::{StateVector, DEFAULT_QUBIT_CAP};

/// Mixer angles `betas` and phase angles `gammas` (radians), one of each per
/// layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

impl AnsatzParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() || betas.len() != gammas.len() {
            return Err(Error::InvalidArgument(format!(
                "need p >= 1 betas and gammas of equal length, got {} and {}",
                betas.len(),
                gammas.len()
            )));
        }
        Ok(Self { betas, gammas })
    }

    pub fn zeros(p: usize) -> Result<Self> {
        Self::new(vec![0.0; p], vec![0.0; p])
    }

    /// Reads the flat layout `[β_1..β_p, γ_1..γ_p]`.
    pub fn from_flat(theta: &[f64]) -> Result<Self> {
        if theta.is_empty() || !theta.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "flat parameter vector of length {} is not 2p",
                theta.len()
            )));
        }
        let (b, g) = theta.split_at(theta.len() / 2);
        Self::new(b.to_vec(), g.to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    pub fn layers(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }
}

/// A QAOA ansatz with its phase-separator diagonal precomputed, for repeated
/// state preparation.
#[derive(Debug, Clone)]
pub struct QaoaAnsatz {
    cap: usize,
    phase: DiagonalOperator,
}

impl QaoaAnsatz {
    pub fn new(h: &IsingHamiltonian) -> Result<Self> {
        Self::with_cap(h, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(h: &IsingHamiltonian, cap: usize) -> Result<Self> {
        Ok(Self {
            cap,
            phase: DiagonalOperator::from_hamiltonian_with_cap(h, cap)?,
        })
    }

    pub fn n(&self) -> usize {
        self.phase.n()
    }

    /// `∏_l e^{-iβ_l H_M} e^{-iγ_l H} |+⟩^⊗n`, layer 1 applied first and the
    /// phase separator before the mixer within each layer.
    pub fn state(&self, params: &AnsatzParams) -> Result<StateVector> {
        let mut s = StateVector::init_plus_with_cap(self.n(), self.cap)?;
        for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
            s.apply_phase_diagonal(&self.phase, gamma);
            s.apply_mixer(beta);
        }
        Ok(s)
    }
}

pub fn build_qaoa_state(h_ansatz: &IsingHamiltonian, params: &AnsatzParams) -> Result<StateVector> {
    QaoaAnsatz::new(h_ansatz)?.state(params)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

    use super::*;
    use crate::graph::{full_rary_tree, path_graph};
    use crate::hamiltonian::{full_hamiltonian, Convention};
    use crate::simulator::ExpectationMode;

    #[test]
    fn param_layout() {
        let p = AnsatzParams::from_flat(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(p.betas(), &[0.1, 0.2]);
        assert_eq!(p.gammas(), &[0.3, 0.4]);
        assert_eq!(p.to_flat(), vec![0.1, 0.2, 0.3, 0.4]);
        assert!(AnsatzParams::from_flat(&[0.1]).is_err());
        assert!(AnsatzParams::new(vec![], vec![]).is_err());
        assert!(AnsatzParams::new(vec![0.1], vec![0.1, 0.2]).is_err());
    }

    #[test]
    fn zero_angles_give_plus_state() {
        let g = full_rary_tree(2, 6).unwrap();
        let h = full_hamiltonian(&g, Convention::MaxCut);
        let s = build_qaoa_state(&h, &AnsatzParams::zeros(2).unwrap()).unwrap();
        assert_eq!(s, StateVector::init_plus(6).unwrap());
        let e = s.expectation(&h, ExpectationMode::PerTerm).unwrap();
        assert!((e - g.m() as f64 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_optimum() {
        let h = full_hamiltonian(&path_graph(2).unwrap(), Convention::MaxCut);
        let params = AnsatzParams::new(vec![FRAC_PI_8], vec![FRAC_PI_2]).unwrap();
        let s = build_qaoa_state(&h, &params).unwrap();
        let e = s.expectation(&h, ExpectationMode::Fused).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
    }
}
