use std::collections::HashMap;

use crate::error::Result;
use crate::hamiltonian::IsingHamiltonian;

use super::state::{check_qubit_cap, DEFAULT_QUBIT_CAP};

const MAX_LEVELS: usize = 4096;

/// Precomputed diagonal of an Ising Hamiltonian.
///
/// MaxCut-type Hamiltonians take few distinct energies, so the diagonal also
/// keeps a per-state level index when there are at most a few thousand
/// distinct values; phase application then needs one `exp` per level instead
/// of one per amplitude.
#[derive(Debug, Clone)]
pub struct DiagonalOperator {
    n: usize,
    values: Vec<f64>,
    levels: Option<(Vec<u16>, Vec<f64>)>,
}

impl DiagonalOperator {
    pub fn from_hamiltonian(h: &IsingHamiltonian) -> Result<Self> {
        Self::from_hamiltonian_with_cap(h, DEFAULT_QUBIT_CAP)
    }

    pub fn from_hamiltonian_with_cap(h: &IsingHamiltonian, cap: usize) -> Result<Self> {
        check_qubit_cap(h.n(), cap)?;
        let values = h.diagonal();
        let mut lookup: HashMap<u64, u16> = HashMap::new();
        let mut level_values = Vec::new();
        let mut index = Vec::with_capacity(values.len());
        for &e in &values {
            let next = level_values.len();
            let l = *lookup.entry(e.to_bits()).or_insert_with(|| {
                level_values.push(e);
                next as u16
            });
            if level_values.len() > MAX_LEVELS {
                return Ok(Self {
                    n: h.n(),
                    values,
                    levels: None,
                });
            }
            index.push(l);
        }
        Ok(Self {
            n: h.n(),
            values,
            levels: Some((index, level_values)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn levels(&self) -> Option<(&[u16], &[f64])> {
        self.levels
            .as_ref()
            .map(|(i, v)| (i.as_slice(), v.as_slice()))
    }
}
