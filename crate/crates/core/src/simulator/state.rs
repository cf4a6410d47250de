use std::io::{Read, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automorphism::Permutation;
use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::hamiltonian::IsingHamiltonian;

use super::diagonal::DiagonalOperator;

/// Default largest register size; 2^26 amplitudes take 1 GiB.
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// How an expectation value of an Ising Hamiltonian is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpectationMode {
    /// One pass over the amplitudes per stored term.
    PerTerm,
    /// A single pass against the Hamiltonian's diagonal.
    Fused,
}

/// Dense `2^n`-amplitude state; bit `q` of a basis index is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

pub(crate) fn check_qubit_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= usize::BITS as usize - 5 {
        let bytes = (16u128) << n.min(120);
        return Err(Error::Resource(format!(
            "{n} qubits exceed the cap of {cap}; the statevector would need {:.1} GiB",
            bytes as f64 / (1u64 << 30) as f64
        )));
    }
    Ok(())
}

impl StateVector {
    /// `|+⟩^⊗n` under the default qubit cap.
    pub fn init_plus(n: usize) -> Result<Self> {
        Self::init_plus_with_cap(n, DEFAULT_QUBIT_CAP)
    }

    pub fn init_plus_with_cap(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "a register needs at least one qubit".into(),
            ));
        }
        check_qubit_cap(n, cap)?;
        let dim = 1usize << n;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            n,
            amps: vec![a; dim],
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubit_cap(n, DEFAULT_QUBIT_CAP)?;
        if index >= 1 << n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the vector
    /// must be normalized within 1e-9.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes is not a power of two >= 2",
                amps.len()
            )));
        }
        let n = amps.len().trailing_zeros() as usize;
        let s = Self { n, amps };
        if (s.norm_sqr() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(
                "amplitudes are not normalized".into(),
            ));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        self.check_same(other.n)?;
        let overlap: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr())
    }

    /// Largest per-amplitude distance `|a_x − b_x|`.
    pub fn max_amplitude_deviation(&self, other: &StateVector) -> Result<f64> {
        self.check_same(other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::InvalidArgument(format!(
                "dimension mismatch: {} vs {n} qubits",
                self.n
            )));
        }
        Ok(())
    }

    /// Multiplies the amplitude of `|x⟩` by `exp(-i γ E(x))`.
    pub fn apply_phase_separator(&mut self, h: &IsingHamiltonian, gamma: f64) -> Result<()> {
        self.check_same(h.n())?;
        let diag = DiagonalOperator::from_hamiltonian(h)?;
        self.apply_phase_diagonal(&diag, gamma);
        Ok(())
    }

    pub(crate) fn apply_phase_diagonal(&mut self, diag: &DiagonalOperator, gamma: f64) {
        debug_assert_eq!(diag.n(), self.n);
        match diag.levels() {
            Some((index, values)) => {
                let table: Vec<Complex64> = values
                    .iter()
                    .map(|&e| Complex64::from_polar(1.0, -gamma * e))
                    .collect();
                for (a, &l) in self.amps.iter_mut().zip(index) {
                    *a *= table[l as usize];
                }
            }
            None => {
                for (a, &e) in self.amps.iter_mut().zip(diag.values()) {
                    *a *= Complex64::from_polar(1.0, -gamma * e);
                }
            }
        }
    }

    /// `exp(-i β X)` on every qubit: a pair `(a, b)` across a qubit becomes
    /// `(a cos β − i b sin β, b cos β − i a sin β)`.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        let mis = Complex64::new(0.0, -s);
        for q in 0..self.n {
            let stride = 1usize << q;
            for block in self.amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = x * c + y * mis;
                    *b = y * c + x * mis;
                }
            }
        }
    }

    /// Applies the qubit permutation: the amplitude of `|x⟩` moves to
    /// `|a(x)⟩`, where bit `perm(q)` of `a(x)` is bit `q` of `x`.
    pub fn permute(&self, perm: &Permutation) -> Result<StateVector> {
        self.check_same(perm.n())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (x, &a) in self.amps.iter().enumerate() {
            let mut y = 0usize;
            for q in 0..self.n {
                y |= ((x >> q) & 1) << perm.apply(q);
            }
            out[y] = a;
        }
        Ok(StateVector {
            n: self.n,
            amps: out,
        })
    }

    /// `⟨∏_{q∈qubits} Z_q⟩`.
    pub fn pauli_z_expectation(&self, qubits: &[usize]) -> Result<f64> {
        if qubits.is_empty() {
            return Err(Error::InvalidArgument("empty qubit set".into()));
        }
        let mut mask = 0usize;
        for &q in qubits {
            if q >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "qubit {q} out of range for {} qubits",
                    self.n
                )));
            }
            mask |= 1 << q;
        }
        Ok(self.z_mask_expectation(mask))
    }

    fn z_mask_expectation(&self, mask: usize) -> f64 {
        let mut acc = 0.0;
        for (x, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if (x & mask).count_ones() & 1 == 0 {
                acc += p;
            } else {
                acc -= p;
            }
        }
        acc
    }

    pub fn expectation(&self, h: &IsingHamiltonian, mode: ExpectationMode) -> Result<f64> {
        self.check_same(h.n())?;
        match mode {
            ExpectationMode::PerTerm => {
                let mut e = h.offset();
                for (&q, &c) in h.linear() {
                    e += c * self.z_mask_expectation(1 << q);
                }
                for (&(u, v), &c) in h.quadratic() {
                    e += c * self.z_mask_expectation((1 << u) | (1 << v));
                }
                Ok(e)
            }
            ExpectationMode::Fused => {
                Ok(self.expectation_diagonal(&DiagonalOperator::from_hamiltonian(h)?))
            }
        }
    }

    pub(crate) fn expectation_diagonal(&self, diag: &DiagonalOperator) -> f64 {
        self.amps
            .iter()
            .zip(diag.values())
            .map(|(a, &e)| a.norm_sqr() * e)
            .sum()
    }

    /// Draws `shots` basis indices i.i.d. from `|ψ_x|²` with a seeded ChaCha8
    /// generator; results are in draw order.
    pub fn sample_indices(&self, shots: usize, seed: u64) -> Result<Vec<usize>> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be >= 1".into()));
        }
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut total = 0.0;
        for a in &self.amps {
            total += a.norm_sqr();
            cumulative.push(total);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let last = cumulative.len() - 1;
        Ok((0..shots)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * total;
                cumulative.partition_point(|&c| c <= u).min(last)
            })
            .collect())
    }

    pub fn sample_bitstrings(&self, shots: usize, seed: u64) -> Result<Vec<Bitstring>> {
        Ok(self
            .sample_indices(shots, seed)?
            .into_iter()
            .map(|x| Bitstring::from_index(self.n, x))
            .collect())
    }

    /// Debug dump: little-endian `u64` qubit count, then `(re, im)` pairs as
    /// little-endian `f64`.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for a in &self.amps {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_dump<R: Read>(mut r: R) -> Result<StateVector> {
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let n = u64::from_le_bytes(word) as usize;
        check_qubit_cap(n, DEFAULT_QUBIT_CAP)?;
        let mut amps = Vec::with_capacity(1 << n);
        for _ in 0..1usize << n {
            r.read_exact(&mut word)?;
            let re = f64::from_le_bytes(word);
            r.read_exact(&mut word)?;
            let im = f64::from_le_bytes(word);
            amps.push(Complex64::new(re, im));
        }
        Ok(StateVector { n, amps })
    }
}
