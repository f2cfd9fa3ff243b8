//! Register layout shared by the GHZ-based protocols.
//!
//! `blocks` independent GHZ states of `width` qubits each. Qubits are ordered
//! block-major, `qubit = block * width + seat`, which is also the order in
//! which the referee measures them. With an odd number of real parties the
//! layout adds one virtual seat (input `00`) that the last party runs.

use alloc::vec::Vec;

use super::{LocalOp, LocalProgram, ProtocolError};
use crate::bits::Bits;
use num_complex::Complex64;

use crate::qsim::{ghz, phi_basis, Gate, MeasurementBasis, QsimError, StateVector, MAX_QUBITS};

#[derive(Debug, Clone)]
pub(crate) struct GhzBlocks {
    pub parties: usize,
    pub width: usize,
    pub blocks: usize,
    resource: StateVector,
    block_basis: MeasurementBasis,
}

impl GhzBlocks {
    pub fn new(parties: usize, blocks: usize) -> Result<Self, ProtocolError> {
        if parties < 2 {
            return Err(ProtocolError::BadParameters(alloc::format!("k = {parties}, need k >= 2")));
        }
        if blocks < 1 {
            return Err(ProtocolError::BadParameters("l must be at least 1".into()));
        }
        let width = parties + parties % 2;
        if width * blocks > MAX_QUBITS {
            return Err(ProtocolError::BadParameters(alloc::format!(
                "{} message qubits exceeds the simulator limit of {MAX_QUBITS}",
                width * blocks
            )));
        }
        let block_state = ghz(width)?;
        let mut resource = block_state.clone();
        for _ in 1..blocks {
            resource = resource.tensor(&block_state)?;
        }
        Ok(GhzBlocks { parties, width, blocks, resource, block_basis: phi_basis(width)? })
    }

    pub fn qubit_count(&self) -> usize {
        self.width * self.blocks
    }

    pub fn resource(&self) -> &StateVector {
        &self.resource
    }

    /// Product-basis vector for `outcome` (block 0 in the high bits).
    pub fn referee_vector(&self, outcome: usize) -> Result<StateVector, ProtocolError> {
        let block_mask = (1usize << self.width) - 1;
        let mut v: Option<StateVector> = None;
        for b in 0..self.blocks {
            let shift = (self.blocks - 1 - b) * self.width;
            let factor = &self.block_basis.vectors()[(outcome >> shift) & block_mask];
            v = Some(match v {
                None => factor.clone(),
                Some(acc) => acc.tensor(factor)?,
            });
        }
        Ok(v.expect("at least one block"))
    }

    /// The full product basis, materialized.
    pub fn referee_basis(&self) -> Result<MeasurementBasis, ProtocolError> {
        let mut basis = self.block_basis.clone();
        for _ in 1..self.blocks {
            basis = basis.tensor(&self.block_basis)?;
        }
        Ok(basis)
    }

    /// Outcome probabilities in the product basis, computed by changing basis
    /// one block at a time.
    pub fn measure(&self, state: &StateVector) -> Result<Vec<f64>, ProtocolError> {
        if state.qubit_count() != self.qubit_count() {
            return Err(QsimError::DimensionMismatch(state.dim(), 1 << self.qubit_count()).into());
        }
        let bdim = 1usize << self.width;
        let mut amps: Vec<Complex64> = state.amplitudes().to_vec();
        let mut scratch = alloc::vec![Complex64::new(0.0, 0.0); bdim];
        for b in 0..self.blocks {
            let stride = 1usize << ((self.blocks - 1 - b) * self.width);
            for base in 0..amps.len() {
                if !(base / stride).is_multiple_of(bdim) {
                    continue;
                }
                for (o, vec) in self.block_basis.vectors().iter().enumerate() {
                    scratch[o] =
                        vec.amplitudes().iter().enumerate().map(|(i, c)| c.conj() * amps[base + i * stride]).sum();
                }
                for (o, z) in scratch.iter().enumerate() {
                    amps[base + o * stride] = *z;
                }
            }
        }
        Ok(amps.iter().map(|z| z.norm_sqr()).collect())
    }

    /// Seats run by `party`; the last party also runs the virtual seat.
    pub fn seats(&self, party: usize) -> core::ops::Range<usize> {
        if party + 1 == self.parties {
            party..self.width
        } else {
            party..party + 1
        }
    }

    pub fn qubit(&self, block: usize, seat: usize) -> usize {
        block * self.width + seat
    }

    pub fn owned_qubits(&self, party: usize) -> Vec<usize> {
        let mut q: Vec<usize> = (0..self.blocks)
            .flat_map(|b| self.seats(party).map(move |s| (b, s)))
            .map(|(b, s)| self.qubit(b, s))
            .collect();
        q.sort_unstable();
        q
    }

    pub fn party_costs(&self) -> Vec<usize> {
        (0..self.parties).map(|p| self.seats(p).len() * self.blocks).collect()
    }

    /// Builds `party`'s program: on each of its qubits, `Z` if the phase bit
    /// is set, then `X` if the flip bit is set. `flips(seat, block)` returns
    /// `(flip, phase)`.
    pub fn program(&self, party: usize, flips: impl Fn(usize, usize) -> (bool, bool)) -> LocalProgram {
        let mut ops = Vec::new();
        for block in 0..self.blocks {
            for seat in self.seats(party) {
                let qubit = self.qubit(block, seat);
                let (flip, phase) = flips(seat, block);
                if phase {
                    ops.push(LocalOp::Gate { gate: Gate::Z, qubit });
                }
                if flip {
                    ops.push(LocalOp::Gate { gate: Gate::X, qubit });
                }
            }
        }
        LocalProgram { party, qubits: self.owned_qubits(party), ops, encoding: None }
    }

    /// Applies every party's program to the resource and measures in the
    /// product basis.
    pub fn execute(&self, programs: &[LocalProgram]) -> Result<(StateVector, Vec<f64>), ProtocolError> {
        let mut state = self.resource.clone();
        for p in programs {
            state = p.apply(&state)?;
        }
        let outcomes = self.measure(&state)?;
        Ok((state, outcomes))
    }

    /// Per-block `(sum of y, z)` of a product-basis outcome, block 0 first.
    pub fn decode(&self, outcome: usize) -> Vec<(bool, bool)> {
        let block_mask = (1usize << self.width) - 1;
        (0..self.blocks)
            .map(|b| {
                let shift = (self.blocks - 1 - b) * self.width;
                let block = (outcome >> shift) & block_mask;
                let y = block >> 1;
                ((y.count_ones() % 2) == 1, block & 1 == 1)
            })
            .collect()
    }

    /// Referee basis vectors whose decoded value satisfies `keep`.
    pub fn basis_vectors_where(
        &self,
        keep: impl Fn(&[(bool, bool)]) -> bool,
    ) -> Result<Vec<StateVector>, ProtocolError> {
        (0..1usize << self.qubit_count()).filter(|&i| keep(&self.decode(i))).map(|i| self.referee_vector(i)).collect()
    }
}

/// Even-parity strings of length `width`, in increasing order.
pub(crate) fn even_parity_strings(width: usize) -> Vec<Bits> {
    Bits::all(width).filter(|b| !b.parity()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::measure;

    #[test]
    fn blockwise_measurement_matches_dense_basis() {
        for (k, l) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
            let layout = GhzBlocks::new(k, l).unwrap();
            let dense = layout.referee_basis().unwrap();
            assert_eq!(dense.len(), 1 << layout.qubit_count());
            // a non-trivial state: flip and phase a few qubits of the resource
            let mut s = layout.resource().clone();
            for q in (0..layout.qubit_count()).step_by(2) {
                s = s.apply_gate(Gate::X, q).unwrap().apply_gate(Gate::H, q).unwrap();
            }
            let fast = layout.measure(&s).unwrap();
            let slow = measure(&s, &dense).unwrap();
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-12);
            }
            for i in (0..dense.len()).step_by(5) {
                assert_eq!(&layout.referee_vector(i).unwrap(), &dense.vectors()[i]);
            }
            assert_eq!(layout.block_basis.len(), 1 << layout.width);
        }
    }

    #[test]
    fn odd_parties_get_a_virtual_seat() {
        let layout = GhzBlocks::new(3, 2).unwrap();
        assert_eq!(layout.width, 4);
        assert_eq!(layout.owned_qubits(2), [2, 3, 6, 7]);
        assert_eq!(layout.owned_qubits(0), [0, 4]);
        assert_eq!(layout.party_costs(), [2, 2, 4]);
    }

    #[test]
    fn decode_reads_block_major() {
        let layout = GhzBlocks::new(2, 2).unwrap();
        // block 0 outcome y=1,z=0 (0b10), block 1 outcome y=0,z=1 (0b01)
        assert_eq!(layout.decode(0b1001), [(true, false), (false, true)]);
    }
}
