//! GHZ-based protocol for the bitwise parity `Sum2` of two-bit inputs.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::ghz_blocks::{even_parity_strings, GhzBlocks};
use super::{
    distribution_from, product_inputs, Cost, CostUnit, LocalProgram, Message, MessageState, Output, Protocol,
    ProtocolError, Transcript,
};
use crate::bits::Bits;
use crate::qsim::{mix, StateVector};
use crate::SeededRng;

/// `(sum_j x_j^1, sum_j x_j^2)` over GF(2).
pub fn sum2_reference(inputs: &[Bits]) -> Result<(bool, bool), ProtocolError> {
    let mut acc = (false, false);
    for (party, x) in inputs.iter().enumerate() {
        if x.len() != 2 {
            return Err(ProtocolError::WrongInputLength { party, expected: 2, got: x.len() });
        }
        acc.0 ^= x.get(0);
        acc.1 ^= x.get(1);
    }
    Ok(acc)
}

pub(crate) fn pack(pair: (bool, bool)) -> Output {
    ((pair.0 as u32) << 1) | pair.1 as u32
}

/// Each party holds one qubit of a shared GHZ state and a share of an
/// even-parity random string. Party `j` applies `Z` when `x_j^2 = 1` and then
/// `X` when `x_j^1 xor r_j = 1`.
#[derive(Debug, Clone)]
pub struct Sum2Protocol {
    layout: GhzBlocks,
    randomness: Vec<Bits>,
}

impl Sum2Protocol {
    pub fn new(k: usize) -> Result<Self, ProtocolError> {
        let layout = GhzBlocks::new(k, 1)?;
        let randomness = even_parity_strings(layout.width);
        Ok(Sum2Protocol { layout, randomness })
    }

    pub fn k(&self) -> usize {
        self.layout.parties
    }

    /// Number of GHZ qubits, `k` rounded up to even.
    pub fn width(&self) -> usize {
        self.layout.width
    }

    pub fn randomness_value(&self, index: usize) -> Option<Bits> {
        self.randomness.get(index).copied()
    }

    pub fn resource(&self) -> &StateVector {
        self.layout.resource()
    }

    /// The referee's product measurement basis, materialized.
    pub fn referee(&self) -> crate::qsim::MeasurementBasis {
        self.layout.referee_basis().expect("layout was validated at construction")
    }

    fn seat_input(&self, party: usize, seat: usize, input: Bits) -> Bits {
        if seat == party {
            input
        } else {
            Bits::zeros(2)
        }
    }
}

impl Protocol for Sum2Protocol {
    fn name(&self) -> &'static str {
        "sum2"
    }

    fn party_count(&self) -> usize {
        self.layout.parties
    }

    fn input_len(&self, _party: usize) -> usize {
        2
    }

    fn randomness_count(&self) -> usize {
        self.randomness.len()
    }

    fn describe_randomness(&self, index: usize) -> String {
        alloc::format!("r={}", self.randomness[index])
    }

    fn reference(&self, inputs: &[Bits]) -> Result<Option<Output>, ProtocolError> {
        self.check_inputs(inputs)?;
        Ok(Some(pack(sum2_reference(inputs)?)))
    }

    fn output_classes(&self) -> Vec<Output> {
        (0..4).collect()
    }

    fn format_output(&self, output: Output) -> String {
        alloc::format!("{}{}", output >> 1, output & 1)
    }

    fn input_domain_size(&self) -> u128 {
        1u128 << (2 * self.k())
    }

    fn inputs(&self) -> Box<dyn Iterator<Item = Vec<Bits>> + '_> {
        Box::new(product_inputs(alloc::vec![2; self.k()]))
    }

    fn sample_input(&self, rng: &mut SeededRng, class: Output) -> Vec<Bits> {
        let k = self.k();
        let mut xs: Vec<Bits> = (0..k - 1).map(|_| Bits::new(2, rng.gen_range(0..4))).collect();
        let partial = xs.iter().fold(0u64, |acc, x| acc ^ x.word());
        // bit 0 of the word is x^1, bit 1 is x^2
        let target = ((class >> 1) & 1) as u64 | (((class & 1) as u64) << 1);
        xs.push(Bits::new(2, partial ^ target));
        xs
    }

    fn local_program(&self, party: usize, input: Bits, randomness: usize) -> Result<LocalProgram, ProtocolError> {
        if party >= self.k() || input.len() != 2 {
            return Err(ProtocolError::WrongInputLength { party, expected: 2, got: input.len() });
        }
        let r = *self.randomness.get(randomness).ok_or(ProtocolError::BadRandomness(randomness))?;
        Ok(self.layout.program(party, |seat, _block| {
            let x = self.seat_input(party, seat, input);
            (x.get(0) ^ r.get(seat), x.get(1))
        }))
    }

    fn local_state(&self, party: usize, input: Bits, randomness: usize) -> Result<StateVector, ProtocolError> {
        Ok(self.local_program(party, input, randomness)?.apply(self.resource())?)
    }

    fn run(&self, inputs: &[Bits], randomness: usize) -> Result<Transcript, ProtocolError> {
        self.check_inputs(inputs)?;
        let programs = inputs
            .iter()
            .enumerate()
            .map(|(party, x)| self.local_program(party, *x, randomness))
            .collect::<Result<Vec<_>, _>>()?;
        let (state, outcomes) = self.layout.execute(&programs)?;
        let output_distribution = distribution_from(&outcomes, |i| pack(self.layout.decode(i)[0]));
        Ok(Transcript {
            inputs: inputs.to_vec(),
            randomness,
            programs,
            message: Message::Quantum(state),
            outcome_distribution: outcomes,
            output_distribution,
            cost: self.cost(),
        })
    }

    fn cost(&self) -> Cost {
        Cost { value: self.layout.qubit_count(), unit: CostUnit::Qubits }
    }

    fn party_costs(&self) -> Vec<usize> {
        self.layout.party_costs()
    }

    /// Uniform mixture of the `2^(k-2)` basis states `Phi(y, b2)` with
    /// `sum y = b1`.
    fn simulator(&self, output: Output) -> Result<MessageState, ProtocolError> {
        let target = ((output >> 1) & 1 == 1, output & 1 == 1);
        let states = self.layout.basis_vectors_where(|d| d[0] == target)?;
        let w = 1.0 / states.len() as f64;
        let ensemble: Vec<_> = states.into_iter().map(|s| (w, s)).collect();
        Ok(MessageState::Quantum(mix(&ensemble)?))
    }
}
