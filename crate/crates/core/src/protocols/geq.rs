//! GHZ-based protocol for the generalized equality predicate `GEQ_2l`.
//!
//! Inputs are masked by a shared nonzero field element `r'` in GF(2^(2l))
//! before being encoded into `l` GHZ blocks exactly as in `Sum2`. Because the
//! mask is linear, the masked inputs sum to zero iff the inputs do.

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
use crate::gf2m::{find_irreducible, Modulus};
use crate::qsim::{mix, StateVector};
use crate::SeededRng;

fn check_lengths(inputs: &[Bits], len: usize) -> Result<(), ProtocolError> {
    for (party, x) in inputs.iter().enumerate() {
        if x.len() != len {
            return Err(ProtocolError::WrongInputLength { party, expected: len, got: x.len() });
        }
    }
    Ok(())
}

/// 1 iff every coordinate of `sum_j x_j` vanishes over GF(2).
pub fn geq_reference(inputs: &[Bits], l: usize) -> Result<bool, ProtocolError> {
    check_lengths(inputs, 2 * l)?;
    Ok(inputs.iter().fold(0u64, |acc, x| acc ^ x.word()) == 0)
}

/// Evaluates both sides of `p(sum_j a_j) = p(r') p(sum_j x_j)` where
/// `p(a_j) = p(r') p(x_j)`, and reports whether they agree.
pub fn geq_mask_identity_check(inputs: &[Bits], mask: Bits) -> Result<bool, ProtocolError> {
    if mask.word() == 0 {
        return Err(ProtocolError::BadParameters("mask r' must be nonzero".into()));
    }
    if mask.is_empty() || !mask.len().is_multiple_of(2) {
        return Err(ProtocolError::BadParameters("mask length must be a positive even number".into()));
    }
    check_lengths(inputs, mask.len())?;
    let field = find_irreducible(mask.len() as u32)?;
    let r = field.embed(mask)?;
    let mut masked_sum = field.zero();
    let mut input_sum = field.zero();
    for x in inputs {
        let x = field.embed(*x)?;
        masked_sum = masked_sum.add(&r.mul(&x)?)?;
        input_sum = input_sum.add(&x)?;
    }
    Ok(masked_sum == r.mul(&input_sum)?)
}

/// One value of the shared randomness: an even-parity string per block and
/// the nonzero field mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeqRandomness {
    pub blocks: Vec<Bits>,
    pub mask: Bits,
}

#[derive(Debug, Clone)]
pub struct GeqProtocol {
    layout: GhzBlocks,
    field: Modulus,
    randomness: Vec<GeqRandomness>,
}

impl GeqProtocol {
    pub fn new(k: usize, l: usize) -> Result<Self, ProtocolError> {
        let layout = GhzBlocks::new(k, l)?;
        if 2 * l > 32 {
            return Err(ProtocolError::BadParameters("l must be at most 16".into()));
        }
        let field = find_irreducible(2 * l as u32)?;
        let parity = even_parity_strings(layout.width);
        let per_block = parity.len();
        let combos = per_block.pow(l as u32);
        let mut randomness = Vec::with_capacity(combos * (field.order() as usize - 1));
        for mask in 1..field.order() {
            for mut c in 0..combos {
                let mut blocks = alloc::vec![Bits::zeros(0); l];
                for b in (0..l).rev() {
                    blocks[b] = parity[c % per_block];
                    c /= per_block;
                }
                randomness.push(GeqRandomness { blocks, mask: Bits::new(2 * l, mask) });
            }
        }
        Ok(GeqProtocol { layout, field, randomness })
    }

    pub fn k(&self) -> usize {
        self.layout.parties
    }

    pub fn l(&self) -> usize {
        self.layout.blocks
    }

    pub fn width(&self) -> usize {
        self.layout.width
    }

    pub fn field(&self) -> Modulus {
        self.field
    }

    pub fn randomness_value(&self, index: usize) -> Option<&GeqRandomness> {
        self.randomness.get(index)
    }

    pub fn resource(&self) -> &StateVector {
        self.layout.resource()
    }

    /// The referee's product measurement basis, materialized.
    pub fn referee(&self) -> crate::qsim::MeasurementBasis {
        self.layout.referee_basis().expect("layout was validated at construction")
    }

    /// `a = p^-1(p(r') p(x))`.
    pub fn masked_input(&self, input: Bits, mask: Bits) -> Result<Bits, ProtocolError> {
        let prod = self.field.embed(mask)?.mul(&self.field.embed(input)?)?;
        Ok(prod.to_bits())
    }
}

impl Protocol for GeqProtocol {
    fn name(&self) -> &'static str {
        "geq"
    }

    fn party_count(&self) -> usize {
        self.layout.parties
    }

    fn input_len(&self, _party: usize) -> usize {
        2 * self.l()
    }

    fn randomness_count(&self) -> usize {
        self.randomness.len()
    }

    fn describe_randomness(&self, index: usize) -> String {
        let r = &self.randomness[index];
        let mut s = String::new();
        for (i, b) in r.blocks.iter().enumerate() {
            s.push_str(&alloc::format!("r{}={} ", i + 1, b));
        }
        s.push_str(&alloc::format!("r'={}", r.mask));
        s
    }

    fn reference(&self, inputs: &[Bits]) -> Result<Option<Output>, ProtocolError> {
        self.check_inputs(inputs)?;
        Ok(Some(geq_reference(inputs, self.l())? as Output))
    }

    fn output_classes(&self) -> Vec<Output> {
        alloc::vec![0, 1]
    }

    fn format_output(&self, output: Output) -> String {
        alloc::format!("{output}")
    }

    fn input_domain_size(&self) -> u128 {
        1u128 << (2 * self.l() * self.k())
    }

    fn inputs(&self) -> Box<dyn Iterator<Item = Vec<Bits>> + '_> {
        Box::new(product_inputs(alloc::vec![2 * self.l(); self.k()]))
    }

    fn sample_input(&self, rng: &mut SeededRng, class: Output) -> Vec<Bits> {
        let n = 2 * self.l();
        let top = 1u64 << n;
        let mut xs: Vec<Bits> = (0..self.k() - 1).map(|_| Bits::new(n, rng.gen_range(0..top))).collect();
        let partial = xs.iter().fold(0u64, |acc, x| acc ^ x.word());
        let offset = if class == 1 { 0 } else { rng.gen_range(1..top) };
        xs.push(Bits::new(n, partial ^ offset));
        xs
    }

    fn local_program(&self, party: usize, input: Bits, randomness: usize) -> Result<LocalProgram, ProtocolError> {
        if party >= self.k() || input.len() != 2 * self.l() {
            return Err(ProtocolError::WrongInputLength { party, expected: 2 * self.l(), got: input.len() });
        }
        let r = self.randomness.get(randomness).ok_or(ProtocolError::BadRandomness(randomness))?;
        let masked = self.masked_input(input, r.mask)?;
        let zero = Bits::zeros(2 * self.l());
        Ok(self.layout.program(party, |seat, block| {
            let a = if seat == party { masked } else { zero };
            // a^(2i-1) drives X on block i, a^(2i) drives Z
            (a.get(2 * block) ^ r.blocks[block].get(seat), a.get(2 * block + 1))
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
        let output_distribution =
            distribution_from(&outcomes, |i| self.layout.decode(i).iter().all(|&(s, z)| !s && !z) as Output);
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

    /// Uniform over the accepting product-basis vectors (output 1) or over all
    /// the others (output 0).
    fn simulator(&self, output: Output) -> Result<MessageState, ProtocolError> {
        let accept = output == 1;
        let states = self.layout.basis_vectors_where(|d| d.iter().all(|&(s, z)| !s && !z) == accept)?;
        let w = 1.0 / states.len() as f64;
        let ensemble: Vec<_> = states.into_iter().map(|s| (w, s)).collect();
        Ok(MessageState::Quantum(mix(&ensemble)?))
    }
}
