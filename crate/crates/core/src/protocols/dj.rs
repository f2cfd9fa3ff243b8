//! Entanglement-assisted protocol for the distributed Deutsch-Jozsa problem
//! with classical, field-masked messages.
//!
//! The parties share `n^(-1/2) sum_i |i>_A |i>_B` on two `m`-qubit registers
//! (`n = 2^m`), imprint their inputs as phases, apply Hadamards and measure.
//! Instead of sampling that measurement, [`DjProtocol::run`] enumerates the
//! exact distribution over `(K, L)` and pushes it through the affine masking
//! `m_A = r p(K) + r'`, `m_B = r p(L) + r'`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::{
    ClassicalEncoding, Cost, CostUnit, LocalOp, LocalProgram, Message, MessageState, Output, Protocol, ProtocolError,
    Transcript,
};
use crate::bits::Bits;
use crate::gf2m::{find_irreducible, Modulus};
use crate::qsim::{Gate, StateVector, MAX_QUBITS};
use crate::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DjAnswer {
    /// `x = y`.
    Equal,
    /// Hamming distance exactly `n/2`.
    Balanced,
    PromiseViolation,
}

fn log2_exact(n: usize) -> Result<usize, ProtocolError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(ProtocolError::BadParameters(alloc::format!("n = {n} is not a power of two >= 2")));
    }
    Ok(n.trailing_zeros() as usize)
}

pub fn dj_reference(x: Bits, y: Bits) -> Result<DjAnswer, ProtocolError> {
    if x.len() != y.len() {
        return Err(ProtocolError::WrongInputLength { party: 1, expected: x.len(), got: y.len() });
    }
    let n = x.len();
    log2_exact(n)?;
    Ok(match x.hamming(y) as usize {
        0 => DjAnswer::Equal,
        d if d == n / 2 => DjAnswer::Balanced,
        _ => DjAnswer::PromiseViolation,
    })
}

/// Uniform distribution over ordered pairs of distinct NONZERO messages, the
/// literal reading of the reject-class simulator. `None` when no such pair
/// exists (`n = 2`).
pub fn dj_literal_reject_simulator(n: usize) -> Option<Vec<f64>> {
    if n < 3 {
        return None;
    }
    let w = 1.0 / ((n - 1) * (n - 2)) as f64;
    let mut p = alloc::vec![0.0; n * n];
    for a in 1..n {
        for b in 1..n {
            if a != b {
                p[a * n + b] = w;
            }
        }
    }
    Some(p)
}

/// Shared classical randomness: nonzero `r` (scale) and arbitrary `r'` (shift).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DjRandomness {
    pub scale: Bits,
    pub shift: Bits,
}

#[derive(Debug, Clone)]
pub struct DjProtocol {
    n: usize,
    m: usize,
    field: Modulus,
    resource: StateVector,
    randomness: Vec<DjRandomness>,
}

impl DjProtocol {
    pub fn new(n: usize) -> Result<Self, ProtocolError> {
        let m = log2_exact(n)?;
        if 2 * m > MAX_QUBITS {
            return Err(ProtocolError::BadParameters(alloc::format!(
                "n = {n} needs {} qubits, limit is {MAX_QUBITS}",
                2 * m
            )));
        }
        let field = find_irreducible(m as u32)?;
        let amp = Complex64::new(1.0 / libm::sqrt(n as f64), 0.0);
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            amps[(i << m) | i] = amp;
        }
        let resource = StateVector::new(amps)?;
        let mut randomness = Vec::with_capacity((n - 1) * n);
        for scale in 1..n as u64 {
            for shift in 0..n as u64 {
                randomness.push(DjRandomness { scale: Bits::new(m, scale), shift: Bits::new(m, shift) });
            }
        }
        Ok(DjProtocol { n, m, field, resource, randomness })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Register width `log2 n`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> Modulus {
        self.field
    }

    pub fn resource(&self) -> &StateVector {
        &self.resource
    }

    pub fn randomness_value(&self, index: usize) -> Option<DjRandomness> {
        self.randomness.get(index).copied()
    }

    /// Exact joint distribution of the measured registers, indexed by
    /// `K * n + L` with `K`, `L` read big-endian from the registers.
    pub fn register_distribution(&self, x: Bits, y: Bits) -> Result<Vec<f64>, ProtocolError> {
        let state = self.pre_measurement_state(x, y)?;
        Ok(state.amplitudes().iter().map(|a| a.norm_sqr()).collect())
    }

    pub fn pre_measurement_state(&self, x: Bits, y: Bits) -> Result<StateVector, ProtocolError> {
        self.check_inputs(&[x, y])?;
        let a = self.quantum_program(0, x);
        let b = self.quantum_program(1, y);
        Ok(b.apply(&a.apply(&self.resource)?)?)
    }

    /// Message index `a * n + b` for field-bit encodings `a`, `b`.
    pub fn message_index(&self, a: Bits, b: Bits) -> usize {
        a.word() as usize * self.n + b.word() as usize
    }

    fn quantum_program(&self, party: usize, input: Bits) -> LocalProgram {
        let first = party * self.m;
        let signs: Vec<i8> = (0..self.n).map(|i| if input.get(i) { -1 } else { 1 }).collect();
        let mut ops = alloc::vec![LocalOp::RegisterPhase { first, width: self.m, signs }];
        for q in first..first + self.m {
            ops.push(LocalOp::Gate { gate: Gate::H, qubit: q });
        }
        LocalProgram { party, qubits: (first..first + self.m).collect(), ops, encoding: None }
    }

    /// `p(r) p(K) + p(r')` with `K` given as a big-endian register value.
    fn encode(&self, enc: &ClassicalEncoding, register: usize) -> Result<Bits, ProtocolError> {
        let k = self.field.embed(Bits::from_big_endian(self.m, register as u64))?;
        Ok(enc.scale.mul(&k)?.add(&enc.shift)?.to_bits())
    }

    fn balanced_partner(&self, x: Bits, flips: u64) -> Bits {
        Bits::new(self.n, x.word() ^ flips)
    }
}

/// All `n`-bit words of weight `w`, increasing.
fn words_of_weight(n: usize, w: usize) -> impl Iterator<Item = u64> {
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let first = if w == 0 { 0 } else { (1u64 << w) - 1 };
    let mut next = Some(first);
    core::iter::from_fn(move || {
        let cur = next?;
        // Gosper's hack
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (r != 0 && nxt <= limit && nxt > cur).then_some(nxt)
        };
        Some(cur)
    })
}

impl Protocol for DjProtocol {
    fn name(&self) -> &'static str {
        "dj"
    }

    fn party_count(&self) -> usize {
        2
    }

    fn input_len(&self, _party: usize) -> usize {
        self.n
    }

    fn randomness_count(&self) -> usize {
        self.randomness.len()
    }

    fn describe_randomness(&self, index: usize) -> String {
        let r = self.randomness[index];
        alloc::format!("r={} r'={}", r.scale, r.shift)
    }

    fn reference(&self, inputs: &[Bits]) -> Result<Option<Output>, ProtocolError> {
        self.check_inputs(inputs)?;
        Ok(match dj_reference(inputs[0], inputs[1])? {
            DjAnswer::Equal => Some(1),
            DjAnswer::Balanced => Some(0),
            DjAnswer::PromiseViolation => None,
        })
    }

    fn output_classes(&self) -> Vec<Output> {
        alloc::vec![0, 1]
    }

    fn format_output(&self, output: Output) -> String {
        alloc::format!("{output}")
    }

    fn input_domain_size(&self) -> u128 {
        let balanced = (0..self.n / 2).fold(1u128, |acc, i| acc * (self.n - i) as u128 / (i + 1) as u128);
        (1u128 << self.n) * (1 + balanced)
    }

    fn inputs(&self) -> Box<dyn Iterator<Item = Vec<Bits>> + '_> {
        assert!(self.n < 32, "promise domain too large to enumerate");
        Box::new(Bits::all(self.n).flat_map(move |x| {
            core::iter::once(alloc::vec![x, x])
                .chain(words_of_weight(self.n, self.n / 2).map(move |f| alloc::vec![x, self.balanced_partner(x, f)]))
        }))
    }

    fn sample_input(&self, rng: &mut SeededRng, class: Output) -> Vec<Bits> {
        let x = Bits::new(self.n, rng.gen::<u64>());
        if class == 1 {
            return alloc::vec![x, x];
        }
        let mut positions: Vec<usize> = (0..self.n).collect();
        for i in 0..self.n / 2 {
            let j = rng.gen_range(i..self.n);
            positions.swap(i, j);
        }
        let flips = positions[..self.n / 2].iter().fold(0u64, |acc, &p| acc | 1 << p);
        alloc::vec![x, self.balanced_partner(x, flips)]
    }

    fn local_program(&self, party: usize, input: Bits, randomness: usize) -> Result<LocalProgram, ProtocolError> {
        if party >= 2 || input.len() != self.n {
            return Err(ProtocolError::WrongInputLength { party, expected: self.n, got: input.len() });
        }
        let r = self.randomness.get(randomness).ok_or(ProtocolError::BadRandomness(randomness))?;
        let mut program = self.quantum_program(party, input);
        program.encoding =
            Some(ClassicalEncoding { scale: self.field.embed(r.scale)?, shift: self.field.embed(r.shift)? });
        Ok(program)
    }

    fn local_state(&self, party: usize, input: Bits, randomness: usize) -> Result<StateVector, ProtocolError> {
        Ok(self.local_program(party, input, randomness)?.apply(&self.resource)?)
    }

    fn run(&self, inputs: &[Bits], randomness: usize) -> Result<Transcript, ProtocolError> {
        self.check_inputs(inputs)?;
        let programs = [self.local_program(0, inputs[0], randomness)?, self.local_program(1, inputs[1], randomness)?];
        let state = programs[1].apply(&programs[0].apply(&self.resource)?)?;
        let (enc_a, enc_b) = (programs[0].encoding.unwrap(), programs[1].encoding.unwrap());
        let mask = self.n - 1;
        let mut messages = alloc::vec![0.0; self.n * self.n];
        for (idx, amp) in state.amplitudes().iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let a = self.encode(&enc_a, idx >> self.m)?;
            let b = self.encode(&enc_b, idx & mask)?;
            messages[self.message_index(a, b)] += p;
        }
        let mut output_distribution = alloc::collections::BTreeMap::new();
        for (idx, &p) in messages.iter().enumerate() {
            let accept = idx / self.n == idx % self.n;
            *output_distribution.entry(accept as Output).or_insert(0.0) += p;
        }
        Ok(Transcript {
            inputs: inputs.to_vec(),
            randomness,
            programs: programs.to_vec(),
            message: Message::Classical(messages.clone()),
            outcome_distribution: messages,
            output_distribution,
            cost: self.cost(),
        })
    }

    fn cost(&self) -> Cost {
        Cost { value: 2 * self.m, unit: CostUnit::Bits }
    }

    fn party_costs(&self) -> Vec<usize> {
        alloc::vec![self.m, self.m]
    }

    /// Accept: uniform over `(a, a)`. Reject: uniform over ordered pairs
    /// `(a, b)` with `a != b`.
    fn simulator(&self, output: Output) -> Result<MessageState, ProtocolError> {
        let n = self.n;
        let mut p = alloc::vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                p[a * n + b] = match (output == 1, a == b) {
                    (true, true) => 1.0 / n as f64,
                    (false, false) => 1.0 / (n * (n - 1)) as f64,
                    _ => 0.0,
                };
            }
        }
        Ok(MessageState::Classical(p))
    }

    fn weight_lemma_applicability(&self) -> Result<(), &'static str> {
        Err("messages are classical measurement outcomes of an entangled register and the function is partial; \
             the weight-sum bound covers pure unentangled messages of a non-degenerate total function")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Bits {
        Bits::parse(s).unwrap()
    }

    /// Amplitude of |k>_A |l>_B written out as a sum over i.
    fn closed_form_probability(x: Bits, y: Bits, k: usize, l: usize) -> f64 {
        let n = x.len();
        let mut acc = 0.0;
        for i in 0..n {
            let dot = ((i & (k ^ l)).count_ones() % 2) as usize;
            let phase = (x.get(i) ^ y.get(i)) as usize + dot;
            acc += if phase.is_multiple_of(2) { 1.0 } else { -1.0 };
        }
        let amp = acc / (n as f64 * libm::sqrt(n as f64));
        amp * amp
    }

    #[test]
    fn reference_examples() {
        assert_eq!(dj_reference(bits("01"), bits("01")).unwrap(), DjAnswer::Equal);
        assert_eq!(dj_reference(bits("00"), bits("01")).unwrap(), DjAnswer::Balanced);
        // distance 2 = n, not n/2
        assert_eq!(dj_reference(bits("01"), bits("10")).unwrap(), DjAnswer::PromiseViolation);
        assert_eq!(dj_reference(bits("0011"), bits("0111")).unwrap(), DjAnswer::PromiseViolation);
        assert!(dj_reference(bits("001"), bits("011")).is_err());
        assert!(dj_reference(bits("0011"), bits("01")).is_err());
    }

    #[test]
    fn register_distribution_matches_closed_form() {
        for n in [2usize, 4, 8] {
            let p = DjProtocol::new(n).unwrap();
            let mut rng = crate::seeded_rng(n as u64);
            for _ in 0..10 {
                let x = Bits::new(n, rng.gen::<u64>());
                let y = Bits::new(n, rng.gen::<u64>());
                let dist = p.register_distribution(x, y).unwrap();
                for k in 0..n {
                    for l in 0..n {
                        let expected = closed_form_probability(x, y, k, l);
                        assert!((dist[k * n + l] - expected).abs() < 1e-12, "n={n} k={k} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn promise_zeros() {
        let p = DjProtocol::new(8).unwrap();
        for xs in p.inputs() {
            let dist = p.register_distribution(xs[0], xs[1]).unwrap();
            let diagonal: f64 = (0..8).map(|k| dist[k * 8 + k]).sum();
            if xs[0] == xs[1] {
                assert!((diagonal - 1.0).abs() < 1e-12);
            } else {
                assert!(diagonal.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn costs_and_domain() {
        assert_eq!(DjProtocol::new(8).unwrap().cost(), Cost { value: 6, unit: CostUnit::Bits });
        assert_eq!(DjProtocol::new(4).unwrap().randomness_count(), 12);
        let p = DjProtocol::new(4).unwrap();
        assert_eq!(p.input_domain_size(), 16 * 7);
        assert_eq!(p.inputs().count(), 16 * 7);
        assert_eq!(DjProtocol::new(8).unwrap().inputs().count(), 256 * 71);
        assert!(DjProtocol::new(6).is_err());
        assert!(DjProtocol::new(1).is_err());
        assert!(DjProtocol::new(128).is_err());
    }

    #[test]
    fn weight_enumeration() {
        let words: Vec<u64> = words_of_weight(4, 2).collect();
        assert_eq!(words, [0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(words_of_weight(8, 4).count(), 70);
        assert_eq!(words_of_weight(2, 1).collect::<Vec<_>>(), [1, 2]);
    }

    #[test]
    fn acceptance_on_examples() {
        let p = DjProtocol::new(4).unwrap();
        for r in 0..p.randomness_count() {
            let acc = p.run(&[bits("0011"), bits("0011")], r).unwrap();
            assert!((acc.probability_of(1) - 1.0).abs() < 1e-12);
            let rej = p.run(&[bits("0011"), bits("0101")], r).unwrap();
            assert!(rej.probability_of(1).abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_inputs_respect_promise() {
        let p = DjProtocol::new(16).unwrap();
        let mut rng = crate::seeded_rng(5);
        for class in [0, 1] {
            for _ in 0..50 {
                let xs = p.sample_input(&mut rng, class);
                assert_eq!(p.reference(&xs).unwrap(), Some(class));
            }
        }
    }

    #[test]
    fn literal_simulator_support() {
        assert!(dj_literal_reject_simulator(2).is_none());
        let p = dj_literal_reject_simulator(4).unwrap();
        assert_eq!(p.iter().filter(|&&x| x > 0.0).count(), 6);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
