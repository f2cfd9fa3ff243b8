//! Executable protocols with exact (distribution-level) execution.
//!
//! Every protocol materializes its shared-randomness domain explicitly and is
//! executed per `(input tuple, randomness index)`. The referee's outcome
//! distribution is computed exactly instead of sampled, which is what makes
//! privacy checkable as an identity between mixed states.
//!
//! Parties only influence the joint message through [`LocalProgram`]s built
//! from their own input and the shared randomness; [`Protocol::run`] composes
//! those programs and never hands one party's input to another party's map.

mod dj;
mod geq;
mod ghz_blocks;
mod sum2;

pub use dj::{dj_literal_reject_simulator, dj_reference, DjAnswer, DjProtocol, DjRandomness};
pub use geq::{geq_mask_identity_check, geq_reference, GeqProtocol, GeqRandomness};
pub use sum2::{sum2_reference, Sum2Protocol};

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::Bits;
use crate::gf2m::{FieldElement, FieldError};
use crate::qsim::{mix, DensityMatrix, Gate, QsimError, StateVector};
use crate::SeededRng;

/// Output label of a protocol's function. `Sum2` packs `(b1, b2)` as
/// `2*b1 + b2`; the predicates use 0/1.
pub type Output = u32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProtocolError {
    #[error("invalid protocol parameters: {0}")]
    BadParameters(String),
    #[error("expected {expected} party inputs, got {got}")]
    WrongPartyCount { expected: usize, got: usize },
    #[error("party {party} input has {got} bits, expected {expected}")]
    WrongInputLength { party: usize, expected: usize, got: usize },
    #[error("randomness index {0} is outside the shared-randomness domain")]
    BadRandomness(usize),
    #[error("input lies outside the promise")]
    PromiseViolation,
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostUnit {
    Qubits,
    Bits,
}

impl fmt::Display for CostUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostUnit::Qubits => "qubits",
            CostUnit::Bits => "bits",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cost {
    pub value: usize,
    pub unit: CostUnit,
}

/// One local operation a party performs on its own registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalOp {
    Gate {
        gate: Gate,
        qubit: usize,
    },
    /// Phase `signs[c]` where `c` is the content of qubits `first..first+width`.
    RegisterPhase {
        first: usize,
        width: usize,
        signs: Vec<i8>,
    },
}

/// Affine post-processing `m = scale * p(K) + shift` of a measured register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalEncoding {
    pub scale: FieldElement,
    pub shift: FieldElement,
}

/// Everything a party does, derived from its own input and the shared
/// randomness only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalProgram {
    pub party: usize,
    pub qubits: Vec<usize>,
    pub ops: Vec<LocalOp>,
    pub encoding: Option<ClassicalEncoding>,
}

impl LocalProgram {
    pub fn apply(&self, state: &StateVector) -> Result<StateVector, QsimError> {
        let mut s = state.clone();
        for op in &self.ops {
            s = match op {
                LocalOp::Gate { gate, qubit } => s.apply_gate(*gate, *qubit)?,
                LocalOp::RegisterPhase { first, width, signs } => s.apply_register_phase(*first, *width, signs)?,
            };
        }
        Ok(s)
    }
}

/// Joint message for one randomness value.
#[derive(Debug, Clone, PartialEq)]
pub enum Message {
    Quantum(StateVector),
    /// Distribution over message tuples (index layout is protocol-specific).
    Classical(Vec<f64>),
}

/// Randomness-averaged message, or a simulator's output.
#[derive(Debug, Clone, PartialEq)]
pub enum MessageState {
    Quantum(DensityMatrix),
    Classical(Vec<f64>),
}

impl MessageState {
    /// Frobenius distance for quantum states and total-variation distance for
    /// classical distributions. `None` if the kinds or dimensions differ.
    pub fn distance(&self, other: &MessageState) -> Option<f64> {
        match (self, other) {
            (MessageState::Quantum(a), MessageState::Quantum(b)) => crate::qsim::matrix_distance(a, b).ok(),
            (MessageState::Classical(a), MessageState::Classical(b)) if a.len() == b.len() => {
                Some(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
            }
            _ => None,
        }
    }

    /// `tr rho^2`, or the collision probability of a distribution.
    pub fn purity(&self) -> f64 {
        match self {
            MessageState::Quantum(rho) => rho.purity(),
            MessageState::Classical(p) => p.iter().map(|x| x * x).sum(),
        }
    }

    /// `tr(self * other)` (the collision probability between two classical
    /// distributions).
    pub fn overlap(&self, other: &MessageState) -> Option<f64> {
        match (self, other) {
            (MessageState::Quantum(a), MessageState::Quantum(b)) => a.trace_product(b).ok(),
            (MessageState::Classical(a), MessageState::Classical(b)) if a.len() == b.len() => {
                Some(a.iter().zip(b).map(|(x, y)| x * y).sum())
            }
            _ => None,
        }
    }

    /// Frobenius norm of the product `self * other`.
    pub fn product_norm(&self, other: &MessageState) -> Option<f64> {
        match (self, other) {
            (MessageState::Quantum(a), MessageState::Quantum(b)) => {
                a.product(b).ok().map(|p| crate::qsim::frobenius_norm(&p))
            }
            (MessageState::Classical(a), MessageState::Classical(b)) if a.len() == b.len() => {
                Some(libm::sqrt(a.iter().zip(b).map(|(x, y)| (x * y) * (x * y)).sum()))
            }
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            MessageState::Quantum(rho) => rho.dim(),
            MessageState::Classical(p) => p.len(),
        }
    }

    /// `sum_i w_i state_i` over states of the same kind.
    pub fn mixture(parts: &[(f64, &MessageState)]) -> Result<MessageState, ProtocolError> {
        match parts.first().map(|p| p.1) {
            Some(MessageState::Quantum(_)) => {
                let mut ens = Vec::with_capacity(parts.len());
                for (w, s) in parts {
                    match s {
                        MessageState::Quantum(rho) => ens.push((*w, rho)),
                        MessageState::Classical(_) => {
                            return Err(ProtocolError::BadParameters("mixed message kinds".into()))
                        }
                    }
                }
                Ok(MessageState::Quantum(crate::qsim::mix_densities(&ens)?))
            }
            Some(MessageState::Classical(first)) => {
                let mut acc = alloc::vec![0.0; first.len()];
                for (w, s) in parts {
                    match s {
                        MessageState::Classical(p) if p.len() == acc.len() => {
                            for (a, x) in acc.iter_mut().zip(p) {
                                *a += w * x;
                            }
                        }
                        _ => return Err(ProtocolError::BadParameters("mixed message kinds".into())),
                    }
                }
                Ok(MessageState::Classical(acc))
            }
            None => Err(ProtocolError::BadParameters("empty mixture".into())),
        }
    }
}

/// Result of executing a protocol on one input tuple and one randomness value.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub inputs: Vec<Bits>,
    pub randomness: usize,
    pub programs: Vec<LocalProgram>,
    pub message: Message,
    /// Referee measurement outcomes (quantum) or message tuples (classical).
    pub outcome_distribution: Vec<f64>,
    pub output_distribution: BTreeMap<Output, f64>,
    pub cost: Cost,
}

impl Transcript {
    pub fn probability_of(&self, output: Output) -> f64 {
        self.output_distribution.get(&output).copied().unwrap_or(0.0)
    }
}

/// Common interface of the executable protocols.
pub trait Protocol {
    fn name(&self) -> &'static str;
    fn party_count(&self) -> usize;
    fn input_len(&self, party: usize) -> usize;
    fn randomness_count(&self) -> usize;
    fn describe_randomness(&self, index: usize) -> String;

    /// Classical reference value; `Ok(None)` for inputs outside a promise.
    fn reference(&self, inputs: &[Bits]) -> Result<Option<Output>, ProtocolError>;
    fn output_classes(&self) -> Vec<Output>;
    fn format_output(&self, output: Output) -> String;

    /// Number of input tuples on which the reference is defined.
    fn input_domain_size(&self) -> u128;
    /// Every input tuple on which the reference is defined.
    fn inputs(&self) -> Box<dyn Iterator<Item = Vec<Bits>> + '_>;
    /// A uniformly random input tuple whose reference value is `class`.
    fn sample_input(&self, rng: &mut SeededRng, class: Output) -> Vec<Bits>;

    fn local_program(&self, party: usize, input: Bits, randomness: usize) -> Result<LocalProgram, ProtocolError>;
    /// The shared resource state after only `party`'s local operations.
    fn local_state(&self, party: usize, input: Bits, randomness: usize) -> Result<StateVector, ProtocolError>;
    fn run(&self, inputs: &[Bits], randomness: usize) -> Result<Transcript, ProtocolError>;

    fn cost(&self) -> Cost;
    /// Per-party message sizes in the unit of [`Protocol::cost`].
    fn party_costs(&self) -> Vec<usize>;

    /// Ideal simulator output for `output`.
    fn simulator(&self, output: Output) -> Result<MessageState, ProtocolError>;

    /// `Err(reason)` when the weight-sum lemma's hypotheses do not cover the
    /// protocol's message model.
    fn weight_lemma_applicability(&self) -> Result<(), &'static str> {
        Ok(())
    }

    fn check_inputs(&self, inputs: &[Bits]) -> Result<(), ProtocolError> {
        if inputs.len() != self.party_count() {
            return Err(ProtocolError::WrongPartyCount { expected: self.party_count(), got: inputs.len() });
        }
        for (party, x) in inputs.iter().enumerate() {
            if x.len() != self.input_len(party) {
                return Err(ProtocolError::WrongInputLength { party, expected: self.input_len(party), got: x.len() });
            }
        }
        Ok(())
    }

    /// Message state averaged uniformly over the whole randomness domain.
    fn averaged_message(&self, inputs: &[Bits]) -> Result<MessageState, ProtocolError> {
        let count = self.randomness_count();
        let w = 1.0 / count as f64;
        let mut quantum = Vec::new();
        let mut classical: Option<Vec<f64>> = None;
        for r in 0..count {
            match self.run(inputs, r)?.message {
                Message::Quantum(psi) => quantum.push((w, psi)),
                Message::Classical(p) => {
                    let acc = classical.get_or_insert_with(|| alloc::vec![0.0; p.len()]);
                    for (a, x) in acc.iter_mut().zip(&p) {
                        *a += w * x;
                    }
                }
            }
        }
        match classical {
            Some(p) => Ok(MessageState::Classical(p)),
            None => Ok(MessageState::Quantum(mix(&quantum)?)),
        }
    }
}

/// All tuples of bit strings with the given lengths, first party varying
/// slowest.
pub(crate) fn product_inputs(lens: Vec<usize>) -> impl Iterator<Item = Vec<Bits>> {
    let total_bits: usize = lens.iter().sum();
    assert!(total_bits < 64, "input domain too large to enumerate");
    (0..1u64 << total_bits).map(move |mut index| {
        let mut out = alloc::vec![Bits::zeros(0); lens.len()];
        for (party, &len) in lens.iter().enumerate().rev() {
            out[party] = Bits::new(len, index & ((1u64 << len) - 1));
            index >>= len;
        }
        out
    })
}

pub(crate) fn distribution_from(outcomes: &[f64], decode: impl Fn(usize) -> Output) -> BTreeMap<Output, f64> {
    let mut out = BTreeMap::new();
    for (i, &p) in outcomes.iter().enumerate() {
        *out.entry(decode(i)).or_insert(0.0) += p;
    }
    out
}
