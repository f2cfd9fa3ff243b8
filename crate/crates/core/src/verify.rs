//! Machine checks of correctness, perfect privacy and the purity inequalities
//! against executed protocols.
//!
//! Randomness is always enumerated in full. Only the input sweep may be
//! sampled, and reports carry a [`Coverage`] saying which happened.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::bits::Bits;
use crate::bounds::beta_of_classes;
use crate::protocols::{
    dj_literal_reject_simulator, Cost, CostUnit, DjProtocol, MessageState, Output, Protocol, ProtocolError,
};
use crate::qsim::StateVector;

/// Default tolerance for every equality check.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Slack on the purity range `[1/dim, 1]`.
pub const PURITY_TOL: f64 = 1e-10;
/// Largest input domain swept exhaustively by default.
pub const DEFAULT_BUDGET: u128 = 1 << 16;
/// Inputs drawn per output class when the domain exceeds the budget.
pub const SAMPLES_PER_CLASS: usize = 64;
/// Largest quantum message for which density matrices are formed.
pub const MAX_PRIVACY_QUBITS: usize = 8;
/// States per class kept for all-pairs comparison; later ones are compared
/// to the class representative only.
pub const PAIRWISE_LIMIT: usize = 256;
/// Most inner products the weight-sum check will evaluate before skipping.
pub const WEIGHT_LEMMA_LIMIT: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

impl Status {
    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(&self) -> bool {
        *self == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        *self == Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Exhaustive {
        inputs: usize,
    },
    /// Partial evidence: a seeded stratified sample.
    Sampled {
        inputs: usize,
        per_class: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub budget: u128,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { budget: DEFAULT_BUDGET, seed: 0, tol: DEFAULT_TOL }
    }
}

/// Inputs to check: the whole domain within budget, otherwise a seeded sample
/// of [`SAMPLES_PER_CLASS`] distinct inputs per output class (fewer if the
/// sampler keeps repeating).
pub fn sweep_inputs(p: &dyn Protocol, cfg: &SweepConfig) -> (Vec<Vec<Bits>>, Coverage) {
    if p.input_domain_size() <= cfg.budget {
        let all: Vec<Vec<Bits>> = p.inputs().collect();
        let n = all.len();
        return (all, Coverage::Exhaustive { inputs: n });
    }
    let mut rng = crate::seeded_rng(cfg.seed);
    let mut out = Vec::new();
    for class in p.output_classes() {
        let mut seen = BTreeSet::new();
        for _ in 0..SAMPLES_PER_CLASS * 8 {
            if seen.len() == SAMPLES_PER_CLASS {
                break;
            }
            seen.insert(p.sample_input(&mut rng, class));
        }
        out.extend(seen);
    }
    let n = out.len();
    (out, Coverage::Sampled { inputs: n, per_class: SAMPLES_PER_CLASS, seed: cfg.seed })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectnessCase {
    pub inputs: Vec<Bits>,
    pub randomness: usize,
    pub expected: Output,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectnessReport {
    pub cases: usize,
    /// Smallest probability of the reference output over all cases.
    pub min_mass: f64,
    pub worst: Option<CorrectnessCase>,
    pub failure_count: usize,
    /// The first few failing cases.
    pub failures: Vec<CorrectnessCase>,
    pub coverage: Coverage,
    pub status: Status,
}

const MAX_LISTED_FAILURES: usize = 16;

pub fn check_correctness(p: &dyn Protocol, cfg: &SweepConfig) -> Result<CorrectnessReport, ProtocolError> {
    let (inputs, coverage) = sweep_inputs(p, cfg);
    let mut report = CorrectnessReport {
        cases: 0,
        min_mass: 1.0,
        worst: None,
        failure_count: 0,
        failures: Vec::new(),
        coverage,
        status: Status::Pass,
    };
    for x in &inputs {
        let Some(expected) = p.reference(x)? else { continue };
        for r in 0..p.randomness_count() {
            let mass = p.run(x, r)?.probability_of(expected);
            report.cases += 1;
            let case = || CorrectnessCase { inputs: x.clone(), randomness: r, expected, mass };
            if report.worst.is_none() || mass < report.min_mass {
                report.min_mass = mass;
                report.worst = Some(case());
            }
            if mass < 1.0 - cfg.tol {
                report.failure_count += 1;
                if report.failures.len() < MAX_LISTED_FAILURES {
                    report.failures.push(case());
                }
            }
        }
    }
    report.status = Status::from_bool(report.failure_count == 0);
    Ok(report)
}

fn guard_density(p: &dyn Protocol) -> Result<(), ProtocolError> {
    let cost = p.cost();
    if cost.unit == CostUnit::Qubits && cost.value > MAX_PRIVACY_QUBITS {
        return Err(ProtocolError::BadParameters(alloc::format!(
            "{} message qubits exceed the density-matrix limit of {MAX_PRIVACY_QUBITS}",
            cost.value
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassPrivacy {
    pub output: Output,
    pub label: String,
    pub inputs: usize,
    /// Largest distance between two averaged messages in the class.
    pub max_distance: f64,
    pub worst_pair: Option<(Vec<Bits>, Vec<Bits>)>,
    /// False when the class exceeded [`PAIRWISE_LIMIT`] and later states were
    /// only compared to the representative.
    pub pairwise_complete: bool,
    /// The averaged message of the first input in the class.
    pub representative: MessageState,
    pub purity: f64,
    pub simulator_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyReport {
    pub classes: Vec<ClassPrivacy>,
    /// Largest Frobenius norm of `rho_y rho_y'` over distinct classes.
    pub cross_class_product: f64,
    pub coverage: Coverage,
    /// Every class is a single state up to tolerance.
    pub status: Status,
    /// Every representative matches the protocol's simulator.
    pub simulator_status: Status,
    /// Distinct classes are perfectly distinguishable.
    pub separation_status: Status,
}

struct ClassAccumulator {
    stored: Vec<(Vec<Bits>, MessageState)>,
    inputs: usize,
    max_distance: f64,
    worst_pair: Option<(Vec<Bits>, Vec<Bits>)>,
}

impl ClassAccumulator {
    fn push(&mut self, x: Vec<Bits>, state: MessageState) -> Result<(), ProtocolError> {
        self.inputs += 1;
        let compare_to = if self.stored.len() < PAIRWISE_LIMIT { self.stored.len() } else { 1 };
        for (y, other) in &self.stored[..compare_to] {
            let d = state
                .distance(other)
                .ok_or_else(|| ProtocolError::BadParameters("messages of different kinds".into()))?;
            if self.worst_pair.is_none() || d > self.max_distance {
                self.max_distance = d;
                self.worst_pair = Some((y.clone(), x.clone()));
            }
        }
        if self.stored.len() < PAIRWISE_LIMIT {
            self.stored.push((x, state));
        }
        Ok(())
    }
}

pub fn check_privacy(p: &dyn Protocol, cfg: &SweepConfig) -> Result<PrivacyReport, ProtocolError> {
    guard_density(p)?;
    let (inputs, coverage) = sweep_inputs(p, cfg);
    let mut classes: BTreeMap<Output, ClassAccumulator> = BTreeMap::new();
    for x in inputs {
        let Some(y) = p.reference(&x)? else { continue };
        let state = p.averaged_message(&x)?;
        classes
            .entry(y)
            .or_insert_with(|| ClassAccumulator { stored: Vec::new(), inputs: 0, max_distance: 0.0, worst_pair: None })
            .push(x, state)?;
    }
    let mut out = Vec::new();
    for (output, acc) in classes {
        let pairwise_complete = acc.inputs <= PAIRWISE_LIMIT;
        let representative = acc.stored.into_iter().next().expect("classes are created non-empty").1;
        let simulator_distance = representative
            .distance(&p.simulator(output)?)
            .ok_or_else(|| ProtocolError::BadParameters("simulator has the wrong shape".into()))?;
        out.push(ClassPrivacy {
            output,
            label: p.format_output(output),
            inputs: acc.inputs,
            max_distance: acc.max_distance,
            worst_pair: acc.worst_pair,
            pairwise_complete,
            purity: representative.purity(),
            representative,
            simulator_distance,
        });
    }
    let mut cross_class_product = 0.0f64;
    for (i, a) in out.iter().enumerate() {
        for b in &out[i + 1..] {
            let norm = a.representative.product_norm(&b.representative).unwrap_or(f64::INFINITY);
            cross_class_product = cross_class_product.max(norm);
        }
    }
    Ok(PrivacyReport {
        status: Status::from_bool(out.iter().all(|c| c.max_distance <= cfg.tol)),
        simulator_status: Status::from_bool(out.iter().all(|c| c.simulator_distance <= cfg.tol)),
        separation_status: Status::from_bool(cross_class_product <= cfg.tol),
        classes: out,
        cross_class_product,
        coverage,
    })
}

/// Comparison of the derived reject-class distribution of the Deutsch-Jozsa
/// protocol with the reading that excludes the all-zero message.
#[derive(Debug, Clone, PartialEq)]
pub struct LiteralSimulatorCheck {
    /// Total-variation distance between the two readings; `None` when the
    /// literal reading is empty.
    pub distance: Option<f64>,
    /// True when the readings disagree (the expected outcome).
    pub discrepancy: bool,
}

pub fn check_dj_literal_simulator(dj: &DjProtocol, tol: f64) -> Result<LiteralSimulatorCheck, ProtocolError> {
    let derived = dj.simulator(0)?;
    let distance = dj_literal_reject_simulator(dj.n()).and_then(|p| derived.distance(&MessageState::Classical(p)));
    Ok(LiteralSimulatorCheck { distance, discrepancy: distance.is_none_or(|d| d > tol) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightVariant {
    /// `sum_{z != x}`, used for the first party.
    ExcludingOwn,
    /// `sum_z`, used for every other party.
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightLemmaReport {
    pub party: usize,
    pub variant: WeightVariant,
    pub sums_checked: usize,
    pub max_sum: f64,
    /// `(x, r, r')` attaining the maximum.
    pub worst: Option<(Bits, usize, usize)>,
    pub status: Status,
}

/// `sum_i |<reference|others_i>|^2`; zero for an empty family.
pub fn weight_sum<'a>(
    reference: &StateVector,
    others: impl IntoIterator<Item = &'a StateVector>,
) -> Result<f64, ProtocolError> {
    let mut sum = 0.0;
    for other in others {
        sum += reference.inner(other)?.norm_sqr();
    }
    Ok(sum)
}

/// For every own input `x` and randomness pair `(r, r')`, bounds the summed
/// squared overlaps of `psi(x; r)` with the states `psi(z; r')`, where
/// `psi(z; r)` is the shared resource after only this party's local program.
pub fn check_weight_lemma(p: &dyn Protocol, party: usize, tol: f64) -> Result<WeightLemmaReport, ProtocolError> {
    let variant = if party == 0 { WeightVariant::ExcludingOwn } else { WeightVariant::All };
    let mut report =
        WeightLemmaReport { party, variant, sums_checked: 0, max_sum: 0.0, worst: None, status: Status::Pass };
    if party >= p.party_count() {
        return Err(ProtocolError::WrongPartyCount { expected: p.party_count(), got: party + 1 });
    }
    if let Err(reason) = p.weight_lemma_applicability() {
        report.status = Status::Skipped(reason.into());
        return Ok(report);
    }
    let own: Vec<Bits> = Bits::all(p.input_len(party)).collect();
    let randomness = p.randomness_count();
    let work = (own.len() as u128).pow(2) * (randomness as u128).pow(2);
    if work > WEIGHT_LEMMA_LIMIT {
        report.status = Status::Skipped(alloc::format!("{work} inner products exceed the limit {WEIGHT_LEMMA_LIMIT}"));
        return Ok(report);
    }
    let mut states = Vec::with_capacity(own.len() * randomness);
    for &z in &own {
        for r in 0..randomness {
            states.push(p.local_state(party, z, r)?);
        }
    }
    let at = |zi: usize, r: usize| &states[zi * randomness + r];
    for (xi, &x) in own.iter().enumerate() {
        for r in 0..randomness {
            for rp in 0..randomness {
                let others =
                    (0..own.len()).filter(|&zi| variant == WeightVariant::All || zi != xi).map(|zi| at(zi, rp));
                let sum = weight_sum(at(xi, r), others)?;
                report.sums_checked += 1;
                if report.worst.is_none() || sum > report.max_sum {
                    report.max_sum = sum;
                    report.worst = Some((x, r, rp));
                }
            }
        }
    }
    report.status = Status::from_bool(report.max_sum <= 1.0 + tol);
    Ok(report)
}

/// A distribution over input tuples.
pub type InputWeights = Vec<(Vec<Bits>, f64)>;

/// Uniform over every input on which the reference is defined.
pub fn uniform_inputs(p: &dyn Protocol) -> InputWeights {
    let all: Vec<Vec<Bits>> = p.inputs().collect();
    let w = 1.0 / all.len() as f64;
    all.into_iter().map(|x| (x, w)).collect()
}

fn mixed_message(
    p: &dyn Protocol,
    mu: &[(Vec<Bits>, f64)],
) -> Result<(MessageState, Vec<MessageState>), ProtocolError> {
    let states = mu.iter().map(|(x, _)| p.averaged_message(x)).collect::<Result<Vec<_>, _>>()?;
    let parts: Vec<(f64, &MessageState)> = mu.iter().zip(&states).map(|((_, w), s)| (*w, s)).collect();
    Ok((MessageState::mixture(&parts)?, states))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurityReport {
    pub purity: f64,
    pub dim: usize,
    pub lower: f64,
    pub status: Status,
}

/// `1/dim <= tr rho^2 <= 1` for `rho` the `mu`-average of the messages.
pub fn check_purity_bounds(p: &dyn Protocol, mu: &[(Vec<Bits>, f64)]) -> Result<PurityReport, ProtocolError> {
    guard_density(p)?;
    let (rho, _) = mixed_message(p, mu)?;
    let (purity, dim) = (rho.purity(), rho.dim());
    let lower = 1.0 / dim as f64;
    let ok = purity >= lower - PURITY_TOL && purity <= 1.0 + PURITY_TOL;
    Ok(PurityReport { purity, dim, lower, status: Status::from_bool(ok) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim31Report {
    /// `tr rho^2`.
    pub lhs: f64,
    /// `beta^-1 * sum over distinct input pairs of mu mu' tr(rho rho')`.
    pub rhs: Option<f64>,
    pub beta: f64,
    pub status: Status,
}

/// Compares the purity of the mixed message with its cross terms scaled by
/// the inverse per-class non-collision probability.
pub fn check_claim31(p: &dyn Protocol, mu: &[(Vec<Bits>, f64)], tol: f64) -> Result<Claim31Report, ProtocolError> {
    guard_density(p)?;
    let support: Vec<&(Vec<Bits>, f64)> = mu.iter().filter(|(_, w)| *w > 0.0).collect();
    let mut labelled = Vec::with_capacity(support.len());
    for (x, w) in &support {
        let y = p.reference(x)?.ok_or(ProtocolError::PromiseViolation)?;
        labelled.push((y, *w));
    }
    let beta = beta_of_classes(labelled).unwrap_or(0.0);
    let owned: InputWeights = support.iter().map(|&(x, w)| (x.clone(), *w)).collect();
    let (rho, states) = mixed_message(p, &owned)?;
    let lhs = rho.purity();
    if beta <= 0.0 {
        let status = Status::Skipped("beta is zero: no class has two distinct inputs of positive weight".into());
        return Ok(Claim31Report { lhs, rhs: None, beta, status });
    }
    // sum over i != j of mu_i mu_j tr(rho_i rho_j) is tr(rho^2) minus the diagonal
    let diagonal: f64 = states.iter().zip(&owned).map(|(st, (_, w))| w * w * st.purity()).sum();
    let cross = lhs - diagonal;
    let rhs = cross / beta;
    Ok(Claim31Report { lhs, rhs: Some(rhs), beta, status: Status::from_bool(lhs <= rhs + tol) })
}

/// Total message size and its unit.
pub fn communication_cost(p: &dyn Protocol) -> Cost {
    p.cost()
}
