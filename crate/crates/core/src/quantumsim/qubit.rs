use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register the state-vector engine accepts.
pub const MAX_QUBITS: usize = 14;
/// Largest GHZ state [`make_ghz`] builds.
pub const MAX_GHZ_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Microwave,
    Optical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Orchestrator,
    Client(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLabel {
    pub domain: Domain,
    pub location: Location,
}

impl QubitLabel {
    pub const ORCHESTRATOR: QubitLabel = QubitLabel {
        domain: Domain::Microwave,
        location: Location::Orchestrator,
    };

    pub fn client(c: usize) -> Self {
        Self {
            domain: Domain::Microwave,
            location: Location::Client(c),
        }
    }
}

/// Normalized state vector over `2^k` basis states. Qubit `q` is bit `q` of
/// the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    labels: Vec<QubitLabel>,
    amplitudes: Vec<Complex64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn hadamard() -> Matrix2<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(c(s), c(s), c(s), c(-s))
}

pub fn pauli_x() -> Matrix2<Complex64> {
    Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0))
}

pub fn pauli_z() -> Matrix2<Complex64> {
    Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0))
}

impl PureState {
    pub fn new(labels: Vec<QubitLabel>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let k = labels.len();
        if k > MAX_QUBITS {
            return Err(Error::SizeCap {
                requested: k,
                cap: MAX_QUBITS,
            });
        }
        if amplitudes.len() != 1 << k {
            return Err(Error::Domain(format!(
                "{} amplitudes do not describe {k} qubits",
                amplitudes.len()
            )));
        }
        let state = Self { labels, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("state norm {norm} is not 1")));
        }
        Ok(state)
    }

    /// Unlabeled state (all qubits tagged as orchestrator microwave qubits).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let k = amplitudes.len().trailing_zeros() as usize;
        Self::new(vec![QubitLabel::ORCHESTRATOR; k], amplitudes)
    }

    /// `|0...0>` on `k` qubits.
    pub fn zeros(k: usize) -> Result<Self> {
        if k > MAX_QUBITS {
            return Err(Error::SizeCap {
                requested: k,
                cap: MAX_QUBITS,
            });
        }
        let mut amplitudes = vec![c(0.0); 1 << k];
        amplitudes[0] = c(1.0);
        Self::new(vec![QubitLabel::ORCHESTRATOR; k], amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<QubitLabel>) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::Domain("label count does not match register size".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `self` on the low qubits, `other` on the high ones.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let k = self.num_qubits();
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        if labels.len() > MAX_QUBITS {
            return Err(Error::SizeCap {
                requested: labels.len(),
                cap: MAX_QUBITS,
            });
        }
        let mut amplitudes = vec![c(0.0); 1 << labels.len()];
        for (j, b) in other.amplitudes.iter().enumerate() {
            for (i, a) in self.amplitudes.iter().enumerate() {
                amplitudes[i | (j << k)] = a * b;
            }
        }
        Ok(PureState { labels, amplitudes })
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits() {
            return Err(Error::Domain(format!(
                "qubit {q} out of range for {} qubits",
                self.num_qubits()
            )));
        }
        Ok(())
    }

    pub fn apply_single(&mut self, q: usize, gate: &Matrix2<Complex64>) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1 << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = gate[(0, 0)] * a0 + gate[(0, 1)] * a1;
                self.amplitudes[i | bit] = gate[(1, 0)] * a0 + gate[(1, 1)] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::Domain("CNOT control and target coincide".into()));
        }
        let (cb, tb) = (1 << control, 1 << target);
        for i in 0..self.amplitudes.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amplitudes.swap(i, i | tb);
            }
        }
        Ok(())
    }

    /// Born probability of reading 1 on qubit `q`.
    pub fn probability_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & (1 << q) != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projects qubit `q` onto `outcome` and renormalizes, keeping it in the
    /// register. Returns the probability of that outcome.
    pub fn collapse(&mut self, q: usize, outcome: bool) -> Result<f64> {
        let p1 = self.probability_one(q)?;
        let p = if outcome { p1 } else { 1.0 - p1 };
        if p <= 1e-15 {
            return Err(Error::Domain(format!(
                "outcome {} on qubit {q} has zero probability",
                outcome as u8
            )));
        }
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if ((i >> q) & 1 == 1) == outcome {
                *a *= scale;
            } else {
                *a = c(0.0);
            }
        }
        Ok(p)
    }

    /// Sub-register of the qubits not listed in `fixed`, conditioned on the
    /// listed qubits holding the given values. The result is renormalized.
    pub fn restrict(&self, fixed: &[(usize, bool)]) -> Result<PureState> {
        for &(q, _) in fixed {
            self.check_qubit(q)?;
        }
        let keep: Vec<usize> = (0..self.num_qubits())
            .filter(|q| !fixed.iter().any(|(f, _)| f == q))
            .collect();
        let mut base = 0usize;
        for &(q, v) in fixed {
            if v {
                base |= 1 << q;
            }
        }
        let mut amplitudes = vec![c(0.0); 1 << keep.len()];
        for (j, amp) in amplitudes.iter_mut().enumerate() {
            let mut idx = base;
            for (bit, &q) in keep.iter().enumerate() {
                if (j >> bit) & 1 == 1 {
                    idx |= 1 << q;
                }
            }
            *amp = self.amplitudes[idx];
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm <= 1e-15 {
            return Err(Error::Domain("restriction has zero weight".into()));
        }
        let scale = 1.0 / norm.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        let labels = keep.iter().map(|&q| self.labels[q]).collect();
        PureState::new(labels, amplitudes)
    }

    /// `|<self|other>|^2`, ignoring labels.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::Domain("fidelity between registers of different size".into()));
        }
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr())
    }

    /// Reduced density matrix of the listed qubits (in the listed order,
    /// first listed qubit is the lowest bit).
    pub fn reduced_density_matrix(&self, qubits: &[usize]) -> Result<DMatrix<Complex64>> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let dim = 1 << qubits.len();
        let mut rho = DMatrix::zeros(dim, dim);
        let sub_index = |i: usize| {
            qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (bit, &q)| acc | (((i >> q) & 1) << bit))
        };
        let mask: usize = qubits.iter().map(|q| 1usize << q).sum();
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in self.amplitudes.iter().enumerate() {
                if i & !mask == j & !mask {
                    rho[(sub_index(i), sub_index(j))] += a * b.conj();
                }
            }
        }
        Ok(rho)
    }

    /// `tr(rho^2)` of the listed qubits; 1 iff they are unentangled with the rest.
    pub fn purity(&self, qubits: &[usize]) -> Result<f64> {
        let rho = self.reduced_density_matrix(qubits)?;
        Ok((&rho * &rho).trace().re)
    }
}

/// `(|0...0> + |1...1>) / sqrt(2)` on `n` qubits.
pub fn make_ghz(n: usize) -> Result<PureState> {
    if n == 0 || n > MAX_GHZ_QUBITS {
        return Err(Error::SizeCap {
            requested: n,
            cap: MAX_GHZ_QUBITS,
        });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amplitudes = vec![c(0.0); 1 << n];
    amplitudes[0] = c(s);
    amplitudes[(1 << n) - 1] = c(s);
    PureState::new(vec![QubitLabel::ORCHESTRATOR; n], amplitudes)
}

/// `(|00> + |11>) / sqrt(2)` shared by the orchestrator and client `client`.
pub fn epr_pair(client: usize) -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState {
        labels: vec![QubitLabel::ORCHESTRATOR, QubitLabel::client(client)],
        amplitudes: vec![c(s), c(0.0), c(0.0), c(s)],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeasurementBasis {
    #[default]
    Z,
}

/// Measures qubit `index` and removes it from the register.
pub fn measure_out_qubit<R: Rng + ?Sized>(
    state: &PureState,
    index: usize,
    basis: MeasurementBasis,
    rng: &mut R,
) -> Result<(bool, PureState)> {
    let MeasurementBasis::Z = basis;
    let p1 = state.probability_one(index)?;
    let outcome = rng.random::<f64>() < p1;
    let rest = state.restrict(&[(index, outcome)])?;
    Ok((outcome, rest))
}

/// Resource pair for one teleported ebit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EprResource {
    Ideal,
    Erased,
}

/// Result of one Bell-state measurement: the two classical bits that select
/// the Pauli correction `Z^z X^x` at the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BellOutcome {
    pub z: bool,
    pub x: bool,
}

impl BellOutcome {
    pub fn all() -> [BellOutcome; 4] {
        [
            BellOutcome { z: false, x: false },
            BellOutcome { z: false, x: true },
            BellOutcome { z: true, x: false },
            BellOutcome { z: true, x: true },
        ]
    }
}

enum Outcomes<'a, R: Rng> {
    Sampled(&'a mut R),
    Forced(&'a [BellOutcome]),
}

/// Teleports every qubit of `state` to its own client over ideal EPR pairs,
/// with Bell-measurement outcomes drawn from the Born rule.
pub fn teleport(state: &PureState, resources: &[EprResource], bsm_seed: u64) -> Result<PureState> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(bsm_seed);
    teleport_impl(state, resources, Outcomes::Sampled(&mut rng))
}

/// Teleportation with prescribed Bell-measurement outcomes, one per ebit.
pub fn teleport_with_outcomes(
    state: &PureState,
    resources: &[EprResource],
    outcomes: &[BellOutcome],
) -> Result<PureState> {
    if outcomes.len() != state.num_qubits() {
        return Err(Error::Domain(format!(
            "{} Bell outcomes for {} ebits",
            outcomes.len(),
            state.num_qubits()
        )));
    }
    teleport_impl::<Xoshiro256PlusPlus>(state, resources, Outcomes::Forced(outcomes))
}

fn teleport_impl<R: Rng>(state: &PureState, resources: &[EprResource], mut outcomes: Outcomes<'_, R>) -> Result<PureState> {
    let n = state.num_qubits();
    if resources.len() != n {
        return Err(Error::ResourceMismatch {
            expected: n,
            got: resources.len(),
        });
    }
    if let Some(i) = resources.iter().position(|r| *r == EprResource::Erased) {
        return Err(Error::ErasedResource(i));
    }

    // Register layout: input qubits 0..n, then (orchestrator half, client half)
    // of pair i at n + 2i, n + 2i + 1.
    let mut full = state.clone();
    for i in 0..n {
        full = full.tensor(&epr_pair(i))?;
    }
    let ours = |i: usize| n + 2 * i;
    let theirs = |i: usize| n + 2 * i + 1;

    let mut fixed = Vec::with_capacity(2 * n);
    for i in 0..n {
        full.apply_cnot(i, ours(i))?;
        full.apply_single(i, &hadamard())?;
        let outcome = match &mut outcomes {
            Outcomes::Forced(list) => list[i],
            Outcomes::Sampled(rng) => BellOutcome {
                z: rng.random::<f64>() < full.probability_one(i)?,
                x: false,
            },
        };
        full.collapse(i, outcome.z)?;
        let x = match &mut outcomes {
            Outcomes::Forced(_) => outcome.x,
            Outcomes::Sampled(rng) => rng.random::<f64>() < full.probability_one(ours(i))?,
        };
        full.collapse(ours(i), x)?;
        if x {
            full.apply_single(theirs(i), &pauli_x())?;
        }
        if outcome.z {
            full.apply_single(theirs(i), &pauli_z())?;
        }
        fixed.push((i, outcome.z));
        fixed.push((ours(i), x));
    }
    full.restrict(&fixed)
}
