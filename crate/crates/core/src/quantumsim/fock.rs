use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_fraction, Error, Result};
use crate::transducer::plogp;

/// Default per-mode photon cutoff: the two-level Fock restriction plus room
/// for a bunched photon pair.
pub const DEFAULT_CUTOFF: usize = 2;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeLabel {
    Optical,
    Microwave,
}

/// Pure state of two bosonic modes, truncated at `cutoff` photons per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTwoMode {
    cutoff: usize,
    labels: (ModeLabel, ModeLabel),
    // row-major over (n_a, n_b)
    amplitudes: Vec<Complex64>,
}

impl FockTwoMode {
    /// Number state `|n_a, n_b>`.
    pub fn basis(n_a: usize, n_b: usize, cutoff: usize, labels: (ModeLabel, ModeLabel)) -> Result<Self> {
        Self::from_terms(cutoff, labels, &[((n_a, n_b), Complex64::new(1.0, 0.0))])
    }

    /// Builds a state from `(n_a, n_b) -> amplitude` terms. Terms must already
    /// be normalized.
    pub fn from_terms(
        cutoff: usize,
        labels: (ModeLabel, ModeLabel),
        terms: &[((usize, usize), Complex64)],
    ) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::Domain(format!("Fock cutoff {cutoff} must be >= 2")));
        }
        let dim = cutoff + 1;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim * dim];
        for &((n_a, n_b), amp) in terms {
            if n_a > cutoff || n_b > cutoff {
                return Err(Error::CutoffOverflow {
                    needed: n_a.max(n_b),
                    cutoff,
                });
            }
            amplitudes[n_a * dim + n_b] += amp;
        }
        let state = Self {
            cutoff,
            labels,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("Fock state norm {norm} is not 1")));
        }
        Ok(state)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn labels(&self) -> (ModeLabel, ModeLabel) {
        self.labels
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        if n_a > self.cutoff || n_b > self.cutoff {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes[n_a * (self.cutoff + 1) + n_b]
    }

    pub fn probability(&self, n_a: usize, n_b: usize) -> f64 {
        self.amplitude(n_a, n_b).norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Non-zero terms in `(n_a, n_b)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        let dim = self.cutoff + 1;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(move |(i, &a)| ((i / dim, i % dim), a))
    }

    /// Probability of finding `n` photons in total.
    pub fn total_photon_probability(&self, n: usize) -> f64 {
        self.terms()
            .filter(|((a, b), _)| a + b == n)
            .map(|(_, amp)| amp.norm_sqr())
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &FockTwoMode) -> f64 {
        let dim = self.cutoff.max(other.cutoff);
        let mut overlap = Complex64::new(0.0, 0.0);
        for a in 0..=dim {
            for b in 0..=dim {
                overlap += self.amplitude(a, b).conj() * other.amplitude(a, b);
            }
        }
        overlap.norm_sqr()
    }

    /// Amplitudes as a `(cutoff+1) x (cutoff+1)` matrix, rows indexed by mode a.
    pub fn amplitude_matrix(&self) -> DMatrix<Complex64> {
        let dim = self.cutoff + 1;
        DMatrix::from_row_slice(dim, dim, &self.amplitudes)
    }

    /// Entanglement entropy between the two modes in bits, from the Schmidt
    /// coefficients of the amplitude matrix.
    pub fn entanglement_entropy(&self) -> f64 {
        let svd = self.amplitude_matrix().svd(false, false);
        svd.singular_values.iter().map(|s| plogp(s * s)).sum()
    }

    /// Multiplies each `|n_a, n_b>` by `exp(i (phi_a n_a + phi_b n_b))`.
    pub fn phase_shift(&self, phi_a: f64, phi_b: f64) -> FockTwoMode {
        let mut out = self.clone();
        let dim = self.cutoff + 1;
        for (i, amp) in out.amplitudes.iter_mut().enumerate() {
            let (a, b) = (i / dim, i % dim);
            *amp *= Complex64::from_polar(1.0, phi_a * a as f64 + phi_b * b as f64);
        }
        out
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Output terms of a lossless beam splitter with mode transformation
/// `[[sqrt(R), i sqrt(T)], [i sqrt(T), sqrt(R)]]`, `R = 1 - T`, acting on
/// `|n_a, n_b>`.
pub(crate) fn beam_splitter_terms(n_a: usize, n_b: usize, transmission: f64) -> Vec<((usize, usize), Complex64)> {
    let r = Complex64::new((1.0 - transmission).max(0.0).sqrt(), 0.0);
    let t = Complex64::new(0.0, transmission.max(0.0).sqrt());
    let total = n_a + n_b;
    let mut out = vec![Complex64::new(0.0, 0.0); total + 1];
    // a^dag -> r a^dag + t b^dag, b^dag -> t a^dag + r b^dag
    for j in 0..=n_a {
        for k in 0..=n_b {
            let m = j + k;
            let coeff = binomial(n_a, j)
                * binomial(n_b, k)
                * (factorial(m) * factorial(total - m) / (factorial(n_a) * factorial(n_b))).sqrt();
            out[m] += r.powu((j + n_b - k) as u32) * t.powu((n_a - j + k) as u32) * coeff;
        }
    }
    out.into_iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 1e-30)
        .map(|(m, a)| ((m, total - m), a))
        .collect()
}

/// Applies a lossless beam splitter with transmission `T` to both modes.
pub fn beam_splitter(state: &FockTwoMode, transmission: f64) -> Result<FockTwoMode> {
    check_fraction("transmission", transmission)?;
    let mut terms = Vec::new();
    for ((a, b), amp) in state.terms() {
        for ((a2, b2), out) in beam_splitter_terms(a, b, transmission) {
            if a2 > state.cutoff || b2 > state.cutoff {
                return Err(Error::CutoffOverflow {
                    needed: a2.max(b2),
                    cutoff: state.cutoff,
                });
            }
            terms.push(((a2, b2), amp * out));
        }
    }
    FockTwoMode::from_terms(state.cutoff, state.labels, &terms)
}

/// State leaving a lossless transducer of efficiency `eta` fed with one
/// microwave photon: `sqrt(eta)|0_M 1_O> + sqrt(1 - eta)|1_M 0_O>`.
///
/// The splitter puts a factor `i` on the converted branch; a local phase
/// rotation of the optical mode removes it.
pub fn transducer_output_state(eta: f64) -> Result<FockTwoMode> {
    check_fraction("eta", eta)?;
    let input = FockTwoMode::basis(1, 0, DEFAULT_CUTOFF, (ModeLabel::Microwave, ModeLabel::Optical))?;
    let out = beam_splitter(&input, eta)?;
    Ok(out.phase_shift(0.0, -std::f64::consts::FRAC_PI_2))
}
