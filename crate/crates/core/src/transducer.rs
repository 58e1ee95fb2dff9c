//! Electro-optical transducer model.
//!
//! A transducer is described either by its physical rates ([`PhysicalParams`])
//! or by the three dimensionless numbers that the conversion efficiency
//! actually depends on ([`ReducedParams`]): the cooperativity `C` and the two
//! extraction ratios `zeta_o`, `zeta_m`. Rates only enter through ratios, so
//! any consistent unit works; Hz is the convention used throughout.

use nalgebra::{Matrix2, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_fraction, Error, Result};

/// Cooperativity at which an ideal transducer converts with efficiency 1/2,
/// i.e. acts as a balanced beam splitter and emits a maximally entangled
/// microwave-optical pair. Equal to `3 - 2*sqrt(2)`.
pub const EPR_COOPERATIVITY: f64 = 0.171_572_875_253_809_9;

/// Symmetric cooperativity (up- and down-converter alike, ideal extraction,
/// no fiber) above which a direct link exceeds success probability 1/2.
/// Equal to `2*sqrt(2) - 2*sqrt(2 - sqrt(2)) - 1`.
pub const DIRECT_LINK_COOPERATIVITY: f64 = 0.297_693_395_285_831_0;

/// Physical parameters of one transducer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// External coupling rate of the optical mode.
    pub coupling_optical_ext: f64,
    /// External coupling rate of the microwave mode.
    pub coupling_microwave_ext: f64,
    /// Total loss rate of the optical mode.
    pub loss_optical: f64,
    /// Total loss rate of the microwave mode.
    pub loss_microwave: f64,
    /// Electro-optic coupling `g`.
    pub electro_optic_coupling: f64,
    /// Mean intracavity pump photon number.
    pub mean_pump_photons: f64,
}

impl PhysicalParams {
    pub fn new(
        coupling_optical_ext: f64,
        coupling_microwave_ext: f64,
        loss_optical: f64,
        loss_microwave: f64,
        electro_optic_coupling: f64,
        mean_pump_photons: f64,
    ) -> Result<Self> {
        let p = Self {
            coupling_optical_ext,
            coupling_microwave_ext,
            loss_optical,
            loss_microwave,
            electro_optic_coupling,
            mean_pump_photons,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters that reduce to the given `(C, zeta_o, zeta_m)` with
    /// unit total loss rates.
    pub fn from_reduced(r: &ReducedParams) -> Result<Self> {
        // g^2 <n> = C * gamma_o * gamma_m / 4 with gamma = 1, pump fixed at 1.
        Self::new(
            r.extraction_optical,
            r.extraction_microwave,
            1.0,
            1.0,
            (r.cooperativity / 4.0).sqrt(),
            1.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.coupling_optical_ext,
            self.coupling_microwave_ext,
            self.loss_optical,
            self.loss_microwave,
            self.electro_optic_coupling,
            self.mean_pump_photons,
        ];
        if all.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Domain(format!("rates must be finite and non-negative: {self:?}")));
        }
        if self.loss_optical == 0.0 || self.loss_microwave == 0.0 {
            return Err(Error::Domain("total loss rates must be positive".into()));
        }
        for (name, ext, total) in [
            ("optical", self.coupling_optical_ext, self.loss_optical),
            ("microwave", self.coupling_microwave_ext, self.loss_microwave),
        ] {
            if ext <= 0.0 || ext > total {
                return Err(Error::Domain(format!(
                    "{name} external coupling {ext} must lie in (0, {total}]"
                )));
            }
        }
        Ok(())
    }

    /// `g^2 <n>`, the pump-enhanced coupling squared.
    fn pumped_coupling_sq(&self) -> f64 {
        self.electro_optic_coupling * self.electro_optic_coupling * self.mean_pump_photons
    }

    /// Internal (intrinsic) loss rates `(optical, microwave)`.
    pub fn internal_losses(&self) -> (f64, f64) {
        (
            self.loss_optical - self.coupling_optical_ext,
            self.loss_microwave - self.coupling_microwave_ext,
        )
    }
}

/// Cooperativity and extraction ratios of one transducer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub cooperativity: f64,
    pub extraction_optical: f64,
    pub extraction_microwave: f64,
}

impl ReducedParams {
    pub fn new(cooperativity: f64, extraction_optical: f64, extraction_microwave: f64) -> Result<Self> {
        if !cooperativity.is_finite() || cooperativity < 0.0 {
            return Err(Error::Domain(format!("cooperativity {cooperativity} must be >= 0")));
        }
        check_fraction("extraction_optical", extraction_optical)?;
        check_fraction("extraction_microwave", extraction_microwave)?;
        Ok(Self {
            cooperativity,
            extraction_optical,
            extraction_microwave,
        })
    }

    /// Transducer with ideal extraction (`zeta_o = zeta_m = 1`).
    pub fn ideal(cooperativity: f64) -> Result<Self> {
        Self::new(cooperativity, 1.0, 1.0)
    }

    pub fn efficiency(&self) -> f64 {
        efficiency(self)
    }

    /// Same extraction ratios, cooperativity capped at `cap`.
    pub fn with_cooperativity_cap(&self, cap: f64) -> Self {
        Self {
            cooperativity: self.cooperativity.min(cap),
            ..*self
        }
    }
}

/// Conversion efficiency from physical rates under resonant driving.
pub fn efficiency_physical(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    let pumped = p.pumped_coupling_sq();
    let denom = p.loss_optical * p.loss_microwave / 4.0 + pumped;
    let eta = p.coupling_optical_ext * p.coupling_microwave_ext * pumped / (denom * denom);
    Ok(eta.clamp(0.0, 1.0))
}

pub fn reduce(p: &PhysicalParams) -> Result<ReducedParams> {
    p.validate()?;
    ReducedParams::new(
        4.0 * p.pumped_coupling_sq() / (p.loss_optical * p.loss_microwave),
        p.coupling_optical_ext / p.loss_optical,
        p.coupling_microwave_ext / p.loss_microwave,
    )
}

/// `eta = 4 zeta_o zeta_m C / (1 + C)^2`. The same value serves for up- and
/// down-conversion.
pub fn efficiency(r: &ReducedParams) -> f64 {
    let c = r.cooperativity;
    let eta = 4.0 * r.extraction_optical * r.extraction_microwave * c / ((1.0 + c) * (1.0 + c));
    eta.clamp(0.0, 1.0)
}

/// Which of the two cooperativities reaching a given efficiency to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The root in `[0, 1]`.
    Lower,
    /// The root in `[1, inf)`.
    Upper,
}

/// Inverts [`efficiency`] in closed form.
///
/// Solves `target (1 + C)^2 = 4 zeta_o zeta_m C`. The two roots multiply to
/// one, so the lower root is taken as the reciprocal of the upper to avoid
/// cancellation at small targets.
pub fn cooperativity_for_efficiency(
    target: f64,
    extraction_optical: f64,
    extraction_microwave: f64,
    branch: Branch,
) -> Result<f64> {
    check_fraction("extraction_optical", extraction_optical)?;
    check_fraction("extraction_microwave", extraction_microwave)?;
    let k = extraction_optical * extraction_microwave;
    if !(target > 0.0) {
        return Err(Error::Domain(format!("target efficiency {target} must be > 0")));
    }
    if target > k {
        return Err(Error::NoSolution { target, max: k });
    }
    let disc = (k * (k - target)).max(0.0);
    let upper = ((2.0 * k - target) + 2.0 * disc.sqrt()) / target;
    Ok(match branch {
        Branch::Upper => upper,
        Branch::Lower => 1.0 / upper,
    })
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(eta: f64) -> Result<f64> {
    check_fraction("eta", eta)?;
    Ok(entropy_bits(eta))
}

/// Unchecked binary entropy; callers guarantee `x` in `[0, 1]`.
pub(crate) fn entropy_bits(x: f64) -> f64 {
    plogp(x) + plogp(1.0 - x)
}

/// `-p log2 p`, zero at the endpoints.
pub(crate) fn plogp(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Steady-state input-output matrix of a lossless transducer, rows and
/// columns ordered (optical, microwave).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    pub entries: Matrix2<Complex64>,
}

impl ScatteringMatrix {
    pub fn optical_optical(&self) -> Complex64 {
        self.entries[(0, 0)]
    }

    pub fn optical_microwave(&self) -> Complex64 {
        self.entries[(0, 1)]
    }

    pub fn microwave_optical(&self) -> Complex64 {
        self.entries[(1, 0)]
    }

    pub fn microwave_microwave(&self) -> Complex64 {
        self.entries[(1, 1)]
    }

    /// Beam-splitter transmission `T = |L_om|^2`.
    pub fn transmission(&self) -> f64 {
        self.optical_microwave().norm_sqr()
    }

    /// Beam-splitter reflection `R = |L_oo|^2`.
    pub fn reflection(&self) -> f64 {
        self.optical_optical().norm_sqr()
    }

    /// Largest entry of `|L^dagger L - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.entries.adjoint() * self.entries - Matrix2::identity();
        prod.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Phase-insensitive overlap `|tr(A^dagger B)|^2 / 4` with another 2x2
    /// unitary; 1 iff equal up to a global phase.
    pub fn fidelity_with(&self, other: &Matrix2<Complex64>) -> f64 {
        (self.entries.adjoint() * other).trace().norm_sqr() / 4.0
    }
}

/// Balanced beam splitter `(1/sqrt 2) [[1, i], [i, 1]]`.
pub fn balanced_beam_splitter() -> Matrix2<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(
        Complex64::new(s, 0.0),
        Complex64::new(0.0, s),
        Complex64::new(0.0, s),
        Complex64::new(s, 0.0),
    )
}

/// Scattering matrix at zero detuning. Only defined for unit extraction
/// ratios: with internal losses the diagonal entries stop having equal
/// magnitude and the lossless beam-splitter picture no longer applies.
pub fn scattering_matrix(p: &PhysicalParams) -> Result<ScatteringMatrix> {
    p.validate()?;
    let r = reduce(p)?;
    const TOL: f64 = 1e-12;
    if (r.extraction_optical - 1.0).abs() > TOL || (r.extraction_microwave - 1.0).abs() > TOL {
        return Err(Error::Unsupported(format!(
            "scattering matrix requires unit extraction ratios, got ({}, {})",
            r.extraction_optical, r.extraction_microwave
        )));
    }
    let loss_product = p.loss_optical * p.loss_microwave;
    let pumped = p.pumped_coupling_sq();
    let d = loss_product / 4.0 + pumped;
    let diag = Complex64::new((loss_product / 4.0 - pumped) / d, 0.0);
    let off = Complex64::new(
        0.0,
        p.electro_optic_coupling * (p.mean_pump_photons * loss_product).sqrt() / d,
    );
    Ok(ScatteringMatrix {
        entries: Matrix2::new(diag, off, off, diag),
    })
}

/// Entanglement of the transducer output state `sqrt(eta)|0,1> +
/// sqrt(1-eta)|1,0>`, computed as the von Neumann entropy of its reduced
/// density matrix `diag(eta, 1 - eta)`.
pub fn distillable_entanglement(eta: f64) -> Result<f64> {
    check_fraction("eta", eta)?;
    let reduced = Matrix2::new(eta, 0.0, 0.0, 1.0 - eta);
    let eig = SymmetricEigen::new(reduced);
    Ok(eig.eigenvalues.iter().map(|&l| plogp(l)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn physical_for(c: f64, zeta: f64) -> PhysicalParams {
        PhysicalParams::new(zeta * 2.0, zeta * 3.0, 2.0, 3.0, 1.5, c * 6.0 / (4.0 * 2.25)).unwrap()
    }

    #[test]
    fn constants_match_radicals() {
        let s2 = 2f64.sqrt();
        assert!((EPR_COOPERATIVITY - (3.0 - 2.0 * s2)).abs() < 1e-15);
        let dmd = 2.0 * s2 - 2.0 * (2.0 - s2).sqrt() - 1.0;
        assert!((DIRECT_LINK_COOPERATIVITY - dmd).abs() < 1e-15);
    }

    #[test]
    fn physical_efficiency_examples() {
        let p = PhysicalParams::new(1.0, 1.0, 1.0, 1.0, 0.5, 1.0).unwrap();
        assert!((efficiency_physical(&p).unwrap() - 1.0).abs() < 1e-15);

        let p = PhysicalParams::new(1.0, 1.0, 1.0, 1.0, 0.5, 0.0).unwrap();
        assert_eq!(efficiency_physical(&p).unwrap(), 0.0);

        let p = physical_for(1.0, 0.9);
        let eq3 = 4.0 * 0.9 * 0.9 * 1.0 / 4.0;
        assert!((efficiency_physical(&p).unwrap() - eq3).abs() < 1e-12);
        assert!((eq3 - 0.81).abs() < 1e-15);
    }

    #[test]
    fn physical_params_reject_bad_rates() {
        assert!(PhysicalParams::new(-1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.5, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 1.0, 1.0, 1.0, -2.0).is_err());
    }

    #[test]
    fn reduce_examples() {
        let p = PhysicalParams::new(2.0, 3.0, 2.0, 3.0, 1.0, 1.5).unwrap();
        let r = reduce(&p).unwrap();
        assert!((r.cooperativity - 1.0).abs() < 1e-15);
        assert_eq!(r.extraction_optical, 1.0);
        assert_eq!(r.extraction_microwave, 1.0);

        let s2 = 2f64.sqrt();
        let p = physical_for(3.0 - 2.0 * s2, 1.0);
        let r = reduce(&p).unwrap();
        assert!((r.cooperativity - 0.171_572_875_253_81).abs() < 1e-13);
        assert_eq!(p.internal_losses(), (0.0, 0.0));
    }

    #[test]
    fn efficiency_examples() {
        assert_eq!(efficiency(&ReducedParams::ideal(1.0).unwrap()), 1.0);
        let half = efficiency(&ReducedParams::ideal(EPR_COOPERATIVITY).unwrap());
        assert!((half - 0.5).abs() < 1e-15);
        assert_eq!(efficiency(&ReducedParams::ideal(0.0).unwrap()), 0.0);
        assert!(ReducedParams::new(-0.1, 1.0, 1.0).is_err());
        assert!(ReducedParams::new(1.0, 1.1, 1.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        let c = cooperativity_for_efficiency(0.5, 1.0, 1.0, Branch::Lower).unwrap();
        assert!((c - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        for b in [Branch::Lower, Branch::Upper] {
            assert!((cooperativity_for_efficiency(1.0, 1.0, 1.0, b).unwrap() - 1.0).abs() < 1e-15);
        }
        let c = cooperativity_for_efficiency(std::f64::consts::FRAC_1_SQRT_2, 1.0, 1.0, Branch::Lower)
            .unwrap();
        assert!((c - DIRECT_LINK_COOPERATIVITY).abs() < 1e-14);
        let upper = cooperativity_for_efficiency(0.5, 1.0, 1.0, Branch::Upper).unwrap();
        assert!((upper - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn inverse_rejects_unreachable_targets() {
        assert_eq!(
            cooperativity_for_efficiency(0.9, 0.9, 0.9, Branch::Lower),
            Err(Error::NoSolution { target: 0.9, max: 0.81 })
        );
        assert!(cooperativity_for_efficiency(0.0, 1.0, 1.0, Branch::Lower).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // mpmath, 30 digits
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-15);
        assert!(binary_entropy(1.2).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn scattering_examples() {
        let at_one = scattering_matrix(&physical_for(1.0, 1.0)).unwrap();
        assert!(at_one.optical_optical().norm() < 1e-15);
        assert!((at_one.optical_microwave().norm() - 1.0).abs() < 1e-15);

        let at_th = scattering_matrix(&physical_for(EPR_COOPERATIVITY, 1.0)).unwrap();
        assert!(at_th.fidelity_with(&balanced_beam_splitter()) > 1.0 - 1e-12);

        let idle = scattering_matrix(&physical_for(0.0, 1.0)).unwrap();
        assert!((idle.entries - Matrix2::identity()).iter().all(|z| z.norm() < 1e-15));

        assert!(matches!(
            scattering_matrix(&physical_for(1.0, 0.9)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn distillable_entanglement_examples() {
        assert!((distillable_entanglement(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(distillable_entanglement(1.0).unwrap(), 0.0);
        // mpmath, 30 digits
        assert!((distillable_entanglement(0.3).unwrap() - 0.881_290_899_230_692_6).abs() < 1e-15);
    }
}
