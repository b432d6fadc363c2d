//! Model parameters and single-mode Gaussian state measures.
//!
//! Units are natural throughout (hbar = c = 1). The damping constant `gamma`
//! is the canonical coupling input; the field coupling
//! `lambda = sqrt(8 pi M gamma)` is derived from it.
//!
//! The underdamped oscillation frequency is read as
//! `omega_tilde^2 = omega_r^2 - gamma^2`, i.e. `omega_tilde` is the square
//! root of that difference, not the difference itself.

use std::f64::consts::PI;

use log::warn;

use crate::error::{Error, Result};

/// Purity values above `1 + PURITY_TOLERANCE` are reported as unphysical.
pub const PURITY_TOLERANCE: f64 = 1e-9;

/// Physical constants of the oscillator-field model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Oscillator mass `M`.
    pub mass: f64,
    /// Renormalized oscillator frequency.
    pub omega_r: f64,
    /// Damping constant `lambda^2 / (8 pi M)`.
    pub gamma: f64,
    /// Distance between the oscillator and its mirror image (twice the
    /// oscillator-mirror separation).
    pub distance: f64,
    /// High-frequency field cutoff.
    pub cutoff: f64,
}

impl Default for SystemParams {
    /// `M = 1`, `omega_r = 5`, `gamma = 0.02`, `L = 2`, `cutoff = 1e4 omega_r`.
    fn default() -> Self {
        Self {
            mass: 1.0,
            omega_r: 5.0,
            gamma: 0.02,
            distance: 2.0,
            cutoff: 5.0e4,
        }
    }
}

impl SystemParams {
    pub fn new(mass: f64, omega_r: f64, gamma: f64, distance: f64, cutoff: f64) -> Result<Self> {
        let p = Self {
            mass,
            omega_r,
            gamma,
            distance,
            cutoff,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from the bare coupling `lambda` instead of `gamma`.
    pub fn from_coupling(mass: f64, omega_r: f64, lambda: f64, distance: f64, cutoff: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(invalid("mass", mass, "must be positive and finite"));
        }
        Self::new(mass, omega_r, gamma_from_coupling(lambda, mass), distance, cutoff)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, v, "must be positive and finite"))
            }
        };
        positive("mass", self.mass)?;
        positive("omega_r", self.omega_r)?;
        positive("distance", self.distance)?;
        positive("cutoff", self.cutoff)?;
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(invalid("gamma", self.gamma, "must be non-negative and finite"));
        }
        if self.gamma >= self.omega_r {
            return Err(invalid("gamma", self.gamma, "must be below omega_r (underdamped)"));
        }
        Ok(())
    }

    /// Field coupling `lambda = sqrt(8 pi M gamma)`.
    pub fn lambda(&self) -> f64 {
        (8.0 * PI * self.mass * self.gamma).sqrt()
    }

    /// `sqrt(omega_r^2 - gamma^2)`.
    pub fn omega_tilde(&self) -> f64 {
        ((self.omega_r - self.gamma) * (self.omega_r + self.gamma)).sqrt()
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_distance(self, distance: f64) -> Self {
        Self { distance, ..self }
    }

    pub fn with_cutoff(self, cutoff: f64) -> Self {
        Self { cutoff, ..self }
    }

    pub fn with_mass(self, mass: f64) -> Self {
        Self { mass, ..self }
    }

    pub fn with_omega_r(self, omega_r: f64) -> Self {
        Self { omega_r, ..self }
    }

    /// True when the mirror-image delay term `2 gamma / L` is small against
    /// the restoring term, so first-order mirror corrections are trustworthy.
    pub fn image_term_is_perturbative(&self) -> bool {
        2.0 * self.gamma / self.distance <= 0.1 * self.omega_r * self.omega_r
    }
}

pub fn gamma_from_coupling(lambda: f64, mass: f64) -> f64 {
    lambda * lambda / (8.0 * PI * mass)
}

fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter { name, value, reason }
}

/// Symmetrized second moments of the oscillator's `(Q, P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    pub vqq: f64,
    pub vpp: f64,
    pub vqp: f64,
}

impl CovarianceMatrix {
    pub fn new(vqq: f64, vpp: f64, vqp: f64) -> Self {
        Self { vqq, vpp, vqp }
    }

    /// Ground state of an isolated oscillator with mass `mass` and frequency `omega`.
    pub fn ground_state(mass: f64, omega: f64) -> Self {
        Self::new(1.0 / (2.0 * mass * omega), mass * omega / 2.0, 0.0)
    }

    pub fn det(&self) -> f64 {
        self.vqq * self.vpp - self.vqp * self.vqp
    }

    /// Symplectic rescaling `Q -> sqrt(s) Q`, `P -> P / sqrt(s)`.
    pub fn rescaled(&self, s: f64) -> Self {
        Self::new(self.vqq * s, self.vpp / s, self.vqp)
    }
}

impl std::ops::Add for CovarianceMatrix {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.vqq + rhs.vqq, self.vpp + rhs.vpp, self.vqp + rhs.vqp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub purity: f64,
    pub linear_entropy: f64,
    pub von_neumann: f64,
}

/// Purity `1 / (2 sqrt(det V))` of a single-mode Gaussian state.
///
/// Values slightly above one (numerical noise in cutoff-regularized
/// integrals) are logged and returned unchanged.
pub fn purity(v: &CovarianceMatrix) -> Result<f64> {
    let det = v.det();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::NonPositiveDeterminant {
            vqq: v.vqq,
            vpp: v.vpp,
            vqp: v.vqp,
            det,
        });
    }
    let p = 0.5 / det.sqrt();
    if p > 1.0 + PURITY_TOLERANCE {
        warn!(
            "purity {p} exceeds 1 for covariance (vqq={}, vpp={}, vqp={}); state is unphysical",
            v.vqq, v.vpp, v.vqp
        );
    }
    Ok(p)
}

/// Fills all three entropy measures for the state `v`.
pub fn linear_entropy(v: &CovarianceMatrix) -> Result<EntropyReport> {
    let p = purity(v)?;
    Ok(EntropyReport {
        purity: p,
        linear_entropy: 1.0 - p,
        von_neumann: von_neumann_entropy(p)?,
    })
}

/// Von Neumann entropy of a single-mode Gaussian state with purity `p`.
pub fn von_neumann_entropy(p: f64) -> Result<f64> {
    if !(p > 0.0) || p > 1.0 + PURITY_TOLERANCE || !p.is_finite() {
        return Err(Error::Domain(format!(
            "purity {p} outside (0, 1] for von Neumann entropy"
        )));
    }
    if p >= 1.0 {
        return Ok(0.0);
    }
    let s = (1.0 - p) / (2.0 * p) * ((1.0 + p) / (1.0 - p)).ln() - (2.0 * p / (1.0 + p)).ln();
    Ok(s.max(0.0))
}
