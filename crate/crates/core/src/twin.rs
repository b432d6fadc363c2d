//! Two oscillators in free space a distance `L` apart, coupled to the field
//! with equal or opposite signs.
//!
//! At early times the pair supplies the free-space self and cross
//! correlators that combine into the half-space correlators. At late times
//! the pair is solved through its normal modes: with opposite couplings the
//! sum `q_A + q_B` obeys the half-space equation (Green's function
//! `1 / (M (D + k))`, `k = 2 gamma e^{i w L} / L`) and the difference obeys it
//! with the echo sign flipped (`1 / (M (D - k))`).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::early::{spectral_weight_cross, spectral_weight_self, vacuum_moments};
use crate::error::{Error, Result};
use crate::late::{delta_v, delta_v_quadrature};
use crate::quad::{IntegrandHints, Integrator, DEFAULT_REL_TOL};
use crate::specfun::sinc;
use crate::state::{CovarianceMatrix, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingSign {
    Same,
    Opposite,
}

impl CouplingSign {
    pub fn factor(self) -> f64 {
        match self {
            Self::Same => 1.0,
            Self::Opposite => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinCorrelators {
    pub self_qq: f64,
    pub self_pp: f64,
    pub self_qp: f64,
    pub cross_qq: f64,
    pub cross_pp: f64,
    pub cross_qp: f64,
}

/// Vacuum-induced early-time correlators of the pair. Both oscillators have
/// the same self correlators; the cross correlators carry the sign of the
/// coupling product.
pub fn twin_correlators_v(t: f64, p: &SystemParams, sign: CouplingSign, rel_tol: f64) -> Result<TwinCorrelators> {
    let l = p.distance;
    let (self_qq, self_pp, self_qp) = vacuum_moments(t, p, spectral_weight_self, t, rel_tol)?;
    let s = sign.factor();
    let (cross_qq, cross_pp, cross_qp) = vacuum_moments(t, p, |w| s * spectral_weight_cross(w, l), l.max(t), rel_tol)?;
    Ok(TwinCorrelators {
        self_qq,
        self_pp,
        self_qp,
        cross_qq,
        cross_pp,
        cross_qp,
    })
}

/// Stationary second moments of the opposite-coupling pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinLate {
    pub self_qq: f64,
    pub self_pp: f64,
    /// `<{Q_A, Q_B}> / 2`.
    pub cross_qq: f64,
    pub cross_pp: f64,
    /// `self_qq` minus the single free oscillator's `V_QQ`.
    pub self_correction_qq: f64,
    pub self_correction_pp: f64,
}

impl TwinLate {
    /// Covariance of one oscillator with the partner traced out. Cross
    /// moments do not enter it.
    pub fn reduced_covariance(&self) -> CovarianceMatrix {
        CovarianceMatrix::new(self.self_qq, self.self_pp, 0.0)
    }
}

// Integrands of the late-time pair moments at frequency w, without the
// w^2 M^2 factor of the momentum moments: (self, cross, self correction).
// With u = k / D the normal-mode responses are G0 / (1 +- u), and the
// self correction is written so that nothing of order one cancels.
fn late_integrands(w: f64, p: &SystemParams) -> (f64, f64, f64) {
    let z = Complex64::new(w, p.gamma);
    let wt = p.omega_tilde();
    let d = wt * wt - z * z;
    let k = Complex64::from_polar(2.0 * p.gamma / p.distance, w * p.distance);
    let u = k / d;
    let g0 = 1.0 / (p.mass * p.mass * d.norm_sqr());
    let noise = p.lambda() * p.lambda() * spectral_weight_self(w);
    let s = sinc(w * p.distance);
    let u2 = u.norm_sqr();
    let den = (1.0 - u * u).norm_sqr();
    let base = noise * g0;
    let self_ = base * (1.0 + u2 + 2.0 * s * u.re) / den;
    let cross = base * (-2.0 * u.re - s * (1.0 + u2)) / den;
    let correction = base * (u2 + 2.0 * (u * u).re - u2 * u2 + 2.0 * s * u.re) / den;
    (self_, cross, correction)
}

fn late_hints(p: &SystemParams) -> IntegrandHints {
    IntegrandHints::resonance(p.omega_tilde(), p.gamma).with_period(2.0 * PI / p.distance)
}

// The self correction is many orders below the size of its integrand, so the
// absolute tolerance is set from a coarse integral of |f|.
fn integrate_small<F>(f: F, p: &SystemParams, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let hints = late_hints(p);
    let scale = Integrator::with_rel_tol(1e-3)
        .integrate(|w| f(w).abs(), 0.0, p.cutoff, &hints)?
        .value;
    let integ = Integrator {
        abs_floor: (1e-12 * scale).max(f64::MIN_POSITIVE),
        ..Integrator::with_rel_tol(rel_tol)
    };
    Ok(integ.integrate(f, 0.0, p.cutoff, &hints)?.value)
}

/// Late-time moments of the opposite-coupling pair at distance `p.distance`.
pub fn twin_late(p: &SystemParams, rel_tol: f64) -> Result<TwinLate> {
    p.validate()?;
    if p.gamma == 0.0 {
        let v = CovarianceMatrix::ground_state(p.mass, p.omega_r);
        return Ok(TwinLate {
            self_qq: v.vqq,
            self_pp: v.vpp,
            cross_qq: 0.0,
            cross_pp: 0.0,
            self_correction_qq: 0.0,
            self_correction_pp: 0.0,
        });
    }
    let m2 = p.mass * p.mass;
    let integ = Integrator::with_rel_tol(rel_tol);
    let hints = late_hints(p);
    let self_qq = integ
        .integrate(|w| late_integrands(w, p).0, 0.0, p.cutoff, &hints)?
        .value;
    let self_pp = m2
        * integ
            .integrate(|w| w * w * late_integrands(w, p).0, 0.0, p.cutoff, &hints)?
            .value;
    let cross_qq = integ
        .integrate(|w| late_integrands(w, p).1, 0.0, p.cutoff, &hints)?
        .value;
    let cross_pp = m2
        * integ
            .integrate(|w| w * w * late_integrands(w, p).1, 0.0, p.cutoff, &hints)?
            .value;
    let self_correction_qq = integrate_small(|w| late_integrands(w, p).2, p, rel_tol)?;
    let self_correction_pp = m2 * integrate_small(|w| w * w * late_integrands(w, p).2, p, rel_tol)?;
    Ok(TwinLate {
        self_qq,
        self_pp,
        cross_qq,
        cross_pp,
        self_correction_qq,
        self_correction_pp,
    })
}

/// Steady-state amplitudes `(a_A, a_B)` of the pair driven by one field mode
/// `lambda e^{-i w t +- i phi}` with opposite couplings.
pub fn normal_mode_amplitudes(omega: f64, phi: f64, p: &SystemParams) -> (Complex64, Complex64) {
    let z = Complex64::new(omega, p.gamma);
    let wt = p.omega_tilde();
    let d = p.mass * (wt * wt - z * z);
    let k = p.mass * Complex64::from_polar(2.0 * p.gamma / p.distance, omega * p.distance);
    let lam = p.lambda();
    let src_b = Complex64::from_polar(lam, phi);
    let src_a = -Complex64::from_polar(lam, -phi);
    // d a_B + k a_A = src_b, d a_A + k a_B = src_a
    let det = d * d - k * k;
    ((d * src_a - k * src_b) / det, (d * src_b - k * src_a) / det)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub cross_slope: f64,
    pub self_slope: f64,
    pub points: usize,
}

/// Least-squares slope of `ln|y|` against `ln x`.
pub fn fit_log_log(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if let Some(bad) = xs
        .iter()
        .zip(ys)
        .find(|(x, y)| !(**x > 0.0) || !(y.abs() > 0.0) || !y.is_finite())
    {
        return Err(Error::DegenerateFit(format!(
            "cannot take logs of point ({}, {})",
            bad.0, bad.1
        )));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx < 1e-12 {
        return Err(Error::DegenerateFit("abscissae do not span a range".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Log-log slopes of the late-time cross correlator and of the self
/// correction against the separation.
pub fn twin_late_scaling(p: &SystemParams, l_grid: &[f64]) -> Result<ScalingFit> {
    for &l in l_grid {
        let q = p.with_distance(l);
        q.validate()?;
        if !q.image_term_is_perturbative() {
            return Err(Error::InvalidParameter {
                name: "distance",
                value: l,
                reason: "outside the perturbative range of the image term",
            });
        }
    }
    let rows: Vec<TwinLate> = l_grid
        .par_iter()
        .map(|&l| twin_late(&p.with_distance(l), DEFAULT_REL_TOL))
        .collect::<Result<_>>()?;
    let cross: Vec<f64> = rows.iter().map(|r| r.cross_qq).collect();
    let corr: Vec<f64> = rows.iter().map(|r| r.self_correction_qq).collect();
    Ok(ScalingFit {
        cross_slope: fit_log_log(l_grid, &cross)?,
        self_slope: fit_log_log(l_grid, &corr)?,
        points: l_grid.len(),
    })
}

/// The single oscillator's first-order mirror correction next to the pair's
/// late-time cross correlator. They are different observables that happen to
/// take the same value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderComparison {
    pub delta_vqq_closed: f64,
    pub delta_vqq_quadrature: f64,
    pub cross_qq: f64,
}

pub fn first_order_free_correction(p: &SystemParams) -> Result<FirstOrderComparison> {
    let (closed, _) = delta_v(p)?;
    let (quad, _) = delta_v_quadrature(p, DEFAULT_REL_TOL)?;
    let cross = twin_late(p, DEFAULT_REL_TOL)?.cross_qq;
    Ok(FirstOrderComparison {
        delta_vqq_closed: closed,
        delta_vqq_quadrature: quad,
        cross_qq: cross,
    })
}
