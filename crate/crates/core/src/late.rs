//! Late-time stationary state: frequency-domain Green's functions, the exact
//! covariance integrals, their closed forms, first-order mirror corrections
//! and the QBM kernels.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{IntegrandHints, Integrator, DEFAULT_REL_TOL, MAX_PERIOD_EDGES};
use crate::specfun::{gamma0, sinc};
use crate::state::{linear_entropy, purity, CovarianceMatrix, EntropyReport, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    Free,
    HalfSpace,
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Free => "free",
            Self::HalfSpace => "half_space",
        })
    }
}

// -(w + i gamma)^2 + W^2
fn free_denominator(omega: f64, p: &SystemParams) -> Complex64 {
    let z = Complex64::new(omega, p.gamma);
    let wt = p.omega_tilde();
    wt * wt - z * z
}

// Image term 2 gamma e^{i w L} / L.
fn image_term(omega: f64, p: &SystemParams) -> Complex64 {
    Complex64::from_polar(2.0 * p.gamma / p.distance, omega * p.distance)
}

fn warn_if_not_perturbative(p: &SystemParams) {
    if !p.image_term_is_perturbative() {
        warn!(
            "image term 2 gamma / L = {} exceeds 0.1 omega_r^2 = {}; half-space results are unreliable",
            2.0 * p.gamma / p.distance,
            0.1 * p.omega_r * p.omega_r
        );
    }
}

/// `1 / (M (-(w + i gamma)^2 + W^2))`.
pub fn green_free(omega: f64, p: &SystemParams) -> Complex64 {
    1.0 / (p.mass * free_denominator(omega, p))
}

/// `1 / (M (-(w + i gamma)^2 + W^2 + 2 gamma e^{i w L} / L))`.
pub fn green_half(omega: f64, p: &SystemParams) -> Complex64 {
    warn_if_not_perturbative(p);
    green_half_quiet(omega, p)
}

fn green_half_quiet(omega: f64, p: &SystemParams) -> Complex64 {
    1.0 / (p.mass * (free_denominator(omega, p) + image_term(omega, p)))
}

/// The oscillator's linear response in one geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyResponse {
    pub geometry: Geometry,
    pub params: SystemParams,
}

impl FrequencyResponse {
    pub fn new(geometry: Geometry, params: SystemParams) -> Self {
        if geometry == Geometry::HalfSpace {
            warn_if_not_perturbative(&params);
        }
        Self { geometry, params }
    }

    pub fn free(params: SystemParams) -> Self {
        Self::new(Geometry::Free, params)
    }

    pub fn half_space(params: SystemParams) -> Self {
        Self::new(Geometry::HalfSpace, params)
    }

    /// `G(w)`.
    pub fn eval(&self, omega: f64) -> Complex64 {
        match self.geometry {
            Geometry::Free => green_free(omega, &self.params),
            Geometry::HalfSpace => green_half_quiet(omega, &self.params),
        }
    }

    /// Density of field modes at the oscillator, without the coupling.
    pub fn spectral_weight(&self, omega: f64) -> f64 {
        let w = omega / (4.0 * PI * PI);
        match self.geometry {
            Geometry::Free => w,
            Geometry::HalfSpace => w * (1.0 - sinc(omega * self.params.distance)),
        }
    }

    /// `lambda^2` times the spectral weight: the noise spectrum entering the FDT form.
    pub fn noise_weight(&self, omega: f64) -> f64 {
        let l = self.params.lambda();
        l * l * self.spectral_weight(omega)
    }

    /// `Re gamma(w)`, from `noise_weight = (2 / pi) w M Re gamma(w)`.
    pub fn damping(&self, omega: f64) -> f64 {
        PI * self.noise_weight(omega) / (2.0 * omega * self.params.mass)
    }

    fn hints(&self) -> IntegrandHints {
        let p = &self.params;
        let mut h = if p.gamma > 0.0 {
            IntegrandHints::resonance(p.omega_tilde(), p.gamma)
        } else {
            IntegrandHints::none()
        };
        if self.geometry == Geometry::HalfSpace {
            h = h.with_period(2.0 * PI / p.distance);
        }
        h
    }
}

/// Stationary covariance `V_QQ = (1/pi) int Im G`, `V_PP = (M^2/pi) int w^2 Im G`, `V_QP = 0`.
pub fn v_late_exact(g: &FrequencyResponse) -> Result<CovarianceMatrix> {
    v_late_exact_tol(g, DEFAULT_REL_TOL)
}

pub fn v_late_exact_tol(g: &FrequencyResponse, rel_tol: f64) -> Result<CovarianceMatrix> {
    let p = &g.params;
    p.validate()?;
    if p.gamma == 0.0 {
        return Ok(CovarianceMatrix::ground_state(p.mass, p.omega_r));
    }
    let integ = Integrator::with_rel_tol(rel_tol);
    let free = FrequencyResponse {
        geometry: Geometry::Free,
        params: *p,
    };
    let hints = free.hints();
    let qq = integ.integrate(|w| free.eval(w).im, 0.0, p.cutoff, &hints)?.value;
    let pp = integ
        .integrate(|w| w * w * free.eval(w).im, 0.0, p.cutoff, &hints)?
        .value;
    let v = CovarianceMatrix::new(qq / PI, p.mass * p.mass * pp / PI, 0.0);
    match g.geometry {
        Geometry::Free => Ok(v),
        // the mirror part is purely oscillatory and is integrated on its own
        Geometry::HalfSpace => Ok(v + mirror_shift(p, &integ)?),
    }
}

/// The same covariance through the noise spectrum: `V_QQ = int |G|^2 lambda^2 I(w)`.
pub fn v_late_fdt(g: &FrequencyResponse, rel_tol: f64) -> Result<CovarianceMatrix> {
    let p = &g.params;
    p.validate()?;
    if p.gamma == 0.0 {
        return Ok(CovarianceMatrix::ground_state(p.mass, p.omega_r));
    }
    let integ = Integrator::with_rel_tol(rel_tol);
    let hints = g.hints();
    let f = |w: f64| g.eval(w).norm_sqr() * g.noise_weight(w);
    let qq = integ.integrate(f, 0.0, p.cutoff, &hints)?;
    let pp = integ.integrate(|w| w * w * f(w), 0.0, p.cutoff, &hints)?;
    Ok(CovarianceMatrix::new(qq.value, p.mass * p.mass * pp.value, 0.0))
}

/// Free-space covariance from the antiderivatives of the integrands, exact
/// at finite cutoff.
pub fn v_free_closed_form(p: &SystemParams) -> CovarianceMatrix {
    let wt = p.omega_tilde();
    let g = p.gamma;
    // F(z) = (ln(W + z) - ln(W - z)) / (2W); each log stays in one half plane along the path
    let f = |z: Complex64| ((wt + z).ln() - (wt - z).ln()) / (2.0 * wt);
    let log_d = |z: Complex64| (wt - z).ln() + (wt + z).ln();
    let lo = Complex64::new(0.0, g);
    let hi = Complex64::new(p.cutoff, g);
    let qq = (f(hi) - f(lo)).im / (PI * p.mass);
    let i = Complex64::new(0.0, 1.0);
    let anti = |z: Complex64| (wt * wt - g * g) * f(z) + i * g * log_d(z);
    let pp = p.mass / PI * (anti(hi) - anti(lo)).im;
    CovarianceMatrix::new(qq, pp, 0.0)
}

/// Large-cutoff closed forms, with the divergent part of `V_PP` written as
/// `2 ln(cutoff / W)`.
pub fn v_free_large_cutoff(p: &SystemParams) -> CovarianceMatrix {
    let wt = p.omega_tilde();
    let g = p.gamma;
    let i = Complex64::new(0.0, 1.0);
    let ratio = Complex64::new(g, -wt) / Complex64::new(g, wt);
    let arc = i * ratio.ln();
    debug_assert!(arc.im.abs() < 1e-14);
    let qq = arc.re / (2.0 * PI * p.mass * wt);
    let pp = p.mass
        * ((wt * wt - g * g) * arc.re / (2.0 * PI * wt)
            + g / PI * (2.0 * (p.cutoff / wt).ln() - (1.0 + g * g / (wt * wt)).ln()));
    CovarianceMatrix::new(qq, pp, 0.0)
}

/// First order in `gamma`.
pub fn v_free_perturbative(p: &SystemParams) -> CovarianceMatrix {
    let wt = p.omega_tilde();
    let g = p.gamma;
    let m = p.mass;
    let lam = p.cutoff;
    CovarianceMatrix::new(
        (1.0 - 2.0 * g / (PI * wt)) / (2.0 * m * wt),
        m * (wt / 2.0 + g / PI * (2.0 * (lam.ln() - wt.ln()) - wt * wt / (lam * lam) - 1.0)),
        0.0,
    )
}

fn check_distance(p: &SystemParams) -> Result<()> {
    if !(p.distance > 0.0) || !p.distance.is_finite() {
        return Err(Error::Domain(format!(
            "mirror distance must be positive, got {}",
            p.distance
        )));
    }
    Ok(())
}

// e^{i x} Gamma(0, i x) with x = omega_r L
fn echo_factor<G>(p: &SystemParams, gamma0: G) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let x = p.omega_r * p.distance;
    Ok(Complex64::from_polar(1.0, x) * gamma0(Complex64::new(0.0, x))?)
}

/// First-order mirror corrections `(dV_QQ, dV_PP)` in the large-cutoff limit.
pub fn delta_v(p: &SystemParams) -> Result<(f64, f64)> {
    delta_v_with(p, gamma0)
}

/// [`delta_v`] with a caller-supplied `Gamma(0, z)`; used by consistency
/// checks to confirm they notice a perturbed special function.
pub fn delta_v_with<G>(p: &SystemParams, gamma0: G) -> Result<(f64, f64)>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    check_distance(p)?;
    let e = echo_factor(p, gamma0)?;
    let (m, w, l, g) = (p.mass, p.omega_r, p.distance, p.gamma);
    let i = Complex64::new(0.0, 1.0);
    let dqq = -(1.0 / PI) / (m * w) * (g / l) * ((i / (w * w) + l / w) * e).re;
    let dpp = -(m * g) / (PI * w * l) * ((-i + l * w) * e).re;
    Ok((dqq, dpp))
}

/// The defining first-order integrals of [`delta_v`], by quadrature up to the cutoff.
pub fn delta_v_quadrature(p: &SystemParams, rel_tol: f64) -> Result<(f64, f64)> {
    check_distance(p)?;
    p.validate()?;
    if p.gamma == 0.0 {
        return Ok((0.0, 0.0));
    }
    let f = |w: f64| {
        let d = free_denominator(w, p);
        (-image_term(w, p) / (d * d)).im / p.mass
    };
    let integ = Integrator::with_rel_tol(rel_tol);
    let qq = integrate_echo(f, 0, p, &integ)?;
    let pp = integrate_echo(f, 2, p, &integ)?;
    Ok((qq / PI, p.mass * p.mass * pp / PI))
}

// Frequency past which echo integrals are taken from their asymptotic tail:
// the head then spans at most MAX_PERIOD_EDGES periods of e^{i w L}.
fn echo_split(p: &SystemParams) -> f64 {
    MAX_PERIOD_EDGES as f64 * 2.0 * PI / p.distance
}

// int_a^b w^m Im(-k / (M D^2)) dw by two rounds of integration by parts.
// At a >= echo_split every further round gains a factor ~ 1 / (a L) < 1e-4,
// and the dropped O(k^2) echoes are smaller by |k / D| < 2 gamma / (L a^2).
fn echo_tail(m: i32, a: f64, b: f64, p: &SystemParams) -> f64 {
    let l = p.distance;
    let il = Complex64::new(0.0, l);
    let antiderivative = |w: f64| {
        let z = Complex64::new(w, p.gamma);
        let d = free_denominator(w, p);
        let wm = w.powi(m);
        let g = wm / (d * d);
        let dg = m as f64 * w.powi(m - 1) / (d * d) + 4.0 * z * wm / (d * d * d);
        Complex64::from_polar(1.0, w * l) * (g / il - dg / (il * il))
    };
    let c = -2.0 * p.gamma / (l * p.mass);
    (c * (antiderivative(b) - antiderivative(a))).im
}

// int_0^cutoff w^m f(w) dw for an integrand that equals Im(-k / (M D^2)) up
// to higher echoes. Quadrature covers the first MAX_PERIOD_EDGES periods.
fn integrate_echo<F>(f: F, m: i32, p: &SystemParams, integ: &Integrator) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let hints = FrequencyResponse {
        geometry: Geometry::HalfSpace,
        params: *p,
    }
    .hints();
    let g = |w: f64| w.powi(m) * f(w);
    let split = echo_split(p);
    if split >= p.cutoff {
        return Ok(integ.integrate(g, 0.0, p.cutoff, &hints)?.value);
    }
    let head = integ.integrate(g, 0.0, split, &hints)?.value;
    Ok(head + echo_tail(m, split, p.cutoff, p))
}

/// Change of the late-time linear entropy caused by the mirror, first order in `gamma`.
pub fn delta_s_linear(p: &SystemParams) -> Result<f64> {
    check_distance(p)?;
    Ok(-(2.0 / PI) * (p.gamma / p.omega_r) * echo_factor(p, gamma0)?.re)
}

/// `V_half - V_free` computed from a single integrand,
/// `G_half - G_free = -k / (M D (D + k))`, so no large cancellation is left
/// to the caller.
pub fn v_mirror_shift(p: &SystemParams, rel_tol: f64) -> Result<CovarianceMatrix> {
    check_distance(p)?;
    p.validate()?;
    if p.gamma == 0.0 {
        return Ok(CovarianceMatrix::new(0.0, 0.0, 0.0));
    }
    warn_if_not_perturbative(p);
    mirror_shift(p, &Integrator::with_rel_tol(rel_tol))
}

fn mirror_shift(p: &SystemParams, integ: &Integrator) -> Result<CovarianceMatrix> {
    let f = |w: f64| {
        let d = free_denominator(w, p);
        let k = image_term(w, p);
        (-k / (d * (d + k))).im / p.mass
    };
    let qq = integrate_echo(f, 0, p, integ)?;
    let pp = integrate_echo(f, 2, p, integ)?;
    Ok(CovarianceMatrix::new(qq / PI, p.mass * p.mass * pp / PI, 0.0))
}

/// `S_L(half, exact) - S_L(free, exact)` evaluated without subtracting two
/// nearly equal entropies.
pub fn delta_s_linear_exact(p: &SystemParams, rel_tol: f64) -> Result<f64> {
    let free = v_late_exact_tol(&FrequencyResponse::free(*p), rel_tol)?;
    let shift = v_mirror_shift(p, rel_tol)?;
    let a = free.det();
    let eps = free.vqq * shift.vpp + shift.vqq * free.vpp + shift.vqq * shift.vpp
        - 2.0 * free.vqp * shift.vqp
        - shift.vqp * shift.vqp;
    let b = a + eps;
    if !(b > 0.0) {
        return Err(Error::NonPositiveDeterminant {
            vqq: free.vqq + shift.vqq,
            vpp: free.vpp + shift.vpp,
            vqp: free.vqp + shift.vqp,
            det: b,
        });
    }
    // S_half - S_free = P_free - P_half = (1/sqrt a - 1/sqrt b) / 2
    let (sa, sb) = (a.sqrt(), b.sqrt());
    Ok(0.5 * eps / (sa * sb * (sa + sb)))
}

/// Late-time entropy of the oscillator in the chosen geometry.
pub fn s_late(p: &SystemParams, geometry: Geometry) -> Result<EntropyReport> {
    let v = v_late_exact(&FrequencyResponse::new(geometry, *p))?;
    linear_entropy(&v)
}

/// Purity only, for sweeps that do not need the other measures.
pub fn purity_late(p: &SystemParams, geometry: Geometry) -> Result<f64> {
    purity(&v_late_exact(&FrequencyResponse::new(geometry, *p))?)
}

/// Dissipation and noise kernels sampled on a grid of time differences.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSamples {
    pub tau: Vec<f64>,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
}

/// `mu(tau) = lambda^2 int I(w) sin(w tau)`, `nu(tau) = lambda^2 int I(w) cos(w tau)`
/// over `[0, cutoff]`. `mu` vanishes for negative `tau`; `nu` is even.
pub fn qbm_kernels(tau_grid: &[f64], p: &SystemParams, geometry: Geometry) -> Result<KernelSamples> {
    p.validate()?;
    let g = FrequencyResponse { geometry, params: *p };
    let integ = Integrator::with_rel_tol(DEFAULT_REL_TOL);
    let mut mu = Vec::with_capacity(tau_grid.len());
    let mut nu = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let a = tau.abs();
        // shortest oscillation in the integrand: cos(w tau) or the sinc of the image
        let length = match geometry {
            Geometry::Free => a,
            Geometry::HalfSpace => a.max(p.distance),
        };
        let hints = if length > 0.0 {
            IntegrandHints::none().with_period(2.0 * PI / length)
        } else {
            IntegrandHints::none()
        };
        let n = integ.integrate(|w| g.noise_weight(w) * (w * a).cos(), 0.0, p.cutoff, &hints)?;
        nu.push(n.value);
        if tau > 0.0 {
            let m = integ.integrate(|w| g.noise_weight(w) * (w * a).sin(), 0.0, p.cutoff, &hints)?;
            mu.push(m.value);
        } else {
            mu.push(0.0);
        }
    }
    Ok(KernelSamples {
        tau: tau_grid.to_vec(),
        mu,
        nu,
    })
}
