//! Early-time dynamics: mode functions, a-part and v-part correlators, the
//! reflection series and the oscillator entropy at zeroth order in the mirror
//! echo.
//!
//! Inside the mode functions the oscillation frequency is always
//! `omega_tilde = sqrt(omega_r^2 - gamma^2)`, so that the homogeneous solution
//! solves `(d^2 + 2 gamma d + omega_r^2) q = 0` exactly.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{IntegrandHints, Integrator, DEFAULT_REL_TOL};
use crate::specfun::sinc;
use crate::state::{linear_entropy, purity, CovarianceMatrix, EntropyReport, SystemParams};

/// Upper frequency limit for the convergent `qq` and `qp` integrals, in units of `omega_r`.
pub const CONVERGENT_CUTOFF_FACTOR: f64 = 200.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A mode function value together with its time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValue {
    pub value: Complex64,
    pub derivative: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    pub m1: Complex64,
    pub m2: Complex64,
}

impl ModeCoefficients {
    /// `m1 = 1/(2(-w - i gamma + W))`, `m2 = 1/(2(-w - i gamma - W))` with `W = omega_tilde`.
    pub fn new(omega: f64, p: &SystemParams) -> Self {
        let wt = p.omega_tilde();
        let shifted = Complex64::new(-omega, -p.gamma);
        Self {
            m1: 0.5 / (shifted + wt),
            m2: 0.5 / (shifted - wt),
        }
    }
}

/// Homogeneous solution with `q(0) = 1`, `q'(0) = -i omega_r`.
pub fn q_homogeneous(t: f64, p: &SystemParams) -> ModeValue {
    let wt = p.omega_tilde();
    let g = p.gamma;
    let a = Complex64::new(p.omega_r, g) / wt;
    let lo = Complex64::new(-g, -wt);
    let hi = Complex64::new(-g, wt);
    let c1 = 0.5 * (1.0 + a);
    let c2 = 0.5 * (1.0 - a);
    let e1 = (lo * t).exp();
    let e2 = (hi * t).exp();
    ModeValue {
        value: c1 * e1 + c2 * e2,
        derivative: c1 * lo * e1 + c2 * hi * e2,
    }
}

/// Retarded Green's function `theta(t) e^{-gamma t} sin(W t) / W`.
pub fn retarded_kernel(t: f64, p: &SystemParams) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let wt = p.omega_tilde();
    (-p.gamma * t).exp() * (wt * t).sin() / wt
}

/// Time derivative of [`retarded_kernel`]; equals one at `t = 0+`.
pub fn retarded_kernel_derivative(t: f64, p: &SystemParams) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let wt = p.omega_tilde();
    let (s, c) = (wt * t).sin_cos();
    (-p.gamma * t).exp() * (c - p.gamma * s / wt)
}

/// Zeroth-order driven mode function for a field mode of frequency `omega`.
///
/// `phase` is the mode's coupling factor at the oscillator (for the half
/// space, `sin(k3 L / 2)`); the result is linear in it.
pub fn q_plus_zeroth(t: f64, omega: f64, phase: f64, p: &SystemParams) -> ModeValue {
    let b = bracket(t, &ModeCoefficients::new(omega, p), omega, p);
    let scale = p.lambda() / (p.mass * p.omega_tilde()) * phase;
    ModeValue {
        value: b.value * scale,
        derivative: b.derivative * scale,
    }
}

// (M1 - M2) e^{-i w t} + (M2 e^{i W t} - M1 e^{-i W t}) e^{-gamma t}
fn bracket(t: f64, m: &ModeCoefficients, omega: f64, p: &SystemParams) -> ModeValue {
    let wt = p.omega_tilde();
    let g = p.gamma;
    let drive = Complex64::from_polar(1.0, -omega * t);
    let damp = (-g * t).exp();
    let up = Complex64::from_polar(damp, wt * t);
    let down = Complex64::from_polar(damp, -wt * t);
    let d = m.m1 - m.m2;
    ModeValue {
        value: d * drive + m.m2 * up - m.m1 * down,
        derivative: -I * omega * d * drive + Complex64::new(-g, wt) * m.m2 * up - Complex64::new(-g, -wt) * m.m1 * down,
    }
}

/// `(qq, pp, qp)` contributed by the oscillator's own initial operators.
/// Independent of the mirror distance.
pub fn correlators_a(t: f64, p: &SystemParams) -> (f64, f64, f64) {
    let q = q_homogeneous(t, p);
    let m = p.mass;
    let w = p.omega_r;
    (
        q.value.norm_sqr() / (2.0 * m * w),
        m * q.derivative.norm_sqr() / (2.0 * w),
        (q.value.conj() * q.derivative).re / (2.0 * w),
    )
}

/// Normalization of the half-space mode density.
///
/// `Canonical` is the density obtained by reducing the Dirichlet mode sum at
/// the oscillator's position, `(w / 4 pi^2)(1 - sinc wL)`; it is the one
/// consistent with the damping `gamma` and the late-time Green's function.
/// `Halved` is half of it, `(w / 8 pi^2)(1 - sinc wL)`, kept for comparison
/// with results quoted in that normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightConvention {
    #[default]
    Canonical,
    Halved,
}

impl WeightConvention {
    pub fn half_space(self, omega: f64, distance: f64) -> f64 {
        match self {
            Self::Canonical => 2.0 * spectral_weight_half(omega, distance),
            Self::Halved => spectral_weight_half(omega, distance),
        }
    }

    /// Half-space weight with the mirror's `sinc` term dropped (the `L -> inf` limit).
    pub fn far_from_mirror(self, omega: f64) -> f64 {
        match self {
            Self::Canonical => omega / (4.0 * PI * PI),
            Self::Halved => omega / (8.0 * PI * PI),
        }
    }
}

/// `(w / 8 pi^2)(1 - sinc(w L))`.
pub fn spectral_weight_half(omega: f64, distance: f64) -> f64 {
    omega / (8.0 * PI * PI) * (1.0 - sinc(omega * distance))
}

/// Free-space density of field modes seen by one oscillator, `w / 4 pi^2`.
pub fn spectral_weight_self(omega: f64) -> f64 {
    omega / (4.0 * PI * PI)
}

/// Field-mediated density between two points a distance `L` apart.
pub fn spectral_weight_cross(omega: f64, distance: f64) -> f64 {
    spectral_weight_self(omega) * sinc(omega * distance)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyOptions {
    pub convention: WeightConvention,
    pub rel_tol: f64,
}

impl Default for EarlyOptions {
    fn default() -> Self {
        Self {
            convention: WeightConvention::Canonical,
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

impl EarlyOptions {
    pub fn with_convention(convention: WeightConvention) -> Self {
        Self {
            convention,
            ..Self::default()
        }
    }
}

/// Vacuum-induced `(qq, pp, qp)` at time `t` for an arbitrary mode density
/// `weight(w)` (free-space normalization, without the coupling).
///
/// `qq` and `qp` are integrated up to `min(200 omega_r, cutoff)`, `pp` up to
/// the cutoff (it grows logarithmically with it).
pub fn vacuum_moments<W>(
    t: f64,
    p: &SystemParams,
    weight: W,
    period_length: f64,
    rel_tol: f64,
) -> Result<(f64, f64, f64)>
where
    W: Fn(f64) -> f64,
{
    p.validate()?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be non-negative",
        });
    }
    if p.gamma == 0.0 || t == 0.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let wt = p.omega_tilde();
    let pre = p.lambda() * p.lambda() / (p.mass * wt).powi(2);
    let m = p.mass;
    let mut hints = IntegrandHints::resonance(wt, p.gamma);
    if period_length > 0.0 {
        hints = hints.with_period(2.0 * PI / period_length);
    }
    let integ = Integrator::with_rel_tol(rel_tol);
    let short = (CONVERGENT_CUTOFF_FACTOR * p.omega_r).min(p.cutoff);
    let eval = |w: f64| bracket(t, &ModeCoefficients::new(w, p), w, p);

    let qq = integ.integrate(|w| weight(w) * eval(w).value.norm_sqr(), 0.0, short, &hints)?;
    let qp = integ.integrate(
        |w| {
            let b = eval(w);
            weight(w) * (b.derivative * b.value.conj()).re
        },
        0.0,
        short,
        &hints,
    )?;
    let pp = integ.integrate(|w| weight(w) * eval(w).derivative.norm_sqr(), 0.0, p.cutoff, &hints)?;
    Ok((pre * qq.value, pre * m * m * pp.value, pre * m * qp.value))
}

/// Half-space vacuum correlators `(qq_v, pp_v, qp_v)`.
pub fn correlators_v(t: f64, p: &SystemParams, opts: &EarlyOptions) -> Result<(f64, f64, f64)> {
    let conv = opts.convention;
    let l = p.distance;
    vacuum_moments(t, p, |w| conv.half_space(w, l), l.max(t), opts.rel_tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSplit {
    pub qq_a: f64,
    pub pp_a: f64,
    pub qp_a: f64,
    pub qq_v: f64,
    pub pp_v: f64,
    pub qp_v: f64,
}

impl CorrelatorSplit {
    pub fn total(&self) -> CovarianceMatrix {
        CovarianceMatrix::new(self.qq_a + self.qq_v, self.pp_a + self.pp_v, self.qp_a + self.qp_v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyState {
    pub t: f64,
    pub split: CorrelatorSplit,
    pub covariance: CovarianceMatrix,
    pub entropy: EntropyReport,
}

/// Oscillator covariance and entropy at time `t` in the half space.
pub fn covariance_early(t: f64, p: &SystemParams, opts: &EarlyOptions) -> Result<EarlyState> {
    if p.gamma > 0.0 && t > 1.0 / p.gamma {
        warn!(
            "t = {t} exceeds 1/gamma = {}; the zeroth-order early-time treatment is no longer justified",
            1.0 / p.gamma
        );
    }
    let (qq_v, pp_v, qp_v) = correlators_v(t, p, opts)?;
    state_from_parts(t, p, (qq_v, pp_v, qp_v))
}

/// Entropy with the mirror's `sinc` term removed from the mode density;
/// the `L -> infinity` reference for [`l_oscillating_component`].
pub fn covariance_early_far(t: f64, p: &SystemParams, opts: &EarlyOptions) -> Result<EarlyState> {
    let conv = opts.convention;
    let v = vacuum_moments(t, p, |w| conv.far_from_mirror(w), t, opts.rel_tol)?;
    state_from_parts(t, p, v)
}

/// `S_L(t, L) - S_L(t, L -> inf)`: the part of the linear entropy that
/// oscillates with the mirror distance.
///
/// Only purities enter, so this stays defined for mirror distances where the
/// zeroth-order state is unphysical (purity above one) and the von Neumann
/// entropy does not exist.
pub fn l_oscillating_component(t: f64, p: &SystemParams, opts: &EarlyOptions) -> Result<f64> {
    let conv = opts.convention;
    let a = correlators_a(t, p);
    let total = |v: (f64, f64, f64)| CovarianceMatrix::new(a.0 + v.0, a.1 + v.1, a.2 + v.2);
    let near = total(correlators_v(t, p, opts)?);
    let far = total(vacuum_moments(t, p, |w| conv.far_from_mirror(w), t, opts.rel_tol)?);
    Ok(purity(&far)? - purity(&near)?)
}

fn state_from_parts(t: f64, p: &SystemParams, v: (f64, f64, f64)) -> Result<EarlyState> {
    let (qq_a, pp_a, qp_a) = correlators_a(t, p);
    let split = CorrelatorSplit {
        qq_a,
        pp_a,
        qp_a,
        qq_v: v.0,
        pp_v: v.1,
        qp_v: v.2,
    };
    let covariance = split.total();
    Ok(EarlyState {
        t,
        split,
        covariance,
        entropy: linear_entropy(&covariance)?,
    })
}

/// Mirror-echo corrections to a mode function, order by order.
///
/// Order `n` is the `n`-fold convolution of the retarded kernel with the
/// delayed echo `-(2 gamma / L) theta(s - L) q^{(n-1)}(s - L)`, evaluated on a
/// uniform grid by the trapezoid rule. Terms vanish identically for `t <= nL`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSeries {
    pub step: f64,
    pub delay: f64,
    /// `orders[k][j]` is the order `k + 1` term at time `j * step`.
    pub orders: Vec<Vec<ModeValue>>,
}

impl ReflectionSeries {
    pub fn len(&self) -> usize {
        self.orders.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step
    }

    /// Order-`n` term (`n >= 1`) at an arbitrary time inside the grid, by
    /// cubic Hermite interpolation.
    pub fn value(&self, n: usize, t: f64) -> Complex64 {
        let Some(order) = n.checked_sub(1).and_then(|k| self.orders.get(k)) else {
            return Complex64::new(0.0, 0.0);
        };
        if t <= 0.0 || order.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let h = self.step;
        let last = order.len() - 1;
        let x = t / h;
        let j = (x.floor() as usize).min(last.saturating_sub(1));
        if j >= last {
            return order[last].value;
        }
        let s = (x - j as f64).clamp(0.0, 1.0);
        let (a, b) = (order[j], order[j + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        a.value * (2.0 * s3 - 3.0 * s2 + 1.0)
            + a.derivative * h * (s3 - 2.0 * s2 + s)
            + b.value * (-2.0 * s3 + 3.0 * s2)
            + b.derivative * h * (s3 - s2)
    }

    /// Sum of all orders at grid index `j`.
    pub fn total(&self, j: usize) -> Complex64 {
        self.orders.iter().map(|o| o[j].value).sum()
    }
}

/// Default grid step `min(2 pi / (64 W), L / 64)`.
pub fn default_reflection_step(p: &SystemParams) -> f64 {
    (2.0 * PI / (64.0 * p.omega_tilde())).min(p.distance / 64.0)
}

/// Reflection corrections to the homogeneous mode function up to `n_max`.
pub fn reflection_series(t: f64, n_max: usize, p: &SystemParams) -> Result<ReflectionSeries> {
    reflection_series_with_step(|s| q_homogeneous(s, p).value, t, n_max, default_reflection_step(p), p)
}

/// Reflection corrections to the driven mode function of a field mode.
pub fn reflection_series_driven(
    t: f64,
    n_max: usize,
    omega: f64,
    phase: f64,
    p: &SystemParams,
) -> Result<ReflectionSeries> {
    reflection_series_with_step(
        |s| q_plus_zeroth(s, omega, phase, p).value,
        t,
        n_max,
        default_reflection_step(p),
        p,
    )
}

/// Generic driver: `source` is the zeroth-order mode function.
///
/// The step is shrunk so that the delay is a whole number of steps; a
/// requested step above `L / 10` is refused.
pub fn reflection_series_with_step<F>(
    source: F,
    t: f64,
    n_max: usize,
    step: f64,
    p: &SystemParams,
) -> Result<ReflectionSeries>
where
    F: Fn(f64) -> Complex64,
{
    p.validate()?;
    if n_max < 1 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            value: n_max as f64,
            reason: "at least one reflection order is required",
        });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be non-negative and finite",
        });
    }
    let delay = p.distance;
    let limit = delay / 10.0;
    if !(step > 0.0) || step > limit {
        return Err(Error::GridTooCoarse { step, delay, limit });
    }
    let per_delay = (delay / step).ceil() as usize;
    let h = delay / per_delay as f64;
    let n = ((t / h) - 1e-9).ceil().max(1.0) as usize;

    let kernel: Vec<(f64, f64)> = (0..=n)
        .map(|j| {
            let s = j as f64 * h;
            (retarded_kernel(s, p), retarded_kernel_derivative(s, p))
        })
        .collect();
    let echo = -2.0 * p.gamma / delay;

    let mut previous: Vec<Complex64> = (0..=n).map(|j| source(j as f64 * h)).collect();
    let mut orders = Vec::with_capacity(n_max);
    for order in 1..=n_max {
        let start = order * per_delay;
        let forcing: Vec<Complex64> = (0..=n)
            .map(|j| {
                if j >= per_delay {
                    previous[j - per_delay] * echo
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let zero = ModeValue {
            value: Complex64::new(0.0, 0.0),
            derivative: Complex64::new(0.0, 0.0),
        };
        let mut term = vec![zero; n + 1];
        for (i, slot) in term.iter_mut().enumerate().skip(start + 1) {
            let mut v = Complex64::new(0.0, 0.0);
            let mut d = Complex64::new(0.0, 0.0);
            for j in start..=i {
                let w = if j == start || j == i { 0.5 } else { 1.0 };
                let (g, gd) = kernel[i - j];
                v += forcing[j] * (w * g);
                d += forcing[j] * (w * gd);
            }
            *slot = ModeValue {
                value: v * h,
                derivative: d * h,
            };
        }
        previous = term.iter().map(|m| m.value).collect();
        orders.push(term);
    }
    Ok(ReflectionSeries { step: h, delay, orders })
}
