//! Globally adaptive Gauss-Kronrod (10/21) quadrature on a finite interval.
//!
//! The initial partition is built from [`IntegrandHints`]: panel edges go at
//! each resonance center, at `center +- {1, 3, 10, 30} * width`, and at
//! multiples of the oscillation period. After that the panel with the largest
//! error estimate is bisected until the total estimate meets the tolerance.
//! The whole procedure is sequential and deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use log::debug;

use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const ABS_FLOOR: f64 = 1e-14;
pub const DEFAULT_MAX_EVALUATIONS: usize = 2_000_000;

/// Oscillation-period edges beyond this count are left to bisection.
pub const MAX_PERIOD_EDGES: usize = 4096;

const RESONANCE_OFFSETS: [f64; 4] = [1.0, 3.0, 10.0, 30.0];

// 21-point Kronrod abscissae (non-negative half) and weights; the Gauss
// 10-point rule uses the odd-indexed nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_088_300,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Known structure of an integrand, used only to seed the partition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntegrandHints {
    pub resonance_centers: Vec<f64>,
    pub resonance_width: f64,
    pub oscillation_period: Option<f64>,
}

impl IntegrandHints {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn resonance(center: f64, width: f64) -> Self {
        Self {
            resonance_centers: vec![center],
            resonance_width: width,
            oscillation_period: None,
        }
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.oscillation_period = Some(period);
        self
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut pts = vec![a, b];
        if self.resonance_width > 0.0 {
            for &c in &self.resonance_centers {
                pts.push(c);
                for k in RESONANCE_OFFSETS {
                    pts.push(c - k * self.resonance_width);
                    pts.push(c + k * self.resonance_width);
                }
            }
        }
        if let Some(period) = self.oscillation_period {
            if period > 0.0 && period.is_finite() {
                let first = (a / period).floor() as i64 + 1;
                for k in 0..MAX_PERIOD_EDGES as i64 {
                    let x = (first + k) as f64 * period;
                    if x >= b {
                        break;
                    }
                    pts.push(x);
                }
            }
        }
        pts.retain(|x| x.is_finite() && *x >= a && *x <= b);
        pts.sort_by(f64::total_cmp);
        let span = b - a;
        pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * span);
        // dedup may have dropped b in favour of a neighbour
        if let Some(last) = pts.last_mut() {
            *last = b;
        }
        pts
    }
}

/// Tunable integrator; [`integrate`] uses the defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_evaluations: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            abs_floor: ABS_FLOOR,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    // error level set by rounding in the rule itself
    roundoff: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger error first; ties broken by position for a total order
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

impl Integrator {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn integrate<F>(&self, f: F, a: f64, b: f64, hints: &IntegrandHints) -> Result<QuadratureResult>
    where
        F: Fn(f64) -> f64,
    {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!(
                "integration interval [{a}, {b}] is empty or infinite"
            )));
        }
        if !(self.rel_tol >= 1e-13) {
            return Err(Error::Domain(format!(
                "relative tolerance {} below 1e-13",
                self.rel_tol
            )));
        }

        let edges = hints.breakpoints(a, b);
        let mut heap = BinaryHeap::with_capacity(edges.len() * 2);
        let mut finished: Vec<Panel> = Vec::new();
        let mut evaluations = 0usize;
        let mut total = 0.0;
        let mut total_err = 0.0;
        for w in edges.windows(2) {
            let p = kronrod21(&f, w[0], w[1]);
            evaluations += 21;
            total += p.value;
            total_err += p.error;
            heap.push(p);
        }

        loop {
            let tol = (self.rel_tol * total.abs()).max(self.abs_floor);
            if total_err <= tol {
                break;
            }
            if evaluations >= self.max_evaluations {
                let (value, estimate) = resum(&heap, &finished);
                return Err(Error::Quadrature {
                    best: value,
                    estimate,
                    evaluations,
                });
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b)
                || (worst.b - worst.a) < 1e-14 * worst.a.abs().max(1.0)
                || worst.error <= worst.roundoff
            {
                // cannot be refined further in double precision
                finished.push(worst);
                if heap.is_empty() {
                    break;
                }
                continue;
            }
            let left = kronrod21(&f, worst.a, mid);
            let right = kronrod21(&f, mid, worst.b);
            evaluations += 42;
            total += left.value + right.value - worst.value;
            total_err += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }

        let (value, error_estimate) = resum(&heap, &finished);
        let tol = (self.rel_tol * value.abs()).max(self.abs_floor);
        if error_estimate > tol {
            debug!(
                "quadrature on [{a}, {b}] is limited by rounding: error {error_estimate:e} against tolerance {tol:e}"
            );
        }
        Ok(QuadratureResult {
            value,
            error_estimate,
            evaluations,
        })
    }
}

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, hints: &IntegrandHints, rel_tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    Integrator::with_rel_tol(rel_tol).integrate(f, a, b, hints)
}

// Re-adds panel contributions left to right so the reported value does not
// depend on the order in which panels were refined.
fn resum(heap: &BinaryHeap<Panel>, finished: &[Panel]) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().chain(finished.iter()).collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

fn kronrod21<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(roundoff);
    }
    if !value.is_finite() {
        err = f64::INFINITY;
    }
    Panel {
        a,
        b,
        value,
        error: err,
        roundoff,
    }
}
