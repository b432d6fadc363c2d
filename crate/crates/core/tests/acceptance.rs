//! Acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test -p oscfield --test acceptance -- --nocapture` to see them.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use oscfield::early::{
    correlators_v, covariance_early, l_oscillating_component, q_homogeneous, q_plus_zeroth, reflection_series,
    retarded_kernel, spectral_weight_cross, spectral_weight_half, spectral_weight_self, EarlyOptions, WeightConvention,
};
use oscfield::late::{
    delta_s_linear, delta_v, delta_v_quadrature, s_late, v_free_large_cutoff, v_free_perturbative, v_late_exact_tol,
    v_late_fdt, FrequencyResponse, Geometry,
};
use oscfield::twin::{fit_log_log, twin_correlators_v, twin_late, twin_late_scaling, CouplingSign};
use oscfield::SystemParams;

fn verdict(id: u32, title: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {tag}  {title}: {detail}");
    assert!(pass, "criterion {id} failed: {detail}");
}

fn list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", items.join(", "))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn base() -> SystemParams {
    SystemParams::new(1.0, 5.0, 0.02, 2.0, 5.0e4).unwrap()
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn criterion_01_free_space_closed_forms() {
    let start = Instant::now();
    let p = base().with_cutoff(1e4);
    let v = v_late_exact_tol(&FrequencyResponse::free(p), 1e-11).unwrap();
    let c = v_free_large_cutoff(&p);
    let elapsed = start.elapsed().as_secs_f64();
    let (eq, ep) = (rel(v.vqq, c.vqq), rel(v.vpp, c.vpp));
    verdict(
        1,
        "free-space quadrature vs closed forms",
        eq < 1e-6 && ep < 1e-4 && elapsed < 5.0,
        format!("V_QQ rel {eq:.2e} (< 1e-6), V_PP rel {ep:.2e} (< 1e-4), {elapsed:.2} s (< 5 s)"),
    );
}

#[test]
fn criterion_02_perturbative_recovery() {
    let gammas = [0.02, 0.01, 0.005];
    let mut residuals = Vec::new();
    let mut ok = true;
    for &g in &gammas {
        let p = base().with_gamma(g);
        let exact = v_late_exact_tol(&FrequencyResponse::free(p), 1e-12).unwrap();
        let pert = v_free_perturbative(&p);
        let r = rel(pert.vqq, exact.vqq).max(rel(pert.vpp, exact.vpp));
        let bound = 5.0 * (g / p.omega_tilde()).powi(2);
        ok &= r < bound;
        residuals.push(r);
    }
    let ratios: Vec<f64> = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    ok &= ratios.iter().all(|r| (3.2..=4.8).contains(r));
    verdict(
        2,
        "perturbative recovery",
        ok,
        format!(
            "residuals {} (< 5 (gamma/W)^2), halving ratios {} (4 +- 20%)",
            list(&residuals),
            list(&ratios)
        ),
    );
}

#[test]
fn criterion_03_mirror_reduces_entanglement() {
    let start = Instant::now();
    let grid = log_grid(0.5, 100.0, 40);
    let ds: Vec<f64> = grid
        .iter()
        .map(|&l| delta_s_linear(&base().with_distance(l)).unwrap())
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let negative = ds.iter().all(|d| *d < 0.0);
    let increasing = ds.windows(2).all(|w| w[1] > w[0]);
    let last = ds[ds.len() - 1].abs();
    verdict(
        3,
        "mirror reduces entanglement",
        negative && increasing && last < 1e-4 && elapsed < 10.0,
        format!(
            "all negative {negative}, strictly increasing {increasing}, |dS_L(100)| = {last:.2e} (< 1e-4), {elapsed:.3} s"
        ),
    );
}

#[test]
fn criterion_04_delta_v_closed_forms() {
    let mut ok = true;
    let mut parts = Vec::new();
    for x in [2.0, 10.0, 50.0] {
        let p = base().with_distance(x / 5.0).with_cutoff(1e5);
        let (cq, cp) = delta_v(&p).unwrap();
        let (qq, qp) = delta_v_quadrature(&p, 1e-9).unwrap();
        let (eq, ep) = (rel(cq, qq), rel(cp, qp));
        ok &= eq < 1e-3 && ep < 1e-3;
        parts.push(format!("wL={x}: QQ {eq:.2e}, PP {ep:.2e}"));
    }
    // the gap is first order in gamma: a tenfold weaker coupling for reference
    let p = base().with_gamma(0.002).with_cutoff(1e5);
    let (cq, _) = delta_v(&p).unwrap();
    let (qq, _) = delta_v_quadrature(&p, 1e-9).unwrap();
    parts.push(format!("[gamma=0.002, wL=10: QQ {:.2e}]", rel(cq, qq)));
    verdict(
        4,
        "dV closed forms vs first-order integrals (1e-3)",
        ok,
        parts.join("; "),
    );
}

#[test]
fn criterion_05_image_equivalence() {
    let p = base().with_cutoff(1000.0);
    let opts = EarlyOptions {
        convention: WeightConvention::Halved,
        rel_tol: 1e-12,
    };
    let mut worst = 0.0f64;
    let mut worst_canonical = 0.0f64;
    for t in [1.0, 4.0, 8.0] {
        let half = correlators_v(t, &p, &opts).unwrap();
        let tw = twin_correlators_v(t, &p, CouplingSign::Opposite, 1e-12).unwrap();
        let combo = (
            2.0 * tw.self_qq / 4.0 + tw.cross_qq / 2.0,
            2.0 * tw.self_pp / 4.0 + tw.cross_pp / 2.0,
            2.0 * tw.self_qp / 4.0 + tw.cross_qp / 2.0,
        );
        worst = worst
            .max(rel(half.0, combo.0))
            .max(rel(half.1, combo.1))
            .max(rel(half.2, combo.2));
        // the canonical half-space density pairs with (self + self)/2 + cross
        let canon = correlators_v(
            t,
            &p,
            &EarlyOptions {
                convention: WeightConvention::Canonical,
                rel_tol: 1e-12,
            },
        )
        .unwrap();
        worst_canonical = worst_canonical
            .max(rel(canon.0, 2.0 * combo.0))
            .max(rel(canon.1, 2.0 * combo.1));
    }
    let mut worst_weight = 0.0f64;
    for i in 0..1000 {
        let w = 1e-3 + i as f64 * 0.05;
        let lhs = spectral_weight_half(w, p.distance);
        let rhs = 0.25 * (2.0 * spectral_weight_self(w)) - 0.5 * spectral_weight_cross(w, p.distance);
        // measured against the size of the individual terms: both sides cancel
        // to O((wL)^2) at small w, which no floating-point form can resolve to 1e-14
        worst_weight = worst_weight.max((lhs - rhs).abs() / spectral_weight_self(w));
    }
    verdict(
        5,
        "image equivalence",
        worst < 1e-9 && worst_weight < 1e-14,
        format!(
            "correlators rel {worst:.2e} (< 1e-9), weight identity rel {worst_weight:.2e} (< 1e-14), canonical pairing rel {worst_canonical:.2e}"
        ),
    );
}

#[test]
fn criterion_06_early_time_dynamics() {
    let p = base().with_cutoff(1000.0);
    let opts = EarlyOptions::default();
    let s0 = covariance_early(0.0, &p, &opts).unwrap().entropy.linear_entropy;

    let ts: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
    let s: Vec<f64> = ts
        .par_iter()
        .map(|&t| covariance_early(t, &p, &opts).unwrap().entropy.linear_entropy)
        .collect();
    let drops: Vec<f64> = ts
        .iter()
        .zip(s.windows(2))
        .filter(|(_, w)| w[1] < w[0])
        .map(|(t, _)| *t)
        .collect();
    let monotone = drops.is_empty();

    // L-oscillating part of S_L at t = 10
    let ls: Vec<f64> = (1..=300).map(|i| i as f64 * 0.005).collect();
    let c: Vec<f64> = ls
        .par_iter()
        .map(|&l| l_oscillating_component(10.0, &p.with_distance(l), &opts).unwrap())
        .collect();
    let zero = ls
        .windows(2)
        .zip(c.windows(2))
        .find(|(_, v)| v[0].signum() != v[1].signum())
        .map(|(l, v)| l[0] + (l[1] - l[0]) * v[0] / (v[0] - v[1]));
    let extremum = (1..c.len() - 1)
        .find(|&i| (c[i] - c[i - 1]) * (c[i + 1] - c[i]) < 0.0)
        .map(|i| ls[i]);
    let w = p.omega_r;
    let zero_ok = zero.is_some_and(|z| rel(z, PI / w) < 0.1);
    let ext_ok = extremum.is_some_and(|e| rel(e, 4.493_409_457_909_064 / w) < 0.1);

    // runtime of a 60 x 60 (L, t) grid
    let start = Instant::now();
    let grid: Vec<(f64, f64)> = (0..60)
        .flat_map(|i| (0..60).map(move |j| (0.1 + 0.1 * i as f64, (j + 1) as f64 * 10.0 / 60.0)))
        .collect();
    let n_ok = grid
        .par_iter()
        .filter(|(l, t)| covariance_early(*t, &p.with_distance(*l), &opts).is_ok())
        .count();
    let elapsed = start.elapsed().as_secs_f64();

    verdict(
        6,
        "early-time dynamics",
        s0.abs() < 1e-12 && monotone && zero_ok && ext_ok && elapsed < 60.0 && n_ok == 3600,
        format!(
            "S_L(0) = {s0:.1e}; non-decreasing {monotone} (decreases after t = {drops:?}); first zero {zero:.4?} vs pi/W = {:.4}; \
             first extremum {extremum:.4?} vs 4.4934/W = {:.4}; 60x60 grid {elapsed:.1} s",
            PI / w,
            4.493_409_457_909_064 / w
        ),
    );
}

// RK4 for q'' + 2 gamma q' + omega_r^2 q = f(t); returns the max deviation
// of (q, q') from the closed form along the trajectory.
fn rk4_deviation<F, C>(p: &SystemParams, q0: Complex64, v0: Complex64, t_end: f64, force: F, closed: C) -> f64
where
    F: Fn(f64) -> Complex64,
    C: Fn(f64) -> (Complex64, Complex64),
{
    let h = 1e-4;
    let rhs = |t: f64, q: Complex64, v: Complex64| (v, force(t) - 2.0 * p.gamma * v - p.omega_r * p.omega_r * q);
    let steps = (t_end / h).ceil() as usize;
    let (mut q, mut v) = (q0, v0);
    let mut worst = 0.0f64;
    for k in 0..steps {
        let t = k as f64 * h;
        let (a1, b1) = rhs(t, q, v);
        let (a2, b2) = rhs(t + h / 2.0, q + a1 * (h / 2.0), v + b1 * (h / 2.0));
        let (a3, b3) = rhs(t + h / 2.0, q + a2 * (h / 2.0), v + b2 * (h / 2.0));
        let (a4, b4) = rhs(t + h, q + a3 * h, v + b3 * h);
        q += (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (h / 6.0);
        v += (b1 + b2 * 2.0 + b3 * 2.0 + b4) * (h / 6.0);
        let (cq, cv) = closed(t + h);
        worst = worst.max((cq - q).norm()).max((cv - v).norm());
    }
    worst
}

#[test]
fn criterion_07_mode_function_oracle() {
    let p = base();
    let t_end = 10.0 / p.omega_tilde();
    let zero = Complex64::new(0.0, 0.0);
    let qh = rk4_deviation(
        &p,
        1.0.into(),
        Complex64::new(0.0, -p.omega_r),
        t_end,
        |_| zero,
        |t| {
            let m = q_homogeneous(t, &p);
            (m.value, m.derivative)
        },
    );
    let gr = rk4_deviation(
        &p,
        zero,
        1.0.into(),
        t_end,
        |_| zero,
        |t| {
            let g = retarded_kernel(t, &p);
            (g.into(), oscfield::early::retarded_kernel_derivative(t, &p).into())
        },
    );
    let mut qp = 0.0f64;
    for (omega, phase) in [(5.0, 1.0), (2.0, 0.6), (11.0, -0.3)] {
        let amp = p.lambda() / p.mass * phase;
        qp = qp.max(rk4_deviation(
            &p,
            zero,
            zero,
            t_end,
            |t| Complex64::from_polar(amp, -omega * t),
            |t| {
                let m = q_plus_zeroth(t, omega, phase, &p);
                (m.value, m.derivative)
            },
        ));
    }
    verdict(
        7,
        "mode functions vs RK4",
        qh < 1e-7 && gr < 1e-7 && qp < 1e-7,
        format!("max |dev|: q_h {qh:.2e}, G_r {gr:.2e}, q_+ {qp:.2e} (< 1e-7)"),
    );
}

// Delay equation q'' + 2 gamma q' + w^2 q = -(2 gamma / L) theta(t - L) q(t - L),
// RK4 with a history buffer and Hermite interpolation between stored steps.
fn delay_oracle(p: &SystemParams, t_end: f64, per_delay: usize) -> (f64, Vec<Complex64>) {
    let l = p.distance;
    let h = l / per_delay as f64;
    let steps = (t_end / h).round() as usize;
    let echo = -2.0 * p.gamma / l;
    let mut hist: Vec<(Complex64, Complex64)> = vec![(1.0.into(), Complex64::new(0.0, -p.omega_r))];
    let delayed = |hist: &[(Complex64, Complex64)], s: f64| -> Complex64 {
        if s < -1e-12 {
            return 0.0.into();
        }
        let x = (s / h).max(0.0);
        let j = (x.floor() as usize).min(hist.len() - 1);
        if j + 1 >= hist.len() {
            return hist[j].0;
        }
        let u = x - j as f64;
        let (a, b) = (hist[j], hist[j + 1]);
        let (u2, u3) = (u * u, u * u * u);
        a.0 * (2.0 * u3 - 3.0 * u2 + 1.0)
            + a.1 * h * (u3 - 2.0 * u2 + u)
            + b.0 * (-2.0 * u3 + 3.0 * u2)
            + b.1 * h * (u3 - u2)
    };
    for k in 0..steps {
        let t = k as f64 * h;
        let (q, v) = *hist.last().unwrap();
        let f = |tt: f64, q: Complex64, v: Complex64, hist: &[(Complex64, Complex64)]| {
            (
                v,
                delayed(hist, tt - l) * echo - 2.0 * p.gamma * v - p.omega_r * p.omega_r * q,
            )
        };
        let (a1, b1) = f(t, q, v, &hist);
        let (a2, b2) = f(t + h / 2.0, q + a1 * (h / 2.0), v + b1 * (h / 2.0), &hist);
        let (a3, b3) = f(t + h / 2.0, q + a2 * (h / 2.0), v + b2 * (h / 2.0), &hist);
        let (a4, b4) = f(t + h, q + a3 * h, v + b3 * h, &hist);
        hist.push((
            q + (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (h / 6.0),
            v + (b1 + b2 * 2.0 + b3 * 2.0 + b4) * (h / 6.0),
        ));
    }
    (h, hist.into_iter().map(|x| x.0).collect())
}

#[test]
fn criterion_08_reflection_series() {
    let p = base();
    let l = p.distance;
    let series = reflection_series(4.5 * l, 4, &p).unwrap();
    let mut causal = true;
    for (k, order) in series.orders.iter().enumerate() {
        for (j, m) in order.iter().enumerate() {
            if series.time(j) < (k + 1) as f64 * l {
                causal &= m.value == Complex64::new(0.0, 0.0) && m.derivative == Complex64::new(0.0, 0.0);
            }
        }
    }
    let (h, full) = delay_oracle(&p, 3.0 * l, 2000);
    let worst = full
        .iter()
        .enumerate()
        .map(|(j, q)| (j as f64 * h, q))
        .filter(|(t, _)| *t >= l)
        .map(|(t, q)| (*q - q_homogeneous(t, &p).value - series.value(1, t)).norm())
        .fold(0.0f64, f64::max);
    verdict(
        8,
        "reflection series",
        causal && worst < 1e-4,
        format!("orders vanish for t < nL: {causal}; n=1 vs delay-ODE max |dev| {worst:.2e} on [L, 3L] (< 1e-4)"),
    );
}

#[test]
fn criterion_09_twin_scaling() {
    // the integrands fall off as w^-3 or faster, so a cutoff of 200 W_r leaves
    // the QQ moments unchanged while keeping the sinc(wL) oscillation tractable
    let p = base().with_gamma(0.002).with_cutoff(1000.0);
    let grid = log_grid(5.0, 50.0, 10);
    let fit = twin_late_scaling(&p, &grid).unwrap();
    let cross_ok = (fit.cross_slope + 1.0).abs() <= 0.1;
    let self_ok = (fit.self_slope + 2.0).abs() <= 0.15;
    // coupling exponents at fixed L: cross ~ gamma, self correction ~ gamma^2
    let gs = [0.001, 0.002, 0.004];
    let rows: Vec<_> = gs
        .iter()
        .map(|&g| twin_late(&p.with_gamma(g).with_distance(10.0), 1e-9).unwrap())
        .collect();
    let gc = fit_log_log(&gs, &rows.iter().map(|r| r.cross_qq).collect::<Vec<_>>()).unwrap();
    let gself = fit_log_log(&gs, &rows.iter().map(|r| r.self_correction_qq).collect::<Vec<_>>()).unwrap();
    verdict(
        9,
        "two-oscillator late-time scaling in L",
        cross_ok && self_ok,
        format!(
            "cross slope {:.3} (target -1 +- 0.1), self-correction slope {:.3} (target -2 +- 0.15); \
             [gamma exponents: cross {gc:.3}, self correction {gself:.3}]",
            fit.cross_slope, fit.self_slope
        ),
    );
}

#[test]
fn criterion_10_fdt_routes() {
    let p = base();
    let g = FrequencyResponse::free(p);
    let a = v_late_exact_tol(&g, 1e-11).unwrap();
    let b = v_late_fdt(&g, 1e-11).unwrap();
    let (eq, ep) = (rel(a.vqq, b.vqq), rel(a.vpp, b.vpp));
    let mut pointwise = 0.0f64;
    for w in [1.0, 4.9, 5.0, 5.1, 20.0] {
        let lhs = g.eval(w).norm_sqr() * g.damping(w);
        let rhs = g.eval(w).im / (2.0 * w * p.mass);
        pointwise = pointwise.max(rel(lhs, rhs));
    }
    verdict(
        10,
        "fluctuation-dissipation routes",
        eq < 1e-8 && ep < 1e-8 && pointwise < 1e-12,
        format!("V_QQ rel {eq:.2e}, V_PP rel {ep:.2e} (< 1e-8); pointwise identity {pointwise:.2e} (< 1e-12)"),
    );
}

#[test]
fn criterion_11_gamma_monotonicity() {
    let gammas: Vec<f64> = (0..12).map(|i| 0.005 + i as f64 * (0.1 - 0.005) / 11.0).collect();
    let rows: Vec<(f64, f64)> = gammas
        .par_iter()
        .map(|&g| {
            let p = base().with_gamma(g);
            (
                s_late(&p, Geometry::Free).unwrap().linear_entropy,
                s_late(&p, Geometry::HalfSpace).unwrap().linear_entropy,
            )
        })
        .collect();
    let free_inc = rows.windows(2).all(|w| w[1].0 > w[0].0);
    let half_inc = rows.windows(2).all(|w| w[1].1 > w[0].1);
    verdict(
        11,
        "entropy increases with coupling",
        free_inc && half_inc,
        format!(
            "free increasing {free_inc}, half-space increasing {half_inc}; S_L free {:.4e} .. {:.4e}, half {:.4e} .. {:.4e}",
            rows[0].0,
            rows[11].0,
            rows[0].1,
            rows[11].1
        ),
    );
}
