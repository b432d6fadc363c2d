use std::path::PathBuf;

use log::warn;
use rayon::prelude::*;

use oscfield::early::{correlators_a, correlators_v, EarlyOptions, WeightConvention};
use oscfield::late::{delta_s_linear, delta_v, v_late_exact_tol, FrequencyResponse, Geometry};
use oscfield::quad::DEFAULT_REL_TOL;
use oscfield::twin::{fit_log_log, twin_late, TwinLate};
use oscfield::{purity, CovarianceMatrix, SystemParams};

use crate::args::{Format, Shared, Weight};
use crate::error::{CliError, CliResult};
use crate::range::Axis;
use crate::table::SweepTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    EarlyGrid,
    LateL,
    LateGamma,
    TwinScaling,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Self::EarlyGrid => "early-grid",
            Self::LateL => "late-L",
            Self::LateGamma => "late-gamma",
            Self::TwinScaling => "twin-scaling",
        }
    }
}

/// Everything needed to reproduce one table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mode: Mode,
    /// Base parameters; the swept quantity overrides its field per row.
    pub params: SystemParams,
    pub l_axis: Axis,
    pub t_axis: Option<Axis>,
    pub gamma_axis: Option<Axis>,
    pub rel_tol: f64,
    pub weight: WeightConvention,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

impl SweepSpec {
    /// Applies the built-in defaults of `mode` to whatever `s` leaves unset.
    pub fn resolve(mode: Mode, s: &Shared) -> CliResult<Self> {
        if s.gamma_range.is_some() && !matches!(mode, Mode::LateL | Mode::LateGamma) {
            return Err(usage("--gamma-range only applies to `late`"));
        }
        if s.t_range.is_some() && mode != Mode::EarlyGrid {
            return Err(usage("--t-range only applies to `early`"));
        }
        if s.weight.is_some() && mode != Mode::EarlyGrid {
            return Err(usage("--weight only applies to `early`"));
        }
        let mode = match (mode, s.gamma_range) {
            (Mode::LateL, Some(_)) => Mode::LateGamma,
            (m, _) => m,
        };
        if mode == Mode::LateGamma && s.l_range.is_some() {
            return Err(usage("--L-range and --gamma-range cannot be swept together"));
        }
        let omega_r = s.omega_r.unwrap_or(5.0);
        let default_gamma = if mode == Mode::TwinScaling { 0.002 } else { 0.02 };
        let default_cutoff = match mode {
            Mode::LateL | Mode::LateGamma => 1e4 * omega_r,
            Mode::EarlyGrid | Mode::TwinScaling => 200.0 * omega_r,
        };
        let params = SystemParams::new(
            s.mass.unwrap_or(1.0),
            omega_r,
            s.gamma.unwrap_or(default_gamma),
            s.distance.unwrap_or(2.0),
            s.cutoff.unwrap_or(default_cutoff),
        )
        .map_err(usage)?;
        let l_axis = match (s.l_range, s.distance, mode) {
            (Some(a), _, _) => a,
            (None, Some(l), _) => Axis::single(l),
            (None, None, Mode::EarlyGrid) => Axis::linear(0.1, 1.5, 30),
            (None, None, Mode::LateL) => Axis::logarithmic(0.5, 100.0, 40),
            (None, None, Mode::TwinScaling) => Axis::logarithmic(5.0, 50.0, 10),
            (None, None, Mode::LateGamma) => Axis::single(2.0),
        };
        let t_axis = (mode == Mode::EarlyGrid).then(|| s.t_range.unwrap_or(Axis::linear(0.0, 10.0, 30)));
        let gamma_axis = (mode == Mode::LateGamma).then(|| s.gamma_range.expect("late-gamma has a range"));

        for l in l_axis.values() {
            params.with_distance(l).validate().map_err(usage)?;
        }
        if let Some(t) = t_axis {
            if t.start < 0.0 || t.stop < 0.0 {
                return Err(usage(format!("times must be non-negative, got --t-range {t}")));
            }
        }
        if let Some(g) = gamma_axis {
            for x in g.values() {
                params.with_gamma(x).validate().map_err(usage)?;
            }
        }
        let rel_tol = s.rel_tol.unwrap_or(DEFAULT_REL_TOL);
        if !(1e-13..1.0).contains(&rel_tol) {
            return Err(usage(format!("--rel-tol {rel_tol} must lie in [1e-13, 1)")));
        }
        Ok(Self {
            mode,
            params,
            l_axis,
            t_axis,
            gamma_axis,
            rel_tol,
            weight: match s.weight {
                Some(Weight::Halved) => WeightConvention::Halved,
                Some(Weight::Canonical) | None => WeightConvention::Canonical,
            },
            format: s.format.unwrap_or(Format::Csv),
            out: s.out.clone(),
        })
    }

    pub fn run(&self) -> CliResult<SweepTable> {
        let mut table = match self.mode {
            Mode::EarlyGrid => run_early_grid(self)?,
            Mode::LateL | Mode::LateGamma => run_late_sweep(self)?,
            Mode::TwinScaling => run_twin_scaling(self)?,
        };
        let mut meta = self.metadata();
        meta.append(&mut table.metadata);
        table.metadata = meta;
        Ok(table)
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let p = &self.params;
        let mut m = vec![
            ("oscfield_version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("mode".to_string(), self.mode.name().to_string()),
            ("mass".to_string(), p.mass.to_string()),
            ("omega_r".to_string(), p.omega_r.to_string()),
            ("gamma".to_string(), p.gamma.to_string()),
            ("cutoff".to_string(), p.cutoff.to_string()),
            ("rel_tol".to_string(), self.rel_tol.to_string()),
        ];
        let axis = |name: &str, a: &Axis| (name.to_string(), a.to_string());
        m.push(axis("L", &self.l_axis));
        if let Some(t) = &self.t_axis {
            m.push(axis("t", t));
        }
        if let Some(g) = &self.gamma_axis {
            m.push(axis("gamma_range", g));
        }
        m
    }
}

/// Half-space early-time grid, rows ordered by L then t.
pub fn run_early_grid(spec: &SweepSpec) -> CliResult<SweepTable> {
    let ts = spec.t_axis.expect("early grid has a time axis").values();
    let ls = spec.l_axis.values();
    let p = spec.params;
    let t_max = ts.iter().cloned().fold(0.0, f64::max);
    if t_max > 1.0 / p.gamma {
        warn!(
            "t up to {t_max} exceeds 1/gamma = {}; the early-time treatment no longer applies",
            1.0 / p.gamma
        );
    }
    let opts = EarlyOptions {
        convention: spec.weight,
        rel_tol: spec.rel_tol,
    };
    let points: Vec<(f64, f64)> = ls.iter().flat_map(|&l| ts.iter().map(move |&t| (l, t))).collect();
    let rows = points
        .par_iter()
        .map(|&(l, t)| {
            let q = p.with_distance(l);
            let a = correlators_a(t, &q);
            let v = correlators_v(t, &q, &opts)?;
            let cov = CovarianceMatrix::new(a.0 + v.0, a.1 + v.1, a.2 + v.2);
            let mu = purity(&cov)?;
            Ok(vec![l, t, 1.0 - mu, mu, cov.vqq, cov.vpp, cov.vqp])
        })
        .collect::<oscfield::Result<Vec<_>>>()?;
    let mut table = SweepTable::new(vec!["L", "t", "S_L", "purity", "vqq", "vpp", "vqp"]);
    table.rows = rows;
    table.meta(
        "weight_convention",
        match spec.weight {
            WeightConvention::Canonical => "canonical",
            WeightConvention::Halved => "halved",
        },
    );
    let unphysical = table.rows.iter().filter(|r| r[3] > 1.0 + 1e-12).count();
    if unphysical > 0 {
        warn!("{unphysical} grid points have purity above 1; the zeroth-order state is not valid there");
    }
    table.meta("rows_with_purity_above_one", unphysical);
    Ok(table)
}

fn late_row(x: f64, p: &SystemParams, rel_tol: f64) -> oscfield::Result<Vec<f64>> {
    let free = v_late_exact_tol(&FrequencyResponse::new(Geometry::Free, *p), rel_tol)?;
    let half = v_late_exact_tol(&FrequencyResponse::new(Geometry::HalfSpace, *p), rel_tol)?;
    let (dvqq, dvpp) = delta_v(p)?;
    Ok(vec![
        x,
        1.0 - purity(&free)?,
        1.0 - purity(&half)?,
        delta_s_linear(p)?,
        dvqq,
        dvpp,
        if p.image_term_is_perturbative() { 1.0 } else { 0.0 },
    ])
}

/// Late-time entropies along L (or gamma at fixed L).
pub fn run_late_sweep(spec: &SweepSpec) -> CliResult<SweepTable> {
    let p = spec.params;
    type Vary = fn(&SystemParams, f64) -> SystemParams;
    let (name, xs, vary): (&'static str, Vec<f64>, Vary) = match spec.mode {
        Mode::LateGamma => (
            "gamma",
            spec.gamma_axis.expect("late-gamma has a range").values(),
            |p, g| p.with_gamma(g),
        ),
        _ => ("L", spec.l_axis.values(), |p, l| p.with_distance(l)),
    };
    let rows = xs
        .par_iter()
        .map(|&x| late_row(x, &vary(&p, x), spec.rel_tol))
        .collect::<oscfield::Result<Vec<_>>>()?;
    let mut table = SweepTable::new(vec![
        name,
        "S_L_free",
        "S_L_half_exact",
        "delta_S_linear",
        "dvqq",
        "dvpp",
        "valid",
    ]);
    table.rows = rows;
    let invalid = table.rows.iter().filter(|r| r[6] == 0.0).count();
    if invalid > 0 {
        warn!("{invalid} rows lie outside the perturbative range of the image term (valid = 0)");
    }
    table.meta("valid_rule", "2 gamma / L <= 0.1 omega_r^2");
    Ok(table)
}

/// Two-oscillator late-time moments along the separation, with fitted slopes.
pub fn run_twin_scaling(spec: &SweepSpec) -> CliResult<SweepTable> {
    let p = spec.params;
    let ls = spec.l_axis.values();
    let rows: Vec<TwinLate> = ls
        .par_iter()
        .map(|&l| twin_late(&p.with_distance(l), spec.rel_tol))
        .collect::<oscfield::Result<_>>()?;
    let mut table = SweepTable::new(vec![
        "L",
        "self_qq",
        "self_pp",
        "cross_qq",
        "cross_pp",
        "self_correction_qq",
        "self_correction_pp",
        "valid",
    ]);
    table.rows = ls
        .iter()
        .zip(&rows)
        .map(|(&l, r)| {
            let valid = p.with_distance(l).image_term_is_perturbative();
            vec![
                l,
                r.self_qq,
                r.self_pp,
                r.cross_qq,
                r.cross_pp,
                r.self_correction_qq,
                r.self_correction_pp,
                if valid { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    let slope = |ys: Vec<f64>| match fit_log_log(&ls, &ys) {
        Ok(s) => s.to_string(),
        Err(e) => format!("unavailable ({e})"),
    };
    table.meta("cross_qq_slope", slope(rows.iter().map(|r| r.cross_qq).collect()));
    table.meta(
        "self_correction_qq_slope",
        slope(rows.iter().map(|r| r.self_correction_qq).collect()),
    );
    Ok(table)
}
