//! Plain `key = value` configuration files. Keys are the long flag names
//! without dashes (`gamma`, `omega-r`, `L-range`, ...); `#` starts a comment.

use std::path::{Path, PathBuf};

use crate::args::{Format, Shared, Weight};
use crate::error::{CliError, CliResult};

const KEYS: [&str; 12] = [
    "gamma",
    "omega-r",
    "mass",
    "cutoff",
    "L",
    "L-range",
    "t-range",
    "gamma-range",
    "rel-tol",
    "weight",
    "out",
    "format",
];

pub fn parse(text: &str, origin: &str) -> CliResult<Shared> {
    let mut s = Shared::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("{origin}:{}", n + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}: expected key = value, found `{line}`", at())))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("{}: unknown key `{key}`", at())));
        }
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{}: `{value}` is not a number", at())))
        };
        let axis = || value.parse().map_err(|e| CliError::Usage(format!("{}: {e}", at())));
        match key {
            "gamma" => s.gamma = Some(num()?),
            "omega-r" => s.omega_r = Some(num()?),
            "mass" => s.mass = Some(num()?),
            "cutoff" => s.cutoff = Some(num()?),
            "L" => s.distance = Some(num()?),
            "L-range" => s.l_range = Some(axis()?),
            "t-range" => s.t_range = Some(axis()?),
            "gamma-range" => s.gamma_range = Some(axis()?),
            "rel-tol" => s.rel_tol = Some(num()?),
            "weight" => {
                s.weight = Some(match value {
                    "canonical" => Weight::Canonical,
                    "halved" => Weight::Halved,
                    _ => return Err(CliError::Usage(format!("{}: weight must be canonical or halved", at()))),
                })
            }
            "out" => s.out = Some(PathBuf::from(value)),
            "format" => {
                s.format = Some(match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(CliError::Usage(format!("{}: format must be csv or json", at()))),
                })
            }
            _ => unreachable!(),
        }
    }
    Ok(s)
}

pub fn load(path: &Path) -> CliResult<Shared> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text, &path.display().to_string())
}

/// Flags win over the file, field by field.
pub fn merge(flags: &Shared, file: Shared) -> Shared {
    Shared {
        gamma: flags.gamma.or(file.gamma),
        omega_r: flags.omega_r.or(file.omega_r),
        mass: flags.mass.or(file.mass),
        cutoff: flags.cutoff.or(file.cutoff),
        distance: flags.distance.or(file.distance),
        l_range: flags.l_range.or(file.l_range),
        t_range: flags.t_range.or(file.t_range),
        gamma_range: flags.gamma_range.or(file.gamma_range),
        rel_tol: flags.rel_tol.or(file.rel_tol),
        weight: flags.weight.or(file.weight),
        out: flags.out.clone().or(file.out),
        format: flags.format.or(file.format),
        config: flags.config.clone(),
    }
}
