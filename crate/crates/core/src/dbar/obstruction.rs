//! The excluded case `(α, k) = (0, 1)`.
//!
//! Data `f_1(ρ) = 1/(ρ |log ρ|^2)` has finite norm, but the constant-mode
//! solution is `u_0 = c + 2/|log r|` with `c = -2/|log A|`. Under the weight
//! `|log r|^{-1} r^{-1} dr` its norm grows like `2π c^2 log|log ε|`.

use serde::Serialize;

use super::form::{FormDegree, ProfileForm, RadialProfile};
use super::grid::RadialGrid;
use super::solver::{norm_form01, norm_section, solve};
use super::WeightedNormParams;
use crate::error::{Error, Result};
use std::f64::consts::PI;

pub const FIT_TOLERANCE: f64 = 0.2;
pub const F_STABILITY: f64 = 0.05;
pub const CONTROL_DRIFT: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub epsilon: f64,
    /// `log |log ε|`.
    pub log_log: f64,
    pub norm_f: f64,
    pub norm_u: f64,
    /// `u_0` at the innermost node.
    pub u0_inner: f64,
}

pub fn growth_table(
    data: &ProfileForm,
    p: &WeightedNormParams,
    epsilons: &[f64],
    level: u32,
) -> Result<Vec<GrowthRow>> {
    epsilons
        .iter()
        .map(|&epsilon| {
            let grid = RadialGrid::new(epsilon, p.a, level)?;
            let f = data.sample(&grid, FormDegree::Form01);
            let u = solve(&f, p, &grid)?.u;
            Ok(GrowthRow {
                epsilon,
                log_log: epsilon.ln().abs().ln(),
                norm_f: norm_form01(&f, p, &grid)?,
                norm_u: norm_section(&u, p, &grid)?,
                u0_inner: u.mode(0).map_or(0.0, |u0| u0[0].re),
            })
        })
        .collect()
}

/// `f_1(ρ) = 1/(ρ |log ρ|^2)`.
pub fn obstruction_data() -> ProfileForm {
    ProfileForm::single(1, RadialProfile::monomial(1.0, -1.0, -2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlCase {
    pub k: i32,
    pub ratios: Vec<f64>,
    pub drift: f64,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub alpha: f64,
    pub k: i32,
    #[serde(rename = "A")]
    pub a: f64,
    pub grid_level: u32,
    pub rows: Vec<GrowthRow>,
    /// Limit of `u_0` at the puncture.
    pub c: f64,
    /// `2π c^2`, the slope of `‖u‖^2` against `log|log ε|`.
    pub predicted_slope: f64,
    /// Least-squares slope of `‖u‖^2` against `log|log ε|`.
    pub fitted_slope: f64,
    pub relative_deviation: f64,
    pub strictly_increasing: bool,
    pub fits_law: bool,
    /// `max / min - 1` of `‖f‖^2` over the ladder.
    pub f_drift: f64,
    pub f_stable: bool,
    pub control: ControlCase,
}

pub fn obstruction_demo(a: f64, epsilons: &[f64], level: u32) -> Result<ObstructionReport> {
    if epsilons.len() < 2 {
        return Err(Error::Domain("the obstruction needs at least two cutoffs".into()));
    }
    let p = WeightedNormParams::new(0.0, 1, a)?;
    let data = obstruction_data();
    let rows = growth_table(&data, &p, epsilons, level)?;
    let c = -2.0 / a.ln().abs();
    let predicted_slope = 2.0 * PI * c * c;
    let fitted_slope = ls_slope(
        &rows.iter().map(|r| r.log_log).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.norm_u).collect::<Vec<_>>(),
    );
    let relative_deviation = (fitted_slope / predicted_slope - 1.0).abs();
    let mut ordered = rows.clone();
    ordered.sort_by(|x, y| y.epsilon.total_cmp(&x.epsilon));
    let strictly_increasing = ordered.windows(2).all(|w| w[1].norm_u > w[0].norm_u);
    let f_drift = drift(rows.iter().map(|r| r.norm_f)) - 1.0;

    let control_p = WeightedNormParams::new(0.0, 0, a)?;
    let ratios: Vec<f64> = growth_table(&data, &control_p, epsilons, level)?
        .iter()
        .map(|r| r.norm_u / r.norm_f)
        .collect();
    let control_drift = drift(ratios.iter().copied());
    Ok(ObstructionReport {
        alpha: 0.0,
        k: 1,
        a,
        grid_level: level,
        rows,
        c,
        predicted_slope,
        fitted_slope,
        relative_deviation,
        strictly_increasing,
        fits_law: relative_deviation <= FIT_TOLERANCE,
        f_drift,
        f_stable: f_drift <= F_STABILITY,
        control: ControlCase {
            k: 0,
            ratios,
            drift: control_drift,
            bounded: control_drift < CONTROL_DRIFT,
        },
    })
}

fn drift(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
