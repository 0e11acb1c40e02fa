//! The Higgs field `θ ~ (dt/t) N` against the model metric, and the untwisted
//! frame `ṽ = exp((1/2πi) N log t) v`.
//!
//! The model metric is diagonal in a string frame `e_i` with
//! `|e_i|^2 = |log r|^{w_i}`, and the Poincaré metric gives
//! `|dt/t|^2 = (log r)^2`. Since `N` lowers weights by two, `|θ e_i| / |e_i|`
//! stays bounded as `r -> 0`.

use num::complex::Complex64;
use serde::Serialize;

use super::grid::RadialGrid;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::monodromy::{unipotent_exp, NilpotentEndomorphism};
use crate::weight_filtration::{build_weight_filtration, ModelMetricFrame, WeightFiltration};
use std::f64::consts::PI;

pub const THETA_DRIFT: f64 = 1.5;
pub const UNTWIST_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ThetaModel {
    pub n: NilpotentEndomorphism,
    pub filtration: WeightFiltration,
    pub frame: ModelMetricFrame,
}

impl ThetaModel {
    pub fn new(n: NilpotentEndomorphism) -> Self {
        let filtration = build_weight_filtration(&n);
        let frame = filtration.model_frame();
        Self { n, filtration, frame }
    }

    /// `|v|_h^2` at `x = log(1/r)` for `v` given in frame coordinates.
    pub fn metric_norm_sqr(&self, coords: &[Complex64], x: f64) -> f64 {
        coords
            .iter()
            .zip(&self.frame.exponents)
            .map(|(c, &w)| c.norm_sqr() * x.powi(w as i32))
            .sum()
    }
}

/// `|dt/t|^2` for the cusp metric `|dt|^2 / (r^2 (log r)^2)`.
pub fn dt_over_t_norm_sqr(r: f64) -> f64 {
    let lambda = 1.0 / (r * r * r.ln().powi(2));
    1.0 / (lambda * r * r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaEntry {
    pub index: usize,
    pub weight: i64,
    pub image_weight: i64,
    /// `weight(N e_i) + 2 == w_i`, in exact arithmetic.
    pub exponent_identity: bool,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Ratio at the innermost node over ratio at the outermost.
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaReport {
    pub entries: Vec<ThetaEntry>,
    pub sup_ratio: f64,
    pub exponent_identity: bool,
    pub r_stable: bool,
}

impl ThetaReport {
    pub fn certified(&self) -> bool {
        self.exponent_identity && self.r_stable
    }
}

pub fn theta_bound_check(model: &ThetaModel, grid: &RadialGrid) -> Result<ThetaReport> {
    let n = model.n.matrix();
    let mut entries = Vec::new();
    for (index, (e, &w)) in model.frame.vectors.iter().zip(&model.frame.exponents).enumerate() {
        let image = n.mul_vec(e);
        if image.iter().all(num::Zero::is_zero) {
            continue;
        }
        let image_weight = model.filtration.vector_weight(&image)?;
        let coords: Vec<Complex64> = model
            .filtration
            .frame_coordinates(&image)
            .iter()
            .map(|s| s.to_complex())
            .collect();
        let mut unit = vec![Complex64::new(0.0, 0.0); model.frame.vectors.len()];
        unit[index] = Complex64::new(1.0, 0.0);
        let ratios: Vec<f64> = (0..grid.len())
            .map(|i| {
                let x = grid.x[i];
                dt_over_t_norm_sqr(grid.r[i]) * model.metric_norm_sqr(&coords, x) / model.metric_norm_sqr(&unit, x)
            })
            .collect();
        let (lo, hi) = ratios
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        entries.push(ThetaEntry {
            index,
            weight: w,
            image_weight,
            exponent_identity: image_weight + 2 == w,
            ratio_min: lo,
            ratio_max: hi,
            drift: ratios[0].max(ratios[ratios.len() - 1]) / ratios[0].min(ratios[ratios.len() - 1]),
        });
    }
    let sup_ratio = entries.iter().map(|e| e.ratio_max).fold(0.0, f64::max);
    Ok(ThetaReport {
        exponent_identity: entries.iter().all(|e| e.exponent_identity),
        r_stable: entries
            .iter()
            .all(|e| e.drift < THETA_DRIFT && e.ratio_max / e.ratio_min < THETA_DRIFT),
        sup_ratio,
        entries,
    })
}

type CMat = Vec<Vec<Complex64>>;

fn cmat_mul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn cmat_vec(a: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// `exp(z N)` as a finite series, `N` nilpotent.
fn exp_nilpotent(n: &CMat, z: Complex64) -> CMat {
    let dim = n.len();
    let scaled: CMat = n.iter().map(|row| row.iter().map(|x| x * z).collect()).collect();
    let mut term: CMat = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| Complex64::new(f64::from(u8::from(i == j)), 0.0))
                .collect()
        })
        .collect();
    let mut sum = term.clone();
    for j in 1..=dim {
        term = cmat_mul(&term, &scaled);
        for (srow, trow) in sum.iter_mut().zip(&term) {
            for (s, t) in srow.iter_mut().zip(trow) {
                *s += t / j as f64;
            }
        }
        // divide the running power once more for the next factorial
        for row in term.iter_mut() {
            for t in row.iter_mut() {
                *t /= j as f64;
            }
        }
    }
    sum
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UntwistReport {
    /// `max_θ |ṽ(θ) - ṽ(0)|`, including `θ = 2π`.
    pub theta_variation: f64,
    /// `|exp(N) s(2π) - s(0)|` for the flat section `s`, with `exp(N)` exact.
    pub monodromy_mismatch: f64,
    pub mismatch: f64,
}

/// Evaluates `ṽ(θ) = exp((1/2πi) N (log r0 + iθ)) s(θ)` with the multivalued
/// flat section `s(θ) = exp(-(θ/2π) N) v`.
pub fn untwist_check(n: &NilpotentEndomorphism, v: &[Complex64], r0: f64, samples: usize) -> Result<UntwistReport> {
    if v.len() != n.dim() {
        return Err(Error::Structure(format!(
            "vector of length {} for rank {}",
            v.len(),
            n.dim()
        )));
    }
    if !(r0 > 0.0 && r0 < 1.0) || samples == 0 {
        return Err(Error::Domain(
            "untwist needs 0 < r0 < 1 and a nonempty angular grid".into(),
        ));
    }
    let nc = n.matrix().to_complex();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let flat = |theta: f64| cmat_vec(&exp_nilpotent(&nc, Complex64::new(-theta / (2.0 * PI), 0.0)), v);
    let untwisted = |theta: f64| {
        let log_t = Complex64::new(r0.ln(), theta);
        cmat_vec(&exp_nilpotent(&nc, log_t / two_pi_i), &flat(theta))
    };
    let base = untwisted(0.0);
    let theta_variation = (0..=samples)
        .map(|j| max_diff(&untwisted(2.0 * PI * j as f64 / samples as f64), &base))
        .fold(0.0, f64::max);
    let gamma: Matrix = unipotent_exp(n);
    let monodromy_mismatch = max_diff(&cmat_vec(&gamma.to_complex(), &flat(2.0 * PI)), &flat(0.0));
    Ok(UntwistReport {
        theta_variation,
        monodromy_mismatch,
        mismatch: theta_variation.max(monodromy_mismatch),
    })
}
