//! L2-adaptedness of a frame under a diagonal model metric: finiteness of
//! `‖Σ f_i e_i‖` must force finiteness of every `‖f_i e_i‖`.
//!
//! Divergence is read off a cutoff ladder. For increments
//! `ΔI_j = I(ε_{j+1}) - I(ε_j)` on the last three rungs, `q = ΔI_2 / ΔI_1` is
//! compared with the values a `1/x` integrand (borderline divergent) and an
//! `x^{-2}` integrand (borderline convergent) would produce; their geometric
//! mean is the threshold.

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::grid::RadialGrid;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::weight_filtration::ModelMetricFrame;
use std::f64::consts::PI;

/// Rungs spaced by a factor 4 in `log(1/ε)`, far enough out that mixed
/// integrands are dominated by their slowest-decaying term.
pub const ADAPTED_LADDER: [f64; 4] = [1e-2, 1e-8, 1e-32, 1e-128];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trial {
    pub label: String,
    pub term_divergent: Vec<bool>,
    pub sum_divergent: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdaptedReport {
    pub exponents: Vec<i64>,
    pub alpha: f64,
    pub epsilons: Vec<f64>,
    pub threshold: f64,
    pub trials: Vec<Trial>,
    pub adapted: bool,
}

/// `(threshold, q)` test on the last three rungs of a ladder.
pub fn is_divergent(epsilons: &[f64], values: &[f64]) -> bool {
    let n = values.len();
    let x: Vec<f64> = epsilons[n - 3..].iter().map(|e| e.ln().abs()).collect();
    let d1 = values[n - 2] - values[n - 3];
    let d2 = values[n - 1] - values[n - 2];
    if d1 <= 1e-14 * values[n - 2].abs() || d1 <= 0.0 {
        return false;
    }
    d2 / d1 >= divergence_threshold(&x)
}

pub fn divergence_threshold(x: &[f64]) -> f64 {
    let q_log = (x[2] / x[1]).ln() / (x[1] / x[0]).ln();
    let q_inv2 = (1.0 / x[1] - 1.0 / x[2]) / (1.0 / x[0] - 1.0 / x[1]);
    (q_log * q_inv2).sqrt()
}

/// Coefficients `f_i(r)` given as cubics in `r/A`.
fn eval_cubic(c: &[f64; 4], r: f64, a: f64) -> f64 {
    let s = r / a;
    c[0] + s * (c[1] + s * (c[2] + s * c[3]))
}

pub fn l2_adapted_check(
    frame: &ModelMetricFrame,
    alpha: f64,
    samples: usize,
    epsilons: &[f64],
    level: u32,
    seed: u64,
) -> Result<AdaptedReport> {
    if epsilons.len() < 3 {
        return Err(Error::Domain("the divergence test needs three cutoffs".into()));
    }
    let dim = frame.vectors.len();
    let a = super::DEFAULT_A;
    let f_mat = Matrix::from_columns(dim, &frame.vectors);
    let f_inv = f_mat
        .inverse()
        .ok_or_else(|| Error::Structure("frame vectors are dependent".into()))?
        .to_complex();
    let vectors: Vec<Vec<Complex64>> = frame
        .vectors
        .iter()
        .map(|v| v.iter().map(|s| s.to_complex()).collect())
        .collect();

    let mut cases: Vec<(String, Vec<[f64; 4]>)> = vec![
        ("ones".into(), vec![[1.0, 0.0, 0.0, 0.0]; dim]),
        (
            "alternating".into(),
            (0..dim)
                .map(|i| [if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0, 0.0, 0.0])
                .collect(),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let coeffs = (0..dim)
            .map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)))
            .collect();
        cases.push((format!("random-{s}"), coeffs));
    }

    // one grid per annulus between consecutive cutoffs, so increments of the
    // ladder are computed directly rather than as differences of totals
    let mut bounds = vec![a];
    bounds.extend_from_slice(epsilons);
    let grids = bounds
        .windows(2)
        .map(|w| RadialGrid::new(w[1], w[0], level))
        .collect::<Result<Vec<_>>>()?;
    let trials = cases
        .into_iter()
        .map(|(label, coeffs)| {
            let mut term_values = vec![Vec::new(); dim];
            let mut sum_values = Vec::new();
            let (mut term_acc, mut sum_acc) = (vec![0.0; dim], 0.0);
            for grid in &grids {
                let weight = |i: usize, w: i64| 2.0 * PI * grid.x[i].powi(w as i32 - 2) * grid.r[i].powf(alpha);
                for (t, c) in coeffs.iter().enumerate() {
                    let w = frame.exponents[t];
                    term_acc[t] += grid.integrate(|i| eval_cubic(c, grid.r[i], a).powi(2) * weight(i, w));
                    term_values[t].push(term_acc[t]);
                }
                sum_acc += grid.integrate(|i| {
                    // section in ambient coordinates, then back through the frame
                    let s: Vec<Complex64> = (0..dim)
                        .map(|row| {
                            (0..dim)
                                .map(|t| vectors[t][row] * eval_cubic(&coeffs[t], grid.r[i], a))
                                .sum()
                        })
                        .collect();
                    (0..dim)
                        .map(|t| {
                            let c: Complex64 = f_inv[t].iter().zip(&s).map(|(x, y)| x * y).sum();
                            c.norm_sqr() * weight(i, frame.exponents[t])
                        })
                        .sum::<f64>()
                });
                sum_values.push(sum_acc);
            }
            let term_divergent: Vec<bool> = term_values.iter().map(|v| is_divergent(epsilons, v)).collect();
            let sum_divergent = is_divergent(epsilons, &sum_values);
            Trial {
                label,
                consistent: sum_divergent == term_divergent.iter().any(|&d| d),
                term_divergent,
                sum_divergent,
            }
        })
        .collect::<Vec<_>>();
    let x: Vec<f64> = epsilons[epsilons.len() - 3..].iter().map(|e| e.ln().abs()).collect();
    Ok(AdaptedReport {
        exponents: frame.exponents.clone(),
        alpha,
        epsilons: epsilons.to_vec(),
        threshold: divergence_threshold(&x),
        adapted: trials.iter().all(|t| t.consistent),
        trials,
    })
}
