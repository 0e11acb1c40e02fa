//! Mode-wise solution of `∂̄u = f` on the punctured disk.
//!
//! With `t = r e^{iθ}`, `u = Σ u_n e^{inθ}` and `f = Σ f_n e^{inθ}`, the
//! equation reduces to `(1/2)(u_n' - (n/r) u_n) = f_{n+1}`, solved by
//!
//! * `u_n = 2 r^n ∫_0^r ρ^{-n} f_{n+1} dρ` for `n < 0`,
//! * `u_0 = -2 ∫_r^A f_1 dρ`,
//! * `u_n = -2 r^n ∫_r^A ρ^{-n} f_{n+1} dρ` for `n > 0`.
//!
//! For `α = 0` and `k ≥ 2` the constant mode is integrated from the puncture
//! instead, `u_0 = 2 ∫_0^r f_1 dρ`; the choice from `A` leaves a nonzero
//! constant at `r = 0`, which has infinite norm under that weight.
//!
//! All integrals are running trapezoid sums in `log r`, with the kernel
//! `(ρ/r)^{±n}` applied as a per-step decay factor so nothing overflows. The
//! piece `∫_0^ε` for `n < 0` freezes `f_{n+1}` at its innermost sample.

use num::complex::Complex64;

use super::form::{FormDegree, FourierRadialForm};
use super::grid::RadialGrid;
use super::WeightedNormParams;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `4π Σ_n ∫_ε^A |f_n|^2 |log r|^k r^{1+α} dr`.
pub fn norm_form01(f: &FourierRadialForm, p: &WeightedNormParams, grid: &RadialGrid) -> Result<f64> {
    if f.degree != FormDegree::Form01 {
        return Err(Error::Precondition("norm_form01 needs a (0,1)-form".into()));
    }
    f.check_grid(grid)?;
    let weight: Vec<f64> = (0..grid.len())
        .map(|i| grid.x[i].powi(p.k) * grid.r[i].powf(2.0 + p.alpha))
        .collect();
    Ok(4.0
        * PI
        * f.modes
            .values()
            .map(|fn_| grid.integrate(|i| fn_[i].norm_sqr() * weight[i]))
            .sum::<f64>())
}

/// `2π Σ_n ∫_ε^A |u_n|^2 |log r|^{k-2} r^{-1+α} dr`.
pub fn norm_section(u: &FourierRadialForm, p: &WeightedNormParams, grid: &RadialGrid) -> Result<f64> {
    if u.degree != FormDegree::Function {
        return Err(Error::Precondition("norm_section needs a section".into()));
    }
    u.check_grid(grid)?;
    let weight: Vec<f64> = (0..grid.len())
        .map(|i| grid.x[i].powi(p.k - 2) * grid.r[i].powf(p.alpha))
        .collect();
    Ok(2.0
        * PI
        * u.modes
            .values()
            .map(|un| grid.integrate(|i| un[i].norm_sqr() * weight[i]))
            .sum::<f64>())
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub u: FourierRadialForm,
    /// Set when `(α, k)` is outside the range where a norm bound holds.
    pub warning: Option<String>,
}

/// Which integral represents the constant mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantModeRule {
    FromOuterRadius,
    FromPuncture,
}

pub fn constant_mode_rule(p: &WeightedNormParams) -> ConstantModeRule {
    if p.alpha == 0.0 && p.k >= 2 {
        ConstantModeRule::FromPuncture
    } else {
        ConstantModeRule::FromOuterRadius
    }
}

pub fn solve(f: &FourierRadialForm, p: &WeightedNormParams, grid: &RadialGrid) -> Result<Solution> {
    if f.degree != FormDegree::Form01 {
        return Err(Error::Precondition("solve needs a (0,1)-form".into()));
    }
    f.check_grid(grid)?;
    let warning = (!p.is_admissible()).then(|| {
        format!(
            "(alpha, k) = ({}, {}) is inadmissible: no L2 bound is expected",
            p.alpha, p.k
        )
    });
    let rule = constant_mode_rule(p);
    let mut u = FourierRadialForm::zero(FormDegree::Function);
    for (&m, fm) in &f.modes {
        u.insert(m - 1, solve_mode(m - 1, fm, grid, rule));
    }
    Ok(Solution { u, warning })
}

/// `u_n` from `f_{n+1}` sampled on `grid`.
pub fn solve_mode(n: i32, f: &[Complex64], grid: &RadialGrid, rule: ConstantModeRule) -> Vec<Complex64> {
    let len = grid.len();
    let h = grid.h;
    // integrand of ∫ · dρ against d log ρ
    let g: Vec<Complex64> = (0..len).map(|i| f[i] * grid.r[i]).collect();
    let mut u = vec![Complex64::new(0.0, 0.0); len];
    let from_puncture = n < 0 || (n == 0 && rule == ConstantModeRule::FromPuncture);
    if from_puncture {
        // I(r) = r^n ∫_0^r ρ^{-n} f dρ, with n ≤ 0
        let m = f64::from(-n);
        let decay = (-m * h).exp();
        let eps = grid.r[0];
        let mut acc = f[0] * eps / (m + 1.0);
        u[0] = acc * 2.0;
        for i in 1..len {
            acc = acc * decay + (g[i - 1] * decay + g[i]) * (h / 2.0);
            u[i] = acc * 2.0;
        }
    } else {
        // K(r) = r^n ∫_r^A ρ^{-n} f dρ, with n ≥ 0
        let decay = (-f64::from(n) * h).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (0..len - 1).rev() {
            acc = acc * decay + (g[i] + g[i + 1] * decay) * (h / 2.0);
            u[i] = acc * -2.0;
        }
    }
    u
}

/// Max over modes and interior nodes of `|(1/2)(u_n' - (n/r) u_n) - f_{n+1}|`,
/// with `u_n'` from centered differences in `log r`.
pub fn residual(u: &FourierRadialForm, f: &FourierRadialForm, grid: &RadialGrid) -> Result<f64> {
    u.check_grid(grid)?;
    f.check_grid(grid)?;
    let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut modes: Vec<i32> = u.modes.keys().copied().collect();
    modes.extend(f.modes.keys().map(|m| m - 1));
    modes.sort_unstable();
    modes.dedup();
    let mut worst = 0.0f64;
    for n in modes {
        let un = u.mode(n).unwrap_or(&zero);
        let fn1 = f.mode(n + 1).unwrap_or(&zero);
        for i in 1..grid.len() - 1 {
            let r = grid.r[i];
            let du = (un[i + 1] - un[i - 1]) / (2.0 * grid.h * r);
            let res = (du - un[i] * (f64::from(n) / r)) * 0.5 - fn1[i];
            worst = worst.max(res.norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbar::form::{ProfileForm, RadialProfile};

    const A: f64 = 0.5;

    fn params(alpha: f64, k: i32) -> WeightedNormParams {
        WeightedNormParams::new(alpha, k, A).unwrap()
    }

    fn rel_err(u: &[Complex64], exact: impl Fn(f64) -> f64, grid: &RadialGrid) -> f64 {
        let scale = grid.r.iter().map(|&r| exact(r).abs()).fold(0.0, f64::max);
        (0..grid.len())
            .map(|i| (u[i] - Complex64::new(exact(grid.r[i]), 0.0)).norm())
            .fold(0.0, f64::max)
            / scale
    }

    #[test]
    fn norm_f_constant_mode() {
        let grid = RadialGrid::new(1e-6, A, 12).unwrap();
        let f = ProfileForm::single(1, RadialProfile::constant(1.0)).sample(&grid, FormDegree::Form01);
        let v = norm_form01(&f, &params(0.0, 0), &grid).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-5, "{v}");
        let zero = FourierRadialForm::zero(FormDegree::Form01);
        assert_eq!(norm_form01(&zero, &params(0.0, 0), &grid).unwrap(), 0.0);
    }

    #[test]
    fn norm_f_log_profile() {
        let grid = RadialGrid::new(1e-12, A, 14).unwrap();
        let f = ProfileForm::single(1, RadialProfile::monomial(1.0, -1.0, -2.0)).sample(&grid, FormDegree::Form01);
        let v = norm_form01(&f, &params(0.0, 1), &grid).unwrap();
        let xa = 2f64.ln();
        let xe = 1e12f64.ln();
        let closed = 2.0 * PI * (xa.powi(-2) - xe.powi(-2));
        assert!((v - closed).abs() / closed < 1e-5, "{v} vs {closed}");
        // and the limit 2π |log A|^{-2} is approached as ε → 0
        assert!((v - 2.0 * PI / (xa * xa)).abs() / v < 3e-3);
    }

    #[test]
    fn norm_u_examples() {
        let grid = RadialGrid::new(1e-12, A, 14).unwrap();
        let u = ProfileForm::single(0, RadialProfile::constant(1.0)).sample(&grid, FormDegree::Function);
        let v = norm_section(&u, &params(0.5, 2), &grid).unwrap();
        let closed = 2.0 * PI * 2.0 * (A.sqrt() - 1e-6);
        assert!((v - closed).abs() / closed < 1e-6);
        // α = 0: 2π log(A/ε), growing with 1/ε
        let grow: Vec<f64> = [1e-2, 1e-4, 1e-6]
            .iter()
            .map(|&e| {
                let g = RadialGrid::new(e, A, 10).unwrap();
                let u = ProfileForm::single(0, RadialProfile::constant(1.0)).sample(&g, FormDegree::Function);
                norm_section(&u, &params(0.0, 2), &g).unwrap()
            })
            .collect();
        assert!(grow.windows(2).all(|w| w[1] > w[0]));
        assert!((grow[2] - 2.0 * PI * (A / 1e-6f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn closed_form_solutions() {
        let grid = RadialGrid::new(1e-2, A, 12).unwrap();
        let p = params(0.0, 0);
        type Exact = fn(f64) -> f64;
        let cases: [(i32, Exact); 3] = [(1, |r| -2.0 * (A - r)), (0, |r| r), (2, |r| -2.0 * r * (A / r).ln())];
        for (m, exact) in cases {
            let f = ProfileForm::single(m, RadialProfile::constant(1.0)).sample(&grid, FormDegree::Form01);
            let sol = solve(&f, &p, &grid).unwrap();
            assert!(sol.warning.is_none());
            let u = sol.u.mode(m - 1).unwrap();
            assert!(rel_err(u, exact, &grid) < 1e-6, "mode {m}");
            assert!(residual(&sol.u, &f, &grid).unwrap() < 1e-5);
        }
    }

    #[test]
    fn residual_detects_perturbation() {
        let grid = RadialGrid::new(1e-2, A, 10).unwrap();
        let f = ProfileForm::single(2, RadialProfile::constant(1.0)).sample(&grid, FormDegree::Form01);
        let mut u = solve(&f, &params(0.0, 0), &grid).unwrap().u;
        for z in u.modes.get_mut(&1).unwrap() {
            *z += 1.0;
        }
        // the injected constant leaves |n|/(2r) ≥ 1 behind
        assert!(residual(&u, &f, &grid).unwrap() >= 1.0);
        let zero = FourierRadialForm::zero(FormDegree::Function);
        let fz = FourierRadialForm::zero(FormDegree::Form01);
        assert_eq!(residual(&zero, &fz, &grid).unwrap(), 0.0);
    }

    #[test]
    fn inadmissible_warns() {
        let grid = RadialGrid::new(1e-2, A, 6).unwrap();
        let f = ProfileForm::single(1, RadialProfile::constant(1.0)).sample(&grid, FormDegree::Form01);
        assert!(solve(&f, &params(0.0, 1), &grid).unwrap().warning.is_some());
    }

    #[test]
    fn constant_mode_from_puncture() {
        let grid = RadialGrid::new(1e-2, A, 12).unwrap();
        let f = ProfileForm::single(1, RadialProfile::constant(1.0)).sample(&grid, FormDegree::Form01);
        let sol = solve(&f, &params(0.0, 2), &grid).unwrap();
        assert!(rel_err(sol.u.mode(0).unwrap(), |r| 2.0 * r, &grid) < 1e-6);
    }

    #[test]
    fn wrong_degree_is_rejected() {
        let grid = RadialGrid::new(1e-2, A, 4).unwrap();
        let u = FourierRadialForm::zero(FormDegree::Function);
        assert!(solve(&u, &params(0.0, 0), &grid).is_err());
        assert!(norm_form01(&u, &params(0.0, 0), &grid).is_err());
    }
}
