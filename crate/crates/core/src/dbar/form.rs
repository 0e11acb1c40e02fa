use std::collections::BTreeMap;

use num::complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::grid::RadialGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormDegree {
    /// A section, `u = Σ u_n(r) e^{inθ}`.
    Function,
    /// `f dt̄` with `f = Σ f_n(r) e^{inθ}`.
    Form01,
    /// A `(1,0)`-form written against `dt/t`.
    Form10DtOverT,
}

/// Fourier coefficients sampled on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierRadialForm {
    pub degree: FormDegree,
    pub modes: BTreeMap<i32, Vec<Complex64>>,
}

impl FourierRadialForm {
    pub fn zero(degree: FormDegree) -> Self {
        Self {
            degree,
            modes: BTreeMap::new(),
        }
    }

    pub fn mode(&self, n: i32) -> Option<&[Complex64]> {
        self.modes.get(&n).map(Vec::as_slice)
    }

    pub fn mode_range(&self) -> Option<(i32, i32)> {
        Some((*self.modes.keys().next()?, *self.modes.keys().next_back()?))
    }

    pub fn check_grid(&self, grid: &RadialGrid) -> Result<()> {
        for (n, samples) in &self.modes {
            if samples.len() != grid.len() {
                return Err(Error::Structure(format!(
                    "mode {n} has {} samples on a grid of {} nodes",
                    samples.len(),
                    grid.len()
                )));
            }
        }
        Ok(())
    }

    pub fn insert(&mut self, n: i32, samples: Vec<Complex64>) {
        self.modes.insert(n, samples);
    }
}

/// `c · r^{r_pow} · |log r|^{log_pow}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileTerm {
    pub c: f64,
    #[serde(default)]
    pub c_im: f64,
    #[serde(default)]
    pub r_pow: f64,
    #[serde(default)]
    pub log_pow: f64,
}

/// A closed-form radial profile, a finite sum of [`ProfileTerm`]s.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RadialProfile {
    pub terms: Vec<ProfileTerm>,
}

impl RadialProfile {
    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0.0, 0.0)
    }

    pub fn monomial(c: f64, r_pow: f64, log_pow: f64) -> Self {
        Self {
            terms: vec![ProfileTerm {
                c,
                c_im: 0.0,
                r_pow,
                log_pow,
            }],
        }
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        let x = -r.ln();
        self.terms
            .iter()
            .map(|t| Complex64::new(t.c, t.c_im) * (r.powf(t.r_pow) * x.abs().powf(t.log_pow)))
            .sum()
    }

    pub fn sample(&self, grid: &RadialGrid) -> Vec<Complex64> {
        grid.r.iter().map(|&r| self.eval(r)).collect()
    }

    /// A complex cubic in `r/A` with coefficients uniform in `[-1, 1]`.
    pub fn random_cubic<R: Rng + ?Sized>(rng: &mut R, a: f64) -> Self {
        Self {
            terms: (0..4)
                .map(|j| ProfileTerm {
                    c: rng.gen_range(-1.0..=1.0) / a.powi(j),
                    c_im: rng.gen_range(-1.0..=1.0) / a.powi(j),
                    r_pow: j as f64,
                    log_pow: 0.0,
                })
                .collect(),
        }
    }
}

/// A form given mode by mode through closed-form profiles.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProfileForm {
    pub modes: BTreeMap<i32, RadialProfile>,
}

impl ProfileForm {
    pub fn single(n: i32, profile: RadialProfile) -> Self {
        Self {
            modes: BTreeMap::from([(n, profile)]),
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, n_max: i32, a: f64) -> Self {
        Self {
            modes: (-n_max..=n_max)
                .map(|n| (n, RadialProfile::random_cubic(rng, a)))
                .collect(),
        }
    }

    pub fn sample(&self, grid: &RadialGrid, degree: FormDegree) -> FourierRadialForm {
        FourierRadialForm {
            degree,
            modes: self.modes.iter().map(|(&n, p)| (n, p.sample(grid))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn profile_eval() {
        let p = RadialProfile::monomial(1.0, -1.0, -2.0);
        let r = 0.25f64;
        let expected = 1.0 / (r * r.ln().powi(2));
        assert!((p.eval(r).re - expected).abs() < 1e-12);
    }

    #[test]
    fn random_forms_are_seeded() {
        let a = ProfileForm::random(&mut ChaCha8Rng::seed_from_u64(7), 8, 0.5);
        let b = ProfileForm::random(&mut ChaCha8Rng::seed_from_u64(7), 8, 0.5);
        assert_eq!(a, b);
        assert_eq!(a.modes.len(), 17);
    }

    #[test]
    fn profile_json_shape() {
        let p: RadialProfile = serde_json::from_str(r#"[{"c": 1.0, "r_pow": 2}]"#).unwrap();
        assert_eq!(p, RadialProfile::monomial(1.0, 2.0, 0.0));
    }
}
