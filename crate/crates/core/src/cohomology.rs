//! Stalk and global cohomology of the pushforward `j_* L` on a punctured curve.
//!
//! Global dimensions come from two independent linear-algebra routes:
//!
//! * invariants for `h0`, invariants of the contragredient for `h2` (these are
//!   the coinvariants of `L`, dual to `H^2_c`), and `h1` from the Euler
//!   characteristic `n (2 - 2g - s) + sum_j dim ker N_j`;
//! * parabolic group cohomology: cocycles on the free generators whose value
//!   on every cusp loop lies in `im(C_j - I)`, modulo coboundaries.
//!
//! The two routes must agree; [`global_dims`] reports both.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::monodromy::{dual_rep, invariant_subspace, nilpotent_log, validate, PuncturedSurfaceRep};
use crate::scalar::Scalar;
use crate::spectral::{degeneration_certificate, FilteredComplexModel};

/// Symbolic value of a stalk cohomology group of a rank-one weighted piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StalkDescriptor {
    Zero,
    /// The whole fiber `V`.
    FullV,
    /// `dt/t ⊗ V`.
    DtOverTTensorV,
    /// A class in the quotient space `M_1` of radial functions; carries no dimension.
    M1Obstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StalkCohomologyRow {
    pub exponent: i64,
    pub h0: StalkDescriptor,
    pub h1: StalkDescriptor,
    pub h2: StalkDescriptor,
}

impl StalkCohomologyRow {
    pub fn degree(&self, d: usize) -> StalkDescriptor {
        match d {
            0 => self.h0,
            1 => self.h1,
            2 => self.h2,
            _ => StalkDescriptor::Zero,
        }
    }
}

/// Stalks at the origin of the L2 complex of a rank-one local system with
/// `|v|^2 ~ |log r|^k`.
pub fn stalk_row(k: i64) -> StalkCohomologyRow {
    use StalkDescriptor::*;
    StalkCohomologyRow {
        exponent: k,
        h0: if k <= 0 { FullV } else { Zero },
        h1: match k {
            k if k <= -2 => DtOverTTensorV,
            1 => M1Obstruction,
            _ => Zero,
        },
        h2: if k == -1 { M1Obstruction } else { Zero },
    }
}

/// Basis of `ker N_j` at cusp `j` (zero-based). Equal to `ker(C_j - I)`.
pub fn jstar_stalk(rep: &PuncturedSurfaceRep, cusp: usize) -> Result<Subspace> {
    let c = rep.cusp(cusp)?;
    let n = nilpotent_log(c)?;
    let stalk = n.kernel();
    debug_assert_eq!(stalk, Subspace::kernel(&(c - &Matrix::identity(rep.rank()))));
    Ok(stalk)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalCohomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub euler: i64,
    pub per_cusp_kernel_dims: Vec<usize>,
    pub h1_parabolic: usize,
    /// Whether the Euler-characteristic `h1` equals the parabolic one.
    pub consistent: bool,
}

fn require_valid(rep: &PuncturedSurfaceRep) -> Result<()> {
    let report = validate(rep);
    if !report.invertibility_ok {
        return Err(Error::Precondition("a generator is singular".into()));
    }
    if !report.relation_ok {
        return Err(Error::Precondition("surface-group relation fails".into()));
    }
    if let Some(j) = report.failing_cusps().first() {
        return Err(Error::Precondition(format!(
            "cusp {} has non-unipotent monodromy",
            j + 1
        )));
    }
    Ok(())
}

pub fn global_dims(rep: &PuncturedSurfaceRep) -> Result<GlobalCohomologyDims> {
    require_valid(rep)?;
    let n = rep.rank() as i64;
    let g = rep.genus() as i64;
    let s = rep.punctures() as i64;
    let per_cusp_kernel_dims = (0..rep.punctures())
        .map(|j| jstar_stalk(rep, j).map(|k| k.dim()))
        .collect::<Result<Vec<_>>>()?;
    let h0 = invariant_subspace(rep).dim();
    let h2 = invariant_subspace(&dual_rep(rep)?).dim();
    let euler = n * (2 - 2 * g - s) + per_cusp_kernel_dims.iter().sum::<usize>() as i64;
    let h1_parabolic = parabolic_h1(rep)?;
    let h1 = h0 as i64 + h2 as i64 - euler;
    if h1 < 0 {
        return Err(Error::Inconsistent {
            h1_euler: h1,
            h1_parabolic: h1_parabolic as i64,
        });
    }
    Ok(GlobalCohomologyDims {
        h0,
        h1: h1 as usize,
        h2,
        euler,
        per_cusp_kernel_dims,
        h1_parabolic,
        consistent: h1 as usize == h1_parabolic,
    })
}

/// Accumulates Fox derivatives: `u(w) = fox * u` with `u` the stacked
/// cocycle values on the free generators.
struct FoxWord {
    prefix: Matrix,
    fox: Matrix,
}

impl FoxWord {
    fn new(n: usize, free: usize) -> Self {
        Self {
            prefix: Matrix::identity(n),
            fox: Matrix::zeros(n, n * free),
        }
    }

    /// Appends `x_idx` (or its inverse): `u(w x) = u(w) + w u(x)`,
    /// `u(x^{-1}) = -x^{-1} u(x)`.
    fn push(&mut self, idx: usize, x: &Matrix, x_inv: &Matrix, inverse: bool) {
        let n = x.rows();
        let block = if inverse {
            &self.prefix * &(-x_inv)
        } else {
            self.prefix.clone()
        };
        for i in 0..n {
            for j in 0..n {
                self.fox[(i, idx * n + j)] += &block[(i, j)];
            }
        }
        self.prefix = &self.prefix * if inverse { x_inv } else { x };
    }
}

fn generator_block(n: usize, free: usize, idx: usize) -> Matrix {
    Matrix::from_fn(n, n * free, |i, j| {
        if j == idx * n + i {
            Scalar::from_int(1)
        } else {
            Scalar::from_int(0)
        }
    })
}

/// Dimension of parabolic `H^1`, with `C_s` eliminated through the relation.
pub fn parabolic_h1(rep: &PuncturedSurfaceRep) -> Result<usize> {
    require_valid(rep)?;
    let n = rep.rank();
    let g = rep.genus();
    let s = rep.punctures();
    let free = 2 * g + s - 1;
    if free == 0 {
        return Ok(0);
    }
    let gens: Vec<Matrix> = rep.free_generators().cloned().collect();
    let invs: Vec<Matrix> = gens
        .iter()
        .map(|m| m.inverse().expect("validated generators are invertible"))
        .collect();

    // P = prod [A_i, B_i] * C_1 ... C_{s-1}, so C_s = P^{-1}
    let mut word = FoxWord::new(n, free);
    for i in 0..g {
        let (a, b) = (2 * i, 2 * i + 1);
        word.push(a, &gens[a], &invs[a], false);
        word.push(b, &gens[b], &invs[b], false);
        word.push(a, &gens[a], &invs[a], true);
        word.push(b, &gens[b], &invs[b], true);
    }
    for j in 0..s - 1 {
        let idx = 2 * g + j;
        word.push(idx, &gens[idx], &invs[idx], false);
    }
    let last = rep.cusp(s - 1)?;
    let last_fox = &(-last) * &word.fox;

    let id = Matrix::identity(n);
    let mut conditions: Option<Matrix> = None;
    for j in 0..s {
        let c = rep.cusp(j)?;
        let fox = if j + 1 == s {
            last_fox.clone()
        } else {
            generator_block(n, free, 2 * g + j)
        };
        // rows annihilating im(C_j - I)
        let annihilator = (c - &id).transpose().null_space();
        if annihilator.is_empty() {
            continue;
        }
        let q = Matrix::from_rows(annihilator).expect("equal lengths");
        let rows = &q * &fox;
        conditions = Some(match conditions {
            Some(acc) => acc.vstack(&rows),
            None => rows,
        });
    }
    let cocycles = n * free - conditions.map_or(0, |m| m.rank());
    let coboundary = gens
        .iter()
        .map(|x| x - &id)
        .reduce(|acc, m| acc.vstack(&m))
        .expect("free > 0");
    Ok(cocycles - coboundary.rank())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspStalk {
    pub kernel_dim: usize,
    pub stalk: [usize; 3],
}

/// Stalk cohomology of the L2 complex at each cusp, from the spectral engine.
pub fn stalk_report(rep: &PuncturedSurfaceRep) -> Result<Vec<CuspStalk>> {
    (0..rep.punctures())
        .map(|j| {
            let n = nilpotent_log(rep.cusp(j)?)?;
            let cert = degeneration_certificate(&FilteredComplexModel::from_nilpotent(&n))?;
            let kernel_dim = jstar_stalk(rep, j)?.dim();
            if cert.stalk_h0 != kernel_dim {
                return Err(Error::Certification(format!(
                    "cusp {}: spectral h0 = {} but dim ker N = {kernel_dim}",
                    j + 1,
                    cert.stalk_h0
                )));
            }
            Ok(CuspStalk {
                kernel_dim,
                stalk: [cert.stalk_h0, cert.stalk_h1, cert.stalk_h2],
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomologyReport {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub euler: i64,
    pub h1_parabolic: usize,
    pub consistent: bool,
    pub cusps: Vec<CuspStalk>,
}

pub fn cohomology_report(rep: &PuncturedSurfaceRep) -> Result<CohomologyReport> {
    let dims = global_dims(rep)?;
    Ok(CohomologyReport {
        h0: dims.h0,
        h1: dims.h1,
        h2: dims.h2,
        euler: dims.euler,
        h1_parabolic: dims.h1_parabolic,
        consistent: dims.consistent,
        cusps: stalk_report(rep)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use StalkDescriptor::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::frac(n, d)
    }

    #[test]
    fn stalk_rows() {
        assert_eq!(
            stalk_row(0),
            StalkCohomologyRow {
                exponent: 0,
                h0: FullV,
                h1: Zero,
                h2: Zero
            }
        );
        assert_eq!(
            stalk_row(-2),
            StalkCohomologyRow {
                exponent: -2,
                h0: FullV,
                h1: DtOverTTensorV,
                h2: Zero
            }
        );
        assert_eq!(
            stalk_row(1),
            StalkCohomologyRow {
                exponent: 1,
                h0: Zero,
                h1: M1Obstruction,
                h2: Zero
            }
        );
        assert_eq!(
            stalk_row(-1),
            StalkCohomologyRow {
                exponent: -1,
                h0: FullV,
                h1: Zero,
                h2: M1Obstruction
            }
        );
        assert_eq!(stalk_row(2).degree(0), Zero);
        assert_eq!(stalk_row(5).degree(3), Zero);
    }

    #[test]
    fn jstar_examples() {
        let rep = PuncturedSurfaceRep::trivial(0, 1, 3).unwrap();
        assert_eq!(jstar_stalk(&rep, 0).unwrap().dim(), 3);

        let j2 = Matrix::from_ints(&[[1, 1], [0, 1]]);
        let rep = PuncturedSurfaceRep::new(0, 2, 2, vec![], vec![j2.clone(), j2.inverse().unwrap()]).unwrap();
        let k = jstar_stalk(&rep, 0).unwrap();
        assert_eq!(k, Subspace::span(2, [vec![q(1, 1), q(0, 1)]]));
        assert!(matches!(
            jstar_stalk(&rep, 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));

        // J_3 ⊕ J_2 unipotent block: kernel of the logarithm is 2-dimensional
        let u = Matrix::block_diag(&[Matrix::from_ints(&[[1, 1, 0], [0, 1, 1], [0, 0, 1]]), j2.clone()]);
        let rep = PuncturedSurfaceRep::new(0, 2, 5, vec![], vec![u.clone(), u.inverse().unwrap()]).unwrap();
        let k = jstar_stalk(&rep, 0).unwrap();
        // oracle: independent null space of U - I
        let oracle = (&u - &Matrix::identity(5)).null_space();
        assert_eq!(k.dim(), oracle.len());
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn global_dims_trivial_genus_two() {
        let rep = PuncturedSurfaceRep::trivial(2, 1, 1).unwrap();
        let d = global_dims(&rep).unwrap();
        assert_eq!((d.h0, d.h1, d.h2, d.euler), (1, 4, 1, -2));
        assert_eq!(d.h1_parabolic, 4);
        assert!(d.consistent);
    }

    #[test]
    fn global_dims_trivial_sphere() {
        let d = global_dims(&PuncturedSurfaceRep::trivial(0, 2, 1).unwrap()).unwrap();
        assert_eq!((d.h0, d.h1, d.h2, d.euler), (1, 0, 1, 2));
        assert_eq!(
            parabolic_h1(&PuncturedSurfaceRep::trivial(0, 3, 1).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn global_dims_diagonal_torus() {
        let rep = PuncturedSurfaceRep::new(
            1,
            1,
            2,
            vec![Matrix::diagonal(&[q(2, 1), q(1, 2)]), Matrix::identity(2)],
            vec![Matrix::identity(2)],
        )
        .unwrap();
        let d = global_dims(&rep).unwrap();
        assert_eq!((d.h0, d.h1, d.h2, d.euler), (0, 0, 0, 0));
        assert_eq!(d.h1_parabolic, 0);
    }

    #[test]
    fn shear_pair_on_sphere() {
        let j2 = Matrix::from_ints(&[[1, 1], [0, 1]]);
        let rep = PuncturedSurfaceRep::new(0, 2, 2, vec![], vec![j2.clone(), j2.inverse().unwrap()]).unwrap();
        let d = global_dims(&rep).unwrap();
        // euler = 2 * 0 + 1 + 1
        assert_eq!(d.euler, 2);
        assert_eq!((d.h0, d.h2), (1, 1));
        assert_eq!(d.h1, 0);
        assert!(d.consistent);
    }

    #[test]
    fn invalid_rep_is_rejected() {
        let c = Matrix::diagonal(&[q(2, 1), q(1, 2)]);
        let rep = PuncturedSurfaceRep::new(0, 2, 2, vec![], vec![c.clone(), c.inverse().unwrap()]).unwrap();
        assert!(matches!(global_dims(&rep), Err(Error::Precondition(_))));
    }

    #[test]
    fn stalk_report_examples() {
        let rep = PuncturedSurfaceRep::trivial(0, 1, 2).unwrap();
        assert_eq!(
            stalk_report(&rep).unwrap(),
            vec![CuspStalk {
                kernel_dim: 2,
                stalk: [2, 0, 0]
            }]
        );
        for size in [2usize, 3] {
            let u = &Matrix::identity(size) + &Matrix::jordan_nilpotent(size);
            let rep = PuncturedSurfaceRep::new(0, 2, size, vec![], vec![u.clone(), u.inverse().unwrap()]).unwrap();
            let report = stalk_report(&rep).unwrap();
            assert_eq!(
                report[0],
                CuspStalk {
                    kernel_dim: 1,
                    stalk: [1, 0, 0]
                }
            );
        }
    }
}
