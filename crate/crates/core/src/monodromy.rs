//! Monodromy data of a punctured surface group and the exact operations on it.
//!
//! A representation of `pi_1` of a genus-`g` surface with `s` punctures is
//! given by matrices `A_1, B_1, ..., A_g, B_g, C_1, ..., C_s` subject to
//! `prod [A_i, B_i] * prod C_j = I`. The cusp matrices `C_j` are the local
//! monodromies and must be unipotent.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuncturedSurfaceRep {
    genus: usize,
    punctures: usize,
    rank: usize,
    handle_pairs: Vec<Matrix>,
    cusp_matrices: Vec<Matrix>,
}

impl PuncturedSurfaceRep {
    /// `handle_pairs` is the flat list `A_1, B_1, ..., A_g, B_g`.
    pub fn new(
        genus: usize,
        punctures: usize,
        rank: usize,
        handle_pairs: Vec<Matrix>,
        cusp_matrices: Vec<Matrix>,
    ) -> Result<Self> {
        if punctures == 0 {
            return Err(Error::Structure("at least one puncture is required".into()));
        }
        if rank == 0 {
            return Err(Error::Structure("rank must be positive".into()));
        }
        if handle_pairs.len() != 2 * genus {
            return Err(Error::Structure(format!(
                "genus {genus} needs {} handle matrices, got {}",
                2 * genus,
                handle_pairs.len()
            )));
        }
        if cusp_matrices.len() != punctures {
            return Err(Error::Structure(format!(
                "{punctures} punctures need {punctures} cusp matrices, got {}",
                cusp_matrices.len()
            )));
        }
        let labelled = handle_pairs
            .iter()
            .enumerate()
            .map(|(i, m)| (handle_label(i), m))
            .chain(
                cusp_matrices
                    .iter()
                    .enumerate()
                    .map(|(j, m)| (format!("C[{}]", j + 1), m)),
            );
        for (label, m) in labelled {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::Structure(format!(
                    "{label} is {}x{}, expected {rank}x{rank}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            genus,
            punctures,
            rank,
            handle_pairs,
            cusp_matrices,
        })
    }

    /// Representation with every generator equal to the identity.
    pub fn trivial(genus: usize, punctures: usize, rank: usize) -> Result<Self> {
        let id = Matrix::identity(rank);
        Self::new(genus, punctures, rank, vec![id.clone(); 2 * genus], vec![id; punctures])
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn punctures(&self) -> usize {
        self.punctures
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn handle_pairs(&self) -> &[Matrix] {
        &self.handle_pairs
    }

    pub fn a(&self, i: usize) -> &Matrix {
        &self.handle_pairs[2 * i]
    }

    pub fn b(&self, i: usize) -> &Matrix {
        &self.handle_pairs[2 * i + 1]
    }

    pub fn cusp_matrices(&self) -> &[Matrix] {
        &self.cusp_matrices
    }

    pub fn cusp(&self, j: usize) -> Result<&Matrix> {
        self.cusp_matrices.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.punctures,
        })
    }

    /// All generators in the order `A_1, B_1, ..., C_1, ..., C_s`.
    pub fn generators(&self) -> impl Iterator<Item = &Matrix> {
        self.handle_pairs.iter().chain(self.cusp_matrices.iter())
    }

    /// The free generators of `pi_1`: everything except `C_s`.
    pub fn free_generators(&self) -> impl Iterator<Item = &Matrix> {
        self.generators().take(2 * self.genus + self.punctures - 1)
    }

    /// `prod [A_i, B_i] * prod C_j`, or `None` if some generator is singular.
    pub fn relation_product(&self) -> Option<Matrix> {
        let mut acc = Matrix::identity(self.rank);
        for i in 0..self.genus {
            acc = &acc * &commutator(self.a(i), self.b(i))?;
        }
        for c in &self.cusp_matrices {
            acc = &acc * c;
        }
        Some(acc)
    }

    /// Block direct sum; both sides must share genus and puncture count.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus || self.punctures != other.punctures {
            return Err(Error::Structure("direct sum needs matching genus and punctures".into()));
        }
        let pair = |x: &Matrix, y: &Matrix| Matrix::block_diag(&[x.clone(), y.clone()]);
        Self::new(
            self.genus,
            self.punctures,
            self.rank + other.rank,
            self.handle_pairs
                .iter()
                .zip(&other.handle_pairs)
                .map(|(x, y)| pair(x, y))
                .collect(),
            self.cusp_matrices
                .iter()
                .zip(&other.cusp_matrices)
                .map(|(x, y)| pair(x, y))
                .collect(),
        )
    }

    /// Conjugates every generator, `M -> P M P^{-1}`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Self> {
        let p_inv = p
            .inverse()
            .ok_or_else(|| Error::Precondition("conjugating matrix is singular".into()))?;
        let conj = |m: &Matrix| &(p * m) * &p_inv;
        Self::new(
            self.genus,
            self.punctures,
            self.rank,
            self.handle_pairs.iter().map(conj).collect(),
            self.cusp_matrices.iter().map(conj).collect(),
        )
    }
}

pub(crate) fn handle_label(i: usize) -> String {
    let letter = if i.is_multiple_of(2) { 'A' } else { 'B' };
    format!("{letter}[{}]", i / 2 + 1)
}

/// `A B A^{-1} B^{-1}`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let a_inv = a.inverse()?;
    let b_inv = b.inverse()?;
    Some(&(&(a * b) * &a_inv) * &b_inv)
}

pub fn is_unipotent(u: &Matrix) -> bool {
    u.is_square() && (u - &Matrix::identity(u.rows())).pow(u.rows()).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub relation_ok: bool,
    pub unipotency_ok: Vec<bool>,
    pub invertibility_ok: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.relation_ok && self.invertibility_ok && self.unipotency_ok.iter().all(|&u| u)
    }

    /// Zero-based indices of cusps whose monodromy is not unipotent.
    pub fn failing_cusps(&self) -> Vec<usize> {
        self.unipotency_ok
            .iter()
            .enumerate()
            .filter(|(_, ok)| !**ok)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Exact check of invertibility, the surface-group relation and cusp unipotency.
///
/// When a generator is singular the relation cannot be evaluated and is
/// reported as failing.
pub fn validate(rep: &PuncturedSurfaceRep) -> ValidationReport {
    let invertibility_ok = rep.generators().all(|m| m.rank() == rep.rank());
    let relation_ok = invertibility_ok && rep.relation_product().is_some_and(|prod| prod.is_identity());
    ValidationReport {
        relation_ok,
        unipotency_ok: rep.cusp_matrices().iter().map(is_unipotent).collect(),
        invertibility_ok,
    }
}

/// A nilpotent matrix together with its nilpotency index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentEndomorphism {
    matrix: Matrix,
    nilpotency_index: usize,
}

impl NilpotentEndomorphism {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::Structure(format!(
                "nilpotent endomorphism needs a nonempty square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let n = matrix.rows();
        let mut power = matrix.clone();
        for p in 1..=n {
            if power.is_zero() {
                return Ok(Self {
                    matrix,
                    nilpotency_index: p,
                });
            }
            power = &power * &matrix;
        }
        Err(Error::Precondition(format!(
            "matrix is not nilpotent: N^{n} != 0 (n = {n})"
        )))
    }

    /// The nilpotent Jordan block of size `n`.
    pub fn jordan_block(n: usize) -> Self {
        Self::new(Matrix::jordan_nilpotent(n)).expect("Jordan blocks are nilpotent")
    }

    /// Direct sum of nilpotent Jordan blocks of the given sizes.
    pub fn from_jordan_type(sizes: &[usize]) -> Self {
        let blocks: Vec<Matrix> = sizes.iter().map(|&s| Matrix::jordan_nilpotent(s)).collect();
        Self::new(Matrix::block_diag(&blocks)).expect("Jordan blocks are nilpotent")
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency_index
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::kernel(&self.matrix)
    }

    /// `P N P^{-1}`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Self> {
        let p_inv = p
            .inverse()
            .ok_or_else(|| Error::Precondition("conjugating matrix is singular".into()))?;
        Self::new(&(p * &self.matrix) * &p_inv)
    }
}

fn unit_fraction(den: &BigInt) -> Scalar {
    Scalar::from_ratio(BigRational::new(BigInt::from(1), den.clone()))
}

/// `log U = sum_{i=1}^{n-1} (-1)^{i+1} (U - I)^i / i`, exact.
pub fn nilpotent_log(u: &Matrix) -> Result<NilpotentEndomorphism> {
    if !u.is_square() || u.rows() == 0 {
        return Err(Error::Structure("logarithm needs a nonempty square matrix".into()));
    }
    let n = u.rows();
    let m = u - &Matrix::identity(n);
    if !m.pow(n).is_zero() {
        return Err(Error::Precondition(format!(
            "matrix is not unipotent: (U - I)^{n} != 0"
        )));
    }
    let mut acc = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for i in 1..n {
        power = &power * &m;
        if power.is_zero() {
            break;
        }
        let mut coeff = unit_fraction(&BigInt::from(i));
        if i % 2 == 0 {
            coeff = -coeff;
        }
        acc = &acc + &power.scale(&coeff);
    }
    NilpotentEndomorphism::new(acc)
}

/// `exp N = sum_{i=0}^{n-1} N^i / i!`, exact.
pub fn unipotent_exp(n: &NilpotentEndomorphism) -> Matrix {
    let dim = n.dim();
    let mut acc = Matrix::identity(dim);
    let mut power = Matrix::identity(dim);
    let mut factorial = BigInt::from(1);
    for i in 1..n.nilpotency_index() {
        power = &power * n.matrix();
        factorial *= BigInt::from(i);
        acc = &acc + &power.scale(&unit_fraction(&factorial));
    }
    acc
}

/// [`unipotent_exp`] on a raw matrix, checking nilpotency first.
pub fn unipotent_exp_matrix(n: &Matrix) -> Result<Matrix> {
    Ok(unipotent_exp(&NilpotentEndomorphism::new(n.clone())?))
}

/// Common fixed space of all generators, the global flat sections.
pub fn invariant_subspace(rep: &PuncturedSurfaceRep) -> Subspace {
    let id = Matrix::identity(rep.rank());
    let stacked = rep
        .generators()
        .map(|m| m - &id)
        .reduce(|acc, m| acc.vstack(&m))
        .expect("at least one generator");
    Subspace::kernel(&stacked)
}

/// Contragredient representation: every generator replaced by its inverse transpose.
pub fn dual_rep(rep: &PuncturedSurfaceRep) -> Result<PuncturedSurfaceRep> {
    let dual = |m: &Matrix| -> Result<Matrix> {
        m.inverse()
            .map(|inv| inv.transpose())
            .ok_or_else(|| Error::Precondition("dual of a singular generator".into()))
    };
    let out = PuncturedSurfaceRep::new(
        rep.genus(),
        rep.punctures(),
        rep.rank(),
        rep.handle_pairs().iter().map(dual).collect::<Result<_>>()?,
        rep.cusp_matrices().iter().map(dual).collect::<Result<_>>()?,
    )?;
    debug_assert_eq!(validate(&out), validate(rep));
    Ok(out)
}

/// Dimension of `{X : XM = MX}` over a raw generator set.
pub fn commutant_dimension_of(generators: &[Matrix]) -> usize {
    let Some(first) = generators.first() else {
        return 0;
    };
    let n = first.rows();
    // unknown X[a][b] sits at column a * n + b
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for m in generators {
        for i in 0..n {
            for j in 0..n {
                let mut eq = vec![Scalar::zero(); n * n];
                for k in 0..n {
                    // (XM)_{ij} = sum_k X_{ik} M_{kj}
                    eq[i * n + k] += &m[(k, j)];
                    // (MX)_{ij} = sum_k M_{ik} X_{kj}
                    eq[k * n + j] -= &m[(i, k)];
                }
                if eq.iter().any(|x| !x.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    if rows.is_empty() {
        return n * n;
    }
    let system = Matrix::from_rows(rows).expect("equal lengths");
    n * n - system.rank()
}

/// Commutant dimension of the representation; 1 certifies irreducibility.
pub fn commutant_dimension(rep: &PuncturedSurfaceRep) -> usize {
    let gens: Vec<Matrix> = rep.generators().cloned().collect();
    commutant_dimension_of(&gens)
}
