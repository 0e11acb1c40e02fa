//! The monodromy weight filtration of a nilpotent endomorphism.
//!
//! For nilpotent `N` there is a unique increasing filtration
//! `0 = W_{-k-1} ⊆ W_{-k} ⊆ ... ⊆ W_k = V` with `N W_l ⊆ W_{l-2}` and
//! `N^l : Gr_l -> Gr_{-l}` an isomorphism, where `Gr_l = W_l / W_{l-1}`.
//! It is built here from Jordan strings: a string `v, Nv, ..., N^m v` puts
//! `N^a v` in weight `m - 2a`. Weights are centered at zero.
//!
//! The same filtration is available through [`kernel_image_filtration`],
//! which never looks at Jordan strings and serves as the cross-check.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::monodromy::NilpotentEndomorphism;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct WeightFiltration {
    source: NilpotentEndomorphism,
    weight: i64,
    subspaces: BTreeMap<i64, Subspace>,
    strings: Vec<Vec<Vector>>,
    frame: Matrix,
    frame_inverse: Matrix,
    frame_weights: Vec<i64>,
}

/// Basis adapted to the filtration with the model norm exponents attached:
/// `|e_i|_h^2 ~ |log r|^{exponents[i]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelMetricFrame {
    pub vectors: Vec<Vector>,
    pub exponents: Vec<i64>,
}

impl WeightFiltration {
    pub fn source(&self) -> &NilpotentEndomorphism {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// The largest weight `k` (nilpotency index minus one).
    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// `W_l`, extended by `0` below `-k` and by `V` above `k`.
    pub fn subspace(&self, l: i64) -> Subspace {
        if l < -self.weight {
            Subspace::zero(self.dim())
        } else if l > self.weight {
            Subspace::full(self.dim())
        } else {
            self.subspaces[&l].clone()
        }
    }

    pub fn subspaces(&self) -> &BTreeMap<i64, Subspace> {
        &self.subspaces
    }

    /// Jordan strings, each listed top first: `v, Nv, N^2 v, ...`.
    pub fn strings(&self) -> &[Vec<Vector>] {
        &self.strings
    }

    pub fn graded_dim(&self, l: i64) -> usize {
        self.subspace(l).dim() - self.subspace(l - 1).dim()
    }

    /// `l -> dim Gr_l` for every weight with a nonzero graded piece.
    pub fn graded_dimensions(&self) -> BTreeMap<i64, usize> {
        (-self.weight..=self.weight)
            .map(|l| (l, self.graded_dim(l)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// Rank of the map `Gr_l -> Gr_{l - 2 power}` induced by `N^power`.
    pub fn induced_rank(&self, power: usize, l: i64) -> usize {
        let floor = self.subspace(l - 2 * power as i64 - 1);
        let image = self.subspace(l).image(&self.source.matrix().pow(power));
        image.sum(&floor).dim() - floor.dim()
    }

    /// The smallest `l` with `v ∈ W_l`, read off from string coordinates.
    pub fn vector_weight(&self, v: &[Scalar]) -> Result<i64> {
        if v.len() != self.dim() {
            return Err(Error::Structure(format!(
                "vector of length {} in a {}-dimensional filtration",
                v.len(),
                self.dim()
            )));
        }
        let coords = self.frame_inverse.mul_vec(v);
        coords
            .iter()
            .zip(&self.frame_weights)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, &w)| w)
            .max()
            .ok_or_else(|| Error::Domain("the zero vector has no weight".into()))
    }

    /// Coordinates of `v` in the [`model_frame`](Self::model_frame) basis.
    pub fn frame_coordinates(&self, v: &[Scalar]) -> Vector {
        self.frame_inverse.mul_vec(v)
    }

    /// String vectors ordered bottom to top within each string, with their weights.
    pub fn model_frame(&self) -> ModelMetricFrame {
        ModelMetricFrame {
            vectors: self.frame.columns(),
            exponents: self.frame_weights.clone(),
        }
    }

    pub fn report(&self) -> FiltrationReport {
        FiltrationReport {
            weight: self.weight,
            graded_dims: self.graded_dimensions(),
            strings: self.strings.clone(),
            frame_exponents: self.frame_weights.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationReport {
    pub weight: i64,
    pub graded_dims: BTreeMap<i64, usize>,
    pub strings: Vec<Vec<Vector>>,
    pub frame_exponents: Vec<i64>,
}

/// Jordan strings of `n`, longest first. Within a length, tops are taken
/// greedily from the null-space basis of `N^L` in free-column order.
fn jordan_strings(n: &NilpotentEndomorphism) -> Vec<Vec<Vector>> {
    let dim = n.dim();
    let m = n.matrix();
    let p = n.nilpotency_index();
    let mut chosen = Subspace::zero(dim);
    let mut strings = Vec::new();
    for len in (1..=p).rev() {
        let mut base = Subspace::kernel(&m.pow(len - 1)).sum(&chosen);
        for candidate in m.pow(len).null_space() {
            if base.contains(&candidate) {
                continue;
            }
            let mut string = vec![candidate];
            for _ in 1..len {
                let next = m.mul_vec(string.last().expect("nonempty"));
                string.push(next);
            }
            base = base.sum(&Subspace::span(dim, [string[0].clone()]));
            chosen = chosen.sum(&Subspace::span(dim, string.iter().cloned()));
            strings.push(string);
        }
    }
    debug_assert_eq!(strings.iter().map(Vec::len).sum::<usize>(), dim);
    strings
}

pub fn build_weight_filtration(n: &NilpotentEndomorphism) -> WeightFiltration {
    let dim = n.dim();
    let weight = n.nilpotency_index() as i64 - 1;
    let strings = jordan_strings(n);

    let mut frame_vectors = Vec::with_capacity(dim);
    let mut frame_weights = Vec::with_capacity(dim);
    for string in &strings {
        let m = string.len() as i64 - 1;
        for (a, v) in string.iter().enumerate().rev() {
            frame_vectors.push(v.clone());
            frame_weights.push(m - 2 * a as i64);
        }
    }
    let frame = Matrix::from_columns(dim, &frame_vectors);
    let frame_inverse = frame.inverse().expect("Jordan strings form a basis");

    let subspaces = (-weight..=weight)
        .map(|l| {
            let span = frame_vectors
                .iter()
                .zip(&frame_weights)
                .filter(|(_, &w)| w <= l)
                .map(|(v, _)| v.clone());
            (l, Subspace::span(dim, span))
        })
        .collect();

    WeightFiltration {
        source: n.clone(),
        weight,
        subspaces,
        strings,
        frame,
        frame_inverse,
        frame_weights,
    }
}

/// `W_l = sum over a - b <= l of ker N^{a+1} ∩ im N^b`, for `l` in `[-k, k]`.
pub fn kernel_image_filtration(n: &NilpotentEndomorphism) -> BTreeMap<i64, Subspace> {
    let dim = n.dim();
    let p = n.nilpotency_index();
    let k = p as i64 - 1;
    let powers: Vec<Matrix> = (0..=p).map(|j| n.matrix().pow(j)).collect();
    let kernels: Vec<Subspace> = powers.iter().map(Subspace::kernel).collect();
    let images: Vec<Subspace> = powers.iter().map(Subspace::column_space).collect();
    let pieces: Vec<(i64, Subspace)> = (0..p)
        .flat_map(|a| (0..p).map(move |b| (a, b)))
        .map(|(a, b)| (a as i64 - b as i64, kernels[a + 1].intersection(&images[b])))
        .collect();
    (-k..=k)
        .map(|l| {
            let w = pieces
                .iter()
                .filter(|(d, _)| *d <= l)
                .fold(Subspace::zero(dim), |acc, (_, s)| acc.sum(s));
            (l, w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    /// Membership scan, independent of string coordinates.
    fn weight_by_membership(wf: &WeightFiltration, v: &[Scalar]) -> i64 {
        (-wf.weight()..=wf.weight())
            .find(|&l| wf.subspace(l).contains(v))
            .expect("W_k is everything")
    }

    fn check_axioms(wf: &WeightFiltration) {
        let n = wf.source().matrix();
        let k = wf.weight();
        for l in -k..=k {
            assert!(wf.subspace(l - 1).is_subspace_of(&wf.subspace(l)));
            assert!(wf.subspace(l).image(n).is_subspace_of(&wf.subspace(l - 2)));
        }
        assert_eq!(wf.subspace(k).dim(), wf.dim());
        for l in 0..=k {
            let d = wf.graded_dim(l);
            assert_eq!(wf.induced_rank(l as usize, l), d);
            assert_eq!(wf.graded_dim(-l), d);
        }
    }

    #[test]
    fn zero_endomorphism() {
        let n = NilpotentEndomorphism::new(Matrix::zeros(3, 3)).unwrap();
        let wf = build_weight_filtration(&n);
        assert_eq!(wf.weight(), 0);
        assert_eq!(wf.subspace(0).dim(), 3);
        assert_eq!(wf.strings().len(), 3);
        assert!(wf.strings().iter().all(|s| s.len() == 1));
        assert_eq!(wf.graded_dimensions(), BTreeMap::from([(0, 3)]));
        assert_eq!(wf.model_frame().exponents, vec![0, 0, 0]);
    }

    #[test]
    fn single_shear() {
        let wf = build_weight_filtration(&NilpotentEndomorphism::jordan_block(2));
        assert_eq!(wf.weight(), 1);
        assert_eq!(wf.subspace(-1), Subspace::span(2, [ints(&[1, 0])]));
        assert_eq!(wf.subspace(0), wf.subspace(-1));
        assert_eq!(wf.subspace(1).dim(), 2);
        check_axioms(&wf);

        assert_eq!(wf.vector_weight(&ints(&[1, 0])).unwrap(), -1);
        assert_eq!(wf.vector_weight(&ints(&[0, 1])).unwrap(), 1);
        assert_eq!(wf.vector_weight(&ints(&[1, 1])).unwrap(), 1);
        for v in [ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1]), ints(&[-3, 0])] {
            assert_eq!(wf.vector_weight(&v).unwrap(), weight_by_membership(&wf, &v));
        }
        assert!(matches!(wf.vector_weight(&ints(&[0, 0])), Err(Error::Domain(_))));

        let frame = wf.model_frame();
        assert_eq!(frame.exponents, vec![-1, 1]);
        assert_eq!(frame.vectors, vec![ints(&[1, 0]), ints(&[0, 1])]);
    }

    #[test]
    fn j3_plus_trivial_graded_dims() {
        let wf = build_weight_filtration(&NilpotentEndomorphism::from_jordan_type(&[3, 1]));
        assert_eq!(wf.graded_dimensions(), BTreeMap::from([(-2, 1), (0, 2), (2, 1)]));
        check_axioms(&wf);
    }

    #[test]
    fn graded_dims_of_blocks() {
        for m in 0..6usize {
            let wf = build_weight_filtration(&NilpotentEndomorphism::jordan_block(m + 1));
            let expected: BTreeMap<i64, usize> = (0..=m).map(|a| (m as i64 - 2 * a as i64, 1)).collect();
            assert_eq!(wf.graded_dimensions(), expected);
        }
        let wf = build_weight_filtration(&NilpotentEndomorphism::from_jordan_type(&[2, 2]));
        assert_eq!(wf.graded_dimensions(), BTreeMap::from([(-1, 2), (1, 2)]));
    }

    #[test]
    fn frame_exponents_of_j3() {
        let wf = build_weight_filtration(&NilpotentEndomorphism::jordan_block(3));
        assert_eq!(wf.model_frame().exponents, vec![-2, 0, 2]);
    }

    #[test]
    fn mixed_parity_uses_unit_steps() {
        let wf = build_weight_filtration(&NilpotentEndomorphism::from_jordan_type(&[2, 3]));
        assert_eq!(
            wf.graded_dimensions(),
            BTreeMap::from([(-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1)])
        );
        check_axioms(&wf);
    }

    #[test]
    fn both_constructions_agree_on_small_types() {
        for ty in [vec![1], vec![4], vec![3, 1], vec![2, 2, 1], vec![3, 2], vec![5, 3, 1]] {
            let n = NilpotentEndomorphism::from_jordan_type(&ty);
            let wf = build_weight_filtration(&n);
            assert_eq!(&kernel_image_filtration(&n), wf.subspaces(), "type {ty:?}");
        }
    }
}
