#![allow(dead_code)]

use cusp_coho::monodromy::{NilpotentEndomorphism, PuncturedSurfaceRep};
use cusp_coho::{Matrix, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::frac(n, d)
}

/// A random partition of `n`, largest part first.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// All partitions of `n`, largest part first.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A product of a few elementary matrices with small integer multipliers,
/// with the rows shuffled.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut p = Matrix::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = Scalar::from_int(rng.gen_range(-2..=2));
        let mut e = Matrix::identity(n);
        e[(i, j)] = c;
        p = &p * &e;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Matrix::from_fn(n, n, |i, j| p[(order[i], j)].clone())
}

/// A nilpotent matrix of random Jordan type in a random basis.
pub fn random_nilpotent<R: Rng>(rng: &mut R, n: usize) -> (Vec<usize>, NilpotentEndomorphism) {
    let sizes = random_partition(rng, n);
    let n0 = NilpotentEndomorphism::from_jordan_type(&sizes);
    let p = random_invertible(rng, n);
    (sizes, n0.conjugate(&p).expect("invertible"))
}

/// `I + S` conjugated, with `S` strictly upper triangular with entries in `{-2..2}/{1,2}`.
pub fn random_unipotent<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let s = Matrix::from_fn(n, n, |i, j| {
        if j > i {
            q(rng.gen_range(-2..=2), rng.gen_range(1..=2))
        } else {
            Scalar::from_int(0)
        }
    });
    let u = &Matrix::identity(n) + &s;
    let p = random_invertible(rng, n);
    &(&p * &u) * &p.inverse().expect("invertible")
}

/// Sphere with two cusps `U` and `U^{-1}`.
pub fn sphere_pair(u: &Matrix) -> PuncturedSurfaceRep {
    PuncturedSurfaceRep::new(
        0,
        2,
        u.rows(),
        vec![],
        vec![u.clone(), u.inverse().expect("invertible")],
    )
    .expect("well formed")
}

/// A rank-one representation: scalar handle images, trivial cusps.
pub fn rank_one(genus: usize, punctures: usize, handles: &[Scalar]) -> PuncturedSurfaceRep {
    PuncturedSurfaceRep::new(
        genus,
        punctures,
        1,
        handles
            .iter()
            .map(|x| Matrix::diagonal(std::slice::from_ref(x)))
            .collect(),
        vec![Matrix::identity(1); punctures],
    )
    .expect("well formed")
}
