//! Weight filtration of a conjugated nilpotent with Jordan type (3, 2, 1).

use cusp_coho::monodromy::NilpotentEndomorphism;
use cusp_coho::weight_filtration::build_weight_filtration;
use cusp_coho::{Matrix, Scalar};

fn main() -> cusp_coho::Result<()> {
    let n = NilpotentEndomorphism::from_jordan_type(&[3, 2, 1]);
    // upper unitriangular change of basis
    let p = Matrix::from_fn(6, 6, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => Scalar::from_int(((i + 2 * j) % 3) as i64 - 1),
        std::cmp::Ordering::Equal => Scalar::from_int(1),
        std::cmp::Ordering::Greater => Scalar::from_int(0),
    });
    let n = n.conjugate(&p)?;
    let wf = build_weight_filtration(&n);
    println!("weight {}", wf.weight());
    for l in -wf.weight()..=wf.weight() {
        println!("W_{l:>2}: dim {}  Gr dim {}", wf.subspace(l).dim(), wf.graded_dim(l));
    }
    for (l, power) in [(2, 2), (1, 1)] {
        println!(
            "N^{power}: Gr_{l} -> Gr_{} has rank {}",
            l - 2 * power as i64,
            wf.induced_rank(power, l)
        );
    }
    println!("frame exponents {:?}", wf.model_frame().exponents);
    Ok(())
}
