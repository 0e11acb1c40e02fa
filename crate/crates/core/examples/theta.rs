//! Boundedness of θ in the model metric, and untwisting of a flat section.

use cusp_coho::dbar::theta::{theta_bound_check, untwist_check, ThetaModel};
use cusp_coho::dbar::RadialGrid;
use cusp_coho::monodromy::NilpotentEndomorphism;
use num::complex::Complex64;

fn main() -> cusp_coho::Result<()> {
    let grid = RadialGrid::new(1e-8, 0.5, 10)?;
    for sizes in [vec![2], vec![3, 1], vec![4, 2]] {
        let n = NilpotentEndomorphism::from_jordan_type(&sizes);
        let report = theta_bound_check(&ThetaModel::new(n.clone()), &grid)?;
        println!(
            "type {sizes:?}: sup |θ|^2/|dt/t|^2 = {:.6}, exponent identity {}, certified {}",
            report.sup_ratio,
            report.exponent_identity,
            report.certified()
        );
        let v: Vec<Complex64> = (0..n.dim()).map(|i| Complex64::new(1.0, i as f64)).collect();
        let u = untwist_check(&n, &v, 0.05, 128)?;
        println!(
            "  untwist: θ variation {:.2e}, monodromy mismatch {:.2e}",
            u.theta_variation, u.monodromy_mismatch
        );
    }
    Ok(())
}
