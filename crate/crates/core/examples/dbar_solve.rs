//! Solves the radial equation for a random smooth datum and reports the
//! weighted norms and residual under grid refinement.

use cusp_coho::dbar::{
    norm_form01, norm_section, residual, solve, FormDegree, ProfileForm, RadialGrid, WeightedNormParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cusp_coho::Result<()> {
    let p = WeightedNormParams::new(0.5, 2, 0.5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data = ProfileForm::random(&mut rng, 4, p.a);
    println!(
        "{:>5} {:>14} {:>14} {:>10} {:>12}",
        "level", "|f|^2", "|u|^2", "ratio", "residual"
    );
    for level in 6..=11 {
        let grid = RadialGrid::new(1e-4, p.a, level)?;
        let f = data.sample(&grid, FormDegree::Form01);
        let sol = solve(&f, &p, &grid)?;
        let nf = norm_form01(&f, &p, &grid)?;
        let nu = norm_section(&sol.u, &p, &grid)?;
        println!(
            "{level:>5} {nf:>14.6e} {nu:>14.6e} {:>10.5} {:>12.3e}",
            nu / nf,
            residual(&sol.u, &f, &grid)?
        );
    }
    Ok(())
}
