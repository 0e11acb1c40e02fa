//! Growth of the constant-mode norm in the excluded case `(α, k) = (0, 1)`.

use cusp_coho::dbar::obstruction::obstruction_demo;
use cusp_coho::dbar::{DEFAULT_A, DEFAULT_EPSILONS, DEFAULT_GRID_LEVEL};

fn main() -> cusp_coho::Result<()> {
    let report = obstruction_demo(DEFAULT_A, &DEFAULT_EPSILONS, DEFAULT_GRID_LEVEL)?;
    println!(
        "{:>8} {:>10} {:>12} {:>12} {:>10}",
        "epsilon", "loglog", "|f|^2", "|u|^2", "u0(eps)"
    );
    for row in &report.rows {
        println!(
            "{:>8.0e} {:>10.4} {:>12.6} {:>12.6} {:>10.5}",
            row.epsilon, row.log_log, row.norm_f, row.norm_u, row.u0_inner
        );
    }
    println!("limit of u0            {:.5}", report.c);
    println!("predicted slope 2πc^2  {:.4}", report.predicted_slope);
    println!("fitted slope           {:.4}", report.fitted_slope);
    println!(
        "relative deviation     {:.3} (fits: {})",
        report.relative_deviation, report.fits_law
    );
    println!(
        "|f|^2 drift            {:.4} (stable: {})",
        report.f_drift, report.f_stable
    );
    println!(
        "control k = 0 ratios   {:?} (bounded: {})",
        report.control.ratios, report.control.bounded
    );
    Ok(())
}
