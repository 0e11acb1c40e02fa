//! Sup of `‖u‖^2 / ‖f‖^2` over random band-limited data, per `(α, k)`.

use cusp_coho::dbar::sweep::{bound_sweep, SweepConfig};

fn main() -> cusp_coho::Result<()> {
    let config = SweepConfig {
        seed: 2024,
        ..SweepConfig::default()
    };
    let report = bound_sweep(&config)?;
    println!(
        "{:>5} {:>3}  {:>34}  {:>7}  refine  flag",
        "alpha", "k", "sup ratio at eps = 1e-2, 1e-4, 1e-6", "drift"
    );
    for p in &report.pairs {
        let sups: Vec<String> = p.sup_ratio.iter().map(|s| format!("{s:10.4}")).collect();
        println!(
            "{:>5} {:>3}  {}  {:>7.3}  {:>6}  {}",
            p.alpha,
            p.k,
            sups.join(" "),
            p.drift,
            p.refinement_non_increasing,
            p.flagged
        );
    }
    Ok(())
}
