//! Checks that the model frame is L2-adapted: a sum of frame terms diverges
//! at the puncture exactly when one of its terms does.

use cusp_coho::dbar::adapted::{l2_adapted_check, ADAPTED_LADDER};
use cusp_coho::monodromy::NilpotentEndomorphism;
use cusp_coho::weight_filtration::build_weight_filtration;

fn main() -> cusp_coho::Result<()> {
    let wf = build_weight_filtration(&NilpotentEndomorphism::from_jordan_type(&[3, 2]));
    let frame = wf.model_frame();
    for alpha in [0.0, 0.5] {
        let report = l2_adapted_check(&frame, alpha, 8, &ADAPTED_LADDER, 9, 3)?;
        println!(
            "alpha {alpha}: exponents {:?}, adapted {}",
            report.exponents, report.adapted
        );
        for t in &report.trials {
            println!(
                "  {:<12} terms {:?} sum {} consistent {}",
                t.label, t.term_divergent, t.sum_divergent, t.consistent
            );
        }
    }
    Ok(())
}
