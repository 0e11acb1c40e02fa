//! Pages E_1 through E_3 for a single Jordan block, and the certificate for a sum.

use cusp_coho::monodromy::NilpotentEndomorphism;
use cusp_coho::spectral::{degeneration_certificate, render_page, run_pages, FilteredComplexModel};

fn main() -> cusp_coho::Result<()> {
    let model = FilteredComplexModel::from_nilpotent(&NilpotentEndomorphism::jordan_block(3));
    let run = run_pages(&model)?;
    for page in &run.pages {
        println!("{}", render_page(page));
    }
    let sum = FilteredComplexModel::from_nilpotent(&NilpotentEndomorphism::from_jordan_type(&[4, 2, 2, 1]));
    let cert = degeneration_certificate(&sum)?;
    println!(
        "type {:?}: stalk ({},{},{}) survivors {:?}",
        cert.jordan_type,
        cert.stalk_h0,
        cert.stalk_h1,
        cert.stalk_h2,
        cert.survivor_positions
            .iter()
            .map(|s| (s.p, s.q, s.dim))
            .collect::<Vec<_>>()
    );
    Ok(())
}
