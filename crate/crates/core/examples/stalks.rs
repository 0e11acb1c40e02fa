//! Local stalk table by exponent, then the stalk at each cusp of a fixture.

use cusp_coho::cohomology::{stalk_report, stalk_row};
use cusp_coho::document::read_rep;

fn main() -> cusp_coho::Result<()> {
    println!("{:>3}  {:<18} {:<18} {:<18}", "k", "H^0", "H^1", "H^2");
    for k in -4..=4 {
        let row = stalk_row(k);
        println!(
            "{k:>3}  {:<18} {:<18} {:<18}",
            format!("{:?}", row.h0),
            format!("{:?}", row.h1),
            format!("{:?}", row.h2)
        );
    }
    let rep = read_rep(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/shear_pair.json"))?;
    for (j, s) in stalk_report(&rep)?.iter().enumerate() {
        println!("cusp {}: dim ker N = {}, stalk {:?}", j + 1, s.kernel_dim, s.stalk);
    }
    Ok(())
}
