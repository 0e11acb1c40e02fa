//! Reads a representation, validates it and prints the logarithm of each cusp.

use cusp_coho::document::read_rep;
use cusp_coho::monodromy::{nilpotent_log, validate};

fn main() -> cusp_coho::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/jordan3_pair.json").to_string());
    let rep = read_rep(&path)?;
    let report = validate(&rep);
    println!(
        "genus {} punctures {} rank {}",
        rep.genus(),
        rep.punctures(),
        rep.rank()
    );
    println!("valid: {}", report.is_valid());
    for (j, c) in rep.cusp_matrices().iter().enumerate() {
        match nilpotent_log(c) {
            Ok(n) => {
                println!("N_{} (nilpotency {}):", j + 1, n.nilpotency_index());
                for row in n.matrix().to_rows() {
                    println!(
                        "  [{}]",
                        row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                    );
                }
            }
            Err(e) => println!("cusp {}: {e}", j + 1),
        }
    }
    Ok(())
}
