//! Global dimensions for trivial local systems on a few surfaces, plus a
//! non-trivial rank-2 example where the two h^1 computations must agree.

use cusp_coho::cohomology::global_dims;
use cusp_coho::document::read_rep;
use cusp_coho::monodromy::PuncturedSurfaceRep;

fn main() -> cusp_coho::Result<()> {
    for (g, s) in [(0, 1), (1, 1), (2, 3)] {
        let d = global_dims(&PuncturedSurfaceRep::trivial(g, s, 1)?)?;
        println!("trivial g={g} s={s}: ({},{},{}) euler {}", d.h0, d.h1, d.h2, d.euler);
    }
    for name in ["diagonal_torus.json", "jordan3_pair.json"] {
        let rep = read_rep(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR")))?;
        let d = global_dims(&rep)?;
        println!(
            "{name}: ({},{},{}) euler {} parabolic h1 {} consistent {}",
            d.h0, d.h1, d.h2, d.euler, d.h1_parabolic, d.consistent
        );
    }
    Ok(())
}
