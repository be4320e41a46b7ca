//! N vanishes on C5 ⋊ C4 and on F21 but not on their product.

use whrank::automorphisms::{automorphism_group, inner_automorphisms, DEFAULT_BUDGET};
use whrank::{rank_report, FamilySpec, DEFAULT_CAP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for s in ["cpm:5,4,2", "cpm:7,3,2", "prod:cpm:5,4,2*cpm:7,3,2"] {
        let g = s.parse::<FamilySpec>()?.build(DEFAULT_CAP)?;
        let aut = automorphism_group(&g, DEFAULT_BUDGET)?;
        let r = rank_report(&g, &aut, &inner_automorphisms(&g))?;
        println!(
            "{:<26} |G| = {:>3}  |Aut| = {:>3}  N = {}  rk = {}",
            g.label(),
            g.order(),
            aut.closure_order(&g),
            r.n,
            r.bass_rank
        );
    }
    Ok(())
}
