//! Backtracking automorphism search on a few small groups.

use std::time::Instant;

use whrank::automorphisms::automorphism_search;
use whrank::io::parse_group;
use whrank::{FamilySpec, DEFAULT_CAP};

const Q8: &str = "%group Q8
%perm 8
gen (1 2 5 6)(3 4 7 8)
gen (1 3 5 7)(2 8 6 4)
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut groups = vec![parse_group(Q8, DEFAULT_CAP)?];
    for s in ["ab:2x2x2", "dih:8", "sym:6", "cpm:13,4,5", "meta:5,5", "sym:7"] {
        groups.push(s.parse::<FamilySpec>()?.build(DEFAULT_CAP)?);
    }
    for g in &groups {
        let t = Instant::now();
        let aut = automorphism_search(g, 1 << 30)?;
        println!(
            "{:<12} |G| = {:>5}  |Aut| = {:>6}  generators = {:>2}  ({:.1?})",
            g.label(),
            g.order(),
            aut.closure_order(g),
            aut.generators().len(),
            t.elapsed()
        );
    }
    Ok(())
}
