//! The smallest group with a positive invariant: C11 ⋊ C5 of order 55.

use whrank::automorphisms::{automorphism_group, inner_automorphisms, DEFAULT_BUDGET};
use whrank::constructors::semidirect_cyclic;
use whrank::{conjugacy_classes, fusion_partition, rank_report, GaloisField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = semidirect_cyclic(11, 5, 3)?;
    let aut = automorphism_group(&g, DEFAULT_BUDGET)?;
    let inn = inner_automorphisms(&g);
    println!("{}: |G| = {}, |Aut| = {}", g.label(), g.order(), aut.closure_order(&g));

    let classes = conjugacy_classes(&g);
    let names = classes.names();
    for k in [GaloisField::R, GaloisField::Q] {
        let p = fusion_partition(&g, &classes, &aut, k)?;
        let blocks: Vec<String> = p
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&c| names[c].as_str()).collect::<Vec<_>>().join(""))
            .collect();
        println!("{k}-Aut classes: {}", blocks.join(" "));
    }

    let r = rank_report(&g, &aut, &inn)?;
    println!("N = {}, rk Wh(G) = {}", r.n, r.bass_rank);
    Ok(())
}
