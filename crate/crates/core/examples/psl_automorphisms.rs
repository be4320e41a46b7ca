//! PSL_n(q) with Aut generated by inner, diagonal, field and graph
//! automorphisms, and the resulting ranks.

use whrank::automorphisms::inner_automorphisms;
use whrank::constructors::{psl, psl_aut_action};
use whrank::kconj::lnq_criteria;
use whrank::{rank_report, DEFAULT_CAP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, q) in [(2, 7), (2, 8), (2, 9), (2, 11), (2, 13), (2, 27), (3, 3), (3, 4)] {
        let g = psl(n, q, DEFAULT_CAP)?;
        let aut = psl_aut_action(n, q, &g)?;
        let out = aut.closure_order(&g) / inner_automorphisms(&g).known_order().unwrap();
        let r = rank_report(&g, &aut, &inner_automorphisms(&g))?;
        let c = lnq_criteria(n as u64, q)?;
        println!(
            "{:<40} |G| = {:>6}  |Out| = {out:>2}  N = {}  rk = {:>2}  M = {}",
            g.label(),
            g.order(),
            r.n,
            r.bass_rank,
            c.m
        );
    }
    Ok(())
}
