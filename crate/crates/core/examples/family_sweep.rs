//! N for C_p ⋊ C_m, least p = 1 mod m, against the divisor sum over m.

use whrank::automorphisms::{automorphism_group, inner_automorphisms, DEFAULT_BUDGET};
use whrank::constructors::{least_faithful_exponent, semidirect_cyclic};
use whrank::kconj::divisor_sum_formula;
use whrank::numtheory::is_prime;
use whrank::rank_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("p\tm\torder\tN\tformula\tbass_rank");
    for m in 2..=16u64 {
        let p = (1..).map(|t| t * m + 1).find(|&p| is_prime(p)).unwrap();
        let k = least_faithful_exponent(p, m).unwrap();
        let g = semidirect_cyclic(p, m, k)?;
        let aut = automorphism_group(&g, DEFAULT_BUDGET)?;
        let r = rank_report(&g, &aut, &inner_automorphisms(&g))?;
        println!("{p}\t{m}\t{}\t{}\t{}\t{}", g.order(), r.n, divisor_sum_formula(m), r.bass_rank);
    }
    Ok(())
}
