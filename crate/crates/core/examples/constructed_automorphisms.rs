//! Automorphisms built from an abelian normal subgroup with cyclic
//! quotient, and from a homomorphism into the centre.

use whrank::automorphisms::{
    abelian_normal_power_automorphism, central_shift_automorphism, is_automorphism,
};
use whrank::constructors::semidirect_cyclic;
use whrank::GroupMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // C9 ⋊ C6: a -> a^7 on <a>, b fixed
    let g = semidirect_cyclic(9, 6, 2)?;
    let h: Vec<usize> = (0..9).collect();
    let f = abelian_normal_power_automorphism(&g, &h, 9, 7)?;
    println!("{}: a -> element {}, automorphism: {}", g.label(), f.apply(1), is_automorphism(&g, &f));

    // C5 ⋊ C8 with central b^4: b -> b^5, a fixed
    let g = semidirect_cyclic(5, 8, 2)?;
    let x = g.pow(5, 4);
    let psi = GroupMap::from_images((0..g.order()).map(|e| if (e / 5) % 2 == 1 { x } else { 0 }).collect());
    let f = central_shift_automorphism(&g, &[0, x], &psi)?;
    println!(
        "{}: b -> b^5 is element {} = {}, automorphism: {}",
        g.label(),
        f.apply(5),
        g.pow(5, 5),
        is_automorphism(&g, &f)
    );

    // the exponent must be 1 modulo the index
    match abelian_normal_power_automorphism(&g, &(0..5).collect::<Vec<_>>(), 5, 3) {
        Err(e) => println!("exponent 3 rejected: {e}"),
        Ok(_) => println!("exponent 3 accepted"),
    }
    Ok(())
}
