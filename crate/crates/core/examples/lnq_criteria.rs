//! The arithmetic behind the sufficient conditions for N > 0 on PSL_n(q).

use whrank::kconj::lnq_criteria;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        (3, 3), (5, 3), (7, 3), (8, 3), (9, 3), (16, 3), (4, 4), (2, 5),
        (3, 5), (4, 5), (2, 6), (3, 6), (2, 7), (2, 8), (2, 9), (2, 10),
    ];
    println!("q\tn\tM\tphi(M)\t2kn\tcond 1\tcond 2");
    for (q, n) in pairs {
        let c = lnq_criteria(n, q)?;
        println!(
            "{q}\t{n}\t{}\t{}\t{}\t{}\t{}",
            c.m, c.phi_m, c.two_kn, c.threshold_ok_1, c.threshold_ok_2
        );
    }
    Ok(())
}
