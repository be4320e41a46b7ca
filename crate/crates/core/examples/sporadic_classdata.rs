//! Ranks of the sporadic groups from their class tables.

use std::path::Path;

use whrank::classdata::{rank_report_from_table, ClassTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/classdata");
    let mut files: Vec<_> = std::fs::read_dir(&dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    files.sort();
    println!("group\tclasses\trk Wh(G)\tN");
    for f in files {
        let t = ClassTable::load(&f)?;
        let r = rank_report_from_table(&t)?;
        println!("{}\t{}\t{}\t{}", t.name, t.len(), r.bass_rank, r.n);
    }
    Ok(())
}
