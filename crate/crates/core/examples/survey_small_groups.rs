//! Writes small groups to a directory of group files and surveys it
//! through the command-line entry point.

use whrank::io::format_group;
use whrank::{FamilySpec, DEFAULT_CAP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("whrank-survey-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let specs = ["cyc:12", "ab:2x6", "dih:6", "alt:4", "cpm:9,6,2", "cpm:10,4,3", "sym:4", "cpm:11,5,3"];
    for s in specs {
        let g = s.parse::<FamilySpec>()?.build(DEFAULT_CAP)?;
        let file = format!("{:03}-{}.group", g.order(), s.replace([':', ','], "_"));
        std::fs::write(dir.join(file), format_group(&g, s))?;
    }
    let code = whrank::cli::run(
        ["whrank", "survey", dir.to_str().unwrap(), "--jobs", "2"],
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::fs::remove_dir_all(&dir)?;
    println!("exit code {code}");
    Ok(())
}
