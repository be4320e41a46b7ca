#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use whrank::automorphisms::inner_automorphisms;
use whrank::cli::aut_action;
use whrank::io::load_group;
use whrank::{ActionSet, FamilySpec, FiniteGroup, DEFAULT_CAP};

pub struct Entry {
    pub name: String,
    pub group: FiniteGroup,
    pub family: Option<FamilySpec>,
    pub aut: ActionSet,
    pub inn: ActionSet,
}

pub const FAMILIES: &[&str] = &[
    "cyc:1", "cyc:2", "cyc:5", "cyc:7", "cyc:8", "cyc:9", "cyc:12", "cyc:15", "cyc:16",
    "ab:2x2", "ab:2x4", "ab:2x2x2", "ab:3x3", "ab:2x6", "ab:3x9",
    "dih:3", "dih:4", "dih:5", "dih:6", "dih:7", "dih:8", "dih:10",
    "sym:3", "sym:4", "sym:5", "alt:4", "alt:5",
    "cpm:7,3,2", "cpm:5,4,2", "cpm:11,5,3", "cpm:13,4,5", "cpm:9,6,2", "cpm:10,4,3",
    "cpm:13,6,4", "cpm:7,6,3",
    "meta:2,2", "meta:3,3", "meta:4,2", "meta:5,5",
    "psl:2,4", "psl:2,7", "psl:3,2",
    "prod:cyc:2*sym:3", "prod:cyc:3*dih:4", "prod:cpm:5,4,2*cpm:7,3,2",
];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn entry(name: String, group: FiniteGroup, family: Option<FamilySpec>) -> Entry {
    let aut = aut_action(&group, family.as_ref(), None, whrank::automorphisms::DEFAULT_BUDGET)
        .unwrap_or_else(|e| panic!("{name}: {e}"));
    let inn = inner_automorphisms(&group);
    Entry {
        name,
        group,
        family,
        aut,
        inn,
    }
}

/// At least 40 groups from every constructor plus the group files.
pub fn corpus() -> &'static [Entry] {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut out: Vec<Entry> = FAMILIES
            .iter()
            .map(|s| {
                let spec: FamilySpec = s.parse().unwrap();
                let g = spec.build(DEFAULT_CAP).unwrap();
                entry(s.to_string(), g, Some(spec))
            })
            .collect();
        for f in ["q8.group", "sl2_3.group"] {
            let g = load_group(&data_dir().join("groups").join(f), DEFAULT_CAP).unwrap();
            out.push(entry(f.to_string(), g, None));
        }
        out
    })
}
