//! Atlas-style class tables: class names, element orders, class sizes,
//! prime power maps and the action of `Aut(G)` on classes.
//!
//! ```text
//! %classtable L3(2) order 168
//! class 1A order 1 size 1
//! class 2A order 2 size 21
//! ...
//! powermap 2: 1A 1A 3A 2A 7A 7B
//! autgen: (7A 7B)
//! ```
//!
//! A power map is required for every prime up to the largest element order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::automorphisms::{ActionSet, Provenance};
use crate::classes::{class_power_map, conjugacy_classes, ConjugacyClasses};
use crate::group::FiniteGroup;
use crate::kconj::{fuse_classes, FusionPartition, GaloisField, RankReport};
use crate::numtheory::{factorize, gcd, primes_up_to};
use crate::perm::split_cycles;

fn at(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!("line {line}: ")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassDataError {
    #[error("{}{msg}", at(*line))]
    ParseError { line: usize, msg: String },
    #[error("{}power map {p}: {msg}", at(*line))]
    InconsistentPowermap { line: usize, p: u64, msg: String },
    #[error("{}class sizes sum to {sum}, expected {order}", at(*line))]
    SizeMismatch {
        line: usize,
        sum: String,
        order: String,
    },
    #[error("{}autgen: {msg}", at(*line))]
    InconsistentAutgen { line: usize, msg: String },
    #[error("no power map for the prime {p}")]
    MissingPrime { p: u64 },
    #[error("exponent {a} is not a unit modulo {order}")]
    NotCoprime { a: i64, order: u64 },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("explicit group and table disagree:\n{0}")]
    Mismatch(String),
}

type Result<T> = std::result::Result<T, ClassDataError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    pub name: String,
    pub order: BigUint,
    pub names: Vec<String>,
    pub orders: Vec<u64>,
    pub sizes: Vec<BigUint>,
    /// `powermaps[p][c]` is the class of `x^p` for `x` in class `c`.
    pub powermaps: BTreeMap<u64, Vec<usize>>,
    /// Class permutations generating the image of `Aut(G)`.
    pub aut_action: Vec<Vec<usize>>,
}

/// Source line of each part of a parsed table, for error messages.
#[derive(Default)]
struct Lines {
    header: usize,
    powermaps: FxHashMap<u64, usize>,
    autgens: Vec<usize>,
}

fn parse_error(line: usize, msg: impl Into<String>) -> ClassDataError {
    ClassDataError::ParseError {
        line,
        msg: msg.into(),
    }
}

impl ClassTable {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ClassDataError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        text.parse()
    }

    /// Checks every invariant; tables built in code rather than parsed
    /// should pass through here before use.
    pub fn validate(&self) -> Result<()> {
        self.check(&Lines::default())
    }

    fn check(&self, lines: &Lines) -> Result<()> {
        let k = self.len();
        if k == 0 || self.orders.len() != k || self.sizes.len() != k {
            return Err(parse_error(lines.header, "table has no classes"));
        }
        let sum: BigUint = self.sizes.iter().sum();
        if sum != self.order {
            return Err(ClassDataError::SizeMismatch {
                line: lines.header,
                sum: sum.to_string(),
                order: self.order.to_string(),
            });
        }
        for (&p, map) in &self.powermaps {
            let line = lines.powermaps.get(&p).copied().unwrap_or(0);
            let bad = |msg: String| ClassDataError::InconsistentPowermap { line, p, msg };
            if map.len() != k || map.iter().any(|&d| d >= k) {
                return Err(bad(format!("expected {k} class indices")));
            }
            let mut hit = vec![false; k];
            for (c, &d) in map.iter().enumerate() {
                let n = self.orders[c];
                let want = n / gcd(n, p);
                if self.orders[d] != want {
                    return Err(bad(format!(
                        "{} (order {n}) maps to {} of order {}, expected order {want}",
                        self.names[c], self.names[d], self.orders[d]
                    )));
                }
                if !n.is_multiple_of(p) {
                    if self.sizes[d] != self.sizes[c] {
                        return Err(bad(format!(
                            "{} and its image {} have different sizes",
                            self.names[c], self.names[d]
                        )));
                    }
                    if std::mem::replace(&mut hit[d], true) {
                        return Err(bad(format!(
                            "not injective on classes of order prime to {p}: {} is hit twice",
                            self.names[d]
                        )));
                    }
                }
            }
        }
        let max = self.orders.iter().copied().max().unwrap_or(1);
        for p in primes_up_to(max) {
            if !self.powermaps.contains_key(&p) {
                return Err(ClassDataError::MissingPrime { p });
            }
        }
        let maps: Vec<(&u64, &Vec<usize>)> = self.powermaps.iter().collect();
        for (i, &(&p, f)) in maps.iter().enumerate() {
            for &(&q, h) in &maps[i + 1..] {
                if let Some(c) = (0..k).find(|&c| f[h[c]] != h[f[c]]) {
                    let line = lines.powermaps.get(&q).copied().unwrap_or(0);
                    return Err(ClassDataError::InconsistentPowermap {
                        line,
                        p: q,
                        msg: format!("does not commute with power map {p} at {}", self.names[c]),
                    });
                }
            }
        }
        for (i, perm) in self.aut_action.iter().enumerate() {
            let line = lines.autgens.get(i).copied().unwrap_or(0);
            let bad = |msg: String| ClassDataError::InconsistentAutgen { line, msg };
            let mut seen = vec![false; k];
            if perm.len() != k || perm.iter().any(|&d| d >= k || std::mem::replace(&mut seen[d], true)) {
                return Err(bad("not a permutation of the classes".into()));
            }
            for (c, &d) in perm.iter().enumerate() {
                if self.orders[c] != self.orders[d] || self.sizes[c] != self.sizes[d] {
                    return Err(bad(format!(
                        "{} and {} differ in order or size",
                        self.names[c], self.names[d]
                    )));
                }
            }
            for (&p, f) in &self.powermaps {
                if let Some(c) = (0..k).find(|&c| perm[f[c]] != f[perm[c]]) {
                    return Err(bad(format!(
                        "does not commute with power map {p} at {}",
                        self.names[c]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Serializes in the class-data file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("%classtable {} order {}\n", self.name, self.order);
        for c in 0..self.len() {
            let _ = writeln!(
                out,
                "class {} order {} size {}",
                self.names[c], self.orders[c], self.sizes[c]
            );
        }
        for (p, map) in &self.powermaps {
            let names: Vec<&str> = map.iter().map(|&d| self.names[d].as_str()).collect();
            let _ = writeln!(out, "powermap {p}: {}", names.join(" "));
        }
        for perm in &self.aut_action {
            let mut done = vec![false; perm.len()];
            let mut cycles = String::new();
            for start in 0..perm.len() {
                if done[start] || perm[start] == start {
                    continue;
                }
                let mut cyc = Vec::new();
                let mut c = start;
                while !done[c] {
                    done[c] = true;
                    cyc.push(self.names[c].as_str());
                    c = perm[c];
                }
                let _ = write!(cycles, "({})", cyc.join(" "));
            }
            let _ = writeln!(out, "autgen: {}", if cycles.is_empty() { "()" } else { &cycles });
        }
        out
    }
}

impl FromStr for ClassTable {
    type Err = ClassDataError;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = Lines::default();
        let mut table: Option<ClassTable> = None;
        let mut pending_maps: Vec<(usize, u64, Vec<String>)> = Vec::new();
        let mut pending_auts: Vec<(usize, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let words: Vec<&str> = l.split_whitespace().collect();
            if let Some(rest) = l.strip_prefix("%classtable") {
                if table.is_some() {
                    return Err(parse_error(ln, "second %classtable header"));
                }
                let w: Vec<&str> = rest.split_whitespace().collect();
                let (name, order) = match w.as_slice() {
                    [name @ .., "order", n] if !name.is_empty() => (name.join(" "), *n),
                    _ => return Err(parse_error(ln, "expected `%classtable <name> order <N>`")),
                };
                let order = BigUint::from_str(order)
                    .map_err(|_| parse_error(ln, format!("bad group order {order:?}")))?;
                lines.header = ln;
                table = Some(ClassTable {
                    name,
                    order,
                    names: Vec::new(),
                    orders: Vec::new(),
                    sizes: Vec::new(),
                    powermaps: BTreeMap::new(),
                    aut_action: Vec::new(),
                });
                continue;
            }
            let t = table
                .as_mut()
                .ok_or_else(|| parse_error(ln, "expected `%classtable` header first"))?;
            match words[0] {
                "class" => {
                    let [_, name, "order", n, "size", s] = words.as_slice() else {
                        return Err(parse_error(ln, "expected `class <name> order <n> size <s>`"));
                    };
                    if t.names.iter().any(|x| x == name) {
                        return Err(parse_error(ln, format!("duplicate class {name}")));
                    }
                    let n: u64 = n
                        .parse()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| parse_error(ln, format!("bad element order {n:?}")))?;
                    let s = BigUint::from_str(s)
                        .map_err(|_| parse_error(ln, format!("bad class size {s:?}")))?;
                    t.names.push(name.to_string());
                    t.orders.push(n);
                    t.sizes.push(s);
                }
                "powermap" => {
                    let head = words.get(1).and_then(|w| w.strip_suffix(':'));
                    let p: u64 = head
                        .and_then(|p| p.parse().ok())
                        .filter(|&p| crate::numtheory::is_prime(p))
                        .ok_or_else(|| parse_error(ln, "expected `powermap <prime>: <classes>`"))?;
                    if lines.powermaps.insert(p, ln).is_some() {
                        return Err(parse_error(ln, format!("duplicate power map {p}")));
                    }
                    pending_maps.push((ln, p, words[2..].iter().map(|w| w.to_string()).collect()));
                }
                _ if l.starts_with("autgen:") => {
                    pending_auts.push((ln, l["autgen:".len()..].to_string()));
                }
                other => return Err(parse_error(ln, format!("unknown directive {other:?}"))),
            }
        }
        let mut t = table.ok_or_else(|| parse_error(1, "missing `%classtable` header"))?;
        let index: FxHashMap<&str, usize> =
            t.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let lookup = |ln: usize, name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| parse_error(ln, format!("unknown class {name:?}")))
        };
        let k = t.names.len();
        for (ln, p, names) in pending_maps {
            if names.len() != k {
                return Err(ClassDataError::InconsistentPowermap {
                    line: ln,
                    p,
                    msg: format!("{} entries for {k} classes", names.len()),
                });
            }
            let map = names.iter().map(|n| lookup(ln, n)).collect::<Result<Vec<_>>>()?;
            t.powermaps.insert(p, map);
        }
        for (ln, body) in pending_auts {
            let cycles = split_cycles(&body).map_err(|e| parse_error(ln, e.to_string()))?;
            let mut perm: Vec<usize> = (0..k).collect();
            let mut moved = vec![false; k];
            for cyc in cycles {
                let ids = cyc.iter().map(|n| lookup(ln, n)).collect::<Result<Vec<_>>>()?;
                for (j, &c) in ids.iter().enumerate() {
                    if std::mem::replace(&mut moved[c], true) {
                        return Err(parse_error(ln, format!("class {} repeated", t.names[c])));
                    }
                    perm[c] = ids[(j + 1) % ids.len()];
                }
            }
            t.aut_action.push(perm);
            lines.autgens.push(ln);
        }
        t.check(&lines)?;
        Ok(t)
    }
}

/// Class of `x^a` for `x` in class `c`, built from the prime power maps.
pub fn power_class(t: &ClassTable, c: usize, a: i64) -> Result<usize> {
    let n = t.orders[c];
    let r = a.rem_euclid(n as i64) as u64;
    if n == 1 {
        return Ok(c);
    }
    if gcd(r, n) != 1 {
        return Err(ClassDataError::NotCoprime { a, order: n });
    }
    let mut d = c;
    for (p, e) in factorize(r) {
        let map = t.powermaps.get(&p).ok_or(ClassDataError::MissingPrime { p })?;
        for _ in 0..e {
            d = map[d];
        }
    }
    Ok(d)
}

fn table_partition(t: &ClassTable, perms: &[Vec<usize>], k: GaloisField) -> FusionPartition {
    let power = |c: usize, a: u64| power_class(t, c, a as i64).expect("validated table");
    fuse_classes(&t.orders, &power, perms, k, Provenance::ClassData)
}

/// Partitions of the classes under Inn and under the table's Aut action,
/// for each of C, R, Q.
pub fn table_partitions(t: &ClassTable) -> Result<[[FusionPartition; 3]; 2]> {
    t.validate()?;
    let level = |perms: &[Vec<usize>]| GaloisField::ALL.map(|k| table_partition(t, perms, k));
    Ok([level(&[]), level(&t.aut_action)])
}

/// `N_G` and Bass's rank from class data alone. Without `autgen` lines the
/// Aut columns repeat the Inn ones.
pub fn rank_report_from_table(t: &ClassTable) -> Result<RankReport> {
    let [inn, aut] = table_partitions(t)?;
    Ok(report(&t.name, &t.order.to_string(), &inn, &aut))
}

fn report(label: &str, order: &str, inn: &[FusionPartition; 3], aut: &[FusionPartition; 3]) -> RankReport {
    let count = |ps: &[FusionPartition; 3], k: GaloisField| {
        ps.iter().find(|p| p.field == k).unwrap().num_blocks()
    };
    RankReport::from_counts(
        label,
        order,
        count(aut, GaloisField::C),
        count(aut, GaloisField::R),
        count(aut, GaloisField::Q),
        count(inn, GaloisField::R),
        count(inn, GaloisField::Q),
        Provenance::ClassData,
    )
}

/// Exports the class data of an explicit group. Inner automorphisms act
/// trivially on classes and are dropped from the action.
pub fn from_group(g: &FiniteGroup, classes: &ConjugacyClasses, a: &ActionSet) -> ClassTable {
    let max = classes.class_order.iter().copied().max().unwrap_or(1);
    let powermaps = primes_up_to(max)
        .into_iter()
        .map(|p| (p, class_power_map(g, classes, p as i64)))
        .collect();
    let mut aut_action: Vec<Vec<usize>> = Vec::new();
    for perm in a.class_permutations(classes) {
        if perm.iter().enumerate().any(|(i, &j)| i != j) && !aut_action.contains(&perm) {
            aut_action.push(perm);
        }
    }
    ClassTable {
        name: g.label().to_string(),
        order: BigUint::from(g.order()),
        names: classes.names(),
        orders: classes.class_order.clone(),
        sizes: classes.sizes.iter().map(|&s| BigUint::from(s)).collect(),
        powermaps,
        aut_action,
    }
}

/// Reports from both backends, known to agree.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub explicit: RankReport,
    pub table: RankReport,
}

/// Compares the explicit group (with action `a`) against a class table of
/// the same group, class by class. The table's classes must be listed in
/// the same order as [`conjugacy_classes`] lists those of `g`.
pub fn cross_validate(g: &FiniteGroup, a: &ActionSet, t: &ClassTable) -> Result<CrossValidation> {
    let classes = conjugacy_classes(g);
    if t.order != BigUint::from(g.order()) || t.len() != classes.len() {
        return Err(ClassDataError::Mismatch(format!(
            "table has order {} with {} classes, group has order {} with {} classes",
            t.order,
            t.len(),
            g.order(),
            classes.len()
        )));
    }
    let mut diff = Vec::new();
    for c in 0..t.len() {
        let size = BigUint::from(classes.sizes[c]);
        if t.orders[c] != classes.class_order[c] || t.sizes[c] != size {
            diff.push(format!(
                "class {}: table has (order {}, size {}), group has (order {}, size {})",
                t.names[c], t.orders[c], t.sizes[c], classes.class_order[c], size
            ));
        }
    }
    if !diff.is_empty() {
        return Err(ClassDataError::Mismatch(diff.join("\n")));
    }
    let [t_inn, t_aut] = table_partitions(t)?;
    let inner = crate::automorphisms::inner_automorphisms(g);
    let partitions = |act: &ActionSet| {
        GaloisField::ALL.map(|k| {
            crate::kconj::fusion_partition(g, &classes, act, k)
                .map_err(|e| ClassDataError::Mismatch(e.to_string()))
        })
    };
    let collect = |ps: [Result<FusionPartition>; 3]| -> Result<[FusionPartition; 3]> {
        let [x, y, z] = ps;
        Ok([x?, y?, z?])
    };
    let g_inn = collect(partitions(&inner))?;
    let g_aut = collect(partitions(a))?;
    for (level, gs, ts) in [("Inn", &g_inn, &t_inn), ("Aut", &g_aut, &t_aut)] {
        for (gp, tp) in gs.iter().zip(ts.iter()) {
            let bad: Vec<&str> = (0..t.len())
                .filter(|&c| {
                    (0..t.len()).any(|d| {
                        (gp.block_of[c] == gp.block_of[d]) != (tp.block_of[c] == tp.block_of[d])
                    })
                })
                .map(|c| t.names[c].as_str())
                .collect();
            if !bad.is_empty() {
                diff.push(format!(
                    "{}-{level}: {} blocks explicit, {} in table; classes {}",
                    gp.field,
                    gp.num_blocks(),
                    tp.num_blocks(),
                    bad.join(" ")
                ));
            }
        }
    }
    if !diff.is_empty() {
        return Err(ClassDataError::Mismatch(diff.join("\n")));
    }
    let mut explicit = report(g.label(), &g.order().to_string(), &g_inn, &g_aut);
    explicit.action_provenance = a.provenance();
    Ok(CrossValidation {
        explicit,
        table: report(&t.name, &t.order.to_string(), &t_inn, &t_aut),
    })
}
