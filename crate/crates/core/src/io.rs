//! Text formats for groups and automorphism lists.
//!
//! Group files:
//!
//! ```text
//! %group S3
//! %perm 3
//! gen (1 2)
//! gen (1 2 3)
//! ```
//!
//! or `%cayley <n>` followed by `n` rows of `n` indices. Automorphism files
//! are `%aut <name>` followed by `map i_0 .. i_(n-1)` lines. Blank lines and
//! `#` comments are ignored everywhere.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::automorphisms::GroupMap;
use crate::group::{Backing, FiniteGroup, GroupError};
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with comments stripped, paired with 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = match l.find('#') {
            Some(p) => &l[..p],
            None => l,
        }
        .trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn read_to_string(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_group(text: &str, cap: usize) -> Result<FiniteGroup, FormatError> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty group file"))?;
    let name = head
        .strip_prefix("%group")
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .ok_or_else(|| parse_err(ln, "expected `%group <name>`"))?
        .to_string();
    let (ln, kind) = lines
        .next()
        .ok_or_else(|| parse_err(ln, "missing `%perm` or `%cayley` line"))?;
    let mut words = kind.split_whitespace();
    let tag = words.next().unwrap_or("");
    let size: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| parse_err(ln, format!("expected `{tag} <size>`")))?;
    if words.next().is_some() {
        return Err(parse_err(ln, "trailing text"));
    }
    let g = match tag {
        "%perm" => {
            let mut gens = Vec::new();
            for (ln, l) in lines {
                let body = l
                    .strip_prefix("gen")
                    .ok_or_else(|| parse_err(ln, "expected `gen <cycles>`"))?;
                let p = Permutation::parse_cycles(body, size).map_err(|e| {
                    FormatError::Group(GroupError::InvalidPermutation {
                        index: gens.len(),
                        reason: format!("line {ln}: {e}"),
                    })
                })?;
                gens.push(p);
            }
            if gens.is_empty() {
                return Err(GroupError::NoGenerators.into());
            }
            FiniteGroup::from_permutation_generators(&gens, cap)?
        }
        "%cayley" => {
            if size > cap {
                return Err(GroupError::CapExceeded(cap).into());
            }
            let mut rows = Vec::with_capacity(size);
            for (ln, l) in lines {
                let row: Vec<usize> = l
                    .split_whitespace()
                    .map(|w| w.parse().map_err(|_| parse_err(ln, format!("bad index {w:?}"))))
                    .collect::<Result<_, _>>()?;
                if row.len() != size {
                    return Err(parse_err(
                        ln,
                        format!("row has {} entries, expected {size}", row.len()),
                    ));
                }
                rows.push(row);
            }
            if rows.len() != size {
                return Err(parse_err(
                    ln,
                    format!("expected {size} table rows, found {}", rows.len()),
                ));
            }
            FiniteGroup::from_cayley_table(&rows)?
        }
        other => return Err(parse_err(ln, format!("unknown section {other:?}"))),
    };
    Ok(g.with_label(name))
}

pub fn load_group(path: &Path, cap: usize) -> Result<FiniteGroup, FormatError> {
    let text = read_to_string(path)?;
    parse_group(&text, cap).map_err(|e| match e {
        FormatError::Parse { line, msg } => FormatError::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

/// Writes a group file: permutation generators when available, otherwise
/// the Cayley table.
pub fn format_group(g: &FiniteGroup, name: &str) -> String {
    let mut out = format!("%group {name}\n");
    match g.backing() {
        Backing::Permutation { degree, .. } => {
            let _ = writeln!(out, "%perm {degree}");
            for s in g.generators() {
                let _ = writeln!(out, "gen {}", g.permutation(s).unwrap());
            }
        }
        _ => {
            let _ = writeln!(out, "%cayley {}", g.order());
            for row in g.cayley_rows() {
                let cells: Vec<String> = row.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
    }
    out
}

/// Parses an automorphism file against `g`, checking only the shape of
/// each map; validation happens when building an action.
pub fn parse_aut(text: &str, g: &FiniteGroup) -> Result<(String, Vec<GroupMap>), FormatError> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty automorphism file"))?;
    let name = head
        .strip_prefix("%aut")
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .ok_or_else(|| parse_err(ln, "expected `%aut <groupname>`"))?
        .to_string();
    let mut maps = Vec::new();
    for (ln, l) in lines {
        let body = l
            .strip_prefix("map")
            .ok_or_else(|| parse_err(ln, "expected `map i1 .. in`"))?;
        let images: Vec<u32> = body
            .split_whitespace()
            .map(|w| match w.parse::<u32>() {
                Ok(x) if (x as usize) < g.order() => Ok(x),
                _ => Err(parse_err(ln, format!("bad image {w:?}"))),
            })
            .collect::<Result<_, _>>()?;
        if images.len() != g.order() {
            return Err(parse_err(
                ln,
                format!("map has {} images, group has {} elements", images.len(), g.order()),
            ));
        }
        maps.push(GroupMap { images });
    }
    Ok((name, maps))
}

pub fn format_aut(name: &str, maps: &[GroupMap]) -> String {
    let mut out = format!("%aut {name}\n");
    for f in maps {
        let cells: Vec<String> = f.images.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "map {}", cells.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = "# symmetric group\n%group S3\n%perm 3\n\ngen (1 2)   # a transposition\ngen (1 2 3)\n";

    #[test]
    fn perm_file() {
        let g = parse_group(S3, 100).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.label(), "S3");
        let again = parse_group(&format_group(&g, "S3"), 100).unwrap();
        assert_eq!(again.cayley_rows(), g.cayley_rows());
    }

    #[test]
    fn cayley_file_round_trip() {
        let g = crate::constructors::semidirect_cyclic(7, 3, 2).unwrap();
        let text = format_group(&g, "F21");
        assert!(text.starts_with("%group F21\n%cayley 21\n"));
        let back = parse_group(&text, 100).unwrap();
        assert_eq!(back.cayley_rows(), g.cayley_rows());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "%group X\n%perm 3\ngen (1 2)\nfoo\n";
        match parse_group(bad, 10) {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let bad = "%group X\n%cayley 2\n0 1\n1\n";
        assert!(matches!(
            parse_group(bad, 10),
            Err(FormatError::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_group("%group X\n%perm 3\ngen (1 4)\n", 10),
            Err(FormatError::Group(GroupError::InvalidPermutation { .. }))
        ));
        assert!(matches!(parse_group("%perm 3\n", 10), Err(FormatError::Parse { line: 1, .. })));
    }

    #[test]
    fn aut_file() {
        let g = parse_group(S3, 100).unwrap();
        let id = GroupMap::identity(6);
        let text = format_aut("S3", std::slice::from_ref(&id));
        let (name, maps) = parse_aut(&text, &g).unwrap();
        assert_eq!(name, "S3");
        assert_eq!(maps, vec![id]);
        assert!(parse_aut("%aut S3\nmap 0 1 2\n", &g).is_err());
    }
}
