//! Permutations of `{0, .., d-1}` and disjoint-cycle notation.
//!
//! Text uses 1-based points, e.g. `(1 2 3)(4 5)`; commas are accepted as
//! separators too, so GAP-style `(1,2,3)` parses the same way.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("unbalanced parentheses in {0:?}")]
    Unbalanced(String),
    #[error("unexpected text {0:?} outside a cycle")]
    Stray(String),
    #[error("point {point} out of range 1..={degree}")]
    OutOfRange { point: String, degree: usize },
    #[error("point {0} appears more than once")]
    Repeated(String),
    #[error("bad point {0:?}")]
    BadPoint(String),
}

/// A bijection of `{0, .., degree-1}`; `p.image(i)` is where `i` goes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// Wraps an image list, or returns `None` if it is not a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation(images))
    }

    /// Parses disjoint-cycle notation with 1-based points.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, CycleError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in split_cycles(text)? {
            let mut pts = Vec::with_capacity(cycle.len());
            for tok in &cycle {
                let p: usize = tok.parse().map_err(|_| CycleError::BadPoint(tok.clone()))?;
                if p == 0 || p > degree {
                    return Err(CycleError::OutOfRange {
                        point: tok.clone(),
                        degree,
                    });
                }
                if used[p - 1] {
                    return Err(CycleError::Repeated(tok.clone()));
                }
                used[p - 1] = true;
                pts.push(p - 1);
            }
            for (i, &p) in pts.iter().enumerate() {
                images[p] = pts[(i + 1) % pts.len()] as u32;
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x] as usize;
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1, |acc, c| crate::numtheory::lcm(acc, c.len() as u64))
    }

    pub fn into_images(self) -> Vec<u32> {
        self.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// Splits cycle notation into cycles of raw tokens. Used for both numeric
/// points and named points (class names in class-data files).
pub fn split_cycles(text: &str) -> Result<Vec<Vec<String>>, CycleError> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(CycleError::Stray(rest.to_string()));
        };
        let close = body
            .find(')')
            .ok_or_else(|| CycleError::Unbalanced(text.to_string()))?;
        let inner = &body[..close];
        if inner.contains('(') {
            return Err(CycleError::Unbalanced(text.to_string()));
        }
        let toks: Vec<String> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect();
        if !toks.is_empty() {
            out.push(toks);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p = Permutation::parse_cycles("(1 2 3)(4 5)", 6).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3, 5]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(p.order(), 6);
        let q = Permutation::parse_cycles("(1,2,3)(4,5)", 6).unwrap();
        assert_eq!(p, q);
        assert_eq!(Permutation::parse_cycles("()", 3).unwrap(), Permutation::identity(3));
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = Permutation::parse_cycles("(1 2)", 3).unwrap();
        let b = Permutation::parse_cycles("(2 3)", 3).unwrap();
        // b first: 2 -> 3, then a fixes 3
        assert_eq!(a.compose(&b).image(1), 2);
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn rejects_malformed_cycles() {
        assert!(matches!(
            Permutation::parse_cycles("(1 2)(2 3)", 3),
            Err(CycleError::Repeated(_))
        ));
        assert!(matches!(
            Permutation::parse_cycles("(1 4)", 3),
            Err(CycleError::OutOfRange { .. })
        ));
        assert!(matches!(
            Permutation::parse_cycles("(1 2", 3),
            Err(CycleError::Unbalanced(_))
        ));
        assert!(matches!(
            Permutation::parse_cycles("1 2", 3),
            Err(CycleError::Stray(_))
        ));
        assert!(Permutation::from_images(vec![0, 0, 1]).is_none());
    }
}
