//! K-A-conjugacy for `K` in {Q, R, C} and the two rank invariants.
//!
//! Elements `g`, `h` of order `n` are K-A-conjugate when `g` lies in the
//! A-orbit of `h^a` for some `a` in the image of `Gal(K(μ_n)/K)` in
//! `(Z/n)^x`. The rank of `Q ⊗_{ZA} Wh(G)` is the number of R-A-classes
//! minus the number of Q-A-classes.

use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphisms::{ActionSet, Provenance};
use crate::classes::{conjugacy_classes, ConjugacyClasses};
use crate::group::FiniteGroup;
use crate::numtheory::{divisors, gcd, phi, prime_power, units_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KconjError {
    #[error("action does not contain Inn(G)")]
    InnerNotContained,
    #[error("{0} is not a prime power")]
    BadPrimePower(u64),
}

/// Base field `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaloisField {
    Q,
    R,
    C,
}

impl GaloisField {
    pub const ALL: [GaloisField; 3] = [GaloisField::Q, GaloisField::R, GaloisField::C];
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GaloisField::Q => "Q",
            GaloisField::R => "R",
            GaloisField::C => "C",
        })
    }
}

/// `Gal(K(μ_n)/K)` as residues mod `n`: all units for Q, `{1, n-1}` for R
/// when `n >= 3`, and `{1}` otherwise.
pub fn galois_exponents(k: GaloisField, n: u64) -> Vec<u64> {
    match k {
        GaloisField::Q => units_mod(n),
        GaloisField::R if n >= 3 => vec![1, n - 1],
        _ => vec![1],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Element,
    Class,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionPartition {
    pub level: Level,
    pub field: GaloisField,
    pub provenance: Provenance,
    /// Block of each index; blocks are numbered by their least member.
    pub block_of: Vec<u32>,
}

impl FusionPartition {
    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    /// Members of each block, ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(i);
        }
        out
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &FusionPartition) -> bool {
        let mut image = vec![u32::MAX; self.num_blocks()];
        self.block_of
            .iter()
            .zip(&coarser.block_of)
            .all(|(&b, &c)| {
                let slot = &mut image[b as usize];
                if *slot == u32::MAX {
                    *slot = c;
                }
                *slot == c
            })
    }
}

/// Union-find over `k` items, then relabel blocks by least member.
fn close(
    k: usize,
    orders: &[u64],
    power: &dyn Fn(usize, u64) -> usize,
    perms: &[Vec<usize>],
    field: GaloisField,
) -> Vec<u32> {
    let mut uf = UnionFind::<usize>::new(k);
    for c in 0..k {
        for a in galois_exponents(field, orders[c]) {
            if a != 1 {
                uf.union(c, power(c, a));
            }
        }
        for p in perms {
            uf.union(c, p[c]);
        }
    }
    let roots: Vec<usize> = (0..k).map(|c| uf.find_mut(c)).collect();
    let mut label = vec![u32::MAX; k];
    let mut next = 0;
    roots
        .iter()
        .map(|&r| {
            if label[r] == u32::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect()
}

/// Class-level fusion for data given as class orders, a power function and
/// class permutations. Shared by explicit groups and class tables.
pub fn fuse_classes(
    orders: &[u64],
    power: &dyn Fn(usize, u64) -> usize,
    perms: &[Vec<usize>],
    field: GaloisField,
    provenance: Provenance,
) -> FusionPartition {
    FusionPartition {
        level: Level::Class,
        field,
        provenance,
        block_of: close(orders.len(), orders, power, perms, field),
    }
}

/// K-A-conjugacy classes of `G` as a partition of its conjugacy classes.
pub fn fusion_partition(
    g: &FiniteGroup,
    classes: &ConjugacyClasses,
    a: &ActionSet,
    k: GaloisField,
) -> Result<FusionPartition, KconjError> {
    if !a.contains_inner() {
        return Err(KconjError::InnerNotContained);
    }
    let perms = a.class_permutations(classes);
    let power = |c: usize, e: u64| classes.class_of[g.pow(classes.representatives[c], e)] as usize;
    Ok(fuse_classes(&classes.class_order, &power, &perms, k, a.provenance()))
}

/// The same partition computed on elements directly, without using
/// conjugacy classes. Quadratic in spirit; a reference for small groups.
pub fn fusion_partition_elements(
    g: &FiniteGroup,
    a: &ActionSet,
    k: GaloisField,
) -> Result<FusionPartition, KconjError> {
    if !a.contains_inner() {
        return Err(KconjError::InnerNotContained);
    }
    let n = g.order();
    let orders: Vec<u64> = (0..n).map(|x| g.element_order(x)).collect();
    let perms: Vec<Vec<usize>> = a
        .generators()
        .iter()
        .map(|f| f.images.iter().map(|&y| y as usize).collect())
        .collect();
    let power = |x: usize, e: u64| g.pow(x, e);
    Ok(FusionPartition {
        level: Level::Element,
        field: k,
        provenance: a.provenance(),
        block_of: close(n, &orders, &power, &perms, k),
    })
}

/// Class counts and the two ranks for one group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub label: String,
    pub order: serde_json::Number,
    #[serde(rename = "classes_C")]
    pub classes_c: usize,
    #[serde(rename = "classes_R_aut")]
    pub classes_r_aut: usize,
    #[serde(rename = "classes_Q_aut")]
    pub classes_q_aut: usize,
    #[serde(rename = "classes_R_inn")]
    pub classes_r_inn: usize,
    #[serde(rename = "classes_Q_inn")]
    pub classes_q_inn: usize,
    #[serde(rename = "N")]
    pub n: i64,
    pub bass_rank: i64,
    pub action_provenance: Provenance,
}

pub const TSV_HEADER: &str = "label\torder\tclasses_C\tclasses_R_aut\tclasses_Q_aut\t\
                              classes_R_inn\tclasses_Q_inn\tN\tbass_rank\taction_provenance";

impl RankReport {
    /// Builds a report from the five counts; `classes_c` is the number of
    /// C-A classes for the larger action.
    #[allow(clippy::too_many_arguments)]
    pub fn from_counts(
        label: &str,
        order: &str,
        classes_c: usize,
        r_aut: usize,
        q_aut: usize,
        r_inn: usize,
        q_inn: usize,
        provenance: Provenance,
    ) -> Self {
        RankReport {
            label: label.to_string(),
            order: serde_json::Number::from_str(order).expect("decimal order"),
            classes_c,
            classes_r_aut: r_aut,
            classes_q_aut: q_aut,
            classes_r_inn: r_inn,
            classes_q_inn: q_inn,
            n: r_aut as i64 - q_aut as i64,
            bass_rank: r_inn as i64 - q_inn as i64,
            action_provenance: provenance,
        }
    }

    pub fn to_tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.label,
            self.order,
            self.classes_c,
            self.classes_r_aut,
            self.classes_q_aut,
            self.classes_r_inn,
            self.classes_q_inn,
            self.n,
            self.bass_rank,
            self.action_provenance
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Derived fields agree with the counts.
    pub fn is_consistent(&self) -> bool {
        self.n == self.classes_r_aut as i64 - self.classes_q_aut as i64
            && self.bass_rank == self.classes_r_inn as i64 - self.classes_q_inn as i64
    }
}

/// `N_G` from `aut` and Bass's rank from `inn`.
pub fn rank_report(
    g: &FiniteGroup,
    aut: &ActionSet,
    inn: &ActionSet,
) -> Result<RankReport, KconjError> {
    let classes = conjugacy_classes(g);
    rank_report_with_classes(g, &classes, aut, inn)
}

pub fn rank_report_with_classes(
    g: &FiniteGroup,
    classes: &ConjugacyClasses,
    aut: &ActionSet,
    inn: &ActionSet,
) -> Result<RankReport, KconjError> {
    let count = |a: &ActionSet, k| fusion_partition(g, classes, a, k).map(|p| p.num_blocks());
    Ok(RankReport::from_counts(
        g.label(),
        &g.order().to_string(),
        count(aut, GaloisField::C)?,
        count(aut, GaloisField::R)?,
        count(aut, GaloisField::Q)?,
        count(inn, GaloisField::R)?,
        count(inn, GaloisField::Q)?,
        aut.provenance(),
    ))
}

/// `sum over d | m, d > 2 of (φ(d)/2 - 1)`.
pub fn divisor_sum_formula(m: u64) -> i64 {
    divisors(m)
        .into_iter()
        .filter(|&d| d > 2)
        .map(|d| phi(d) as i64 / 2 - 1)
        .sum()
}

/// Sufficient condition for `N > 0` on `meta(q, r)`: `φ(r) > 4`, or
/// `φ(r) = 4` with `q` odd or `2r | q`.
pub fn metacyclic_criterion(q: u64, r: u64) -> bool {
    let f = phi(r);
    f > 4 || (f == 4 && (q % 2 == 1 || q.is_multiple_of(2 * r)))
}

/// Arithmetic behind the two sufficient conditions for `N > 0` on
/// `PSL_n(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LnqCriteria {
    pub n: u64,
    pub q: u64,
    pub p: u64,
    pub k: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "phi_M")]
    pub phi_m: u64,
    pub two_kn: u64,
    /// `φ(M) > 2k` when `n = 2`, `φ(M) > 2nk` when `n >= 3`.
    pub threshold_ok_1: bool,
    /// `q^{n-1} >= (15/2) k n^2`.
    pub threshold_ok_2: bool,
}

pub fn lnq_criteria(n: u64, q: u64) -> Result<LnqCriteria, KconjError> {
    let (p, k) = prime_power(q).ok_or(KconjError::BadPrimePower(q))?;
    let k = k as u64;
    let qn = (q as u128).pow(n as u32);
    let g = gcd(q - 1, n) as u128;
    let m = ((qn - 1) / ((q as u128 - 1) * g)) as u64;
    let phi_m = phi(m);
    let two_kn = 2 * k * n;
    let threshold_ok_1 = if n == 2 { phi_m > 2 * k } else { phi_m > two_kn };
    let threshold_ok_2 = 2 * (q as u128).pow(n as u32 - 1) >= 15 * (k * n * n) as u128;
    Ok(LnqCriteria {
        n,
        q,
        p,
        k,
        m,
        phi_m,
        two_kn,
        threshold_ok_1,
        threshold_ok_2,
    })
}
