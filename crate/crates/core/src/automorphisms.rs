//! Automorphisms as element-index maps: inner automorphisms, the full
//! automorphism group by backtracking, and two explicit constructions.

use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{conjugacy_classes, ConjugacyClasses};
use crate::group::{Backing, FiniteGroup};
use crate::numtheory::gcd;

/// Default number of partial assignments the search may explore.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("map {index} is not an automorphism")]
    NotAutomorphism { index: usize },
    #[error("map has {got} images, group has {expected} elements")]
    WrongLength { got: usize, expected: usize },
    #[error(
        "search budget of {budget} partial assignments exceeded at level {level} of {levels} \
         ({found} automorphisms found so far)"
    )]
    BudgetExceeded {
        budget: u64,
        level: usize,
        levels: usize,
        found: usize,
    },
    #[error("subgroup is not closed under multiplication")]
    NotSubgroup,
    #[error("subgroup is not normal: conjugating {element} by generator {generator} leaves it")]
    NotNormal { element: usize, generator: usize },
    #[error("subgroup is not abelian: {0} and {1} do not commute")]
    NotAbelian(usize, usize),
    #[error("H and x do not generate G: H<x> has {got} of {order} elements")]
    NotGenerating { got: usize, order: usize },
    #[error("bad exponent {a}: {reason}")]
    BadExponent { a: i64, reason: String },
    #[error("subgroup is not central: {0} is not in Z(G)")]
    NotCentral(usize),
    #[error("psi is not a homomorphism into Z: {0}")]
    NotHomomorphism(String),
    #[error("Z is not contained in ker(psi): psi({0}) != 1")]
    KernelCondition(usize),
}

/// A map on element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupMap {
    pub images: Vec<u32>,
}

impl GroupMap {
    pub fn identity(order: usize) -> Self {
        GroupMap {
            images: (0..order as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        GroupMap {
            images: images.into_iter().map(|x| x as u32).collect(),
        }
    }

    /// `x -> s x s^-1`.
    pub fn conjugation(g: &FiniteGroup, s: usize) -> Self {
        GroupMap {
            images: (0..g.order()).map(|x| g.conj(s, x) as u32).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        GroupMap {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> GroupMap {
        let mut inv = vec![0u32; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        GroupMap { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

/// Where an action came from; reported alongside rank results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "Inn")]
    Inn,
    #[serde(rename = "Aut-search")]
    AutSearch,
    #[serde(rename = "Aut-explicit")]
    AutExplicit,
    #[serde(rename = "Aut-file")]
    AutFile,
    #[serde(rename = "class-data")]
    ClassData,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Inn => "Inn",
            Provenance::AutSearch => "Aut-search",
            Provenance::AutExplicit => "Aut-explicit",
            Provenance::AutFile => "Aut-file",
            Provenance::ClassData => "class-data",
        })
    }
}

/// Generators of a group `A` of automorphisms.
#[derive(Debug, Clone)]
pub struct ActionSet {
    generators: Vec<GroupMap>,
    contains_inner: bool,
    provenance: Provenance,
    order: Option<u64>,
}

impl ActionSet {
    /// Validates every generator and decides by closure whether `Inn(G)` is
    /// contained in the generated group.
    pub fn new(
        g: &FiniteGroup,
        generators: Vec<GroupMap>,
        provenance: Provenance,
    ) -> Result<Self, AutError> {
        check_all(g, &generators)?;
        let closure = closure_tuples(g, &generators);
        let gens = g.generators();
        let contains_inner = gens.iter().all(|&s| {
            let t: Vec<u32> = gens.iter().map(|&y| g.conj(s, y) as u32).collect();
            closure.contains(&t)
        });
        Ok(ActionSet {
            generators,
            contains_inner,
            provenance,
            order: Some(closure.len() as u64),
        })
    }

    /// Conjugations by the group generators followed by `extra`.
    pub fn with_inner(
        g: &FiniteGroup,
        extra: Vec<GroupMap>,
        provenance: Provenance,
    ) -> Result<Self, AutError> {
        check_all(g, &extra)?;
        let mut generators: Vec<GroupMap> = g
            .generators()
            .iter()
            .map(|&s| GroupMap::conjugation(g, s))
            .collect();
        generators.extend(extra);
        Ok(ActionSet {
            generators,
            contains_inner: true,
            provenance,
            order: None,
        })
    }

    /// No validation at all; the caller vouches for every field.
    pub fn from_parts_unchecked(
        generators: Vec<GroupMap>,
        contains_inner: bool,
        provenance: Provenance,
        order: Option<u64>,
    ) -> Self {
        ActionSet {
            generators,
            contains_inner,
            provenance,
            order,
        }
    }

    pub fn generators(&self) -> &[GroupMap] {
        &self.generators
    }

    pub fn contains_inner(&self) -> bool {
        self.contains_inner
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn set_provenance(&mut self, p: Provenance) {
        self.provenance = p;
    }

    /// Order of the generated group when it is already known.
    pub fn known_order(&self) -> Option<u64> {
        self.order
    }

    /// Order of the generated group, from the known value or by closure.
    pub fn closure_order(&self, g: &FiniteGroup) -> u64 {
        self.order
            .unwrap_or_else(|| closure_tuples(g, &self.generators).len() as u64)
    }

    /// Permutation of conjugacy classes induced by each generator.
    pub fn class_permutations(&self, classes: &ConjugacyClasses) -> Vec<Vec<usize>> {
        self.generators
            .iter()
            .map(|f| {
                classes
                    .representatives
                    .iter()
                    .map(|&r| classes.class_of[f.apply(r)] as usize)
                    .collect()
            })
            .collect()
    }
}

fn check_all(g: &FiniteGroup, maps: &[GroupMap]) -> Result<(), AutError> {
    for (index, f) in maps.iter().enumerate() {
        if f.images.len() != g.order() {
            return Err(AutError::WrongLength {
                got: f.images.len(),
                expected: g.order(),
            });
        }
        if !is_automorphism(g, f) {
            return Err(AutError::NotAutomorphism { index });
        }
    }
    Ok(())
}

/// Elements of `<maps>` recorded as their images of the group generators.
fn closure_tuples(g: &FiniteGroup, maps: &[GroupMap]) -> FxHashSet<Vec<u32>> {
    let gens = g.generators();
    let start: Vec<u32> = gens.iter().map(|&x| x as u32).collect();
    let mut seen = FxHashSet::default();
    seen.insert(start.clone());
    let mut queue = vec![start];
    while let Some(t) = queue.pop() {
        for f in maps {
            let u: Vec<u32> = t.iter().map(|&x| f.images[x as usize]).collect();
            if seen.insert(u.clone()) {
                queue.push(u);
            }
        }
    }
    seen
}

/// Bijective and `f(x g) = f(x) f(g)` for every element `x` and generator
/// `g`, which forces `f` to be a homomorphism.
pub fn is_automorphism(g: &FiniteGroup, f: &GroupMap) -> bool {
    let n = g.order();
    if f.images.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in &f.images {
        let y = y as usize;
        if y >= n || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    if f.images[0] != 0 {
        return false;
    }
    let gens = g.generators();
    (0..n).all(|x| {
        gens.iter()
            .all(|&s| f.apply(g.mul(x, s)) == g.mul(f.apply(x), f.apply(s)))
    })
}

/// Conjugation by each group generator.
pub fn inner_automorphisms(g: &FiniteGroup) -> ActionSet {
    let mut a = ActionSet::with_inner(g, Vec::new(), Provenance::Inn)
        .expect("conjugations are automorphisms");
    a.order = Some((g.order() / g.center().len()) as u64);
    a
}

/// The full automorphism group, splitting coprime direct products into
/// their factors.
pub fn automorphism_group(g: &FiniteGroup, budget: u64) -> Result<ActionSet, AutError> {
    if let Backing::Product { left, right } = g.backing() {
        if gcd(left.order() as u64, right.order() as u64) == 1 {
            let a = automorphism_group(left, budget)?;
            let b = automorphism_group(right, budget)?;
            return Ok(lift_product(g, right, &a, &b));
        }
    }
    automorphism_search(g, budget)
}

/// `Aut(G1) x Aut(G2)` acting on `G1 x G2`.
pub fn lift_product(
    g: &FiniteGroup,
    right: &FiniteGroup,
    a: &ActionSet,
    b: &ActionSet,
) -> ActionSet {
    let h = right.order();
    let mut generators = Vec::new();
    for f in a.generators() {
        generators.push(GroupMap {
            images: (0..g.order())
                .map(|x| (f.apply(x / h) * h + x % h) as u32)
                .collect(),
        });
    }
    for f in b.generators() {
        generators.push(GroupMap {
            images: (0..g.order())
                .map(|x| ((x / h) * h + f.apply(x % h)) as u32)
                .collect(),
        });
    }
    let order = match (a.known_order(), b.known_order()) {
        (Some(x), Some(y)) => Some(x * y),
        _ => None,
    };
    ActionSet {
        generators,
        contains_inner: a.contains_inner() && b.contains_inner(),
        provenance: if a.provenance() == b.provenance() {
            a.provenance()
        } else {
            Provenance::AutSearch
        },
        order,
    }
}

/// Isomorphism-invariant fingerprint of an element's class.
fn class_profiles(g: &FiniteGroup, classes: &ConjugacyClasses) -> Vec<Vec<(u64, usize)>> {
    classes
        .representatives
        .iter()
        .enumerate()
        .map(|(c, &r)| {
            let n = classes.class_order[c];
            let mut prof: Vec<(u64, usize)> = (1..n)
                .map(|a| {
                    let d = classes.class_of[g.pow(r, a)] as usize;
                    (classes.class_order[d], classes.sizes[d])
                })
                .collect();
            prof.sort_unstable();
            prof.push((n, classes.sizes[c]));
            prof
        })
        .collect()
}

struct Chain {
    seq: Vec<usize>,
    elems: Vec<u32>,
    parent: Vec<u32>,
    via: Vec<u32>,
    /// `elems[..level_end[i]]` is the subgroup generated by `seq[..=i]`.
    level_end: Vec<usize>,
}

impl Chain {
    fn new(g: &FiniteGroup, seq: Vec<usize>) -> Self {
        let n = g.order();
        let mut parent = vec![u32::MAX; n];
        let mut via = vec![0u32; n];
        parent[0] = 0;
        let mut elems = vec![0u32];
        let mut level_end = Vec::with_capacity(seq.len());
        for i in 0..seq.len() {
            let mut head = 0;
            while head < elems.len() {
                let x = elems[head] as usize;
                head += 1;
                for (j, &s) in seq[..=i].iter().enumerate() {
                    let y = g.mul(x, s);
                    if parent[y] == u32::MAX {
                        parent[y] = x as u32;
                        via[y] = j as u32;
                        elems.push(y as u32);
                    }
                }
            }
            level_end.push(elems.len());
        }
        Chain {
            seq,
            elems,
            parent,
            via,
            level_end,
        }
    }

    fn level_start(&self, i: usize) -> usize {
        if i == 0 {
            1
        } else {
            self.level_end[i - 1]
        }
    }
}

struct Search<'a> {
    g: &'a FiniteGroup,
    chain: Chain,
    cands: Vec<Vec<u32>>,
    img: Vec<u32>,
    assigned: Vec<usize>,
    mark: Vec<u32>,
    stamp: u32,
    explored: u64,
    budget: u64,
    found_total: usize,
}

impl Search<'_> {
    /// Extends the map over the next subgroup in the chain and checks it is
    /// an injective homomorphism there.
    fn check_level(&mut self, i: usize) -> Result<bool, AutError> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(AutError::BudgetExceeded {
                budget: self.budget,
                level: i,
                levels: self.chain.seq.len(),
                found: self.found_total,
            });
        }
        let g = self.g;
        let ch = &self.chain;
        let start = ch.level_start(i);
        let end = ch.level_end[i];
        for pos in start..end {
            let x = ch.elems[pos] as usize;
            let p = ch.parent[x] as usize;
            let j = ch.via[x] as usize;
            self.img[x] = g.mul(self.img[p] as usize, self.assigned[j]) as u32;
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.fill(0);
            self.stamp = 1;
        }
        for &x in &ch.elems[..end] {
            let y = self.img[x as usize] as usize;
            if self.mark[y] == self.stamp {
                return Ok(false);
            }
            self.mark[y] = self.stamp;
        }
        for (pos, &x) in ch.elems[..end].iter().enumerate() {
            let x = x as usize;
            let fx = self.img[x] as usize;
            let js = if pos < start { i..i + 1 } else { 0..i + 1 };
            for j in js {
                let xs = g.mul(x, ch.seq[j]);
                if self.img[xs] as usize != g.mul(fx, self.assigned[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn dfs(&mut self, i: usize) -> Result<bool, AutError> {
        if !self.check_level(i)? {
            return Ok(false);
        }
        if i + 1 == self.chain.seq.len() {
            return Ok(true);
        }
        for k in 0..self.cands[i + 1].len() {
            self.assigned[i + 1] = self.cands[i + 1][k] as usize;
            if self.dfs(i + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Orbit of `start` under `maps`, marking members in `inside`.
fn orbit(start: usize, maps: &[&GroupMap], inside: &mut [bool]) -> Vec<usize> {
    let mut out = Vec::new();
    if !inside[start] {
        inside[start] = true;
        out.push(start);
    }
    grow_orbit(&mut out, maps, inside);
    out
}

/// Closes an orbit (whose members are already marked) under `maps`.
fn grow_orbit(out: &mut Vec<usize>, maps: &[&GroupMap], inside: &mut [bool]) {
    let mut head = 0;
    while head < out.len() {
        let x = out[head];
        head += 1;
        for f in maps {
            let y = f.apply(x);
            if !inside[y] {
                inside[y] = true;
                out.push(y);
            }
        }
    }
}

/// Generators of the subgroup `set`, chosen greedily in index order.
fn subgroup_generators(g: &FiniteGroup, set: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    let mut members = vec![0usize];
    let mut gens: Vec<usize> = Vec::new();
    for &c in set {
        if inside[c] {
            continue;
        }
        gens.push(c);
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for &s in &gens {
                let y = g.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
        }
        if members.len() == set.len() {
            break;
        }
    }
    gens
}

/// `Aut(G)` by backtracking over images of a greedy generating sequence,
/// organised as a chain of stabilisers so that only one automorphism per
/// new orbit point is ever searched for. Never splits direct products.
pub fn automorphism_search(g: &FiniteGroup, budget: u64) -> Result<ActionSet, AutError> {
    let n = g.order();
    let inner: Vec<GroupMap> = g
        .generators()
        .iter()
        .map(|&s| GroupMap::conjugation(g, s))
        .collect();
    if n == 1 {
        return Ok(ActionSet {
            generators: inner,
            contains_inner: true,
            provenance: Provenance::AutSearch,
            order: Some(1),
        });
    }
    let classes = conjugacy_classes(g);
    let profiles = class_profiles(g, &classes);
    let seq = g.greedy_generating_sequence();
    let t = seq.len();
    let chain = Chain::new(g, seq.clone());

    let members = classes.members();
    let cands: Vec<Vec<u32>> = seq
        .iter()
        .map(|&s| {
            let p = &profiles[classes.class_of[s] as usize];
            let mut v: Vec<u32> = (0..classes.len())
                .filter(|&c| &profiles[c] == p)
                .flat_map(|c| members[c].iter().map(|&x| x as u32))
                .collect();
            v.sort_unstable();
            v
        })
        .collect();

    // inner automorphisms fixing seq[..i]
    let mut seeds: Vec<Vec<GroupMap>> = Vec::with_capacity(t);
    for i in 0..t {
        let cent = g.centralizer(&seq[..i]);
        let gens = if i == 0 {
            g.generators()
        } else {
            subgroup_generators(g, &cent)
        };
        seeds.push(gens.iter().map(|&s| GroupMap::conjugation(g, s)).collect());
    }

    let mut search = Search {
        g,
        chain,
        cands,
        img: (0..n as u32).collect(),
        assigned: seq.clone(),
        mark: vec![0; n],
        stamp: 0,
        explored: 0,
        budget,
        found_total: 0,
    };
    let mut found: Vec<Vec<GroupMap>> = vec![Vec::new(); t];
    let mut order: u64 = 1;
    for i in (0..t).rev() {
        let prefix = search.chain.level_start(i);
        for pos in 0..prefix {
            let x = search.chain.elems[pos];
            search.img[x as usize] = x;
        }
        search.assigned[..i].copy_from_slice(&seq[..i]);
        let gens: Vec<&GroupMap> = seeds[i..t].iter().flatten().collect();
        let mut in_orbit = vec![false; n];
        let mut orb = orbit(seq[i], &gens, &mut in_orbit);
        let mut failed = vec![false; n];
        for k in 0..search.cands[i].len() {
            let c = search.cands[i][k] as usize;
            if in_orbit[c] || failed[c] {
                continue;
            }
            search.assigned[i] = c;
            if search.dfs(i)? {
                let f = GroupMap {
                    images: search.img.clone(),
                };
                search.found_total += 1;
                found[i].push(f);
                let mut all: Vec<&GroupMap> = Vec::new();
                for j in i..t {
                    all.extend(seeds[j].iter());
                    all.extend(found[j].iter());
                }
                grow_orbit(&mut orb, &all, &mut in_orbit);
            } else {
                let mut all: Vec<&GroupMap> = Vec::new();
                for j in i..t {
                    all.extend(seeds[j].iter());
                    all.extend(found[j].iter());
                }
                orbit(c, &all, &mut failed);
            }
        }
        order *= orb.len() as u64;
    }
    let mut generators = inner;
    for level in found {
        generators.extend(level);
    }
    Ok(ActionSet {
        generators,
        contains_inner: true,
        provenance: Provenance::AutSearch,
        order: Some(order),
    })
}

fn check_subgroup(g: &FiniteGroup, h: &[usize]) -> Result<Vec<bool>, AutError> {
    let mut inside = vec![false; g.order()];
    for &x in h {
        inside[x] = true;
    }
    if !inside[0] || h.iter().any(|&x| h.iter().any(|&y| !inside[g.mul(x, y)])) {
        return Err(AutError::NotSubgroup);
    }
    Ok(inside)
}

/// For `H` abelian and normal with `G = H<x>` and `a = 1 mod [G:H]`,
/// `gcd(a, |G|) = 1`, the automorphism acting as `h -> h^a` on `H ∪ {x}`.
pub fn abelian_normal_power_automorphism(
    g: &FiniteGroup,
    h: &[usize],
    x: usize,
    a: i64,
) -> Result<GroupMap, AutError> {
    let n = g.order();
    let inside = check_subgroup(g, h)?;
    for (i, &u) in h.iter().enumerate() {
        for &v in &h[i + 1..] {
            if g.mul(u, v) != g.mul(v, u) {
                return Err(AutError::NotAbelian(u, v));
            }
        }
    }
    for &s in &g.generators() {
        for &u in h {
            if !inside[g.conj(s, u)] {
                return Err(AutError::NotNormal {
                    element: u,
                    generator: s,
                });
            }
        }
    }
    // coset index of each element: g = h x^i with 0 <= i < m
    let mut coset = vec![usize::MAX; n];
    let mut hpart = vec![0usize; n];
    let mut xi = 0usize;
    let mut m = 0usize;
    while !inside[xi] || m == 0 {
        for &u in h {
            let y = g.mul(u, xi);
            if coset[y] != usize::MAX {
                break;
            }
            coset[y] = m;
            hpart[y] = u;
        }
        m += 1;
        xi = g.mul(xi, x);
        if m > n {
            break;
        }
    }
    let covered = coset.iter().filter(|&&c| c != usize::MAX).count();
    if covered != n {
        return Err(AutError::NotGenerating {
            got: covered,
            order: n,
        });
    }
    if gcd(a.unsigned_abs(), n as u64) != 1 {
        return Err(AutError::BadExponent {
            a,
            reason: format!("gcd({a}, |G| = {n}) != 1"),
        });
    }
    if a.rem_euclid(m as i64) != 1 % m as i64 {
        return Err(AutError::BadExponent {
            a,
            reason: format!("{a} is not 1 mod [G:H] = {m}"),
        });
    }
    let pow = |y: usize, e: i64| g.pow(y, e.rem_euclid(g.element_order(y) as i64) as u64);
    let images: Vec<u32> = (0..n)
        .map(|y| {
            let i = coset[y] as i64;
            g.mul(pow(hpart[y], a), pow(x, a * i)) as u32
        })
        .collect();
    let f = GroupMap { images };
    debug_assert!(is_automorphism(g, &f));
    if !is_automorphism(g, &f) {
        return Err(AutError::NotAutomorphism { index: 0 });
    }
    Ok(f)
}

/// `g -> g psi(g)` for a homomorphism `psi: G -> Z` into a central
/// subgroup `Z` with `Z <= ker(psi)`.
pub fn central_shift_automorphism(
    g: &FiniteGroup,
    z: &[usize],
    psi: &GroupMap,
) -> Result<GroupMap, AutError> {
    let n = g.order();
    let inside = check_subgroup(g, z)?;
    for &u in z {
        if g.generators().iter().any(|&s| g.mul(s, u) != g.mul(u, s)) {
            return Err(AutError::NotCentral(u));
        }
    }
    if psi.images.len() != n {
        return Err(AutError::WrongLength {
            got: psi.images.len(),
            expected: n,
        });
    }
    if let Some(y) = (0..n).find(|&y| !inside[psi.apply(y)]) {
        return Err(AutError::NotHomomorphism(format!(
            "psi({y}) = {} lies outside Z",
            psi.apply(y)
        )));
    }
    for x in 0..n {
        for s in g.generators() {
            if psi.apply(g.mul(x, s)) != g.mul(psi.apply(x), psi.apply(s)) {
                return Err(AutError::NotHomomorphism(format!(
                    "psi({x} * {s}) != psi({x}) psi({s})"
                )));
            }
        }
    }
    if let Some(&u) = z.iter().find(|&&u| psi.apply(u) != 0) {
        return Err(AutError::KernelCondition(u));
    }
    let f = GroupMap {
        images: (0..n).map(|y| g.mul(y, psi.apply(y)) as u32).collect(),
    };
    if !is_automorphism(g, &f) {
        return Err(AutError::NotAutomorphism { index: 0 });
    }
    Ok(f)
}
