//! Fully enumerated finite groups.
//!
//! Elements are indices `0..order` with `0` the identity. A group is backed
//! by permutations, an explicit Cayley table, structured pairs for split
//! metacyclic groups, or a pair of factor groups; small groups additionally
//! carry a dense multiplication table.

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::numtheory::lcm;
use crate::perm::Permutation;

/// Default enumeration cap.
pub const DEFAULT_CAP: usize = 100_000;

const DENSE_TABLE_LIMIT: usize = 2048;
const EXHAUSTIVE_ASSOC_LIMIT: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeds the cap of {0} elements")]
    CapExceeded(usize),
    #[error("generator {index} is not a permutation: {reason}")]
    InvalidPermutation { index: usize, reason: String },
    #[error("no generators given")]
    NoGenerators,
    #[error("table is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("row and column 0 are not the identity")]
    NoIdentity,
}

#[derive(Debug, Clone)]
pub enum Lookup {
    /// Images of up to eight base points packed 16 bits each.
    Base {
        points: Vec<usize>,
        map: FxHashMap<u128, u32>,
    },
    Full(FxHashMap<Vec<u16>, u32>),
}

/// How elements and products are represented.
#[derive(Debug, Clone)]
pub enum Backing {
    Permutation {
        degree: usize,
        /// `order * degree` images, row `x` is element `x`.
        perms: Vec<u16>,
        lookup: Lookup,
    },
    Cayley {
        table: Vec<u32>,
    },
    /// `a^i b^j` stored at `i + n*j`, with `b a b^-1 = a^k`.
    Semidirect {
        n: u64,
        m: u64,
        k_pows: Vec<u64>,
    },
    /// `(g, h)` stored at `g * |right| + h`.
    Product {
        left: Box<FiniteGroup>,
        right: Box<FiniteGroup>,
    },
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    backing: Backing,
    dense: Option<Vec<u32>>,
    inv: Vec<u32>,
    orders: Vec<u32>,
    gens: Vec<u32>,
    /// BFS tree: `x = parent[x] * gens[via[x]]`.
    parent: Vec<u32>,
    via: Vec<u32>,
    bfs_order: Vec<u32>,
}

impl FiniteGroup {
    /// Closure of permutation generators. Elements are numbered in
    /// breadth-first order from the identity, applying generators in input
    /// order on the right.
    pub fn from_permutation_generators(
        generators: &[Permutation],
        cap: usize,
    ) -> Result<Self, GroupError> {
        let Some(first) = generators.first() else {
            return Err(GroupError::NoGenerators);
        };
        let degree = first.degree();
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::InvalidPermutation {
                    index,
                    reason: format!("degree {} differs from {}", g.degree(), degree),
                });
            }
        }
        if degree > u16::MAX as usize {
            return Err(GroupError::InvalidPermutation {
                index: 0,
                reason: format!("degree {degree} is too large"),
            });
        }
        let gen_rows: Vec<Vec<u16>> = generators
            .iter()
            .map(|g| g.images().iter().map(|&x| x as u16).collect())
            .collect();

        let mut perms: Vec<u16> = (0..degree as u16).collect();
        let mut index: FxHashMap<Vec<u16>, u32> = FxHashMap::default();
        index.insert(perms.clone(), 0);
        let mut parent = vec![0u32];
        let mut via = vec![0u32];
        let mut next = 0usize;
        let mut buf = vec![0u16; degree];
        while next < parent.len() {
            for (gi, g) in gen_rows.iter().enumerate() {
                let x = &perms[next * degree..(next + 1) * degree];
                // (x*g)(p) = x(g(p))
                for p in 0..degree {
                    buf[p] = x[g[p] as usize];
                }
                if index.contains_key(&buf) {
                    continue;
                }
                if parent.len() >= cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                index.insert(buf.clone(), parent.len() as u32);
                perms.extend_from_slice(&buf);
                parent.push(next as u32);
                via.push(gi as u32);
            }
            next += 1;
        }
        let order = parent.len();
        let lookup = build_lookup(&perms, degree, order, index);
        let backing = Backing::Permutation {
            degree,
            perms,
            lookup,
        };
        let mut gens = Vec::with_capacity(generators.len());
        let mut g = FiniteGroup::raw(String::new(), order, backing);
        for row in &gen_rows {
            gens.push(g.lookup_perm(row).expect("generator lies in its closure") as u32);
        }
        g.gens = gens;
        g.parent = parent;
        g.via = via;
        g.bfs_order = (0..order as u32).collect();
        g.finish();
        Ok(g)
    }

    /// Validates an explicit multiplication table with 0 as identity.
    pub fn from_cayley_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::NotLatinSquare("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotLatinSquare(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::NotLatinSquare(format!(
                        "entry {v} in row {i} is out of range"
                    )));
                }
                table.push(v as u32);
            }
        }
        let t = |x: usize, y: usize| table[x * n + y] as usize;
        if (0..n).any(|x| t(0, x) != x || t(x, 0) != x) {
            return Err(GroupError::NoIdentity);
        }
        for x in 0..n {
            if !(0..n).any(|y| t(x, y) == 0 && t(y, x) == 0) {
                return Err(GroupError::NoInverse(x));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for x in 0..n {
            for y in 0..n {
                let v = t(x, y);
                if seen[v] == x {
                    return Err(GroupError::NotLatinSquare(format!(
                        "value {v} repeats in row {x}"
                    )));
                }
                seen[v] = x;
            }
        }
        seen.fill(usize::MAX);
        for y in 0..n {
            for x in 0..n {
                let v = t(x, y);
                if seen[v] == y {
                    return Err(GroupError::NotLatinSquare(format!(
                        "value {v} repeats in column {y}"
                    )));
                }
                seen[v] = y;
            }
        }
        let mut g = FiniteGroup::raw(String::new(), n, Backing::Cayley { table });
        let gens = g.greedy_generating_sequence();
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    let xy = g.mul_raw(x, y);
                    for z in 0..n {
                        if g.mul_raw(xy, z) != g.mul_raw(x, g.mul_raw(y, z)) {
                            return Err(GroupError::NotAssociative { x, y, z });
                        }
                    }
                }
            }
        } else {
            // Light's test: the set of y with (x*y)*z = x*(y*z) for all x, z
            // is a subgroup, so it is enough to check a generating set.
            for &y in &gens {
                for x in 0..n {
                    let xy = g.mul_raw(x, y);
                    for z in 0..n {
                        if g.mul_raw(xy, z) != g.mul_raw(x, g.mul_raw(y, z)) {
                            return Err(GroupError::NotAssociative { x, y, z });
                        }
                    }
                }
            }
        }
        g.gens = gens.iter().map(|&x| x as u32).collect();
        g.build_tree();
        g.finish();
        Ok(g)
    }

    /// `<a, b | a^n = b^m = 1, b a b^-1 = a^k>` with `a^i b^j` at `i + n*j`.
    /// The caller guarantees `k^m = 1 mod n` and `gcd(k, n) = 1`.
    pub(crate) fn from_semidirect(n: u64, m: u64, k: u64) -> Self {
        let mut k_pows = Vec::with_capacity(m as usize);
        let mut p = 1 % n;
        for _ in 0..m {
            k_pows.push(p);
            p = p * (k % n) % n;
        }
        let order = (n * m) as usize;
        let mut g = FiniteGroup::raw(String::new(), order, Backing::Semidirect { n, m, k_pows });
        let mut gens = Vec::new();
        if n > 1 {
            gens.push(1);
        }
        if m > 1 {
            gens.push(n as u32);
        }
        if gens.is_empty() {
            gens.push(0);
        }
        g.gens = gens;
        g.build_tree();
        g.finish();
        g
    }

    /// Direct product with `(g, h)` at `g * |H| + h`; generators are those of
    /// `G` followed by those of `H`.
    pub fn direct_product(
        left: &FiniteGroup,
        right: &FiniteGroup,
        cap: usize,
    ) -> Result<Self, GroupError> {
        let order = left
            .order
            .checked_mul(right.order)
            .filter(|&o| o <= cap)
            .ok_or(GroupError::CapExceeded(cap))?;
        let h = right.order as u32;
        let mut gens: Vec<u32> = left.gens.iter().map(|&g| g * h).collect();
        gens.extend(right.gens.iter().copied());
        let label = format!("{} x {}", left.label, right.label);
        let backing = Backing::Product {
            left: Box::new(left.clone()),
            right: Box::new(right.clone()),
        };
        let mut g = FiniteGroup::raw(label, order, backing);
        g.gens = gens;
        g.build_tree();
        g.finish();
        Ok(g)
    }

    fn raw(label: String, order: usize, backing: Backing) -> Self {
        FiniteGroup {
            label,
            order,
            backing,
            dense: None,
            inv: Vec::new(),
            orders: Vec::new(),
            gens: Vec::new(),
            parent: Vec::new(),
            via: Vec::new(),
            bfs_order: Vec::new(),
        }
    }

    fn build_tree(&mut self) {
        let n = self.order;
        let mut parent = vec![u32::MAX; n];
        let mut via = vec![0u32; n];
        let mut bfs = Vec::with_capacity(n);
        parent[0] = 0;
        bfs.push(0u32);
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head] as usize;
            head += 1;
            for (gi, &g) in self.gens.iter().enumerate() {
                let y = self.mul_raw(x, g as usize);
                if parent[y] == u32::MAX {
                    parent[y] = x as u32;
                    via[y] = gi as u32;
                    bfs.push(y as u32);
                }
            }
        }
        assert_eq!(bfs.len(), n, "generators do not generate the group");
        self.parent = parent;
        self.via = via;
        self.bfs_order = bfs;
    }

    fn finish(&mut self) {
        let n = self.order;
        if n <= DENSE_TABLE_LIMIT && !matches!(self.backing, Backing::Cayley { .. }) {
            let mut t = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    t.push(self.mul_raw(x, y) as u32);
                }
            }
            self.dense = Some(t);
        }
        let mut orders = vec![0u32; n];
        let mut inv = vec![0u32; n];
        orders[0] = 1;
        for x in 1..n {
            if orders[x] != 0 {
                continue;
            }
            // walk the cyclic subgroup once, filling every power whose order is known
            let mut powers = vec![0usize, x];
            let mut y = x;
            loop {
                y = self.mul(y, x);
                if y == 0 {
                    break;
                }
                powers.push(y);
            }
            let o = powers.len() as u64;
            for (e, &p) in powers.iter().enumerate().skip(1) {
                if orders[p] == 0 {
                    orders[p] = (o / crate::numtheory::gcd(o, e as u64)) as u32;
                    inv[p] = powers[(powers.len() - e) % powers.len()] as u32;
                }
            }
        }
        self.orders = orders;
        self.inv = inv;
    }

    fn lookup_perm(&self, images: &[u16]) -> Option<usize> {
        let Backing::Permutation { lookup, .. } = &self.backing else {
            return None;
        };
        match lookup {
            Lookup::Base { points, map } => {
                let key = points
                    .iter()
                    .fold(0u128, |acc, &p| (acc << 16) | images[p] as u128);
                let x = *map.get(&key)? as usize;
                (self.perm_row(x) == images).then_some(x)
            }
            Lookup::Full(map) => map.get(images).map(|&x| x as usize),
        }
    }

    fn perm_row(&self, x: usize) -> &[u16] {
        match &self.backing {
            Backing::Permutation { degree, perms, .. } => &perms[x * degree..(x + 1) * degree],
            _ => unreachable!(),
        }
    }

    #[inline]
    fn mul_raw(&self, x: usize, y: usize) -> usize {
        match &self.backing {
            Backing::Cayley { table } => table[x * self.order + y] as usize,
            Backing::Semidirect { n, k_pows, .. } => {
                let n = *n;
                let m = k_pows.len() as u64;
                let (i, j) = (x as u64 % n, x as u64 / n);
                let (i2, j2) = (y as u64 % n, y as u64 / n);
                let i3 = (i + k_pows[j as usize] * i2) % n;
                let j3 = (j + j2) % m;
                (i3 + n * j3) as usize
            }
            Backing::Product { left, right } => {
                let h = right.order;
                left.mul(x / h, y / h) * h + right.mul(x % h, y % h)
            }
            Backing::Permutation {
                degree,
                perms,
                lookup,
            } => {
                let d = *degree;
                let px = &perms[x * d..(x + 1) * d];
                let py = &perms[y * d..(y + 1) * d];
                match lookup {
                    Lookup::Base { points, map } => {
                        let key = points
                            .iter()
                            .fold(0u128, |acc, &p| (acc << 16) | px[py[p] as usize] as u128);
                        map[&key] as usize
                    }
                    Lookup::Full(map) => {
                        let prod: Vec<u16> = py.iter().map(|&p| px[p as usize]).collect();
                        map[&prod] as usize
                    }
                }
            }
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.dense {
            Some(t) => t[x * self.order + y] as usize,
            None => self.mul_raw(x, y),
        }
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    #[inline]
    pub fn element_order(&self, x: usize) -> u64 {
        self.orders[x] as u64
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.orders
    }

    /// `x^e` by repeated squaring; `e` is reduced mod the order of `x`.
    pub fn pow(&self, x: usize, e: u64) -> usize {
        let mut e = e % self.element_order(x);
        let mut base = x;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn generators(&self) -> Vec<usize> {
        self.gens.iter().map(|&g| g as usize).collect()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| lcm(acc, o as u64))
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, &a)| {
            self.gens[i + 1..]
                .iter()
                .all(|&b| self.mul(a as usize, b as usize) == self.mul(b as usize, a as usize))
        })
    }

    /// Elements commuting with every element of `set`, ascending.
    pub fn centralizer(&self, set: &[usize]) -> Vec<usize> {
        (0..self.order)
            .filter(|&x| set.iter().all(|&s| self.mul(x, s) == self.mul(s, x)))
            .collect()
    }

    pub fn center(&self) -> Vec<usize> {
        self.centralizer(&self.generators())
    }

    /// Subgroup generated by `gens`, in BFS order from the identity.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out
    }

    /// Greedy generating sequence: repeatedly take an element of largest
    /// order outside the subgroup generated so far, smallest index first.
    pub fn greedy_generating_sequence(&self) -> Vec<usize> {
        let n = self.order;
        let mut by_order: Vec<usize> = (0..n).collect();
        let ord = |x: usize| -> u64 {
            if self.orders.is_empty() {
                self.naive_order(x)
            } else {
                self.orders[x] as u64
            }
        };
        let keyed: Vec<u64> = by_order.iter().map(|&x| ord(x)).collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(keyed[x]), x));
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut seq = Vec::new();
        for &c in &by_order {
            if members.len() == n {
                break;
            }
            if inside[c] {
                continue;
            }
            seq.push(c);
            // extend the closure: new elements are products of old members
            // with the new generator and with earlier generators
            let mut head = 0;
            members.clear();
            inside.fill(false);
            inside[0] = true;
            members.push(0);
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &g in &seq {
                    let y = self.mul_raw(x, g);
                    if !inside[y] {
                        inside[y] = true;
                        members.push(y);
                    }
                }
            }
        }
        if seq.is_empty() {
            seq.push(0);
        }
        seq
    }

    fn naive_order(&self, x: usize) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul_raw(y, x);
            k += 1;
        }
        k
    }

    /// Extends an assignment of images to the group generators along the BFS
    /// tree. The result is a homomorphism only if the assignment respects
    /// the relations; callers check that separately.
    pub fn extend_from_generators(&self, images: &[usize]) -> Vec<u32> {
        let mut out = vec![0u32; self.order];
        for &x in &self.bfs_order[1..] {
            let x = x as usize;
            let p = self.parent[x] as usize;
            let g = self.via[x] as usize;
            out[x] = self.mul(out[p] as usize, images[g]) as u32;
        }
        out
    }

    /// The permutation representing `x`, for permutation-backed groups.
    pub fn permutation(&self, x: usize) -> Option<Permutation> {
        match &self.backing {
            Backing::Permutation { .. } => Permutation::from_images(
                self.perm_row(x).iter().map(|&p| p as u32).collect(),
            ),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.backing {
            Backing::Permutation { degree, .. } => Some(*degree),
            _ => None,
        }
    }

    /// Index of a permutation, if it lies in a permutation-backed group.
    pub fn find_permutation(&self, p: &Permutation) -> Option<usize> {
        if self.degree() != Some(p.degree()) {
            return None;
        }
        let row: Vec<u16> = p.images().iter().map(|&x| x as u16).collect();
        self.lookup_perm(&row)
    }

    /// Row-major Cayley table.
    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|x| (0..self.order).map(|y| self.mul(x, y)).collect())
            .collect()
    }
}

fn build_lookup(perms: &[u16], degree: usize, order: usize, full: FxHashMap<Vec<u16>, u32>) -> Lookup {
    let mut points = Vec::new();
    let mut keys = vec![0u128; order];
    let mut distinct = 1usize;
    while distinct < order && points.len() < 8 {
        let mut best = (0usize, 0usize);
        for p in 0..degree {
            if points.contains(&p) {
                continue;
            }
            let set: FxHashSet<u128> = (0..order)
                .map(|x| (keys[x] << 16) | perms[x * degree + p] as u128)
                .collect();
            if set.len() > best.0 {
                best = (set.len(), p);
            }
        }
        if best.0 <= distinct {
            break;
        }
        let p = best.1;
        points.push(p);
        for x in 0..order {
            keys[x] = (keys[x] << 16) | perms[x * degree + p] as u128;
        }
        distinct = best.0;
    }
    if distinct < order {
        return Lookup::Full(full);
    }
    let map = keys
        .iter()
        .enumerate()
        .map(|(x, &k)| (k, x as u32))
        .collect();
    Lookup::Base { points, map }
}
