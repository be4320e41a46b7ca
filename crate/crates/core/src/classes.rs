//! Conjugacy classes and class power maps.

use crate::group::FiniteGroup;

/// Partition of a group into conjugacy classes, ordered by
/// `(element order, class size, least element)`. Class 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub class_of: Vec<u32>,
    /// Least element index of each class.
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
    pub class_order: Vec<u64>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Atlas-style names: element order followed by a letter in class order,
    /// e.g. `1A 2A 3A 3B`.
    pub fn names(&self) -> Vec<String> {
        class_names(&self.class_order)
    }

    /// Members of each class, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(x);
        }
        out
    }
}

/// Names `<order><letters>` for classes listed in order-then-size order.
pub fn class_names(orders: &[u64]) -> Vec<String> {
    let mut count = std::collections::HashMap::new();
    orders
        .iter()
        .map(|&n| {
            let i = count.entry(n).or_insert(0usize);
            let name = format!("{n}{}", class_letters(*i));
            *i += 1;
            name
        })
        .collect()
}

fn class_letters(i: usize) -> String {
    let letter = (b'A' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let n = g.order();
    let gens = g.generators();
    let gen_inv: Vec<usize> = gens.iter().map(|&x| g.inv(x)).collect();
    let mut raw = vec![u32::MAX; n];
    // (min element, size, order) per raw class; orbits are found in index
    // order, so the first element reached is the least
    let mut found: Vec<(usize, usize, u64)> = Vec::new();
    let mut queue = Vec::new();
    for start in 0..n {
        if raw[start] != u32::MAX {
            continue;
        }
        let id = found.len() as u32;
        raw[start] = id;
        queue.clear();
        queue.push(start);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (&s, &si) in gens.iter().zip(&gen_inv) {
                let y = g.mul(g.mul(s, x), si);
                if raw[y] == u32::MAX {
                    raw[y] = id;
                    queue.push(y);
                }
            }
        }
        found.push((start, queue.len(), g.element_order(start)));
    }
    let mut perm: Vec<usize> = (0..found.len()).collect();
    perm.sort_by_key(|&c| (found[c].2, found[c].1, found[c].0));
    let mut relabel = vec![0u32; found.len()];
    for (new, &old) in perm.iter().enumerate() {
        relabel[old] = new as u32;
    }
    ConjugacyClasses {
        class_of: raw.iter().map(|&c| relabel[c as usize]).collect(),
        representatives: perm.iter().map(|&c| found[c].0).collect(),
        sizes: perm.iter().map(|&c| found[c].1).collect(),
        class_order: perm.iter().map(|&c| found[c].2).collect(),
    }
}

/// Class of `x^a` as a function of the class of `x`. Exponents are reduced
/// modulo each element order, so negative or non-coprime `a` is fine.
pub fn class_power_map(g: &FiniteGroup, classes: &ConjugacyClasses, a: i64) -> Vec<usize> {
    classes
        .representatives
        .iter()
        .zip(&classes.class_order)
        .map(|(&r, &n)| {
            let e = a.rem_euclid(n as i64) as u64;
            classes.class_of[g.pow(r, e)] as usize
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn s3() -> FiniteGroup {
        let gens = ["(1 2)", "(1 2 3)"].map(|c| Permutation::parse_cycles(c, 3).unwrap());
        FiniteGroup::from_permutation_generators(&gens, 10).unwrap()
    }

    #[test]
    fn symmetric_three_classes() {
        let g = s3();
        let cc = conjugacy_classes(&g);
        assert_eq!(cc.sizes, vec![1, 3, 2]);
        assert_eq!(cc.class_order, vec![1, 2, 3]);
        assert_eq!(cc.representatives[0], 0);
        assert_eq!(cc.names(), vec!["1A", "2A", "3A"]);
        assert_eq!(class_power_map(&g, &cc, 5), vec![0, 1, 2]);
        assert_eq!(class_power_map(&g, &cc, 1), vec![0, 1, 2]);
    }

    #[test]
    fn cyclic_five_power_map_is_four_cycle() {
        let g = FiniteGroup::from_permutation_generators(
            &[Permutation::parse_cycles("(1 2 3 4 5)", 5).unwrap()],
            10,
        )
        .unwrap();
        let cc = conjugacy_classes(&g);
        assert_eq!(cc.len(), 5);
        let p2 = class_power_map(&g, &cc, 2);
        assert_eq!(p2[0], 0);
        // a single orbit of length 4 on the non-identity classes
        let mut x = 1;
        let mut len = 0;
        loop {
            x = p2[x];
            len += 1;
            if x == 1 {
                break;
            }
        }
        assert_eq!(len, 4);
    }

    #[test]
    fn class_invariance_under_conjugation() {
        let g = s3();
        let cc = conjugacy_classes(&g);
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(cc.class_of[g.conj(y, x)], cc.class_of[x]);
            }
        }
    }

    #[test]
    fn long_name_sequence() {
        let names = class_names(&vec![2; 28]);
        assert_eq!(names[25], "2Z");
        assert_eq!(names[26], "2A1");
    }
}
