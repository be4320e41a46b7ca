mod common;

use proptest::prelude::*;

use whrank::automorphisms::{
    abelian_normal_power_automorphism, automorphism_group, automorphism_search,
    central_shift_automorphism, is_automorphism,
};
use whrank::classdata::{from_group, rank_report_from_table, ClassTable};
use whrank::constructors::{cyclic, semidirect_cyclic, symmetric};
use whrank::kconj::fusion_partition_elements;
use whrank::numtheory::gcd;
use whrank::{
    class_power_map, conjugacy_classes, fusion_partition, rank_report, FamilySpec, FiniteGroup,
    GaloisField, GroupMap, RankReport,
};

fn field() -> impl Strategy<Value = GaloisField> {
    prop::sample::select(GaloisField::ALL.to_vec())
}

fn member() -> impl Strategy<Value = usize> {
    0..common::corpus().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_maps_compose(i in member(), a in 1i64..200, b in 1i64..200) {
        let e = &common::corpus()[i];
        let g = &e.group;
        let exp = g.exponent() as i64;
        prop_assume!(gcd(a as u64, exp as u64) == 1 && gcd(b as u64, exp as u64) == 1);
        let c = conjugacy_classes(g);
        let pa = class_power_map(g, &c, a);
        let pb = class_power_map(g, &c, b);
        let pab = class_power_map(g, &c, a * b);
        for k in 0..c.len() {
            prop_assert_eq!(pa[pb[k]], pab[k]);
            prop_assert_eq!(c.class_order[pa[k]], c.class_order[k]);
        }
    }

    #[test]
    fn refinement_and_monotonicity(i in member(), k in field()) {
        let e = &common::corpus()[i];
        let c = conjugacy_classes(&e.group);
        let part = |a, k| fusion_partition(&e.group, &c, a, k).unwrap();
        prop_assert!(part(&e.aut, GaloisField::C).refines(&part(&e.aut, GaloisField::R)));
        prop_assert!(part(&e.aut, GaloisField::R).refines(&part(&e.aut, GaloisField::Q)));
        prop_assert!(part(&e.inn, k).refines(&part(&e.aut, k)));
        prop_assert!(part(&e.aut, k).num_blocks() <= part(&e.inn, k).num_blocks());
        for block in part(&e.aut, GaloisField::Q).blocks() {
            prop_assert!(block.iter().all(|&x| c.class_order[x] == c.class_order[block[0]]));
        }
    }

    #[test]
    fn ranks_are_bounded(i in member()) {
        let e = &common::corpus()[i];
        let r = rank_report(&e.group, &e.aut, &e.inn).unwrap();
        prop_assert!(r.is_consistent());
        prop_assert!(0 <= r.n && r.n <= r.bass_rank);
        prop_assert!(r.classes_c >= r.classes_r_aut && r.classes_r_aut >= r.classes_q_aut);
    }

    #[test]
    fn element_and_class_fusion_agree(i in member(), k in field(), inner in any::<bool>()) {
        let e = &common::corpus()[i];
        let g = &e.group;
        prop_assume!(g.order() <= 200);
        let a = if inner { &e.inn } else { &e.aut };
        let c = conjugacy_classes(g);
        let cl = fusion_partition(g, &c, a, k).unwrap();
        let el = fusion_partition_elements(g, a, k).unwrap();
        prop_assert_eq!(cl.num_blocks(), el.num_blocks());
        for x in 0..g.order() {
            for y in 0..g.order() {
                let same_cl = cl.block_of[c.class_of[x] as usize] == cl.block_of[c.class_of[y] as usize];
                prop_assert_eq!(same_cl, el.block_of[x] == el.block_of[y]);
            }
        }
    }

    #[test]
    fn power_automorphisms_are_automorphisms(
        (n, m, k) in prop::sample::select(vec![(9u64, 6u64, 2u64), (7, 3, 2), (5, 4, 2), (13, 4, 5), (8, 2, 3), (16, 4, 3)]),
        t in 0i64..60,
    ) {
        let g = semidirect_cyclic(n, m, k).unwrap();
        let a = 1 + t * m as i64;
        prop_assume!(gcd(a as u64, g.order() as u64) == 1);
        let h: Vec<usize> = (0..n as usize).collect();
        let f = abelian_normal_power_automorphism(&g, &h, n as usize, a).unwrap();
        prop_assert!(is_automorphism(&g, &f));
        prop_assert_eq!(f.apply(1), g.pow(1, a as u64));
    }

    #[test]
    fn central_shifts_are_automorphisms(deg in 3usize..6, half in 1u64..5) {
        // G = S_deg x C_n with psi(s, c) = (1, sign(s) * n/2)
        let n = 2 * half;
        let s = symmetric(deg, 1000).unwrap();
        let c = cyclic(n).unwrap();
        let g = FiniteGroup::direct_product(&s, &c, 100_000).unwrap();
        let nn = n as usize;
        let odd = |x: usize| {
            let p = s.permutation(x).unwrap();
            p.cycles().iter().map(|cy| cy.len() - 1).sum::<usize>() % 2 == 1
        };
        let psi = GroupMap::from_images(
            (0..g.order()).map(|e| if odd(e / nn) { nn / 2 } else { 0 }).collect(),
        );
        let z: Vec<usize> = (0..nn).collect();
        let f = central_shift_automorphism(&g, &z, &psi).unwrap();
        prop_assert!(is_automorphism(&g, &f));
    }

    #[test]
    fn coprime_decomposition_matches_search(
        a in prop::sample::select(vec!["cyc:2", "cyc:4", "dih:4", "cpm:5,4,2", "sym:3", "ab:2x2"]),
        b in prop::sample::select(vec!["cyc:3", "cyc:9", "cpm:7,3,2", "ab:3x3", "cyc:5", "cyc:7"]),
    ) {
        let spec: FamilySpec = format!("prod:{a}*{b}").parse().unwrap();
        prop_assume!(gcd(spec_order(a), spec_order(b)) == 1);
        let g = spec.build(100_000).unwrap();
        let lifted = automorphism_group(&g, 1 << 30).unwrap();
        let searched = automorphism_search(&g, 1 << 30).unwrap();
        prop_assert_eq!(lifted.closure_order(&g), searched.closure_order(&g));
        let inn = whrank::automorphisms::inner_automorphisms(&g);
        let r1 = rank_report(&g, &lifted, &inn).unwrap();
        let r2 = rank_report(&g, &searched, &inn).unwrap();
        prop_assert_eq!((r1.n, r1.bass_rank, r1.classes_c), (r2.n, r2.bass_rank, r2.classes_c));
    }

    #[test]
    fn json_round_trip(i in member()) {
        let e = &common::corpus()[i];
        let r = rank_report(&e.group, &e.aut, &e.inn).unwrap();
        let back: RankReport = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert!(back.is_consistent());
        prop_assert_eq!(back, r);
    }

    #[test]
    fn class_table_round_trip(i in member()) {
        let e = &common::corpus()[i];
        let c = conjugacy_classes(&e.group);
        let t = from_group(&e.group, &c, &e.aut);
        let parsed: ClassTable = t.to_text().parse().unwrap();
        let from_table = rank_report_from_table(&parsed).unwrap();
        let direct = rank_report(&e.group, &e.aut, &e.inn).unwrap();
        prop_assert_eq!(
            (from_table.classes_c, from_table.classes_r_aut, from_table.classes_q_aut),
            (direct.classes_c, direct.classes_r_aut, direct.classes_q_aut)
        );
        prop_assert_eq!(
            (from_table.classes_r_inn, from_table.classes_q_inn),
            (direct.classes_r_inn, direct.classes_q_inn)
        );
    }
}

fn spec_order(s: &str) -> u64 {
    s.parse::<FamilySpec>().unwrap().order() as u64
}
