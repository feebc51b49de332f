use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setdirect::catalog::{cyclic, entries_up_to};
use setdirect::central::{
    check_central_product, class_stabilizer, enumerate_central_decompositions, z_bracket, z_orbits,
};
use setdirect::construct::{
    direct_product, external_central_product, group_from_permutations, quotient_group, SubgroupView,
};
use setdirect::oracle::{
    enumerate_setdirect, random_class_subset, random_normal_subset, EnumerationOptions,
};
use setdirect::setdirect::{
    directness_criteria, kernel, normalize, prime_power_factorization, transversal_factorization,
    verify_main_theorem, SetDirectFactorization, TransversalOutcome,
};
use setdirect::{GroupTable, Subset};

struct Entry {
    group: GroupTable,
    factorizations: Vec<(Subset, Subset)>,
}

/// Catalog groups of order at most 32 with their normalized factorizations.
fn pool() -> &'static [Entry] {
    static POOL: OnceLock<Vec<Entry>> = OnceLock::new();
    POOL.get_or_init(|| {
        entries_up_to(32)
            .into_iter()
            .map(|e| {
                let group = e.build().unwrap();
                let factorizations = enumerate_setdirect(&group, &EnumerationOptions::default())
                    .map(|r| r.pair_set().into_iter().collect())
                    .unwrap_or_default();
                Entry {
                    group,
                    factorizations,
                }
            })
            .collect()
    })
}

fn pick(index: usize) -> &'static Entry {
    let p = pool();
    &p[index % p.len()]
}

/// A pair of normal subsets, sometimes carved out of a known factorization.
fn normal_pair(e: &Entry, rng: &mut ChaCha8Rng) -> (Subset, Subset) {
    let g = &e.group;
    if !e.factorizations.is_empty() && rng.gen_bool(0.5) {
        let (x, y) = &e.factorizations[rng.gen_range(0..e.factorizations.len())];
        let (x, y) = if rng.gen_bool(0.5) { (x, y) } else { (y, x) };
        (
            random_class_subset(g, rng, x),
            random_class_subset(g, rng, y),
        )
    } else {
        (
            random_normal_subset(g, rng, 3),
            random_normal_subset(g, rng, 3),
        )
    }
}

fn certified(e: &Entry, rng: &mut ChaCha8Rng) -> Option<SetDirectFactorization> {
    if e.factorizations.is_empty() {
        return None;
    }
    let g = &e.group;
    let (x, y) = e.factorizations[rng.gen_range(0..e.factorizations.len())].clone();
    // move off the normalized representative by a random central shift
    let center = g.center().to_vec();
    let z = center[rng.gen_range(0..center.len())];
    let w = center[rng.gen_range(0..center.len())];
    let f = SetDirectFactorization::certify(g, g.left_translate(z, &x), g.left_translate(w, &y))
        .unwrap();
    assert!(f.certified);
    Some(f)
}

fn is_closed(g: &GroupTable, s: &Subset) -> bool {
    s.iter().all(|a| s.iter().all(|b| s.contains(g.mul(a, b))))
}

fn random_perm(rng: &mut ChaCha8Rng, degree: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for i in (1..degree).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tables_are_groups(seed in any::<u64>(), degree in 2usize..=5, count in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Vec<usize>> = (0..count).map(|_| random_perm(&mut rng, degree)).collect();
        let g = group_from_permutations(&gens).unwrap();
        let n = g.order();
        for a in 0..n {
            let row: BTreeSet<usize> = (0..n).map(|b| g.mul(a, b)).collect();
            let col: BTreeSet<usize> = (0..n).map(|b| g.mul(b, a)).collect();
            prop_assert_eq!(row.len(), n);
            prop_assert_eq!(col.len(), n);
            prop_assert_eq!(g.mul(0, a), a);
            prop_assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..n {
                for c in 0..n {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn class_sizes_partition_the_group(index in any::<usize>()) {
        let g = &pick(index).group;
        let sizes = g.classes().sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), g.order());
        prop_assert!(sizes.iter().all(|s| g.order() % s == 0));
    }

    #[test]
    fn generated_subgroup_is_least(index in any::<usize>(), seed in any::<u64>()) {
        let g = &pick(index).group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Subset::from_indices(g.order(), (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..g.order())));
        let h = g.generated_subgroup(&s).unwrap();
        prop_assert!(s.is_subset(&h) && is_closed(g, &h));
        // every subgroup ⟨S, t⟩ above S contains ⟨S⟩
        for t in 0..g.order() {
            let mut st = s.clone();
            st.insert(t);
            prop_assert!(h.is_subset(&g.generated_subgroup(&st).unwrap()));
        }
    }

    #[test]
    fn set_product_multiplicities(index in any::<usize>(), seed in any::<u64>()) {
        let g = &pick(index).group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = g.order();
        let a = Subset::from_indices(n, (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0..n)));
        let b = Subset::from_indices(n, (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0..n)));
        let p = g.set_product(&a, &b);
        prop_assert!(p.set.len() <= a.len() * b.len());
        prop_assert_eq!(p.multiplicity.iter().map(|&m| m as usize).sum::<usize>(), a.len() * b.len());
    }

    #[test]
    fn normal_subsets_are_unions_of_classes(index in any::<usize>(), seed in any::<u64>()) {
        let g = &pick(index).group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = g.order();
        let s = Subset::from_indices(n, (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..n)));
        let closed = s.iter().all(|x| (0..n).all(|y| s.contains(g.conjugate(x, y))));
        prop_assert_eq!(g.is_normal_subset(&s), closed);
        prop_assert!(g.is_normal_subset(&g.normal_closure_set(&s)));
    }

    #[test]
    fn stabilizers_and_orbits(index in any::<usize>(), seed in any::<u64>()) {
        let g = &pick(index).group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zs = g.subgroups_of_abelian(g.center()).unwrap();
        let z = &zs[rng.gen_range(0..zs.len())];
        let action = z_orbits(g, &g.all(), z).unwrap();
        for o in &action.orbits {
            prop_assert_eq!(o.classes.len() * o.stabilizer.len(), z.len());
            let rep = g.classes().representative(o.classes[0]);
            prop_assert_eq!(&class_stabilizer(g, rep, z).unwrap(), &o.stabilizer);
        }
        prop_assert_eq!(action.orbits.len(), quotient_group(g, z).unwrap().group.class_count());
        for k in g.normal_subgroups() {
            prop_assert!(z_bracket(g, &k, z).is_ok());
        }
    }

    #[test]
    fn central_products_have_factored_classes(index in any::<usize>()) {
        let g = &pick(index).group;
        for cp in enumerate_central_decompositions(g).unwrap() {
            let checks = check_central_product(g, &cp).unwrap();
            prop_assert!(checks.all(), "{:?}", checks);
        }
    }

    #[test]
    fn criteria_agree_and_direct_pairs_centralize(index in any::<usize>(), seed in any::<u64>()) {
        let e = pick(index);
        let g = &e.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let (x, y) = normal_pair(e, &mut rng);
            let d = directness_criteria(g, &x, &y).unwrap();
            prop_assert!(d.agree(), "{:?}", d);
            if d.direct {
                prop_assert_eq!(g.commutator_set(&x, &y).unwrap().len(), 1);
                // central shifts keep directness
                for z in g.center() {
                    prop_assert!(directness_criteria(g, &g.left_translate(z, &x), &y).unwrap().direct);
                }
            }
        }
    }

    #[test]
    fn verifier_matches_definition(index in any::<usize>(), seed in any::<u64>()) {
        let e = pick(index);
        let g = &e.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4 {
            let (x, y) = normal_pair(e, &mut rng);
            let r = verify_main_theorem(g, &x, &y).unwrap();
            let products: Vec<usize> = x.iter().flat_map(|a| y.iter().map(move |b| g.mul(a, b))).collect();
            let distinct: BTreeSet<usize> = products.iter().copied().collect();
            let by_definition = distinct.len() == products.len() && distinct.len() == g.order();
            prop_assert_eq!(r.verdict, by_definition);
        }
    }

    #[test]
    fn certified_factorizations(index in any::<usize>(), seed in any::<u64>()) {
        let e = pick(index);
        let g = &e.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(f) = certified(e, &mut rng) else { return Ok(()) };
        let (x, y) = (&f.x, &f.y);
        prop_assert_eq!(x.len() * y.len(), g.order());
        prop_assert!(x.intersection(y).len() <= 1);
        prop_assert!(g.center().iter().any(|z| x.contains(z) && y.contains(g.inv(z))));
        let n = normalize(g, &f).unwrap();
        prop_assert!(n.certified && n.is_normalized());
        let classes = g.classes();
        for c in classes.classes_in(x) {
            let class = &classes.classes[c];
            if class.len() > 1 {
                prop_assert!(!y.intersects(class));
                prop_assert!(!y.intersects(&g.inverse_set(class)));
            }
        }
        // each nonempty slice Y_n is a union of cosets of the stabilizer of n^G
        let r = verify_main_theorem(g, x, y).unwrap();
        prop_assert!(r.verdict);
        for s in &r.y_slices {
            let stab = class_stabilizer(g, s.representative, &r.z).unwrap();
            prop_assert_eq!(&g.product_set(&s.set, &stab), &s.set);
        }
    }

    #[test]
    fn sub_pieces_of_factorizations_stay_direct(index in any::<usize>(), seed in any::<u64>()) {
        let e = pick(index);
        let g = &e.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(f) = certified(e, &mut rng) else { return Ok(()) };
        let x = random_class_subset(g, &mut rng, &f.x);
        let y = random_class_subset(g, &mut rng, &f.y);
        prop_assert!(directness_criteria(g, &x, &y).unwrap().direct);
    }

    #[test]
    fn association(index in any::<usize>(), seed in any::<u64>()) {
        let e = pick(index);
        let g = &e.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let (a, b) = normal_pair(e, &mut rng);
            let c = random_normal_subset(g, &mut rng, 2);
            let ab = g.product_set(&a, &b);
            if directness_criteria(g, &a, &b).unwrap().direct
                && directness_criteria(g, &ab, &c).unwrap().direct
            {
                prop_assert!(directness_criteria(g, &b, &c).unwrap().direct);
                let bc = g.product_set(&b, &c);
                prop_assert!(directness_criteria(g, &a, &bc).unwrap().direct);
            }
        }
    }

    #[test]
    fn kernels_are_periods(n in 2usize..=24, seed in any::<u64>()) {
        let z = cyclic(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Subset::from_indices(n, (0..rng.gen_range(1..=n)).map(|_| rng.gen_range(0..n)));
        let k = kernel(&z, &s).unwrap();
        prop_assert!(z.is_subgroup(&k));
        prop_assert_eq!(&z.product_set(&k, &s), &s);
        for h in 0..n {
            prop_assert_eq!(k.contains(h), z.left_translate(h, &s) == s);
        }
    }

    #[test]
    fn constructions_certify(index in any::<usize>()) {
        let g = &pick(index).group;
        for cp in enumerate_central_decompositions(g).unwrap() {
            for cp in [cp.clone(), cp.swapped()] {
                match transversal_factorization(g, &cp).unwrap() {
                    TransversalOutcome::Found { factorization, .. } => {
                        let r = verify_main_theorem(g, &factorization.x, &factorization.y).unwrap();
                        prop_assert!(factorization.certified && r.verdict);
                    }
                    TransversalOutcome::NotSemiRegular { counts, .. } => {
                        prop_assert!(!counts.semiregular);
                    }
                }
            }
        }
        for z in g.center() {
            if let Ok(f) = prime_power_factorization(g, z) {
                prop_assert!(f.certified && !f.is_trivial(g));
                prop_assert!(verify_main_theorem(g, &f.x, &f.y).unwrap().verdict);
            }
        }
    }
}

#[test]
fn central_product_over_trivial_pairing_is_direct() {
    for (a, b) in [(2, 3), (4, 2), (3, 5)] {
        let (m, n) = (cyclic(a), cyclic(b));
        let cp = external_central_product(&m, &n, &[(0, 0)]).unwrap();
        let dp = direct_product(&[&m, &n]).unwrap();
        // both are abelian of order ab; compare element order profiles
        let profile = |g: &GroupTable| {
            let mut v: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(profile(&cp.group), profile(&dp));
        assert!(cp.group.is_abelian());
        let view = SubgroupView::new(&cp.group, &cp.left_image()).unwrap();
        assert_eq!(view.table.order(), a);
    }
}
