use proptest::prelude::*;
use qsemi::combinatorics::fixed_size_partitions;
use qsemi::dp::{dp_full_sum, DEFAULT_CAP};
use qsemi::generator::generate_all;
use qsemi::poly::Homogeneity;
use qsemi::*;

const ONE_OF_EACH: &str = include_str!("../../../quivers/one_of_each.json");

fn one_of_each() -> ZigzagQuiver {
    classify_zigzag(&MixedQuiver::from_json(ONE_OF_EACH).unwrap()).unwrap()
}

// a set partition of 1..=n from block labels
fn distribution(labels: &[usize]) -> Distribution {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (l, &lab) in labels.iter().enumerate() {
        match seen.iter().position(|&s| s == lab) {
            Some(k) => blocks[k].push(l + 1),
            None => {
                seen.push(lab);
                blocks.push(vec![l + 1]);
            }
        }
    }
    Distribution::new(labels.len(), blocks).unwrap()
}

fn permutation(n: usize, keys: &[u32]) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (keys[i], i));
    Permutation::from_images(&order.iter().map(|i| i + 1).collect::<Vec<_>>()).unwrap()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_refines_both(a in prop::collection::vec(0usize..3, 1..8), seed in any::<u64>()) {
        let b: Vec<usize> = a.iter().enumerate().map(|(i, _)| ((seed >> (i % 60)) & 3) as usize).collect();
        let (da, db) = (distribution(&a), distribution(&b));
        let meet = da.intersect(&db).unwrap();
        prop_assert!(meet.refines(&da));
        prop_assert!(meet.refines(&db));
        prop_assert_eq!(meet.ground(), a.len());
    }

    #[test]
    fn permutation_sign_is_multiplicative(n in 1usize..7, k1 in prop::collection::vec(any::<u32>(), 7), k2 in prop::collection::vec(any::<u32>(), 7)) {
        let (p, q) = (permutation(n, &k1), permutation(n, &k2));
        prop_assert_eq!(p.compose(&q).sign(), p.sign() * q.sign());
        prop_assert_eq!(p.compose(&p.inverse()), Permutation::identity(n));
    }

    #[test]
    fn fixed_size_partition_count(groups in 1usize..4, size in 1usize..4) {
        let n = groups * size;
        let pool: Vec<usize> = (1..=n).collect();
        let expected = factorial(n) / (factorial(size).pow(groups as u32) * factorial(groups));
        prop_assert_eq!(fixed_size_partitions(&pool, size).len(), expected);
    }

    #[test]
    fn multidegree_text_round_trips(t in prop::collection::vec(0usize..4, 0..3), r in prop::collection::vec(0usize..4, 0..3), s in prop::collection::vec(0usize..4, 0..3)) {
        let d = MultiDegree::new(t, r, s);
        prop_assert_eq!(d.to_string().parse::<MultiDegree>().unwrap(), d);
    }

    #[test]
    fn poly_text_round_trips(terms in prop::collection::vec((-9i64..10, 1usize..3, 1usize..3, 0u32..3), 0..6)) {
        let q = Field::Rational;
        let mut f = Poly::zero(q);
        for (c, i, j, e) in terms {
            f = f.add(&Poly::var(q, VarId::x(1, i, j)).pow(e).mul(&Poly::var(q, VarId::z(2, j, i))).scale(&q.from_i64(c)));
        }
        prop_assert_eq!(Poly::parse(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coset_sum_matches_full_sum(t in 0usize..4, r in 0usize..2, s in 0usize..2, entries in prop::collection::vec(-4i64..5, 64)) {
        let shape = DpShape::new(t, r, s);
        prop_assume!(!shape.is_trivial());
        let q = Field::Rational;
        let (n, m) = (shape.rows(), shape.cols());
        let mut next = entries.iter().cycle();
        let mut matrix = |rows, cols| Matrix::from_fn(rows, cols, |_, _| q.from_i64(*next.next().unwrap()));
        let (x, y, z) = (matrix(n, m), matrix(n, n), matrix(m, m));
        prop_assert_eq!(dp_eval(&x, &y, &z, shape, &q.one()).unwrap(), dp_full_sum(&x, &y, &z, shape).unwrap());
    }

    #[test]
    fn generators_are_homogeneous(t in 0usize..3, r in 0usize..2, s in 0usize..2, prime_field in any::<bool>()) {
        let zz = one_of_each();
        let d = MultiDegree::new(vec![t], vec![r], vec![s]);
        prop_assume!(!d.is_zero());
        let field = if prime_field { Field::from_characteristic(101).unwrap() } else { Field::Rational };
        let (_, entries) = generate_all(&zz, &d, field, DEFAULT_CAP, None).unwrap();
        for e in entries {
            match e.poly.multidegree(zz.arrow_counts()) {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(got) => prop_assert_eq!(got, d.clone()),
                Homogeneity::Inhomogeneous => prop_assert!(false, "inhomogeneous generator"),
            }
        }
    }

    #[test]
    fn generators_are_invariant(t in 0usize..3, r in 0usize..2, s in 0usize..2, seed in any::<u64>()) {
        let zz = one_of_each();
        let d = MultiDegree::new(vec![t], vec![r], vec![s]);
        prop_assume!(!d.is_zero());
        let field = Field::from_characteristic(2_147_483_647).unwrap();
        let (_, entries) = generate_all(&zz, &d, field, DEFAULT_CAP, None).unwrap();
        for e in entries {
            let outcome = check_invariance(&e.poly, &zz.coordinates(), 3, seed, field).unwrap();
            prop_assert!(outcome.passed(), "{:?}", outcome.counterexample);
        }
    }

    #[test]
    fn reordering_blocks_only_flips_the_sign(s in 1usize..4) {
        let zz = verify::bilinear_quiver(1);
        let d = MultiDegree::new(vec![], vec![], vec![s]);
        let en = enumerate_quintuples(&zz, &d, None).unwrap();
        for quint in &en.quintuples {
            let mut b: Vec<Vec<usize>> = quint.b().blocks().to_vec();
            let base = build_generator(&zz, quint, Field::Rational, DEFAULT_CAP).unwrap();
            b.reverse();
            let swapped = Quintuple::new(&zz, d.clone(), vec![], b).unwrap();
            let other = build_generator(&zz, &swapped, Field::Rational, DEFAULT_CAP).unwrap();
            prop_assert!(other == base || other == base.neg());
        }
    }
}
