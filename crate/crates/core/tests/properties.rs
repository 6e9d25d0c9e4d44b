use firefight::harness::{parse_instance, serialize_instance, InstanceFile};
use firefight::instances::{random_cactus, random_sequence, random_tree, random_unicyclic};
use firefight::measures::{count_safe, covered_by_vertex, covered_set};
use firefight::online::{run_algorithm, AlgorithmKind};
use firefight::opt::{normalize_nonredundant, solve_opt, SolverConfig};
use firefight::ratio::Ratio;
use firefight::{replay, validate_and_decompose, Graph, GraphClass, Instance, VertexSet};
use proptest::prelude::*;

fn cactus() -> impl Strategy<Value = Graph> {
    (2usize..=18, 0.0f64..=1.0, 3usize..=8, any::<u64>())
        .prop_map(|(n, frac, len, seed)| random_cactus(n, frac, len, seed).unwrap())
}

fn small_instance() -> impl Strategy<Value = Instance> {
    (3usize..=11, 0.0f64..=1.0, 3usize..=8, any::<u64>(), 1usize..=4, 1usize..=5, any::<u64>()).prop_map(
        |(n, frac, len, seed, seq_len, budget, seq_seed)| {
            let g = random_cactus(n, frac, len, seed).unwrap();
            Instance::new(g, random_sequence(seq_len, budget, false, seq_seed))
        },
    )
}

fn subset(g: &Graph, bits: u64) -> VertexSet {
    let root = g.root();
    VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&v| v != root && bits >> (v % 64) & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_cacti_decompose(g in cactus()) {
        let d = validate_and_decompose(&g).unwrap();
        prop_assert_eq!(g.edge_count(), g.n() - 1 + d.cycles().len());
        for (u, v) in g.edges() {
            let on: Vec<usize> = d.cycles().iter().enumerate()
                .filter(|(_, c)| (0..c.len()).any(|i| {
                    let (a, b) = (c[i], c[(i + 1) % c.len()]);
                    (a, b) == (u, v) || (b, a) == (u, v)
                }))
                .map(|(i, _)| i)
                .collect();
            prop_assert!(on.len() <= 1);
            prop_assert_eq!(d.edge_cycle(u, v), on.first().copied());
        }
    }

    #[test]
    fn count_is_monotone(g in cactus(), bits in any::<u64>()) {
        let removed = subset(&g, bits);
        for d in 0..=g.n() {
            prop_assert!(count_safe(&g, &removed, d + 1) <= count_safe(&g, &removed, d));
        }
    }

    #[test]
    fn covered_sets_grow_with_their_argument(g in cactus(), a in any::<u64>(), b in any::<u64>()) {
        let none = VertexSet::new(g.n());
        let small = subset(&g, a & b);
        let large = subset(&g, a);
        let k_small = covered_set(&g, &none, &small).unwrap();
        let k_large = covered_set(&g, &none, &large).unwrap();
        prop_assert!(k_small.is_subset(&k_large));
        prop_assert!(large.is_subset(&k_large));
        let mut separate = VertexSet::new(g.n());
        for v in large.iter() {
            separate.union_with(&covered_by_vertex(&g, v).unwrap());
        }
        prop_assert!(separate.is_subset(&k_large));
    }

    #[test]
    fn instance_files_round_trip(inst in small_instance(), named in any::<bool>()) {
        let file = InstanceFile::new(named.then(|| "sample-1".to_string()), inst);
        prop_assert_eq!(parse_instance(&serialize_instance(&file)).unwrap(), file);
    }

    #[test]
    fn strategies_are_deterministic_and_legal(inst in small_instance()) {
        let class = validate_and_decompose(&inst.graph).unwrap().class();
        for kind in AlgorithmKind::ALL.into_iter().filter(|k| k.accepts(class)) {
            let a = run_algorithm(&inst, kind).unwrap();
            let b = run_algorithm(&inst, kind).unwrap();
            prop_assert_eq!(&a.trace, &b.trace);
            for (round, vs) in a.trace.schedule().by_round() {
                prop_assert!(vs.len() <= inst.firefighters(round));
            }
            prop_assert_eq!(replay(&inst, &a.trace.schedule()).unwrap().0, a.profit);
        }
    }

    #[test]
    fn optimum_dominates_and_normalizes(inst in small_instance()) {
        let class = validate_and_decompose(&inst.graph).unwrap().class();
        let opt = solve_opt(&inst, &SolverConfig::default()).unwrap();
        prop_assert_eq!(replay(&inst, &opt.schedule).unwrap().0, opt.value);
        for kind in AlgorithmKind::ALL.into_iter().filter(|k| k.accepts(class)) {
            prop_assert!(run_algorithm(&inst, kind).unwrap().profit <= opt.value);
        }
        let normalized = normalize_nonredundant(&inst, &opt.schedule).unwrap();
        prop_assert_eq!(replay(&inst, &normalized).unwrap().0, opt.value);
        prop_assert_eq!(normalize_nonredundant(&inst, &normalized).unwrap(), normalized.clone());
        let d = validate_and_decompose(&inst.graph).unwrap();
        for c in d.cycles() {
            prop_assert!(normalized.vertices().filter(|v| c.contains(v)).count() <= 2);
        }
    }

    #[test]
    fn generators_hit_their_classes(n in 4usize..=20, seed in any::<u64>(), on_root in any::<bool>()) {
        let t = random_tree(n, seed).unwrap();
        prop_assert_eq!(validate_and_decompose(&t).unwrap().class(), GraphClass::Tree);
        let u = random_unicyclic(n, n, on_root, seed).unwrap();
        let d = validate_and_decompose(&u).unwrap();
        prop_assert_eq!(d.class(), GraphClass::OneAlmostTree);
        prop_assert_eq!(d.is_root_cycle(0), on_root);
    }

    #[test]
    fn sequences_respect_budget_and_parity(len in 0usize..=10, budget in 0usize..=12, even in any::<bool>(), seed in any::<u64>()) {
        let s = random_sequence(len, budget, even, seed);
        prop_assert_eq!(s.len(), len);
        prop_assert!(s.iter().sum::<usize>() <= budget);
        if even {
            prop_assert!(s.iter().all(|f| f % 2 == 0));
        }
        prop_assert_eq!(random_sequence(len, budget, even, seed), s);
    }

    #[test]
    fn exact_ratio_order_agrees_with_floats(a in 0usize..50, b in 1usize..50, c in 0usize..50, d in 1usize..50) {
        let (x, y) = (Ratio::new(a, b), Ratio::new(c, d));
        let by_float = x.value().partial_cmp(&y.value()).unwrap();
        if (x.value() - y.value()).abs() > 1e-12 {
            prop_assert_eq!(x.cmp_exact(&y), by_float);
        }
        prop_assert_eq!(x.at_least(c, d), x.cmp_exact(&y).is_ge());
    }
}
