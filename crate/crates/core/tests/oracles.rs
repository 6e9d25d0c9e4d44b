mod common;

use common::oracles::*;
use firefight::instances::{random_cactus, random_sequence, rng};
use firefight::measures::{count_safe, max_depth_keeping};
use firefight::opt::{solve_opt, SolverConfig};
use firefight::{validate_and_decompose, Instance, Tolerance, VertexSet};
use rand::Rng;

#[test]
fn covered_set_matches_path_enumeration() {
    assert_eq!(covered_set_mismatches(300, 1), 0);
}

#[test]
fn contracted_views_match_status_simulation() {
    assert_eq!(reduced_view_mismatches(300, 2), 0);
}

#[test]
fn memoized_search_matches_plain_search() {
    assert_eq!(memo_mismatches(60, 3), 0);
}

#[test]
fn solver_matches_exhaustive_play() {
    let mut r = rng(4);
    for _ in 0..150 {
        let n = r.gen_range(2..=8);
        let g = random_cactus(n, r.gen_range(0.0..=1.0), r.gen_range(3..=8), r.gen()).unwrap();
        let len = r.gen_range(1..=3);
        let inst = Instance::new(g, random_sequence(len, 4, false, r.gen()));
        let fast = solve_opt(&inst, &SolverConfig::default()).unwrap().value;
        assert_eq!(fast, brute_force_opt(&inst), "{inst:?}");
    }
}

#[test]
fn exhaustive_play_known_values() {
    use firefight::instances::make_tadpole;
    let tadpole = make_tadpole(10, 3).unwrap();
    assert_eq!(brute_force_opt(&Instance::new(tadpole.clone(), vec![1])), 3);
    assert_eq!(brute_force_opt(&Instance::new(tadpole, vec![1, 1])), 9);
}

#[test]
fn cactus_recognition_matches_cycle_enumeration() {
    let mut r = rng(5);
    let mut both = [0usize; 2];
    for _ in 0..500 {
        let n = r.gen_range(3..=7);
        let g = random_connected_graph(n, r.gen_range(0..=5), r.gen());
        let expected = is_cactus_by_enumeration(&g);
        let decomp = validate_and_decompose(&g);
        assert_eq!(decomp.is_ok(), expected, "{g:?}");
        both[expected as usize] += 1;
        if let Ok(d) = decomp {
            let cycles = simple_cycles(&g);
            assert_eq!(d.cycles().len(), cycles.len());
            assert_eq!(g.edge_count(), n - 1 + cycles.len());
            for c in d.cycles() {
                let mut edges: Vec<(usize, usize)> = (0..c.len())
                    .map(|i| {
                        let (a, b) = (c[i], c[(i + 1) % c.len()]);
                        (a.min(b), a.max(b))
                    })
                    .collect();
                edges.sort_unstable();
                assert!(cycles.contains(&edges));
            }
        }
    }
    assert!(both[0] > 50 && both[1] > 50, "{both:?}");
}

#[test]
fn tolerance_is_the_deepest_level_keeping_m() {
    let mut r = rng(6);
    for _ in 0..200 {
        let n = r.gen_range(2..=14);
        let g = random_cactus(n, 0.5, 6, r.gen()).unwrap();
        let none = VertexSet::new(n);
        for m in 1..=n + 1 {
            let expected = if count_safe(&g, &none, 0) < m {
                Tolerance::NoneBelow
            } else if count_safe(&g, &none, n + 1) >= m {
                Tolerance::Depth(usize::MAX)
            } else {
                Tolerance::Depth((0..=n).filter(|&d| count_safe(&g, &none, d) >= m).max().unwrap())
            };
            assert_eq!(max_depth_keeping(&g, m).unwrap(), expected);
        }
    }
}
