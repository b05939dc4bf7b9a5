use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qtsp::adjacent::{solve_adjacent_dee, solve_adjacent_pv, solve_adjacent_see};
use qtsp::format::InstanceFile;
use qtsp::graphs::{Family, GStarGraph, MeeGraph, NeighborhoodGraph, PvGraph};
use qtsp::instance::{validate_tour, Instance};
use qtsp::matching::{solve_assignment, AssignmentInstance};
use qtsp::model::{eval_adjacent, eval_full, eval_rank, CostModel, Tour};
use qtsp::reductions::generators::{random_adjacent, random_rank};
use qtsp::reductions::reduce;

fn gstar() -> impl Strategy<Value = GStarGraph> {
    prop::collection::vec(3usize..=5, 2..=3).prop_map(|c| GStarGraph::new(&c).unwrap())
}

fn pick(tours: impl Iterator<Item = Tour>, count: u128, idx: u64) -> Tour {
    let mut it = tours;
    it.nth((idx as u128 % count) as usize).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn see_and_dee_choices_decode(g in gstar(), idx in any::<u64>()) {
        let t = pick(g.see_tours(), g.see_count(), idx);
        let c = g.decode_see(&t).unwrap();
        prop_assert_eq!(g.see_tour(&c).unwrap(), t.clone());
        prop_assert!(g.decode_dee(&t).is_none());
        let d = pick(g.dee_tours(), g.dee_count(), idx);
        prop_assert_eq!(g.dee_tour(&g.decode_dee(&d).unwrap()).unwrap(), d);
    }

    #[test]
    fn pv_and_mee_choices_decode(half in 2usize..=7, r in 3usize..=6, extra in 0usize..=3, idx in any::<u64>()) {
        let pv = PvGraph::new(2 * half).unwrap();
        let t = pick(pv.tours(), pv.count(), idx);
        prop_assert_eq!(pv.tour(&pv.decode(&t).unwrap()).unwrap(), t);
        let s = 3.max(r - extra.min(r - 3));
        let mee = MeeGraph::new(r, s).unwrap();
        let t = pick(mee.tours(), mee.count(), idx);
        prop_assert_eq!(mee.tour(&mee.decode(&t).unwrap()).unwrap(), t);
    }

    #[test]
    fn rank_model_equals_its_expansion(g in gstar(), p in 1usize..=2, seed in any::<u64>(), idx in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_rank(g.graph(), p, -5, 5, true, &mut rng);
        let t = pick(g.see_tours(), g.see_count(), idx);
        prop_assert_eq!(eval_rank(&t, g.graph(), &model).unwrap(), eval_full(&t, g.graph(), &model.to_full()).unwrap());
    }

    #[test]
    fn reduction_maps_tours_to_paths_of_equal_cost(g in gstar(), dee in any::<bool>(), seed in any::<u64>(), idx in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_rank(g.graph(), 2, -5, 5, true, &mut rng);
        let family = if dee { Family::Dee } else { Family::See };
        let t = if dee { pick(g.dee_tours(), g.dee_count(), idx) } else { pick(g.see_tours(), g.see_count(), idx) };
        let ng = NeighborhoodGraph::GStar(g.clone());
        let map = reduce(&ng, family, &model).unwrap();
        let path = map.tour_to_path(&t).unwrap();
        prop_assert_eq!(map.path_to_tour(&path).unwrap(), t.clone());
        prop_assert_eq!(map.qspp.path_objective(&path).unwrap(), eval_rank(&t, g.graph(), &model).unwrap());
    }

    #[test]
    fn adjacent_dps_lower_bound_every_tour(g in gstar(), seed in any::<u64>(), idx in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_adjacent(g.graph(), 0, 9, &mut rng);
        let see = solve_adjacent_see(&g, &q).unwrap();
        let dee = solve_adjacent_dee(&g, &q).unwrap();
        prop_assert!(see.value <= eval_adjacent(&pick(g.see_tours(), g.see_count(), idx), &q).unwrap());
        prop_assert!(dee.value <= eval_adjacent(&pick(g.dee_tours(), g.dee_count(), idx), &q).unwrap());
        let ng = NeighborhoodGraph::GStar(g);
        for (fam, sol) in [(Family::See, see), (Family::Dee, dee)] {
            let inst = Instance::new(ng.clone(), fam, CostModel::Adjacent(q.clone())).unwrap();
            prop_assert!(validate_tour(&sol.tour, &inst).ok());
        }
    }

    #[test]
    fn adjacent_pv_lower_bounds_every_tour(half in 2usize..=20, seed in any::<u64>(), idx in any::<u64>()) {
        let g = PvGraph::new(2 * half).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_adjacent(g.graph(), 0, 9, &mut rng);
        let sol = solve_adjacent_pv(&g, &q).unwrap();
        let some = pick(g.tours(), g.count().min(1 << 12), idx);
        prop_assert!(sol.value <= eval_adjacent(&some, &q).unwrap());
    }

    #[test]
    fn assignment_beats_any_permutation(w in prop::collection::vec(prop::collection::vec(-9i64..=9, 6), 6), perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let sol = solve_assignment(&AssignmentInstance::new(w.clone()).unwrap());
        let mut cols = sol.matching.clone();
        cols.sort();
        prop_assert_eq!(cols, (0..6).collect::<Vec<_>>());
        let other: i64 = perm.iter().enumerate().map(|(i, &j)| w[i][j]).sum();
        prop_assert!(sol.value <= other);
    }

    #[test]
    fn instance_files_roundtrip(g in gstar(), seed in any::<u64>(), adjacent in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let costs = if adjacent {
            CostModel::Adjacent(random_adjacent(g.graph(), 0, 9, &mut rng))
        } else {
            CostModel::Rank(random_rank(g.graph(), 2, -5, 5, true, &mut rng))
        };
        let inst = Instance::new(NeighborhoodGraph::GStar(g), Family::Dee, costs).unwrap();
        let file = InstanceFile::new(inst, serde_json::json!({"seed": seed}));
        let text = file.render();
        let back = InstanceFile::parse(&text).unwrap();
        prop_assert_eq!(back.render(), text);
        prop_assert_eq!(back, file);
    }
}
