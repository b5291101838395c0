//! Property tests over random instances and solutions.

mod common;

use proptest::prelude::*;
use wktrp::milp::{assignment_from_solution, decode_assignment, objective_from_assignment};
use wktrp::model::{fold_service_times, FoldDirection};
use wktrp::{evaluate_weighted_latency, exact_solve, verify_constraints, InstanceF32, InstanceF64, Solution};

use common::{random_instance, random_solution, rng};

fn case() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=10).prop_flat_map(|(seed, n)| (Just(seed), Just(n), 1..=n.min(4)))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn cost_ignores_route_order((seed, n, k) in case(), rotate in 0usize..4) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, n, k);
        let sol = random_solution(&mut r, n, k);
        let mut routes = sol.routes().to_vec();
        routes.rotate_left(rotate % k);
        routes.reverse();
        let a = evaluate_weighted_latency(&inst, &sol).unwrap().total;
        let b = evaluate_weighted_latency(&inst, &Solution::new(routes)).unwrap().total;
        prop_assert!(close(a, b));
    }

    #[test]
    fn incoming_fold_preserves_cost((seed, n, k) in case()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, n, k);
        let sol = random_solution(&mut r, n, k);
        let folded = fold_service_times(&inst, FoldDirection::Incoming);
        prop_assert!(folded.service_times().iter().all(|&s| s == 0.0));
        let a = evaluate_weighted_latency(&inst, &sol).unwrap().total;
        let b = evaluate_weighted_latency(&folded, &sol).unwrap().total;
        prop_assert!(close(a, b));
    }

    #[test]
    fn objective_is_linear_in_weights((seed, n, k) in case(), alpha in 0.01f64..10.0) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, n, k);
        let sol = random_solution(&mut r, n, k);
        let scaled: Vec<f64> = inst.weights().iter().map(|w| alpha * w).collect();
        let a = evaluate_weighted_latency(&inst, &sol).unwrap().total;
        let b = evaluate_weighted_latency(&inst.clone().with_weights(scaled).unwrap(), &sol).unwrap().total;
        prop_assert!(close(alpha * a, b));
    }

    #[test]
    fn formulation_accepts_every_solution((seed, n, k) in case()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, n, k);
        let sol = random_solution(&mut r, n, k);
        let a = assignment_from_solution(&inst, &sol).unwrap();
        prop_assert!(verify_constraints(&inst, &a).is_empty());
        prop_assert_eq!(decode_assignment(&inst, &a).unwrap().canonical(), sol.canonical());
        let direct = evaluate_weighted_latency(&inst, &sol).unwrap().total;
        prop_assert!(close(objective_from_assignment(&inst, &a), direct));
    }

    #[test]
    fn exact_optimum_survives_relabelling_and_fold(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let k = 1 + (seed as usize) % n.min(3);
        let inst = random_instance(&mut r, n, k);
        let base = exact_solve(&inst, None).unwrap().cost;
        let folded = exact_solve(&fold_service_times(&inst, FoldDirection::Incoming), None).unwrap().cost;
        prop_assert!(close(base, folded));
        // reverse the client numbering
        let map = |v: usize| if v == 0 { 0 } else { n + 1 - v };
        let rows = (0..=n).map(|i| (0..=n).map(|j| inst.travel(map(i), map(j))).collect()).collect();
        let w = (1..=n).map(|v| inst.weight(map(v))).collect();
        let s = (1..=n).map(|v| inst.service(map(v))).collect();
        let relabelled = InstanceF64::from_rows(k, rows, w, s).unwrap();
        prop_assert!(close(base, exact_solve(&relabelled, None).unwrap().cost));
    }

    #[test]
    fn single_precision_tracks_double((seed, n, k) in case()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, n, k);
        let sol = random_solution(&mut r, n, k);
        let rows = (0..=n).map(|i| (0..=n).map(|j| inst.travel(i, j) as f32).collect()).collect();
        let w = inst.weights().iter().map(|&x| x as f32).collect();
        let s = inst.service_times().iter().map(|&x| x as f32).collect();
        let single = InstanceF32::from_rows(k, rows, w, s).unwrap();
        let a = evaluate_weighted_latency(&inst, &sol).unwrap().total;
        let b = evaluate_weighted_latency(&single, &sol).unwrap().total as f64;
        prop_assert!((a - b).abs() <= 1e-4 * a.max(1.0));
    }
}
