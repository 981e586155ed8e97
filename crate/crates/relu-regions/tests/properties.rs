//! Property tests for the crate-wide invariants: exactness, pattern
//! consistency, composition soundness, the count sandwich, and agreement
//! between the two independent counters.

mod common;

use proptest::collection::vec;
use proptest::prelude::*;

use relu_regions::net::compose;
use relu_regions::oracle1d;
use relu_regions::rational::{rat, rat_int};
use relu_regions::region::{
    count_regions_exact, count_regions_exact_with_limits, estimate_regions_grid,
    EnumerationLimits,
};
use relu_regions::{ActivationKind, BoxDomain, Layer, Rational, ReluNet, WeightClass};

fn arb_layer(width: usize, fan_in: usize, activation: ActivationKind) -> impl Strategy<Value = Layer> {
    (
        vec(vec(-3i64..=3, fan_in), width),
        vec(-3i64..=3, width),
    )
        .prop_map(move |(weights, bias)| {
            let rows: Vec<&[i64]> = weights.iter().map(Vec::as_slice).collect();
            Layer::from_integers(&rows, &bias, activation)
        })
}

/// Small random integer nets: `input_dim` inputs, one or two hidden ReLU
/// layers of width ≤ 3, `output_dim` outputs.
fn arb_net(input_dim: usize, output_dim: usize) -> impl Strategy<Value = ReluNet> {
    (1usize..=2, 1usize..=3, 1usize..=3).prop_flat_map(move |(depth, w1, w2)| {
        let widths: Vec<usize> = if depth == 1 { vec![w1] } else { vec![w1, w2] };
        let mut fan_in = input_dim;
        let mut strategies = Vec::new();
        for &w in &widths {
            strategies.push(arb_layer(w, fan_in, ActivationKind::Relu).boxed());
            fan_in = w;
        }
        strategies.push(arb_layer(output_dim, fan_in, ActivationKind::Identity).boxed());
        strategies.prop_map(move |layers| {
            ReluNet::with_inferred_class(input_dim, layers).expect("generated net is well-formed")
        })
    })
}

fn arb_point(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    vec((-24i64..=24, 1i64..=7), dim)
        .prop_map(|coords| coords.into_iter().map(|(n, d)| rat(n, d)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_of_integer_net_at_integer_point_is_integer(
        net in arb_net(2, 1),
        coords in vec(-9i64..=9, 2),
    ) {
        prop_assert!(matches!(net.weight_class(), WeightClass::Integer | WeightClass::Ternary));
        let x: Vec<Rational> = coords.into_iter().map(rat_int).collect();
        let out = net.eval(&x).unwrap();
        for v in out {
            prop_assert!(v.is_integer());
        }
    }

    #[test]
    fn eval_matches_affine_map_of_observed_pattern(
        net in arb_net(2, 1),
        x in arb_point(2),
    ) {
        let (out, pattern) = net.eval_with_pattern(&x).unwrap();
        let map = net.affine_map_for_pattern(&pattern).unwrap();
        prop_assert_eq!(out, map.apply(&x));
    }

    #[test]
    fn composition_is_pointwise_sound(
        inner in arb_net(2, 2),
        outer in arb_net(2, 1),
        x in arb_point(2),
    ) {
        let fused = compose(&outer, &inner).unwrap();
        let nested = outer.eval(&inner.eval(&x).unwrap()).unwrap();
        prop_assert_eq!(fused.eval(&x).unwrap(), nested);
    }

    #[test]
    fn json_round_trip_is_exact(net in arb_net(2, 2)) {
        let text = relu_regions::json::net_to_json(&net);
        let parsed = relu_regions::json::net_from_json(&text).unwrap();
        prop_assert_eq!(parsed, net);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_estimate_is_sandwiched_by_exact_counts(net in arb_net(2, 1)) {
        let domain = BoxDomain::unit(2);
        let report = count_regions_exact(&net, &domain).unwrap();
        let estimate = estimate_regions_grid(&net, &domain, 8).unwrap();
        prop_assert!(estimate <= report.distinct_affine_count);
        prop_assert!(report.distinct_affine_count <= report.region_count);
        prop_assert!(report.region_count <= report.cell_count);
    }

    #[test]
    fn exact_counter_agrees_with_breakpoint_oracle(net in arb_net(1, 1)) {
        let domain = BoxDomain::interval(rat_int(-1), rat_int(1)).unwrap();
        let exact = count_regions_exact(&net, &domain).unwrap();
        let oracle = oracle1d::count_regions_1d(&net, &domain).unwrap();
        prop_assert_eq!(exact.region_count, oracle.region_count);
        prop_assert_eq!(exact.cell_count, oracle.cell_count);
        prop_assert_eq!(exact.distinct_affine_count, oracle.distinct_affine_count);
    }

    #[test]
    fn counts_are_independent_of_branch_order(net in arb_net(2, 1)) {
        let domain = BoxDomain::unit(2);
        let a = count_regions_exact(&net, &domain).unwrap();
        let b = count_regions_exact_with_limits(
            &net,
            &domain,
            &EnumerationLimits { inactive_first: true, ..Default::default() },
        )
        .unwrap();
        prop_assert_eq!(a.cell_count, b.cell_count);
        prop_assert_eq!(a.region_count, b.region_count);
        prop_assert_eq!(a.distinct_affine_count, b.distinct_affine_count);
    }

    #[test]
    fn cell_witnesses_are_interior_and_consistent(net in arb_net(2, 1)) {
        let domain = BoxDomain::unit(2);
        let cells = relu_regions::enumerate_cells(&net, &domain).unwrap();
        for cell in &cells {
            prop_assert!(domain.contains(&cell.witness, true));
            let eval = net.eval(&cell.witness).unwrap();
            prop_assert_eq!(&eval, &cell.affine.apply(&cell.witness));
            let map = net.affine_map_for_pattern(&cell.pattern).unwrap();
            prop_assert_eq!(&map, &cell.affine);
        }
    }
}

#[test]
fn ternarized_nets_preserve_1d_region_counts() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1005);
    let domain = BoxDomain::unit(1);
    for _ in 0..20 {
        let net = common::random_integer_net_with_dim(&mut rng, 1, 3, 4);
        let profile =
            relu_regions::ternarize::IntegerNetProfile::new(net.clone(), 5).unwrap();
        for share in [false, true] {
            let (ternary, _) = relu_regions::ternarize::ternarize_net(
                &profile,
                relu_regions::ternarize::TernarizeOptions { share, strict_bias: false },
            );
            let source = oracle1d::count_regions_1d(&net, &domain).unwrap();
            let compiled = oracle1d::count_regions_1d(&ternary, &domain).unwrap();
            assert_eq!(
                source.region_count, compiled.region_count,
                "share={share} net={}",
                relu_regions::json::net_to_json(&net)
            );
        }
    }
}

#[test]
fn zigzag_and_ternary_counts_match_bounds_beyond_the_release_set() {
    use relu_regions::constructions::{
        build_montufar, build_ternary, lower_bound_montufar, lower_bound_ternary,
        MontufarParams, TernaryParams,
    };
    for (n0, n, depth) in [(1usize, 5usize, 3usize), (1, 2, 5), (3, 6, 3)] {
        let net = build_montufar(&MontufarParams::new(n0, n, depth).unwrap());
        let report = count_regions_exact(&net, &BoxDomain::unit(n0)).unwrap();
        let bound = lower_bound_montufar(n0, n, depth).unwrap();
        assert_eq!(num_bigint::BigUint::from(report.region_count), bound, "({n0},{n},{depth})");
    }
    for (n0, n, depth) in [(1usize, 16usize, 5usize), (2, 12, 7)] {
        let net = build_ternary(&TernaryParams::new(n0, n, depth).unwrap());
        let report = count_regions_exact(&net, &BoxDomain::unit(n0)).unwrap();
        let bound = lower_bound_ternary(n0, n, depth).unwrap();
        assert_eq!(num_bigint::BigUint::from(report.region_count), bound, "({n0},{n},{depth})");
    }
}

#[test]
fn counts_stay_exact_at_larger_scale() {
    use relu_regions::constructions::{build_montufar, build_sawtooth, MontufarParams};
    let domain = BoxDomain::unit(1);
    // wide shallow zigzag: one region per tooth
    let net = build_montufar(&MontufarParams::new(1, 20, 2).unwrap());
    let exact = count_regions_exact(&net, &domain).unwrap();
    assert_eq!(exact.region_count, 20);
    // the oracle scales further
    let report = oracle1d::count_regions_1d(&build_sawtooth(500).unwrap(), &domain).unwrap();
    assert_eq!(report.region_count, 500);
}

#[test]
fn oracle_agreement_survives_degenerate_weights() {
    // weights drawn from {-1, 0, 1} maximize duplicated rows, cancellations
    // and identically-zero units — the hard cases for cell merging
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(777);
    let domain = BoxDomain::interval(rat_int(-1), rat_int(1)).unwrap();
    for case in 0..200 {
        let hidden = rng.gen_range(1..=3);
        let mut layers = Vec::new();
        let mut fan_in = 1usize;
        for _ in 0..hidden {
            let width = rng.gen_range(1..=4);
            let weights: Vec<Vec<i64>> = (0..width)
                .map(|_| (0..fan_in).map(|_| rng.gen_range(-1..=1)).collect())
                .collect();
            let bias: Vec<i64> = (0..width).map(|_| rng.gen_range(-1..=1)).collect();
            let rows: Vec<&[i64]> = weights.iter().map(Vec::as_slice).collect();
            layers.push(Layer::from_integers(&rows, &bias, ActivationKind::Relu));
            fan_in = width;
        }
        let weights: Vec<i64> = (0..fan_in).map(|_| rng.gen_range(-1..=1)).collect();
        layers.push(Layer::from_integers(
            &[&weights],
            &[rng.gen_range(-1..=1)],
            ActivationKind::Identity,
        ));
        let net = ReluNet::with_inferred_class(1, layers).unwrap();
        let exact = count_regions_exact(&net, &domain).unwrap();
        let oracle = oracle1d::count_regions_1d(&net, &domain).unwrap();
        assert_eq!(
            exact.region_count,
            oracle.region_count,
            "case {case}: {}",
            relu_regions::json::net_to_json(&net)
        );
        assert_eq!(exact.cell_count, oracle.cell_count, "case {case}");
    }
}

#[test]
fn sawtooth_composition_counts_multiply() {
    let domain = BoxDomain::unit(1);
    for p in 1..=5usize {
        for q in 1..=5usize {
            let hp = relu_regions::constructions::build_sawtooth(p).unwrap();
            let hq = relu_regions::constructions::build_sawtooth(q).unwrap();
            let composed = compose(&hq, &hp).unwrap();
            let report = oracle1d::count_regions_1d(&composed, &domain).unwrap();
            assert_eq!(report.region_count, (p * q) as u64, "p={p} q={q}");
        }
    }
}
