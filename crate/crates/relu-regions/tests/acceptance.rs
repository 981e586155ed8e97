//! End-to-end acceptance suite.
//!
//! Each test checks one release criterion at its stated tolerance (exact
//! integer equality throughout — these are exact counters) and prints one
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use relu_regions::constructions::{
    bound_tradeoff, build_montufar, build_sawtooth, build_ternary, build_ternary_reference,
    lower_bound_montufar, lower_bound_ternary, MontufarParams, TernaryParams,
};
use relu_regions::net::compose;
use relu_regions::oracle1d::count_regions_1d;
use relu_regions::region::{check_composition_lemma, count_regions_exact, PreconditionStatus};
use relu_regions::ternarize::{
    sample_points, ternarize_net, verify_equiv, IntegerNetProfile, TernarizeOptions,
};
use relu_regions::{estimate_regions_grid, rat_int, BoxDomain, ReluNet, WeightClass};

fn finish(criterion: &str, failures: Vec<String>) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {status}");
    assert!(failures.is_empty(), "{criterion} failed:\n{}", failures.join("\n"));
}

#[test]
fn criterion_1_zigzag_exact_counts() {
    let cases: [(usize, usize, usize, u64); 7] = [
        (1, 2, 3, 4),
        (1, 3, 3, 9),
        (1, 4, 3, 16),
        (1, 2, 4, 8),
        (1, 3, 4, 27),
        (2, 4, 3, 16),
        (2, 6, 3, 81),
    ];
    let mut failures = Vec::new();
    for (n0, n, depth, expected) in cases {
        let started = Instant::now();
        let net = build_montufar(&MontufarParams::new(n0, n, depth).unwrap());
        let domain = BoxDomain::unit(n0);
        let report = count_regions_exact(&net, &domain).unwrap();
        let bound = lower_bound_montufar(n0, n, depth).unwrap();
        if report.region_count != expected {
            failures.push(format!(
                "({n0},{n},{depth}): region_count {} != expected {expected}",
                report.region_count
            ));
        }
        if BigUint::from(report.region_count) != bound {
            failures.push(format!("({n0},{n},{depth}): region_count {} != bound {bound}", report.region_count));
        }
        if n0 == 1 {
            let oracle = count_regions_1d(&net, &domain).unwrap();
            if oracle.region_count != expected {
                failures.push(format!(
                    "({n0},{n},{depth}): 1-D oracle {} != expected {expected}",
                    oracle.region_count
                ));
            }
        }
        let elapsed = started.elapsed();
        if elapsed >= Duration::from_secs(10) {
            failures.push(format!("({n0},{n},{depth}): took {elapsed:?}, budget 10s"));
        }
    }
    finish("1 (zigzag exact counts)", failures);
}

#[test]
fn criterion_2_ternary_exact_counts() {
    let cases: [(usize, usize, usize, u64); 5] = [
        (1, 8, 5, 4),
        (1, 12, 5, 9),
        (1, 8, 7, 8),
        (1, 12, 7, 27),
        (2, 12, 5, 16),
    ];
    let mut failures = Vec::new();
    for (n0, n, depth, expected) in cases {
        let started = Instant::now();
        let net = build_ternary(&TernaryParams::new(n0, n, depth).unwrap());
        let domain = BoxDomain::unit(n0);
        let report = count_regions_exact(&net, &domain).unwrap();
        let bound = lower_bound_ternary(n0, n, depth).unwrap();
        if report.region_count != expected {
            failures.push(format!(
                "({n0},{n},{depth}): region_count {} != expected {expected}",
                report.region_count
            ));
        }
        if BigUint::from(report.region_count) != bound {
            failures.push(format!("({n0},{n},{depth}): region_count {} != bound {bound}", report.region_count));
        }
        let elapsed = started.elapsed();
        if elapsed >= Duration::from_secs(30) {
            failures.push(format!("({n0},{n},{depth}): took {elapsed:?}, budget 30s"));
        }
    }
    finish("2 (ternary exact counts)", failures);
}

#[test]
fn criterion_3_ternary_functional_identity() {
    let mut failures = Vec::new();
    for (n0, n, depth) in [(1usize, 8usize, 5usize), (2, 12, 5)] {
        let params = TernaryParams::new(n0, n, depth).unwrap();
        let ternary = build_ternary(&params);
        let reference = build_ternary_reference(&params);
        let domain = BoxDomain::unit(n0);
        for (i, x) in sample_points(&domain, 1000, 0xC0FFEE).into_iter().enumerate() {
            let a = ternary.eval(&x).unwrap();
            let b = reference.eval(&x).unwrap();
            if a != b {
                failures.push(format!("({n0},{n},{depth}) sample {i}: {a:?} != {b:?} at {x:?}"));
                break;
            }
        }
    }
    finish("3 (ternary functional identity)", failures);
}

#[test]
fn criterion_4_ternarization_soundness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut failures = Vec::new();
    let interval = BoxDomain::unit(1);
    for case in 0..100 {
        let net = common::random_integer_net(&mut rng, 3, 3, 4);
        let n0 = net.input_dim();
        let domain = BoxDomain::cube(rat_int(-2), rat_int(2), n0).unwrap();
        let profile = IntegerNetProfile::new(net.clone(), 5).unwrap();
        for share in [false, true] {
            let (ternary, _) =
                ternarize_net(&profile, TernarizeOptions { share, strict_bias: false });
            if ternary.weight_class() != WeightClass::Ternary {
                failures.push(format!("case {case} share={share}: output not ternary"));
            }
            for layer in ternary.layers() {
                for row in layer.weights() {
                    for w in row {
                        if !w.is_integer() || w.numer().magnitude() > &1u32.into() {
                            failures.push(format!("case {case} share={share}: weight {w} outside ternary set"));
                        }
                    }
                }
            }
            let report = verify_equiv(&ternary, &net, &domain, 200, 1000 + case).unwrap();
            if !report.equivalent {
                failures.push(format!(
                    "case {case} share={share}: counterexample {:?}",
                    report.counterexample
                ));
            }
            if n0 == 1 {
                let source = count_regions_1d(&net, &interval).unwrap();
                let compiled = count_regions_1d(&ternary, &interval).unwrap();
                if source.region_count != compiled.region_count {
                    failures.push(format!(
                        "case {case} share={share}: 1-D regions {} != {}",
                        source.region_count, compiled.region_count
                    ));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("suite took {elapsed:?}, budget 60s"));
    }
    finish("4 (ternarization soundness)", failures);
}

#[test]
fn criterion_5_composition_lemma() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let domain = BoxDomain::unit(1);
    for inner_pieces in 1..=5usize {
        for outer_pieces in 1..=5usize {
            let inner = build_sawtooth(inner_pieces).unwrap();
            let outer = build_sawtooth(outer_pieces).unwrap();
            let check = check_composition_lemma(&inner, &outer, &domain).unwrap();
            let expected = (
                inner_pieces as u64,
                outer_pieces as u64,
                (inner_pieces * outer_pieces) as u64,
            );
            let got = (check.inner_regions, check.outer_regions, check.composed_regions);
            if got != expected {
                failures.push(format!("(p'={inner_pieces}, p={outer_pieces}): counts {got:?} != {expected:?}"));
            }
            if !check.product_holds {
                failures.push(format!("(p'={inner_pieces}, p={outer_pieces}): product identity failed"));
            }
            if check.precondition != PreconditionStatus::Verified {
                failures.push(format!(
                    "(p'={inner_pieces}, p={outer_pieces}): precondition {:?}",
                    check.precondition
                ));
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(5) {
        failures.push(format!("suite took {elapsed:?}, budget 5s"));
    }
    finish("5 (composition lemma)", failures);
}

/// Every 1-input net the other criteria exercise, plus fresh random ones.
fn one_input_corpus() -> Vec<ReluNet> {
    let mut nets: Vec<ReluNet> = Vec::new();
    for (n, depth) in [(2, 3), (3, 3), (4, 3), (2, 4), (3, 4)] {
        nets.push(build_montufar(&MontufarParams::new(1, n, depth).unwrap()));
    }
    for (n, depth) in [(8, 5), (12, 5), (8, 7), (12, 7)] {
        nets.push(build_ternary(&TernaryParams::new(1, n, depth).unwrap()));
    }
    for pieces in 1..=5 {
        nets.push(build_sawtooth(pieces).unwrap());
    }
    for inner in 1..=5usize {
        for outer in 1..=5usize {
            let composed = compose(
                &build_sawtooth(outer).unwrap(),
                &build_sawtooth(inner).unwrap(),
            )
            .unwrap();
            nets.push(composed);
        }
    }
    // the 1-input slice of the ternarization corpus, sources and outputs
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100 {
        let net = common::random_integer_net(&mut rng, 3, 3, 4);
        if net.input_dim() != 1 {
            continue;
        }
        let profile = IntegerNetProfile::new(net.clone(), 5).unwrap();
        for share in [false, true] {
            let (ternary, _) =
                ternarize_net(&profile, TernarizeOptions { share, strict_bias: false });
            nets.push(ternary);
        }
        nets.push(net);
    }
    // 50 fresh random 1-input nets
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..50 {
        nets.push(common::random_integer_net_with_dim(&mut rng, 1, 3, 4));
    }
    nets
}

#[test]
fn criterion_6_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let domain = BoxDomain::unit(1);
    for (i, net) in one_input_corpus().into_iter().enumerate() {
        let exact = count_regions_exact(&net, &domain).unwrap();
        let oracle = count_regions_1d(&net, &domain).unwrap();
        if exact.region_count != oracle.region_count {
            failures.push(format!(
                "net {i}: exact {} != oracle {} ({})",
                exact.region_count,
                oracle.region_count,
                relu_regions::json::net_to_json(&net)
            ));
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("suite took {elapsed:?}, budget 60s"));
    }
    finish("6 (oracle equivalence)", failures);
}

#[test]
fn criterion_7_sandwich_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    for case in 0..50 {
        let net = common::random_integer_net(&mut rng, 2, 3, 4);
        let domain = BoxDomain::unit(net.input_dim());
        let report = count_regions_exact(&net, &domain).unwrap();
        let estimate = estimate_regions_grid(&net, &domain, 64).unwrap();
        let ok = estimate <= report.distinct_affine_count
            && report.distinct_affine_count <= report.region_count
            && report.region_count <= report.cell_count;
        if !ok {
            failures.push(format!(
                "case {case}: grid {estimate} / distinct {} / regions {} / cells {}",
                report.distinct_affine_count, report.region_count, report.cell_count
            ));
        }
    }
    finish("7 (sandwich property)", failures);
}

#[test]
fn criterion_8_tradeoff_remark() {
    let mut failures = Vec::new();
    for (n0, n, depth) in [(1usize, 4usize, 3usize), (2, 4, 3)] {
        let report = bound_tradeoff(n0, n, depth).unwrap();
        if report.montufar != BigUint::from(16u32) {
            failures.push(format!("({n0},{n},{depth}): montufar bound {}", report.montufar));
        }
        if report.ternary_double_depth != report.montufar {
            failures.push(format!(
                "({n0},{n},{depth}): double-depth ternary {} != montufar {}",
                report.ternary_double_depth, report.montufar
            ));
        }
        if !report.double_depth_at_least_montufar {
            failures.push(format!("({n0},{n},{depth}): inequality flag false"));
        }
    }
    finish("8 (bound trade-off)", failures);
}
