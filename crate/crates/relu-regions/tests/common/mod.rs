//! Shared helpers for the integration suites: seeded random integer nets in
//! the shape the ternarizer and the counters are exercised with.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use relu_regions::{ActivationKind, Layer, ReluNet};

pub const WEIGHT_BOUND: i64 = 5;

fn random_layer(
    rng: &mut ChaCha8Rng,
    width: usize,
    fan_in: usize,
    activation: ActivationKind,
) -> Layer {
    let weights: Vec<Vec<i64>> = (0..width)
        .map(|_| (0..fan_in).map(|_| rng.gen_range(-WEIGHT_BOUND..=WEIGHT_BOUND)).collect())
        .collect();
    let bias: Vec<i64> = (0..width).map(|_| rng.gen_range(-WEIGHT_BOUND..=WEIGHT_BOUND)).collect();
    let rows: Vec<&[i64]> = weights.iter().map(Vec::as_slice).collect();
    Layer::from_integers(&rows, &bias, activation)
}

/// A random integer net with the given input dimension: 1..=max_hidden ReLU
/// layers of width 1..=max_width, a single-output identity head, and all
/// coefficients in `[-5, 5]`.
pub fn random_integer_net_with_dim(
    rng: &mut ChaCha8Rng,
    input_dim: usize,
    max_hidden: usize,
    max_width: usize,
) -> ReluNet {
    let hidden = rng.gen_range(1..=max_hidden);
    let mut layers = Vec::with_capacity(hidden + 1);
    let mut fan_in = input_dim;
    for _ in 0..hidden {
        let width = rng.gen_range(1..=max_width);
        layers.push(random_layer(rng, width, fan_in, ActivationKind::Relu));
        fan_in = width;
    }
    layers.push(random_layer(rng, 1, fan_in, ActivationKind::Identity));
    ReluNet::with_inferred_class(input_dim, layers).expect("random net is well-formed")
}

/// As above with a random input dimension in `1..=max_input_dim`.
pub fn random_integer_net(
    rng: &mut ChaCha8Rng,
    max_input_dim: usize,
    max_hidden: usize,
    max_width: usize,
) -> ReluNet {
    let input_dim = rng.gen_range(1..=max_input_dim);
    random_integer_net_with_dim(rng, input_dim, max_hidden, max_width)
}
