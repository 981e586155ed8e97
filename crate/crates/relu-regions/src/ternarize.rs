//! Compilation of bounded-integer-weight networks into exactly equivalent
//! ternary networks.
//!
//! An integer edge of weight `w` (|w| ≤ M) becomes M identity fan-out copies
//! of its source followed by |w| unit edges of sign(w) into the target sum.
//! Expanding every edge independently is the trivial transformation; with
//! node sharing each source node is duplicated only `max |w|` times over its
//! outgoing edges and every edge draws from that shared prefix. Either way
//! each original layer becomes an identity fan-out layer followed by a
//! summing layer carrying the original activation, so depth doubles and the
//! function is preserved exactly.

use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::net::{ActivationKind, BoxDomain, Layer, NetError, ReluNet, WeightClass};
use crate::rational::{format_rational, rat, rat_int, Rational};

#[derive(Debug, Error)]
pub enum TernarizeError {
    #[error("weight bound must be at least 1")]
    ZeroBound,
    #[error("layer {layer}: weight ({row},{col}) = {value} is not an integer; only integer nets can be ternarized")]
    NonIntegerWeight { layer: usize, row: usize, col: usize, value: String },
    #[error("layer {layer}: bias {row} = {value} is not an integer")]
    NonIntegerBias { layer: usize, row: usize, value: String },
    #[error("layer {layer}: |weight ({row},{col})| = {value} exceeds the bound {bound}")]
    WeightExceedsBound { layer: usize, row: usize, col: usize, value: String, bound: u32 },
    #[error("edge weight {weight} exceeds the bound {bound}")]
    EdgeWeightExceedsBound { weight: i64, bound: u32 },
    #[error("networks disagree in shape: inputs {in_a} vs {in_b}, outputs {out_a} vs {out_b}")]
    ShapeMismatch { in_a: usize, in_b: usize, out_a: usize, out_b: usize },
    #[error(transparent)]
    Net(#[from] NetError),
}

/// An integer-weight net together with its declared weight bound `M`.
#[derive(Debug, Clone)]
pub struct IntegerNetProfile {
    net: ReluNet,
    max_weight: u32,
}

fn weight_as_i64(
    value: &Rational,
    layer: usize,
    row: usize,
    col: usize,
) -> Result<i64, TernarizeError> {
    if !value.is_integer() {
        return Err(TernarizeError::NonIntegerWeight {
            layer,
            row,
            col,
            value: format_rational(value),
        });
    }
    value.numer().to_i64().ok_or_else(|| TernarizeError::NonIntegerWeight {
        layer,
        row,
        col,
        value: format_rational(value),
    })
}

impl IntegerNetProfile {
    pub fn new(net: ReluNet, max_weight: u32) -> Result<Self, TernarizeError> {
        if max_weight == 0 {
            return Err(TernarizeError::ZeroBound);
        }
        for (li, layer) in net.layers().iter().enumerate() {
            for (ri, row) in layer.weights().iter().enumerate() {
                for (ci, w) in row.iter().enumerate() {
                    let v = weight_as_i64(w, li, ri, ci)?;
                    if v.unsigned_abs() > max_weight as u64 {
                        return Err(TernarizeError::WeightExceedsBound {
                            layer: li,
                            row: ri,
                            col: ci,
                            value: format_rational(w),
                            bound: max_weight,
                        });
                    }
                }
            }
            for (ri, b) in layer.bias().iter().enumerate() {
                if !b.is_integer() {
                    return Err(TernarizeError::NonIntegerBias {
                        layer: li,
                        row: ri,
                        value: format_rational(b),
                    });
                }
            }
        }
        Ok(IntegerNetProfile { net, max_weight })
    }

    /// Profile with `M` inferred as the largest |weight| (at least 1).
    pub fn with_inferred_bound(net: ReluNet) -> Result<Self, TernarizeError> {
        let mut bound: u64 = 1;
        for (li, layer) in net.layers().iter().enumerate() {
            for (ri, row) in layer.weights().iter().enumerate() {
                for (ci, w) in row.iter().enumerate() {
                    let v = weight_as_i64(w, li, ri, ci)?;
                    bound = bound.max(v.unsigned_abs());
                }
            }
        }
        let bound = u32::try_from(bound).map_err(|_| TernarizeError::ZeroBound)?;
        IntegerNetProfile::new(net, bound)
    }

    pub fn net(&self) -> &ReluNet {
        &self.net
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TernarizeOptions {
    /// Share fan-out copies across all outgoing edges of a source node.
    pub share: bool,
    /// Also expand biases into ±1 edges from constant nodes, leaving every
    /// bias in the output equal to 0 or 1.
    pub strict_bias: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TernarizeStats {
    pub nodes_before: usize,
    pub nodes_after: usize,
    pub depth_before: usize,
    pub depth_after: usize,
    pub sharing_enabled: bool,
}

/// The two-layer ternary net computing `x ↦ w·x` with fan-out width `M`:
/// `M` identity copies of the input, then the sum of the first |w| copies
/// with sign(w).
pub fn expand_edge(weight: i64, max_weight: u32) -> Result<ReluNet, TernarizeError> {
    if max_weight == 0 {
        return Err(TernarizeError::ZeroBound);
    }
    if weight.unsigned_abs() > max_weight as u64 {
        return Err(TernarizeError::EdgeWeightExceedsBound { weight, bound: max_weight });
    }
    let m = max_weight as usize;
    let fanout = Layer::new(
        vec![vec![rat_int(1)]; m],
        vec![Rational::zero(); m],
        ActivationKind::Identity,
    )?;
    let mut row = vec![Rational::zero(); m];
    let sign = rat_int(weight.signum());
    for slot in row.iter_mut().take(weight.unsigned_abs() as usize) {
        *slot = sign.clone();
    }
    let sum = Layer::new(vec![row], vec![Rational::zero()], ActivationKind::Identity)?;
    Ok(ReluNet::new(1, vec![fanout, sum], WeightClass::Ternary)?)
}

/// Compile an integer net into an exactly equivalent ternary net. Each
/// original layer becomes a fan-out layer plus a summing layer; the original
/// activation moves to the summing layer (fan-out is linear, so semantics
/// are preserved). Biases pass through unchanged unless `strict_bias` routes
/// them through constant nodes.
pub fn ternarize_net(
    profile: &IntegerNetProfile,
    options: TernarizeOptions,
) -> (ReluNet, TernarizeStats) {
    let net = profile.net();
    let m = profile.max_weight() as usize;
    let mut layers_out: Vec<Layer> = Vec::with_capacity(net.depth() * 2);
    let mut prev_width = net.input_dim();

    for layer in net.layers() {
        let rows = layer.width();
        let w: Vec<Vec<i64>> = layer
            .weights()
            .iter()
            .map(|row| row.iter().map(|v| v.numer().to_i64().expect("validated integer")).collect())
            .collect();
        let b: Vec<i64> = layer
            .bias()
            .iter()
            .map(|v| v.numer().to_i64().expect("validated integer"))
            .collect();

        // fan-out layout: per-source shared copies, or one block of M copies
        // per (target, source) edge
        let copies: Vec<usize> = if options.share {
            (0..prev_width)
                .map(|j| (0..rows).map(|i| w[i][j].unsigned_abs() as usize).max().unwrap_or(0))
                .collect()
        } else {
            Vec::new()
        };
        let shared_offsets: Vec<usize> = {
            let mut acc = 0;
            copies
                .iter()
                .map(|c| {
                    let at = acc;
                    acc += c;
                    at
                })
                .collect()
        };
        let copy_width = if options.share {
            copies.iter().sum::<usize>()
        } else {
            rows * prev_width * m
        };
        let const_copies = if options.strict_bias {
            b.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0)
        } else {
            0
        };
        let fanout_width = (copy_width + const_copies).max(1);

        let mut fan_weights: Vec<Vec<Rational>> = Vec::with_capacity(fanout_width);
        let mut fan_bias: Vec<Rational> = Vec::with_capacity(fanout_width);
        let mut push_copy = |source: usize| {
            let mut row = vec![Rational::zero(); prev_width];
            row[source] = rat_int(1);
            fan_weights.push(row);
            fan_bias.push(Rational::zero());
        };
        if options.share {
            for (j, &c) in copies.iter().enumerate() {
                for _ in 0..c {
                    push_copy(j);
                }
            }
        } else {
            for _i in 0..rows {
                for j in 0..prev_width {
                    for _ in 0..m {
                        push_copy(j);
                    }
                }
            }
        }
        for _ in 0..const_copies {
            fan_weights.push(vec![Rational::zero(); prev_width]);
            fan_bias.push(rat_int(1));
        }
        while fan_weights.len() < fanout_width {
            fan_weights.push(vec![Rational::zero(); prev_width]);
            fan_bias.push(Rational::zero());
        }
        layers_out.push(
            Layer::new(fan_weights, fan_bias, ActivationKind::Identity).expect("fan-out layer"),
        );

        let const_base = copy_width;
        let mut sum_weights: Vec<Vec<Rational>> = Vec::with_capacity(rows);
        let mut sum_bias: Vec<Rational> = Vec::with_capacity(rows);
        for i in 0..rows {
            let mut row = vec![Rational::zero(); fanout_width];
            for j in 0..prev_width {
                let weight = w[i][j];
                if weight == 0 {
                    continue;
                }
                let base = if options.share {
                    shared_offsets[j]
                } else {
                    (i * prev_width + j) * m
                };
                let sign = rat_int(weight.signum());
                for t in 0..weight.unsigned_abs() as usize {
                    row[base + t] = sign.clone();
                }
            }
            if options.strict_bias {
                let sign = rat_int(b[i].signum());
                for t in 0..b[i].unsigned_abs() as usize {
                    row[const_base + t] = sign.clone();
                }
                sum_bias.push(Rational::zero());
            } else {
                sum_bias.push(rat_int(b[i]));
            }
            sum_weights.push(row);
        }
        layers_out.push(
            Layer::new(sum_weights, sum_bias, layer.activation()).expect("summing layer"),
        );
        prev_width = rows;
    }

    let nodes_before: usize = net.layers().iter().map(Layer::width).sum();
    let nodes_after: usize = layers_out.iter().map(Layer::width).sum();
    let stats = TernarizeStats {
        nodes_before,
        nodes_after,
        depth_before: net.depth(),
        depth_after: layers_out.len(),
        sharing_enabled: options.share,
    };
    let ternary = ReluNet::new(net.input_dim(), layers_out, WeightClass::Ternary)
        .expect("ternarized net is well-formed");
    (ternary, stats)
}

#[derive(Debug, Clone)]
pub struct CounterExample {
    pub point: Vec<Rational>,
    pub left: Vec<Rational>,
    pub right: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct EquivReport {
    pub equivalent: bool,
    pub samples_run: usize,
    pub counterexample: Option<CounterExample>,
}

const SAMPLE_DENOMINATOR: i64 = 1024;
const UNBOUNDED_SPAN: i64 = 1024;

/// Deterministically sample rational points from the lattice with step
/// `(hi - lo)/1024` per coordinate, jittered by `seed`.
pub fn sample_points(
    domain: &BoxDomain,
    samples: usize,
    seed: u64,
) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut point = Vec::with_capacity(domain.dim());
        for j in 0..domain.dim() {
            let lo = domain.lower()[j].clone().unwrap_or_else(|| rat_int(-UNBOUNDED_SPAN));
            let hi = domain.upper()[j].clone().unwrap_or_else(|| rat_int(UNBOUNDED_SPAN));
            let k: i64 = rng.gen_range(0..=SAMPLE_DENOMINATOR);
            let x = &lo + (&hi - &lo) * rat(k, SAMPLE_DENOMINATOR);
            point.push(x);
        }
        out.push(point);
    }
    out
}

/// Exact pointwise comparison of two nets on seeded rational samples from
/// `domain`. Returns the first counterexample on failure.
pub fn verify_equiv(
    a: &ReluNet,
    b: &ReluNet,
    domain: &BoxDomain,
    samples: usize,
    seed: u64,
) -> Result<EquivReport, TernarizeError> {
    if a.input_dim() != b.input_dim() || a.output_dim() != b.output_dim() {
        return Err(TernarizeError::ShapeMismatch {
            in_a: a.input_dim(),
            in_b: b.input_dim(),
            out_a: a.output_dim(),
            out_b: b.output_dim(),
        });
    }
    if domain.dim() != a.input_dim() {
        return Err(NetError::DomainMismatch { domain: domain.dim(), net: a.input_dim() }.into());
    }
    for (run, point) in sample_points(domain, samples, seed).into_iter().enumerate() {
        let left = a.eval(&point)?;
        let right = b.eval(&point)?;
        if left != right {
            return Ok(EquivReport {
                equivalent: false,
                samples_run: run + 1,
                counterexample: Some(CounterExample { point, left, right }),
            });
        }
    }
    Ok(EquivReport { equivalent: true, samples_run: samples, counterexample: None })
}
