//! Builders for the explicit witness networks and their closed-form
//! region-count lower bounds.
//!
//! Two families are built here. The zigzag (Montúfar-style) construction
//! splits each hidden layer into `p = ⌊n/n₀⌋` groups that together fold the
//! unit cube onto itself `p` times per coordinate, giving `p^{n₀(L-1)}`
//! linear regions. The ternary construction spends pairs of layers — an
//! identity fan-out layer feeding a ReLU summing layer — to realize the same
//! fold with weights restricted to {-1, 0, +1}, reaching `q^{½n₀(L'-1)}`
//! regions with `q = ⌊n/(2(n₀+1))⌋` and `L'` the largest odd depth ≤ L.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::net::{ActivationKind, Layer, ReluNet, WeightClass};
use crate::rational::{rat_int, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("input dimension must be positive")]
    ZeroInputDim,
    #[error("depth must be at least 2, got {0}")]
    DepthTooSmall(usize),
    #[error("width {width} below input dimension {input_dim}: no complete group (p = 0)")]
    WidthBelowInput { width: usize, input_dim: usize },
    #[error("width {width} below 2(n0+1) = {minimum}: no complete ternary group (q = 0)")]
    WidthBelowTernaryMinimum { width: usize, minimum: usize },
    #[error("sawtooth needs at least one piece")]
    ZeroPieces,
    #[error("bound exponent {0} does not fit in u32")]
    ExponentOverflow(u128),
}

/// Parameters of the zigzag construction: `pieces = ⌊width/input_dim⌋`
/// complete groups per hidden layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MontufarParams {
    input_dim: usize,
    width: usize,
    depth: usize,
    pieces: usize,
}

impl MontufarParams {
    pub fn new(input_dim: usize, width: usize, depth: usize) -> Result<Self, BuildError> {
        if input_dim == 0 {
            return Err(BuildError::ZeroInputDim);
        }
        if depth < 2 {
            return Err(BuildError::DepthTooSmall(depth));
        }
        let pieces = width / input_dim;
        if pieces == 0 {
            return Err(BuildError::WidthBelowInput { width, input_dim });
        }
        Ok(MontufarParams { input_dim, width, depth, pieces })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `p`: zigzag pieces per coordinate and per layer.
    pub fn pieces(&self) -> usize {
        self.pieces
    }
}

/// Parameters of the ternary construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TernaryParams {
    input_dim: usize,
    width: usize,
    depth: usize,
    pieces: usize,
    odd_depth: usize,
}

impl TernaryParams {
    pub fn new(input_dim: usize, width: usize, depth: usize) -> Result<Self, BuildError> {
        if input_dim == 0 {
            return Err(BuildError::ZeroInputDim);
        }
        if depth < 2 {
            return Err(BuildError::DepthTooSmall(depth));
        }
        let minimum = 2 * (input_dim + 1);
        let pieces = width / minimum;
        if pieces == 0 {
            return Err(BuildError::WidthBelowTernaryMinimum { width, minimum });
        }
        let odd_depth = if depth % 2 == 1 { depth } else { depth - 1 };
        Ok(TernaryParams { input_dim, width, depth, pieces, odd_depth })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `q`: zigzag pieces per coordinate and per layer pair.
    pub fn pieces(&self) -> usize {
        self.pieces
    }

    /// `L'`: the largest odd depth ≤ L; the construction consumes two layers
    /// per fold stage plus the final linear layer.
    pub fn odd_depth(&self) -> usize {
        self.odd_depth
    }
}

fn zero_row(len: usize) -> Vec<Rational> {
    vec![Rational::zero(); len]
}

fn sign(k: usize) -> Rational {
    // (-1)^{k-1} for 1-based k
    if k % 2 == 1 {
        rat_int(1)
    } else {
        rat_int(-1)
    }
}

/// The zigzag witness network: depth `L`, hidden width `n`, integer weights.
///
/// Layer 1 ramps each coordinate into `p` shifted copies; intermediate layers
/// apply the same ramps to the alternating-sign fold of the previous group
/// outputs; the last layer takes the plain alternating fold. Leftover width
/// beyond `p·n₀` is kept as explicit dead (all-zero) rows so that width
/// accounting matches the construction verbatim.
pub fn build_montufar(params: &MontufarParams) -> ReluNet {
    let n0 = params.input_dim;
    let n = params.width;
    let depth = params.depth;
    let p = params.pieces;
    let mut layers = Vec::with_capacity(depth);

    // first layer: p x_j for group 1, 2p x_j - 2(i-1) for groups i ≥ 2
    let mut weights = Vec::with_capacity(n);
    let mut bias = Vec::with_capacity(n);
    for i in 1..=p {
        for j in 0..n0 {
            let mut row = zero_row(n0);
            if i == 1 {
                row[j] = rat_int(p as i64);
                bias.push(Rational::zero());
            } else {
                row[j] = rat_int(2 * p as i64);
                bias.push(rat_int(-2 * (i as i64 - 1)));
            }
            weights.push(row);
        }
    }
    while weights.len() < n {
        weights.push(zero_row(n0));
        bias.push(Rational::zero());
    }
    layers.push(Layer::new(weights, bias, ActivationKind::Relu).expect("first layer"));

    // intermediate layers: alternating-sign sums over the p groups
    for _ in 2..depth {
        let mut weights = Vec::with_capacity(n);
        let mut bias = Vec::with_capacity(n);
        for i in 1..=p {
            for j in 0..n0 {
                let mut row = zero_row(n);
                let scale = if i == 1 { rat_int(p as i64) } else { rat_int(2 * p as i64) };
                for k in 1..=p {
                    row[(k - 1) * n0 + j] = sign(k) * &scale;
                }
                bias.push(if i == 1 {
                    Rational::zero()
                } else {
                    rat_int(-2 * (i as i64 - 1))
                });
                weights.push(row);
            }
        }
        while weights.len() < n {
            weights.push(zero_row(n));
            bias.push(Rational::zero());
        }
        layers.push(Layer::new(weights, bias, ActivationKind::Relu).expect("hidden layer"));
    }

    // last layer: unsigned alternating fold over all groups, single output
    let mut row = zero_row(n);
    for j in 0..n0 {
        for k in 1..=p {
            row[(k - 1) * n0 + j] = sign(k);
        }
    }
    layers.push(
        Layer::new(vec![row], vec![Rational::zero()], ActivationKind::Identity)
            .expect("output layer"),
    );

    ReluNet::new(n0, layers, WeightClass::Integer).expect("zigzag net is well-formed")
}

/// One-dimensional sawtooth `h` with `p` teeth:
/// `h(x) = max{0, px} - max{0, 2px - 2} + … + (-1)^{p-1} max{0, 2px - 2(p-1)}`.
/// On `[0,1]` each `[t/p, (t+1)/p]` maps bijectively onto `[0,1]`.
pub fn build_sawtooth(pieces: usize) -> Result<ReluNet, BuildError> {
    if pieces == 0 {
        return Err(BuildError::ZeroPieces);
    }
    // exactly the depth-2 zigzag net with one input coordinate
    Ok(build_montufar(&MontufarParams::new(1, pieces, 2)?))
}

/// The ternary witness network: depth `L`, width `n`, every weight in
/// {-1, 0, +1}.
///
/// Odd layers fan each coordinate out into `2q` identity copies plus a
/// constant group of `2q` ones (realized as bias-1 rows); even layers sum
/// `q` or `2q` copies back together, drawing `2(i-1)` unit edges from the
/// constant group in place of the integer bias `-2(i-1)`, and apply ReLU.
/// Each odd/even pair therefore reproduces one zigzag layer with `p`
/// replaced by `q`. The final layer is the alternating fold; when `L` is
/// even a trailing 1×1 identity layer is appended.
pub fn build_ternary(params: &TernaryParams) -> ReluNet {
    let n0 = params.input_dim;
    let n = params.width;
    let q = params.pieces;
    let odd_depth = params.odd_depth;
    let mut layers = Vec::with_capacity(params.depth);

    if odd_depth > 1 {
        let stages = (odd_depth - 1) / 2;
        for stage in 1..=stages {
            // odd layer: fan-out groups of 2q copies plus the constant group
            let fan_in = if stage == 1 { n0 } else { n };
            let mut weights = Vec::with_capacity(n);
            let mut bias = Vec::with_capacity(n);
            for j in 1..=(n0 + 1) {
                for _copy in 0..(2 * q) {
                    let mut row = zero_row(fan_in);
                    if j <= n0 {
                        if stage == 1 {
                            row[j - 1] = rat_int(1);
                        } else {
                            for m in 1..=q {
                                row[(m - 1) * n0 + (j - 1)] = sign(m);
                            }
                        }
                        bias.push(Rational::zero());
                    } else {
                        bias.push(rat_int(1));
                    }
                    weights.push(row);
                }
            }
            while weights.len() < n {
                weights.push(zero_row(fan_in));
                bias.push(Rational::zero());
            }
            layers.push(Layer::new(weights, bias, ActivationKind::Identity).expect("odd layer"));

            // even layer: sum q or 2q copies, bias drawn from the constant group
            let mut weights = Vec::with_capacity(n);
            let mut bias = Vec::with_capacity(n);
            let const_base = 2 * q * n0;
            for i in 1..=q {
                for j in 1..=n0 {
                    let mut row = zero_row(n);
                    let copies = if i == 1 { q } else { 2 * q };
                    for k in 0..copies {
                        row[2 * q * (j - 1) + k] = rat_int(1);
                    }
                    for t in 0..(2 * (i - 1)) {
                        row[const_base + t] = rat_int(-1);
                    }
                    weights.push(row);
                    bias.push(Rational::zero());
                }
            }
            while weights.len() < n {
                weights.push(zero_row(n));
                bias.push(Rational::zero());
            }
            layers.push(Layer::new(weights, bias, ActivationKind::Relu).expect("even layer"));
        }
    }

    // final linear layer: alternating fold over the q live groups (or the
    // plain coordinate sum when no fold stage exists)
    let fan_in = if odd_depth > 1 { n } else { n0 };
    let folds = if odd_depth > 1 { q } else { 1 };
    let mut row = zero_row(fan_in);
    for j in 0..n0 {
        for k in 1..=folds {
            row[(k - 1) * n0 + j] = sign(k);
        }
    }
    layers.push(
        Layer::new(vec![row], vec![Rational::zero()], ActivationKind::Identity)
            .expect("fold layer"),
    );

    if params.depth % 2 == 0 {
        layers.push(
            Layer::new(vec![vec![rat_int(1)]], vec![Rational::zero()], ActivationKind::Identity)
                .expect("identity pad"),
        );
    }

    let net = ReluNet::new(n0, layers, WeightClass::Ternary).expect("ternary net is well-formed");
    debug_assert!(crate::net::check_ternary_bias_budget(&net, &1.into()));
    net
}

/// The plain zigzag net the ternary construction computes: width `q·n₀`,
/// depth `(L'+1)/2`, with `p = q`. Used to certify the functional identity
/// between the two constructions.
pub fn build_ternary_reference(params: &TernaryParams) -> ReluNet {
    let n0 = params.input_dim;
    if params.odd_depth == 1 {
        let mut row = zero_row(n0);
        for v in row.iter_mut() {
            *v = rat_int(1);
        }
        let layer = Layer::new(vec![row], vec![Rational::zero()], ActivationKind::Identity)
            .expect("sum layer");
        return ReluNet::new(n0, vec![layer], WeightClass::Ternary).expect("sum net");
    }
    let reference = MontufarParams::new(n0, params.pieces * n0, (params.odd_depth + 1) / 2)
        .expect("reference parameters are valid");
    debug_assert_eq!(reference.pieces(), params.pieces);
    build_montufar(&reference)
}

fn checked_exponent(e: u128) -> Result<u32, BuildError> {
    u32::try_from(e).map_err(|_| BuildError::ExponentOverflow(e))
}

/// `p^{n₀(L-1)}` with `p = ⌊n/n₀⌋`.
pub fn lower_bound_montufar(n0: usize, n: usize, depth: usize) -> Result<BigUint, BuildError> {
    let params = MontufarParams::new(n0, n, depth)?;
    let exp = checked_exponent(n0 as u128 * (depth as u128 - 1))?;
    Ok(BigUint::from(params.pieces).pow(exp))
}

/// `q^{½n₀(L'-1)}` with `q = ⌊n/(2(n₀+1))⌋` and `L'` the largest odd ≤ L.
/// The exponent is always an integer because `L'-1` is even.
pub fn lower_bound_ternary(n0: usize, n: usize, depth: usize) -> Result<BigUint, BuildError> {
    let params = TernaryParams::new(n0, n, depth)?;
    let exp = checked_exponent(n0 as u128 * (params.odd_depth as u128 - 1) / 2)?;
    Ok(BigUint::from(params.pieces).pow(exp))
}

/// Comparison of the two bounds at matched fold counts: to recover the plain
/// bound with ternary weights, widen to `q = p` (width `2(n₀+1)p`) and run at
/// depth `2L-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeoffReport {
    pub montufar: BigUint,
    /// Ternary bound at the original width and depth, if the width admits a
    /// complete ternary group.
    pub ternary_same_depth: Option<BigUint>,
    /// Ternary bound at width `2(n₀+1)p` and depth `2L-1`.
    pub ternary_double_depth: BigUint,
    /// Width used for the double-depth bound.
    pub widened_width: usize,
    /// Depth used for the double-depth bound.
    pub doubled_depth: usize,
    pub double_depth_at_least_montufar: bool,
}

pub fn bound_tradeoff(n0: usize, n: usize, depth: usize) -> Result<TradeoffReport, BuildError> {
    let montufar = lower_bound_montufar(n0, n, depth)?;
    let p = n / n0;
    let widened_width = 2 * (n0 + 1) * p;
    let doubled_depth = 2 * depth - 1;
    let ternary_double_depth = lower_bound_ternary(n0, widened_width, doubled_depth)?;
    let ternary_same_depth = lower_bound_ternary(n0, n, depth).ok();
    let double_depth_at_least_montufar = ternary_double_depth >= montufar;
    Ok(TradeoffReport {
        montufar,
        ternary_same_depth,
        ternary_double_depth,
        widened_width,
        doubled_depth,
        double_depth_at_least_montufar,
    })
}
