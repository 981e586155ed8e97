//! Layered ReLU regression networks over exact rationals.
//!
//! A [`ReluNet`] is an ordered stack of affine layers, each followed by a
//! componentwise ReLU or by the identity. The final layer is always affine
//! with identity activation (regression head). All types are immutable after
//! construction; evaluation and affine-map extraction are pure functions, so
//! everything here is safe to share across threads.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, rat_int, Rational};

#[derive(Debug, Error)]
pub enum NetError {
    #[error("layer {layer}: expected input of length {expected}, got {got}")]
    DimensionMismatch { layer: usize, expected: usize, got: usize },
    #[error("layer {layer}: weight matrix has {rows} rows but bias has length {bias}")]
    ShapeMismatch { layer: usize, rows: usize, bias: usize },
    #[error("layer {layer}: ragged weight matrix (row {row} has {got} entries, expected {expected})")]
    RaggedMatrix { layer: usize, row: usize, got: usize, expected: usize },
    #[error("layer {layer}: layer must have at least one unit")]
    EmptyLayer { layer: usize },
    #[error("network must have at least one layer")]
    EmptyNet,
    #[error("input dimension must be positive")]
    ZeroInputDim,
    #[error("final layer must use the identity activation")]
    FinalLayerNotIdentity,
    #[error("layer {layer}: declared weight class `{class}` violated: {reason}")]
    WeightClassViolation { layer: usize, class: &'static str, reason: String },
    #[error("activation pattern has {got} bits, network has {expected} ReLU units")]
    PatternLength { expected: usize, got: usize },
    #[error("domain dimension {domain} does not match input dimension {net}")]
    DomainMismatch { domain: usize, net: usize },
    #[error("box domain: lower bound exceeds upper bound in coordinate {coord}")]
    InvertedBounds { coord: usize },
    #[error("box domain: bounds have mismatched lengths ({lower} vs {upper})")]
    BoundsLength { lower: usize, upper: usize },
    #[error("invalid domain spec `{spec}`: {reason}")]
    DomainSpec { spec: String, reason: String },
}

/// Componentwise activation applied after a layer's affine map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActivationKind {
    /// `x ↦ max{0, x}` per component.
    Relu,
    /// `x ↦ x`.
    Identity,
}

/// Declared coefficient class of a network. `Ternary ⊂ Integer ⊂ Rational`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightClass {
    Rational,
    Integer,
    /// Every weight in {-1, 0, +1}; biases integer (sums of ±1 edges from a
    /// constant node, so any integer is representable).
    Ternary,
}

impl WeightClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeightClass::Rational => "rational",
            WeightClass::Integer => "integer",
            WeightClass::Ternary => "ternary",
        }
    }
}

/// One affine layer `x ↦ W x + b` plus its activation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    weights: Vec<Vec<Rational>>,
    bias: Vec<Rational>,
    activation: ActivationKind,
}

impl Layer {
    pub fn new(
        weights: Vec<Vec<Rational>>,
        bias: Vec<Rational>,
        activation: ActivationKind,
    ) -> Result<Self, NetError> {
        Self::validated(weights, bias, activation, 0)
    }

    fn validated(
        weights: Vec<Vec<Rational>>,
        bias: Vec<Rational>,
        activation: ActivationKind,
        layer: usize,
    ) -> Result<Self, NetError> {
        if weights.is_empty() {
            return Err(NetError::EmptyLayer { layer });
        }
        if weights.len() != bias.len() {
            return Err(NetError::ShapeMismatch { layer, rows: weights.len(), bias: bias.len() });
        }
        let fan_in = weights[0].len();
        for (row, r) in weights.iter().enumerate() {
            if r.len() != fan_in {
                return Err(NetError::RaggedMatrix { layer, row, got: r.len(), expected: fan_in });
            }
        }
        Ok(Layer { weights, bias, activation })
    }

    /// Convenience constructor for small hand-written nets and tests.
    pub fn from_integers(weights: &[&[i64]], bias: &[i64], activation: ActivationKind) -> Self {
        let w = weights
            .iter()
            .map(|row| row.iter().map(|&v| rat_int(v)).collect())
            .collect();
        let b = bias.iter().map(|&v| rat_int(v)).collect();
        Layer::new(w, b, activation).expect("integer layer literal")
    }

    pub fn width(&self) -> usize {
        self.weights.len()
    }

    pub fn fan_in(&self) -> usize {
        self.weights[0].len()
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    pub fn bias(&self) -> &[Rational] {
        &self.bias
    }

    pub fn activation(&self) -> ActivationKind {
        self.activation
    }
}

/// A ReLU regression network: affine layers with ReLU or identity
/// activations, identity on the final layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReluNet {
    input_dim: usize,
    layers: Vec<Layer>,
    weight_class: WeightClass,
}

impl ReluNet {
    /// Build a network, validating layer chaining, the regression-head
    /// invariant, and the declared weight class. A `Ternary` declaration is
    /// rejected outright if any coefficient lies outside {-1, 0, +1}; nets
    /// are immutable afterwards, so the class invariant cannot be broken
    /// later.
    pub fn new(
        input_dim: usize,
        layers: Vec<Layer>,
        weight_class: WeightClass,
    ) -> Result<Self, NetError> {
        if input_dim == 0 {
            return Err(NetError::ZeroInputDim);
        }
        if layers.is_empty() {
            return Err(NetError::EmptyNet);
        }
        let mut expected = input_dim;
        for (i, layer) in layers.iter().enumerate() {
            if layer.fan_in() != expected {
                return Err(NetError::DimensionMismatch {
                    layer: i,
                    expected,
                    got: layer.fan_in(),
                });
            }
            expected = layer.width();
        }
        if layers.last().unwrap().activation != ActivationKind::Identity {
            return Err(NetError::FinalLayerNotIdentity);
        }
        check_weight_class(&layers, weight_class)?;
        Ok(ReluNet { input_dim, layers, weight_class })
    }

    /// Build with the tightest weight class the coefficients admit.
    pub fn with_inferred_class(input_dim: usize, layers: Vec<Layer>) -> Result<Self, NetError> {
        let class = classify_layers(&layers);
        ReluNet::new(input_dim, layers, class)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().width()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn weight_class(&self) -> WeightClass {
        self.weight_class
    }

    /// Total number of ReLU units, i.e. the length of an activation pattern.
    /// Identity-activation units carry no pattern bit.
    pub fn relu_unit_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| l.activation == ActivationKind::Relu)
            .map(Layer::width)
            .sum()
    }

    /// Largest |bias| in the network, as a rational.
    pub fn max_bias_magnitude(&self) -> Rational {
        let mut best = Rational::zero();
        for layer in &self.layers {
            for b in &layer.bias {
                let a = b.abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }

    /// Exact forward evaluation.
    pub fn eval(&self, x: &[Rational]) -> Result<Vec<Rational>, NetError> {
        Ok(self.forward(x)?.0)
    }

    /// Exact forward evaluation plus the activation pattern read off the
    /// pre-activation signs. A pre-activation of exactly 0 reads as inactive;
    /// both ReLU branches output 0 there, so evaluation is unaffected.
    pub fn eval_with_pattern(&self, x: &[Rational]) -> Result<(Vec<Rational>, ActivationPattern), NetError> {
        let (v, bits) = self.forward(x)?;
        Ok((v, ActivationPattern::from_bits(bits)))
    }

    fn forward(&self, x: &[Rational]) -> Result<(Vec<Rational>, Vec<bool>), NetError> {
        if x.len() != self.input_dim {
            return Err(NetError::DimensionMismatch {
                layer: 0,
                expected: self.input_dim,
                got: x.len(),
            });
        }
        let mut v = x.to_vec();
        let mut bits = Vec::with_capacity(self.relu_unit_count());
        for layer in &self.layers {
            let mut next = layer.bias.clone();
            for (row, acc) in layer.weights.iter().zip(next.iter_mut()) {
                for (w, xv) in row.iter().zip(v.iter()) {
                    if !w.is_zero() {
                        *acc += w * xv;
                    }
                }
            }
            if layer.activation == ActivationKind::Relu {
                for val in next.iter_mut() {
                    if val.is_positive() {
                        bits.push(true);
                    } else {
                        bits.push(false);
                        *val = Rational::zero();
                    }
                }
            }
            v = next;
        }
        Ok((v, bits))
    }

    /// The affine map induced on the cell where `pattern` holds: per-layer
    /// affine maps chained with inactive ReLU rows zeroed.
    pub fn affine_map_for_pattern(&self, pattern: &ActivationPattern) -> Result<AffineMap, NetError> {
        let expected = self.relu_unit_count();
        if pattern.len() != expected {
            return Err(NetError::PatternLength { expected, got: pattern.len() });
        }
        let mut map = AffineMap::identity(self.input_dim);
        let mut cursor = 0;
        for layer in &self.layers {
            map = layer_map(layer).compose(&map);
            if layer.activation == ActivationKind::Relu {
                let bits = &pattern.bits()[cursor..cursor + layer.width()];
                cursor += layer.width();
                map = map.masked(bits);
            }
        }
        Ok(map)
    }
}

/// The affine map `x ↦ W x + b` of a layer, ignoring its activation.
pub(crate) fn layer_map(layer: &Layer) -> AffineMap {
    AffineMap { matrix: layer.weights.clone(), offset: layer.bias.clone() }
}

fn classify_layers(layers: &[Layer]) -> WeightClass {
    let mut ternary = true;
    let one = rat_int(1);
    for layer in layers {
        for row in &layer.weights {
            for w in row {
                if !w.is_integer() {
                    return WeightClass::Rational;
                }
                if w.abs() > one {
                    ternary = false;
                }
            }
        }
        for b in &layer.bias {
            if !b.is_integer() {
                return WeightClass::Rational;
            }
        }
    }
    if ternary {
        WeightClass::Ternary
    } else {
        WeightClass::Integer
    }
}

fn check_weight_class(layers: &[Layer], class: WeightClass) -> Result<(), NetError> {
    let one = rat_int(1);
    for (i, layer) in layers.iter().enumerate() {
        for (r, row) in layer.weights.iter().enumerate() {
            for (c, w) in row.iter().enumerate() {
                match class {
                    WeightClass::Rational => {}
                    WeightClass::Integer => {
                        if !w.is_integer() {
                            return Err(NetError::WeightClassViolation {
                                layer: i,
                                class: class.as_str(),
                                reason: format!(
                                    "weight ({r},{c}) = {} is not an integer",
                                    format_rational(w)
                                ),
                            });
                        }
                    }
                    WeightClass::Ternary => {
                        if !w.is_integer() || w.abs() > one {
                            return Err(NetError::WeightClassViolation {
                                layer: i,
                                class: class.as_str(),
                                reason: format!(
                                    "weight ({r},{c}) = {} is outside {{-1, 0, +1}}",
                                    format_rational(w)
                                ),
                            });
                        }
                    }
                }
            }
        }
        if class != WeightClass::Rational {
            for (r, b) in layer.bias.iter().enumerate() {
                if !b.is_integer() {
                    return Err(NetError::WeightClassViolation {
                        layer: i,
                        class: class.as_str(),
                        reason: format!("bias {r} = {} is not an integer", format_rational(b)),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Check that every bias magnitude fits inside the declared budget of ±1
/// terms. Ternary constructions realize constants as sums of unit edges from
/// constant nodes, so each bias must be representable within the budget.
pub fn check_ternary_bias_budget(net: &ReluNet, budget: &BigInt) -> bool {
    net.max_bias_magnitude() <= Rational::from_integer(budget.clone())
}

/// Fuse `inner`'s final identity layer into `outer`'s first layer by exact
/// matrix product, yielding one net with `eval` equal to `outer ∘ inner`.
pub fn compose(outer: &ReluNet, inner: &ReluNet) -> Result<ReluNet, NetError> {
    if outer.input_dim() != inner.output_dim() {
        return Err(NetError::DimensionMismatch {
            layer: inner.depth(),
            expected: inner.output_dim(),
            got: outer.input_dim(),
        });
    }
    let inner_last = layer_map(inner.layers.last().unwrap());
    let outer_first = &outer.layers[0];
    let fused = layer_map(outer_first).compose(&inner_last);
    let mut layers: Vec<Layer> = inner.layers[..inner.depth() - 1].to_vec();
    layers.push(Layer {
        weights: fused.matrix,
        bias: fused.offset,
        activation: outer_first.activation,
    });
    layers.extend_from_slice(&outer.layers[1..]);
    ReluNet::with_inferred_class(inner.input_dim(), layers)
}

/// An exact affine map `x ↦ A x + b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub matrix: Vec<Vec<Rational>>,
    pub offset: Vec<Rational>,
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { rat_int(1) } else { Rational::zero() }).collect())
            .collect();
        AffineMap { matrix, offset: vec![Rational::zero(); dim] }
    }

    pub fn out_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn in_dim(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(x.len(), self.in_dim());
        self.matrix
            .iter()
            .zip(self.offset.iter())
            .map(|(row, b)| {
                let mut acc = b.clone();
                for (w, xv) in row.iter().zip(x.iter()) {
                    if !w.is_zero() {
                        acc += w * xv;
                    }
                }
                acc
            })
            .collect()
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        debug_assert_eq!(self.in_dim(), inner.out_dim());
        let matrix: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .map(|row| {
                let mut out = vec![Rational::zero(); inner.in_dim()];
                for (w, inner_row) in row.iter().zip(inner.matrix.iter()) {
                    if w.is_zero() {
                        continue;
                    }
                    for (o, v) in out.iter_mut().zip(inner_row.iter()) {
                        if !v.is_zero() {
                            *o += w * v;
                        }
                    }
                }
                out
            })
            .collect();
        let offset: Vec<Rational> = self
            .matrix
            .iter()
            .zip(self.offset.iter())
            .map(|(row, b)| {
                let mut acc = b.clone();
                for (w, v) in row.iter().zip(inner.offset.iter()) {
                    if !w.is_zero() {
                        acc += w * v;
                    }
                }
                acc
            })
            .collect();
        AffineMap { matrix, offset }
    }

    /// Zero out the rows whose bit is false (inactive ReLU units).
    pub fn masked(&self, keep: &[bool]) -> AffineMap {
        debug_assert_eq!(keep.len(), self.out_dim());
        let matrix = self
            .matrix
            .iter()
            .zip(keep.iter())
            .map(|(row, &k)| {
                if k {
                    row.clone()
                } else {
                    vec![Rational::zero(); row.len()]
                }
            })
            .collect();
        let offset = self
            .offset
            .iter()
            .zip(keep.iter())
            .map(|(b, &k)| if k { b.clone() } else { Rational::zero() })
            .collect();
        AffineMap { matrix, offset }
    }
}

/// On/off assignment for every ReLU unit of a net, in layer-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActivationPattern {
    bits: Vec<bool>,
}

impl ActivationPattern {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        ActivationPattern { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Indices where two patterns disagree.
    pub fn differing_units(&self, other: &ActivationPattern) -> Vec<usize> {
        debug_assert_eq!(self.len(), other.len());
        self.bits
            .iter()
            .zip(other.bits.iter())
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }
}

impl std::fmt::Display for ActivationPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// An axis-aligned box, each side optionally unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxDomain {
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
}

impl BoxDomain {
    pub fn new(lower: Vec<Option<Rational>>, upper: Vec<Option<Rational>>) -> Result<Self, NetError> {
        if lower.len() != upper.len() {
            return Err(NetError::BoundsLength { lower: lower.len(), upper: upper.len() });
        }
        for (i, (lo, hi)) in lower.iter().zip(upper.iter()).enumerate() {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo > hi {
                    return Err(NetError::InvertedBounds { coord: i });
                }
            }
        }
        Ok(BoxDomain { lower, upper })
    }

    /// The unit cube `[0,1]^dim`.
    pub fn unit(dim: usize) -> Self {
        BoxDomain {
            lower: vec![Some(Rational::zero()); dim],
            upper: vec![Some(rat_int(1)); dim],
        }
    }

    /// A bounded interval (1-D box).
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, NetError> {
        BoxDomain::new(vec![Some(lo)], vec![Some(hi)])
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(lo: Rational, hi: Rational, dim: usize) -> Result<Self, NetError> {
        BoxDomain::new(vec![Some(lo); dim], vec![Some(hi); dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[Option<Rational>] {
        &self.lower
    }

    pub fn upper(&self) -> &[Option<Rational>] {
        &self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.iter().all(Option::is_some) && self.upper.iter().all(Option::is_some)
    }

    /// Membership test; `strict` demands the open box.
    pub fn contains(&self, x: &[Rational], strict: bool) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        for (i, xv) in x.iter().enumerate() {
            if let Some(lo) = &self.lower[i] {
                if if strict { xv <= lo } else { xv < lo } {
                    return false;
                }
            }
            if let Some(hi) = &self.upper[i] {
                if if strict { xv >= hi } else { xv > hi } {
                    return false;
                }
            }
        }
        true
    }

    /// Parse a CLI domain spec: `unit` for `[0,1]^dim`, otherwise coordinate
    /// ranges `lo,hi` joined by `x`, e.g. `-1,1x0,1/2`. A `*` on either side
    /// leaves that side unbounded.
    pub fn from_spec(spec: &str, dim: usize) -> Result<Self, NetError> {
        let err = |reason: &str| NetError::DomainSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = spec.trim();
        if trimmed.eq_ignore_ascii_case("unit") {
            return Ok(BoxDomain::unit(dim));
        }
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for part in trimmed.split('x') {
            let (lo, hi) = part
                .split_once(',')
                .ok_or_else(|| err("each coordinate needs `lo,hi`"))?;
            let parse_side = |s: &str| -> Result<Option<Rational>, NetError> {
                let s = s.trim();
                if s == "*" {
                    return Ok(None);
                }
                crate::rational::parse_rational(s)
                    .map(Some)
                    .map_err(|e| err(&e.to_string()))
            };
            lower.push(parse_side(lo)?);
            upper.push(parse_side(hi)?);
        }
        if lower.len() != dim {
            return Err(err(&format!("expected {dim} coordinates, got {}", lower.len())));
        }
        BoxDomain::new(lower, upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn abs_net() -> ReluNet {
        let l1 = Layer::from_integers(&[&[1], &[-1]], &[0, 0], ActivationKind::Relu);
        let l2 = Layer::from_integers(&[&[1, 1]], &[0], ActivationKind::Identity);
        ReluNet::with_inferred_class(1, vec![l1, l2]).unwrap()
    }

    fn sawtooth2() -> ReluNet {
        // h(x) = max{0, 2x} - max{0, 4x - 2}
        let l1 = Layer::from_integers(&[&[2], &[4]], &[0, -2], ActivationKind::Relu);
        let l2 = Layer::from_integers(&[&[1, -1]], &[0], ActivationKind::Identity);
        ReluNet::with_inferred_class(1, vec![l1, l2]).unwrap()
    }

    #[test]
    fn eval_abs_value() {
        let net = abs_net();
        assert_eq!(net.eval(&[rat_int(-2)]).unwrap(), vec![rat_int(2)]);
        assert_eq!(net.eval(&[rat(3, 7)]).unwrap(), vec![rat(3, 7)]);
    }

    #[test]
    fn eval_sawtooth() {
        let net = sawtooth2();
        assert_eq!(net.eval(&[rat(1, 4)]).unwrap(), vec![rat(1, 2)]);
        assert_eq!(net.eval(&[rat_int(1)]).unwrap(), vec![rat_int(0)]);
        assert_eq!(net.eval(&[rat(1, 2)]).unwrap(), vec![rat_int(1)]);
        assert_eq!(net.eval(&[rat(3, 4)]).unwrap(), vec![rat(1, 2)]);
    }

    #[test]
    fn eval_dimension_mismatch_names_layer() {
        let net = abs_net();
        let err = net.eval(&[rat_int(1), rat_int(2)]).unwrap_err();
        assert!(matches!(err, NetError::DimensionMismatch { layer: 0, expected: 1, got: 2 }));
    }

    #[test]
    fn pattern_read_off_treats_zero_as_inactive() {
        let net = abs_net();
        let (v, pat) = net.eval_with_pattern(&[Rational::zero()]).unwrap();
        assert_eq!(v, vec![Rational::zero()]);
        assert_eq!(pat.bits(), &[false, false]);
    }

    #[test]
    fn affine_map_for_abs_branches() {
        let net = abs_net();
        let pos = net
            .affine_map_for_pattern(&ActivationPattern::from_bits(vec![true, false]))
            .unwrap();
        assert_eq!(pos.matrix, vec![vec![rat_int(1)]]);
        assert_eq!(pos.offset, vec![rat_int(0)]);
        let neg = net
            .affine_map_for_pattern(&ActivationPattern::from_bits(vec![false, true]))
            .unwrap();
        assert_eq!(neg.matrix, vec![vec![rat_int(-1)]]);
        assert_eq!(neg.offset, vec![rat_int(0)]);
    }

    #[test]
    fn affine_map_for_sawtooth_descending_piece() {
        let net = sawtooth2();
        let map = net
            .affine_map_for_pattern(&ActivationPattern::from_bits(vec![true, true]))
            .unwrap();
        assert_eq!(map.matrix, vec![vec![rat_int(-2)]]);
        assert_eq!(map.offset, vec![rat_int(2)]);
    }

    #[test]
    fn affine_map_rejects_bad_pattern_length() {
        let net = abs_net();
        let err = net
            .affine_map_for_pattern(&ActivationPattern::from_bits(vec![true]))
            .unwrap_err();
        assert!(matches!(err, NetError::PatternLength { expected: 2, got: 1 }));
    }

    #[test]
    fn compose_matches_nested_eval() {
        let net = sawtooth2();
        let composed = compose(&net, &net).unwrap();
        assert_eq!(composed.eval(&[rat(1, 8)]).unwrap(), vec![rat(1, 2)]);
        for x in [rat(0, 1), rat(1, 3), rat(2, 5), rat(9, 10), rat_int(1)] {
            let inner = net.eval(&[x.clone()]).unwrap();
            let nested = net.eval(&inner).unwrap();
            assert_eq!(composed.eval(&[x]).unwrap(), nested);
        }
    }

    #[test]
    fn compose_with_identity_is_pointwise_equal() {
        let identity = ReluNet::with_inferred_class(
            1,
            vec![Layer::from_integers(&[&[1]], &[0], ActivationKind::Identity)],
        )
        .unwrap();
        let net = abs_net();
        let composed = compose(&identity, &net).unwrap();
        for k in -10..=10 {
            let x = rat(k, 7);
            assert_eq!(composed.eval(&[x.clone()]).unwrap(), net.eval(&[x]).unwrap());
        }
    }

    #[test]
    fn ternary_class_rejects_out_of_range_weight() {
        let l1 = Layer::from_integers(&[&[2]], &[0], ActivationKind::Relu);
        let l2 = Layer::from_integers(&[&[1]], &[0], ActivationKind::Identity);
        let err = ReluNet::new(1, vec![l1, l2], WeightClass::Ternary).unwrap_err();
        assert!(matches!(err, NetError::WeightClassViolation { layer: 0, .. }));
    }

    #[test]
    fn integer_class_rejects_fractions() {
        let l = Layer::new(
            vec![vec![rat(1, 2)]],
            vec![Rational::zero()],
            ActivationKind::Identity,
        )
        .unwrap();
        let err = ReluNet::new(1, vec![l], WeightClass::Integer).unwrap_err();
        assert!(matches!(err, NetError::WeightClassViolation { .. }));
        // inference falls back to the rational class
        let l = Layer::new(
            vec![vec![rat(1, 2)]],
            vec![Rational::zero()],
            ActivationKind::Identity,
        )
        .unwrap();
        let net = ReluNet::with_inferred_class(1, vec![l]).unwrap();
        assert_eq!(net.weight_class(), WeightClass::Rational);
    }

    #[test]
    fn final_layer_must_be_identity() {
        let l = Layer::from_integers(&[&[1]], &[0], ActivationKind::Relu);
        let err = ReluNet::with_inferred_class(1, vec![l]).unwrap_err();
        assert!(matches!(err, NetError::FinalLayerNotIdentity));
    }

    #[test]
    fn integer_eval_stays_integer() {
        let net = sawtooth2();
        let out = net.eval(&[rat_int(5)]).unwrap();
        assert!(out.iter().all(Rational::is_integer));
    }

    #[test]
    fn domain_spec_parsing() {
        let d = BoxDomain::from_spec("unit", 2).unwrap();
        assert_eq!(d, BoxDomain::unit(2));
        let d = BoxDomain::from_spec("-1,1x0,1/2", 2).unwrap();
        assert_eq!(d.lower()[0], Some(rat_int(-1)));
        assert_eq!(d.upper()[1], Some(rat(1, 2)));
        let d = BoxDomain::from_spec("*,1", 1).unwrap();
        assert_eq!(d.lower()[0], None);
        assert!(!d.is_bounded());
        assert!(BoxDomain::from_spec("0,1", 2).is_err());
        assert!(BoxDomain::from_spec("0x1", 1).is_err());
        assert!(BoxDomain::from_spec("0,0.5", 1).is_err());
        assert!(BoxDomain::from_spec("1,0", 1).is_err());
    }
}
