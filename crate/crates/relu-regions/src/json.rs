//! The network JSON wire format.
//!
//! Top-level object: `input_dim`, `layers` (each with `weights`, `bias`,
//! `activation`), and an optional `weight_class`. Every numeric entry is an
//! exact string — an integer literal or `"p/q"` — and parsing rejects float
//! literals outright, so files round-trip bit-exactly.

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::net::{ActivationKind, Layer, NetError, ReluNet, WeightClass};
use crate::rational::{format_rational, parse_rational, Rational, RationalParseError};
use crate::region::{RegionCell, RegionReport};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("in {context}: {source}")]
    Rational {
        context: String,
        #[source]
        source: RationalParseError,
    },
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("unknown activation `{0}` (expected \"relu\" or \"identity\")")]
    BadActivation(String),
    #[error("unknown weight class `{0}` (expected \"rational\", \"integer\" or \"ternary\")")]
    BadWeightClass(String),
}

/// An exact numeric literal. Only JSON strings are accepted; bare JSON
/// numbers (in particular floats) are rejected at deserialization time.
#[derive(Debug, Clone)]
struct ExactLiteral(String);

impl Serialize for ExactLiteral {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ExactLiteral {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExactVisitor;
        impl<'de> Visitor<'de> for ExactVisitor {
            type Value = ExactLiteral;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an exact numeric string such as \"3\" or \"-1/2\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExactLiteral, E> {
                Ok(ExactLiteral(v.to_string()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExactLiteral, E> {
                Err(E::custom(format!(
                    "float literal {v} rejected: encode numbers as exact strings (\"p/q\")"
                )))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExactLiteral, E> {
                Err(E::custom(format!(
                    "numeric literal {v} rejected: encode numbers as exact strings (\"{v}\")"
                )))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExactLiteral, E> {
                Err(E::custom(format!(
                    "numeric literal {v} rejected: encode numbers as exact strings (\"{v}\")"
                )))
            }
        }
        deserializer.deserialize_any(ExactVisitor)
    }
}

#[derive(Serialize, Deserialize)]
struct LayerJson {
    weights: Vec<Vec<ExactLiteral>>,
    bias: Vec<ExactLiteral>,
    activation: String,
}

#[derive(Serialize, Deserialize)]
struct NetJson {
    input_dim: usize,
    layers: Vec<LayerJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight_class: Option<String>,
}

fn activation_name(kind: ActivationKind) -> &'static str {
    match kind {
        ActivationKind::Relu => "relu",
        ActivationKind::Identity => "identity",
    }
}

fn parse_activation(name: &str) -> Result<ActivationKind, FormatError> {
    match name {
        "relu" => Ok(ActivationKind::Relu),
        "identity" => Ok(ActivationKind::Identity),
        other => Err(FormatError::BadActivation(other.to_string())),
    }
}

fn parse_class(name: &str) -> Result<WeightClass, FormatError> {
    match name {
        "rational" => Ok(WeightClass::Rational),
        "integer" => Ok(WeightClass::Integer),
        "ternary" => Ok(WeightClass::Ternary),
        other => Err(FormatError::BadWeightClass(other.to_string())),
    }
}

fn parse_entry(lit: &ExactLiteral, context: String) -> Result<Rational, FormatError> {
    parse_rational(&lit.0).map_err(|source| FormatError::Rational { context, source })
}

/// Serialize a net to the wire format (pretty-printed).
pub fn net_to_json(net: &ReluNet) -> String {
    let layers = net
        .layers()
        .iter()
        .map(|layer| LayerJson {
            weights: layer
                .weights()
                .iter()
                .map(|row| row.iter().map(|w| ExactLiteral(format_rational(w))).collect())
                .collect(),
            bias: layer.bias().iter().map(|b| ExactLiteral(format_rational(b))).collect(),
            activation: activation_name(layer.activation()).to_string(),
        })
        .collect();
    let doc = NetJson {
        input_dim: net.input_dim(),
        layers,
        weight_class: Some(net.weight_class().as_str().to_string()),
    };
    serde_json::to_string_pretty(&doc).expect("net serialization cannot fail")
}

/// Parse a net from the wire format. A declared `weight_class` is validated;
/// when absent, the tightest class the coefficients admit is inferred.
pub fn net_from_json(text: &str) -> Result<ReluNet, FormatError> {
    let doc: NetJson = serde_json::from_str(text)?;
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (li, layer) in doc.layers.iter().enumerate() {
        let mut weights = Vec::with_capacity(layer.weights.len());
        for (ri, row) in layer.weights.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (ci, lit) in row.iter().enumerate() {
                out.push(parse_entry(lit, format!("layer {li} weight ({ri},{ci})"))?);
            }
            weights.push(out);
        }
        let mut bias = Vec::with_capacity(layer.bias.len());
        for (bi, lit) in layer.bias.iter().enumerate() {
            bias.push(parse_entry(lit, format!("layer {li} bias {bi}"))?);
        }
        layers.push(Layer::new(weights, bias, parse_activation(&layer.activation)?)?);
    }
    let net = match &doc.weight_class {
        Some(name) => ReluNet::new(doc.input_dim, layers, parse_class(name)?)?,
        None => ReluNet::with_inferred_class(doc.input_dim, layers)?,
    };
    Ok(net)
}

fn rationals_to_json(values: &[Rational]) -> serde_json::Value {
    serde_json::Value::Array(
        values.iter().map(|v| serde_json::Value::String(format_rational(v))).collect(),
    )
}

fn domain_to_json(domain: &crate::net::BoxDomain) -> serde_json::Value {
    let side = |values: &[Option<Rational>]| {
        serde_json::Value::Array(
            values
                .iter()
                .map(|v| match v {
                    Some(r) => serde_json::Value::String(format_rational(r)),
                    None => serde_json::Value::Null,
                })
                .collect(),
        )
    };
    serde_json::json!({
        "lower": side(domain.lower()),
        "upper": side(domain.upper()),
    })
}

/// RegionReport as a JSON object with exact counts and elapsed milliseconds.
pub fn report_to_json(report: &RegionReport) -> serde_json::Value {
    serde_json::json!({
        "cell_count": report.cell_count,
        "region_count": report.region_count,
        "distinct_affine_count": report.distinct_affine_count,
        "domain": domain_to_json(&report.domain),
        "elapsed_ms": report.elapsed.as_millis() as u64,
    })
}

/// The full cell list: patterns, halfspaces as rational strings, witnesses,
/// and per-cell affine maps.
pub fn cells_to_json(cells: &[RegionCell]) -> serde_json::Value {
    let cell_values: Vec<serde_json::Value> = cells
        .iter()
        .map(|cell| {
            let halfspaces: Vec<serde_json::Value> = cell
                .halfspaces
                .iter()
                .map(|h| {
                    serde_json::json!({
                        "unit": h.unit,
                        "normal": rationals_to_json(&h.normal),
                        "rhs": format_rational(&h.rhs),
                        "relation": match h.relation {
                            crate::lp::Relation::Ge => ">=",
                            crate::lp::Relation::Le => "<=",
                            crate::lp::Relation::Eq => "=",
                        },
                    })
                })
                .collect();
            serde_json::json!({
                "pattern": cell.pattern.to_string(),
                "halfspaces": halfspaces,
                "witness": rationals_to_json(&cell.witness),
                "affine": {
                    "matrix": cell.affine.matrix.iter().map(|row| rationals_to_json(row)).collect::<Vec<_>>(),
                    "offset": rationals_to_json(&cell.affine.offset),
                },
            })
        })
        .collect();
    serde_json::json!({ "cells": cell_values })
}
