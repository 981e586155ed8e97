//! Independent 1-D region counter by exact breakpoint propagation.
//!
//! For a single-input net the piecewise structure can be carried layer by
//! layer as a sorted list of segments, each with the exact affine restriction
//! of the current layer's outputs. Every ReLU inserts breakpoints where a
//! pre-activation crosses zero (solved exactly in rationals); after the last
//! layer, adjacent segments with equal affine restriction merge. This never
//! touches the LP machinery, so it serves as an independent oracle for the
//! cell-enumeration counter.

use std::collections::HashSet;
use std::time::Instant;

use num_traits::{Signed, Zero};

use crate::net::{ActivationKind, BoxDomain, NetError, ReluNet};
use crate::rational::{rat, Rational};
use crate::region::{CountError, RegionReport};

/// One maximal interval `[x0, x1]` on which every tracked coordinate is
/// affine: coordinate `d` equals `slope[d]·x + intercept[d]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub x0: Rational,
    pub x1: Rational,
    pub slope: Vec<Rational>,
    pub intercept: Vec<Rational>,
}

impl Segment {
    pub fn value_at(&self, x: &Rational) -> Vec<Rational> {
        self.slope
            .iter()
            .zip(self.intercept.iter())
            .map(|(s, t)| s * x + t)
            .collect()
    }

    fn same_map(&self, other: &Segment) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }
}

fn check_interval(net: &ReluNet, domain: &BoxDomain) -> Result<(Rational, Rational), CountError> {
    if net.input_dim() != 1 {
        return Err(CountError::NotOneDimensional(net.input_dim()));
    }
    if domain.dim() != 1 {
        return Err(CountError::Net(NetError::DomainMismatch {
            domain: domain.dim(),
            net: 1,
        }));
    }
    let (lo, hi) = match (&domain.lower()[0], &domain.upper()[0]) {
        (Some(lo), Some(hi)) => (lo.clone(), hi.clone()),
        _ => return Err(CountError::UnboundedDomain),
    };
    if lo >= hi {
        return Err(CountError::EmptyDomain);
    }
    Ok((lo, hi))
}

/// The maximal refinement of `[lo, hi]` on which the whole net is affine,
/// one segment per activation cell, with the net's output map per segment.
pub fn refine(net: &ReluNet, lo: &Rational, hi: &Rational) -> Vec<Segment> {
    let mut segments = vec![Segment {
        x0: lo.clone(),
        x1: hi.clone(),
        slope: vec![rat(1, 1)],
        intercept: vec![Rational::zero()],
    }];

    for layer in net.layers() {
        // affine step
        for seg in segments.iter_mut() {
            let mut slope = Vec::with_capacity(layer.width());
            let mut intercept = Vec::with_capacity(layer.width());
            for (row, b) in layer.weights().iter().zip(layer.bias().iter()) {
                let mut s = Rational::zero();
                let mut t = b.clone();
                for (w, (sv, tv)) in row.iter().zip(seg.slope.iter().zip(seg.intercept.iter())) {
                    if !w.is_zero() {
                        s += w * sv;
                        t += w * tv;
                    }
                }
                slope.push(s);
                intercept.push(t);
            }
            seg.slope = slope;
            seg.intercept = intercept;
        }

        if layer.activation() != ActivationKind::Relu {
            continue;
        }

        // split at zero crossings, then clamp per refined segment
        let mut refined = Vec::with_capacity(segments.len());
        for seg in segments.into_iter() {
            let mut cuts: Vec<Rational> = Vec::new();
            for (s, t) in seg.slope.iter().zip(seg.intercept.iter()) {
                if s.is_zero() {
                    continue;
                }
                let root = -(t / s);
                if root > seg.x0 && root < seg.x1 {
                    cuts.push(root);
                }
            }
            cuts.sort();
            cuts.dedup();
            let mut bounds = Vec::with_capacity(cuts.len() + 2);
            bounds.push(seg.x0.clone());
            bounds.extend(cuts);
            bounds.push(seg.x1.clone());
            for pair in bounds.windows(2) {
                let (a, b) = (&pair[0], &pair[1]);
                let mid = (a + b) / rat(2, 1);
                let mut slope = seg.slope.clone();
                let mut intercept = seg.intercept.clone();
                for (s, t) in slope.iter_mut().zip(intercept.iter_mut()) {
                    let v = &*s * &mid + &*t;
                    if v.is_negative() {
                        *s = Rational::zero();
                        *t = Rational::zero();
                    } else if v.is_zero() {
                        // no interior zero crossings remain, so this
                        // coordinate is identically zero on the segment
                        debug_assert!(s.is_zero() && t.is_zero());
                        *s = Rational::zero();
                        *t = Rational::zero();
                    }
                }
                refined.push(Segment { x0: a.clone(), x1: b.clone(), slope, intercept });
            }
        }
        segments = refined;
    }

    segments
}

/// Adjacent segments with identical output maps, merged.
pub fn merged_segments(net: &ReluNet, lo: &Rational, hi: &Rational) -> Vec<Segment> {
    let mut merged: Vec<Segment> = Vec::new();
    for seg in refine(net, lo, hi) {
        match merged.last_mut() {
            Some(last) if last.same_map(&seg) => last.x1 = seg.x1,
            _ => merged.push(seg),
        }
    }
    merged
}

/// Exact region count of a single-input net over a bounded interval, by
/// breakpoint propagation.
pub fn count_regions_1d(net: &ReluNet, domain: &BoxDomain) -> Result<RegionReport, CountError> {
    let (lo, hi) = check_interval(net, domain)?;
    let start = Instant::now();
    let cells = refine(net, &lo, &hi);
    let mut distinct: HashSet<(Vec<Rational>, Vec<Rational>)> = HashSet::new();
    for seg in &cells {
        distinct.insert((seg.slope.clone(), seg.intercept.clone()));
    }
    let mut region_count = 0u64;
    let mut prev: Option<&Segment> = None;
    for seg in &cells {
        if !matches!(prev, Some(p) if p.same_map(seg)) {
            region_count += 1;
        }
        prev = Some(seg);
    }
    Ok(RegionReport {
        cell_count: cells.len() as u64,
        region_count,
        distinct_affine_count: distinct.len() as u64,
        domain: domain.clone(),
        elapsed: start.elapsed(),
    })
}

/// Interior breakpoints of the merged piecewise structure.
pub fn breakpoints(net: &ReluNet, domain: &BoxDomain) -> Result<Vec<Rational>, CountError> {
    let (lo, hi) = check_interval(net, domain)?;
    Ok(merged_segments(net, &lo, &hi)
        .iter()
        .skip(1)
        .map(|seg| seg.x0.clone())
        .collect())
}
