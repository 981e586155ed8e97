//! SVG rendering of 2-D region partitions.
//!
//! Cells are merged into maximal regions first, each region's polygon is
//! obtained by intersecting its halfspaces with the box (exact pairwise
//! constraint intersection plus a feasibility filter), and shared facets
//! between member cells cancel so each region becomes one path. Rational
//! vertices are converted to decimal strings only at the very end, for the
//! SVG text itself.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use relu_regions::lp::Relation;
use relu_regions::net::BoxDomain;
use relu_regions::rational::{format_rational, rat_int, Rational};
use relu_regions::region::{merge_cells, RegionCell};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("plotting requires a 2-dimensional domain, got {0}")]
    NotTwoDimensional(usize),
    #[error("plotting requires a bounded domain")]
    Unbounded,
    #[error("region polygon degenerated to fewer than 3 vertices")]
    DegeneratePolygon,
}

type Point = (Rational, Rational);

/// `a · x = b` carrier line of a constraint.
struct Line {
    a: [Rational; 2],
    b: Rational,
}

fn cell_lines(cell: &RegionCell, domain: &BoxDomain) -> Vec<Line> {
    let mut lines = Vec::new();
    for h in &cell.halfspaces {
        lines.push(Line { a: [h.normal[0].clone(), h.normal[1].clone()], b: h.rhs.clone() });
    }
    for (j, side) in [(0usize, domain.lower()), (0, domain.upper()), (1, domain.lower()), (1, domain.upper())]
        .iter()
        .map(|(j, s)| (*j, s[*j].clone()))
    {
        if let Some(bound) = side {
            let mut a = [Rational::zero(), Rational::zero()];
            a[j] = rat_int(1);
            lines.push(Line { a, b: bound });
        }
    }
    lines
}

fn satisfies(cell: &RegionCell, domain: &BoxDomain, p: &Point) -> bool {
    let x = [p.0.clone(), p.1.clone()];
    if !domain.contains(&x, false) {
        return false;
    }
    cell.halfspaces.iter().all(|h| {
        let v = &h.normal[0] * &p.0 + &h.normal[1] * &p.1;
        match h.relation {
            Relation::Ge => v >= h.rhs,
            Relation::Le => v <= h.rhs,
            Relation::Eq => unreachable!(),
        }
    })
}

fn point_key(p: &Point) -> (String, String) {
    (format_rational(&p.0), format_rational(&p.1))
}

/// Convex polygon of one cell, vertices in counterclockwise order.
fn cell_polygon(cell: &RegionCell, domain: &BoxDomain) -> Result<Vec<Point>, RenderError> {
    let lines = cell_lines(cell, domain);
    let mut vertices: Vec<Point> = Vec::new();
    let mut seen: HashMap<(String, String), ()> = HashMap::new();
    for (i, li) in lines.iter().enumerate() {
        for lj in lines.iter().skip(i + 1) {
            let det = &li.a[0] * &lj.a[1] - &li.a[1] * &lj.a[0];
            if det.is_zero() {
                continue;
            }
            let x = (&li.b * &lj.a[1] - &lj.b * &li.a[1]) / &det;
            let y = (&li.a[0] * &lj.b - &lj.a[0] * &li.b) / &det;
            let p = (x, y);
            if satisfies(cell, domain, &p) && seen.insert(point_key(&p), ()).is_none() {
                vertices.push(p);
            }
        }
    }
    if vertices.len() < 3 {
        return Err(RenderError::DegeneratePolygon);
    }
    // exact counterclockwise sort around the vertex centroid
    let n = rat_int(vertices.len() as i64);
    let cx = vertices.iter().map(|p| p.0.clone()).sum::<Rational>() / &n;
    let cy = vertices.iter().map(|p| p.1.clone()).sum::<Rational>() / &n;
    let half = |dx: &Rational, dy: &Rational| -> u8 {
        if dy.is_negative() || (dy.is_zero() && dx.is_negative()) {
            1
        } else {
            0
        }
    };
    vertices.sort_by(|p, q| {
        let (pdx, pdy) = (&p.0 - &cx, &p.1 - &cy);
        let (qdx, qdy) = (&q.0 - &cx, &q.1 - &cy);
        half(&pdx, &pdy)
            .cmp(&half(&qdx, &qdy))
            .then_with(|| {
                let cross = &pdx * &qdy - &pdy * &qdx;
                if cross.is_positive() {
                    std::cmp::Ordering::Less
                } else if cross.is_negative() {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
    });
    vertices.dedup_by(|a, b| a == b);
    Ok(vertices)
}

fn between(a: &Point, b: &Point, p: &Point) -> bool {
    // collinear and strictly inside segment ab
    let abx = &b.0 - &a.0;
    let aby = &b.1 - &a.1;
    let apx = &p.0 - &a.0;
    let apy = &p.1 - &a.1;
    let cross = &abx * &apy - &aby * &apx;
    if !cross.is_zero() {
        return false;
    }
    let dot = &abx * &apx + &aby * &apy;
    let len2 = &abx * &abx + &aby * &aby;
    dot.is_positive() && dot < len2
}

/// Union of member polygons: split edges at all shared vertices, cancel
/// opposite directed edges on shared facets, and chain the remainder into
/// boundary loops (multiple loops render as even-odd subpaths).
fn union_loops(polygons: &[Vec<Point>]) -> Vec<Vec<Point>> {
    if polygons.len() == 1 {
        return polygons.to_vec();
    }
    let mut pool: Vec<Point> = Vec::new();
    let mut pool_seen: HashMap<(String, String), usize> = HashMap::new();
    for poly in polygons {
        for p in poly {
            pool_seen.entry(point_key(p)).or_insert_with(|| {
                pool.push(p.clone());
                pool.len() - 1
            });
        }
    }
    let mut counts: HashMap<(usize, usize), i64> = HashMap::new();
    for poly in polygons {
        for i in 0..poly.len() {
            let a = &poly[i];
            let b = &poly[(i + 1) % poly.len()];
            // split edge at pool vertices lying strictly inside it
            let mut stops: Vec<(Rational, usize)> = Vec::new();
            for (idx, p) in pool.iter().enumerate() {
                if between(a, b, p) {
                    let t = (&p.0 - &a.0) * (&b.0 - &a.0) + (&p.1 - &a.1) * (&b.1 - &a.1);
                    stops.push((t, idx));
                }
            }
            stops.sort_by(|x, y| x.0.cmp(&y.0));
            let mut chain = vec![pool_seen[&point_key(a)]];
            chain.extend(stops.into_iter().map(|(_, idx)| idx));
            chain.push(pool_seen[&point_key(b)]);
            for pair in chain.windows(2) {
                *counts.entry((pair[0], pair[1])).or_insert(0) += 1;
            }
        }
    }
    // cancel opposite directions
    let mut outgoing: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = counts
        .keys()
        .map(|&(p, q)| (p.min(q), p.max(q)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    for (p, q) in pairs {
        let forward = counts.get(&(p, q)).copied().unwrap_or(0);
        let backward = counts.get(&(q, p)).copied().unwrap_or(0);
        let net = forward - backward;
        for _ in 0..net.abs() {
            if net > 0 {
                outgoing.entry(p).or_default().push(q);
            } else {
                outgoing.entry(q).or_default().push(p);
            }
        }
    }
    let mut loops = Vec::new();
    loop {
        let Some((&start, _)) = outgoing.iter().find(|(_, v)| !v.is_empty()) else { break };
        let mut walk = vec![start];
        let mut at = start;
        loop {
            let nexts = outgoing.get_mut(&at).expect("open boundary chain");
            let next = nexts.pop().expect("open boundary chain");
            if next == start {
                break;
            }
            walk.push(next);
            at = next;
        }
        loops.push(walk.into_iter().map(|i| pool[i].clone()).collect());
    }
    loops
}

/// Exact decimal rendering of a rational with `precision` fraction digits
/// (round half away from zero), trimmed of trailing zeros.
fn decimal(r: &Rational, precision: u32) -> String {
    let scale = BigInt::from(10u32).pow(precision);
    let scaled_num = r.numer() * &scale;
    let denom = r.denom();
    let twice = BigInt::from(2);
    let rounded = if scaled_num.is_negative() {
        (&scaled_num * &twice - denom) / (denom * &twice)
    } else {
        (&scaled_num * &twice + denom) / (denom * &twice)
    };
    let negative = rounded.is_negative();
    let digits = rounded.magnitude().to_string();
    let digits = if digits.len() <= precision as usize {
        format!("{}{}", "0".repeat(precision as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - precision as usize);
    let frac_part = frac_part.trim_end_matches('0');
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    if out == "-0" {
        out = "0".to_string();
    }
    out
}

fn fnv_hash(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Render merged regions as one SVG path per region, color keyed by the
/// region's affine map.
pub fn plot_regions_svg(
    cells: &[RegionCell],
    domain: &BoxDomain,
    precision: u32,
) -> Result<String, RenderError> {
    if domain.dim() != 2 {
        return Err(RenderError::NotTwoDimensional(domain.dim()));
    }
    if !domain.is_bounded() {
        return Err(RenderError::Unbounded);
    }
    let lo_x = domain.lower()[0].clone().unwrap();
    let hi_x = domain.upper()[0].clone().unwrap();
    let lo_y = domain.lower()[1].clone().unwrap();
    let hi_y = domain.upper()[1].clone().unwrap();
    let span_x = &hi_x - &lo_x;
    let span_y = &hi_y - &lo_y;
    let longest = if span_x >= span_y { span_x.clone() } else { span_y.clone() };
    let scale = rat_int(600) / &longest;
    let width = decimal(&(&span_x * &scale), 2);
    let height = decimal(&(&span_y * &scale), 2);
    // SVG y axis points down; flip vertically
    let project = |p: &Point| -> (String, String) {
        let x = (&p.0 - &lo_x) * &scale;
        let y = (&hi_y - &p.1) * &scale;
        (decimal(&x, precision), decimal(&y, precision))
    };

    let components = merge_cells(cells, domain);
    let region_count = components.iter().copied().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); region_count];
    for (cell_idx, &component) in components.iter().enumerate() {
        members[component].push(cell_idx);
    }

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width} {height}\" width=\"{width}\" height=\"{height}\">\n"
    ));
    for member in &members {
        let polygons = member
            .iter()
            .map(|&i| cell_polygon(&cells[i], domain))
            .collect::<Result<Vec<_>, _>>()?;
        let loops = union_loops(&polygons);
        let mut d = String::new();
        for ring in &loops {
            for (i, p) in ring.iter().enumerate() {
                let (x, y) = project(p);
                d.push_str(if i == 0 { "M " } else { "L " });
                d.push_str(&format!("{x},{y} "));
            }
            d.push_str("Z ");
        }
        let map = &cells[member[0]].affine;
        let mut key = String::new();
        for row in &map.matrix {
            for v in row {
                key.push_str(&format_rational(v));
                key.push(',');
            }
        }
        for v in &map.offset {
            key.push_str(&format_rational(v));
            key.push(',');
        }
        let hue = fnv_hash(key.as_bytes()) % 360;
        svg.push_str(&format!(
            "  <path class=\"region\" d=\"{}\" fill=\"hsl({hue}, 65%, 72%)\" stroke=\"#333333\" stroke-width=\"1\" fill-rule=\"evenodd\"/>\n",
            d.trim_end()
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
