//! Exact enumeration and counting of linear regions over a box domain.
//!
//! Cells are enumerated by a depth-first search over ReLU units in layer
//! order. Once the units below a given unit are fixed, its pre-activation is
//! an affine function of the input, so each branch adds one strict halfspace;
//! branches whose open polyhedron (intersected with the open domain box) is
//! empty are pruned by exact rational LP. Full-dimensional cells are then
//! merged into maximal regions: two cells belong to the same region when
//! they carry the same affine map and share a (d-1)-dimensional facet.
//!
//! Region semantics follow the closed, locally-maximal reading: raw cell
//! counts are reported alongside the merged count, and cells supported only
//! on hyperplanes are never produced in the first place. Two non-adjacent
//! cells with the same affine map count as distinct regions (maximality is
//! taken locally, over connected sets); `distinct_affine_count` exposes the
//! alternative reading.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lp::{self, Relation};
use crate::net::{
    layer_map, ActivationKind, ActivationPattern, AffineMap, BoxDomain, NetError, ReluNet,
};
use crate::oracle1d;
use crate::rational::{rat, Rational};

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("domain has empty interior")]
    EmptyDomain,
    #[error("enumeration budget exceeded after visiting {visited} nodes ({cells} cells found so far)")]
    BudgetExceeded { visited: u64, cells: u64 },
    #[error("this operation requires a bounded domain")]
    UnboundedDomain,
    #[error("this operation requires a 1-dimensional input, the network has {0}")]
    NotOneDimensional(usize),
    #[error("grid resolution must be at least 1 and yield at most {max} lattice points")]
    ResolutionTooLarge { max: u64 },
}

/// One halfspace of a cell: the pre-activation of `unit` under the cell's
/// pattern, written `normal · x ⋈ rhs` (`Ge` when the unit is active).
/// Units whose pre-activation has a zero normal under the pattern contribute
/// no halfspace.
#[derive(Debug, Clone)]
pub struct Halfspace {
    pub unit: usize,
    pub normal: Vec<Rational>,
    pub rhs: Rational,
    pub relation: Relation,
}

impl Halfspace {
    /// The open side as `a · x < b`.
    pub(crate) fn strict_form(&self) -> (Vec<Rational>, Rational) {
        match self.relation {
            Relation::Le => (self.normal.clone(), self.rhs.clone()),
            Relation::Ge => (
                self.normal.iter().map(|v| -v.clone()).collect(),
                -self.rhs.clone(),
            ),
            Relation::Eq => unreachable!("cell halfspaces are inequalities"),
        }
    }
}

/// A feasible, full-dimensional activation cell.
#[derive(Debug, Clone)]
pub struct RegionCell {
    pub pattern: ActivationPattern,
    pub halfspaces: Vec<Halfspace>,
    pub affine: AffineMap,
    /// Strictly interior point: satisfies every halfspace and the open box.
    pub witness: Vec<Rational>,
    /// Units whose pre-activation has a zero normal under this pattern,
    /// with the constant value; they contribute no halfspace but their sign
    /// matters when deciding facet adjacency.
    pub(crate) constant_units: Vec<(usize, Rational)>,
}

impl RegionCell {
    fn halfspace_for(&self, unit: usize) -> Option<&Halfspace> {
        self.halfspaces.iter().find(|h| h.unit == unit)
    }

    fn constant_value_for(&self, unit: usize) -> Option<&Rational> {
        self.constant_units.iter().find(|(u, _)| *u == unit).map(|(_, c)| c)
    }
}

/// Exact counts for one net over one domain.
#[derive(Debug, Clone)]
pub struct RegionReport {
    /// Feasible activation cells.
    pub cell_count: u64,
    /// Maximal linear regions after merging adjacent equal-map cells.
    pub region_count: u64,
    /// Distinct affine maps among cells.
    pub distinct_affine_count: u64,
    pub domain: BoxDomain,
    pub elapsed: Duration,
}

/// Search budget; exceeding it aborts with the partial count rather than
/// silently truncating.
#[derive(Debug, Clone)]
pub struct EnumerationLimits {
    pub max_visited: u64,
    pub max_cells: u64,
    /// Explore the inactive branch first. Counts must not depend on branch
    /// order; this knob exists so tests can prove it.
    pub inactive_first: bool,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_visited: 1_000_000, max_cells: 100_000, inactive_first: false }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Strict inequalities `a · x < b` carving out the open box.
fn box_strict_constraints(domain: &BoxDomain) -> Vec<(Vec<Rational>, Rational)> {
    let dim = domain.dim();
    let mut out = Vec::new();
    for j in 0..dim {
        if let Some(hi) = &domain.upper()[j] {
            let mut a = vec![Rational::zero(); dim];
            a[j] = rat(1, 1);
            out.push((a, hi.clone()));
        }
        if let Some(lo) = &domain.lower()[j] {
            let mut a = vec![Rational::zero(); dim];
            a[j] = rat(-1, 1);
            out.push((a, -lo.clone()));
        }
    }
    out
}

struct Enumerator<'a> {
    net: &'a ReluNet,
    dim: usize,
    limits: &'a EnumerationLimits,
    box_constraints: Vec<(Vec<Rational>, Rational)>,
    strict: Vec<(Vec<Rational>, Rational)>,
    pattern: Vec<bool>,
    halfspaces: Vec<Halfspace>,
    constant_units: Vec<(usize, Rational)>,
    cells: Vec<RegionCell>,
    visited: u64,
}

impl<'a> Enumerator<'a> {
    fn feasible(&self, extra: Option<&(Vec<Rational>, Rational)>) -> Option<Vec<Rational>> {
        let mut constraints = Vec::with_capacity(self.box_constraints.len() + self.strict.len() + 1);
        constraints.extend_from_slice(&self.box_constraints);
        constraints.extend_from_slice(&self.strict);
        if let Some(c) = extra {
            constraints.push(c.clone());
        }
        lp::strict_interior(self.dim, &constraints, &[]).map(|(point, _)| point)
    }

    fn layer_step(
        &mut self,
        layer_idx: usize,
        carried: AffineMap,
        witness: Vec<Rational>,
    ) -> Result<(), CountError> {
        if layer_idx == self.net.depth() {
            if self.cells.len() as u64 >= self.limits.max_cells {
                return Err(CountError::BudgetExceeded {
                    visited: self.visited,
                    cells: self.cells.len() as u64,
                });
            }
            self.cells.push(RegionCell {
                pattern: ActivationPattern::from_bits(self.pattern.clone()),
                halfspaces: self.halfspaces.clone(),
                affine: carried,
                witness,
                constant_units: self.constant_units.clone(),
            });
            return Ok(());
        }
        let layer = &self.net.layers()[layer_idx];
        let pre = layer_map(layer).compose(&carried);
        match layer.activation() {
            ActivationKind::Identity => self.layer_step(layer_idx + 1, pre, witness),
            ActivationKind::Relu => self.unit_step(layer_idx, 0, &pre, witness),
        }
    }

    fn unit_step(
        &mut self,
        layer_idx: usize,
        unit: usize,
        pre: &AffineMap,
        witness: Vec<Rational>,
    ) -> Result<(), CountError> {
        self.visited += 1;
        if self.visited > self.limits.max_visited {
            return Err(CountError::BudgetExceeded {
                visited: self.visited,
                cells: self.cells.len() as u64,
            });
        }
        let width = self.net.layers()[layer_idx].width();
        if unit == width {
            let bits = &self.pattern[self.pattern.len() - width..];
            let masked = pre.masked(bits);
            return self.layer_step(layer_idx + 1, masked, witness);
        }

        let normal = &pre.matrix[unit];
        let offset = &pre.offset[unit];
        let unit_id = self.pattern.len();
        if normal.iter().all(Rational::is_zero) {
            // constant pre-activation over the whole cell: a positive
            // constant is active, everything else (including an identically
            // zero unit) branches once as inactive
            let bit = offset.is_positive();
            self.pattern.push(bit);
            self.constant_units.push((unit_id, offset.clone()));
            let out = self.unit_step(layer_idx, unit + 1, pre, witness);
            self.constant_units.pop();
            self.pattern.pop();
            return out;
        }

        let value = dot(normal, &witness) + offset;
        let branches: [bool; 2] = if self.limits.inactive_first { [false, true] } else { [true, false] };
        for bit in branches {
            // active: normal·x + offset > 0, i.e. -normal·x < offset
            // inactive: normal·x < -offset
            let strict_constraint = if bit {
                (normal.iter().map(|v| -v.clone()).collect::<Vec<_>>(), offset.clone())
            } else {
                (normal.clone(), -offset.clone())
            };
            let child_witness = if (bit && value.is_positive()) || (!bit && value.is_negative()) {
                Some(witness.clone())
            } else {
                self.feasible(Some(&strict_constraint))
            };
            let Some(child_witness) = child_witness else { continue };
            self.pattern.push(bit);
            self.halfspaces.push(Halfspace {
                unit: unit_id,
                normal: normal.clone(),
                rhs: -offset.clone(),
                relation: if bit { Relation::Ge } else { Relation::Le },
            });
            self.strict.push(strict_constraint);
            let out = self.unit_step(layer_idx, unit + 1, pre, child_witness);
            self.pattern.pop();
            self.halfspaces.pop();
            self.strict.pop();
            out?;
        }
        Ok(())
    }
}

/// All feasible full-dimensional activation cells of `net` over the open
/// interior of `domain`, with interior witnesses.
pub fn enumerate_cells(net: &ReluNet, domain: &BoxDomain) -> Result<Vec<RegionCell>, CountError> {
    enumerate_cells_with_limits(net, domain, &EnumerationLimits::default())
}

pub fn enumerate_cells_with_limits(
    net: &ReluNet,
    domain: &BoxDomain,
    limits: &EnumerationLimits,
) -> Result<Vec<RegionCell>, CountError> {
    if domain.dim() != net.input_dim() {
        return Err(NetError::DomainMismatch { domain: domain.dim(), net: net.input_dim() }.into());
    }
    let dim = net.input_dim();
    let box_constraints = box_strict_constraints(domain);
    let root_witness = lp::strict_interior(dim, &box_constraints, &[])
        .map(|(point, _)| point)
        .ok_or(CountError::EmptyDomain)?;
    let mut enumerator = Enumerator {
        net,
        dim,
        limits,
        box_constraints,
        strict: Vec::new(),
        pattern: Vec::new(),
        halfspaces: Vec::new(),
        constant_units: Vec::new(),
        cells: Vec::new(),
        visited: 0,
    };
    enumerator.layer_step(0, AffineMap::identity(dim), root_witness)?;
    Ok(enumerator.cells)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn matrix_rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[rank][col];
            for c in col..cols {
                let delta = &factor * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// `Some(λ)` when `a = λ·reference`, for a nonzero `reference`.
fn parallel_scale(a: &[Rational], reference: &[Rational]) -> Option<Rational> {
    let k = reference.iter().position(|v| !v.is_zero())?;
    let scale = &a[k] / &reference[k];
    for (av, rv) in a.iter().zip(reference.iter()) {
        if *av != &scale * rv {
            return None;
        }
    }
    Some(scale)
}

/// Decide whether two cells with the same affine map share a
/// (d-1)-dimensional facet, so that they belong to one maximal region.
///
/// On the shared face every differing unit's pre-activation vanishes (both
/// branch functions agree there and are clamped by opposite signs), so the
/// face lies on one hyperplane and every other constraint of both cells
/// holds weakly. It is (d-1)-dimensional exactly when the vanishing normals
/// span one direction and a point of the hyperplane satisfies the remaining
/// constraints strictly — except for constraints parallel to the hyperplane,
/// which are constant on it: those are evaluated directly and either hold on
/// the whole face (and drop out) or rule it empty.
fn cells_adjacent(a: &RegionCell, b: &RegionCell, domain: &BoxDomain) -> bool {
    let diff = a.pattern.differing_units(&b.pattern);
    if diff.is_empty() {
        return false;
    }
    let mut equalities: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for &u in &diff {
        for cell in [a, b] {
            match cell.halfspace_for(u) {
                Some(h) => equalities.push((h.normal.clone(), h.rhs.clone())),
                None => match cell.constant_value_for(u) {
                    // identically zero on this side: vanishes everywhere, in
                    // particular on the face — no constraint
                    Some(c) if c.is_zero() => {}
                    // a nonzero constant can never vanish: the face is empty
                    _ => return false,
                },
            }
        }
    }
    if equalities.is_empty() {
        return false;
    }
    let normals: Vec<Vec<Rational>> = equalities.iter().map(|(n, _)| n.clone()).collect();
    if matrix_rank(&normals) != 1 {
        return false;
    }
    let (face_normal, face_rhs) = equalities[0].clone();
    let mut strict = box_strict_constraints(domain);
    for cell in [a, b] {
        for h in &cell.halfspaces {
            if diff.binary_search(&h.unit).is_ok() {
                continue;
            }
            let (coeffs, bound) = h.strict_form();
            match parallel_scale(&coeffs, &face_normal) {
                Some(scale) => {
                    // constant on the face: `scale · face_rhs` everywhere
                    if &scale * &face_rhs > bound {
                        return false;
                    }
                }
                None => strict.push((coeffs, bound)),
            }
        }
    }
    lp::strict_interior(domain.dim(), &strict, &equalities).is_some()
}

/// Group cells into maximal regions. Returns one dense component id per
/// cell: cells share an id exactly when they are connected through shared
/// (d-1)-facets with identical affine maps.
pub fn merge_cells(cells: &[RegionCell], domain: &BoxDomain) -> Vec<usize> {
    let mut by_map: HashMap<&AffineMap, Vec<usize>> = HashMap::new();
    for (i, cell) in cells.iter().enumerate() {
        by_map.entry(&cell.affine).or_default().push(i);
    }
    let mut uf = UnionFind::new(cells.len());
    for group in by_map.values() {
        for (gi, &i) in group.iter().enumerate() {
            for &j in &group[gi + 1..] {
                if uf.find(i) != uf.find(j) && cells_adjacent(&cells[i], &cells[j], domain) {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::with_capacity(cells.len());
    for i in 0..cells.len() {
        let root = uf.find(i);
        let next = ids.len();
        out.push(*ids.entry(root).or_insert(next));
    }
    out
}

/// Exact region count: enumerate cells, then merge adjacent cells with
/// identical affine maps into maximal regions.
pub fn count_regions_exact(net: &ReluNet, domain: &BoxDomain) -> Result<RegionReport, CountError> {
    count_regions_exact_with_limits(net, domain, &EnumerationLimits::default())
}

pub fn count_regions_exact_with_limits(
    net: &ReluNet,
    domain: &BoxDomain,
    limits: &EnumerationLimits,
) -> Result<RegionReport, CountError> {
    let start = Instant::now();
    let cells = enumerate_cells_with_limits(net, domain, limits)?;
    let components = merge_cells(&cells, domain);
    let region_count = components.iter().copied().max().map_or(0, |m| m as u64 + 1);
    let distinct: HashSet<&AffineMap> = cells.iter().map(|c| &c.affine).collect();
    Ok(RegionReport {
        cell_count: cells.len() as u64,
        region_count,
        distinct_affine_count: distinct.len() as u64,
        domain: domain.clone(),
        elapsed: start.elapsed(),
    })
}

/// The affine map governing `x`, read off the pre-activation signs (exact
/// zeros read as inactive).
fn affine_at(net: &ReluNet, x: &[Rational]) -> AffineMap {
    let mut map = AffineMap::identity(net.input_dim());
    for layer in net.layers() {
        map = layer_map(layer).compose(&map);
        if layer.activation() == ActivationKind::Relu {
            let values = map.apply(x);
            let bits: Vec<bool> = values.iter().map(Rational::is_positive).collect();
            map = map.masked(&bits);
        }
    }
    map
}

/// Move `x` off every unit hyperplane it happens to lie on, staying inside
/// the open box and inside the same set of already-strict halfspaces, so the
/// returned point lies in the interior of some feasible cell and its map is
/// that cell's map. Needed to keep the grid estimator a true lower bound
/// when lattice points collide with cell boundaries.
fn snap_to_cell_interior(net: &ReluNet, domain: &BoxDomain, mut x: Vec<Rational>) -> Vec<Rational> {
    let dim = net.input_dim();
    'retry: for _ in 0..64 {
        let mut offending: Vec<Vec<Rational>> = Vec::new();
        let mut clear: Vec<(Vec<Rational>, Rational)> = Vec::new();
        let mut map = AffineMap::identity(dim);
        for layer in net.layers() {
            let pre = layer_map(layer).compose(&map);
            if layer.activation() != ActivationKind::Relu {
                map = pre;
                continue;
            }
            let values = pre.apply(&x);
            let mut bits = Vec::with_capacity(values.len());
            for (unit, v) in values.iter().enumerate() {
                let normal = &pre.matrix[unit];
                if v.is_zero() {
                    if !normal.iter().all(Rational::is_zero) {
                        offending.push(normal.clone());
                    }
                } else {
                    clear.push((normal.clone(), v.clone()));
                }
                bits.push(v.is_positive());
            }
            map = pre.masked(&bits);
        }
        if offending.is_empty() {
            return x;
        }
        // direction with nonzero inner product against every offending normal
        let mut direction: Option<Vec<Rational>> = None;
        'dir: for m in 1..=64i64 {
            let mut d = Vec::with_capacity(dim);
            let mut pow = rat(1, 1);
            for _ in 0..dim {
                d.push(pow.clone());
                pow *= rat(m, 1);
            }
            if offending.iter().all(|n| !dot(n, &d).is_zero()) {
                direction = Some(d);
                break 'dir;
            }
        }
        let Some(d) = direction else { return x };
        // step short enough to keep every clear sign and stay in the open box
        let mut eps = rat(1, 1);
        for (normal, v) in &clear {
            let nd = dot(normal, &d);
            if !nd.is_zero() {
                let bound = v.abs() / (rat(2, 1) * nd.abs());
                if bound < eps {
                    eps = bound;
                }
            }
        }
        for j in 0..dim {
            if d[j].is_positive() {
                if let Some(hi) = &domain.upper()[j] {
                    let bound = (hi - &x[j]) / (rat(2, 1) * &d[j]);
                    if bound < eps {
                        eps = bound;
                    }
                }
            } else if d[j].is_negative() {
                if let Some(lo) = &domain.lower()[j] {
                    let bound = (&x[j] - lo) / (rat(2, 1) * d[j].abs());
                    if bound < eps {
                        eps = bound;
                    }
                }
            }
        }
        if !eps.is_positive() {
            return x;
        }
        for j in 0..dim {
            let step = &eps * &d[j];
            x[j] += step;
        }
        continue 'retry;
    }
    x
}

/// Sample the cell-midpoint lattice (`resolution` points per axis) and count
/// the distinct affine maps seen. Always a lower bound on
/// `distinct_affine_count`, hence on `region_count`.
pub fn estimate_regions_grid(
    net: &ReluNet,
    domain: &BoxDomain,
    resolution: u32,
) -> Result<u64, CountError> {
    const MAX_POINTS: u64 = 1 << 22;
    if domain.dim() != net.input_dim() {
        return Err(NetError::DomainMismatch { domain: domain.dim(), net: net.input_dim() }.into());
    }
    if !domain.is_bounded() {
        return Err(CountError::UnboundedDomain);
    }
    if resolution == 0 {
        return Err(CountError::ResolutionTooLarge { max: MAX_POINTS });
    }
    let dim = net.input_dim();
    let mut total: u64 = 1;
    for _ in 0..dim {
        total = total
            .checked_mul(resolution as u64)
            .filter(|&t| t <= MAX_POINTS)
            .ok_or(CountError::ResolutionTooLarge { max: MAX_POINTS })?;
    }
    // per-axis midpoints lo + (hi - lo)(2k+1)/(2r)
    let mut axes: Vec<Vec<Rational>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let lo = domain.lower()[j].clone().unwrap();
        let hi = domain.upper()[j].clone().unwrap();
        let span = &hi - &lo;
        let mut pts = Vec::with_capacity(resolution as usize);
        for k in 0..resolution {
            pts.push(&lo + &span * rat(2 * k as i64 + 1, 2 * resolution as i64));
        }
        axes.push(pts);
    }
    let mut seen: HashSet<AffineMap> = HashSet::new();
    let mut index = vec![0usize; dim];
    loop {
        let x: Vec<Rational> = index.iter().enumerate().map(|(j, &k)| axes[j][k].clone()).collect();
        let x = snap_to_cell_interior(net, domain, x);
        seen.insert(affine_at(net, &x));
        // odometer
        let mut j = 0;
        loop {
            if j == dim {
                return Ok(seen.len() as u64);
            }
            index[j] += 1;
            if index[j] < resolution as usize {
                break;
            }
            index[j] = 0;
            j += 1;
        }
    }
}

/// Outcome of the region-product check for a composition `outer ∘ inner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreconditionStatus {
    /// Every linear piece of the inner net is a bijection onto the outer
    /// domain (verified for 1-D instances).
    Verified,
    /// Verification is only implemented for 1-D inner nets; the caller
    /// asserts the bijection hypothesis.
    NotChecked,
    /// The bijection hypothesis fails; the product identity is not asserted.
    Unmet(String),
}

#[derive(Debug, Clone)]
pub struct CompositionCheck {
    pub inner_regions: u64,
    pub outer_regions: u64,
    pub composed_regions: u64,
    /// Whether `inner_regions · outer_regions = composed_regions`. Only
    /// meaningful when the precondition is not `Unmet`.
    pub product_holds: bool,
    pub precondition: PreconditionStatus,
    /// Domain used for the outer count: the exact range of the inner net
    /// (1-D) or its bounding box (n-D).
    pub outer_domain: BoxDomain,
}

/// Check the multiplicativity of region counts for `outer ∘ inner` over
/// `domain`: when every linear piece of `inner` maps its region bijectively
/// onto `outer`'s domain, `|regions(outer ∘ inner)| =
/// |regions(inner)| · |regions(outer)|`.
pub fn check_composition_lemma(
    inner: &ReluNet,
    outer: &ReluNet,
    domain: &BoxDomain,
) -> Result<CompositionCheck, CountError> {
    if domain.dim() != inner.input_dim() {
        return Err(NetError::DomainMismatch { domain: domain.dim(), net: inner.input_dim() }.into());
    }
    if outer.input_dim() != inner.output_dim() {
        return Err(NetError::DimensionMismatch {
            layer: inner.depth(),
            expected: inner.output_dim(),
            got: outer.input_dim(),
        }
        .into());
    }
    if !domain.is_bounded() {
        return Err(CountError::UnboundedDomain);
    }

    let mut precondition = PreconditionStatus::NotChecked;
    let outer_domain;
    if inner.input_dim() == 1 && inner.output_dim() == 1 {
        let lo = domain.lower()[0].clone().unwrap();
        let hi = domain.upper()[0].clone().unwrap();
        if lo >= hi {
            return Err(CountError::EmptyDomain);
        }
        let pieces = oracle1d::merged_segments(inner, &lo, &hi);
        let mut values: Vec<Rational> = Vec::new();
        for seg in &pieces {
            values.push(seg.value_at(&seg.x0)[0].clone());
            values.push(seg.value_at(&seg.x1)[0].clone());
        }
        let range_lo = values.iter().min().unwrap().clone();
        let range_hi = values.iter().max().unwrap().clone();
        precondition = PreconditionStatus::Verified;
        for seg in &pieces {
            if seg.slope[0].is_zero() {
                precondition = PreconditionStatus::Unmet(format!(
                    "piece [{}, {}] is constant, not a bijection onto the range",
                    seg.x0, seg.x1
                ));
                break;
            }
            let mut ends = [seg.value_at(&seg.x0)[0].clone(), seg.value_at(&seg.x1)[0].clone()];
            ends.sort();
            if ends[0] != range_lo || ends[1] != range_hi {
                precondition = PreconditionStatus::Unmet(format!(
                    "piece [{}, {}] maps onto [{}, {}], not onto the full range [{}, {}]",
                    seg.x0, seg.x1, ends[0], ends[1], range_lo, range_hi
                ));
                break;
            }
        }
        outer_domain = BoxDomain::new(vec![Some(range_lo)], vec![Some(range_hi)])?;
    } else {
        // bounding box of the inner net's range, coordinate by coordinate
        let cells = enumerate_cells(inner, domain)?;
        let out_dim = inner.output_dim();
        let mut lows: Vec<Option<Rational>> = vec![None; out_dim];
        let mut highs: Vec<Option<Rational>> = vec![None; out_dim];
        for cell in &cells {
            let mut constraints: Vec<lp::Constraint> = Vec::new();
            for h in &cell.halfspaces {
                constraints.push(lp::Constraint {
                    coeffs: h.normal.clone(),
                    relation: h.relation,
                    rhs: h.rhs.clone(),
                });
            }
            for (a, b) in box_strict_constraints(domain) {
                constraints.push(lp::Constraint::le(a, b));
            }
            for c in 0..out_dim {
                let row = &cell.affine.matrix[c];
                let offset = &cell.affine.offset[c];
                for sign in [1i64, -1] {
                    let obj: Vec<Rational> =
                        row.iter().map(|v| v * rat(sign, 1)).collect();
                    if let lp::LpOutcome::Optimal { value, .. } = lp::maximize(&obj, &constraints) {
                        let attained = if sign == 1 { &value + offset } else { -(&value) + offset };
                        if sign == 1 {
                            if highs[c].as_ref().is_none_or(|h| attained > *h) {
                                highs[c] = Some(attained);
                            }
                        } else if lows[c].as_ref().is_none_or(|l| attained < *l) {
                            lows[c] = Some(attained);
                        }
                    }
                }
            }
        }
        outer_domain = BoxDomain::new(lows, highs)?;
    }

    let inner_regions = count_regions_exact(inner, domain)?.region_count;
    let outer_regions = match count_regions_exact(outer, &outer_domain) {
        Ok(report) => report.region_count,
        // a point domain carries exactly one (trivial) linear region
        Err(CountError::EmptyDomain) => 1,
        Err(e) => return Err(e),
    };
    let composed = crate::net::compose(outer, inner)?;
    let composed_regions = count_regions_exact(&composed, domain)?.region_count;
    Ok(CompositionCheck {
        inner_regions,
        outer_regions,
        composed_regions,
        product_holds: inner_regions * outer_regions == composed_regions,
        precondition,
        outer_domain,
    })
}
