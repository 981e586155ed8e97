//! Dense exact-rational linear programming.
//!
//! A small two-phase simplex over `BigRational` with Bland's rule, used to
//! decide strict feasibility of activation cells and to certify shared
//! facets. Free variables are handled by sign splitting. Problem sizes here
//! are tiny (a few dozen constraints over at most a handful of variables), so
//! a dense tableau with recomputed reduced costs is the simplest thing that
//! is obviously correct.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `coeffs · y  ⋈  rhs` over free variables `y`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { coeffs, relation: Relation::Le, rhs }
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { coeffs, relation: Relation::Ge, rhs }
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { coeffs, relation: Relation::Eq, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        debug_assert!(!pivot.is_zero());
        for v in self.rows[row].iter_mut() {
            *v /= &pivot;
        }
        self.rhs[row] /= &pivot;
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                let delta = &factor * &self.rows[row][c];
                if !delta.is_zero() {
                    self.rows[r][c] -= delta;
                }
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[r] -= delta;
        }
        self.basis[row] = col;
    }

    /// Bland's rule simplex over the columns `0..active`. Returns `false` on
    /// unboundedness.
    fn run(&mut self, cost: &[Rational], active: usize) -> bool {
        loop {
            // reduced costs, recomputed from scratch each iteration
            let mut reduced = cost[..active].to_vec();
            for (r, &b) in self.basis.iter().enumerate() {
                let cb = &cost[b];
                if cb.is_zero() {
                    continue;
                }
                for c in 0..active {
                    let delta = cb * &self.rows[r][c];
                    if !delta.is_zero() {
                        reduced[c] -= delta;
                    }
                }
            }
            let entering = match (0..active).find(|&c| reduced[c].is_positive()) {
                Some(c) => c,
                None => return true,
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let coeff = &self.rows[r][entering];
                if !coeff.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / coeff;
                let better = match &leaving {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, entering),
                None => return false,
            }
        }
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        let mut v = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if b < cost.len() && !cost[b].is_zero() {
                v += &cost[b] * &self.rhs[r];
            }
        }
        v
    }
}

/// Maximize `objective · y` over free variables subject to `constraints`.
pub fn maximize(objective: &[Rational], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    for c in constraints {
        debug_assert_eq!(c.coeffs.len(), n, "constraint arity mismatch");
    }
    let m = constraints.len();
    let num_slacks = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let struct_cols = 2 * n;
    let slack_start = struct_cols;
    let art_start = slack_start + num_slacks;
    let total_cols = art_start + m; // artificial columns, allocated per row as needed

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut artificials = 0usize;
    let mut slack_idx = 0usize;

    for c in constraints {
        let mut row = vec![Rational::zero(); total_cols];
        let mut b = c.rhs.clone();
        // orient everything as Le or Eq
        let flip_ge = c.relation == Relation::Ge;
        for (i, coef) in c.coeffs.iter().enumerate() {
            let v = if flip_ge { -coef.clone() } else { coef.clone() };
            row[2 * i] = v.clone();
            row[2 * i + 1] = -v;
        }
        if flip_ge {
            b = -b;
        }
        let slack_col = if c.relation != Relation::Eq {
            let col = slack_start + slack_idx;
            slack_idx += 1;
            row[col] = Rational::from_integer(1.into());
            Some(col)
        } else {
            None
        };
        // normalize rhs ≥ 0
        if b.is_negative() {
            for v in row.iter_mut() {
                if !v.is_zero() {
                    *v = -v.clone();
                }
            }
            b = -b;
        }
        let basic = match slack_col {
            Some(col) if row[col].is_positive() => col,
            _ => {
                let col = art_start + artificials;
                artificials += 1;
                row[col] = Rational::from_integer(1.into());
                col
            }
        };
        basis.push(basic);
        rows.push(row);
        rhs.push(b);
    }

    let mut tab = Tableau { rows, rhs, basis, cols: total_cols };

    if artificials > 0 {
        let mut phase1 = vec![Rational::zero(); total_cols];
        for c in art_start..art_start + artificials {
            phase1[c] = -Rational::from_integer(1.into());
        }
        let ok = tab.run(&phase1, total_cols);
        debug_assert!(ok, "phase-1 objective is bounded by construction");
        if tab.objective_value(&phase1).is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive leftover artificials out of the basis (degenerate rows)
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                match (0..art_start).find(|&c| !tab.rows[r][c].is_zero()) {
                    Some(c) => tab.pivot(r, c),
                    None => {
                        // redundant row
                        tab.rows.swap_remove(r);
                        tab.rhs.swap_remove(r);
                        tab.basis.swap_remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut phase2 = vec![Rational::zero(); art_start];
    for (i, coef) in objective.iter().enumerate() {
        phase2[2 * i] = coef.clone();
        phase2[2 * i + 1] = -coef.clone();
    }
    for row in tab.rows.iter_mut() {
        row.truncate(art_start);
    }
    tab.cols = art_start;
    if !tab.run(&phase2, art_start) {
        return LpOutcome::Unbounded;
    }

    let mut std_vals = vec![Rational::zero(); art_start];
    for (r, &b) in tab.basis.iter().enumerate() {
        std_vals[b] = tab.rhs[r].clone();
    }
    let point: Vec<Rational> = (0..n)
        .map(|i| &std_vals[2 * i] - &std_vals[2 * i + 1])
        .collect();
    let value = objective
        .iter()
        .zip(point.iter())
        .fold(Rational::zero(), |acc, (c, x)| acc + c * x);
    LpOutcome::Optimal { value, point }
}

/// Decide whether the open polyhedron `{x : a·x < b for every strict row}`
/// intersected with the affine subspace `{x : e·x = f}` is nonempty, by
/// maximizing a shared slack `s ≤ 1`. Returns an interior witness and the
/// achieved slack when it is.
pub fn strict_interior(
    dim: usize,
    strict: &[(Vec<Rational>, Rational)],
    equalities: &[(Vec<Rational>, Rational)],
) -> Option<(Vec<Rational>, Rational)> {
    let one = Rational::from_integer(1.into());
    let mut objective = vec![Rational::zero(); dim + 1];
    objective[dim] = one.clone();
    let mut constraints = Vec::with_capacity(strict.len() + equalities.len() + 1);
    for (a, b) in strict {
        debug_assert_eq!(a.len(), dim);
        let mut coeffs = a.clone();
        coeffs.push(one.clone());
        constraints.push(Constraint::le(coeffs, b.clone()));
    }
    for (e, f) in equalities {
        debug_assert_eq!(e.len(), dim);
        let mut coeffs = e.clone();
        coeffs.push(Rational::zero());
        constraints.push(Constraint::eq(coeffs, f.clone()));
    }
    let mut cap = vec![Rational::zero(); dim + 1];
    cap[dim] = one.clone();
    constraints.push(Constraint::le(cap, one));
    match maximize(&objective, &constraints) {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            Some((point[..dim].to_vec(), value))
        }
        LpOutcome::Unbounded => unreachable!("slack is capped at 1"),
        _ => None,
    }
}
