//! Dense two-phase simplex over exact rationals.
//!
//! Problems are in standard equality form `A x = b, x ≥ 0`. Pivoting follows
//! Bland's rule (lowest-index entering column, lowest-index leaving basic
//! variable among ratio ties), so runs terminate and are reproducible.
//!
//! When the constraints are infeasible, the Phase I duals are returned as a
//! Farkas vector `y` with `yᵀA ≤ 0` componentwise and `yᵀb > 0`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    /// `y` with `yᵀA ≤ 0` and `yᵀb > 0`; `gap = yᵀb`.
    Infeasible { farkas: Vec<Rational>, gap: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Optimum {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible { farkas: Vec<Rational>, gap: Rational },
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs, one per column.
    reduced: Vec<Rational>,
    /// Current objective value `c_Bᵀ x_B`.
    value: Rational,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, s: usize) {
        let p = self.rows[r][s].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
            self.rhs[r] /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][s].is_zero() {
                continue;
            }
            let f = self.rows[i][s].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.reduced[s].is_zero() {
            let f = self.reduced[s].clone();
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.value += &f * &pivot_rhs;
        }
        self.basis[r] = s;
    }

    /// Minimizes over columns `< allowed` using Bland's rule.
    fn run(&mut self, allowed: usize) -> Outcome {
        loop {
            let Some(s) = (0..allowed).find(|&j| self.reduced[j].is_negative()) else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][s];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, s),
                None => return Outcome::Unbounded,
            }
        }
    }

    fn primal(&self, columns: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); columns];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < columns {
                x[j] = self.rhs[i].clone();
            }
        }
        x
    }
}

/// Runs Phase I. On success the tableau has no artificial variable in its
/// basis and redundant rows are dropped.
fn phase_one(a: &[Vec<Rational>], b: &[Rational]) -> Result<Tableau, (Vec<Rational>, Rational)> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    assert!(a.iter().all(|r| r.len() == n), "ragged constraint matrix");
    assert_eq!(b.len(), m, "rhs length mismatch");

    let signs: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rational> = a[i]
            .iter()
            .map(|v| if signs[i] { -v.clone() } else { v.clone() })
            .collect();
        row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        rows.push(row);
        rhs.push(if signs[i] { -b[i].clone() } else { b[i].clone() });
    }
    let mut reduced = vec![Rational::zero(); n + m];
    for j in 0..n {
        reduced[j] = -rows.iter().map(|r| &r[j]).sum::<Rational>();
    }
    let value: Rational = rhs.iter().sum();
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        reduced,
        value,
    };
    // Phase I is bounded below by zero.
    let _ = t.run(n + m);

    if t.value.is_positive() {
        let farkas = (0..m)
            .map(|i| {
                let y = Rational::one() - &t.reduced[n + i];
                if signs[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        return Err((farkas, t.value.clone()));
    }

    // Drive remaining artificials out of the basis; drop rows that are
    // linear combinations of the others.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in t.rows.iter_mut() {
        row.truncate(n);
    }
    t.reduced.truncate(n);
    Ok(t)
}

/// Finds a basic feasible solution of `A x = b, x ≥ 0`, or a Farkas vector.
pub fn find_feasible(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    let n = a.first().map_or(0, |r| r.len());
    match phase_one(a, b) {
        Ok(t) => Feasibility::Feasible(t.primal(n)),
        Err((farkas, gap)) => Feasibility::Infeasible { farkas, gap },
    }
}

/// Optimizes `cᵀx` subject to `A x = b, x ≥ 0`.
pub fn optimize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational], direction: Direction) -> Optimum {
    let n = a.first().map_or(0, |r| r.len());
    assert_eq!(c.len(), n, "objective length mismatch");
    let mut t = match phase_one(a, b) {
        Ok(t) => t,
        Err((farkas, gap)) => return Optimum::Infeasible { farkas, gap },
    };
    let cost: Vec<Rational> = match direction {
        Direction::Minimize => c.to_vec(),
        Direction::Maximize => c.iter().map(|v| -v.clone()).collect(),
    };
    let mut reduced = cost.clone();
    let mut value = Rational::zero();
    for (i, &bj) in t.basis.iter().enumerate() {
        let cb = &cost[bj];
        if cb.is_zero() {
            continue;
        }
        for (d, a) in reduced.iter_mut().zip(&t.rows[i]) {
            *d -= cb * a;
        }
        value += cb * &t.rhs[i];
    }
    t.reduced = reduced;
    t.value = value;
    match t.run(n) {
        Outcome::Unbounded => Optimum::Unbounded,
        Outcome::Optimal => {
            let x = t.primal(n);
            let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
            Optimum::Optimal { x, value }
        }
    }
}
