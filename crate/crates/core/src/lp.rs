//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex with Bland's rule. Phase I minimises the
//! sum of artificial variables; when that optimum is positive the dual of the
//! auxiliary problem is turned into a Farkas certificate over the caller's
//! constraints. Nothing here uses a tolerance: every status is decided by
//! exact sign tests and every result can be re-checked with
//! [`verify_certificate`].

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{dot, zeros, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Minimize,
    Maximize,
    Feasibility,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A linear program over `num_vars` variables.
///
/// Variables are free unless marked nonnegative with
/// [`LinearProgram::set_nonneg`]. A nonnegativity bound behaves like an
/// implicit `x_j >= 0` row appended after the explicit constraints; Farkas
/// certificates carry a multiplier for each of those rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Vec<Rational>>,
    pub sense: Sense,
    pub nonneg: Vec<bool>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
            objective: None,
            sense: Sense::Feasibility,
            nonneg: vec![false; num_vars],
        }
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn minimize(&mut self, objective: Vec<Rational>) {
        self.objective = Some(objective);
        self.sense = Sense::Minimize;
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) {
        self.objective = Some(objective);
        self.sense = Sense::Maximize;
    }

    pub fn validate(&self) -> Result<()> {
        if self.nonneg.len() != self.num_vars {
            return Err(Error::input(format!(
                "nonneg flags have length {}, expected {}",
                self.nonneg.len(),
                self.num_vars
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(Error::input(format!(
                    "constraint {i} has {} coefficients, expected {}",
                    c.coeffs.len(),
                    self.num_vars
                )));
            }
        }
        match (&self.objective, self.sense) {
            (Some(obj), _) if obj.len() != self.num_vars => Err(Error::input(format!(
                "objective has {} coefficients, expected {}",
                obj.len(),
                self.num_vars
            ))),
            (None, Sense::Minimize | Sense::Maximize) => {
                Err(Error::input("optimisation sense without an objective"))
            }
            _ => Ok(()),
        }
    }

    fn optimizing(&self) -> Option<&[Rational]> {
        match self.sense {
            Sense::Feasibility => None,
            _ => self.objective.as_deref(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Feasible,
    Infeasible,
    Unbounded,
}

/// Proof of infeasibility: multipliers for the explicit constraints and for
/// the implicit `x_j >= 0` rows (zero for free variables).
///
/// Sign conventions: `rows[i] >= 0` on `<=` rows, `<= 0` on `>=` rows, free
/// on `=` rows; `bounds[j] <= 0`. The combined row
/// `Σ rows[i]·a_i + Σ bounds[j]·e_j` is zero and the combined right-hand
/// side `Σ rows[i]·b_i` is negative, so `0 <= negative` would follow from
/// any feasible point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub rows: Vec<Rational>,
    pub bounds: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// A feasible point; for `Unbounded` it is the base point of `ray`.
    pub solution: Option<Vec<Rational>>,
    pub optimum: Option<Rational>,
    pub farkas: Option<FarkasCertificate>,
    /// Improving recession direction when the objective is unbounded.
    pub ray: Option<Vec<Rational>>,
    /// Number of simplex pivots across both phases.
    pub pivots: usize,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Feasible
    }
}

/// Column layout of the standard-form problem `Ā z = b̄, z >= 0, b̄ >= 0`.
struct StandardForm {
    /// For each original variable: (positive column, negative column if free).
    var_cols: Vec<(usize, Option<usize>)>,
    /// Sign applied to each row to make its right-hand side nonnegative.
    row_sign: Vec<Rational>,
    /// Number of structural plus slack columns; artificials follow.
    num_real: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for j in 0..lp.num_vars {
            if lp.nonneg[j] {
                var_cols.push((next, None));
                next += 1;
            } else {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let num_slacks = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let num_real = next + num_slacks;
        let num_rows = lp.constraints.len();
        let width = num_real + num_rows;

        let mut rows = Vec::with_capacity(num_rows);
        let mut rhs = Vec::with_capacity(num_rows);
        let mut row_sign = Vec::with_capacity(num_rows);
        let mut slack = next;
        for (i, c) in lp.constraints.iter().enumerate() {
            let sign = if c.rhs.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            };
            let mut row = zeros(width);
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (pos, neg) = var_cols[j];
                row[pos] = &sign * a;
                if let Some(neg) = neg {
                    row[neg] = -(&sign * a);
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = sign.clone();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -sign.clone();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[num_real + i] = Rational::one();
            rhs.push(&sign * &c.rhs);
            row_sign.push(sign);
            rows.push(row);
        }
        Self {
            var_cols,
            row_sign,
            num_real,
            rows,
            rhs,
        }
    }

    fn recover(&self, z: &[Rational]) -> Vec<Rational> {
        self.var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &z[pos] - &z[neg],
                None => z[pos].clone(),
            })
            .collect()
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the current phase.
    cost_row: Vec<Rational>,
    pivots: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        self.rhs[row] *= &inv;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for (v, p) in self.rows[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        if !self.cost_row[col].is_zero() {
            let factor = self.cost_row[col].clone();
            for (v, p) in self.cost_row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Sets reduced costs `c_j − c_B·B⁻¹a_j` for the cost vector `cost`.
    fn price(&mut self, cost: &[Rational]) {
        let mut reduced = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (v, a) in reduced.iter_mut().zip(&self.rows[r]) {
                if !a.is_zero() {
                    *v -= &cost[b] * a;
                }
            }
        }
        self.cost_row = reduced;
    }

    /// Bland's rule: lowest-index improving column enters, ratio ties are
    /// broken by the lowest-index basic variable.
    fn run(&mut self, eligible: usize) -> PhaseEnd {
        loop {
            let Some(enter) = (0..eligible).find(|&j| self.cost_row[j].is_negative()) else {
                return PhaseEnd::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return PhaseEnd::Unbounded(enter),
            }
        }
    }

    fn basic_solution(&self, width: usize) -> Vec<Rational> {
        let mut z = zeros(width);
        for (r, &b) in self.basis.iter().enumerate() {
            if b < width {
                z[b] = self.rhs[r].clone();
            }
        }
        z
    }
}

/// Solves `lp` exactly.
///
/// Deterministic for a fixed input. Infeasible problems carry a
/// [`FarkasCertificate`], unbounded ones a feasible point and an improving
/// ray.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let sf = StandardForm::build(lp);
    let num_rows = sf.rows.len();
    let width = sf.num_real + num_rows;

    let mut tab = Tableau {
        rows: sf.rows.clone(),
        rhs: sf.rhs.clone(),
        basis: (sf.num_real..width).collect(),
        cost_row: Vec::new(),
        pivots: 0,
    };

    // Phase I: minimise the sum of artificials.
    let mut phase1_cost = zeros(width);
    for c in phase1_cost.iter_mut().skip(sf.num_real) {
        *c = Rational::one();
    }
    tab.price(&phase1_cost);
    // Phase I is bounded below by zero.
    let _ = tab.run(width);

    let infeasibility: Rational = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&b, _)| b >= sf.num_real)
        .fold(Rational::zero(), |acc, (_, v)| acc + v);
    if infeasibility.is_positive() {
        // Dual of Phase I: y_k = 1 − (reduced cost of artificial k).
        let rows: Vec<Rational> = (0..num_rows)
            .map(|k| {
                let y = Rational::one() - &tab.cost_row[sf.num_real + k];
                -(&sf.row_sign[k] * y)
            })
            .collect();
        let bounds = (0..lp.num_vars)
            .map(|j| {
                if lp.nonneg[j] {
                    -lp.constraints
                        .iter()
                        .zip(&rows)
                        .fold(Rational::zero(), |acc, (c, u)| acc + u * &c.coeffs[j])
                } else {
                    Rational::zero()
                }
            })
            .collect();
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            solution: None,
            optimum: None,
            farkas: Some(FarkasCertificate { rows, bounds }),
            ray: None,
            pivots: tab.pivots,
        });
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= sf.num_real {
            match (0..sf.num_real).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => {
                    tab.rows.remove(r);
                    tab.rhs.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for row in tab.rows.iter_mut() {
        row.truncate(sf.num_real);
    }

    let Some(objective) = lp.optimizing() else {
        let z = tab.basic_solution(sf.num_real);
        return Ok(LpOutcome {
            status: LpStatus::Feasible,
            solution: Some(sf.recover(&z)),
            optimum: None,
            farkas: None,
            ray: None,
            pivots: tab.pivots,
        });
    };

    // Phase II works on a minimisation.
    let flip = lp.sense == Sense::Maximize;
    let mut cost = zeros(sf.num_real);
    for (j, &(pos, neg)) in sf.var_cols.iter().enumerate() {
        let c = if flip {
            -objective[j].clone()
        } else {
            objective[j].clone()
        };
        if let Some(neg) = neg {
            cost[neg] = -c.clone();
        }
        cost[pos] = c;
    }
    tab.price(&cost);
    let end = tab.run(sf.num_real);
    let z = tab.basic_solution(sf.num_real);
    let solution = sf.recover(&z);
    match end {
        PhaseEnd::Optimal => {
            let optimum = dot(objective, &solution);
            Ok(LpOutcome {
                status: LpStatus::Feasible,
                solution: Some(solution),
                optimum: Some(optimum),
                farkas: None,
                ray: None,
                pivots: tab.pivots,
            })
        }
        PhaseEnd::Unbounded(enter) => {
            let mut dz = zeros(sf.num_real);
            dz[enter] = Rational::one();
            for (r, &b) in tab.basis.iter().enumerate() {
                dz[b] = -tab.rows[r][enter].clone();
            }
            Ok(LpOutcome {
                status: LpStatus::Unbounded,
                solution: Some(solution),
                optimum: None,
                farkas: None,
                ray: Some(sf.recover(&dz)),
                pivots: tab.pivots,
            })
        }
    }
}

fn satisfies(c: &Constraint, x: &[Rational]) -> bool {
    let lhs = dot(&c.coeffs, x);
    match c.relation {
        Relation::Le => lhs <= c.rhs,
        Relation::Eq => lhs == c.rhs,
        Relation::Ge => lhs >= c.rhs,
    }
}

fn is_feasible_point(lp: &LinearProgram, x: &[Rational]) -> bool {
    x.len() == lp.num_vars
        && lp.constraints.iter().all(|c| satisfies(c, x))
        && x.iter()
            .zip(&lp.nonneg)
            .all(|(v, &nn)| !nn || !v.is_negative())
}

/// Checks a Farkas certificate against `lp` by exact recombination.
pub fn verify_farkas(lp: &LinearProgram, cert: &FarkasCertificate) -> Result<bool> {
    if cert.rows.len() != lp.constraints.len() || cert.bounds.len() != lp.num_vars {
        return Err(Error::input(format!(
            "certificate has {}+{} multipliers, expected {}+{}",
            cert.rows.len(),
            cert.bounds.len(),
            lp.constraints.len(),
            lp.num_vars
        )));
    }
    let signs_ok = lp
        .constraints
        .iter()
        .zip(&cert.rows)
        .all(|(c, u)| match c.relation {
            Relation::Le => !u.is_negative(),
            Relation::Ge => !u.is_positive(),
            Relation::Eq => true,
        });
    let bounds_ok =
        cert.bounds
            .iter()
            .zip(&lp.nonneg)
            .all(|(w, &nn)| if nn { !w.is_positive() } else { w.is_zero() });
    if !signs_ok || !bounds_ok {
        return Ok(false);
    }
    let mut combined = cert.bounds.clone();
    let mut combined_rhs = Rational::zero();
    for (c, u) in lp.constraints.iter().zip(&cert.rows) {
        if u.is_zero() {
            continue;
        }
        for (acc, a) in combined.iter_mut().zip(&c.coeffs) {
            *acc += u * a;
        }
        combined_rhs += u * &c.rhs;
    }
    Ok(combined.iter().all(Zero::is_zero) && combined_rhs.is_negative())
}

/// Independent audit of an [`LpOutcome`]: feasible points are re-substituted,
/// optima recomputed, Farkas certificates recombined and unbounded rays
/// checked to be improving recession directions.
pub fn verify_certificate(lp: &LinearProgram, outcome: &LpOutcome) -> Result<bool> {
    lp.validate()?;
    match outcome.status {
        LpStatus::Feasible => {
            let Some(x) = &outcome.solution else {
                return Ok(false);
            };
            if x.len() != lp.num_vars {
                return Err(Error::input(format!(
                    "solution has length {}, expected {}",
                    x.len(),
                    lp.num_vars
                )));
            }
            if !is_feasible_point(lp, x) {
                return Ok(false);
            }
            match (lp.optimizing(), &outcome.optimum) {
                (Some(c), Some(opt)) => Ok(dot(c, x) == *opt),
                (None, None) => Ok(true),
                _ => Ok(false),
            }
        }
        LpStatus::Infeasible => match &outcome.farkas {
            Some(cert) => verify_farkas(lp, cert),
            None => Ok(false),
        },
        LpStatus::Unbounded => {
            let (Some(x), Some(d), Some(c)) = (&outcome.solution, &outcome.ray, lp.optimizing())
            else {
                return Ok(false);
            };
            if x.len() != lp.num_vars || d.len() != lp.num_vars {
                return Err(Error::input("unbounded witness has the wrong length"));
            }
            let recession = lp.constraints.iter().all(|con| {
                let v = dot(&con.coeffs, d);
                match con.relation {
                    Relation::Le => !v.is_positive(),
                    Relation::Eq => v.is_zero(),
                    Relation::Ge => !v.is_negative(),
                }
            }) && d
                .iter()
                .zip(&lp.nonneg)
                .all(|(v, &nn)| !nn || !v.is_negative());
            let slope = dot(c, d);
            let improving = match lp.sense {
                Sense::Maximize => slope.is_positive(),
                _ => slope.is_negative(),
            };
            Ok(is_feasible_point(lp, x) && recession && improving)
        }
    }
}
