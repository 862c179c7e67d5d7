//! Affine selections: global (one certified LP), local (simplex
//! interpolation around an interior point), and the affine sandwich.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::{lp_solve, verify_farkas, FarkasCertificate, LinearProgram, LpStatus, Relation};
use crate::multifunction::{
    audit_intersection, AuditReport, GraphMultifunction, SampledMultifunction,
};
use crate::polytope::{affine_interpolate, combine, AffineMap, Simplex, VPolytope};
use crate::rational::{int, rat, zeros, Rational};

/// Seed of the spot checks attached to every [`SelectionOutcome`].
pub const SPOT_CHECK_SEED: u64 = 0;
const GLOBAL_SPOT_CHECKS: usize = 20;
const LOCAL_SPOT_CHECKS: usize = 100;
const MAX_HALVINGS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionStatus {
    Found,
    NoneExists,
}

/// A sampled check of a candidate selection at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpotCheck {
    pub point: Vec<Rational>,
    pub value: Vec<Rational>,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionOutcome {
    pub status: SelectionStatus,
    pub map: Option<AffineMap>,
    pub certificate: Option<FarkasCertificate>,
    pub spot_checks: Vec<SpotCheck>,
}

impl SelectionOutcome {
    pub fn found(&self) -> bool {
        self.status == SelectionStatus::Found
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub trials: usize,
    pub checks: Vec<SpotCheck>,
    pub failures: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// A local selection around `center`: `map` selects from `F` on the whole
/// closed `simplex`, whose interior contains `center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSelection {
    pub center: Vec<Rational>,
    pub simplex: Simplex,
    pub map: AffineMap,
    /// Number of halvings of the initial step length 1.
    pub shrink_exponent: u32,
    pub verification: VerificationReport,
}

/// Variables of a selection LP: every entry `e` of `(A, b)` is split as
/// `pos_e − neg_e` and the objective is `Σ (pos_e + neg_e)`, the L1 norm of
/// the map's coefficients. Extra nonnegative variables follow.
struct MapVariables {
    n: usize,
    m: usize,
}

impl MapVariables {
    fn entries(&self) -> usize {
        self.m * (self.n + 1)
    }

    fn count(&self) -> usize {
        2 * self.entries()
    }

    /// Coefficients of `(A·x + b)_r` over the split variables.
    fn row_value(&self, r: usize, x: &[Rational], total: usize) -> Vec<Rational> {
        let mut row = zeros(total);
        let e = self.entries();
        for (c, xc) in x.iter().enumerate() {
            let idx = r * self.n + c;
            row[idx] = xc.clone();
            row[e + idx] = -xc.clone();
        }
        let idx = self.m * self.n + r;
        row[idx] = Rational::one();
        row[e + idx] = -Rational::one();
        row
    }

    fn objective(&self, total: usize) -> Vec<Rational> {
        let mut obj = zeros(total);
        obj[..self.count()]
            .iter_mut()
            .for_each(|v| *v = Rational::one());
        obj
    }

    fn extract(&self, solution: &[Rational]) -> AffineMap {
        let e = self.entries();
        let entry = |idx: usize| &solution[idx] - &solution[e + idx];
        let matrix = (0..self.m)
            .map(|r| (0..self.n).map(|c| entry(r * self.n + c)).collect())
            .collect();
        let offset = (0..self.m).map(|r| entry(self.m * self.n + r)).collect();
        AffineMap::with_dims(self.n, matrix, offset).expect("dimensions are consistent")
    }
}

fn distinct(points: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// The LP deciding global selection: unknowns `(A, b)` and, per distinct
/// domain vertex `v`, graph weights `λ^v` with `(v, A·v + b) = Σ λ^v·g`.
pub fn global_selection_lp(g: &GraphMultifunction) -> LinearProgram {
    let vars = MapVariables { n: g.n(), m: g.m() };
    let graph = g.graph().vertices();
    let k = graph.len();
    let domain = distinct(g.domain_vertices());
    let total = vars.count() + domain.len() * k;
    let mut lp = LinearProgram::new(total);
    for j in 0..total {
        lp.set_nonneg(j);
    }
    for (d, v) in domain.iter().enumerate() {
        let base = vars.count() + d * k;
        let mut row = zeros(total);
        row[base..base + k]
            .iter_mut()
            .for_each(|x| *x = Rational::one());
        lp.add_constraint(row, Relation::Eq, Rational::one());
        for (c, vc) in v.iter().enumerate() {
            let mut row = zeros(total);
            for (w, gv) in graph.iter().enumerate() {
                row[base + w] = gv[c].clone();
            }
            lp.add_constraint(row, Relation::Eq, vc.clone());
        }
        for r in 0..g.m() {
            let mut row = vars.row_value(r, v, total);
            row.iter_mut().for_each(|x| *x = -x.clone());
            for (w, gv) in graph.iter().enumerate() {
                row[base + w] = gv[g.n() + r].clone();
            }
            lp.add_constraint(row, Relation::Eq, Rational::zero());
        }
    }
    lp.minimize(vars.objective(total));
    lp
}

/// Decides whether `F` has an affine selection on all of `D`.
///
/// Feasibility is imposed at the domain vertices only; since the graph is
/// convex, a convex combination of the graph points `(v, A·v + b)` is again
/// a graph point, so the map selects on the whole domain. When no map
/// exists the Farkas certificate of the LP above is returned.
pub fn global_selection(g: &GraphMultifunction) -> Result<SelectionOutcome> {
    let lp = global_selection_lp(g);
    let out = lp_solve(&lp)?;
    match out.status {
        LpStatus::Feasible => {
            let vars = MapVariables { n: g.n(), m: g.m() };
            let map = vars.extract(out.solution.as_ref().expect("feasible"));
            let report = verify_selection(g, &map, GLOBAL_SPOT_CHECKS, SPOT_CHECK_SEED)?;
            Ok(SelectionOutcome {
                status: SelectionStatus::Found,
                map: Some(map),
                certificate: None,
                spot_checks: report.checks,
            })
        }
        LpStatus::Infeasible => Ok(SelectionOutcome {
            status: SelectionStatus::NoneExists,
            map: None,
            certificate: out.farkas,
            spot_checks: Vec::new(),
        }),
        LpStatus::Unbounded => unreachable!("the L1 objective is bounded below"),
    }
}

/// Re-checks a `NoneExists` outcome against the global selection LP.
pub fn verify_global_certificate(
    g: &GraphMultifunction,
    outcome: &SelectionOutcome,
) -> Result<bool> {
    match &outcome.certificate {
        Some(cert) => verify_farkas(&global_selection_lp(g), cert),
        None => Ok(false),
    }
}

/// Builds a local affine selection around an interior point `x0`.
///
/// Tries the simplex `x0 + α·e_i`, `x0 − α·(e_1 + … + e_n)` for
/// `α = 1, 1/2, 1/4, …` until every vertex lies in `D`, picks the canonical
/// fiber point over each vertex, and interpolates. Since the graph is
/// convex the interpolant selects on the whole simplex.
pub fn local_selection(g: &GraphMultifunction, x0: &[Rational]) -> Result<LocalSelection> {
    if x0.len() != g.n() {
        return Err(Error::input(format!(
            "point has length {}, expected {}",
            x0.len(),
            g.n()
        )));
    }
    let domain = g.domain();
    let in_domain =
        |p: &[Rational]| -> Result<bool> { Ok(crate::polytope::membership(p, &domain)?.member) };
    if !in_domain(x0)? {
        return Err(Error::Domain(format!(
            "{} lies outside the domain",
            fmt_point(x0)
        )));
    }
    let n = g.n();
    let mut alpha = Rational::one();
    let mut fitted = None;
    for halvings in 0..=MAX_HALVINGS {
        let mut verts: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut v = x0.to_vec();
                v[i] += &alpha;
                v
            })
            .collect();
        verts.push(x0.iter().map(|c| c - &alpha).collect());
        let mut all_in = true;
        for v in &verts {
            if !in_domain(v)? {
                all_in = false;
                break;
            }
        }
        if all_in {
            fitted = Some((verts, halvings));
            break;
        }
        alpha /= int(2);
    }
    let Some((verts, shrink_exponent)) = fitted else {
        return Err(Error::NotInterior(format!(
            "no simplex around {} fits in the domain after {MAX_HALVINGS} halvings",
            fmt_point(x0)
        )));
    };
    let mut values = Vec::with_capacity(n + 1);
    for v in &verts {
        values.push(
            g.canonical_fiber_point(v)?
                .expect("simplex vertices lie in the domain"),
        );
    }
    let simplex = Simplex::new(verts)?;
    let map = affine_interpolate(&simplex, &values)?;
    let verification = verify_selection_on(
        g,
        &map,
        simplex.vertices(),
        LOCAL_SPOT_CHECKS,
        SPOT_CHECK_SEED,
    )?;
    Ok(LocalSelection {
        center: x0.to_vec(),
        simplex,
        map,
        shrink_exponent,
        verification,
    })
}

fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// A scalar datum `(point, value)` for [`sandwich`].
pub type Datum = (Vec<Rational>, Rational);

pub fn sandwich_lp(lower: &[Datum], upper: &[Datum]) -> Result<LinearProgram> {
    let n = lower
        .first()
        .or(upper.first())
        .map(|d| d.0.len())
        .ok_or_else(|| Error::input("sandwich needs at least one datum"))?;
    if lower.is_empty() || upper.is_empty() {
        return Err(Error::input("lower and upper data must both be nonempty"));
    }
    for (name, data) in [("lower", lower), ("upper", upper)] {
        if let Some(i) = data.iter().position(|d| d.0.len() != n) {
            return Err(Error::input(format!(
                "{name}[{i}].point must have length {n}"
            )));
        }
    }
    let vars = MapVariables { n, m: 1 };
    let total = vars.count();
    let mut lp = LinearProgram::new(total);
    for j in 0..total {
        lp.set_nonneg(j);
    }
    for (p, v) in lower {
        lp.add_constraint(vars.row_value(0, p, total), Relation::Ge, v.clone());
    }
    for (p, w) in upper {
        lp.add_constraint(vars.row_value(0, p, total), Relation::Le, w.clone());
    }
    lp.minimize(vars.objective(total));
    Ok(lp)
}

/// Finds an affine `a` with `a(p) >= v` on the lower data and `a(q) <= w`
/// on the upper data. Such an `a` lies above the lower convex envelope and
/// below the upper concave envelope of the data.
pub fn sandwich(lower: &[Datum], upper: &[Datum]) -> Result<SelectionOutcome> {
    let lp = sandwich_lp(lower, upper)?;
    let n = lower[0].0.len();
    let out = lp_solve(&lp)?;
    match out.status {
        LpStatus::Feasible => {
            let map = MapVariables { n, m: 1 }.extract(out.solution.as_ref().expect("feasible"));
            let mut spot_checks = Vec::with_capacity(lower.len() + upper.len());
            for (p, v) in lower {
                let value = map.apply(p)?;
                let member = value[0] >= *v;
                spot_checks.push(SpotCheck {
                    point: p.clone(),
                    value,
                    member,
                });
            }
            for (q, w) in upper {
                let value = map.apply(q)?;
                let member = value[0] <= *w;
                spot_checks.push(SpotCheck {
                    point: q.clone(),
                    value,
                    member,
                });
            }
            Ok(SelectionOutcome {
                status: SelectionStatus::Found,
                map: Some(map),
                certificate: None,
                spot_checks,
            })
        }
        LpStatus::Infeasible => Ok(SelectionOutcome {
            status: SelectionStatus::NoneExists,
            map: None,
            certificate: out.farkas,
            spot_checks: Vec::new(),
        }),
        LpStatus::Unbounded => unreachable!("the L1 objective is bounded below"),
    }
}

/// Selection for interval-valued data on the line, reported next to the
/// intersection audit of the same data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSelection {
    pub outcome: SelectionOutcome,
    pub intersection_audit: AuditReport,
}

pub fn interval_data(sampled: &SampledMultifunction) -> Result<(Vec<Datum>, Vec<Datum>)> {
    if sampled.n() != 1 || sampled.m() != 1 {
        return Err(Error::input(format!(
            "interval selection needs n = m = 1, got n = {}, m = {}",
            sampled.n(),
            sampled.m()
        )));
    }
    if sampled.samples().is_empty() {
        return Err(Error::input("interval selection needs at least one sample"));
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for s in sampled.samples() {
        let (lo, hi) = s.value.coordinate_range(0);
        lower.push((s.point.clone(), lo));
        upper.push((s.point.clone(), hi));
    }
    Ok((lower, upper))
}

pub fn interval_selection_1d(sampled: &SampledMultifunction) -> Result<IntervalSelection> {
    let (lower, upper) = interval_data(sampled)?;
    Ok(IntervalSelection {
        outcome: sandwich(&lower, &upper)?,
        intersection_audit: audit_intersection(sampled),
    })
}

/// A random convex combination of `vertices` with integer draws in
/// `0..=16` (not all zero), so faces of the hull are hit as well.
pub fn random_point_in<R: Rng>(vertices: &[Vec<Rational>], rng: &mut R) -> Vec<Rational> {
    loop {
        let draws: Vec<i64> = vertices.iter().map(|_| rng.random_range(0..=16)).collect();
        let total: i64 = draws.iter().sum();
        if total == 0 {
            continue;
        }
        let weights: Vec<Rational> = draws.iter().map(|&d| rat(d, total)).collect();
        return combine(&weights, vertices);
    }
}

/// Checks `map(x) ∈ F(x)` at `trials` seeded random points of `D`.
pub fn verify_selection(
    g: &GraphMultifunction,
    map: &AffineMap,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let domain = g.domain();
    verify_selection_on(g, map, domain.vertices(), trials, seed)
}

/// As [`verify_selection`], sampling from the hull of `region` instead of
/// the whole domain.
pub fn verify_selection_on(
    g: &GraphMultifunction,
    map: &AffineMap,
    region: &[Vec<Rational>],
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if map.domain_dim() != g.n() || map.codomain_dim() != g.m() {
        return Err(Error::input(format!(
            "map is {}→{}, multifunction is {}→{}",
            map.domain_dim(),
            map.codomain_dim(),
            g.n(),
            g.m()
        )));
    }
    VPolytope::new(g.n(), region.to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let x = random_point_in(region, &mut rng);
        let y = map.apply(&x)?;
        let member = g.fiber_contains(&x, &y)?;
        checks.push(SpotCheck {
            point: x,
            value: y,
            member,
        });
    }
    let failures = checks.iter().filter(|c| !c.member).count();
    Ok(VerificationReport {
        trials,
        checks,
        failures,
    })
}

/// True when every barycentric coordinate of `center` is positive.
pub fn is_strictly_inside(simplex: &Simplex, center: &[Rational]) -> Result<bool> {
    Ok(crate::polytope::barycentric(simplex, center)?
        .iter()
        .all(Signed::is_positive))
}
