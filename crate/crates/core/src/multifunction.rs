//! Multifunctions in two representations and the audits of the convexity
//! inclusion and the weaker nonempty-intersection condition.
//!
//! A [`GraphMultifunction`] is convex by construction: its graph is the
//! convex hull of finitely many points of `R^{n+m}` and `F(x)` is the fiber
//! over `x`. A [`SampledMultifunction`] is arbitrary finite data whose
//! convexity is the question being asked.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_solve, LinearProgram, LpStatus, Relation};
use crate::polytope::{combine, contains_polytope, membership, minkowski_combine, VPolytope};
use crate::rational::{lerp, rank, sub, zeros, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphMultifunction {
    n: usize,
    m: usize,
    graph: VPolytope,
}

impl GraphMultifunction {
    pub fn new(n: usize, m: usize, graph: VPolytope) -> Result<Self> {
        if graph.dim() != n + m {
            return Err(Error::input(format!(
                "graph dimension {} does not equal n + m = {}",
                graph.dim(),
                n + m
            )));
        }
        if n == 0 || m == 0 {
            return Err(Error::input(
                "domain and codomain dimensions must be positive",
            ));
        }
        Ok(Self { n, m, graph })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn graph(&self) -> &VPolytope {
        &self.graph
    }

    /// Projections of the graph vertices onto the domain, duplicates kept.
    pub fn domain_vertices(&self) -> Vec<Vec<Rational>> {
        self.graph
            .vertices()
            .iter()
            .map(|v| v[..self.n].to_vec())
            .collect()
    }

    /// The domain `D` with exact duplicate vertices removed (first
    /// occurrence order).
    pub fn domain(&self) -> VPolytope {
        let mut seen: Vec<Vec<Rational>> = Vec::new();
        for v in self.domain_vertices() {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        VPolytope::new(self.n, seen).expect("graph is nonempty")
    }

    /// True when `D` affinely spans `R^n`.
    pub fn domain_is_full_dimensional(&self) -> bool {
        let verts = self.domain_vertices();
        let diffs: Vec<Vec<Rational>> = verts[1..].iter().map(|v| sub(v, &verts[0])).collect();
        rank(&diffs) == self.n
    }

    pub fn in_domain(&self, x: &[Rational]) -> Result<bool> {
        Ok(membership(x, &self.domain())?.member)
    }

    fn check_point(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::input(format!(
                "domain point has length {}, expected {}",
                x.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// LP over graph weights `λ` with `Σλ = 1` and the domain part of
    /// `Σλ·g` pinned to `x`.
    fn fiber_lp(&self, x: &[Rational]) -> LinearProgram {
        let verts = self.graph.vertices();
        let k = verts.len();
        let mut lp = LinearProgram::new(k);
        for j in 0..k {
            lp.set_nonneg(j);
        }
        lp.add_constraint(vec![Rational::one(); k], Relation::Eq, Rational::one());
        for (c, xc) in x.iter().enumerate() {
            lp.add_constraint(
                verts.iter().map(|v| v[c].clone()).collect(),
                Relation::Eq,
                xc.clone(),
            );
        }
        lp
    }

    fn codomain_row(&self, direction: &[Rational]) -> Vec<Rational> {
        self.graph
            .vertices()
            .iter()
            .map(|v| {
                v[self.n..]
                    .iter()
                    .zip(direction)
                    .fold(Rational::zero(), |acc, (a, d)| acc + a * d)
            })
            .collect()
    }

    fn fiber_point(&self, weights: &[Rational]) -> Vec<Rational> {
        combine(weights, self.graph.vertices())[self.n..].to_vec()
    }

    /// Optimises `⟨direction, y⟩` over `F(x)`; returns the value and an
    /// attaining point, or `None` when `x ∉ D`.
    fn fiber_optimum(
        &self,
        x: &[Rational],
        direction: &[Rational],
        maximize: bool,
    ) -> Result<Option<(Rational, Vec<Rational>)>> {
        let mut lp = self.fiber_lp(x);
        let obj = self.codomain_row(direction);
        if maximize {
            lp.maximize(obj);
        } else {
            lp.minimize(obj);
        }
        let out = lp_solve(&lp)?;
        match out.status {
            LpStatus::Feasible => {
                let w = out.solution.expect("feasible outcome has a solution");
                Ok(Some((out.optimum.expect("bounded"), self.fiber_point(&w))))
            }
            LpStatus::Infeasible => Ok(None),
            LpStatus::Unbounded => unreachable!("fiber LPs range over a simplex of weights"),
        }
    }

    /// `y ∈ F(x)`, i.e. `(x, y) ∈ conv(graph)`.
    pub fn fiber_contains(&self, x: &[Rational], y: &[Rational]) -> Result<bool> {
        self.check_point(x)?;
        if y.len() != self.m {
            return Err(Error::input(format!(
                "codomain point has length {}, expected {}",
                y.len(),
                self.m
            )));
        }
        let p: Vec<Rational> = x.iter().chain(y).cloned().collect();
        Ok(membership(&p, &self.graph)?.member)
    }

    /// `(min, max)` of `⟨direction, y⟩` over `F(x)`, or `None` if `x ∉ D`.
    pub fn fiber_extrema(
        &self,
        x: &[Rational],
        direction: &[Rational],
    ) -> Result<Option<(Rational, Rational)>> {
        self.check_point(x)?;
        if direction.len() != self.m {
            return Err(Error::input(format!(
                "direction has length {}, expected {}",
                direction.len(),
                self.m
            )));
        }
        let Some((lo, _)) = self.fiber_optimum(x, direction, false)? else {
            return Ok(None);
        };
        let (hi, _) = self
            .fiber_optimum(x, direction, true)?
            .expect("fiber is nonempty");
        Ok(Some((lo, hi)))
    }

    /// Lexicographically smallest point of `F(x)`, or `None` if `x ∉ D`.
    pub fn canonical_fiber_point(&self, x: &[Rational]) -> Result<Option<Vec<Rational>>> {
        self.check_point(x)?;
        let mut lp = self.fiber_lp(x);
        let mut point = Vec::with_capacity(self.m);
        for coord in 0..self.m {
            let mut e = zeros(self.m);
            e[coord] = Rational::one();
            let row = self.codomain_row(&e);
            let mut step = lp.clone();
            step.minimize(row.clone());
            let out = lp_solve(&step)?;
            if out.status == LpStatus::Infeasible {
                return Ok(None);
            }
            let value = out.optimum.expect("fiber LPs are bounded");
            lp.add_constraint(row, Relation::Eq, value.clone());
            point.push(value);
        }
        Ok(Some(point))
    }
}

/// One sample `(x, F(x))` of a sampled multifunction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sample {
    pub point: Vec<Rational>,
    pub value: VPolytope,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SampledMultifunction {
    n: usize,
    m: usize,
    samples: Vec<Sample>,
    /// Set when values are inner approximations of the true fibers.
    inner_approximation: bool,
}

impl SampledMultifunction {
    pub fn new(n: usize, m: usize, samples: Vec<Sample>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if s.point.len() != n {
                return Err(Error::input(format!(
                    "samples[{i}].point has length {}, expected {n}",
                    s.point.len()
                )));
            }
            if s.value.dim() != m {
                return Err(Error::input(format!(
                    "samples[{i}].value has dimension {}, expected {m}",
                    s.value.dim()
                )));
            }
            if let Some(j) = samples[..i].iter().position(|o| o.point == s.point) {
                return Err(Error::input(format!(
                    "samples[{i}].point repeats samples[{j}].point"
                )));
            }
        }
        Ok(Self {
            n,
            m,
            samples,
            inner_approximation: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn is_inner_approximation(&self) -> bool {
        self.inner_approximation
    }

    pub fn with_inner_approximation(mut self, flag: bool) -> Self {
        self.inner_approximation = flag;
        self
    }

    /// Ordered triples `(i, j, k, t)` with `point_k = t·point_i + (1−t)·point_j`
    /// and `0 < t < 1`, sorted by `(i, j, k)`.
    pub fn collinear_triples(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for (i, si) in self.samples.iter().enumerate() {
            for (j, sj) in self.samples.iter().enumerate() {
                if i == j {
                    continue;
                }
                let Some(c) = (0..self.n).find(|&c| si.point[c] != sj.point[c]) else {
                    continue;
                };
                let span = &si.point[c] - &sj.point[c];
                for (k, sk) in self.samples.iter().enumerate() {
                    if k == i || k == j {
                        continue;
                    }
                    let t = (&sk.point[c] - &sj.point[c]) / &span;
                    if t.is_positive()
                        && t < Rational::one()
                        && lerp(&t, &si.point, &sj.point) == sk.point
                    {
                        out.push((i, j, k, t));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub t: Rational,
    /// A point of `t·F(x_i) + (1−t)·F(x_j)` outside `F(x_k)`.
    pub witness: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub checked_triples: usize,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl AuditReport {
    fn from_violations(checked_triples: usize, violations: Vec<Violation>) -> Self {
        let passed = violations.is_empty();
        Self {
            checked_triples,
            violations,
            passed,
        }
    }
}

/// Tests `t·F(x_i) + (1−t)·F(x_j) ⊂ F(x_k)` for one triple; returns the
/// first cross-sum vertex outside `F(x_k)` on failure.
pub fn inclusion_witness(
    sampled: &SampledMultifunction,
    i: usize,
    j: usize,
    k: usize,
    t: &Rational,
) -> Result<Option<Vec<Rational>>> {
    let s = sampled.samples();
    let combo = minkowski_combine(t, &s[i].value, &s[j].value)?;
    Ok(contains_polytope(&combo, &s[k].value)?.counterexample)
}

/// Tests `(t·F(x_i) + (1−t)·F(x_j)) ∩ F(x_k) ≠ ∅` for one triple. On
/// failure every cross-sum vertex lies outside `F(x_k)`; the first one is
/// returned as the witness.
pub fn intersection_witness(
    sampled: &SampledMultifunction,
    i: usize,
    j: usize,
    k: usize,
    t: &Rational,
) -> Result<Option<Vec<Rational>>> {
    let s = sampled.samples();
    let combo = minkowski_combine(t, &s[i].value, &s[j].value)?;
    let a = combo.vertices();
    let b = s[k].value.vertices();
    let (na, nb) = (a.len(), b.len());
    let mut lp = LinearProgram::new(na + nb);
    for v in 0..na + nb {
        lp.set_nonneg(v);
    }
    let mut row = zeros(na + nb);
    row[..na].iter_mut().for_each(|v| *v = Rational::one());
    lp.add_constraint(row, Relation::Eq, Rational::one());
    let mut row = zeros(na + nb);
    row[na..].iter_mut().for_each(|v| *v = Rational::one());
    lp.add_constraint(row, Relation::Eq, Rational::one());
    for c in 0..sampled.m() {
        let row = a
            .iter()
            .map(|v| v[c].clone())
            .chain(b.iter().map(|v| -v[c].clone()))
            .collect();
        lp.add_constraint(row, Relation::Eq, Rational::zero());
    }
    if lp_solve(&lp)?.is_feasible() {
        Ok(None)
    } else {
        Ok(Some(a[0].clone()))
    }
}

type TripleCheck =
    fn(&SampledMultifunction, usize, usize, usize, &Rational) -> Result<Option<Vec<Rational>>>;

fn audit_with(sampled: &SampledMultifunction, check: TripleCheck) -> AuditReport {
    let triples = sampled.collinear_triples();
    let mut violations = Vec::new();
    for (i, j, k, t) in &triples {
        // Dimensions were validated on construction, so the checks cannot fail.
        let witness = check(sampled, *i, *j, *k, t).expect("sample dimensions are consistent");
        if let Some(witness) = witness {
            violations.push(Violation {
                i: *i,
                j: *j,
                k: *k,
                t: t.clone(),
                witness,
            });
        }
    }
    AuditReport::from_violations(triples.len(), violations)
}

/// Checks the convexity inclusion on every collinear sample triple.
pub fn audit_convexity(sampled: &SampledMultifunction) -> AuditReport {
    audit_with(sampled, inclusion_witness)
}

/// Checks the nonempty-intersection condition on every collinear sample
/// triple.
pub fn audit_intersection(sampled: &SampledMultifunction) -> AuditReport {
    audit_with(sampled, intersection_witness)
}

/// Samples a graph multifunction at `points`.
///
/// For `m = 1` each value is the exact fiber interval. For `m > 1` the value
/// is spanned by the canonical fiber point and the attaining points of the
/// `2m` axis extrema; the result is then marked as an inner approximation.
pub fn sample_graph(
    g: &GraphMultifunction,
    points: &[Vec<Rational>],
) -> Result<SampledMultifunction> {
    let mut samples = Vec::with_capacity(points.len());
    for (idx, x) in points.iter().enumerate() {
        g.check_point(x)?;
        let outside = || {
            let coords: Vec<String> = x.iter().map(ToString::to_string).collect();
            Error::Domain(format!(
                "points[{idx}] = ({}) lies outside the domain",
                coords.join(", ")
            ))
        };
        let value = if g.m == 1 {
            let (lo, hi) = g
                .fiber_extrema(x, &[Rational::one()])?
                .ok_or_else(outside)?;
            if lo == hi {
                VPolytope::point(vec![lo])
            } else {
                VPolytope::new(1, vec![vec![lo], vec![hi]])?
            }
        } else {
            let mut verts = vec![g.canonical_fiber_point(x)?.ok_or_else(outside)?];
            for coord in 0..g.m {
                let mut e = zeros(g.m);
                e[coord] = Rational::one();
                for maximize in [false, true] {
                    let (_, y) = g.fiber_optimum(x, &e, maximize)?.ok_or_else(outside)?;
                    if !verts.contains(&y) {
                        verts.push(y);
                    }
                }
            }
            VPolytope::new(g.m, verts)?
        };
        samples.push(Sample {
            point: x.clone(),
            value,
        });
    }
    let mut sampled = SampledMultifunction::new(g.n, g.m, samples)?;
    sampled.inner_approximation = g.m > 1;
    Ok(sampled)
}
