//! Polytopes given by vertex lists, affine maps, and simplices.
//!
//! Every geometric question is answered by an LP over convex-combination
//! weights, so nothing here ever needs facets.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_solve, LinearProgram, Relation};
use crate::rational::{add, dot, lerp, scale, solve_square, sub, zeros, Rational};

/// Convex hull of a nonempty vertex list. Redundant and repeated vertices
/// are allowed and kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<Rational>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::input("polytope needs at least one vertex"));
        }
        if let Some((i, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != dim) {
            return Err(Error::input(format!(
                "vertex {i} has length {}, expected {dim}",
                v.len()
            )));
        }
        Ok(Self { dim, vertices })
    }

    pub fn point(p: Vec<Rational>) -> Self {
        Self {
            dim: p.len(),
            vertices: vec![p],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vec<Rational>> {
        self.vertices
    }

    /// Smallest and largest value of coordinate `coord` over the vertices.
    /// For a 1-dimensional polytope this is the interval it spans.
    pub fn coordinate_range(&self, coord: usize) -> (Rational, Rational) {
        let mut lo = self.vertices[0][coord].clone();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            if v[coord] < lo {
                lo = v[coord].clone();
            }
            if v[coord] > hi {
                hi = v[coord].clone();
            }
        }
        (lo, hi)
    }
}

/// Result of a membership query; `weights` is the convex-combination
/// witness when the point is inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub weights: Option<Vec<Rational>>,
}

/// Decides `p ∈ conv(P.vertices)` exactly.
pub fn membership(p: &[Rational], poly: &VPolytope) -> Result<Membership> {
    if p.len() != poly.dim {
        return Err(Error::input(format!(
            "point has length {}, polytope dimension is {}",
            p.len(),
            poly.dim
        )));
    }
    let k = poly.vertices.len();
    let mut lp = LinearProgram::new(k);
    for j in 0..k {
        lp.set_nonneg(j);
    }
    lp.add_constraint(vec![Rational::one(); k], Relation::Eq, Rational::one());
    for (c, target) in p.iter().enumerate() {
        let row = poly.vertices.iter().map(|v| v[c].clone()).collect();
        lp.add_constraint(row, Relation::Eq, target.clone());
    }
    let out = lp_solve(&lp)?;
    Ok(Membership {
        member: out.is_feasible(),
        weights: out.solution,
    })
}

/// `t·P + (1−t)·Q` in the Minkowski sense, materialised as all cross sums
/// `t·p + (1−t)·q`, `p`-major.
pub fn minkowski_combine(t: &Rational, p: &VPolytope, q: &VPolytope) -> Result<VPolytope> {
    if t.is_negative() || *t > Rational::one() {
        return Err(Error::input(format!(
            "combination parameter {t} is outside [0, 1]"
        )));
    }
    if p.dim != q.dim {
        return Err(Error::input(format!(
            "dimension mismatch in Minkowski combination: {} vs {}",
            p.dim, q.dim
        )));
    }
    let vertices = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| lerp(t, a, b)))
        .collect();
    Ok(VPolytope {
        dim: p.dim,
        vertices,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Containment {
    pub contained: bool,
    /// First vertex of the inner polytope lying outside the outer one.
    pub counterexample: Option<Vec<Rational>>,
}

/// Decides `conv(P) ⊂ conv(Q)` by testing every vertex of `P`.
pub fn contains_polytope(inner: &VPolytope, outer: &VPolytope) -> Result<Containment> {
    if inner.dim != outer.dim {
        return Err(Error::input(format!(
            "dimension mismatch in inclusion test: {} vs {}",
            inner.dim, outer.dim
        )));
    }
    for v in &inner.vertices {
        if !membership(v, outer)?.member {
            return Ok(Containment {
                contained: false,
                counterexample: Some(v.clone()),
            });
        }
    }
    Ok(Containment {
        contained: true,
        counterexample: None,
    })
}

/// `x ↦ matrix·x + offset` from `R^n` to `R^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    n: usize,
    m: usize,
    matrix: Vec<Vec<Rational>>,
    offset: Vec<Rational>,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Rational>>, offset: Vec<Rational>) -> Result<Self> {
        let m = offset.len();
        if matrix.len() != m {
            return Err(Error::input(format!(
                "matrix has {} rows but offset has length {m}",
                matrix.len()
            )));
        }
        let n = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::input("matrix rows have unequal lengths"));
        }
        Ok(Self {
            n,
            m,
            matrix,
            offset,
        })
    }

    /// Map with an explicit domain dimension; needed when `m == 0` or to
    /// build constant maps.
    pub fn with_dims(n: usize, matrix: Vec<Vec<Rational>>, offset: Vec<Rational>) -> Result<Self> {
        if matrix.iter().any(|r| r.len() != n) || matrix.len() != offset.len() {
            return Err(Error::input(format!("matrix is not {}x{n}", offset.len())));
        }
        Ok(Self {
            n,
            m: offset.len(),
            matrix,
            offset,
        })
    }

    pub fn constant(n: usize, value: Vec<Rational>) -> Self {
        let matrix = vec![zeros(n); value.len()];
        Self {
            n,
            m: value.len(),
            matrix,
            offset: value,
        }
    }

    pub fn domain_dim(&self) -> usize {
        self.n
    }

    pub fn codomain_dim(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[Rational] {
        &self.offset
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.n {
            return Err(Error::input(format!(
                "point has length {}, map expects {}",
                x.len(),
                self.n
            )));
        }
        Ok(self
            .matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| dot(row, x) + b)
            .collect())
    }
}

/// An `n`-simplex in `R^n` with affinely independent vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simplex {
    vertices: Vec<Vec<Rational>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<Rational>>) -> Result<Self> {
        let n = vertices
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::geometry("empty simplex"))?;
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::geometry(format!(
                "a simplex in R^{n} needs {} vertices of length {n}",
                n + 1
            )));
        }
        let simplex = Self { vertices };
        if simplex.edge_solve(&zeros(n)).is_none() {
            return Err(Error::geometry("simplex vertices are affinely dependent"));
        }
        Ok(simplex)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn to_polytope(&self) -> VPolytope {
        VPolytope {
            dim: self.dim(),
            vertices: self.vertices.clone(),
        }
    }

    /// Solves `Σ μ_i (a_i − a_0) = rhs` for `μ`.
    fn edge_solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.dim();
        let edges: Vec<Vec<Rational>> = self.vertices[1..]
            .iter()
            .map(|v| sub(v, &self.vertices[0]))
            .collect();
        let columns: Vec<Vec<Rational>> = (0..n)
            .map(|r| edges.iter().map(|e| e[r].clone()).collect())
            .collect();
        solve_square(&columns, rhs)
    }
}

/// Barycentric coordinates of `x` with respect to `simplex`.
pub fn barycentric(simplex: &Simplex, x: &[Rational]) -> Result<Vec<Rational>> {
    if x.len() != simplex.dim() {
        return Err(Error::input(format!(
            "point has length {}, simplex dimension is {}",
            x.len(),
            simplex.dim()
        )));
    }
    let mu = simplex
        .edge_solve(&sub(x, &simplex.vertices[0]))
        .ok_or_else(|| Error::geometry("simplex vertices are affinely dependent"))?;
    let first = mu.iter().fold(Rational::one(), |acc, v| acc - v);
    Ok(std::iter::once(first).chain(mu).collect())
}

/// The unique affine map sending each simplex vertex `a_i` to `values[i]`.
pub fn affine_interpolate(simplex: &Simplex, values: &[Vec<Rational>]) -> Result<AffineMap> {
    let n = simplex.dim();
    if values.len() != n + 1 {
        return Err(Error::input(format!(
            "need {} interpolation values, got {}",
            n + 1,
            values.len()
        )));
    }
    let m = values[0].len();
    if values.iter().any(|v| v.len() != m) {
        return Err(Error::input("interpolation values have unequal lengths"));
    }
    // With E = [a_i − a_0] (columns), each output row r solves Eᵀ·row = Δ_r.
    let edges: Vec<Vec<Rational>> = simplex.vertices[1..]
        .iter()
        .map(|v| sub(v, &simplex.vertices[0]))
        .collect();
    let mut matrix = Vec::with_capacity(m);
    for r in 0..m {
        let delta: Vec<Rational> = values[1..].iter().map(|y| &y[r] - &values[0][r]).collect();
        let row = solve_square(&edges, &delta)
            .ok_or_else(|| Error::geometry("simplex vertices are affinely dependent"))?;
        matrix.push(row);
    }
    let at_a0: Vec<Rational> = matrix
        .iter()
        .map(|row| dot(row, &simplex.vertices[0]))
        .collect();
    let offset = sub(&values[0], &at_a0);
    AffineMap::with_dims(n, matrix, offset)
}

/// `Σ weights_i · points_i`.
pub fn combine(weights: &[Rational], points: &[Vec<Rational>]) -> Vec<Rational> {
    let dim = points.first().map_or(0, Vec::len);
    weights
        .iter()
        .zip(points)
        .filter(|(w, _)| !w.is_zero())
        .fold(zeros(dim), |acc, (w, p)| add(&acc, &scale(w, p)))
}
