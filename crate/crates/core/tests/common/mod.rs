//! Test-only oracles, independent of the simplex implementation.
#![allow(dead_code)]

use affsel::lp::{LinearProgram, LpStatus, Relation, Sense};
use affsel::rational::{dot, int, Rational};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force answer for a small LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAnswer {
    pub status: LpStatus,
    pub optimum: Option<Rational>,
}

/// Gaussian elimination to reduced row echelon form; returns pivot columns.
fn pivot_columns(rows: &[Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let d = &f * &m[r][k];
                    m[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn gauss_solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for k in c..=n {
                    let d = &f * &m[c][k];
                    m[i][k] -= d;
                }
            }
        }
    }
    Some((0..n).map(|i| &m[i][n] / &m[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// All vertices of the pointed polyhedron `{x : A x <= b}` (A full column
/// rank) by solving every square subsystem.
fn vertices(a: &[Vec<Rational>], b: &[Rational], dim: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for s in subsets(a.len(), dim) {
        let sa: Vec<Vec<Rational>> = s.iter().map(|&i| a[i].clone()).collect();
        let sb: Vec<Rational> = s.iter().map(|&i| b[i].clone()).collect();
        if let Some(x) = gauss_solve(&sa, &sb) {
            if a.iter().zip(b).all(|(row, bi)| dot(row, &x) <= *bi) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Basic-solution enumeration oracle.
///
/// Rewrites everything as `A x <= b`. Free directions in `ker A` are
/// eliminated by fixing the non-pivot columns at zero (this keeps every
/// value of `A x`); an objective not in the row space is unbounded on any
/// feasible problem. Boundedness of the remaining pointed problem is decided
/// by comparing the best vertex with the best vertex after adding a box
/// strictly larger than every vertex.
pub fn brute_force(lp: &LinearProgram) -> OracleAnswer {
    let n = lp.num_vars;
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    for c in &lp.constraints {
        let neg: Vec<Rational> = c.coeffs.iter().map(|v| -v.clone()).collect();
        match c.relation {
            Relation::Le => {
                a.push(c.coeffs.clone());
                b.push(c.rhs.clone());
            }
            Relation::Ge => {
                a.push(neg);
                b.push(-c.rhs.clone());
            }
            Relation::Eq => {
                a.push(c.coeffs.clone());
                b.push(c.rhs.clone());
                a.push(neg);
                b.push(-c.rhs.clone());
            }
        }
    }
    for j in 0..n {
        if lp.nonneg[j] {
            let mut row = vec![Rational::zero(); n];
            row[j] = -Rational::one();
            a.push(row);
            b.push(Rational::zero());
        }
    }
    let pivots = pivot_columns(&a, n);
    let r = pivots.len();
    let reduced: Vec<Vec<Rational>> = a
        .iter()
        .map(|row| pivots.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let verts = vertices(&reduced, &b, r);
    if verts.is_empty() {
        return OracleAnswer {
            status: LpStatus::Infeasible,
            optimum: None,
        };
    }
    let objective = match lp.sense {
        Sense::Feasibility => None,
        _ => lp.objective.clone(),
    };
    let Some(c) = objective else {
        return OracleAnswer {
            status: LpStatus::Feasible,
            optimum: None,
        };
    };
    let mut with_c = a.clone();
    with_c.push(c.clone());
    if pivot_columns(&with_c, n).len() > r {
        return OracleAnswer {
            status: LpStatus::Unbounded,
            optimum: None,
        };
    }
    let sign = if lp.sense == Sense::Maximize {
        int(1)
    } else {
        int(-1)
    };
    let cr: Vec<Rational> = pivots.iter().map(|&j| &sign * &c[j]).collect();
    let best = verts.iter().map(|x| dot(&cr, x)).max().unwrap();
    let bound = verts
        .iter()
        .flat_map(|x| x.iter().map(|v| v.abs()))
        .max()
        .unwrap_or_else(Rational::zero)
        + Rational::one();
    let mut boxed_a = reduced.clone();
    let mut boxed_b = b.clone();
    for i in 0..r {
        let mut up = vec![Rational::zero(); r];
        up[i] = Rational::one();
        let down: Vec<Rational> = up.iter().map(|v| -v.clone()).collect();
        boxed_a.push(up);
        boxed_b.push(bound.clone());
        boxed_a.push(down);
        boxed_b.push(bound.clone());
    }
    let boxed_best = vertices(&boxed_a, &boxed_b, r)
        .iter()
        .map(|x| dot(&cr, x))
        .max()
        .unwrap();
    if boxed_best > best {
        OracleAnswer {
            status: LpStatus::Unbounded,
            optimum: None,
        }
    } else {
        OracleAnswer {
            status: LpStatus::Feasible,
            optimum: Some(&sign * best),
        }
    }
}

/// Random LP with at most 4 variables and 8 constraints, small integer data.
pub fn random_lp(seed: u64) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=4usize);
    let rows = rng.random_range(1..=8usize);
    let mut lp = LinearProgram::new(n);
    for j in 0..n {
        if rng.random_bool(0.3) {
            lp.set_nonneg(j);
        }
    }
    for _ in 0..rows {
        let coeffs = (0..n).map(|_| int(rng.random_range(-3..=3))).collect();
        let relation = match rng.random_range(0..10) {
            0 => Relation::Eq,
            1..=5 => Relation::Le,
            _ => Relation::Ge,
        };
        lp.add_constraint(coeffs, relation, int(rng.random_range(-5..=5)));
    }
    let objective = (0..n).map(|_| int(rng.random_range(-3..=3))).collect();
    match rng.random_range(0..5) {
        0 => {}
        1 | 2 => lp.maximize(objective),
        _ => lp.minimize(objective),
    }
    lp
}

/// Instance `seed` of the simplex-domain suite: `n ≤ 3`, `m ≤ 2`, at most
/// 12 graph vertices, every graph vertex over a simplex vertex.
pub fn simplex_domain_instance(seed: u64) -> affsel::GraphMultifunction {
    use affsel::instances::{random_convex_graph, random_simplex, RandomGraphOptions};
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
    let n = rng.random_range(1..=3usize);
    let m = rng.random_range(1..=2usize);
    let count = rng.random_range(n + 1..=12usize);
    let simplex = random_simplex(n, &mut rng);
    random_convex_graph(&RandomGraphOptions::new(n, m, count, seed).over_simplex(simplex))
        .expect("valid options")
}

/// Instance `seed` of the full-dimensional suite with an interior point:
/// a positive combination of all domain vertices. Seeds whose domain is
/// flat are skipped deterministically.
pub fn full_dimensional_instance(seed: u64) -> (affsel::GraphMultifunction, Vec<Rational>) {
    use affsel::instances::{random_convex_graph, random_weights, RandomGraphOptions};
    use affsel::polytope::combine;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0002);
    let n = rng.random_range(1..=3usize);
    let m = rng.random_range(1..=2usize);
    let count = rng.random_range(n + 2..=12usize);
    let mut sub = 0u64;
    loop {
        let g = random_convex_graph(&RandomGraphOptions::new(n, m, count, seed * 1000 + sub))
            .expect("valid options");
        if g.domain_is_full_dimensional() {
            let corners = g.domain().into_vertices();
            let floor = Rational::new(1.into(), (4 * corners.len()).into());
            let weights = random_weights(corners.len(), &floor, &mut rng);
            return (g, combine(&weights, &corners));
        }
        sub += 1;
    }
}

/// Sample points for a simplex-domain instance: the corners, pairwise
/// midpoints and pairwise one-third points.
pub fn simplex_sample_points(g: &affsel::GraphMultifunction) -> Vec<Vec<Rational>> {
    use affsel::rational::{lerp, rat};
    let corners = g.domain().into_vertices();
    let mut points = corners.clone();
    for a in 0..corners.len() {
        for b in a + 1..corners.len() {
            for t in [rat(1, 2), rat(1, 3)] {
                let p = lerp(&t, &corners[a], &corners[b]);
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }
    }
    points
}
