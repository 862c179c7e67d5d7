//! Named instances and seeded random families.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::{lp_solve, LinearProgram, Relation};
use crate::multifunction::{GraphMultifunction, Sample, SampledMultifunction};
use crate::polytope::{Simplex, VPolytope};
use crate::rational::{dot, int, rank, rat, solve_square, vec_of, zeros, Rational};

/// Olsen's square-domain multifunction: the graph is the tetrahedron with
/// vertices `(−1,0,0)`, `(1,0,0)`, `(0,−1,1)`, `(0,1,1)`, so
/// `F(x, y) = [|y|, 1 − |x|]` on `|x| + |y| <= 1`.
pub fn olsen() -> GraphMultifunction {
    let graph = VPolytope::new(
        3,
        vec![
            vec_of(&[-1, 0, 0]),
            vec_of(&[1, 0, 0]),
            vec_of(&[0, -1, 1]),
            vec_of(&[0, 1, 1]),
        ],
    )
    .expect("static vertex list");
    GraphMultifunction::new(2, 1, graph).expect("static dimensions")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolyhedralNorm {
    /// `max_i |y_i|`; its dual is the one-norm.
    Sup,
    /// `Σ_i |y_i|`; its dual is the sup-norm.
    One,
}

/// Norm-preserving extensions of functionals from a subspace `X ⊂ R^k`.
///
/// A functional `f ∈ X*` is encoded by its values on `subspace_basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HahnBanachSpec {
    pub k: usize,
    pub norm: PolyhedralNorm,
    pub subspace_basis: Vec<Vec<Rational>>,
    pub functional_samples: Vec<Vec<Rational>>,
}

impl HahnBanachSpec {
    /// `X = span{(1,1)} ⊂ (R², sup-norm)` sampled at `f ↦ −1, 0, 1`.
    pub fn diagonal_sup_norm() -> Self {
        Self {
            k: 2,
            norm: PolyhedralNorm::Sup,
            subspace_basis: vec![vec_of(&[1, 1])],
            functional_samples: vec![vec_of(&[-1]), vec_of(&[0]), vec_of(&[1])],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k > 3 {
            return Err(Error::Unsupported(format!(
                "extension sets are only enumerated for k <= 3, got k = {}",
                self.k
            )));
        }
        let d = self.subspace_basis.len();
        if d == 0 || d >= self.k {
            return Err(Error::input(format!(
                "subspace dimension must satisfy 1 <= d < k = {}, got {d}",
                self.k
            )));
        }
        if self.subspace_basis.iter().any(|b| b.len() != self.k) {
            return Err(Error::input(format!(
                "subspace_basis vectors must have length {}",
                self.k
            )));
        }
        if rank(&self.subspace_basis) != d {
            return Err(Error::input("subspace_basis is linearly dependent"));
        }
        if let Some(i) = self.functional_samples.iter().position(|f| f.len() != d) {
            return Err(Error::input(format!(
                "functional_samples[{i}] must have length {d}"
            )));
        }
        Ok(())
    }
}

/// `‖f‖ = max { f(x) : x ∈ X, ‖x‖ <= 1 }` with `x = Σ α_j b_j`.
fn functional_norm(spec: &HahnBanachSpec, f: &[Rational]) -> Result<Rational> {
    let d = spec.subspace_basis.len();
    let k = spec.k;
    // Coordinates of x = Bα as rows over α.
    let coord_rows: Vec<Vec<Rational>> = (0..k)
        .map(|i| spec.subspace_basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    let mut lp;
    match spec.norm {
        PolyhedralNorm::Sup => {
            lp = LinearProgram::new(d);
            for row in &coord_rows {
                lp.add_constraint(row.clone(), Relation::Le, Rational::one());
                lp.add_constraint(row.clone(), Relation::Ge, -Rational::one());
            }
            lp.maximize(f.to_vec());
        }
        PolyhedralNorm::One => {
            // Variables (α, s) with s_i >= |x_i| and Σ s_i <= 1.
            lp = LinearProgram::new(d + k);
            for (i, row) in coord_rows.iter().enumerate() {
                let mut upper = row.clone();
                upper.extend(zeros(k));
                upper[d + i] = -Rational::one();
                lp.add_constraint(upper, Relation::Le, Rational::zero());
                let mut lower = row.clone();
                lower.extend(zeros(k));
                lower[d + i] = Rational::one();
                lp.add_constraint(lower, Relation::Ge, Rational::zero());
            }
            let mut budget = zeros(d);
            budget.extend(vec![Rational::one(); k]);
            lp.add_constraint(budget, Relation::Le, Rational::one());
            let mut obj = f.to_vec();
            obj.extend(zeros(k));
            lp.maximize(obj);
        }
    }
    let out = lp_solve(&lp)?;
    Ok(out
        .optimum
        .expect("the unit ball of X is a nonempty polytope"))
}

/// Facets `h·g <= 1` of the unit ball of the dual norm on `R^k`.
fn dual_ball_facets(norm: PolyhedralNorm, k: usize) -> Vec<Vec<Rational>> {
    match norm {
        // Dual of sup is the one-norm: the cross-polytope Σ s_i g_i <= 1.
        PolyhedralNorm::Sup => (0..1usize << k)
            .map(|mask| {
                (0..k)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            -Rational::one()
                        } else {
                            Rational::one()
                        }
                    })
                    .collect()
            })
            .collect(),
        // Dual of the one-norm is sup: the cube ±g_i <= 1.
        PolyhedralNorm::One => (0..k)
            .flat_map(|i| {
                [Rational::one(), -Rational::one()]
                    .into_iter()
                    .map(move |s| {
                        let mut h = zeros(k);
                        h[i] = s;
                        h
                    })
            })
            .collect(),
    }
}

/// Vertices of `{ g : Bᵀg = f, ‖g‖_dual <= r }`, deduplicated and listed in
/// decreasing lexicographic order.
fn extension_vertices(spec: &HahnBanachSpec, f: &[Rational], r: &Rational) -> Vec<Vec<Rational>> {
    let k = spec.k;
    let d = spec.subspace_basis.len();
    let facets = dual_ball_facets(spec.norm, k);
    let feasible = |g: &[Rational]| facets.iter().all(|h| dot(h, g) <= *r);
    let mut found: Vec<Vec<Rational>> = Vec::new();
    // Every vertex has the d restriction equations plus k − d tight facets.
    let mut choose = vec![0usize; k - d];
    fn next_combination(c: &mut [usize], n: usize) -> bool {
        let len = c.len();
        for i in (0..len).rev() {
            if c[i] < n - len + i {
                c[i] += 1;
                for j in i + 1..len {
                    c[j] = c[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    for (i, c) in choose.iter_mut().enumerate() {
        *c = i;
    }
    loop {
        let mut matrix = spec.subspace_basis.clone();
        let mut rhs = f.to_vec();
        for &idx in &choose {
            matrix.push(facets[idx].clone());
            rhs.push(r.clone());
        }
        if let Some(g) = solve_square(&matrix, &rhs) {
            if feasible(&g) && !found.contains(&g) {
                found.push(g);
            }
        }
        if !next_combination(&mut choose, facets.len()) {
            break;
        }
    }
    found.sort_by(|a, b| b.cmp(a));
    found
}

/// Samples the norm-preserving extension multifunction
/// `F(f) = { g ∈ (R^k)* : g|X = f, ‖g‖ = ‖f‖ }` at the spec's functionals.
///
/// Any extension satisfies `‖g‖ >= ‖f‖`, so the value set equals the
/// polytope `{ g : g|X = f, ‖g‖ <= ‖f‖ }`, which is enumerated exactly.
pub fn hahn_banach(spec: &HahnBanachSpec) -> Result<SampledMultifunction> {
    spec.validate()?;
    let mut samples = Vec::with_capacity(spec.functional_samples.len());
    for f in &spec.functional_samples {
        let r = functional_norm(spec, f)?;
        let verts = extension_vertices(spec, f, &r);
        samples.push(Sample {
            point: f.clone(),
            value: VPolytope::new(spec.k, verts)?,
        });
    }
    SampledMultifunction::new(spec.subspace_basis.len(), spec.k, samples)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomGraphOptions {
    pub n: usize,
    pub m: usize,
    pub num_vertices: usize,
    pub seed: u64,
    /// When set, every graph vertex lies over a vertex of this simplex and
    /// each simplex vertex is used at least once.
    pub simplex_domain: Option<Simplex>,
}

impl RandomGraphOptions {
    pub fn new(n: usize, m: usize, num_vertices: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            num_vertices,
            seed,
            simplex_domain: None,
        }
    }

    pub fn over_simplex(mut self, simplex: Simplex) -> Self {
        self.simplex_domain = Some(simplex);
        self
    }
}

/// A rational in `[−1, 1]` with denominator at most 4.
pub fn random_unit_rational<R: Rng>(rng: &mut R) -> Rational {
    let den = rng.random_range(1..=4i64);
    rat(rng.random_range(-den..=den), den)
}

/// A random nondegenerate simplex with vertices in `[−1, 1]^n`.
pub fn random_simplex<R: Rng>(n: usize, rng: &mut R) -> Simplex {
    loop {
        let verts = (0..=n)
            .map(|_| (0..n).map(|_| random_unit_rational(rng)).collect())
            .collect();
        if let Ok(s) = Simplex::new(verts) {
            return s;
        }
    }
}

/// Seeded random graph with vertices in `[−1, 1]^{n+m}`.
pub fn random_convex_graph(opts: &RandomGraphOptions) -> Result<GraphMultifunction> {
    if opts.num_vertices < opts.n + 1 {
        return Err(Error::input(format!(
            "num_vertices must be at least n + 1 = {}",
            opts.n + 1
        )));
    }
    if let Some(s) = &opts.simplex_domain {
        if s.dim() != opts.n {
            return Err(Error::input("simplex_domain dimension differs from n"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut vertices = Vec::with_capacity(opts.num_vertices);
    for idx in 0..opts.num_vertices {
        let mut v: Vec<Rational> = match &opts.simplex_domain {
            Some(s) => {
                let corner = if idx <= opts.n {
                    idx
                } else {
                    rng.random_range(0..=opts.n)
                };
                s.vertices()[corner].clone()
            }
            None => (0..opts.n)
                .map(|_| random_unit_rational(&mut rng))
                .collect(),
        };
        v.extend((0..opts.m).map(|_| random_unit_rational(&mut rng)));
        vertices.push(v);
    }
    GraphMultifunction::new(opts.n, opts.m, VPolytope::new(opts.n + opts.m, vertices)?)
}

/// Random convex weights `Σ w_i = 1` with every weight at least
/// `floor`, drawn from integer draws in `1..=16`.
pub fn random_weights<R: Rng>(count: usize, floor: &Rational, rng: &mut R) -> Vec<Rational> {
    let draws: Vec<i64> = (0..count).map(|_| rng.random_range(1..=16)).collect();
    let total: i64 = draws.iter().sum();
    let spare = Rational::one() - floor * int(count as i64);
    debug_assert!(!spare.is_negative());
    draws
        .iter()
        .map(|&d| floor + &spare * rat(d, total))
        .collect()
}
