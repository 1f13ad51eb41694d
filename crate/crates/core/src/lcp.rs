//! Exact linear complementarity: find `x >= 0` with `y = A x + q >= 0` and
//! `xᵀy = 0`.
//!
//! The solver enumerates complementary supports. For a support `S`, the
//! solutions with `x = 0` off `S` and `y = 0` on `S` form the polyhedron
//!
//! ```text
//! P_S = { x : A_SS x_S = -q_S, x_S >= 0, A_{S'S} x_S + q_{S'} >= 0 }
//! ```
//!
//! `P_S` is pointed, so it is described exactly by its vertices and extreme
//! rays. A single vertex and no ray is an isolated solution; anything larger
//! is an infinite family. The union over all `2^n` supports is the full
//! solution set.

use std::collections::BTreeSet;

use num::traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    dot, index_subsets, is_zero_vector, lcp_test_vector, minor, ratio, solve_affine, Rational,
    RationalMatrix, Vector,
};
use crate::tpcheck::{
    all_contiguous_index_sets, all_square_index_sets, check_order, Certificate, Class, LcpFailure,
    Verdict,
};

pub const DEFAULT_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpInstance {
    a: RationalMatrix,
    q: Vector,
}

impl LcpInstance {
    pub fn new(a: RationalMatrix, q: Vector) -> Result<Self> {
        let n = a.ensure_square()?;
        if q.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: q.len(),
            });
        }
        Ok(LcpInstance { a, q })
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn q(&self) -> &[Rational] {
        &self.q
    }

    pub fn size(&self) -> usize {
        self.q.len()
    }

    /// `y = A x + q`.
    pub fn slack(&self, x: &[Rational]) -> Result<Vector> {
        Ok(self
            .a
            .mul_vec(x)?
            .into_iter()
            .zip(&self.q)
            .map(|(v, q)| v + q)
            .collect())
    }

    /// Exact check of `x >= 0`, `A x + q >= 0`, `xᵀ(A x + q) = 0`.
    pub fn is_solution(&self, x: &[Rational]) -> bool {
        let Ok(y) = self.slack(x) else {
            return false;
        };
        x.iter().all(|v| !v.is_negative())
            && y.iter().all(|v| !v.is_negative())
            && dot(x, &y).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpPoint {
    pub x: Vector,
    /// Indices where `x` is nonzero.
    pub support: Vec<usize>,
}

/// A solution polyhedron with more than one point: `conv(vertices) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteFamily {
    /// The complementary support `S` that produced the family.
    pub support: Vec<usize>,
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
}

impl InfiniteFamily {
    /// Two distinct members of the family.
    pub fn two_members(&self) -> (Vector, Vector) {
        let v0 = self.vertices[0].clone();
        let other = match (self.vertices.get(1), self.rays.first()) {
            (Some(v1), _) => v1.clone(),
            (None, Some(ray)) => v0.iter().zip(ray).map(|(a, b)| a + b).collect(),
            (None, None) => unreachable!("families have two vertices or a ray"),
        };
        (v0, other)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SolvabilityStatus {
    Empty,
    Unique,
    MultipleFinite,
    Infinite,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LcpSolutionSet {
    pub points: Vec<LcpPoint>,
    pub families: Vec<InfiniteFamily>,
}

impl LcpSolutionSet {
    pub fn has_infinite_family(&self) -> bool {
        !self.families.is_empty()
    }

    pub fn infinite_supports(&self) -> Vec<Vec<usize>> {
        self.families.iter().map(|f| f.support.clone()).collect()
    }

    pub fn status(&self) -> SolvabilityStatus {
        if self.has_infinite_family() {
            SolvabilityStatus::Infinite
        } else {
            match self.points.len() {
                0 => SolvabilityStatus::Empty,
                1 => SolvabilityStatus::Unique,
                _ => SolvabilityStatus::MultipleFinite,
            }
        }
    }

    /// Whether `x` is one of the isolated points or lies in one of the families.
    pub fn contains(&self, inst: &LcpInstance, x: &[Rational]) -> bool {
        if self.points.iter().any(|p| p.x == x) {
            return true;
        }
        self.families.iter().any(|f| {
            let s: BTreeSet<usize> = f.support.iter().copied().collect();
            (0..x.len()).all(|i| s.contains(&i) || x[i].is_zero())
                && inst.is_solution(x)
                && inst
                    .slack(x)
                    .map(|y| f.support.iter().all(|&i| y[i].is_zero()))
                    .unwrap_or(false)
        })
    }

    /// Some solution different from `x`, if the set has one.
    pub fn other_than(&self, x: &[Rational]) -> Option<Vector> {
        if let Some(p) = self.points.iter().find(|p| p.x != x) {
            return Some(p.x.clone());
        }
        self.families.first().map(|f| {
            let (a, b) = f.two_members();
            if a != x {
                a
            } else {
                b
            }
        })
    }
}

/// Vertices and extreme rays of `P_S`, embedded in `ℝⁿ`. Empty when `P_S = ∅`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportPolyhedron {
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
}

impl SupportPolyhedron {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1 && self.rays.is_empty()
    }

    /// Whether some member is strictly positive on every index in `idx`.
    /// Generators are all non-negative, so it suffices that each index is
    /// positive on at least one of them.
    pub fn has_member_positive_on(&self, idx: &[usize]) -> bool {
        !self.is_empty()
            && idx.iter().all(|&i| {
                self.vertices
                    .iter()
                    .chain(&self.rays)
                    .any(|g| g[i].is_positive())
            })
    }
}

fn push_unique(list: &mut Vec<Vector>, v: Vector) {
    if !list.contains(&v) {
        list.push(v);
    }
}

/// Scales a nonzero direction so its first nonzero entry has magnitude one.
fn normalize_direction(v: Vector) -> Vector {
    let pivot = v
        .iter()
        .find(|e| !e.is_zero())
        .expect("nonzero direction")
        .abs();
    v.into_iter().map(|e| e / &pivot).collect()
}

/// The solution polyhedron for complementary support `support`.
pub fn support_polyhedron(inst: &LcpInstance, support: &[usize]) -> SupportPolyhedron {
    let n = inst.size();
    let a = inst.matrix();
    let q = inst.q();
    let in_s: Vec<bool> = (0..n).map(|i| support.contains(&i)).collect();
    let off: Vec<usize> = (0..n).filter(|&i| !in_s[i]).collect();

    let embed = |xs: &[Rational]| -> Vector {
        let mut x = vec![Rational::zero(); n];
        for (k, &i) in support.iter().enumerate() {
            x[i] = xs[k].clone();
        }
        x
    };

    let rows: Vec<Vec<Rational>> = support
        .iter()
        .map(|&i| support.iter().map(|&j| a.get(i, j).clone()).collect())
        .collect();
    let rhs: Vector = support.iter().map(|&i| -q[i].clone()).collect();
    let Some(affine) = solve_affine(&rows, support.len(), &rhs) else {
        return SupportPolyhedron::default();
    };
    let x0 = affine.particular;
    let basis = affine.nullspace;
    let d = basis.len();

    // Inequalities g·t <= h over the nullspace coordinates t.
    let mut g: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut h: Vector = Vec::with_capacity(n);
    for k in 0..support.len() {
        // x_S[k] = x0[k] + sum_t basis[t][k] t >= 0
        g.push(basis.iter().map(|b| -b[k].clone()).collect());
        h.push(x0[k].clone());
    }
    for &i in &off {
        // y_i = A_iS (x0 + N t) + q_i >= 0
        let a_is: Vector = support.iter().map(|&j| a.get(i, j).clone()).collect();
        g.push(basis.iter().map(|b| -dot(&a_is, b)).collect());
        h.push(dot(&a_is, &x0) + &q[i]);
    }

    let feasible = |t: &[Rational]| g.iter().zip(&h).all(|(row, hi)| &dot(row, t) <= hi);
    let to_x = |t: &[Rational]| -> Vector {
        let xs: Vector = (0..support.len())
            .map(|k| {
                basis
                    .iter()
                    .zip(t)
                    .fold(x0[k].clone(), |acc, (b, tv)| acc + &b[k] * tv)
            })
            .collect();
        embed(&xs)
    };

    if d == 0 {
        let zero: Vector = Vec::new();
        return if feasible(&zero) {
            SupportPolyhedron {
                vertices: vec![embed(&x0)],
                rays: Vec::new(),
            }
        } else {
            SupportPolyhedron::default()
        };
    }

    let mut vertices = Vec::new();
    for active in index_subsets(g.len(), d) {
        let sys: Vec<Vec<Rational>> = active.iter().map(|&r| g[r].clone()).collect();
        let b: Vector = active.iter().map(|&r| h[r].clone()).collect();
        let Some(sol) = solve_affine(&sys, d, &b) else {
            continue;
        };
        if !sol.nullspace.is_empty() || !feasible(&sol.particular) {
            continue;
        }
        push_unique(&mut vertices, to_x(&sol.particular));
    }
    if vertices.is_empty() {
        return SupportPolyhedron::default();
    }

    let mut rays = Vec::new();
    for active in index_subsets(g.len(), d - 1) {
        let sys: Vec<Vec<Rational>> = active.iter().map(|&r| g[r].clone()).collect();
        let zeros = vec![Rational::zero(); active.len()];
        let sol = solve_affine(&sys, d, &zeros).expect("homogeneous systems are consistent");
        if sol.nullspace.len() != 1 {
            continue;
        }
        let dir = &sol.nullspace[0];
        for sign in [Rational::one(), -Rational::one()] {
            let v: Vector = dir.iter().map(|e| e * &sign).collect();
            if g.iter().all(|row| !dot(row, &v).is_positive()) {
                let xdir: Vector = (0..support.len())
                    .map(|k| {
                        basis
                            .iter()
                            .zip(&v)
                            .fold(Rational::zero(), |acc, (b, tv)| acc + &b[k] * tv)
                    })
                    .collect();
                let xdir = embed(&xdir);
                if !is_zero_vector(&xdir) {
                    push_unique(&mut rays, normalize_direction(xdir));
                }
            }
        }
    }
    SupportPolyhedron { vertices, rays }
}

fn support_from_mask(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn nonzero_support(x: &[Rational]) -> Vec<usize> {
    (0..x.len()).filter(|&i| !x[i].is_zero()).collect()
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= 64 {
        return Err(Error::CapExceeded { size: n, cap });
    }
    Ok(())
}

/// Full solution set by complementary-support enumeration.
pub fn enumerate_solutions(inst: &LcpInstance, cap: usize) -> Result<LcpSolutionSet> {
    let n = inst.size();
    check_cap(n, cap)?;
    let mut out = LcpSolutionSet::default();
    for mask in 0..1u64 << n {
        let support = support_from_mask(n, mask);
        let poly = support_polyhedron(inst, &support);
        if poly.is_empty() {
            continue;
        }
        if poly.is_point() {
            let x = poly.vertices.into_iter().next().expect("one vertex");
            if !out.points.iter().any(|p| p.x == x) {
                out.points.push(LcpPoint {
                    support: nonzero_support(&x),
                    x,
                });
            }
        } else {
            out.families.push(InfiniteFamily {
                support,
                vertices: poly.vertices,
                rays: poly.rays,
            });
        }
    }
    Ok(out)
}

pub fn solvability_status(inst: &LcpInstance, cap: usize) -> Result<SolvabilityStatus> {
    Ok(enumerate_solutions(inst, cap)?.status())
}

/// All principal minors positive.
pub fn is_p_matrix(a: &RationalMatrix) -> Result<Verdict> {
    let n = a.ensure_square()?;
    for r in 1..=n {
        for idx in index_subsets(n, r) {
            let value = minor(a, &idx, &idx)?;
            if !value.is_positive() {
                return Ok(Verdict::fail(
                    n,
                    Certificate::ViolatingMinor {
                        rows: idx.clone(),
                        cols: idx,
                        value,
                        class: Class::Tp,
                    },
                ));
            }
        }
    }
    Ok(Verdict::pass(n))
}

/// A right-hand side with two distinct solutions, for a matrix that is not a
/// P-matrix. Built on the first principal submatrix `A_JJ` with minor `<= 0`:
/// all its proper principal minors are positive, so either `A_JJ s = 0` for
/// some `s != 0`, or `s = -A_JJ^{-1} e^1` has `s_1 > 0` and `A_JJ s = -e^1`.
/// Either way `s` has its sign reversed, and `s⁺`, `s⁻` both solve
/// `LCP(A, q)` with `q_J = (A_JJ s)⁺ - A_JJ s⁺` and `q` large off `J`.
/// Returns `None` for P-matrices.
pub fn nonuniqueness_witness(a: &RationalMatrix) -> Result<Option<(Vector, Vector, Vector)>> {
    let n = a.ensure_square()?;
    let Some(Certificate::ViolatingMinor { rows: j, .. }) = is_p_matrix(a)?.certificate else {
        return Ok(None);
    };
    let ajj = a.submatrix(&j, &j)?;
    let rows = ajj.to_rows();
    let r = j.len();
    let s = if ajj.determinant()?.is_zero() {
        let sol = solve_affine(&rows, r, &vec![Rational::zero(); r]).expect("homogeneous");
        sol.nullspace
            .into_iter()
            .next()
            .expect("singular block has a null vector")
    } else {
        let mut rhs = vec![Rational::zero(); r];
        rhs[0] = -Rational::one();
        solve_affine(&rows, r, &rhs)
            .expect("nonsingular")
            .particular
    };
    let v = ajj.mul_vec(&s)?;
    let (s_plus, s_minus) = crate::signs::split_positive_negative(&s);
    let (v_plus, _) = crate::signs::split_positive_negative(&v);
    let a_splus = ajj.mul_vec(&s_plus)?;
    let embed = |part: &[Rational]| {
        let mut x = vec![Rational::zero(); n];
        for (k, &i) in j.iter().enumerate() {
            x[i] = part[k].clone();
        }
        x
    };
    let z1 = embed(&s_plus);
    let z2 = embed(&s_minus);
    let (az1, az2) = (a.mul_vec(&z1)?, a.mul_vec(&z2)?);
    let mut q = vec![Rational::zero(); n];
    for (k, &i) in j.iter().enumerate() {
        q[i] = &v_plus[k] - &a_splus[k];
    }
    for i in (0..n).filter(|i| !j.contains(i)) {
        let need = [-az1[i].clone(), -az2[i].clone(), Rational::zero()]
            .into_iter()
            .max()
            .expect("non-empty");
        q[i] = need + Rational::one();
    }
    let inst = LcpInstance::new(a.clone(), q.clone())?;
    if z1 == z2 || !inst.is_solution(&z1) || !inst.is_solution(&z2) {
        return Err(Error::VerificationFailed(
            "sign-reversal construction did not give two solutions".into(),
        ));
    }
    Ok(Some((q, z1, z2)))
}

fn lcp_failure(
    rows: Vec<usize>,
    cols: Vec<usize>,
    q: Vector,
    reason: LcpFailure,
    solutions: Vec<Vector>,
) -> Certificate {
    Certificate::LcpWitness {
        rows,
        cols,
        q,
        reason,
        solutions,
    }
}

/// `TP_k` iff on every contiguous window `A_r` the test vector
/// `x = (A^{11}, 0, A^{13}, ...)` is the only solution of `LCP(A_r, -A_r x)`.
pub fn is_tpk_lcp_single(a: &RationalMatrix, k: usize, cap: usize) -> Result<Verdict> {
    check_order(a, k)?;
    check_cap(k, cap)?;
    for (rows, cols) in all_contiguous_index_sets(a, k)? {
        let ar = a.submatrix(&rows, &cols)?;
        let (x, q) = lcp_test_vector(&ar)?;
        let inst = LcpInstance::new(ar, q.clone())?;
        if !inst.is_solution(&x) {
            return Ok(Verdict::fail(
                k,
                lcp_failure(rows, cols, q, LcpFailure::TestVectorNotSolution, vec![x]),
            ));
        }
        let set = enumerate_solutions(&inst, cap)?;
        if let Some(other) = set.other_than(&x) {
            return Ok(Verdict::fail(
                k,
                lcp_failure(rows, cols, q, LcpFailure::MultipleSolutions, vec![x, other]),
            ));
        }
    }
    Ok(Verdict::pass(k))
}

fn parity_indices(r: usize, parity: usize) -> Vec<usize> {
    (0..r).filter(|i| i % 2 == parity).collect()
}

/// `false` iff the solution set holds both a vector with pattern
/// `(+, 0, +, 0, ...)` and one with pattern `(0, +, 0, +, ...)`.
pub fn sign_pattern_pair_absent(ar: &RationalMatrix, q: &[Rational]) -> Result<bool> {
    let r = ar.ensure_square()?;
    if r < 2 {
        return Err(Error::Precondition("size must be at least 2".into()));
    }
    if q.iter().any(|v| !v.is_negative()) {
        return Err(Error::QNotNegative);
    }
    let inst = LcpInstance::new(ar.clone(), q.to_vec())?;
    // A solution with exactly these positive coordinates lives in P_S for S = that set.
    let odd = parity_indices(r, 0);
    let even = parity_indices(r, 1);
    let has_odd = support_polyhedron(&inst, &odd).has_member_positive_on(&odd);
    let has_even = support_polyhedron(&inst, &even).has_member_positive_on(&even);
    Ok(!(has_odd && has_even))
}

/// `q` with entries `-(u/v)`, `u, v` uniform in `1..=10`.
pub fn sample_negative_q(rng: &mut impl Rng, r: usize) -> Vector {
    (0..r)
        .map(|_| -ratio(rng.gen_range(1..=10), rng.gen_range(1..=10)))
        .collect()
}

/// Falsifier: draws `samples` strictly negative `q` per contiguous window and
/// reports the first window with no solution or several. A passing verdict
/// only means no counterexample was found.
pub fn is_tpk_lcp_sampled(
    a: &RationalMatrix,
    k: usize,
    samples: usize,
    seed: u64,
    cap: usize,
) -> Result<Verdict> {
    check_order(a, k)?;
    check_cap(k, cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (rows, cols) in all_contiguous_index_sets(a, k)? {
        let ar = a.submatrix(&rows, &cols)?;
        for _ in 0..samples {
            let q = sample_negative_q(&mut rng, rows.len());
            let inst = LcpInstance::new(ar.clone(), q.clone())?;
            let set = enumerate_solutions(&inst, cap)?;
            match set.status() {
                SolvabilityStatus::Unique => {}
                SolvabilityStatus::Empty => {
                    return Ok(Verdict::fail(
                        k,
                        lcp_failure(rows, cols, q, LcpFailure::NoSolution, Vec::new()),
                    ));
                }
                SolvabilityStatus::MultipleFinite | SolvabilityStatus::Infinite => {
                    let (z1, z2) = two_solutions(&set);
                    return Ok(Verdict::fail(
                        k,
                        lcp_failure(rows, cols, q, LcpFailure::MultipleSolutions, vec![z1, z2]),
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass(k))
}

fn two_solutions(set: &LcpSolutionSet) -> (Vector, Vector) {
    if set.points.len() >= 2 {
        (set.points[0].x.clone(), set.points[1].x.clone())
    } else {
        set.families[0].two_members()
    }
}

/// Two solutions of `set` with different images under `a`, if any exist.
pub fn image_mismatch(
    a: &RationalMatrix,
    set: &LcpSolutionSet,
) -> Result<Option<(Vector, Vector)>> {
    let mut seen: Option<(Vector, Vector)> = None;
    let mut members: Vec<Vector> = set.points.iter().map(|p| p.x.clone()).collect();
    for f in &set.families {
        for ray in &f.rays {
            if !is_zero_vector(&a.mul_vec(ray)?) {
                let v = &f.vertices[0];
                let moved = v.iter().zip(ray).map(|(x, d)| x + d).collect();
                return Ok(Some((v.clone(), moved)));
            }
        }
        members.extend(f.vertices.iter().cloned());
    }
    for z in members {
        let image = a.mul_vec(&z)?;
        match &seen {
            None => seen = Some((z, image)),
            Some((z0, image0)) => {
                if &image != image0 {
                    return Ok(Some((z0.clone(), z)));
                }
            }
        }
    }
    Ok(None)
}

/// Sufficient test for `TN_k`: on every square submatrix of size `<= k`, all
/// solutions of `LCP(A_r, q^{A_r})` share one image under `A_r`. A `true`
/// verdict proves `TN_k`; `false` does not disprove it.
pub fn tn_sufficient_single(a: &RationalMatrix, k: usize, cap: usize) -> Result<Verdict> {
    check_order(a, k)?;
    check_cap(k, cap)?;
    for (rows, cols) in all_square_index_sets(a.rows(), a.cols(), k) {
        let ar = a.submatrix(&rows, &cols)?;
        let (_, q) = lcp_test_vector(&ar)?;
        let inst = LcpInstance::new(ar, q.clone())?;
        let set = enumerate_solutions(&inst, cap)?;
        if let Some((z1, z2)) = image_mismatch(inst.matrix(), &set)? {
            return Ok(Verdict::fail(
                k,
                lcp_failure(rows, cols, q, LcpFailure::ImageMismatch, vec![z1, z2]),
            ));
        }
    }
    Ok(Verdict::pass(k))
}

/// Every solution has `x_i != y_i` for all `i`. Family members are covered
/// by their vertices: `x_i` and `y_i` only grow along rays.
pub fn is_nondegenerate_vector(inst: &LcpInstance, cap: usize) -> Result<bool> {
    let set = enumerate_solutions(inst, cap)?;
    let nondegenerate = |x: &Vector| -> Result<bool> {
        let y = inst.slack(x)?;
        Ok(x.iter().zip(&y).all(|(a, b)| a != b))
    };
    for p in &set.points {
        if !nondegenerate(&p.x)? {
            return Ok(false);
        }
    }
    for f in &set.families {
        for v in &f.vertices {
            if !nondegenerate(v)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whenever a set of columns `J` is a basis of the column space, `A_{JJ}` is
/// invertible.
pub fn column_basis_hypothesis(a: &RationalMatrix, cap: usize) -> Result<bool> {
    let n = a.ensure_square()?;
    check_cap(n, cap)?;
    let rank = a.rank();
    if rank == 0 {
        return Ok(true);
    }
    let all_rows: Vec<usize> = (0..n).collect();
    for cols in index_subsets(n, rank) {
        if a.submatrix(&all_rows, &cols)?.rank() == rank && minor(a, &cols, &cols)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of deleting every index with `q_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// `None` when every index was removed.
    pub reduced: Option<LcpInstance>,
    /// Original indices of the kept coordinates, increasing.
    pub kept: Vec<usize>,
    pub original_size: usize,
}

impl Reduction {
    /// Zero-pads a solution of the reduced problem back to the original size.
    /// The caller still has to check the lifted vector against the original
    /// instance.
    pub fn lift(&self, reduced_x: &[Rational]) -> Result<Vector> {
        if reduced_x.len() != self.kept.len() {
            return Err(Error::DimensionMismatch {
                expected: self.kept.len(),
                found: reduced_x.len(),
            });
        }
        let mut x = vec![Rational::zero(); self.original_size];
        for (k, &i) in self.kept.iter().enumerate() {
            x[i] = reduced_x[k].clone();
        }
        Ok(x)
    }
}

/// One pass of deleting the rows and columns where `q_i >= 0`.
pub fn reduce_nonnegative_q(inst: &LcpInstance) -> Reduction {
    let n = inst.size();
    let kept: Vec<usize> = (0..n).filter(|&i| inst.q()[i].is_negative()).collect();
    let reduced = if kept.is_empty() {
        None
    } else {
        let a = inst
            .matrix()
            .submatrix(&kept, &kept)
            .expect("kept indices are sorted and in range");
        let q = kept.iter().map(|&i| inst.q()[i].clone()).collect();
        Some(LcpInstance::new(a, q).expect("principal submatrix is square"))
    };
    Reduction {
        reduced,
        kept,
        original_size: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{int, ints};
    use proptest::prelude::*;

    fn inst(a: RationalMatrix, q: &[i64]) -> LcpInstance {
        LcpInstance::new(a, ints(q)).unwrap()
    }

    /// Oracle: brute force over supports with Cramer's rule on nonsingular
    /// blocks only, enough for instances whose blocks are all nonsingular.
    fn nonsingular_oracle(inst: &LcpInstance) -> Vec<Vector> {
        let n = inst.size();
        let mut out: Vec<Vector> = Vec::new();
        for mask in 0..1u64 << n {
            let s = support_from_mask(n, mask);
            let block = if s.is_empty() {
                None
            } else {
                Some(inst.matrix().submatrix(&s, &s).unwrap())
            };
            let mut x = vec![Rational::zero(); n];
            if let Some(b) = block {
                let det = b.determinant().unwrap();
                assert!(!det.is_zero());
                for (k, &i) in s.iter().enumerate() {
                    let mut replaced = b.clone();
                    for (r, &row) in s.iter().enumerate() {
                        replaced.set(r, k, -inst.q()[row].clone());
                    }
                    x[i] = replaced.determinant().unwrap() / &det;
                }
            }
            if inst.is_solution(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn empty_example() {
        let i = inst(RationalMatrix::from_ints(&[[0, 1], [0, 0]]), &[0, -1]);
        assert_eq!(
            solvability_status(&i, DEFAULT_CAP).unwrap(),
            SolvabilityStatus::Empty
        );
    }

    #[test]
    fn tn_example_has_two_solutions() {
        let a = RationalMatrix::from_ints(&[[2, 1, 1], [2, 1, 1], [1, 1, 1]]);
        let i = inst(a, &[-3, -3, -2]);
        let set = enumerate_solutions(&i, DEFAULT_CAP).unwrap();
        assert!(set.contains(&i, &ints(&[1, 0, 1])));
        assert!(set.contains(&i, &ints(&[0, 3, 0])));
        for p in &set.points {
            assert!(i.is_solution(&p.x));
        }
    }

    #[test]
    fn unique_two_by_two() {
        let i = inst(RationalMatrix::from_ints(&[[2, 1], [1, 1]]), &[-1, -1]);
        let set = enumerate_solutions(&i, DEFAULT_CAP).unwrap();
        assert_eq!(set.status(), SolvabilityStatus::Unique);
        assert_eq!(set.points[0].x, ints(&[0, 1]));
        assert_eq!(set.points[0].support, vec![1]);
    }

    #[test]
    fn scalar_statuses() {
        let s = |a: i64, q: i64| {
            solvability_status(&inst(RationalMatrix::from_ints(&[[a]]), &[q]), DEFAULT_CAP).unwrap()
        };
        assert_eq!(s(1, -1), SolvabilityStatus::Unique);
        assert_eq!(s(0, 0), SolvabilityStatus::Infinite);
        assert_eq!(s(-1, 1), SolvabilityStatus::MultipleFinite);
    }

    #[test]
    fn singular_support_ray() {
        let a = RationalMatrix::from_ints(&[[0, 0, 0], [2, 2, 1], [1, 1, 1]]);
        let i = inst(a, &[0, -2, -1]);
        let set = enumerate_solutions(&i, DEFAULT_CAP).unwrap();
        assert_eq!(set.status(), SolvabilityStatus::Infinite);
        assert!(set.contains(&i, &ints(&[1, 0, 0])));
        assert!(set.contains(&i, &ints(&[2, 0, 0])));
        let fam = set.families.iter().find(|f| f.support == vec![0]).unwrap();
        assert_eq!(fam.vertices, vec![ints(&[1, 0, 0])]);
        assert_eq!(fam.rays, vec![ints(&[1, 0, 0])]);
    }

    #[test]
    fn bounded_segment_family() {
        // x1 + x2 = 1 on support {1,2}: a segment between (1,0) and (0,1).
        let i = inst(RationalMatrix::from_ints(&[[1, 1], [1, 1]]), &[-1, -1]);
        let set = enumerate_solutions(&i, DEFAULT_CAP).unwrap();
        let fam = set
            .families
            .iter()
            .find(|f| f.support == vec![0, 1])
            .unwrap();
        assert!(fam.rays.is_empty());
        assert_eq!(fam.vertices.len(), 2);
        assert!(set.contains(
            &i,
            &[crate::matcore::ratio(1, 2), crate::matcore::ratio(1, 2)]
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let i = LcpInstance::new(RationalMatrix::identity(3), ints(&[-1, -1, -1])).unwrap();
        assert_eq!(
            enumerate_solutions(&i, 2),
            Err(Error::CapExceeded { size: 3, cap: 2 })
        );
    }

    #[test]
    fn p_matrix_examples() {
        assert!(
            is_p_matrix(&RationalMatrix::from_ints(&[[2, 1], [1, 1]]))
                .unwrap()
                .holds
        );
        assert!(
            !is_p_matrix(&RationalMatrix::from_ints(&[[0, 1], [0, 0]]))
                .unwrap()
                .holds
        );
        assert!(is_p_matrix(&RationalMatrix::identity(3)).unwrap().holds);
    }

    #[test]
    fn nonuniqueness_witness_examples() {
        assert_eq!(
            nonuniqueness_witness(&RationalMatrix::from_ints(&[[2, 1], [1, 1]])).unwrap(),
            None
        );
        for a in [
            RationalMatrix::from_ints(&[[1, 2], [2, 1]]),
            RationalMatrix::from_ints(&[[0, 1], [0, 0]]),
            RationalMatrix::from_ints(&[[1, 0, 0], [0, -1, 0], [0, 0, 1]]),
            RationalMatrix::from_ints(&[[1, 3, 0], [1, 1, 0], [5, 5, 1]]),
        ] {
            let (q, z1, z2) = nonuniqueness_witness(&a).unwrap().unwrap();
            let i = LcpInstance::new(a, q).unwrap();
            assert!(z1 != z2 && i.is_solution(&z1) && i.is_solution(&z2));
        }
    }

    #[test]
    fn lcp_single_examples() {
        assert!(
            is_tpk_lcp_single(
                &RationalMatrix::from_ints(&[[2, 1], [1, 1]]),
                2,
                DEFAULT_CAP
            )
            .unwrap()
            .holds
        );
        let neg = RationalMatrix::from_ints(&[[-1]]);
        let v = is_tpk_lcp_single(&neg, 1, DEFAULT_CAP).unwrap();
        assert!(!v.holds);
        assert!(v.certificate.unwrap().replay(&neg, DEFAULT_CAP).unwrap());

        let a = RationalMatrix::from_ints(&[[0, 0, 0], [2, 2, 1], [1, 1, 1]]);
        let v = is_tpk_lcp_single(&a, 3, DEFAULT_CAP).unwrap();
        assert!(!v.holds);
        assert!(v.certificate.unwrap().replay(&a, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn pattern_pair_examples() {
        let a = RationalMatrix::from_ints(&[[2, 1], [1, 1]]);
        assert!(sign_pattern_pair_absent(&a, &ints(&[-1, -1])).unwrap());
        assert!(sign_pattern_pair_absent(&RationalMatrix::identity(2), &ints(&[-1, -1])).unwrap());

        // Sign reversal of x = (1, -1) by [[1,2],[2,1]]: v = A x = (-1, 1).
        let b = RationalMatrix::from_ints(&[[1, 2], [2, 1]]);
        let x = ints(&[1, -1]);
        let v = b.mul_vec(&x).unwrap();
        let (xp, xm) = crate::signs::split_positive_negative(&x);
        let (vp, vm) = crate::signs::split_positive_negative(&v);
        let q: Vector = vp
            .iter()
            .zip(b.mul_vec(&xp).unwrap())
            .map(|(a, b)| a - b)
            .collect();
        let q2: Vector = vm
            .iter()
            .zip(b.mul_vec(&xm).unwrap())
            .map(|(a, b)| a - b)
            .collect();
        assert_eq!(q, q2);
        assert!(q.iter().all(|v| v.is_negative()));
        assert!(!sign_pattern_pair_absent(&b, &q).unwrap());

        assert_eq!(
            sign_pattern_pair_absent(&a, &ints(&[-1, 0])),
            Err(Error::QNotNegative)
        );
    }

    #[test]
    fn sampled_examples() {
        assert!(
            is_tpk_lcp_sampled(
                &RationalMatrix::from_ints(&[[2, 1], [1, 1]]),
                2,
                100,
                7,
                DEFAULT_CAP
            )
            .unwrap()
            .holds
        );
        let z = RationalMatrix::from_ints(&[[0, 1], [0, 0]]);
        let v = is_tpk_lcp_sampled(&z, 1, 5, 7, DEFAULT_CAP).unwrap();
        assert!(!v.holds);
        assert!(v.certificate.unwrap().replay(&z, DEFAULT_CAP).unwrap());
        assert!(
            !is_tpk_lcp_sampled(&RationalMatrix::from_ints(&[[-1]]), 1, 5, 7, DEFAULT_CAP)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn tn_sufficient_examples() {
        assert!(
            tn_sufficient_single(
                &RationalMatrix::from_ints(&[[2, 1], [1, 1]]),
                2,
                DEFAULT_CAP
            )
            .unwrap()
            .holds
        );
        let a = RationalMatrix::from_ints(&[[0, 0, 0], [2, 2, 1], [1, 1, 1]]);
        let v = tn_sufficient_single(&a, 3, DEFAULT_CAP).unwrap();
        assert!(!v.holds);
        // The leading 2x2 block [[0,0],[2,2]] already has solutions (2,0)
        // and (3,0) with different images.
        match v.certificate.as_ref().unwrap() {
            Certificate::LcpWitness {
                rows, solutions, ..
            } => {
                assert_eq!(rows, &vec![0, 1]);
                assert_eq!(solutions, &vec![ints(&[2, 0]), ints(&[3, 0])]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let full = inst(a.clone(), &[0, -2, -1]);
        let set = enumerate_solutions(&full, DEFAULT_CAP).unwrap();
        let (z1, z2) = image_mismatch(&a, &set).unwrap().unwrap();
        assert!(full.is_solution(&z1) && full.is_solution(&z2));
        assert_ne!(a.mul_vec(&z1).unwrap(), a.mul_vec(&z2).unwrap());
        assert!(v.certificate.unwrap().replay(&a, DEFAULT_CAP).unwrap());
        let b = RationalMatrix::from_ints(&[[1, 2], [2, 1]]);
        let v = tn_sufficient_single(&b, 2, DEFAULT_CAP).unwrap();
        assert!(!v.holds);
        assert!(v.certificate.unwrap().replay(&b, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn nondegeneracy_examples() {
        let i = inst(RationalMatrix::from_ints(&[[2, 1], [1, 1]]), &[-1, -1]);
        assert!(!is_nondegenerate_vector(&i, DEFAULT_CAP).unwrap());
        assert!(is_nondegenerate_vector(
            &inst(RationalMatrix::from_ints(&[[1]]), &[-1]),
            DEFAULT_CAP
        )
        .unwrap());
        assert!(is_nondegenerate_vector(
            &inst(RationalMatrix::identity(2), &[-1, -2]),
            DEFAULT_CAP
        )
        .unwrap());
    }

    #[test]
    fn column_basis_examples() {
        assert!(column_basis_hypothesis(
            &RationalMatrix::from_ints(&[[2, 1], [1, 1]]),
            DEFAULT_CAP
        )
        .unwrap());
        assert!(!column_basis_hypothesis(
            &RationalMatrix::from_ints(&[[0, 1], [0, 0]]),
            DEFAULT_CAP
        )
        .unwrap());
        assert!(column_basis_hypothesis(
            &RationalMatrix::from_ints(&[[1, 1], [1, 1]]),
            DEFAULT_CAP
        )
        .unwrap());
        assert!(column_basis_hypothesis(&RationalMatrix::zeros(2, 2), DEFAULT_CAP).unwrap());
    }

    #[test]
    fn reduction_examples() {
        let i = inst(RationalMatrix::identity(2), &[1, -1]);
        let red = reduce_nonnegative_q(&i);
        let reduced = red.reduced.clone().unwrap();
        assert_eq!(reduced.matrix(), &RationalMatrix::from_ints(&[[1]]));
        assert_eq!(reduced.q(), &ints(&[-1])[..]);
        let lifted = red.lift(&ints(&[1])).unwrap();
        assert_eq!(lifted, ints(&[0, 1]));
        assert!(i.is_solution(&lifted));

        let pos = inst(RationalMatrix::identity(2), &[1, 2]);
        let red = reduce_nonnegative_q(&pos);
        assert!(red.reduced.is_none());
        assert_eq!(red.lift(&[]).unwrap(), ints(&[0, 0]));
        assert!(pos.is_solution(&ints(&[0, 0])));

        let neg = inst(RationalMatrix::identity(2), &[-1, -1]);
        assert_eq!(reduce_nonnegative_q(&neg).reduced.unwrap(), neg);
    }

    #[test]
    fn contains_rejects_non_solutions() {
        let i = inst(RationalMatrix::from_ints(&[[0]]), &[0]);
        let set = enumerate_solutions(&i, DEFAULT_CAP).unwrap();
        assert!(set.contains(&i, &ints(&[5])));
        assert!(!set.contains(&i, &[int(-1)]));
    }

    fn small_instance() -> impl Strategy<Value = LcpInstance> {
        (1usize..=4).prop_flat_map(|n| {
            (
                proptest::collection::vec(-3i64..=3, n * n),
                proptest::collection::vec(-4i64..=4, n),
            )
                .prop_map(move |(a, q)| {
                    LcpInstance::new(RationalMatrix::new(n, n, ints(&a)).unwrap(), ints(&q))
                        .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn every_reported_solution_is_valid(i in small_instance()) {
            let set = enumerate_solutions(&i, DEFAULT_CAP).unwrap();
            for p in &set.points {
                prop_assert!(i.is_solution(&p.x));
            }
            for f in &set.families {
                prop_assert!(f.vertices.len() >= 2 || !f.rays.is_empty());
                for v in &f.vertices {
                    prop_assert!(i.is_solution(v));
                }
                let (a, b) = f.two_members();
                prop_assert!(a != b);
                prop_assert!(i.is_solution(&a) && i.is_solution(&b));
            }
            let distinct: BTreeSet<Vec<String>> = set.points.iter()
                .map(|p| p.x.iter().map(|v| v.to_string()).collect())
                .collect();
            prop_assert_eq!(distinct.len(), set.points.len());
        }

        #[test]
        fn matches_cramer_oracle_when_blocks_are_nonsingular(i in small_instance()) {
            let n = i.size();
            let all_nonsingular = (1..=n).all(|r| index_subsets(n, r)
                .all(|s| !minor(i.matrix(), &s, &s).unwrap().is_zero()));
            prop_assume!(all_nonsingular);
            let set = enumerate_solutions(&i, DEFAULT_CAP).unwrap();
            prop_assert!(!set.has_infinite_family());
            let mut got: Vec<Vector> = set.points.iter().map(|p| p.x.clone()).collect();
            let mut want = nonsingular_oracle(&i);
            got.sort();
            want.sort();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn non_p_matrices_have_a_witness(i in small_instance()) {
            let a = i.matrix();
            match nonuniqueness_witness(a).unwrap() {
                None => prop_assert!(is_p_matrix(a).unwrap().holds),
                Some((q, z1, z2)) => {
                    let w = LcpInstance::new(a.clone(), q).unwrap();
                    prop_assert!(z1 != z2 && w.is_solution(&z1) && w.is_solution(&z2));
                }
            }
        }

        #[test]
        fn p_matrices_have_unique_solutions(
            (n, off, diag, q) in (1usize..=4).prop_flat_map(|n| (
                Just(n),
                proptest::collection::vec(-3i64..=3, n * n),
                proptest::collection::vec(1i64..=3, n),
                proptest::collection::vec(-4i64..=4, n),
            ))
        ) {
            // Positive diagonal with strict row dominance gives a P-matrix.
            let mut a = RationalMatrix::new(n, n, ints(&off)).unwrap();
            for i in 0..n {
                let spread: i64 = (0..n).filter(|&j| j != i).map(|j| off[i * n + j].abs()).sum();
                a.set(i, i, int(spread + diag[i]));
            }
            prop_assert!(is_p_matrix(&a).unwrap().holds);
            let i = LcpInstance::new(a, ints(&q)).unwrap();
            prop_assert_eq!(solvability_status(&i, DEFAULT_CAP).unwrap(), SolvabilityStatus::Unique);
        }
    }
}
