//! Decision procedures for `TP_k` / `TN_k` with replayable certificates.
//!
//! Every scan runs over window sizes in increasing order and, within a size,
//! over row index sets then column index sets in lexicographic order. The
//! first violation found is reported, so certificates are deterministic.

use num::traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcp::{self, LcpInstance};
use crate::matcore::{
    adjugate_times, alternating_ones, alternating_test_vector, contiguous_windows, index_subsets,
    is_zero_vector, minor, Rational, RationalMatrix, Vector,
};
use crate::serde_util::{one_based, rational, rational_vec, rational_vecs};
use crate::signs::{
    first_nonzero_sign, forced_boundary_signs, is_alternating, last_nonzero_sign,
    sign_changes_minus, sign_changes_plus,
};

/// Which positivity class a check targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    /// Strict: minors `> 0`.
    Tp,
    /// Non-strict: minors `>= 0`.
    Tn,
}

impl Class {
    pub fn is_violated_by(self, minor: &Rational) -> bool {
        match self {
            Class::Tp => !minor.is_positive(),
            Class::Tn => minor.is_negative(),
        }
    }
}

/// Why an LCP-based check rejected a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LcpFailure {
    /// The expected test vector does not solve the problem.
    TestVectorNotSolution,
    /// Two distinct solutions are listed.
    MultipleSolutions,
    /// The problem has no solution at all.
    NoSolution,
    /// Two listed solutions have different images under the matrix.
    ImageMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    ViolatingMinor {
        #[serde(with = "one_based")]
        rows: Vec<usize>,
        #[serde(with = "one_based")]
        cols: Vec<usize>,
        #[serde(with = "rational")]
        value: Rational,
        class: Class,
    },
    SignReversedVector {
        #[serde(with = "one_based")]
        rows: Vec<usize>,
        #[serde(with = "one_based")]
        cols: Vec<usize>,
        #[serde(with = "rational_vec")]
        x: Vector,
        #[serde(with = "rational_vec")]
        image: Vector,
        strict: bool,
    },
    VdViolation {
        #[serde(with = "one_based")]
        rows: Vec<usize>,
        #[serde(with = "one_based")]
        cols: Vec<usize>,
        #[serde(with = "rational_vec")]
        x: Vector,
        #[serde(with = "rational_vec")]
        image: Vector,
        mode: Class,
    },
    LcpWitness {
        #[serde(with = "one_based")]
        rows: Vec<usize>,
        #[serde(with = "one_based")]
        cols: Vec<usize>,
        #[serde(with = "rational_vec")]
        q: Vector,
        reason: LcpFailure,
        #[serde(with = "rational_vecs")]
        solutions: Vec<Vector>,
    },
    /// A failing Toeplitz window `(c_{offset+i-j})` of a sequence; `inner`
    /// refers to the window matrix.
    SequenceWindow {
        offset: i64,
        size: usize,
        inner: Box<Certificate>,
    },
}

impl Certificate {
    /// Re-evaluates the violation against `a` from scratch. `cap` bounds the
    /// LCP enumeration needed to confirm a `NoSolution` witness.
    pub fn replay(&self, a: &RationalMatrix, cap: usize) -> Result<bool> {
        match self {
            Certificate::ViolatingMinor {
                rows,
                cols,
                value,
                class,
            } => Ok(&minor(a, rows, cols)? == value && class.is_violated_by(value)),
            Certificate::SignReversedVector {
                rows,
                cols,
                x,
                image,
                strict,
            } => {
                let sub = a.submatrix(rows, cols)?;
                Ok(&sub.mul_vec(x)? == image && !sign_non_reversal(&sub, x, *strict)?)
            }
            Certificate::VdViolation {
                rows,
                cols,
                x,
                image,
                mode,
            } => {
                let sub = a.submatrix(rows, cols)?;
                Ok(&sub.mul_vec(x)? == image && !variation_diminution_check(&sub, x, *mode)?)
            }
            Certificate::LcpWitness {
                rows,
                cols,
                q,
                reason,
                solutions,
            } => {
                let sub = a.submatrix(rows, cols)?;
                let inst = LcpInstance::new(sub, q.clone())?;
                let valid = |z: &Vector| inst.is_solution(z);
                Ok(match reason {
                    LcpFailure::TestVectorNotSolution => {
                        solutions.first().is_some_and(|z| !valid(z))
                    }
                    LcpFailure::MultipleSolutions => {
                        solutions.len() >= 2
                            && solutions.iter().all(&valid)
                            && solutions[0] != solutions[1]
                    }
                    LcpFailure::ImageMismatch => {
                        solutions.len() >= 2
                            && solutions.iter().all(valid)
                            && inst.matrix().mul_vec(&solutions[0])?
                                != inst.matrix().mul_vec(&solutions[1])?
                    }
                    LcpFailure::NoSolution => {
                        lcp::enumerate_solutions(&inst, cap)?.status()
                            == lcp::SolvabilityStatus::Empty
                    }
                })
            }
            Certificate::SequenceWindow { .. } => Err(Error::Precondition(
                "sequence-window certificates replay against the sequence".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn pass(order: usize) -> Self {
        Verdict {
            holds: true,
            order,
            certificate: None,
        }
    }

    pub fn fail(order: usize, certificate: Certificate) -> Self {
        Verdict {
            holds: false,
            order,
            certificate: Some(certificate),
        }
    }
}

/// Alternating vectors `alpha(r)` used by the TN single-vector tests.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Alpha {
    /// `(1, -1, 1, ...)` at every size.
    #[default]
    Default,
    /// Entry `r - 1` is used for size `r`.
    PerSize(Vec<Vector>),
}

impl Alpha {
    pub fn for_size(&self, r: usize) -> Result<Vector> {
        let v = match self {
            Alpha::Default => alternating_ones(r),
            Alpha::PerSize(list) => list
                .get(r - 1)
                .cloned()
                .ok_or_else(|| Error::NotAlternating(format!("no alpha supplied for size {r}")))?,
        };
        if v.len() != r || !is_alternating(&v) {
            return Err(Error::NotAlternating(format!("alpha for size {r}")));
        }
        Ok(v)
    }

    fn validate(&self, k: usize) -> Result<()> {
        (1..=k).try_for_each(|r| self.for_size(r).map(|_| ()))
    }
}

pub(crate) fn check_order(a: &RationalMatrix, k: usize) -> Result<()> {
    if k == 0 || k > a.min_dim() {
        return Err(Error::OrderOutOfRange {
            k,
            max: a.min_dim(),
        });
    }
    Ok(())
}

/// Every `r x r` index pair `(rows, cols)` with `r <= k`, in scan order.
pub(crate) fn all_square_index_sets(
    m: usize,
    n: usize,
    k: usize,
) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    (1..=k).flat_map(move |r| {
        index_subsets(m, r)
            .flat_map(move |rows| index_subsets(n, r).map(move |cols| (rows.clone(), cols)))
    })
}

/// Every contiguous window of size `<= k`, in scan order.
pub(crate) fn all_contiguous_index_sets(
    a: &RationalMatrix,
    k: usize,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let mut out = Vec::new();
    for r in 1..=k {
        for w in contiguous_windows(a, r)? {
            out.push((w.row_indices(), w.col_indices()));
        }
    }
    Ok(out)
}

fn all_minors(a: &RationalMatrix, k: usize, class: Class) -> Result<Verdict> {
    check_order(a, k)?;
    for (rows, cols) in all_square_index_sets(a.rows(), a.cols(), k) {
        let value = minor(a, &rows, &cols)?;
        if class.is_violated_by(&value) {
            return Ok(Verdict::fail(
                k,
                Certificate::ViolatingMinor {
                    rows,
                    cols,
                    value,
                    class,
                },
            ));
        }
    }
    Ok(Verdict::pass(k))
}

/// `TP_k` by definition: every minor of size `<= k` is positive.
pub fn is_tpk_all_minors(a: &RationalMatrix, k: usize) -> Result<Verdict> {
    all_minors(a, k, Class::Tp)
}

/// `TN_k` by definition: every minor of size `<= k` is non-negative.
pub fn is_tnk_all_minors(a: &RationalMatrix, k: usize) -> Result<Verdict> {
    all_minors(a, k, Class::Tn)
}

/// `TP_k` via contiguous minors only (Fekete–Schoenberg).
pub fn is_tpk_contiguous(a: &RationalMatrix, k: usize) -> Result<Verdict> {
    check_order(a, k)?;
    for (rows, cols) in all_contiguous_index_sets(a, k)? {
        let value = minor(a, &rows, &cols)?;
        if Class::Tp.is_violated_by(&value) {
            return Ok(Verdict::fail(
                k,
                Certificate::ViolatingMinor {
                    rows,
                    cols,
                    value,
                    class: Class::Tp,
                },
            ));
        }
    }
    Ok(Verdict::pass(k))
}

/// Strict: some `i` with `x_i (A x)_i > 0`. Non-strict: some `i` with
/// `x_i != 0` and `x_i (A x)_i >= 0`.
pub fn sign_non_reversal(ar: &RationalMatrix, x: &[Rational], strict: bool) -> Result<bool> {
    ar.ensure_square()?;
    if is_zero_vector(x) {
        return Err(Error::ZeroVector);
    }
    let image = ar.mul_vec(x)?;
    Ok(x.iter().zip(&image).any(|(xi, yi)| {
        let p = xi * yi;
        if strict {
            p.is_positive()
        } else {
            !xi.is_zero() && !p.is_negative()
        }
    }))
}

/// `TP_k` via strict sign non-reversal at `adj(A_r) e^1` on every contiguous window.
pub fn is_tpk_snr_single(a: &RationalMatrix, k: usize) -> Result<Verdict> {
    check_order(a, k)?;
    for (rows, cols) in all_contiguous_index_sets(a, k)? {
        let ar = a.submatrix(&rows, &cols)?;
        let x = alternating_test_vector(&ar, 0)?;
        if is_zero_vector(&x) {
            continue;
        }
        if !sign_non_reversal(&ar, &x, true)? {
            let image = ar.mul_vec(&x)?;
            return Ok(Verdict::fail(
                k,
                Certificate::SignReversedVector {
                    rows,
                    cols,
                    x,
                    image,
                    strict: true,
                },
            ));
        }
    }
    Ok(Verdict::pass(k))
}

/// `TN_k` via non-strict sign non-reversal at `adj(A_r) alpha(r)` on every
/// square submatrix. A zero test vector passes.
pub fn is_tnk_snr_single(a: &RationalMatrix, k: usize, alpha: &Alpha) -> Result<Verdict> {
    check_order(a, k)?;
    alpha.validate(k)?;
    for (rows, cols) in all_square_index_sets(a.rows(), a.cols(), k) {
        let ar = a.submatrix(&rows, &cols)?;
        let z = adjugate_times(&ar, &alpha.for_size(rows.len())?)?;
        if is_zero_vector(&z) {
            continue;
        }
        if !sign_non_reversal(&ar, &z, false)? {
            let image = ar.mul_vec(&z)?;
            return Ok(Verdict::fail(
                k,
                Certificate::SignReversedVector {
                    rows,
                    cols,
                    x: z,
                    image,
                    strict: false,
                },
            ));
        }
    }
    Ok(Verdict::pass(k))
}

/// Variation diminution of `A_r` at a single nonzero vector `x`.
///
/// `Tp`: `S⁺(A x) <= S⁻(x)`, and on equality with `A x != 0` the forced
/// first and last signs of `A x` agree with the first and last nonzero signs
/// of `x`. A boundary sign that is not uniquely forced fails the check.
///
/// `Tn`: `S⁻(A x) <= S⁻(x)`, and on equality with `A x != 0` the first and
/// last nonzero signs agree.
pub fn variation_diminution_check(
    ar: &RationalMatrix,
    x: &[Rational],
    mode: Class,
) -> Result<bool> {
    ar.ensure_square()?;
    if is_zero_vector(x) {
        return Err(Error::ZeroVector);
    }
    let y = ar.mul_vec(x)?;
    let budget = sign_changes_minus(x);
    match mode {
        Class::Tp => {
            let changes = sign_changes_plus(&y);
            if changes > budget {
                return Ok(false);
            }
            if changes < budget || is_zero_vector(&y) {
                return Ok(true);
            }
            let forced = forced_boundary_signs(&y)?;
            Ok(forced.first.only() == first_nonzero_sign(x)
                && forced.last.only() == last_nonzero_sign(x))
        }
        Class::Tn => {
            let changes = sign_changes_minus(&y);
            if changes > budget {
                return Ok(false);
            }
            if changes < budget || is_zero_vector(&y) {
                return Ok(true);
            }
            Ok(first_nonzero_sign(&y) == first_nonzero_sign(x)
                && last_nonzero_sign(&y) == last_nonzero_sign(x))
        }
    }
}

/// Total positivity (full order) via variation diminution at `adj(A_r) e^1`
/// on every contiguous window.
pub fn is_tp_vd_single(a: &RationalMatrix) -> Result<Verdict> {
    let k = a.min_dim();
    for (rows, cols) in all_contiguous_index_sets(a, k)? {
        let ar = a.submatrix(&rows, &cols)?;
        let x = alternating_test_vector(&ar, 0)?;
        if is_zero_vector(&x) {
            continue;
        }
        if !variation_diminution_check(&ar, &x, Class::Tp)? {
            let image = ar.mul_vec(&x)?;
            return Ok(Verdict::fail(
                k,
                Certificate::VdViolation {
                    rows,
                    cols,
                    x,
                    image,
                    mode: Class::Tp,
                },
            ));
        }
    }
    Ok(Verdict::pass(k))
}

/// Total non-negativity (full order) via variation diminution at
/// `adj(A_r) alpha(r)` on every square submatrix. A zero test vector passes.
pub fn is_tn_vd_single(a: &RationalMatrix, alpha: &Alpha) -> Result<Verdict> {
    let k = a.min_dim();
    alpha.validate(k)?;
    for (rows, cols) in all_square_index_sets(a.rows(), a.cols(), k) {
        let ar = a.submatrix(&rows, &cols)?;
        let y = adjugate_times(&ar, &alpha.for_size(rows.len())?)?;
        if is_zero_vector(&y) {
            continue;
        }
        if !variation_diminution_check(&ar, &y, Class::Tn)? {
            let image = ar.mul_vec(&y)?;
            return Ok(Verdict::fail(
                k,
                Certificate::VdViolation {
                    rows,
                    cols,
                    x: y,
                    image,
                    mode: Class::Tn,
                },
            ));
        }
    }
    Ok(Verdict::pass(k))
}
