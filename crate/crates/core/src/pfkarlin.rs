//! Pólya frequency sequence windows, Karlin-type `TP_{n-1}` counterexamples,
//! Cauchy generators and the open-orthant property harness.

use std::ops::RangeInclusive;

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lcp::is_tpk_lcp_single;
use crate::matcore::{
    content_lines, parse_rational, ratio, tokens, Rational, RationalMatrix, Vector,
};
use crate::signs::{OrthantPattern, Sign};
use crate::tpcheck::{
    is_tnk_all_minors, is_tpk_contiguous, sign_non_reversal, variation_diminution_check,
    Certificate, Class, Verdict,
};

/// Coefficients `c_start, ..., c_{start+len-1}` of a sequence. Indices outside
/// this range are unknown, not zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    start: i64,
    coefficients: Vector,
}

impl Sequence {
    pub fn new(start: i64, coefficients: Vector) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Precondition(
                "sequence needs at least one coefficient".into(),
            ));
        }
        Ok(Sequence {
            start,
            coefficients,
        })
    }

    /// `c_n` for every `n` in `range`.
    pub fn from_fn(range: RangeInclusive<i64>, f: impl Fn(i64) -> Rational) -> Result<Self> {
        let start = *range.start();
        Self::new(start, range.map(f).collect())
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.coefficients.len() as i64 - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn get(&self, index: i64) -> Result<&Rational> {
        if index < self.start || index > self.end() {
            return Err(Error::SequenceRange {
                index,
                start: self.start,
                end: self.end(),
            });
        }
        Ok(&self.coefficients[(index - self.start) as usize])
    }

    /// Re-evaluates a [`Certificate::SequenceWindow`] against this sequence.
    pub fn replay(&self, cert: &Certificate, cap: usize) -> Result<bool> {
        match cert {
            Certificate::SequenceWindow {
                offset,
                size,
                inner,
            } => inner.replay(&toeplitz_window(self, *offset, *size)?, cap),
            _ => Err(Error::Precondition(
                "not a sequence-window certificate".into(),
            )),
        }
    }

    pub fn to_text(&self) -> String {
        let coeffs: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        format!("{} {}\n{}\n", self.start, self.end(), coeffs.join(" "))
    }
}

/// Parses `nMin nMax` followed by `nMax - nMin + 1` coefficients, split over
/// any number of lines.
pub fn parse_sequence(text: &str) -> Result<Sequence> {
    let lines = content_lines(text);
    let Some(&(header_line, header)) = lines.first() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing `nMin nMax` header".into(),
        });
    };
    let bounds = tokens(header);
    if bounds.len() != 2 {
        return Err(Error::Parse {
            line: header_line,
            column: 1,
            message: "header must be `nMin nMax`".into(),
        });
    }
    let parse_bound = |(col, t): (usize, &str)| {
        t.parse::<i64>().map_err(|_| Error::Parse {
            line: header_line,
            column: col,
            message: format!("invalid index `{t}`"),
        })
    };
    let lo = parse_bound(bounds[0])?;
    let hi = parse_bound(bounds[1])?;
    if hi < lo {
        return Err(Error::Parse {
            line: header_line,
            column: bounds[1].0,
            message: "nMax must be at least nMin".into(),
        });
    }
    let expected = (hi - lo + 1) as usize;
    let mut coefficients = Vec::with_capacity(expected);
    for &(line_no, line) in &lines[1..] {
        for (col, t) in tokens(line) {
            if coefficients.len() == expected {
                return Err(Error::Parse {
                    line: line_no,
                    column: col,
                    message: format!("more than {expected} coefficients"),
                });
            }
            coefficients.push(parse_rational(t).map_err(|message| Error::Parse {
                line: line_no,
                column: col,
                message,
            })?);
        }
    }
    if coefficients.len() != expected {
        let last = lines.last().map_or(header_line, |l| l.0);
        return Err(Error::Parse {
            line: last + 1,
            column: 1,
            message: format!(
                "expected {expected} coefficients, found {}",
                coefficients.len()
            ),
        });
    }
    Sequence::new(lo, coefficients)
}

/// The `r x r` matrix with entry `(i, j) = c_{l+i-j}`.
pub fn toeplitz_window(seq: &Sequence, l: i64, r: usize) -> Result<RationalMatrix> {
    if r == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut data = Vec::with_capacity(r * r);
    for i in 0..r as i64 {
        for j in 0..r as i64 {
            data.push(seq.get(l + i - j)?.clone());
        }
    }
    RationalMatrix::new(r, r, data)
}

/// `TP_k` Pólya frequency test: every window of size `r <= k` at every offset
/// in `l_range` passes the single-vector LCP test at its own size.
pub fn is_pfk_windowed(
    seq: &Sequence,
    k: usize,
    l_range: RangeInclusive<i64>,
    cap: usize,
) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if l_range.is_empty() {
        return Err(Error::Precondition("empty offset range".into()));
    }
    // Build every window first so range errors surface before any verdict.
    let mut windows = Vec::new();
    for r in 1..=k {
        for l in l_range.clone() {
            windows.push((r, l, toeplitz_window(seq, l, r)?));
        }
    }
    for (r, l, w) in windows {
        let v = is_tpk_lcp_single(&w, r, cap)?;
        if let Some(inner) = v.certificate {
            return Ok(Verdict::fail(
                k,
                Certificate::SequenceWindow {
                    offset: l,
                    size: r,
                    inner: Box::new(inner),
                },
            ));
        }
    }
    Ok(Verdict::pass(k))
}

/// `(x e^{-x})^alpha` for `x > 0`, else `0`.
pub fn omega_alpha(x: f64, alpha: f64) -> f64 {
    if x > 0.0 {
        (x * (-x).exp()).powf(alpha)
    } else {
        0.0
    }
}

/// Nodes `y_1 < ... < y_n < x_1 < ... < x_n` and an exponent for
/// `(ω(x_i - y_j)^alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KarlinSpec {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub alpha: f64,
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl KarlinSpec {
    pub fn new(x: Vec<f64>, y: Vec<f64>, alpha: f64) -> Result<Self> {
        let spec = KarlinSpec { x, y, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.x.len();
        if n == 0 || self.y.len() != n {
            return Err(Error::Precondition("need n >= 1 nodes of each kind".into()));
        }
        if !self.x.iter().chain(&self.y).all(|v| v.is_finite()) {
            return Err(Error::Precondition("nodes must be finite".into()));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::Precondition(
                "alpha must be finite and non-negative".into(),
            ));
        }
        if !strictly_increasing(&self.x)
            || !strictly_increasing(&self.y)
            || self.y[n - 1] >= self.x[0]
        {
            return Err(Error::Precondition(
                "nodes must satisfy y_1 < ... < y_n < x_1 < ... < x_n".into(),
            ));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `y_j = j - 1`, `x_i = n + i - 1`.
    pub fn unit_spaced(n: usize, alpha: f64) -> Result<Self> {
        let y = (0..n).map(|j| j as f64).collect();
        let x = (0..n).map(|i| (n + i) as f64).collect();
        Self::new(x, y, alpha)
    }

    /// Nodes packed geometrically around the gap between `y_n` and `x_1`:
    /// spacings `s, s c, s c^2, ...` grow away from the gap on both sides.
    /// `scale` multiplies the individual spacings (the `y` spacings first,
    /// then the central gap, then the `x` spacings) and must hold `2n - 1`
    /// positive factors.
    pub fn geometric(n: usize, alpha: f64, scale: &[f64]) -> Result<Self> {
        const STEP: f64 = 0.05;
        const GROWTH: f64 = 3.0;
        const GAP: f64 = 0.01;
        if n == 0 || scale.len() != 2 * n - 1 {
            return Err(Error::Precondition("need 2n - 1 scale factors".into()));
        }
        let spacing = |k: usize| STEP * GROWTH.powi(k as i32);
        let mut y = vec![0.0];
        for j in 0..n - 1 {
            let step = spacing(n - 2 - j) * scale[j];
            y.push(y[j] + step);
        }
        let mut x = vec![y[n - 1] + GAP * scale[n - 1]];
        for i in 0..n - 1 {
            let step = spacing(i) * scale[n + i];
            x.push(x[i] + step);
        }
        Self::new(x, y, alpha)
    }
}

/// A contiguous minor evaluated in floating point.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMinor {
    pub row_start: usize,
    pub col_start: usize,
    pub size: usize,
    pub value: f64,
    /// `|value|` divided by the product of the window's row norms, in `[0, 1]`.
    pub relative: f64,
}

/// Float matrix with its contiguous minors and the smallest of them.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrixWithMargin {
    pub entries: Vec<Vec<f64>>,
    pub minors: Vec<FloatMinor>,
    /// Smallest `|minor|` over all contiguous windows.
    pub margin: f64,
    /// Smallest relative `|minor|` over all contiguous windows.
    pub relative_margin: f64,
}

/// Default relative margin below which float verdicts are withheld.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

impl FloatMatrixWithMargin {
    pub fn new(entries: Vec<Vec<f64>>) -> Self {
        let m = entries.len();
        let n = entries.first().map_or(0, |r| r.len());
        let mut minors = Vec::new();
        for size in 1..=m.min(n) {
            for row_start in 0..=m - size {
                for col_start in 0..=n - size {
                    let w: Vec<Vec<f64>> = entries[row_start..row_start + size]
                        .iter()
                        .map(|r| r[col_start..col_start + size].to_vec())
                        .collect();
                    let norms: f64 = w
                        .iter()
                        .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
                        .product();
                    let value = float_determinant(w);
                    let relative = if norms > 0.0 {
                        value.abs() / norms
                    } else {
                        0.0
                    };
                    minors.push(FloatMinor {
                        row_start,
                        col_start,
                        size,
                        value,
                        relative,
                    });
                }
            }
        }
        let margin = minors
            .iter()
            .map(|m| m.value.abs())
            .fold(f64::INFINITY, f64::min);
        let relative_margin = minors
            .iter()
            .map(|m| m.relative)
            .fold(f64::INFINITY, f64::min);
        FloatMatrixWithMargin {
            entries,
            minors,
            margin,
            relative_margin,
        }
    }

    /// `Some(TP_k)` from the contiguous minors of size `<= k`, or `None` when
    /// one of them is within `tolerance` (relative) of zero.
    pub fn is_tpk(&self, k: usize, tolerance: f64) -> Option<bool> {
        let relevant: Vec<&FloatMinor> = self.minors.iter().filter(|m| m.size <= k).collect();
        if relevant.iter().any(|m| m.relative <= tolerance) {
            return None;
        }
        Some(relevant.iter().all(|m| m.value > 0.0))
    }

    /// The full determinant's sign, or `None` within `tolerance`.
    pub fn determinant_sign(&self, tolerance: f64) -> Option<Sign> {
        let full = self.minors.last()?;
        if full.size != self.entries.len() || full.relative <= tolerance {
            return None;
        }
        Some(if full.value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        })
    }
}

/// LU with partial pivoting.
pub fn float_determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .expect("non-empty column");
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        let (top, bottom) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in bottom {
            let f = row[c] / pivot[c];
            for (v, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *v -= f * p;
            }
        }
    }
    det
}

/// `(ω(x_i - y_j)^alpha)` in floating point.
pub fn karlin_matrix(spec: &KarlinSpec) -> Result<FloatMatrixWithMargin> {
    spec.validate()?;
    let entries = spec
        .x
        .iter()
        .map(|xi| {
            spec.y
                .iter()
                .map(|yj| omega_alpha(xi - yj, spec.alpha))
                .collect()
        })
        .collect();
    Ok(FloatMatrixWithMargin::new(entries))
}

/// Continued-fraction convergent of `v` within `rel_tol * |v|`.
pub fn rationalize(v: f64, rel_tol: f64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    let target = v.abs() * rel_tol;
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(v.floor() as i64), BigInt::one());
    let mut frac = v - v.floor();
    for _ in 0..64 {
        let approx = Rational::new(p1.clone(), q1.clone());
        if (approx.to_f64()? - v).abs() <= target || frac == 0.0 {
            return Some(approx);
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = BigInt::from(a as i64);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

/// A verified counterexample and the data that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub matrix: RationalMatrix,
    pub spec: KarlinSpec,
    pub float: FloatMatrixWithMargin,
    /// Relative tolerance used for rationalization; `None` means the floats
    /// were converted exactly.
    pub rationalization: Option<f64>,
}

pub const COUNTEREXAMPLE_RETRIES: usize = 16;

const RATIONALIZATION_STEPS: [f64; 3] = [1e-8, 1e-11, 1e-14];

fn rationalize_matrix(entries: &[Vec<f64>], tol: Option<f64>) -> Result<RationalMatrix> {
    let rows = entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| {
                    let exact = || Rational::from_float(v);
                    tol.map_or_else(exact, |t| rationalize(v, t).or_else(exact))
                        .ok_or_else(|| Error::Precondition(format!("non-finite entry {v}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RationalMatrix::from_rows(rows)
}

fn verified_counterexample(a: &RationalMatrix, n: usize) -> Result<bool> {
    Ok(is_tpk_contiguous(a, n - 1)?.holds && a.determinant()?.is_negative())
}

/// An `n x n` rational matrix that is exactly `TP_{n-1}` with negative
/// determinant, built from `ω^alpha` with `alpha` in `(n-3, n-2)`.
pub fn tp_counterexample(n: usize, seed: u64) -> Result<Counterexample> {
    if n < 3 {
        return Err(Error::Precondition("counterexample needs n >= 3".into()));
    }
    let alpha = n as f64 - 2.5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..COUNTEREXAMPLE_RETRIES {
        let scale: Vec<f64> = (0..2 * n - 1).map(|_| rng.gen_range(0.9..=1.1)).collect();
        let spec = KarlinSpec::geometric(n, alpha, &scale)?;
        let float = karlin_matrix(&spec)?;
        let float_ok = float.is_tpk(n - 1, FLOAT_TOLERANCE) == Some(true)
            && float.determinant_sign(FLOAT_TOLERANCE) == Some(Sign::Negative);
        if !float_ok {
            continue;
        }
        let steps = RATIONALIZATION_STEPS.iter().map(|&t| Some(t)).chain([None]);
        for tol in steps {
            let matrix = rationalize_matrix(&float.entries, tol)?;
            if verified_counterexample(&matrix, n)? {
                return Ok(Counterexample {
                    matrix,
                    spec,
                    float,
                    rationalization: tol,
                });
            }
        }
    }
    Err(Error::VerificationFailed(format!(
        "no exactly verified counterexample for n = {n} after {COUNTEREXAMPLE_RETRIES} attempts"
    )))
}

/// `(1 / (x_i + y_j))`; increasing positive nodes make it totally positive.
pub fn cauchy_matrix(x: &[Rational], y: &[Rational]) -> Result<RationalMatrix> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let rows = x
        .iter()
        .map(|xi| {
            y.iter()
                .map(|yj| {
                    let s = xi + yj;
                    if s.is_zero() {
                        Err(Error::Precondition("x_i + y_j = 0".into()))
                    } else {
                        Ok(s.recip())
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RationalMatrix::from_rows(rows)
}

fn increasing_nodes(rng: &mut impl Rng, len: usize) -> Vector {
    let mut v = ratio(rng.gen_range(1..=5), rng.gen_range(1..=5));
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v.clone());
        v += ratio(rng.gen_range(1..=5), rng.gen_range(1..=5));
    }
    out
}

/// Random Cauchy matrix, verified totally positive before it is returned.
pub fn random_tp_matrix(m: usize, n: usize, seed: u64) -> Result<RationalMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = increasing_nodes(&mut rng, m);
    let y = increasing_nodes(&mut rng, n);
    let a = cauchy_matrix(&x, &y)?;
    if !is_tpk_contiguous(&a, m.min(n))?.holds {
        return Err(Error::VerificationFailed("Cauchy matrix is not TP".into()));
    }
    Ok(a)
}

/// Which clause a sampled vector broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthantClause {
    SignNonReversal,
    VariationDiminution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthantViolation {
    pub x: Vector,
    pub image: Vector,
    pub clause: OrthantClause,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthantReport {
    pub trials: usize,
    pub violation: Option<OrthantViolation>,
}

impl OrthantReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Samples `trials` vectors in the open orthant `pattern` with coordinates
/// `±(u/v)`, `u, v` in `1..=100`. `Tp` requires `A_r` to be `TP_{r-1}` and
/// checks strict sign non-reversal plus variation diminution with boundary
/// signs; `Tn` requires `TN_{r-1}` and checks the non-strict versions.
pub fn orthant_harness(
    ar: &RationalMatrix,
    pattern: &OrthantPattern,
    trials: usize,
    seed: u64,
    class: Class,
) -> Result<OrthantReport> {
    let r = ar.ensure_square()?;
    if pattern.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: pattern.len(),
        });
    }
    if pattern.is_alternating() {
        return Err(Error::AlternatingPattern);
    }
    if r > 1 {
        let holds = match class {
            Class::Tp => is_tpk_contiguous(ar, r - 1)?.holds,
            Class::Tn => is_tnk_all_minors(ar, r - 1)?.holds,
        };
        if !holds {
            return Err(Error::Precondition(format!(
                "matrix is not {}_{}",
                match class {
                    Class::Tp => "TP",
                    Class::Tn => "TN",
                },
                r - 1
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x: Vector = pattern
            .signs()
            .iter()
            .map(|s| {
                ratio(rng.gen_range(1..=100), rng.gen_range(1..=100))
                    * Rational::from_integer(s.as_i8().into())
            })
            .collect();
        let clause = if !sign_non_reversal(ar, &x, class == Class::Tp)? {
            Some(OrthantClause::SignNonReversal)
        } else if !variation_diminution_check(ar, &x, class)? {
            Some(OrthantClause::VariationDiminution)
        } else {
            None
        };
        if let Some(clause) = clause {
            let image = ar.mul_vec(&x)?;
            return Ok(OrthantReport {
                trials,
                violation: Some(OrthantViolation { x, image, clause }),
            });
        }
    }
    Ok(OrthantReport {
        trials,
        violation: None,
    })
}
