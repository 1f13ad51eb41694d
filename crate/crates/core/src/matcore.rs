//! Exact rational dense matrices: minors, adjugates, contiguous windows and
//! the two families of cofactor test vectors used by the single-vector
//! characterizations.
//!
//! All indices in this API are 0-based. The text format and the JSON
//! certificates use 1-based indices.

use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, Zero};
use num::BigRational;

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Vector = Vec<Rational>;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// A square contiguous window `rows row_start..row_start+size`,
/// `cols col_start..col_start+size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexWindow {
    pub row_start: usize,
    pub col_start: usize,
    pub size: usize,
}

impl IndexWindow {
    pub fn row_indices(&self) -> Vec<usize> {
        (self.row_start..self.row_start + self.size).collect()
    }

    pub fn col_indices(&self) -> Vec<usize> {
        (self.col_start..self.col_start + self.size).collect()
    }
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ints(v: &[i64]) -> Vector {
    v.iter().map(|&x| int(x)).collect()
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(m * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Self::new(m, n, data)
    }

    /// Integer literal matrix, mostly for tests and examples.
    ///
    /// Panics on an empty array.
    pub fn from_ints<const N: usize>(rows: &[[i64; N]]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| int(v)))
            .collect();
        Self::new(rows.len(), N, data).expect("non-empty integer matrix")
    }

    /// Exact conversion of finite floats (every finite `f64` is a dyadic rational).
    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let converted = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| {
                        Rational::from_float(v)
                            .ok_or_else(|| Error::Precondition(format!("non-finite entry {v}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(converted)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols]).expect("non-empty shape")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn min_dim(&self) -> usize {
        self.rows.min(self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Submatrix on the given (strictly increasing, in-range) index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        check_indices(rows, self.rows)?;
        check_indices(cols, self.cols)?;
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Self::new(rows.len(), cols.len(), data)
    }

    pub fn window(&self, w: &IndexWindow) -> Self {
        self.submatrix(&w.row_indices(), &w.col_indices())
            .expect("window produced by contiguous_windows is in range")
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for l in 0..self.cols {
                    acc += self.get(i, l) * other.get(l, j);
                }
                data.push(acc);
            }
        }
        Self::new(self.rows, other.cols, data)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Rational> {
        self.ensure_square()?;
        Ok(bareiss_determinant(&self.to_rows()))
    }

    pub fn rank(&self) -> usize {
        row_echelon(self.to_rows()).pivots.len()
    }

    /// Serializes into the shared matrix text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vector(x: &[Rational]) -> bool {
    x.iter().all(Zero::is_zero)
}

/// Unit vector `e^j` of length `n` (0-based `j`).
pub fn unit_vector(n: usize, j: usize) -> Vector {
    let mut e = vec![Rational::zero(); n];
    e[j] = Rational::one();
    e
}

/// The alternating vector `(1, -1, 1, ...)` of length `r`.
pub fn alternating_ones(r: usize) -> Vector {
    (0..r)
        .map(|i| if i % 2 == 0 { int(1) } else { int(-1) })
        .collect()
}

fn check_indices(idx: &[usize], bound: usize) -> Result<()> {
    for w in idx.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::UnsortedIndices);
        }
    }
    if let Some(&last) = idx.last() {
        if last >= bound {
            return Err(Error::IndexOutOfRange { index: last, bound });
        }
    }
    Ok(())
}

/// Exact minor on the given index sets; the empty minor is 1.
pub fn minor(a: &RationalMatrix, rows: &[usize], cols: &[usize]) -> Result<Rational> {
    if rows.len() != cols.len() {
        return Err(Error::UnequalIndexSets {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    check_indices(rows, a.rows)?;
    check_indices(cols, a.cols)?;
    if rows.is_empty() {
        return Ok(Rational::one());
    }
    let sub: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| a.get(i, j).clone()).collect())
        .collect();
    Ok(bareiss_determinant(&sub))
}

/// Clears denominators row by row, then runs Bareiss elimination over the
/// integers. Every division in the elimination is exact.
fn bareiss_determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = Rational::new(m[n - 1][n - 1].clone(), scale);
    if negate {
        -det
    } else {
        det
    }
}

/// `adj(A)`, with `A * adj(A) = det(A) I`. The adjugate of a 1x1 matrix is `[[1]]`.
pub fn adjugate(a: &RationalMatrix) -> Result<RationalMatrix> {
    let n = a.ensure_square()?;
    let mut out = RationalMatrix::zeros(n, n);
    let all: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            // adj[i][j] = (-1)^(i+j) * minor(delete row j, delete col i)
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
            let m = minor(a, &rows, &cols)?;
            out.set(i, j, if (i + j) % 2 == 0 { m } else { -m });
        }
    }
    Ok(out)
}

/// The unsigned cofactor determinant `A^{ij}`: delete row `i` and column `j`.
pub fn cofactor_minor(a: &RationalMatrix, i: usize, j: usize) -> Result<Rational> {
    let n = a.ensure_square()?;
    if i >= n || j >= n {
        return Err(Error::IndexOutOfRange {
            index: i.max(j),
            bound: n,
        });
    }
    let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
    minor(a, &rows, &cols)
}

/// All contiguous `r x r` windows in row-major order of their anchors.
pub fn contiguous_windows(a: &RationalMatrix, r: usize) -> Result<Vec<IndexWindow>> {
    if r == 0 || r > a.min_dim() {
        return Err(Error::OrderOutOfRange {
            k: r,
            max: a.min_dim(),
        });
    }
    let mut out = Vec::with_capacity((a.rows - r + 1) * (a.cols - r + 1));
    for row_start in 0..=a.rows - r {
        for col_start in 0..=a.cols - r {
            out.push(IndexWindow {
                row_start,
                col_start,
                size: r,
            });
        }
    }
    Ok(out)
}

/// The LCP test pair `x = (A^{11}, 0, A^{13}, 0, ...)`, `q = -A x`.
pub fn lcp_test_vector(ar: &RationalMatrix) -> Result<(Vector, Vector)> {
    let r = ar.ensure_square()?;
    let x: Vector = (0..r)
        .map(|j| {
            if j % 2 == 0 {
                cofactor_minor(ar, 0, j)
            } else {
                Ok(Rational::zero())
            }
        })
        .collect::<Result<_>>()?;
    let q = ar.mul_vec(&x)?.into_iter().map(|v| -v).collect();
    Ok((x, q))
}

/// `adj(A) e^j`. For `j = 0` this is `(A^{11}, -A^{12}, ..., (-1)^{r-1} A^{1r})`.
pub fn alternating_test_vector(ar: &RationalMatrix, j: usize) -> Result<Vector> {
    let r = ar.ensure_square()?;
    if j >= r {
        return Err(Error::IndexOutOfRange { index: j, bound: r });
    }
    (0..r)
        .map(|i| {
            let m = cofactor_minor(ar, j, i)?;
            Ok(if (i + j).is_multiple_of(2) { m } else { -m })
        })
        .collect()
}

/// `adj(A) alpha`.
pub fn adjugate_times(ar: &RationalMatrix, alpha: &[Rational]) -> Result<Vector> {
    adjugate(ar)?.mul_vec(alpha)
}

/// Strictly increasing `r`-subsets of `0..n` in lexicographic order.
pub fn index_subsets(n: usize, r: usize) -> IndexSubsets {
    IndexSubsets {
        n,
        current: if r <= n { Some((0..r).collect()) } else { None },
    }
}

pub struct IndexSubsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for IndexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let r = out.len();
        let mut next = out.clone();
        let mut i = r;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - r + i {
                next[i] += 1;
                for t in i + 1..r {
                    next[t] = next[t - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

struct Echelon {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

/// Reduced row echelon form over the rationals.
fn row_echelon(mut m: Vec<Vec<Rational>>) -> Echelon {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, p) in row[c..ncols].iter_mut().zip(&pivot[c..ncols]) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: m, pivots }
}

/// Solution set `{ particular + sum t_i nullspace_i }` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vector,
    pub nullspace: Vec<Vector>,
}

/// Solves `A x = b` exactly. `None` when the system is inconsistent.
/// `A` may have zero rows, given as `rows = []` with `ncols` columns.
pub fn solve_affine(
    rows: &[Vec<Rational>],
    ncols: usize,
    b: &[Rational],
) -> Option<AffineSolution> {
    let aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let ech = row_echelon(aug);
    if ech.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (r, &c) in ech.pivots.iter().enumerate() {
        particular[c] = ech.rows[r][ncols].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &c) in ech.pivots.iter().enumerate() {
                v[c] = -ech.rows[r][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution {
        particular,
        nullspace,
    })
}

/// Parses `-1.25`, `3/4`, `-7` exactly.
pub fn parse_rational(token: &str) -> std::result::Result<Rational, String> {
    let token = token.trim();
    if let Some((n, d)) = token.split_once('/') {
        let num = parse_integer(n)?;
        let den = parse_integer(d)?;
        if den.is_zero() {
            return Err(format!("zero denominator in `{token}`"));
        }
        if d.trim_start().starts_with(['-', '+']) {
            return Err(format!("denominator must be unsigned in `{token}`"));
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match token.as_bytes().first() {
        Some(b'-') => (true, &token[1..]),
        Some(b'+') => (false, &token[1..]),
        _ => (false, token),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(format!("invalid number `{token}`"));
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid number `{token}`"));
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = digits
        .parse()
        .map_err(|_| format!("invalid number `{token}`"))?;
    let denom = num::pow(BigInt::from(10), frac.len());
    let v = Rational::new(numer, denom);
    Ok(if neg { -v } else { v })
}

fn parse_integer(s: &str) -> std::result::Result<BigInt, String> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid integer `{s}`"));
    }
    s.parse().map_err(|_| format!("invalid integer `{s}`"))
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| (i + 1, l))
        .collect()
}

/// Whitespace-separated tokens with their 1-based column.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub(crate) fn parse_row(line_no: usize, line: &str, expected: usize) -> Result<Vector> {
    let toks = tokens(line);
    if toks.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            column: 1,
            message: format!("expected {expected} entries, found {}", toks.len()),
        });
    }
    toks.iter()
        .map(|&(col, t)| {
            parse_rational(t).map_err(|message| Error::Parse {
                line: line_no,
                column: col,
                message,
            })
        })
        .collect()
}

/// Parses a matrix and returns it with the content lines left after it.
pub fn parse_matrix_prefix(text: &str) -> Result<(RationalMatrix, Vec<(usize, &str)>)> {
    let lines = content_lines(text);
    let Some(&(header_line, header)) = lines.first() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing `m n` header".into(),
        });
    };
    let dims = tokens(header);
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: header_line,
            column: 1,
            message: "header must be `m n`".into(),
        });
    }
    let parse_dim = |(col, t): (usize, &str)| -> Result<usize> {
        match t.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(Error::Parse {
                line: header_line,
                column: col,
                message: format!("invalid dimension `{t}`"),
            }),
        }
    };
    let m = parse_dim(dims[0])?;
    let n = parse_dim(dims[1])?;
    if lines.len() < m + 1 {
        let last = lines.last().map_or(header_line, |l| l.0);
        return Err(Error::Parse {
            line: last + 1,
            column: 1,
            message: format!("expected {m} matrix rows, found {}", lines.len() - 1),
        });
    }
    let mut data = Vec::with_capacity(m * n);
    for &(line_no, line) in &lines[1..=m] {
        data.extend(parse_row(line_no, line, n)?);
    }
    Ok((RationalMatrix::new(m, n, data)?, lines[m + 1..].to_vec()))
}

/// Parses the shared matrix text format; trailing content is an error.
pub fn parse_matrix(text: &str) -> Result<RationalMatrix> {
    let (m, rest) = parse_matrix_prefix(text)?;
    if let Some(&(line, _)) = rest.first() {
        return Err(Error::Parse {
            line,
            column: 1,
            message: "unexpected content after matrix rows".into(),
        });
    }
    Ok(m)
}

/// Parses a single line of `n` entries (an LCP right-hand side).
pub fn parse_vector_line(text: &str, n: usize) -> Result<Vector> {
    let lines = content_lines(text);
    match lines.as_slice() {
        [(line_no, line)] => parse_row(*line_no, line, n),
        [] => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing vector line".into(),
        }),
        [_, (line_no, _), ..] => Err(Error::Parse {
            line: *line_no,
            column: 1,
            message: "expected a single vector line".into(),
        }),
    }
}

pub fn signum(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}
