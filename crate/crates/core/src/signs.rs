//! Sign-variation counts `S⁻`/`S⁺`, orthant patterns and the sign predicates
//! shared by the characterizations.

use num::traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{Rational, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: &Rational) -> Sign {
        if v.is_positive() {
            Sign::Positive
        } else if v.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn from_i8(v: i8) -> Sign {
        match v.signum() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Exact sign of every entry of a vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn of(x: &[Rational]) -> Self {
        SignVector(x.iter().map(Sign::of).collect())
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }
}

/// Sign pattern of an open orthant: every entry is ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrthantPattern(Vec<Sign>);

impl OrthantPattern {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::Precondition(
                "orthant pattern must be non-empty".into(),
            ));
        }
        if signs.contains(&Sign::Zero) {
            return Err(Error::Precondition(
                "orthant pattern entries must be nonzero".into(),
            ));
        }
        Ok(OrthantPattern(signs))
    }

    pub fn from_i8(signs: &[i8]) -> Result<Self> {
        Self::new(signs.iter().map(|&s| Sign::from_i8(s)).collect())
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_alternating(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// All `2^n` open orthants of `ℝⁿ`.
    pub fn all(n: usize) -> Vec<OrthantPattern> {
        (0..1u32 << n)
            .map(|mask| {
                OrthantPattern(
                    (0..n)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                Sign::Negative
                            } else {
                                Sign::Positive
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

/// Subset of `{−1, +1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignSet {
    pub negative: bool,
    pub positive: bool,
}

impl SignSet {
    pub fn singleton(s: Sign) -> Self {
        match s {
            Sign::Negative => SignSet {
                negative: true,
                positive: false,
            },
            Sign::Positive => SignSet {
                negative: false,
                positive: true,
            },
            Sign::Zero => SignSet::default(),
        }
    }

    pub fn insert(&mut self, s: Sign) {
        match s {
            Sign::Negative => self.negative = true,
            Sign::Positive => self.positive = true,
            Sign::Zero => {}
        }
    }

    pub fn contains(&self, s: Sign) -> bool {
        match s {
            Sign::Negative => self.negative,
            Sign::Positive => self.positive,
            Sign::Zero => false,
        }
    }

    /// The single member, if there is exactly one.
    pub fn only(&self) -> Option<Sign> {
        match (self.negative, self.positive) {
            (true, false) => Some(Sign::Negative),
            (false, true) => Some(Sign::Positive),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundarySigns {
    pub first: SignSet,
    pub last: SignSet,
}

fn nonzero_signs(x: &[Rational]) -> impl Iterator<Item = Sign> + '_ {
    x.iter().map(Sign::of).filter(|s| *s != Sign::Zero)
}

/// `S⁻(x)`: sign changes after deleting zeros. `S⁻(0) = 0`.
pub fn sign_changes_minus(x: &[Rational]) -> usize {
    let signs: Vec<Sign> = nonzero_signs(x).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

const NEG_INF: i64 = i64::MIN / 4;

fn choices(s: Sign) -> [bool; 2] {
    // index 0 = negative, 1 = positive
    match s {
        Sign::Negative => [true, false],
        Sign::Positive => [false, true],
        Sign::Zero => [true, true],
    }
}

/// `best[i][s]`: most sign changes in `x[..=i]` with position `i` assigned `s`.
fn prefix_table(signs: &[Sign]) -> Vec<[i64; 2]> {
    let mut out: Vec<[i64; 2]> = Vec::with_capacity(signs.len());
    for (i, &s) in signs.iter().enumerate() {
        let allowed = choices(s);
        let mut cur = [NEG_INF; 2];
        for t in 0..2 {
            if !allowed[t] {
                continue;
            }
            cur[t] = if i == 0 {
                0
            } else {
                let prev = out[i - 1];
                (prev[t]).max(prev[1 - t] + 1)
            };
        }
        out.push(cur);
    }
    out
}

/// `S⁺(x)`: most sign changes over all ±1 assignments to zero entries.
/// `S⁺(0) = n`.
pub fn sign_changes_plus(x: &[Rational]) -> usize {
    if x.iter().all(Zero::is_zero) {
        return x.len();
    }
    let signs: Vec<Sign> = x.iter().map(Sign::of).collect();
    let table = prefix_table(&signs);
    let last = table.last().expect("non-empty");
    last[0].max(last[1]) as usize
}

/// Possible signs of the first and last coordinate across every zero-entry
/// assignment that attains `S⁺(x)`.
pub fn forced_boundary_signs(x: &[Rational]) -> Result<BoundarySigns> {
    if x.iter().all(Zero::is_zero) {
        return Err(Error::BoundarySignsOfZero);
    }
    let signs: Vec<Sign> = x.iter().map(Sign::of).collect();
    let forward = prefix_table(&signs);
    let reversed: Vec<Sign> = signs.iter().rev().copied().collect();
    let backward = prefix_table(&reversed);

    let end = forward.last().expect("non-empty");
    let best = end[0].max(end[1]);
    let start = backward.last().expect("non-empty");

    let to_set = |row: &[i64; 2]| SignSet {
        negative: row[0] == best,
        positive: row[1] == best,
    };
    Ok(BoundarySigns {
        first: to_set(start),
        last: to_set(end),
    })
}

/// Membership in the open bi-orthant of nonzero, strictly alternating vectors.
pub fn is_alternating(x: &[Rational]) -> bool {
    let signs: Vec<Sign> = x.iter().map(Sign::of).collect();
    !signs.contains(&Sign::Zero) && signs.windows(2).all(|w| w[0] != w[1])
}

/// `x = x⁺ − x⁻` with `x⁺, x⁻ ≥ 0` and disjoint supports.
pub fn split_positive_negative(x: &[Rational]) -> (Vector, Vector) {
    x.iter()
        .map(|v| {
            if v.is_positive() {
                (v.clone(), Rational::zero())
            } else {
                (Rational::zero(), -v.clone())
            }
        })
        .unzip()
}

/// `x̄ = (x₁, −x₂, x₃, …)`.
pub fn alternate(x: &[Rational]) -> Vector {
    x.iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { v.clone() } else { -v.clone() })
        .collect()
}

pub fn first_nonzero_sign(x: &[Rational]) -> Option<Sign> {
    nonzero_signs(x).next()
}

pub fn last_nonzero_sign(x: &[Rational]) -> Option<Sign> {
    x.iter().rev().map(Sign::of).find(|s| *s != Sign::Zero)
}
