//! Shared test corpus.
#![allow(dead_code)]

use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use totalpos::matcore::{int, ratio, Rational, RationalMatrix};
use totalpos::pfkarlin::{random_tp_matrix, tp_counterexample};

pub struct Entry {
    pub name: String,
    pub a: RationalMatrix,
}

fn entry(name: impl Into<String>, a: RationalMatrix) -> Entry {
    Entry {
        name: name.into(),
        a,
    }
}

/// Hand-written totally non-negative examples.
pub fn tn_examples() -> Vec<Entry> {
    vec![
        entry(
            "tn-lcp-example",
            RationalMatrix::from_ints(&[[2, 1, 1], [2, 1, 1], [1, 1, 1]]),
        ),
        entry(
            "tn-no-solution",
            RationalMatrix::from_ints(&[[0, 1], [0, 0]]),
        ),
        entry(
            "tn-converse-fails",
            RationalMatrix::from_ints(&[[0, 0, 0], [2, 2, 1], [1, 1, 1]]),
        ),
        entry("identity-3", RationalMatrix::identity(3)),
        entry(
            "ones-3",
            RationalMatrix::from_ints(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]]),
        ),
        entry("zero-2x3", RationalMatrix::zeros(2, 3)),
        entry(
            "upper-ones",
            RationalMatrix::from_ints(&[[1, 1, 1], [0, 1, 1], [0, 0, 1]]),
        ),
        entry(
            "pascal-4",
            RationalMatrix::from_ints(&[[1, 1, 1, 1], [1, 2, 3, 4], [1, 3, 6, 10], [1, 4, 10, 20]]),
        ),
        entry(
            "tridiagonal",
            RationalMatrix::from_ints(&[[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 1], [0, 0, 1, 2]]),
        ),
        entry(
            "rank-one",
            RationalMatrix::from_ints(&[[1, 2, 4], [2, 4, 8], [3, 6, 12]]),
        ),
    ]
}

fn elementary(n: usize, i: usize, upper: bool, t: Rational) -> RationalMatrix {
    let mut e = RationalMatrix::identity(n);
    if upper {
        e.set(i, i + 1, t);
    } else {
        e.set(i + 1, i, t);
    }
    e
}

/// Product of elementary bidiagonal factors with non-negative weights and a
/// non-negative diagonal: totally non-negative by construction.
pub fn bidiagonal_product(n: usize, seed: u64) -> RationalMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = RationalMatrix::identity(n);
    for i in 0..n {
        a.set(i, i, int(rng.gen_range(0..=3)));
    }
    for _ in 0..2 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n - 1);
        let t = ratio(rng.gen_range(0..=3), rng.gen_range(1..=2));
        let e = elementary(n, i, rng.gen_bool(0.5), t);
        a = if rng.gen_bool(0.5) {
            e.mul(&a).unwrap()
        } else {
            a.mul(&e).unwrap()
        };
    }
    a
}

pub fn random_integer_matrix(m: usize, n: usize, lo: i64, hi: i64, seed: u64) -> RationalMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..m * n).map(|_| int(rng.gen_range(lo..=hi))).collect();
    RationalMatrix::new(m, n, data).unwrap()
}

/// Zero-padded Cauchy matrix: TN but not TP.
pub fn padded_cauchy(n: usize, seed: u64) -> RationalMatrix {
    let c = random_tp_matrix(n, n, seed).unwrap();
    let mut a = RationalMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, c.get(i, j).clone());
        }
    }
    a
}

/// Mixed corpus: Cauchy TP up to 6x6, TN examples, bidiagonal products,
/// random small-integer matrices and Karlin counterexamples.
pub fn corpus() -> Vec<Entry> {
    let mut out = tn_examples();
    let mut seed = 1000;
    for m in 1..=6 {
        for n in 1..=6 {
            if m.max(n) <= 4 || m == n {
                for s in 0..2 {
                    out.push(entry(
                        format!("cauchy-{m}x{n}-{s}"),
                        random_tp_matrix(m, n, seed).unwrap(),
                    ));
                    seed += 1;
                }
            }
        }
    }
    for s in 0..20 {
        out.push(entry(
            format!("bidiagonal-{s}"),
            bidiagonal_product(2 + s as usize % 4, 2000 + s),
        ));
    }
    for s in 0..4 {
        out.push(entry(
            format!("padded-cauchy-{s}"),
            padded_cauchy(2 + s as usize % 3, 3000 + s),
        ));
    }
    for s in 0..80u64 {
        let m = 1 + s as usize % 4;
        let n = 1 + (s as usize / 4) % 4;
        out.push(entry(
            format!("int-pm-{s}"),
            random_integer_matrix(m, n, -2, 3, 4000 + s),
        ));
    }
    for s in 0..60u64 {
        let m = 1 + s as usize % 3;
        let n = 1 + (s as usize / 3) % 3;
        out.push(entry(
            format!("int-nonneg-{s}"),
            random_integer_matrix(m, n, 0, 3, 5000 + s),
        ));
    }
    for n in [3, 4, 5] {
        for s in 0..2 {
            out.push(entry(
                format!("karlin-{n}-{s}"),
                tp_counterexample(n, s).unwrap().matrix,
            ));
        }
    }
    out
}

/// Alternating vectors used as `alpha` in the TN routes.
pub fn alpha_choices(max: usize) -> Vec<totalpos::tpcheck::Alpha> {
    use totalpos::tpcheck::Alpha;
    let sign = |i: usize| {
        if i.is_multiple_of(2) {
            Rational::one()
        } else {
            -Rational::one()
        }
    };
    let growing = (1..=max)
        .map(|r| (0..r).map(|i| sign(i) * int(i as i64 + 1)).collect())
        .collect();
    let flipped = (1..=max)
        .map(|r| (0..r).map(|i| -sign(i) * ratio(1, i as i64 + 2)).collect())
        .collect();
    vec![
        Alpha::Default,
        Alpha::PerSize(growing),
        Alpha::PerSize(flipped),
    ]
}

pub fn is_zero(v: &Rational) -> bool {
    v.is_zero()
}
