//! Exact scalars and the handful of vector helpers built on them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`. Decimal notation is rejected so that every
/// accepted value is exact.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if text.contains(['.', 'e', 'E']) {
        return Err(Error::input(format!(
            "decimal {text:?} is not exact; write it as \"p/q\""
        )));
    }
    text.parse::<Rational>()
        .map_err(|e| Error::input(format!("malformed rational {text:?}: {e}")))
}

/// Canonical text form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn vec_of(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(t: &Rational, a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| t * x).collect()
}

/// `t·a + (1−t)·b`.
pub fn lerp(t: &Rational, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let s = Rational::one() - t;
    a.iter().zip(b).map(|(x, y)| t * x + &s * y).collect()
}

pub fn zeros(len: usize) -> Vec<Rational> {
    vec![Rational::zero(); len]
}

/// Solves the square system `matrix · x = rhs` by Gauss–Jordan elimination.
/// Returns `None` when the matrix is singular.
pub fn solve_square(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = matrix.len();
    let mut aug: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &aug[col][c];
                    aug[r][c] -= delta;
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[rank][col];
                for c in col..cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats_canonically() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), int(-3));
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(format_rational(&rat(4, -2)), "-2");
    }

    #[test]
    fn rejects_inexact_or_malformed_text() {
        for bad in ["0.5", "1/0", "abc", "", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn solve_square_detects_singularity() {
        let m = vec![vec_of(&[1, 2]), vec_of(&[2, 4])];
        assert!(solve_square(&m, &vec_of(&[1, 2])).is_none());
        let m = vec![vec_of(&[2, 1]), vec_of(&[1, 3])];
        assert_eq!(
            solve_square(&m, &vec_of(&[3, 5])).unwrap(),
            vec![rat(4, 5), rat(7, 5)]
        );
        assert_eq!(
            rank(&[vec_of(&[1, 2]), vec_of(&[2, 4]), vec_of(&[0, 1])]),
            2
        );
    }
}
