//! Exact rational coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational; always stored reduced with a positive denominator.
pub type ExactScalar = BigRational;

/// A point (or vector) with exact coordinates.
pub type Point = Vec<ExactScalar>;

pub fn q(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn point(coords: &[i64]) -> Point {
    coords.iter().map(|&c| q(c)).collect()
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(x: &ExactScalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &ExactScalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn point_to_f64(p: &[ExactScalar]) -> Vec<f64> {
    p.iter().map(to_f64).collect()
}

pub fn dot(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter()
        .zip(b)
        .fold(ExactScalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[ExactScalar], b: &[ExactScalar]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[ExactScalar], b: &[ExactScalar]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[ExactScalar], s: &ExactScalar) -> Point {
    a.iter().map(|x| x * s).collect()
}

/// Vertex average; lies in the relative interior of the convex hull.
pub fn centroid(points: &[&Point]) -> Point {
    let n = points[0].len();
    let count = q(points.len() as i64);
    (0..n)
        .map(|j| {
            points
                .iter()
                .fold(ExactScalar::zero(), |acc, p| acc + &p[j])
                / &count
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/4"), Some(qr(1, 2)));
        assert_eq!(parse_rational(" -3 "), Some(q(-3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&qr(-6, 4)), "-3/2");
        assert_eq!(format_rational(&q(7)), "7");
        assert_eq!(qr(3, -6), qr(-1, 2));
    }
}
