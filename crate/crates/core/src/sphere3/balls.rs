use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use super::UnitQuaternion;
use crate::error::{Error, Result};

/// Closed ball `{p : d(p, center) <= radius}` with `0 < radius < pi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicBall {
    center: UnitQuaternion,
    radius: f64,
}

impl GeodesicBall {
    pub fn new(center: UnitQuaternion, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < PI) {
            return Err(Error::OutOfRange {
                value: radius,
                range: "(0, pi)",
            });
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> UnitQuaternion {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, p: UnitQuaternion) -> bool {
        self.center.distance(p) <= self.radius
    }

    fn key(&self) -> [f64; 5] {
        let c = self.center.to_array();
        [c[0], c[1], c[2], c[3], self.radius]
    }
}

fn cmp_balls(a: &GeodesicBall, b: &GeodesicBall) -> Ordering {
    a.key()
        .iter()
        .zip(b.key().iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// `sum_j w_j 1_{B_j}`; identical balls are merged and zero weights dropped.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BallCF {
    terms: Vec<(i64, GeodesicBall)>,
}

impl BallCF {
    pub fn new(terms: Vec<(i64, GeodesicBall)>) -> Self {
        let mut terms = terms;
        terms.sort_by(|a, b| cmp_balls(&a.1, &b.1));
        let mut merged: Vec<(i64, GeodesicBall)> = Vec::with_capacity(terms.len());
        for (w, b) in terms {
            match merged.last_mut() {
                Some((m, last)) if cmp_balls(last, &b).is_eq() => *m += w,
                _ => merged.push((w, b)),
            }
        }
        merged.retain(|(w, _)| *w != 0);
        Self { terms: merged }
    }

    pub fn ball(b: GeodesicBall) -> Self {
        Self::new(vec![(1, b)])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[(i64, GeodesicBall)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, p: UnitQuaternion) -> i64 {
        self.terms.iter().filter(|(_, b)| b.contains(p)).map(|(w, _)| w).sum()
    }

    /// Sum of weights, which is the Euler integral since every ball is contractible.
    pub fn euler_integral(&self) -> i64 {
        self.terms.iter().map(|(w, _)| w).sum()
    }
}

/// The rotation `x -> e x conj(f)` of `S^3`, with `(e, f)` and `(-e, -f)` identified.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SO4Element {
    left: UnitQuaternion,
    right: UnitQuaternion,
}

impl SO4Element {
    pub fn new(left: UnitQuaternion, right: UnitQuaternion) -> Self {
        let first = left.to_array().into_iter().find(|c| *c != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            Self {
                left: left.neg(),
                right: right.neg(),
            }
        } else {
            Self { left, right }
        }
    }

    pub fn identity() -> Self {
        Self::new(UnitQuaternion::IDENTITY, UnitQuaternion::IDENTITY)
    }

    pub fn left(&self) -> UnitQuaternion {
        self.left
    }

    pub fn right(&self) -> UnitQuaternion {
        self.right
    }

    pub fn apply(&self, x: UnitQuaternion) -> UnitQuaternion {
        self.left * x * self.right.conj()
    }
}

/// `g_* phi`: every center moved by `g`, radii kept.
pub fn act(g: &SO4Element, phi: &BallCF) -> BallCF {
    BallCF::new(
        phi.terms
            .iter()
            .map(|(w, b)| (*w, GeodesicBall::new(g.apply(b.center), b.radius).expect("radius unchanged")))
            .collect(),
    )
}

/// `sum m_i n_j 1_{B(p_i q_j, r_i + s_j)}`; every radius sum must stay below `pi/2`.
pub fn convolve_balls(phi: &BallCF, psi: &BallCF) -> Result<BallCF> {
    let mut terms = Vec::with_capacity(phi.terms.len() * psi.terms.len());
    for (m, a) in &phi.terms {
        for (n, b) in &psi.terms {
            let r = a.radius + b.radius;
            if r >= FRAC_PI_2 {
                return Err(Error::RadiusSumExceedsRegime(r));
            }
            terms.push((m * n, GeodesicBall::new(a.center * b.center, r)?));
        }
    }
    Ok(BallCF::new(terms))
}

/// `f_i(r)`: the value of the `i`-th Crofton valuation on a ball of radius `r`.
pub fn f_closed(i: usize, r: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&r) {
        return Err(Error::OutOfRange {
            value: r,
            range: "[0, pi/2]",
        });
    }
    let (s, c) = r.sin_cos();
    match i {
        0 => Ok(1.0),
        1 => Ok(2.0 * (c * s + r) / PI),
        2 => Ok(s * s),
        3 => Ok((r - c * s) / PI),
        _ => Err(Error::OutOfRange {
            value: i as f64,
            range: "{0, 1, 2, 3}",
        }),
    }
}
