use rand::Rng;
use rand_distr::StandardNormal;

use super::{BallCF, SO4Element, UnitQuaternion};
use crate::error::{Error, Result};
use crate::{par, rng};

const TANGENCY_TOL: f64 = 1e-9;

pub const CROFTON_TAG: &str = "crofton";

/// The totally geodesic `d`-sphere `S^3 ∩ span(frame)`, `d = frame.len() - 1`.
/// For `d = 0` the frame is a single point of `S^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subsphere {
    frame: Vec<[f64; 4]>,
}

impl Subsphere {
    /// Orthonormalizes the given vectors; fails when they are dependent.
    pub fn new(vectors: &[[f64; 4]]) -> Result<Self> {
        if vectors.is_empty() || vectors.len() > 3 {
            return Err(Error::InvalidArgument("a subsphere needs 1 to 3 spanning vectors".into()));
        }
        let mut frame: Vec<[f64; 4]> = Vec::with_capacity(vectors.len());
        for v in vectors {
            let mut u = *v;
            for e in &frame {
                let c = dot4(&u, e);
                u.iter_mut().zip(e).for_each(|(a, b)| *a -= c * b);
            }
            let n = dot4(&u, &u).sqrt();
            if n < 1e-12 {
                return Err(Error::InvalidArgument("subsphere frame is degenerate".into()));
            }
            frame.push(u.map(|a| a / n));
        }
        Ok(Self { frame })
    }

    pub fn dim(&self) -> usize {
        self.frame.len() - 1
    }

    pub fn frame(&self) -> &[[f64; 4]] {
        &self.frame
    }
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sample_so4<R: Rng>(rng: &mut R) -> SO4Element {
    let e = UnitQuaternion::uniform(rng);
    let f = UnitQuaternion::uniform(rng);
    SO4Element::new(e, f)
}

/// Invariant random `d`-subsphere, `d` in `0..=2`; `d = 0` is a uniform point.
pub fn sample_subsphere<R: Rng>(d: usize, rng: &mut R) -> Result<Subsphere> {
    if d > 2 {
        return Err(Error::OutOfRange {
            value: d as f64,
            range: "{0, 1, 2}",
        });
    }
    loop {
        let vs: Vec<[f64; 4]> = (0..=d)
            .map(|_| std::array::from_fn(|_| rng.sample(StandardNormal)))
            .collect();
        if let Ok(s) = Subsphere::new(&vs) {
            return Ok(s);
        }
    }
}

/// `∫_E phi dχ`. Each ball meets `E` in a cap, which is empty, contractible,
/// or all of `E`, so the integral is the weighted count of these Euler
/// characteristics.
pub fn euler_integral_on_subsphere(phi: &BallCF, e: &Subsphere) -> Result<i64> {
    let d = e.dim();
    let mut total = 0i64;
    for (w, b) in phi.terms() {
        let c = b.center().to_array();
        let cos_r = b.radius().cos();
        let chi = if d == 0 {
            let t = dot4(&c, &e.frame[0]);
            if (t - cos_r).abs() < TANGENCY_TOL {
                return Err(Error::DegenerateTangency);
            }
            i64::from(t > cos_r)
        } else {
            let rho = e.frame.iter().map(|f| dot4(&c, f).powi(2)).sum::<f64>().sqrt();
            // E ∩ B = {p in E : <p, c_E> >= cos r}, with |c_E| = rho.
            if (rho - cos_r).abs() < TANGENCY_TOL || (rho + cos_r).abs() < TANGENCY_TOL {
                return Err(Error::DegenerateTangency);
            }
            if cos_r > rho {
                0
            } else if cos_r < -rho {
                1 + if d % 2 == 0 { 1 } else { -1 }
            } else {
                1
            }
        };
        total += w * chi;
    }
    Ok(total)
}

/// Monte Carlo Crofton estimate with the number of tangent subspheres redrawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CroftonEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub resamples: u64,
}

/// `nu_i(phi) = ∫ χ(phi|_E) dE` over invariant random `(3 - i)`-subspheres.
/// `nu_0` is the Euler integral and is returned exactly.
pub fn crofton_valuation(i: usize, phi: &BallCF, samples: usize, seed: u64) -> Result<CroftonEstimate> {
    if i > 3 {
        return Err(Error::OutOfRange {
            value: i as f64,
            range: "{0, 1, 2, 3}",
        });
    }
    if i == 0 {
        return Ok(CroftonEstimate {
            estimate: phi.euler_integral() as f64,
            std_error: 0.0,
            resamples: 0,
        });
    }
    if samples == 0 {
        return Err(Error::InvalidSampleCount);
    }
    let tag = format!("{CROFTON_TAG}-{i}");
    let draws = par::map_indexed(samples, |j| -> Result<(f64, u64)> {
        let mut r = rng::stream(seed, &tag, j as u64);
        let mut redrawn = 0;
        loop {
            let e = sample_subsphere(3 - i, &mut r)?;
            match euler_integral_on_subsphere(phi, &e) {
                Ok(v) => return Ok((v as f64, redrawn)),
                Err(Error::DegenerateTangency) => redrawn += 1,
                Err(err) => return Err(err),
            }
        }
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let (estimate, std_error) = par::mean_se(&values);
    Ok(CroftonEstimate {
        estimate,
        std_error,
        resamples: draws.iter().map(|d| d.1).sum(),
    })
}
