use std::f64::consts::{FRAC_PI_4, PI};

use super::{act, convolve_balls, crofton_valuation, f_closed, sample_so4, BallCF};
use crate::error::{Error, Result};
use crate::valuations::{solve_template, KinematicTensor};
use crate::{par, rng};

const PI_SQ: f64 = PI * PI;

/// Nonzero coefficients `d^i_{k,l}` (with `k <= l`, mirrored for `k > l`) of
/// the `SO(4)` kinematic formula on `S^3` in the basis `nu_0..nu_3`.
pub const S3_KINEMATIC_TABLE: &[(usize, usize, usize, f64)] = &[
    (0, 0, 0, 1.0),
    (1, 0, 1, 1.0),
    (1, 1, 2, -1.0),
    (1, 2, 3, 2.0),
    (2, 0, 2, 1.0),
    (2, 1, 1, PI_SQ / 8.0),
    (2, 1, 3, -PI_SQ / 4.0),
    (2, 2, 2, -2.0),
    (2, 3, 3, PI_SQ / 2.0),
    (3, 0, 3, 1.0),
    (3, 1, 2, 0.5),
    (3, 2, 3, -1.0),
];

pub fn table_tensor() -> KinematicTensor {
    let mut entries = vec![vec![vec![0.0; 4]; 4]; 4];
    for &(i, k, l, v) in S3_KINEMATIC_TABLE {
        entries[i][k][l] = v;
        entries[i][l][k] = v;
    }
    KinematicTensor {
        order: 4,
        basis: "nu_0..nu_3".into(),
        entries,
        residual: 0.0,
    }
}

fn check_grid(grid: &[(f64, f64)]) -> Result<()> {
    for &(r, s) in grid {
        for v in [r, s] {
            if !(v > 0.0 && v < FRAC_PI_4) {
                return Err(Error::OutOfRange {
                    value: v,
                    range: "(0, pi/4)",
                });
            }
        }
    }
    Ok(())
}

/// Max over the grid of `|f_i(r+s) - sum d^i_{k,l} f_k(r) f_l(s)|`, per row `i`.
pub fn verify_m_table(grid: &[(f64, f64)]) -> Result<[f64; 4]> {
    check_grid(grid)?;
    let t = table_tensor();
    let mut out = [0.0f64; 4];
    for &(r, s) in grid {
        let fr: Vec<f64> = (0..4).map(|k| f_closed(k, r)).collect::<Result<_>>()?;
        let fs: Vec<f64> = (0..4).map(|k| f_closed(k, s)).collect::<Result<_>>()?;
        for (i, slot) in out.iter_mut().enumerate() {
            let mut rhs = 0.0;
            for k in 0..4 {
                for l in 0..4 {
                    rhs += t.entries[i][k][l] * fr[k] * fs[l];
                }
            }
            *slot = slot.max((f_closed(i, r + s)? - rhs).abs());
        }
    }
    Ok(out)
}

/// Fits the tensor from the closed-form ball values alone.
pub fn recover_d(grid: &[(f64, f64)]) -> Result<KinematicTensor> {
    check_grid(grid)?;
    let mut t = solve_template(4, |k, r| f_closed(k, r).expect("grid checked"), grid)?;
    t.basis = "nu_0..nu_3".into();
    Ok(t)
}

/// `nu_i(phi) = sum_j w_j f_i(r_j)`; needs every radius at most `pi/2`.
pub fn ball_cf_valuation(i: usize, phi: &BallCF) -> Result<f64> {
    phi.terms().iter().map(|(w, b)| Ok(*w as f64 * f_closed(i, b.radius())?)).sum()
}

/// `nu_i(phi1 * g_* phi2)` in closed form; it does not depend on `g`.
pub fn kinematic_lhs_closed(phi1: &BallCF, phi2: &BallCF, i: usize) -> Result<f64> {
    ball_cf_valuation(i, &convolve_balls(phi1, phi2)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KinematicEstimate {
    pub lhs: f64,
    pub lhs_se: f64,
    pub rhs: f64,
    pub resamples: u64,
}

pub const SO4_TAG: &str = "so4";

/// Left side by sampling `g` and estimating `nu_i(phi1 * g_* phi2)` by Crofton
/// Monte Carlo; right side from the table and the closed-form `nu_k` of the factors.
pub fn mc_kinematic_s3(
    phi1: &BallCF,
    phi2: &BallCF,
    i: usize,
    n_g: usize,
    n_crofton: usize,
    seed: u64,
) -> Result<KinematicEstimate> {
    if n_g == 0 {
        return Err(Error::InvalidSampleCount);
    }
    let t = table_tensor();
    let nu1: Vec<f64> = (0..4).map(|k| ball_cf_valuation(k, phi1)).collect::<Result<_>>()?;
    let nu2: Vec<f64> = (0..4).map(|k| ball_cf_valuation(k, phi2)).collect::<Result<_>>()?;
    let mut rhs = 0.0;
    for k in 0..4 {
        for l in 0..4 {
            rhs += t.get(i, k, l) * nu1[k] * nu2[l];
        }
    }
    let per_g = par::map_indexed(n_g, |j| -> Result<(f64, u64)> {
        let g = sample_so4(&mut rng::stream(seed, SO4_TAG, j as u64));
        let conv = convolve_balls(phi1, &act(&g, phi2))?;
        let est = crofton_valuation(i, &conv, n_crofton, rng::child_seed(seed, SO4_TAG, j as u64))?;
        Ok((est.estimate, est.resamples))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = per_g.iter().map(|p| p.0).collect();
    let (lhs, lhs_se) = par::mean_se(&values);
    Ok(KinematicEstimate {
        lhs,
        lhs_se,
        rhs,
        resamples: per_g.iter().map(|p| p.1).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere3::{GeodesicBall, UnitQuaternion};
    use crate::valuations::square_grid;
    use std::f64::consts::FRAC_PI_6;

    #[test]
    fn row_zero_and_sixth_turn() {
        let res = verify_m_table(&[(FRAC_PI_6, FRAC_PI_6)]).unwrap();
        assert_eq!(res[0], 0.0);
        assert!(res[3] <= 1e-10);
        assert!((f_closed(3, 2.0 * FRAC_PI_6).unwrap() - 0.195_501_109_477_885).abs() < 1e-12);
    }

    #[test]
    fn recovery_matches_table() {
        let t = recover_d(&square_grid(15, 15, 0.01, FRAC_PI_4 - 0.01)).unwrap();
        assert!((t.get(2, 1, 1) - PI_SQ / 8.0).abs() < 1e-6);
        assert!((t.get(1, 2, 3) - 2.0).abs() < 1e-6);
        assert!((t.get(3, 1, 2) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn single_ball_kinematic_is_deterministic() {
        let b1 = BallCF::ball(GeodesicBall::new(UnitQuaternion::from_array([1.0, 2.0, 0.0, 0.0]).unwrap(), 0.4).unwrap());
        let b2 = BallCF::ball(GeodesicBall::new(UnitQuaternion::from_array([0.0, 0.0, 1.0, 1.0]).unwrap(), 0.3).unwrap());
        let lhs = kinematic_lhs_closed(&b1, &b2, 2).unwrap();
        assert!((lhs - 0.7f64.sin().powi(2)).abs() < 1e-15);
        assert!((lhs - 0.415_016_428_549_879).abs() < 1e-12);
        let est = mc_kinematic_s3(&b1, &b2, 2, 2, 10, 5).unwrap();
        assert!((est.rhs - lhs).abs() < 1e-10);
        let est = mc_kinematic_s3(&b1, &b2, 0, 3, 10, 5).unwrap();
        assert_eq!((est.lhs, est.lhs_se, est.rhs), (1.0, 0.0, 1.0));
    }
}
