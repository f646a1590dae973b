//! Intrinsic volumes of polytopes and constructible functions, Haar rotations,
//! and the flat additive kinematic harness.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::float_geom::{FloatCF, FloatPolytope, FloatPolytopeCombination};
use crate::par;
use crate::polytope::{ConvexPolytope, PolytopeCombination};
use crate::rng;
use crate::StratifiedCF;

/// `V_0..V_n` of a body in `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicVolumeVector {
    pub values: Vec<f64>,
}

impl IntrinsicVolumeVector {
    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }
}

/// Coefficients `c[i][k][l]` of `mu_i(A * B) = sum_{k,l} c[i][k][l] mu_k(A) mu_l(B)`
/// in a named basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KinematicTensor {
    pub order: usize,
    pub basis: String,
    pub entries: Vec<Vec<Vec<f64>>>,
    /// Max absolute residual of the defining system, when the tensor was fitted.
    pub residual: f64,
}

impl KinematicTensor {
    pub fn get(&self, i: usize, k: usize, l: usize) -> f64 {
        self.entries[i][k][l]
    }
}

/// Normalized external angle of `P` at the face spanned by `face` (vertices of `P`).
pub fn external_angle(p: &ConvexPolytope, face: &[crate::Point]) -> Result<f64> {
    let fp = FloatPolytope::from_exact(p);
    let idx = face
        .iter()
        .map(|v| p.vertices().iter().position(|w| w == v).ok_or(Error::NotAFace))
        .collect::<Result<Vec<usize>>>()?;
    fp.external_angle(&idx)
}

pub fn intrinsic_volumes(p: &ConvexPolytope) -> IntrinsicVolumeVector {
    IntrinsicVolumeVector {
        values: FloatPolytope::from_exact(p).intrinsic_volumes(),
    }
}

/// Anything that expands into a float polytope combination.
pub trait ValuationInput {
    fn float_combination(&self) -> FloatPolytopeCombination;
}

impl ValuationInput for FloatPolytopeCombination {
    fn float_combination(&self) -> FloatPolytopeCombination {
        self.clone()
    }
}

impl ValuationInput for PolytopeCombination {
    fn float_combination(&self) -> FloatPolytopeCombination {
        self.into()
    }
}

impl ValuationInput for StratifiedCF {
    fn float_combination(&self) -> FloatPolytopeCombination {
        (&self.to_polytope_combination()).into()
    }
}

impl ValuationInput for FloatCF {
    fn float_combination(&self) -> FloatPolytopeCombination {
        self.to_polytope_combination()
    }
}

/// `mu_k(phi) = sum_i m_i V_k(P_i)`.
pub fn evaluate_valuation<T: ValuationInput + ?Sized>(k: usize, phi: &T) -> f64 {
    combination_valuation(k, &phi.float_combination())
}

fn combination_valuation(k: usize, pc: &FloatPolytopeCombination) -> f64 {
    pc.terms()
        .iter()
        .map(|(m, p)| *m as f64 * p.intrinsic_volumes().get(k).copied().unwrap_or(0.0))
        .sum()
}

/// Haar-distributed rotation of `R^n`, `n` in {2, 3}, as rows.
pub fn haar_rotation<R: Rng>(n: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    match n {
        2 => {
            let t: f64 = rng.random::<f64>() * 2.0 * PI;
            let (s, c) = t.sin_cos();
            Ok(vec![vec![c, -s], vec![s, c]])
        }
        3 => {
            let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let l = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            let [w, x, y, z] = q.map(|v| v / l);
            Ok(vec![
                vec![1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
                vec![2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
                vec![2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
            ])
        }
        _ => Err(Error::InvalidArgument(format!("Haar rotations are provided for n = 2, 3, not {n}"))),
    }
}

pub const FLAT_KINEMATIC_TAG: &str = "flat-kinematic";

/// Monte Carlo mean and standard error of `mu_i(phi1 * g_* phi2)` over Haar rotations `g`.
pub fn rotation_average_convolution(
    phi1: &PolytopeCombination,
    phi2: &PolytopeCombination,
    i: usize,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidSampleCount);
    }
    let n = phi1.ambient_dim();
    if phi2.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: phi2.ambient_dim(),
        });
    }
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("rotation averages need n = 2, 3, not {n}")));
    }
    let a = FloatPolytopeCombination::from(phi1);
    let b = FloatPolytopeCombination::from(phi2);
    let zero = vec![0.0; n];
    let values = par::map_indexed(samples, |j| -> Result<f64> {
        let mut r = rng::stream(seed, FLAT_KINEMATIC_TAG, j as u64);
        let rot = haar_rotation(n, &mut r)?;
        Ok(combination_valuation(i, &a.convolve(&b.transform(&rot, &zero))?))
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(par::mean_se(&values))
}

/// Fits `f_i(r + s) = sum_{k,l} d^i_{k,l} f_k(r) f_l(s)` with `d^i` symmetric,
/// by least squares over `grid`, for `i, k, l < order`.
pub fn solve_template(order: usize, f: impl Fn(usize, f64) -> f64, grid: &[(f64, f64)]) -> Result<KinematicTensor> {
    let pairs: Vec<(usize, usize)> = (0..order).flat_map(|k| (k..order).map(move |l| (k, l))).collect();
    let unknowns = pairs.len();
    let a = DMatrix::from_fn(grid.len(), unknowns, |row, col| {
        let (r, s) = grid[row];
        let (k, l) = pairs[col];
        if k == l {
            f(k, r) * f(k, s)
        } else {
            f(k, r) * f(l, s) + f(l, r) * f(k, s)
        }
    });
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > smax * 1e-13).count();
    let mut entries = vec![vec![vec![0.0; order]; order]; order];
    let mut residual = 0.0f64;
    for (i, entry) in entries.iter_mut().enumerate() {
        let b = DVector::from_fn(grid.len(), |row, _| f(i, grid[row].0 + grid[row].1));
        let x = svd.solve(&b, smax * 1e-13).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        residual = residual.max((&a * &x - &b).amax());
        for (col, &(k, l)) in pairs.iter().enumerate() {
            entry[k][l] = x[col];
            entry[l][k] = x[col];
        }
    }
    if grid.len() < unknowns || rank < unknowns {
        return Err(Error::RankDeficientSystem {
            rank,
            unknowns,
            residual,
        });
    }
    Ok(KinematicTensor {
        order,
        basis: String::new(),
        entries,
        residual,
    })
}

/// Volume of the unit ball in `R^n`, `n <= 3`.
pub fn unit_ball_volume(n: usize) -> f64 {
    [1.0, 2.0, PI, 4.0 * PI / 3.0][n]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `V_k(B^n_r)`.
pub fn ball_intrinsic_volume(n: usize, k: usize, r: f64) -> f64 {
    binomial(n, k) * unit_ball_volume(n) / unit_ball_volume(n - k) * r.powi(k as i32)
}

/// Flat kinematic constants for `SO(n)` in the intrinsic-volume basis, fitted
/// from Euclidean balls.
pub fn flat_kinematic_tensor(n: usize, grid: &[(f64, f64)]) -> Result<KinematicTensor> {
    let mut t = solve_template(n + 1, |k, r| ball_intrinsic_volume(n, k, r), grid)?;
    t.basis = format!("V_0..V_{n}");
    Ok(t)
}

/// Uniform `nr x ns` grid on `[lo, hi]^2`.
pub fn square_grid(nr: usize, ns: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let at = |j: usize, m: usize| if m == 1 { lo } else { lo + (hi - lo) * j as f64 / (m - 1) as f64 };
    (0..nr).flat_map(|a| (0..ns).map(move |b| (at(a, nr), at(b, ns)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::point;

    #[test]
    fn disk_template() {
        let t = flat_kinematic_tensor(2, &square_grid(8, 8, 0.1, 2.0)).unwrap();
        assert!((t.get(2, 1, 1) - 2.0 / PI).abs() < 1e-10);
        assert!((t.get(2, 0, 2) - 1.0).abs() < 1e-10);
        assert!((t.get(1, 0, 1) - 1.0).abs() < 1e-10);
        assert!((t.get(0, 0, 0) - 1.0).abs() < 1e-10);
        assert!(t.residual < 1e-10);
    }

    #[test]
    fn too_small_grid_is_rank_deficient() {
        let e = flat_kinematic_tensor(2, &square_grid(2, 2, 0.1, 1.0)).unwrap_err();
        assert!(matches!(e, Error::RankDeficientSystem { .. }));
    }

    #[test]
    fn square_valuations() {
        let sq = ConvexPolytope::cuboid(&point(&[0, 0]), &point(&[1, 1]));
        assert_eq!(intrinsic_volumes(&sq).values, vec![1.0, 2.0, 1.0]);
        let v = point(&[0, 0]);
        assert_eq!(external_angle(&sq, &[v.clone()]).unwrap(), 0.25);
        assert_eq!(external_angle(&sq, &sq.vertices().to_vec()).unwrap(), 1.0);
        let boundary = StratifiedCF::indicator(&sq).canonicalize();
        let inner = crate::cf::combine(&[(1, boundary.clone())]);
        assert_eq!(evaluate_valuation(0, &inner), 1.0);
    }

    #[test]
    fn zero_samples_rejected() {
        let sq = PolytopeCombination::single(ConvexPolytope::cuboid(&point(&[0, 0]), &point(&[1, 1])));
        assert!(matches!(
            rotation_average_convolution(&sq, &sq, 2, 0, 1),
            Err(Error::InvalidSampleCount)
        ));
        let (m, se) = rotation_average_convolution(&sq, &sq, 0, 50, 1).unwrap();
        assert_eq!((m, se), (1.0, 0.0));
    }

    #[test]
    fn haar_is_orthogonal() {
        let mut r = rng::stream(3, "t", 0);
        for n in [2, 3] {
            let m = haar_rotation(n, &mut r).unwrap();
            let m = DMatrix::from_fn(n, n, |i, j| m[i][j]);
            assert!((m.transpose() * &m - DMatrix::identity(n, n)).amax() < 1e-12);
            assert!((m.determinant() - 1.0).abs() < 1e-12);
        }
    }
}
