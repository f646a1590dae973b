//! Exterior product, pullback, slicing, pushforward along affine maps and
//! convolution of constructible functions.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::cf::{build_from_oracle, from_polytopes, padded_box, StratifiedCF};
use crate::complex::MAX_DIM;
use crate::error::{Error, Result};
use crate::float_geom::FloatCF;
use crate::linalg;
use crate::polytope::{self, ConvexPolytope, Hyperplane, PolytopeCombination};
use crate::scalar::{self, ExactScalar, Point};

/// `x -> linear * x + translation` from `R^source_dim` to `R^target_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    source_dim: usize,
    target_dim: usize,
    linear: Vec<Point>,
    translation: Point,
    rank: usize,
}

impl AffineMap {
    /// `linear` has `target_dim` rows of length `source_dim`.
    pub fn new(source_dim: usize, linear: Vec<Point>, translation: Point) -> Result<Self> {
        let target_dim = translation.len();
        if linear.len() != target_dim {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                found: linear.len(),
            });
        }
        if let Some(row) = linear.iter().find(|r| r.len() != source_dim) {
            return Err(Error::DimensionMismatch {
                expected: source_dim,
                found: row.len(),
            });
        }
        let rank = linalg::rank(&linear);
        Ok(Self {
            source_dim,
            target_dim,
            linear,
            translation,
            rank,
        })
    }

    pub fn identity(n: usize) -> Self {
        let linear = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect())
            .collect();
        Self::new(n, linear, vec![ExactScalar::zero(); n]).unwrap()
    }

    /// Keeps the listed coordinates, in order.
    pub fn coordinate_projection(n: usize, keep: &[usize]) -> Self {
        let linear = keep
            .iter()
            .map(|&k| (0..n).map(|j| if j == k { ExactScalar::one() } else { ExactScalar::zero() }).collect())
            .collect();
        Self::new(n, linear, vec![ExactScalar::zero(); keep.len()]).unwrap()
    }

    /// Group operation of `R^n`: `(x, y) -> x + y` on `R^n x R^n`.
    pub fn addition(n: usize) -> Self {
        let linear = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| if j % n == i { ExactScalar::one() } else { ExactScalar::zero() })
                    .collect()
            })
            .collect();
        Self::new(2 * n, linear, vec![ExactScalar::zero(); n]).unwrap()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn linear(&self) -> &[Point] {
        &self.linear
    }

    pub fn translation(&self) -> &[ExactScalar] {
        &self.translation
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_surjective(&self) -> bool {
        self.rank == self.target_dim
    }

    pub fn is_injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn apply(&self, x: &[ExactScalar]) -> Point {
        self.linear
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| scalar::dot(row, x) + t)
            .collect()
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &AffineMap) -> Result<AffineMap> {
        if then.source_dim != self.target_dim {
            return Err(Error::DimensionMismatch {
                expected: self.target_dim,
                found: then.source_dim,
            });
        }
        let linear = then
            .linear
            .iter()
            .map(|row| {
                (0..self.source_dim)
                    .map(|j| {
                        row.iter()
                            .zip(&self.linear)
                            .fold(ExactScalar::zero(), |acc, (a, r)| acc + a * &r[j])
                    })
                    .collect()
            })
            .collect();
        let translation = then.apply(&self.translation);
        AffineMap::new(self.source_dim, linear, translation)
    }

    /// `f^{-1}(H)` as a hyperplane of the source, or `None` when `f^{-1}(H)`
    /// is empty or everything.
    pub fn preimage(&self, h: &Hyperplane) -> Option<Hyperplane> {
        let normal: Point = (0..self.source_dim)
            .map(|j| {
                h.normal
                    .iter()
                    .zip(&self.linear)
                    .fold(ExactScalar::zero(), |acc, (a, r)| acc + a * &r[j])
            })
            .collect();
        let offset = &h.offset - scalar::dot(&h.normal, &self.translation);
        Hyperplane::new(normal, offset)
    }
}

/// `base + span(basis)` inside `R^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    ambient_dim: usize,
    base_point: Point,
    direction_basis: Vec<Point>,
}

impl AffineSubspace {
    pub fn new(base_point: Point, direction_basis: Vec<Point>) -> Result<Self> {
        let n = base_point.len();
        if let Some(d) = direction_basis.iter().find(|d| d.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d.len(),
            });
        }
        if linalg::rank(&direction_basis) != direction_basis.len() {
            return Err(Error::InvalidArgument("direction basis is linearly dependent".into()));
        }
        Ok(Self {
            ambient_dim: n,
            base_point,
            direction_basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.direction_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// `t -> base + sum_i t_i basis_i`.
    pub fn embedding(&self) -> AffineMap {
        let k = self.dim();
        let linear = (0..self.ambient_dim)
            .map(|j| (0..k).map(|i| self.direction_basis[i][j].clone()).collect())
            .collect();
        AffineMap::new(k, linear, self.base_point.clone()).unwrap()
    }

    /// Coordinates of the orthogonal projection of `x` onto the subspace.
    pub fn coordinates(&self, x: &[ExactScalar]) -> Point {
        let k = self.dim();
        let d = scalar::sub(x, &self.base_point);
        let gram: Vec<Point> = (0..k)
            .map(|i| (0..k).map(|j| scalar::dot(&self.direction_basis[i], &self.direction_basis[j])).collect())
            .collect();
        let rhs: Vec<ExactScalar> = self.direction_basis.iter().map(|b| scalar::dot(b, &d)).collect();
        linalg::solve(&gram, &rhs).expect("basis is independent")
    }
}

fn check_cap(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::DimensionCapExceeded(dim))
    } else {
        Ok(())
    }
}

fn eval_cells(cells: &[(i64, ConvexPolytope)], x: &[ExactScalar]) -> i64 {
    cells
        .iter()
        .find(|(_, p)| p.contains_relint(x))
        .map(|(w, _)| *w)
        .unwrap_or(0)
}

/// `(phi ⊠ psi)(x, y) = phi(x) psi(y)` on `R^{a+b}`.
pub fn exterior_product(phi: &StratifiedCF, psi: &StratifiedCF) -> Result<StratifiedCF> {
    let (a, b) = (phi.ambient_dim(), psi.ambient_dim());
    check_cap(a + b)?;
    let ca = phi.weighted_cells();
    let cb = psi.weighted_cells();
    let (Some((alo, ahi)), Some((blo, bhi))) = (phi.bbox(), psi.bbox()) else {
        return Ok(StratifiedCF::zero(a + b));
    };
    let zeros = |k: usize| vec![ExactScalar::zero(); k];
    let mut planes: Vec<Hyperplane> = Vec::new();
    for (_, p) in &ca {
        for h in p.supporting_hyperplanes() {
            let normal = h.normal.iter().cloned().chain(zeros(b)).collect();
            planes.extend(Hyperplane::new(normal, h.offset.clone()));
        }
    }
    for (_, p) in &cb {
        for h in p.supporting_hyperplanes() {
            let normal = zeros(a).into_iter().chain(h.normal.iter().cloned()).collect();
            planes.extend(Hyperplane::new(normal, h.offset.clone()));
        }
    }
    let lo: Point = alo.into_iter().chain(blo).collect();
    let hi: Point = ahi.into_iter().chain(bhi).collect();
    let bounds = padded_box([(lo, hi)].iter(), a + b);
    let (_, mut cfs) = build_from_oracle(a + b, planes, bounds, 1, |x| {
        vec![eval_cells(&ca, &x[..a]) * eval_cells(&cb, &x[a..])]
    });
    Ok(cfs.pop().unwrap().canonicalize())
}

/// `(psi ∘ f) * 1_window`, or just `psi ∘ f` on the given bounds.
fn pull_back_cells(psi: &StratifiedCF, f: &AffineMap, window: Option<&ConvexPolytope>, bounds: Option<(Point, Point)>) -> StratifiedCF {
    let n = f.source_dim();
    let cells = psi.weighted_cells();
    let mut planes: Vec<Hyperplane> = cells
        .iter()
        .flat_map(|(_, p)| p.supporting_hyperplanes().filter_map(|h| f.preimage(h)).collect::<Vec<_>>())
        .collect();
    if let Some(w) = window {
        planes.extend(w.supporting_hyperplanes().cloned());
    }
    let (_, mut cfs) = build_from_oracle(n, planes, bounds, 1, |x| {
        if window.is_some_and(|w| !w.contains(x)) {
            return vec![0];
        }
        vec![eval_cells(&cells, &f.apply(x))]
    });
    cfs.pop().unwrap().canonicalize()
}

/// `(psi ∘ f) * 1_window` for an affine `f: R^n -> R^m` and a bounded window in `R^n`.
pub fn pullback(psi: &StratifiedCF, f: &AffineMap, window: &ConvexPolytope) -> Result<StratifiedCF> {
    if psi.ambient_dim() != f.target_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.target_dim(),
            found: psi.ambient_dim(),
        });
    }
    if window.ambient_dim() != f.source_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.source_dim(),
            found: window.ambient_dim(),
        });
    }
    check_cap(f.source_dim())?;
    if psi.is_zero() {
        return Ok(StratifiedCF::zero(f.source_dim()));
    }
    let bounds = padded_box([window.bbox()].iter(), f.source_dim());
    Ok(pull_back_cells(psi, f, Some(window), bounds))
}

/// Restriction of `cf` to `l`, in the coordinates of `l`'s basis.
pub fn slice(cf: &StratifiedCF, l: &AffineSubspace) -> Result<StratifiedCF> {
    if l.ambient_dim() != cf.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: cf.ambient_dim(),
            found: l.ambient_dim(),
        });
    }
    let k = l.dim();
    let cells = cf.weighted_cells();
    if cells.is_empty() {
        return Ok(StratifiedCF::zero(k));
    }
    // The slice of a cell lies in the projection of the cell onto l.
    let projected: Vec<Point> = cells
        .iter()
        .flat_map(|(_, p)| p.vertices().iter().map(|v| l.coordinates(v)))
        .collect();
    let bounds = if k == 0 {
        None
    } else {
        padded_box([polytope::bbox(projected.iter())].iter(), k)
    };
    Ok(pull_back_cells(cf, &l.embedding(), None, bounds))
}

/// Pushforward along an affine map: `f_*phi(y) = ∫ 1_{f^{-1}(y)} phi dχ`.
///
/// Each weighted open simplex `s` contributes `(-1)^{dim s - dim f(s)}` times
/// the indicator of the relative interior of its image, since every nonempty
/// fiber of `s` is a relatively open convex cell of that dimension.
pub fn pushforward(phi: &StratifiedCF, f: &AffineMap) -> Result<StratifiedCF> {
    if phi.ambient_dim() != f.source_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.source_dim(),
            found: phi.ambient_dim(),
        });
    }
    let m = f.target_dim();
    check_cap(m)?;
    let images: Vec<(i64, ConvexPolytope)> = phi
        .weighted_cells()
        .into_iter()
        .map(|(w, p)| {
            let pts: Vec<Point> = p.vertices().iter().map(|v| f.apply(v)).collect();
            let img = ConvexPolytope::from_points(m, &pts).expect("image of a simplex is nonempty");
            let sign = if (p.dim() - img.dim()) % 2 == 0 { 1 } else { -1 };
            (sign * w, img)
        })
        .collect();
    if images.is_empty() {
        return Ok(StratifiedCF::zero(m));
    }
    Ok(open_cells_to_cf(m, &images))
}

/// `sum_i m_i 1_{relint P_i}` as a canonical CF (cells may overlap).
pub fn from_open_cells(dim: usize, cells: &[(i64, ConvexPolytope)]) -> StratifiedCF {
    open_cells_to_cf(dim, cells)
}

fn open_cells_to_cf(dim: usize, cells: &[(i64, ConvexPolytope)]) -> StratifiedCF {
    let planes: Vec<Hyperplane> = cells
        .iter()
        .flat_map(|(_, p)| p.supporting_hyperplanes().cloned())
        .collect();
    let boxes: Vec<(Point, Point)> = cells.iter().map(|(_, p)| p.bbox()).collect();
    let bounds = padded_box(boxes.iter(), dim);
    let (_, mut cfs) = build_from_oracle(dim, planes, bounds, 1, |y| {
        vec![cells
            .iter()
            .filter(|(_, p)| p.contains_relint(y))
            .map(|(w, _)| *w)
            .sum()]
    });
    cfs.pop().unwrap().canonicalize()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionMethod {
    /// `sum_{i,j} m_i n_j 1_{P_i + Q_j}` over polytope decompositions.
    ConvexBilinear,
    /// `a_*(phi ⊠ psi)` with `a` the addition map; needs the product space within the cap.
    BruteForce,
}

/// Bilinear Minkowski expansion of two polytope combinations.
pub fn convolve_combinations(p: &PolytopeCombination, q: &PolytopeCombination) -> Result<PolytopeCombination> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q.ambient_dim(),
        });
    }
    let mut terms = Vec::with_capacity(p.terms().len() * q.terms().len());
    for (m, a) in p.terms() {
        for (n, b) in q.terms() {
            terms.push((m * n, polytope::minkowski_sum(a, b)?));
        }
    }
    PolytopeCombination::new(p.ambient_dim(), terms)
}

pub fn convolve(phi: &StratifiedCF, psi: &StratifiedCF, method: ConvolutionMethod) -> Result<StratifiedCF> {
    let n = phi.ambient_dim();
    if psi.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi.ambient_dim(),
        });
    }
    match method {
        ConvolutionMethod::ConvexBilinear => {
            let pc = convolve_combinations(&phi.to_polytope_combination(), &psi.to_polytope_combination())?;
            if pc.is_empty() {
                return Ok(StratifiedCF::zero(n));
            }
            Ok(from_polytopes(&pc))
        }
        ConvolutionMethod::BruteForce => {
            check_cap(2 * n)?;
            let prod = exterior_product(phi, psi)?;
            pushforward(&prod, &AffineMap::addition(n))
        }
    }
}

const ORTHOGONALITY_TOL: f64 = 1e-12;

pub fn check_orthogonal(r: &DMatrix<f64>) -> Result<()> {
    if !r.is_square() {
        return Err(Error::NotOrthogonal(f64::INFINITY));
    }
    let dev = (r.transpose() * r - DMatrix::identity(r.nrows(), r.ncols())).amax();
    if dev > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal(dev));
    }
    Ok(())
}

/// `g_* cf` for `g(x) = R x + t`; vertices become floats, combinatorics unchanged.
pub fn rigid_motion_apply(r: &DMatrix<f64>, t: &[f64], cf: &StratifiedCF) -> Result<FloatCF> {
    check_orthogonal(r)?;
    let n = cf.ambient_dim();
    if r.nrows() != n || t.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r.nrows(),
        });
    }
    let c = cf.complex();
    let vertices = c
        .vertices()
        .iter()
        .map(|v| {
            let x = scalar::point_to_f64(v);
            (0..n)
                .map(|i| (0..n).map(|j| r[(i, j)] * x[j]).sum::<f64>() + t[i])
                .collect()
        })
        .collect();
    let weights: BTreeMap<usize, i64> = cf.weights().clone();
    Ok(FloatCF::new(n, vertices, c.simplices().to_vec(), weights))
}
