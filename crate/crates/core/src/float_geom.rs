//! Floating-point convex polytopes (dimension at most 3) and float-valued
//! images of constructible functions under rigid motions.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use crate::complex::faces_of;
use crate::error::{Error, Result};
use crate::polytope::{ConvexPolytope, PolytopeCombination};

const REL_TOL: f64 = 1e-9;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the strictly convex hull vertices of planar points, counterclockwise.
fn hull2(points: &[Vec<f64>], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap());
    if idx.len() < 3 {
        return idx;
    }
    let mut chain: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = chain.len();
        let order: Vec<usize> = if pass == 0 { idx.clone() } else { idx.iter().rev().copied().collect() };
        for &i in &order {
            while chain.len() >= start + 2 {
                let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
                let scale = norm(&sub(&points[b], &points[a])).max(norm(&sub(&points[i], &points[a])));
                if cross2(&points[a], &points[b], &points[i]) <= tol * scale {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(i);
        }
        chain.pop();
    }
    chain
}

#[derive(Clone, Debug)]
struct Facet3 {
    normal: [f64; 3],
    offset: f64,
    /// Counterclockwise seen from outside.
    cycle: Vec<usize>,
}

#[derive(Clone, Debug)]
enum Shape {
    Point,
    Segment,
    /// Counterclockwise vertex order.
    Polygon(Vec<usize>),
    Solid(Vec<Facet3>),
}

/// Convex hull of finitely many points, stored in orthonormal coordinates of
/// its affine hull.
#[derive(Clone, Debug)]
pub struct FloatPolytope {
    ambient_dim: usize,
    vertices: Vec<Vec<f64>>,
    local: Vec<Vec<f64>>,
    shape: Shape,
}

impl FloatPolytope {
    pub fn from_points(ambient_dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        if let Some(p) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: p.len(),
            });
        }
        if ambient_dim > 3 {
            return Err(Error::DimensionCapExceeded(ambient_dim));
        }
        let origin = points[0].clone();
        let diam = points.iter().map(|p| norm(&sub(p, &origin))).fold(0.0, f64::max);
        let tol = REL_TOL * diam.max(1.0);
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for p in points {
            let mut d = sub(p, &origin);
            for b in &basis {
                let c = dot(&d, b);
                d.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let l = norm(&d);
            if l > tol {
                basis.push(d.iter().map(|x| x / l).collect());
            }
        }
        let local: Vec<Vec<f64>> = points
            .iter()
            .map(|p| {
                let d = sub(p, &origin);
                basis.iter().map(|b| dot(&d, b)).collect()
            })
            .collect();
        let (keep, shape) = match basis.len() {
            0 => (vec![0], Shape::Point),
            1 => {
                let lo = (0..local.len()).min_by(|&a, &b| local[a][0].total_cmp(&local[b][0])).unwrap();
                let hi = (0..local.len()).max_by(|&a, &b| local[a][0].total_cmp(&local[b][0])).unwrap();
                (vec![lo, hi], Shape::Segment)
            }
            2 => {
                let h = hull2(&local, tol);
                let n = h.len();
                (h, Shape::Polygon((0..n).collect()))
            }
            _ => solid_hull(&local, tol),
        };
        Ok(Self {
            ambient_dim,
            vertices: keep.iter().map(|&i| points[i].clone()).collect(),
            local: keep.iter().map(|&i| local[i].clone()).collect(),
            shape,
        })
    }

    pub fn from_exact(p: &ConvexPolytope) -> Self {
        Self::from_points(p.ambient_dim(), &p.to_f64_vertices()).expect("exact polytope is valid")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        match self.shape {
            Shape::Point => 0,
            Shape::Segment => 1,
            Shape::Polygon(_) => 2,
            Shape::Solid(_) => 3,
        }
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// `vol_d` in the polytope's own dimension `d`.
    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Point => 1.0,
            Shape::Segment => (self.local[1][0] - self.local[0][0]).abs(),
            Shape::Polygon(c) => polygon_area(&self.local, c),
            Shape::Solid(facets) => {
                let refs: Vec<&[f64]> = self.local.iter().map(|v| v.as_slice()).collect();
                let c = mean(&refs);
                facets
                    .iter()
                    .map(|f| solid_facet_area(&self.local, f) * (f.offset - dot(&f.normal, &c)) / 3.0)
                    .sum()
            }
        }
    }

    /// Classical intrinsic volumes `V_0..V_ambient_dim`, as the sum over
    /// `k`-faces of `vol_k(F)` times the normalized external angle at `F`.
    pub fn intrinsic_volumes(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.ambient_dim + 1];
        v[0] = 1.0;
        let d = self.dim();
        if d >= 1 {
            v[d] = self.volume();
        }
        match &self.shape {
            Shape::Polygon(c) => v[1] = perimeter(&self.local, c) / 2.0,
            Shape::Solid(facets) => {
                v[2] = facets.iter().map(|f| solid_facet_area(&self.local, f)).sum::<f64>() / 2.0;
                v[1] = solid_edges(facets)
                    .into_iter()
                    .map(|((a, b), (f, g))| {
                        let len = norm(&sub(&self.local[a], &self.local[b]));
                        len * normal_angle(&facets[f].normal, &facets[g].normal) / (2.0 * PI)
                    })
                    .sum();
            }
            _ => {}
        }
        v
    }

    /// Normalized external angle at the face spanned by the given vertex indices.
    pub fn external_angle(&self, face: &[usize]) -> Result<f64> {
        let face: BTreeSet<usize> = face.iter().copied().collect();
        if face.is_empty() || face.iter().any(|&i| i >= self.vertices.len()) {
            return Err(Error::NotAFace);
        }
        if face.len() == self.vertices.len() {
            return Ok(1.0);
        }
        match &self.shape {
            Shape::Point => Err(Error::NotAFace),
            Shape::Segment => Ok(0.5),
            Shape::Polygon(c) => {
                let n = c.len();
                match face.len() {
                    1 => {
                        let i = *face.iter().next().unwrap();
                        let pos = c.iter().position(|&x| x == i).unwrap();
                        let prev = &self.local[c[(pos + n - 1) % n]];
                        let next = &self.local[c[(pos + 1) % n]];
                        let a = sub(prev, &self.local[i]);
                        let b = sub(next, &self.local[i]);
                        let interior = (dot(&a, &b) / (norm(&a) * norm(&b))).clamp(-1.0, 1.0).acos();
                        Ok((PI - interior) / (2.0 * PI))
                    }
                    2 => {
                        let v: Vec<usize> = face.iter().copied().collect();
                        let adjacent = (0..n).any(|k| {
                            let (a, b) = (c[k], c[(k + 1) % n]);
                            (a == v[0] && b == v[1]) || (a == v[1] && b == v[0])
                        });
                        if adjacent {
                            Ok(0.5)
                        } else {
                            Err(Error::NotAFace)
                        }
                    }
                    _ => Err(Error::NotAFace),
                }
            }
            Shape::Solid(facets) => {
                if facets.iter().any(|f| f.cycle.iter().copied().collect::<BTreeSet<_>>() == face) {
                    return Ok(0.5);
                }
                match face.len() {
                    1 => {
                        let i = *face.iter().next().unwrap();
                        let normals: Vec<[f64; 3]> = facets
                            .iter()
                            .filter(|f| f.cycle.contains(&i))
                            .map(|f| f.normal)
                            .collect();
                        Ok(cone_solid_angle(&normals) / (4.0 * PI))
                    }
                    2 => {
                        let v: Vec<usize> = face.iter().copied().collect();
                        solid_edges(facets)
                            .into_iter()
                            .find(|((a, b), _)| *a == v[0] && *b == v[1])
                            .map(|(_, (f, g))| normal_angle(&facets[f].normal, &facets[g].normal) / (2.0 * PI))
                            .ok_or(Error::NotAFace)
                    }
                    _ => Err(Error::NotAFace),
                }
            }
        }
    }

    /// Closed membership with absolute tolerance `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance(x) <= tol
    }

    fn distance(&self, x: &[f64]) -> f64 {
        let origin = &self.vertices[0];
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| sub(v, origin)).collect();
        distance_to_hull(&pts, &sub(x, origin))
    }

    pub fn transform(&self, r: &[Vec<f64>], t: &[f64]) -> Self {
        let pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| (0..t.len()).map(|i| dot(&r[i], v) + t[i]).collect())
            .collect();
        Self::from_points(t.len(), &pts).expect("image of a polytope is nonempty")
    }

    pub fn scale(&self, s: f64) -> Self {
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| v.iter().map(|x| x * s).collect()).collect();
        Self::from_points(self.ambient_dim, &pts).expect("scaled polytope is nonempty")
    }
}

/// Euclidean distance from `x` to the convex hull of `pts`, by projecting onto
/// every simplex spanned by at most four of the points.
fn distance_to_hull(pts: &[Vec<f64>], x: &[f64]) -> f64 {
    let n = pts.len();
    let mut best = f64::INFINITY;
    let mut consider = |idx: &[usize]| {
        if let Some(d) = simplex_distance(idx.iter().map(|&i| pts[i].as_slice()).collect(), x) {
            best = best.min(d);
        }
    };
    for i in 0..n {
        consider(&[i]);
        for j in i + 1..n {
            consider(&[i, j]);
            for k in j + 1..n {
                consider(&[i, j, k]);
                for l in k + 1..n {
                    consider(&[i, j, k, l]);
                }
            }
        }
    }
    best
}

/// Distance to the simplex when the orthogonal projection falls inside it.
fn simplex_distance(v: Vec<&[f64]>, x: &[f64]) -> Option<f64> {
    let k = v.len() - 1;
    let e: Vec<Vec<f64>> = (1..=k).map(|i| sub(v[i], v[0])).collect();
    let d = sub(x, v[0]);
    let g = nalgebra::DMatrix::from_fn(k, k, |i, j| dot(&e[i], &e[j]));
    let rhs = nalgebra::DVector::from_fn(k, |i, _| dot(&e[i], &d));
    let lam = if k == 0 {
        nalgebra::DVector::zeros(0)
    } else {
        let lu = g.lu();
        if lu.determinant().abs() < 1e-14 {
            return None;
        }
        lu.solve(&rhs)?
    };
    if lam.iter().any(|&l| l < 0.0) || lam.sum() > 1.0 {
        return None;
    }
    let mut p = v[0].to_vec();
    for (i, l) in lam.iter().enumerate() {
        p.iter_mut().zip(&e[i]).for_each(|(a, b)| *a += l * b);
    }
    Some(norm(&sub(x, &p)))
}

fn mean(points: &[&[f64]]) -> Vec<f64> {
    let n = points.len() as f64;
    let d = points[0].len();
    (0..d).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n).collect()
}

fn polygon_area(local: &[Vec<f64>], cycle: &[usize]) -> f64 {
    let n = cycle.len();
    (0..n)
        .map(|k| {
            let (a, b) = (&local[cycle[k]], &local[cycle[(k + 1) % n]]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

fn perimeter(local: &[Vec<f64>], cycle: &[usize]) -> f64 {
    let n = cycle.len();
    (0..n)
        .map(|k| norm(&sub(&local[cycle[k]], &local[cycle[(k + 1) % n]])))
        .sum()
}

fn solid_facet_area(local: &[Vec<f64>], f: &Facet3) -> f64 {
    let o = &local[f.cycle[0]];
    let n = f.cycle.len();
    let mut s = [0.0; 3];
    for k in 1..n - 1 {
        let c = cross(&sub(&local[f.cycle[k]], o), &sub(&local[f.cycle[k + 1]], o));
        s.iter_mut().zip(c).for_each(|(a, b)| *a += b);
    }
    dot(&s, &f.normal) / 2.0
}

fn normal_angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm(&cross(a, b)).atan2(dot(a, b))
}

/// Edges as sorted vertex pairs with their two adjacent facets.
fn solid_edges(facets: &[Facet3]) -> Vec<((usize, usize), (usize, usize))> {
    let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (fi, f) in facets.iter().enumerate() {
        let n = f.cycle.len();
        for k in 0..n {
            let (a, b) = (f.cycle[k], f.cycle[(k + 1) % n]);
            map.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    map.into_iter()
        .filter(|(_, fs)| fs.len() == 2)
        .map(|(e, fs)| (e, (fs[0], fs[1])))
        .collect()
}

/// Solid angle of the convex cone spanned by unit vectors, via a fan of
/// spherical triangles.
fn cone_solid_angle(normals: &[[f64; 3]]) -> f64 {
    let mut axis = [0.0; 3];
    for n in normals {
        axis.iter_mut().zip(n).for_each(|(a, b)| *a += b);
    }
    let l = norm(&axis);
    axis.iter_mut().for_each(|a| *a /= l);
    let helper = if axis[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = {
        let c = cross(&axis, &helper);
        let l = norm(&c);
        [c[0] / l, c[1] / l, c[2] / l]
    };
    let w = cross(&axis, &u);
    let mut sorted: Vec<&[f64; 3]> = normals.iter().collect();
    sorted.sort_by(|a, b| {
        let ta = dot(*a, &w).atan2(dot(*a, &u));
        let tb = dot(*b, &w).atan2(dot(*b, &u));
        ta.total_cmp(&tb)
    });
    let a = sorted[0];
    (1..sorted.len() - 1)
        .map(|k| {
            let (b, c) = (sorted[k], sorted[k + 1]);
            let num = dot(a, &cross(b, c)).abs();
            let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
            2.0 * num.atan2(den)
        })
        .sum()
}

/// Facets of a full-dimensional point set in `R^3`, by testing every
/// non-collinear triple as a supporting plane.
fn solid_hull(points: &[Vec<f64>], tol: f64) -> (Vec<usize>, Shape) {
    let n = points.len();
    let mut planes: Vec<([f64; 3], f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let c = cross(&sub(&points[j], &points[i]), &sub(&points[k], &points[i]));
                let l = norm(&c);
                if l <= tol {
                    continue;
                }
                let nrm = [c[0] / l, c[1] / l, c[2] / l];
                let off = dot(&nrm, &points[i]);
                let (mut lo, mut hi) = (0.0f64, 0.0f64);
                for p in points {
                    let s = dot(&nrm, p) - off;
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
                let cand = if hi <= tol {
                    Some((nrm, off))
                } else if lo >= -tol {
                    Some(([-nrm[0], -nrm[1], -nrm[2]], -off))
                } else {
                    None
                };
                if let Some((nrm, off)) = cand {
                    let dup = planes
                        .iter()
                        .any(|(m, o)| dot(m, &nrm) > 1.0 - 1e-12 && (o - off).abs() <= tol);
                    if !dup {
                        planes.push((nrm, off));
                    }
                }
            }
        }
    }
    let mut facets_raw: Vec<([f64; 3], f64, Vec<usize>)> = Vec::new();
    for (nrm, off) in planes {
        let on: Vec<usize> = (0..n).filter(|&p| (dot(&nrm, &points[p]) - off).abs() <= tol).collect();
        let helper = if nrm[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let u = {
            let c = cross(&nrm, &helper);
            let l = norm(&c);
            [c[0] / l, c[1] / l, c[2] / l]
        };
        let w = cross(&nrm, &u);
        let flat: Vec<Vec<f64>> = on.iter().map(|&p| vec![dot(&points[p], &u), dot(&points[p], &w)]).collect();
        let cycle: Vec<usize> = hull2(&flat, tol).into_iter().map(|i| on[i]).collect();
        facets_raw.push((nrm, off, cycle));
    }
    let used: BTreeSet<usize> = facets_raw.iter().flat_map(|f| f.2.iter().copied()).collect();
    let keep: Vec<usize> = used.into_iter().collect();
    let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let facets = facets_raw
        .into_iter()
        .map(|(normal, offset, cycle)| Facet3 {
            normal,
            offset,
            cycle: cycle.iter().map(|c| renumber[c]).collect(),
        })
        .collect();
    (keep, Shape::Solid(facets))
}

/// Minkowski sum as the hull of pairwise vertex sums.
pub fn minkowski_sum(p: &FloatPolytope, q: &FloatPolytope) -> Result<FloatPolytope> {
    if p.ambient_dim != q.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim,
            found: q.ambient_dim,
        });
    }
    let pts: Vec<Vec<f64>> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
        .collect();
    FloatPolytope::from_points(p.ambient_dim, &pts)
}

/// `sum_i m_i 1_{P_i}` over float polytopes.
#[derive(Clone, Debug)]
pub struct FloatPolytopeCombination {
    ambient_dim: usize,
    terms: Vec<(i64, FloatPolytope)>,
}

impl FloatPolytopeCombination {
    pub fn new(ambient_dim: usize, terms: Vec<(i64, FloatPolytope)>) -> Result<Self> {
        if let Some((_, p)) = terms.iter().find(|(_, p)| p.ambient_dim != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: p.ambient_dim,
            });
        }
        Ok(Self { ambient_dim, terms })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn terms(&self) -> &[(i64, FloatPolytope)] {
        &self.terms
    }

    pub fn transform(&self, r: &[Vec<f64>], t: &[f64]) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            terms: self.terms.iter().map(|(m, p)| (*m, p.transform(r, t))).collect(),
        }
    }

    pub fn scale_weights(&self, s: i64) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            terms: self.terms.iter().map(|(m, p)| (m * s, p.clone())).collect(),
        }
    }

    /// Bilinear Minkowski expansion.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                terms.push((m * n, minkowski_sum(a, b)?));
            }
        }
        Self::new(self.ambient_dim, terms)
    }

    /// Value at `x`, counting closed membership within `tol`.
    pub fn evaluate(&self, x: &[f64], tol: f64) -> i64 {
        self.terms.iter().filter(|(_, p)| p.contains(x, tol)).map(|(m, _)| m).sum()
    }
}

impl From<&PolytopeCombination> for FloatPolytopeCombination {
    fn from(pc: &PolytopeCombination) -> Self {
        Self {
            ambient_dim: pc.ambient_dim(),
            terms: pc.terms().iter().map(|(m, p)| (*m, FloatPolytope::from_exact(p))).collect(),
        }
    }
}

/// A constructible function on a simplicial complex with float vertices,
/// typically the image of an exact one under a rigid motion.
#[derive(Clone, Debug)]
pub struct FloatCF {
    ambient_dim: usize,
    vertices: Vec<Vec<f64>>,
    simplices: Vec<Vec<usize>>,
    weights: BTreeMap<usize, i64>,
}

impl FloatCF {
    pub fn new(ambient_dim: usize, vertices: Vec<Vec<f64>>, simplices: Vec<Vec<usize>>, weights: BTreeMap<usize, i64>) -> Self {
        Self {
            ambient_dim,
            vertices,
            simplices,
            weights,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn weights(&self) -> &BTreeMap<usize, i64> {
        &self.weights
    }

    pub fn euler_integral(&self) -> i64 {
        self.weights
            .iter()
            .map(|(&id, &w)| if self.simplices[id].len() % 2 == 1 { w } else { -w })
            .sum()
    }

    /// Open simplices expanded into closed faces.
    pub fn to_polytope_combination(&self) -> FloatPolytopeCombination {
        let mut acc: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for (&id, &w) in &self.weights {
            if w == 0 {
                continue;
            }
            let s = &self.simplices[id];
            for f in faces_of(s) {
                let sign = if (s.len() - f.len()) % 2 == 0 { 1 } else { -1 };
                *acc.entry(f).or_default() += sign * w;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, m)| *m != 0)
            .map(|(f, m)| {
                let pts: Vec<Vec<f64>> = f.iter().map(|&i| self.vertices[i].clone()).collect();
                (m, FloatPolytope::from_points(self.ambient_dim, &pts).expect("simplex is nonempty"))
            })
            .collect();
        FloatPolytopeCombination {
            ambient_dim: self.ambient_dim,
            terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> FloatPolytope {
        let mut pts = Vec::new();
        for m in 0..8 {
            pts.push((0..3).map(|k| ((m >> k) & 1) as f64).collect());
        }
        FloatPolytope::from_points(3, &pts).unwrap()
    }

    #[test]
    fn square_and_cube() {
        let sq = FloatPolytope::from_points(
            2,
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![0.5, 0.0]],
        )
        .unwrap();
        assert_eq!(sq.vertices().len(), 4);
        let v = sq.intrinsic_volumes();
        assert!((v[1] - 2.0).abs() < 1e-15 && (v[2] - 1.0).abs() < 1e-15);
        let c = cube();
        assert_eq!(c.vertices().len(), 8);
        let v = c.intrinsic_volumes();
        for (a, b) in v.iter().zip([1.0, 3.0, 3.0, 1.0]) {
            assert!((a - b).abs() < 1e-12, "{v:?}");
        }
    }

    #[test]
    fn external_angles() {
        let c = cube();
        let sum: f64 = (0..8).map(|i| c.external_angle(&[i]).unwrap()).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!((c.external_angle(&[0]).unwrap() - 0.125).abs() < 1e-12);
        let edge = (1..8)
            .find(|&j| (norm(&sub(&c.vertices()[0], &c.vertices()[j])) - 1.0).abs() < 1e-12)
            .unwrap();
        assert!((c.external_angle(&[0, edge]).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(c.external_angle(&[0, 1, 2, 3, 4, 5, 6, 7]).unwrap(), 1.0);
        let far = (1..8)
            .find(|&j| (norm(&sub(&c.vertices()[0], &c.vertices()[j])) - 3f64.sqrt()).abs() < 1e-12)
            .unwrap();
        assert!(matches!(c.external_angle(&[0, far]), Err(Error::NotAFace)));
    }

    #[test]
    fn lower_dimensional_in_space() {
        let tri = FloatPolytope::from_points(3, &[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 2.0, 0.0]]).unwrap();
        assert_eq!(tri.dim(), 2);
        let v = tri.intrinsic_volumes();
        let area = 0.5 * norm(&cross(&[1.0, 0.0, 1.0], &[0.0, 2.0, 0.0]));
        assert!((v[2] - area).abs() < 1e-14);
        assert_eq!(v[3], 0.0);
        let seg = FloatPolytope::from_points(3, &[vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], vec![0.5, 0.5, 0.5]]).unwrap();
        assert_eq!(seg.vertices().len(), 2);
        assert!((seg.intrinsic_volumes()[1] - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tetrahedron_volume_and_distance() {
        let t = FloatPolytope::from_points(
            3,
            &[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        )
        .unwrap();
        assert!((t.volume() - 1.0 / 6.0).abs() < 1e-15);
        assert!(t.contains(&[0.1, 0.1, 0.1], 0.0));
        assert!(!t.contains(&[1.0, 1.0, 1.0], 0.5));
        assert!((t.distance(&[-1.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
    }
}
