//! Exact convex polytopes (vertex and half-space descriptions) and integer
//! combinations of their closed indicators.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{self, ExactScalar, Point};

/// `normal · x = offset`, scaled so that the first nonzero normal entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Point,
    pub offset: ExactScalar,
}

impl Hyperplane {
    /// `None` when the normal vanishes.
    pub fn new(normal: Point, offset: ExactScalar) -> Option<Self> {
        let lead = normal.iter().find(|c| !c.is_zero())?.clone();
        Some(Self {
            normal: normal.iter().map(|c| c / &lead).collect(),
            offset: offset / lead,
        })
    }

    /// Signed value `normal · x - offset`.
    pub fn eval(&self, x: &[ExactScalar]) -> ExactScalar {
        scalar::dot(&self.normal, x) - &self.offset
    }

    pub fn side(&self, x: &[ExactScalar]) -> Ordering {
        self.eval(x).cmp(&ExactScalar::zero())
    }
}

/// A closed half-space `sign * (normal · x - offset) >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub plane: Hyperplane,
    pub sign: Ordering,
}

impl HalfSpace {
    fn oriented_value(&self, x: &[ExactScalar]) -> Ordering {
        let s = self.plane.side(x);
        if self.sign == Ordering::Less {
            s.reverse()
        } else {
            s
        }
    }
}

/// A nonempty convex polytope given by its extreme points, possibly lower
/// dimensional inside its ambient space.
#[derive(Clone, Debug)]
pub struct ConvexPolytope {
    ambient_dim: usize,
    vertices: Vec<Point>,
    dim: usize,
    equalities: Vec<Hyperplane>,
    facets: Vec<HalfSpace>,
}

impl PartialEq for ConvexPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl ConvexPolytope {
    /// Convex hull of a nonempty point set. Redundant points are dropped.
    pub fn from_points(ambient_dim: usize, points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        if let Some(p) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: p.len(),
            });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let origin = pts[0].clone();
        let dirs: Vec<Point> = pts[1..].iter().map(|p| scalar::sub(p, &origin)).collect();
        let (_, pivots) = if dirs.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            linalg::rref(&dirs, ambient_dim)
        };
        let dim = pivots.len();
        let equalities: Vec<Hyperplane> = linalg::nullspace(&dirs, ambient_dim)
            .into_iter()
            .filter_map(|w| {
                let off = scalar::dot(&w, &origin);
                Hyperplane::new(w, off)
            })
            .collect();
        let local: Vec<Point> = pts
            .iter()
            .map(|p| pivots.iter().map(|&j| p[j].clone()).collect())
            .collect();
        let (extreme, local_facets) = hull_local(dim, &local);
        let vertices: Vec<Point> = extreme.into_iter().map(|i| pts[i].clone()).collect();
        let facets = local_facets
            .into_iter()
            .filter_map(|(normal, offset, sign)| {
                let mut full = vec![ExactScalar::zero(); ambient_dim];
                for (c, &j) in normal.into_iter().zip(&pivots) {
                    full[j] = c;
                }
                let raw = Hyperplane {
                    normal: full.clone(),
                    offset: offset.clone(),
                };
                let plane = Hyperplane::new(full, offset)?;
                // keep orientation consistent after rescaling
                let probe = vertices
                    .iter()
                    .find(|v| !raw.eval(v).is_zero())
                    .expect("facet plane must miss some vertex");
                let raw_side = raw.side(probe);
                let side = plane.side(probe);
                let sign = if raw_side == sign { side } else { side.reverse() };
                Some(HalfSpace { plane, sign })
            })
            .collect();
        Ok(Self {
            ambient_dim,
            vertices,
            dim,
            equalities,
            facets,
        })
    }

    pub fn point(p: Point) -> Self {
        let n = p.len();
        Self::from_points(n, &[p]).expect("single point is a polytope")
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn cuboid(lo: &[ExactScalar], hi: &[ExactScalar]) -> Self {
        let n = lo.len();
        let pts: Vec<Point> = (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|j| {
                        if mask >> j & 1 == 1 {
                            hi[j].clone()
                        } else {
                            lo[j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_points(n, &pts).expect("box is a polytope")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn equalities(&self) -> &[Hyperplane] {
        &self.equalities
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    /// Hyperplanes whose arrangement contains this polytope and each of its faces
    /// as a union of cells: the affine hull equations and one plane per facet.
    pub fn supporting_hyperplanes(&self) -> impl Iterator<Item = &Hyperplane> {
        self.equalities
            .iter()
            .chain(self.facets.iter().map(|h| &h.plane))
    }

    pub fn contains(&self, x: &[ExactScalar]) -> bool {
        self.equalities.iter().all(|h| h.eval(x).is_zero())
            && self
                .facets
                .iter()
                .all(|h| h.oriented_value(x) != Ordering::Less)
    }

    /// Membership in the relative interior.
    pub fn contains_relint(&self, x: &[ExactScalar]) -> bool {
        self.equalities.iter().all(|h| h.eval(x).is_zero())
            && self
                .facets
                .iter()
                .all(|h| h.oriented_value(x) == Ordering::Greater)
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(self.vertices.iter())
    }

    pub fn relint_point(&self) -> Point {
        let refs: Vec<&Point> = self.vertices.iter().collect();
        scalar::centroid(&refs)
    }

    pub fn translate(&self, t: &[ExactScalar]) -> Self {
        let pts: Vec<Point> = self.vertices.iter().map(|v| scalar::add(v, t)).collect();
        Self::from_points(self.ambient_dim, &pts).expect("translate keeps nonempty")
    }

    pub fn to_f64_vertices(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| scalar::point_to_f64(v)).collect()
    }
}

pub(crate) fn bbox<'a>(mut points: impl Iterator<Item = &'a Point>) -> (Point, Point) {
    let first = points.next().expect("bbox of empty set").clone();
    let mut lo = first.clone();
    let mut hi = first;
    for p in points {
        for j in 0..p.len() {
            if p[j] < lo[j] {
                lo[j] = p[j].clone();
            }
            if p[j] > hi[j] {
                hi[j] = p[j].clone();
            }
        }
    }
    (lo, hi)
}

type LocalFacet = (Point, ExactScalar, Ordering);

/// Hull of full-dimensional points in `R^dim` (`dim <= 3`). Returns indices of
/// the extreme points (ascending) and facets `(normal, offset, inside_sign)`.
fn hull_local(dim: usize, pts: &[Point]) -> (Vec<usize>, Vec<LocalFacet>) {
    match dim {
        0 => (vec![0], Vec::new()),
        1 => {
            let (imin, _) = pts
                .iter()
                .enumerate()
                .min_by(|a, b| a.1[0].cmp(&b.1[0]))
                .unwrap();
            let (imax, _) = pts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1[0].cmp(&b.1[0]))
                .unwrap();
            let mut ext = vec![imin, imax];
            ext.sort();
            let one = vec![ExactScalar::one()];
            let facets = vec![
                (one.clone(), pts[imin][0].clone(), Ordering::Greater),
                (one, pts[imax][0].clone(), Ordering::Less),
            ];
            (ext, facets)
        }
        2 => hull_2d(pts),
        3 => hull_3d(pts),
        _ => unreachable!("dimension cap is 3"),
    }
}

fn cross2(o: &Point, a: &Point, b: &Point) -> ExactScalar {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn hull_2d(pts: &[Point]) -> (Vec<usize>, Vec<LocalFacet>) {
    // points arrive sorted and deduplicated
    let n = pts.len();
    let mut lower: Vec<usize> = Vec::new();
    for i in 0..n {
        while lower.len() >= 2
            && cross2(&pts[lower[lower.len() - 2]], &pts[lower[lower.len() - 1]], &pts[i])
                <= ExactScalar::zero()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for i in (0..n).rev() {
        while upper.len() >= 2
            && cross2(&pts[upper[upper.len() - 2]], &pts[upper[upper.len() - 1]], &pts[i])
                <= ExactScalar::zero()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    let ring: Vec<usize> = lower.into_iter().chain(upper).collect();
    let facets = (0..ring.len())
        .map(|k| {
            let a = &pts[ring[k]];
            let b = &pts[ring[(k + 1) % ring.len()]];
            // counter-clockwise ring: interior on the left
            let normal = vec![-(&b[1] - &a[1]), &b[0] - &a[0]];
            let offset = scalar::dot(&normal, a);
            (normal, offset, Ordering::Greater)
        })
        .collect();
    let mut ext = ring;
    ext.sort();
    (ext, facets)
}

fn cross3(a: &Point, b: &Point) -> Point {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn hull_3d(pts: &[Point]) -> (Vec<usize>, Vec<LocalFacet>) {
    let n = pts.len();
    let mut planes: Vec<(Hyperplane, Ordering)> = Vec::new();
    let mut on_plane: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let eij = scalar::sub(&pts[j], &pts[i]);
            for k in j + 1..n {
                let eik = scalar::sub(&pts[k], &pts[i]);
                let normal = cross3(&eij, &eik);
                let offset = scalar::dot(&normal, &pts[i]);
                let Some(h) = Hyperplane::new(normal, offset) else {
                    continue;
                };
                if planes.iter().any(|(p, _)| *p == h) {
                    continue;
                }
                let mut pos = false;
                let mut neg = false;
                let mut touching = Vec::new();
                for (m, p) in pts.iter().enumerate() {
                    match h.side(p) {
                        Ordering::Greater => pos = true,
                        Ordering::Less => neg = true,
                        Ordering::Equal => touching.push(m),
                    }
                    if pos && neg {
                        break;
                    }
                }
                if pos && neg {
                    continue;
                }
                let sign = if pos { Ordering::Greater } else { Ordering::Less };
                planes.push((h, sign));
                on_plane.push(touching);
            }
        }
    }
    let extreme: Vec<usize> = (0..n)
        .filter(|&m| {
            let normals: Vec<Point> = planes
                .iter()
                .zip(&on_plane)
                .filter(|(_, on)| on.contains(&m))
                .map(|((h, _), _)| h.normal.clone())
                .collect();
            linalg::rank(&normals) == 3
        })
        .collect();
    let facets = planes
        .into_iter()
        .map(|(h, s)| (h.normal, h.offset, s))
        .collect();
    (extreme, facets)
}

/// Closed intersection of two polytopes in the same space; `None` when empty.
pub fn intersection(a: &ConvexPolytope, b: &ConvexPolytope) -> Option<ConvexPolytope> {
    let n = a.ambient_dim;
    if n == 0 {
        return Some(a.clone());
    }
    let (alo, ahi) = a.bbox();
    let (blo, bhi) = b.bbox();
    if (0..n).any(|j| ahi[j] < blo[j] || bhi[j] < alo[j]) {
        return None;
    }
    let mut pool: Vec<&Hyperplane> = a
        .supporting_hyperplanes()
        .chain(b.supporting_hyperplanes())
        .collect();
    pool.sort();
    pool.dedup();
    let mut found: Vec<Point> = Vec::new();
    for combo in combinations(pool.len(), n) {
        let rows: Vec<Point> = combo.iter().map(|&i| pool[i].normal.clone()).collect();
        let rhs: Vec<ExactScalar> = combo.iter().map(|&i| pool[i].offset.clone()).collect();
        if let Some(x) = linalg::solve(&rows, &rhs) {
            if a.contains(&x) && b.contains(&x) {
                found.push(x);
            }
        }
    }
    if found.is_empty() {
        None
    } else {
        ConvexPolytope::from_points(n, &found).ok()
    }
}

/// Whether the relative interiors of two polytopes meet.
pub fn relints_meet(a: &ConvexPolytope, b: &ConvexPolytope) -> bool {
    match intersection(a, b) {
        None => false,
        Some(c) => {
            let x = c.relint_point();
            a.contains_relint(&x) && b.contains_relint(&x)
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Convex hull of all pairwise vertex sums.
pub fn minkowski_sum(p: &ConvexPolytope, q: &ConvexPolytope) -> Result<ConvexPolytope> {
    if p.ambient_dim != q.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim,
            found: q.ambient_dim,
        });
    }
    let sums: Vec<Point> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| scalar::add(a, b)))
        .collect();
    ConvexPolytope::from_points(p.ambient_dim, &sums)
}

/// `sum_i m_i 1_{P_i}` with closed convex `P_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeCombination {
    ambient_dim: usize,
    terms: Vec<(i64, ConvexPolytope)>,
}

impl PolytopeCombination {
    pub fn new(ambient_dim: usize, terms: Vec<(i64, ConvexPolytope)>) -> Result<Self> {
        if let Some((_, p)) = terms.iter().find(|(_, p)| p.ambient_dim != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: p.ambient_dim,
            });
        }
        Ok(Self { ambient_dim, terms })
    }

    pub fn single(p: ConvexPolytope) -> Self {
        Self {
            ambient_dim: p.ambient_dim,
            terms: vec![(1, p)],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn terms(&self) -> &[(i64, ConvexPolytope)] {
        &self.terms
    }

    pub fn evaluate(&self, x: &[ExactScalar]) -> i64 {
        self.terms
            .iter()
            .filter(|(_, p)| p.contains(x))
            .map(|(m, _)| *m)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{point, q, qr};

    #[test]
    fn square_hull_drops_interior_and_collinear_points() {
        let pts = vec![
            point(&[0, 0]),
            point(&[2, 0]),
            point(&[1, 0]),
            point(&[2, 2]),
            point(&[0, 2]),
            point(&[1, 1]),
        ];
        let p = ConvexPolytope::from_points(2, &pts).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        assert!(p.contains(&point(&[1, 0])));
        assert!(!p.contains_relint(&point(&[1, 0])));
        assert!(p.contains_relint(&point(&[1, 1])));
        assert!(!p.contains(&vec![qr(5, 2), q(1)]));
    }

    #[test]
    fn segment_in_plane() {
        let p = ConvexPolytope::from_points(2, &[point(&[0, 0]), point(&[1, 1]), point(&[2, 2])])
            .unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.vertices(), &[point(&[0, 0]), point(&[2, 2])]);
        assert!(p.contains_relint(&point(&[1, 1])));
        assert!(!p.contains(&point(&[1, 0])));
        assert!(!p.contains_relint(&point(&[2, 2])));
    }

    #[test]
    fn cube_hull() {
        let c = ConvexPolytope::cuboid(&point(&[0, 0, 0]), &point(&[1, 1, 1]));
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        let mut pts: Vec<Point> = c.vertices().to_vec();
        pts.push(vec![qr(1, 2), qr(1, 2), qr(1, 2)]);
        pts.push(vec![qr(1, 2), q(0), q(0)]);
        let again = ConvexPolytope::from_points(3, &pts).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn triangle_in_space() {
        let t = ConvexPolytope::from_points(
            3,
            &[point(&[0, 0, 1]), point(&[1, 0, 1]), point(&[0, 1, 1])],
        )
        .unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.equalities().len(), 1);
        assert!(t.contains_relint(&vec![qr(1, 4), qr(1, 4), q(1)]));
        assert!(!t.contains(&vec![qr(1, 4), qr(1, 4), q(0)]));
    }

    #[test]
    fn minkowski_examples() {
        let a = ConvexPolytope::from_points(1, &[point(&[0]), point(&[1])]).unwrap();
        let b = ConvexPolytope::from_points(1, &[point(&[0]), point(&[2])]).unwrap();
        let s = minkowski_sum(&a, &b).unwrap();
        assert_eq!(s.vertices(), &[point(&[0]), point(&[3])]);

        let sq = ConvexPolytope::cuboid(&point(&[0, 0]), &point(&[1, 1]));
        let seg = ConvexPolytope::from_points(2, &[point(&[0, 0]), point(&[1, 1])]).unwrap();
        let hex = minkowski_sum(&sq, &seg).unwrap();
        let mut expect = vec![
            point(&[0, 0]),
            point(&[1, 0]),
            point(&[2, 1]),
            point(&[2, 2]),
            point(&[1, 2]),
            point(&[0, 1]),
        ];
        expect.sort();
        assert_eq!(hex.vertices(), expect.as_slice());

        let moved = minkowski_sum(&sq, &ConvexPolytope::point(point(&[3, -1]))).unwrap();
        assert_eq!(moved, sq.translate(&point(&[3, -1])));
    }
}
