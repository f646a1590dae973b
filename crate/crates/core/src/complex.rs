//! Geometric simplicial complexes with exact rational vertices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{self, ConvexPolytope};
use crate::scalar::{Point, ExactScalar};

pub const MAX_DIM: usize = 3;

/// Vertex coordinates plus a face-closed list of simplices. Each simplex is a
/// strictly increasing list of vertex indices; its id is its position in
/// [`SimplicialComplex::simplices`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    ambient_dim: usize,
    vertices: Vec<Point>,
    simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Validates arity, non-degeneracy, face closure and proper intersection.
    pub fn build(ambient_dim: usize, vertices: Vec<Point>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        if ambient_dim > MAX_DIM {
            return Err(Error::DimensionCapExceeded(ambient_dim));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: v.len(),
            });
        }
        let mut normalized = Vec::with_capacity(simplices.len());
        for s in simplices {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::InvalidArgument("empty simplex".into()));
            }
            if let Some(&i) = s.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::VertexIndexOutOfRange(i));
            }
            if s.len() > ambient_dim + 1 {
                return Err(Error::DegenerateSimplex(s));
            }
            let pts: Vec<&Point> = s.iter().map(|&i| &vertices[i]).collect();
            if linalg::affine_dim(&pts) != Some(s.len() - 1) {
                return Err(Error::DegenerateSimplex(s));
            }
            normalized.push(s);
        }
        let listed: BTreeSet<Vec<usize>> = normalized.iter().cloned().collect();
        for s in &listed {
            if s.len() < 2 {
                continue;
            }
            for skip in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                if !listed.contains(&face) {
                    return Err(Error::FaceClosureViolation {
                        simplex: s.clone(),
                        face,
                    });
                }
            }
        }
        let simplices: Vec<Vec<usize>> = sort_simplices(listed.into_iter().collect());
        let complex = Self {
            ambient_dim,
            vertices,
            simplices,
        };
        complex.check_proper_intersections()?;
        Ok(complex)
    }

    /// Trusted constructor for complexes produced by the refinement engine.
    pub(crate) fn new_unchecked(ambient_dim: usize, vertices: Vec<Point>, simplices: Vec<Vec<usize>>) -> Self {
        Self {
            ambient_dim,
            vertices,
            simplices: sort_simplices(simplices),
        }
    }

    fn check_proper_intersections(&self) -> Result<()> {
        let polys: Vec<ConvexPolytope> = self.simplices.iter().map(|s| self.simplex_polytope(s)).collect();
        for i in 0..self.simplices.len() {
            for j in i + 1..self.simplices.len() {
                let (a, b) = (&self.simplices[i], &self.simplices[j]);
                if is_subset(a, b) || is_subset(b, a) {
                    continue;
                }
                if polytope::relints_meet(&polys[i], &polys[j]) {
                    return Err(Error::ImproperIntersection(a.clone(), b.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex(&self, id: usize) -> &[usize] {
        &self.simplices[id]
    }

    pub fn simplex_dim(&self, id: usize) -> usize {
        self.simplices[id].len() - 1
    }

    pub fn simplex_points(&self, simplex: &[usize]) -> Vec<Point> {
        simplex.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn simplex_polytope(&self, simplex: &[usize]) -> ConvexPolytope {
        ConvexPolytope::from_points(self.ambient_dim, &self.simplex_points(simplex))
            .expect("simplex vertices are valid points")
    }

    pub fn find(&self, simplex: &[usize]) -> Option<usize> {
        self.simplices.iter().position(|s| s == simplex)
    }

    /// Applies `x -> f(x)` to every vertex; combinatorics unchanged.
    pub fn map_vertices(&self, target_dim: usize, f: impl Fn(&Point) -> Point) -> Self {
        Self {
            ambient_dim: target_dim,
            vertices: self.vertices.iter().map(f).collect(),
            simplices: self.simplices.clone(),
        }
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn sort_simplices(mut s: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    s.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    s.dedup();
    s
}

/// All nonempty faces of a simplex given as sorted vertex indices.
pub fn faces_of(simplex: &[usize]) -> Vec<Vec<usize>> {
    let n = simplex.len();
    (1..(1usize << n))
        .map(|mask| {
            (0..n)
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| simplex[k])
                .collect()
        })
        .collect()
}

/// Barycentric coordinates of `x` with respect to the simplex, if `x` lies in its affine hull.
pub fn barycentric(vertices: &[Point], x: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    use num_traits::{One, Zero};
    let k = vertices.len();
    let n = x.len();
    // rows: coordinates j plus sum constraint; k unknowns
    let mut rows: Vec<Point> = (0..n)
        .map(|j| {
            let mut r: Point = vertices.iter().map(|v| v[j].clone()).collect();
            r.push(x[j].clone());
            r
        })
        .collect();
    let mut last: Point = vec![ExactScalar::one(); k];
    last.push(ExactScalar::one());
    rows.push(last);
    let (m, pivots) = linalg::rref(&rows, k + 1);
    if pivots.contains(&k) || pivots.len() != k {
        return None;
    }
    let mut lam = vec![ExactScalar::zero(); k];
    for (row, &p) in m.iter().zip(&pivots) {
        lam[p] = row[k].clone();
    }
    Some(lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{point, qr};

    #[test]
    fn interval_is_valid() {
        let c = SimplicialComplex::build(1, vec![point(&[0]), point(&[1])], vec![vec![0], vec![1], vec![0, 1]]);
        assert!(c.is_ok());
    }

    #[test]
    fn triangles_sharing_edge_are_valid() {
        let v = vec![point(&[0, 0]), point(&[1, 0]), point(&[0, 1]), point(&[1, 1])];
        let s = vec![
            vec![0],
            vec![1],
            vec![2],
            vec![3],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
            vec![0, 1, 2],
            vec![1, 2, 3],
        ];
        assert!(SimplicialComplex::build(2, v, s).is_ok());
    }

    #[test]
    fn overlapping_triangles_are_rejected() {
        let v = vec![
            point(&[0, 0]),
            point(&[2, 0]),
            point(&[0, 2]),
            point(&[1, 1]),
            point(&[3, 1]),
            point(&[1, 3]),
        ];
        let mut s = faces_of(&[0, 1, 2]);
        s.extend(faces_of(&[3, 4, 5]));
        let err = SimplicialComplex::build(2, v, s).unwrap_err();
        assert!(matches!(err, Error::ImproperIntersection(_, _)));
    }

    #[test]
    fn crossing_edges_are_rejected() {
        let v = vec![point(&[0, 0]), point(&[2, 2]), point(&[0, 2]), point(&[2, 0])];
        let mut s = faces_of(&[0, 1]);
        s.extend(faces_of(&[2, 3]));
        assert!(matches!(
            SimplicialComplex::build(2, v, s),
            Err(Error::ImproperIntersection(_, _))
        ));
    }

    #[test]
    fn missing_face_and_degenerate() {
        let v = vec![point(&[0, 0]), point(&[1, 0]), point(&[2, 0])];
        assert!(matches!(
            SimplicialComplex::build(2, v.clone(), vec![vec![0, 1], vec![0]]),
            Err(Error::FaceClosureViolation { .. })
        ));
        assert!(matches!(
            SimplicialComplex::build(2, v, faces_of(&[0, 1, 2])),
            Err(Error::DegenerateSimplex(_))
        ));
    }

    #[test]
    fn barycentric_coordinates() {
        let v = vec![point(&[0, 0]), point(&[2, 0]), point(&[0, 2])];
        let lam = barycentric(&v, &point(&[1, 1])).unwrap();
        assert_eq!(lam, vec![qr(0, 1), qr(1, 2), qr(1, 2)]);
        let seg = vec![point(&[0, 0]), point(&[2, 0])];
        assert!(barycentric(&seg, &point(&[1, 1])).is_none());
    }
}
