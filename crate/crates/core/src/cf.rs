//! Piecewise-linear constructible functions: integer weights on the open
//! simplices of a simplicial complex.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::arrangement::Overlay;
use crate::complex::{self, SimplicialComplex};
use crate::error::{Error, Result};
use crate::polytope::{self, ConvexPolytope, Hyperplane, PolytopeCombination};
use crate::scalar::{ExactScalar, Point};

/// `sum_sigma m_sigma 1_{relint sigma}` over a simplicial complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedCF {
    complex: SimplicialComplex,
    weights: BTreeMap<usize, i64>,
}

impl StratifiedCF {
    pub fn new(complex: SimplicialComplex, weights: BTreeMap<usize, i64>) -> Result<Self> {
        if let Some(&id) = weights.keys().find(|&&id| id >= complex.simplices().len()) {
            return Err(Error::InvalidArgument(format!("no simplex with id {id}")));
        }
        Ok(Self { complex, weights })
    }

    /// Validating constructor taking `(vertex indices, weight)` per simplex;
    /// missing faces are added with weight 0.
    pub fn from_simplices(ambient_dim: usize, vertices: Vec<Point>, simplices: Vec<(Vec<usize>, i64)>) -> Result<Self> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (s, _) in &simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            all.extend(complex::faces_of(&s));
        }
        let complex = SimplicialComplex::build(ambient_dim, vertices, all.into_iter().collect())?;
        let mut weights = BTreeMap::new();
        for (mut s, w) in simplices {
            s.sort_unstable();
            s.dedup();
            let id = complex.find(&s).expect("validated simplex is present");
            *weights.entry(id).or_insert(0) += w;
        }
        Ok(Self { complex, weights })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            complex: SimplicialComplex::new_unchecked(ambient_dim, Vec::new(), Vec::new()),
            weights: BTreeMap::new(),
        }
    }

    /// Indicator of a closed simplex (all faces weighted 1).
    pub fn closed_simplex(points: Vec<Point>) -> Result<Self> {
        let n = points.first().map(|p| p.len()).ok_or(Error::EmptyPolytope)?;
        let idx: Vec<usize> = (0..points.len()).collect();
        let simplices = complex::faces_of(&idx).into_iter().map(|f| (f, 1)).collect();
        Self::from_simplices(n, points, simplices)
    }

    /// Indicator of a closed convex polytope.
    pub fn indicator(p: &ConvexPolytope) -> Self {
        from_polytopes(&PolytopeCombination::single(p.clone()))
    }

    pub(crate) fn from_parts(complex: SimplicialComplex, weights: BTreeMap<usize, i64>) -> Self {
        Self { complex, weights }
    }

    pub fn ambient_dim(&self) -> usize {
        self.complex.ambient_dim()
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn weights(&self) -> &BTreeMap<usize, i64> {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.weights.values().all(|&w| w == 0)
    }

    /// Weighted open simplices as `(weight, closed simplex polytope)`.
    pub fn weighted_cells(&self) -> Vec<(i64, ConvexPolytope)> {
        self.weights
            .iter()
            .filter(|(_, &w)| w != 0)
            .map(|(&id, &w)| (w, self.complex.simplex_polytope(self.complex.simplex(id))))
            .collect()
    }

    /// Drops zero weights and every simplex that is not a face of a weighted one.
    pub fn canonicalize(&self) -> Self {
        let weighted: Vec<(usize, i64)> = self
            .weights
            .iter()
            .filter(|(_, &w)| w != 0)
            .map(|(&id, &w)| (id, w))
            .collect();
        let mut keep: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (id, _) in &weighted {
            keep.extend(complex::faces_of(self.complex.simplex(*id)));
        }
        let used: BTreeSet<usize> = keep.iter().flatten().copied().collect();
        let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let vertices: Vec<Point> = used.iter().map(|&v| self.complex.vertices()[v].clone()).collect();
        let simplices: Vec<Vec<usize>> = keep
            .iter()
            .map(|s| s.iter().map(|v| remap[v]).collect())
            .collect();
        let complex = SimplicialComplex::new_unchecked(self.ambient_dim(), vertices, simplices);
        let weights = weighted
            .iter()
            .map(|&(id, w)| {
                let s: Vec<usize> = self.complex.simplex(id).iter().map(|v| remap[v]).collect();
                (complex.find(&s).unwrap(), w)
            })
            .collect();
        Self { complex, weights }
    }

    /// Value at a point: weight of the open simplex containing it, else 0.
    pub fn evaluate(&self, x: &[ExactScalar]) -> i64 {
        assert_eq!(x.len(), self.ambient_dim(), "point arity must match the ambient dimension");
        for (&id, &w) in &self.weights {
            if w == 0 {
                continue;
            }
            let pts = self.complex.simplex_points(self.complex.simplex(id));
            if let Some(lam) = complex::barycentric(&pts, x) {
                if lam.iter().all(|l| *l > ExactScalar::zero()) {
                    return w;
                }
            }
        }
        0
    }

    /// `sum_sigma m_sigma (-1)^{dim sigma}`.
    pub fn euler_integral(&self) -> i64 {
        self.weights
            .iter()
            .map(|(&id, &w)| if self.complex.simplex_dim(id) % 2 == 0 { w } else { -w })
            .sum()
    }

    pub fn bbox(&self) -> Option<(Point, Point)> {
        let cells = self.weighted_cells();
        if cells.is_empty() {
            return None;
        }
        Some(polytope::bbox(cells.iter().flat_map(|(_, p)| p.vertices().iter())))
    }

    /// Pointwise equality, decided on a common refinement.
    pub fn pointwise_eq(&self, other: &Self) -> bool {
        combine(&[(1, self.clone()), (-1, other.clone())]).is_zero()
    }

    pub fn to_polytope_combination(&self) -> PolytopeCombination {
        to_polytope_combination(self)
    }
}

/// Box strictly containing all given bounding boxes.
pub(crate) fn padded_box<'a>(boxes: impl Iterator<Item = &'a (Point, Point)>, dim: usize) -> Option<(Point, Point)> {
    let mut lo: Option<Point> = None;
    let mut hi: Option<Point> = None;
    for (l, h) in boxes {
        match (&mut lo, &mut hi) {
            (Some(lo), Some(hi)) => {
                for j in 0..dim {
                    if l[j] < lo[j] {
                        lo[j] = l[j].clone();
                    }
                    if h[j] > hi[j] {
                        hi[j] = h[j].clone();
                    }
                }
            }
            _ => {
                lo = Some(l.clone());
                hi = Some(h.clone());
            }
        }
    }
    let one = ExactScalar::one();
    Some((
        lo?.iter().map(|x| x - &one).collect(),
        hi?.iter().map(|x| x + &one).collect(),
    ))
}

/// Builds one CF per oracle output on a common overlay of the given hyperplanes.
/// `oracle(x)` must be constant on the cells of the arrangement and vanish outside the box.
pub(crate) fn build_from_oracle<F>(dim: usize, hyperplanes: Vec<Hyperplane>, bounds: Option<(Point, Point)>, count: usize, oracle: F) -> (SimplicialComplex, Vec<StratifiedCF>)
where
    F: Fn(&[ExactScalar]) -> Vec<i64>,
{
    let empty = || {
        let c = SimplicialComplex::new_unchecked(dim, Vec::new(), Vec::new());
        (c.clone(), vec![StratifiedCF::from_parts(c, BTreeMap::new()); count])
    };
    if dim == 0 {
        let vals = oracle(&[]);
        if vals.iter().all(|&v| v == 0) {
            return empty();
        }
        let c = SimplicialComplex::new_unchecked(0, vec![Vec::new()], vec![vec![0]]);
        let cfs = vals
            .into_iter()
            .map(|v| {
                let w = if v == 0 { BTreeMap::new() } else { BTreeMap::from([(0, v)]) };
                StratifiedCF::from_parts(c.clone(), w)
            })
            .collect();
        return (c, cfs);
    }
    let Some((lo, hi)) = bounds else {
        return empty();
    };
    let overlay = Overlay::build(dim, hyperplanes, &lo, &hi);
    let samples = overlay.samples();
    let mut values = vec![Vec::with_capacity(samples.len()); count];
    for s in &samples {
        for (f, v) in oracle(s).into_iter().enumerate() {
            values[f].push(v);
        }
    }
    #[cfg(debug_assertions)]
    for (c, s) in overlay.alternate_samples().iter().enumerate() {
        let alt = oracle(s);
        debug_assert!(
            alt.iter().enumerate().all(|(f, v)| values[f][c] == *v),
            "value not constant on an overlay cell"
        );
    }
    let (complex, weights) = overlay.triangulate(&values);
    let cfs = weights
        .into_iter()
        .map(|w| StratifiedCF::from_parts(complex.clone(), w))
        .collect();
    (complex, cfs)
}

fn cf_hyperplanes(cf: &StratifiedCF, cells: &[(i64, ConvexPolytope)]) -> (Vec<Hyperplane>, Option<(Point, Point)>) {
    let planes = cells
        .iter()
        .flat_map(|(_, p)| p.supporting_hyperplanes().cloned())
        .collect();
    (planes, cf.bbox())
}

fn eval_cells(cells: &[(i64, ConvexPolytope)], x: &[ExactScalar]) -> i64 {
    cells
        .iter()
        .find(|(_, p)| p.contains_relint(x))
        .map(|(w, _)| *w)
        .unwrap_or(0)
}

/// Refines both functions onto one complex; pointwise values are unchanged.
pub fn common_refinement(phi: &StratifiedCF, psi: &StratifiedCF) -> Result<(SimplicialComplex, StratifiedCF, StratifiedCF)> {
    let dim = phi.ambient_dim();
    if psi.ambient_dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.ambient_dim(),
        });
    }
    if phi.complex == psi.complex {
        return Ok((phi.complex.clone(), phi.clone(), psi.clone()));
    }
    let a = phi.weighted_cells();
    let b = psi.weighted_cells();
    let (mut planes, ba) = cf_hyperplanes(phi, &a);
    let (pb, bb) = cf_hyperplanes(psi, &b);
    planes.extend(pb);
    let boxes: Vec<(Point, Point)> = ba.into_iter().chain(bb).collect();
    let bounds = padded_box(boxes.iter(), dim);
    let (complex, mut cfs) = build_from_oracle(dim, planes, bounds, 2, |x| vec![eval_cells(&a, x), eval_cells(&b, x)]);
    let second = cfs.pop().unwrap();
    let first = cfs.pop().unwrap();
    Ok((complex, first, second))
}

/// Pointwise integer linear combination, canonical output.
pub fn combine(terms: &[(i64, StratifiedCF)]) -> StratifiedCF {
    let Some(dim) = terms.first().map(|(_, f)| f.ambient_dim()) else {
        return StratifiedCF::zero(0);
    };
    assert!(
        terms.iter().all(|(_, f)| f.ambient_dim() == dim),
        "combine requires a common ambient dimension"
    );
    let cells: Vec<(i64, Vec<(i64, ConvexPolytope)>)> = terms
        .iter()
        .filter(|(c, _)| *c != 0)
        .map(|(c, f)| (*c, f.weighted_cells()))
        .collect();
    let planes: Vec<Hyperplane> = cells
        .iter()
        .flat_map(|(_, cs)| cs.iter().flat_map(|(_, p)| p.supporting_hyperplanes().cloned()))
        .collect();
    let boxes: Vec<(Point, Point)> = terms.iter().filter_map(|(_, f)| f.bbox()).collect();
    let bounds = padded_box(boxes.iter(), dim);
    let (_, mut cfs) = build_from_oracle(dim, planes, bounds, 1, |x| {
        vec![cells.iter().map(|(c, cs)| c * eval_cells(cs, x)).sum()]
    });
    cfs.pop().unwrap().canonicalize()
}

/// `(phi * psi)(x) = phi(x) psi(x)`.
pub fn pointwise_product(phi: &StratifiedCF, psi: &StratifiedCF) -> Result<StratifiedCF> {
    let dim = phi.ambient_dim();
    if psi.ambient_dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.ambient_dim(),
        });
    }
    let a = phi.weighted_cells();
    let b = psi.weighted_cells();
    let (mut planes, ba) = cf_hyperplanes(phi, &a);
    let (pb, bb) = cf_hyperplanes(psi, &b);
    planes.extend(pb);
    let (Some(ba), Some(bb)) = (ba, bb) else {
        return Ok(StratifiedCF::zero(dim));
    };
    let bounds = padded_box([ba, bb].iter(), dim);
    let (_, mut cfs) = build_from_oracle(dim, planes, bounds, 1, |x| vec![eval_cells(&a, x) * eval_cells(&b, x)]);
    Ok(cfs.pop().unwrap().canonicalize())
}

/// Triangulated representative of `sum_i m_i 1_{P_i}`.
pub fn from_polytopes(pc: &PolytopeCombination) -> StratifiedCF {
    let dim = pc.ambient_dim();
    let planes: Vec<Hyperplane> = pc
        .terms()
        .iter()
        .flat_map(|(_, p)| p.supporting_hyperplanes().cloned())
        .collect();
    let boxes: Vec<(Point, Point)> = pc.terms().iter().map(|(_, p)| p.bbox()).collect();
    let bounds = padded_box(boxes.iter(), dim);
    let (_, mut cfs) = build_from_oracle(dim, planes, bounds, 1, |x| vec![pc.evaluate(x)]);
    cfs.pop().unwrap().canonicalize()
}

/// Expands each weighted open simplex with
/// `1_{relint s} = sum_{t face of s} (-1)^{dim s - dim t} 1_{closed t}`.
pub fn to_polytope_combination(cf: &StratifiedCF) -> PolytopeCombination {
    let c = cf.complex();
    let mut acc: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for (&id, &w) in cf.weights() {
        if w == 0 {
            continue;
        }
        let s = c.simplex(id);
        for face in complex::faces_of(s) {
            let sign = if (s.len() - face.len()) % 2 == 0 { 1 } else { -1 };
            *acc.entry(face).or_insert(0) += sign * w;
        }
    }
    let terms = acc
        .into_iter()
        .filter(|(_, m)| *m != 0)
        .map(|(face, m)| (m, c.simplex_polytope(&face)))
        .collect();
    PolytopeCombination::new(cf.ambient_dim(), terms).expect("faces share the ambient dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{point, q, qr};

    fn interval(a: i64, b: i64) -> StratifiedCF {
        StratifiedCF::closed_simplex(vec![point(&[a]), point(&[b])]).unwrap()
    }

    fn open_interval(a: i64, b: i64) -> StratifiedCF {
        StratifiedCF::from_simplices(1, vec![point(&[a]), point(&[b])], vec![(vec![0, 1], 1)]).unwrap()
    }

    fn unit_square_boundary() -> StratifiedCF {
        let v = vec![point(&[0, 0]), point(&[1, 0]), point(&[1, 1]), point(&[0, 1])];
        let s = vec![
            (vec![0], 1),
            (vec![1], 1),
            (vec![2], 1),
            (vec![3], 1),
            (vec![0, 1], 1),
            (vec![1, 2], 1),
            (vec![2, 3], 1),
            (vec![0, 3], 1),
        ];
        StratifiedCF::from_simplices(2, v, s).unwrap()
    }

    #[test]
    fn canonicalize_drops_zero_weights() {
        let cf = StratifiedCF::from_simplices(
            1,
            vec![point(&[0]), point(&[1]), point(&[2])],
            vec![(vec![0], 0), (vec![1], 0), (vec![2], 0), (vec![0, 1], 0), (vec![1, 2], 2)],
        )
        .unwrap();
        let c = cf.canonicalize();
        assert_eq!(c.weights().len(), 1);
        assert_eq!(c.complex().simplices().len(), 3);
        assert_eq!(c.canonicalize(), c);
        let zero = StratifiedCF::from_simplices(1, vec![point(&[0])], vec![(vec![0], 0)]).unwrap();
        assert!(zero.canonicalize().weights().is_empty());
    }

    #[test]
    fn evaluate_examples() {
        let u = interval(0, 1);
        assert_eq!(u.evaluate(&[qr(1, 2)]), 1);
        assert_eq!(u.evaluate(&[q(2)]), 0);
        let cf = StratifiedCF::from_simplices(1, vec![point(&[0]), point(&[1])], vec![(vec![0, 1], 2), (vec![0], 5), (vec![1], 0)]).unwrap();
        assert_eq!(cf.evaluate(&[q(0)]), 5);
        assert_eq!(cf.evaluate(&[qr(1, 3)]), 2);
    }

    #[test]
    fn euler_integral_examples() {
        let tri = StratifiedCF::closed_simplex(vec![point(&[0, 0]), point(&[1, 0]), point(&[0, 1])]).unwrap();
        assert_eq!(tri.euler_integral(), 1);
        assert_eq!(open_interval(0, 1).euler_integral(), -1);
        assert_eq!(unit_square_boundary().euler_integral(), 0);
    }

    #[test]
    fn from_polytopes_examples() {
        let seg = |a, b| ConvexPolytope::from_points(1, &[point(&[a]), point(&[b])]).unwrap();
        let pc = PolytopeCombination::new(1, vec![(1, seg(0, 1)), (1, seg(1, 2))]).unwrap();
        let cf = from_polytopes(&pc);
        assert_eq!(cf.evaluate(&[qr(1, 2)]), 1);
        assert_eq!(cf.evaluate(&[q(1)]), 2);
        assert_eq!(cf.evaluate(&[q(0)]), 1);
        assert_eq!(cf.evaluate(&[q(2)]), 1);
        assert_eq!(cf.evaluate(&[qr(3, 2)]), 1);
        assert_eq!(cf.evaluate(&[q(3)]), 0);

        let sq = ConvexPolytope::cuboid(&point(&[0, 0]), &point(&[1, 1]));
        let zero = from_polytopes(&PolytopeCombination::new(2, vec![(1, sq.clone()), (-1, sq)]).unwrap());
        assert!(zero.weights().is_empty());

        let tri_pts = vec![point(&[0, 0]), point(&[1, 0]), point(&[0, 1])];
        let tri = ConvexPolytope::from_points(2, &tri_pts).unwrap();
        let cf = from_polytopes(&PolytopeCombination::single(tri));
        assert!(cf.pointwise_eq(&StratifiedCF::closed_simplex(tri_pts).unwrap()));
        assert_eq!(cf.weights().len(), 7);
    }

    #[test]
    fn to_polytope_combination_examples() {
        let pc = open_interval(0, 1).to_polytope_combination();
        let mut terms: Vec<(i64, usize)> = pc.terms().iter().map(|(m, p)| (*m, p.dim())).collect();
        terms.sort();
        assert_eq!(terms, vec![(-1, 0), (-1, 0), (1, 1)]);

        let tri = StratifiedCF::from_simplices(
            2,
            vec![point(&[0, 0]), point(&[1, 0]), point(&[0, 1])],
            vec![(vec![0, 1, 2], 1), (vec![0], 0), (vec![1], 0), (vec![2], 0), (vec![0, 1], 0), (vec![0, 2], 0), (vec![1, 2], 0)],
        )
        .unwrap();
        let pc = tri.to_polytope_combination();
        let mut by_dim = [0i64; 3];
        for (m, p) in pc.terms() {
            by_dim[p.dim()] += m;
        }
        assert_eq!(by_dim, [3, -3, 1]);
        assert!(from_polytopes(&pc).pointwise_eq(&tri));
    }

    #[test]
    fn combine_examples() {
        let phi = interval(0, 1);
        assert!(combine(&[(1, phi.clone()), (-1, phi)]).weights().is_empty());
        let c = combine(&[(2, interval(0, 1)), (3, interval(1, 2))]);
        assert_eq!(c.evaluate(&[q(1)]), 5);
        let ends = combine(&[(1, interval(0, 2)), (-1, open_interval(0, 2))]);
        let expect = StratifiedCF::from_simplices(1, vec![point(&[0]), point(&[2])], vec![(vec![0], 1), (vec![1], 1)]).unwrap();
        assert!(ends.pointwise_eq(&expect));
        assert_eq!(ends.weights().len(), 2);
    }

    #[test]
    fn product_examples() {
        let p = pointwise_product(&interval(0, 2), &interval(1, 3)).unwrap();
        assert!(p.pointwise_eq(&interval(1, 2)));
        assert!(pointwise_product(&interval(0, 2), &StratifiedCF::zero(1)).unwrap().is_zero());
        let sum = combine(&[(1, interval(0, 1)), (1, interval(0, 2))]);
        let at1 = StratifiedCF::from_simplices(1, vec![point(&[1])], vec![(vec![0], 1)]).unwrap();
        let p = pointwise_product(&sum, &at1).unwrap();
        assert_eq!(p.evaluate(&[q(1)]), 2);
        assert_eq!(p.euler_integral(), 2);
    }

    #[test]
    fn refinement_of_intervals() {
        let (complex, a, b) = common_refinement(&interval(0, 2), &interval(1, 3)).unwrap();
        let xs: Vec<Point> = complex.vertices().to_vec();
        assert_eq!(xs, vec![point(&[0]), point(&[1]), point(&[2]), point(&[3])]);
        assert!(a.pointwise_eq(&interval(0, 2)));
        assert!(b.pointwise_eq(&interval(1, 3)));
        let same = interval(0, 2);
        let (c2, _, _) = common_refinement(&same, &same).unwrap();
        assert_eq!(&c2, same.complex());
    }
}
