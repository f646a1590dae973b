#![allow(dead_code)]

use euler_kin::cf::{combine, from_polytopes};
use euler_kin::ops::{from_open_cells, AffineMap};
use euler_kin::scalar::{point, q};
use euler_kin::{ConvexPolytope, PolytopeCombination, StratifiedCF};
use proptest::prelude::*;

/// A weighted convex cell, taken closed or relatively open.
#[derive(Clone, Debug)]
pub struct Piece {
    pub weight: i64,
    pub points: Vec<Vec<i64>>,
    pub open: bool,
}

pub fn build(dim: usize, pieces: &[Piece]) -> StratifiedCF {
    let terms: Vec<(i64, StratifiedCF)> = pieces
        .iter()
        .map(|p| {
            let pts: Vec<_> = p.points.iter().map(|c| point(c)).collect();
            let poly = ConvexPolytope::from_points(dim, &pts).unwrap();
            let cf = if p.open {
                from_open_cells(dim, &[(1, poly)])
            } else {
                from_polytopes(&PolytopeCombination::single(poly))
            };
            (p.weight, cf)
        })
        .collect();
    if terms.is_empty() {
        return StratifiedCF::zero(dim);
    }
    combine(&terms)
}

fn weight() -> impl Strategy<Value = i64> {
    prop_oneof![-2i64..=-1, 1i64..=2]
}

pub fn piece(dim: usize, max_points: usize, coord: i64) -> impl Strategy<Value = Piece> {
    (
        weight(),
        prop::collection::vec(prop::collection::vec(0..=coord, dim), 1..=max_points),
        any::<bool>(),
    )
        .prop_map(|(weight, points, open)| Piece { weight, points, open })
}

/// Random constructible function on `R^dim` with small integer geometry.
pub fn cf(dim: usize, max_pieces: usize, max_points: usize, coord: i64) -> impl Strategy<Value = StratifiedCF> {
    prop::collection::vec(piece(dim, max_points, coord), 0..=max_pieces).prop_map(move |ps| build(dim, &ps))
}

/// Random affine map with entries in `-2..=2` and translation in `-1..=1`.
pub fn affine(source: usize, target: usize) -> impl Strategy<Value = AffineMap> {
    (
        prop::collection::vec(prop::collection::vec(-2i64..=2, source), target),
        prop::collection::vec(-1i64..=1, target),
    )
        .prop_map(move |(rows, t)| {
            AffineMap::new(source, rows.iter().map(|r| point(r)).collect(), point(&t)).unwrap()
        })
}

/// Indicator of the origin.
pub fn delta(dim: usize) -> StratifiedCF {
    StratifiedCF::indicator(&ConvexPolytope::point(vec![q(0); dim]))
}
