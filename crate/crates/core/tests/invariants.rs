mod common;

use std::collections::BTreeMap;

use euler_kin::cf::{combine, from_polytopes};
use euler_kin::float_geom::FloatPolytope;
use euler_kin::io::{parse_scene_str, write_scene, Scene, SceneObject, Space};
use euler_kin::ops::{exterior_product, rigid_motion_apply, slice, AffineSubspace};
use euler_kin::scalar::{point, q};
use euler_kin::sphere3::{
    act, convolve_balls, euler_integral_on_subsphere, BallCF, GeodesicBall, SO4Element, Subsphere, UnitQuaternion,
};
use euler_kin::valuations::{evaluate_valuation, haar_rotation};
use euler_kin::{rng, ConvexPolytope, PolytopeCombination, StratifiedCF};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn float_points(dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, dim), dim + 1..=8)
}

fn quaternion() -> impl Strategy<Value = UnitQuaternion> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("away from the origin", |a| a.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|a| UnitQuaternion::from_array(a).unwrap())
}

fn ball_cf(max_terms: usize, max_radius: f64) -> impl Strategy<Value = BallCF> {
    prop::collection::vec((prop_oneof![-2i64..=-1, 1i64..=2], quaternion(), 0.02..max_radius), 1..=max_terms).prop_map(
        |terms| BallCF::new(terms.into_iter().map(|(w, c, r)| (w, GeodesicBall::new(c, r).unwrap())).collect()),
    )
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn same_balls(a: &BallCF, b: &BallCF) -> bool {
    a.terms().len() == b.terms().len()
        && a.terms().iter().zip(b.terms()).all(|((m, x), (n, y))| {
            m == n && close(x.radius(), y.radius(), 1e-12) && x.center().distance(y.center()) < 1e-7
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn intrinsic_volumes_are_homogeneous(pts in float_points(3), lambda in 0.2f64..3.0) {
        let p = FloatPolytope::from_points(3, &pts).unwrap();
        let v = p.intrinsic_volumes();
        let w = p.scale(lambda).intrinsic_volumes();
        for k in 0..=3 {
            prop_assert!(close(w[k], lambda.powi(k as i32) * v[k], 1e-9), "k={} {} vs {}", k, w[k], v[k]);
        }
    }

    #[test]
    fn intrinsic_volumes_are_rigid_motion_invariant(pts in float_points(3), seed in any::<u64>(), t in prop::collection::vec(-5.0f64..5.0, 3)) {
        let p = FloatPolytope::from_points(3, &pts).unwrap();
        let rot = haar_rotation(3, &mut rng::stream(seed, "invariance", 0)).unwrap();
        let v = p.intrinsic_volumes();
        let w = p.transform(&rot, &t).intrinsic_volumes();
        for k in 0..=3 {
            prop_assert!(close(v[k], w[k], 1e-9));
        }
    }

    #[test]
    fn planar_valuations_match_convex_formulas(pts in float_points(2)) {
        let p = FloatPolytope::from_points(2, &pts).unwrap();
        let v = p.intrinsic_volumes();
        let hull: Vec<&Vec<f64>> = p.vertices().iter().collect();
        let perimeter: f64 = (0..hull.len())
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
            })
            .sum();
        let shoelace: f64 = (0..hull.len())
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
            .abs()
            / 2.0;
        prop_assert_eq!(v[0], 1.0);
        if p.dim() == 2 {
            prop_assert!(close(v[1], perimeter / 2.0, 1e-12));
            prop_assert!(close(v[2], shoelace, 1e-12));
        }
    }
}

fn boxes() -> impl Strategy<Value = ([i64; 4], [i64; 4])> {
    let b = || {
        (0i64..4, 0i64..4, 1i64..4, 1i64..4).prop_map(|(x, y, w, h)| [x, y, x + w, y + h])
    };
    (b(), b())
}

fn cuboid(b: [i64; 4]) -> ConvexPolytope {
    ConvexPolytope::cuboid(&point(&[b[0], b[1]]), &point(&[b[2], b[3]]))
}

fn box_volumes(b: [i64; 4]) -> [f64; 3] {
    let (w, h) = ((b[2] - b[0]) as f64, (b[3] - b[1]) as f64);
    [1.0, w + h, w * h]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn valuations_are_additive_on_box_unions((a, b) in boxes()) {
        let lo = [a[0].max(b[0]), a[1].max(b[1])];
        let hi = [a[2].min(b[2]), a[3].min(b[3])];
        let mut terms = vec![(1, StratifiedCF::indicator(&cuboid(a))), (1, StratifiedCF::indicator(&cuboid(b)))];
        let mut expected: Vec<f64> = (0..3).map(|k| box_volumes(a)[k] + box_volumes(b)[k]).collect();
        if lo[0] <= hi[0] && lo[1] <= hi[1] {
            let meet = ConvexPolytope::cuboid(&point(&lo), &point(&hi));
            terms.push((-1, StratifiedCF::indicator(&meet)));
            let (w, h) = ((hi[0] - lo[0]) as f64, (hi[1] - lo[1]) as f64);
            for (e, v) in expected.iter_mut().zip([1.0, w + h, w * h]) {
                *e -= v;
            }
        }
        let union = combine(&terms);
        for x in 0..=8 {
            for y in 0..=8 {
                let p = [q(x) / q(2), q(y) / q(2)];
                let inside = |c: [i64; 4]| q(c[0]) <= p[0] && p[0] <= q(c[2]) && q(c[1]) <= p[1] && p[1] <= q(c[3]);
                prop_assert_eq!(union.evaluate(&p), (inside(a) || inside(b)) as i64);
            }
        }
        for (k, e) in expected.iter().enumerate() {
            prop_assert!(close(evaluate_valuation(k, &union), *e, 1e-12));
        }
    }

    #[test]
    fn valuations_survive_rigid_motions(phi in common::cf(2, 2, 3, 3), seed in any::<u64>()) {
        let rot = haar_rotation(2, &mut rng::stream(seed, "cf-motion", 0)).unwrap();
        let r = DMatrix::from_fn(2, 2, |i, j| rot[i][j]);
        let moved = rigid_motion_apply(&r, &[0.5, -1.5], &phi).unwrap();
        prop_assert_eq!(moved.euler_integral(), phi.euler_integral());
        for k in 0..=2 {
            prop_assert!(close(evaluate_valuation(k, &moved), evaluate_valuation(k, &phi), 1e-9));
        }
    }

    #[test]
    fn exterior_product_multiplies_integrals(a in common::cf(1, 2, 2, 4), b in common::cf(1, 2, 2, 4), x in 0i64..=8) {
        let prod = exterior_product(&a, &b).unwrap();
        prop_assert_eq!(prod.euler_integral(), a.euler_integral() * b.euler_integral());
        let at = q(x) / q(2);
        let line = AffineSubspace::new(vec![at.clone(), q(0)], vec![point(&[0, 1])]).unwrap();
        let fibre = slice(&prod, &line).unwrap();
        let expected = combine(&[(a.evaluate(&[at]), b.clone())]);
        prop_assert!(fibre.pointwise_eq(&expected));
    }

    #[test]
    fn scene_files_round_trip(a in common::cf(2, 2, 3, 3), b in common::cf(1, 2, 2, 4)) {
        let mut objects = BTreeMap::new();
        objects.insert("a".to_string(), SceneObject::Cf(a.canonicalize()));
        objects.insert("b".to_string(), SceneObject::Polytopes(PolytopeCombination::single(cuboid([0, 0, 1, 2]))));
        let scene = Scene { space: Space::Euclidean(2), objects, maps: BTreeMap::new(), metadata: BTreeMap::new() };
        let back = parse_scene_str(&write_scene(&scene)).unwrap();
        let (SceneObject::Cf(x), SceneObject::Cf(y)) = (&scene.objects["a"], &back.objects["a"]) else { unreachable!() };
        prop_assert!(x.pointwise_eq(y));
        prop_assert_eq!(&scene.objects["b"], &back.objects["b"]);
        let one = combine(&[(1, b.clone())]);
        prop_assert!(from_polytopes(&one.to_polytope_combination()).pointwise_eq(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn act_preserves_crofton_integrals(phi in ball_cf(3, 0.7), e in quaternion(), f in quaternion(), d in 0usize..=2, seed in any::<u64>()) {
        let g = SO4Element::new(e, f);
        let mut r = rng::stream(seed, "act", 0);
        let frame: Vec<[f64; 4]> = (0..=d).map(|_| UnitQuaternion::uniform(&mut r).to_array()).collect();
        let sub = Subsphere::new(&frame).unwrap();
        let moved_frame: Vec<[f64; 4]> = sub.frame().iter().map(|v| g.apply(UnitQuaternion::from_array(*v).unwrap()).to_array()).collect();
        let moved_sub = Subsphere::new(&moved_frame).unwrap();
        let before = euler_integral_on_subsphere(&phi, &sub);
        let after = euler_integral_on_subsphere(&act(&g, &phi), &moved_sub);
        prop_assume!(before.is_ok() && after.is_ok());
        prop_assert_eq!(before.unwrap(), after.unwrap());
        prop_assert_eq!(act(&g, &phi).euler_integral(), phi.euler_integral());
    }

    #[test]
    fn ball_convolution_is_associative(a in ball_cf(2, 0.5), b in ball_cf(2, 0.5), c in ball_cf(2, 0.5)) {
        let left = convolve_balls(&convolve_balls(&a, &b).unwrap(), &c).unwrap();
        let right = convolve_balls(&a, &convolve_balls(&b, &c).unwrap()).unwrap();
        prop_assert!(same_balls(&left, &right));
        prop_assert_eq!(left.euler_integral(), a.euler_integral() * b.euler_integral() * c.euler_integral());
    }

    #[test]
    fn ball_convolution_is_equivariant(a in ball_cf(2, 0.7), b in ball_cf(2, 0.7), e in quaternion(), f in quaternion(), h in quaternion()) {
        let ga = SO4Element::new(e, h);
        let gb = SO4Element::new(h, f);
        let lhs = convolve_balls(&act(&ga, &a), &act(&gb, &b)).unwrap();
        let rhs = act(&SO4Element::new(e, f), &convolve_balls(&a, &b).unwrap());
        prop_assert!(same_balls(&lhs, &rhs));
    }
}

/// Containment oracle for `B(p, r) * B(q, s) = B(pq, r + s)`: products of
/// sampled members stay inside, and every target point splits into a product.
#[test]
fn ball_convolution_support_by_membership() {
    use rand::Rng;
    let mut r = rng::stream(17, "membership", 0);
    for case in 0..20 {
        let p = UnitQuaternion::uniform(&mut r);
        let qq = UnitQuaternion::uniform(&mut r);
        let (ra, rb) = (r.random_range(0.05..0.7), r.random_range(0.05..0.7));
        let a = GeodesicBall::new(p, ra).unwrap();
        let b = GeodesicBall::new(qq, rb).unwrap();
        let conv = convolve_balls(&BallCF::ball(a), &BallCF::ball(b)).unwrap();
        let target = conv.terms()[0].1.clone();
        let sample_in = |ball: &GeodesicBall, r: &mut rand_chacha::ChaCha8Rng| loop {
            let x = UnitQuaternion::uniform(r);
            let x = if x.dot(ball.center()) < 0.0 { x.neg() } else { x };
            let t: f64 = r.random();
            let y = UnitQuaternion::from_array(std::array::from_fn(|k| {
                ball.center().to_array()[k] * (1.0 - t) + x.to_array()[k] * t
            }))
            .unwrap();
            if ball.contains(y) {
                return y;
            }
        };
        let mut reached = 0.0f64;
        for _ in 0..2000 {
            let x = sample_in(&a, &mut r);
            let y = sample_in(&b, &mut r);
            let d = (x * y).distance(p * qq);
            assert!(d <= ra + rb + 1e-12, "case {case}: {d} > {}", ra + rb);
            reached = reached.max(d);
        }
        assert!(reached > 0.5 * (ra + rb), "case {case}: samples never approach the rim");
        for _ in 0..2000 {
            let z = sample_in(&target, &mut r);
            // z = p h q with h = exp(theta n); split theta in proportion to the radii
            let h = p.conj() * z * qq.conj();
            let [w, x, y, zz] = h.to_array();
            let norm = (x * x + y * y + zz * zz).sqrt();
            let theta = norm.atan2(w);
            let exp = |t: f64| {
                if norm < 1e-15 {
                    UnitQuaternion::IDENTITY
                } else {
                    UnitQuaternion::new(t.cos(), t.sin() * x / norm, t.sin() * y / norm, t.sin() * zz / norm).unwrap()
                }
            };
            let t = theta * ra / (ra + rb);
            let (u, v) = (p * exp(t), exp(theta - t) * qq);
            assert!(u.distance(p) <= ra + 1e-9 && v.distance(qq) <= rb + 1e-9);
            let gap = (u * v).to_array().iter().zip(z.to_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(gap < 1e-12, "case {case}: {gap}");
        }
    }
}
