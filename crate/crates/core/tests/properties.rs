mod common;

use proptest::prelude::*;

use conedepth::depth::{
    axis_depth, ball_depth, depth, depth_oracle, halfspace_depth_2d, halfspace_depth_exact, halfspace_depth_open_2d,
};
use conedepth::jensen::{check_cfunction, jensen_median, CFunctionSpec, SublevelFamily};
use conedepth::json::RegionJson;
use conedepth::measure::{mass_halfspace, quantiles};
use conedepth::regions::{
    bound_check, center, region_axis, region_axis_at, region_halfspace_2d, region_halfspace_2d_at,
    region_vertex_depths, rotated_axis_intersection,
};
use conedepth::{ConeOrder, DepthFamily, Halfspace, Mass, OrderInterval, RegionPolytope, WeightedSample};

fn grid_sample(max_n: usize) -> impl Strategy<Value = WeightedSample> {
    prop::collection::vec((-4i32..=4, -4i32..=4, 1u32..=9), 1..=max_n).prop_map(|atoms| {
        let pts = atoms.iter().map(|&(x, y, _)| vec![x as f64, y as f64]).collect();
        let w = atoms.iter().map(|&(_, _, w)| w as f64).collect();
        WeightedSample::new(pts, w).unwrap()
    })
}

fn continuous_sample(max_n: usize) -> impl Strategy<Value = WeightedSample> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, 0.05f64..1.0), 1..=max_n).prop_map(|atoms| {
        let pts = atoms.iter().map(|&(x, y, _)| vec![x, y]).collect();
        let w = atoms.iter().map(|&(_, _, w)| w).collect();
        WeightedSample::new(pts, w).unwrap()
    })
}

fn planar_sample(max_n: usize) -> impl Strategy<Value = WeightedSample> {
    prop_oneof![grid_sample(max_n), continuous_sample(max_n)]
}

fn half_grid_point() -> impl Strategy<Value = Vec<f64>> {
    (-10i32..=10, -10i32..=10).prop_map(|(x, y)| vec![x as f64 * 0.5, y as f64 * 0.5])
}

/// Orders whose inverse generator matrix has small integer entries.
fn integer_order() -> impl Strategy<Value = ConeOrder> {
    prop_oneof![
        Just(ConeOrder::identity(2)),
        Just(ConeOrder::from_generators(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()),
        Just(ConeOrder::from_generators(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()),
        Just(ConeOrder::from_generators(&[vec![1.0, 0.0], vec![-1.0, 1.0]]).unwrap()),
    ]
}

fn any_order() -> impl Strategy<Value = ConeOrder> {
    prop_oneof![integer_order(), (0.0f64..std::f64::consts::TAU).prop_map(|t| ConeOrder::rotation(t).unwrap()),]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn halfspace_mass_is_monotone_in_the_offset(
        s in planar_sample(20), nx in -3i32..=3, ny in -3i32..=3, c1 in -8i32..=8, dc in 0i32..=8,
    ) {
        prop_assume!(nx != 0 || ny != 0);
        let n = vec![nx as f64, ny as f64];
        let h1 = Halfspace::closed(n.clone(), c1 as f64).unwrap();
        let h2 = Halfspace::closed(n, (c1 + dc) as f64).unwrap();
        prop_assert!(mass_halfspace(&s, &h1).unwrap() <= mass_halfspace(&s, &h2).unwrap());
    }

    #[test]
    fn open_halfspace_drops_the_boundary_atoms(
        s in grid_sample(20), nx in -3i32..=3, ny in -3i32..=3, c in -8i32..=8,
    ) {
        prop_assume!(nx != 0 || ny != 0);
        let n = vec![nx as f64, ny as f64];
        let closed = mass_halfspace(&s, &Halfspace::closed(n.clone(), c as f64).unwrap()).unwrap();
        let open = mass_halfspace(&s, &Halfspace::open(n.clone(), c as f64).unwrap()).unwrap();
        let on = s.mass_where(|p| n[0] * p[0] + n[1] * p[1] == c as f64);
        prop_assert_eq!(open + on, closed);
        let h = Halfspace::closed(n, c as f64).unwrap();
        prop_assert_eq!(closed + mass_halfspace(&s, &h.complement()).unwrap(), Mass::FULL);
    }

    #[test]
    fn quantiles_are_tight_on_the_support(
        atoms in prop::collection::vec((-5i32..=5, 1u32..=9), 1..20), alpha in 0.01f64..=1.0,
    ) {
        let values: Vec<f64> = atoms.iter().map(|a| a.0 as f64).collect();
        let weights: Vec<f64> = atoms.iter().map(|a| a.1 as f64).collect();
        let q = quantiles(&values, &weights, alpha).unwrap();
        let s = WeightedSample::new(values.iter().map(|v| vec![*v]).collect(), weights).unwrap();
        let le = |t: f64| s.mass_where(|p| p[0] <= t);
        let ge = |t: f64| s.mass_where(|p| p[0] >= t);
        prop_assert!(le(q.q_lo).meets(alpha) && ge(q.q_hi).meets(alpha));
        for &t in &values {
            if t < q.q_lo { prop_assert!(!le(t).meets(alpha)); }
            if t > q.q_hi { prop_assert!(!ge(t).meets(alpha)); }
        }
    }

    #[test]
    fn cone_orders_are_partial_orders(
        o in integer_order(), x in half_grid_point(), y in half_grid_point(), z in half_grid_point(),
    ) {
        prop_assert!(o.leq(&x, &x).unwrap());
        if o.leq(&x, &y).unwrap() && o.leq(&y, &x).unwrap() {
            prop_assert_eq!(&x, &y);
        }
        if o.leq(&x, &y).unwrap() && o.leq(&y, &z).unwrap() {
            prop_assert!(o.leq(&x, &z).unwrap());
        }
    }

    #[test]
    fn pairwise_intersecting_intervals_share_a_box(
        o in any_order(),
        boxes in prop::collection::vec(((-3i32..=3, -3i32..=3), (0i32..=6, 0i32..=6)), 2..6),
    ) {
        let ivs: Vec<OrderInterval> = boxes
            .iter()
            .map(|&((a, b), (w, h))| {
                OrderInterval::new(o.clone(), vec![a as f64, b as f64], vec![(a + w) as f64, (b + h) as f64]).unwrap()
            })
            .collect();
        let pairwise = ivs.iter().enumerate().all(|(i, a)| {
            ivs[i + 1..].iter().all(|b| !a.intersect(b).unwrap().is_empty())
        });
        prop_assume!(pairwise);
        let all = ivs[1..].iter().fold(ivs[0].clone(), |acc, b| acc.intersect(b).unwrap());
        prop_assert!(!all.is_empty());
        for k in 0..2 {
            let lo = ivs.iter().map(|v| v.lower()[k]).fold(f64::NEG_INFINITY, f64::max);
            let hi = ivs.iter().map(|v| v.upper()[k]).fold(f64::INFINITY, f64::min);
            prop_assert_eq!((all.lower()[k], all.upper()[k]), (lo, hi));
        }
    }

    #[test]
    fn median_set_matches_the_oracle_and_translates(
        s in grid_sample(30), o in integer_order(), vx in -5i32..=5, vy in -5i32..=5,
    ) {
        let m = o.median_set(&s).unwrap();
        prop_assert_eq!(&m, &o.median_set_oracle(&s).unwrap());
        let v = [vx as f64, vy as f64];
        let moved = s.map_points(|p| vec![p[0] + v[0], p[1] + v[1]]).unwrap();
        let mm = o.median_set(&moved).unwrap();
        let shift = o.cone_coords(&v);
        let moved_by = |c: &[f64]| vec![c[0] + shift[0], c[1] + shift[1]];
        prop_assert_eq!(mm.lower().to_vec(), moved_by(m.lower()));
        prop_assert_eq!(mm.upper().to_vec(), moved_by(m.upper()));
        match region_axis(&o, &s, 0.5).unwrap() {
            RegionPolytope::Box(b) => prop_assert_eq!(b, m),
            other => prop_assert!(false, "S_1/2 is {:?}", other),
        }
    }

    #[test]
    fn depth_range_and_vanishing(s in planar_sample(20), x in half_grid_point(), t in 0.0f64..6.3) {
        let id = ConeOrder::identity(2);
        let far = [1e6 * t.cos(), 1e6 * t.sin()];
        for fam in [DepthFamily::HalfspaceAll, DepthFamily::AxisParallel(id.clone())] {
            let d = depth(&x, &s, &fam).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert_eq!(depth(&far, &s, &fam).unwrap().mass, Mass::ZERO);
        }
        let b = ball_depth(&far, &s, 1e4 * s.diameter().max(1.0)).unwrap();
        prop_assert_eq!(b.mass, Mass::ZERO);
    }

    #[test]
    fn axis_depth_dominates_halfspace_depth(s in planar_sample(25), x in half_grid_point()) {
        let id = ConeOrder::identity(2);
        prop_assert!(axis_depth(&x, &s, &id).unwrap().mass >= halfspace_depth_2d(&x, &s).unwrap().mass);
    }

    #[test]
    fn axis_depth_survives_shifts_and_positive_scalings(
        s in grid_sample(20), x in half_grid_point(), ex in -3i32..=3, ey in -3i32..=3, vx in -4i32..=4, vy in -4i32..=4,
    ) {
        let id = ConeOrder::identity(2);
        let (a, b) = (2f64.powi(ex), 2f64.powi(ey));
        let map = |p: &[f64]| vec![a * p[0] + vx as f64, b * p[1] + vy as f64];
        let moved = s.map_points(map).unwrap();
        prop_assert_eq!(axis_depth(&x, &s, &id).unwrap().mass, axis_depth(&map(&x), &moved, &id).unwrap().mass);
    }

    #[test]
    fn halfspace_depth_agrees_with_its_oracles(s in grid_sample(15), x in half_grid_point()) {
        let d = halfspace_depth_2d(&x, &s).unwrap().mass;
        prop_assert_eq!(halfspace_depth_exact(&x, &s).unwrap().mass, d);
        prop_assert_eq!(depth_oracle(&x, &s).unwrap().mass, d);
        prop_assert_eq!(halfspace_depth_open_2d(&x, &s).unwrap().mass, d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn regions_are_nested(s in planar_sample(20), a in 0.02f64..0.6, da in 0.0f64..0.3) {
        let (lo, hi) = (region_halfspace_2d(&s, a).unwrap(), region_halfspace_2d(&s, a + da).unwrap());
        prop_assert!(lo.contains_region(&hi, 1e-9));
        let id = ConeOrder::identity(2);
        let (lo, hi) = (region_axis(&id, &s, a).unwrap(), region_axis(&id, &s, a + da).unwrap());
        prop_assert!(lo.contains_region(&hi, 1e-12));
    }

    #[test]
    fn region_membership_matches_depth(s in grid_sample(20), a in 0.02f64..0.7, t in 0.0f64..6.3) {
        let r = region_halfspace_2d(&s, a).unwrap();
        let level = Mass::least_meeting(a);
        for d in region_vertex_depths(&s, level).unwrap() {
            prop_assert!(d >= level);
        }
        for p in s.points() {
            let inside = halfspace_depth_2d(p, &s).unwrap().mass.meets(a);
            prop_assert_eq!(r.contains(p, 1e-9), inside, "atom {:?}", p);
        }
        prop_assert!(!r.contains(&[50.0 * t.cos(), 50.0 * t.sin()], 1e-9));
        if let Some(poly) = r.to_polygon() {
            let v = poly.vertices();
            if v.len() >= 3 {
                for i in 0..v.len() {
                    let (p, q, w) = (v[i], v[(i + 1) % v.len()], v[(i + 2) % v.len()]);
                    prop_assert!((q[0] - p[0]) * (w[1] - q[1]) - (q[1] - p[1]) * (w[0] - q[0]) > 0.0);
                }
            }
        }
    }

    #[test]
    fn centers_are_compact_nonempty_and_deep(s in planar_sample(25)) {
        for fam in [DepthFamily::HalfspaceAll, DepthFamily::AxisParallel(ConeOrder::identity(2))] {
            let c = center(&s, &fam).unwrap();
            prop_assert!(matches!(c.region, RegionPolytope::Box(_) | RegionPolytope::Polygon(_)));
        }
        let c = center(&s, &DepthFamily::HalfspaceAll).unwrap();
        prop_assert!(c.mass.at_least_reciprocal(3));
        prop_assert!(bound_check(&s).unwrap().holds);
        let above = Mass::from_units(c.mass.units() + 1);
        prop_assert!(region_halfspace_2d_at(&s, above).unwrap().is_empty());
        let id = ConeOrder::identity(2);
        let a = center(&s, &DepthFamily::AxisParallel(id.clone())).unwrap();
        prop_assert!(region_axis_at(&id, &s, Mass::from_units(a.mass.units() + 1)).unwrap().is_empty());
    }

    #[test]
    fn rotated_boxes_contain_the_halfspace_region(
        s in planar_sample(20), a in 0.02f64..0.5, angles in prop::collection::vec(0.0f64..6.3, 1..=8),
    ) {
        let hs = region_halfspace_2d(&s, a).unwrap();
        let rot = rotated_axis_intersection(&s, &angles, a).unwrap();
        prop_assert!(rot.contains_region(&hs, 1e-9));
    }

    #[test]
    fn region_json_round_trips(s in planar_sample(15), a in 0.02f64..0.6, probes in prop::collection::vec(half_grid_point(), 10)) {
        let regions = [
            region_halfspace_2d(&s, a).unwrap(),
            region_axis(&ConeOrder::rotation(0.4).unwrap(), &s, a).unwrap(),
        ];
        for r in regions {
            let text = serde_json::to_string(&RegionJson::from_region(&r, a)).unwrap();
            let back = serde_json::from_str::<RegionJson>(&text).unwrap().to_region().unwrap();
            for p in &probes {
                prop_assert_eq!(back.contains(p, 0.0), r.contains(p, 0.0));
            }
        }
    }

    #[test]
    fn gauge_functions_satisfy_the_median_inequality(
        s in planar_sample(15), a in (-3.0f64..3.0, -3.0f64..3.0), b in (-3.0f64..3.0, -3.0f64..3.0),
    ) {
        let id = ConeOrder::identity(2);
        let f = CFunctionSpec::gauge_box(vec![a.0, a.1], vec![b.0, b.1], SublevelFamily::IntervalSublevels(id.clone()))
            .unwrap();
        let r = jensen_median(&id, &f, &s, 12).unwrap();
        prop_assert!(r.holds);
        // sublevel sets at values taken on the probe grid keep their boundary points
        let probe = OrderInterval::new(id, vec![-4.0, -4.0], vec![4.0, 4.0]).unwrap();
        let levels: Vec<f64> = s.points().iter().map(|p| f.eval(p)).collect();
        prop_assert!(check_cfunction(&f, &probe, 17, &levels).unwrap().holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn large_balls_recover_halfspace_depth(s in grid_sample(10), x in half_grid_point()) {
        let cap = 1e4 * s.diameter().max(1.0);
        let b = ball_depth(&x, &s, cap).unwrap().value;
        prop_assert!((b - halfspace_depth_2d(&x, &s).unwrap().value).abs() <= 1e-6);
    }

    #[test]
    fn bound_holds_in_three_dimensions(
        atoms in prop::collection::vec((-3i32..=3, -3i32..=3, -3i32..=3, 1u32..=5), 1..=6),
    ) {
        let pts = atoms.iter().map(|&(x, y, z, _)| vec![x as f64, y as f64, z as f64]).collect();
        let w = atoms.iter().map(|a| a.3 as f64).collect();
        let s = WeightedSample::new(pts, w).unwrap();
        prop_assert!(bound_check(&s).unwrap().holds);
    }
}

#[test]
fn axis_depth_is_not_rotation_invariant() {
    let s = common::triangle();
    let id = ConeOrder::identity(2);
    let (c, sn) = (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
    let rot = s.map_points(|p| vec![c * p[0] - sn * p[1], sn * p[0] + c * p[1]]).unwrap();
    let before = axis_depth(&[0.0, 0.0], &s, &id).unwrap().value;
    let after = axis_depth(&[0.0, 0.0], &rot, &id).unwrap().value;
    assert_eq!(before, 2.0 / 3.0);
    assert_ne!(before, after);
}
