use proptest::prelude::*;

use sperner_core::geometry::{check_equivalence_bounds, is_member, product_metric, truncated_metric, Point, Region};
use sperner_core::labeling::{
    count_full_cells, find_full_cell_pathfollow, full_kuhn_cells, random_labeling, sperner_label, truncate_map,
    Labeling,
};
use sperner_core::map::{builtin, parse_map, project_to_simplex, BinOp, Expr, MapSpec, PostStep, TailRule};
use sperner_core::triangulation::{KuhnTriangulation, LatticePoint, Neighbor, ResourceCap, Subdivision};

fn cap() -> ResourceCap {
    ResourceCap::default()
}

/// Points of the closed simplex supported in `1..=len`.
fn point(len: usize) -> impl Strategy<Value = Point> {
    (prop::collection::vec(0.0f64..1.0, len), 0.0f64..1.0).prop_map(|(mut c, slack)| {
        let total = c.iter().sum::<f64>() + slack;
        if total > 0.0 {
            c.iter_mut().for_each(|v| *v /= total);
        }
        Point::from_dense(&c).unwrap()
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|n| Expr::Num(n as f64 / 8.0)),
        (1usize..6).prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (
                prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Expr::Binary(op, Box::new(a), Box::new(b))),
            prop::collection::vec(inner.clone(), 1..3).prop_map(Expr::Min),
            prop::collection::vec(inner.clone(), 1..3).prop_map(Expr::Max),
            inner.clone().prop_map(|e| Expr::Abs(Box::new(e))),
            (inner, 0u32..4).prop_map(|(e, k)| Expr::Pow(Box::new(e), k as f64)),
        ]
    })
}

fn kuhn() -> impl Strategy<Value = (usize, u64)> {
    prop_oneof![(1usize..=2, 1u64..=6), (3usize..=3, 1u64..=4)]
}

proptest! {
    #[test]
    fn metric_axioms(x in point(6), y in point(6), z in point(6)) {
        let (dxy, dyx) = (product_metric(&x, &y), product_metric(&y, &x));
        prop_assert!(dxy >= 0.0);
        prop_assert_eq!(dxy, dyx);
        prop_assert_eq!(product_metric(&x, &x), 0.0);
        prop_assert!(dxy <= product_metric(&x, &z) + product_metric(&z, &y) + 1e-15);
        prop_assert!(dxy < 1.0);
    }

    #[test]
    fn truncation_is_monotone(x in point(6), y in point(6), n in 1usize..8) {
        let (a, b) = (truncated_metric(&x, &y, n), truncated_metric(&x, &y, n + 1));
        prop_assert!(a <= b);
        prop_assert!(b <= product_metric(&x, &y) + 1e-15);
    }

    #[test]
    fn norm_equivalence((n, x, y) in (1usize..=6).prop_flat_map(|n| (Just(n), point(n), point(n)))) {
        let c = check_equivalence_bounds(&x, &y, n, 1.0).unwrap();
        prop_assert!(c.lhs_ok && c.rhs_ok);
    }

    #[test]
    fn projection_lands_in_simplex(raw in prop::collection::vec(-2.0f64..3.0, 0..8)) {
        let p = project_to_simplex(&raw);
        prop_assert!(is_member(&p, Region::SimplexClosure));
        prop_assert_eq!(project_to_simplex(&p.to_dense(raw.len())), p);
    }

    #[test]
    fn parser_round_trip(components in prop::collection::vec(expr(), 1..4), shift in 0usize..3, project in any::<bool>()) {
        let tail = if shift == 0 { TailRule::Zeros } else { TailRule::ShiftFrom(components.len() + shift) };
        let post = if project { PostStep::ProjectToSimplex } else { PostStep::None };
        let spec = MapSpec::new(components, tail, post);
        let text = spec.to_string();
        let parsed = parse_map(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&parsed.to_string(), &text);
        prop_assert_eq!(parsed, spec);
    }

    #[test]
    fn pivot_is_an_involution((n, k) in kuhn(), pick in any::<prop::sample::Index>(), pos in 0usize..4) {
        let t = KuhnTriangulation::new(n, k).unwrap();
        let cells = t.cells(&cap()).unwrap();
        let cell = pick.get(&cells);
        let pos = pos % (n + 1);
        let v = t.vertex_at(cell, pos);
        if let Neighbor::Cell(next) = t.facet_neighbor(cell, &v).unwrap() {
            prop_assert!(t.contains(&next));
            let old = t.vertices_of(cell);
            let fresh = t.vertices_of(&next).into_iter().find(|w| !old.contains(w)).unwrap();
            prop_assert_eq!(t.facet_neighbor(&next, &fresh).unwrap(), Neighbor::Cell(cell.clone()));
        }
    }

    #[test]
    fn map_labels_lie_in_carrier(name in prop::sample::select(sperner_core::map::BUILTIN_SUITE), n in 1usize..=4, coords in prop::collection::vec(0u64..=5, 1..=5)) {
        let mut a: Vec<u64> = coords.into_iter().take(n + 1).collect();
        a.resize(n + 1, 0);
        if a.iter().all(|&c| c == 0) {
            a[0] = 1;
        }
        let k = a.iter().sum();
        let v = LatticePoint(a);
        let g = truncate_map(builtin(name).unwrap(), n).unwrap();
        let label = sperner_label(&v.to_point(k), &g).unwrap();
        prop_assert!(v.carrier().contains(&label));
    }

    #[test]
    fn random_labellings_have_odd_full_count((n, k) in kuhn(), seed in any::<u64>()) {
        let t = KuhnTriangulation::new(n, k).unwrap();
        let lab = random_labeling(&t, seed, &cap()).unwrap();
        for v in t.vertices(&cap()).unwrap() {
            prop_assert!(t.carrier(&v).contains(&lab.get(&v).unwrap()));
        }
        prop_assert_eq!(count_full_cells(&t, &lab, &cap()).unwrap() % 2, 1);
    }

    #[test]
    fn path_ends_in_a_full_cell((n, k) in kuhn(), seed in any::<u64>()) {
        let t = KuhnTriangulation::new(n, k).unwrap();
        let lab: Labeling<LatticePoint> = random_labeling(&t, seed, &cap()).unwrap();
        let found = find_full_cell_pathfollow(&t, &lab, &cap()).unwrap();
        prop_assert!(full_kuhn_cells(&t, &lab, &cap()).unwrap().contains(&found.cell));
    }
}
