//! Hand-checked values for each public operation.

use std::collections::BTreeMap;

use sperner_core::geometry::{
    check_equivalence_bounds, embed_face, is_member, product_metric, sup_distance, truncated_metric, Point, Region,
};
use sperner_core::labeling::{
    count_full_cells, find_full_cell_pathfollow, full_kuhn_cells, label_by_map, sperner_label, truncate_map,
    validate_sperner, Labeling, MapLabels,
};
use sperner_core::map::{builtin, map_from_source, parse_map, project_to_simplex};
use sperner_core::solver::{epsilon_fixed_point, fixed_point, plan_parameters, residual, ParamOverrides, SolveConfig};
use sperner_core::triangulation::{
    mesh_size, ExplicitTriangulation, KuhnTriangulation, LatticePoint, MeshMetric, Neighbor, ResourceCap, Subdivision,
};
use sperner_core::Error;

fn p(c: &[f64]) -> Point {
    Point::from_dense(c).unwrap()
}

fn e(i: usize) -> Point {
    Point::basis(i)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

fn cap() -> ResourceCap {
    ResourceCap::default()
}

#[test]
fn metric_values() {
    assert_eq!(product_metric(&Point::zero(), &Point::zero()), 0.0);
    assert!(close(product_metric(&e(1), &e(2)), 0.375));
    assert!(close(product_metric(&Point::zero(), &e(1)), 0.25));
    assert!(close(truncated_metric(&e(1), &e(2), 1), 0.25));
    assert!(close(truncated_metric(&e(1), &e(2), 2), 0.375));
    let x = p(&[0.2, 0.3, 0.1]);
    assert_eq!(truncated_metric(&x, &x, 5), 0.0);
}

#[test]
fn sup_distance_values() {
    assert_eq!(sup_distance(&e(1), &e(2)), 1.0);
    assert_eq!(sup_distance(&e(4), &e(4)), 0.0);
    assert_eq!(sup_distance(&Point::zero(), &p(&[0.0, 0.0, 0.5])), 0.5);
}

#[test]
fn equivalence_values() {
    let c = check_equivalence_bounds(&e(1), &e(2), 2, 1.0).unwrap();
    assert!(c.lhs_ok && c.rhs_ok);
    let x = p(&[0.4, 0.4]);
    let c = check_equivalence_bounds(&x, &x, 3, 0.0).unwrap();
    assert!(c.lhs_ok && c.rhs_ok);
    assert!(matches!(
        check_equivalence_bounds(&e(3), &e(1), 2, 1.0),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn membership_values() {
    assert!(is_member(&e(5), Region::SimplexClosure));
    assert!(!is_member(&Point::zero(), Region::Face(2)));
    assert!(is_member(&p(&[0.5, 0.5]), Region::Face(1)));
    assert!(!is_member(&e(3), Region::Face(1)));
    assert!(is_member(&e(3), Region::OpenHull));
}

#[test]
fn embed_face_values() {
    assert_eq!(embed_face(&[1.0, 0.0, 0.0]).unwrap(), e(1));
    let b = embed_face(&[1.0 / 3.0; 3]).unwrap();
    assert!(is_member(&b, Region::Face(2)));
    assert!(matches!(embed_face(&[0.5, 0.4]), Err(Error::InvalidPoint(_))));
    assert!(matches!(embed_face(&[1.5, -0.5]), Err(Error::InvalidPoint(_))));
}

#[test]
fn point_validation() {
    assert!(matches!(Point::from_dense(&[0.7, 0.7]), Err(Error::InvalidPoint(_))));
    assert!(matches!(Point::from_dense(&[-0.1]), Err(Error::InvalidPoint(_))));
    assert!(matches!(Point::new([(0, 0.5)]), Err(Error::InvalidPoint(_))));
    assert_eq!(p(&[0.0, 0.5, 0.0]).support(), vec![2]);
}

#[test]
fn kuhn_counts() {
    let t = KuhnTriangulation::new(1, 2).unwrap();
    assert_eq!(t.cell_count(), Some(2));
    assert_eq!(t.vertex_count(), Some(3));
    assert_eq!(KuhnTriangulation::new(2, 2).unwrap().cells(&cap()).unwrap().len(), 4);
    let t = KuhnTriangulation::new(2, 3).unwrap();
    assert_eq!(t.cells(&cap()).unwrap().len(), 9);
    assert!(close(mesh_size(&t, MeshMetric::SupNorm, &cap()).unwrap(), 1.0 / 3.0));
}

#[test]
fn barycentric_counts() {
    let t1 = ExplicitTriangulation::trivial(1)
        .unwrap()
        .barycentric_subdivide(&cap())
        .unwrap();
    assert_eq!(t1.cells().len(), 2);
    let t2 = ExplicitTriangulation::trivial(2)
        .unwrap()
        .barycentric_subdivide(&cap())
        .unwrap();
    assert_eq!(t2.cells().len(), 6);
    assert_eq!(t2.barycentric_subdivide(&cap()).unwrap().cells().len(), 36);
}

#[test]
fn mesh_values() {
    let t = KuhnTriangulation::new(2, 4).unwrap();
    let sup = mesh_size(&t, MeshMetric::SupNorm, &cap()).unwrap();
    assert!(close(sup, 0.25));
    let prod = mesh_size(&t, MeshMetric::TruncatedProductMetric, &cap()).unwrap();
    assert!(prod <= 3.0 * sup);
    assert!(close(t.product_mesh(&cap()).unwrap(), prod));
    let t = KuhnTriangulation::new(1, 1).unwrap();
    assert_eq!(mesh_size(&t, MeshMetric::SupNorm, &cap()).unwrap(), 1.0);
}

#[test]
fn facet_neighbor_values() {
    let t = KuhnTriangulation::new(1, 2).unwrap();
    let mid = LatticePoint(vec![1, 1]);
    let cells = t.cells(&cap()).unwrap();
    let left = cells
        .iter()
        .find(|c| t.vertices_of(c).contains(&LatticePoint(vec![2, 0])))
        .unwrap();
    let right = cells.iter().find(|c| *c != left).unwrap();
    assert_eq!(
        t.facet_neighbor(left, &LatticePoint(vec![2, 0])).unwrap(),
        Neighbor::Cell(right.clone())
    );
    assert_eq!(t.facet_neighbor(left, &mid).unwrap(), Neighbor::Boundary);
    assert_eq!(
        t.facet_neighbor(right, &LatticePoint(vec![0, 2])).unwrap(),
        Neighbor::Cell(left.clone())
    );
}

#[test]
fn truncated_map_values() {
    let x = p(&[0.2, 0.3, 0.5]);
    let id = truncate_map(builtin("identity").unwrap(), 2).unwrap();
    let g = id.evaluate(&x).unwrap();
    assert!(g.iter().zip([0.2, 0.3, 0.5]).all(|(a, b)| close(*a, b)));
    let c = truncate_map(builtin("constant-1").unwrap(), 4).unwrap();
    assert_eq!(c.evaluate(&x).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    let s = truncate_map(builtin("shift").unwrap(), 2).unwrap();
    let g = s.evaluate(&x).unwrap();
    assert!(close(g[0], 0.0) && close(g[1], 0.2) && close(g[2], 0.8));
}

#[test]
fn label_values() {
    let spec = "f1 = 0\nf2 = 1\n";
    let g = truncate_map(map_from_source(spec, "e2").unwrap(), 2).unwrap();
    assert_eq!(sperner_label(&e(1), &g).unwrap(), 1);

    let quarter = map_from_source("f1 = 0.25\nf2 = 0.5\nf3 = 0.25\n", "q").unwrap();
    let g = truncate_map(quarter, 2).unwrap();
    assert_eq!(sperner_label(&p(&[0.5, 0.5]), &g).unwrap(), 1);

    let g = truncate_map(builtin("rotation-3").unwrap(), 2).unwrap();
    assert_eq!(sperner_label(&p(&[1.0 / 3.0; 3]), &g).unwrap(), 1);

    // e2 mapped to itself: the global argmax would pick index 1
    let g = truncate_map(builtin("identity").unwrap(), 2).unwrap();
    assert_eq!(sperner_label(&e(2), &g).unwrap(), 2);
}

#[test]
fn validation_values() {
    let t = ExplicitTriangulation::from_kuhn(&KuhnTriangulation::new(2, 3).unwrap(), &cap()).unwrap();
    let g = truncate_map(builtin("rotation-3").unwrap(), 2).unwrap();
    let lab = label_by_map(&t, &g, &cap()).unwrap();
    assert!(validate_sperner(&t, &lab, &cap()).unwrap().is_none());

    let mut assignment = lab.assignment.clone();
    let e1 = (0..t.vertex_count()).find(|&v| t.carrier(&v) == vec![1]).unwrap();
    assignment.insert(e1, 2);
    let v = validate_sperner(&t, &Labeling::explicit(assignment), &cap())
        .unwrap()
        .unwrap();
    assert_eq!((v.vertex, v.label, v.carrier), (e1, Some(2), vec![1]));
}

#[test]
fn count_values() {
    let t = KuhnTriangulation::new(1, 2).unwrap();
    let (a, b, m) = (
        LatticePoint(vec![2, 0]),
        LatticePoint(vec![0, 2]),
        LatticePoint(vec![1, 1]),
    );
    for mid_label in [1, 2] {
        let lab = Labeling::explicit(BTreeMap::from([(a.clone(), 1), (b.clone(), 2), (m.clone(), mid_label)]));
        assert_eq!(count_full_cells(&t, &lab, &cap()).unwrap(), 1);
    }
}

#[test]
fn pathfollow_values() {
    for k in 1..=7 {
        let t = KuhnTriangulation::new(1, k).unwrap();
        let g = truncate_map(builtin("identity").unwrap(), 1).unwrap();
        let lab = MapLabels { map: &g, resolution: k };
        let found = find_full_cell_pathfollow(&t, &lab, &cap()).unwrap();
        assert!(full_kuhn_cells(&t, &lab, &cap()).unwrap().contains(&found.cell));
    }
    let t = KuhnTriangulation::new(2, 6).unwrap();
    let g = truncate_map(builtin("rotation-3").unwrap(), 2).unwrap();
    let lab = MapLabels { map: &g, resolution: 6 };
    let found = find_full_cell_pathfollow(&t, &lab, &cap()).unwrap();
    assert!(full_kuhn_cells(&t, &lab, &cap()).unwrap().contains(&found.cell));
    for v in &found.vertices {
        let x = v.to_point(6);
        assert!(sup_distance(&x, &p(&[1.0 / 3.0; 3])) <= 1.0 / 3.0 + 1e-12);
    }
}

#[test]
fn parameter_values() {
    let pp = plan_parameters(0.5, &ParamOverrides::default()).unwrap();
    assert_eq!(pp.n, 3);
    assert!(close(pp.eps0, 0.015625));
    assert_eq!(plan_parameters(0.01, &ParamOverrides::default()).unwrap().n, 9);
    assert!(matches!(
        plan_parameters(0.0, &ParamOverrides::default()),
        Err(Error::InvalidParameter(_))
    ));
    let low = ParamOverrides {
        n: Some(2),
        ..Default::default()
    };
    assert!(matches!(plan_parameters(0.01, &low), Err(Error::InvalidParameter(_))));
}

#[test]
fn residual_values() {
    let id = builtin("identity").unwrap();
    assert_eq!(residual(id.as_ref(), &p(&[0.3, 0.3])).unwrap().value, 0.0);
    let c = builtin("constant-1").unwrap();
    assert!(close(residual(c.as_ref(), &e(2)).unwrap().value, 0.375));
    let s = builtin("shift").unwrap();
    assert_eq!(residual(s.as_ref(), &Point::zero()).unwrap().value, 0.0);
}

#[test]
fn solver_values() {
    let config = SolveConfig::default();
    let cert = epsilon_fixed_point(&builtin("identity").unwrap(), 0.1, &config).unwrap();
    assert_eq!(cert.residual, 0.0);
    assert_eq!(cert.refinement_count, 0);

    let rot = builtin("rotation-3").unwrap();
    let cert = epsilon_fixed_point(&rot, 0.01, &config).unwrap();
    assert!(cert.residual < 0.01);
    assert!(sup_distance(&cert.point_y, &p(&[1.0 / 3.0; 3])) < 0.1);

    let cert = epsilon_fixed_point(&builtin("shift").unwrap(), 0.05, &config).unwrap();
    assert!(cert.residual < 0.05);

    assert_eq!(
        fixed_point(&builtin("identity").unwrap(), 1e-6, &config)
            .unwrap()
            .residual,
        0.0
    );
    assert!(fixed_point(&rot, 1e-3, &config).unwrap().residual < 1e-3);
    let cert = fixed_point(&builtin("constant-1").unwrap(), 1e-4, &config).unwrap();
    assert!(product_metric(&cert.point_y, &e(1)) < 1e-4);
}

#[test]
fn parser_values() {
    let rot = parse_map("f1 = x3; f2 = x1; f3 = x2; tail zeros").unwrap();
    assert_eq!(rot.components().len(), 3);
    let err = parse_map("f1 = x1 +").unwrap_err();
    assert_eq!((err.line, err.column), (1, 9));
    let avg = parse_map("f1 = 0.5*x1 + 0.5*x2; f2 = 0.5*x1 + 0.5*x2; tail zeros").unwrap();
    assert_eq!(avg.support_bound(), Some(2));

    assert_eq!(rot.evaluate(&p(&[0.5, 0.5])).unwrap(), p(&[0.0, 0.5, 0.5]));
    assert_eq!(avg.evaluate(&e(1)).unwrap(), p(&[0.5, 0.5]));
    let double = parse_map("f1 = 2*x1; tail zeros").unwrap();
    assert!(matches!(double.evaluate(&e(1)), Err(Error::MapRange(_))));
}

#[test]
fn projection_and_builtin_values() {
    assert_eq!(project_to_simplex(&[2.0, 0.0, 0.0]), e(1));
    let third = project_to_simplex(&[0.5, 0.5, 0.5]);
    assert!((1..=3).all(|i| close(third.get(i), 1.0 / 3.0)));
    let x = p(&[0.1, 0.6]);
    assert_eq!(project_to_simplex(&x.to_dense(2)), x);

    let y = p(&[0.1, 0.2, 0.3]);
    assert_eq!(builtin("identity").unwrap().evaluate(&y).unwrap(), y);
    assert_eq!(builtin("shift").unwrap().evaluate(&e(1)).unwrap(), e(2));
    assert_eq!(builtin("constant-3").unwrap().evaluate(&y).unwrap(), e(3));
}
