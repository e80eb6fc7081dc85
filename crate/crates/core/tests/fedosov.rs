mod common;

use graded_pbw::fedosov::{
    curvature_action, delta, delta_inv, sigma, tau_pbw, truncate_weight, FedosovData,
};
use graded_pbw::geometry::Connection;
use graded_pbw::graded::{rational, ratio};
use graded_pbw::pbw::PbwContext;
use graded_pbw::GradedPoly;

fn fedosov(conn: &Connection) -> FedosovData {
    FedosovData::new(conn).unwrap()
}

#[test]
fn delta_examples() {
    let c = common::flat_line(4).chart().clone();
    let y = GradedPoly::y(&c, 0);
    let dx = GradedPoly::dx(&c, 0);
    let x = GradedPoly::x(&c, 0);
    assert!(delta(&x).is_zero());
    assert_eq!(delta(&y.pow(2)), (&dx * &y).scale(&rational(2)));
    assert!(delta(&(&dx * &y)).is_zero());
    assert!(delta_inv(&x).is_zero());
    assert_eq!(delta_inv(&(&dx * &y)), y.pow(2).scale(&ratio(1, 2)));
    assert_eq!(sigma(&x.pow(2)), x.pow(2));
    assert!(sigma(&(&dx * &y)).is_zero());
}

#[test]
fn flat_and_one_dimensional_charts_have_no_correction() {
    for conn in [common::flat_line(5), common::e1(5)] {
        assert!(fedosov(&conn).a().is_zero());
    }
}

#[test]
fn correction_is_minus_xi() {
    for (name, conn) in common::torsion_free_charts(5) {
        let data = fedosov(&conn);
        let ctx = PbwContext::with_max_weight(&conn, 6).unwrap();
        let xi = ctx.xi_form(5).unwrap();
        let a = data.a().truncate(6);
        let trimmed: Vec<GradedPoly> = a.components().iter().map(|c| {
            let chart = c.chart().clone();
            c.filter(|m| m.fiber_weight(chart.dim()) <= 5)
        }).collect();
        assert_eq!(trimmed, xi.neg().components().to_vec(), "{name}: A = {a}, Ξ = {xi}");
        assert!(data.a().delta_inv().is_zero(), "{name}");
        assert!(xi.delta_inv().is_zero(), "{name}");
    }
}

#[test]
fn curved_chart_has_a_correction() {
    assert!(!fedosov(&common::c2(5)).a().is_zero());
}

#[test]
fn d_squares_to_zero() {
    for (name, conn) in common::torsion_free_charts(5) {
        for (g, r) in fedosov(&conn).d_squared_residual().unwrap() {
            assert!(r.is_zero(), "{name} {g}: {r}");
        }
    }
}

#[test]
fn tau_examples() {
    let conn = common::flat_line(2);
    let c = conn.chart().clone();
    let x = GradedPoly::x(&c, 0);
    let y = GradedPoly::y(&c, 0);
    let data = fedosov(&conn);
    let want = &(&x.pow(2) + &(&x * &y).scale(&rational(2))) + &y.pow(2);
    assert_eq!(data.tau_series(&x.pow(2)).unwrap(), want);
    let ctx = PbwContext::new(&conn).unwrap();
    assert_eq!(tau_pbw(&ctx, &x.pow(2), 2).unwrap(), want);

    let conn = common::e1(2);
    let c = conn.chart().clone();
    let x = GradedPoly::x(&c, 0);
    let y = GradedPoly::y(&c, 0);
    let one = GradedPoly::one(&c);
    let want = &(&x.pow(2) + &(&x * &y).scale(&rational(2))) + &(&(&one - &x.pow(2)) * &y.pow(2));
    let ctx = PbwContext::new(&conn).unwrap();
    assert_eq!(tau_pbw(&ctx, &x.pow(2), 2).unwrap(), want);
    assert_eq!(fedosov(&conn).tau_series(&x.pow(2)).unwrap(), want);
}

#[test]
fn tau_routes_agree_and_are_flat() {
    for (name, conn) in common::torsion_free_charts(4) {
        let data = fedosov(&conn);
        let ctx = PbwContext::new(&conn).unwrap();
        let c = conn.chart().clone();
        let n = c.dim();
        let mut fs = vec![GradedPoly::one(&c)];
        for i in 0..n {
            fs.push(GradedPoly::x(&c, i));
            for j in 0..n {
                fs.push(&GradedPoly::x(&c, i) * &GradedPoly::x(&c, j));
            }
        }
        for f in fs {
            let a = tau_pbw(&ctx, &f, 4).unwrap();
            let b = data.tau_series(&f).unwrap();
            assert_eq!(a, b, "{name} f={f}");
            assert_eq!(sigma(&a), f);
            let d = data.d_apply(&a).unwrap();
            assert!(d.is_zero(), "{name} f={f}: D tau = {d}");
        }
    }
}

#[test]
fn curvature_action_matches_dnabla_squared() {
    for (name, conn) in common::torsion_free_charts(4).into_iter().chain([("torsionful", common::torsionful(4))]) {
        let data = graded_pbw::fedosov::CovariantDifferential::new(&conn);
        let c = conn.chart().clone();
        for k in 0..c.dim() {
            for omega in [GradedPoly::y(&c, k), &GradedPoly::y(&c, k) * &GradedPoly::y(&c, 0), &GradedPoly::x(&c, k) * &GradedPoly::y(&c, 0)] {
                let lhs = data.apply(&data.apply(&omega));
                let rhs = curvature_action(&conn, &omega).unwrap();
                assert_eq!(truncate_weight(&lhs, 10), rhs, "{name} {omega}");
            }
        }
    }
}

#[test]
fn covariant_differential_examples() {
    let conn = common::flat_line(3);
    let c = conn.chart().clone();
    let dn = graded_pbw::fedosov::CovariantDifferential::new(&conn);
    let (x, y, dx) = (GradedPoly::x(&c, 0), GradedPoly::y(&c, 0), GradedPoly::dx(&c, 0));
    assert_eq!(dn.apply(&(&x * &y)), &dx * &y);
    assert!(dn.apply(&y.pow(2)).is_zero());
    let conn = common::e1(3);
    let c = conn.chart().clone();
    let dn = graded_pbw::fedosov::CovariantDifferential::new(&conn);
    let (x, y, dx) = (GradedPoly::x(&c, 0), GradedPoly::y(&c, 0), GradedPoly::dx(&c, 0));
    assert_eq!(dn.apply(&y), -(&(&x * &dx) * &y));
}

#[test]
fn fiber_vector_field_acts_as_a_derivation() {
    let c = common::flat_line(4).chart().clone();
    let (x, y, dx) = (GradedPoly::x(&c, 0), GradedPoly::y(&c, 0), GradedPoly::dx(&c, 0));
    let a = graded_pbw::fedosov::FiberVectorField::new(&c, vec![&dx * &y.pow(2)]).unwrap();
    assert_eq!(a.apply(&y).unwrap(), &dx * &y.pow(2));
    assert!(a.apply(&x).unwrap().is_zero());
    assert_eq!(a.apply(&y.pow(2)).unwrap(), (&dx * &y.pow(3)).scale(&rational(2)));
}

#[test]
fn delta_homotopy_formula() {
    for (name, conn) in common::torsion_free_charts(4) {
        let mut s = graded_pbw::sample::Sampler::new(conn.chart(), 71);
        let sections: Vec<GradedPoly> = (0..30).map(|k| s.section(k % 3, 4, 3, 2)).collect();
        let check = graded_pbw::checks::delta_homotopy(&sections);
        assert!(check.passed(), "{name}: {check}");
        for w in &sections {
            assert!(delta(&delta(w)).is_zero());
            assert!(delta_inv(&delta_inv(w)).is_zero());
            assert!(sigma(&delta_inv(w)).is_zero());
        }
    }
}

#[test]
fn records_are_ordered_and_printable() {
    let data = fedosov(&common::c2(3));
    let records = data.records().unwrap();
    assert!(!records.is_empty());
    let keys: Vec<_> = records.iter().map(|r| (r.i, r.j, r.k)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(records[0].to_string().starts_with("A i="));
}

#[test]
fn torsionful_connection_is_rejected() {
    assert!(matches!(
        FedosovData::new(&common::torsionful(3)),
        Err(graded_pbw::Error::RequiresTorsionFree)
    ));
}
