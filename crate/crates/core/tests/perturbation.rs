mod common;
mod toy;

use graded_pbw::fedosov::{delta_inv, FedosovData};
use graded_pbw::perturbation::{
    check_contraction, delta_contraction, fedosov_resolution, linear_map, perturb_contraction,
    Filtered,
};
use graded_pbw::sample::Sampler;
use graded_pbw::{Error, GradedPoly};
use toy::{apply, as_map, Vector};

#[test]
fn toy_contraction_passes() {
    let report = check_contraction(&toy::contraction(toy::homotopy()), &toy::big_basis(), &toy::small_basis());
    assert!(report.all_passed(), "{report}");
    assert!(report.to_string().lines().all(|l| l.starts_with("IDENTITY ") && l.ends_with(" PASS")));
}

#[test]
fn toy_perturbation_matches_the_closed_form() {
    let c = toy::contraction(toy::homotopy());
    let p = as_map(toy::perturbation(), &toy::BIG_WEIGHTS);
    let out = perturb_contraction(&c, p, &toy::big_basis(), 8).unwrap();
    let o = toy::oracle();
    for v in toy::big_basis() {
        let s = (out.contraction.sigma)(&v).unwrap();
        assert_eq!(s.coords, apply(&o.sigma, &v.coords), "sigma on {v}");
        let h = (out.contraction.h)(&v).unwrap();
        assert_eq!(h.coords, apply(&o.h, &v.coords), "h on {v}");
    }
    for m in toy::small_basis() {
        let t = (out.contraction.tau)(&m).unwrap();
        assert_eq!(t.coords, apply(&o.tau, &m.coords), "tau on {m}");
        let th = (out.theta)(&m).unwrap();
        assert_eq!(th.coords, apply(&o.theta, &m.coords), "theta on {m}");
    }
    // τ̆(a) = a - b and ϑ(a) = -e
    assert_eq!((out.contraction.tau)(&Vector::small([1, 0])).unwrap(), Vector::big([1, -1, 0, 0]));
    assert_eq!((out.theta)(&Vector::small([1, 0])).unwrap(), Vector::small([0, -1]));
    let report = check_contraction(&out.contraction, &toy::big_basis(), &toy::small_basis());
    assert!(report.all_passed(), "{report}");
}

#[test]
fn zero_perturbation_changes_nothing() {
    let c = toy::contraction(toy::homotopy());
    let zero = linear_map(|v: &Vector| Ok(v.zero_like()));
    let out = perturb_contraction(&c, zero, &toy::big_basis(), 4).unwrap();
    for v in toy::big_basis() {
        assert_eq!((out.contraction.h)(&v).unwrap(), (c.h)(&v).unwrap());
        assert_eq!((out.contraction.sigma)(&v).unwrap(), (c.sigma)(&v).unwrap());
    }
    for m in toy::small_basis() {
        assert_eq!((out.contraction.tau)(&m).unwrap(), (c.tau)(&m).unwrap());
        assert!((out.theta)(&m).unwrap().is_zero());
    }
}

#[test]
fn broken_side_condition_is_detected() {
    // h(e) = a keeps the homotopy identity but breaks σh = 0 and hτ = 0
    let mut h = toy::homotopy();
    h[0][3] = graded_pbw::graded::rational(1);
    let report = check_contraction(&toy::contraction(h), &toy::big_basis(), &toy::small_basis());
    assert!(report.get("homotopy").unwrap().passed());
    assert!(!report.get("sigma_h").unwrap().passed());
    assert!(!report.get("h_tau").unwrap().passed());
    assert!(report.to_string().contains("IDENTITY sigma_h FAIL input="));
}

#[test]
fn weight_preserving_perturbation_is_rejected() {
    let c = toy::contraction(toy::homotopy());
    let p = as_map(toy::delta(), &toy::BIG_WEIGHTS);
    assert!(matches!(
        perturb_contraction(&c, p, &toy::big_basis(), 4),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn empty_complex_passes_vacuously() {
    let report = check_contraction(&toy::contraction(toy::homotopy()), &[], &[]);
    assert!(report.all_passed());
}

fn probes(data: &FedosovData, seed: u64) -> Vec<GradedPoly> {
    let mut s = Sampler::new(data.chart(), seed);
    let n = data.max_weight();
    (0..12).map(|k| s.section(k % 3, n, 3, 2)).collect()
}

fn functions(data: &FedosovData, seed: u64) -> Vec<GradedPoly> {
    let mut s = Sampler::new(data.chart(), seed);
    (0..6).map(|_| s.function(3, 2)).collect()
}

#[test]
fn delta_contraction_passes() {
    for (name, conn) in common::torsion_free_charts(3) {
        let data = FedosovData::new(&conn).unwrap();
        let report = check_contraction(&delta_contraction(&data), &probes(&data, 1), &functions(&data, 2));
        assert!(report.all_passed(), "{name}\n{report}");
    }
}

#[test]
fn unnormalized_homotopy_fails() {
    let conn = common::c2(3);
    let data = FedosovData::new(&conn).unwrap();
    let mut c = delta_contraction(&data);
    c.h = linear_map(|x: &GradedPoly| {
        let chart = x.chart().clone();
        let mut out = GradedPoly::zero(&chart);
        for (m, coeff) in x.terms() {
            let t = GradedPoly::term(&chart, *m, coeff.clone());
            let w = graded_pbw::fedosov::filtration_weight(&chart, m);
            out += &delta_inv(&t).scale(&graded_pbw::graded::rational(w.max(1) as i64));
        }
        Ok(out)
    });
    let report = check_contraction(&c, &probes(&data, 3), &functions(&data, 4));
    assert!(!report.get("homotopy").unwrap().passed(), "{report}");
}

#[test]
fn perturbed_tau_is_the_series() {
    for (name, conn) in common::torsion_free_charts(3) {
        let data = FedosovData::new(&conn).unwrap();
        let ps = probes(&data, 5);
        let res = fedosov_resolution(&data, &ps).unwrap();
        for f in functions(&data, 6) {
            assert_eq!((res.contraction.tau)(&f).unwrap(), data.tau_series(&f).unwrap(), "{name}");
            assert!((res.theta)(&f).unwrap().is_zero());
        }
        let report = check_contraction(&res.contraction, &ps, &functions(&data, 7));
        assert!(report.all_passed(), "{name}\n{report}");
    }
}
