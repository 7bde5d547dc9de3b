//! End-to-end checker behavior: verdicts on the standard scenarios,
//! independent re-verification of every certificate, and sampling behind
//! exhaustive obstructions.

use braidmono::matrix::Matrix;
use braidmono::preorder::verify::{sample_obstruction, verify_certificate};
use braidmono::preorder::{
    check_functor_search, check_preorder_full, check_s_preorder, check_twist_preorder, FullConfig,
    FunctorSearchConfig, MonotoneCertificate, OverallVerdict, PreorderMode, SConfig, TwistConfig, Verdict,
};
use braidmono::transport::{compose, transport_matrices, verify_theorem};
use braidmono::{CatalogModel, ModularData64, TensorFunctorData};

fn model(name: &str) -> ModularData64 {
    CatalogModel::parse(name).unwrap().build().unwrap()
}

const PAIRS: [(&str, &str); 10] = [
    ("semion", "trivial"),
    ("toric_code_z2", "trivial"),
    ("decohered_toric_code", "toric_code_z2"),
    ("trivial", "fibonacci"),
    ("fibonacci", "ising"),
    ("semion", "double_semion"),
    ("double_semion", "semion"),
    ("decohered_toric_code", "double_semion"),
    ("toric_code_z2", "toric_code_z3"),
    ("semion", "product(semion,fibonacci)"),
];

fn all_verdicts(s: &ModularData64, t: &ModularData64) -> Vec<Verdict<f64>> {
    vec![
        check_twist_preorder(s.theta(), s.dims(), t.theta(), t.dims(), &TwistConfig::default()).unwrap(),
        check_functor_search(s, t, &FunctorSearchConfig::default()).unwrap(),
        check_s_preorder(s.s(), s.dims(), t.s(), t.dims(), &SConfig::default()).unwrap(),
    ]
}

#[test]
fn every_certificate_reverifies() {
    let mut checked = 0;
    for (a, b) in PAIRS {
        let (s, t) = (model(a), model(b));
        for v in all_verdicts(&s, &t) {
            for c in v.certificates() {
                let check = verify_certificate(c, &s, &t, 1e-9);
                assert!(check.passed, "{a} -> {b} {:?}: {:?}", c.mode, check.failures);
                checked += 1;
            }
        }
    }
    assert!(checked >= 10, "only {checked} certificates");
}

#[test]
fn exhaustive_obstructions_survive_sampling() {
    let mut sampled = 0;
    for (a, b) in PAIRS {
        let (s, t) = (model(a), model(b));
        for v in all_verdicts(&s, &t) {
            if let Verdict::Obstructed(o) = v {
                if o.exhaustive {
                    let out = sample_obstruction(&o, &s, &t, 20_000, 7, 1e-9);
                    assert_eq!(out.counterexample, None, "{a} -> {b} {:?}", o.mode);
                    sampled += 1;
                }
            }
        }
    }
    assert!(sampled >= 4);
}

#[test]
fn reflexive_on_catalog() {
    for m in CatalogModel::standard() {
        let md: ModularData64 = m.build().unwrap();
        let r = check_preorder_full(&md, &md, &FullConfig::default()).unwrap();
        assert_eq!(r.verdict, OverallVerdict::NoObstruction, "{m}");
    }
}

fn functor_m(v: &Verdict<f64>) -> Matrix<u32> {
    v.certificates()[0].m.clone().expect("functor certificate carries M")
}

#[test]
fn transitive_through_functor_certificates() {
    let (a, b, c) = (model("trivial"), model("decohered_toric_code"), model("toric_code_z2"));
    let cfg = FunctorSearchConfig::default();
    let ab = check_functor_search(&a, &b, &cfg).unwrap();
    let bc = check_functor_search(&b, &c, &cfg).unwrap();
    for c_bc in bc.certificates() {
        let f = TensorFunctorData::new(a.clone(), b.clone(), functor_m(&ab)).unwrap();
        let g = TensorFunctorData::new(b.clone(), c.clone(), c_bc.m.clone().unwrap()).unwrap();
        let gf = compose(&f, &g).unwrap();
        let tr = transport_matrices(&gf).unwrap();
        assert!(verify_theorem(&tr, &gf, 1e-9).passed());
        let cert = MonotoneCertificate {
            mode: PreorderMode::Functor,
            n: Some(tr.n.clone()),
            m: Some(gf.m().clone()),
            x: Some(tr.x.clone()),
            y: Some(tr.y.clone()),
            residuals: vec![],
        };
        assert!(verify_certificate(&cert, &a, &c, 1e-9).passed);
    }
}

#[test]
fn motivating_scenarios() {
    let full = |a: &str, b: &str| check_preorder_full(&model(a), &model(b), &FullConfig::default()).unwrap();
    let r = full("semion", "trivial");
    assert_eq!((r.verdict, r.decided_by), (OverallVerdict::Obstructed, Some(PreorderMode::Twist)));
    assert!(matches!(r.twist, Some(Verdict::Obstructed(ref o)) if o.exhaustive));
    assert_eq!(full("toric_code_z2", "trivial").verdict, OverallVerdict::Obstructed);
    let r = full("decohered_toric_code", "toric_code_z2");
    assert_eq!(r.verdict, OverallVerdict::NoObstruction);
    assert!(r.functor.unwrap().certificates().len() >= 2);
    assert!(r.note.contains("not a proof"));
}
