//! Catalog-wide structural checks: rings, dimensions, Verlinde, products,
//! and the pointed construction against the catalog tables.

use braidmono::pointed::pointed_modular_data;
use braidmono::{CatalogModel, ModularData64, PointedCategory64};

fn build(m: &CatalogModel) -> ModularData64 {
    m.build().unwrap()
}

#[test]
fn catalog_rings_valid() {
    for model in CatalogModel::standard() {
        let md = build(&model);
        let report = md.ring().validate();
        assert!(report.is_valid(), "{model}: {:?}", report.messages());
    }
}

#[test]
fn computed_dims_satisfy_fusion() {
    for model in CatalogModel::standard() {
        let md = build(&model);
        let ring = md.ring();
        let d: Vec<f64> = ring.quantum_dims().unwrap();
        let r = ring.rank();
        for a in 0..r {
            assert!((d[ring.dual(a)] - d[a]).abs() < 1e-9, "{model}");
            assert!((d[a] - md.dims()[a]).abs() < 1e-9, "{model}: stored dims disagree");
            for b in 0..r {
                let rhs: f64 = (0..r).map(|c| ring.n(a, b, c) as f64 * d[c]).sum();
                assert!((d[a] * d[b] - rhs).abs() < 1e-9, "{model}: ({a},{b})");
            }
        }
    }
}

#[test]
fn strict_models_pass_verlinde() {
    for model in CatalogModel::standard() {
        let md = build(&model);
        let report = md.validate(model.is_modular());
        assert!(report.is_valid(), "{model}: {:?}", report.messages());
        if model.is_modular() {
            let v = md.verlinde_fusion().unwrap();
            let r = md.rank();
            for (i, x) in v.iter().enumerate() {
                let (a, b, c) = (i / (r * r), (i / r) % r, i % r);
                assert!((x - md.ring().n(a, b, c) as f64).abs() < 1e-8, "{model}");
            }
        } else {
            assert!(md.validate(true).has("modularity"), "{model}");
        }
    }
}

#[test]
fn products_are_kronecker() {
    let pairs = [("semion", "fibonacci"), ("toric_code_z3", "semion"), ("ising", "double_semion")];
    for (a, b) in pairs {
        let ma = build(&CatalogModel::parse(a).unwrap());
        let mb = build(&CatalogModel::parse(b).unwrap());
        let p = build(&CatalogModel::parse(&format!("product({a},{b})")).unwrap());
        let (ra, rb) = (ma.rank(), mb.rank());
        for i in 0..ra * rb {
            let th = ma.theta()[i / rb] * mb.theta()[i % rb];
            assert!((p.theta()[i] - th).norm() < 1e-12);
            for j in 0..ra * rb {
                let s = ma.s()[(i / rb, j / rb)] * mb.s()[(i % rb, j % rb)];
                assert!((p.s()[(i, j)] - s).norm() < 1e-12, "{a}x{b} ({i},{j})");
            }
        }
        assert!(p.validate(true).is_valid());
    }
}

#[test]
fn pointed_construction_matches_catalog() {
    let mut cases: Vec<(String, PointedCategory64)> = (2..=5)
        .map(|n| (format!("toric_code_z{n}"), PointedCategory64::toric_code(n).unwrap()))
        .collect();
    cases.push(("semion".into(), PointedCategory64::semion()));
    cases.push(("double_semion".into(), PointedCategory64::double_semion()));
    for (name, pc) in cases {
        let from_pc = pointed_modular_data(&pc).unwrap();
        let cat = build(&CatalogModel::parse(&name).unwrap());
        // names differ ("(1,0)" vs "e"); index order is shared
        assert_eq!(from_pc.rank(), cat.rank(), "{name}");
        let r = cat.rank();
        for a in 0..r {
            assert!((from_pc.theta()[a] - cat.theta()[a]).norm() < 1e-12, "{name} θ({a})");
            for b in 0..r {
                assert!((from_pc.s()[(a, b)] - cat.s()[(a, b)]).norm() < 1e-12, "{name} S({a},{b})");
            }
        }
    }
}
