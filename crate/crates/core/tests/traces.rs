//! Randomized identities for traces and the two evaluation paths of the
//! braiding traces.

use braidmono::pointed::{contract_double_braiding, contract_twist};
use braidmono::sampling::{random_deformation, random_morphism, random_object, seeded};
use braidmono::scalar::C;
use braidmono::semisimple::{
    categorical_trace, double_braiding_trace, solution_coefficients, solution_norms, standard_double_braiding,
    twist_trace,
};
use braidmono::{CatalogModel, ConjugateDeformation, ModularData64, PointedCategory64, Side};
use proptest::prelude::*;

const MODELS: [&str; 8] = [
    "toric_code_z2",
    "toric_code_z3",
    "semion",
    "double_semion",
    "fibonacci",
    "ising",
    "decohered_toric_code",
    "product(semion,fibonacci)",
];

const POINTED: [&str; 6] = ["toric_code_z2", "toric_code_z3", "toric_code_z4", "toric_code_z5", "semion", "double_semion"];

fn model(name: &str) -> ModularData64 {
    CatalogModel::parse(name).unwrap().build().unwrap()
}

fn rel(a: C<f64>, b: C<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_is_cyclic(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let md = model(MODELS[idx]);
        let mut rng = seeded(seed);
        let rho = random_object(md.ring_arc(), 3, &mut rng);
        let sigma = random_object(md.ring_arc(), 3, &mut rng);
        let x = random_morphism::<f64>(&rho, &sigma, &mut rng);
        let y = random_morphism::<f64>(&sigma, &rho, &mut rng);
        let xy = categorical_trace(&x.compose(&y).unwrap(), md.dims()).unwrap();
        let yx = categorical_trace(&y.compose(&x).unwrap(), md.dims()).unwrap();
        prop_assert!((xy - yx).norm() < 1e-10 * xy.norm().max(1.0));
    }

    #[test]
    fn trace_is_positive(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let md = model(MODELS[idx]);
        let mut rng = seeded(seed);
        let rho = random_object(md.ring_arc(), 3, &mut rng);
        let x = random_morphism::<f64>(&rho, &rho, &mut rng);
        let t = categorical_trace(&x.adjoint().compose(&x).unwrap(), md.dims()).unwrap();
        prop_assert!(t.re > 0.0 && t.im.abs() < 1e-12 * t.re);
    }

    #[test]
    fn coefficient_norms(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let md = model(MODELS[idx]);
        let mut rng = seeded(seed);
        let rho = random_object(md.ring_arc(), 3, &mut rng);
        let def: ConjugateDeformation<f64> = random_deformation(&rho, &mut rng);
        let (left, right) = solution_norms(&def, md.dims()).unwrap();
        for (side, norm) in [(Side::Left, left), (Side::Right, right)] {
            let coeffs = solution_coefficients(&def, side, md.dims()).unwrap();
            let sum: f64 = coeffs.iter().zip(md.dims()).map(|(c, d)| c * d).sum();
            prop_assert!((sum - norm).abs() <= 1e-8 * norm.abs(), "{side:?}: {sum} vs {norm}");
            prop_assert!(coeffs.iter().all(|&c| c >= 0.0));
        }
    }

    #[test]
    fn twist_trace_ignores_deformation(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let md = model(MODELS[idx]);
        let mut rng = seeded(seed);
        let rho = random_object(md.ring_arc(), 3, &mut rng);
        let def: ConjugateDeformation<f64> = random_deformation(&rho, &mut rng);
        let plain = twist_trace(&ConjugateDeformation::standard(&rho).unwrap(), &md).unwrap();
        prop_assert!(rel(twist_trace(&def, &md).unwrap(), plain) < 1e-8);
    }

    #[test]
    fn standard_solutions(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let md = model(MODELS[idx]);
        let mut rng = seeded(seed);
        let rho = random_object(md.ring_arc(), 3, &mut rng);
        let sigma = random_object(md.ring_arc(), 3, &mut rng);
        let (r, s) = (ConjugateDeformation::standard(&rho).unwrap(), ConjugateDeformation::standard(&sigma).unwrap());
        let v = double_braiding_trace(&r, &s, &md).unwrap();
        prop_assert!(rel(v, standard_double_braiding(&rho, &sigma, &md)) < 1e-12);
    }

    #[test]
    fn pointed_two_paths_agree(idx in 0..POINTED.len(), seed in any::<u64>()) {
        let md = model(POINTED[idx]);
        let pc = PointedCategory64::from_modular_data(&md).unwrap();
        let mut rng = seeded(seed);
        let rho = random_object(md.ring_arc(), 2, &mut rng);
        let sigma = random_object(md.ring_arc(), 2, &mut rng);
        let t: ConjugateDeformation<f64> = random_deformation(&rho, &mut rng);
        let w: ConjugateDeformation<f64> = random_deformation(&sigma, &mut rng);
        let fast = double_braiding_trace(&t, &w, &md).unwrap();
        let slow = contract_double_braiding(&pc, &t, &w).unwrap();
        prop_assert!(rel(slow, fast) < 1e-8, "{slow} vs {fast}");
        let fast = twist_trace(&t, &md).unwrap();
        let slow = contract_twist(&pc, &t).unwrap();
        prop_assert!(rel(slow, fast) < 1e-8, "{slow} vs {fast}");
    }
}
