//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use braidmono::matrix::Matrix;
use braidmono::pointed::{contract_double_braiding, contract_twist};
use braidmono::preorder::verify::{sample_obstruction, verify_certificate};
use braidmono::preorder::{
    check_functor_search, check_preorder_full, check_s_preorder, check_twist_preorder, FullConfig,
    FunctorSearchConfig, OverallVerdict, PreorderMode, SConfig, TwistConfig, Verdict,
};
use braidmono::sampling::{random_deformation, random_object, seeded};
use braidmono::scalar::C;
use braidmono::semisimple::{double_braiding_trace, solution_coefficients, solution_norms, twist_trace};
use braidmono::transport::{transport_matrices, verify_theorem};
use braidmono::{CatalogModel, ConjugateDeformation, ModularData64, PointedCategory64, Side, TensorFunctorData};

const LEMMA_TOL: f64 = 1e-8;
const VERLINDE_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-8;
const CERT_TOL: f64 = 1e-9;
const SAMPLER_DRAWS: u64 = 100_000;
const SEED: u64 = 7;

struct Outcome {
    passed: bool,
    detail: String,
}

fn model(name: &str) -> ModularData64 {
    CatalogModel::parse(name).unwrap().build().unwrap()
}

fn rel(a: C<f64>, b: C<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn catalog_validity() -> Outcome {
    let start = Instant::now();
    let models = CatalogModel::standard();
    let mut failures = Vec::new();
    let mut worst = 0f64;
    for m in &models {
        let md: ModularData64 = m.build().unwrap();
        let report = md.validate(m.is_modular());
        if !report.is_valid() {
            failures.push(format!("{m}: {}", report.messages().join("; ")));
        }
        if m.is_modular() {
            let v = md.verlinde_fusion().unwrap();
            let r = md.rank();
            for (i, x) in v.iter().enumerate() {
                let n = md.ring().n(i / (r * r), (i / r) % r, i % r) as f64;
                worst = worst.max((x - n).abs());
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(1), start);
    Outcome {
        passed: failures.is_empty() && models.len() >= 8 && worst < VERLINDE_TOL && fast,
        detail: format!("{} models, max Verlinde error {worst:.1e}, {time} {}", models.len(), failures.join(" | ")),
    }
}

const POINTED: [&str; 6] = ["toric_code_z2", "toric_code_z3", "toric_code_z4", "toric_code_z5", "semion", "double_semion"];

fn two_path() -> Outcome {
    let start = Instant::now();
    let mut worst = 0f64;
    let mut draws = 0;
    for name in POINTED {
        let md = model(name);
        let pc = PointedCategory64::from_modular_data(&md).unwrap();
        let mut rng = seeded(SEED);
        for _ in 0..100 {
            let rho = random_object(md.ring_arc(), 2, &mut rng);
            let sigma = random_object(md.ring_arc(), 2, &mut rng);
            let t: ConjugateDeformation<f64> = random_deformation(&rho, &mut rng);
            let w: ConjugateDeformation<f64> = random_deformation(&sigma, &mut rng);
            let a = contract_double_braiding(&pc, &t, &w).unwrap();
            let b = double_braiding_trace(&t, &w, &md).unwrap();
            worst = worst.max(rel(a, b));
            let a = contract_twist(&pc, &t).unwrap();
            let b = twist_trace(&t, &md).unwrap();
            worst = worst.max(rel(a, b));
            draws += 1;
        }
    }
    let (fast, time) = within(Duration::from_secs(10), start);
    Outcome {
        passed: worst < LEMMA_TOL && fast,
        detail: format!("{draws} draws over {} models, max relative error {worst:.1e}, {time}", POINTED.len()),
    }
}

fn norm_identities() -> Outcome {
    let mut worst = 0f64;
    let mut draws = 0;
    for name in POINTED.iter().chain(&["fibonacci", "ising"]) {
        let md = model(name);
        let mut rng = seeded(SEED);
        for _ in 0..100 {
            let rho = random_object(md.ring_arc(), 2, &mut rng);
            let t: ConjugateDeformation<f64> = random_deformation(&rho, &mut rng);
            let (left, right) = solution_norms(&t, md.dims()).unwrap();
            for (side, norm) in [(Side::Left, left), (Side::Right, right)] {
                let c = solution_coefficients(&t, side, md.dims()).unwrap();
                let sum: f64 = c.iter().zip(md.dims()).map(|(x, d)| x * d).sum();
                worst = worst.max((sum - norm).abs() / norm.abs().max(1.0));
            }
            draws += 1;
        }
    }
    Outcome {
        passed: worst < LEMMA_TOL,
        detail: format!("{draws} deformations, max relative error {worst:.1e}"),
    }
}

fn theorem() -> Outcome {
    let start = Instant::now();
    let mut fixtures: Vec<(String, TensorFunctorData<f64>)> = CatalogModel::standard()
        .into_iter()
        .map(|m| (m.to_string(), TensorFunctorData::identity(m.build().unwrap())))
        .collect();
    let m = Matrix::from_rows(vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
    fixtures.push((
        "e-embed".into(),
        TensorFunctorData::new(model("decohered_toric_code"), model("toric_code_z2"), m).unwrap(),
    ));
    let mut worst = 0f64;
    let mut failures = Vec::new();
    let mut rng = seeded(SEED);
    for (name, fd) in &fixtures {
        for _ in 0..50 {
            let deformed = fd.clone().with_random_unitary_deformations(&mut rng).unwrap();
            let tr = transport_matrices(&deformed).unwrap();
            worst = worst.max(tr.residuals.max());
            // residual checks plus exact sign and integrality
            let report = verify_theorem(&tr, &deformed, RESIDUAL_TOL);
            let exact = tr.x.iter().chain(tr.y.iter()).all(|&v| v >= 0.0) && tr.n == *deformed.m();
            if !report.passed() || !exact {
                failures.push(name.clone());
            }
        }
    }
    failures.dedup();
    let (fast, time) = within(Duration::from_secs(5), start);
    Outcome {
        passed: failures.is_empty() && worst < RESIDUAL_TOL && fast,
        detail: format!(
            "{} functors x 50 unitary deformations, max residual {worst:.1e}, {time} {}",
            fixtures.len(),
            failures.join(" ")
        ),
    }
}

fn obstruction_regressions() -> Outcome {
    let start = Instant::now();
    let full = |a: &str, b: &str| check_preorder_full(&model(a), &model(b), &FullConfig::default()).unwrap();
    let mut bad = Vec::new();
    let r = full("semion", "trivial");
    let twist_exhaustive = matches!(&r.twist, Some(Verdict::Obstructed(o)) if o.exhaustive);
    if r.verdict != OverallVerdict::Obstructed || r.decided_by != Some(PreorderMode::Twist) || !twist_exhaustive {
        bad.push("semion/trivial");
    }
    let r = full("toric_code_z2", "trivial");
    let exhaustive = r.stages().iter().any(|(_, v)| matches!(v, Some(Verdict::Obstructed(o)) if o.exhaustive));
    if r.verdict != OverallVerdict::Obstructed || !exhaustive {
        bad.push("toric_code/trivial");
    }
    let r = full("decohered_toric_code", "toric_code_z2");
    let certs = r.functor.as_ref().map_or(0, |v| v.certificates().len());
    if r.verdict != OverallVerdict::NoObstruction || certs < 2 {
        bad.push("decohered/toric_code");
    }
    for m in CatalogModel::standard() {
        let md: ModularData64 = m.build().unwrap();
        if check_preorder_full(&md, &md, &FullConfig::default()).unwrap().verdict != OverallVerdict::NoObstruction {
            bad.push("reflexivity");
        }
    }
    let (fast, time) = within(Duration::from_secs(5), start);
    Outcome {
        passed: bad.is_empty() && fast,
        detail: format!("{certs} functor certificates for decohered -> toric code, {time} {}", bad.join(" ")),
    }
}

const PAIRS: [(&str, &str); 12] = [
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
    ("ising", "ising"),
    ("toric_code_z3", "toric_code_z3"),
];

fn certificate_soundness() -> Outcome {
    let (mut certs, mut obstructions, mut bad) = (0, 0, Vec::new());
    for (a, b) in PAIRS {
        let (s, t) = (model(a), model(b));
        let verdicts = [
            check_twist_preorder(s.theta(), s.dims(), t.theta(), t.dims(), &TwistConfig::default()).unwrap(),
            check_functor_search(&s, &t, &FunctorSearchConfig::default()).unwrap(),
            check_s_preorder(s.s(), s.dims(), t.s(), t.dims(), &SConfig::default()).unwrap(),
        ];
        for v in &verdicts {
            for c in v.certificates() {
                certs += 1;
                if !verify_certificate(c, &s, &t, CERT_TOL).passed {
                    bad.push(format!("{a}->{b} {} certificate", c.mode));
                }
            }
            if let Verdict::Obstructed(o) = v {
                if o.exhaustive {
                    obstructions += 1;
                    let out = sample_obstruction(o, &s, &t, SAMPLER_DRAWS, SEED, CERT_TOL);
                    if let Some(c) = out.counterexample {
                        bad.push(format!("{a}->{b} {}: {c}", o.mode));
                    }
                }
            }
        }
    }
    Outcome {
        passed: bad.is_empty() && certs > 0 && obstructions > 0,
        detail: format!(
            "{certs} certificates re-verified, {obstructions} exhaustive obstructions x {SAMPLER_DRAWS} draws {}",
            bad.join(" | ")
        ),
    }
}

fn cli_matrix() -> Vec<Vec<String>> {
    let docs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    let doc = |f: &str| docs.join(f).display().to_string();
    let mut m: Vec<Vec<String>> = vec![
        vec!["catalog".into(), "list".into()],
        vec!["validate".into(), doc("toric_code.json"), "--strict".into()],
        vec!["validate".into(), doc("decohered_toric_code.json")],
        vec!["invariants".into(), "ising".into()],
        vec!["verify-lemmas".into(), "toric_code_z2".into(), "--samples".into(), "100".into(), "--seed".into(), "7".into()],
        vec!["verify-lemmas".into(), "fibonacci".into(), "--samples".into(), "20".into()],
        vec!["transport".into(), "--functor".into(), doc("e-embed.json")],
        vec!["transport".into(), "--functor".into(), doc("e-embed.json"), "--deform".into(), "random".into(), "--seed".into(), "3".into()],
    ];
    for (a, b) in PAIRS {
        for mode in ["twist", "s", "functor", "full"] {
            m.push(vec!["check-preorder".into(), "--source".into(), a.into(), "--target".into(), b.into(), "--mode".into(), mode.into()]);
        }
    }
    m.push(vec![
        "check-preorder".into(), "--source".into(), "semion".into(), "--target".into(), "trivial".into(),
        "--mode".into(), "twist".into(), "--sample-draws".into(), "1000".into(),
    ]);
    m
}

fn run_matrix() -> Vec<(Vec<String>, i32, Vec<u8>)> {
    cli_matrix()
        .into_iter()
        .map(|args| {
            let out = Command::new(env!("CARGO_BIN_EXE_braidmono"))
                .env_remove("BRAIDMONO_TOL")
                .args(&args)
                .args(["--output", "machine"])
                .output()
                .expect("binary runs");
            (args, out.status.code().unwrap_or(-1), out.stdout)
        })
        .collect()
}

fn determinism() -> Outcome {
    let first = run_matrix();
    let second = run_matrix();
    let mut differ: Vec<String> = first
        .iter()
        .zip(&second)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.join(" "))
        .collect();
    for (args, code, stdout) in &first {
        let parsed: Result<serde_json::Value, _> = serde_json::from_slice(stdout);
        if !matches!(code, 0..=2) || parsed.is_err() {
            differ.push(format!("{} (exit {code})", args.join(" ")));
        }
    }
    Outcome {
        passed: differ.is_empty(),
        detail: format!("{} invocations run twice {}", first.len(), differ.join(" | ")),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("catalog validity", catalog_validity),
        ("two-path lemma verification", two_path),
        ("coefficient norm identities", norm_identities),
        ("transport theorem", theorem),
        ("obstruction regressions", obstruction_regressions),
        ("certificate soundness", certificate_soundness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let out = f();
        if !out.passed {
            failed += 1;
        }
        println!(
            "acceptance {}: {} [{name}] {}",
            i + 1,
            if out.passed { "PASS" } else { "FAIL" },
            out.detail.trim_end()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
