use std::path::PathBuf;
use std::time::Instant;

use braidmono::matrix::Matrix;
use braidmono::modular::DEFAULT_TOLERANCE;
use braidmono::pointed::{contract_double_braiding, contract_twist};
use braidmono::preorder::verify::{sample_obstruction, verify_certificate};
use braidmono::preorder::{
    check_functor_search, check_preorder_full, check_s_preorder, check_twist_preorder, FullConfig, FunctorSearchConfig,
    MonotoneCertificate, OverallVerdict, SConfig, TwistConfig, Verdict, NO_OBSTRUCTION_NOTE,
};
use braidmono::sampling::{random_deformation, random_object, seeded, DEFAULT_SEED};
use braidmono::scalar::C;
use braidmono::semisimple::{
    double_braiding_trace, solution_coefficients, solution_norms, standard_double_braiding, twist_trace,
};
use braidmono::transport::{transport_matrices, verify_theorem, FunctorCheckOptions};
use braidmono::{CatalogModel, ConjugateDeformation, ModularData64, PointedCategory, Side};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::io::{load_functor, parse_category, resolve_category, CategoryFile, LoadError};
use crate::report::{OutputFormat, RunReport};

/// Relative error allowed between two evaluations of one lemma.
pub const LEMMA_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "braidmono", version, about = "Modular data invariants and monotone preorder checks")]
pub struct Cli {
    /// Absolute tolerance; commands fall back to their own default when unset.
    #[arg(long, global = true, env = "BRAIDMONO_TOL")]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub output: OutputFormat,
    /// Record wall-clock time in the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog models or export one as a category file.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check a category file or catalog model.
    Validate {
        model: String,
        /// Also require modularity and Verlinde integrality.
        #[arg(long)]
        strict: bool,
    },
    /// Print S, θ, d and D².
    Invariants { model: String },
    /// Randomized checks of the trace identities.
    VerifyLemmas {
        model: String,
        #[arg(long, default_value_t = 100)]
        samples: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Transported solutions of a tensor functor: X, Y, N and residuals.
    Transport {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long, value_enum, default_value = "file")]
        deform: Deform,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Search for monotones relating a degraded source to a clean target.
    CheckPreorder {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "full")]
        mode: Mode,
        /// Cap on every integer multiplicity.
        #[arg(long, default_value_t = braidmono::preorder::DEFAULT_BOUND)]
        bound: u32,
        /// Twist mode only: drop the dimension and vacuum-row constraints.
        #[arg(long)]
        literal: bool,
        /// Seed for the S-matrix multistart.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random draws used to cross-check an exhaustive obstruction.
        #[arg(long, default_value_t = 0)]
        sample_draws: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Export {
        name: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Deform {
    /// Deformations given in the functor file (standard solutions elsewhere).
    File,
    None,
    /// Random unitary deformation on every image object.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Twist,
    S,
    Functor,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 3 } else { 0 };
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    let started = Instant::now();
    let mut report = RunReport::new(argv.iter().skip(1).cloned().collect(), Map::new());
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Outcome {
                code: 3,
                stdout: String::new(),
                stderr: format!("error: --tol must be a positive number, got {t}\n"),
            };
        }
    }
    report.config.insert("tol_override".into(), json!(cli.tol));
    let res = match &cli.command {
        Command::Catalog {
            action: CatalogAction::Export { name, out },
        } => return export(name, out.as_ref()),
        Command::Catalog {
            action: CatalogAction::List,
        } => catalog_list(&mut report),
        Command::Validate { model, strict } => validate(&mut report, model, *strict, cli.tol),
        Command::Invariants { model } => invariants(&mut report, model, cli.tol),
        Command::VerifyLemmas { model, samples, seed } => verify_lemmas(&mut report, model, *samples, *seed, cli.tol),
        Command::Transport { functor, deform, seed } => transport(&mut report, functor, *deform, *seed, cli.tol),
        Command::CheckPreorder {
            source,
            target,
            mode,
            bound,
            literal,
            seed,
            sample_draws,
        } => check_preorder(
            &mut report,
            &PreorderArgs {
                source,
                target,
                mode: *mode,
                bound: *bound,
                literal: *literal,
                seed: *seed,
                sample_draws: *sample_draws,
                tol: cli.tol,
            },
        ),
    };
    if let Err(e) = res {
        report.exit_code = e.exit_code();
        report.status = if e.exit_code() == 1 { "INVALID" } else { "INPUT-ERROR" }.into();
        report.result = json!({ "error": e.to_string() });
    }
    if cli.timing {
        report.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    Outcome {
        code: report.exit_code,
        stdout: report.render(cli.output),
        stderr: String::new(),
    }
}

fn load(arg: &str, tol: Option<f64>) -> Result<(ModularData64, String), LoadError> {
    let (md, name) = resolve_category(arg, None)?;
    Ok(match tol {
        Some(t) => (md.with_tolerance(t), name),
        None => (md, name),
    })
}

fn cx(z: &C<f64>) -> Value {
    json!([z.re, z.im])
}

fn cvec(v: &[C<f64>]) -> Value {
    Value::from(v.iter().map(cx).collect::<Vec<_>>())
}

fn rmatrix(m: &Matrix<f64>) -> Value {
    json!(m.to_rows())
}

fn umatrix(m: &Matrix<u32>) -> Value {
    json!(m.to_rows())
}

fn export(name: &str, out: Option<&PathBuf>) -> Outcome {
    let fail = |msg: String| Outcome {
        code: 3,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    };
    let model = match CatalogModel::parse(name) {
        Ok(m) => m,
        Err(e) => return fail(e.to_string()),
    };
    let md: ModularData64 = match model.build() {
        Ok(md) => md,
        Err(e) => return fail(e.to_string()),
    };
    let text = CategoryFile::from_modular_data(&md, Some(&model.to_string()), Some("braidmono catalog")).to_json();
    match out {
        None => Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        },
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => Outcome {
                code: 0,
                stdout: format!("wrote {}\n", path.display()),
                stderr: String::new(),
            },
            Err(e) => fail(format!("{}: {e}", path.display())),
        },
    }
}

fn catalog_list(report: &mut RunReport) -> Result<(), LoadError> {
    let mut models = Vec::new();
    for model in CatalogModel::standard() {
        let md: ModularData64 = model.build().map_err(|e| LoadError::Parse {
            location: model.to_string(),
            message: e.to_string(),
        })?;
        models.push(json!({
            "name": model.to_string(),
            "rank": md.rank(),
            "modular": model.is_modular(),
            "pointed": model.is_pointed(),
            "labels": md.ring().names(),
        }));
    }
    report.status = "OK".into();
    report.result = json!({
        "models": models,
        "families": [
            "toric_code_zN for 2 <= N <= 8 (also toric_code(N))",
            "fibonacci(1), ising(1): complex-conjugate twists",
            "product(A,B): Deligne product of two catalog models",
        ],
    });
    Ok(())
}

fn validate(report: &mut RunReport, arg: &str, strict: bool, tol: Option<f64>) -> Result<(), LoadError> {
    report.config.insert("strict".into(), json!(strict));
    // parse only; the full report is produced here rather than by the loader
    let (md, name) = if std::path::Path::new(arg).is_file() || arg.ends_with(".json") {
        let text = std::fs::read_to_string(arg).map_err(|e| LoadError::Io {
            path: arg.to_string(),
            message: e.to_string(),
        })?;
        (parse_category(&text, arg)?, arg.to_string())
    } else {
        resolve_category(arg, None)?
    };
    let md = match tol {
        Some(t) => md.with_tolerance(t),
        None => md,
    };
    report.config.insert("tolerance".into(), json!(md.tolerance()));
    let v = md.validate(strict);
    report.exit_code = if v.is_valid() { 0 } else { 1 };
    report.status = if v.is_valid() { "VALID" } else { "INVALID" }.into();
    report.result = json!({
        "model": name,
        "rank": md.rank(),
        "violations": v.violations,
        "warnings": v.warnings,
    });
    Ok(())
}

fn invariants(report: &mut RunReport, arg: &str, tol: Option<f64>) -> Result<(), LoadError> {
    let (md, name) = load(arg, tol)?;
    let ring = md.ring();
    let d2 = md.global_dim_sq();
    let modular = md.validate(true).is_valid();
    report.status = "OK".into();
    report.result = json!({
        "model": name,
        "rank": md.rank(),
        "labels": ring.names(),
        "dual": ring.duals().iter().map(|&d| ring.name(d)).collect::<Vec<_>>(),
        "modular": modular,
        "dims": md.dims(),
        "global_dim_sq": d2,
        "global_dim": d2.sqrt(),
        "theta": cvec(md.theta()),
        "twist_traces": cvec(&md.twist_traces()),
        "s": (0..md.rank()).map(|a| (0..md.rank()).map(|b| cx(&md.s()[(a, b)])).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(())
}

#[derive(Default)]
struct Suite {
    samples: u32,
    agreements: u32,
    max_rel_error: f64,
    first_failure: Option<String>,
}

impl Suite {
    fn record(&mut self, lhs: C<f64>, rhs: C<f64>, what: impl FnOnce() -> String) {
        self.samples += 1;
        let err = (lhs - rhs).norm() / rhs.norm().max(1.0);
        self.max_rel_error = self.max_rel_error.max(err);
        if err <= LEMMA_TOLERANCE {
            self.agreements += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(format!("{}: {lhs} vs {rhs}", what()));
        }
    }

    fn value(&self, name: &str) -> Value {
        json!({
            "suite": name,
            "samples": self.samples,
            "agreements": self.agreements,
            "max_rel_error": self.max_rel_error,
            "first_failure": self.first_failure,
        })
    }

    fn passed(&self) -> bool {
        self.agreements == self.samples
    }
}

fn re(x: f64) -> C<f64> {
    C::new(x, 0.0)
}

fn verify_lemmas(report: &mut RunReport, arg: &str, samples: u32, seed: u64, tol: Option<f64>) -> Result<(), LoadError> {
    let (md, name) = load(arg, tol)?;
    report.config.insert("samples".into(), json!(samples));
    report.config.insert("seed".into(), json!(seed));
    report.config.insert("relative_tolerance".into(), json!(LEMMA_TOLERANCE));
    let numeric = |e: braidmono::Error| LoadError::Parse {
        location: name.clone(),
        message: e.to_string(),
    };
    let pointed = PointedCategory::from_modular_data(&md).ok();
    let dims = md.dims();
    let ring = md.ring_arc().clone();
    let mut rng = seeded(seed);
    let mut norms_left = Suite::default();
    let mut norms_right = Suite::default();
    let mut standard = Suite::default();
    let mut twist_invariance = Suite::default();
    let mut two_path_braiding = Suite::default();
    let mut two_path_twist = Suite::default();
    for i in 0..samples {
        let rho = random_object(&ring, 2, &mut rng);
        let sigma = random_object(&ring, 2, &mut rng);
        let t: ConjugateDeformation<f64> = random_deformation(&rho, &mut rng);
        let w: ConjugateDeformation<f64> = random_deformation(&sigma, &mut rng);
        let (r_norm, rbar_norm) = solution_norms(&t, dims).map_err(numeric)?;
        let tl = solution_coefficients(&t, Side::Left, dims).map_err(numeric)?;
        let tr = solution_coefficients(&t, Side::Right, dims).map_err(numeric)?;
        let weighted = |c: &[f64]| c.iter().zip(dims).map(|(x, d)| x * d).sum::<f64>();
        norms_left.record(re(weighted(&tl)), re(r_norm), || format!("draw {i}"));
        norms_right.record(re(weighted(&tr)), re(rbar_norm), || format!("draw {i}"));

        let (sr, ss) = (
            ConjugateDeformation::standard(&rho).map_err(numeric)?,
            ConjugateDeformation::standard(&sigma).map_err(numeric)?,
        );
        let lhs = double_braiding_trace(&sr, &ss, &md).map_err(numeric)?;
        standard.record(lhs, standard_double_braiding(&rho, &sigma, &md), || format!("draw {i}"));

        let deformed = twist_trace(&t, &md).map_err(numeric)?;
        twist_invariance.record(deformed, twist_trace(&sr, &md).map_err(numeric)?, || format!("draw {i}"));

        if let Some(pc) = &pointed {
            let tr_val = double_braiding_trace(&t, &w, &md).map_err(numeric)?;
            let contracted = contract_double_braiding(pc, &t, &w).map_err(numeric)?;
            two_path_braiding.record(contracted, tr_val, || format!("draw {i}"));
            let contracted = contract_twist(pc, &t).map_err(numeric)?;
            two_path_twist.record(contracted, deformed, || format!("draw {i}"));
        }
    }
    let mut suites = vec![
        ("coefficient norms, R side", &norms_left),
        ("coefficient norms, Rbar side", &norms_right),
        ("standard solutions, double braiding", &standard),
        ("twist trace, deformation invariance", &twist_invariance),
    ];
    if pointed.is_some() {
        suites.push(("two-path double braiding", &two_path_braiding));
        suites.push(("two-path twist", &two_path_twist));
    }
    let ok = suites.iter().all(|(_, s)| s.passed());
    report.exit_code = if ok { 0 } else { 1 };
    report.status = if ok { "PASS" } else { "FAIL" }.into();
    report.result = json!({
        "model": name,
        "pointed": pointed.is_some(),
        "suites": suites.iter().map(|(n, s)| s.value(n)).collect::<Vec<_>>(),
    });
    if pointed.is_none() {
        report.notes.push("not pointed: two-path contraction suites skipped".into());
    }
    Ok(())
}

fn transport(report: &mut RunReport, path: &PathBuf, deform: Deform, seed: u64, tol: Option<f64>) -> Result<(), LoadError> {
    let tol = tol.unwrap_or(braidmono::transport::THEOREM_TOLERANCE);
    report.config.insert("tolerance".into(), json!(tol));
    report.config.insert("deform".into(), json!(format!("{deform:?}").to_lowercase()));
    if deform == Deform::Random {
        report.config.insert("seed".into(), json!(seed));
    }
    let fd = load_functor(path)?;
    let fd = match deform {
        Deform::File => fd,
        Deform::None => fd.clear_deformations(),
        Deform::Random => fd
            .with_random_unitary_deformations(&mut seeded(seed))
            .map_err(|e| LoadError::Parse {
                location: path.display().to_string(),
                message: e.to_string(),
            })?,
    };
    let validation = fd.validate(FunctorCheckOptions {
        tolerance: tol,
        ..FunctorCheckOptions::default()
    });
    if !validation.is_valid() {
        report.exit_code = 1;
        report.status = "INVALID".into();
        report.result = json!({ "functor_violations": validation.violations });
        return Ok(());
    }
    let tr = transport_matrices(&fd).map_err(|e| LoadError::Parse {
        location: path.display().to_string(),
        message: e.to_string(),
    })?;
    let theorem = verify_theorem(&tr, &fd, tol);
    report.exit_code = if theorem.passed() { 0 } else { 1 };
    report.status = if theorem.passed() { "PASS" } else { "FAIL" }.into();
    let r = tr.residuals;
    report.result = json!({
        "source_labels": fd.source().ring().names(),
        "target_labels": fd.target().ring().names(),
        "M": umatrix(fd.m()),
        "X": rmatrix(&tr.x),
        "Y": rmatrix(&tr.y),
        "N": umatrix(&tr.n),
        "residuals": {
            "S2 - X S1 Y": r.s,
            "X d1 - d2": r.dims_x,
            "Y^T d1 - d2": r.dims_y,
            "theta2 - N theta1": r.theta,
        },
        "checks": theorem.checks,
    });
    Ok(())
}

struct PreorderArgs<'a> {
    source: &'a str,
    target: &'a str,
    mode: Mode,
    bound: u32,
    literal: bool,
    seed: u64,
    sample_draws: u64,
    tol: Option<f64>,
}

fn certificate_value(
    c: &MonotoneCertificate<f64>,
    source: &ModularData64,
    target: &ModularData64,
    tol: f64,
) -> Value {
    let check = verify_certificate(c, source, target, tol);
    let mut m = Map::new();
    m.insert("mode".into(), json!(c.mode));
    if let Some(n) = &c.n {
        m.insert("N".into(), umatrix(n));
    }
    if let Some(mm) = &c.m {
        m.insert("M".into(), umatrix(mm));
    }
    if let Some(x) = &c.x {
        m.insert("X".into(), rmatrix(x));
    }
    if let Some(y) = &c.y {
        // theorem orientation S2 = X S1 Y, and the preorder's S2 = X S1 Y'^T with Y' = Y^T
        m.insert("Y".into(), rmatrix(y));
        m.insert("Y_preorder".into(), rmatrix(&y.transpose()));
    }
    m.insert(
        "residuals".into(),
        Value::Object(c.residuals.iter().map(|(k, v)| (k.clone(), json!(v))).collect()),
    );
    m.insert("independently_verified".into(), json!(check.passed));
    if !check.passed {
        m.insert("verification_failures".into(), json!(check.failures));
    }
    Value::Object(m)
}

fn verdict_value(
    v: &Verdict<f64>,
    source: &ModularData64,
    target: &ModularData64,
    tol: f64,
    sample: Option<(u64, u64)>,
) -> Value {
    match v {
        Verdict::Feasible(f) => json!({
            "mode": f.mode,
            "verdict": v.label(),
            "total": f.total,
            "certificates": f.certificates.iter().map(|c| certificate_value(c, source, target, tol)).collect::<Vec<_>>(),
        }),
        Verdict::Obstructed(o) => {
            let mut m = Map::new();
            m.insert("mode".into(), json!(o.mode));
            m.insert("verdict".into(), json!(v.label()));
            m.insert("exhaustive".into(), json!(o.exhaustive));
            m.insert("row".into(), json!(o.row.map(|z| source.ring().name(z))));
            m.insert("reason".into(), json!(o.reason));
            m.insert("bounds".into(), json!(o.bounds));
            if let Some((draws, seed)) = sample.filter(|(d, _)| *d > 0 && o.exhaustive) {
                let out = sample_obstruction(o, source, target, draws, seed, tol);
                m.insert("sampler".into(), json!({ "seed": seed, "draws": out.draws, "counterexample": out.counterexample }));
            }
            Value::Object(m)
        }
        Verdict::Unknown(u) => json!({ "mode": u.mode, "verdict": v.label(), "reason": u.reason }),
    }
}

fn overall(v: &Verdict<f64>) -> OverallVerdict {
    match v {
        Verdict::Feasible(_) => OverallVerdict::NoObstruction,
        Verdict::Obstructed(_) => OverallVerdict::Obstructed,
        Verdict::Unknown(_) => OverallVerdict::Unknown,
    }
}

fn exit_for(v: OverallVerdict) -> i32 {
    match v {
        OverallVerdict::NoObstruction => 0,
        OverallVerdict::Obstructed => 1,
        OverallVerdict::Unknown => 2,
    }
}

fn check_preorder(report: &mut RunReport, a: &PreorderArgs) -> Result<(), LoadError> {
    let (source, source_name) = load(a.source, a.tol)?;
    let (target, target_name) = load(a.target, a.tol)?;
    let tol = a.tol.unwrap_or(DEFAULT_TOLERANCE);
    let twist = TwistConfig {
        bound: a.bound,
        tolerance: tol,
        ..if a.literal { TwistConfig::literal() } else { TwistConfig::default() }
    };
    let functor = FunctorSearchConfig {
        bound: a.bound,
        tolerance: tol,
        ..FunctorSearchConfig::default()
    };
    let s = SConfig {
        bound: a.bound,
        tolerance: tol,
        seed: a.seed,
        ..SConfig::default()
    };
    let c = &mut report.config;
    c.insert("mode".into(), json!(format!("{:?}", a.mode).to_lowercase()));
    c.insert("tolerance".into(), json!(tol));
    c.insert("bound".into(), json!(a.bound));
    c.insert("literal_twist".into(), json!(a.literal));
    c.insert("seed".into(), json!(a.seed));
    c.insert("sample_draws".into(), json!(a.sample_draws));
    c.insert("orientation".into(), json!("source = degraded state, target = clean state"));
    let sample = Some((a.sample_draws, a.seed));
    let invalid = |e: braidmono::Error| LoadError::Parse {
        location: format!("{} -> {}", source_name, target_name),
        message: e.to_string(),
    };
    let (verdict, result) = match a.mode {
        Mode::Full => {
            let r = check_preorder_full(&source, &target, &FullConfig { twist, functor, s }).map_err(invalid)?;
            let stages: Vec<Value> = r
                .stages()
                .iter()
                .map(|(mode, v)| match v {
                    Some(v) => verdict_value(v, &source, &target, tol, sample),
                    None => json!({ "mode": mode, "verdict": "skipped" }),
                })
                .collect();
            let decided = r.decided_by.map(|m| m.to_string());
            (r.verdict, json!({ "decided_by": decided, "stages": stages, "note": r.note }))
        }
        single => {
            let v = match single {
                Mode::Twist => check_twist_preorder(source.theta(), source.dims(), target.theta(), target.dims(), &twist),
                Mode::Functor => check_functor_search(&source, &target, &functor),
                _ => check_s_preorder(source.s(), source.dims(), target.s(), target.dims(), &s),
            }
            .map_err(invalid)?;
            (overall(&v), verdict_value(&v, &source, &target, tol, sample))
        }
    };
    report.exit_code = exit_for(verdict);
    report.status = verdict.to_string();
    if verdict == OverallVerdict::NoObstruction {
        report.notes.push(NO_OBSTRUCTION_NOTE.into());
    }
    report.result = json!({ "source": source_name, "target": target_name, "outcome": result });
    Ok(())
}
