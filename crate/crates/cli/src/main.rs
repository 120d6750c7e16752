use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use conemax::gauge::{DEFAULT_S_MAX, DEFAULT_TOL};
use conemax::solve::SolveStats;
use conemax::{
    ekeland_solve, find_maximal_gauge, props_suite, verify_certificate, CheckEntry,
    Error as CoreError, GaugeContext, Instance, LawCheck, LawStatus, MaximalCertificate,
    MetricSpace, SamplingPolicy, SolveMode, Vector,
};

const EXIT_OK: u8 = 0;
const EXIT_VALIDATION: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_NO_CERTIFICATE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "conemax",
    version,
    about = "Certified maximal-point search and gauge evaluation on cone-ordered product spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate an instance file: metric axioms, cone structure, scaling
    /// laws, order laws, boundedness.
    Validate(ValidateArgs),
    /// Gauge-function operations.
    Gauge {
        #[command(subcommand)]
        command: GaugeCommand,
    },
    /// Solve for a maximal point and emit the certificate.
    Solve(SolveArgs),
    /// Re-verify a certificate against its instance.
    Verify(VerifyArgs),
    /// Scalar variational solve over a value table.
    Ekeland(EkelandArgs),
    /// Run the full property suite on an instance.
    Props(PropsArgs),
}

#[derive(Debug, Subcommand)]
enum GaugeCommand {
    /// Evaluate the gauge of a vector under the instance's cone H and
    /// scaling.
    Eval(GaugeEvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Seed for every sampled check; echoed in the report.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report format on stdout.
    #[arg(long, value_enum, default_value_t = OutputKind::Json)]
    output: OutputKind,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct GaugeEvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Vector to evaluate, comma-separated: "3,10".
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    /// Enclosure width tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Unboundedness search cap.
    #[arg(long, default_value_t = DEFAULT_S_MAX)]
    smax: f64,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Solver mode: t2 (sink components) or t3 (gauge-restricted).
    #[arg(long, value_parser = parse_mode)]
    mode: SolveMode,
    /// Index of the start point in A.
    #[arg(long)]
    start: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_S_MAX)]
    smax: f64,
    /// Threads for successor-graph construction.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the bare certificate (not the report) to this file.
    #[arg(long)]
    cert_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Certificate file (JSON).
    #[arg(long)]
    certificate: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_S_MAX)]
    smax: f64,
}

#[derive(Debug, Args)]
struct EkelandArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Uphill slope: overrides the "eps" field of the problem file.
    #[arg(long)]
    eps: Option<f64>,
    /// Start index in the carrier.
    #[arg(long)]
    start: usize,
}

#[derive(Debug, Args)]
struct PropsArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_S_MAX)]
    smax: f64,
    /// Uniform draws per sampled law.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

fn parse_mode(s: &str) -> Result<SolveMode, String> {
    match s {
        "t2" => Ok(SolveMode::T2),
        "t3" => Ok(SolveMode::T3),
        other => Err(format!("unknown mode {other:?}: expected t2 or t3")),
    }
}

/// Scalar problem file for the ekeland subcommand.
#[derive(Debug, Serialize, Deserialize)]
struct ScalarProblem {
    #[serde(default = "one")]
    schema: u32,
    space: MetricSpace,
    f: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Serialize)]
struct Verdict {
    name: String,
    status: String,
}

#[derive(Debug, Serialize)]
struct Witness {
    name: String,
    detail: String,
}

#[derive(Debug, Serialize)]
struct ConfigEcho {
    instance: String,
    seed: u64,
    output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    start: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    smax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

impl ConfigEcho {
    fn new(common: &CommonArgs, output: OutputKind) -> Self {
        ConfigEcho {
            instance: common.instance.display().to_string(),
            seed: common.seed,
            output: match output {
                OutputKind::Json => "json".into(),
                OutputKind::Text => "text".into(),
            },
            mode: None,
            start: None,
            tol: None,
            smax: None,
            eps: None,
            threads: None,
        }
    }
}

/// Deterministic work counters; wall-clock time goes to stderr only so
/// reports stay byte-identical across runs.
#[derive(Debug, Default, Serialize)]
struct Timing {
    order_predicate_evals: usize,
    gauge_evals: usize,
    iterations: usize,
}

impl From<SolveStats> for Timing {
    fn from(s: SolveStats) -> Self {
        Timing {
            order_predicate_evals: s.order_predicate_evals,
            gauge_evals: s.gauge_evals,
            iterations: s.iterations,
        }
    }
}

#[derive(Debug, Serialize)]
struct Report {
    schema: u32,
    command: String,
    config: ConfigEcho,
    verdicts: Vec<Verdict>,
    witnesses: Vec<Witness>,
    timing: Timing,
    version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<MaximalCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gauge: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ekeland: Option<conemax::EkelandCertificate>,
}

impl Report {
    fn new(command: &str, config: ConfigEcho) -> Self {
        Report {
            schema: 1,
            command: command.into(),
            config,
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            timing: Timing::default(),
            version: conemax::VERSION.into(),
            certificate: None,
            gauge: None,
            ekeland: None,
        }
    }

    fn push_law(&mut self, check: &LawCheck) {
        let status = match check.status {
            LawStatus::Proven => "proven",
            LawStatus::Sampled => "pass",
            LawStatus::Failed => "fail",
            LawStatus::Info => "info",
        };
        self.verdicts.push(Verdict { name: check.law.clone(), status: status.into() });
        if let Some(w) = &check.witness {
            self.witnesses.push(Witness { name: check.law.clone(), detail: w.clone() });
        }
    }

    fn push_check(&mut self, check: &CheckEntry) {
        self.verdicts.push(Verdict {
            name: check.check.clone(),
            status: if check.passed() { "pass".into() } else { "fail".into() },
        });
        if let Some(w) = &check.witness {
            self.witnesses.push(Witness { name: check.check.clone(), detail: w.clone() });
        }
    }

    fn failure(&mut self, name: &str, detail: String) {
        self.verdicts.push(Verdict { name: name.into(), status: "fail".into() });
        self.witnesses.push(Witness { name: name.into(), detail });
    }
}

fn emit(report: &Report, output: OutputKind, out: Option<&Path>) -> u8 {
    let rendered = match output {
        OutputKind::Json => {
            serde_json::to_string_pretty(report).expect("report serialization is infallible")
        }
        OutputKind::Text => render_text(report),
    };
    println!("{rendered}");
    if let Some(path) = out {
        if let Err(e) = fs::write(path, rendered.as_bytes()) {
            eprintln!("cannot write {}: {e}", path.display());
        }
    }
    EXIT_OK
}

fn render_text(report: &Report) -> String {
    let mut lines = vec![format!(
        "conemax {} :: {} on {}",
        report.version, report.command, report.config.instance
    )];
    for v in &report.verdicts {
        lines.push(format!("  [{:>6}] {}", v.status, v.name));
    }
    for w in &report.witnesses {
        lines.push(format!("  note {}: {}", w.name, w.detail));
    }
    if let Some(cert) = &report.certificate {
        lines.push(format!(
            "  answer: x = {}, y = {} (chain length {})",
            cert.answer.x,
            cert.answer.y,
            cert.chain.len()
        ));
    }
    if let Some(e) = &report.ekeland {
        lines.push(format!("  answer index {} with value {}", e.answer, e.answer_value));
    }
    lines.join("\n")
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path, report: &mut Report) -> Option<T> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            report.failure("load", format!("cannot read {}: {e}", path.display()));
            return None;
        }
    };
    match serde_json::from_str(&text) {
        Ok(v) => Some(v),
        Err(e) => {
            report.failure(
                "parse",
                format!("{} at line {}, column {}", e, e.line(), e.column()),
            );
            None
        }
    }
}

fn exit_for_core_error(e: &CoreError) -> u8 {
    match e {
        CoreError::StartOutsideDomain | CoreError::StartNotInSet => EXIT_NO_CERTIFICATE,
        _ => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match cli.command {
        Command::Validate(args) => run_validate(args),
        Command::Gauge { command: GaugeCommand::Eval(args) } => run_gauge_eval(args),
        Command::Solve(args) => run_solve(args),
        Command::Verify(args) => run_verify(args),
        Command::Ekeland(args) => run_ekeland(args),
        Command::Props(args) => run_props(args),
    };
    eprintln!("elapsed_ms {}", started.elapsed().as_millis());
    ExitCode::from(code)
}

fn run_validate(args: ValidateArgs) -> u8 {
    let output = args.common.output;
    let mut report = Report::new("validate", ConfigEcho::new(&args.common, output));
    let Some(instance): Option<Instance> = load_json(&args.common.instance, &mut report) else {
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    };
    let policy = SamplingPolicy::with_seed(args.common.seed);
    let law_report = instance.validate(&policy);
    for check in &law_report.checks {
        report.push_law(check);
    }
    let code = if law_report.all_passed() { EXIT_OK } else { EXIT_VALIDATION };
    emit(&report, output, args.common.out.as_deref());
    code
}

fn run_gauge_eval(args: GaugeEvalArgs) -> u8 {
    let output = args.common.output;
    let mut config = ConfigEcho::new(&args.common, output);
    config.tol = Some(args.tol);
    config.smax = Some(args.smax);
    let mut report = Report::new("gauge eval", config);
    let Some(instance): Option<Instance> = load_json(&args.common.instance, &mut report) else {
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    };
    let y = match parse_vector(&args.y) {
        Ok(v) => v,
        Err(detail) => {
            report.failure("parse-y", detail);
            emit(&report, output, args.common.out.as_deref());
            return EXIT_VALIDATION;
        }
    };
    let evaluated = GaugeContext::new(instance.cone_h.clone(), instance.lambda.clone(), args.tol, args.smax)
        .and_then(|ctx| ctx.eval_with_stats(&y).map(|r| (ctx, r)));
    match evaluated {
        Ok((ctx, (value, evals))) => {
            report.timing.gauge_evals = evals;
            let exact = ctx.exact_eval(&y).map(|e| match e {
                conemax::exact::ExactGauge::NegInfinity => serde_json::json!("neg-infinity"),
                conemax::exact::ExactGauge::Finite(_) => serde_json::json!(e.to_f64()),
                conemax::exact::ExactGauge::PosInfinity => serde_json::json!("pos-infinity"),
            });
            report.gauge = Some(serde_json::json!({
                "y": y,
                "value": value,
                "exact": exact,
            }));
            report.verdicts.push(Verdict { name: "gauge-eval".into(), status: "pass".into() });
            let code = emit(&report, output, args.common.out.as_deref());
            code
        }
        Err(e) => {
            report.failure("gauge-eval", e.to_string());
            emit(&report, output, args.common.out.as_deref());
            exit_for_core_error(&e)
        }
    }
}

fn run_solve(args: SolveArgs) -> u8 {
    let output = args.common.output;
    let mut config = ConfigEcho::new(&args.common, output);
    config.mode = Some(match args.mode {
        SolveMode::T2 => "t2".into(),
        SolveMode::T3 => "t3".into(),
    });
    config.start = Some(args.start);
    config.tol = Some(args.tol);
    config.smax = Some(args.smax);
    config.threads = Some(args.threads);
    let mut report = Report::new("solve", config);
    let Some(instance): Option<Instance> = load_json(&args.common.instance, &mut report) else {
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    };

    let policy = SamplingPolicy::with_seed(args.common.seed);
    let validation = instance.validate(&policy);
    if !validation.all_passed() {
        for check in &validation.checks {
            report.push_law(check);
        }
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    }
    if args.start >= instance.len() {
        report.failure(
            "start-index",
            format!("start {} out of range for |A| = {}", args.start, instance.len()),
        );
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    }

    let start = instance.points[args.start].clone();
    let solved = match args.mode {
        SolveMode::T2 => {
            conemax::solve::find_maximal_scc_with_threads(&instance, &start, args.threads)
        }
        SolveMode::T3 => GaugeContext::new(
            instance.cone_h.clone(),
            instance.lambda.clone(),
            args.tol,
            args.smax,
        )
        .and_then(|ctx| find_maximal_gauge(&instance, &ctx, &start)),
    };
    match solved {
        Ok(outcome) => {
            report.timing = outcome.stats.into();
            for check in &outcome.certificate.checks {
                report.push_check(check);
            }
            let passed = outcome.certificate.all_checks_pass();
            if let Some(path) = &args.cert_out {
                let text = serde_json::to_string_pretty(&outcome.certificate)
                    .expect("certificate serialization is infallible");
                if let Err(e) = fs::write(path, text) {
                    eprintln!("cannot write {}: {e}", path.display());
                }
            }
            report.certificate = Some(outcome.certificate);
            emit(&report, output, args.common.out.as_deref());
            if passed {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            report.failure("solve", e.to_string());
            emit(&report, output, args.common.out.as_deref());
            exit_for_core_error(&e)
        }
    }
}

fn run_verify(args: VerifyArgs) -> u8 {
    let output = args.common.output;
    let mut config = ConfigEcho::new(&args.common, output);
    config.tol = Some(args.tol);
    config.smax = Some(args.smax);
    let mut report = Report::new("verify", config);
    let Some(instance): Option<Instance> = load_json(&args.common.instance, &mut report) else {
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    };
    let Some(certificate): Option<MaximalCertificate> =
        load_json(&args.certificate, &mut report)
    else {
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    };
    let ctx = match certificate.mode {
        SolveMode::T3 => match GaugeContext::new(
            instance.cone_h.clone(),
            instance.lambda.clone(),
            args.tol,
            args.smax,
        ) {
            Ok(c) => Some(c),
            Err(e) => {
                report.failure("gauge-context", e.to_string());
                emit(&report, output, args.common.out.as_deref());
                return EXIT_VALIDATION;
            }
        },
        SolveMode::T2 => None,
    };
    match verify_certificate(&instance, &certificate, ctx.as_ref()) {
        Ok(verification) => {
            report.timing.order_predicate_evals = verification.order_predicate_evals;
            report.timing.gauge_evals = verification.gauge_evals;
            for check in &verification.checks {
                report.push_check(check);
            }
            let code = if verification.passed() { EXIT_OK } else { EXIT_VERIFICATION };
            emit(&report, output, args.common.out.as_deref());
            code
        }
        Err(e) => {
            report.failure("verify", e.to_string());
            emit(&report, output, args.common.out.as_deref());
            exit_for_core_error(&e)
        }
    }
}

fn run_ekeland(args: EkelandArgs) -> u8 {
    let output = args.common.output;
    let mut report = Report::new("ekeland", ConfigEcho::new(&args.common, output));
    let Some(problem): Option<ScalarProblem> = load_json(&args.common.instance, &mut report)
    else {
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    };
    let eps = match args.eps.or(problem.eps) {
        Some(e) => e,
        None => {
            report.failure("eps", "no eps supplied on the command line or in the file".into());
            emit(&report, output, args.common.out.as_deref());
            return EXIT_VALIDATION;
        }
    };
    report.config.eps = Some(eps);
    report.config.start = Some(args.start);
    match ekeland_solve(&problem.space, &problem.f, eps, args.start) {
        Ok(cert) => {
            for check in &cert.checks {
                report.push_check(check);
            }
            let passed = cert.all_checks_pass();
            report.timing.order_predicate_evals = problem.f.len() * problem.f.len();
            report.ekeland = Some(cert);
            emit(&report, output, args.common.out.as_deref());
            if passed {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            report.failure("ekeland", e.to_string());
            emit(&report, output, args.common.out.as_deref());
            exit_for_core_error(&e)
        }
    }
}

fn run_props(args: PropsArgs) -> u8 {
    let output = args.common.output;
    let mut config = ConfigEcho::new(&args.common, output);
    config.tol = Some(args.tol);
    config.smax = Some(args.smax);
    let mut report = Report::new("props", config);
    let Some(instance): Option<Instance> = load_json(&args.common.instance, &mut report) else {
        emit(&report, output, args.common.out.as_deref());
        return EXIT_VALIDATION;
    };
    let mut policy = SamplingPolicy::with_seed(args.common.seed);
    policy.draws = args.samples;
    match props_suite(&instance, &policy, args.tol, args.smax) {
        Ok(law_report) => {
            for check in &law_report.checks {
                report.push_law(check);
            }
            let code = if law_report.all_passed() { EXIT_OK } else { EXIT_VERIFICATION };
            emit(&report, output, args.common.out.as_deref());
            code
        }
        Err(e) => {
            report.failure("props", e.to_string());
            emit(&report, output, args.common.out.as_deref());
            exit_for_core_error(&e)
        }
    }
}

fn parse_vector(text: &str) -> Result<Vector, String> {
    let entries: Result<Vec<f64>, _> = text
        .split(',')
        .map(|part| part.trim().parse::<f64>())
        .collect();
    match entries {
        Ok(e) if !e.is_empty() => Ok(Vector::new(e)),
        Ok(_) => Err("empty vector".into()),
        Err(e) => Err(format!("cannot parse {text:?}: {e}")),
    }
}
