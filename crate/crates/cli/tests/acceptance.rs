//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line with its runtime. Run with `--nocapture` to see the
//! lines as they complete.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conemax::cone::lex2_witness;
use conemax::gauge::GaugeValue;
use conemax::graph::{Condensation, SuccessorGraph};
use conemax::scaling::PowerTerm;
use conemax::solve::{find_maximal_bb, Potential, SlackSchedule};
use conemax::{
    archimedean_falsify, check_ascending_cauchy, ekeland_solve, find_maximal_gauge,
    find_maximal_scc, fixtures, gamma_linear_orthant, generate, ConvexCone, GaugeContext,
    NormalFunction, SamplingPolicy, Vector,
};

const TOL: f64 = 1e-9;
const S_MAX: f64 = 1099511627776.0; // 2^40

fn conclude(name: &str, started: Instant, limit_secs: Option<f64>, ok: bool, detail: &str) {
    let secs = started.elapsed().as_secs_f64();
    let status = if ok { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {name}: {status} ({secs:.2}s) {detail}");
    assert!(ok, "{name}: {detail}");
    if let Some(limit) = limit_secs {
        assert!(secs < limit, "{name}: runtime {secs:.2}s exceeds the {limit}s budget");
    }
}

/// The four gauge fixture families: orthant/linear, orthant/two-power,
/// lex/linear, halfspace/linear.
fn fixture_contexts() -> Vec<(&'static str, GaugeContext)> {
    vec![
        (
            "orthant-linear",
            GaugeContext::new(
                ConvexCone::orthant(2),
                NormalFunction::linear(Vector::new(vec![1.0, 2.0])).unwrap(),
                TOL,
                S_MAX,
            )
            .unwrap(),
        ),
        (
            "orthant-two-power",
            GaugeContext::new(
                ConvexCone::orthant(2),
                NormalFunction::new(vec![
                    PowerTerm { k: Vector::new(vec![1.0, 0.0]), exp: 0.5 },
                    PowerTerm { k: Vector::new(vec![0.0, 1.0]), exp: 1.0 },
                ])
                .unwrap(),
                TOL,
                S_MAX,
            )
            .unwrap(),
        ),
        (
            "lex-linear",
            GaugeContext::new(
                ConvexCone::lex(2),
                NormalFunction::linear(Vector::new(vec![0.0, 1.0])).unwrap(),
                TOL,
                S_MAX,
            )
            .unwrap(),
        ),
        (
            "halfspace-linear",
            GaugeContext::new(
                ConvexCone::halfspaces(vec![
                    Vector::new(vec![1.0, 0.0]),
                    Vector::new(vec![1.0, 1.0]),
                ]),
                NormalFunction::linear(Vector::new(vec![1.0, 1.0])).unwrap(),
                TOL,
                S_MAX,
            )
            .unwrap(),
        ),
    ]
}

/// Samples a vector of H for each fixture family, dense enough to hit the
/// interesting regions (the cone boundary included).
fn sample_in_h(name: &str, rng: &mut ChaCha8Rng) -> Vector {
    match name {
        "lex-linear" => {
            if rng.gen_bool(0.3) {
                Vector::new(vec![rng.gen_range(0.0..10.0), rng.gen_range(-100.0..100.0)])
            } else {
                Vector::new(vec![0.0, rng.gen_range(0.0..100.0)])
            }
        }
        "halfspace-linear" => {
            let a = rng.gen_range(0.0..100.0);
            let b = rng.gen_range(-a..100.0);
            Vector::new(vec![a, b])
        }
        _ => Vector::new(vec![rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)]),
    }
}

#[test]
fn identity_law() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst_width = 0.0f64;
    let mut checked = 0usize;
    for (name, ctx) in fixture_contexts() {
        for _ in 0..100 {
            let t = rng.gen_range(0.0..2f64.powi(20));
            let y = ctx.scaling().eval(t).unwrap();
            let value = ctx.eval(&y).unwrap();
            let GaugeValue::Finite { lo, hi } = value else {
                conclude("identity-law", started, Some(5.0), false, &format!("{name}: t = {t} gave {value:?}"));
                return;
            };
            assert!(lo <= t && t <= hi, "{name}: t = {t} outside [{lo}, {hi}]");
            assert!(hi - lo <= TOL, "{name}: width {} at t = {t}", hi - lo);
            worst_width = worst_width.max(hi - lo);
            checked += 1;
        }
    }
    conclude(
        "identity-law",
        started,
        Some(5.0),
        checked == 400,
        &format!("400 samples across 4 families, worst width {worst_width:.3e}"),
    );
}

#[test]
fn gauge_laws() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut samples_total = 0usize;
    for (name, ctx) in fixture_contexts() {
        // Monotonicity along H.
        for _ in 0..1000 {
            let y = sample_in_h(name, &mut rng);
            let k = sample_in_h(name, &mut rng);
            let a = ctx.eval(&y).unwrap();
            let b = ctx.eval(&(&y + &k)).unwrap();
            assert!(
                a.hi() <= b.hi() + TOL || !a.is_finite(),
                "{name} monotone: y = {y}, k = {k}: {a:?} vs {b:?}"
            );
            samples_total += 1;
        }
        // Superadditivity.
        for _ in 0..1000 {
            let y1 = sample_in_h(name, &mut rng);
            let y2 = sample_in_h(name, &mut rng);
            let a = ctx.eval(&y1).unwrap();
            let b = ctx.eval(&y2).unwrap();
            if !(a.is_finite() && b.is_finite()) {
                continue;
            }
            let sum = ctx.eval(&(&y1 + &y2)).unwrap();
            assert!(
                sum.hi() >= a.lo() + b.lo() - TOL,
                "{name} superadditive: y1 = {y1}, y2 = {y2}"
            );
            samples_total += 1;
        }
        // Subtractivity.
        for _ in 0..1000 {
            let y1 = sample_in_h(name, &mut rng);
            let y2 = sample_in_h(name, &mut rng);
            let b = ctx.eval(&y2).unwrap();
            if !b.is_finite() {
                continue;
            }
            let a = ctx.eval(&y1).unwrap();
            let diff = ctx.eval(&(&y1 - &y2)).unwrap();
            if !a.is_finite() {
                continue;
            }
            assert!(
                diff.lo() <= a.hi() - b.lo() + TOL,
                "{name} subtractive: y1 = {y1}, y2 = {y2}: {diff:?} vs {a:?} - {b:?}"
            );
            samples_total += 1;
        }
        // Sup-translation, plus the tag outside the cone.
        for _ in 0..1000 {
            let y = sample_in_h(name, &mut rng);
            let t = rng.gen_range(0.0..50.0);
            let a = ctx.eval(&y).unwrap();
            if !a.is_finite() {
                continue;
            }
            let shifted = ctx.eval(&(&y + &ctx.scaling().eval(t).unwrap())).unwrap();
            assert!(
                shifted.hi() >= a.lo() + t - TOL,
                "{name} sup-translation: y = {y}, t = {t}"
            );
            samples_total += 1;
        }
        let tau = rng.gen_range(0.5..8.0);
        assert_eq!(
            ctx.eval(&-&ctx.scaling().eval(tau).unwrap()).unwrap(),
            GaugeValue::NegInfinity,
            "{name}: negative scaling value must sit outside H"
        );
    }
    conclude(
        "gauge-laws",
        started,
        Some(30.0),
        true,
        &format!("{samples_total} law samples, zero violations"),
    );
}

#[test]
fn oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    // One context per dimension, each with a random strictly positive
    // direction.
    let ctxs: Vec<(Vector, GaugeContext)> = (1..=8)
        .map(|dim| {
            let k = Vector::new((0..dim).map(|_| rng.gen_range(0.5..4.0)).collect());
            let ctx = GaugeContext::new(
                ConvexCone::orthant(dim),
                NormalFunction::linear(k.clone()).unwrap(),
                TOL,
                S_MAX,
            )
            .unwrap();
            (k, ctx)
        })
        .collect();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (k, ctx) = &ctxs[rng.gen_range(0..ctxs.len())];
        let y = Vector::new((0..k.dim()).map(|_| rng.gen_range(0.0..50.0)).collect());
        let enclosure = ctx.eval(&y).unwrap();
        let oracle = gamma_linear_orthant(k, &y).unwrap();
        let gap = (enclosure.mid() - oracle.mid()).abs();
        assert!(gap <= 1e-9, "y = {y}: {enclosure:?} vs {oracle:?}");
        worst = worst.max(gap);
    }
    conclude(
        "oracle-equivalence",
        started,
        None,
        true,
        &format!("1000 vectors, worst gap {worst:.3e}"),
    );
}

#[test]
fn maximal_point_suite_archimedean() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let policy = SamplingPolicy::with_seed(404);
    for run in 0..200 {
        let inst = generate::random_orthant_instance(&mut rng, 200);
        let report = inst.validate(&policy);
        assert!(
            report.all_passed(),
            "run {run}: instance failed validation: {:?}",
            report.failures().collect::<Vec<_>>()
        );
        let start = inst.points[rng.gen_range(0..inst.len())].clone();

        let scc = find_maximal_scc(&inst, &start).unwrap();
        assert!(
            scc.certificate.all_checks_pass(),
            "run {run}: sink-engine certificate failed: {:#?}",
            scc.certificate.checks
        );

        let bb = find_maximal_bb(&inst, &start, &Potential::YComponent(0), SlackSchedule::Halving)
            .unwrap();
        assert!(
            bb.certificate.all_checks_pass(),
            "run {run}: iterative-engine certificate failed: {:#?}",
            bb.certificate.checks
        );

        // Sink-component carrier uniformity over the whole instance.
        let graph = SuccessorGraph::build(&inst).unwrap();
        let cond = Condensation::of(&graph);
        for c in cond.sinks() {
            let comp = &cond.comps[c];
            let x0 = inst.points[comp[0]].x;
            assert!(
                comp.iter().all(|&i| inst.points[i].x == x0),
                "run {run}: sink component mixes carriers"
            );
        }
    }
    conclude(
        "maximal-point-suite-archimedean",
        started,
        Some(60.0),
        true,
        "200 instances, both engines verified, sinks carrier-uniform",
    );
}

#[test]
fn maximal_point_suite_lex() {
    let started = Instant::now();
    // The shipped witness falsifies the Archimedean law of lex(2).
    let witness = archimedean_falsify(&ConvexCone::lex(2), &[lex2_witness()], 1e12, 40)
        .unwrap()
        .expect("lex(2) must admit the canonical counterexample");
    assert_eq!(witness.h.entries(), &[0.0, 1.0]);

    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let policy = SamplingPolicy::with_seed(505);
    let mut exact_routes = 0usize;
    for run in 0..50 {
        let inst = generate::random_lex_instance(&mut rng, 120);
        let report = inst.validate(&policy);
        assert!(
            report.all_passed(),
            "run {run}: instance failed validation: {:?}",
            report.failures().collect::<Vec<_>>()
        );
        let ctx = GaugeContext::new(inst.cone_h.clone(), inst.lambda.clone(), TOL, S_MAX).unwrap();
        // Start from a point with finite gauge (the generator pins one).
        let start = inst.points[0].clone();
        let out = find_maximal_gauge(&inst, &ctx, &start).unwrap();
        assert!(
            out.certificate.all_checks_pass(),
            "run {run}: gauge-engine certificate failed: {:#?}",
            out.certificate.checks
        );
        if out
            .certificate
            .checks
            .iter()
            .any(|c| c.check == "gauge-values-match" && c.witness.as_deref().is_some_and(|w| w.contains("exact")))
        {
            exact_routes += 1;
        }
    }
    conclude(
        "maximal-point-suite-lex",
        started,
        Some(30.0),
        exact_routes == 50,
        &format!("50 instances verified, {exact_routes} with exact gauge equality"),
    );
}

#[test]
fn cauchy_harness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let grid = [1.0, 0.1, 0.01];
    for run in 0..50 {
        let inst = generate::random_orthant_instance(&mut rng, 80);
        let graph = SuccessorGraph::build(&inst).unwrap();
        let seq = generate::ascending_walk(&inst, &graph, &mut rng, 100);
        let report = check_ascending_cauchy(&inst, &seq, &grid).unwrap();
        assert!(
            report.all_moduli_finite(),
            "run {run}: missing modulus: {:?}",
            report.per_delta
        );
    }
    // The shipped lex fixture: its alternating chain is ascending but not
    // Cauchy at any grid threshold.
    let lex = fixtures::lex_instance();
    let seq: Vec<_> = lex.points[..8].to_vec();
    let report = check_ascending_cauchy(&lex, &seq, &grid).unwrap();
    assert!(
        report
            .per_delta
            .iter()
            .all(|d| matches!(d.outcome, conemax::verify::DeltaOutcome::Counterexample { .. })),
        "lex fixture must report a far pair at every threshold: {report:?}"
    );
    conclude(
        "cauchy-harness",
        started,
        None,
        true,
        "50 walks with finite moduli; lex fixture reported non-Cauchy",
    );
}

#[test]
fn scalar_variational_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for run in 0..100 {
        let (space, f) = generate::random_scalar_problem(&mut rng, 200);
        let eps = if run % 2 == 0 { 0.1 } else { 1.0 };
        let start = rng.gen_range(0..f.len());
        let cert = ekeland_solve(&space, &f, eps, start).unwrap();
        assert!(cert.all_checks_pass(), "run {run}: {:#?}", cert.checks);

        // Independent brute-force answer set from the two conditions.
        let answers: Vec<usize> = (0..f.len())
            .filter(|&c| {
                let reaches = f[start] >= f[c] + eps * space.dist(start, c).unwrap();
                let minimal = (0..f.len()).all(|x| {
                    x == c || f[c] < f[x] + eps * space.dist(c, x).unwrap()
                });
                reaches && minimal
            })
            .collect();
        assert!(
            answers.contains(&cert.answer),
            "run {run}: answer {} not in brute-force set {answers:?}",
            cert.answer
        );
    }
    conclude(
        "scalar-variational-oracle",
        started,
        Some(30.0),
        true,
        "100 runs, answers always in the brute-force set",
    );
}

#[test]
fn subadditivity_rejection() {
    let started = Instant::now();
    let mut rejected = 0usize;
    for exp in [1.0000001, 1.5, 2.0, 3.0, 10.0] {
        let err = NormalFunction::new(vec![PowerTerm { k: Vector::new(vec![1.0]), exp }])
            .expect_err("exponent above 1 must be rejected");
        let msg = err.to_string();
        assert!(msg.contains("t1 = t2 = 1"), "message must carry the counterexample: {msg}");
        rejected += 1;
    }
    // The same rejection surfaces through JSON deserialization.
    let parsed: Result<NormalFunction, _> =
        serde_json::from_str(r#"{"terms":[{"k":[1],"exp":1.5}]}"#);
    assert!(parsed.is_err());
    conclude(
        "subadditivity-rejection",
        started,
        None,
        rejected == 5,
        "construction and JSON loading both reject exponents above 1",
    );
}

#[test]
fn determinism() {
    let started = Instant::now();
    let binary = env!("CARGO_BIN_EXE_conemax");
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/lex_linear.json");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = Command::new(binary)
            .args(["solve", "--instance", fixture, "--mode", "t3", "--start", "0", "--seed", "42"])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        outputs.push(out.stdout);
    }
    assert_eq!(outputs[0], outputs[1], "solve reports must be byte-identical");

    let mut props = Vec::new();
    for _ in 0..2 {
        let out = Command::new(binary)
            .args(["props", "--instance", fixture, "--seed", "42"])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        props.push(out.stdout);
    }
    assert_eq!(props[0], props[1], "props reports must be byte-identical");
    conclude(
        "determinism",
        started,
        None,
        true,
        "solve and props reports byte-identical across reruns",
    );
}
