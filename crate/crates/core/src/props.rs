//! The aggregated law suite: every algebraic law of the cone order, the
//! scaling, the gauge and the product order, checked on one seeded sample
//! stream and reported line by line.

use rand::Rng;

use crate::cone::{archimedean_falsify, ConeKind, Pointedness};
use crate::error::Result;
use crate::gauge::{gamma_linear_orthant, GaugeContext, GaugeValue};
use crate::graph::{Condensation, SuccessorGraph};
use crate::instance::{sample_members, Instance};
use crate::report::{LawCheck, LawReport, LawStatus, SamplingPolicy};
use crate::vector::Vector;
use crate::verify::{bounded_below_check, BoundStatus};

/// Runs every law validator on the instance with a shared seed.
///
/// Failures are real violations; `info` entries record properties that are
/// not errors (a non-Archimedean H, an empty restricted domain, a bound
/// that was not synthesized).
pub fn props_suite(inst: &Instance, policy: &SamplingPolicy, tol: f64, s_max: f64) -> Result<LawReport> {
    let mut checks = inst.validate(policy).checks;

    match GaugeContext::new(inst.cone_h.clone(), inst.lambda.clone(), tol, s_max) {
        Err(e) => {
            checks.push(LawCheck::failed("gauge-context", 0, -1.0, e.to_string()));
        }
        Ok(ctx) => {
            checks.extend(gauge_laws(inst, &ctx, policy)?);
            checks.extend(graph_laws(inst, &ctx, policy)?);
        }
    }

    checks.push(archimedean_entry(inst, policy));
    checks.push(bounded_entry(inst));
    checks.push(LawCheck::info(
        "ascending-chains-bounded",
        "finite point set: ascending chains enter a sink component, so upper bounds exist by construction".into(),
    ));

    Ok(LawReport { seed: policy.seed, checks })
}

/// Draws value vectors inside H: scaled sampled members plus the instance's
/// own (translated) value parts.
fn h_samples(inst: &Instance, ctx: &GaugeContext, policy: &SamplingPolicy, count: usize) -> Vec<Vector> {
    let mut rng = policy.rng();
    let members = sample_members(ctx.cone_h(), policy, 16);
    let shift = inst.lower_bound.clone().unwrap_or_else(|| Vector::zeros(inst.dim()));
    let mut out: Vec<Vector> = inst
        .points
        .iter()
        .map(|p| &p.y - &shift)
        .filter(|y| ctx.cone_h().contains_unchecked(y))
        .collect();
    while !members.is_empty() && out.len() < count {
        let m = &members[rng.gen_range(0..members.len())];
        out.push(m.scale(rng.gen_range(0.0..50.0)));
    }
    out.truncate(count);
    out
}

fn gauge_laws(inst: &Instance, ctx: &GaugeContext, policy: &SamplingPolicy) -> Result<Vec<LawCheck>> {
    let mut checks = Vec::new();
    let tol = ctx.tol();
    let slack = policy.slack;
    let mut rng = policy.rng();
    let n_samples = policy.draws.max(10);

    // Identity: the enclosure of the gauge of Lambda(t) brackets t.
    {
        let t_max = (ctx.s_max() / 2.0).min(2f64.powi(20));
        let mut worst = f64::INFINITY;
        let mut failure = None;
        for i in 0..n_samples {
            let t = if i == 0 { 0.0 } else { rng.gen_range(0.0..t_max) };
            let y = ctx.scaling().eval(t)?;
            let v = ctx.eval(&y)?;
            let guard = slack * t.max(1.0);
            let margin = match v {
                GaugeValue::Finite { lo, hi } => (t - lo).min(hi - t).min(tol - (hi - lo) + guard),
                _ => f64::NEG_INFINITY,
            };
            worst = worst.min(margin);
            if margin < -guard {
                failure = Some((t, v));
                break;
            }
        }
        checks.push(match failure {
            Some((t, v)) => LawCheck::failed("gauge-identity", n_samples, worst, format!("t = {t}: {v:?}")),
            None => LawCheck::sampled("gauge-identity", n_samples, worst),
        });
    }

    let ys = h_samples(inst, ctx, policy, n_samples);
    let members = sample_members(ctx.cone_h(), policy, 8);

    // Monotone along H: adding a cone member cannot shrink the gauge.
    {
        let mut worst = f64::INFINITY;
        let mut failure = None;
        for y in &ys {
            let k = members[rng.gen_range(0..members.len())].scale(rng.gen_range(0.0..10.0));
            let a = ctx.eval(y)?;
            let b = ctx.eval(&(y + &k))?;
            let margin = b.hi() + tol - a.hi();
            if margin.is_nan() || margin >= 0.0 || !a.is_finite() {
                worst = worst.min(if margin.is_nan() { f64::INFINITY } else { margin });
            } else {
                failure = Some((y.clone(), k, a, b));
                break;
            }
        }
        checks.push(match failure {
            Some((y, k, a, b)) => LawCheck::failed(
                "gauge-monotone",
                ys.len(),
                -1.0,
                format!("y = {y}, k = {k}: {a:?} vs {b:?}"),
            ),
            None => LawCheck::sampled("gauge-monotone", ys.len(), worst),
        });
    }

    // Superadditive: gauge(y1 + y2) >= gauge(y1) + gauge(y2).
    {
        let mut worst = f64::INFINITY;
        let mut failure = None;
        for pair in ys.chunks(2) {
            let [y1, y2] = pair else { continue };
            let a = ctx.eval(y1)?;
            let b = ctx.eval(y2)?;
            if !(a.is_finite() && b.is_finite()) {
                continue;
            }
            let sum = ctx.eval(&(y1 + y2))?;
            let margin = sum.hi() - (a.lo() + b.lo() - tol);
            if margin >= 0.0 {
                worst = worst.min(margin);
            } else {
                failure = Some((y1.clone(), y2.clone()));
                break;
            }
        }
        checks.push(match failure {
            Some((y1, y2)) => LawCheck::failed(
                "gauge-superadditive",
                ys.len() / 2,
                -1.0,
                format!("y1 = {y1}, y2 = {y2}"),
            ),
            None => LawCheck::sampled("gauge-superadditive", ys.len() / 2, worst),
        });
    }

    // Subtractive: gauge(y1 - y2) <= gauge(y1) - gauge(y2) for finite
    // gauge(y2).
    {
        let mut worst = f64::INFINITY;
        let mut failure = None;
        for pair in ys.chunks(2) {
            let [y1, y2] = pair else { continue };
            let b = ctx.eval(y2)?;
            if !b.is_finite() {
                continue;
            }
            let a = ctx.eval(y1)?;
            let diff = ctx.eval(&(y1 - y2))?;
            if !diff.is_finite() {
                continue; // -inf trivially below; +inf forces a to be +inf by monotonicity
            }
            let margin = (a.hi() - b.lo() + tol) - diff.lo();
            if margin >= 0.0 || !a.is_finite() {
                worst = worst.min(margin);
            } else {
                failure = Some((y1.clone(), y2.clone()));
                break;
            }
        }
        checks.push(match failure {
            Some((y1, y2)) => LawCheck::failed(
                "gauge-subtractive",
                ys.len() / 2,
                -1.0,
                format!("y1 = {y1}, y2 = {y2}"),
            ),
            None => LawCheck::sampled("gauge-subtractive", ys.len() / 2, worst),
        });
    }

    // Translation along the scaling raises the gauge by at least t.
    {
        let mut worst = f64::INFINITY;
        let mut failure = None;
        for y in &ys {
            let t = rng.gen_range(0.0..50.0);
            let a = ctx.eval(y)?;
            if !a.is_finite() {
                continue;
            }
            let shifted = ctx.eval(&(y + &ctx.scaling().eval(t)?))?;
            let guard = slack * t.max(1.0);
            let margin = shifted.hi() - (a.lo() + t - tol - guard);
            if margin >= 0.0 {
                worst = worst.min(margin);
            } else {
                failure = Some((y.clone(), t));
                break;
            }
        }
        checks.push(match failure {
            Some((y, t)) => LawCheck::failed(
                "gauge-sup-translation",
                ys.len(),
                -1.0,
                format!("y = {y}, t = {t}"),
            ),
            None => LawCheck::sampled("gauge-sup-translation", ys.len(), worst),
        });
    }

    // Negative scaling values sit outside a pointed H: the tag must say so.
    if matches!(ctx.cone_h().pointedness(), Pointedness::Pointed) {
        let mut failure = None;
        for _ in 0..16 {
            let tau = rng.gen_range(0.125..32.0);
            let v = ctx.eval(&-&ctx.scaling().eval(tau)?)?;
            if v != GaugeValue::NegInfinity {
                failure = Some((tau, v));
                break;
            }
        }
        checks.push(match failure {
            Some((tau, v)) => LawCheck::failed(
                "gauge-negative-outside",
                16,
                -1.0,
                format!("tau = {tau}: {v:?}"),
            ),
            None => LawCheck::sampled("gauge-negative-outside", 16, 0.0),
        });
    }

    // Closed-form agreement where the oracle applies.
    if let (ConeKind::Orthant { .. }, Some(k0)) = (&ctx.cone_h().kind, ctx.scaling().as_linear()) {
        if k0.entries().iter().all(|&e| e > 0.0) {
            let mut worst = f64::INFINITY;
            let mut failure = None;
            for y in &ys {
                let enc = ctx.eval(y)?;
                let oracle = gamma_linear_orthant(k0, y)?;
                let gap = (enc.mid() - oracle.mid()).abs();
                if gap.is_nan() || gap <= tol {
                    worst = worst.min(tol - gap);
                } else {
                    failure = Some((y.clone(), enc, oracle));
                    break;
                }
            }
            checks.push(match failure {
                Some((y, enc, oracle)) => LawCheck::failed(
                    "gauge-oracle-agreement",
                    ys.len(),
                    -1.0,
                    format!("y = {y}: {enc:?} vs {oracle:?}"),
                ),
                None => LawCheck::sampled("gauge-oracle-agreement", ys.len(), worst),
            });
        }
    }

    Ok(checks)
}

fn graph_laws(inst: &Instance, ctx: &GaugeContext, policy: &SamplingPolicy) -> Result<Vec<LawCheck>> {
    let mut checks = Vec::new();
    let graph = SuccessorGraph::build(inst)?;
    let cond = Condensation::of(&graph);
    let tol = ctx.tol();

    // Every sink component shares one carrier index.
    {
        let mut failure = None;
        let mut sinks = 0usize;
        for c in cond.sinks() {
            sinks += 1;
            let comp = &cond.comps[c];
            let x0 = inst.points[comp[0]].x;
            if let Some(&bad) = comp.iter().find(|&&i| inst.points[i].x != x0) {
                failure = Some((comp[0], bad));
                break;
            }
        }
        checks.push(match failure {
            Some((a, b)) => LawCheck::failed(
                "sink-carrier-unique",
                sinks,
                -1.0,
                format!("sink members {a} and {b} have distinct carriers"),
            ),
            None => LawCheck::sampled("sink-carrier-unique", sinks, 0.0),
        });
    }

    // Along every edge the gauge of the value part decreases, and the
    // carrier step is bounded by the gauge of the value drop.
    let shift = inst.lower_bound.clone().unwrap_or_else(|| Vector::zeros(inst.dim()));
    let translated: Vec<Vector> = inst.points.iter().map(|p| &p.y - &shift).collect();
    let in_h = translated
        .iter()
        .all(|y| ctx.cone_h().contains_unchecked(y));
    if in_h {
        let tags: Vec<GaugeValue> = translated
            .iter()
            .map(|y| ctx.eval(y))
            .collect::<Result<_>>()?;
        let mut phi_failure = None;
        let mut step_failure = None;
        let mut edges = 0usize;
        let mut phi_worst = f64::INFINITY;
        let mut step_worst = f64::INFINITY;
        'outer: for i in 0..inst.len() {
            for &j in &graph.adj[i] {
                edges += 1;
                if tags[i].is_finite() && tags[j].is_finite() {
                    let margin = tags[i].lo() - (tags[j].lo() - 2.0 * tol);
                    phi_worst = phi_worst.min(margin);
                    if margin < 0.0 {
                        phi_failure = Some((i, j));
                        break 'outer;
                    }
                }
                let d = inst.space.dist_unchecked(inst.points[i].x, inst.points[j].x);
                let drop = ctx.eval(&(&translated[i] - &translated[j]))?;
                let margin = drop.hi() + tol - d;
                step_worst = step_worst.min(margin);
                if margin < 0.0 {
                    step_failure = Some((i, j));
                    break 'outer;
                }
            }
        }
        checks.push(match phi_failure {
            Some((i, j)) => LawCheck::failed(
                "phi-decreasing",
                edges,
                phi_worst,
                format!("edge {i} -> {j}"),
            ),
            None => LawCheck::sampled("phi-decreasing", edges, phi_worst),
        });
        checks.push(match step_failure {
            Some((i, j)) => LawCheck::failed(
                "step-length-bound",
                edges,
                step_worst,
                format!("edge {i} -> {j}"),
            ),
            None => LawCheck::sampled("step-length-bound", edges, step_worst),
        });

        let finite = tags.iter().filter(|t| t.is_finite()).count();
        checks.push(LawCheck::info(
            "gauge-domain",
            format!("{} of {} points have finite gauge value", finite, inst.len()),
        ));
    } else {
        checks.push(LawCheck::info(
            "gauge-domain",
            "value parts leave H; gauge-restricted laws not applicable".into(),
        ));
    }
    let _ = policy;
    Ok(checks)
}

fn archimedean_entry(inst: &Instance, policy: &SamplingPolicy) -> LawCheck {
    let dim = inst.cone_h.dim();
    let mut candidates = Vec::new();
    if dim >= 2 {
        // Canonical probe: last basis direction under the first.
        candidates.push((Vector::basis(dim, dim - 1), Vector::basis(dim, 0)));
    }
    let members = sample_members(&inst.cone_h, policy, 6);
    for pair in members.windows(2) {
        candidates.push((pair[0].clone(), pair[1].clone()));
    }
    if candidates.is_empty() {
        return LawCheck::info("archimedean-falsifier", "no candidates for dimension 1".into());
    }
    match archimedean_falsify(&inst.cone_h, &candidates, 1e12, 40) {
        Ok(Some(ce)) => LawCheck {
            law: "archimedean-falsifier".into(),
            status: LawStatus::Info,
            samples: candidates.len(),
            worst_margin: None,
            witness: Some(format!(
                "counterexample h = {}, v = {}: H is non-Archimedean",
                ce.h, ce.v
            )),
        },
        Ok(None) => LawCheck {
            law: "archimedean-falsifier".into(),
            status: LawStatus::Info,
            samples: candidates.len(),
            worst_margin: None,
            witness: Some("no counterexample found (sampling is one-sided)".into()),
        },
        Err(e) => LawCheck::failed("archimedean-falsifier", candidates.len(), -1.0, e.to_string()),
    }
}

fn bounded_entry(inst: &Instance) -> LawCheck {
    let report = bounded_below_check(inst);
    match report.status {
        BoundStatus::Pass => LawCheck::info(
            "bounded-below-report",
            match (&report.bound, report.synthesized) {
                (Some(b), true) => format!("synthesized bound {b}"),
                (Some(b), false) => format!("supplied bound {b} verified"),
                _ => "verified".into(),
            },
        ),
        BoundStatus::Fail => LawCheck::failed(
            "bounded-below-report",
            inst.len(),
            -1.0,
            report.witness.unwrap_or_default(),
        ),
        BoundStatus::NotSynthesized => {
            LawCheck::info("bounded-below-report", report.witness.unwrap_or_default())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn suite_passes_on_orthant_fixture() {
        let inst = fixtures::orthant_linear_dim2();
        let report = props_suite(&inst, &SamplingPolicy::with_seed(11), 1e-9, 2f64.powi(40)).unwrap();
        assert!(report.all_passed(), "{:#?}", report.failures().collect::<Vec<_>>());
        assert!(report.checks.iter().any(|c| c.law == "gauge-oracle-agreement"));
    }

    #[test]
    fn suite_passes_on_lex_fixture_and_reports_the_falsifier() {
        let inst = fixtures::lex_instance();
        let report = props_suite(&inst, &SamplingPolicy::with_seed(11), 1e-9, 2f64.powi(40)).unwrap();
        assert!(report.all_passed(), "{:#?}", report.failures().collect::<Vec<_>>());
        let arch = report
            .checks
            .iter()
            .find(|c| c.law == "archimedean-falsifier")
            .unwrap();
        assert!(arch.witness.as_deref().unwrap().contains("non-Archimedean"));
    }

    #[test]
    fn suite_passes_on_two_power_and_halfspace_fixtures() {
        for inst in [fixtures::two_power_instance(), fixtures::halfspace_instance()] {
            let report =
                props_suite(&inst, &SamplingPolicy::with_seed(3), 1e-9, 2f64.powi(40)).unwrap();
            assert!(report.all_passed(), "{:#?}", report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn values_outside_h_downgrade_to_informational_entries() {
        // A perfectly valid instance need not keep its values inside H;
        // the gauge-restricted laws are then reported as not applicable.
        let mut inst = fixtures::three_point_chain();
        inst.points[2].y = crate::vector::Vector::new(vec![-3.0]);
        let report = props_suite(&inst, &SamplingPolicy::with_seed(9), 1e-9, 2f64.powi(40)).unwrap();
        assert!(report.all_passed(), "{:#?}", report.failures().collect::<Vec<_>>());
        let domain = report.checks.iter().find(|c| c.law == "gauge-domain").unwrap();
        assert!(domain.witness.as_deref().unwrap().contains("not applicable"));
    }

    #[test]
    fn suite_is_deterministic() {
        let inst = fixtures::lex_instance();
        let a = props_suite(&inst, &SamplingPolicy::with_seed(5), 1e-9, 2f64.powi(40)).unwrap();
        let b = props_suite(&inst, &SamplingPolicy::with_seed(5), 1e-9, 2f64.powi(40)).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
