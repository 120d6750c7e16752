use serde::{Deserialize, Serialize};

use crate::cone::ConeKind;
use crate::error::{Error, Result};
use crate::exact::ExactGauge;
use crate::gauge::GaugeContext;
use crate::instance::{Instance, ProductPoint};
use crate::solve::{CheckEntry, MaximalCertificate, SolveMode};
use crate::vector::Vector;

/// Result of re-checking a certificate against its instance.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckEntry>,
    pub order_predicate_evals: usize,
    pub gauge_evals: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckEntry::passed)
    }
}

/// Exhaustive certificate verification.
///
/// Checks membership of the certificate points, that the chain ascends,
/// that the start dominates the answer, and that every successor of the
/// answer sits at carrier distance zero with the same carrier index. In
/// `t3` mode the gauge values of the answer and each successor must also
/// match: exactly when the closed form applies, by enclosure overlap
/// within twice the tolerance otherwise. `ctx` may be supplied to reuse a
/// context; a default one is built for `t3` certificates without it.
pub fn verify_certificate(
    inst: &Instance,
    cert: &MaximalCertificate,
    ctx: Option<&GaugeContext>,
) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut order_evals = 0usize;
    let mut gauge_evals = 0usize;

    let mut members_ok = true;
    for (label, p) in std::iter::once(("start", &cert.start))
        .chain(std::iter::once(("answer", &cert.answer)))
        .chain(cert.chain.iter().map(|p| ("chain", p)))
    {
        if inst.index_of(p).is_none() {
            checks.push(CheckEntry::fail(
                "points-in-set",
                format!("{label} point (x = {}, y = {}) is not in A", p.x, p.y),
            ));
            members_ok = false;
            break;
        }
    }
    if members_ok {
        checks.push(CheckEntry::pass("points-in-set"));
    } else {
        return Ok(VerifyReport { checks, order_predicate_evals: order_evals, gauge_evals });
    }

    let mut chain_ok = true;
    for pair in cert.chain.windows(2) {
        order_evals += 1;
        if !inst.product_geq(&pair[0], &pair[1])? {
            checks.push(CheckEntry::fail(
                "chain-ascending",
                format!("chain step {} -> {} is not related", pair[0].y, pair[1].y),
            ));
            chain_ok = false;
            break;
        }
    }
    if chain_ok {
        checks.push(CheckEntry::pass("chain-ascending"));
    }

    order_evals += 1;
    if inst.product_geq(&cert.start, &cert.answer)? {
        checks.push(CheckEntry::pass("start-dominates-answer"));
    } else {
        checks.push(CheckEntry::fail(
            "start-dominates-answer",
            format!("start (x = {}) does not dominate answer (x = {})", cert.start.x, cert.answer.x),
        ));
    }

    // Successor scan: every point the answer dominates must share its
    // carrier index (equivalently, sit at semimetric distance zero).
    let mut carrier_ok = true;
    let mut successors = Vec::new();
    for (i, b) in inst.points.iter().enumerate() {
        order_evals += 1;
        if !inst.product_geq(&cert.answer, b)? {
            continue;
        }
        successors.push(i);
        let e = inst.semimetric_e(&cert.answer, b)?;
        if e != 0.0 || cert.answer.x != b.x {
            checks.push(CheckEntry::fail(
                "answer-carrier-unique",
                format!(
                    "successor {i} (x = {}) at distance {e} from answer (x = {})",
                    b.x, cert.answer.x
                ),
            ));
            carrier_ok = false;
        }
    }
    if carrier_ok {
        checks.push(CheckEntry::pass_with(
            "answer-carrier-unique",
            format!("{} successors scanned", successors.len()),
        ));
    }

    if cert.mode == SolveMode::T3 {
        let owned;
        let ctx = match ctx {
            Some(c) => c,
            None => {
                owned = GaugeContext::with_defaults(inst.cone_h.clone(), inst.lambda.clone())?;
                &owned
            }
        };
        let shift = inst.lower_bound.clone().unwrap_or_else(|| Vector::zeros(inst.dim()));
        let answer_y = &cert.answer.y - &shift;
        let mut gauges_ok = true;
        let mut exact_route = 0usize;
        for &i in &successors {
            let succ_y = &inst.points[i].y - &shift;
            let matched = match (ctx.exact_eval(&answer_y), ctx.exact_eval(&succ_y)) {
                (Some(a), Some(b)) => {
                    exact_route += 1;
                    exact_gauges_equal(&a, &b)
                }
                _ => {
                    let (va, ea) = ctx.eval_with_stats(&answer_y)?;
                    let (vb, eb) = ctx.eval_with_stats(&succ_y)?;
                    gauge_evals += ea + eb;
                    va.overlaps(&vb, 2.0 * ctx.tol())
                }
            };
            if !matched {
                checks.push(CheckEntry::fail(
                    "gauge-values-match",
                    format!("successor {i}: gauge differs from the answer's"),
                ));
                gauges_ok = false;
            }
        }
        if gauges_ok {
            let route = if exact_route == successors.len() { "exact" } else { "enclosure" };
            checks.push(CheckEntry::pass_with(
                "gauge-values-match",
                format!("{} successors, {route} route", successors.len()),
            ));
        }
    }

    Ok(VerifyReport { checks, order_predicate_evals: order_evals, gauge_evals })
}

fn exact_gauges_equal(a: &ExactGauge, b: &ExactGauge) -> bool {
    match (a, b) {
        (ExactGauge::Finite(x), ExactGauge::Finite(y)) => x == y,
        (x, y) => std::mem::discriminant(x) == std::mem::discriminant(y),
    }
}

/// Outcome per threshold of the Cauchy harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DeltaOutcome {
    /// Least index from which all pairwise carrier distances stay within
    /// the threshold (requiring at least the last two entries to vouch).
    Modulus { n: usize },
    /// No such index exists: a witnessing far pair in every tail.
    Counterexample { p: usize, q: usize, dist: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: f64,
    #[serde(flatten)]
    pub outcome: DeltaOutcome,
}

/// Report of [`check_ascending_cauchy`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub length: usize,
    pub ascending_pairs_checked: usize,
    /// Consecutive carrier distances: the asymptotic profile of the chain.
    pub consecutive_dists: Vec<f64>,
    pub per_delta: Vec<DeltaReport>,
    /// Cone-kind note: whether H is of a kind where ascending chains are
    /// guaranteed to be Cauchy.
    pub cone_note: String,
}

impl CauchyReport {
    pub fn all_moduli_finite(&self) -> bool {
        self.per_delta
            .iter()
            .all(|d| matches!(d.outcome, DeltaOutcome::Modulus { .. }))
    }
}

/// Checks that `seq` ascends pairwise under the product order, then
/// reports, for each threshold, the Cauchy modulus of the carrier
/// projection or a witnessing far pair.
///
/// On a finite sequence the last singleton window is vacuously tight, so
/// a modulus is only reported when at least the final two entries fit the
/// threshold; otherwise the far pair of the smallest failing window is the
/// counterexample.
pub fn check_ascending_cauchy(
    inst: &Instance,
    seq: &[ProductPoint],
    eps_grid: &[f64],
) -> Result<CauchyReport> {
    let len = seq.len();
    let mut pairs = 0usize;
    for n in 0..len {
        for m in n + 1..len {
            pairs += 1;
            if !inst.product_geq(&seq[n], &seq[m])? {
                return Err(Error::NotAscending(n, m));
            }
        }
    }
    let mut dist = vec![vec![0.0f64; len]; len];
    for p in 0..len {
        for q in p + 1..len {
            let d = inst.semimetric_e(&seq[p], &seq[q])?;
            dist[p][q] = d;
            dist[q][p] = d;
        }
    }
    let consecutive: Vec<f64> = (0..len.saturating_sub(1)).map(|i| dist[i][i + 1]).collect();

    // Widest pair of the tail starting at each index, by suffix maxima.
    let mut tail_max: Vec<(f64, usize, usize)> = vec![(0.0, 0, 0); len.max(1)];
    for p in (0..len.saturating_sub(1)).rev() {
        let mut best = tail_max[p + 1];
        for q in p + 1..len {
            if dist[p][q] > best.0 {
                best = (dist[p][q], p, q);
            }
        }
        tail_max[p] = best;
    }
    let mut per_delta = Vec::new();
    for &delta in eps_grid {
        let modulus = (0..len.saturating_sub(1)).find(|&s| tail_max[s].0 <= delta);
        let outcome = match modulus {
            Some(n) => DeltaOutcome::Modulus { n },
            None if len >= 2 => {
                let (d, p, q) = tail_max[len - 2];
                DeltaOutcome::Counterexample { p, q, dist: d }
            }
            None => DeltaOutcome::Modulus { n: 0 },
        };
        per_delta.push(DeltaReport { delta, outcome });
    }

    let cone_note = match inst.cone_h.kind {
        ConeKind::Lex { .. } => {
            "H is the lex cone (non-Archimedean kind): ascending chains need not be Cauchy".into()
        }
        _ => "H is of a closed kind: validated ascending chains are Cauchy".into(),
    };

    Ok(CauchyReport {
        length: len,
        ascending_pairs_checked: pairs,
        consecutive_dists: consecutive,
        per_delta,
        cone_note,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    Pass,
    Fail,
    NotSynthesized,
}

/// Report of [`bounded_below_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedBelowReport {
    pub status: BoundStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Vector>,
    pub synthesized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Checks that the value projections sit above a bound modulo H.
///
/// A supplied bound is verified exhaustively. Without one, the orthant
/// case synthesizes the componentwise minimum; other cone kinds report
/// that no bound was synthesized.
pub fn bounded_below_check(inst: &Instance) -> BoundedBelowReport {
    if let Some(bound) = &inst.lower_bound {
        for (i, p) in inst.points.iter().enumerate() {
            if bound.dim() != p.y.dim()
                || !inst.cone_h.contains_unchecked(&(&p.y - bound))
            {
                return BoundedBelowReport {
                    status: BoundStatus::Fail,
                    bound: Some(bound.clone()),
                    synthesized: false,
                    witness: Some(format!("point {i}: y = {} is not above {}", p.y, bound)),
                };
            }
        }
        return BoundedBelowReport {
            status: BoundStatus::Pass,
            bound: Some(bound.clone()),
            synthesized: false,
            witness: None,
        };
    }
    match inst.cone_h.kind {
        ConeKind::Orthant { .. } => {
            let dim = inst.dim();
            let mut min = vec![f64::INFINITY; dim];
            for p in &inst.points {
                for (slot, &e) in min.iter_mut().zip(p.y.entries()) {
                    *slot = slot.min(e);
                }
            }
            let bound = Vector::new(min);
            for p in &inst.points {
                debug_assert!(inst.cone_h.contains_unchecked(&(&p.y - &bound)));
            }
            BoundedBelowReport {
                status: BoundStatus::Pass,
                bound: Some(bound),
                synthesized: true,
                witness: None,
            }
        }
        _ => BoundedBelowReport {
            status: BoundStatus::NotSynthesized,
            bound: None,
            synthesized: false,
            witness: Some("no synthesis rule for this cone kind; supply a bound".into()),
        },
    }
}
