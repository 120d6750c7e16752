use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::GaugeContext;
use crate::graph::{Condensation, SuccessorGraph};
use crate::instance::{Instance, ProductPoint};
use crate::vector::Vector;

/// Which conclusion set a certificate claims: `t2` for carrier-uniqueness
/// of successors, `t3` for the gauge-restricted variant that additionally
/// matches gauge values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMode {
    #[serde(rename = "t2")]
    T2,
    #[serde(rename = "t3")]
    T3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// One verdict of a certificate transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckEntry {
    pub fn pass(check: &str) -> Self {
        CheckEntry { check: check.into(), status: CheckStatus::Pass, witness: None }
    }

    pub fn pass_with(check: &str, witness: String) -> Self {
        CheckEntry { check: check.into(), status: CheckStatus::Pass, witness: Some(witness) }
    }

    pub fn fail(check: &str, witness: String) -> Self {
        CheckEntry { check: check.into(), status: CheckStatus::Fail, witness: Some(witness) }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// A solver answer with its exhaustive verification transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalCertificate {
    pub schema: u32,
    pub mode: SolveMode,
    pub start: ProductPoint,
    pub answer: ProductPoint,
    /// Ascending path from start to answer found by the engine; every
    /// consecutive pair is related.
    pub chain: Vec<ProductPoint>,
    pub checks: Vec<CheckEntry>,
}

impl MaximalCertificate {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(CheckEntry::passed)
    }
}

/// Deterministic work counters for reports.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub order_predicate_evals: usize,
    pub gauge_evals: usize,
    pub iterations: usize,
}

pub struct SolveOutcome {
    pub certificate: MaximalCertificate,
    pub stats: SolveStats,
}

/// Picks the answer inside a condensation: among sink components reachable
/// from the start, the one whose minimal member index is smallest; within
/// it, the minimal index. Input order makes this reproducible.
fn pick_answer(
    graph: &SuccessorGraph,
    cond: &Condensation,
    start_idx: usize,
    allowed: Option<&[bool]>,
) -> Option<usize> {
    let reachable = cond.reachable_from(graph, start_idx);
    let mut best: Option<usize> = None;
    for c in cond.sinks() {
        if !reachable[c] {
            continue;
        }
        let min_member = *cond.comps[c].first()?;
        if let Some(mask) = allowed {
            if !mask[min_member] {
                continue;
            }
        }
        best = Some(match best {
            Some(b) if b <= min_member => b,
            _ => min_member,
        });
    }
    best
}

fn path_points(inst: &Instance, path: &[usize]) -> Vec<ProductPoint> {
    path.iter().map(|&i| inst.points[i].clone()).collect()
}

/// Sink-component engine.
///
/// Condenses the materialized relation and walks to a reachable sink. On a
/// validated instance every sink component shares one carrier index, which
/// is what makes its members maximal. The caller is expected to have run
/// [`Instance::validate`] first.
pub fn find_maximal_scc(inst: &Instance, start: &ProductPoint) -> Result<SolveOutcome> {
    find_maximal_scc_with_threads(inst, start, 1)
}

pub fn find_maximal_scc_with_threads(
    inst: &Instance,
    start: &ProductPoint,
    threads: usize,
) -> Result<SolveOutcome> {
    let start_idx = inst.index_of(start).ok_or(Error::StartNotInSet)?;
    let graph = SuccessorGraph::build_with_threads(inst, threads)?;
    let cond = Condensation::of(&graph);
    let answer_idx = pick_answer(&graph, &cond, start_idx, None)
        .expect("start's own component is always reachable");
    let path = graph
        .bfs_path(start_idx, answer_idx)
        .expect("answer chosen among reachable nodes");
    let mut cert = MaximalCertificate {
        schema: 1,
        mode: SolveMode::T2,
        start: start.clone(),
        answer: inst.points[answer_idx].clone(),
        chain: path_points(inst, &path),
        checks: Vec::new(),
    };
    let verify = crate::verify::verify_certificate(inst, &cert, None)?;
    cert.checks = verify.checks;
    Ok(SolveOutcome {
        certificate: cert,
        stats: SolveStats {
            order_predicate_evals: graph.pairs_evaluated + verify.order_predicate_evals,
            gauge_evals: 0,
            iterations: 1,
        },
    })
}

/// A potential to drive the iterative engine: must be decreasing along the
/// order on the instance.
#[derive(Debug, Clone)]
pub enum Potential {
    /// Gauge of the value part (lower enclosure bound; exact path when
    /// available).
    Phi(GaugeContext),
    /// A fixed coordinate of the value part.
    YComponent(usize),
    /// An explicit table indexed like the point set.
    Table(Vec<f64>),
}

impl Potential {
    fn value(&self, inst: &Instance, idx: usize) -> Result<f64> {
        let p = &inst.points[idx];
        match self {
            Potential::Phi(ctx) => {
                if let Some(exact) = ctx.exact_eval(&p.y) {
                    return Ok(exact.to_f64());
                }
                Ok(ctx.eval(&p.y)?.lo())
            }
            Potential::YComponent(i) => {
                if *i >= p.y.dim() {
                    return Err(Error::IndexOutOfRange { index: *i, size: p.y.dim() });
                }
                Ok(p.y[*i])
            }
            Potential::Table(t) => t
                .get(idx)
                .copied()
                .ok_or(Error::IndexOutOfRange { index: idx, size: t.len() }),
        }
    }

    /// Comparison slack: zero for exact potentials, twice the enclosure
    /// tolerance for gauge-backed ones.
    fn slack(&self) -> f64 {
        match self {
            Potential::Phi(ctx) => 2.0 * ctx.tol(),
            _ => 0.0,
        }
    }
}

/// Slack schedule for the iterative engine.
#[derive(Debug, Clone, Copy)]
pub enum SlackSchedule {
    /// 2^-n at iteration n (the default).
    Halving,
    Constant(f64),
}

impl SlackSchedule {
    fn at(&self, n: usize) -> f64 {
        match self {
            SlackSchedule::Halving => 2f64.powi(-(n.min(2000) as i32)),
            SlackSchedule::Constant(c) => *c,
        }
    }
}

/// Iterative descent engine: repeatedly moves to a successor whose
/// potential is within the scheduled slack of the successor infimum, and
/// stops once every successor of the current point carries the same
/// potential as the point itself.
///
/// The potential is first validated to be decreasing along the relation
/// (exhaustively over all related pairs). Finite point sets make the
/// descent terminate; a hard iteration cap turns a too-loose schedule into
/// an error instead of a loop.
pub fn find_maximal_bb(
    inst: &Instance,
    start: &ProductPoint,
    potential: &Potential,
    schedule: SlackSchedule,
) -> Result<SolveOutcome> {
    let start_idx = inst.index_of(start).ok_or(Error::StartNotInSet)?;
    let n = inst.len();
    let graph = SuccessorGraph::build(inst)?;
    let values: Vec<f64> = (0..n)
        .map(|i| potential.value(inst, i))
        .collect::<Result<_>>()?;
    let pot_slack = potential.slack();

    for i in 0..n {
        for &j in &graph.adj[i] {
            if values[i] < values[j] - pot_slack {
                return Err(Error::PotentialNotDecreasing(format!(
                    "pair ({i}, {j}): {} < {}",
                    values[i], values[j]
                )));
            }
        }
    }

    let cap = 1200 + 2 * n;
    let mut current = start_idx;
    let mut chain_idx = vec![start_idx];
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > cap {
            return Err(Error::IterationCap(cap));
        }
        let succ = &graph.adj[current];
        let inf = succ
            .iter()
            .map(|&j| values[j])
            .fold(values[current], f64::min);
        // Maximality: no successor improves the potential.
        if values[current] - inf <= pot_slack {
            break;
        }
        let slack = schedule.at(iterations - 1);
        let next = std::iter::once(current)
            .chain(succ.iter().copied())
            .find(|&j| values[j] <= inf + slack)
            .expect("the infimum is attained on a finite set");
        if next != current {
            chain_idx.push(next);
            current = next;
        }
    }

    let mut checks = Vec::new();
    let bad = graph.adj[current]
        .iter()
        .find(|&&j| (values[current] - values[j]).abs() > pot_slack);
    match bad {
        None => checks.push(CheckEntry::pass("successors-share-potential")),
        Some(&j) => checks.push(CheckEntry::fail(
            "successors-share-potential",
            format!("successor {j} has potential {} vs {}", values[j], values[current]),
        )),
    }

    let mut cert = MaximalCertificate {
        schema: 1,
        mode: SolveMode::T2,
        start: start.clone(),
        answer: inst.points[current].clone(),
        chain: path_points(inst, &chain_idx),
        checks: Vec::new(),
    };
    let verify = crate::verify::verify_certificate(inst, &cert, None)?;
    cert.checks = checks;
    cert.checks.extend(verify.checks);
    Ok(SolveOutcome {
        certificate: cert,
        stats: SolveStats {
            order_predicate_evals: graph.pairs_evaluated + verify.order_predicate_evals,
            gauge_evals: 0,
            iterations,
        },
    })
}

/// Gauge values of every point's value part, with translation by the
/// instance lower bound when one is present.
pub(crate) fn gauge_tags(
    inst: &Instance,
    ctx: &GaugeContext,
) -> Result<(Vec<crate::gauge::GaugeValue>, usize)> {
    let shift = inst.lower_bound.clone().unwrap_or_else(|| Vector::zeros(inst.dim()));
    let mut tags = Vec::with_capacity(inst.len());
    let mut evals = 0usize;
    for p in &inst.points {
        let (v, e) = ctx.eval_with_stats(&(&p.y - &shift))?;
        evals += e;
        tags.push(v);
    }
    Ok((tags, evals))
}

/// Gauge-restricted engine: the sink-component search confined to the
/// points with finite gauge value.
///
/// Preconditions mirrored from the existence statement are validated
/// exhaustively first: every value part must lie in H (after translating
/// by the lower bound when present) and at least one gauge value must be
/// finite. Works for any H, Archimedean or not.
pub fn find_maximal_gauge(
    inst: &Instance,
    ctx: &GaugeContext,
    start: &ProductPoint,
) -> Result<SolveOutcome> {
    let start_idx = inst.index_of(start).ok_or(Error::StartNotInSet)?;
    let shift = inst.lower_bound.clone().unwrap_or_else(|| Vector::zeros(inst.dim()));
    for (i, p) in inst.points.iter().enumerate() {
        let translated = &p.y - &shift;
        if !ctx.cone_h().contains(&translated)? {
            return Err(Error::Validation(format!(
                "value part of point {i} escapes H after translation: {translated}"
            )));
        }
    }
    let (tags, gauge_evals) = gauge_tags(inst, ctx)?;
    if !tags.iter().any(|t| t.is_finite()) {
        return Err(Error::Validation(
            "no point has a finite gauge value: the restricted domain is empty".into(),
        ));
    }
    if !tags[start_idx].is_finite() {
        return Err(Error::StartOutsideDomain);
    }
    let dom: Vec<bool> = tags.iter().map(|t| t.is_finite()).collect();

    let graph = SuccessorGraph::build(inst)?;
    // Successors of finite-gauge points keep finite gauges, so the induced
    // subgraph is successor-closed; the full condensation restricted to the
    // domain is the condensation of the induced subgraph.
    let cond = Condensation::of(&graph);
    let answer_idx = pick_answer(&graph, &cond, start_idx, Some(&dom))
        .ok_or(Error::StartOutsideDomain)?;
    let path = graph
        .bfs_path(start_idx, answer_idx)
        .expect("answer chosen among reachable nodes");
    let mut cert = MaximalCertificate {
        schema: 1,
        mode: SolveMode::T3,
        start: start.clone(),
        answer: inst.points[answer_idx].clone(),
        chain: path_points(inst, &path),
        checks: Vec::new(),
    };
    let verify = crate::verify::verify_certificate(inst, &cert, Some(ctx))?;
    cert.checks = verify.checks;
    Ok(SolveOutcome {
        certificate: cert,
        stats: SolveStats {
            order_predicate_evals: graph.pairs_evaluated + verify.order_predicate_evals,
            gauge_evals: gauge_evals + verify.gauge_evals,
            iterations: 1,
        },
    })
}
