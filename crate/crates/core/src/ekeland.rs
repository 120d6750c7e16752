use serde::{Deserialize, Serialize};

use crate::cone::ConvexCone;
use crate::error::{Error, Result};
use crate::instance::{Instance, ProductPoint};
use crate::metric::MetricSpace;
use crate::scaling::NormalFunction;
use crate::solve::{find_maximal_scc, CheckEntry, MaximalCertificate};
use crate::vector::Vector;

/// Answer of the scalar variational solver: an index of the carrier, the
/// underlying product certificate, and the two defining conditions checked
/// exhaustively against every carrier point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EkelandCertificate {
    pub schema: u32,
    pub eps: f64,
    pub start: usize,
    pub answer: usize,
    pub answer_value: f64,
    pub checks: Vec<CheckEntry>,
    pub product_certificate: MaximalCertificate,
}

impl EkelandCertificate {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(CheckEntry::passed)
            && self.product_certificate.all_checks_pass()
    }
}

/// Scalar variational principle on a finite carrier: find x̄ with
/// f(start) >= f(x̄) + eps * d(start, x̄) such that no other point improves
/// on x̄ by more than eps times its distance.
///
/// Reduces to the product solver over scalar values with the scaling
/// t -> eps * t, then re-verifies both conditions directly against f.
pub fn ekeland_solve(
    space: &MetricSpace,
    f: &[f64],
    eps: f64,
    start: usize,
) -> Result<EkelandCertificate> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Validation(format!("eps must be a positive scalar, got {eps}")));
    }
    if f.len() != space.size() {
        return Err(Error::Validation(format!(
            "value table has {} entries for {} carrier points",
            f.len(),
            space.size()
        )));
    }
    if let Some((i, bad)) = f.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Validation(format!("f({i}) = {bad} is not finite")));
    }
    space.check_index(start)?;

    let points: Vec<ProductPoint> = f
        .iter()
        .enumerate()
        .map(|(i, &v)| ProductPoint { x: i, y: Vector::new(vec![v]) })
        .collect();
    let inst = Instance::new(
        space.clone(),
        ConvexCone::orthant(1),
        ConvexCone::orthant(1),
        NormalFunction::linear(Vector::new(vec![eps]))?,
        points,
    );
    let outcome = find_maximal_scc(&inst, &inst.points[start])?;
    let cert = outcome.certificate;
    let answer = cert.answer.x;

    // Re-state the product conclusions in terms of f and d directly.
    let mut checks = Vec::new();
    let descent = f[start] - (f[answer] + eps * space.dist_unchecked(start, answer));
    if descent >= 0.0 {
        checks.push(CheckEntry::pass_with(
            "start-reaches-answer",
            format!("f(start) - f(answer) - eps*d = {descent}"),
        ));
    } else {
        checks.push(CheckEntry::fail(
            "start-reaches-answer",
            format!("deficit {descent}"),
        ));
    }
    let mut minimal = true;
    for x in 0..f.len() {
        if x == answer {
            continue;
        }
        if f[answer] >= f[x] + eps * space.dist_unchecked(answer, x) {
            checks.push(CheckEntry::fail(
                "no-strict-improvement",
                format!("point {x} improves: f({x}) + eps*d = {}", f[x] + eps * space.dist_unchecked(answer, x)),
            ));
            minimal = false;
        }
    }
    if minimal {
        checks.push(CheckEntry::pass_with(
            "no-strict-improvement",
            format!("{} candidates scanned", f.len() - 1),
        ));
    }

    Ok(EkelandCertificate {
        schema: 1,
        eps,
        start,
        answer,
        answer_value: f[answer],
        checks,
        product_certificate: cert,
    })
}
