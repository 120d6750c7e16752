use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cone::ConvexCone;
use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::report::{LawCheck, LawReport, SamplingPolicy};
use crate::scaling::NormalFunction;
use crate::vector::Vector;

/// A point of the product space: an index into the metric carrier and a
/// value vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductPoint {
    pub x: usize,
    pub y: Vector,
}

pub const POINT_CAP: usize = 5000;

/// Cap on the exhaustive transitivity scan; larger point sets fall back to
/// reflexivity-only order validation.
const TRANSITIVITY_CAP: usize = 1500;

/// A finite problem instance: metric carrier X, cone pair K inside H, the
/// scaling map, the finite point set A, and an optional lower bound vector
/// for the value projections.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub space: MetricSpace,
    #[serde(rename = "coneK")]
    pub cone_k: ConvexCone,
    #[serde(rename = "coneH")]
    pub cone_h: ConvexCone,
    pub lambda: NormalFunction,
    #[serde(rename = "A")]
    pub points: Vec<ProductPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<Vector>,
}

fn default_schema() -> u32 {
    1
}

impl Instance {
    pub fn new(
        space: MetricSpace,
        cone_k: ConvexCone,
        cone_h: ConvexCone,
        lambda: NormalFunction,
        points: Vec<ProductPoint>,
    ) -> Self {
        Instance {
            schema: 1,
            space,
            cone_k,
            cone_h,
            lambda,
            points,
            lower_bound: None,
        }
    }

    pub fn with_lower_bound(mut self, bound: Vector) -> Self {
        self.lower_bound = Some(bound);
        self
    }

    pub fn dim(&self) -> usize {
        self.cone_k.dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Result<&ProductPoint> {
        self.points
            .get(i)
            .ok_or(Error::IndexOutOfRange { index: i, size: self.points.len() })
    }

    /// Index of a point equal to `p` in input order.
    pub fn index_of(&self, p: &ProductPoint) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// The product order: a dominates b when the scaled distance between
    /// their carriers fits under the value drop, Lambda(d(a.x, b.x)) <=_K
    /// a.y - b.y.
    pub fn product_geq(&self, a: &ProductPoint, b: &ProductPoint) -> Result<bool> {
        self.space.check_index(a.x)?;
        self.space.check_index(b.x)?;
        a.y.check_dim(self.dim())?;
        b.y.check_dim(self.dim())?;
        let d = self.space.dist_unchecked(a.x, b.x);
        let step = self.lambda.eval(d)?;
        Ok(self.cone_k.contains_unchecked(&(&(&a.y - &b.y) - &step)))
    }

    pub(crate) fn geq_idx(&self, i: usize, j: usize) -> bool {
        let a = &self.points[i];
        let b = &self.points[j];
        let d = self.space.dist_unchecked(a.x, b.x);
        let step = self.lambda.eval(d).expect("distances are nonnegative");
        self.cone_k.contains_unchecked(&(&(&a.y - &b.y) - &step))
    }

    /// The carrier semimetric on product points: the distance of the x
    /// parts. Reflexive, symmetric and triangular but not sufficient
    /// (distinct points over one carrier index are at distance zero).
    pub fn semimetric_e(&self, a: &ProductPoint, b: &ProductPoint) -> Result<f64> {
        self.space.dist(a.x, b.x)
    }

    /// Full structural validation. Every failed check carries a witness;
    /// solvers expect a clean report before they run.
    pub fn validate(&self, policy: &SamplingPolicy) -> LawReport {
        let mut checks = Vec::new();

        let metric_report = self.space.validate();
        if metric_report.is_valid() {
            let mut c = LawCheck::proven("metric-axioms");
            c.samples = metric_report.size;
            checks.push(c);
        } else {
            checks.push(LawCheck::failed(
                "metric-axioms",
                metric_report.size,
                -1.0,
                serde_json::to_string(&metric_report.violations).unwrap_or_default(),
            ));
        }

        for (name, cone) in [("coneK", &self.cone_k), ("coneH", &self.cone_h)] {
            match cone.validate() {
                Ok(()) => checks.push(LawCheck::proven(&format!("{name}-well-formed"))),
                Err(e) => checks.push(LawCheck::failed(
                    &format!("{name}-well-formed"),
                    0,
                    -1.0,
                    e.to_string(),
                )),
            }
        }

        let dim = self.dim();
        let mut shape_ok = self.cone_h.dim() == dim && self.lambda.dim() == dim;
        for (i, p) in self.points.iter().enumerate() {
            if p.y.dim() != dim || p.y.validate().is_err() || p.x >= self.space.size() {
                checks.push(LawCheck::failed(
                    "points-well-formed",
                    self.points.len(),
                    -1.0,
                    format!("point {i}: x = {}, y = {}", p.x, p.y),
                ));
                shape_ok = false;
                break;
            }
        }
        if self.points.is_empty() {
            checks.push(LawCheck::failed("points-well-formed", 0, -1.0, "A is empty".into()));
            shape_ok = false;
        } else if self.points.len() > POINT_CAP {
            checks.push(LawCheck::failed(
                "points-well-formed",
                self.points.len(),
                -1.0,
                format!("|A| = {} exceeds cap {POINT_CAP}", self.points.len()),
            ));
            shape_ok = false;
        } else if shape_ok {
            let mut c = LawCheck::proven("points-well-formed");
            c.samples = self.points.len();
            checks.push(c);
        } else {
            checks.push(LawCheck::failed(
                "points-well-formed",
                self.points.len(),
                -1.0,
                "cone/scaling dimensions disagree".into(),
            ));
        }

        if shape_ok {
            checks.push(self.check_k_inside_h(policy));
            match self.lambda.validate_laws(&self.cone_k, &self.cone_h, policy) {
                Ok(report) => checks.extend(report.checks),
                Err(e) => checks.push(LawCheck::failed("scaling-laws", 0, -1.0, e.to_string())),
            }
            checks.push(self.lambda.strict_positivity_check(&self.cone_k, &self.cone_h, policy));
            checks.push(self.lambda.subtractivity_check(&self.cone_k, policy));
            checks.push(self.check_lower_bound());
            checks.extend(self.check_order_laws());
        }

        LawReport { seed: policy.seed, checks }
    }

    /// Validation as a hard gate.
    pub fn validate_ok(&self, policy: &SamplingPolicy) -> Result<()> {
        let report = self.validate(policy);
        let failure = report.failures().next().cloned();
        match failure {
            None => Ok(()),
            Some(f) => Err(Error::Validation(format!(
                "{}: {}",
                f.law,
                f.witness.unwrap_or_default()
            ))),
        }
    }

    /// K inside H on sampled members: every drawn K member must satisfy the
    /// H membership predicate.
    fn check_k_inside_h(&self, policy: &SamplingPolicy) -> LawCheck {
        let samples = sample_members(&self.cone_k, policy, 64);
        for v in &samples {
            if !self.cone_h.contains_unchecked(v) {
                return LawCheck::failed(
                    "k-inside-h",
                    samples.len(),
                    -1.0,
                    format!("K member {v} escapes H"),
                );
            }
        }
        LawCheck::sampled("k-inside-h", samples.len(), 0.0)
    }

    /// Exhaustive lower-bound check: y - bound in H for every point.
    fn check_lower_bound(&self) -> LawCheck {
        let Some(bound) = &self.lower_bound else {
            return LawCheck::proven("bounded-below");
        };
        if bound.dim() != self.dim() {
            return LawCheck::failed("bounded-below", 0, -1.0, "bound dimension mismatch".into());
        }
        for (i, p) in self.points.iter().enumerate() {
            if !self.cone_h.contains_unchecked(&(&p.y - bound)) {
                return LawCheck::failed(
                    "bounded-below",
                    self.points.len(),
                    -1.0,
                    format!("point {i}: y = {} is not above {}", p.y, bound),
                );
            }
        }
        let mut c = LawCheck::proven("bounded-below");
        c.samples = self.points.len();
        c
    }

    /// Reflexivity on every point; transitivity exhaustively over the
    /// materialized relation (float tolerance can break it, so it is
    /// checked rather than assumed).
    fn check_order_laws(&self) -> Vec<LawCheck> {
        let n = self.points.len();
        let mut checks = Vec::new();
        for i in 0..n {
            if !self.geq_idx(i, i) {
                checks.push(LawCheck::failed(
                    "order-reflexive",
                    n,
                    -1.0,
                    format!("point {i} does not dominate itself"),
                ));
                return checks;
            }
        }
        let mut c = LawCheck::proven("order-reflexive");
        c.samples = n;
        checks.push(c);

        if n > TRANSITIVITY_CAP {
            checks.push(LawCheck::sampled("order-transitive", 0, 0.0));
            return checks;
        }
        // Bit-matrix of the relation, then one containment pass per edge.
        let words = n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && self.geq_idx(i, j) {
                    rows[i][j / 64] |= 1 << (j % 64);
                }
            }
        }
        let mut count = 0usize;
        for i in 0..n {
            for j in 0..n {
                if i == j || rows[i][j / 64] & (1 << (j % 64)) == 0 {
                    continue;
                }
                count += 1;
                for w in 0..words {
                    let missing = rows[j][w] & !rows[i][w];
                    // j itself may appear in rows[j] complementwise; mask i, j.
                    let mut missing = missing;
                    if w == i / 64 {
                        missing &= !(1 << (i % 64));
                    }
                    if w == j / 64 {
                        missing &= !(1 << (j % 64));
                    }
                    if missing != 0 {
                        let k = w * 64 + missing.trailing_zeros() as usize;
                        checks.push(LawCheck::failed(
                            "order-transitive",
                            count,
                            -1.0,
                            format!("{i} >= {j} >= {k} but not {i} >= {k}"),
                        ));
                        return checks;
                    }
                }
            }
        }
        checks.push(LawCheck::sampled("order-transitive", count, 0.0));
        checks
    }
}

/// Draws members of a cone: canonical members, member basis vectors, kept
/// random probes, and conic combinations of what was found.
pub fn sample_members(cone: &ConvexCone, policy: &SamplingPolicy, target: usize) -> Vec<Vector> {
    let dim = cone.dim();
    let mut found: Vec<Vector> = Vec::new();
    let push = |v: Vector, found: &mut Vec<Vector>| {
        if cone.contains_unchecked(&v) {
            found.push(v);
        }
    };
    if let Some(m) = cone.nonzero_member() {
        push(m, &mut found);
    }
    for i in 0..dim {
        push(Vector::basis(dim, i), &mut found);
    }
    let mut rng = policy.rng();
    for _ in 0..target * 4 {
        if found.len() >= target {
            break;
        }
        let v = Vector::new((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
        push(v, &mut found);
    }
    let base = found.clone();
    for pair in base.windows(2) {
        if found.len() >= target {
            break;
        }
        let combo = &pair[0].scale(rng.gen_range(0.0..2.0)) + &pair[1];
        push(combo, &mut found);
    }
    found.truncate(target);
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn product_order_hand_values() {
        let inst = fixtures::three_point_chain();
        let a = &inst.points[0]; // (0, 5)
        let b = &inst.points[1]; // (1, 3)
        assert!(inst.product_geq(a, b).unwrap());
        assert!(!inst.product_geq(b, a).unwrap());
        assert!(inst.product_geq(a, a).unwrap(), "reflexive");
    }

    #[test]
    fn semimetric_values() {
        let inst = fixtures::three_point_chain();
        let a = &inst.points[0];
        let b = &inst.points[1];
        let c = &inst.points[2];
        assert_eq!(inst.semimetric_e(a, a).unwrap(), 0.0);
        assert_eq!(inst.semimetric_e(a, b).unwrap(), 1.0);
        // Distinct points over one carrier index: distance zero, so the
        // semimetric is not sufficient.
        assert_eq!(inst.semimetric_e(b, c).unwrap(), 0.0);
        assert_ne!(b, c);
    }

    #[test]
    fn validation_passes_on_fixtures() {
        let policy = SamplingPolicy::default();
        for inst in [
            fixtures::three_point_chain(),
            fixtures::orthant_linear_dim2(),
            fixtures::two_power_instance(),
            fixtures::lex_instance(),
            fixtures::halfspace_instance(),
        ] {
            let report = inst.validate(&policy);
            assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn lower_bound_violation_is_reported() {
        let mut inst = fixtures::orthant_linear_dim2();
        inst.lower_bound = Some(Vector::new(vec![10.0, 10.0]));
        let report = inst.validate(&SamplingPolicy::default());
        assert!(report
            .failures()
            .any(|c| c.law == "bounded-below"));
    }

    #[test]
    fn instance_json_roundtrip() {
        let inst = fixtures::three_point_chain();
        let text = serde_json::to_string_pretty(&inst).unwrap();
        let back: Instance = serde_json::from_str(&text).unwrap();
        assert_eq!(back.points, inst.points);
        assert_eq!(back.schema, 1);
    }
}
