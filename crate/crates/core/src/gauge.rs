use serde::{Deserialize, Serialize};

use crate::cone::{ConvexCone, Pointedness};
use crate::error::{Error, Result};
use crate::exact::{self, ExactGauge};
use crate::instance::ProductPoint;
use crate::report::SamplingPolicy;
use crate::scaling::NormalFunction;
use crate::vector::Vector;

/// Value of a gauge evaluation on the extended real line.
///
/// The finite case is a certified enclosure: the defining membership
/// predicate holds at `lo` and fails at `hi`, so the true supremum lies in
/// `[lo, hi]`. `NegInfinity` encodes arguments outside the cone;
/// `PosInfinity` means the predicate still held when the search cap was
/// reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum GaugeValue {
    NegInfinity,
    Finite { lo: f64, hi: f64 },
    PosInfinity,
}

impl GaugeValue {
    pub fn lo(&self) -> f64 {
        match self {
            GaugeValue::NegInfinity => f64::NEG_INFINITY,
            GaugeValue::Finite { lo, .. } => *lo,
            GaugeValue::PosInfinity => f64::INFINITY,
        }
    }

    pub fn hi(&self) -> f64 {
        match self {
            GaugeValue::NegInfinity => f64::NEG_INFINITY,
            GaugeValue::Finite { hi, .. } => *hi,
            GaugeValue::PosInfinity => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GaugeValue::Finite { .. })
    }

    pub fn width(&self) -> f64 {
        match self {
            GaugeValue::Finite { lo, hi } => hi - lo,
            _ => f64::INFINITY,
        }
    }

    pub fn mid(&self) -> f64 {
        match self {
            GaugeValue::Finite { lo, hi } => 0.5 * (lo + hi),
            GaugeValue::NegInfinity => f64::NEG_INFINITY,
            GaugeValue::PosInfinity => f64::INFINITY,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        match self {
            GaugeValue::Finite { lo, hi } => *lo <= t && t <= *hi,
            _ => false,
        }
    }

    /// Enclosures compatible with equal underlying values, within `slack`.
    pub fn overlaps(&self, other: &GaugeValue, slack: f64) -> bool {
        match (self, other) {
            (GaugeValue::Finite { lo: a, hi: b }, GaugeValue::Finite { lo: c, hi: d }) => {
                *a <= *d + slack && *c <= *b + slack
            }
            (a, b) => a == b,
        }
    }
}

/// Evaluation context for the conical gauge of a pair (H, Lambda):
/// the supremum of { s >= 0 : Lambda(s) <=_H y }.
///
/// Construction validates the scaling laws of Lambda against H, so a
/// context in hand is always safe to evaluate. `tol` bounds the enclosure
/// width of finite answers; `s_max` caps the doubling search, beyond which
/// the value is declared unbounded.
#[derive(Debug, Clone)]
pub struct GaugeContext {
    cone_h: ConvexCone,
    scaling: NormalFunction,
    tol: f64,
    s_max: f64,
    pointed: bool,
}

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_S_MAX: f64 = 1099511627776.0; // 2^40

impl GaugeContext {
    pub fn new(cone_h: ConvexCone, scaling: NormalFunction, tol: f64, s_max: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::Validation(format!("enclosure tolerance must be positive, got {tol}")));
        }
        if !(s_max >= 1.0) {
            return Err(Error::Validation(format!("search cap must be >= 1, got {s_max}")));
        }
        if cone_h.dim() != scaling.dim() {
            return Err(Error::DimensionMismatch { expected: scaling.dim(), got: cone_h.dim() });
        }
        let laws = scaling.validate_laws(&cone_h, &cone_h, &SamplingPolicy::default())?;
        if !laws.all_passed() {
            return Err(Error::UnvalidatedContext);
        }
        let pointed = matches!(cone_h.pointedness(), Pointedness::Pointed);
        Ok(GaugeContext { cone_h, scaling, tol, s_max, pointed })
    }

    pub fn with_defaults(cone_h: ConvexCone, scaling: NormalFunction) -> Result<Self> {
        Self::new(cone_h, scaling, DEFAULT_TOL, DEFAULT_S_MAX)
    }

    pub fn cone_h(&self) -> &ConvexCone {
        &self.cone_h
    }

    pub fn scaling(&self) -> &NormalFunction {
        &self.scaling
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    fn predicate(&self, y: &Vector, s: f64) -> bool {
        let value = self.scaling.eval(s).expect("s >= 0 by construction");
        self.cone_h.contains_unchecked(&(y - &value))
    }

    /// Gauge evaluation by bracketing and bisection.
    ///
    /// Outside H the value is negative infinity. Otherwise the membership
    /// predicate is hereditary in s, so doubling from 1 finds a bracket
    /// whose failing end is bisected down to width `tol`. If the predicate
    /// still holds at `s_max` the value is reported unbounded.
    pub fn eval(&self, y: &Vector) -> Result<GaugeValue> {
        Ok(self.eval_with_stats(y)?.0)
    }

    /// Like [`GaugeContext::eval`] but also reports the number of
    /// predicate evaluations, for deterministic work accounting.
    pub fn eval_with_stats(&self, y: &Vector) -> Result<(GaugeValue, usize)> {
        y.check_dim(self.cone_h.dim())?;
        let mut evals = 1usize;
        if !self.cone_h.contains_unchecked(y) {
            return Ok((GaugeValue::NegInfinity, evals));
        }
        // Exact at the apex for pointed cones: no s > 0 can stay below 0.
        if self.pointed && y.is_zero() {
            return Ok((GaugeValue::Finite { lo: 0.0, hi: 0.0 }, evals));
        }
        let mut lo = 0.0f64;
        let mut hi = None;
        let mut s = 1.0f64;
        while s <= self.s_max {
            evals += 1;
            if self.predicate(y, s) {
                lo = s;
                s *= 2.0;
            } else {
                hi = Some(s);
                break;
            }
        }
        let Some(mut hi) = hi else {
            return Ok((GaugeValue::PosInfinity, evals));
        };
        while hi - lo > self.tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break; // float resolution floor
            }
            evals += 1;
            if self.predicate(y, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((GaugeValue::Finite { lo, hi }, evals))
    }

    /// Composition with the projection onto Y: the x part is ignored.
    pub fn phi(&self, point: &ProductPoint) -> Result<GaugeValue> {
        self.eval(&point.y)
    }

    /// Exact gauge value where a closed form exists: linear scaling over a
    /// tolerance-zero orthant, halfspace or lex cone. `None` elsewhere.
    pub fn exact_eval(&self, y: &Vector) -> Option<ExactGauge> {
        if self.cone_h.tolerance != 0.0 {
            return None;
        }
        let k = self.scaling.as_linear()?;
        if y.dim() != k.dim() {
            return None;
        }
        match &self.cone_h.kind {
            crate::cone::ConeKind::Orthant { .. } => Some(exact::linear_orthant_gauge(k, y)),
            crate::cone::ConeKind::Lex { .. } => Some(exact::linear_lex_gauge(k, y)),
            crate::cone::ConeKind::Halfspaces { normals } => {
                Some(exact::linear_halfspace_gauge(normals, k, y))
            }
        }
    }
}

/// Closed-form gauge for a linear scaling with strictly positive direction
/// over the nonnegative orthant: min_i y_i / k0_i, or negative infinity
/// outside the orthant. Zero-width enclosure; independent of the bisection
/// path, serving as its oracle.
pub fn gamma_linear_orthant(k0: &Vector, y: &Vector) -> Result<GaugeValue> {
    y.check_dim(k0.dim())?;
    if k0.entries().iter().any(|&e| e <= 0.0) {
        return Err(Error::Validation(format!(
            "closed-form gauge needs a strictly positive direction, got {k0}"
        )));
    }
    if y.entries().iter().any(|&e| e < 0.0) {
        return Ok(GaugeValue::NegInfinity);
    }
    let value = y
        .entries()
        .iter()
        .zip(k0.entries())
        .map(|(yi, ki)| yi / ki)
        .fold(f64::INFINITY, f64::min);
    Ok(GaugeValue::Finite { lo: value, hi: value })
}
