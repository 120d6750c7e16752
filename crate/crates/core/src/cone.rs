use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;
use crate::vector::Vector;

/// The three decidable cone representations.
///
/// Membership must be a total computable predicate, so arbitrary convex
/// cones are not expressible: only the orthant, intersections of closed
/// halfspaces through the origin, and the lexicographic cone are carried.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConeKind {
    Orthant { dim: usize },
    Halfspaces { normals: Vec<Vector> },
    Lex { dim: usize },
}

/// A convex cone of R^n with a decidable membership predicate.
///
/// `tolerance` is the membership slack for float inputs; zero selects exact
/// mode, where halfspace dot products are evaluated over the rationals and
/// membership is scale-invariant. Lex membership is always exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexCone {
    #[serde(flatten)]
    pub kind: ConeKind,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub tolerance: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// Outcome of the pointedness decision K ∩ (-K) = {0}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Pointedness {
    Pointed,
    Blunt { witness: Vector },
}

impl ConvexCone {
    pub fn orthant(dim: usize) -> Self {
        ConvexCone { kind: ConeKind::Orthant { dim }, tolerance: 0.0 }
    }

    pub fn lex(dim: usize) -> Self {
        ConvexCone { kind: ConeKind::Lex { dim }, tolerance: 0.0 }
    }

    pub fn halfspaces(normals: Vec<Vector>) -> Self {
        ConvexCone { kind: ConeKind::Halfspaces { normals }, tolerance: 0.0 }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ConeKind::Orthant { dim } | ConeKind::Lex { dim } => *dim,
            ConeKind::Halfspaces { normals } => {
                normals.first().map(Vector::dim).unwrap_or(0)
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            ConeKind::Orthant { .. } => "orthant",
            ConeKind::Halfspaces { .. } => "halfspaces",
            ConeKind::Lex { .. } => "lex",
        }
    }

    /// Membership predicate v ∈ K.
    pub fn contains(&self, v: &Vector) -> Result<bool> {
        v.check_dim(self.dim())?;
        Ok(self.contains_unchecked(v))
    }

    pub(crate) fn contains_unchecked(&self, v: &Vector) -> bool {
        match &self.kind {
            ConeKind::Orthant { .. } => {
                v.entries().iter().all(|&e| e >= -self.tolerance)
            }
            ConeKind::Halfspaces { normals } => {
                if self.tolerance == 0.0 {
                    normals.iter().all(|n| exact::dot_sign(n, v) >= 0)
                } else {
                    normals.iter().all(|n| n.dot(v) >= -self.tolerance)
                }
            }
            // Exact and tolerance-free: zero, or first nonzero entry positive.
            ConeKind::Lex { .. } => match v.entries().iter().find(|&&e| e != 0.0) {
                None => true,
                Some(&e) => e > 0.0,
            },
        }
    }

    /// Membership with an extra additive slack, for law checks that must
    /// absorb float evaluation noise. Slack zero defers to the exact path;
    /// lex membership stays exact regardless.
    pub(crate) fn contains_with_slack(&self, v: &Vector, slack: f64) -> bool {
        if slack == 0.0 {
            return self.contains_unchecked(v);
        }
        match &self.kind {
            ConeKind::Orthant { .. } => {
                v.entries().iter().all(|&e| e >= -(self.tolerance + slack))
            }
            ConeKind::Halfspaces { normals } => normals.iter().all(|n| {
                let scale: f64 = n.entries().iter().map(|e| e.abs()).sum();
                n.dot(v) >= -(self.tolerance + slack * scale.max(1.0))
            }),
            ConeKind::Lex { .. } => self.contains_unchecked(v),
        }
    }

    /// Induced quasi-order: y1 ≤_K y2 iff y2 - y1 ∈ K.
    pub fn leq(&self, y1: &Vector, y2: &Vector) -> Result<bool> {
        y1.check_dim(self.dim())?;
        y2.check_dim(self.dim())?;
        Ok(self.contains_unchecked(&(y2 - y1)))
    }

    /// Decides K ∩ (-K) = {0}. The orthant and lex cones are pointed by
    /// their membership rule; halfspace cones are blunt exactly when the
    /// normals have a nontrivial common null space, and an exact kernel
    /// vector is returned as the witness.
    pub fn pointedness(&self) -> Pointedness {
        match &self.kind {
            ConeKind::Orthant { .. } | ConeKind::Lex { .. } => Pointedness::Pointed,
            ConeKind::Halfspaces { normals } => {
                let basis = exact::kernel_basis(normals, self.dim());
                match basis.into_iter().next() {
                    Some(witness) => Pointedness::Blunt { witness },
                    None => Pointedness::Pointed,
                }
            }
        }
    }

    /// Structural validation: consistent dimensions, a nonzero member,
    /// a non-member, and closure under sampled conic combinations.
    pub fn validate(&self) -> Result<()> {
        if self.tolerance < 0.0 || !self.tolerance.is_finite() {
            return Err(Error::Validation(format!(
                "cone tolerance must be a finite nonnegative scalar, got {}",
                self.tolerance
            )));
        }
        let dim = self.dim();
        if dim == 0 {
            return Err(Error::Validation("cone dimension must be >= 1".into()));
        }
        if let ConeKind::Halfspaces { normals } = &self.kind {
            for n in normals {
                n.validate()?;
                n.check_dim(dim)?;
            }
            if normals.iter().all(Vector::is_zero) {
                return Err(Error::Validation(
                    "halfspace cone with all-zero normals is the whole space".into(),
                ));
            }
        }
        let member = self
            .nonzero_member()
            .ok_or_else(|| Error::Validation("cone is degenerate: no nonzero member found".into()))?;
        let non_member = self
            .non_member()
            .ok_or_else(|| Error::Validation("cone is improper: no non-member found".into()))?;
        debug_assert!(self.contains_unchecked(&member));
        debug_assert!(!self.contains_unchecked(&non_member));

        // Conic-combination closure on a deterministic sample.
        let probes = [(&member, 0.0), (&member, 1.0), (&member, 2.5), (&member, 0.5)];
        for (v, alpha) in probes {
            let scaled = v.scale(alpha);
            if !self.contains_unchecked(&scaled) {
                return Err(Error::Validation(format!(
                    "cone not closed under nonnegative scaling: {alpha} * {v}"
                )));
            }
            let sum = &scaled + &member;
            if !self.contains_unchecked(&sum) {
                return Err(Error::Validation(format!(
                    "cone not closed under addition: {scaled} + {member}"
                )));
            }
        }
        Ok(())
    }

    /// Some nonzero member, if one can be exhibited from basis vectors,
    /// normals, their sums and the exact kernel.
    pub fn nonzero_member(&self) -> Option<Vector> {
        let dim = self.dim();
        match &self.kind {
            ConeKind::Orthant { .. } | ConeKind::Lex { .. } => Some(Vector::basis(dim, 0)),
            ConeKind::Halfspaces { normals } => {
                let mut candidates: Vec<Vector> = Vec::new();
                for i in 0..dim {
                    candidates.push(Vector::basis(dim, i));
                    candidates.push(-&Vector::basis(dim, i));
                }
                candidates.extend(normals.iter().cloned());
                let sum = normals
                    .iter()
                    .fold(Vector::zeros(dim), |acc, n| &acc + n);
                candidates.push(sum);
                candidates.extend(exact::kernel_basis(normals, dim));
                candidates
                    .into_iter()
                    .filter(|v| !v.is_zero())
                    .find(|v| self.contains_unchecked(v))
            }
        }
    }

    /// Some non-member, if one can be exhibited.
    pub fn non_member(&self) -> Option<Vector> {
        let dim = self.dim();
        match &self.kind {
            ConeKind::Orthant { .. } | ConeKind::Lex { .. } => Some(-&Vector::basis(dim, 0)),
            ConeKind::Halfspaces { normals } => normals
                .iter()
                .find(|n| !n.is_zero())
                .map(|n| -n),
        }
    }
}

/// One counterexample to the Archimedean law: a pair (h, v) in H with
/// τh ≤_H v for every τ > 0 although h ∉ H ∩ (-H).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchimedeanCounterexample {
    pub h: Vector,
    pub v: Vector,
    /// Sampled τ grid on which the domination was confirmed.
    pub sampled_tau: Vec<f64>,
}

/// Searches `candidates` for a pair falsifying the Archimedean law of `H`.
///
/// A pair qualifies only when the domination τh ≤_H v holds for *all* τ > 0,
/// which is decidable per cone kind and is confirmed on a geometric τ grid
/// up to `tau_max`. A returned pair is therefore a proof that H is
/// non-Archimedean; an empty result proves nothing (closed kinds never
/// yield one, the lex cone does).
pub fn archimedean_falsify(
    h_cone: &ConvexCone,
    candidates: &[(Vector, Vector)],
    tau_max: f64,
    steps: usize,
) -> Result<Option<ArchimedeanCounterexample>> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let grid = geometric_grid(tau_max, steps);
    for (h, v) in candidates {
        h.check_dim(h_cone.dim())?;
        v.check_dim(h_cone.dim())?;
        if !h_cone.contains_unchecked(h) || !h_cone.contains_unchecked(v) {
            continue;
        }
        // h ∈ H ∩ (-H) pairs cannot falsify anything.
        if h_cone.contains_unchecked(&-h) {
            continue;
        }
        if !dominates_for_all_tau(h_cone, h, v) {
            continue;
        }
        let sampled: Vec<f64> = grid
            .iter()
            .copied()
            .filter(|&tau| {
                let gap = v - &h.scale(tau);
                h_cone.contains_unchecked(&gap)
            })
            .collect();
        if sampled.len() == grid.len() {
            return Ok(Some(ArchimedeanCounterexample {
                h: h.clone(),
                v: v.clone(),
                sampled_tau: sampled,
            }));
        }
    }
    Ok(None)
}

/// Decides τh ≤_H v for all τ > 0, given h, v ∈ H.
///
/// For the orthant and halfspace kinds this forces every linear functional
/// of h to vanish, putting h into H ∩ (-H); for lex the leading nonzero
/// coordinate of (h, v) settles it.
fn dominates_for_all_tau(h_cone: &ConvexCone, h: &Vector, v: &Vector) -> bool {
    match &h_cone.kind {
        ConeKind::Orthant { .. } => h
            .entries()
            .iter()
            .zip(v.entries())
            .all(|(&hi, &vi)| hi <= h_cone.tolerance && vi >= -h_cone.tolerance),
        ConeKind::Halfspaces { normals } => normals.iter().all(|n| {
            if h_cone.tolerance == 0.0 {
                exact::dot_sign(n, h) <= 0 && exact::dot_sign(n, v) >= 0
            } else {
                n.dot(h) <= h_cone.tolerance && n.dot(v) >= -h_cone.tolerance
            }
        }),
        ConeKind::Lex { dim } => {
            let lead = (0..*dim).find(|&j| h[j] != 0.0 || v[j] != 0.0);
            match lead {
                None => true,
                Some(j) => {
                    (h[j] < 0.0 && v[j] >= 0.0) || (h[j] == 0.0 && v[j] > 0.0)
                }
            }
        }
    }
}

fn geometric_grid(tau_max: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(2);
    let ratio = tau_max.powf(1.0 / (steps as f64 - 1.0));
    let mut grid = Vec::with_capacity(steps);
    let mut tau = 1.0f64;
    for _ in 0..steps {
        grid.push(tau.min(tau_max));
        tau *= ratio;
    }
    grid
}

/// The canonical non-Archimedean witness pair for lex(2): h = (0,1) is
/// dominated by v = (1,0) at every scale.
pub fn lex2_witness() -> (Vector, Vector) {
    (Vector::new(vec![0.0, 1.0]), Vector::new(vec![1.0, 0.0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apex_belongs_to_every_cone() {
        for cone in [
            ConvexCone::orthant(2),
            ConvexCone::lex(2),
            ConvexCone::halfspaces(vec![Vector::new(vec![1.0, 0.0])]),
        ] {
            assert!(cone.contains(&Vector::zeros(2)).unwrap());
        }
    }

    #[test]
    fn orthant_membership() {
        let k = ConvexCone::orthant(2);
        assert!(!k.contains(&Vector::new(vec![-1.0, 5.0])).unwrap());
        assert!(k.contains(&Vector::new(vec![0.0, 0.0])).unwrap());
        assert!(k.leq(&Vector::new(vec![1.0, 1.0]), &Vector::new(vec![2.0, 3.0])).unwrap());
    }

    #[test]
    fn lex_membership_is_exact() {
        let l = ConvexCone::lex(2);
        assert!(l.contains(&Vector::new(vec![0.0, 1.0])).unwrap());
        assert!(!l.contains(&Vector::new(vec![0.0, -1.0])).unwrap());
        // (0,9) ≤ (1,0): the difference (1,-9) has positive first entry.
        assert!(l.leq(&Vector::new(vec![0.0, 9.0]), &Vector::new(vec![1.0, 0.0])).unwrap());
    }

    #[test]
    fn reflexivity_for_every_kind() {
        let y = Vector::new(vec![3.5, -2.0]);
        for cone in [
            ConvexCone::orthant(2),
            ConvexCone::lex(2),
            ConvexCone::halfspaces(vec![Vector::new(vec![1.0, 2.0])]),
        ] {
            assert!(cone.leq(&y, &y).unwrap());
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let k = ConvexCone::orthant(2);
        assert!(matches!(
            k.contains(&Vector::new(vec![1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pointedness_decisions() {
        assert_eq!(ConvexCone::orthant(3).pointedness(), Pointedness::Pointed);
        assert_eq!(ConvexCone::lex(2).pointedness(), Pointedness::Pointed);
        let single = ConvexCone::halfspaces(vec![Vector::new(vec![1.0, 0.0])]);
        match single.pointedness() {
            Pointedness::Blunt { witness } => {
                assert!(!witness.is_zero());
                assert!(single.contains(&witness).unwrap());
                assert!(single.contains(&-&witness).unwrap());
            }
            Pointedness::Pointed => panic!("single halfspace in R^2 must be blunt"),
        }
    }

    #[test]
    fn lex_falsifies_archimedean_law() {
        let lex = ConvexCone::lex(2);
        let found = archimedean_falsify(&lex, &[lex2_witness()], 1e12, 40)
            .unwrap()
            .expect("lex(2) witness pair must qualify");
        assert_eq!(found.h.entries(), &[0.0, 1.0]);
        assert_eq!(found.v.entries(), &[1.0, 0.0]);
    }

    #[test]
    fn lex_rejects_bounded_domination() {
        // v = (0, big) only dominates τh up to τ = big, not for all τ.
        let lex = ConvexCone::lex(2);
        let pair = (Vector::new(vec![0.0, 1.0]), Vector::new(vec![0.0, 1e20]));
        assert!(archimedean_falsify(&lex, &[pair], 1e12, 40).unwrap().is_none());
    }

    #[test]
    fn closed_kinds_never_falsify() {
        let orthant = ConvexCone::orthant(2);
        let pairs = vec![
            (Vector::new(vec![1e-30, 0.0]), Vector::new(vec![1e10, 0.0])),
            lex2_witness(),
        ];
        assert!(archimedean_falsify(&orthant, &pairs, 1e12, 40).unwrap().is_none());

        let hs = ConvexCone::halfspaces(vec![
            Vector::new(vec![1.0, 0.0]),
            Vector::new(vec![0.0, 1.0]),
        ]);
        assert!(archimedean_falsify(&hs, &pairs, 1e12, 40).unwrap().is_none());
    }

    #[test]
    fn empty_candidates_error() {
        assert!(matches!(
            archimedean_falsify(&ConvexCone::lex(2), &[], 1e12, 40),
            Err(Error::EmptyCandidates)
        ));
    }

    #[test]
    fn validation_rejects_whole_space() {
        let improper = ConvexCone::halfspaces(vec![Vector::zeros(2)]);
        assert!(improper.validate().is_err());
        assert!(ConvexCone::orthant(2).validate().is_ok());
        assert!(ConvexCone::lex(3).validate().is_ok());
    }

    #[test]
    fn json_shapes() {
        let k: ConvexCone = serde_json::from_str(r#"{"kind":"orthant","dim":2}"#).unwrap();
        assert_eq!(k, ConvexCone::orthant(2));
        let h: ConvexCone =
            serde_json::from_str(r#"{"kind":"halfspaces","normals":[[1.0,0.0]]}"#).unwrap();
        assert_eq!(h.dim(), 2);
        let l: ConvexCone = serde_json::from_str(r#"{"kind":"lex","dim":4}"#).unwrap();
        assert_eq!(l, ConvexCone::lex(4));
        assert_eq!(
            serde_json::to_string(&ConvexCone::orthant(2)).unwrap(),
            r#"{"kind":"orthant","dim":2}"#
        );
    }
}
