use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Norm exponent for point clouds: a finite p >= 1 or the max norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormExponent {
    Finite(f64),
    #[serde(rename = "inf")]
    Infinite(InfTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InfTag {
    #[serde(rename = "inf")]
    Inf,
}

/// A finite metric space: either an explicit distance table or a point
/// cloud under a Minkowski norm. Tables are validated exhaustively; point
/// clouds satisfy the metric axioms analytically (up to duplicate points,
/// which are rejected).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum MetricSpace {
    #[serde(rename = "finite-matrix")]
    Matrix { d: Vec<Vec<f64>> },
    #[serde(rename = "points")]
    Points { coords: Vec<Vector>, p: NormExponent },
}

/// One violated metric axiom, with the witnessing indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum MetricViolation {
    NegativeDistance { i: usize, j: usize, value: f64 },
    NonzeroDiagonal { i: usize, value: f64 },
    Asymmetry { i: usize, j: usize, forward: f64, backward: f64 },
    /// d(i,j) > d(i,k) + d(k,j).
    Triangle { i: usize, k: usize, j: usize, excess: f64 },
    /// Distinct points at distance zero (the space must separate points).
    Indiscernible { i: usize, j: usize },
    /// Malformed carrier: ragged table, bad coordinate, or exponent < 1.
    Shape { detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub size: usize,
    pub kind: String,
    pub violations: Vec<MetricViolation>,
}

impl MetricReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl MetricSpace {
    pub fn matrix(d: Vec<Vec<f64>>) -> Self {
        MetricSpace::Matrix { d }
    }

    pub fn points(coords: Vec<Vector>, p: f64) -> Self {
        MetricSpace::Points { coords, p: NormExponent::Finite(p) }
    }

    pub fn size(&self) -> usize {
        match self {
            MetricSpace::Matrix { d } => d.len(),
            MetricSpace::Points { coords, .. } => coords.len(),
        }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.size() {
            return Err(Error::IndexOutOfRange { index: i, size: self.size() });
        }
        Ok(())
    }

    /// d(i, j): table lookup or norm of the coordinate difference.
    pub fn dist(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.dist_unchecked(i, j))
    }

    pub(crate) fn dist_unchecked(&self, i: usize, j: usize) -> f64 {
        match self {
            MetricSpace::Matrix { d } => d[i][j],
            MetricSpace::Points { coords, p } => {
                if i == j {
                    return 0.0;
                }
                let diff = &coords[i] - &coords[j];
                match p {
                    NormExponent::Infinite(_) => diff
                        .entries()
                        .iter()
                        .fold(0.0f64, |m, &e| m.max(e.abs())),
                    NormExponent::Finite(p) => {
                        if *p == 1.0 {
                            diff.entries().iter().map(|e| e.abs()).sum()
                        } else if *p == 2.0 {
                            diff.entries().iter().map(|e| e * e).sum::<f64>().sqrt()
                        } else {
                            diff.entries()
                                .iter()
                                .map(|e| e.abs().powf(*p))
                                .sum::<f64>()
                                .powf(1.0 / *p)
                        }
                    }
                }
            }
        }
    }

    /// Exhaustive axiom check for tables (O(n^3) triangle scan); point
    /// clouds only need the shape, exponent and separation checks.
    pub fn validate(&self) -> MetricReport {
        let n = self.size();
        let mut violations = Vec::new();
        match self {
            MetricSpace::Matrix { d } => {
                if d.iter().any(|row| row.len() != n) {
                    return MetricReport {
                        size: n,
                        kind: "finite-matrix".into(),
                        violations: vec![MetricViolation::Shape {
                            detail: format!("distance table must be {n}x{n}"),
                        }],
                    };
                }
                for i in 0..n {
                    if d[i][i] != 0.0 {
                        violations.push(MetricViolation::NonzeroDiagonal { i, value: d[i][i] });
                    }
                    for j in 0..n {
                        if !(d[i][j] >= 0.0) {
                            violations.push(MetricViolation::NegativeDistance {
                                i,
                                j,
                                value: d[i][j],
                            });
                        }
                        if j > i {
                            if d[i][j] != d[j][i] {
                                violations.push(MetricViolation::Asymmetry {
                                    i,
                                    j,
                                    forward: d[i][j],
                                    backward: d[j][i],
                                });
                            }
                            if d[i][j] == 0.0 {
                                violations.push(MetricViolation::Indiscernible { i, j });
                            }
                        }
                    }
                }
                for i in 0..n {
                    for k in 0..n {
                        for j in 0..n {
                            let excess = d[i][j] - (d[i][k] + d[k][j]);
                            if excess > 0.0 {
                                violations.push(MetricViolation::Triangle { i, k, j, excess });
                            }
                        }
                    }
                }
                MetricReport { size: n, kind: "finite-matrix".into(), violations }
            }
            MetricSpace::Points { coords, p } => {
                if let NormExponent::Finite(p) = p {
                    if !(*p >= 1.0) || !p.is_finite() {
                        violations.push(MetricViolation::Shape {
                            detail: format!("norm exponent must satisfy p >= 1, got {p}"),
                        });
                    }
                }
                let dim = coords.first().map(Vector::dim).unwrap_or(0);
                for (i, c) in coords.iter().enumerate() {
                    if c.validate().is_err() || c.dim() != dim {
                        violations.push(MetricViolation::Shape {
                            detail: format!("coordinate {i} malformed or of mixed dimension"),
                        });
                    }
                }
                for i in 0..n {
                    for j in i + 1..n {
                        if self.dist_unchecked(i, j) == 0.0 {
                            violations.push(MetricViolation::Indiscernible { i, j });
                        }
                    }
                }
                MetricReport { size: n, kind: "points".into(), violations }
            }
        }
    }
}
