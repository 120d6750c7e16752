//! Exact rational arithmetic helpers.
//!
//! Every finite f64 is a dyadic rational, so float inputs convert losslessly
//! to `BigRational`. Membership signs, kernel computations and the
//! closed-form gauge for linear scalings are evaluated here without rounding,
//! which is what makes tolerance-zero cones deterministic and scale-invariant.

use num::{BigRational, Signed, Zero};

use crate::vector::Vector;

pub fn to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input required for exact arithmetic")
}

pub fn vec_to_rational(v: &Vector) -> Vec<BigRational> {
    v.entries().iter().map(|&e| to_rational(e)).collect()
}

/// Exact sign of <normal, v>: -1, 0 or +1.
///
/// A float evaluation with a forward error bound decides all but
/// near-degenerate cases; those fall through to rational arithmetic.
pub fn dot_sign(normal: &Vector, v: &Vector) -> i8 {
    let mut sum = 0.0f64;
    let mut magnitude = 0.0f64;
    for (n, x) in normal.entries().iter().zip(v.entries()) {
        let p = n * x;
        sum += p;
        magnitude += p.abs();
    }
    if magnitude == 0.0 {
        return 0;
    }
    // Product and summation rounding stays below dim * eps * magnitude;
    // 1e-13 over-covers any dimension this library handles.
    let bound = 1e-13 * magnitude;
    if sum > bound {
        return 1;
    }
    if sum < -bound {
        return -1;
    }
    dot_sign_exact(normal, v)
}

fn dot_sign_exact(normal: &Vector, v: &Vector) -> i8 {
    let mut acc = BigRational::zero();
    for (n, x) in normal.entries().iter().zip(v.entries()) {
        if *n != 0.0 && *x != 0.0 {
            acc += to_rational(*n) * to_rational(*x);
        }
    }
    if acc.is_positive() {
        1
    } else if acc.is_negative() {
        -1
    } else {
        0
    }
}

/// Basis of the null space of the row matrix `rows`, by fraction-free
/// Gauss-Jordan elimination. Returned vectors are exact kernel members
/// rounded to f64 (the rounding cannot move a vector out of the kernel
/// for the blunt-witness use because witnesses are re-checked by the caller).
pub fn kernel_basis(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(vec_to_rational).collect();
    let nrows = m.len();
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0usize;
    for col in 0..dim {
        let pivot = (row..nrows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in 0..dim {
            m[row][c] = &m[row][c] / &inv;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..dim {
                    let delta = &factor * &m[row][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }

    let pivot_cols: Vec<usize> = pivot_col_of_row;
    let is_pivot = |c: usize| pivot_cols.contains(&c);
    let mut basis = Vec::new();
    for free in (0..dim).filter(|&c| !is_pivot(c)) {
        let mut v = vec![BigRational::zero(); dim];
        v[free] = BigRational::from_integer(1.into());
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(Vector::new(
            v.iter().map(rational_to_f64).collect(),
        ));
    }
    basis
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a gauge evaluation: used where closed forms exist.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactGauge {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

impl ExactGauge {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactGauge::NegInfinity => f64::NEG_INFINITY,
            ExactGauge::Finite(r) => rational_to_f64(r),
            ExactGauge::PosInfinity => f64::INFINITY,
        }
    }
}

/// sup { s >= 0 : s * k <= y componentwise }, exact, for the nonnegative
/// orthant. NegInfinity when y has a negative entry.
pub fn linear_orthant_gauge(k: &Vector, y: &Vector) -> ExactGauge {
    if y.entries().iter().any(|&e| e < 0.0) {
        return ExactGauge::NegInfinity;
    }
    let mut best: Option<BigRational> = None;
    for (&ki, &yi) in k.entries().iter().zip(y.entries()) {
        if ki > 0.0 {
            let ratio = to_rational(yi) / to_rational(ki);
            best = Some(match best {
                Some(b) if b <= ratio => b,
                _ => ratio,
            });
        }
    }
    match best {
        Some(b) => ExactGauge::Finite(b),
        None => ExactGauge::PosInfinity,
    }
}

/// sup { s >= 0 : y - s * k in lex }, exact, assuming k is itself a lex
/// member (guaranteed by scaling validation). The feasible set is an
/// interval from 0, so the sup is determined at the first coordinate where
/// either y or k is nonzero.
pub fn linear_lex_gauge(k: &Vector, y: &Vector) -> ExactGauge {
    let dim = y.dim();
    let lead = (0..dim).find(|&j| y[j] != 0.0 || k[j] != 0.0);
    let Some(j) = lead else {
        // y = k = 0: the zero vector stays in the cone for every s.
        return ExactGauge::PosInfinity;
    };
    if k[j] == 0.0 {
        return if y[j] > 0.0 {
            ExactGauge::PosInfinity
        } else {
            ExactGauge::NegInfinity
        };
    }
    // k in lex and k[i] = 0 for i < j force k[j] > 0.
    if y[j] > 0.0 {
        ExactGauge::Finite(to_rational(y[j]) / to_rational(k[j]))
    } else if y[j] < 0.0 {
        ExactGauge::NegInfinity
    } else {
        // y[j] = 0: only s = 0 can remain feasible; it is iff y is in lex,
        // decided by the tail beyond j.
        match (j + 1..dim).find(|&i| y[i] != 0.0) {
            Some(i) if y[i] < 0.0 => ExactGauge::NegInfinity,
            _ => ExactGauge::Finite(BigRational::zero()),
        }
    }
}

/// sup { s >= 0 : <n_r, y - s*k> >= 0 for all r }, exact, assuming
/// <n_r, k> >= 0 for all r (k is a member of the halfspace cone).
pub fn linear_halfspace_gauge(normals: &[Vector], k: &Vector, y: &Vector) -> ExactGauge {
    let mut best: Option<BigRational> = None;
    for n in normals {
        let ny_sign = dot_sign(n, y);
        if ny_sign < 0 {
            return ExactGauge::NegInfinity;
        }
        if dot_sign(n, k) > 0 {
            let mut ny = num::BigRational::zero();
            let mut nk = num::BigRational::zero();
            for ((&a, &b), &c) in n.entries().iter().zip(y.entries()).zip(k.entries()) {
                let an = to_rational(a);
                ny += &an * to_rational(b);
                nk += an * to_rational(c);
            }
            let ratio = ny / nk;
            best = Some(match best {
                Some(b) if b <= ratio => b,
                _ => ratio,
            });
        }
    }
    match best {
        Some(b) => ExactGauge::Finite(b),
        None => ExactGauge::PosInfinity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_sign_is_exact_near_cancellation() {
        let n = Vector::new(vec![1.0, 1.0, -1.0]);
        // Exact cancellation of dyadics is seen as exactly zero, at any
        // scale.
        let zero = Vector::new(vec![0.5, 0.25, 0.75]);
        assert_eq!(dot_sign(&n, &zero), 0);
        assert_eq!(dot_sign(&n, &zero.scale(3.0)), 0);
        // The dyadics behind 0.1 + 0.2 sum slightly under the rounded
        // float 0.30000000000000004; the exact sign is negative and stays
        // negative under positive scaling.
        let v = Vector::new(vec![0.1, 0.2, 0.30000000000000004]);
        assert_eq!(dot_sign(&n, &v), -1);
        assert_eq!(dot_sign(&n, &v.scale(2.0)), -1);
        assert_eq!(dot_sign(&n, &v.scale(0.125)), -1);
    }

    #[test]
    fn kernel_of_single_normal() {
        let rows = vec![Vector::new(vec![1.0, 0.0])];
        let basis = kernel_basis(&rows, 2);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].entries(), &[0.0, 1.0]);
    }

    #[test]
    fn kernel_of_full_rank_is_empty() {
        let rows = vec![
            Vector::new(vec![1.0, 0.0]),
            Vector::new(vec![1.0, 1.0]),
        ];
        assert!(kernel_basis(&rows, 2).is_empty());
    }

    #[test]
    fn lex_gauge_cases() {
        let k = Vector::new(vec![0.0, 1.0]);
        // y along the scaling direction: sup at y1 / k1.
        assert_eq!(
            linear_lex_gauge(&k, &Vector::new(vec![0.0, 7.0])),
            ExactGauge::Finite(to_rational(7.0))
        );
        // First coordinate positive: feasible for every s.
        assert_eq!(
            linear_lex_gauge(&k, &Vector::new(vec![1.0, 0.0])),
            ExactGauge::PosInfinity
        );
        // Outside the cone.
        assert_eq!(
            linear_lex_gauge(&k, &Vector::new(vec![-1.0, 0.0])),
            ExactGauge::NegInfinity
        );
        assert_eq!(
            linear_lex_gauge(&k, &Vector::new(vec![0.0, -2.0])),
            ExactGauge::NegInfinity
        );
    }

    #[test]
    fn orthant_gauge_matches_hand_values() {
        let k = Vector::new(vec![1.0, 2.0]);
        assert_eq!(
            linear_orthant_gauge(&k, &Vector::new(vec![3.0, 10.0])),
            ExactGauge::Finite(to_rational(3.0))
        );
        assert_eq!(
            linear_orthant_gauge(&k, &Vector::new(vec![-1.0, 5.0])),
            ExactGauge::NegInfinity
        );
    }
}
